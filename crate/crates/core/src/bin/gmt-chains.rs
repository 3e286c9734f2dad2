//! Command-line front end: reads chain documents, runs one operation and
//! writes the result document. Failures are reported as an error document
//! on standard output with exit code 2 (unreadable input) or 3 (violated
//! precondition); `verify` exits 1 when a suite finds a counterexample.

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value as Json};

use gmt_chains::chain::constancy::{coherent_orientation, constancy_solve, ConstancyOutcome};
use gmt_chains::chain::cut::cut;
use gmt_chains::chain::homotopy::homotopy_fill;
use gmt_chains::chain::product::product;
use gmt_chains::chain::push::{push_forward, PushTarget};
use gmt_chains::chain::{AffineMap, GChain};
use gmt_chains::flatnorm::{flat_norm, integral_flat_norm, FlatNormProblem};
use gmt_chains::group::presentation::{check_mono_condition, tensor_mod_d, Invariants, Presentation};
use gmt_chains::group::smith::smith_normal_form;
use gmt_chains::io::{self, ChainDocument, ErrorDoc, FlatDoc, ManifoldDoc, MassDoc};
use gmt_chains::rational::{parse_q, Q};
use gmt_chains::{verify, Error, Result};

#[derive(Parser)]
#[command(name = "gmt-chains", version, about = "Exact simplicial G-chains")]
struct Cli {
    /// Write the result document here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Boundary ∂S.
    Boundary { chain: PathBuf },
    /// Push-forward f#S under an affine map.
    Push {
        chain: PathBuf,
        #[command(flatten)]
        map: MapArgs,
    },
    /// Slice ⟨S, f, y⟩ along a regular level of an affine function.
    Slice {
        chain: PathBuf,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Both halves S⌊{f > y}, S⌊{f < y} and the slice, on the refined complex.
    Cut {
        chain: PathBuf,
        #[command(flatten)]
        level: LevelArgs,
    },
    /// Cartesian product S × T; S must have integer coefficients.
    Product { left: PathBuf, right: PathBuf },
    /// Keeps the cells whose vertices all lie in the given set.
    Restrict {
        chain: PathBuf,
        /// Comma-separated vertex indices.
        #[arg(long)]
        vertices: String,
    },
    /// Mass with per-cell Gram determinants and a certified enclosure.
    Mass { chain: PathBuf },
    /// Flat norm with an optimal decomposition S = Q + ∂R.
    Flatnorm {
        chain: PathBuf,
        /// Integer fills only (brute force, small complexes).
        #[arg(long)]
        integral: bool,
    },
    /// Reduction of an integer chain mod d.
    ReduceMod {
        chain: PathBuf,
        #[arg(long)]
        d: u64,
    },
    /// Recovers the constant coefficient of a chain on an oriented manifold.
    Constancy {
        chain: PathBuf,
        /// Manifold document listing the top cells.
        #[arg(long)]
        manifold: PathBuf,
    },
    /// Chains of the homotopy formula for the straight-line homotopy from f toward g on [0, t].
    Homotopy {
        chain: PathBuf,
        /// Affine map document for f.
        #[arg(long)]
        f: PathBuf,
        /// Affine map document for g.
        #[arg(long)]
        g: PathBuf,
        #[arg(long, default_value = "1")]
        t: String,
    },
    /// Runs a seeded property suite.
    Verify {
        suite: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        cases: Option<usize>,
        /// Lists the suites instead.
        #[arg(long)]
        list: bool,
    },
    /// Smith normal form of an integer matrix given as JSON rows.
    Snf {
        #[arg(long)]
        matrix: String,
    },
    /// Invariants of A/dA, or univalence of f_d for a homomorphism document.
    TensorCheck {
        /// Invariant factors of A, comma-separated.
        #[arg(long, conflicts_with = "hom")]
        orders: Option<String>,
        /// Group homomorphism document B → A.
        #[arg(long)]
        hom: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        d: u64,
        /// With --hom, checks every d up to this bound instead.
        #[arg(long)]
        d_max: Option<u64>,
    },
}

#[derive(Args)]
struct MapArgs {
    /// Affine map document.
    #[arg(long, conflicts_with_all = ["matrix", "translation"])]
    map: Option<PathBuf>,
    /// Matrix rows, e.g. "1,0;0,1;1,1".
    #[arg(long)]
    matrix: Option<String>,
    /// Translation, e.g. "0,0,1"; defaults to zero.
    #[arg(long)]
    translation: Option<String>,
}

#[derive(Args)]
struct LevelArgs {
    /// Gradient of the affine function, e.g. "1,0".
    #[arg(long)]
    f: String,
    /// Constant term of the affine function.
    #[arg(long, default_value = "0")]
    c: String,
    #[arg(long)]
    y: String,
}

enum Output {
    Doc(Json),
    /// A report whose verdict sets the exit code.
    Verdict(Json, bool),
}

fn read_text(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn read_chain(path: &Path) -> Result<GChain> {
    io::parse_chain(&read_text(path)?)
}

fn read_map(path: &Path) -> Result<AffineMap> {
    io::from_json::<io::AffineMapDoc>(&read_text(path)?)?.to_map()
}

fn to_json<T: serde::Serialize>(doc: &T) -> Result<Json> {
    serde_json::to_value(doc).map_err(|e| Error::Parse(e.to_string()))
}

fn chain_doc(s: &GChain) -> Result<Json> {
    to_json(&ChainDocument::from_chain(s)?)
}

fn invariants_json(inv: &Invariants) -> Json {
    json!({
        "free_rank": inv.free_rank,
        "torsion": inv.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "group": inv.to_string(),
    })
}

fn q_arg(s: &str) -> Result<Q> {
    parse_q(s.trim())
}

fn row_arg(s: &str) -> Result<Vec<Q>> {
    s.split(',').map(q_arg).collect()
}

impl MapArgs {
    fn resolve(&self) -> Result<AffineMap> {
        if let Some(path) = &self.map {
            return read_map(path);
        }
        let rows = io::parse_rows(self.matrix.as_deref().ok_or_else(|| Error::Parse("need --map or --matrix".into()))?)?;
        let t = match &self.translation {
            Some(t) => row_arg(t)?,
            None => vec![Q::from_integer(0.into()); rows.len()],
        };
        AffineMap::new(rows, t)
    }
}

impl LevelArgs {
    fn resolve(&self) -> Result<(AffineMap, Q)> {
        Ok((AffineMap::functional(row_arg(&self.f)?, q_arg(&self.c)?)?, q_arg(&self.y)?))
    }
}

fn run(command: Command) -> Result<Output> {
    let doc = match command {
        Command::Boundary { chain } => chain_doc(&read_chain(&chain)?.boundary()?)?,
        Command::Push { chain, map } => {
            let s = read_chain(&chain)?;
            chain_doc(&push_forward(&s, &map.resolve()?, PushTarget::Auto)?)?
        }
        Command::Slice { chain, level } => {
            let s = read_chain(&chain)?;
            let (f, y) = level.resolve()?;
            chain_doc(&gmt_chains::chain::cut::slice(&s, &f, &y)?)?
        }
        Command::Cut { chain, level } => {
            let s = read_chain(&chain)?;
            let (f, y) = level.resolve()?;
            let r = cut(&s, &f, &y)?;
            json!({
                "schema": io::CUT_SCHEMA,
                "upper": chain_doc(&r.upper)?,
                "lower": chain_doc(&r.lower)?,
                "slice": r.slice.as_ref().map(chain_doc).transpose()?,
            })
        }
        Command::Product { left, right } => chain_doc(&product(&read_chain(&left)?, &read_chain(&right)?)?)?,
        Command::Restrict { chain, vertices } => {
            let keep: Vec<usize> = vertices
                .split(',')
                .map(|v| v.trim().parse().map_err(|_| Error::Parse(format!("bad vertex index {v:?}"))))
                .collect::<Result<_>>()?;
            let s = read_chain(&chain)?;
            chain_doc(&s.restrict(|cell| cell.iter().all(|v| keep.contains(v))))?
        }
        Command::Mass { chain } => to_json(&MassDoc::new(read_chain(&chain)?.mass()))?,
        Command::Flatnorm { chain, integral } => {
            let s = read_chain(&chain)?;
            let d = if integral {
                integral_flat_norm(&s)?
            } else {
                flat_norm(&FlatNormProblem::new(s))?
            };
            to_json(&FlatDoc::new(&d)?)?
        }
        Command::ReduceMod { chain, d } => chain_doc(&read_chain(&chain)?.mod_d_reduce(d)?)?,
        Command::Constancy { chain, manifold } => {
            let t = read_chain(&chain)?;
            let m: ManifoldDoc = io::from_json(&read_text(&manifold)?)?;
            m.check()?;
            let orientation = match m.orientation {
                Some(o) => o,
                None => coherent_orientation(t.complex(), &m.cells)?,
            };
            match constancy_solve(&t, &m.cells, &orientation)? {
                ConstancyOutcome::Constant(g) => json!({
                    "schema": io::CONSTANCY_SCHEMA,
                    "constant": true,
                    "coefficient": io::value_to_json(&g.value),
                    "orientation": orientation,
                }),
                ConstancyOutcome::Inconsistent { face } => json!({
                    "schema": io::CONSTANCY_SCHEMA,
                    "constant": false,
                    "witness_face": face,
                    "orientation": orientation,
                }),
            }
        }
        Command::Homotopy { chain, f, g, t } => {
            let s = read_chain(&chain)?;
            let h = homotopy_fill(&read_map(&f)?, &read_map(&g)?, &s, &q_arg(&t)?)?;
            json!({
                "schema": io::HOMOTOPY_SCHEMA,
                "fill": chain_doc(&h.fill)?,
                "bottom": chain_doc(&h.bottom)?,
                "top": chain_doc(&h.top)?,
                "side": h.side.as_ref().map(chain_doc).transpose()?,
                "identity_holds": h.identity_holds()?,
            })
        }
        Command::Verify { suite, seed, cases, list } => {
            if list {
                let names: Vec<Json> = verify::suites()
                    .iter()
                    .map(|s| json!({"name": s.name, "default_cases": s.default_cases, "about": s.about}))
                    .collect();
                return Ok(Output::Doc(Json::Array(names)));
            }
            let name = suite.ok_or_else(|| Error::Parse("missing suite name (try --list)".into()))?;
            let report = verify::run_suite(&name, seed, cases, verify::worker_count())?;
            return Ok(Output::Verdict(to_json(&report)?, report.ok()));
        }
        Command::Snf { matrix } => {
            let j: Json = serde_json::from_str(&matrix).map_err(|e| Error::Parse(e.to_string()))?;
            let m = io::parse_int_matrix(&j)?;
            let (r, c) = (m.len(), m.first().map_or(0, |row| row.len()));
            let d = smith_normal_form(&m, r, c);
            json!({
                "schema": io::SNF_SCHEMA,
                "u": io::int_matrix_to_json(&d.u),
                "d": io::int_matrix_to_json(&d.d),
                "v": io::int_matrix_to_json(&d.v),
                "diagonal": d.diagonal().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "rank": d.rank(),
                "verified": d.verify(&m),
            })
        }
        Command::TensorCheck { orders, hom, d, d_max } => match (orders, hom) {
            (Some(orders), None) => {
                let ts: Vec<i64> = orders
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse().map_err(|_| Error::Parse(format!("bad order {s:?}"))))
                    .collect::<Result<_>>()?;
                let inv = tensor_mod_d(&Presentation::diagonal(&ts), d).invariants();
                json!({"schema": io::TENSOR_SCHEMA, "d": d, "group": inv.to_string(), "invariants": invariants_json(&inv)})
            }
            (None, Some(path)) => {
                let f = io::from_json::<io::HomDoc>(&read_text(&path)?)?.to_hom()?;
                let verdicts = match d_max {
                    Some(m) => check_mono_condition(&f, m),
                    None => check_mono_condition(&f, d).into_iter().filter(|v| v.d == d).collect(),
                };
                let univalent = verdicts.iter().all(|v| v.univalent);
                let verdicts: Vec<Json> = verdicts
                    .iter()
                    .map(|v| json!({"d": v.d, "univalent": v.univalent, "kernel": invariants_json(&v.kernel)}))
                    .collect();
                json!({"schema": io::TENSOR_SCHEMA, "univalent": univalent, "verdicts": verdicts})
            }
            _ => return Err(Error::Parse("need exactly one of --orders and --hom".into())),
        },
    };
    Ok(Output::Doc(doc))
}

fn emit(out: Option<&Path>, doc: &Json) -> Result<()> {
    let text = io::to_pretty(doc)?;
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Suites drop degenerate images on purpose; only errors are worth showing.
    let level = if matches!(cli.command, Command::Verify { .. }) { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let out = cli.out.as_deref();
    let result = run(cli.command).and_then(|o| match o {
        Output::Doc(doc) => emit(out, &doc).map(|_| ExitCode::SUCCESS),
        Output::Verdict(doc, ok) => emit(out, &doc).map(|_| if ok { ExitCode::SUCCESS } else { ExitCode::from(1) }),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let doc = ErrorDoc::new(&e);
            print!("{}", io::to_pretty(&doc).unwrap_or_default());
            ExitCode::from(io::exit_code(&e) as u8)
        }
    }
}
