//! JSON documents for groups, complexes, chains, maps and results.
//!
//! Rationals and integers travel as strings (`"3"`, `"-1/2"`) so that
//! values round-trip exactly; floats appear only in mass and flat-norm
//! values, rounded to 12 significant digits. Every top-level document
//! carries a `schema` tag matching a file under `schemas/`.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use crate::chain::{AffineMap, GChain, MassReport};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::flatnorm::FlatDecomposition;
use crate::group::presentation::{GroupHom, Presentation};
use crate::group::smith::IntMatrix;
use crate::group::{NormedGroup, Value};
use crate::rational::{fmt_q, parse_q, Point};

pub const CHAIN_SCHEMA: &str = "gmt-chains/chain/v1";
pub const MAP_SCHEMA: &str = "gmt-chains/affine-map/v1";
pub const MASS_SCHEMA: &str = "gmt-chains/mass/v1";
pub const FLAT_SCHEMA: &str = "gmt-chains/flatnorm/v1";
pub const ERROR_SCHEMA: &str = "gmt-chains/error/v1";
pub const MANIFOLD_SCHEMA: &str = "gmt-chains/manifold/v1";
pub const HOM_SCHEMA: &str = "gmt-chains/group-hom/v1";
pub const CUT_SCHEMA: &str = "gmt-chains/cut/v1";
pub const CONSTANCY_SCHEMA: &str = "gmt-chains/constancy/v1";
pub const HOMOTOPY_SCHEMA: &str = "gmt-chains/homotopy/v1";
pub const SNF_SCHEMA: &str = "gmt-chains/snf/v1";
pub const TENSOR_SCHEMA: &str = "gmt-chains/tensor-check/v1";

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// Rounds to 12 significant digits.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupDoc {
    Integers,
    Cyclic { d: u64 },
    Rationals,
    DirectSum { parts: Vec<GroupDoc> },
    QuotientLattice { rank: usize, generators: Vec<Vec<i64>> },
}

impl GroupDoc {
    pub fn from_group(g: &NormedGroup) -> Result<GroupDoc> {
        Ok(match g {
            NormedGroup::Integers => GroupDoc::Integers,
            NormedGroup::Cyclic(d) => GroupDoc::Cyclic {
                d: d.to_u64().ok_or_else(|| parse_err("cyclic order exceeds u64"))?,
            },
            NormedGroup::Rationals => GroupDoc::Rationals,
            NormedGroup::DirectSum(parts) => GroupDoc::DirectSum {
                parts: parts.iter().map(GroupDoc::from_group).collect::<Result<_>>()?,
            },
            NormedGroup::QuotientLattice(l) => GroupDoc::QuotientLattice {
                rank: l.rank,
                generators: l
                    .generators
                    .iter()
                    .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| parse_err("generator exceeds i64"))).collect())
                    .collect::<Result<_>>()?,
            },
        })
    }

    pub fn to_group(&self) -> Result<NormedGroup> {
        Ok(match self {
            GroupDoc::Integers => NormedGroup::Integers,
            GroupDoc::Cyclic { d } => NormedGroup::cyclic(*d)?,
            GroupDoc::Rationals => NormedGroup::Rationals,
            GroupDoc::DirectSum { parts } => {
                NormedGroup::direct_sum(parts.iter().map(GroupDoc::to_group).collect::<Result<_>>()?)
            }
            GroupDoc::QuotientLattice { rank, generators } => NormedGroup::quotient_lattice(
                *rank,
                generators.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            )?,
        })
    }
}

/// Parses a group descriptor such as `Z`, `Z/6`, `Q` or `Z+Z/2`.
pub fn parse_group_spec(s: &str) -> Result<NormedGroup> {
    let parts: Vec<&str> = s.split('+').map(str::trim).collect();
    let one = |p: &str| -> Result<NormedGroup> {
        match p {
            "Z" => Ok(NormedGroup::Integers),
            "Q" | "R" => Ok(NormedGroup::Rationals),
            _ => match p.strip_prefix("Z/") {
                Some(d) => NormedGroup::cyclic(d.parse().map_err(parse_err)?),
                None => Err(Error::Parse(format!("unknown group {p:?}"))),
            },
        }
    };
    if parts.len() == 1 {
        one(parts[0])
    } else {
        Ok(NormedGroup::direct_sum(parts.into_iter().map(one).collect::<Result<_>>()?))
    }
}

fn int_from_json(j: &Json) -> Result<BigInt> {
    match j {
        Json::String(s) => BigInt::from_str(s.trim()).map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        Json::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        other => Err(Error::Parse(format!("expected an integer, got {other}"))),
    }
}

fn int_to_json(k: &BigInt) -> Json {
    Json::String(k.to_string())
}

/// Parses a coefficient in the shape dictated by the group.
pub fn value_from_json(group: &NormedGroup, j: &Json) -> Result<Value> {
    let raw = match group {
        NormedGroup::Integers | NormedGroup::Cyclic(_) => Value::Int(int_from_json(j)?),
        NormedGroup::Rationals => match j {
            Json::String(s) => Value::Rat(parse_q(s)?),
            Json::Number(_) => Value::Int(int_from_json(j)?),
            other => return Err(Error::Parse(format!("expected a rational, got {other}"))),
        },
        NormedGroup::DirectSum(parts) => {
            let Json::Array(items) = j else {
                return Err(Error::Parse(format!("expected {} components", parts.len())));
            };
            if items.len() != parts.len() {
                return Err(Error::Parse(format!("expected {} components, got {}", parts.len(), items.len())));
            }
            Value::Tuple(parts.iter().zip(items).map(|(g, v)| value_from_json(g, v)).collect::<Result<_>>()?)
        }
        NormedGroup::QuotientLattice(_) => {
            let Json::Array(items) = j else {
                return Err(Error::Parse("expected an integer vector".into()));
            };
            Value::Vector(items.iter().map(int_from_json).collect::<Result<_>>()?)
        }
    };
    group.canonicalize(raw)
}

pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Int(k) => int_to_json(k),
        Value::Rat(x) => Json::String(fmt_q(x)),
        Value::Tuple(parts) => Json::Array(parts.iter().map(value_to_json).collect()),
        Value::Vector(xs) => Json::Array(xs.iter().map(int_to_json).collect()),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<String>>,
    /// Maximal cells; faces are implied.
    pub cells: Vec<Vec<usize>>,
}

impl ComplexDoc {
    pub fn from_complex(k: &SimplicialComplex) -> ComplexDoc {
        ComplexDoc {
            ambient_dim: k.ambient_dim(),
            vertices: k.vertices().iter().map(|p| p.iter().map(fmt_q).collect()).collect(),
            cells: k.maximal_cells(),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        let vertices: Vec<Point> = self
            .vertices
            .iter()
            .map(|p| p.iter().map(|s| parse_q(s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        if vertices.iter().any(|p| p.len() != self.ambient_dim) {
            return Err(Error::Parse(format!("vertices must have {} coordinates", self.ambient_dim)));
        }
        if vertices.is_empty() {
            return Ok(SimplicialComplex::empty(self.ambient_dim));
        }
        SimplicialComplex::new(vertices, self.cells.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub cell: Vec<usize>,
    pub coefficient: Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDocument {
    pub schema: String,
    pub group: GroupDoc,
    pub complex: ComplexDoc,
    pub dim: usize,
    pub terms: Vec<TermDoc>,
}

fn check_schema(found: &str, expected: &str) -> Result<()> {
    if found != expected {
        return Err(Error::Parse(format!("schema {found:?}, expected {expected:?}")));
    }
    Ok(())
}

impl ChainDocument {
    pub fn from_chain(s: &GChain) -> Result<ChainDocument> {
        Ok(ChainDocument {
            schema: CHAIN_SCHEMA.into(),
            group: GroupDoc::from_group(s.group())?,
            complex: ComplexDoc::from_complex(s.complex()),
            dim: s.dim(),
            terms: s
                .terms()
                .map(|(c, v)| TermDoc {
                    cell: c.clone(),
                    coefficient: value_to_json(v),
                })
                .collect(),
        })
    }

    pub fn to_chain(&self) -> Result<GChain> {
        check_schema(&self.schema, CHAIN_SCHEMA)?;
        let group = self.group.to_group()?;
        let complex = Arc::new(self.complex.to_complex()?);
        let mut s = GChain::zero(complex, self.dim, group.clone());
        for t in &self.terms {
            s.add_term(&t.cell, value_from_json(&group, &t.coefficient)?)?;
        }
        Ok(s)
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty<T: Serialize>(doc: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(doc).map_err(parse_err)?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_err)
}

pub fn parse_chain(text: &str) -> Result<GChain> {
    from_json::<ChainDocument>(text)?.to_chain()
}

pub fn print_chain(s: &GChain) -> Result<String> {
    to_pretty(&ChainDocument::from_chain(s)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AffineMapDoc {
    pub schema: String,
    /// Row-major, one row per target coordinate.
    pub matrix: Vec<Vec<String>>,
    pub translation: Vec<String>,
}

impl AffineMapDoc {
    pub fn from_map(f: &AffineMap) -> AffineMapDoc {
        AffineMapDoc {
            schema: MAP_SCHEMA.into(),
            matrix: f.linear().matrix().iter().map(|r| r.iter().map(fmt_q).collect()).collect(),
            translation: f.translation().iter().map(fmt_q).collect(),
        }
    }

    pub fn to_map(&self) -> Result<AffineMap> {
        check_schema(&self.schema, MAP_SCHEMA)?;
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|s| parse_q(s)).collect::<Result<_>>())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let translation = self.translation.iter().map(|s| parse_q(s)).collect::<Result<_>>()?;
        AffineMap::new(matrix, translation)
    }
}

/// Parses `"a,b;c,d"` as rows of rationals.
pub fn parse_rows(s: &str) -> Result<Vec<Vec<crate::rational::Q>>> {
    s.split(';')
        .map(|row| row.split(',').map(|x| parse_q(x.trim())).collect())
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct MassDoc {
    pub schema: String,
    #[serde(flatten)]
    pub report: MassReport,
}

impl MassDoc {
    pub fn new(mut report: MassReport) -> MassDoc {
        report.mass = sig12(report.mass);
        MassDoc {
            schema: MASS_SCHEMA.into(),
            report,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlatDoc {
    pub schema: String,
    #[serde(rename = "Q")]
    pub q: ChainDocument,
    #[serde(rename = "R")]
    pub r: ChainDocument,
    pub value: f64,
    pub iterations: usize,
    pub exact_fallback: bool,
}

impl FlatDoc {
    pub fn new(d: &FlatDecomposition) -> Result<FlatDoc> {
        Ok(FlatDoc {
            schema: FLAT_SCHEMA.into(),
            q: ChainDocument::from_chain(&d.q)?,
            r: ChainDocument::from_chain(&d.r)?,
            value: sig12(d.value),
            iterations: d.iterations,
            exact_fallback: d.exact_fallback,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub schema: String,
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorDoc {
    pub fn new(e: &Error) -> ErrorDoc {
        ErrorDoc {
            schema: ERROR_SCHEMA.into(),
            error: e.kind().into(),
            message: e.to_string(),
            exit_code: exit_code(e),
        }
    }
}

/// 2 for unreadable input, 3 for violated preconditions.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) => 2,
        _ => 3,
    }
}

/// Oriented top cells of a manifold for the constancy solver.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldDoc {
    pub schema: String,
    pub cells: Vec<Vec<usize>>,
    /// `±1` per cell, relative to the listed vertex order; omitted means
    /// "orient coherently from the first cell".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,
}

impl ManifoldDoc {
    pub fn check(&self) -> Result<()> {
        check_schema(&self.schema, MANIFOLD_SCHEMA)?;
        if let Some(o) = &self.orientation {
            if o.len() != self.cells.len() || o.iter().any(|s| s.abs() != 1) {
                return Err(Error::Parse("orientation needs one ±1 per cell".into()));
            }
        }
        Ok(())
    }
}

/// Integer matrices as arrays of integers or integer strings.
pub fn parse_int_matrix(j: &Json) -> Result<IntMatrix> {
    let Json::Array(rows) = j else {
        return Err(Error::Parse("expected an array of rows".into()));
    };
    let m: IntMatrix = rows
        .iter()
        .map(|r| match r {
            Json::Array(xs) => xs.iter().map(int_from_json).collect(),
            other => Err(Error::Parse(format!("expected a row, got {other}"))),
        })
        .collect::<Result<_>>()?;
    if let Some(first) = m.first() {
        if m.iter().any(|r| r.len() != first.len()) {
            return Err(Error::Parse("ragged matrix".into()));
        }
    }
    Ok(m)
}

pub fn int_matrix_to_json(m: &IntMatrix) -> Json {
    Json::Array(m.iter().map(|r| Json::Array(r.iter().map(int_to_json).collect())).collect())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub generators: usize,
    pub relations: Json,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub schema: String,
    pub source: PresentationDoc,
    pub target: PresentationDoc,
    /// `target.generators` rows by `source.generators` columns.
    pub matrix: Json,
}

impl HomDoc {
    pub fn to_hom(&self) -> Result<GroupHom> {
        check_schema(&self.schema, HOM_SCHEMA)?;
        let p = |d: &PresentationDoc| Presentation::new(d.generators, parse_int_matrix(&d.relations)?);
        GroupHom::new(p(&self.source)?, p(&self.target)?, parse_int_matrix(&self.matrix)?)
    }
}
