//! Flat norm `min { M(Q) + M(R) : S = Q + ∂R }` over one complex.
//!
//! With `Q = Q⁺ − Q⁻` and `R = R⁺ − R⁻` split into positive parts this is
//! a linear program with one equality per `m`-cell. It is solved in
//! floating point; the optimal basis is then re-solved in exact rationals,
//! so `Q + ∂R = S` holds exactly and only the objective is floating.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::chain::GChain;
use crate::complex::{facets, SimplicialComplex};
use crate::error::{Error, Result};
use crate::group::{NormedGroup, Value};
use crate::interval::Interval;
use crate::lp::{exact_basic_solution, solve, LinearProgram};
use crate::rational::{factorial, to_f64, Q};

/// Default simplex iteration cap.
pub const MAX_ITERATIONS: usize = 100_000;
/// Largest number of `(m+1)`-cells accepted by the integral search.
pub const MAX_INTEGRAL_CELLS: usize = 12;
const MAX_INTEGRAL_CANDIDATES: u128 = 50_000_000;

#[derive(Clone, Debug)]
pub struct FlatNormProblem {
    pub chain: GChain,
    /// Per-cell weight overrides; other cells weigh their volume.
    pub weights: BTreeMap<Vec<usize>, f64>,
    pub max_iterations: usize,
}

#[derive(Clone, Debug)]
pub struct FlatDecomposition {
    pub q: GChain,
    pub r: GChain,
    /// `Σ w|Q| + Σ w|R|`.
    pub value: f64,
    pub iterations: usize,
    /// One dual value per `m`-cell; empty for the integral search.
    pub duals: Vec<(Vec<usize>, f64)>,
    /// The exact rational simplex was needed after the floating basis failed.
    pub exact_fallback: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateReport {
    pub dual_objective: f64,
    pub primal_objective: f64,
    pub max_violation: f64,
}

impl FlatNormProblem {
    pub fn new(chain: GChain) -> Self {
        FlatNormProblem {
            chain,
            weights: BTreeMap::new(),
            max_iterations: MAX_ITERATIONS,
        }
    }

    fn weight(&self, cell: &[usize]) -> f64 {
        self.weights
            .get(cell)
            .copied()
            .unwrap_or_else(|| volume(self.chain.complex(), cell))
    }
}

/// `m`-volume of a cell.
pub fn volume(k: &SimplicialComplex, cell: &[usize]) -> f64 {
    let fact = to_f64(&Q::from_integer(factorial(cell.len() - 1)));
    Interval::sqrt_q(&k.gram(cell)).mid() / fact
}

/// Rational coefficients of a chain over `Q` or `Z`.
fn rational_coefficients(s: &GChain) -> Result<BTreeMap<Vec<usize>, Q>> {
    s.terms()
        .map(|(c, v)| match v {
            Value::Rat(x) => Ok((c.clone(), x.clone())),
            Value::Int(k) if *s.group() == NormedGroup::Integers => Ok((c.clone(), Q::from_integer(k.clone()))),
            _ => Err(Error::GroupMismatch(format!("flat norm needs rational coefficients, got {}", s.group()))),
        })
        .collect()
}

struct Layout<'a> {
    mcells: &'a [Vec<usize>],
    tops: &'a [Vec<usize>],
    row: BTreeMap<&'a [usize], usize>,
}

impl<'a> Layout<'a> {
    fn new(k: &'a SimplicialComplex, m: usize) -> Self {
        let mcells = k.cells(m);
        let tops = if k.top_dim().is_some_and(|d| d > m) { k.cells(m + 1) } else { &[] };
        let row = mcells.iter().enumerate().map(|(i, c)| (c.as_slice(), i)).collect();
        Layout { mcells, tops, row }
    }

    /// Columns: `Q⁺, Q⁻` per `m`-cell, then `R⁺, R⁻` per `(m+1)`-cell.
    fn matrix(&self) -> Vec<Vec<Q>> {
        let (nm, nt) = (self.mcells.len(), self.tops.len());
        let mut a = vec![vec![Q::zero(); 2 * nm + 2 * nt]; nm];
        for i in 0..nm {
            a[i][i] = Q::from_integer(1.into());
            a[i][nm + i] = Q::from_integer((-1).into());
        }
        for (j, t) in self.tops.iter().enumerate() {
            for (f, s) in facets(t) {
                let i = self.row[f.as_slice()];
                a[i][2 * nm + j] = Q::from_integer(s.into());
                a[i][2 * nm + nt + j] = Q::from_integer((-s).into());
            }
        }
        a
    }
}

/// Optimal decomposition `S = Q + ∂R` for rational (or integral, relaxed)
/// coefficients.
pub fn flat_norm(problem: &FlatNormProblem) -> Result<FlatDecomposition> {
    let s = &problem.chain;
    // NaN weights are rejected too.
    if problem.weights.values().any(|w| w.is_nan() || *w <= 0.0) {
        return Err(Error::InvalidValue("cell weights must be positive".into()));
    }
    let coeffs = rational_coefficients(s)?;
    let k = s.complex();
    let m = s.dim();
    let layout = Layout::new(k, m);
    let (nm, nt) = (layout.mcells.len(), layout.tops.len());
    let a = layout.matrix();
    let b: Vec<Q> = layout
        .mcells
        .iter()
        .map(|c| coeffs.get(c).cloned().unwrap_or_else(Q::zero))
        .collect();
    let wm: Vec<f64> = layout.mcells.iter().map(|c| problem.weight(c)).collect();
    let wt: Vec<f64> = layout.tops.iter().map(|c| problem.weight(c)).collect();
    let c: Vec<f64> = wm.iter().chain(&wm).chain(&wt).chain(&wt).copied().collect();

    let float_lp = LinearProgram {
        a: a.iter().map(|r| r.iter().map(to_f64).collect()).collect(),
        b: b.iter().map(to_f64).collect(),
        c: c.clone(),
    };
    let sol = solve(&float_lp, problem.max_iterations)?;
    let (x, iterations, exact_fallback) = match exact_basic_solution(&a, &b, &sol.basis) {
        Some(x) => (x, sol.iterations, false),
        None => {
            log::warn!("floating basis is not exactly feasible; re-solving in rationals");
            let exact_lp = LinearProgram {
                a: a.clone(),
                b: b.clone(),
                c: c.iter().map(|w| Q::from_float(*w).ok_or_else(|| Error::InvalidValue(format!("weight {w}")))).collect::<Result<_>>()?,
            };
            let e = solve(&exact_lp, problem.max_iterations)?;
            (e.x, sol.iterations + e.iterations, true)
        }
    };

    let group = NormedGroup::Rationals;
    let mut q = GChain::zero(k.clone(), m, group.clone());
    for (i, cell) in layout.mcells.iter().enumerate() {
        q.add_term(cell, Value::Rat(&x[i] - &x[nm + i]))?;
    }
    let mut r = GChain::zero(k.clone(), m + 1, group);
    for (j, cell) in layout.tops.iter().enumerate() {
        r.add_term(cell, Value::Rat(&x[2 * nm + j] - &x[2 * nm + nt + j]))?;
    }
    let value = weighted_mass(&q, problem) + weighted_mass(&r, problem);
    let duals = layout.mcells.iter().cloned().zip(sol.duals).collect();
    Ok(FlatDecomposition {
        q,
        r,
        value,
        iterations,
        duals,
        exact_fallback,
    })
}

fn weighted_mass(s: &GChain, problem: &FlatNormProblem) -> f64 {
    s.terms()
        .map(|(c, v)| to_f64(&s.group().norm(v)) * problem.weight(c))
        .sum()
}

/// `flat_norm(S − T)`.
pub fn flat_distance(s: &GChain, t: &GChain) -> Result<f64> {
    Ok(flat_norm(&FlatNormProblem::new(s.sub(t)?))?.value)
}

impl FlatDecomposition {
    /// `Q + ∂R` equals `S` as exact chains.
    pub fn reproduces(&self, s: &GChain) -> Result<bool> {
        let target = match s.group() {
            NormedGroup::Integers if *self.q.group() == NormedGroup::Rationals => {
                let terms = rational_coefficients(s)?;
                GChain::from_terms(
                    s.complex().clone(),
                    s.dim(),
                    NormedGroup::Rationals,
                    terms.into_iter().map(|(c, x)| (c, Value::Rat(x))),
                )?
            }
            _ => s.clone(),
        };
        let sum = if self.r.dim() >= 1 { self.q.add(&self.r.boundary()?)? } else { self.q.clone() };
        Ok(sum == target)
    }

    /// Dual feasibility `|y_c| ≤ w_c`, `|∂ᵀy|_R ≤ w_R` and the duality gap.
    pub fn certificate(&self, problem: &FlatNormProblem) -> Result<CertificateReport> {
        let coeffs = rational_coefficients(&problem.chain)?;
        let y: BTreeMap<&Vec<usize>, f64> = self.duals.iter().map(|(c, v)| (c, *v)).collect();
        let mut violation: f64 = 0.0;
        let mut dual_objective = 0.0;
        for (c, v) in &self.duals {
            violation = violation.max(v.abs() - problem.weight(c));
            dual_objective += v * coeffs.get(c).map_or(0.0, to_f64);
        }
        let k = problem.chain.complex();
        let m = problem.chain.dim();
        if k.top_dim().is_some_and(|d| d > m) {
            for t in k.cells(m + 1) {
                let s: f64 = facets(t).iter().map(|(f, sg)| f64::from(*sg) * y.get(f).copied().unwrap_or(0.0)).sum();
                violation = violation.max(s.abs() - problem.weight(t));
            }
        }
        Ok(CertificateReport {
            dual_objective,
            primal_objective: self.value,
            max_violation: violation.max(0.0),
        })
    }
}

/// Integral flat norm by enumerating integer fills `R` with
/// `w_R·|R_c| ≤ M(S)`, which bounds every optimal fill.
pub fn integral_flat_norm(s: &GChain) -> Result<FlatDecomposition> {
    if *s.group() != NormedGroup::Integers {
        return Err(Error::GroupMismatch(format!("integral flat norm needs Z coefficients, got {}", s.group())));
    }
    let problem = FlatNormProblem::new(s.clone());
    let k: &Arc<SimplicialComplex> = s.complex();
    let m = s.dim();
    let layout = Layout::new(k, m);
    let nt = layout.tops.len();
    if nt > MAX_INTEGRAL_CELLS {
        return Err(Error::TooManyCells {
            got: nt,
            max: MAX_INTEGRAL_CELLS,
        });
    }
    let mass = weighted_mass(s, &problem);
    let bounds: Vec<i64> = layout
        .tops
        .iter()
        .map(|t| (mass / problem.weight(t) + 1e-9).floor().to_i64().unwrap_or(i64::MAX))
        .collect();
    let candidates = bounds.iter().fold(1u128, |acc, b| acc.saturating_mul(2 * (*b as u128) + 1));
    if candidates > MAX_INTEGRAL_CANDIDATES {
        return Err(Error::SolverStall(candidates.min(usize::MAX as u128) as usize));
    }
    let base: Vec<i64> = layout
        .mcells
        .iter()
        .map(|c| match s.coefficient(c) {
            Value::Int(v) => v.to_i64().ok_or_else(|| Error::InvalidValue(format!("coefficient {v} too large"))),
            _ => unreachable!("integral chain"),
        })
        .collect::<Result<_>>()?;
    let wm: Vec<f64> = layout.mcells.iter().map(|c| problem.weight(c)).collect();
    let wt: Vec<f64> = layout.tops.iter().map(|c| problem.weight(c)).collect();
    let incidence: Vec<Vec<(usize, i64)>> = layout
        .tops
        .iter()
        .map(|t| facets(t).into_iter().map(|(f, sg)| (layout.row[f.as_slice()], i64::from(sg))).collect())
        .collect();

    let mut r = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    let mut best: Option<(f64, Vec<i64>)> = None;
    let mut count = 0usize;
    loop {
        count += 1;
        let mut qv = base.clone();
        let mut value = 0.0;
        for (j, &rj) in r.iter().enumerate() {
            if rj != 0 {
                value += wt[j] * rj.abs() as f64;
                for &(i, sg) in &incidence[j] {
                    qv[i] -= sg * rj;
                }
            }
        }
        value += qv.iter().zip(&wm).map(|(x, w)| x.abs() as f64 * w).sum::<f64>();
        if best.as_ref().is_none_or(|(v, _)| value < *v - 1e-12) {
            best = Some((value, r.clone()));
        }
        // Odometer step.
        let mut j = 0;
        while j < nt && r[j] == bounds[j] {
            r[j] = -bounds[j];
            j += 1;
        }
        if j == nt {
            break;
        }
        r[j] += 1;
    }
    let (value, rbest) = best.expect("at least the zero fill");
    let mut rc = GChain::zero(k.clone(), m + 1, NormedGroup::Integers);
    for (j, cell) in layout.tops.iter().enumerate() {
        rc.add_term(cell, Value::Int(BigInt::from(rbest[j])))?;
    }
    let q = if nt > 0 { s.sub(&rc.boundary()?)? } else { s.clone() };
    Ok(FlatDecomposition {
        q,
        r: rc,
        value,
        iterations: count,
        duals: Vec::new(),
        exact_fallback: false,
    })
}

/// Minimum over the vertices of the breakpoint arrangement of the convex
/// piecewise-linear objective, for complexes with at most three
/// `(m+1)`-cells. Independent of the simplex code.
pub fn enumerate_flat_norm(s: &GChain) -> Result<f64> {
    let problem = FlatNormProblem::new(s.clone());
    let coeffs = rational_coefficients(s)?;
    let k = s.complex();
    let layout = Layout::new(k, s.dim());
    let nt = layout.tops.len();
    if nt > 3 {
        return Err(Error::TooManyCells { got: nt, max: 3 });
    }
    // Hyperplanes in R-space: R_j = 0, and (S − ∂R)_c = 0 for each m-cell.
    let mut planes: Vec<(Vec<Q>, Q)> = (0..nt)
        .map(|j| {
            let mut a = vec![Q::zero(); nt];
            a[j] = Q::from_integer(1.into());
            (a, Q::zero())
        })
        .collect();
    let mut dr: Vec<Vec<Q>> = vec![vec![Q::zero(); nt]; layout.mcells.len()];
    for (j, t) in layout.tops.iter().enumerate() {
        for (f, sg) in facets(t) {
            dr[layout.row[f.as_slice()]][j] = Q::from_integer(sg.into());
        }
    }
    for (i, c) in layout.mcells.iter().enumerate() {
        if dr[i].iter().any(|x| !x.is_zero()) {
            planes.push((dr[i].clone(), coeffs.get(c).cloned().unwrap_or_else(Q::zero)));
        }
    }
    let objective = |r: &[Q]| -> f64 {
        let mut v = 0.0;
        for (j, t) in layout.tops.iter().enumerate() {
            v += to_f64(&r[j].abs()) * problem.weight(t);
        }
        for (i, c) in layout.mcells.iter().enumerate() {
            let mut qc = coeffs.get(c).cloned().unwrap_or_else(Q::zero);
            for j in 0..nt {
                qc -= &dr[i][j] * &r[j];
            }
            v += to_f64(&qc.abs()) * problem.weight(c);
        }
        v
    };
    let mut best = objective(&vec![Q::zero(); nt]);
    for subset in subsets(planes.len(), nt) {
        let a: Vec<Vec<Q>> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<Q> = subset.iter().map(|&i| planes[i].1.clone()).collect();
        if crate::rational::rank(&a) < nt {
            continue;
        }
        if let Some(r) = crate::rational::solve(&a, &b) {
            best = best.min(objective(&r));
        }
    }
    Ok(best)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn rat(x: Q) -> Value {
        Value::Rat(x)
    }

    fn square_loop() -> GChain {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]));
        let mut s = GChain::zero(k.clone(), 2, NormedGroup::Rationals);
        s.add_term(&[0, 2, 3], rat(qi(1))).unwrap();
        s.add_term(&[0, 3, 1], rat(qi(1))).unwrap();
        s.boundary().unwrap()
    }

    #[test]
    fn unit_square_boundary() {
        let s = square_loop();
        let p = FlatNormProblem::new(s.clone());
        let d = flat_norm(&p).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        assert!(d.q.is_zero());
        assert_eq!(d.r.len(), 2);
        assert!(d.reproduces(&s).unwrap());
        let cert = d.certificate(&p).unwrap();
        assert!(cert.max_violation < 1e-9);
        assert!((cert.dual_objective - d.value).abs() < 1e-9);
        assert!((enumerate_flat_norm(&s).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lone_segment_and_zero() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![qi(0)], vec![qi(1)]], vec![vec![0, 1]]).unwrap());
        let s = GChain::from_terms(k.clone(), 1, NormedGroup::Rationals, vec![(vec![0, 1], rat(q(3, 2)))]).unwrap();
        let d = flat_norm(&FlatNormProblem::new(s.clone())).unwrap();
        assert!((d.value - 1.5).abs() < 1e-12);
        assert!(d.r.is_zero());
        let z = GChain::zero(k, 1, NormedGroup::Rationals);
        let d = flat_norm(&FlatNormProblem::new(z)).unwrap();
        assert_eq!(d.value, 0.0);
        assert!(d.q.is_zero() && d.r.is_zero());
    }

    #[test]
    fn band_distance() {
        // Bottom and top edges of a 1 × 1/4 rectangle, both oriented left to right.
        let k = Arc::new(
            SimplicialComplex::new(
                vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), q(1, 4)], vec![qi(1), q(1, 4)]],
                vec![vec![0, 1, 3], vec![0, 2, 3]],
            )
            .unwrap(),
        );
        let bottom = GChain::from_terms(k.clone(), 1, NormedGroup::Rationals, vec![(vec![0, 1], rat(qi(1)))]).unwrap();
        let top = GChain::from_terms(k, 1, NormedGroup::Rationals, vec![(vec![2, 3], rat(qi(1)))]).unwrap();
        let d = flat_distance(&bottom, &top).unwrap();
        // Fill area 1/4 plus the two vertical sides 1/2.
        assert!((d - 0.75).abs() < 1e-9);
        assert!((enumerate_flat_norm(&bottom.sub(&top).unwrap()).unwrap() - 0.75).abs() < 1e-9);
        assert_eq!(flat_distance(&bottom, &bottom).unwrap(), 0.0);
    }

    #[test]
    fn integral_matches_relaxation_on_square() {
        let s = square_loop();
        let z = GChain::from_terms(
            s.complex().clone(),
            1,
            NormedGroup::Integers,
            s.terms().map(|(c, v)| {
                let Value::Rat(x) = v else { unreachable!() };
                (c.clone(), Value::Int(x.to_integer()))
            }),
        )
        .unwrap();
        let d = integral_flat_norm(&z).unwrap();
        assert!((d.value - 1.0).abs() < 1e-9);
        assert!(d.reproduces(&z).unwrap());
        let relaxed = flat_norm(&FlatNormProblem::new(z)).unwrap();
        assert!((relaxed.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn integral_refuses_large_complexes() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[4, 4]));
        let z = GChain::zero(k, 1, NormedGroup::Integers);
        assert!(matches!(integral_flat_norm(&z), Err(Error::TooManyCells { got: 32, max: 12 })));
    }
}
