//! Dense two-phase simplex method with Bland's rule.
//!
//! Solves `min c·x` subject to `A x = b`, `x ≥ 0`. The solver is generic
//! over the scalar field so the same code runs in floating point (with an
//! absolute tolerance) and in exact rationals.

use std::fmt::Debug;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{row_reduce, Q};

pub trait LpScalar: Clone + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn less(&self, o: &Self) -> bool;

    fn is_nonzero(&self) -> bool {
        self.is_pos() || self.is_neg()
    }
}

/// Absolute tolerance of the floating instance.
pub const F64_TOL: f64 = 1e-9;

impl LpScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        *self > F64_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -F64_TOL
    }
    fn less(&self, o: &Self) -> bool {
        *self < *o - F64_TOL
    }
}

impl LpScalar for Q {
    fn zero() -> Self {
        <Q as Zero>::zero()
    }
    fn one() -> Self {
        <Q as num_traits::One>::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn is_pos(&self) -> bool {
        self.is_positive()
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
    fn less(&self, o: &Self) -> bool {
        self < o
    }
}

#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    pub a: Vec<Vec<T>>,
    pub b: Vec<T>,
    pub c: Vec<T>,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    /// Basic column per surviving row.
    pub basis: Vec<usize>,
    /// Dual values `y` with `Aᵀy ≤ c` at optimality.
    pub duals: Vec<T>,
    pub iterations: usize,
}

struct Tableau<T> {
    rows: Vec<Vec<T>>,
    rhs: Vec<T>,
    obj: Vec<T>,
    obj_val: T,
    basis: Vec<usize>,
    iterations: usize,
    max_iterations: usize,
}

impl<T: LpScalar> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.div(&p);
        }
        self.rhs[r] = self.rhs[r].div(&p);
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][c].clone();
            if !f.is_nonzero() {
                self.rows[i][c] = T::zero();
                continue;
            }
            for (x, y) in self.rows[i].iter_mut().zip(&prow) {
                *x = x.sub(&f.mul(y));
            }
            self.rows[i][c] = T::zero();
            self.rhs[i] = self.rhs[i].sub(&f.mul(&prhs));
        }
        let f = self.obj[c].clone();
        if f.is_nonzero() {
            for (x, y) in self.obj.iter_mut().zip(&prow) {
                *x = x.sub(&f.mul(y));
            }
            self.obj_val = self.obj_val.sub(&f.mul(&prhs));
        }
        self.obj[c] = T::zero();
        self.basis[r] = c;
    }

    /// Runs Bland's rule over columns `< allowed`.
    fn optimize(&mut self, allowed: usize) -> Result<()> {
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.obj[j].is_neg()) else {
                return Ok(());
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][enter].is_pos() {
                    continue;
                }
                let ratio = self.rhs[i].div(&self.rows[i][enter]);
                leave = match leave {
                    None => Some((i, ratio)),
                    Some((k, best)) => {
                        if ratio.less(&best) || (!best.less(&ratio) && self.basis[i] < self.basis[k]) {
                            Some((i, ratio))
                        } else {
                            Some((k, best))
                        }
                    }
                };
            }
            let Some((r, _)) = leave else {
                return Err(Error::Infeasible);
            };
            self.iterations += 1;
            if self.iterations > self.max_iterations {
                return Err(Error::SolverStall(self.iterations));
            }
            self.pivot(r, enter);
        }
    }
}

/// Minimizes `c·x` over `{A x = b, x ≥ 0}`. Unboundedness is reported as
/// `Infeasible` since every program built here is bounded below.
pub fn solve<T: LpScalar>(lp: &LinearProgram<T>, max_iterations: usize) -> Result<LpSolution<T>> {
    let m = lp.b.len();
    let n = lp.c.len();
    if lp.a.len() != m || lp.a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("constraint matrix shape".into()));
    }
    let mut row_sign = vec![T::one(); m];
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for i in 0..m {
        let flip = lp.b[i].is_neg();
        let mut r: Vec<T> = lp.a[i]
            .iter()
            .map(|x| if flip { T::zero().sub(x) } else { x.clone() })
            .collect();
        for k in 0..m {
            r.push(if k == i { T::one() } else { T::zero() });
        }
        rows.push(r);
        rhs.push(if flip { T::zero().sub(&lp.b[i]) } else { lp.b[i].clone() });
        if flip {
            row_sign[i] = T::zero().sub(&T::one());
        }
    }
    // Phase one: minimize the sum of artificials.
    let mut obj = vec![T::zero(); n + m];
    let mut obj_val = T::zero();
    for i in 0..m {
        for j in 0..n {
            obj[j] = obj[j].sub(&rows[i][j]);
        }
        obj_val = obj_val.sub(&rhs[i]);
    }
    let mut t = Tableau {
        rows,
        rhs,
        obj,
        obj_val,
        basis: (n..n + m).collect(),
        iterations: 0,
        max_iterations,
    };
    t.optimize(n)?;
    if t.obj_val.is_neg() {
        return Err(Error::Infeasible);
    }
    // Drive artificials out; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            if let Some(c) = (0..n).find(|&j| t.rows[r][j].is_nonzero()) {
                t.pivot(r, c);
            } else {
                t.rows.remove(r);
                t.rhs.remove(r);
                t.basis.remove(r);
                continue;
            }
        }
        r += 1;
    }
    // Phase two.
    t.obj = lp.c.clone();
    t.obj.extend((0..m).map(|_| T::zero()));
    t.obj_val = T::zero();
    for i in 0..t.rows.len() {
        let cb = t.obj[t.basis[i]].clone();
        if cb.is_nonzero() {
            for j in 0..n + m {
                t.obj[j] = t.obj[j].sub(&cb.mul(&t.rows[i][j]));
            }
            t.obj_val = t.obj_val.sub(&cb.mul(&t.rhs[i]));
        }
        let bi = t.basis[i];
        t.obj[bi] = T::zero();
    }
    t.optimize(n)?;
    let mut x = vec![T::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        x[bcol] = t.rhs[i].clone();
    }
    let objective = x.iter().zip(&lp.c).fold(T::zero(), |acc, (a, b)| acc.add(&a.mul(b)));
    let duals = (0..m)
        .map(|i| T::zero().sub(&t.obj[n + i]).mul(&row_sign[i]))
        .collect();
    Ok(LpSolution {
        x,
        objective,
        basis: t.basis,
        duals,
        iterations: t.iterations,
    })
}

/// Exact basic solution for a given basis: solves `A_B x_B = b`.
/// `None` when the basis is singular, inconsistent or infeasible.
pub fn exact_basic_solution(a: &[Vec<Q>], b: &[Q], basis: &[usize]) -> Option<Vec<Q>> {
    let n = a.first().map_or(0, |r| r.len());
    let k = basis.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r: Vec<Q> = basis.iter().map(|&j| row[j].clone()).collect();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != k || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    let mut x = vec![<Q as Zero>::zero(); n];
    for (i, &j) in basis.iter().enumerate() {
        if aug[i][k].is_negative() {
            return None;
        }
        x[j] = aug[i][k].clone();
    }
    Some(x)
}
