//! Exact exterior algebra over rational n-space.
//!
//! Multivectors and covectors are sparse maps from strictly increasing index
//! tuples (0-based internally, printed 1-based) to rationals, with zero
//! coefficients never stored.
//!
//! Interior multiplication is the adjoint of left exterior multiplication:
//! `⟨ξ ⌊ φ, ψ⟩ = ⟨ξ, φ ∧ ψ⟩`. On basis elements
//! `e_I ⌊ e^K = ε · e_{I∖K}` where `e_I = ε · e_K ∧ e_{I∖K}`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, row_reduce, Point, Q};

type Blade = Vec<usize>;

/// Sign of the shuffle placing `a` before `b` into sorted order, or `None`
/// when they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<bool> {
    let mut inversions = 0usize;
    for x in a {
        for y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    Some(inversions % 2 == 1)
}

fn merged(a: &[usize], b: &[usize]) -> Blade {
    let mut v: Blade = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

fn insert(terms: &mut BTreeMap<Blade, Q>, key: Blade, c: Q) {
    if c.is_zero() {
        return;
    }
    match terms.get_mut(&key) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                terms.remove(&key);
            }
        }
        None => {
            terms.insert(key, c);
        }
    }
}

/// All strictly increasing `k`-subsets of `0..n` in lexicographic order.
pub fn index_tuples(n: usize, k: usize) -> Vec<Blade> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Blade, out: &mut Vec<Blade>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// An element of `⋀_m Q^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiVector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Q>,
}

/// An element of `⋀^κ Q^n` (dual basis `e^I`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CoVector {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, Q>,
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &BTreeMap<Blade, Q>, sym: &str, up: bool) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|(k, c)| {
            let idx: String = k.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join("");
            let basis = if k.is_empty() {
                "1".to_string()
            } else if up {
                format!("{sym}^{idx}")
            } else {
                format!("{sym}{idx}")
            };
            format!("{}*{basis}", fmt_q(c))
        })
        .collect();
    write!(f, "{}", parts.join(" + "))
}

impl fmt::Display for MultiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, "e", false)
    }
}

impl fmt::Display for CoVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, &self.terms, "e", true)
    }
}

impl MultiVector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        MultiVector {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 multivector `c`.
    pub fn scalar(dim: usize, c: Q) -> Self {
        let mut terms = BTreeMap::new();
        insert(&mut terms, Vec::new(), c);
        MultiVector { dim, degree: 0, terms }
    }

    /// `e_{i₁} ∧ … ∧ e_{i_k}` for 0-based indices in any order.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        if indices.iter().any(|&i| i >= dim) {
            return Err(Error::DimensionMismatch(format!("index out of range for dimension {dim}")));
        }
        let mut out = MultiVector::scalar(dim, Q::one());
        for &i in indices {
            out = out.wedge(&MultiVector::vector(&unit(dim, i)))?;
        }
        Ok(out)
    }

    pub fn vector(coords: &[Q]) -> Self {
        let mut terms = BTreeMap::new();
        for (i, c) in coords.iter().enumerate() {
            insert(&mut terms, vec![i], c.clone());
        }
        MultiVector {
            dim: coords.len(),
            degree: 1,
            terms,
        }
    }

    /// Builds from explicit `(indices, coefficient)` terms.
    pub fn from_terms(dim: usize, degree: usize, terms: impl IntoIterator<Item = (Vec<usize>, Q)>) -> Result<Self> {
        let mut out = MultiVector::zero(dim, degree);
        for (idx, c) in terms {
            if idx.len() != degree {
                return Err(Error::DegreeError(format!("term {idx:?} in degree {degree}")));
            }
            let mut sorted = idx.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != idx.len() {
                continue;
            }
            let b = MultiVector::basis(dim, &idx)?;
            out = out.add(&b.scale(&c))?;
        }
        Ok(out)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Q)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, indices: &[usize]) -> Q {
        self.terms.get(indices).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient vector in the lexicographic basis of `⋀_m Q^n`.
    pub fn coordinates(&self) -> Vec<Q> {
        index_tuples(self.dim, self.degree)
            .iter()
            .map(|k| self.coefficient(k))
            .collect()
    }

    fn same_shape(&self, other: &MultiVector) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        if self.degree != other.degree {
            return Err(Error::DegreeError(format!("{} vs {}", self.degree, other.degree)));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiVector) -> Result<MultiVector> {
        self.same_shape(other)?;
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            insert(&mut terms, k.clone(), c.clone());
        }
        Ok(MultiVector { terms, ..*self })
    }

    pub fn sub(&self, other: &MultiVector) -> Result<MultiVector> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiVector {
        self.scale(&-Q::one())
    }

    pub fn scale(&self, c: &Q) -> MultiVector {
        if c.is_zero() {
            return MultiVector::zero(self.dim, self.degree);
        }
        MultiVector {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
            ..*self
        }
    }

    pub fn wedge(&self, other: &MultiVector) -> Result<MultiVector> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, other.dim)));
        }
        let degree = self.degree + other.degree;
        let mut terms = BTreeMap::new();
        if degree <= self.dim {
            for (a, x) in &self.terms {
                for (b, y) in &other.terms {
                    if let Some(neg) = merge_sign(a, b) {
                        let c = x * y;
                        insert(&mut terms, merged(a, b), if neg { -c } else { c });
                    }
                }
            }
        }
        Ok(MultiVector {
            dim: self.dim,
            degree,
            terms,
        })
    }

    /// Euclidean pairing of coefficient vectors.
    pub fn dot(&self, other: &MultiVector) -> Result<Q> {
        self.same_shape(other)?;
        Ok(self
            .terms
            .iter()
            .filter_map(|(k, x)| other.terms.get(k).map(|y| x * y))
            .fold(Q::zero(), |acc, t| acc + t))
    }

    pub fn norm_sq(&self) -> Q {
        self.terms.values().fold(Q::zero(), |acc, c| acc + c * c)
    }

    /// Interior multiplication `self ⌊ w`.
    pub fn interior(&self, w: &CoVector) -> Result<MultiVector> {
        if self.dim != w.dim {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.dim, w.dim)));
        }
        if w.degree > self.degree {
            return Err(Error::DegreeError(format!(
                "cannot contract degree {} by degree {}",
                self.degree, w.degree
            )));
        }
        let mut terms = BTreeMap::new();
        for (i, x) in &self.terms {
            for (k, y) in &w.terms {
                if !k.iter().all(|j| i.contains(j)) {
                    continue;
                }
                let rest: Blade = i.iter().copied().filter(|j| !k.contains(j)).collect();
                let neg = merge_sign(k, &rest).expect("disjoint by construction");
                let c = x * y;
                insert(&mut terms, rest, if neg { -c } else { c });
            }
        }
        Ok(MultiVector {
            dim: self.dim,
            degree: self.degree - w.degree,
            terms,
        })
    }

    /// `self = c · other` for a rational `c`, if the two are proportional.
    pub fn ratio_to(&self, other: &MultiVector) -> Option<Q> {
        if self.dim != other.dim || self.degree != other.degree || other.is_zero() {
            return None;
        }
        let (k, y) = other.terms.iter().next()?;
        let c = self.coefficient(k) / y;
        (other.scale(&c) == *self).then_some(c)
    }

    /// Decides simplicity: a nonzero `ζ` of degree `m` is simple iff the
    /// space `{v : v ∧ ζ = 0}` has dimension `m`.
    pub fn is_simple(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        if self.degree <= 1 || self.degree + 1 >= self.dim {
            return true;
        }
        // Matrix of v ↦ v ∧ ζ, columns indexed by basis vectors e_i.
        let targets = index_tuples(self.dim, self.degree + 1);
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); self.dim]; targets.len()];
        for i in 0..self.dim {
            let w = MultiVector::vector(&unit(self.dim, i))
                .wedge(self)
                .expect("same dimension");
            for (r, t) in targets.iter().enumerate() {
                rows[r][i] = w.coefficient(t);
            }
        }
        let rank = row_reduce(&mut rows).len();
        self.dim - rank == self.degree
    }

    /// Basis of the plane of a nonzero simple multivector.
    pub fn plane_basis(&self) -> Vec<Point> {
        let targets = index_tuples(self.dim, self.degree + 1);
        let mut rows: Vec<Vec<Q>> = vec![vec![Q::zero(); self.dim]; targets.len()];
        for i in 0..self.dim {
            let w = MultiVector::vector(&unit(self.dim, i))
                .wedge(self)
                .expect("same dimension");
            for (r, t) in targets.iter().enumerate() {
                rows[r][i] = w.coefficient(t);
            }
        }
        nullspace(rows, self.dim)
    }
}

fn nullspace(mut rows: Vec<Vec<Q>>, cols: usize) -> Vec<Point> {
    let pivots = row_reduce(&mut rows);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -rows[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn unit(dim: usize, i: usize) -> Point {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

impl CoVector {
    pub fn zero(dim: usize, degree: usize) -> Self {
        CoVector {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The degree-0 covector `1`.
    pub fn one(dim: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Vec::new(), Q::one());
        CoVector { dim, degree: 0, terms }
    }

    pub fn functional(coords: &[Q]) -> Self {
        let mv = MultiVector::vector(coords);
        CoVector {
            dim: mv.dim,
            degree: 1,
            terms: mv.terms,
        }
    }

    /// `e^{i₁} ∧ … ∧ e^{i_k}`.
    pub fn basis(dim: usize, indices: &[usize]) -> Result<Self> {
        let mv = MultiVector::basis(dim, indices)?;
        Ok(CoVector {
            dim,
            degree: mv.degree,
            terms: mv.terms,
        })
    }

    /// `f₁ ∧ … ∧ f_κ` for functionals given as rows.
    pub fn wedge_rows(dim: usize, rows: &[Point]) -> Result<Self> {
        let mut acc = MultiVector::scalar(dim, Q::one());
        for r in rows {
            if r.len() != dim {
                return Err(Error::DimensionMismatch(format!("functional of length {} in dimension {dim}", r.len())));
            }
            acc = acc.wedge(&MultiVector::vector(r))?;
        }
        Ok(CoVector {
            dim,
            degree: acc.degree,
            terms: acc.terms,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Q) -> CoVector {
        if c.is_zero() {
            return CoVector::zero(self.dim, self.degree);
        }
        CoVector {
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
            ..*self
        }
    }

    /// Evaluation `⟨ξ, φ⟩` on a multivector of the same degree.
    pub fn eval(&self, xi: &MultiVector) -> Result<Q> {
        if xi.degree != self.degree || xi.dim != self.dim {
            return Err(Error::DegreeError(format!("pairing degree {} with {}", self.degree, xi.degree)));
        }
        Ok(self
            .terms
            .iter()
            .filter_map(|(k, x)| xi.terms.get(k).map(|y| x * y))
            .fold(Q::zero(), |acc, t| acc + t))
    }

    pub fn wedge(&self, other: &CoVector) -> Result<CoVector> {
        let a = MultiVector {
            dim: self.dim,
            degree: self.degree,
            terms: self.terms.clone(),
        };
        let b = MultiVector {
            dim: other.dim,
            degree: other.degree,
            terms: other.terms.clone(),
        };
        let w = a.wedge(&b)?;
        Ok(CoVector {
            dim: w.dim,
            degree: w.degree,
            terms: w.terms,
        })
    }
}

/// A linear map `Q^source → Q^target` as a `target × source` matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearMap {
    source: usize,
    target: usize,
    matrix: Vec<Vec<Q>>,
}

impl LinearMap {
    pub fn new(source: usize, target: usize, matrix: Vec<Vec<Q>>) -> Result<Self> {
        if matrix.len() != target || matrix.iter().any(|r| r.len() != source) {
            return Err(Error::DimensionMismatch(format!("matrix must be {target}x{source}")));
        }
        Ok(LinearMap { source, target, matrix })
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            source: n,
            target: n,
            matrix: (0..n).map(|i| unit(n, i)).collect(),
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn matrix(&self) -> &[Vec<Q>] {
        &self.matrix
    }

    pub fn apply(&self, x: &[Q]) -> Point {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(x).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearMap) -> Result<LinearMap> {
        if inner.target != self.source {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}→{} after {}→{}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        let matrix = (0..self.target)
            .map(|i| {
                (0..inner.source)
                    .map(|j| {
                        (0..self.source).fold(Q::zero(), |acc, k| acc + &self.matrix[i][k] * &inner.matrix[k][j])
                    })
                    .collect()
            })
            .collect();
        Ok(LinearMap {
            source: inner.source,
            target: self.target,
            matrix,
        })
    }

    fn column(&self, j: usize) -> Point {
        self.matrix.iter().map(|r| r[j].clone()).collect()
    }

    /// `⋀_m L` applied to `a`.
    pub fn push(&self, a: &MultiVector) -> Result<MultiVector> {
        if a.dim != self.source {
            return Err(Error::DimensionMismatch(format!(
                "multivector in dimension {} pushed by a map from dimension {}",
                a.dim, self.source
            )));
        }
        let mut out = MultiVector::zero(self.target, a.degree);
        for (idx, c) in &a.terms {
            let mut img = MultiVector::scalar(self.target, c.clone());
            for &i in idx {
                img = img.wedge(&MultiVector::vector(&self.column(i)))?;
                if img.is_zero() {
                    break;
                }
            }
            if img.degree == a.degree {
                out = out.add(&img)?;
            }
        }
        Ok(out)
    }

    /// Pull-back of a covector: `φ ∘ ⋀L`.
    pub fn pull(&self, w: &CoVector) -> Result<CoVector> {
        if w.dim != self.target {
            return Err(Error::DimensionMismatch(format!("covector in dimension {} pulled by map into {}", w.dim, self.target)));
        }
        let t = LinearMap {
            source: self.target,
            target: self.source,
            matrix: (0..self.source).map(|j| self.column(j)).collect(),
        };
        let as_mv = MultiVector {
            dim: w.dim,
            degree: w.degree,
            terms: w.terms.clone(),
        };
        let p = t.push(&as_mv)?;
        Ok(CoVector {
            dim: p.dim,
            degree: p.degree,
            terms: p.terms,
        })
    }
}

/// `(v₁ − v₀) ∧ … ∧ (v_m − v₀)`; the scalar `1` for a single point.
pub fn span_vector(vertices: &[Point]) -> Result<MultiVector> {
    let Some(v0) = vertices.first() else {
        return Err(Error::DegreeError("span of an empty vertex list".into()));
    };
    let n = v0.len();
    let mut acc = MultiVector::scalar(n, Q::one());
    for v in &vertices[1..] {
        if v.len() != n {
            return Err(Error::DimensionMismatch("vertices of different dimensions".into()));
        }
        let e: Point = v.iter().zip(v0).map(|(a, b)| a - b).collect();
        acc = acc.wedge(&MultiVector::vector(&e))?;
    }
    Ok(acc)
}

/// Sign of a nonzero rational as `±1`.
pub fn sign_of(x: &Q) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};

    fn e(n: usize, idx: &[usize]) -> MultiVector {
        MultiVector::basis(n, idx).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let e1 = e(2, &[0]);
        let e2 = e(2, &[1]);
        assert_eq!(e1.wedge(&e2).unwrap(), e(2, &[0, 1]));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        let a = e1.add(&e2).unwrap();
        let b = e1.sub(&e2).unwrap();
        assert_eq!(a.wedge(&b).unwrap(), e(2, &[0, 1]).scale(&qi(-2)));
        assert!(matches!(e1.wedge(&e(3, &[0])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn push_examples() {
        let v = e(2, &[0, 1]);
        assert_eq!(LinearMap::identity(2).push(&v).unwrap(), v);
        let d = LinearMap::new(2, 2, vec![vec![qi(2), qi(0)], vec![qi(0), qi(3)]]).unwrap();
        assert_eq!(d.push(&v).unwrap(), v.scale(&qi(6)));
        let p = LinearMap::new(2, 1, vec![vec![qi(1), qi(0)]]).unwrap();
        assert!(p.push(&v).unwrap().is_zero());
    }

    #[test]
    fn interior_examples() {
        let e12 = e(2, &[0, 1]);
        let r = e12.interior(&CoVector::basis(2, &[0]).unwrap()).unwrap();
        assert_eq!(r, e(2, &[1]));
        let r = e12.interior(&CoVector::basis(2, &[1]).unwrap()).unwrap();
        assert_eq!(r, e(2, &[0]).neg());
        assert_eq!(e12.interior(&CoVector::one(2)).unwrap(), e12);
        let e123 = e(3, &[0, 1, 2]);
        let r = e123.interior(&CoVector::basis(3, &[0, 1]).unwrap()).unwrap();
        assert_eq!(r, e(3, &[2]));
        assert!(matches!(
            e(3, &[0]).interior(&CoVector::basis(3, &[0, 1]).unwrap()),
            Err(Error::DegreeError(_))
        ));
    }

    #[test]
    fn dot_examples() {
        let e12 = e(3, &[0, 1]);
        let e13 = e(3, &[0, 2]);
        assert_eq!(e12.dot(&e12).unwrap(), qi(1));
        assert_eq!(e12.dot(&e13).unwrap(), qi(0));
        let a = e12.scale(&qi(2)).add(&e13).unwrap();
        let b = e12.sub(&e13).unwrap();
        assert_eq!(a.dot(&b).unwrap(), qi(1));
    }

    #[test]
    fn span_examples() {
        let t = span_vector(&[vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]]).unwrap();
        assert_eq!(t, e(2, &[0, 1]));
        let c = span_vector(&[vec![qi(0), qi(0)], vec![qi(1), qi(1)], vec![qi(2), qi(2)]]).unwrap();
        assert!(c.is_zero());
        let s = span_vector(&[
            vec![qi(0), qi(0), qi(0)],
            vec![qi(1), qi(0), qi(0)],
            vec![qi(1), qi(1), qi(0)],
        ])
        .unwrap();
        assert_eq!(s, e(3, &[0, 1]));
        assert_eq!(span_vector(&[vec![q(1, 2)]]).unwrap(), MultiVector::scalar(1, qi(1)));
    }

    #[test]
    fn simplicity() {
        let s = e(4, &[0, 1]).add(&e(4, &[2, 3])).unwrap();
        assert!(!s.is_simple());
        assert!(e(4, &[0, 1]).add(&e(4, &[0, 2])).unwrap().is_simple());
        let t = e(5, &[0, 1, 2]).add(&e(5, &[2, 3, 4])).unwrap();
        assert!(!t.is_simple());
        let u = e(5, &[0, 1, 2]).add(&e(5, &[0, 1, 3])).unwrap();
        assert!(u.is_simple());
        assert_eq!(u.plane_basis().len(), 3);
    }
}
