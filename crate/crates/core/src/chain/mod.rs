//! Simplicial chains with coefficients in a normed commutative group.
//!
//! A chain stores, per sorted cell, the coefficient relative to the
//! orientation of the sorted vertex order. A term given on a permuted
//! vertex tuple is folded in with the permutation sign, so `(−σ, g)` and
//! `(σ, −g)` are the same term.

mod affine;
pub mod constancy;
pub mod cut;
pub mod homotopy;
pub mod product;
pub mod push;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

pub use affine::AffineMap;

use crate::bundle::BundleElement;
use crate::complex::{facets, permutation_sign, SimplicialComplex};
use crate::error::{Error, Result};
use crate::group::{GroupElement, NormedGroup, Value};
use crate::interval::Interval;
use crate::rational::{fmt_q, Point, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GChain {
    complex: Arc<SimplicialComplex>,
    dim: usize,
    group: NormedGroup,
    terms: BTreeMap<Vec<usize>, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellMass {
    pub cell: Vec<usize>,
    /// Gram determinant of the edge vectors, `(m! · vol)²`.
    pub gram: String,
    pub coefficient_norm: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct MassReport {
    pub cells: Vec<CellMass>,
    pub mass: f64,
    pub interval: Interval,
}

impl GChain {
    pub fn zero(complex: Arc<SimplicialComplex>, dim: usize, group: NormedGroup) -> Self {
        GChain {
            complex,
            dim,
            group,
            terms: BTreeMap::new(),
        }
    }

    /// Sums terms given on oriented vertex tuples.
    pub fn from_terms(
        complex: Arc<SimplicialComplex>,
        dim: usize,
        group: NormedGroup,
        terms: impl IntoIterator<Item = (Vec<usize>, Value)>,
    ) -> Result<Self> {
        let mut out = GChain::zero(complex, dim, group);
        for (cell, v) in terms {
            out.add_term(&cell, v)?;
        }
        Ok(out)
    }

    /// Adds `g` on the oriented tuple `cell`.
    pub fn add_term(&mut self, cell: &[usize], v: Value) -> Result<()> {
        if cell.len() != self.dim + 1 {
            return Err(Error::DegreeError(format!("cell {cell:?} in a {}-chain", self.dim)));
        }
        let (sorted, sign) = permutation_sign(cell)
            .ok_or_else(|| Error::InvalidComplex(format!("repeated vertex in {cell:?}")))?;
        if !self.complex.contains(&sorted) {
            return Err(Error::CarrierMismatch(format!("cell {sorted:?} is not in the complex")));
        }
        let v = self.group.canonicalize(v)?;
        let v = if sign < 0 { self.group.neg(&v) } else { v };
        self.accumulate(sorted, v);
        Ok(())
    }

    fn accumulate(&mut self, sorted: Vec<usize>, v: Value) {
        if self.group.is_zero(&v) {
            return;
        }
        match self.terms.get_mut(&sorted) {
            Some(x) => {
                *x = self.group.add(x, &v);
                if self.group.is_zero(x) {
                    self.terms.remove(&sorted);
                }
            }
            None => {
                self.terms.insert(sorted, v);
            }
        }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn group(&self) -> &NormedGroup {
        &self.group
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &Value)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, cell: &[usize]) -> Value {
        self.terms.get(cell).cloned().unwrap_or_else(|| self.group.zero())
    }

    pub fn element(&self, cell: &[usize]) -> GroupElement {
        GroupElement {
            group: self.group.clone(),
            value: self.coefficient(cell),
        }
    }

    /// Bundle-valued orientation of a support cell.
    pub fn bundle_term(&self, cell: &[usize]) -> Result<BundleElement> {
        BundleElement::from_span(&self.complex.span(cell), &self.element(cell))
    }

    /// Vertices used by support cells.
    pub fn support_vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.terms.keys().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn check_compatible(&self, other: &GChain) -> Result<()> {
        if !Arc::ptr_eq(&self.complex, &other.complex) && *self.complex != *other.complex {
            return Err(Error::CarrierMismatch("chains live on different complexes".into()));
        }
        if self.dim != other.dim {
            return Err(Error::CarrierMismatch(format!("dimensions {} and {}", self.dim, other.dim)));
        }
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GChain) -> Result<GChain> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (c, v) in &other.terms {
            out.accumulate(c.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> GChain {
        GChain {
            terms: self.terms.iter().map(|(c, v)| (c.clone(), self.group.neg(v))).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &GChain) -> Result<GChain> {
        self.add(&other.neg())
    }

    pub fn mul_int(&self, k: &BigInt) -> GChain {
        let mut out = GChain::zero(self.complex.clone(), self.dim, self.group.clone());
        for (c, v) in &self.terms {
            out.accumulate(c.clone(), self.group.mul_int(v, k));
        }
        out
    }

    /// Alternating face sum.
    pub fn boundary(&self) -> Result<GChain> {
        if self.dim == 0 {
            return Err(Error::DimensionZero);
        }
        let mut out = GChain::zero(self.complex.clone(), self.dim - 1, self.group.clone());
        for (c, v) in &self.terms {
            for (f, s) in facets(c) {
                let w = if s < 0 { self.group.neg(v) } else { v.clone() };
                out.accumulate(f, w);
            }
        }
        Ok(out)
    }

    /// Keeps the cells selected by `keep`.
    pub fn restrict(&self, keep: impl Fn(&[usize]) -> bool) -> GChain {
        GChain {
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| keep(c))
                .map(|(c, v)| (c.clone(), v.clone()))
                .collect(),
            ..self.clone()
        }
    }

    /// Same chain on an equal complex held by another handle.
    pub fn rebase(&self, complex: &Arc<SimplicialComplex>) -> Result<GChain> {
        if !Arc::ptr_eq(&self.complex, complex) && *self.complex != **complex {
            return Err(Error::CarrierMismatch("complexes differ".into()));
        }
        Ok(GChain {
            complex: complex.clone(),
            ..self.clone()
        })
    }

    /// Mass `Σ |g| · vol_m`, with exact per-cell Gram data.
    pub fn mass(&self) -> MassReport {
        let fact = Q::from_integer(crate::rational::factorial(self.dim));
        let mut interval = Interval::ZERO;
        let mut cells = Vec::new();
        for (c, v) in &self.terms {
            let gram = self.complex.gram(c);
            let norm = self.group.norm(v);
            interval = interval + Interval::from_q(&(&norm / &fact)) * Interval::sqrt_q(&gram);
            cells.push(CellMass {
                cell: c.clone(),
                gram: fmt_q(&gram),
                coefficient_norm: fmt_q(&norm),
            });
        }
        MassReport {
            cells,
            mass: interval.mid(),
            interval,
        }
    }

    /// Terms keyed by vertex coordinates, lexicographically sorted, with
    /// coefficients relative to that order. Independent of the carrier's
    /// vertex numbering, so chains on different complexes can be compared.
    pub fn geometric_terms(&self) -> BTreeMap<Vec<Point>, Value> {
        let mut out = BTreeMap::new();
        for (c, v) in &self.terms {
            let pts = self.complex.points(c);
            let mut order: Vec<usize> = (0..pts.len()).collect();
            order.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
            let (_, sign) = permutation_sign(&order).expect("distinct positions");
            let key: Vec<Point> = order.iter().map(|&i| pts[i].clone()).collect();
            let w = if sign < 0 { self.group.neg(v) } else { v.clone() };
            out.insert(key, w);
        }
        out
    }

    /// Equality as formal sums of geometric simplices.
    pub fn geometric_eq(&self, other: &GChain) -> bool {
        self.dim == other.dim
            && self.group == other.group
            && self.complex.ambient_dim() == other.complex.ambient_dim()
            && self.geometric_terms() == other.geometric_terms()
    }

    /// `S · g` for an integral chain `S`.
    pub fn rho_scale(&self, g: &GroupElement) -> Result<GChain> {
        if self.group != NormedGroup::Integers {
            return Err(Error::GroupMismatch(format!("expected an integral chain, got {}", self.group)));
        }
        let mut out = GChain::zero(self.complex.clone(), self.dim, g.group.clone());
        for (c, v) in &self.terms {
            let Value::Int(k) = v else { unreachable!("integral values") };
            out.accumulate(c.clone(), g.group.mul_int(&g.value, k));
        }
        Ok(out)
    }

    /// Reduction of an integral chain modulo `d`.
    pub fn mod_d_reduce(&self, d: u64) -> Result<GChain> {
        if self.group != NormedGroup::Integers {
            return Err(Error::GroupMismatch(format!("expected an integral chain, got {}", self.group)));
        }
        let group = NormedGroup::cyclic(d)?;
        let mut out = GChain::zero(self.complex.clone(), self.dim, group.clone());
        for (c, v) in &self.terms {
            out.accumulate(c.clone(), group.canonicalize(v.clone())?);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RhoMonoVerdict {
    /// `Σ S_t · h_t = 0` as a chain, by the group's own arithmetic.
    pub chain_zero: bool,
    /// `Σ S_t ⊗ h_t = 0` in `C_m ⊗ G`, by lattice membership in the
    /// presentation of `G`.
    pub tensor_zero: bool,
}

impl RhoMonoVerdict {
    /// A zero chain with a nonzero tensor would contradict injectivity.
    pub fn is_violation(&self) -> bool {
        self.chain_zero && !self.tensor_zero
    }
}

/// Compares `Σ S_t · h_t` with `Σ S_t ⊗ h_t` for integral chains on one
/// complex and elements of a finitely generated group.
pub fn rho_mono_check(terms: &[(GChain, GroupElement)], group: &NormedGroup) -> Result<RhoMonoVerdict> {
    let pres = group.presentation()?;
    let lattice = pres.relation_lattice();
    let Some((first, _)) = terms.first() else {
        return Ok(RhoMonoVerdict {
            chain_zero: true,
            tensor_zero: true,
        });
    };
    let mut chain = GChain::zero(first.complex.clone(), first.dim, group.clone());
    let mut tensor: BTreeMap<Vec<usize>, Vec<BigInt>> = BTreeMap::new();
    for (s, h) in terms {
        if &h.group != group {
            return Err(Error::GroupMismatch(format!("{} vs {}", h.group, group)));
        }
        chain = chain.add(&s.rho_scale(h)?)?;
        let lifted = group.lift(&h.value)?;
        for (c, v) in &s.terms {
            let Value::Int(k) = v else { unreachable!("integral values") };
            let entry = tensor
                .entry(c.clone())
                .or_insert_with(|| vec![BigInt::zero(); pres.generators]);
            for (e, x) in entry.iter_mut().zip(&lifted) {
                *e += k * x;
            }
        }
    }
    Ok(RhoMonoVerdict {
        chain_zero: chain.is_zero(),
        tensor_zero: tensor.values().all(|v| lattice.contains(v)),
    })
}
