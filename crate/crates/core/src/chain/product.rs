//! Cartesian products of chains on the staircase triangulation.
//!
//! Vertex `(a, b)` of `K₁ × K₂` has index `a·|V₂| + b`. A product of sorted
//! simplices `[a₀…a_m] × [b₀…b_μ]` is covered by the simplices along the
//! monotone lattice paths from `(0,0)` to `(m,μ)`; because indices grow
//! along every path, these tuples are already sorted, and faces of
//! products are triangulated by faces of the same staircases.

use std::sync::Arc;

use super::GChain;
use crate::bundle::BundleElement;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::group::NormedGroup;

/// The triangulated product of two complexes.
#[derive(Clone, Debug)]
pub struct ProductComplex {
    left: Arc<SimplicialComplex>,
    right: Arc<SimplicialComplex>,
    complex: Arc<SimplicialComplex>,
}

impl ProductComplex {
    pub fn new(left: &Arc<SimplicialComplex>, right: &Arc<SimplicialComplex>) -> Self {
        let nr = right.num_vertices();
        let mut vertices = Vec::with_capacity(left.num_vertices() * nr);
        for a in left.vertices() {
            for b in right.vertices() {
                vertices.push(a.iter().chain(b).cloned().collect());
            }
        }
        let mut cells = Vec::new();
        for s in left.maximal_cells() {
            for t in right.maximal_cells() {
                cells.extend(staircase(&s, &t, nr));
            }
        }
        let complex = SimplicialComplex::trusted(left.ambient_dim() + right.ambient_dim(), vertices, cells);
        ProductComplex {
            left: left.clone(),
            right: right.clone(),
            complex: Arc::new(complex),
        }
    }

    pub fn left(&self) -> &Arc<SimplicialComplex> {
        &self.left
    }

    pub fn right(&self) -> &Arc<SimplicialComplex> {
        &self.right
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn vertex(&self, a: usize, b: usize) -> usize {
        a * self.right.num_vertices() + b
    }

    /// `(a, b)` for a product vertex index.
    pub fn factors(&self, v: usize) -> (usize, usize) {
        let nr = self.right.num_vertices();
        (v / nr, v % nr)
    }

    /// `S × T` for an integral `S` on the left factor.
    pub fn product(&self, s: &GChain, t: &GChain) -> Result<GChain> {
        if *s.group() != NormedGroup::Integers {
            return Err(Error::GroupMismatch(format!("left factor must be integral, got {}", s.group())));
        }
        if **s.complex() != *self.left || **t.complex() != *self.right {
            return Err(Error::CarrierMismatch("factors do not live on the product's complexes".into()));
        }
        let mut out = GChain::zero(self.complex.clone(), s.dim() + t.dim(), t.group().clone());
        let nr = self.right.num_vertices();
        for (sc, _) in s.terms() {
            let delta = s.bundle_term(sc)?;
            for (tc, _) in t.terms() {
                let gamma = t.bundle_term(tc)?;
                let cross = BundleElement::product(&delta, &gamma)?;
                for cell in staircase(sc, tc, nr) {
                    let g = cross.coefficient_along(&self.complex.span(&cell))?;
                    out.add_term(&cell, g.value)?;
                }
            }
        }
        Ok(out)
    }
}

/// `S × T` on the product of the two carriers.
pub fn product(s: &GChain, t: &GChain) -> Result<GChain> {
    ProductComplex::new(s.complex(), t.complex()).product(s, t)
}

/// Simplices of the staircase triangulation of `a × b`.
pub fn staircase(a: &[usize], b: &[usize], right_count: usize) -> Vec<Vec<usize>> {
    let (m, mu) = (a.len() - 1, b.len() - 1);
    let mut out = Vec::new();
    // Each path is the set of steps (out of m + μ) that advance the left index.
    for mask in 0u64..(1u64 << (m + mu)) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let (mut i, mut j) = (0, 0);
        let mut cell = vec![a[0] * right_count + b[0]];
        for step in 0..m + mu {
            if mask >> step & 1 == 1 {
                i += 1;
            } else {
                j += 1;
            }
            cell.push(a[i] * right_count + b[j]);
        }
        out.push(cell);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Value;
    use crate::rational::{q, qi};
    use num_bigint::BigInt;

    fn z(k: i64) -> Value {
        Value::Int(BigInt::from(k))
    }

    fn segment(a: i64, b: i64) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::new(vec![vec![qi(a)], vec![qi(b)]], vec![vec![0, 1]]).unwrap())
    }

    #[test]
    fn staircase_counts() {
        assert_eq!(staircase(&[0, 1], &[0, 1], 2), vec![vec![0, 2, 3], vec![0, 1, 3]]);
        assert_eq!(staircase(&[0, 1, 2], &[0, 1], 2).len(), 3);
        assert_eq!(staircase(&[4], &[0, 1, 2], 3), vec![vec![12, 13, 14]]);
    }

    #[test]
    fn segment_times_segment_is_square() {
        let s = GChain::from_terms(segment(0, 2), 1, NormedGroup::Integers, vec![(vec![0, 1], z(1))]).unwrap();
        let t = GChain::from_terms(segment(0, 3), 1, NormedGroup::Integers, vec![(vec![0, 1], z(5))]).unwrap();
        let p = product(&s, &t).unwrap();
        assert_eq!(p.len(), 2);
        p.complex().validate().unwrap();
        // Area 6 with coefficient 5.
        let r = p.mass();
        assert!(r.interval.contains(30.0));
        for c in &r.cells {
            assert_eq!(c.gram, "36");
        }
        // Both pieces oriented like e₁∧e₂.
        for (cell, v) in p.terms() {
            let sign = crate::exterior::sign_of(&p.complex().span(cell).coefficient(&[0, 1]));
            assert_eq!(Value::Int(BigInt::from(5 * sign)), *v);
        }
    }

    #[test]
    fn point_factor_embeds() {
        let pt = Arc::new(SimplicialComplex::new(vec![vec![q(1, 2)]], vec![vec![0]]).unwrap());
        let s = GChain::from_terms(pt, 0, NormedGroup::Integers, vec![(vec![0], z(1))]).unwrap();
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]));
        let g = NormedGroup::cyclic(5).unwrap();
        let t = GChain::from_terms(k, 2, g, vec![(vec![0, 1, 3], z(2)), (vec![0, 2, 3], z(1))]).unwrap();
        let p = product(&s, &t).unwrap();
        assert_eq!(p.mass().interval.mid(), t.mass().interval.mid());
        let back: Vec<_> = p.terms().map(|(c, v)| (c.clone(), v.clone())).collect();
        let orig: Vec<_> = t.terms().map(|(c, v)| (c.clone(), v.clone())).collect();
        assert_eq!(back, orig);
    }

    #[test]
    fn leibniz_segments() {
        let s = GChain::from_terms(segment(0, 1), 1, NormedGroup::Integers, vec![(vec![0, 1], z(2))]).unwrap();
        let t = GChain::from_terms(segment(0, 1), 1, NormedGroup::Integers, vec![(vec![0, 1], z(-3))]).unwrap();
        let pc = ProductComplex::new(s.complex(), t.complex());
        let lhs = pc.product(&s, &t).unwrap().boundary().unwrap();
        let a = pc.product(&s.boundary().unwrap(), &t).unwrap();
        let b = pc.product(&s, &t.boundary().unwrap()).unwrap();
        assert_eq!(lhs, a.sub(&b).unwrap());
    }

    #[test]
    fn rejects_non_integral_left() {
        let g = NormedGroup::cyclic(3).unwrap();
        let s = GChain::from_terms(segment(0, 1), 1, g, vec![(vec![0, 1], z(1))]).unwrap();
        assert!(matches!(product(&s, &s), Err(Error::GroupMismatch(_))));
    }
}
