//! Cutting a complex along a level set `{f = y}` of an affine function, and
//! the restriction and slice chains that come with it.
//!
//! Every cell `τ` splits into the pieces `τ ∩ {f ≥ y}`, `τ ∩ {f ≤ y}` and
//! `τ ∩ {f = y}`, whose vertices are the original vertices on the right
//! side plus one new vertex per strictly crossed edge. Pieces are
//! triangulated by pulling the least vertex (global index order) over the
//! facets avoiding it. Pulling triangulations restrict to pulling
//! triangulations of faces, so pieces sharing a face agree on it and the
//! result is again a simplicial complex.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use num_traits::{Signed, Zero};

use super::{AffineMap, GChain};
use crate::complex::{facets, SimplicialComplex};
use crate::error::{Error, Result};
use crate::exterior::LinearMap;
use crate::rational::{fmt_q, rank, sub_points, Point, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Side {
    Upper,
    Lower,
    Level,
}

/// The whole complex refined along `{f = y}`.
#[derive(Clone, Debug)]
pub struct Refinement {
    original: Arc<SimplicialComplex>,
    complex: Arc<SimplicialComplex>,
    level: Q,
    values: Vec<Q>,
    slicer: LinearMap,
    pieces: HashMap<(Vec<usize>, Side), Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub struct CutResult {
    pub complex: Arc<SimplicialComplex>,
    /// The input chain expressed on the refined complex.
    pub refined: GChain,
    /// `S ⌊ {f > y}`.
    pub upper: GChain,
    /// `S ⌊ {f < y}`.
    pub lower: GChain,
    /// `⟨S, f, y⟩`; absent for 0-chains.
    pub slice: Option<GChain>,
}

struct Builder<'a> {
    values: &'a [Q],
    points: Vec<Point>,
    crossing: HashMap<(usize, usize), usize>,
    dims: HashMap<Vec<usize>, usize>,
    pieces: HashMap<(Vec<usize>, Side), Vec<Vec<usize>>>,
}

impl Builder<'_> {
    fn piece_vertices(&self, cell: &[usize], side: Side) -> Vec<usize> {
        let mut out: Vec<usize> = cell
            .iter()
            .copied()
            .filter(|&v| {
                let x = &self.values[v];
                match side {
                    Side::Upper => !x.is_negative(),
                    Side::Lower => !x.is_positive(),
                    Side::Level => x.is_zero(),
                }
            })
            .collect();
        for i in 0..cell.len() {
            for j in (i + 1)..cell.len() {
                if let Some(&c) = self.crossing.get(&(cell[i], cell[j])) {
                    out.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn affine_dim(&mut self, verts: &[usize]) -> usize {
        if let Some(&d) = self.dims.get(verts) {
            return d;
        }
        let base = &self.points[verts[0]];
        let edges: Vec<Point> = verts[1..].iter().map(|&v| sub_points(&self.points[v], base)).collect();
        let d = rank(&edges);
        self.dims.insert(verts.to_vec(), d);
        d
    }

    fn triangulate(&mut self, cell: &[usize], side: Side) -> Vec<Vec<usize>> {
        let key = (cell.to_vec(), side);
        if let Some(t) = self.pieces.get(&key) {
            return t.clone();
        }
        let verts = self.piece_vertices(cell, side);
        let result = if verts.is_empty() {
            Vec::new()
        } else {
            let d = self.affine_dim(&verts);
            if verts.len() == d + 1 {
                vec![verts]
            } else {
                let apex = verts[0];
                let mut candidates: Vec<(Vec<usize>, Side)> = Vec::new();
                if cell.len() > 1 {
                    candidates.extend(facets(cell).into_iter().map(|(f, _)| (f, side)));
                }
                if side != Side::Level {
                    candidates.push((cell.to_vec(), Side::Level));
                }
                let mut seen: HashSet<Vec<usize>> = HashSet::new();
                let mut out = Vec::new();
                for (c, s) in candidates {
                    let fv = self.piece_vertices(&c, s);
                    if fv.is_empty() || fv.contains(&apex) || seen.contains(&fv) {
                        continue;
                    }
                    if self.affine_dim(&fv) + 1 != d {
                        continue;
                    }
                    seen.insert(fv);
                    for mut simplex in self.triangulate(&c, s) {
                        simplex.push(apex);
                        simplex.sort_unstable();
                        out.push(simplex);
                    }
                }
                out
            }
        };
        self.pieces.insert(key, result.clone());
        result
    }
}

impl Refinement {
    pub fn new(complex: &Arc<SimplicialComplex>, f: &AffineMap, y: &Q) -> Result<Refinement> {
        let n = complex.ambient_dim();
        if f.source() != n || f.target() != 1 {
            return Err(Error::DimensionMismatch(format!(
                "cutting function must map R^{n} to R^1, got R^{} to R^{}",
                f.source(),
                f.target()
            )));
        }
        let values: Vec<Q> = complex.vertices().iter().map(|v| &f.apply(v)[0] - y).collect();
        let mut points: Vec<Point> = complex.vertices().to_vec();
        let mut crossing = HashMap::new();
        for e in complex.cells(1) {
            let (a, b) = (e[0], e[1]);
            let (fa, fb) = (&values[a], &values[b]);
            if (fa.is_positive() && fb.is_negative()) || (fa.is_negative() && fb.is_positive()) {
                let t = fa / (fa - fb);
                let pa = complex.vertex(a);
                let pb = complex.vertex(b);
                let p: Point = pa.iter().zip(pb).map(|(x, z)| x + &t * (z - x)).collect();
                crossing.insert((a, b), points.len());
                points.push(p);
            }
        }
        let mut b = Builder {
            values: &values,
            points,
            crossing,
            dims: HashMap::new(),
            pieces: HashMap::new(),
        };
        let mut top = Vec::new();
        for k in 0..=complex.top_dim().unwrap_or(0) {
            for c in complex.cells(k) {
                for side in [Side::Upper, Side::Lower, Side::Level] {
                    let t = b.triangulate(c, side);
                    if side != Side::Level {
                        top.extend(t);
                    }
                }
            }
        }
        let pieces = b.pieces;
        let refined = SimplicialComplex::trusted(n, b.points, top);
        Ok(Refinement {
            original: complex.clone(),
            complex: Arc::new(refined),
            level: y.clone(),
            slicer: f.linear().clone(),
            values,
            pieces,
        })
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    fn crossed(&self, cell: &[usize]) -> bool {
        cell.iter().any(|&v| self.values[v].is_positive()) && cell.iter().any(|&v| self.values[v].is_negative())
    }

    /// Expresses a chain on the original complex through the refinement.
    pub fn transfer(&self, s: &GChain) -> Result<CutResult> {
        let s = s.rebase(&self.original)?;
        for v in s.support_vertices() {
            if self.values[v].is_zero() {
                return Err(Error::NonRegularValue {
                    level: fmt_q(&self.level),
                    vertex: v,
                });
            }
        }
        let m = s.dim();
        let group = s.group().clone();
        let mut refined = GChain::zero(self.complex.clone(), m, group.clone());
        let mut upper = refined.clone();
        let mut lower = refined.clone();
        let mut slice = (m >= 1).then(|| GChain::zero(self.complex.clone(), m - 1, group.clone()));
        for (cell, _) in s.terms() {
            let gamma = s.bundle_term(cell)?;
            for (side, part) in [(Side::Upper, &mut upper), (Side::Lower, &mut lower)] {
                for piece in &self.pieces[&(cell.clone(), side)] {
                    if piece.len() != m + 1 {
                        continue;
                    }
                    let c = gamma.coefficient_along(&self.complex.span(piece))?;
                    part.add_term(piece, c.value.clone())?;
                    refined.add_term(piece, c.value)?;
                }
            }
            if let Some(sl) = slice.as_mut() {
                if !self.crossed(cell) {
                    continue;
                }
                let cut = gamma.slice(&self.slicer)?;
                for piece in &self.pieces[&(cell.clone(), Side::Level)] {
                    if piece.len() != m {
                        continue;
                    }
                    let c = cut.coefficient_along(&self.complex.span(piece))?;
                    sl.add_term(piece, c.value)?;
                }
            }
        }
        Ok(CutResult {
            complex: self.complex.clone(),
            refined,
            upper,
            lower,
            slice,
        })
    }
}

/// Refines the carrier of `s` along `{f = y}` and splits `s`.
pub fn cut(s: &GChain, f: &AffineMap, y: &Q) -> Result<CutResult> {
    Refinement::new(s.complex(), f, y)?.transfer(s)
}

/// `⟨S, f, y⟩`, normalized so that
/// `∂(S⌊{f>y}) = ⟨S,f,y⟩ + (∂S)⌊{f>y}`.
pub fn slice(s: &GChain, f: &AffineMap, y: &Q) -> Result<GChain> {
    if s.dim() == 0 {
        return Err(Error::DimensionZero);
    }
    Ok(cut(s, f, y)?.slice.expect("positive dimension"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{NormedGroup, Value};
    use crate::rational::{q, qi};
    use num_bigint::BigInt;

    fn z(k: i64) -> Value {
        Value::Int(BigInt::from(k))
    }

    #[test]
    fn segment_cut() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![qi(0)], vec![qi(2)]], vec![vec![0, 1]]).unwrap());
        let s = GChain::from_terms(k, 1, NormedGroup::Integers, vec![(vec![0, 1], z(1))]).unwrap();
        let f = AffineMap::identity(1);
        let r = cut(&s, &f, &qi(1)).unwrap();
        assert_eq!(r.refined.len(), 2);
        assert_eq!(r.upper.len(), 1);
        assert_eq!(r.upper.mass().mass, 1.0);
        let sl = r.slice.unwrap();
        let terms: Vec<_> = sl.geometric_terms().into_iter().collect();
        assert_eq!(terms, vec![(vec![vec![qi(1)]], z(-1))]);
        let lhs = r.upper.boundary().unwrap();
        let rhs = sl.add(&cut(&s.boundary().unwrap(), &f, &qi(1)).unwrap().upper.rebase(&r.complex).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn no_crossing_keeps_chain() {
        let k = Arc::new(SimplicialComplex::new(vec![vec![qi(0)], vec![qi(2)]], vec![vec![0, 1]]).unwrap());
        let s = GChain::from_terms(k, 1, NormedGroup::Integers, vec![(vec![0, 1], z(1))]).unwrap();
        let r = cut(&s, &AffineMap::identity(1), &qi(-5)).unwrap();
        assert!(r.upper.geometric_eq(&s));
        assert!(r.slice.unwrap().is_zero());
        assert!(matches!(
            cut(&s, &AffineMap::identity(1), &qi(2)),
            Err(Error::NonRegularValue { vertex: 1, .. })
        ));
    }

    #[test]
    fn triangle_cut_preserves_area() {
        let k = Arc::new(
            SimplicialComplex::new(
                vec![vec![qi(0), qi(0)], vec![qi(1), qi(0)], vec![qi(0), qi(1)]],
                vec![vec![0, 1, 2]],
            )
            .unwrap(),
        );
        let s = GChain::from_terms(k, 2, NormedGroup::Integers, vec![(vec![0, 1, 2], z(1))]).unwrap();
        let f = AffineMap::functional(vec![qi(1), qi(0)], qi(0)).unwrap();
        let r = cut(&s, &f, &q(1, 2)).unwrap();
        assert_eq!(r.upper.len(), 1);
        assert_eq!(r.lower.len(), 2);
        // every piece here has a rational area, so the sum is exact
        let area: Q = r
            .refined
            .terms()
            .map(|(c, _)| {
                let v = r.complex.volume_sq(c);
                let (n, d) = (v.numer().sqrt(), v.denom().sqrt());
                assert_eq!(&(&n * &n), v.numer());
                assert_eq!(&(&d * &d), v.denom());
                Q::new(n, d)
            })
            .sum();
        assert_eq!(area, q(1, 2));
        r.complex.validate().unwrap();
        let lhs = r.upper.boundary().unwrap();
        let rb = Refinement::new(s.complex(), &f, &q(1, 2)).unwrap();
        let rhs = r.slice.clone().unwrap().add(&rb.transfer(&s.boundary().unwrap()).unwrap().upper.rebase(&r.complex).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_square_slice() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]));
        let g = z(3);
        let s = GChain::from_terms(k, 2, NormedGroup::Integers, vec![(vec![0, 2, 3], g.clone()), (vec![0, 3, 1], g)]).unwrap();
        let f = AffineMap::functional(vec![qi(1), qi(0)], qi(0)).unwrap();
        let sl = slice(&s, &f, &q(1, 2)).unwrap();
        assert!((sl.mass().mass - 3.0).abs() < 1e-12);
        assert_eq!(sl.len(), 2);
    }
}
