//! Push-forward of chains under affine and piecewise-affine vertex maps.
//!
//! The image of a simplex taken in its source vertex order carries the
//! orientation `⋀_m L(ζ)` of the bundle push, so its coefficient is the
//! source coefficient unchanged; folding into the sorted target cell
//! supplies the sign. Degenerate images are dropped. The image cells must
//! form a simplicial complex, which is checked exactly.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{AffineMap, GChain};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::exterior::span_vector;
use crate::group::{NormedGroup, Value};
use crate::rational::Point;

/// Where push-forward images are placed.
#[derive(Clone, Copy, Debug)]
pub enum PushTarget<'a> {
    /// A fresh complex on the image points, vertices in lexicographic order.
    Auto,
    /// An existing complex that must contain every image cell.
    Complex(&'a Arc<SimplicialComplex>),
}

/// Non-degenerate images of the support cells, with coefficients relative
/// to the image vertex order.
#[derive(Clone, Debug)]
pub struct ImageTerms {
    pub ambient: usize,
    pub dim: usize,
    pub group: NormedGroup,
    pub terms: Vec<(Vec<Point>, Value)>,
}

impl ImageTerms {
    /// Images of `s` under the map sending vertex `i` of its carrier to
    /// `image(i)`, affine on each simplex.
    pub fn of(s: &GChain, ambient: usize, image: impl Fn(usize) -> Point) -> Result<ImageTerms> {
        let mut terms = Vec::new();
        for (cell, v) in s.terms() {
            let pts: Vec<Point> = cell.iter().map(|&i| image(i)).collect();
            if pts.iter().any(|p| p.len() != ambient) {
                return Err(Error::DimensionMismatch("image point of the wrong dimension".into()));
            }
            if span_vector(&pts)?.is_zero() {
                log::warn!("dropping degenerate image of cell {cell:?}");
                continue;
            }
            terms.push((pts, v.clone()));
        }
        Ok(ImageTerms {
            ambient,
            dim: s.dim(),
            group: s.group().clone(),
            terms,
        })
    }
}

/// Builds one complex carrying all image lists and expresses each list as
/// a chain on it.
pub fn assemble(ambient: usize, lists: &[&ImageTerms]) -> Result<(Arc<SimplicialComplex>, Vec<GChain>)> {
    let mut index: BTreeMap<Point, usize> = BTreeMap::new();
    for l in lists {
        for (pts, _) in &l.terms {
            for p in pts {
                index.entry(p.clone()).or_insert(0);
            }
        }
    }
    let vertices: Vec<Point> = index.keys().cloned().collect();
    for (i, v) in index.values_mut().enumerate() {
        *v = i;
    }
    let cells: Vec<Vec<usize>> = lists
        .iter()
        .flat_map(|l| l.terms.iter().map(|(pts, _)| pts.iter().map(|p| index[p]).collect()))
        .collect();
    let complex = SimplicialComplex::trusted(ambient, vertices, cells);
    complex.validate().map_err(|e| match e {
        Error::InvalidComplex(msg) => Error::OverlayUnsupported(msg),
        other => other,
    })?;
    let complex = Arc::new(complex);
    let chains = lists
        .iter()
        .map(|l| place(&complex, l, |p| index.get(p).copied()))
        .collect::<Result<_>>()?;
    Ok((complex, chains))
}

/// Expresses image terms on an existing complex.
pub fn onto(target: &Arc<SimplicialComplex>, terms: &ImageTerms) -> Result<GChain> {
    if target.ambient_dim() != terms.ambient {
        return Err(Error::DimensionMismatch("target complex dimension".into()));
    }
    let index: BTreeMap<&Point, usize> = target.vertices().iter().enumerate().map(|(i, p)| (p, i)).collect();
    place(target, terms, |p| index.get(p).copied())
}

fn place(
    complex: &Arc<SimplicialComplex>,
    terms: &ImageTerms,
    lookup: impl Fn(&Point) -> Option<usize>,
) -> Result<GChain> {
    let mut out = GChain::zero(complex.clone(), terms.dim, terms.group.clone());
    for (pts, v) in &terms.terms {
        let cell: Vec<usize> = pts
            .iter()
            .map(|p| lookup(p).ok_or_else(|| Error::CarrierMismatch("image vertex is not a target vertex".into())))
            .collect::<Result<_>>()?;
        out.add_term(&cell, v.clone())?;
    }
    Ok(out)
}

/// `F_# S`.
pub fn push_forward(s: &GChain, f: &AffineMap, target: PushTarget<'_>) -> Result<GChain> {
    if f.source() != s.complex().ambient_dim() {
        return Err(Error::DimensionMismatch(format!(
            "map from R^{} applied to a chain in R^{}",
            f.source(),
            s.complex().ambient_dim()
        )));
    }
    let k = s.complex().clone();
    let terms = ImageTerms::of(s, f.target(), |i| f.apply(k.vertex(i)))?;
    finish(&terms, target)
}

/// Push-forward under the simplexwise-affine map with the given vertex
/// images.
pub fn push_vertex_map(s: &GChain, images: &[Point], ambient: usize, target: PushTarget<'_>) -> Result<GChain> {
    if images.len() != s.complex().num_vertices() {
        return Err(Error::DimensionMismatch("one image per vertex required".into()));
    }
    let terms = ImageTerms::of(s, ambient, |i| images[i].clone())?;
    finish(&terms, target)
}

fn finish(terms: &ImageTerms, target: PushTarget<'_>) -> Result<GChain> {
    match target {
        PushTarget::Auto => Ok(assemble(terms.ambient, &[terms])?.1.remove(0)),
        PushTarget::Complex(k) => onto(k, terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use num_bigint::BigInt;

    fn z(k: i64) -> Value {
        Value::Int(BigInt::from(k))
    }

    fn line(points: &[i64], cells: Vec<Vec<usize>>) -> Arc<SimplicialComplex> {
        Arc::new(SimplicialComplex::new(points.iter().map(|&p| vec![qi(p)]).collect(), cells).unwrap())
    }

    #[test]
    fn translation_keeps_mass() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]));
        let s = GChain::from_terms(k, 2, NormedGroup::Integers, vec![(vec![0, 2, 3], z(2))]).unwrap();
        let t = AffineMap::translation_by(vec![qi(3), qi(-1)]);
        let p = push_forward(&s, &t, PushTarget::Auto).unwrap();
        assert_eq!(p.mass().mass, s.mass().mass);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn fold_cancels_opposite_orientations() {
        // [-1,0] and [0,1] folded onto [0,1] by x ↦ |x|.
        let k = line(&[-1, 0, 1], vec![vec![0, 1], vec![1, 2]]);
        let s = GChain::from_terms(k.clone(), 1, NormedGroup::Integers, vec![(vec![0, 1], z(1)), (vec![1, 2], z(1))]).unwrap();
        let images = vec![vec![qi(1)], vec![qi(0)], vec![qi(1)]];
        assert!(push_vertex_map(&s, &images, 1, PushTarget::Auto).unwrap().is_zero());
        let t = GChain::from_terms(k, 1, NormedGroup::Integers, vec![(vec![0, 1], z(-1)), (vec![1, 2], z(1))]).unwrap();
        let p = push_vertex_map(&t, &images, 1, PushTarget::Auto).unwrap();
        assert_eq!(p.terms().next().unwrap().1, &z(2));
    }

    #[test]
    fn projection_collapses() {
        let k = Arc::new(SimplicialComplex::kuhn_grid(&[1, 1]));
        let s = GChain::from_terms(k, 2, NormedGroup::Integers, vec![(vec![0, 2, 3], z(1))]).unwrap();
        let p = AffineMap::functional(vec![qi(1), qi(0)], qi(0)).unwrap();
        assert!(push_forward(&s, &p, PushTarget::Auto).unwrap().is_zero());
    }

    #[test]
    fn overlapping_images_rejected() {
        // [0,2] and [3,4] sent to overlapping segments [0,2] and [1,3].
        let k = line(&[0, 2, 3, 4], vec![vec![0, 1], vec![2, 3]]);
        let s = GChain::from_terms(k, 1, NormedGroup::Integers, vec![(vec![0, 1], z(1)), (vec![2, 3], z(1))]).unwrap();
        let images = vec![vec![qi(0)], vec![qi(2)], vec![qi(1)], vec![qi(3)]];
        assert!(matches!(
            push_vertex_map(&s, &images, 1, PushTarget::Auto),
            Err(Error::OverlayUnsupported(_))
        ));
    }

    #[test]
    fn explicit_target() {
        let k = line(&[0, 1], vec![vec![0, 1]]);
        let s = GChain::from_terms(k.clone(), 1, NormedGroup::Integers, vec![(vec![0, 1], z(1))]).unwrap();
        let flip = AffineMap::new(vec![vec![qi(-1)]], vec![qi(1)]).unwrap();
        let p = push_forward(&s, &flip, PushTarget::Complex(&k)).unwrap();
        assert_eq!(p, s.neg());
        let far = AffineMap::translation_by(vec![qi(5)]);
        assert!(matches!(push_forward(&s, &far, PushTarget::Complex(&k)), Err(Error::CarrierMismatch(_))));
    }
}
