//! Affine homotopies `h(s, x) = (1 − s)·f(x) + s·g(x)` pushed over prisms.
//!
//! The prism `[0,t] × S` is triangulated by staircases and mapped
//! simplexwise-affinely, agreeing with `h` at the vertices. On the two ends
//! the map is exactly `f` and `g_t = h(t, ·)`, so
//! `g_t# S − f# S = ∂ h#([0,t] × S) + h#([0,t] × ∂S)` holds exactly.

use std::sync::Arc;

use super::product::ProductComplex;
use super::push::{assemble, ImageTerms};
use super::{AffineMap, GChain};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::group::{NormedGroup, Value};
use crate::rational::{Point, Q};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// The four chains of the homotopy formula on one common complex.
#[derive(Clone, Debug)]
pub struct HomotopyFill {
    pub complex: Arc<SimplicialComplex>,
    pub fill: GChain,
    pub bottom: GChain,
    pub top: GChain,
    /// `h#([0,t] × ∂S)`; absent for 0-chains.
    pub side: Option<GChain>,
}

impl HomotopyFill {
    /// `top − bottom = ∂ fill + side`.
    pub fn identity_holds(&self) -> Result<bool> {
        let lhs = self.top.sub(&self.bottom)?;
        let mut rhs = self.fill.boundary()?;
        if let Some(side) = &self.side {
            rhs = rhs.add(side)?;
        }
        Ok(lhs == rhs)
    }
}

/// `h#([0,t] × S)` together with the remaining terms of the formula.
pub fn homotopy_fill(f: &AffineMap, g: &AffineMap, s: &GChain, t: &Q) -> Result<HomotopyFill> {
    let k = s.complex();
    if f.source() != k.ambient_dim() || g.source() != k.ambient_dim() || f.target() != g.target() {
        return Err(Error::DimensionMismatch("homotopy maps do not match the chain".into()));
    }
    let p = f.target();
    let gt = f.interpolate(g, t)?;
    let bottom = ImageTerms::of(s, p, |i| f.apply(k.vertex(i)))?;
    let top = ImageTerms::of(s, p, |i| gt.apply(k.vertex(i)))?;
    let group = s.group().clone();
    if t.is_zero() {
        let (complex, mut chains) = assemble(p, &[&bottom, &top])?;
        let top = chains.pop().expect("two chains");
        let bottom = chains.pop().expect("two chains");
        let fill = GChain::zero(complex.clone(), s.dim() + 1, group.clone());
        let side = (s.dim() > 0).then(|| GChain::zero(complex.clone(), s.dim(), group));
        return Ok(HomotopyFill {
            complex,
            fill,
            bottom,
            top,
            side,
        });
    }

    let interval = Arc::new(SimplicialComplex::new(vec![vec![Q::zero()], vec![t.clone()]], vec![vec![0, 1]])?);
    let unit = GChain::from_terms(interval.clone(), 1, NormedGroup::Integers, vec![(vec![0, 1], Value::Int(BigInt::one()))])?;
    let prism = ProductComplex::new(&interval, k);
    let image = |v: usize| -> Point {
        let (a, x) = prism.factors(v);
        if a == 0 {
            f.apply(k.vertex(x))
        } else {
            gt.apply(k.vertex(x))
        }
    };
    let fill = ImageTerms::of(&prism.product(&unit, s)?, p, image)?;
    let side = if s.dim() > 0 {
        Some(ImageTerms::of(&prism.product(&unit, &s.boundary()?)?, p, image)?)
    } else {
        None
    };
    let mut lists = vec![&fill, &bottom, &top];
    if let Some(side) = &side {
        lists.push(side);
    }
    let (complex, mut chains) = assemble(p, &lists)?;
    let side = if side.is_some() { chains.pop() } else { None };
    let top = chains.pop().expect("top");
    let bottom = chains.pop().expect("bottom");
    let fill = chains.pop().expect("fill");
    Ok(HomotopyFill {
        complex,
        fill,
        bottom,
        top,
        side,
    })
}
