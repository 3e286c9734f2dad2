//! Seeded generators for verification instances.

use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::chain::{AffineMap, GChain};
use crate::complex::SimplicialComplex;
use crate::group::{NormedGroup, Value};
use crate::rational::{q, qi, rank, Point, Q};

pub type Rng8 = ChaCha8Rng;

pub fn small_int(rng: &mut Rng8, bound: i64) -> i64 {
    rng.gen_range(-bound..=bound)
}

/// A rational with numerator in `[-bound, bound]` and denominator in `1..=den`.
pub fn small_q(rng: &mut Rng8, bound: i64, den: i64) -> Q {
    q(small_int(rng, bound), rng.gen_range(1..=den))
}

/// `Z`, `Z/2`, `Z/6`, `Q` or `Z ⊕ Z/2`.
pub fn standard_groups() -> Vec<NormedGroup> {
    vec![
        NormedGroup::Integers,
        NormedGroup::cyclic(2).expect("positive"),
        NormedGroup::cyclic(6).expect("positive"),
        NormedGroup::Rationals,
        NormedGroup::direct_sum(vec![NormedGroup::Integers, NormedGroup::cyclic(2).expect("positive")]),
    ]
}

pub fn random_group(rng: &mut Rng8) -> NormedGroup {
    standard_groups().choose(rng).expect("nonempty").clone()
}

/// A finite group `Z/a ⊕ Z/b ⊕ …` of order at most 200, sometimes with a
/// free summand appended.
pub fn random_fg_group(rng: &mut Rng8) -> NormedGroup {
    let mut parts = Vec::new();
    let mut order = 1u64;
    for _ in 0..rng.gen_range(1..=3) {
        let d = rng.gen_range(2..=12u64);
        if order * d > 200 {
            break;
        }
        order *= d;
        parts.push(NormedGroup::cyclic(d).expect("positive"));
    }
    if parts.is_empty() {
        parts.push(NormedGroup::cyclic(2).expect("positive"));
    }
    if rng.gen_bool(0.25) {
        parts.push(NormedGroup::Integers);
    }
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        NormedGroup::direct_sum(parts)
    }
}

pub fn random_value(rng: &mut Rng8, g: &NormedGroup) -> Value {
    let raw = match g {
        NormedGroup::Integers => Value::Int(BigInt::from(small_int(rng, 5))),
        NormedGroup::Cyclic(d) => Value::Int(BigInt::from(rng.gen_range(0..=64u64)) % d),
        NormedGroup::Rationals => Value::Rat(small_q(rng, 6, 4)),
        NormedGroup::DirectSum(parts) => Value::Tuple(parts.iter().map(|p| random_value(rng, p)).collect()),
        NormedGroup::QuotientLattice(l) => Value::Vector((0..l.rank).map(|_| BigInt::from(small_int(rng, 5))).collect()),
    };
    g.canonicalize(raw).expect("generated in shape")
}

pub fn random_nonzero_value(rng: &mut Rng8, g: &NormedGroup) -> Value {
    loop {
        let v = random_value(rng, g);
        if !g.is_zero(&v) {
            return v;
        }
    }
}

/// An integer `rows × cols` matrix of full column rank.
pub fn random_injective(rng: &mut Rng8, rows: usize, cols: usize, bound: i64) -> Vec<Vec<Q>> {
    loop {
        let m: Vec<Vec<Q>> = (0..rows).map(|_| (0..cols).map(|_| qi(small_int(rng, bound))).collect()).collect();
        let cols_as_rows: Vec<Vec<Q>> = (0..cols).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
        if cols == 0 || rank(&cols_as_rows) == cols {
            return m;
        }
    }
}

pub fn random_affine(rng: &mut Rng8, source: usize, target: usize, bound: i64) -> AffineMap {
    let m: Vec<Vec<Q>> = (0..target).map(|_| (0..source).map(|_| qi(small_int(rng, bound))).collect()).collect();
    let t: Point = (0..target).map(|_| qi(small_int(rng, 2))).collect();
    AffineMap::new(m, t).expect("shapes agree")
}

/// A Kuhn-triangulated box of dimension `m` with `1..=max_count` cubes per
/// axis, placed in `R^n` by a random injective affine map.
pub fn random_grid(rng: &mut Rng8, m: usize, max_count: usize, n: usize) -> Arc<SimplicialComplex> {
    let counts: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=max_count)).collect();
    let grid = SimplicialComplex::kuhn_grid(&counts);
    let a = random_injective(rng, n, m, 2);
    let t: Point = (0..n).map(|_| small_q(rng, 3, 2)).collect();
    Arc::new(grid.map_vertices(n, |p| {
        (0..n)
            .map(|i| a[i].iter().zip(p).fold(t[i].clone(), |acc, (x, y)| acc + x * y))
            .collect()
    }))
}

/// Random coefficients on a random nonempty subset of the `m`-cells.
pub fn random_chain(rng: &mut Rng8, k: &Arc<SimplicialComplex>, m: usize, group: &NormedGroup) -> GChain {
    let cells = k.cells(m);
    loop {
        let mut s = GChain::zero(k.clone(), m, group.clone());
        for c in cells {
            if rng.gen_bool(0.6) {
                let mut cell = c.clone();
                cell.shuffle(rng);
                s.add_term(&cell, random_value(rng, group)).expect("cell of the complex");
            }
        }
        if !s.is_zero() {
            return s;
        }
    }
}

/// A nonzero functional with small integer coefficients.
pub fn random_functional(rng: &mut Rng8, n: usize) -> AffineMap {
    loop {
        let c: Vec<Q> = (0..n).map(|_| qi(small_int(rng, 3))).collect();
        if c.iter().any(|x| *x != qi(0)) {
            return AffineMap::functional(c, small_q(rng, 2, 3)).expect("one row");
        }
    }
}

/// A level strictly inside the value range that avoids every value.
pub fn regular_level(rng: &mut Rng8, values: &[Q]) -> Q {
    let mut sorted = values.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() < 2 {
        return sorted.first().cloned().unwrap_or_else(|| qi(0)) + q(1, 7);
    }
    let i = rng.gen_range(0..sorted.len() - 1);
    let w = q(rng.gen_range(1..=9), 10);
    &sorted[i] + (&sorted[i + 1] - &sorted[i]) * w
}

/// The 5-vertex Möbius band with vertices at the standard basis of `R⁵`.
pub fn mobius_band() -> Arc<SimplicialComplex> {
    let cells = (0..5).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect();
    Arc::new(SimplicialComplex::from_abstract(5, cells).expect("abstract complex"))
}
