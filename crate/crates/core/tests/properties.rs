//! Property tests for the algebraic invariants of every layer.

use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;

use gmt_chains::bundle::BundleElement;
use gmt_chains::chain::cut::Refinement;
use gmt_chains::chain::{AffineMap, GChain};
use gmt_chains::complex::SimplicialComplex;
use gmt_chains::exterior::{CoVector, LinearMap, MultiVector};
use gmt_chains::group::smith::{smith_normal_form, to_int_matrix};
use gmt_chains::group::{GroupElement, NormedGroup, Value};
use gmt_chains::io::{parse_chain, print_chain};
use gmt_chains::rational::{q, qi, Q};

fn vec_q(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), n).prop_map(|v| v.into_iter().map(|(a, b)| q(a, b)).collect())
}

fn matrix_q(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<Q>>> {
    prop::collection::vec(prop::collection::vec((-3i64..=3).prop_map(qi), cols), rows)
}

fn wedge_all(vs: &[Vec<Q>], n: usize) -> MultiVector {
    vs.iter()
        .fold(MultiVector::scalar(n, qi(1)), |acc, v| acc.wedge(&MultiVector::vector(v)).unwrap())
}

/// Values of `Z`, `Z/6`, `Q`, `Z ⊕ Z/2` and `Z²/⟨(2,1)⟩` from one integer pair.
fn group_and_values() -> impl Strategy<Value = (NormedGroup, Value, Value)> {
    (0usize..5, -30i64..=30, -30i64..=30, 1i64..=5, 1i64..=5).prop_map(|(which, a, b, da, db)| {
        let i = |k: i64| Value::Int(BigInt::from(k));
        let (g, x, y) = match which {
            0 => (NormedGroup::Integers, i(a), i(b)),
            1 => (NormedGroup::cyclic(6).unwrap(), i(a), i(b)),
            2 => (NormedGroup::Rationals, Value::Rat(q(a, da)), Value::Rat(q(b, db))),
            3 => (
                NormedGroup::direct_sum(vec![NormedGroup::Integers, NormedGroup::cyclic(2).unwrap()]),
                Value::Tuple(vec![i(a), i(b)]),
                Value::Tuple(vec![i(b), i(a)]),
            ),
            _ => (
                NormedGroup::quotient_lattice(2, to_int_matrix(&[vec![2, 1]])).unwrap(),
                Value::Vector(vec![BigInt::from(a), BigInt::from(da)]),
                Value::Vector(vec![BigInt::from(b), BigInt::from(db)]),
            ),
        };
        let (x, y) = (g.canonicalize(x).unwrap(), g.canonicalize(y).unwrap());
        (g, x, y)
    })
}

fn square_grid() -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::kuhn_grid(&[2, 2]))
}

fn cube() -> Arc<SimplicialComplex> {
    Arc::new(SimplicialComplex::kuhn_grid(&[1, 1, 1]))
}

/// A chain with the given integer coefficients on the first cells of `k`.
fn chain_on(k: &Arc<SimplicialComplex>, dim: usize, coeffs: &[i64]) -> GChain {
    let terms = k
        .cells(dim)
        .iter()
        .zip(coeffs)
        .map(|(c, &x)| (c.clone(), Value::Int(BigInt::from(x))));
    GChain::from_terms(k.clone(), dim, NormedGroup::Integers, terms).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative(a in vec_q(4), b in vec_q(4), c in vec_q(4)) {
        let (a, b, c) = (MultiVector::vector(&a), MultiVector::vector(&b), MultiVector::vector(&c));
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn vectors_anticommute(a in vec_q(4), b in vec_q(4)) {
        let (a, b) = (MultiVector::vector(&a), MultiVector::vector(&b));
        prop_assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap().neg());
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn inner_product_is_gram_determinant(a in vec_q(3), b in vec_q(3)) {
        let w = wedge_all(&[a.clone(), b.clone()], 3);
        let dot = |x: &[Q], y: &[Q]| x.iter().zip(y).map(|(p, r)| p * r).sum::<Q>();
        let gram = dot(&a, &a) * dot(&b, &b) - dot(&a, &b) * dot(&a, &b);
        prop_assert_eq!(w.norm_sq(), gram);
    }

    #[test]
    fn wedges_of_vectors_are_simple(vs in prop::collection::vec(vec_q(4), 0..=4)) {
        prop_assert!(wedge_all(&vs, 4).is_simple());
    }

    #[test]
    fn push_is_functorial(a in matrix_q(3, 4), b in matrix_q(4, 3), vs in prop::collection::vec(vec_q(3), 2)) {
        let (a, b) = (LinearMap::new(4, 3, a).unwrap(), LinearMap::new(3, 4, b).unwrap());
        let xi = wedge_all(&vs, 3);
        let composed = a.compose(&b).unwrap().push(&xi).unwrap();
        prop_assert_eq!(composed, a.push(&b.push(&xi).unwrap()).unwrap());
    }

    #[test]
    fn interior_lowers_degree_and_annihilates_twice(vs in prop::collection::vec(vec_q(4), 3), w in vec_q(4)) {
        let xi = wedge_all(&vs, 4);
        let w = CoVector::functional(&w);
        let once = xi.interior(&w).unwrap();
        prop_assert_eq!(once.degree(), 2);
        prop_assert!(once.interior(&w).unwrap().is_zero());
    }

    #[test]
    fn group_norm_axioms((g, a, b) in group_and_values()) {
        let (na, nb) = (g.norm(&a), g.norm(&b));
        prop_assert!(g.norm(&g.add(&a, &b)) <= &na + &nb);
        prop_assert_eq!(g.norm(&g.neg(&a)), na.clone());
        prop_assert_eq!(na == qi(0), g.is_zero(&a));
        prop_assert!(g.is_zero(&g.sub(&a, &a)));
    }

    #[test]
    fn smith_form_reconstructs(rows in 1usize..=5, cols in 1usize..=5, seed in prop::collection::vec(-12i64..=12, 25)) {
        let m: Vec<Vec<i64>> = (0..rows).map(|i| seed[i * 5..i * 5 + cols].to_vec()).collect();
        let m = to_int_matrix(&m);
        prop_assert!(smith_normal_form(&m, rows, cols).verify(&m));
    }

    #[test]
    fn bundle_push_preserves_norm(vs in prop::collection::vec(vec_q(3), 2), h in matrix_q(4, 3), k in -6i64..=6) {
        let zeta = wedge_all(&vs, 3);
        prop_assume!(!zeta.is_zero());
        let gamma = BundleElement::make(&zeta, &GroupElement::int(k)).unwrap();
        let h = LinearMap::new(3, 4, h).unwrap();
        if let Ok(pushed) = gamma.push(&h) {
            prop_assert_eq!(pushed.norm(), gamma.norm());
        }
    }

    #[test]
    fn boundary_squared_vanishes(coeffs in prop::collection::vec(-5i64..=5, 6)) {
        let s = chain_on(&cube(), 3, &coeffs);
        prop_assert!(s.boundary().unwrap().boundary().unwrap().is_zero());
    }

    #[test]
    fn boundary_is_additive(a in prop::collection::vec(-5i64..=5, 8), b in prop::collection::vec(-5i64..=5, 8)) {
        let k = square_grid();
        let (s, t) = (chain_on(&k, 2, &a), chain_on(&k, 2, &b));
        let lhs = s.add(&t).unwrap().boundary().unwrap();
        prop_assert_eq!(lhs, s.boundary().unwrap().add(&t.boundary().unwrap()).unwrap());
    }

    #[test]
    fn mass_is_subadditive_and_symmetric(a in prop::collection::vec(-5i64..=5, 8), b in prop::collection::vec(-5i64..=5, 8)) {
        let k = square_grid();
        let (s, t) = (chain_on(&k, 1, &a), chain_on(&k, 1, &b));
        let sum = s.add(&t).unwrap().mass().interval;
        prop_assert!(sum.lo <= s.mass().interval.hi + t.mass().interval.hi);
        prop_assert_eq!(s.neg().mass().mass, s.mass().mass);
    }

    #[test]
    fn slice_identity_on_the_square(coeffs in prop::collection::vec(-4i64..=4, 8), gx in -3i64..=3, gy in 1i64..=3, num in 1i64..=19) {
        let k = square_grid();
        let s = chain_on(&k, 2, &coeffs);
        let f = AffineMap::functional(vec![qi(gx), qi(gy)], qi(0)).unwrap();
        // Vertex values are integers; a level with denominator 20 is regular.
        let y = q(num, 20) + qi(gx.min(0) * 2);
        let r = Refinement::new(&k, &f, &y).unwrap();
        let a = r.transfer(&s).unwrap();
        let b = r.transfer(&s.boundary().unwrap()).unwrap();
        let rhs = a.slice.clone().unwrap().add(&b.upper).unwrap();
        prop_assert_eq!(a.upper.boundary().unwrap(), rhs);
    }

    #[test]
    fn chain_documents_round_trip(coeffs in prop::collection::vec(-9i64..=9, 8)) {
        let s = chain_on(&square_grid(), 2, &coeffs);
        let text = print_chain(&s).unwrap();
        let back = parse_chain(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(print_chain(&back).unwrap(), text);
    }
}
