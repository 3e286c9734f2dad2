use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value as Json};

use super::random::*;
use super::{Outcome, Suite};
use crate::bundle::BundleElement;
use crate::chain::constancy::{coherent_orientation, constancy_solve, fundamental_chain, ConstancyOutcome};
use crate::chain::cut::{slice, Refinement};
use crate::chain::homotopy::homotopy_fill;
use crate::chain::product::ProductComplex;
use crate::chain::push::{push_forward, PushTarget};
use crate::chain::{rho_mono_check, AffineMap, GChain};
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::exterior::{LinearMap, MultiVector};
use crate::flatnorm::{enumerate_flat_norm, flat_distance, flat_norm, FlatNormProblem};
use crate::group::presentation::{check_mono_condition, tensor_mod_d, GroupHom, Presentation};
use crate::group::smith::smith_normal_form;
use crate::group::{GroupElement, NormedGroup, Value};
use crate::interval::Interval;
use crate::io::ChainDocument;
use crate::rational::{fmt_q, q, qi, solve, to_f64, Point, Q};

pub(super) static ALL: &[Suite] = &[
    Suite { name: "group-norms", default_cases: 10_000, about: "norm axioms on every group kind; Z/<d> against Z/d", run: group_norms },
    Suite { name: "snf", default_cases: 10_000, about: "U·M·V = D with divisibility on random matrices up to 6×6", run: snf },
    Suite { name: "tensor-mod-d", default_cases: 5_057, about: "A/dA against brute-force enumeration, all |A| ≤ 200, d ≤ 12", run: tensor_case },
    Suite { name: "mono-condition", default_cases: 500, about: "univalence of f_d against brute-force kernels", run: mono_condition },
    Suite { name: "boundary-squared", default_cases: 5_000, about: "∂∂ = 0 for m ∈ {2,3} over Z, Z/2, Z/6, Q, Z⊕Z/2", run: boundary_squared },
    Suite { name: "slice-identity", default_cases: 300, about: "∂(S⌊{f>y}) = ⟨S,f,y⟩ + (∂S)⌊{f>y}", run: slice_identity },
    Suite { name: "leibniz", default_cases: 150, about: "boundary of products in all three dimension cases", run: leibniz },
    Suite { name: "homotopy", default_cases: 150, about: "g#S − f#S = ∂h#([0,t]×S) + h#([0,t]×∂S)", run: homotopy },
    Suite { name: "push-functoriality", default_cases: 100, about: "(G∘F)#S = G#(F#S)", run: push_functoriality },
    Suite { name: "rho-mono", default_cases: 10_000, about: "∂(S·g) = (∂S)·g and no zero chain with nonzero tensor", run: rho_mono },
    Suite { name: "mod-d", default_cases: 700, about: "reduction mod d commutes with ∂ and kills d·S", run: mod_d },
    Suite { name: "bundle-norms", default_cases: 1_000, about: "push, slice, scale and product norms; α-metric identity", run: bundle_norms },
    Suite { name: "constancy", default_cases: 100, about: "constant coefficient recovered; perturbations located", run: constancy },
    Suite { name: "flatnorm", default_cases: 100, about: "LP optimum against vertex enumeration; Q + ∂R = S exactly", run: flatnorm },
    Suite { name: "flat-triangle", default_cases: 100, about: "flat distance is a pseudometric", run: flat_triangle },
    Suite { name: "coarea", default_cases: 20, about: "∫ M⟨S,f,y⟩ dy against Σ |g|·vol·Jac", run: coarea },
];

fn attempt(f: impl FnOnce() -> Result<Outcome>) -> Outcome {
    f().unwrap_or_else(|e| Outcome::fail(format!("unexpected error: {e}"), Json::Null))
}

fn chain_json(s: &GChain) -> Json {
    ChainDocument::from_chain(s)
        .ok()
        .and_then(|d| serde_json::to_value(d).ok())
        .unwrap_or(Json::Null)
}

fn map_json(f: &AffineMap) -> Json {
    serde_json::to_value(crate::io::AffineMapDoc::from_map(f)).unwrap_or(Json::Null)
}

fn int(k: i64) -> Value {
    Value::Int(BigInt::from(k))
}

fn group_norms(rng: &mut Rng8, _case: usize) -> Outcome {
    let group = match rng.gen_range(0..4) {
        0 => random_group(rng),
        1 => random_fg_group(rng),
        2 => NormedGroup::cyclic(rng.gen_range(1..=30)).expect("positive"),
        _ => {
            let rank = rng.gen_range(1..=3);
            let gens = (0..rng.gen_range(1..=2))
                .map(|_| (0..rank).map(|_| BigInt::from(small_int(rng, 4))).collect())
                .collect();
            NormedGroup::quotient_lattice(rank, gens).expect("small rank")
        }
    };
    let a = random_value(rng, &group);
    let b = random_value(rng, &group);
    let (na, nb) = (group.norm(&a), group.norm(&b));
    let sum = group.norm(&group.add(&a, &b));
    let inputs = || json!({"group": group.to_string(), "a": a.to_string(), "b": b.to_string()});
    if sum > &na + &nb {
        return Outcome::fail("subadditivity", inputs());
    }
    if group.norm(&group.neg(&a)) != na {
        return Outcome::fail("symmetry", inputs());
    }
    if na.is_zero() != group.is_zero(&a) {
        return Outcome::fail("definiteness", inputs());
    }
    let d = rng.gen_range(1..=12u64);
    let k = rng.gen_range(-40..=40i64);
    let cyc = NormedGroup::cyclic(d).expect("positive");
    let lat = NormedGroup::quotient_lattice(1, vec![vec![BigInt::from(d)]]).expect("rank one");
    let via_cyclic = cyc.norm(&cyc.canonicalize(int(k)).expect("integer"));
    let via_lattice = lat.norm(&lat.canonicalize(Value::Vector(vec![BigInt::from(k)])).expect("vector"));
    Outcome::check(via_cyclic == via_lattice, "Z/<d> and Z/d norms differ", || json!({"d": d, "k": k}))
}

fn snf(rng: &mut Rng8, _case: usize) -> Outcome {
    let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
    let mut m: Vec<Vec<BigInt>> = (0..r).map(|_| (0..c).map(|_| BigInt::from(small_int(rng, 20))).collect()).collect();
    if r > 1 && rng.gen_bool(0.3) {
        // Force a rank drop.
        let k = BigInt::from(small_int(rng, 3));
        m[r - 1] = m[0].iter().map(|x| x * &k).collect();
    }
    let d = smith_normal_form(&m, r, c);
    Outcome::check(d.verify(&m), "Smith decomposition fails verification", || {
        json!({"matrix": crate::io::int_matrix_to_json(&m)})
    })
}

/// Invariant-factor lists `t₁ | t₂ | …` of all finite commutative groups
/// of order at most `n`, the trivial group included.
pub fn groups_up_to(n: u64) -> Vec<Vec<u64>> {
    fn rec(prev: u64, order: u64, n: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        out.push(cur.clone());
        let mut t = prev;
        while order * t <= n {
            cur.push(t);
            rec(t, order * t, n, cur, out);
            cur.pop();
            t += prev;
        }
    }
    let mut out = Vec::new();
    for first in 2..=n {
        let mut cur = vec![first];
        rec(first, first, n, &mut cur, &mut out);
    }
    out.push(Vec::new());
    out.sort();
    out
}

const TENSOR_D_MAX: u64 = 12;

fn exponent(orders: &[u64]) -> u64 {
    orders.iter().fold(1, |acc, &t| acc.lcm(&t))
}

fn elements(orders: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &t in orders {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..t).map(move |x| {
                    let mut v = e.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

fn scale(orders: &[u64], x: &[u64], k: u64) -> Vec<u64> {
    x.iter().zip(orders).map(|(a, t)| (a * k) % t).collect()
}

/// For each `k` dividing the exponent of `A = ⊕ Z/tᵢ` (and `k = 0`), the
/// number of `x ∈ A/dA` with `k·x = 0`, counted by enumerating `A`.
pub fn tensor_brute_force(orders: &[u64], d: u64) -> BTreeMap<u64, u64> {
    let all = elements(orders);
    let da: BTreeSet<Vec<u64>> = all.iter().map(|x| scale(orders, x, d)).collect();
    let e = exponent(orders);
    let mut out = BTreeMap::new();
    for k in std::iter::once(0).chain((1..=e).filter(|k| e.is_multiple_of(*k))) {
        let hits = all.iter().filter(|x| da.contains(&scale(orders, x, k))).count() as u64;
        out.insert(k, hits / da.len() as u64);
    }
    out
}

fn tensor_case(_rng: &mut Rng8, case: usize) -> Outcome {
    thread_local! {
        static GROUPS: Vec<Vec<u64>> = groups_up_to(200);
    }
    GROUPS.with(|groups| {
        let per = (TENSOR_D_MAX + 1) as usize;
        let orders = &groups[(case / per) % groups.len()];
        let d = (case % per) as u64;
        let inv = tensor_mod_d(&Presentation::diagonal(&orders.iter().map(|&t| t as i64).collect::<Vec<_>>()), d).invariants();
        let brute = tensor_brute_force(orders, d);
        let from_snf: BTreeMap<u64, u64> = brute
            .keys()
            .map(|&k| {
                let count = inv.torsion.iter().fold(BigInt::one(), |acc, t| {
                    let kk = BigInt::from(k);
                    acc * if k == 0 { t.clone() } else { kk.gcd(t) }
                });
                (k, count.to_u64().unwrap_or(u64::MAX))
            })
            .collect();
        let ok = inv.free_rank == 0 && from_snf == brute;
        Outcome::check(ok, "A/dA differs from enumeration", || {
            json!({"orders": orders, "d": d, "snf": inv.to_string()})
        })
    })
}

/// Case count covering every pair of group and `d` once.
pub fn tensor_case_count() -> usize {
    groups_up_to(200).len() * (TENSOR_D_MAX + 1) as usize
}

fn mono_condition(rng: &mut Rng8, _case: usize) -> Outcome {
    let pick = |rng: &mut Rng8| -> Vec<u64> {
        loop {
            let v: Vec<u64> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(1..=14)).collect();
            if v.iter().product::<u64>() <= 200 {
                return v;
            }
        }
    };
    let b = pick(rng);
    let a = pick(rng);
    // f_ij · b_j ≡ 0 mod a_i.
    let matrix: Vec<Vec<BigInt>> = a
        .iter()
        .map(|&ai| {
            b.iter()
                .map(|&bj| BigInt::from((ai / ai.gcd(&bj)) * rng.gen_range(0..=4)))
                .collect()
        })
        .collect();
    let pres = |o: &[u64]| Presentation::diagonal(&o.iter().map(|&t| t as i64).collect::<Vec<_>>());
    let hom = match GroupHom::new(pres(&b), pres(&a), matrix.clone()) {
        Ok(h) => h,
        Err(e) => return Outcome::fail(format!("valid hom rejected: {e}"), json!({"a": a, "b": b})),
    };
    let verdicts = check_mono_condition(&hom, TENSOR_D_MAX);
    let eb = elements(&b);
    let ea = elements(&a);
    for v in verdicts {
        let d = v.d;
        let da: BTreeSet<Vec<u64>> = ea.iter().map(|x| scale(&a, x, d)).collect();
        let db: BTreeSet<Vec<u64>> = eb.iter().map(|x| scale(&b, x, d)).collect();
        let image = |x: &[u64]| -> Vec<u64> {
            matrix
                .iter()
                .zip(&a)
                .map(|(row, ai)| {
                    row.iter().zip(x).map(|(f, xj)| (f.to_u64().expect("small") * xj) % ai).sum::<u64>() % ai
                })
                .collect()
        };
        let in_kernel = eb.iter().filter(|x| da.contains(&image(x))).count() as u64;
        let order = in_kernel / db.len() as u64;
        let reported = v.kernel.order().and_then(|o| o.to_u64());
        if reported != Some(order) || v.univalent != (order == 1) {
            return Outcome::fail(
                "kernel of f_d differs from enumeration",
                json!({"a": a, "b": b, "matrix": crate::io::int_matrix_to_json(&matrix), "d": d, "brute": order}),
            );
        }
    }
    Outcome::Pass
}

fn boundary_squared(rng: &mut Rng8, case: usize) -> Outcome {
    let groups = standard_groups();
    let group = &groups[case % groups.len()];
    let m = 2 + (case / groups.len()) % 2;
    let dim = if m == 2 { rng.gen_range(2..=3) } else { 3 };
    let k = random_grid(rng, dim, 2, dim);
    let s = random_chain(rng, &k, m, group);
    attempt(|| {
        let bb = s.boundary()?.boundary()?;
        Ok(Outcome::check(bb.is_zero(), "∂∂S ≠ 0", || chain_json(&s)))
    })
}

fn slice_identity(rng: &mut Rng8, case: usize) -> Outcome {
    let m = 1 + case % 3;
    let dim = if m == 3 { 3 } else { rng.gen_range(m..=m + 1) };
    let n = dim;
    let k = random_grid(rng, dim, 2, n);
    let group = random_group(rng);
    let s = random_chain(rng, &k, m, &group);
    let f = random_functional(rng, n);
    let values: Vec<Q> = k.vertices().iter().map(|v| f.apply(v)[0].clone()).collect();
    let y = regular_level(rng, &values);
    attempt(|| {
        let rf = Refinement::new(&k, &f, &y)?;
        let a = rf.transfer(&s)?;
        let b = rf.transfer(&s.boundary()?)?;
        let lhs = a.upper.boundary()?;
        let rhs = a.slice.clone().expect("m ≥ 1").add(&b.upper)?;
        let inputs = || json!({"chain": chain_json(&s), "f": map_json(&f), "y": fmt_q(&y)});
        if lhs != rhs {
            return Ok(Outcome::fail("boundary-slice identity fails", inputs()));
        }
        let (before, after) = (s.mass().interval, a.refined.mass().interval);
        Ok(Outcome::check(before.overlaps(&after), "refinement changes mass", inputs))
    })
}

fn leibniz(rng: &mut Rng8, case: usize) -> Outcome {
    let split = case % 3;
    let m = if split == 2 { 0 } else { rng.gen_range(1..=2) };
    let mu = if split == 1 { 0 } else { rng.gen_range(1..=2) };
    let k1 = random_grid(rng, m.max(1), 2, m.max(1));
    let k2 = random_grid(rng, mu.max(1), 2, mu.max(1));
    let s = random_chain(rng, &k1, m, &NormedGroup::Integers);
    let group = random_group(rng);
    let t = random_chain(rng, &k2, mu, &group);
    attempt(|| {
        let pc = ProductComplex::new(&k1, &k2);
        let lhs = pc.product(&s, &t)?.boundary()?;
        let rhs = match split {
            0 => {
                let second = pc.product(&s, &t.boundary()?)?;
                let second = if m % 2 == 1 { second.neg() } else { second };
                pc.product(&s.boundary()?, &t)?.add(&second)?
            }
            1 => pc.product(&s.boundary()?, &t)?,
            _ => pc.product(&s, &t.boundary()?)?,
        };
        Ok(Outcome::check(lhs == rhs, format!("Leibniz rule fails (m = {m}, μ = {mu})"), || {
            json!({"S": chain_json(&s), "T": chain_json(&t)})
        }))
    })
}

fn homotopy(rng: &mut Rng8, case: usize) -> Outcome {
    let m = case % 3;
    let k = random_grid(rng, m.max(1), if m == 2 { 1 } else { 2 }, m.max(1));
    let group = random_group(rng);
    let s = random_chain(rng, &k, m, &group);
    let p = 2 * m + 3;
    let f = random_affine(rng, k.ambient_dim(), p, 3);
    let g = random_affine(rng, k.ambient_dim(), p, 3);
    let t = [qi(1), q(1, 2), qi(2), q(3, 2)].choose(rng).expect("nonempty").clone();
    let inputs = || json!({"S": chain_json(&s), "f": map_json(&f), "g": map_json(&g), "t": fmt_q(&t)});
    match homotopy_fill(&f, &g, &s, &t) {
        Err(Error::OverlayUnsupported(msg)) => Outcome::Skip(msg),
        Err(e) => Outcome::fail(format!("unexpected error: {e}"), inputs()),
        Ok(h) => attempt(|| {
            if !h.identity_holds()? {
                return Ok(Outcome::fail("homotopy formula fails", inputs()));
            }
            let gt = f.interpolate(&g, &t)?;
            let top = push_forward(&s, &gt, PushTarget::Auto)?;
            let bottom = push_forward(&s, &f, PushTarget::Auto)?;
            Ok(Outcome::check(
                h.top.geometric_eq(&top) && h.bottom.geometric_eq(&bottom),
                "ends of the homotopy differ from direct push-forwards",
                inputs,
            ))
        }),
    }
}

fn push_functoriality(rng: &mut Rng8, case: usize) -> Outcome {
    let m = 1 + case % 2;
    let k = random_grid(rng, m, 2, m);
    let group = random_group(rng);
    let s = random_chain(rng, &k, m, &group);
    let p = rng.gen_range(m..=m + 2);
    let r = rng.gen_range(m..=m + 2);
    let f = random_affine(rng, m, p, 2);
    let g = random_affine(rng, p, r, 2);
    let inputs = || json!({"S": chain_json(&s), "F": map_json(&f), "G": map_json(&g)});
    let composed = g.compose(&f).and_then(|gf| push_forward(&s, &gf, PushTarget::Auto));
    let iterated = push_forward(&s, &f, PushTarget::Auto).and_then(|fs| push_forward(&fs, &g, PushTarget::Auto));
    match (composed, iterated) {
        (Ok(a), Ok(b)) => Outcome::check(a.geometric_eq(&b), "(G∘F)#S ≠ G#(F#S)", inputs),
        (Err(Error::OverlayUnsupported(m)), _) | (_, Err(Error::OverlayUnsupported(m))) => Outcome::Skip(m),
        (Err(e), _) | (_, Err(e)) => Outcome::fail(format!("unexpected error: {e}"), inputs()),
    }
}

fn torsion_exponent(g: &NormedGroup) -> BigInt {
    match g {
        NormedGroup::Cyclic(d) => d.clone(),
        NormedGroup::DirectSum(parts) => parts.iter().fold(BigInt::one(), |acc, p| acc.lcm(&torsion_exponent(p))),
        _ => BigInt::one(),
    }
}

fn rho_mono(rng: &mut Rng8, _case: usize) -> Outcome {
    let group = random_fg_group(rng);
    let k = random_grid(rng, 2, 2, 2);
    let m = rng.gen_range(1..=2);
    let e = torsion_exponent(&group);
    let mut terms = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let h = GroupElement {
            group: group.clone(),
            value: random_value(rng, &group),
        };
        let mut s = random_chain(rng, &k, m, &NormedGroup::Integers);
        if rng.gen_bool(0.5) {
            s = s.mul_int(&e);
        }
        if rng.gen_bool(0.3) {
            terms.push((s.clone(), h.neg()));
        }
        terms.push((s, h));
    }
    attempt(|| {
        let (s, h) = &terms[0];
        let lhs = s.rho_scale(h)?.boundary()?;
        let rhs = s.boundary()?.rho_scale(h)?;
        let inputs = || {
            json!({
                "group": group.to_string(),
                "terms": terms.iter().map(|(s, h)| json!({"S": chain_json(s), "h": h.value.to_string()})).collect::<Vec<_>>(),
            })
        };
        if lhs != rhs {
            return Ok(Outcome::fail("∂(S·g) ≠ (∂S)·g", inputs()));
        }
        let verdict = rho_mono_check(&terms, &group)?;
        Ok(Outcome::check(!verdict.is_violation(), "zero chain with nonzero tensor", inputs))
    })
}

fn mod_d(rng: &mut Rng8, case: usize) -> Outcome {
    let m = 1 + case % 3;
    let d = 2 + ((case / 3) % 7) as u64;
    let dim = if m == 3 { 3 } else { rng.gen_range(m..=3.min(m + 1)) };
    let k = random_grid(rng, dim, 2, dim);
    let mut s = random_chain(rng, &k, m, &NormedGroup::Integers);
    s = s.mul_int(&BigInt::from(rng.gen_range(1..=7)));
    attempt(|| {
        let a = s.boundary()?.mod_d_reduce(d)?;
        let b = s.mod_d_reduce(d)?.boundary()?;
        let killed = s.mul_int(&BigInt::from(d)).mod_d_reduce(d)?.is_zero();
        Ok(Outcome::check(a == b && killed, format!("reduction mod {d} misbehaves"), || chain_json(&s)))
    })
}

fn random_plane(rng: &mut Rng8, n: usize, m: usize) -> MultiVector {
    loop {
        let mut z = MultiVector::scalar(n, Q::one());
        for _ in 0..m {
            let v: Vec<Q> = (0..n).map(|_| qi(small_int(rng, 3))).collect();
            z = z.wedge(&MultiVector::vector(&v)).expect("same dimension");
        }
        if !z.is_zero() {
            return z;
        }
    }
}

fn random_linear(rng: &mut Rng8, source: usize, target: usize) -> LinearMap {
    let m = (0..target).map(|_| (0..source).map(|_| qi(small_int(rng, 3))).collect()).collect();
    LinearMap::new(source, target, m).expect("shape")
}

fn bundle_norms(rng: &mut Rng8, _case: usize) -> Outcome {
    let n = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=n);
    let group = random_group(rng);
    let g = GroupElement {
        group: group.clone(),
        value: random_value(rng, &group),
    };
    let zeta = random_plane(rng, n, m);
    let other = random_plane(rng, n, m);
    let inputs = || {
        json!({
            "zeta": format!("{zeta:?}"),
            "other": format!("{other:?}"),
            "g": g.value.to_string(),
            "group": group.to_string(),
        })
    };
    attempt(|| {
        let gamma = BundleElement::make(&zeta, &g)?;
        let norm = gamma.norm();
        let target = rng.gen_range(m..=5);
        let h = random_linear(rng, n, target);
        match gamma.push(&h) {
            Ok(p) if p.norm() != norm => return Ok(Outcome::fail("|h#γ| ≠ |γ|", inputs())),
            Ok(_) | Err(Error::RankCollapse) => {}
            Err(e) => return Err(e),
        }
        let kappa = rng.gen_range(1..=m);
        let h = random_linear(rng, n, kappa);
        match gamma.slice(&h) {
            Ok(s) if s.norm() != norm => return Ok(Outcome::fail("|γ⌊h| ≠ |γ|", inputs())),
            Ok(_) | Err(Error::CorankCollapse) => {}
            Err(e) => return Err(e),
        }
        let e = small_int(rng, 2);
        let delta = BundleElement::make(&random_plane(rng, n, m), &GroupElement::int(e))?;
        let scaled = delta.scale(&g)?.norm();
        let bound = delta.norm() * g.norm();
        if scaled > bound || (e.abs() <= 1 && scaled != bound) {
            return Ok(Outcome::fail("|δ·g| law fails", inputs()));
        }
        let nu = rng.gen_range(1..=3);
        let mu = rng.gen_range(0..=nu);
        let other_gamma = BundleElement::make(&random_plane(rng, nu, mu), &g)?;
        let cross = BundleElement::product(&delta, &other_gamma)?.norm();
        let bound = delta.norm() * other_gamma.norm();
        if cross > bound || (e.abs() <= 1 && cross != bound) {
            return Ok(Outcome::fail("|δ×γ| law fails", inputs()));
        }
        let (a, b) = (gamma.plane(), BundleElement::make(&other, &g)?.plane().clone());
        let lhs = a.alpha_distance_sq(&b)?;
        let exact = a.alpha_rhs_exact(&b)?;
        let enclosure = a.alpha_rhs_interval(&b)?;
        Ok(Outcome::check(
            lhs == exact && Interval::from_q(&lhs).overlaps(&enclosure) && enclosure.width() < 1e-10,
            "α-metric identity fails",
            inputs,
        ))
    })
}

fn constancy(rng: &mut Rng8, case: usize) -> Outcome {
    let m = 2 + case % 2;
    let n = rng.gen_range(m..=m + 1);
    let k = random_grid(rng, m, if m == 2 { 3 } else { 2 }, n);
    let mut cells: Vec<Vec<usize>> = k.cells(m).to_vec();
    cells.shuffle(rng);
    for c in &mut cells {
        c.shuffle(rng);
    }
    let group = random_group(rng);
    let g = GroupElement {
        group: group.clone(),
        value: random_nonzero_value(rng, &group),
    };
    attempt(|| {
        let o = coherent_orientation(&k, &cells)?;
        let t = fundamental_chain(&k, &cells, &o, &g)?;
        let inputs = || json!({"T": chain_json(&t), "cells": cells, "orientation": o});
        // Interior faces of the fundamental chain carry no boundary.
        let b = t.boundary()?;
        if b.terms().any(|(f, _)| k.cofaces(f).len() == 2) {
            return Ok(Outcome::fail("fundamental chain has interior boundary", inputs()));
        }
        if constancy_solve(&t, &cells, &o)? != ConstancyOutcome::Constant(g.clone()) {
            return Ok(Outcome::fail("constant coefficient not recovered", inputs()));
        }
        let i = rng.gen_range(0..cells.len());
        let mut perturbed = t.clone();
        perturbed.add_term(&cells[i], random_nonzero_value(rng, &group))?;
        let mut target = cells[i].clone();
        target.sort_unstable();
        match constancy_solve(&perturbed, &cells, &o)? {
            ConstancyOutcome::Inconsistent { face } => {
                let witness = perturbed.boundary()?;
                let ok = face.iter().all(|v| target.contains(v))
                    && k.cofaces(&face).len() == 2
                    && !group.is_zero(&witness.coefficient(&face));
                Ok(Outcome::check(ok, "wrong witness face", || json!({"face": face, "perturbed": chain_json(&perturbed)})))
            }
            ConstancyOutcome::Constant(_) => Ok(Outcome::fail("perturbation not detected", json!({"perturbed": chain_json(&perturbed)}))),
        }
    })
}

/// A rational chain on a complex with at most three top cells: a 1-chain
/// on 1 to 3 triangles of a grid, or a 0-chain on up to 3 segments.
pub fn flat_fixture(rng: &mut Rng8) -> GChain {
    let (k, m) = if rng.gen_bool(0.25) {
        let count = rng.gen_range(1..=3);
        let mut x = qi(0);
        let mut pts = vec![vec![x.clone()]];
        for _ in 0..count {
            x += q(rng.gen_range(1..=6), rng.gen_range(1..=3));
            pts.push(vec![x.clone()]);
        }
        let cells = (0..count).map(|i| vec![i, i + 1]).collect();
        (Arc::new(SimplicialComplex::new(pts, cells).expect("segments")), 0)
    } else {
        let grid = random_grid(rng, 2, 2, 2);
        let mut tops = grid.cells(2).to_vec();
        tops.shuffle(rng);
        tops.truncate(rng.gen_range(1..=3.min(tops.len())));
        (Arc::new(SimplicialComplex::new(grid.vertices().to_vec(), tops).expect("subcomplex")), 1)
    };
    let group = NormedGroup::Rationals;
    loop {
        let mut s = GChain::zero(k.clone(), m, group.clone());
        for c in k.cells(m) {
            if rng.gen_bool(0.5) {
                s.add_term(c, Value::Rat(small_q(rng, 4, 3))).expect("cell of the complex");
            }
        }
        if !s.is_zero() {
            return s;
        }
    }
}

fn flatnorm(rng: &mut Rng8, _case: usize) -> Outcome {
    let s = flat_fixture(rng);
    attempt(|| {
        let problem = FlatNormProblem::new(s.clone());
        let d = flat_norm(&problem)?;
        let oracle = enumerate_flat_norm(&s)?;
        let cert = d.certificate(&problem)?;
        let inputs = || json!({"S": chain_json(&s), "value": d.value, "oracle": oracle});
        if (d.value - oracle).abs() > 1e-9 {
            return Ok(Outcome::fail("LP optimum differs from enumeration", inputs()));
        }
        if !d.reproduces(&s)? {
            return Ok(Outcome::fail("Q + ∂R ≠ S", inputs()));
        }
        Ok(Outcome::check(
            d.value <= s.mass().mass + 1e-9 && cert.max_violation < 1e-7 && (cert.dual_objective - d.value).abs() < 1e-7,
            "bound or certificate fails",
            inputs,
        ))
    })
}

fn flat_triangle(rng: &mut Rng8, _case: usize) -> Outcome {
    let k = random_grid(rng, 2, 2, 2);
    let chains: Vec<GChain> = (0..3).map(|_| random_chain(rng, &k, 1, &NormedGroup::Rationals)).collect();
    attempt(|| {
        let (a, b, c) = (&chains[0], &chains[1], &chains[2]);
        let ab = flat_distance(a, b)?;
        let bc = flat_distance(b, c)?;
        let ac = flat_distance(a, c)?;
        let ba = flat_distance(b, a)?;
        let aa = flat_distance(a, a)?;
        Ok(Outcome::check(
            ac <= ab + bc + 1e-9 && (ab - ba).abs() < 1e-9 && aa == 0.0,
            "flat distance is not a pseudometric",
            || json!({"chains": chains.iter().map(chain_json).collect::<Vec<_>>()}),
        ))
    })
}

const UNIT_2: [(i64, i64, i64); 6] = [(1, 0, 1), (0, 1, 1), (3, 4, 5), (-4, 3, 5), (5, -12, 13), (8, 15, 17)];
const UNIT_3: [(i64, i64, i64, i64); 4] = [(1, 0, 0, 1), (2, 2, 1, 3), (2, 3, 6, 7), (-1, 2, -2, 3)];

/// A 2-chain in `R²` or `R³`, a functional with unit gradient, and the
/// exact weighted mass `Σ |g|·vol·Jac` as a float.
pub fn coarea_instance(rng: &mut Rng8) -> (GChain, AffineMap, f64) {
    let n = rng.gen_range(2..=3);
    let k = random_grid(rng, 2, 2, n);
    let group = if rng.gen_bool(0.5) { NormedGroup::Integers } else { NormedGroup::Rationals };
    let s = random_chain(rng, &k, 2, &group);
    let grad: Point = if n == 2 {
        let (a, b, c) = *UNIT_2.choose(rng).expect("nonempty");
        vec![q(a, c), q(b, c)]
    } else {
        let (a, b, c, d) = *UNIT_3.choose(rng).expect("nonempty");
        vec![q(a, d), q(b, d), q(c, d)]
    };
    let f = AffineMap::functional(grad.clone(), small_q(rng, 2, 3)).expect("one row");
    let mut expected = 0.0;
    for (cell, v) in s.terms() {
        let pts = k.points(cell);
        let edges: Vec<Point> = pts[1..].iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
        let gram: Vec<Vec<Q>> = edges.iter().map(|a| edges.iter().map(|b| crate::rational::dot(a, b)).collect()).collect();
        let w: Vec<Q> = edges.iter().map(|e| crate::rational::dot(e, &grad)).collect();
        let x = solve(&gram, &w).expect("independent edges");
        let jac_sq = crate::rational::dot(&w, &x);
        let det = &gram[0][0] * &gram[1][1] - &gram[0][1] * &gram[1][0];
        let vol = Interval::sqrt_q(&det).mid() / 2.0;
        expected += to_f64(&group.norm(v)) * vol * Interval::sqrt_q(&jac_sq).mid();
    }
    (s, f, expected)
}

/// `∫ M⟨S,f,y⟩ dy` by two-point Gauss rules between consecutive vertex
/// levels, with at least `levels` sample levels in total.
pub fn coarea_quadrature(s: &GChain, f: &AffineMap, levels: usize) -> Result<f64> {
    let mut breaks: Vec<Q> = s.support_vertices().iter().map(|&v| f.apply(s.complex().vertex(v))[0].clone()).collect();
    breaks.sort();
    breaks.dedup();
    let intervals = breaks.len().saturating_sub(1);
    if intervals == 0 {
        return Ok(0.0);
    }
    let pieces = levels.div_ceil(2 * intervals).max(1);
    let node = 0.5 / 3f64.sqrt();
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (to_f64(&w[0]), to_f64(&w[1]));
        let h = (b - a) / pieces as f64;
        for i in 0..pieces {
            let mid = a + h * (i as f64 + 0.5);
            for y in [mid - node * h, mid + node * h] {
                let yq = Q::from_float(y).ok_or_else(|| Error::InvalidValue(format!("level {y}")))?;
                total += 0.5 * h * slice(s, f, &yq)?.mass().interval.mid();
            }
        }
    }
    Ok(total)
}

fn coarea(rng: &mut Rng8, _case: usize) -> Outcome {
    let (s, f, expected) = coarea_instance(rng);
    attempt(|| {
        let integral = coarea_quadrature(&s, &f, 512)?;
        let rel = (integral - expected).abs() / expected.abs().max(1e-300);
        Ok(Outcome::check(rel < 1e-6, format!("coarea mismatch: {integral} vs {expected}"), || {
            json!({"S": chain_json(&s), "f": map_json(&f)})
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_enumeration() {
        let g = groups_up_to(8);
        // 1, 2, 3, 4 (two), 5, 6, 7, 8 (three).
        assert_eq!(g.len(), 11);
        assert!(g.contains(&vec![2, 4]));
        assert!(g.contains(&vec![2, 2, 2]));
        assert!(!g.contains(&vec![2, 3]));
    }

    #[test]
    fn tensor_suite_covers_every_pair() {
        let suite = ALL.iter().find(|s| s.name == "tensor-mod-d").unwrap();
        assert_eq!(suite.default_cases, tensor_case_count());
    }

    #[test]
    fn brute_force_tensor_examples() {
        // Z/6 ⊗ Z/4 = Z/2.
        assert_eq!(tensor_brute_force(&[6], 4), BTreeMap::from([(0, 2), (1, 1), (2, 2), (3, 1), (6, 2)]));
        // Z/3 ⊕ Z/3 mod 3 is itself.
        assert_eq!(tensor_brute_force(&[3, 3], 3)[&0], 9);
    }

    #[test]
    fn mobius_rim_is_one_cycle() {
        let k = mobius_band();
        let s = GChain::from_terms(
            k.clone(),
            2,
            NormedGroup::cyclic(2).unwrap(),
            k.cells(2).iter().map(|c| (c.clone(), int(1))),
        )
        .unwrap();
        assert_eq!(s.boundary().unwrap().len(), 5);
    }
}
