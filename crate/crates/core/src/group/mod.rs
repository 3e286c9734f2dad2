//! Normed commutative coefficient groups.
//!
//! A [`NormedGroup`] describes the carrier and the norm; a [`Value`] is a
//! bare element in canonical form; a [`GroupElement`] pairs the two. Chains
//! store a single group and bare values per cell.
//!
//! Supported kinds and their norms:
//!
//! | kind                 | carrier          | norm                              |
//! |----------------------|------------------|-----------------------------------|
//! | `Integers`           | `Z`              | `|k|`                             |
//! | `Cyclic(d)`          | `Z/dZ`, `[0, d)` | `min(k, d − k)` (distance to `dZ`)|
//! | `Rationals`          | `Q`              | `|x|`                             |
//! | `DirectSum(parts)`   | product          | sum of component norms            |
//! | `QuotientLattice`    | `Z^r / H`        | `dist_1(·, H)` (quotient norm)    |

pub mod presentation;
pub mod smith;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_q, Q};
use presentation::Presentation;
use smith::{HermiteBasis, IntMatrix};

/// Largest lattice rank for which quotient norms are enumerated.
pub const MAX_LATTICE_RANK: usize = 4;

/// `Z^rank` modulo the sublattice spanned by `generators`.
#[derive(Clone, Debug)]
pub struct LatticeQuotient {
    pub rank: usize,
    pub generators: IntMatrix,
    basis: HermiteBasis,
}

impl PartialEq for LatticeQuotient {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.basis == other.basis
    }
}
impl Eq for LatticeQuotient {}

impl std::hash::Hash for LatticeQuotient {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.basis.hash(state);
    }
}

impl LatticeQuotient {
    pub fn basis(&self) -> &HermiteBasis {
        &self.basis
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum NormedGroup {
    Integers,
    Cyclic(BigInt),
    Rationals,
    DirectSum(Vec<NormedGroup>),
    QuotientLattice(Arc<LatticeQuotient>),
}

/// Bare group element in canonical form for its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Rat(Q),
    Tuple(Vec<Value>),
    Vector(Vec<BigInt>),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(k) => write!(f, "{k}"),
            Value::Rat(x) => write!(f, "{}", fmt_q(x)),
            Value::Tuple(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "({})", s.join(","))
            }
            Value::Vector(v) => {
                let s: Vec<String> = v.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", s.join(","))
            }
        }
    }
}

impl fmt::Display for NormedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormedGroup::Integers => write!(f, "Z"),
            NormedGroup::Cyclic(d) => write!(f, "Z/{d}"),
            NormedGroup::Rationals => write!(f, "Q"),
            NormedGroup::DirectSum(parts) => {
                let s: Vec<String> = parts.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", s.join(" + "))
            }
            NormedGroup::QuotientLattice(l) => write!(f, "Z^{}/H(rank {})", l.rank, l.basis.rank()),
        }
    }
}

impl NormedGroup {
    pub fn cyclic(d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidValue("cyclic order must be positive".into()));
        }
        Ok(NormedGroup::Cyclic(BigInt::from(d)))
    }

    pub fn direct_sum(parts: Vec<NormedGroup>) -> Self {
        NormedGroup::DirectSum(parts)
    }

    /// `Z^rank / ⟨generators⟩`; both ranks are capped at
    /// [`MAX_LATTICE_RANK`] so that quotient norms stay enumerable.
    pub fn quotient_lattice(rank: usize, generators: IntMatrix) -> Result<Self> {
        if rank > MAX_LATTICE_RANK {
            return Err(Error::RankTooLarge {
                rank,
                max: MAX_LATTICE_RANK,
            });
        }
        if generators.iter().any(|g| g.len() != rank) {
            return Err(Error::DimensionMismatch(format!(
                "lattice generators must have {rank} entries"
            )));
        }
        let basis = HermiteBasis::new(&generators, rank);
        Ok(NormedGroup::QuotientLattice(Arc::new(LatticeQuotient {
            rank,
            generators,
            basis,
        })))
    }

    pub fn zero(&self) -> Value {
        match self {
            NormedGroup::Integers | NormedGroup::Cyclic(_) => Value::Int(BigInt::zero()),
            NormedGroup::Rationals => Value::Rat(Q::zero()),
            NormedGroup::DirectSum(parts) => Value::Tuple(parts.iter().map(|p| p.zero()).collect()),
            NormedGroup::QuotientLattice(l) => Value::Vector(vec![BigInt::zero(); l.rank]),
        }
    }

    /// Reduces a raw value into canonical form, checking its shape.
    pub fn canonicalize(&self, v: Value) -> Result<Value> {
        let bad = |v: &Value| Error::InvalidValue(format!("{v} is not an element of {self}"));
        match (self, v) {
            (NormedGroup::Integers, v @ Value::Int(_)) => Ok(v),
            (NormedGroup::Cyclic(d), Value::Int(k)) => Ok(Value::Int(k.mod_floor(d))),
            (NormedGroup::Rationals, v @ Value::Rat(_)) => Ok(v),
            (NormedGroup::Rationals, Value::Int(k)) => Ok(Value::Rat(Q::from_integer(k))),
            (NormedGroup::DirectSum(parts), Value::Tuple(vals)) if vals.len() == parts.len() => {
                Ok(Value::Tuple(
                    parts
                        .iter()
                        .zip(vals)
                        .map(|(p, v)| p.canonicalize(v))
                        .collect::<Result<_>>()?,
                ))
            }
            (NormedGroup::QuotientLattice(l), Value::Vector(v)) if v.len() == l.rank => {
                Ok(Value::Vector(l.basis.reduce(&v)))
            }
            (_, v) => Err(bad(&v)),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.canonicalize(v.clone()).is_ok_and(|c| &c == v)
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::Int(k) => k.is_zero(),
            Value::Rat(x) => x.is_zero(),
            Value::Tuple(parts) => match self {
                NormedGroup::DirectSum(gs) => gs.iter().zip(parts).all(|(g, p)| g.is_zero(p)),
                _ => false,
            },
            Value::Vector(x) => x.iter().all(|c| c.is_zero()),
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (NormedGroup::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (NormedGroup::Cyclic(d), Value::Int(x), Value::Int(y)) => Value::Int((x + y).mod_floor(d)),
            (NormedGroup::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (NormedGroup::DirectSum(gs), Value::Tuple(x), Value::Tuple(y)) => Value::Tuple(
                gs.iter()
                    .zip(x.iter().zip(y))
                    .map(|(g, (p, q))| g.add(p, q))
                    .collect(),
            ),
            (NormedGroup::QuotientLattice(l), Value::Vector(x), Value::Vector(y)) => {
                let s: Vec<BigInt> = x.iter().zip(y).map(|(p, q)| p + q).collect();
                Value::Vector(l.basis.reduce(&s))
            }
            _ => panic!("value shape does not match group {self}"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        self.mul_int(a, &-BigInt::one())
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    /// The `Z`-module action `k · a`.
    pub fn mul_int(&self, a: &Value, k: &BigInt) -> Value {
        match (self, a) {
            (NormedGroup::Integers, Value::Int(x)) => Value::Int(x * k),
            (NormedGroup::Cyclic(d), Value::Int(x)) => Value::Int((x * k).mod_floor(d)),
            (NormedGroup::Rationals, Value::Rat(x)) => Value::Rat(x * Q::from_integer(k.clone())),
            (NormedGroup::DirectSum(gs), Value::Tuple(x)) => {
                Value::Tuple(gs.iter().zip(x).map(|(g, p)| g.mul_int(p, k)).collect())
            }
            (NormedGroup::QuotientLattice(l), Value::Vector(x)) => {
                let s: Vec<BigInt> = x.iter().map(|p| p * k).collect();
                Value::Vector(l.basis.reduce(&s))
            }
            _ => panic!("value shape does not match group {self}"),
        }
    }

    /// Exact group norm.
    pub fn norm(&self, a: &Value) -> Q {
        match (self, a) {
            (NormedGroup::Integers, Value::Int(x)) => Q::from_integer(x.abs()),
            (NormedGroup::Cyclic(d), Value::Int(x)) => {
                let r = x.mod_floor(d);
                let s = d - &r;
                Q::from_integer(r.min(s))
            }
            (NormedGroup::Rationals, Value::Rat(x)) => x.abs(),
            (NormedGroup::DirectSum(gs), Value::Tuple(x)) => gs
                .iter()
                .zip(x)
                .fold(Q::zero(), |acc, (g, p)| acc + g.norm(p)),
            (NormedGroup::QuotientLattice(l), Value::Vector(x)) => {
                Q::from_integer(lattice_distance(&l.basis, x))
            }
            _ => panic!("value shape does not match group {self}"),
        }
    }

    /// Presentation as `Z^k / relations`, when finitely generated.
    pub fn presentation(&self) -> Result<Presentation> {
        match self {
            NormedGroup::Integers => Ok(Presentation::free(1)),
            NormedGroup::Cyclic(d) => Ok(Presentation::new(1, vec![vec![d.clone()]])?),
            NormedGroup::Rationals => Err(Error::NotFinitelyGenerated(self.to_string())),
            NormedGroup::DirectSum(parts) => {
                let pres: Vec<Presentation> =
                    parts.iter().map(|p| p.presentation()).collect::<Result<_>>()?;
                let n: usize = pres.iter().map(|p| p.generators).sum();
                let mut relations = Vec::new();
                let mut offset = 0;
                for p in &pres {
                    for r in &p.relations {
                        let mut row = vec![BigInt::zero(); n];
                        row[offset..offset + p.generators].clone_from_slice(r);
                        relations.push(row);
                    }
                    offset += p.generators;
                }
                Presentation::new(n, relations)
            }
            NormedGroup::QuotientLattice(l) => Presentation::new(l.rank, l.generators.clone()),
        }
    }

    /// Integer coordinates of `a` in the generators of [`Self::presentation`].
    pub fn lift(&self, a: &Value) -> Result<Vec<BigInt>> {
        match (self, a) {
            (NormedGroup::Integers | NormedGroup::Cyclic(_), Value::Int(x)) => Ok(vec![x.clone()]),
            (NormedGroup::DirectSum(gs), Value::Tuple(x)) => {
                let mut out = Vec::new();
                for (g, p) in gs.iter().zip(x) {
                    out.extend(g.lift(p)?);
                }
                Ok(out)
            }
            (NormedGroup::QuotientLattice(_), Value::Vector(x)) => Ok(x.clone()),
            _ => Err(Error::NotFinitelyGenerated(self.to_string())),
        }
    }

    /// Inverse of [`Self::lift`] up to relations.
    pub fn project(&self, coords: &[BigInt]) -> Result<Value> {
        match self {
            NormedGroup::Integers | NormedGroup::Cyclic(_) => {
                self.canonicalize(Value::Int(coords[0].clone()))
            }
            NormedGroup::DirectSum(gs) => {
                let mut offset = 0;
                let mut vals = Vec::new();
                for g in gs {
                    let k = g.presentation()?.generators;
                    vals.push(g.project(&coords[offset..offset + k])?);
                    offset += k;
                }
                Ok(Value::Tuple(vals))
            }
            NormedGroup::QuotientLattice(_) => self.canonicalize(Value::Vector(coords.to_vec())),
            NormedGroup::Rationals => Err(Error::NotFinitelyGenerated(self.to_string())),
        }
    }

    /// Whether every element has finite order.
    pub fn is_torsion(&self) -> bool {
        match self {
            NormedGroup::Cyclic(_) => true,
            NormedGroup::DirectSum(gs) => gs.iter().all(|g| g.is_torsion()),
            NormedGroup::QuotientLattice(l) => l.basis.rank() == l.rank,
            _ => false,
        }
    }
}

/// `min_{h ∈ H} |v − h|_1` by bounded enumeration.
///
/// Any improving `h` satisfies `|h|_2 ≤ |h|_1 ≤ 2|v|_1 = R`. Writing
/// `h = cB` for the Hermite basis `B` with Gram matrix `Γ = B Bᵀ`, each
/// coordinate obeys `cᵢ² ≤ R² (Γ⁻¹)ᵢᵢ`, which bounds the search box.
pub fn lattice_distance(basis: &HermiteBasis, v: &[BigInt]) -> BigInt {
    let l1 = |x: &[BigInt]| x.iter().fold(BigInt::zero(), |acc, c| acc + c.abs());
    let mut best = l1(v);
    let k = basis.rank();
    if k == 0 || best.is_zero() {
        return best;
    }
    let radius = Q::from_integer(&best * 2);
    let gram: Vec<Vec<Q>> = basis
        .rows
        .iter()
        .map(|a| {
            basis
                .rows
                .iter()
                .map(|b| Q::from_integer(a.iter().zip(b).map(|(x, y)| x * y).sum()))
                .collect()
        })
        .collect();
    let bounds: Vec<i64> = (0..k)
        .map(|i| {
            let mut e = vec![Q::zero(); k];
            e[i] = Q::one();
            let col = crate::rational::solve(&gram, &e).expect("basis rows are independent");
            let bound_sq = (&radius * &radius * &col[i]).floor().to_integer();
            bound_sq.sqrt().to_i64().expect("enumeration bound fits in i64")
        })
        .collect();
    let mut c = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    loop {
        let mut cand = v.to_vec();
        for (ci, row) in c.iter().zip(&basis.rows) {
            if *ci != 0 {
                let ci = BigInt::from(*ci);
                for (x, y) in cand.iter_mut().zip(row) {
                    *x -= &ci * y;
                }
            }
        }
        let d = l1(&cand);
        if d < best {
            best = d;
        }
        // odometer increment
        let mut i = 0;
        loop {
            if i == k {
                return best;
            }
            if c[i] < bounds[i] {
                c[i] += 1;
                break;
            }
            c[i] = -bounds[i];
            i += 1;
        }
    }
}

/// An element together with its group.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub group: NormedGroup,
    pub value: Value,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}: {})", self.group, self.value)
    }
}

impl GroupElement {
    pub fn new(group: NormedGroup, value: Value) -> Result<Self> {
        let value = group.canonicalize(value)?;
        Ok(GroupElement { group, value })
    }

    pub fn zero(group: &NormedGroup) -> Self {
        GroupElement {
            value: group.zero(),
            group: group.clone(),
        }
    }

    pub fn int(k: i64) -> Self {
        GroupElement {
            group: NormedGroup::Integers,
            value: Value::Int(BigInt::from(k)),
        }
    }

    pub fn cyclic(d: u64, k: i64) -> Result<Self> {
        GroupElement::new(NormedGroup::cyclic(d)?, Value::Int(BigInt::from(k)))
    }

    pub fn rational(x: Q) -> Self {
        GroupElement {
            group: NormedGroup::Rationals,
            value: Value::Rat(x),
        }
    }

    fn check(&self, other: &GroupElement) -> Result<()> {
        if self.group != other.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.group, other.group)));
        }
        Ok(())
    }

    pub fn add(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(GroupElement {
            value: self.group.add(&self.value, &other.value),
            group: self.group.clone(),
        })
    }

    pub fn sub(&self, other: &GroupElement) -> Result<GroupElement> {
        self.check(other)?;
        Ok(GroupElement {
            value: self.group.sub(&self.value, &other.value),
            group: self.group.clone(),
        })
    }

    pub fn neg(&self) -> GroupElement {
        GroupElement {
            value: self.group.neg(&self.value),
            group: self.group.clone(),
        }
    }

    pub fn mul_int(&self, k: &BigInt) -> GroupElement {
        GroupElement {
            value: self.group.mul_int(&self.value, k),
            group: self.group.clone(),
        }
    }

    pub fn norm(&self) -> Q {
        self.group.norm(&self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.group.is_zero(&self.value)
    }
}

/// Quotient norm on `Z^r / H`; errors unless `g` lives in a lattice quotient.
pub fn quotient_norm(group: &NormedGroup, g: &GroupElement) -> Result<Q> {
    match group {
        NormedGroup::QuotientLattice(l) => {
            if &g.group != group {
                return Err(Error::GroupMismatch(format!("{} vs {}", g.group, group)));
            }
            let Value::Vector(v) = &g.value else {
                return Err(Error::InvalidValue(g.value.to_string()));
            };
            if l.rank > MAX_LATTICE_RANK || l.basis.rank() > MAX_LATTICE_RANK {
                return Err(Error::RankTooLarge {
                    rank: l.rank,
                    max: MAX_LATTICE_RANK,
                });
            }
            Ok(Q::from_integer(lattice_distance(&l.basis, v)))
        }
        other => Err(Error::GroupMismatch(format!("{other} is not a lattice quotient"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;

    fn int(k: i64) -> Value {
        Value::Int(BigInt::from(k))
    }

    #[test]
    fn addition_examples() {
        let a = GroupElement::cyclic(4, 3).unwrap();
        assert_eq!(a.add(&a).unwrap(), GroupElement::cyclic(4, 2).unwrap());
        let z = GroupElement::int(5).add(&GroupElement::int(-5)).unwrap();
        assert!(z.is_zero());
        let g = NormedGroup::direct_sum(vec![NormedGroup::Integers, NormedGroup::cyclic(2).unwrap()]);
        let x = GroupElement::new(g.clone(), Value::Tuple(vec![int(1), int(1)])).unwrap();
        let y = GroupElement::new(g.clone(), Value::Tuple(vec![int(2), int(1)])).unwrap();
        assert_eq!(x.add(&y).unwrap().value, Value::Tuple(vec![int(3), int(0)]));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = GroupElement::int(1);
        let b = GroupElement::cyclic(3, 1).unwrap();
        assert!(matches!(a.add(&b), Err(Error::GroupMismatch(_))));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(GroupElement::cyclic(4, 3).unwrap().norm(), qi(1));
        assert_eq!(GroupElement::int(-7).norm(), qi(7));
        let g = NormedGroup::direct_sum(vec![NormedGroup::Integers, NormedGroup::cyclic(3).unwrap()]);
        let x = GroupElement::new(g, Value::Tuple(vec![int(2), int(2)])).unwrap();
        assert_eq!(x.norm(), qi(3));
    }

    #[test]
    fn lattice_quotient_norm() {
        let g = NormedGroup::quotient_lattice(2, smith::to_int_matrix(&[vec![2, 0]])).unwrap();
        let x = GroupElement::new(g.clone(), Value::Vector(vec![BigInt::from(3), BigInt::zero()])).unwrap();
        assert_eq!(quotient_norm(&g, &x).unwrap(), qi(1));
        assert_eq!(quotient_norm(&g, &GroupElement::zero(&g)).unwrap(), qi(0));
        // Canonical representatives: (3,0) ≡ (1,0).
        assert_eq!(x.value, Value::Vector(vec![BigInt::from(1), BigInt::zero()]));
    }

    #[test]
    fn lattice_quotient_reproduces_cyclic() {
        for d in 1..=12u64 {
            let lat = NormedGroup::quotient_lattice(1, vec![vec![BigInt::from(d)]]).unwrap();
            let cyc = NormedGroup::cyclic(d).unwrap();
            for k in -30i64..30 {
                let a = GroupElement::new(lat.clone(), Value::Vector(vec![BigInt::from(k)])).unwrap();
                let b = GroupElement::new(cyc.clone(), int(k)).unwrap();
                assert_eq!(a.norm(), b.norm(), "d={d} k={k}");
            }
        }
    }

    #[test]
    fn rank_cap() {
        let r = NormedGroup::quotient_lattice(5, vec![]);
        assert!(matches!(r, Err(Error::RankTooLarge { .. })));
    }

    #[test]
    fn presentation_of_sum() {
        let g = NormedGroup::direct_sum(vec![NormedGroup::cyclic(6).unwrap(), NormedGroup::Integers]);
        let inv = g.presentation().unwrap().invariants();
        assert_eq!(inv.free_rank, 1);
        assert_eq!(inv.torsion, vec![BigInt::from(6)]);
        let v = Value::Tuple(vec![int(5), int(-2)]);
        let lifted = g.lift(&v).unwrap();
        assert_eq!(g.project(&lifted).unwrap(), v);
    }
}
