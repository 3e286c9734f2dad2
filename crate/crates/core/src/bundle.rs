//! The coefficient bundle: oriented planes paired with group elements,
//! modulo simultaneous negation `(ζ, g) ~ (−ζ, −g)`.
//!
//! Planes are stored projectively as primitive integer Plücker vectors whose
//! first nonzero coefficient (lexicographic index order) is positive. The
//! orientation sign of an input multivector relative to that representative
//! is absorbed into the coefficient, so equal classes compare equal.
//!
//! Slicing by `h : R^n → R^κ` contracts by `(−1)^κ · h*(e^1 ∧ … ∧ e^κ)`.
//! With this sign the chain-level identity
//! `∂(S⌊{f>y}) = ⟨S,f,y⟩ + (∂S)⌊{f>y}` holds verbatim and iterated
//! codimension-one slices agree with a single multi-codimension slice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::{CoVector, LinearMap, MultiVector};
use crate::group::{GroupElement, NormedGroup, Value};
use crate::interval::Interval;
use crate::rational::Q;

/// Canonical projective representative of an oriented plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedPlane {
    rep: MultiVector,
}

impl OrientedPlane {
    /// Splits a nonzero multivector as `sign · c · rep` with `c > 0`.
    pub fn canonical(zeta: &MultiVector) -> Result<(OrientedPlane, i8)> {
        if zeta.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut lcm = BigInt::one();
        for (_, c) in zeta.terms() {
            lcm = lcm.lcm(c.denom());
        }
        let mut gcd = BigInt::zero();
        for (_, c) in zeta.terms() {
            gcd = gcd.gcd(&(c.numer() * (&lcm / c.denom())));
        }
        let factor = Q::new(lcm, gcd);
        let first = zeta.terms().next().map(|(_, c)| c.is_positive()).unwrap_or(true);
        let sign: i8 = if first { 1 } else { -1 };
        let rep = zeta.scale(&(factor * Q::from_integer(BigInt::from(sign))));
        Ok((OrientedPlane { rep }, sign))
    }

    pub fn from_simple(zeta: &MultiVector) -> Result<(OrientedPlane, i8)> {
        if !zeta.is_simple() {
            return Err(Error::NotSimple);
        }
        OrientedPlane::canonical(zeta)
    }

    /// The degree-0 plane of `R^n`.
    pub fn point(dim: usize) -> Self {
        OrientedPlane {
            rep: MultiVector::scalar(dim, Q::one()),
        }
    }

    pub fn representative(&self) -> &MultiVector {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn degree(&self) -> usize {
        self.rep.degree()
    }

    /// `|rep|²`, a positive integer.
    pub fn norm_sq(&self) -> Q {
        self.rep.norm_sq()
    }

    /// Cosine `ζ • ζ′` of the unit representatives, as an exact square
    /// `(r • r′)² / (|r|²|r′|²)` and its sign.
    fn cos_parts(&self, other: &OrientedPlane) -> Result<(Q, Q)> {
        let d = self.rep.dot(&other.rep)?;
        let sq = &d * &d / (self.norm_sq() * other.norm_sq());
        Ok((d, sq))
    }

    /// Enclosure of `ζ • ζ′` for the unit representatives.
    pub fn unit_dot(&self, other: &OrientedPlane) -> Result<Interval> {
        let d = self.rep.dot(&other.rep)?;
        let denom = Interval::sqrt_q(&(self.norm_sq() * other.norm_sq()));
        Ok(Interval::from_q(&d) * denom.recip())
    }

    /// Exact `|α(ζ) − α(ζ′)|²` computed coordinatewise in an orthonormal
    /// basis of the symmetric square, where `α(ζ) = ζ ⊙ ζ / 2` and
    /// `⟨a⊙b, c⊙d⟩ = ⟨a,c⟩⟨b,d⟩ + ⟨a,d⟩⟨b,c⟩`.
    pub fn alpha_distance_sq(&self, other: &OrientedPlane) -> Result<Q> {
        if self.dim() != other.dim() || self.degree() != other.degree() {
            return Err(Error::DegreeError("planes of different shapes".into()));
        }
        let a = self.rep.coordinates();
        let b = other.rep.coordinates();
        let na = self.norm_sq();
        let nb = other.norm_sq();
        let two = Q::from_integer(BigInt::from(2));
        let mut total = Q::zero();
        for i in 0..a.len() {
            let x = &a[i] * &a[i] / &na - &b[i] * &b[i] / &nb;
            total += &x * &x / &two;
            for j in (i + 1)..a.len() {
                let y = &a[i] * &a[j] / &na - &b[i] * &b[j] / &nb;
                total += &y * &y;
            }
        }
        Ok(total)
    }

    /// Exact value of `|ζ − ζ′|²(1 + ζ•ζ′)/2`, which simplifies to
    /// `1 − (ζ•ζ′)²` for unit vectors.
    pub fn alpha_rhs_exact(&self, other: &OrientedPlane) -> Result<Q> {
        let (_, sq) = self.cos_parts(other)?;
        Ok(Q::one() - sq)
    }

    /// Enclosure of `|ζ − ζ′|²(1 + ζ•ζ′)/2` evaluated as written.
    pub fn alpha_rhs_interval(&self, other: &OrientedPlane) -> Result<Interval> {
        let t = self.unit_dot(other)?;
        let one = Interval::point(1.0);
        let two = Interval::point(2.0);
        let diff_sq = two - two * t;
        Ok(diff_sq * (one + t) * Interval::point(0.5))
    }
}

/// A point of the coefficient bundle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleElement {
    plane: OrientedPlane,
    coeff: GroupElement,
}

fn signed(g: &GroupElement, sign: i8) -> GroupElement {
    if sign < 0 {
        g.neg()
    } else {
        g.clone()
    }
}

impl BundleElement {
    /// The class of `(ζ/|ζ|, g)`.
    pub fn make(zeta: &MultiVector, g: &GroupElement) -> Result<Self> {
        let (plane, sign) = OrientedPlane::from_simple(zeta)?;
        Ok(BundleElement {
            plane,
            coeff: signed(g, sign),
        })
    }

    /// Trusts that `zeta` is simple, as for spans of simplices.
    pub fn from_span(zeta: &MultiVector, g: &GroupElement) -> Result<Self> {
        let (plane, sign) = OrientedPlane::canonical(zeta)?;
        Ok(BundleElement {
            plane,
            coeff: signed(g, sign),
        })
    }

    pub fn from_parts(plane: OrientedPlane, coeff: GroupElement) -> Self {
        BundleElement { plane, coeff }
    }

    pub fn plane(&self) -> &OrientedPlane {
        &self.plane
    }

    /// Coefficient relative to the canonical representative.
    pub fn coefficient(&self) -> &GroupElement {
        &self.coeff
    }

    /// Coefficient relative to the orientation of `zeta`, which must span
    /// the same plane.
    pub fn coefficient_along(&self, zeta: &MultiVector) -> Result<GroupElement> {
        let (plane, sign) = OrientedPlane::canonical(zeta)?;
        if plane != self.plane {
            return Err(Error::FiberMismatch);
        }
        Ok(signed(&self.coeff, sign))
    }

    pub fn norm(&self) -> Q {
        self.coeff.norm()
    }

    pub fn is_fiber_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn neg(&self) -> Self {
        BundleElement {
            plane: self.plane.clone(),
            coeff: self.coeff.neg(),
        }
    }

    pub fn fiber_add(&self, other: &BundleElement) -> Result<Self> {
        if self.plane != other.plane {
            return Err(Error::FiberMismatch);
        }
        Ok(BundleElement {
            plane: self.plane.clone(),
            coeff: self.coeff.add(&other.coeff)?,
        })
    }

    /// `δ · g` for an integral `δ`.
    pub fn scale(&self, g: &GroupElement) -> Result<Self> {
        let k = integral_coefficient(&self.coeff)?;
        Ok(BundleElement {
            plane: self.plane.clone(),
            coeff: g.mul_int(k),
        })
    }

    /// `h_# γ`.
    pub fn push(&self, h: &LinearMap) -> Result<Self> {
        let image = h.push(&self.plane.rep)?;
        if image.is_zero() {
            return Err(Error::RankCollapse);
        }
        BundleElement::from_span(&image, &self.coeff)
    }

    /// `γ ⌊ h` for `h : R^n → R^κ`.
    pub fn slice(&self, h: &LinearMap) -> Result<Self> {
        let kappa = h.target();
        if h.source() != self.plane.dim() {
            return Err(Error::DimensionMismatch(format!(
                "slicing map from dimension {} on planes in dimension {}",
                h.source(),
                self.plane.dim()
            )));
        }
        if kappa > self.plane.degree() {
            return Err(Error::DegreeError(format!(
                "codimension {kappa} slice of a degree {} plane",
                self.plane.degree()
            )));
        }
        let mut w = CoVector::wedge_rows(h.source(), h.matrix())?;
        if kappa % 2 == 1 {
            w = w.scale(&-Q::one());
        }
        let kernel = self.plane.rep.interior(&w)?;
        if kernel.is_zero() {
            return Err(Error::CorankCollapse);
        }
        BundleElement::from_span(&kernel, &self.coeff)
    }

    /// `δ × γ` for an integral `δ` in `R^n` and `γ` in `R^ν`.
    pub fn product(delta: &BundleElement, gamma: &BundleElement) -> Result<Self> {
        let k = integral_coefficient(&delta.coeff)?;
        let n = delta.plane.dim();
        let nu = gamma.plane.dim();
        let first = embed(n, nu, 0)?.push(&delta.plane.rep)?;
        let second = embed(nu, n, n)?.push(&gamma.plane.rep)?;
        let zeta = first.wedge(&second)?;
        BundleElement::from_span(&zeta, &gamma.coeff.mul_int(k))
    }

    /// Enclosure of `min(|ζ−ζ′|+|g−g′|, |ζ+ζ′|+|g+g′|)`.
    pub fn distance_interval(&self, other: &BundleElement) -> Result<Interval> {
        if self.coeff.group != other.coeff.group {
            return Err(Error::GroupMismatch(format!("{} vs {}", self.coeff.group, other.coeff.group)));
        }
        if self.plane.dim() != other.plane.dim() || self.plane.degree() != other.plane.degree() {
            return Err(Error::DegreeError("bundle elements over different Grassmannians".into()));
        }
        let t = self.plane.unit_dot(&other.plane)?;
        let two = Interval::point(2.0);
        let minus = (two - two * t).sqrt();
        let plus = (two + two * t).sqrt();
        let gm = Interval::from_q(&self.coeff.sub(&other.coeff)?.norm());
        let gp = Interval::from_q(&self.coeff.add(&other.coeff)?.norm());
        if self.plane == other.plane && self.coeff == other.coeff {
            return Ok(Interval::ZERO);
        }
        Ok((minus + gm).min(plus + gp))
    }

    pub fn distance(&self, other: &BundleElement) -> Result<f64> {
        Ok(self.distance_interval(other)?.mid().max(0.0))
    }
}

fn integral_coefficient(g: &GroupElement) -> Result<&BigInt> {
    match (&g.group, &g.value) {
        (NormedGroup::Integers, Value::Int(k)) => Ok(k),
        _ => Err(Error::GroupMismatch(format!("expected an integral element, got {g}"))),
    }
}

/// Inclusion of `R^k` into `R^{k+other}` at coordinate `offset`.
fn embed(k: usize, other: usize, offset: usize) -> Result<LinearMap> {
    let total = k + other;
    let matrix = (0..total)
        .map(|i| {
            (0..k)
                .map(|j| if i == j + offset { Q::one() } else { Q::zero() })
                .collect()
        })
        .collect();
    LinearMap::new(k, total, matrix)
}
