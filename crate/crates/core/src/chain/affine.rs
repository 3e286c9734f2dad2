use crate::error::{Error, Result};
use crate::exterior::LinearMap;
use crate::rational::{Point, Q};

/// `x ↦ A x + b` between rational spaces.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineMap {
    linear: LinearMap,
    translation: Point,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Q>>, translation: Point) -> Result<Self> {
        let target = translation.len();
        let source = matrix.first().map_or(0, |r| r.len());
        let linear = LinearMap::new(source, target, matrix)?;
        Ok(AffineMap { linear, translation })
    }

    pub fn from_linear(linear: LinearMap, translation: Point) -> Result<Self> {
        if translation.len() != linear.target() {
            return Err(Error::DimensionMismatch("translation length".into()));
        }
        Ok(AffineMap { linear, translation })
    }

    pub fn identity(n: usize) -> Self {
        AffineMap {
            linear: LinearMap::identity(n),
            translation: vec![Q::from_integer(0.into()); n],
        }
    }

    /// `x ↦ c·x + c₀` into `R¹`.
    pub fn functional(coeffs: Vec<Q>, constant: Q) -> Result<Self> {
        AffineMap::new(vec![coeffs], vec![constant])
    }

    pub fn translation_by(v: Point) -> Self {
        let n = v.len();
        AffineMap {
            linear: LinearMap::identity(n),
            translation: v,
        }
    }

    pub fn source(&self) -> usize {
        self.linear.source()
    }

    pub fn target(&self) -> usize {
        self.linear.target()
    }

    pub fn linear(&self) -> &LinearMap {
        &self.linear
    }

    pub fn translation(&self) -> &Point {
        &self.translation
    }

    pub fn apply(&self, x: &[Q]) -> Point {
        self.linear
            .apply(x)
            .into_iter()
            .zip(&self.translation)
            .map(|(a, b)| a + b)
            .collect()
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &AffineMap) -> Result<AffineMap> {
        let linear = self.linear.compose(&inner.linear)?;
        let translation = self.apply(&inner.translation);
        Ok(AffineMap { linear, translation })
    }

    /// `(1 − s)·self + s·other`.
    pub fn interpolate(&self, other: &AffineMap, s: &Q) -> Result<AffineMap> {
        if self.source() != other.source() || self.target() != other.target() {
            return Err(Error::DimensionMismatch("interpolating maps of different shapes".into()));
        }
        let r = Q::from_integer(1.into()) - s;
        let matrix = self
            .linear
            .matrix()
            .iter()
            .zip(other.linear.matrix())
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| &r * x + s * y).collect())
            .collect();
        let translation = self
            .translation
            .iter()
            .zip(&other.translation)
            .map(|(x, y)| &r * x + s * y)
            .collect();
        Ok(AffineMap {
            linear: LinearMap::new(self.source(), self.target(), matrix)?,
            translation,
        })
    }
}
