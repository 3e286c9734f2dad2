//! Closed floating intervals with outward rounding.
//!
//! Every arithmetic result is widened by one ulp on each side, which
//! over-approximates the rounding error of the correctly rounded IEEE
//! operation. Square roots of exact rationals are certified by squaring the
//! candidate endpoints back in exact arithmetic.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{to_f64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    if x == 0.0 {
        -f64::MIN_POSITIVE
    } else {
        x.next_down()
    }
}

fn up(x: f64) -> f64 {
    if x == 0.0 {
        f64::MIN_POSITIVE
    } else {
        x.next_up()
    }
}

fn exact(x: f64) -> Q {
    Q::from_float(x).expect("finite float")
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Tight enclosure of an exact rational.
    pub fn from_q(x: &Q) -> Self {
        let f = to_f64(x);
        let mut lo = f;
        let mut hi = f;
        while exact(lo) > *x {
            lo = down(lo);
        }
        while exact(hi) < *x {
            hi = up(hi);
        }
        Interval { lo, hi }
    }

    /// Enclosure of `sqrt(x)` for an exact nonnegative rational.
    pub fn sqrt_q(x: &Q) -> Self {
        assert!(!x.is_negative(), "sqrt of a negative rational");
        if x.is_zero() {
            return Interval::ZERO;
        }
        let s = to_f64(x).sqrt();
        let mut lo = s;
        let mut hi = s;
        while lo > 0.0 && exact(lo) * exact(lo) > *x {
            lo = down(lo).max(0.0);
        }
        while exact(hi) * exact(hi) < *x {
            hi = up(hi);
        }
        Interval { lo, hi }
    }

    pub fn sqrt(self) -> Self {
        Interval {
            lo: down(self.lo.max(0.0).sqrt()).max(0.0),
            hi: up(self.hi.max(0.0).sqrt()),
        }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn recip(self) -> Self {
        assert!(self.lo > 0.0 || self.hi < 0.0, "reciprocal of an interval containing 0");
        Interval {
            lo: down(1.0 / self.hi),
            hi: up(1.0 / self.lo),
        }
    }

    pub fn min(self, other: Self) -> Self {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.min(other.hi),
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval {
            lo: down(self.lo + o.lo),
            hi: up(self.hi + o.hi),
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        self + (-o)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval {
            lo: down(lo),
            hi: up(hi),
        }
    }
}
