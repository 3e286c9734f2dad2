//! Exact rational scalars and the small amount of dense linear algebra the
//! geometry needs (determinants, ranks, square solves).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// A point of rational n-space.
pub type Point = Vec<Q>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"-0.25"`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Q::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = Q::from_integer(int_part.abs()) + Q::new(frac_num, scale);
        return Ok(if neg { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Q::from_integer(n))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

pub fn sub_points(a: &[Q], b: &[Q]) -> Point {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Determinant by Gaussian elimination over Q.
pub fn det(mat: &[Vec<Q>]) -> Q {
    let n = mat.len();
    if n == 0 {
        return Q::one();
    }
    let mut a: Vec<Vec<Q>> = mat.to_vec();
    let mut sign = Q::one();
    let mut acc = Q::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if p != col {
            a.swap(p, col);
            sign = -sign;
        }
        let pivot = a[col][col].clone();
        acc *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pivot;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    sign * acc
}

/// Row-reduces in place and returns the pivot columns.
pub fn row_reduce(a: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..cols {
                    let t = &f * &a[r][j];
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vec<Q>]) -> usize {
    let mut a = rows.to_vec();
    row_reduce(&mut a).len()
}

/// Solves `a x = b` for square nonsingular `a`.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Gram determinant `det(E Eᵀ)` of the rows of `edges`.
pub fn gram_det(edges: &[Point]) -> Q {
    let g: Vec<Vec<Q>> = edges
        .iter()
        .map(|a| edges.iter().map(|b| dot(a, b)).collect())
        .collect();
    det(&g)
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_q("3/6").unwrap(), q(1, 2));
        assert_eq!(parse_q("-7").unwrap(), qi(-7));
        assert_eq!(parse_q("-0.25").unwrap(), q(-1, 4));
        assert_eq!(parse_q("1.5").unwrap(), q(3, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(fmt_q(&q(4, 2)), "2");
        assert_eq!(fmt_q(&q(-1, 3)), "-1/3");
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = vec![
            vec![qi(2), qi(1), qi(0)],
            vec![qi(1), qi(3), qi(1)],
            vec![qi(0), qi(1), qi(4)],
        ];
        // 2(12-1) - 1(4-0) + 0 = 18
        assert_eq!(det(&m), qi(18));
        assert_eq!(rank(&m), 3);
        let x = solve(&m, &[qi(1), qi(0), qi(0)]).unwrap();
        assert_eq!(x[0], q(11, 18));
    }

    #[test]
    fn singular_solve_is_none() {
        let m = vec![vec![qi(1), qi(2)], vec![qi(2), qi(4)]];
        assert!(solve(&m, &[qi(1), qi(1)]).is_none());
        assert_eq!(det(&m), qi(0));
    }
}
