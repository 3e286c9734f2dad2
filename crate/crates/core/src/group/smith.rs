//! Integer matrices: Smith normal form, row Hermite form and integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
pub type IntMatrix = Vec<Vec<BigInt>>;

pub fn to_int_matrix(rows: &[Vec<i64>]) -> IntMatrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

pub fn zeros(r: usize, c: usize) -> IntMatrix {
    vec![vec![BigInt::zero(); c]; r]
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix, inner: usize, cols: usize) -> IntMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j])
                })
                .collect()
        })
        .collect()
}

pub fn transpose(a: &IntMatrix, cols: usize) -> IntMatrix {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// Determinant by Bareiss fraction-free elimination.
pub fn int_det(a: &IntMatrix) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// `U · M · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d₁ | d₂ | …`, nonnegative diagonal entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.d[i][i].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Checks all the defining properties exactly.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let um = mat_mul(&self.u, m, self.rows, self.cols);
        let umv = mat_mul(&um, &self.v, self.cols, self.cols);
        if umv != self.d {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.d[i][j].is_zero() {
                    return false;
                }
            }
        }
        let diag = self.diagonal();
        if diag.iter().any(|x| x.is_negative()) {
            return false;
        }
        for w in diag.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            if !divides {
                return false;
            }
        }
        int_det(&self.u).abs().is_one() && int_det(&self.v).abs().is_one()
    }
}

fn row_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    let (s, d) = if src < dst {
        let (lo, hi) = a.split_at_mut(dst);
        (&lo[src], &mut hi[0])
    } else {
        let (lo, hi) = a.split_at_mut(src);
        (&hi[0], &mut lo[dst])
    };
    for (x, y) in d.iter_mut().zip(s) {
        *x -= q * y;
    }
}

fn col_axpy(a: &mut IntMatrix, dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for row in a.iter_mut() {
        let t = q * &row[src];
        row[dst] -= t;
    }
}

fn col_swap(a: &mut IntMatrix, i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

/// Smith normal form of an `rows × cols` integer matrix.
pub fn smith_normal_form(m: &IntMatrix, rows: usize, cols: usize) -> SmithDecomposition {
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !a[i][j].is_zero()
                        && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                    {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithDecomposition { rows, cols, u, d: a, v };
            };
            a.swap(t, pi);
            u.swap(t, pi);
            col_swap(&mut a, t, pj);
            col_swap(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                clean &= a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            if let Some(i) = offender {
                let minus_one = -BigInt::one();
                row_axpy(&mut a, t, i, &minus_one);
                row_axpy(&mut u, t, i, &minus_one);
                continue;
            }
            break;
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithDecomposition { rows, cols, u, d: a, v }
}

/// Row-style Hermite normal form of a generating set of a sublattice of
/// `Z^cols`: a basis in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HermiteBasis {
    pub cols: usize,
    pub rows: IntMatrix,
    pub pivots: Vec<usize>,
}

impl HermiteBasis {
    pub fn new(generators: &IntMatrix, cols: usize) -> Self {
        let mut a: IntMatrix = generators
            .iter()
            .filter(|r| r.iter().any(|x| !x.is_zero()))
            .cloned()
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            loop {
                let nonzero: Vec<usize> = (r..a.len()).filter(|&i| !a[i][c].is_zero()).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let p = *nonzero
                    .iter()
                    .min_by_key(|&&i| a[i][c].abs())
                    .expect("nonempty");
                for &i in &nonzero {
                    if i != p {
                        let q = a[i][c].div_floor(&a[p][c]);
                        row_axpy(&mut a, i, p, &q);
                    }
                }
            }
            let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            if a[r][c].is_negative() {
                for x in a[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = a[i][c].div_floor(&a[r][c]);
                row_axpy(&mut a, i, r, &q);
            }
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        HermiteBasis { cols, rows: a, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Canonical representative of `v` modulo the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let q = out[p].div_floor(&row[p]);
            if !q.is_zero() {
                for (x, y) in out.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Integer coordinates of a lattice member in this basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, y) in rest.iter_mut().zip(row) {
                *x -= &q * y;
            }
            coords.push(q);
        }
        rest.iter().all(|x| x.is_zero()).then_some(coords)
    }
}

/// A basis (as rows) of the integer solutions of `m · x = 0`.
pub fn integer_kernel(m: &IntMatrix, rows: usize, cols: usize) -> IntMatrix {
    let snf = smith_normal_form(m, rows, cols);
    let r = snf.rank();
    (r..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j].clone()).collect())
        .collect()
}
