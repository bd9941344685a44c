use std::fmt;

use num_traits::{One, Zero};

use super::{fmt_q, Q};

/// Dense square matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    rows: Vec<Vec<Q>>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix {
            n,
            rows: vec![vec![Q::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.rows[i][i] = Q::one();
        }
        m
    }

    pub fn diagonal(d: &[Q]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m.rows[i][i] = x.clone();
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Q {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n);
        let mut out = Matrix::zero(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.rows[i][k].is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    out.rows[i][j] += &self.rows[i][k] * &other.rows[k][j];
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Q {
        (0..self.n).map(|i| self.rows[i][i].clone()).sum()
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            n: self.n,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x * c).collect())
                .collect(),
        }
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.rows[i][j].is_zero()))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.rows[i][j].is_zero()))
    }

    pub fn diag(&self) -> Vec<Q> {
        (0..self.n).map(|i| self.rows[i][i].clone()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(fmt_q).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Determinant by Gaussian elimination over Q.
pub fn determinant(m: &Matrix) -> Q {
    let n = m.n;
    let mut a = m.rows.clone();
    let mut det = Q::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Q::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &p;
            for c in col..n {
                let t = &factor * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

/// Coefficients `σ_1..σ_n` of `det(I + tA) = Σ σ_i t^i`, i.e. the elementary
/// symmetric functions of the eigenvalues, by Faddeev–LeVerrier.
pub fn charpoly_sigmas(m: &Matrix) -> Vec<Q> {
    let n = m.n;
    // det(tI - A) = t^n + c_1 t^{n-1} + ... + c_n, with σ_k = (-1)^k c_k
    let mut sigmas = Vec::with_capacity(n);
    let mut mk = Matrix::zero(n);
    let mut c_prev = Q::one();
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            next.rows[i][i] += &c_prev;
        }
        mk = next;
        let am = m.mul(&mk);
        let ck = -am.trace() / Q::from_integer((k as i64).into());
        let sk = if k % 2 == 0 { ck.clone() } else { -ck.clone() };
        sigmas.push(sk);
        c_prev = ck;
    }
    sigmas
}
