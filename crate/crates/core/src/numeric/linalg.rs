use alloc::vec;
use alloc::vec::Vec;

use super::bigfloat::{BigComplex, BigFloat};
use crate::exactmath::{IntMatrix, IntPoly};

pub type CVec = Vec<BigComplex>;

/// Dense row-major matrix of [`BigComplex`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![BigComplex::zero(prec); rows * cols],
        }
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        let mut m = Self::zeros(n, n, prec);
        for i in 0..n {
            m.data[i * n + i] = BigComplex::from_int(&1.into(), prec);
        }
        m
    }

    pub fn from_int(m: &IntMatrix, prec: u32) -> Self {
        let n = m.dim();
        let mut out = Self::zeros(n, n, prec);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = BigComplex::from_int(m.get(i, j), prec);
            }
        }
        out
    }

    pub fn from_columns(cols: &[CVec]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        let prec = cols.first().and_then(|v| v.first()).map_or(64, BigComplex::prec);
        let mut out = Self::zeros(r, c, prec);
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                out.data[i * c + j] = x.clone();
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigComplex {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigComplex) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> CVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<CVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        let prec = self.data.first().map_or(64, BigComplex::prec);
        let mut out = CMatrix::zeros(self.rows, other.cols, prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * other.get(k, j);
                    let cur = &out.data[i * other.cols + j] + &t;
                    out.data[i * other.cols + j] = cur;
                }
            }
        }
        out
    }

    /// `self * M` for an integer matrix.
    pub fn mul_int(&self, m: &IntMatrix) -> CMatrix {
        assert_eq!(self.cols, m.dim());
        let prec = self.data.first().map_or(64, BigComplex::prec);
        let mut out = CMatrix::zeros(self.rows, self.cols, prec);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let e = m.get(k, j);
                    if num_traits::Zero::is_zero(e) {
                        continue;
                    }
                    let t = a.scale_int(e);
                    let cur = &out.data[i * self.cols + j] + &t;
                    out.data[i * self.cols + j] = cur;
                }
            }
        }
        out
    }

    /// `self - s I`.
    pub fn shifted(&self, s: &BigComplex) -> CMatrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out.data[i * self.cols + i] = &out.data[i * self.cols + i] - s;
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|x| x.abs().to_f64())
            .fold(0.0, f64::max)
    }
}

/// `M v` for an integer matrix and a complex vector.
pub fn int_mul_vec(m: &IntMatrix, v: &[BigComplex]) -> CVec {
    let prec = v.first().map_or(64, BigComplex::prec);
    m.rows()
        .map(|row| {
            row.iter().zip(v).fold(BigComplex::zero(prec), |acc, (a, x)| {
                if num_traits::Zero::is_zero(a) {
                    acc
                } else {
                    &acc + &x.scale_int(a)
                }
            })
        })
        .collect()
}

/// Hermitian inner product, conjugate-linear in the first argument.
pub fn dot(a: &[BigComplex], b: &[BigComplex]) -> BigComplex {
    let prec = a.first().map_or(64, BigComplex::prec);
    a.iter()
        .zip(b)
        .fold(BigComplex::zero(prec), |acc, (x, y)| &acc + &(&x.conj() * y))
}

pub fn norm(v: &[BigComplex]) -> BigFloat {
    let prec = v.first().map_or(64, BigComplex::prec);
    v.iter()
        .fold(BigFloat::zero(prec), |acc, x| &acc + &x.norm_sqr())
        .sqrt()
}

pub fn sub(a: &[BigComplex], b: &[BigComplex]) -> CVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(v: &[BigComplex], s: &BigComplex) -> CVec {
    v.iter().map(|x| x * s).collect()
}

/// `v - s w`.
pub fn axpy_neg(v: &[BigComplex], s: &BigComplex, w: &[BigComplex]) -> CVec {
    v.iter().zip(w).map(|(x, y)| x - &(s * y)).collect()
}

/// Pick `m` columns greedily by largest residual norm and orthonormalise
/// them (modified Gram–Schmidt with one re-orthogonalisation pass).
///
/// When the columns span a space of dimension exactly `m`, the result is an
/// orthonormal basis of that span.
pub fn pivoted_orthonormal_basis(cols: &[CVec], m: usize) -> Vec<CVec> {
    let mut work: Vec<CVec> = cols.to_vec();
    let mut basis: Vec<CVec> = Vec::with_capacity(m);
    for _ in 0..m {
        let (best, _) = work
            .iter()
            .enumerate()
            .map(|(i, c)| (i, norm(c).to_f64()))
            .fold((0usize, -1.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
        let mut q = work.swap_remove(best);
        for _pass in 0..2 {
            for b in &basis {
                let c = dot(b, &q);
                q = axpy_neg(&q, &c, b);
            }
        }
        let nq = norm(&q);
        if nq.is_zero() {
            break;
        }
        let inv = BigComplex::real(&BigFloat::from_i64(1, nq.prec()) / &nq);
        q = scale(&q, &inv);
        for w in work.iter_mut() {
            let c = dot(&q, w);
            *w = axpy_neg(w, &c, &q);
        }
        basis.push(q);
    }
    basis
}

/// Coordinates `c` of `target` in the span of `basis` (least squares via a
/// modified Gram–Schmidt QR factorisation).
pub struct QrSolver {
    q: Vec<CVec>,
    r: Vec<Vec<BigComplex>>,
}

impl QrSolver {
    pub fn new(basis: &[CVec]) -> Self {
        let n = basis.len();
        let prec = basis.first().and_then(|v| v.first()).map_or(64, BigComplex::prec);
        let mut q: Vec<CVec> = Vec::with_capacity(n);
        let mut r = vec![vec![BigComplex::zero(prec); n]; n];
        for (j, b) in basis.iter().enumerate() {
            let mut v = b.clone();
            for _pass in 0..2 {
                for (i, qi) in q.iter().enumerate() {
                    let c = dot(qi, &v);
                    v = axpy_neg(&v, &c, qi);
                    r[i][j] = &r[i][j] + &c;
                }
            }
            let nv = norm(&v);
            r[j][j] = BigComplex::real(nv.clone());
            let inv = if nv.is_zero() {
                BigComplex::zero(prec)
            } else {
                BigComplex::real(&BigFloat::from_i64(1, prec) / &nv)
            };
            q.push(scale(&v, &inv));
        }
        QrSolver { q, r }
    }

    pub fn solve(&self, target: &[BigComplex]) -> CVec {
        let n = self.q.len();
        let rhs: Vec<BigComplex> = self.q.iter().map(|qi| dot(qi, target)).collect();
        let prec = target.first().map_or(64, BigComplex::prec);
        let mut c = vec![BigComplex::zero(prec); n];
        for i in (0..n).rev() {
            let mut s = rhs[i].clone();
            for k in i + 1..n {
                s = &s - &(&self.r[i][k] * &c[k]);
            }
            c[i] = if self.r[i][i].is_zero() {
                BigComplex::zero(prec)
            } else {
                &s / &self.r[i][i]
            };
        }
        c
    }
}

/// Descending-free synthetic division of an integer polynomial by
/// `(x - root)^times`, dropping remainders.
pub fn deflate(p: &IntPoly, root: &BigComplex, times: usize) -> Vec<BigComplex> {
    let prec = root.prec();
    let mut coeffs: Vec<BigComplex> = p
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_int(c, prec))
        .collect();
    for _ in 0..times {
        let d = coeffs.len() - 1;
        let mut q = vec![BigComplex::zero(prec); d];
        let mut carry = coeffs[d].clone();
        for k in (0..d).rev() {
            q[k] = carry.clone();
            carry = &coeffs[k] + &(root * &carry);
        }
        coeffs = q;
    }
    coeffs
}

/// `h(M)` for complex coefficients (ascending) and an integer matrix.
pub fn eval_complex_poly(coeffs: &[BigComplex], m: &IntMatrix, prec: u32) -> CMatrix {
    let n = m.dim();
    let mut acc = CMatrix::zeros(n, n, prec);
    for c in coeffs.iter().rev() {
        acc = acc.mul_int(m);
        for i in 0..n {
            let cur = acc.get(i, i) + c;
            acc.set(i, i, cur);
        }
    }
    acc
}
