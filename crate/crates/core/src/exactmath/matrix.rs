use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(Error::NotSquare {
                    row,
                    len: r.len(),
                    expected: dim,
                });
            }
            entries.extend(r);
        }
        Ok(IntMatrix { dim, entries })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(dim: usize) -> Self {
        IntMatrix {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    /// Companion matrix of a monic polynomial of degree `d`.
    ///
    /// Convention: ones on the superdiagonal and `-c_0, ..., -c_{d-1}` in the
    /// last row. With this layout the eigenvector for a root `t` is the
    /// Vandermonde vector `(1, t, ..., t^(d-1))`.
    pub fn companion(p: &IntPoly) -> Result<Self> {
        let d = p.degree().ok_or(Error::ZeroPolynomial)?;
        if !p.is_monic() || d == 0 {
            return Err(Error::PolyParse(alloc::format!(
                "companion matrix needs a monic polynomial of positive degree, got {p}"
            )));
        }
        let mut m = Self::zeros(d);
        for i in 0..d - 1 {
            m.entries[i * d + i + 1] = BigInt::one();
        }
        for j in 0..d {
            m.entries[(d - 1) * d + j] = -p.coeff(j);
        }
        Ok(m)
    }

    pub fn block_diag(a: &IntMatrix, b: &IntMatrix) -> Self {
        let dim = a.dim + b.dim;
        let mut m = Self::zeros(dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m.entries[i * dim + j] = a.get(i, j).clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                m.entries[(a.dim + i) * dim + a.dim + j] = b.get(i, j).clone();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.dim.max(1))
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        m
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.rows()
            .map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale_add_identity(&self, s: &BigInt, c: &BigInt) -> IntMatrix {
        let n = self.dim;
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e *= s;
        }
        for i in 0..n {
            out.entries[i * n + i] += c;
        }
        out
    }

    /// `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &IntPoly) -> IntMatrix {
        let n = self.dim;
        let mut acc = Self::zeros(n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc.entries[i * n + i] += c;
            }
        }
        acc
    }

    /// Characteristic polynomial `det(xI - M)` together with the matrices
    /// `B_1, ..., B_d` of the Faddeev–LeVerrier recurrence, which satisfy
    /// `adj(xI - M) = sum_k B_k x^(d-k)`.
    ///
    /// Every step stays in the integers: the division by `k` in the trace
    /// formula is exact.
    pub fn charpoly_with_adjugate(&self) -> (IntPoly, Vec<IntMatrix>) {
        let n = self.dim;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut bs = Vec::with_capacity(n);
        let mut b = Self::zeros(n);
        for k in 1..=n {
            // B_k = M B_{k-1} + c_{n-k+1} I
            let mut next = self.mul(&b);
            for i in 0..n {
                next.entries[i * n + i] += &coeffs[n - k + 1];
            }
            let tr = self.mul(&next).trace();
            let c = -tr / BigInt::from(k);
            coeffs[n - k] = c;
            bs.push(next.clone());
            b = next;
        }
        (IntPoly::new(coeffs), bs)
    }

    pub fn charpoly(&self) -> IntPoly {
        self.charpoly_with_adjugate().0
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn det(&self) -> BigInt {
        bareiss_det(self.dim, self.entries.clone())
    }

    /// Exact inverse when `det = +-1`.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        let (_, bs) = self.charpoly_with_adjugate();
        // adj(xI - M) at x = 0 is B_n = adj(-M) = (-1)^(n-1) adj(M)
        let n = self.dim;
        let bn = bs.last()?.clone();
        let sign = if (n - 1).is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        let adj = bn.scale_add_identity(&sign, &BigInt::zero());
        Some(adj.scale_add_identity(&det, &BigInt::zero()))
    }

    /// `P^T M P` for the permutation matrix whose column `i` is `e_{perm[i]}`,
    /// i.e. entry `(i, j)` becomes `M[perm[i]][perm[j]]`.
    pub fn permute(&self, perm: &[usize]) -> IntMatrix {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[i * n + j] = self.get(perm[i], perm[j]).clone();
            }
        }
        out
    }

    /// Principal sub-block on rows/cols `start..start+len`.
    pub fn sub_block(&self, start: usize, len: usize) -> IntMatrix {
        let mut out = Self::zeros(len);
        for i in 0..len {
            for j in 0..len {
                out.entries[i * len + j] = self.get(start + i, start + j).clone();
            }
        }
        out
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest absolute entry as a double (saturating).
    pub fn max_abs_entry_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(&self.max_abs_entry()).unwrap_or(f64::MAX)
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            rows: self.dim,
            cols: self.dim,
            entries: self
                .entries
                .iter()
                .map(|e| BigRational::from_integer(e.clone()))
                .collect(),
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            for (j, e) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{e}")?;
            }
        }
        Ok(())
    }
}

fn bareiss_det(n: usize, mut a: Vec<BigInt>) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, swap * n + j);
            }
            sign = -sign;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&pivot * &a[i * n + j] - &a[i * n + k] * &a[k * n + j]) / &prev;
                a[i * n + j] = v;
            }
            a[i * n + k] = BigInt::zero();
        }
        prev = pivot;
    }
    sign * &a[n * n - 1]
}

/// Dense matrix of exact rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(Error::NotSquare {
                row: 0,
                len: entries.len(),
                expected: rows * cols,
            });
        }
        Ok(RatMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::NotSquare {
                    row: i,
                    len: row.len(),
                    expected: c,
                });
            }
            entries.extend(row);
        }
        Self::new(r, c, entries)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|&x| BigRational::from_integer(BigInt::from(x)))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn column(&self, j: usize) -> Vec<BigRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j) * &v[j])
                    .fold(BigRational::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[BigInt]) -> Vec<BigRational> {
        let rv: Vec<BigRational> = v.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        self.mul_vec(&rv)
    }

    /// Reduced row echelon form and the pivot columns, first-nonzero pivoting.
    fn rref(&self) -> (Vec<BigRational>, Vec<usize>) {
        let (r, c) = (self.rows, self.cols);
        let mut a = self.entries.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !a[i * c + col].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..c {
                    a.swap(p * c + j, row * c + j);
                }
            }
            let inv = a[row * c + col].recip();
            for j in col..c {
                a[row * c + j] = &a[row * c + j] * &inv;
            }
            for i in 0..r {
                if i == row || a[i * c + col].is_zero() {
                    continue;
                }
                let f = a[i * c + col].clone();
                for j in col..c {
                    let t = &f * &a[row * c + j];
                    a[i * c + j] -= t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the exact right null space.
    ///
    /// One vector per non-pivot column `f` of the reduced echelon form, in
    /// increasing order of `f`, with a 1 in position `f`.
    pub fn kernel(&self) -> Vec<Vec<BigRational>> {
        let (a, pivots) = self.rref();
        let c = self.cols;
        let free: Vec<usize> = (0..c).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![BigRational::zero(); c];
                v[f] = BigRational::one();
                for (prow, &pcol) in pivots.iter().enumerate() {
                    v[pcol] = -a[prow * c + f].clone();
                }
                v
            })
            .collect()
    }
}

/// Exact null-space basis of a rational matrix; empty iff full column rank.
pub fn rational_kernel(a: &RatMatrix) -> Vec<Vec<BigRational>> {
    a.kernel()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_n() -> IntMatrix {
        IntMatrix::from_i64_rows(&[&[1, 2, -1], &[-1, 0, -2], &[0, 1, -1]]).unwrap()
    }

    /// Cofactor expansion of det(tI - M) for 3x3, as an independent oracle.
    fn cofactor_charpoly_at(m: &IntMatrix, t: i64) -> BigInt {
        let t = BigInt::from(t);
        let e = |i: usize, j: usize| {
            let v = -m.get(i, j).clone();
            if i == j {
                v + &t
            } else {
                v
            }
        };
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    }

    #[test]
    fn charpoly_of_example_block() {
        let n = example_n();
        let chi = n.charpoly();
        assert_eq!(chi, IntPoly::from_i64s(&[-1, 3, 0, 1]));
        for t in -5..=5 {
            assert_eq!(chi.eval(&BigInt::from(t)), cofactor_charpoly_at(&n, t));
        }
        assert_eq!(n.det(), BigInt::one());
    }

    #[test]
    fn charpoly_identity_and_companion() {
        let id = IntMatrix::identity(3);
        assert_eq!(id.charpoly(), IntPoly::from_i64s(&[-1, 1]).pow(3));
        let f = IntPoly::from_i64s(&[-1, -1, 0, 0, 0, 1]);
        let c = IntMatrix::companion(&f).unwrap();
        assert_eq!(c.charpoly(), f);
        assert_eq!(c.det(), BigInt::one());
    }

    #[test]
    fn adjugate_matrices_reproduce_adjugate_at_points() {
        let m = example_n();
        let (chi, bs) = m.charpoly_with_adjugate();
        // (tI - M) adj(tI - M) = chi(t) I at a few integer points
        for t in [-2i64, 0, 3] {
            let tt = BigInt::from(t);
            let n = m.dim();
            let mut adj = IntMatrix::zeros(n);
            for (k, b) in bs.iter().enumerate() {
                let p = num_traits::pow(tt.clone(), n - 1 - k);
                for i in 0..n {
                    for j in 0..n {
                        let v = adj.get(i, j) + b.get(i, j) * &p;
                        adj.set(i, j, v);
                    }
                }
            }
            let shifted = m.scale_add_identity(&-BigInt::one(), &tt);
            let prod = shifted.mul(&adj);
            let expect = IntMatrix::identity(n).scale_add_identity(&chi.eval(&tt), &BigInt::zero());
            assert_eq!(prod, expect);
        }
    }

    #[test]
    fn unimodular_inverse() {
        let u = IntMatrix::from_i64_rows(&[&[1, 2, 0], &[0, 1, 0], &[3, 7, 1]]).unwrap();
        let inv = u.inverse_unimodular().unwrap();
        assert_eq!(u.mul(&inv), IntMatrix::identity(3));
        assert!(IntMatrix::from_i64_rows(&[&[2, 0], &[0, 1]])
            .unwrap()
            .inverse_unimodular()
            .is_none());
    }

    #[test]
    fn kernel_examples() {
        let id = RatMatrix::from_i64_rows(&[&[1, 0], &[0, 1]]).unwrap();
        assert!(rational_kernel(&id).is_empty());
        let a = RatMatrix::from_i64_rows(&[&[1, 1]]).unwrap();
        let k = rational_kernel(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(Zero::is_zero));
        assert_eq!(k[0][0], -k[0][1].clone());
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![BigInt::one(), BigInt::one()], vec![BigInt::one()]];
        assert!(matches!(
            IntMatrix::from_rows(rows),
            Err(Error::NotSquare { row: 1, .. })
        ));
    }

    #[test]
    fn permutation_and_blocks() {
        let n = example_n();
        let p = IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap();
        let m = IntMatrix::block_diag(&n, &p);
        assert_eq!(m.sub_block(0, 3), n);
        assert_eq!(m.sub_block(3, 2), p);
        assert_eq!(m.charpoly(), &n.charpoly() * &p.charpoly());
        let perm = [4, 0, 3, 1, 2];
        let q = m.permute(&perm);
        assert_eq!(q.charpoly(), m.charpoly());
    }
}
