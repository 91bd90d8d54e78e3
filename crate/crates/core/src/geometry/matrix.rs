//! Small dense complex matrices in double precision: products, inverses,
//! the exponential and the principal logarithm.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::{One, Zero};

pub type C64 = Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    n: usize,
    d: Vec<C64>,
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.d[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.d[i * self.n + j]
    }
}

impl CMat {
    pub fn zeros(n: usize) -> Self {
        CMat {
            n,
            d: vec![C64::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::one();
        }
        m
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, o: &CMat) -> CMat {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.d[i * n + j] += a * o[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, o: &CMat) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &CMat) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().zip(&o.d).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: C64) -> CMat {
        CMat {
            n: self.n,
            d: self.d.iter().map(|a| a * s).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference relative to `max(1, |other|)`.
    pub fn rel_diff(&self, o: &CMat) -> f64 {
        self.sub(o).max_abs() / o.max_abs().max(1.0)
    }

    pub fn sub_block(&self, start: usize, len: usize) -> CMat {
        Self::from_fn(len, |i, j| self[(start + i, start + j)])
    }

    pub fn set_block(&mut self, start: usize, b: &CMat) {
        for i in 0..b.n {
            for j in 0..b.n {
                self[(start + i, start + j)] = b[(i, j)];
            }
        }
    }

    /// LU with partial pivoting: `(lu, perm, sign)`, or `None` if singular.
    fn lu(&self) -> Option<(CMat, Vec<usize>, f64)> {
        let n = self.n;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n).max_by(|&x, &y| a[(x, k)].norm().total_cmp(&a[(y, k)].norm()))?;
            if a[(p, k)].is_zero() {
                return None;
            }
            if p != k {
                for j in 0..n {
                    a.d.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let piv = a[(k, k)];
            for i in k + 1..n {
                let f = a[(i, k)] / piv;
                a[(i, k)] = f;
                for j in k + 1..n {
                    let t = a[(k, j)];
                    a[(i, j)] -= f * t;
                }
            }
        }
        Some((a, perm, sign))
    }

    pub fn det(&self) -> C64 {
        match self.lu() {
            None => C64::zero(),
            Some((a, _, sign)) => (0..self.n).map(|i| a[(i, i)]).product::<C64>() * sign,
        }
    }

    pub fn inverse(&self) -> Option<CMat> {
        let n = self.n;
        let (a, perm, _) = self.lu()?;
        let mut inv = Self::zeros(n);
        for col in 0..n {
            // solve L U x = P e_col
            let mut x: Vec<C64> = (0..n)
                .map(|i| if perm[i] == col { C64::one() } else { C64::zero() })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    let t = a[(i, k)] * x[k];
                    x[i] -= t;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let t = a[(i, k)] * x[k];
                    x[i] -= t;
                }
                x[i] /= a[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i];
            }
        }
        Some(inv)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, e: i64) -> Option<CMat> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        Some(acc)
    }

    /// Matrix exponential by scaling and squaring with a Taylor core.
    pub fn exp(&self) -> CMat {
        let norm = self.norm_inf();
        let s = if norm > 0.5 {
            (libm::log2(norm / 0.5)).ceil() as i32
        } else {
            0
        };
        let b = self.scale(C64::new(libm::ldexp(1.0, -s), 0.0));
        let mut term = Self::identity(self.n);
        let mut sum = term.clone();
        for k in 1..30 {
            term = term.mul(&b).scale(C64::new(1.0 / k as f64, 0.0));
            sum = sum.add(&term);
            if term.max_abs() < 1e-18 * sum.max_abs() {
                break;
            }
        }
        for _ in 0..s {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// Principal square root by the Denman–Beavers iteration.
    pub fn sqrt_db(&self) -> Option<CMat> {
        let mut y = self.clone();
        let mut z = Self::identity(self.n);
        for _ in 0..100 {
            let yi = y.inverse()?;
            let zi = z.inverse()?;
            let half = C64::new(0.5, 0.0);
            let y2 = y.add(&zi).scale(half);
            let z2 = z.add(&yi).scale(half);
            let step = y2.rel_diff(&y);
            y = y2;
            z = z2;
            if step < 1e-15 {
                return Some(y);
            }
        }
        None
    }

    /// Principal logarithm by inverse scaling and squaring: repeated square
    /// roots bring the matrix near the identity, then a Taylor series of
    /// `log(I + E)` finishes. Requires no eigenvalue on the closed negative
    /// real axis.
    pub fn log_iss(&self) -> Option<CMat> {
        let n = self.n;
        let id = Self::identity(n);
        let mut x = self.clone();
        let mut k = 0;
        while x.sub(&id).norm_inf() > 0.2 {
            x = x.sqrt_db()?;
            k += 1;
            if k > 64 {
                return None;
            }
        }
        let e = x.sub(&id);
        let mut term = e.clone();
        let mut sum = e.clone();
        for j in 2..200 {
            term = term.mul(&e);
            let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
            let t = term.scale(C64::new(sign / j as f64, 0.0));
            sum = sum.add(&t);
            if t.max_abs() < 1e-18 {
                break;
            }
        }
        Some(sum.scale(C64::new(libm::ldexp(1.0, k), 0.0)))
    }

    /// Logarithm of a matrix with a single eigenvalue `beta` (off the
    /// negative real axis): `log(beta) I + log(I + N)` with `N = self/beta - I`
    /// nilpotent, so the series stops after `n` terms.
    pub fn log_single_eigenvalue(&self, beta: C64) -> CMat {
        let n = self.n;
        let id = Self::identity(n);
        let nil = self.scale(C64::one() / beta).sub(&id);
        let mut sum = id.scale(beta.ln());
        let mut term = id;
        for j in 1..=n {
            term = term.mul(&nil);
            let sign = if j % 2 == 0 { -1.0 } else { 1.0 };
            sum = sum.add(&term.scale(C64::new(sign / j as f64, 0.0)));
        }
        sum
    }
}

/// Singular values of a real `rows x cols` matrix (one-sided Jacobi),
/// in decreasing order.
pub fn singular_values(a: &[Vec<f64>]) -> Vec<f64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // work on columns
    let mut c: Vec<Vec<f64>> = (0..cols).map(|j| (0..rows).map(|i| a[i][j]).collect()).collect();
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha: f64 = c[p].iter().map(|x| x * x).sum();
                let beta: f64 = c[q].iter().map(|x| x * x).sum();
                let gamma: f64 = c[p].iter().zip(&c[q]).map(|(x, y)| x * y).sum();
                if gamma == 0.0 {
                    continue;
                }
                off = off.max(gamma.abs() / libm::sqrt(alpha * beta));
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::sqrt(1.0 + zeta * zeta));
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = cs * t;
                for i in 0..rows {
                    let (x, y) = (c[p][i], c[q][i]);
                    c[p][i] = cs * x - sn * y;
                    c[q][i] = sn * x + cs * y;
                }
            }
        }
        if off < 1e-15 {
            break;
        }
    }
    let mut s: Vec<f64> = c.iter().map(|v| libm::sqrt(v.iter().map(|x| x * x).sum())).collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn exp_of_rotation_generator() {
        let a = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(-core::f64::consts::FRAC_PI_2, 0.0),
            (1, 0) => c(core::f64::consts::FRAC_PI_2, 0.0),
            _ => c(0.0, 0.0),
        });
        let e = a.exp();
        let rot = CMat::from_fn(2, |i, j| match (i, j) {
            (0, 1) => c(-1.0, 0.0),
            (1, 0) => c(1.0, 0.0),
            _ => c(0.0, 0.0),
        });
        assert!(e.rel_diff(&rot) < 1e-14);
    }

    #[test]
    fn log_round_trips() {
        let r = CMat::from_fn(3, |i, j| match (i, j) {
            (0, 0) => c(0.3, 1.2),
            (0, 1) => c(5.0, -2.0),
            (1, 1) => c(-0.7, 0.4),
            (1, 2) => c(1.0, 1.0),
            (2, 2) => c(2.0, 0.1),
            (2, 0) => c(0.01, 0.0),
            _ => c(0.0, 0.0),
        });
        let l = r.log_iss().unwrap();
        assert!(l.exp().rel_diff(&r) < 1e-12);
    }

    #[test]
    fn jordan_block_log() {
        let beta = c(-0.5, 0.8);
        let j = CMat::from_fn(2, |i, k| match (i, k) {
            (0, 0) | (1, 1) => beta,
            (0, 1) => c(3.0, 0.0),
            _ => c(0.0, 0.0),
        });
        let l = j.log_single_eigenvalue(beta);
        assert!(l.exp().rel_diff(&j) < 1e-14);
        assert!(l.sub(&j.log_iss().unwrap()).max_abs() < 1e-12);
    }

    #[test]
    fn inverse_det_and_powers() {
        let m = CMat::from_fn(3, |i, j| c((i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 }, (i as f64) - (j as f64)));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).rel_diff(&CMat::identity(3)) < 1e-14);
        let d = m.det() * inv.det();
        assert!((d - c(1.0, 0.0)).norm() < 1e-13);
        assert!(m.pow(-2).unwrap().mul(&m.pow(2).unwrap()).rel_diff(&CMat::identity(3)) < 1e-12);
    }

    #[test]
    fn singular_values_of_diagonal_and_rank_deficient() {
        let s = singular_values(&[vec![3.0, 0.0], vec![0.0, -4.0]]);
        assert!((s[0] - 4.0).abs() < 1e-14 && (s[1] - 3.0).abs() < 1e-14);
        let s = singular_values(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(s[1] < 1e-14);
    }
}
