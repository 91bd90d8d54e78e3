use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Integer lattice basis (one vector per row) with its LLL parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    pub vectors: Vec<Vec<BigInt>>,
    pub delta: BigRational,
}

impl LatticeBasis {
    pub fn new(vectors: Vec<Vec<BigInt>>, delta: BigRational) -> Result<Self> {
        let quarter = BigRational::new(BigInt::one(), BigInt::from(4));
        if delta <= quarter || delta >= BigRational::one() {
            return Err(Error::BadDelta);
        }
        if let Some(first) = vectors.first() {
            let d = first.len();
            if vectors.iter().any(|v| v.len() != d) {
                return Err(Error::MalformedBasis("vectors differ in length".to_string()));
            }
            if vectors.len() > d {
                return Err(Error::DependentBasis);
            }
        }
        Ok(LatticeBasis { vectors, delta })
    }

    /// Basis with the default parameter 99/100.
    pub fn with_default_delta(vectors: Vec<Vec<BigInt>>) -> Result<Self> {
        Self::new(vectors, default_delta())
    }

    pub fn from_i64(vectors: &[&[i64]]) -> Result<Self> {
        Self::with_default_delta(
            vectors
                .iter()
                .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }
}

pub fn default_delta() -> BigRational {
    BigRational::new(BigInt::from(99), BigInt::from(100))
}

/// Result of a reduction: the reduced basis and the unimodular transform
/// `U` with `U * B_in = B_out` (rows are vectors).
#[derive(Clone, Debug)]
pub struct LllOutput {
    pub basis: LatticeBasis,
    pub transform: Vec<Vec<BigInt>>,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Nearest integer to `num / den` for `den > 0`, ties rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

/// Integral LLL (de Weger / Cohen): Gram–Schmidt data is carried exactly as
/// the integers `d_i` (Gram determinants) and `lambda_ij = d_j mu_ij`, so no
/// rational arithmetic or rounding error enters the reduction.
pub fn lll_reduce(input: &LatticeBasis) -> Result<LllOutput> {
    let n = input.vectors.len();
    let mut b = input.vectors.clone();
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = vec![BigInt::zero(); n];
            row[i] = BigInt::one();
            row
        })
        .collect();
    if n == 0 {
        return Ok(LllOutput {
            basis: input.clone(),
            transform: h,
        });
    }
    let p = input.delta.numer().clone();
    let q = input.delta.denom().clone();

    // d[0] = 1, d[i + 1] = Gram determinant of the first i + 1 vectors.
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];

    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::DependentBasis);
    }
    let mut k = 1usize;
    let mut kmax = 0usize;

    let reduce = |k: usize,
                  l: usize,
                  b: &mut Vec<Vec<BigInt>>,
                  h: &mut Vec<Vec<BigInt>>,
                  lam: &mut Vec<Vec<BigInt>>,
                  d: &Vec<BigInt>| {
        let dl = &d[l + 1];
        if (&lam[k][l] * BigInt::from(2)).abs() > *dl {
            let r = round_div(&lam[k][l], dl);
            let (bl, hl) = (b[l].clone(), h[l].clone());
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &r * y;
            }
            for (x, y) in h[k].iter_mut().zip(&hl) {
                *x -= &r * y;
            }
            lam[k][l] -= &r * dl;
            for i in 0..l {
                let t = &r * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::DependentBasis);
                    }
                    d[k + 1] = u;
                }
            }
        }
        reduce(k, k - 1, &mut b, &mut h, &mut lam, &d);
        let l = &lam[k][k - 1];
        let lhs = &q * (&d[k + 1] * &d[k - 1] + l * l);
        let rhs = &p * &d[k] * &d[k];
        if lhs < rhs {
            // swap b_k and b_{k-1}
            b.swap(k, k - 1);
            h.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = core::mem::take(&mut lam[k][j]);
                lam[k][j] = core::mem::replace(&mut lam[k - 1][j], t);
            }
            let lm = lam[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &lm * &lm) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &lm * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &lm * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            k = if k > 1 { k - 1 } else { 1 };
        } else {
            for l in (0..k - 1).rev() {
                reduce(k, l, &mut b, &mut h, &mut lam, &d);
            }
            k += 1;
        }
    }
    Ok(LllOutput {
        basis: LatticeBasis {
            vectors: b,
            delta: input.delta.clone(),
        },
        transform: h,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn norm2(v: &[BigInt]) -> BigInt {
        dot(v, v)
    }

    #[test]
    fn reduced_basis_is_fixed_point() {
        let b = LatticeBasis::new(
            vec![ints(&[1, 0]), ints(&[0, 1])],
            BigRational::new(BigInt::from(3), BigInt::from(4)),
        )
        .unwrap();
        let out = lll_reduce(&b).unwrap();
        assert_eq!(out.basis.vectors, b.vectors);
    }

    #[test]
    fn unit_lattice_recovered() {
        let b = LatticeBasis::from_i64(&[&[1, 0], &[4, 1]]).unwrap();
        let out = lll_reduce(&b).unwrap();
        for v in &out.basis.vectors {
            assert_eq!(norm2(v), BigInt::one());
        }
    }

    #[test]
    fn two_dimensional_shortest_vector() {
        let b = LatticeBasis::from_i64(&[&[12, 2], &[13, 4]]).unwrap();
        let out = lll_reduce(&b).unwrap();
        // brute-force shortest nonzero vector over small coefficients
        let mut best: Option<BigInt> = None;
        for x in -20i64..=20 {
            for y in -20i64..=20 {
                if x == 0 && y == 0 {
                    continue;
                }
                let v = ints(&[12 * x + 13 * y, 2 * x + 4 * y]);
                let n = norm2(&v);
                if best.as_ref().is_none_or(|b| &n < b) {
                    best = Some(n);
                }
            }
        }
        assert_eq!(norm2(&out.basis.vectors[0]), best.unwrap());
    }

    #[test]
    fn dependent_and_bad_parameters() {
        let b = LatticeBasis::from_i64(&[&[1, 2, 3], &[2, 4, 6]]).unwrap();
        assert_eq!(lll_reduce(&b).unwrap_err(), Error::DependentBasis);
        let bad = LatticeBasis::new(
            vec![ints(&[1, 0])],
            BigRational::new(BigInt::from(1), BigInt::from(4)),
        );
        assert_eq!(bad.unwrap_err(), Error::BadDelta);
        assert!(LatticeBasis::from_i64(&[&[1, 0], &[0]]).is_err());
    }
}
