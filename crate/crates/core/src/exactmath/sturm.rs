use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Half-open rational interval `(lo, hi]`.
///
/// All root counts in this crate use the half-open convention: a root equal
/// to `hi` is counted, a root equal to `lo` is not.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInterval);
        }
        Ok(Interval { lo, hi })
    }

    pub fn from_ints(lo: i64, hi: i64) -> Result<Self> {
        Self::new(
            BigRational::from_integer(BigInt::from(lo)),
            BigRational::from_integer(BigInt::from(hi)),
        )
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2))
    }

    /// Membership in `(lo, hi]`.
    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo < x && x <= &self.hi
    }

    /// `(lo, hi]` lies inside `(other.lo, other.hi]`.
    pub fn is_within(&self, other: &Interval) -> bool {
        self.lo >= other.lo && self.hi <= other.hi
    }

    pub fn disjoint(&self, other: &Interval) -> bool {
        self.hi <= other.lo || other.hi <= self.lo
    }
}

/// Sturm chain of a squarefree integer polynomial.
///
/// Built once and reused for many interval counts; the remainders are kept
/// primitive to bound coefficient growth.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(p: &IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if !p.is_squarefree() {
            return Err(Error::NotSquarefree);
        }
        let mut chain = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d);
        }
        while chain.len() >= 2 {
            let n = chain.len();
            let (a, b) = (&chain[n - 2], &chain[n - 1]);
            if b.degree() == Some(0) {
                break;
            }
            let prem = a.pseudo_rem(b);
            if prem.is_zero() {
                break;
            }
            // prem = lc(b)^(e) * rem with e = deg a - deg b + 1; the Sturm
            // recurrence needs a positive multiple of -rem.
            let e = a.degree().unwrap_or(0) - b.degree().unwrap_or(0) + 1;
            let lc_neg = b.leading_coeff().is_negative() && e % 2 == 1;
            let next = if lc_neg { prem } else { -&prem };
            let c = next.content();
            chain.push(IntPoly::new(next.coeffs().iter().map(|x| x / &c).collect()));
        }
        Ok(SturmChain { chain })
    }

    pub fn polynomial(&self) -> &IntPoly {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    /// Number of distinct real roots in `(lo, hi]`.
    pub fn count(&self, iv: &Interval) -> usize {
        self.variations_at(&iv.lo) - self.variations_at(&iv.hi)
    }

    /// Number of distinct real roots on the whole line, counted on the
    /// finite window given by [`root_bound`].
    pub fn count_all(&self) -> usize {
        self.count(&root_window(self.polynomial()))
    }

    /// Number of distinct positive real roots.
    pub fn count_positive(&self) -> usize {
        let w = root_window(self.polynomial());
        self.count(&Interval {
            lo: BigRational::zero(),
            hi: w.hi,
        })
    }

    /// Bisect an isolating interval until it is narrower than `width`.
    pub fn refine(&self, iv: &Interval, width: &BigRational) -> Result<Interval> {
        let c = self.count(iv);
        if c != 1 {
            return Err(Error::NotIsolating(c));
        }
        let mut cur = iv.clone();
        while &cur.width() >= width {
            let mid = cur.midpoint();
            let left = Interval {
                lo: cur.lo.clone(),
                hi: mid.clone(),
            };
            if self.count(&left) == 1 {
                cur = left;
            } else {
                cur = Interval { lo: mid, hi: cur.hi };
            }
        }
        Ok(cur)
    }

    /// Disjoint intervals of width at most 1, each holding exactly one real
    /// root, in increasing order.
    pub fn isolate(&self) -> Vec<Interval> {
        let mut out = Vec::new();
        let mut stack = vec![root_window(self.polynomial())];
        let one = BigRational::one();
        while let Some(iv) = stack.pop() {
            match self.count(&iv) {
                0 => {}
                1 if iv.width() <= one => out.push(iv),
                _ => {
                    let mid = iv.midpoint();
                    stack.push(Interval {
                        lo: iv.lo.clone(),
                        hi: mid.clone(),
                    });
                    stack.push(Interval { lo: mid, hi: iv.hi });
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }
}

/// Smallest power of two `B` at or above the Cauchy bound; every real root
/// lies in `(-B, B)`.
pub fn root_bound(p: &IntPoly) -> BigRational {
    let cauchy = p.cauchy_bound();
    let mut b = BigRational::one();
    while b < cauchy {
        b *= BigRational::from_integer(BigInt::from(2));
    }
    b
}

/// `(-B, B]` with `B` from [`root_bound`].
pub fn root_window(p: &IntPoly) -> Interval {
    let b = root_bound(p);
    Interval { lo: -b.clone(), hi: b }
}

/// Exact count of distinct real roots of a squarefree polynomial in `(lo, hi]`.
pub fn sturm_count(p: &IntPoly, iv: &Interval) -> Result<usize> {
    Ok(SturmChain::new(p)?.count(iv))
}

/// Exact count of distinct real roots on the whole line.
pub fn count_real_roots(p: &IntPoly) -> Result<usize> {
    Ok(SturmChain::new(p)?.count_all())
}

/// Isolating intervals for all real roots of a squarefree polynomial.
pub fn isolate_real_roots(p: &IntPoly) -> Result<Vec<Interval>> {
    Ok(SturmChain::new(p)?.isolate())
}
