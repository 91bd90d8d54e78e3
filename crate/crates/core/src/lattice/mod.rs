//! Lattice reduction and what it is used for here: certified minimal
//! polynomials of real algebraic numbers and short integer dependence
//! witnesses.

mod lll;

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use lll::{default_delta, lll_reduce, LatticeBasis, LllOutput};

use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, IntPoly, Interval, SturmChain};

/// A real algebraic number: a squarefree defining polynomial and a rational
/// interval `(lo, hi]` holding exactly one of its roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealAlgebraic {
    defining: IntPoly,
    iv: Interval,
    minpoly: Option<IntPoly>,
}

impl RealAlgebraic {
    pub fn new(defining: IntPoly, iv: Interval) -> Result<Self> {
        let chain = SturmChain::new(&defining)?;
        let c = chain.count(&iv);
        if c != 1 {
            return Err(Error::NotIsolating(c));
        }
        Ok(RealAlgebraic {
            defining,
            iv,
            minpoly: None,
        })
    }

    pub fn defining(&self) -> &IntPoly {
        &self.defining
    }

    pub fn interval(&self) -> &Interval {
        &self.iv
    }

    pub fn minpoly(&self) -> Option<&IntPoly> {
        self.minpoly.as_ref()
    }

    /// Shrink the stored interval below `width`.
    pub fn refine(&mut self, width: &BigRational) -> Result<()> {
        let chain = SturmChain::new(&self.defining)?;
        self.iv = chain.refine(&self.iv, width)?;
        Ok(())
    }

    /// A rational within `2^-bits` of the root (midpoint of a refined interval).
    pub fn approximate(&self, bits: u32) -> Result<BigRational> {
        let chain = SturmChain::new(&self.defining)?;
        let width = BigRational::new(BigInt::one(), BigInt::one() << bits);
        Ok(chain.refine(&self.iv, &width)?.midpoint())
    }

    /// Sign of `p(root)` for any integer polynomial `p`, exactly.
    ///
    /// Zero is detected through `gcd(p, defining)`; otherwise the interval
    /// is refined until `p` has no root in it.
    pub fn sign_of(&self, p: &IntPoly) -> Result<core::cmp::Ordering> {
        if p.is_zero() {
            return Ok(core::cmp::Ordering::Equal);
        }
        let g = p.gcd(&self.defining);
        if g.degree().unwrap_or(0) > 0 && SturmChain::new(&g)?.count(&self.iv) == 1 {
            return Ok(core::cmp::Ordering::Equal);
        }
        let sp = p.squarefree_part();
        let chain_p = SturmChain::new(&sp)?;
        let chain = SturmChain::new(&self.defining)?;
        let mut iv = self.iv.clone();
        loop {
            if chain_p.count(&iv) == 0 && sp.sign_at(&iv.hi) != core::cmp::Ordering::Equal {
                return Ok(p.sign_at(&iv.hi));
            }
            let w = iv.width() / BigRational::from_integer(BigInt::from(2));
            iv = chain.refine(&iv, &w)?;
        }
    }

    /// Compute (once) and cache the minimal polynomial.
    pub fn ensure_minpoly(&mut self, opts: &MinpolyOptions) -> Result<&IntPoly> {
        if self.minpoly.is_none() {
            let cert = minpoly_of_root(self, opts)?;
            self.minpoly = Some(cert.minpoly);
        }
        Ok(self.minpoly.as_ref().expect("just set"))
    }

    /// Attach a minimal polynomial after checking the verification pair.
    pub fn with_minpoly(mut self, m: IntPoly) -> Result<Self> {
        if !verify_candidate(&m, &self.defining, &self.iv) {
            return Err(Error::Consistency(alloc::format!(
                "{m} does not vanish at the isolated root of {}",
                self.defining
            )));
        }
        self.minpoly = Some(m.primitive_part());
        Ok(self)
    }
}

/// Precision schedule for [`minpoly_of_root`].
#[derive(Clone, Debug)]
pub struct MinpolyOptions {
    pub start_bits: u32,
    pub max_bits: u32,
    pub delta: BigRational,
}

impl Default for MinpolyOptions {
    fn default() -> Self {
        MinpolyOptions {
            start_bits: 64,
            max_bits: 8192,
            delta: default_delta(),
        }
    }
}

/// Evidence that a given degree admits no integer relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeExclusion {
    pub degree: usize,
    pub bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinpolyCertificate {
    pub minpoly: IntPoly,
    /// Precision at which the minimal polynomial was found.
    pub bits: u32,
    /// Every degree below `deg(minpoly)`, each excluded by the LLL bound.
    pub excluded: Vec<DegreeExclusion>,
    /// Number of precision doublings performed.
    pub doublings: u32,
}

/// Candidate check: `m` divides `defining` over the integers and its own
/// Sturm count on the isolating interval is 1 (so the isolated root is a
/// root of `m`; `m` is squarefree as a divisor of a squarefree polynomial).
fn verify_candidate(m: &IntPoly, defining: &IntPoly, iv: &Interval) -> bool {
    let m = m.primitive_part();
    if m.degree().unwrap_or(0) == 0 {
        return false;
    }
    if defining.div_exact(&m).is_none() {
        return false;
    }
    let g = m.gcd(defining);
    match SturmChain::new(&g) {
        Ok(chain) => chain.count(iv) == 1,
        Err(_) => false,
    }
}

fn bit_len(x: &BigInt) -> u64 {
    x.bits()
}

/// Minimal polynomial of a real algebraic number, certified exactly.
///
/// Degrees `d = 1, 2, ...` are tried in order. At each degree the lattice
/// spanned by `(e_i, round(2^bits * a^i))`, `i = 0..=d`, is LLL-reduced
/// where `a` is a rational approximation of the root. Each reduced vector is
/// a candidate and is accepted only after exact verification. A degree is
/// ruled out once the first reduced vector exceeds the LLL guarantee times
/// the Mignotte bound for factors of the defining polynomial; otherwise the
/// precision is doubled. Every rejected degree is thereby certified, so the
/// result is minimal.
pub fn minpoly_of_root(alpha: &RealAlgebraic, opts: &MinpolyOptions) -> Result<MinpolyCertificate> {
    let defining = alpha.defining().primitive_part();
    let max_deg = defining.degree().ok_or(Error::ZeroPolynomial)?;
    let chain = SturmChain::new(&defining)?;

    // |root| <= amax
    let amax = {
        let a = alpha.iv.lo.abs().max(alpha.iv.hi.abs());
        (a.ceil().to_integer()).max(BigInt::one())
    };
    let amax_bits = bit_len(&amax);
    let f_norm_sq = defining.norm_sq();
    let (dp, dq) = (opts.delta.numer().clone(), opts.delta.denom().clone());

    let mut bits = opts.start_bits.max(1);
    let mut doublings = 0;
    let mut excluded = Vec::new();

    for d in 1..=max_deg {
        loop {
            // approximation good enough that 2^bits |a^i - approx^i| <= 1/2
            let extra = d as u64 * amax_bits + bit_len(&BigInt::from(d)) + 2;
            let width_bits = bits as u64 + extra;
            let width = BigRational::new(BigInt::one(), BigInt::one() << width_bits);
            let approx = chain.refine(&alpha.iv, &width)?.midpoint();
            let scale = BigRational::from_integer(BigInt::one() << bits);

            let mut rows = Vec::with_capacity(d + 1);
            let mut pow = BigRational::one();
            for i in 0..=d {
                let mut row = vec![BigInt::zero(); d + 2];
                row[i] = BigInt::one();
                row[d + 1] = round_rational(&(&pow * &scale));
                rows.push(row);
                pow *= &approx;
            }
            let basis = LatticeBasis::new(rows, opts.delta.clone())?;
            let reduced = lll_reduce(&basis)?;

            for v in &reduced.basis.vectors {
                let cand = IntPoly::new(v[..=d].to_vec());
                if verify_candidate(&cand, &defining, &alpha.iv) {
                    return Ok(MinpolyCertificate {
                        minpoly: cand.primitive_part(),
                        bits,
                        excluded,
                        doublings,
                    });
                }
            }

            // Exclusion test: |b_1|^2 > gamma^d (d + 2) 4^d |f|^2 with
            // gamma = 1 / (delta - 1/4) = 4q / (4p - q).
            let b1 = &reduced.basis.vectors[0];
            let b1_sq: BigInt = b1.iter().map(|x| x * x).sum();
            let four = BigInt::from(4);
            let gamma_num = num_traits::pow(&four * &dq, d);
            let gamma_den = num_traits::pow(&four * &dp - &dq, d);
            let bound = gamma_num * BigInt::from(d + 2) * num_traits::pow(four, d) * &f_norm_sq;
            if b1_sq * gamma_den > bound {
                excluded.push(DegreeExclusion { degree: d, bits });
                break;
            }

            if bits >= opts.max_bits {
                return Err(Error::PrecisionExhausted { bits });
            }
            bits = (bits * 2).min(opts.max_bits);
            doublings += 1;
        }
    }
    Err(Error::Consistency(alloc::format!(
        "no degree up to {max_deg} admits a relation for a root of {defining}"
    )))
}

fn round_rational(x: &BigRational) -> BigInt {
    let two = BigInt::from(2);
    (x.numer() * &two + x.denom()).div_floor(&(x.denom() * &two))
}

/// A short nonzero integer vector in the span of a rational kernel basis.
///
/// Each basis vector is cleared of denominators and made primitive, the
/// resulting integer vectors are LLL-reduced, and the first reduced vector
/// is returned with its first nonzero entry positive. The result is
/// size-reduced, not provably shortest.
pub fn shorten_witness(kernel: &[Vec<BigRational>]) -> Result<Vec<BigInt>> {
    if kernel.is_empty() {
        return Err(Error::EmptyKernel);
    }
    let rows: Vec<Vec<BigInt>> = kernel.iter().map(|v| clear_denominators(v)).collect();
    let reduced = lll_reduce(&LatticeBasis::with_default_delta(rows)?)?;
    let mut w = reduced.basis.vectors[0].clone();
    if w.iter().find(|x| !x.is_zero()).is_some_and(Signed::is_negative) {
        for x in w.iter_mut() {
            *x = -&*x;
        }
    }
    Ok(w)
}

/// A basis of the integer kernel `{x in Z^d : A x = 0}` of a square integer
/// matrix.
///
/// The lattice with rows `(e_i, W A e_i)` is LLL-reduced for growing
/// weights `W`. Its rows with zero tail are exactly the kernel vectors, and
/// once as many reduced rows have zero tail as the kernel has rank, those
/// rows form a basis of the full (saturated) kernel lattice: the remaining
/// rows have independent tails, so no kernel vector needs them.
pub fn integer_kernel(a: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    let d = a.dim();
    let rank = a.to_rat().rank();
    let want = d - rank;
    if want == 0 {
        return Ok(Vec::new());
    }
    let mut wbits = a.max_abs_entry().bits() + d as u64 + 8;
    for _ in 0..16 {
        let w = BigInt::one() << wbits;
        let rows: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                let mut r = vec![BigInt::zero(); 2 * d];
                r[i] = BigInt::one();
                for k in 0..d {
                    r[d + k] = &w * a.get(k, i);
                }
                r
            })
            .collect();
        let reduced = lll_reduce(&LatticeBasis::with_default_delta(rows)?)?;
        let kernel: Vec<Vec<BigInt>> = reduced
            .basis
            .vectors
            .iter()
            .filter(|v| v[d..].iter().all(Zero::is_zero))
            .map(|v| v[..d].to_vec())
            .collect();
        if kernel.len() == want {
            return Ok(kernel);
        }
        wbits *= 2;
    }
    Err(Error::Consistency("integer kernel did not separate under LLL".into()))
}

/// Primitive integer vector proportional to a rational vector.
pub fn clear_denominators(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}
