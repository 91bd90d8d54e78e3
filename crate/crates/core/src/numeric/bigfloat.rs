use core::cmp::Ordering;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::float::FloatCore;
use num_traits::{Signed, ToPrimitive, Zero};

/// Binary floating point number `mant * 2^exp` with a mantissa of at most
/// `prec` bits, rounded to nearest after every operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn from_int(x: &BigInt, prec: u32) -> Self {
        BigFloat {
            mant: x.clone(),
            exp: 0,
            prec,
        }
        .normalized()
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(x), prec)
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let n = Self::from_int(x.numer(), prec + 8);
        let d = Self::from_int(x.denom(), prec + 8);
        (&n / &d).with_prec(prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        if x == 0.0 || !x.is_finite() {
            return Self::zero(prec);
        }
        let (m, e, s) = FloatCore::integer_decode(x);
        let mant = BigInt::from(m) * i64::from(s);
        BigFloat {
            mant,
            exp: i64::from(e),
            prec,
        }
        .normalized()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp,
            prec,
        }
        .normalized()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn signum(&self) -> Ordering {
        match self.mant.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Approximate base-2 logarithm of the magnitude (`None` for zero).
    pub fn log2_magnitude(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.mant.bits() as i64)
        }
    }

    fn normalized(mut self) -> Self {
        if self.mant.is_zero() {
            self.exp = 0;
            return self;
        }
        let bits = self.mant.bits();
        let prec = u64::from(self.prec.max(2));
        if bits > prec {
            let shift = bits - prec;
            let neg = self.mant.is_negative();
            let mag = self.mant.abs();
            let half = BigInt::from(1) << (shift - 1);
            let mut rounded: BigInt = (mag + half) >> shift;
            if neg {
                rounded = -rounded;
            }
            self.mant = rounded;
            self.exp += shift as i64;
        }
        self
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let shift = (bits - 62).max(0);
        let top = (&self.mant >> shift as usize).to_i64().unwrap_or(0) as f64;
        let e = self.exp + shift;
        let e = e.clamp(i32::MIN as i64, i32::MAX as i64) as i32;
        libm::scalbn(top, e)
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let prec = self.prec;
        // want mant' = mant * 2^s with (exp - s) even and >= 2 prec + 4 bits
        let want = 2 * i64::from(prec) + 4;
        let mut s = (want - self.mant.bits() as i64).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let shifted: BigInt = &self.mant << s as usize;
        let root = shifted.sqrt();
        BigFloat {
            mant: root,
            exp: (self.exp - s) / 2,
            prec,
        }
        .normalized()
    }

    pub fn max_prec(a: &Self, b: &Self) -> u32 {
        a.prec.max(b.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }
}

impl PartialOrd for BigFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self - other).signum())
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        let prec = BigFloat::max_prec(self, rhs);
        if rhs.is_zero() {
            return self.with_prec(prec);
        }
        if self.is_zero() {
            return rhs.with_prec(prec);
        }
        // skip operands far below the rounding threshold of the other
        let (ta, tb) = (
            self.log2_magnitude().unwrap_or(0),
            rhs.log2_magnitude().unwrap_or(0),
        );
        let guard = i64::from(prec) + 4;
        if ta > tb + guard {
            return self.with_prec(prec);
        }
        if tb > ta + guard {
            return rhs.with_prec(prec);
        }
        let e = self.exp.min(rhs.exp);
        let a: BigInt = &self.mant << (self.exp - e) as usize;
        let b: BigInt = &rhs.mant << (rhs.exp - e) as usize;
        BigFloat {
            mant: a + b,
            exp: e,
            prec,
        }
        .normalized()
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -&self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self + &(-rhs)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
            prec: BigFloat::max_prec(self, rhs),
        }
        .normalized()
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = BigFloat::max_prec(self, rhs);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let shift = (i64::from(prec) + 4 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let num: BigInt = &self.mant << shift as usize;
        BigFloat {
            mant: num / &rhs.mant,
            exp: self.exp - shift - rhs.exp,
            prec,
        }
        .normalized()
    }
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn real(re: BigFloat) -> Self {
        let prec = re.prec();
        BigComplex::new(re, BigFloat::zero(prec))
    }

    pub fn from_int(x: &BigInt, prec: u32) -> Self {
        Self::real(BigFloat::from_int(x, prec))
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        BigComplex::new(BigFloat::from_f64(z.re, prec), BigFloat::from_f64(z.im, prec))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        BigComplex::new(&self.re * s, &self.im * s)
    }

    pub fn scale_int(&self, s: &BigInt) -> Self {
        let prec = self.prec();
        self.scale(&BigFloat::from_int(s, prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-&self.re, -&self.im)
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        BigComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let den = rhs.norm_sqr();
        let num = self * &rhs.conj();
        BigComplex::new(&num.re / &den, &num.im / &den)
    }
}
