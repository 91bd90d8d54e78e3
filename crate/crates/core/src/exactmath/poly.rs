use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// Coefficients are stored in ascending degree order with no trailing
/// zeros, so the zero polynomial has an empty coefficient list.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x - r` for an integer `r`.
    pub fn linear_root(r: BigInt) -> Self {
        Self::new(vec![-r, BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// The primitive part, normalised to a positive leading coefficient.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        Self::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    /// Sign of `p(x)` at a rational point, computed without fractions by
    /// homogenising against the (positive) denominator.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        let num = x.numer();
        let den = x.denom();
        let d = self.coeffs.len();
        if d == 0 {
            return Ordering::Equal;
        }
        let mut acc = BigInt::zero();
        let mut den_pow = BigInt::one();
        // acc = sum c_i num^i den^(d-1-i) = den^(d-1) p(x), den > 0
        for c in self.coeffs.iter().rev() {
            acc = acc * num + c * &den_pow;
            den_pow *= den;
        }
        acc.sign().cmp_to_ordering()
    }

    /// Sign as x goes to +infinity.
    pub fn sign_at_pos_inf(&self) -> Ordering {
        self.leading_coeff().sign().cmp_to_ordering()
    }

    /// Sign as x goes to -infinity.
    pub fn sign_at_neg_inf(&self) -> Ordering {
        let s = self.sign_at_pos_inf();
        if self.deg0() % 2 == 1 {
            s.reverse()
        } else {
            s
        }
    }

    /// Pseudo-division: returns `(q, r)` with `lc(d)^(deg a - deg d + 1) * a = q d + r`.
    pub fn pseudo_divrem(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!d.is_zero(), "pseudo division by zero polynomial");
        let dd = d.deg0();
        if self.is_zero() || self.deg0() < dd {
            return (Self::zero(), self.clone());
        }
        let lc = d.leading_coeff();
        let delta = self.deg0() - dd;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); delta + 1];
        let mut steps = 0usize;
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let t = r[r.len() - 1].clone();
            for c in q.iter_mut() {
                *c *= &lc;
            }
            q[k] += &t;
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[i + k] -= &t * dc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            steps += 1;
        }
        let missing = (delta + 1).saturating_sub(steps);
        if missing > 0 {
            let f = num_traits::pow(lc, missing);
            for c in q.iter_mut() {
                *c *= &f;
            }
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        (Self::new(q), Self::new(r))
    }

    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        self.pseudo_divrem(d).1
    }

    /// Exact division over the integers; `None` if `d` does not divide `self`
    /// with an integral quotient.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.deg0();
        if self.deg0() < dd {
            return None;
        }
        let lc = d.leading_coeff();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg0() - dd + 1];
        while r.len() > dd {
            let k = r.len() - 1 - dd;
            let (t, rem) = r[r.len() - 1].div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[i + k] -= &t * dc;
            }
            q[k] = t;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        if r.is_empty() {
            Some(Self::new(q))
        } else {
            None
        }
    }

    /// Remainder of division by a polynomial over the rationals.
    pub fn rem_rational(coeffs: &[BigRational], modulus: &IntPoly) -> Vec<BigRational> {
        let dm = modulus.deg0();
        let lc = BigRational::from_integer(modulus.leading_coeff());
        let mut r: Vec<BigRational> = coeffs.to_vec();
        while r.last().is_some_and(Zero::is_zero) {
            r.pop();
        }
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let t = &r[r.len() - 1] / &lc;
            for (i, mc) in modulus.coeffs.iter().enumerate() {
                r[i + k] -= &t * BigRational::from_integer(mc.clone());
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        r.resize(dm, BigRational::zero());
        r
    }

    /// Primitive gcd with positive leading coefficient, computed with the
    /// subresultant polynomial remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut u, mut v) = if self.deg0() >= other.deg0() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = u.deg0() - v.deg0();
            let r = u.pseudo_rem(&v);
            if r.is_zero() {
                return v.primitive_part();
            }
            if r.deg0() == 0 {
                return Self::one();
            }
            let divisor = &g * num_traits::pow(h.clone(), delta);
            u = v;
            v = Self::new(r.coeffs.iter().map(|c| c / &divisor).collect());
            g = u.leading_coeff();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h, delta - 1)
            };
        }
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).deg0() == 0
    }

    /// `p / gcd(p, p')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> IntPoly {
        assert!(!self.is_zero(), "squarefree part of zero polynomial");
        let p = self.primitive_part();
        if p.deg0() == 0 {
            return Self::one();
        }
        let g = p.gcd(&p.derivative());
        p.div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    /// Yun's squarefree decomposition of the primitive part.
    ///
    /// Entry `i` holds the product of the irreducible factors of
    /// multiplicity exactly `i + 1` (a constant 1 when there are none).
    pub fn squarefree_decomposition(&self) -> Vec<IntPoly> {
        assert!(!self.is_zero(), "decomposition of zero polynomial");
        let p = self.primitive_part();
        if p.deg0() == 0 {
            return Vec::new();
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        let mut b = p.div_exact(&a0).expect("gcd divides p");
        let mut c = dp.div_exact(&a0).expect("gcd divides p'");
        let mut d = &c - &b.derivative();
        let mut out = Vec::new();
        while b.deg0() > 0 {
            let a = b.gcd(&d);
            let b_next = b.div_exact(&a).expect("gcd divides b");
            c = d.div_exact(&a).expect("gcd divides d");
            d = &c - &b_next.derivative();
            out.push(a.primitive_part());
            b = b_next;
        }
        while out.last().is_some_and(|f| f.deg0() == 0) {
            out.pop();
        }
        out
    }

    /// Squared Euclidean norm of the coefficient vector.
    pub fn norm_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// Companion-style bound: every complex root has modulus below
    /// `1 + max |c_i / c_d|` (Cauchy).
    pub fn cauchy_bound(&self) -> BigRational {
        let lc = self.leading_coeff().abs();
        let max = self.coeffs[..self.coeffs.len().saturating_sub(1)]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        BigRational::one() + BigRational::new(max, lc)
    }
}

trait SignExt {
    fn cmp_to_ordering(self) -> Ordering;
}

impl SignExt for Sign {
    fn cmp_to_ordering(self) -> Ordering {
        match self {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for IntPoly {
    /// Conventional descending form, e.g. `x^5 - x - 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for IntPoly {
    type Err = Error;

    /// Parses sums of terms `c`, `c*x`, `cx`, `x^k`, `c*x^k` in the variable `x`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::PolyParse("empty input".to_string()));
        }
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (idx, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && idx > 0 && !compact[..idx].ends_with('^') {
                terms.push((neg, core::mem::take(&mut cur)));
                neg = ch == '-';
            } else if (ch == '+' || ch == '-') && idx == 0 {
                neg = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        terms.push((neg, cur));

        let mut coeffs: Vec<BigInt> = Vec::new();
        for (neg, body) in terms {
            if body.is_empty() {
                return Err(Error::PolyParse(alloc::format!("empty term in {s:?}")));
            }
            let (coeff, power) = match body.find('x') {
                None => (parse_int(&body)?, 0usize),
                Some(pos) => {
                    let head = body[..pos].trim_end_matches('*');
                    let coeff = if head.is_empty() {
                        BigInt::one()
                    } else {
                        parse_int(head)?
                    };
                    let tail = &body[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else if let Some(exp) = tail.strip_prefix('^') {
                        exp.parse::<usize>().map_err(|_| {
                            Error::PolyParse(alloc::format!("bad exponent {exp:?}"))
                        })?
                    } else {
                        return Err(Error::PolyParse(alloc::format!("bad term {body:?}")));
                    };
                    (coeff, power)
                }
            };
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            if neg {
                coeffs[power] -= coeff;
            } else {
                coeffs[power] += coeff;
            }
        }
        Ok(IntPoly::new(coeffs))
    }
}

fn parse_int(s: &str) -> Result<BigInt> {
    BigInt::from_str(s).map_err(|_| Error::PolyParse(alloc::format!("bad integer {s:?}")))
}
