use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::bigfloat::{BigComplex, BigFloat};
use crate::error::{Error, Result};
use crate::exactmath::{IntPoly, SturmChain};

/// All complex roots of a polynomial in double precision (Aberth–Ehrlich).
pub fn approx_roots(p: &IntPoly) -> Vec<Complex64> {
    let Some(d) = p.degree() else {
        return Vec::new();
    };
    if d == 0 {
        return Vec::new();
    }
    let lc = p.leading_coeff().to_f64().unwrap_or(f64::MAX);
    let c: Vec<f64> = p
        .coeffs()
        .iter()
        .map(|x| x.to_f64().unwrap_or(0.0) / lc)
        .collect();
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut dv = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dv = dv * z + v;
            v = v * z + a;
        }
        (v, dv)
    };
    // Fujiwara-style radius for the initial circle
    let radius = (0..d)
        .map(|i| libm::pow(c[i].abs(), 1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3)
        * 1.5;
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * core::f64::consts::PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (v, dv) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / dv;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..d {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += Complex64::new(1.0, 0.0) / diff;
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// `(p(z), p'(z))` by Horner's rule.
pub fn eval_with_derivative(p: &IntPoly, z: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = z.prec();
    let mut v = BigComplex::zero(prec);
    let mut dv = BigComplex::zero(prec);
    for a in p.coeffs().iter().rev() {
        dv = &(&dv * z) + &v;
        v = &(&v * z) + &BigComplex::from_int(a, prec);
    }
    (v, dv)
}

/// Newton refinement of a simple root from a double-precision start,
/// doubling the working precision until `prec` bits are reached.
pub fn refine_root(p: &IntPoly, start: Complex64, prec: u32) -> Result<BigComplex> {
    let mut level = 64u32.min(prec);
    let mut z = BigComplex::from_c64(start, level);
    loop {
        z = z.with_prec(level);
        let mut converged = false;
        for _ in 0..12 {
            let (v, dv) = eval_with_derivative(p, &z);
            if dv.is_zero() {
                return Err(Error::NoConvergence(format!(
                    "derivative vanished while refining a root of {p}"
                )));
            }
            let step = &v / &dv;
            z = &z - &step;
            let zmag = z.abs().log2_magnitude().unwrap_or(0).max(0);
            match step.abs().log2_magnitude() {
                None => {
                    converged = true;
                    break;
                }
                Some(e) if e < zmag - i64::from(level) + 6 => {
                    converged = true;
                    break;
                }
                _ => {}
            }
        }
        if level >= prec {
            if !converged {
                return Err(Error::NoConvergence(format!(
                    "Newton iteration for a root of {p} did not settle at {prec} bits; \
                     retry with a different precision"
                )));
            }
            return Ok(z);
        }
        level = (level * 2).min(prec);
    }
}

/// Roots of a squarefree polynomial at `prec` bits: the real roots (from
/// exact isolating intervals, increasing) and one representative with
/// positive imaginary part for each conjugate pair.
pub fn roots_split(p: &IntPoly, prec: u32) -> Result<(Vec<BigFloat>, Vec<BigComplex>)> {
    let chain = SturmChain::new(p)?;
    let width = BigRational::new(BigInt::one(), BigInt::one() << (prec + 8));
    let mut reals = Vec::new();
    for iv in chain.isolate() {
        let fine = chain.refine(&iv, &width)?;
        reals.push(BigFloat::from_rational(&fine.midpoint(), prec));
    }
    let d = p.degree().unwrap_or(0);
    let pairs = (d - reals.len()) / 2;
    if pairs == 0 {
        return Ok((reals, Vec::new()));
    }
    let mut approx = approx_roots(p);
    approx.sort_by(|a, b| b.im.partial_cmp(&a.im).unwrap_or(core::cmp::Ordering::Equal));
    let mut upper: Vec<BigComplex> = Vec::with_capacity(pairs);
    for z0 in approx.into_iter().take(pairs) {
        if z0.im <= 0.0 {
            return Err(Error::NoConvergence(format!(
                "could not separate the non-real roots of {p} in double precision"
            )));
        }
        let z = refine_root(p, z0, prec)?;
        if z.im.signum() != core::cmp::Ordering::Greater {
            return Err(Error::NoConvergence(format!(
                "a non-real root of {p} drifted to the real axis during refinement"
            )));
        }
        upper.push(z);
    }
    // refinement must not have merged two starting points
    for i in 0..upper.len() {
        for j in i + 1..upper.len() {
            let gap = (&upper[i] - &upper[j]).abs();
            let scale = i64::from(prec) / 2;
            if gap.log2_magnitude().is_none_or(|e| e < -scale) {
                return Err(Error::NoConvergence(format!(
                    "two starting points converged to the same root of {p}"
                )));
            }
        }
    }
    upper.sort_by(|a, b| {
        b.im.partial_cmp(&a.im)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(a.re.partial_cmp(&b.re).unwrap_or(core::cmp::Ordering::Equal))
    });
    Ok((reals, upper))
}

/// Sanity helper: `|p(z)|` as a double.
pub fn residual(p: &IntPoly, z: &BigComplex) -> f64 {
    let (v, _) = eval_with_derivative(p, z);
    if v.is_zero() {
        0.0
    } else {
        v.abs().to_f64()
    }
}
