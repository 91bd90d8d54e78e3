//! Admissibility of an integer matrix and its spectrum.
//!
//! Admissible means: `det M = 1`, the characteristic polynomial has exactly
//! one distinct real root `alpha`, and `alpha` is positive, different from
//! one, and a simple root. Everything about `alpha` is decided exactly;
//! the complex eigenvalues are only ever approximated.

use alloc::format;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, IntPoly, SturmChain};
use crate::lattice::RealAlgebraic;
use crate::numeric::linalg::{self, CVec};
use crate::numeric::{roots, BigComplex, BigFloat};

/// Why a matrix was rejected. The order of the variants is the order in
/// which the conditions are reported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RejectReason {
    DetNotOne,
    RealRootCount,
    AlphaNotPositive,
    AlphaIsOne,
    AlphaNotSimple,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::DetNotOne => "det_not_one",
            RejectReason::RealRootCount => "real_root_count",
            RejectReason::AlphaNotPositive => "alpha_not_positive",
            RejectReason::AlphaIsOne => "alpha_is_one",
            RejectReason::AlphaNotSimple => "alpha_not_simple",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            RejectReason::DetNotOne => "determinant is not 1",
            RejectReason::RealRootCount => "characteristic polynomial does not have exactly one real root",
            RejectReason::AlphaNotPositive => "the real eigenvalue is not positive",
            RejectReason::AlphaIsOne => "the real eigenvalue equals 1",
            RejectReason::AlphaNotSimple => "the real eigenvalue is a repeated root",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    Rejected(RejectReason),
}

/// Why no separate check on the non-real spectrum is needed.
pub const PAIRING_NOTE: &str = "the characteristic polynomial has real coefficients, so its \
non-real roots come in conjugate pairs; with a single real root every other eigenvalue has \
exactly one representative with positive imaginary part";

#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub dim: usize,
    pub n: usize,
    pub det: BigInt,
    pub charpoly: IntPoly,
    pub is_unimodular: bool,
    pub real_root_count: usize,
    /// Present whenever the squarefree part has exactly one real root.
    pub alpha: Option<RealAlgebraic>,
    /// Multiplicity of `alpha` in the characteristic polynomial.
    pub alpha_multiplicity: usize,
    pub alpha_simple: bool,
    pub alpha_positive: bool,
    pub alpha_not_one: bool,
    /// Every failed condition, in reporting order.
    pub failures: Vec<RejectReason>,
    pub verdict: Verdict,
}

impl AdmissibilityReport {
    pub fn is_admissible(&self) -> bool {
        self.verdict == Verdict::Admissible
    }

    /// `alpha`, or an error naming the first failed condition.
    pub fn require_alpha(&self) -> Result<&RealAlgebraic> {
        match (&self.verdict, &self.alpha) {
            (Verdict::Admissible, Some(a)) => Ok(a),
            (Verdict::Rejected(r), _) => Err(Error::NotAdmissible(r.describe().into())),
            _ => Err(Error::Consistency("admissible report without alpha".into())),
        }
    }
}

/// Shape checks shared by every entry point that wants `2n+1`.
pub fn check_shape(m: &IntMatrix) -> Result<usize> {
    let d = m.dim();
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    if d < 3 {
        return Err(Error::DimensionTooSmall(d));
    }
    Ok((d - 1) / 2)
}

/// Width below which the reported isolating interval for `alpha` lies.
pub fn alpha_interval_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 32u32)
}

/// Multiplicity of the root isolated by `alpha` in `p` (0 if not a root).
pub fn root_multiplicity(p: &IntPoly, alpha: &RealAlgebraic) -> Result<usize> {
    for (i, f) in p.squarefree_decomposition().iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        if SturmChain::new(f)?.count(alpha.interval()) == 1 {
            return Ok(i + 1);
        }
    }
    Ok(0)
}

pub fn verify_admissible(m: &IntMatrix) -> Result<AdmissibilityReport> {
    let n = check_shape(m)?;
    let det = m.det();
    let chi = m.charpoly();
    let sqf = chi.squarefree_part();
    let chain = SturmChain::new(&sqf)?;
    let intervals = chain.isolate();
    let real_root_count = intervals.len();

    let mut alpha = None;
    let mut alpha_multiplicity = 0;
    let mut alpha_positive = false;
    let mut alpha_not_one = false;
    if real_root_count == 1 {
        let mut a = RealAlgebraic::new(sqf.clone(), intervals[0].clone())?;
        a.refine(&alpha_interval_width())?;
        alpha_multiplicity = root_multiplicity(&chi, &a)?;
        alpha_positive = chain.count_positive() == 1;
        alpha_not_one = !sqf.eval(&BigInt::one()).is_zero();
        alpha = Some(a);
    }
    let alpha_simple = alpha_multiplicity == 1;
    let is_unimodular = det.is_one();

    let mut failures = Vec::new();
    if !is_unimodular {
        failures.push(RejectReason::DetNotOne);
    }
    if real_root_count != 1 {
        failures.push(RejectReason::RealRootCount);
    } else {
        if !alpha_positive {
            failures.push(RejectReason::AlphaNotPositive);
        }
        if !alpha_not_one {
            failures.push(RejectReason::AlphaIsOne);
        }
        if !alpha_simple {
            failures.push(RejectReason::AlphaNotSimple);
        }
    }
    let verdict = failures
        .first()
        .map_or(Verdict::Admissible, |&r| Verdict::Rejected(r));
    Ok(AdmissibilityReport {
        dim: m.dim(),
        n,
        det,
        charpoly: chi,
        is_unimodular,
        real_root_count,
        alpha,
        alpha_multiplicity,
        alpha_simple,
        alpha_positive,
        alpha_not_one,
        failures,
        verdict,
    })
}

/// One eigenvalue (a representative of its conjugate pair if non-real).
#[derive(Clone, Debug)]
pub struct Eigen {
    pub value: BigComplex,
    pub multiplicity: usize,
    /// Unit-norm approximate eigenvector.
    pub vector: CVec,
    /// `|(M - value) vector| / |vector|`.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct NumericSpectrum {
    pub prec: u32,
    /// Real eigenvalues in increasing order.
    pub real: Vec<Eigen>,
    /// One representative per conjugate pair, `Im > 0`, by decreasing `Im`.
    pub upper: Vec<Eigen>,
}

impl NumericSpectrum {
    /// Sum of all eigenvalues with multiplicity (a trace check).
    pub fn trace(&self) -> f64 {
        let r: f64 = self
            .real
            .iter()
            .map(|e| e.value.re.to_f64() * e.multiplicity as f64)
            .sum();
        let c: f64 = self
            .upper
            .iter()
            .map(|e| 2.0 * e.value.re.to_f64() * e.multiplicity as f64)
            .sum();
        r + c
    }

    /// Product of all eigenvalues with multiplicity (a determinant check).
    pub fn det(&self) -> f64 {
        let r: f64 = self
            .real
            .iter()
            .map(|e| libm::pow(e.value.re.to_f64(), e.multiplicity as f64))
            .product();
        let c: f64 = self
            .upper
            .iter()
            .map(|e| libm::pow(e.value.norm_sqr().to_f64(), e.multiplicity as f64))
            .product();
        r * c
    }

    pub fn max_residual(&self) -> f64 {
        self.real
            .iter()
            .chain(&self.upper)
            .map(|e| e.residual)
            .fold(0.0, f64::max)
    }
}

/// Columns of `chi(M) / (M - lambda)^mult`, i.e. a spanning set of the
/// generalised eigenspace of `lambda`.
pub fn generalized_eigenspace_span(
    m: &IntMatrix,
    chi: &IntPoly,
    lambda: &BigComplex,
    mult: usize,
) -> Vec<CVec> {
    let h = linalg::deflate(chi, lambda, mult);
    linalg::eval_complex_poly(&h, m, lambda.prec()).columns()
}

fn eigenvector(m: &IntMatrix, chi: &IntPoly, lambda: &BigComplex, mult: usize) -> Result<(CVec, f64)> {
    let prec = lambda.prec();
    let span = generalized_eigenspace_span(m, chi, lambda, mult);
    let mut v = span
        .into_iter()
        .max_by(|a, b| {
            linalg::norm(a)
                .to_f64()
                .partial_cmp(&linalg::norm(b).to_f64())
                .unwrap_or(Ordering::Equal)
        })
        .unwrap_or_default();
    let scale = 1.0 + m.max_abs_entry_f64();
    let tiny = libm::ldexp(1.0, -(prec as i32) / 2) * scale;
    // Walk down the Jordan chain until the next step vanishes.
    for _ in 0..mult {
        let nv = linalg::norm(&v).to_f64();
        if nv == 0.0 {
            break;
        }
        let w = shifted_apply(m, lambda, &v);
        if linalg::norm(&w).to_f64() <= tiny * nv {
            break;
        }
        v = w;
    }
    let nv = linalg::norm(&v);
    if nv.is_zero() {
        return Err(Error::NoConvergence(format!(
            "no eigenvector found at {prec} bits; retry with a higher precision"
        )));
    }
    let inv = BigComplex::real(&BigFloat::from_i64(1, prec) / &nv);
    let v = linalg::scale(&v, &inv);
    let res = linalg::norm(&shifted_apply(m, lambda, &v)).to_f64();
    Ok((v, res))
}

fn shifted_apply(m: &IntMatrix, lambda: &BigComplex, v: &[BigComplex]) -> CVec {
    let mv = linalg::int_mul_vec(m, v);
    linalg::axpy_neg(&mv, lambda, v)
}

/// Eigenvalues of any square integer matrix at `prec` bits, each with an
/// approximate eigenvector whose residual is at most `2^(-prec/2)`.
pub fn numeric_spectrum(m: &IntMatrix, prec: u32) -> Result<NumericSpectrum> {
    let chi = m.charpoly();
    let work = prec + 64;
    let bound = libm::ldexp(1.0, -(prec as i32) / 2);
    let mut real = Vec::new();
    let mut upper = Vec::new();
    for (i, f) in chi.squarefree_decomposition().iter().enumerate() {
        if f.degree().unwrap_or(0) == 0 {
            continue;
        }
        let mult = i + 1;
        let (rs, us) = roots::roots_split(f, work)?;
        for r in rs {
            real.push((BigComplex::real(r), mult));
        }
        for u in us {
            upper.push((u, mult));
        }
    }
    let finish = |list: Vec<(BigComplex, usize)>| -> Result<Vec<Eigen>> {
        list.into_iter()
            .map(|(value, multiplicity)| {
                let (vector, residual) = eigenvector(m, &chi, &value, multiplicity)?;
                if residual > bound {
                    return Err(Error::NoConvergence(format!(
                        "eigenvector residual {residual:e} exceeds 2^-{} ; retry with a higher precision",
                        prec / 2
                    )));
                }
                Ok(Eigen {
                    value,
                    multiplicity,
                    vector,
                    residual,
                })
            })
            .collect()
    };
    let mut real = finish(real)?;
    let mut upper = finish(upper)?;
    real.sort_by(|a, b| a.value.re.partial_cmp(&b.value.re).unwrap_or(Ordering::Equal));
    upper.sort_by(|a, b| {
        b.value
            .im
            .partial_cmp(&a.value.im)
            .unwrap_or(Ordering::Equal)
            .then(a.value.re.partial_cmp(&b.value.re).unwrap_or(Ordering::Equal))
    });
    Ok(NumericSpectrum { prec, real, upper })
}

/// Orthonormal bases of the generalised eigenspaces `W(beta)` for every
/// distinct eigenvalue with positive imaginary part, paired with the
/// eigenvalue and its algebraic multiplicity.
pub fn upper_half_eigenspaces(
    m: &IntMatrix,
    prec: u32,
) -> Result<Vec<(BigComplex, usize, Vec<CVec>)>> {
    let spec = numeric_spectrum(m, prec)?;
    let chi = m.charpoly();
    Ok(spec
        .upper
        .into_iter()
        .map(|e| {
            let span = generalized_eigenspace_span(m, &chi, &e.value, e.multiplicity);
            let basis = linalg::pivoted_orthonormal_basis(&span, e.multiplicity);
            (e.value, e.multiplicity, basis)
        })
        .collect())
}

/// Numeric value of `alpha` at `prec` bits from its exact interval.
pub fn alpha_value(alpha: &RealAlgebraic, prec: u32) -> Result<BigFloat> {
    Ok(BigFloat::from_rational(&alpha.approximate(prec + 8)?, prec))
}
