//! Numeric realisation of the deck group acting on `H x C^n` and checks of
//! the identities it must satisfy.
//!
//! The construction is carried out at a chosen binary precision (the real
//! eigenvector `a`, an orthonormal basis `b_1, ..., b_n` of the sum `W` of
//! generalised eigenspaces for eigenvalues with positive imaginary part,
//! and the matrix `R` of `M` on that basis, `M B = B R`). Everything
//! downstream (`Delta = log R^T`, the generators, the checks) runs in double
//! precision, which is ample for the tolerances involved.

mod matrix;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use matrix::{singular_values, CMat, C64};

use crate::curvetest::DeckWord;
use crate::error::{Error, Result};
use crate::exactmath::IntMatrix;
use crate::numeric::linalg::{self, CVec, QrSolver};
use crate::numeric::{BigComplex, BigFloat};
use crate::spectra::{alpha_value, upper_half_eigenspaces, verify_admissible};

/// Consecutive basis vectors spanning one generalised eigenspace.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenBlock {
    pub beta: C64,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogMethod {
    /// `log(beta) I + log(I + N)` on each single-eigenvalue block.
    SpectralBlocks,
    /// Inverse scaling and squaring on the whole matrix.
    InverseScalingSquaring,
}

/// A translation vector in `R x C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Translation {
    pub w: f64,
    pub z: Vec<C64>,
}

#[derive(Clone, Debug)]
pub struct EPData {
    pub m: IntMatrix,
    pub n: usize,
    pub prec: u32,
    pub alpha: f64,
    /// Unit real eigenvector for `alpha`.
    pub a: Vec<f64>,
    /// `b_1, ..., b_n`, each of length `2n+1`.
    pub basis: Vec<Vec<C64>>,
    pub blocks: Vec<EigenBlock>,
    /// `M b_j = sum_l R_lj b_l`.
    pub r: CMat,
    /// `log R^T`, principal branch.
    pub delta: CMat,
    pub log_method: LogMethod,
    /// `u_i = (a^i, b_1^i, ..., b_n^i)` for `i = 1, ..., 2n+1`.
    pub u: Vec<Translation>,
    /// Largest construction residual (`M a - alpha a` and `M B - B R`).
    pub residual: f64,
}

impl EPData {
    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn rt(&self) -> CMat {
        self.r.transpose()
    }

    pub fn rt_pow(&self, e: i64) -> CMat {
        self.rt()
            .pow(e)
            .expect("R is invertible: its eigenvalues are nonzero")
    }

    pub fn alpha_pow(&self, e: i64) -> f64 {
        libm::pow(self.alpha, e as f64)
    }

    /// `g_0` for `i = 0`, otherwise the translation `g_i` by `u_i`.
    pub fn generator(&self, i: usize) -> AffineAut {
        if i == 0 {
            AffineAut {
                m: 1,
                t_w: 0.0,
                t_z: vec![C64::new(0.0, 0.0); self.n],
            }
        } else {
            AffineAut::translation(&self.u[i - 1])
        }
    }
}

/// Intermediate high-precision construction.
struct Raw {
    alpha: BigFloat,
    a: Vec<BigFloat>,
    basis: Vec<CVec>,
    blocks: Vec<EigenBlock>,
}

fn residual_bound(prec: u32) -> f64 {
    libm::ldexp(1.0, -(prec as i32) / 2)
}

/// Unit eigenvector for `alpha` from the largest column of
/// `adj(alpha I - M) = sum_k B_k alpha^(d-k)`.
fn alpha_eigenvector(m: &IntMatrix, alpha: &BigFloat) -> Vec<BigFloat> {
    let prec = alpha.prec();
    let d = m.dim();
    let (_, bs) = m.charpoly_with_adjugate();
    let mut pows = vec![BigFloat::from_i64(1, prec)];
    for _ in 1..d {
        let next = pows.last().expect("nonempty") * alpha;
        pows.push(next);
    }
    let adj = |i: usize, j: usize| {
        bs.iter().enumerate().fold(BigFloat::zero(prec), |acc, (k, b)| {
            &acc + &(&pows[d - 1 - k] * &BigFloat::from_int(b.get(i, j), prec))
        })
    };
    let cols: Vec<Vec<BigFloat>> = (0..d).map(|j| (0..d).map(|i| adj(i, j)).collect()).collect();
    let norm_sq = |c: &Vec<BigFloat>| {
        c.iter()
            .fold(BigFloat::zero(prec), |acc, x| &acc + &(x * x))
            .to_f64()
    };
    let best = (0..d)
        .max_by(|&x, &y| norm_sq(&cols[x]).total_cmp(&norm_sq(&cols[y])))
        .unwrap_or(0);
    let col = &cols[best];
    let nrm = col
        .iter()
        .fold(BigFloat::zero(prec), |acc, x| &acc + &(x * x))
        .sqrt();
    let lead_negative = col.iter().find(|x| !x.is_zero()).is_some_and(BigFloat::is_negative);
    let mut inv = &BigFloat::from_i64(1, prec) / &nrm;
    if lead_negative {
        inv = -&inv;
    }
    col.iter().map(|x| x * &inv).collect()
}

fn raw_construction(m: &IntMatrix, prec: u32) -> Result<Raw> {
    let report = verify_admissible(m)?;
    let alpha = report.require_alpha()?;
    let work = prec + 64;
    let alpha_hat = alpha_value(alpha, work)?;
    let a = alpha_eigenvector(m, &alpha_hat);
    let (basis, blocks) = upper_basis(m, prec)?;
    if basis.len() != report.n {
        return Err(Error::Consistency(format!(
            "W has dimension {} but n = {}",
            basis.len(),
            report.n
        )));
    }
    Ok(Raw {
        alpha: alpha_hat,
        a,
        basis,
        blocks,
    })
}

/// Concatenated orthonormal bases of the upper-half generalised eigenspaces.
fn upper_basis(m: &IntMatrix, prec: u32) -> Result<(Vec<CVec>, Vec<EigenBlock>)> {
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    for (beta, mult, vecs) in upper_half_eigenspaces(m, prec)? {
        if vecs.len() != mult {
            return Err(Error::NoConvergence(format!(
                "generalised eigenspace of dimension {mult} resolved to {} vectors; \
                 retry with a higher precision",
                vecs.len()
            )));
        }
        blocks.push(EigenBlock {
            beta: beta.to_c64(),
            start: basis.len(),
            len: mult,
        });
        basis.extend(vecs);
    }
    Ok((basis, blocks))
}

fn assemble(m: &IntMatrix, raw: Raw, prec: u32) -> Result<EPData> {
    let d = m.dim();
    let n = raw.basis.len();

    let a_c: CVec = raw.a.iter().map(|x| BigComplex::real(x.clone())).collect();
    let ma = linalg::int_mul_vec(m, &a_c);
    let alpha_c = BigComplex::real(raw.alpha.clone());
    let mut residual = linalg::norm(&linalg::axpy_neg(&ma, &alpha_c, &a_c)).to_f64();

    let qr = QrSolver::new(&raw.basis);
    let mut r = CMat::zeros(n);
    for (j, b) in raw.basis.iter().enumerate() {
        let mb = linalg::int_mul_vec(m, b);
        let c = qr.solve(&mb);
        let mut rest = mb.clone();
        for (l, cl) in c.iter().enumerate() {
            rest = linalg::axpy_neg(&rest, cl, &raw.basis[l]);
            r[(l, j)] = cl.to_c64();
        }
        residual = residual.max(linalg::norm(&rest).to_f64());
    }

    let basis: Vec<Vec<C64>> = raw
        .basis
        .iter()
        .map(|v| v.iter().map(BigComplex::to_c64).collect())
        .collect();
    let a: Vec<f64> = raw.a.iter().map(BigFloat::to_f64).collect();
    let u = (0..d)
        .map(|i| Translation {
            w: a[i],
            z: basis.iter().map(|b| b[i]).collect(),
        })
        .collect();
    let (delta, log_method) = principal_log_rt(&r, &raw.blocks)?;
    Ok(EPData {
        m: m.clone(),
        n,
        prec,
        alpha: raw.alpha.to_f64(),
        a,
        basis,
        blocks: raw.blocks,
        r,
        delta,
        log_method,
        u,
        residual,
    })
}

/// `log R^T`: block-wise series when that round-trips, otherwise inverse
/// scaling and squaring.
pub fn principal_log_rt(r: &CMat, blocks: &[EigenBlock]) -> Result<(CMat, LogMethod)> {
    let rt = r.transpose();
    let n = r.dim();
    let mut l = CMat::zeros(n);
    for b in blocks {
        l.set_block(b.start, &r.sub_block(b.start, b.len).log_single_eigenvalue(b.beta));
    }
    let delta = l.transpose();
    if delta.exp().rel_diff(&rt) <= 1e-12 {
        return Ok((delta, LogMethod::SpectralBlocks));
    }
    let delta = rt.log_iss().ok_or_else(|| {
        Error::NoConvergence("matrix logarithm of R^T did not converge".into())
    })?;
    Ok((delta, LogMethod::InverseScalingSquaring))
}

/// Build the construction data for an admissible matrix.
pub fn build_ep_data(m: &IntMatrix, prec: u32) -> Result<EPData> {
    let raw = raw_construction(m, prec)?;
    let data = assemble(m, raw, prec)?;
    if data.residual > residual_bound(prec) {
        return Err(Error::NoConvergence(format!(
            "construction residual {:e} exceeds 2^-{}; retry with a higher precision",
            data.residual,
            prec / 2
        )));
    }
    Ok(data)
}

/// Construction data for `M` whose leading `split x split` block `N` is
/// admissible, using a basis adapted to the splitting: `a` and the first
/// `n - k` basis vectors are `N`'s own (padded with zeros), the last `k`
/// span the eigenspaces of the trailing block `P`. For a genuinely
/// block-diagonal `M` this makes `R` and `Delta` block-diagonal. Returns
/// the data for `M` together with `N`'s own data.
///
/// No residual bound is enforced for `M`: if the lower-left block of `M`
/// is nonzero the adapted basis is not invariant, and the reported
/// residual and `Delta` show it.
pub fn build_block_ep_data(m: &IntMatrix, split: usize, prec: u32) -> Result<(EPData, EPData)> {
    let d = m.dim();
    if split == 0 || split >= d {
        return Err(Error::InvalidSplit(format!("split {split} outside 1..{d}")));
    }
    let nb = m.sub_block(0, split);
    let pb = m.sub_block(split, d - split);
    let raw_n = raw_construction(&nb, prec)?;
    let (p_basis, p_blocks) = upper_basis(&pb, prec)?;
    if 2 * p_basis.len() != d - split {
        return Err(Error::InvalidSplit(
            "trailing block has real eigenvalues".into(),
        ));
    }
    let wp = raw_n.alpha.prec();
    let zero = BigComplex::zero(wp);
    let pad_front = |v: &CVec| -> CVec {
        let mut out: CVec = v.iter().map(|x| x.with_prec(wp)).collect();
        out.resize(d, zero.clone());
        out
    };
    let pad_back = |v: &CVec| -> CVec {
        let mut out = vec![zero.clone(); split];
        out.extend(v.iter().map(|x| x.with_prec(wp)));
        out
    };
    let mut a = raw_n.a.clone();
    a.resize(d, BigFloat::zero(wp));
    let mut basis: Vec<CVec> = raw_n.basis.iter().map(pad_front).collect();
    let offset = basis.len();
    basis.extend(p_basis.iter().map(pad_back));
    let mut blocks = raw_n.blocks.clone();
    blocks.extend(p_blocks.into_iter().map(|b| EigenBlock {
        start: b.start + offset,
        ..b
    }));
    let raw_m = Raw {
        alpha: raw_n.alpha.clone(),
        a,
        basis,
        blocks,
    };
    let data_m = assemble(m, raw_m, prec)?;
    let data_n = assemble(&nb, raw_n, prec)?;
    Ok((data_m, data_n))
}

/// `(w, z) -> (alpha^m w + t_w, (R^T)^m z + t_z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineAut {
    pub m: i64,
    pub t_w: f64,
    pub t_z: Vec<C64>,
}

impl AffineAut {
    pub fn identity(n: usize) -> Self {
        AffineAut {
            m: 0,
            t_w: 0.0,
            t_z: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn translation(u: &Translation) -> Self {
        AffineAut {
            m: 0,
            t_w: u.w,
            t_z: u.z.clone(),
        }
    }

    pub fn apply(&self, data: &EPData, w: C64, z: &[C64]) -> (C64, Vec<C64>) {
        let rz = data.rt_pow(self.m).mul_vec(z);
        (
            w * data.alpha_pow(self.m) + self.t_w,
            rz.iter().zip(&self.t_z).map(|(x, t)| x + t).collect(),
        )
    }

    /// Derivative applied to a tangent vector.
    pub fn push_forward(&self, data: &EPData, v: &TangentVector) -> TangentVector {
        TangentVector {
            z: v.z * data.alpha_pow(self.m),
            a: data.rt_pow(self.m).mul_vec(&v.a),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineAut, data: &EPData) -> AffineAut {
        let rz = data.rt_pow(self.m).mul_vec(&other.t_z);
        AffineAut {
            m: self.m + other.m,
            t_w: data.alpha_pow(self.m) * other.t_w + self.t_w,
            t_z: rz.iter().zip(&self.t_z).map(|(x, t)| x + t).collect(),
        }
    }

    pub fn inverse(&self, data: &EPData) -> AffineAut {
        let rz = data.rt_pow(-self.m).mul_vec(&self.t_z);
        AffineAut {
            m: -self.m,
            t_w: -data.alpha_pow(-self.m) * self.t_w,
            t_z: rz.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, e: i64, data: &EPData) -> AffineAut {
        let base = if e < 0 { self.inverse(data) } else { self.clone() };
        let mut acc = AffineAut::identity(self.t_z.len());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base, data);
        }
        acc
    }

    /// Largest coefficient difference (`inf` if the `g_0` powers differ).
    pub fn distance(&self, other: &AffineAut) -> f64 {
        if self.m != other.m {
            return f64::INFINITY;
        }
        self.t_z
            .iter()
            .zip(&other.t_z)
            .map(|(a, b)| (a - b).norm())
            .fold((self.t_w - other.t_w).abs(), f64::max)
    }
}

/// Where `g_0^s0` sits in `g_0^s0 g_1^s1 ... g_(2n+1)^s(2n+1)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum WordOrder {
    /// `g_0^s0 ∘ (translations)`: the translations act first.
    #[default]
    G0Outermost,
    /// `(translations) ∘ g_0^s0`: `g_0` acts first.
    G0Innermost,
}

/// Affine map of the word with exponents `(s0, s1, ..., s_(2n+1))`.
pub fn word_to_affine(data: &EPData, exponents: &[i64], order: WordOrder) -> AffineAut {
    let s0 = exponents.first().copied().unwrap_or(0);
    let mut t = AffineAut::identity(data.n);
    for (i, &s) in exponents.iter().enumerate().skip(1) {
        let u = &data.u[i - 1];
        t.t_w += s as f64 * u.w;
        for (x, y) in t.t_z.iter_mut().zip(&u.z) {
            *x += *y * s as f64;
        }
    }
    let g0 = AffineAut {
        m: s0,
        ..AffineAut::identity(data.n)
    };
    match order {
        WordOrder::G0Outermost => g0.compose(&t, data),
        WordOrder::G0Innermost => t.compose(&g0, data),
    }
}

/// Word given as a list of `(generator, power)`, leftmost outermost.
pub fn general_word_to_affine(data: &EPData, word: &[(usize, i64)]) -> AffineAut {
    word.iter().fold(AffineAut::identity(data.n), |acc, &(g, p)| {
        acc.compose(&data.generator(g).pow(p, data), data)
    })
}

pub fn deck_word_to_affine(data: &EPData, word: &DeckWord, order: WordOrder) -> Result<AffineAut> {
    let mut ex = vec![word.s0];
    for s in &word.translations {
        ex.push(s.to_i64().ok_or_else(|| {
            Error::Consistency(format!("word exponent {s} does not fit in 64 bits"))
        })?);
    }
    Ok(word_to_affine(data, &ex, order))
}

/// Tangent vector `V = Z + A` with `Z` along `H` and `A` along `C^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub z: C64,
    pub a: Vec<C64>,
}

/// `omega~(V, JV) = (|X|^2 + |Y|^2) / (2 (Im w)^2)` for `Z = X + iY`.
pub fn omega_tilde(w: C64, v: &TangentVector) -> Result<f64> {
    if w.im <= 0.0 {
        return Err(Error::OutsideHalfPlane);
    }
    Ok(v.z.norm_sqr() / (2.0 * w.im * w.im))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: &'static str,
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
    pub detail: String,
}

impl CheckReport {
    pub fn new(name: &'static str, max_deviation: f64, tol: f64, detail: String) -> Self {
        CheckReport {
            name,
            max_deviation,
            tol,
            passed: max_deviation <= tol,
            detail,
        }
    }
}

/// Random sample points and tangent vectors.
pub struct Sampler {
    rng: ChaCha8Rng,
    n: usize,
}

impl Sampler {
    pub fn new(seed: u64, n: usize) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            n,
        }
    }

    fn c(&mut self) -> C64 {
        C64::new(self.rng.gen_range(-2.0..2.0), self.rng.gen_range(-2.0..2.0))
    }

    pub fn point(&mut self) -> (C64, Vec<C64>) {
        let w = C64::new(self.rng.gen_range(-2.0..2.0), self.rng.gen_range(0.25..2.0));
        let z = (0..self.n).map(|_| self.c()).collect();
        (w, z)
    }

    pub fn tangent(&mut self) -> TangentVector {
        let mut z = self.c();
        if z.norm() < 1e-3 {
            z += C64::new(1.0, 0.0);
        }
        TangentVector {
            z,
            a: (0..self.n).map(|_| self.c()).collect(),
        }
    }

    pub fn vertical_tangent(&mut self) -> TangentVector {
        TangentVector {
            z: C64::new(0.0, 0.0),
            a: (0..self.n).map(|_| self.c()).collect(),
        }
    }

    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }
}

fn point_distance(p: &(C64, Vec<C64>), q: &(C64, Vec<C64>)) -> f64 {
    let scale = p
        .1
        .iter()
        .map(|x| x.norm())
        .fold(p.0.norm(), f64::max)
        .max(1.0);
    p.1.iter()
        .zip(&q.1)
        .map(|(a, b)| (a - b).norm())
        .fold((p.0 - q.0).norm(), f64::max)
        / scale
}

/// `g_0 g_j g_0^-1` against the translation by `sum_k M_jk u_k`.
pub fn check_conjugation_relations(data: &EPData, tol: f64, points: usize, seed: u64) -> CheckReport {
    let d = data.dim();
    let g0 = data.generator(0);
    let g0i = g0.inverse(data);
    let mut sampler = Sampler::new(seed, data.n);
    let pts: Vec<_> = (0..points).map(|_| sampler.point()).collect();
    let mut worst = 0.0f64;
    for j in 1..=d {
        let lhs = g0.compose(&data.generator(j), data).compose(&g0i, data);
        let exps: Vec<i64> = core::iter::once(0)
            .chain(data.m.row(j - 1).iter().map(|x| x.to_i64().unwrap_or(i64::MAX)))
            .collect();
        let rhs = word_to_affine(data, &exps, WordOrder::G0Outermost);
        if lhs.m != rhs.m {
            worst = f64::INFINITY;
        }
        for (w, z) in &pts {
            let a = lhs.apply(data, *w, z);
            let b = rhs.apply(data, *w, z);
            worst = worst.max(point_distance(&b, &a));
        }
    }
    CheckReport::new(
        "conjugation_relations",
        worst,
        tol,
        format!("g0 g_j g0^-1 vs translation by sum_k M_jk u_k, {d} relations at {points} points"),
    )
}

/// Invariance of `omega~` under every generator and `g_0^-1`.
pub fn check_omega_invariance(data: &EPData, samples: usize, tol: f64, seed: u64) -> CheckReport {
    let mut sampler = Sampler::new(seed, data.n);
    let mut gens: Vec<AffineAut> = (0..=data.dim()).map(|i| data.generator(i)).collect();
    gens.push(data.generator(0).inverse(data));
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (w, z) = sampler.point();
        let v = sampler.tangent();
        let base = omega_tilde(w, &v).unwrap_or(f64::NAN);
        for g in &gens {
            let (w2, _) = g.apply(data, w, &z);
            let v2 = g.push_forward(data, &v);
            let val = omega_tilde(w2, &v2).unwrap_or(f64::NAN);
            let dev = (val - base).abs() / base;
            worst = if dev.is_nan() { f64::INFINITY } else { worst.max(dev) };
        }
    }
    CheckReport::new(
        "omega_invariance",
        worst,
        tol,
        format!("relative change of omega~ under {} maps at {samples} samples", gens.len()),
    )
}

/// `omega~(V, JV) >= 0`, zero on vertical vectors and positive otherwise.
pub fn check_omega_semipositive(n: usize, samples: usize, seed: u64) -> CheckReport {
    const ZERO: f64 = 1e-14;
    let mut sampler = Sampler::new(seed, n);
    let mut bad = 0usize;
    let mut worst_vertical = 0.0f64;
    for i in 0..samples {
        let (w, _) = sampler.point();
        let (v, vertical) = if i % 2 == 0 {
            (sampler.vertical_tangent(), true)
        } else {
            (sampler.tangent(), false)
        };
        let val = omega_tilde(w, &v).unwrap_or(f64::NAN);
        if vertical {
            worst_vertical = worst_vertical.max(val);
            if val.is_nan() || val.abs() > ZERO {
                bad += 1;
            }
        } else if val.is_nan() || val <= ZERO {
            bad += 1;
        }
    }
    CheckReport {
        name: "omega_semipositive",
        max_deviation: worst_vertical,
        tol: ZERO,
        passed: bad == 0,
        detail: format!("{samples} samples, {bad} violations; zero exactly on Z = 0"),
    }
}

/// `alpha |det R|^2 = 1`.
pub fn check_determinant_identity(data: &EPData, tol: f64) -> CheckReport {
    let v = data.alpha * data.r.det().norm_sqr();
    CheckReport::new(
        "determinant_identity",
        (v - 1.0).abs(),
        tol,
        format!("alpha |det R|^2 = {v:.17}"),
    )
}

/// `exp(Delta) = R^T`.
pub fn check_exp_log(data: &EPData, tol: f64) -> CheckReport {
    CheckReport::new(
        "exp_log_roundtrip",
        data.delta.exp().rel_diff(&data.rt()),
        tol,
        format!("log method {:?}", data.log_method),
    )
}

/// The translations `u_i`, read as vectors of `R^(2n+1)`, have full rank.
pub fn check_translation_independence(data: &EPData) -> CheckReport {
    let rows: Vec<Vec<f64>> = data
        .u
        .iter()
        .map(|u| {
            let mut r = vec![u.w];
            for z in &u.z {
                r.push(z.re);
                r.push(z.im);
            }
            r
        })
        .collect();
    let s = singular_values(&rows);
    let smax = s.first().copied().unwrap_or(0.0);
    let smin = s.last().copied().unwrap_or(0.0);
    let rank = s.iter().filter(|&&x| x > smax * 1e-10).count();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    CheckReport {
        name: "translation_independence",
        max_deviation: 1.0 / cond,
        tol: 1e-12,
        passed: rank == data.dim() && cond < 1e12,
        detail: format!("numeric rank {rank} of {}, condition number {cond:.3e}", data.dim()),
    }
}

/// Composing the maps of two words equals the map of the concatenation.
pub fn check_composition(data: &EPData, trials: usize, tol: f64, seed: u64) -> CheckReport {
    let mut sampler = Sampler::new(seed, data.n);
    let d = data.dim() as i64;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let word = |s: &mut Sampler| -> Vec<(usize, i64)> {
            (0..3).map(|_| (s.range(0, d) as usize, s.range(-2, 2))).collect()
        };
        let w1 = word(&mut sampler);
        let w2 = word(&mut sampler);
        let a = general_word_to_affine(data, &w1);
        let b = general_word_to_affine(data, &w2);
        let mut cat = w1.clone();
        cat.extend(&w2);
        let c = general_word_to_affine(data, &cat);
        let ab = a.compose(&b, data);
        let (w, z) = sampler.point();
        let p1 = c.apply(data, w, &z);
        let p2 = ab.apply(data, w, &z);
        let (bw, bz) = b.apply(data, w, &z);
        let p3 = a.apply(data, bw, &bz);
        worst = worst.max(point_distance(&p1, &p2)).max(point_distance(&p1, &p3));
    }
    CheckReport::new(
        "composition_consistency",
        worst,
        tol,
        format!("{trials} random word pairs"),
    )
}

pub fn check_residual(data: &EPData) -> CheckReport {
    CheckReport::new(
        "construction_residual",
        data.residual,
        residual_bound(data.prec),
        format!("M a = alpha a and M B = B R at {} bits", data.prec),
    )
}

#[derive(Clone, Debug)]
pub struct GeometryOptions {
    pub tol_relations: f64,
    pub tol_identities: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for GeometryOptions {
    fn default() -> Self {
        GeometryOptions {
            tol_relations: 1e-8,
            tol_identities: 1e-10,
            samples: 100,
            seed: 0,
        }
    }
}

/// Every geometric check, in a fixed order.
pub fn run_geometry_checks(data: &EPData, opts: &GeometryOptions) -> Vec<CheckReport> {
    vec![
        check_residual(data),
        check_determinant_identity(data, opts.tol_identities),
        check_exp_log(data, opts.tol_identities),
        check_conjugation_relations(data, opts.tol_relations, 10, opts.seed),
        check_omega_invariance(data, opts.samples, opts.tol_identities, opts.seed.wrapping_add(1)),
        check_omega_semipositive(data.n, opts.samples, opts.seed.wrapping_add(2)),
        check_composition(data, 10, opts.tol_identities, opts.seed.wrapping_add(3)),
        check_translation_independence(data),
    ]
}

/// First translation coordinate `sum_i s_i a^i` of a translation word.
pub fn translation_first_coordinate(data: &EPData, s: &[BigInt]) -> f64 {
    data.a
        .iter()
        .zip(s)
        .map(|(a, si)| a * si.to_f64().unwrap_or(f64::NAN))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::IntPoly;

    fn example() -> IntMatrix {
        IntMatrix::from_i64_rows(&[
            &[1, 2, -1, 0, 0],
            &[-1, 0, -2, 0, 0],
            &[0, 1, -1, 0, 0],
            &[0, 0, 0, 0, -1],
            &[0, 0, 0, 1, 0],
        ])
        .unwrap()
    }

    fn quintic() -> IntMatrix {
        IntMatrix::companion(&"x^5 - x - 1".parse::<IntPoly>().unwrap()).unwrap()
    }

    #[test]
    fn example_data_is_diagonal() {
        let data = build_ep_data(&example(), 128).unwrap();
        assert_eq!(data.n, 2);
        assert!(data.residual < 1e-19);
        // distinct eigenvalues: R is diagonal with the upper-half eigenvalues
        assert!(data.r[(0, 1)].norm() < 1e-15 && data.r[(1, 0)].norm() < 1e-15);
        let diag = [data.r[(0, 0)], data.r[(1, 1)]];
        assert!(diag.iter().any(|z| (z - C64::new(0.0, 1.0)).norm() < 1e-14));
        assert!(diag.iter().all(|z| z.im > 0.0));
        assert_eq!(data.log_method, LogMethod::SpectralBlocks);
        for c in run_geometry_checks(&data, &GeometryOptions::default()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn quintic_checks_pass() {
        let data = build_ep_data(&quintic(), 128).unwrap();
        for c in run_geometry_checks(&data, &GeometryOptions::default()) {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn perturbed_r_breaks_relations() {
        let mut data = build_ep_data(&quintic(), 128).unwrap();
        data.r[(0, 1)] += C64::new(1e-3, 0.0);
        assert!(!check_conjugation_relations(&data, 1e-8, 10, 3).passed);
    }

    #[test]
    fn words() {
        let data = build_ep_data(&example(), 128).unwrap();
        let id = word_to_affine(&data, &[0, 0, 0, 0, 0, 0], WordOrder::G0Outermost);
        assert_eq!(id, AffineAut::identity(2));
        let t1 = word_to_affine(&data, &[0, 1, 0, 0, 0, 0], WordOrder::G0Outermost);
        assert_eq!(t1, AffineAut::translation(&data.u[0]));
        let w = word_to_affine(&data, &[1, 0, 2, 0, -1, 0], WordOrder::G0Outermost);
        let back = w.compose(&w.inverse(&data), &data);
        assert!(back.distance(&AffineAut::identity(2)) < 1e-12);
        let inner = word_to_affine(&data, &[1, 0, 2, 0, -1, 0], WordOrder::G0Innermost);
        assert!(inner.distance(&w) > 1e-6);
    }

    #[test]
    fn omega_values() {
        let a = vec![C64::new(3.0, 1.0)];
        let v = |z| TangentVector { z, a: a.clone() };
        assert_eq!(omega_tilde(C64::new(0.0, 1.0), &v(C64::new(1.0, 0.0))).unwrap(), 0.5);
        assert_eq!(omega_tilde(C64::new(0.0, 1.0), &v(C64::new(0.0, 0.0))).unwrap(), 0.0);
        assert_eq!(omega_tilde(C64::new(0.0, 2.0), &v(C64::new(0.0, 1.0))).unwrap(), 0.125);
        assert_eq!(
            omega_tilde(C64::new(1.0, 0.0), &v(C64::new(1.0, 0.0))).unwrap_err(),
            Error::OutsideHalfPlane
        );
    }

    #[test]
    fn block_adapted_data() {
        let (dm, dn) = build_block_ep_data(&example(), 3, 128).unwrap();
        assert!(dm.residual < 1e-19);
        assert!(dm.delta[(0, 1)].norm() < 1e-14);
        assert_eq!(dn.n, 1);
        assert!((dn.r[(0, 0)] - dm.r[(0, 0)]).norm() < 1e-15);
    }

    #[test]
    fn leaf_word_has_zero_first_coordinate() {
        let data = build_ep_data(&example(), 128).unwrap();
        let s: Vec<BigInt> = [0, 0, 0, 1, 0].iter().map(|&x| BigInt::from(x)).collect();
        assert!(translation_first_coordinate(&data, &s).abs() < 1e-30);
    }
}
