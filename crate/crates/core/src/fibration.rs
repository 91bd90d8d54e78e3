//! Block splittings `M ~ diag(N, P)` and certificates that the manifold of
//! `M` fibres over the manifold of `N` with complex-torus fibres.
//!
//! Three ways of exhibiting a split are tried:
//!
//! * literal: the off-diagonal blocks of `M` vanish at some odd index;
//! * permutation: a simultaneous row/column permutation produces that form
//!   (from the connected components of the nonzero pattern);
//! * invariant lattice: with `mu` the minimal polynomial of `alpha` and
//!   `g` a divisor of `chi / mu`, the integer kernels of `(mu g)(M)` and
//!   `(chi / (mu g))(M)` are `M`-invariant; when together they form a basis
//!   of `Z^d` the matrix `U` of that basis conjugates `M` to block-diagonal
//!   form. This catches splits hidden by a unimodular change of basis.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{IntMatrix, IntPoly, SturmChain};
use crate::geometry::{build_block_ep_data, AffineAut, CheckReport, EPData, Sampler, C64};
use crate::lattice::{integer_kernel, MinpolyOptions};
use crate::numeric::roots;
use crate::spectra::{verify_admissible, AdmissibilityReport};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitWitness {
    Literal,
    /// Entry `(i, j)` of the split matrix is `M[perm[i]][perm[j]]`.
    Permutation(Vec<usize>),
    /// Unimodular `U` with `U^-1 M U` block-diagonal.
    Lattice(IntMatrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSplit {
    /// Half the size of the trailing block.
    pub k: usize,
    /// Size `2(n-k)+1` of the leading block.
    pub split: usize,
    pub n_block: IntMatrix,
    pub p_block: IntMatrix,
    pub witness: SplitWitness,
}

impl BlockSplit {
    /// The matrix in which this split is literal.
    pub fn adapted(&self, m: &IntMatrix) -> Result<IntMatrix> {
        match &self.witness {
            SplitWitness::Literal => Ok(m.clone()),
            SplitWitness::Permutation(p) => Ok(m.permute(p)),
            SplitWitness::Lattice(u) => {
                let ui = u
                    .inverse_unimodular()
                    .ok_or_else(|| Error::InvalidSplit("lattice witness is not unimodular".into()))?;
                Ok(ui.mul(m).mul(u))
            }
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.witness {
            SplitWitness::Literal => "literal",
            SplitWitness::Permutation(_) => "permutation",
            SplitWitness::Lattice(_) => "lattice",
        }
    }
}

fn off_diagonal_zero(m: &IntMatrix, s: usize) -> (bool, bool) {
    let d = m.dim();
    let upper = (0..s).all(|i| (s..d).all(|j| m.get(i, j).is_zero()));
    let lower = (s..d).all(|i| (0..s).all(|j| m.get(i, j).is_zero()));
    (upper, lower)
}

fn split_of(m: &IntMatrix, s: usize, witness: SplitWitness) -> BlockSplit {
    let d = m.dim();
    BlockSplit {
        k: (d - s) / 2,
        split: s,
        n_block: m.sub_block(0, s),
        p_block: m.sub_block(s, d - s),
        witness,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DetectOptions {
    pub permutation_search: bool,
    pub lattice_search: bool,
}

impl Default for DetectOptions {
    fn default() -> Self {
        DetectOptions {
            permutation_search: false,
            lattice_search: true,
        }
    }
}

/// Literal splits at every odd index `s < d` with both off-diagonal blocks
/// zero.
pub fn literal_splits(m: &IntMatrix) -> Vec<BlockSplit> {
    let d = m.dim();
    (1..d)
        .step_by(2)
        .filter(|&s| off_diagonal_zero(m, s) == (true, true))
        .map(|s| split_of(m, s, SplitWitness::Literal))
        .collect()
}

/// Connected components of the graph joining `i` and `j` when `M_ij` or
/// `M_ji` is nonzero, each sorted, ordered by smallest element.
fn components(m: &IntMatrix) -> Vec<Vec<usize>> {
    let d = m.dim();
    let mut label: Vec<Option<usize>> = vec![None; d];
    let mut comps = Vec::new();
    for start in 0..d {
        if label[start].is_some() {
            continue;
        }
        let id = comps.len();
        let mut stack = vec![start];
        let mut comp = Vec::new();
        label[start] = Some(id);
        while let Some(i) = stack.pop() {
            comp.push(i);
            for j in 0..d {
                if label[j].is_none() && (!m.get(i, j).is_zero() || !m.get(j, i).is_zero()) {
                    label[j] = Some(id);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Splits exposed by permutations: every union of components with odd
/// total size is a candidate leading block (subsets are enumerated only
/// for at most 12 components).
pub fn permutation_splits(m: &IntMatrix) -> Vec<BlockSplit> {
    let comps = components(m);
    let c = comps.len();
    if !(2..=12).contains(&c) {
        return Vec::new();
    }
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << c) - 1 {
        let mut lead: Vec<usize> = Vec::new();
        let mut rest: Vec<usize> = Vec::new();
        for (i, comp) in comps.iter().enumerate() {
            if mask & (1 << i) != 0 {
                lead.extend(comp);
            } else {
                rest.extend(comp);
            }
        }
        if lead.len().is_multiple_of(2) {
            continue;
        }
        lead.sort_unstable();
        rest.sort_unstable();
        let s = lead.len();
        let perm: Vec<usize> = lead.into_iter().chain(rest).collect();
        if perm.iter().enumerate().all(|(i, &p)| i == p) {
            continue; // already literal
        }
        let pm = m.permute(&perm);
        debug_assert_eq!(off_diagonal_zero(&pm, s), (true, true));
        out.push(split_of(&pm, s, SplitWitness::Permutation(perm)));
    }
    out
}

/// Monic integer divisors of `h` built from conjugate pairs of its roots.
/// `h` must have no real roots. Candidates come from rounding products of
/// numeric quadratic factors and are kept only if they divide `h` exactly.
fn pair_divisors(h: &IntPoly) -> Vec<IntPoly> {
    const MAX_PAIRS: usize = 12;
    let upper: Vec<C64> = roots::approx_roots(h).into_iter().filter(|z| z.im > 0.0).collect();
    if upper.len() > MAX_PAIRS {
        return vec![IntPoly::one()];
    }
    let mut out: Vec<IntPoly> = Vec::new();
    for mask in 0u32..(1 << upper.len()) {
        let mut c = vec![1.0f64];
        for (i, z) in upper.iter().enumerate() {
            if mask & (1 << i) != 0 {
                // times x^2 - 2 Re z x + |z|^2
                let q = [z.norm_sqr(), -2.0 * z.re, 1.0];
                let mut next = vec![0.0; c.len() + 2];
                for (a, ca) in c.iter().enumerate() {
                    for (b, qb) in q.iter().enumerate() {
                        next[a + b] += ca * qb;
                    }
                }
                c = next;
            }
        }
        let g = IntPoly::new(c.iter().map(|x| BigInt::from(libm::round(*x) as i64)).collect());
        if !out.contains(&g) && h.div_exact(&g).is_some() {
            out.push(g);
        }
    }
    out
}

/// Splits exposed by invariant sublattices, largest trailing block first.
///
/// For each monic divisor `g` of `h = chi / mu` coprime to `h / g`, the
/// integer kernels of `(mu g)(M)` and `(h / g)(M)` are `M`-invariant and
/// together span `Q^d`; when they also form a basis of `Z^d` their basis
/// matrix `U` conjugates `M` to `diag(N, P)` with `chi_N = mu g`.
pub fn lattice_splits(m: &IntMatrix) -> Result<Vec<BlockSplit>> {
    let report = verify_admissible(m)?;
    let Ok(alpha) = report.require_alpha() else {
        return Ok(Vec::new());
    };
    let mut alpha = alpha.clone();
    let mu = alpha.ensure_minpoly(&MinpolyOptions::default())?.clone();
    let d = m.dim();
    if mu.degree() == Some(d) {
        return Ok(Vec::new());
    }
    let h = report
        .charpoly
        .div_exact(&mu)
        .ok_or_else(|| Error::Consistency("minimal polynomial does not divide chi".into()))?;
    let mut out = Vec::new();
    for g in pair_divisors(&h) {
        let trail = h.div_exact(&g).expect("divisor");
        if trail.is_constant() {
            continue;
        }
        let lead = &mu * &g;
        if !lead.gcd(&trail).is_constant() {
            continue;
        }
        let l1 = integer_kernel(&m.eval_poly(&lead))?;
        let l2 = integer_kernel(&m.eval_poly(&trail))?;
        if l1.len() + l2.len() != d {
            return Err(Error::Consistency(format!(
                "invariant kernels have ranks {} + {} != {d}",
                l1.len(),
                l2.len()
            )));
        }
        let cols: Vec<&Vec<BigInt>> = l1.iter().chain(&l2).collect();
        let u = IntMatrix::from_rows((0..d).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect())?;
        if !u.det().abs().is_one() {
            continue;
        }
        let s = l1.len();
        let ui = u.inverse_unimodular().expect("unit determinant");
        let adapted = ui.mul(m).mul(&u);
        if off_diagonal_zero(&adapted, s) != (true, true) {
            return Err(Error::Consistency("invariant lattice split is not block-diagonal".into()));
        }
        out.push(split_of(&adapted, s, SplitWitness::Lattice(u)));
    }
    out.sort_by_key(|b| core::cmp::Reverse(b.k));
    Ok(out)
}

/// The lattice split with the largest trailing block, if any.
pub fn lattice_split(m: &IntMatrix) -> Result<Option<BlockSplit>> {
    Ok(lattice_splits(m)?.into_iter().next())
}

/// Every split found, literal ones first. A permutation or lattice split
/// is dropped when a split of the same size was already found.
pub fn detect_block_structure(m: &IntMatrix, opts: DetectOptions) -> Result<Vec<BlockSplit>> {
    let d = m.dim();
    if d.is_multiple_of(2) {
        return Err(Error::EvenDimension(d));
    }
    let mut out = literal_splits(m);
    let seen = |out: &Vec<BlockSplit>, s: usize| out.iter().any(|b| b.split == s);
    if opts.permutation_search {
        for b in permutation_splits(m) {
            if !seen(&out, b.split) {
                out.push(b);
            }
        }
    }
    if opts.lattice_search && d >= 3 {
        for b in lattice_splits(m)? {
            if !seen(&out, b.split) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub precision: u32,
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            precision: 128,
            tol: 1e-8,
            samples: 10,
            seed: 0,
        }
    }
}

pub const ADAPTED_BASIS_NOTE: &str = "R and Delta are computed in a basis adapted to the split \
(the leading block's own eigenvector and eigenspace basis, padded with zeros, followed by a basis \
for the trailing block), so their block-diagonal form holds by construction; the Delta check \
validates the numerics rather than the theorem";

#[derive(Clone, Debug)]
pub struct FibrationVerdict {
    pub applies: bool,
    pub k: usize,
    pub split: BlockSplit,
    /// `None` when the leading block is too small to be admissible.
    pub base_report: Option<AdmissibilityReport>,
    pub p_spectrum_ok: bool,
    pub checks: Vec<CheckReport>,
    /// Complex dimension of the torus fibre.
    pub fiber_dim: usize,
    /// Complex dimension of the base manifold.
    pub base_dim: usize,
    pub note: String,
}

fn exact_check(name: &'static str, ok: bool, detail: String) -> CheckReport {
    CheckReport {
        name,
        max_deviation: if ok { 0.0 } else { 1.0 },
        tol: 0.0,
        passed: ok,
        detail,
    }
}

/// Rows `j >= s` vanish on columns `< s` (the conjugation exponents of the
/// trailing translations into the leading ones are these entries).
pub fn exponent_check(adapted: &IntMatrix, s: usize) -> CheckReport {
    let (_, lower) = off_diagonal_zero(adapted, s);
    exact_check(
        "normality_exponents",
        lower,
        format!("m_jl = 0 for j > {s}, l <= {s}"),
    )
}

/// `Delta_(i, n-k+j) = 0` for `i <= n-k`.
pub fn delta_block_check(data: &EPData, lead: usize, tol: f64) -> CheckReport {
    let n = data.n;
    let mut worst = 0.0f64;
    for i in 0..lead {
        for j in lead..n {
            worst = worst.max(data.delta[(i, j)].norm());
        }
    }
    CheckReport::new(
        "delta_block",
        worst,
        tol,
        format!("Delta_(i, j) for i <= {lead} < j"),
    )
}

/// `pr ∘ g_i = g~_i ∘ pr` with `pr(w, z) = (w, z_1..z_(n-k))`, where `g~_i`
/// are the leading block's generators for `i <= s` and the identity after.
pub fn projection_equivariance(
    data_m: &EPData,
    data_n: &EPData,
    s: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> CheckReport {
    let lead = data_n.n;
    let mut sampler = Sampler::new(seed, data_m.n);
    let mut worst = 0.0f64;
    for _ in 0..samples {
        let (w, z) = sampler.point();
        let zp: Vec<C64> = z[..lead].to_vec();
        for i in 0..=data_m.dim() {
            let g = data_m.generator(i);
            let gt = if i <= s {
                data_n.generator(i)
            } else {
                AffineAut::identity(lead)
            };
            let (w1, z1) = g.apply(data_m, w, &z);
            let (w2, z2) = gt.apply(data_n, w, &zp);
            let scale = z.iter().map(|x| x.norm()).fold(w.norm(), f64::max).max(1.0);
            let dev = z1[..lead]
                .iter()
                .zip(&z2)
                .map(|(a, b)| (a - b).norm())
                .fold((w1 - w2).norm(), f64::max)
                / scale;
            worst = worst.max(dev);
        }
    }
    CheckReport::new(
        "projection_equivariance",
        worst,
        tol,
        format!("{} generators at {samples} points", data_m.dim() + 1),
    )
}

/// Run the fibration checks on one split.
pub fn certify_fibration(m: &IntMatrix, split: &BlockSplit, opts: &CertifyOptions) -> Result<FibrationVerdict> {
    let d = m.dim();
    let s = split.split;
    if s.is_multiple_of(2) || s >= d || split.k * 2 + s != d {
        return Err(Error::InvalidSplit(format!("split index {s} with k = {} for dimension {d}", split.k)));
    }
    let adapted = split.adapted(m)?;
    if adapted.sub_block(0, s) != split.n_block || adapted.sub_block(s, d - s) != split.p_block {
        return Err(Error::InvalidSplit("blocks do not match the matrix".into()));
    }
    let mut checks = Vec::new();

    // (i) base admissible
    let base_report = verify_admissible(&split.n_block).ok();
    let base_ok = base_report.as_ref().is_some_and(AdmissibilityReport::is_admissible);
    checks.push(exact_check(
        "base_admissible",
        base_ok,
        match &base_report {
            Some(r) => match r.verdict {
                crate::spectra::Verdict::Admissible => "leading block is admissible".into(),
                crate::spectra::Verdict::Rejected(why) => format!("leading block rejected: {}", why.describe()),
            },
            None => format!("leading block has dimension {s} < 3"),
        },
    ));

    // (ii) trailing block has no real eigenvalue
    let chi_p = split.p_block.charpoly();
    let p_real = SturmChain::new(&chi_p.squarefree_part())?.count_all();
    let p_spectrum_ok = p_real == 0;
    checks.push(exact_check(
        "trailing_spectrum_nonreal",
        p_spectrum_ok,
        format!("{p_real} real eigenvalues in the trailing block"),
    ));

    let chi_ok = m.charpoly() == &split.n_block.charpoly() * &chi_p;
    checks.push(exact_check(
        "charpoly_factorisation",
        chi_ok,
        "chi_M = chi_N chi_P".into(),
    ));

    // (iii) exponents, plus the other off-diagonal block
    checks.push(exponent_check(&adapted, s));
    let (upper, _) = off_diagonal_zero(&adapted, s);
    checks.push(exact_check(
        "upper_block_zero",
        upper,
        format!("m_jl = 0 for j <= {s} < l"),
    ));

    // (iv), (v) need the base to be admissible and P without real spectrum
    if base_ok && p_spectrum_ok {
        let (data_m, data_n) = build_block_ep_data(&adapted, s, opts.precision)?;
        checks.push(delta_block_check(&data_m, data_n.n, opts.tol));
        checks.push(projection_equivariance(
            &data_m,
            &data_n,
            s,
            opts.samples,
            opts.seed,
            opts.tol,
        ));
    }

    let applies = base_ok && p_spectrum_ok && checks.iter().all(|c| c.passed);
    let n = (d - 1) / 2;
    Ok(FibrationVerdict {
        applies,
        k: split.k,
        split: split.clone(),
        base_report,
        p_spectrum_ok,
        checks,
        fiber_dim: split.k,
        base_dim: n - split.k + 1,
        note: format!(
            "fibre: complex torus of dimension {}; base: manifold of the leading {s}x{s} block, \
             complex dimension {}; {ADAPTED_BASIS_NOTE}",
            split.k,
            n - split.k + 1
        ),
    })
}

/// The certified verdict with the largest `k`, if any.
pub fn best_fibration(verdicts: &[FibrationVerdict]) -> Option<&FibrationVerdict> {
    verdicts.iter().filter(|v| v.applies).max_by_key(|v| v.k)
}
