//! Corpus generators. All randomness comes from an explicit seed.

use epclass_core::{IntMatrix, IntPoly};
use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::CliError;

fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Companion matrix of a monic polynomial of odd degree >= 3 with constant
/// term -1; for odd degree `det = -p(0) = 1`.
pub fn companion(poly: &IntPoly) -> Result<IntMatrix, CliError> {
    let d = poly.degree().ok_or_else(|| input("polynomial is zero"))?;
    if !poly.is_monic() {
        return Err(input(format!("{poly} is not monic")));
    }
    if d < 3 || d % 2 == 0 {
        return Err(input(format!("degree {d} is not odd and at least 3")));
    }
    if poly.coeff(0) != -BigInt::one() {
        return Err(input(format!(
            "constant term is {}, not -1, so the determinant would not be 1",
            poly.coeff(0)
        )));
    }
    IntMatrix::companion(poly).map_err(CliError::Core)
}

pub fn companion_from_str(s: &str) -> Result<IntMatrix, CliError> {
    let p: IntPoly = s.parse().map_err(CliError::Core)?;
    companion(&p)
}

/// `diag(N, P)` with `N` odd and `P` even-dimensional.
pub fn block(n: &IntMatrix, p: &IntMatrix) -> Result<IntMatrix, CliError> {
    if n.dim().is_multiple_of(2) {
        return Err(input(format!("leading block has even dimension {}", n.dim())));
    }
    if p.dim() == 0 || p.dim() % 2 == 1 {
        return Err(input(format!("trailing block must have positive even dimension, got {}", p.dim())));
    }
    Ok(IntMatrix::block_diag(n, p))
}

/// `U M U^-1` with `U` a product of `steps` elementary row operations,
/// together with `U`.
pub fn conjugate_with(m: &IntMatrix, seed: u64, steps: usize) -> Result<(IntMatrix, IntMatrix), CliError> {
    let d = m.dim();
    if d < 2 {
        return Err(input("conjugation needs dimension at least 2"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = IntMatrix::identity(d);
    let mut ui = IntMatrix::identity(d);
    for _ in 0..steps {
        let i = rng.gen_range(0..d);
        let mut j = rng.gen_range(0..d - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(if rng.gen_bool(0.5) { 1 } else { -1 });
        // E = I + c e_ij: row_i += c row_j; E^-1 = I - c e_ij: col_j -= c col_i
        for col in 0..d {
            let v = u.get(i, col) + &c * u.get(j, col);
            u.set(i, col, v);
        }
        for row in 0..d {
            let v = ui.get(row, j) - &c * ui.get(row, i);
            ui.set(row, j, v);
        }
    }
    debug_assert!(u.mul(&ui) == IntMatrix::identity(d));
    Ok((u.mul(m).mul(&ui), u))
}

pub fn conjugate(m: &IntMatrix, seed: u64, steps: usize) -> Result<IntMatrix, CliError> {
    conjugate_with(m, seed, steps).map(|(c, _)| c)
}

/// Random monic polynomial of degree `d` with constant term -1 and small
/// coefficients.
pub fn random_companion_poly(rng: &mut impl Rng, d: usize, bound: i64) -> IntPoly {
    let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-bound..=bound)).collect();
    c[0] = -1;
    c[d] = 1;
    IntPoly::from_i64s(&c)
}

/// Random integer 2x2 or 4x4 block with no real eigenvalues: rotations,
/// order-3/4/6 elements of SL(2, Z) and their direct sums.
pub fn random_nonreal_block(rng: &mut impl Rng, dim: usize) -> IntMatrix {
    const ELLIPTIC: [[i64; 4]; 4] = [[0, -1, 1, 0], [0, -1, 1, -1], [1, -1, 1, 0], [-1, -1, 1, 0]];
    let pick = |rng: &mut dyn rand::RngCore| {
        let e = ELLIPTIC[rng.gen_range(0..ELLIPTIC.len())];
        IntMatrix::from_i64_rows(&[&e[..2], &e[2..]]).expect("2x2")
    };
    let mut m = pick(rng);
    while m.dim() < dim {
        m = IntMatrix::block_diag(&m, &pick(rng));
    }
    m
}

/// Where a corpus matrix came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CorpusKind {
    Companion,
    Block,
    Conjugated,
}

/// A random admissible matrix of dimension `2n+1`, cycling through the
/// companion, block and conjugated constructions.
pub fn random_admissible(rng: &mut ChaCha8Rng, n: usize, kind: CorpusKind) -> IntMatrix {
    use epclass_core::spectra::verify_admissible;
    let admissible = |m: &IntMatrix| verify_admissible(m).is_ok_and(|r| r.is_admissible());
    loop {
        let m = match kind {
            CorpusKind::Companion => IntMatrix::companion(&random_companion_poly(rng, 2 * n + 1, 3)).expect("monic"),
            // a block split needs n >= 2
            CorpusKind::Block if n < 2 => return random_admissible(rng, n, CorpusKind::Companion),
            CorpusKind::Block => {
                let k = rng.gen_range(1..n);
                let base = IntMatrix::companion(&random_companion_poly(rng, 2 * (n - k) + 1, 3)).expect("monic");
                IntMatrix::block_diag(&base, &random_nonreal_block(rng, 2 * k))
            }
            CorpusKind::Conjugated => {
                let inner = if rng.gen_bool(0.5) { CorpusKind::Companion } else { CorpusKind::Block };
                let m = random_admissible(rng, n, inner);
                let seed = rng.gen();
                conjugate(&m, seed, 8).expect("dimension >= 3")
            }
        };
        if admissible(&m) {
            return m;
        }
    }
}

/// `count` admissible matrices with `n` drawn from `ns`, kinds in rotation.
pub fn admissible_corpus(seed: u64, count: usize, ns: &[usize]) -> Vec<(CorpusKind, IntMatrix)> {
    const KINDS: [CorpusKind; 3] = [CorpusKind::Companion, CorpusKind::Block, CorpusKind::Conjugated];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let kind = KINDS[i % 3];
            let n = ns[rng.gen_range(0..ns.len())];
            (kind, random_admissible(&mut rng, n, kind))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn companion_checks() {
        let m = companion_from_str("x^5 - x - 1").unwrap();
        assert_eq!(m.dim(), 5);
        assert_eq!(m.det(), BigInt::one());
        assert!(companion_from_str("x^4 - x - 1").is_err());
        assert!(companion_from_str("x^5 - x + 1").is_err());
        assert!(companion_from_str("2x^3 - 1").is_err());
        assert!(companion_from_str("x - 1").is_err());
    }

    #[test]
    fn block_builds_example() {
        let n = IntMatrix::from_i64_rows(&[&[1, 2, -1], &[-1, 0, -2], &[0, 1, -1]]).unwrap();
        let p = IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap();
        let m = block(&n, &p).unwrap();
        assert_eq!(m.get(3, 4), &BigInt::from(-1));
        assert!(block(&p, &n).is_err());
    }

    #[test]
    fn conjugate_is_reproducible_and_similar() {
        let m = companion_from_str("x^5 - x - 1").unwrap();
        let (a, u) = conjugate_with(&m, 7, 20).unwrap();
        let (b, _) = conjugate_with(&m, 7, 20).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.charpoly(), m.charpoly());
        assert_eq!(u.det(), BigInt::one());
        assert_eq!(a.mul(&u), u.mul(&m));
    }

    #[test]
    fn corpus_is_admissible() {
        let c = admissible_corpus(3, 6, &[1, 2, 3]);
        for (_, m) in &c {
            let r = epclass_core::spectra::verify_admissible(m).unwrap();
            assert!(r.is_admissible());
        }
        assert_eq!(c, admissible_corpus(3, 6, &[1, 2, 3]));
    }

    #[test]
    fn nonreal_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [2, 4] {
            let p = random_nonreal_block(&mut rng, dim);
            let chi = p.charpoly().squarefree_part();
            assert_eq!(epclass_core::exactmath::count_real_roots(&chi).unwrap(), 0);
        }
    }
}
