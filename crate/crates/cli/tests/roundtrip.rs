//! Corpus properties of the generators.

use epclass::generate::{self, random_companion_poly, random_nonreal_block};
use epclass::{classify_matrix, ClassifyOptions, Conclusion};
use epclass_core::spectra::verify_admissible;
use epclass_core::IntMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn opts() -> ClassifyOptions {
    ClassifyOptions {
        samples: 10,
        ..ClassifyOptions::default()
    }
}

fn admissible(m: &IntMatrix) -> bool {
    verify_admissible(m).is_ok_and(|r| r.is_admissible())
}

#[test]
fn block_of_admissible_base_contains_tori() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut cases = Vec::new();
    while cases.len() < 50 {
        let deg = if rng.gen_bool(0.7) { 3 } else { 5 };
        let n = IntMatrix::companion(&random_companion_poly(&mut rng, deg, 3)).unwrap();
        if !admissible(&n) {
            continue;
        }
        let k = rng.gen_range(1..=2);
        let p = random_nonreal_block(&mut rng, 2 * k);
        cases.push(generate::block(&n, &p).unwrap());
    }
    cases.par_iter().for_each(|m| {
        let r = classify_matrix(m, &opts()).unwrap();
        assert_eq!(r.conclusion, Some(Conclusion::ContainsTori), "{m}");
        assert!(r.geometry_passed(), "{m}");
    });
}

#[test]
fn conjugation_preserves_classification() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let bases = [
        generate::companion_from_str("x^5 - x - 1").unwrap(),
        generate::companion_from_str("x^3 + 3x - 1").unwrap(),
        generate::block(
            &generate::companion_from_str("x^3 + 3x - 1").unwrap(),
            &IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]]).unwrap(),
        )
        .unwrap(),
    ];
    let cases: Vec<(usize, u64)> = (0..50).map(|i| (i % bases.len(), rng.gen())).collect();
    let want: Vec<_> = bases.iter().map(|b| classify_matrix(b, &opts()).unwrap()).collect();
    cases.par_iter().for_each(|&(b, seed)| {
        let c = generate::conjugate(&bases[b], seed, 20).unwrap();
        assert_eq!(c.charpoly(), bases[b].charpoly());
        let r = classify_matrix(&c, &opts()).unwrap();
        let w = &want[b];
        assert_eq!(r.admissibility.admissible, w.admissibility.admissible);
        assert_eq!(
            r.curve_verdict.as_ref().map(|c| (c.outcome, c.kernel_dim)),
            w.curve_verdict.as_ref().map(|c| (c.outcome, c.kernel_dim))
        );
        assert_eq!(r.conclusion, w.conclusion, "{c}");
    });
}
