mod common;

use common::{example, unimodular};
use epclass_core::curvetest::{independence_test, transform_witness, Outcome};
use epclass_core::spectra::{numeric_spectrum, verify_admissible, Verdict};
use epclass_core::{IntMatrix, IntPoly};
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

fn companion_poly() -> impl Strategy<Value = IntPoly> {
    (prop::sample::select(vec![3usize, 5, 7]), prop::collection::vec(-3i64..=3, 8)).prop_map(|(d, c)| {
        let mut c: Vec<i64> = c[..=d].to_vec();
        c[0] = -1;
        c[d] = 1;
        IntPoly::from_i64s(&c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn admissibility_is_conjugation_invariant(p in companion_poly(), (u, ui) in unimodular(7, 12)) {
        let m = IntMatrix::companion(&p).unwrap();
        let d = m.dim();
        let (u, ui) = (u.sub_block(0, d), ui.sub_block(0, d));
        prop_assume!(u.mul(&ui) == IntMatrix::identity(d));
        let c = u.mul(&m).mul(&ui);
        let (r0, r1) = (verify_admissible(&m).unwrap(), verify_admissible(&c).unwrap());
        prop_assert_eq!(r0.verdict, r1.verdict);
        prop_assert_eq!(&r0.failures, &r1.failures);
        prop_assert_eq!(r0.charpoly, r1.charpoly);
    }

    #[test]
    fn companion_independence_iff_irreducible(p in companion_poly()) {
        let m = IntMatrix::companion(&p).unwrap();
        let r = verify_admissible(&m).unwrap();
        prop_assume!(r.verdict == Verdict::Admissible);
        let v = independence_test(&m).unwrap();
        let full = v.minpoly.degree() == Some(m.dim());
        prop_assert_eq!(v.outcome == Outcome::Independent, full);
        prop_assert_eq!(full, v.minpoly.primitive_part() == p);
        prop_assert_eq!(v.kernel_dim, m.dim() - v.minpoly.degree().unwrap());
    }

    #[test]
    fn witness_transforms_under_conjugation((u, ui) in unimodular(5, 10)) {
        let m = example();
        let c = u.mul(&m).mul(&ui);
        let v = independence_test(&m).unwrap();
        let s = transform_witness(v.witness.as_ref().unwrap(), &u).unwrap();
        let vc = independence_test(&c).unwrap();
        prop_assert_eq!(vc.outcome, Outcome::Dependent);
        prop_assert!(vc.eigenvector.combine(&s).iter().all(Zero::is_zero));
    }

    #[test]
    fn numeric_spectrum_matches_trace_and_det(p in companion_poly()) {
        let m = IntMatrix::companion(&p).unwrap();
        prop_assume!(verify_admissible(&m).unwrap().verdict == Verdict::Admissible);
        let s = numeric_spectrum(&m, 128).unwrap();
        let tr = m.trace().to_f64().unwrap();
        prop_assert!((s.trace() - tr).abs() <= 1e-9 * (1.0 + tr.abs()));
        prop_assert!((s.det() - 1.0).abs() <= 1e-9);
        prop_assert!(s.max_residual() <= 2f64.powi(-64));
        prop_assert_eq!(s.real.len(), 1);
    }
}
