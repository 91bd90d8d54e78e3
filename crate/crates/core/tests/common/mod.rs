#![allow(dead_code)]

use epclass_core::IntMatrix;
use num_bigint::BigInt;
use proptest::prelude::*;

pub fn matrix(dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-bound..=bound, dim * dim).prop_map(move |v| {
        IntMatrix::from_rows(v.chunks(dim).map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
            .unwrap()
    })
}

/// Product of elementary row operations, and its inverse.
pub fn unimodular(dim: usize, steps: usize) -> impl Strategy<Value = (IntMatrix, IntMatrix)> {
    prop::collection::vec((0..dim, 1..dim, prop::bool::ANY), steps).prop_map(move |ops| {
        let mut u = IntMatrix::identity(dim);
        let mut ui = IntMatrix::identity(dim);
        for (i, off, plus) in ops {
            let j = (i + off) % dim;
            let c = BigInt::from(if plus { 1 } else { -1 });
            for col in 0..dim {
                let v = u.get(i, col) + &c * u.get(j, col);
                u.set(i, col, v);
            }
            for row in 0..dim {
                let v = ui.get(row, j) - &c * ui.get(row, i);
                ui.set(row, j, v);
            }
        }
        (u, ui)
    })
}

pub fn example() -> IntMatrix {
    IntMatrix::from_i64_rows(&[
        &[1, 2, -1, 0, 0],
        &[-1, 0, -2, 0, 0],
        &[0, 1, -1, 0, 0],
        &[0, 0, 0, 0, -1],
        &[0, 0, 0, 1, 0],
    ])
    .unwrap()
}
