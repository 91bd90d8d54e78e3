//! Exact integer and rational algebra: polynomials, Sturm root counting,
//! characteristic polynomials and null spaces.

mod matrix;
mod poly;
mod sturm;

pub use matrix::{rational_kernel, IntMatrix, RatMatrix};
pub use poly::IntPoly;
pub use sturm::{
    count_real_roots, isolate_real_roots, root_bound, root_window, sturm_count, Interval,
    SturmChain,
};

/// `det(xI - M)`, exact.
pub fn charpoly(m: &IntMatrix) -> IntPoly {
    m.charpoly()
}

/// Primitive squarefree part with the same complex roots.
pub fn squarefree_part(p: &IntPoly) -> IntPoly {
    p.squarefree_part()
}
