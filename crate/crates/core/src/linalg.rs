use crate::{CVector, Complex64};
use nalgebra::DMatrix;

pub(crate) type CMatrix = DMatrix<Complex64>;

/// `sum_i g_i g_i^H + diag * I`, skipping `skip`.
pub(crate) fn gram_plus_identity(vectors: &[CVector], skip: Option<usize>, diag: f64) -> CMatrix {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut c = CMatrix::identity(n, n) * Complex64::new(diag, 0.0);
    for (i, g) in vectors.iter().enumerate() {
        if Some(i) != skip {
            c += g * g.adjoint();
        }
    }
    c
}

/// Weighted variant: `I + sum_i w_i g_i g_i^H`.
pub(crate) fn weighted_gram_plus_identity(vectors: &[CVector], weights: &[f64]) -> CMatrix {
    let n = vectors.first().map_or(0, |v| v.len());
    let mut c = CMatrix::identity(n, n);
    for (g, &w) in vectors.iter().zip(weights) {
        c += (g * g.adjoint()) * Complex64::new(w, 0.0);
    }
    c
}

/// Solves `C x = b` for Hermitian positive definite `C`, falling back to LU.
pub(crate) fn solve_hpd(c: CMatrix, b: &CVector) -> Option<CVector> {
    match c.clone().cholesky() {
        Some(ch) => Some(ch.solve(b)),
        None => c.lu().solve(b),
    }
}

/// `b^H a`.
pub(crate) fn inner(b: &CVector, a: &CVector) -> Complex64 {
    b.dotc(a)
}
