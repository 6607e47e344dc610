use num_complex::Complex64;
use std::f64::consts::PI;

const SINGULAR_EPS: f64 = 1e-12;

/// Normalized Dirichlet kernel `H_M(x) = (1/M) sum_{m<M} exp(j*pi*m*x)`.
///
/// Evaluated in closed form; at the removable singularities `x = 0, ±2, …`
/// the limit (unit magnitude) is returned.
pub fn dirichlet_kernel(m: usize, x: f64) -> Complex64 {
    assert!(m >= 1, "Dirichlet kernel needs at least one element");
    let mf = m as f64;
    let phase = Complex64::from_polar(1.0, 0.5 * PI * (mf - 1.0) * x);
    phase * amplitude(m, x)
}

/// `|H_M(x)|`.
pub fn dirichlet_magnitude(m: usize, x: f64) -> f64 {
    amplitude(m, x).abs()
}

/// Real (signed) part of the kernel once the linear phase is removed.
fn amplitude(m: usize, x: f64) -> f64 {
    let mf = m as f64;
    let den = (0.5 * PI * x).sin();
    if den.abs() < SINGULAR_EPS {
        // x = 2k: limit is cos(pi*M*k)/cos(pi*k) = (-1)^{k(M-1)}
        let k = (0.5 * x).round() as i64;
        if (k * (m as i64 - 1)).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    } else {
        (0.5 * PI * mf * x).sin() / (mf * den)
    }
}
