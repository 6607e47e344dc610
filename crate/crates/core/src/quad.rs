//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` to a relative tolerance `rel_tol`.
///
/// Interior `breakpoints` (kinks or branch switches of the integrand) split
/// the interval so that each panel sees a smooth function. Breakpoints
/// outside `(a, b)` are ignored.
pub fn integrate<F>(f: F, a: f64, b: f64, breakpoints: &[f64], rel_tol: f64) -> f64
where
    F: Fn(f64) -> f64,
{
    if a == b {
        return 0.0;
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut edges = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    edges.extend(inner);
    edges.push(hi);

    // A coarse first pass fixes the absolute tolerance shared by all panels.
    let rough: f64 = edges
        .windows(2)
        .map(|w| simpson(&f, w[0], w[1]).abs())
        .sum::<f64>()
        .max(f64::MIN_POSITIVE);
    let abs_tol = rel_tol * rough;
    let total_len = hi - lo;

    let sum: f64 = edges
        .windows(2)
        .map(|w| {
            let (x0, x1) = (w[0], w[1]);
            let xm = 0.5 * (x0 + x1);
            let (f0, fm, f1) = (f(x0), f(xm), f(x1));
            let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
            let tol = abs_tol * (x1 - x0) / total_len;
            recurse(&f, x0, x1, f0, fm, f1, whole, tol, MAX_DEPTH)
        })
        .sum();
    sign * sum
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
