//! Adaptive Simpson quadrature.

/// Relative tolerance used for hyperbolic arc lengths.
pub const LENGTH_REL_TOL: f64 = 1e-10;

const MAX_DEPTH: u32 = 48;

/// Integrates `f` over `[a, b]` with adaptive Simpson refinement.
///
/// The tolerance is relative to the magnitude of the first coarse estimate,
/// with an absolute floor at `1e-300` so zero integrands terminate.
pub fn adaptive_simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let tol = (rel_tol * whole.abs()).max(1e-300);
    recurse(&mut f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse<F: FnMut(f64) -> f64>(
    f: &mut F,
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
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        let v = adaptive_simpson(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-12);
        assert!((v - 0.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_log_singularity_nearby() {
        // ∫_{0.01}^{1} dx/x = ln 100
        let v = adaptive_simpson(|x| 1.0 / x, 0.01, 1.0, 1e-12);
        assert!((v - 100f64.ln()).abs() < 1e-10);
    }
}
