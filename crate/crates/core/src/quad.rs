//! Numerical quadrature used by the scale/speed construction and the
//! finite-volume cell averages.

const MAX_DEPTH: u32 = 48;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
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

/// Three-point Gauss-Legendre rule on `[a, b]`; exact for polynomials of degree ≤ 5.
pub fn gauss3<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    const NODE: f64 = 0.774_596_669_241_483_4; // sqrt(3/5)
    const W_OUTER: f64 = 5.0 / 9.0;
    const W_CENTER: f64 = 8.0 / 9.0;
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    r * (W_OUTER * f(c - r * NODE) + W_CENTER * f(c) + W_OUTER * f(c + r * NODE))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let v = adaptive_simpson(|x| 1.0 + x - 2.0 * x * x + x * x * x, -1.0, 2.0, 1e-14);
        // 3 + 1.5 - 6 + 3.75
        assert!((v - 2.25).abs() < 1e-13);
    }

    #[test]
    fn simpson_converges_on_reciprocal() {
        let v = adaptive_simpson(|x| 2.0 / (1.0 + x), 0.0, 1.0, 1e-13);
        assert!((v - 2.0 * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn gauss3_quintic() {
        let v = gauss3(|x| x.powi(5) + x.powi(4), 0.0, 1.0);
        assert!((v - (1.0 / 6.0 + 0.2)).abs() < 1e-15);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        assert_eq!(adaptive_simpson(|x| x, 1.0, 1.0, 1e-12), 0.0);
        let v = adaptive_simpson(|x| x, 1.0, 0.0, 1e-12);
        assert!((v + 0.5).abs() < 1e-15);
    }
}
