//! Bracketed root finding: Brent's method with a guaranteed bisection
//! fallback.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Find a root of `f` on [lo, hi], where f(lo) and f(hi) have opposite signs
/// (or one endpoint is already a root). `tol` is an absolute tolerance on the
/// argument.
pub fn find_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }

    // Brent: a is kept as the contrapoint, b is the best iterate, c the
    // previous iterate.
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = b - a;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // attempt inverse quadratic interpolation / secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let q0 = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * q0 * (q0 - r) - (b - a) * (r - 1.0));
                q = (q0 - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        if d.abs() > tol1 {
            b += d;
        } else {
            b += tol1.copysign(xm);
        }
        fb = f(b);
    }
    Err(Error::Search(format!(
        "root finder did not converge within {MAX_ITER} iterations on [{lo}, {hi}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::phi;

    #[test]
    fn linear_root() {
        let r = find_root(|x| x - 1.0, 0.0, 2.0, 1e-10).unwrap();
        assert!((r - 1.0).abs() < 1e-10);
    }

    #[test]
    fn normal_quantile_via_bisection_oracle() {
        // independent inverse-CDF oracle: plain bisection on Phi(x) - 0.9
        let mut lo = 0.0;
        let mut hi = 3.0;
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if phi(mid) - 0.9 < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert!((oracle - 1.2815515655446004).abs() < 1e-12);

        let r = find_root(|x| phi(x) - 0.9, 0.0, 3.0, 1e-12).unwrap();
        assert!((r - oracle).abs() < 1e-10, "got {r}, oracle {oracle}");
        assert!((r - 1.2816).abs() < 5e-5);
    }

    #[test]
    fn no_sign_change_is_reported() {
        match find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10) {
            Err(Error::Bracket { .. }) => {}
            other => panic!("expected bracket error, got {other:?}"),
        }
    }

    #[test]
    fn steep_function() {
        // the implicit barrier equation is steep near its upper endpoint;
        // emulate that shape here
        let f = |b: f64| 1.0 / ((1.0 + b) * (0.1575 - (1.0 + b).ln())) - 10.0;
        let r = find_root(f, -0.55, 0.17, 1e-12).unwrap();
        assert!(f(r).abs() < 1e-6);
    }
}
