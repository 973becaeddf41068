use crate::error::{domain, Error, Result};

const MAX_ITERATIONS: usize = 500;

/// Finds the root of a function that changes sign on `[lo, hi]`.
///
/// Brent's method: inverse quadratic interpolation and secant steps, falling
/// back to bisection whenever the interpolant leaves the bracket or fails to
/// shrink it fast enough. Terminates once the bracket is narrower than `tol`.
pub fn solve_monotone_root<F>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(domain(format!("invalid bracket [{lo}, {hi}]")));
    }
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }

    let (f_lo, f_hi) = (f(lo), f(hi));
    solve_bracketed(f, (lo, f_lo), (hi, f_hi), tol)
}

/// [`solve_monotone_root`] for a caller that already evaluated `f` at both
/// ends of the bracket.
pub(crate) fn solve_bracketed<F>(
    f: F,
    (lo, f_lo): (f64, f64),
    (hi, f_hi): (f64, f64),
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f_lo, f_hi);
    if fa.is_nan() || fb.is_nan() {
        return Err(domain("function is NaN at a bracket endpoint"));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NotBracketed {
            lo,
            hi,
            f_lo: fa,
            f_hi: fb,
        });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITERATIONS {
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
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
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
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(domain(format!("function is NaN at {b}")));
        }
    }

    Err(Error::Convergence {
        what: "root finder",
        estimate: b,
        error_estimate: (c - b).abs(),
    })
}
