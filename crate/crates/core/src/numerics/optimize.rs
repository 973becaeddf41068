//! Derivative-free minimization of smooth one- and few-dimensional objectives.

const MAX_SWEEPS: usize = 100;

/// Coordinate-wise golden-section minimization. Each coordinate is searched
/// within 50% of its current value (clipped to `limits`); sweeps repeat,
/// re-centering the brackets, until a sweep brings no improvement.
/// The result is never worse than `start`.
pub fn refine_min<F: Fn(&[f64]) -> f64>(f: F, start: &[f64], limits: &[(f64, f64)]) -> Vec<f64> {
    let mut p = start.to_vec();
    let mut best = f(&p);
    if !best.is_finite() {
        return p;
    }
    for _ in 0..MAX_SWEEPS {
        let before = best;
        for i in 0..p.len() {
            let (a, b) = (0.5 * p[i], 1.5 * p[i]);
            let lo = a.min(b).max(limits[i].0);
            let hi = a.max(b).min(limits[i].1);
            if !(hi > lo) {
                continue;
            }
            let mut trial = p.clone();
            let x = golden_section(
                |x| {
                    trial[i] = x;
                    f(&trial)
                },
                lo,
                hi,
            );
            let mut cand = p.clone();
            cand[i] = x;
            let v = f(&cand);
            if v < best {
                best = v;
                p = cand;
            }
        }
        if before - best <= 1e-13 * best.abs().max(1e-300) {
            break;
        }
    }
    p
}

pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let width = b - a;
    for _ in 0..200 {
        if (b - a) <= 1e-12 * width {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        c
    } else {
        d
    }
}
