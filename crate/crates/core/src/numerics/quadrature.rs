//! Globally adaptive Gauss–Kronrod integration and Gauss–Hermite expectations.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{domain, ensure_finite, Error, Result};

/// Tolerances shared by every integral in the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub relative_tolerance: f64,
    pub absolute_tolerance: f64,
    pub max_subdivisions: usize,
    pub hermite_nodes: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            relative_tolerance: 1e-9,
            absolute_tolerance: 1e-12,
            max_subdivisions: 4096,
            hermite_nodes: 64,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.relative_tolerance > 0.0 && self.relative_tolerance <= 1e-3) {
            return Err(domain(format!(
                "relative tolerance must lie in (0, 1e-3], got {}",
                self.relative_tolerance
            )));
        }
        if !(self.absolute_tolerance >= 0.0) {
            return Err(domain("absolute tolerance must be nonnegative"));
        }
        if self.max_subdivisions == 0 {
            return Err(domain("max_subdivisions must be positive"));
        }
        if self.hermite_nodes < 8 {
            return Err(domain("at least 8 Hermite nodes are required"));
        }
        Ok(())
    }
}

// 21-point Kronrod abscissae and weights, with the embedded 10-point Gauss rule.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_887_998,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Segment> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut abs_sum = WGK[10] * fc.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    if !kronrod.is_finite() {
        return Err(domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let abs_value = abs_sum * half.abs();
    let asc = asc * half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if asc != 0.0 && error != 0.0 {
        error = asc * (200.0 * error / asc).powf(1.5).min(1.0);
    }
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * abs_value);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrates `f` over `[a, b]` to the configured tolerances.
///
/// The interval with the largest error estimate is bisected until the summed
/// error falls below `max(absolute, relative * |integral|)` or the
/// subdivision budget runs out.
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive_with_breaks(f, &[a, b], cfg)
}

/// Like [`integrate_adaptive`], but seeds the partition with `breaks`
/// (sorted, at least two entries). Use it for integrands with kinks or for
/// long intervals whose features have a known length scale.
pub fn integrate_adaptive_with_breaks<F>(
    f: F,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if breaks.len() < 2 {
        return Err(domain("need at least two break points"));
    }
    for &x in breaks {
        ensure_finite("integration limit", x)?;
    }
    if breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(domain("integration limits must be strictly increasing"));
    }

    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions + breaks.len());
    let mut total = 0.0;
    let mut total_error = 0.0;
    for w in breaks.windows(2) {
        let seg = kronrod21(&f, w[0], w[1])?;
        total += seg.value;
        total_error += seg.error;
        heap.push(seg);
    }

    let mut splits = 0;
    // Segments too narrow to bisect further.
    let mut stuck_error = 0.0;
    loop {
        let target = cfg
            .absolute_tolerance
            .max(cfg.relative_tolerance * total.abs());
        if total_error <= target {
            return Ok(total);
        }
        if splits >= cfg.max_subdivisions {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            stuck_error += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = kronrod21(&f, worst.a, mid)?;
        let right = kronrod21(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        splits += 1;
    }

    // Recompute the sum from the pieces to shed accumulated rounding.
    let estimate: f64 = heap.iter().map(|s| s.value).sum();
    let error_estimate: f64 = heap.iter().map(|s| s.error).sum::<f64>() + stuck_error;
    let target = cfg
        .absolute_tolerance
        .max(cfg.relative_tolerance * estimate.abs());
    if error_estimate <= target {
        return Ok(estimate);
    }
    Err(Error::Convergence {
        what: "adaptive quadrature",
        estimate,
        error_estimate,
    })
}

/// Gauss–Hermite rule for the weight `exp(-t^2)`.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Builds an `n`-point rule by Newton iteration on the orthonormal
    /// Hermite recurrence.
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(domain("Gauss–Hermite rule needs at least one node"));
        }
        let pim4 = PI.powf(-0.25);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        let nf = n as f64;
        let mut z = 0.0;
        for i in 0..m {
            z = match i {
                0 => (2.0 * nf + 1.0).sqrt() - 1.85575 * (2.0 * nf + 1.0).powf(-0.16667),
                1 => z - 1.14 * nf.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * nodes[0],
                3 => 1.91 * z - 0.91 * nodes[1],
                _ => 2.0 * z - nodes[i - 2],
            };
            let mut derivative = 0.0;
            let mut converged = false;
            for _ in 0..100 {
                let mut p1 = pim4;
                let mut p2 = 0.0;
                for j in 1..=n {
                    let jf = j as f64;
                    let p3 = p2;
                    p2 = p1;
                    p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
                }
                derivative = (2.0 * nf).sqrt() * p2;
                let step = p1 / derivative;
                z -= step;
                if step.abs() <= 3e-14 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence {
                    what: "Gauss–Hermite node",
                    estimate: z,
                    error_estimate: f64::NAN,
                });
            }
            nodes[i] = z;
            nodes[n - 1 - i] = -z;
            weights[i] = 2.0 / (derivative * derivative);
            weights[n - 1 - i] = weights[i];
        }
        Ok(Self { nodes, weights })
    }

    /// Cached rule, built on first use.
    pub fn cached(n: usize) -> Result<Arc<Self>> {
        static RULES: OnceLock<Mutex<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
        let rules = RULES.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = rules.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(rule) = guard.get(&n) {
            return Ok(Arc::clone(rule));
        }
        let rule = Arc::new(Self::new(n)?);
        guard.insert(n, Arc::clone(&rule));
        Ok(rule)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `E[g(mean + sigma Z)]` for standard normal `Z`.
    pub fn expectation<G: Fn(f64) -> f64>(&self, g: G, mean: f64, sigma: f64) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sigma;
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * g(mean + scale * t))
            .sum();
        sum / PI.sqrt()
    }
}

/// Gauss–Hermite evaluation of `∫ g(y) N(y; mean, sigma^2) dy`.
pub fn gaussian_expectation<G>(g: G, mean: f64, sigma: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    cfg.validate()?;
    ensure_finite("mean", mean)?;
    ensure_finite("sigma", sigma)?;
    if sigma <= 0.0 {
        return Err(domain(format!("sigma must be positive, got {sigma}")));
    }
    let rule = GaussHermite::cached(cfg.hermite_nodes)?;
    let value = rule.expectation(g, mean, sigma);
    if value.is_finite() {
        Ok(value)
    } else {
        Err(domain("Gaussian expectation is not finite"))
    }
}
