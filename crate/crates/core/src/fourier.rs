//! Even test functions on ℝ, their Fourier transforms
//! f̂(y) = ∫ f(x) e^{-2πixy} dx, and the built-in transform pairs.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::contours::integrate_interval_complex;
use crate::error::{Error, Result};
use crate::modular::{sqrt_neg_iz, UpperHalfPoint, C64};

pub type RealToComplex = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// How fast a test function decays; drives the truncation of transforms
/// and sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Decay {
    /// |f(x)| ≤ scale · e^{-rate x²}
    Gaussian { rate: f64, scale: f64 },
    /// f(x) = 0 for |x| ≥ radius
    CompactSupport { radius: f64 },
    /// |f(x)| ≤ scale · |x|^{-power} for |x| ≥ 1
    Algebraic { power: f64, scale: f64 },
}

impl Decay {
    /// Point beyond which the envelope stays below `level`.
    pub fn cutoff(&self, level: f64) -> f64 {
        match *self {
            Decay::Gaussian { rate, scale } => ((scale / level).max(1.0).ln() / rate).sqrt(),
            Decay::CompactSupport { radius } => radius,
            Decay::Algebraic { power, scale } => (scale / level).powf(1.0 / power).max(1.0),
        }
    }

    pub fn envelope(&self, x: f64) -> f64 {
        match *self {
            Decay::Gaussian { rate, scale } => scale * (-rate * x * x).exp(),
            Decay::CompactSupport { radius } => {
                if x.abs() < radius {
                    f64::INFINITY
                } else {
                    0.0
                }
            }
            Decay::Algebraic { power, scale } => scale * x.abs().max(1.0).powf(-power),
        }
    }
}

/// An even function of one real variable with decay metadata.
#[derive(Clone)]
pub struct EvenTestFunction {
    pub label: String,
    evaluator: RealToComplex,
    exact_transform: Option<RealToComplex>,
    pub decay: Decay,
}

impl fmt::Debug for EvenTestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EvenTestFunction")
            .field("label", &self.label)
            .field("decay", &self.decay)
            .field("has_exact_transform", &self.exact_transform.is_some())
            .finish()
    }
}

impl EvenTestFunction {
    pub fn new(label: impl Into<String>, evaluator: RealToComplex, decay: Decay) -> Self {
        Self { label: label.into(), evaluator, exact_transform: None, decay }
    }

    pub fn with_exact_transform(mut self, t: RealToComplex) -> Self {
        self.exact_transform = Some(t);
        self
    }

    pub fn eval(&self, x: f64) -> C64 {
        (self.evaluator)(x)
    }

    pub fn exact_transform(&self, y: f64) -> Option<C64> {
        self.exact_transform.as_ref().map(|t| t(y))
    }

    /// Gaussian-type decay rate, or +∞ for compact support and 0 for algebraic decay.
    pub fn decay_rate(&self) -> f64 {
        match self.decay {
            Decay::Gaussian { rate, .. } => rate,
            Decay::CompactSupport { .. } => f64::INFINITY,
            Decay::Algebraic { .. } => 0.0,
        }
    }

    /// Transform at y: the exact evaluator when present, otherwise numeric.
    pub fn transform(&self, y: f64, abs_tol: f64) -> Result<C64> {
        match self.exact_transform(y) {
            Some(v) => Ok(v),
            None => numeric_transform(self, y, abs_tol),
        }
    }

    /// α f + β g
    pub fn linear_combination(alpha: f64, f: &EvenTestFunction, beta: f64, g: &EvenTestFunction) -> EvenTestFunction {
        let (fe, ge) = (f.evaluator.clone(), g.evaluator.clone());
        let decay = combine_decay(alpha, f.decay, beta, g.decay);
        let mut out = EvenTestFunction::new(
            format!("{alpha}*{}+{beta}*{}", f.label, g.label),
            Arc::new(move |x| alpha * fe(x) + beta * ge(x)),
            decay,
        );
        if let (Some(ft), Some(gt)) = (f.exact_transform.clone(), g.exact_transform.clone()) {
            out.exact_transform = Some(Arc::new(move |y| alpha * ft(y) + beta * gt(y)));
        }
        out
    }
}

fn combine_decay(alpha: f64, a: Decay, beta: f64, b: Decay) -> Decay {
    use Decay::*;
    match (a, b) {
        (Gaussian { rate: r1, scale: s1 }, Gaussian { rate: r2, scale: s2 }) => {
            Gaussian { rate: r1.min(r2), scale: alpha.abs() * s1 + beta.abs() * s2 }
        }
        (CompactSupport { radius: r1 }, CompactSupport { radius: r2 }) => CompactSupport { radius: r1.max(r2) },
        (Algebraic { power, scale }, _) | (_, Algebraic { power, scale }) => {
            Algebraic { power, scale: scale * (alpha.abs() + beta.abs()) }
        }
        (Gaussian { .. }, CompactSupport { .. }) => a,
        (CompactSupport { .. }, Gaussian { .. }) => b,
    }
}

/// f and its transform, both as test functions.
#[derive(Debug, Clone)]
pub struct TransformPair {
    pub f: EvenTestFunction,
    pub f_hat: EvenTestFunction,
}

impl TransformPair {
    /// Pair up f and f̂; f gets f̂'s evaluator as its exact transform and
    /// vice versa (even functions satisfy f̂̂ = f).
    pub fn new(f: EvenTestFunction, f_hat: EvenTestFunction) -> Self {
        let f = f.clone().with_exact_transform(f_hat.evaluator.clone());
        let f_hat = f_hat.clone().with_exact_transform(f.evaluator.clone());
        Self { f, f_hat }
    }

    pub fn label(&self) -> &str {
        &self.f.label
    }
}

// 2∫₀^X g(x) cos(2πxy) dx split into unit pieces so long ranges stay resolved.
fn cosine_integral(f: &EvenTestFunction, y: f64, x_max: f64, abs_tol: f64) -> Result<C64> {
    let pieces = (x_max * (1.0 + y.abs())).ceil().max(1.0) as usize;
    let h = x_max / pieces as f64;
    let tol = abs_tol / pieces as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..pieces {
        let (a, b) = (k as f64 * h, (k + 1) as f64 * h);
        let r = integrate_interval_complex(|x| f.eval(x) * (2.0 * PI * x * y).cos(), a, b, tol / 2.0)?;
        acc += r.value;
    }
    Ok(2.0 * acc)
}

/// f̂(y) = 2∫₀^∞ f(x) cos(2πxy) dx, truncated where the decay envelope
/// falls below abs_tol/10. For algebraic decay the cutoff is extrapolated
/// (cutoffs N and 2N, leading tail ∝ N^{1-power}).
pub fn numeric_transform(f: &EvenTestFunction, y: f64, abs_tol: f64) -> Result<C64> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidTolerance(format!("abs_tol must be positive, got {abs_tol}")));
    }
    match f.decay {
        Decay::Gaussian { .. } | Decay::CompactSupport { .. } => {
            let x_max = f.decay.cutoff(abs_tol / 10.0);
            cosine_integral(f, y, x_max, abs_tol / 2.0)
        }
        Decay::Algebraic { power, scale } => {
            if power <= 1.0 {
                return Err(Error::ToleranceUnreachable(format!("decay power {power} is not integrable")));
            }
            // after extrapolation the tail is O(N^{-power-1})
            let n = (10.0 * scale / abs_tol).powf(1.0 / (power + 1.0)).ceil().max(16.0);
            if n > 5000.0 {
                return Err(Error::ToleranceUnreachable(format!("cutoff {n} exceeds the truncation budget")));
            }
            let a = cosine_integral(f, y, n, abs_tol / 4.0)?;
            let b = a + cosine_integral_range(f, y, n, 2.0 * n, abs_tol / 4.0)?;
            let p = power - 1.0;
            let w = 2f64.powf(p);
            Ok((w * b - a) / (w - 1.0))
        }
    }
}

fn cosine_integral_range(f: &EvenTestFunction, y: f64, from: f64, to: f64, abs_tol: f64) -> Result<C64> {
    let pieces = ((to - from) * (1.0 + y.abs())).ceil().max(1.0) as usize;
    let h = (to - from) / pieces as f64;
    let tol = abs_tol / pieces as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..pieces {
        let (a, b) = (from + k as f64 * h, from + (k + 1) as f64 * h);
        acc += integrate_interval_complex(|x| f.eval(x) * (2.0 * PI * x * y).cos(), a, b, tol / 2.0)?.value;
    }
    Ok(2.0 * acc)
}

/// Transform of x ↦ e^{πiτx²}: (−iτ)^{−1/2} e^{πi(−1/τ)y²}.
pub fn complex_gaussian_transform(tau: UpperHalfPoint, y: f64) -> C64 {
    let w = -1.0 / tau.z();
    (C64::i() * PI * w * y * y).exp() / sqrt_neg_iz(tau)
}

/// x ↦ e^{πiτx²} as a test function with its closed-form transform.
pub fn complex_gaussian(tau: UpperHalfPoint) -> EvenTestFunction {
    let t = tau.z();
    EvenTestFunction::new(
        format!("complex-gaussian({},{})", tau.re(), tau.im()),
        Arc::new(move |x| (C64::i() * PI * t * x * x).exp()),
        Decay::Gaussian { rate: PI * tau.im(), scale: 1.0 },
    )
    .with_exact_transform(Arc::new(move |y| complex_gaussian_transform(tau, y)))
}

/// e^{−πtx²} ↔ t^{−1/2} e^{−πy²/t}
pub fn dilated_gaussian(t: f64) -> TransformPair {
    let label = if t == 1.0 { "gaussian".to_string() } else { format!("gaussian-t{t}") };
    let f = EvenTestFunction::new(
        label.clone(),
        Arc::new(move |x| C64::new((-PI * t * x * x).exp(), 0.0)),
        Decay::Gaussian { rate: PI * t, scale: 1.0 },
    );
    let s = t.powf(-0.5);
    let f_hat = EvenTestFunction::new(
        format!("{label}-hat"),
        Arc::new(move |y| C64::new(s * (-PI * y * y / t).exp(), 0.0)),
        Decay::Gaussian { rate: PI / t, scale: s },
    );
    TransformPair::new(f, f_hat)
}

/// x² e^{−πx²} ↔ (1/(2π) − y²) e^{−πy²}
pub fn hermite2() -> TransformPair {
    let f = EvenTestFunction::new(
        "hermite2",
        Arc::new(|x| C64::new(x * x * (-PI * x * x).exp(), 0.0)),
        Decay::Gaussian { rate: PI / 2.0, scale: 1.0 },
    );
    let f_hat = EvenTestFunction::new(
        "hermite2-hat",
        Arc::new(|y| C64::new((1.0 / (2.0 * PI) - y * y) * (-PI * y * y).exp(), 0.0)),
        Decay::Gaussian { rate: PI / 2.0, scale: 1.0 },
    );
    TransformPair::new(f, f_hat)
}

/// sin(πy)/(πy) with the removable singularity filled in.
pub fn sinc(y: f64) -> f64 {
    if y.abs() < 1e-8 {
        1.0 - (PI * y).powi(2) / 6.0
    } else {
        (PI * y).sin() / (PI * y)
    }
}

/// (1 − |x|)₊ ↔ sinc²
pub fn triangle() -> TransformPair {
    let f = EvenTestFunction::new(
        "triangle",
        Arc::new(|x: f64| C64::new((1.0 - x.abs()).max(0.0), 0.0)),
        Decay::CompactSupport { radius: 1.0 },
    );
    let f_hat = EvenTestFunction::new(
        "triangle-hat",
        Arc::new(|y| C64::new(sinc(y).powi(2), 0.0)),
        Decay::Algebraic { power: 2.0, scale: 1.0 / (PI * PI) },
    );
    TransformPair::new(f, f_hat)
}

/// Built-in transform pairs, addressable by label.
pub fn builtin_fixtures() -> Vec<TransformPair> {
    vec![dilated_gaussian(1.0), dilated_gaussian(2.0), dilated_gaussian(0.5), hermite2(), triangle()]
}

pub fn fixture(label: &str) -> Option<TransformPair> {
    builtin_fixtures().into_iter().find(|p| p.label() == label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spot_values() {
        let g = dilated_gaussian(1.0);
        assert_abs_diff_eq!(numeric_transform(&g.f, 0.7, 1e-12).unwrap().re, (-PI * 0.49).exp(), epsilon = 1e-9);
        let e = EvenTestFunction::new("e", Arc::new(|x| C64::new((-x * x).exp(), 0.0)), Decay::Gaussian { rate: 1.0, scale: 1.0 });
        assert_abs_diff_eq!(numeric_transform(&e, 0.0, 1e-12).unwrap().re, PI.sqrt(), epsilon = 1e-9);
        let t = triangle();
        assert_abs_diff_eq!(numeric_transform(&t.f, 0.5, 1e-12).unwrap().re, 4.0 / (PI * PI), epsilon = 1e-8);
    }

    #[test]
    fn complex_gaussian_closed_form() {
        let i = UpperHalfPoint::imag(1.0).unwrap();
        for y in [0.0, 0.4, 1.3] {
            assert!((complex_gaussian_transform(i, y) - (-PI * y * y).exp()).norm() < 1e-15);
        }
        let t2 = UpperHalfPoint::imag(2.0).unwrap();
        assert!((complex_gaussian_transform(t2, 0.0) - 0.5f64.sqrt()).norm() < 1e-15);
        let tau = UpperHalfPoint::new(0.5, 1.0).unwrap();
        let f = complex_gaussian(tau);
        let num = numeric_transform(&f, 1.0, 1e-11).unwrap();
        assert!((num - complex_gaussian_transform(tau, 1.0)).norm() < 1e-8);
    }

    #[test]
    fn fixture_spot_values() {
        assert_abs_diff_eq!(fixture("gaussian").unwrap().f.eval(0.0).re, 1.0);
        assert_abs_diff_eq!(fixture("gaussian-t2").unwrap().f_hat.eval(0.0).re, 0.5f64.sqrt(), epsilon = 1e-15);
        let h = hermite2();
        assert_abs_diff_eq!(numeric_transform(&h.f, 0.0, 1e-12).unwrap().re, 1.0 / (2.0 * PI), epsilon = 1e-10);
        assert!(fixture("nope").is_none());
    }

    #[test]
    fn pairs_match() {
        for p in builtin_fixtures() {
            for x in [0.0, 0.5, 1.0, 2.0] {
                let n = numeric_transform(&p.f, x, 1e-11).unwrap();
                assert!((n - p.f_hat.eval(x)).norm() < 1e-8, "{} at {x}", p.label());
            }
        }
    }

    #[test]
    fn sinc_squared_transforms_back() {
        let t = triangle();
        for x in [0.0, 0.5, 1.0] {
            let n = numeric_transform(&t.f_hat, x, 1e-8).unwrap();
            assert!((n - t.f.eval(x)).norm() < 1e-6, "{x}: {n}");
        }
    }
}
