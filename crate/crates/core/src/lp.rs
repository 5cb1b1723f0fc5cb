//! Sampled checks of linear-programming certificates for sphere packing:
//! f(x) ≤ 0 for |x| ≥ r, f̂ ≥ 0, f(0) = f̂(0) = 1 give density ≤ vol(B_{r/2}).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fourier::sinc;
use crate::lattice::{ball_volume, dual_lattice, minimal_length, short_vectors, Lattice};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// How the one-variable profiles extend to ℝⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Shape {
    /// f(x) = profile(|x|).
    Radial,
    /// f(x) = Π profile(xᵢ).
    Product,
}

#[derive(Clone)]
pub struct LPCertificate {
    pub label: String,
    pub f: ScalarFn,
    pub f_hat: ScalarFn,
    pub shape: Shape,
    pub r: f64,
    pub dimension: usize,
    pub sign_grid: Vec<f64>,
    pub positivity_grid: Vec<f64>,
    pub slack: f64,
}

/// a, a+step, … up to and including b (within rounding).
pub fn uniform_grid(a: f64, b: f64, step: f64) -> Vec<f64> {
    let k = ((b - a) / step + 1e-9).floor() as usize;
    (0..=k).map(|i| a + i as f64 * step).collect()
}

impl LPCertificate {
    pub fn eval_f(&self, x: &[f64]) -> f64 {
        self.eval(&self.f, x)
    }

    pub fn eval_f_hat(&self, y: &[f64]) -> f64 {
        self.eval(&self.f_hat, y)
    }

    fn eval(&self, g: &ScalarFn, x: &[f64]) -> f64 {
        match self.shape {
            Shape::Radial => g(x.iter().map(|v| v * v).sum::<f64>().sqrt()),
            Shape::Product => x.iter().map(|&v| g(v)).product(),
        }
    }

    /// Unit directions sampled for a radius: one suffices for radial
    /// functions; product functions get the axes, the diagonal and 64 seeded
    /// random directions.
    fn directions(&self) -> Vec<Vec<f64>> {
        let n = self.dimension;
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        if self.shape == Shape::Radial {
            return vec![e1];
        }
        let mut dirs = Vec::new();
        for i in 0..n {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            dirs.push(e);
        }
        dirs.push(vec![1.0 / (n as f64).sqrt(); n]);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..64 {
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            if norm > 1e-3 {
                dirs.push(v.iter().map(|a| a / norm).collect());
            }
        }
        dirs
    }
}

/// The triangle (1 − |x|)₊ with transform sinc², r = 1, in dimension 1.
pub fn triangle_certificate() -> LPCertificate {
    LPCertificate {
        label: "triangle".into(),
        f: Arc::new(|x: f64| (1.0 - x.abs()).max(0.0)),
        f_hat: Arc::new(|y: f64| sinc(y).powi(2)),
        shape: Shape::Radial,
        r: 1.0,
        dimension: 1,
        sign_grid: uniform_grid(0.0, 6.0, 1e-3),
        positivity_grid: uniform_grid(0.0, 6.0, 1e-3),
        slack: 1e-9,
    }
}

/// Π(1 − |xᵢ|)₊ in dimension 2; it vanishes outside the square, so r = √2.
pub fn product_triangle_certificate() -> LPCertificate {
    LPCertificate {
        label: "product-triangle".into(),
        shape: Shape::Product,
        r: 2f64.sqrt(),
        dimension: 2,
        sign_grid: uniform_grid(0.0, 4.0, 1e-2),
        positivity_grid: uniform_grid(0.0, 4.0, 1e-2),
        ..triangle_certificate()
    }
}

/// e^{−π|x|²} in dimension n with the given r (never a valid certificate).
pub fn gaussian_certificate(n: usize, r: f64) -> LPCertificate {
    LPCertificate {
        label: "gaussian".into(),
        f: Arc::new(|x: f64| (-std::f64::consts::PI * x * x).exp()),
        f_hat: Arc::new(|y: f64| (-std::f64::consts::PI * y * y).exp()),
        shape: Shape::Radial,
        r,
        dimension: n,
        sign_grid: uniform_grid(0.0, 4.0, 1e-2),
        positivity_grid: uniform_grid(0.0, 4.0, 1e-2),
        slack: 1e-9,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CertificateOutcome {
    /// All sampled conditions hold; the density bound vol(B_{r/2}).
    Bound(f64),
    Violation { condition: u8, radius: f64, value: f64 },
}

/// Samples the three conditions in order and reports the first violation.
pub fn lp_certificate_check(c: &LPCertificate) -> CertificateOutcome {
    let zero = vec![0.0; c.dimension];
    for (v, cond) in [(c.eval_f(&zero), 3u8), (c.eval_f_hat(&zero), 3u8)] {
        if (v - 1.0).abs() > 1e-9 {
            return CertificateOutcome::Violation { condition: cond, radius: 0.0, value: v };
        }
    }
    let dirs = c.directions();
    let at = |d: &[f64], s: f64| d.iter().map(|a| a * s).collect::<Vec<f64>>();
    for &s in c.sign_grid.iter().filter(|&&s| s >= c.r) {
        for d in &dirs {
            let v = c.eval_f(&at(d, s));
            if v > c.slack {
                return CertificateOutcome::Violation { condition: 1, radius: s, value: v };
            }
        }
    }
    for &s in &c.positivity_grid {
        for d in &dirs {
            let v = c.eval_f_hat(&at(d, s));
            if v < -c.slack {
                return CertificateOutcome::Violation { condition: 2, radius: s, value: v };
            }
        }
    }
    CertificateOutcome::Bound(ball_volume(c.dimension, c.r / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessGap {
    /// Factor applied to the lattice so its minimal length equals r.
    pub scale: f64,
    pub dropped_f: f64,
    pub dropped_f_hat: f64,
    /// 1 − 1/covolume of the scaled lattice.
    pub slack: f64,
    pub density: f64,
    pub bound: f64,
}

impl SharpnessGap {
    pub fn total(&self) -> f64 {
        self.dropped_f + self.dropped_f_hat + self.slack.abs()
    }
}

/// The Poisson terms dropped in the proof of the bound, for the lattice
/// scaled to minimal length r: Σ_{0<|x|≤R}|f(x)|, Σ_{0<|y|≤R} f̂(y) and the
/// slack 1 − 1/covol.
pub fn lp_bound_sharpness_gap(l: &Lattice, c: &LPCertificate, radius_budget: f64) -> Result<SharpnessGap> {
    if l.dimension != c.dimension {
        return Err(Error::ShapeMismatch(format!(
            "lattice dimension {} but certificate dimension {}",
            l.dimension, c.dimension
        )));
    }
    let scale = c.r / minimal_length(l)?;
    let scaled = l.scaled(scale)?;
    let dual = dual_lattice(&scaled)?;
    let sum = |lat: &Lattice, g: &dyn Fn(&[f64]) -> f64| -> Result<f64> {
        Ok(short_vectors(lat, radius_budget)?
            .iter()
            .filter(|v| v.norm_sq > 0.0)
            .rev()
            .map(|v| g(v.vector.as_slice()))
            .sum())
    };
    let dropped_f = sum(&scaled, &|x| c.eval_f(x).abs())?;
    let dropped_f_hat = sum(&dual, &|y| c.eval_f_hat(y))?;
    let covol = scaled.covolume();
    Ok(SharpnessGap {
        scale,
        dropped_f,
        dropped_f_hat,
        slack: 1.0 - 1.0 / covol,
        density: ball_volume(c.dimension, c.r / 2.0) / covol,
        bound: ball_volume(c.dimension, c.r / 2.0),
    })
}
