//! Theta series, the modular lambda function, h = 1 - 2λ, the Hauptmodul J
//! and the geometry of the theta group on the upper half-plane.
//!
//! Two evaluation routes exist. The `theta2/3/4` functions sum the q-series
//! directly with an explicit tail bound and refuse points below an Im floor.
//! [`Thetas::at`] first maps the point into the region Im ≥ 1/2 with the
//! generators z ↦ z + 1 and z ↦ -1/z and then sums the series there, so it
//! stays accurate arbitrarily close to the real axis (contours end at ±1).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Complex number with strictly positive imaginary part.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperHalfPoint {
    re: f64,
    im: f64,
}

impl UpperHalfPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidPoint { re, im });
        }
        Ok(Self { re, im })
    }

    pub fn from_complex(z: C64) -> Result<Self> {
        Self::new(z.re, z.im)
    }

    /// Point on the imaginary axis, `t·i`.
    pub fn imag(t: f64) -> Result<Self> {
        Self::new(0.0, t)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn z(&self) -> C64 {
        C64::new(self.re, self.im)
    }

    /// z ↦ z + k
    pub fn shift(&self, k: f64) -> Self {
        Self { re: self.re + k, im: self.im }
    }

    /// z ↦ -1/z, which preserves the upper half-plane.
    pub fn neg_inv(&self) -> Self {
        let w = -1.0 / self.z();
        Self { re: w.re, im: w.im.max(f64::MIN_POSITIVE) }
    }
}

/// Truncation control for the direct q-series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesTolerance {
    pub abs_tol: f64,
    pub max_terms: usize,
    /// Points with Im z below this are refused.
    pub im_floor: f64,
}

impl SeriesTolerance {
    pub fn new(abs_tol: f64, max_terms: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::InvalidTolerance(format!("abs_tol must be positive, got {abs_tol}")));
        }
        if max_terms < 8 {
            return Err(Error::InvalidTolerance(format!("max_terms must be at least 8, got {max_terms}")));
        }
        Ok(Self { abs_tol, max_terms, im_floor: 0.05 })
    }

    pub fn with_im_floor(mut self, floor: f64) -> Self {
        self.im_floor = floor;
        self
    }
}

impl Default for SeriesTolerance {
    fn default() -> Self {
        Self { abs_tol: 1e-16, max_terms: 2000, im_floor: 0.05 }
    }
}

/// Neumaier compensated accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: C64,
    comp: C64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: C64) {
        neumaier(&mut self.sum.re, &mut self.comp.re, x.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, x.im);
    }

    pub fn value(&self) -> C64 {
        self.sum + self.comp
    }
}

// Smallest N with 2 r^{(N+shift)^2} / (1 - r) < tol, r = |q|.
fn truncation_index(r: f64, shift: f64, tol: &SeriesTolerance) -> Result<usize> {
    let ln_r = r.ln();
    for n in 1..=tol.max_terms {
        let e = (n as f64 + shift).powi(2);
        if 2.0 * (e * ln_r).exp() / (1.0 - r) < tol.abs_tol {
            return Ok(n);
        }
    }
    Err(Error::ToleranceUnreachable(format!(
        "q-series needs more than {} terms at |q| = {r}",
        tol.max_terms
    )))
}

fn check_floor(z: &UpperHalfPoint, tol: &SeriesTolerance) -> Result<()> {
    if z.im < tol.im_floor {
        return Err(Error::BelowImFloor { im: z.im, floor: tol.im_floor });
    }
    Ok(())
}

fn q_of(z: C64) -> C64 {
    (C64::i() * PI * z).exp()
}

/// θ₃(z) = Σ_{n∈ℤ} e^{πin²z}.
pub fn theta3(z: UpperHalfPoint, tol: SeriesTolerance) -> Result<C64> {
    check_floor(&z, &tol)?;
    let q = q_of(z.z());
    let n_max = truncation_index(q.norm(), 0.0, &tol)?;
    let mut acc = CompensatedSum::new();
    acc.add(C64::new(1.0, 0.0));
    for n in 1..n_max {
        let e = (n * n) as f64;
        acc.add(2.0 * (C64::i() * PI * e * z.z()).exp());
    }
    Ok(acc.value())
}

/// θ₄(z) = Σ (-1)ⁿ e^{πin²z}.
pub fn theta4(z: UpperHalfPoint, tol: SeriesTolerance) -> Result<C64> {
    check_floor(&z, &tol)?;
    let q = q_of(z.z());
    let n_max = truncation_index(q.norm(), 0.0, &tol)?;
    let mut acc = CompensatedSum::new();
    acc.add(C64::new(1.0, 0.0));
    for n in 1..n_max {
        let e = (n * n) as f64;
        let s = if n % 2 == 0 { 2.0 } else { -2.0 };
        acc.add(s * (C64::i() * PI * e * z.z()).exp());
    }
    Ok(acc.value())
}

/// θ₂(z) = Σ e^{πi(n+1/2)²z}.
pub fn theta2(z: UpperHalfPoint, tol: SeriesTolerance) -> Result<C64> {
    check_floor(&z, &tol)?;
    let q = q_of(z.z());
    let n_max = truncation_index(q.norm(), 0.5, &tol)?;
    let mut acc = CompensatedSum::new();
    for n in 0..n_max {
        let e = (n as f64 + 0.5).powi(2);
        acc.add(2.0 * (C64::i() * PI * e * z.z()).exp());
    }
    Ok(acc.value())
}

/// The principal value of (-iz)^{1/2}: positive on the imaginary axis,
/// continuous on the upper half-plane.
pub fn sqrt_neg_iz(z: UpperHalfPoint) -> C64 {
    (-C64::i() * z.z()).sqrt()
}

/// (θ₂, θ₃, θ₄) at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thetas {
    pub t2: C64,
    pub t3: C64,
    pub t4: C64,
}

const REDUCED_TOL: SeriesTolerance = SeriesTolerance { abs_tol: 1e-18, max_terms: 64, im_floor: 0.0 };

impl Thetas {
    /// Evaluate all three theta series at z, reducing to Im ≥ 1/2 first.
    pub fn at(z: C64) -> Thetas {
        // record the reduction word, then unwind it
        let mut steps: Vec<(i64, bool)> = Vec::new();
        let mut w = z;
        while w.im < 0.5 && steps.len() < 200 {
            let k = w.re.round();
            w -= k;
            let flip = w.im < 0.5;
            if flip {
                w = -1.0 / w;
            }
            steps.push((k as i64, flip));
        }
        let p = UpperHalfPoint { re: w.re, im: w.im.max(f64::MIN_POSITIVE) };
        let mut t = Thetas {
            t2: theta2(p, REDUCED_TOL).unwrap_or(C64::new(0.0, 0.0)),
            t3: theta3(p, REDUCED_TOL).unwrap_or(C64::new(1.0, 0.0)),
            t4: theta4(p, REDUCED_TOL).unwrap_or(C64::new(1.0, 0.0)),
        };
        for &(k, flip) in steps.iter().rev() {
            if flip {
                // current values are at w' = -1/w; recover the values at w
                let s = (-C64::i() * w).sqrt();
                t = Thetas { t2: s * t.t4, t3: s * t.t3, t4: s * t.t2 };
                w = -1.0 / w;
            }
            t = t.translate(k);
            w += k as f64;
        }
        t
    }

    // values at z + k from values at z
    fn translate(self, k: i64) -> Thetas {
        let r = k.rem_euclid(8) as f64;
        let phase = C64::from_polar(1.0, PI * r / 4.0);
        let (t3, t4) = if k.rem_euclid(2) == 1 { (self.t4, self.t3) } else { (self.t3, self.t4) };
        Thetas { t2: phase * self.t2, t3, t4 }
    }

    pub fn lambda(&self) -> C64 {
        let r = self.t2 / self.t3;
        let r2 = r * r;
        r2 * r2
    }
}

/// θ(z) = θ₃(z), evaluated through the reduction so that it is usable
/// near the real axis.
pub fn theta(z: UpperHalfPoint) -> C64 {
    Thetas::at(z.z()).t3
}

/// λ(z) = θ₂⁴/θ₃⁴.
pub fn lambda_modular(z: UpperHalfPoint) -> C64 {
    Thetas::at(z.z()).lambda()
}

/// h(z) = 1 - 2λ(z).
pub fn h_function(z: UpperHalfPoint) -> C64 {
    1.0 - 2.0 * lambda_modular(z)
}

/// J(z) = λ(z)(1 - λ(z))/16, with 1 - λ = θ₄⁴/θ₃⁴ to avoid cancellation.
pub fn hauptmodul_j(z: UpperHalfPoint) -> C64 {
    let t = Thetas::at(z.z());
    (t.t2 * t.t4 / (t.t3 * t.t3)).powu(4) / 16.0
}

/// True iff τ is at distance strictly greater than 1 from every even integer.
pub fn in_region_s(tau: UpperHalfPoint) -> bool {
    let k = (tau.re / 2.0).floor();
    [k, k + 1.0]
        .iter()
        .all(|&m| (tau.z() - C64::new(2.0 * m, 0.0)).norm() > 1.0)
}

/// An orbit point together with the parity of the number of z ↦ -1/z
/// steps used to reach it. Even parity means the Γ(2)-orbit of the start,
/// odd parity the Γ(2)-orbit of -1/start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrbitPoint {
    pub point: UpperHalfPoint,
    pub odd_inversions: bool,
    pub word_length: usize,
}

pub const ORBIT_CAP: usize = 10_000;
const ORBIT_DEDUP: f64 = 1e-12;

/// Breadth-first orbit under z ↦ z ± 2 and z ↦ -1/z, words up to `depth`.
pub fn gamma_theta_orbit_classified(tau: UpperHalfPoint, depth: usize) -> Vec<OrbitPoint> {
    let mut out = vec![OrbitPoint { point: tau, odd_inversions: false, word_length: 0 }];
    let mut frontier = vec![0usize];
    for level in 1..=depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            let p = out[idx];
            let images = [
                (p.point.shift(2.0), p.odd_inversions),
                (p.point.shift(-2.0), p.odd_inversions),
                (p.point.neg_inv(), !p.odd_inversions),
            ];
            for (q, odd) in images {
                if out.len() >= ORBIT_CAP {
                    return out;
                }
                let dup = out.iter().any(|o| (o.point.z() - q.z()).norm() < ORBIT_DEDUP);
                if !dup {
                    out.push(OrbitPoint { point: q, odd_inversions: odd, word_length: level });
                    next.push(out.len() - 1);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Distinct Γ_θ-orbit points reachable with words of length ≤ depth.
pub fn gamma_theta_orbit(tau: UpperHalfPoint, depth: usize) -> Vec<UpperHalfPoint> {
    gamma_theta_orbit_classified(tau, depth).into_iter().map(|o| o.point).collect()
}
