//! Oriented paths in the upper half-plane and adaptive Gauss–Legendre
//! quadrature along them.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::modular::{UpperHalfPoint, C64};

/// One smooth piece of a contour, parameterized by t ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Segment {
    Line { from: C64, to: C64 },
    Arc { center: C64, radius: f64, theta0: f64, theta1: f64 },
}

impl Segment {
    pub fn point(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => from + (to - from) * t,
            Segment::Arc { center, radius, theta0, theta1 } => {
                center + C64::from_polar(radius, theta0 + (theta1 - theta0) * t)
            }
        }
    }

    /// d(point)/dt
    pub fn derivative(&self, t: f64) -> C64 {
        match *self {
            Segment::Line { from, to } => to - from,
            Segment::Arc { radius, theta0, theta1, .. } => {
                let th = theta0 + (theta1 - theta0) * t;
                C64::i() * C64::from_polar(radius * (theta1 - theta0), th)
            }
        }
    }

    pub fn start(&self) -> C64 {
        self.point(0.0)
    }

    pub fn end(&self) -> C64 {
        self.point(1.0)
    }

    pub fn length(&self) -> f64 {
        match *self {
            Segment::Line { from, to } => (to - from).norm(),
            Segment::Arc { radius, theta0, theta1, .. } => radius * (theta1 - theta0).abs(),
        }
    }

    pub fn reversed(&self) -> Segment {
        match *self {
            Segment::Line { from, to } => Segment::Line { from: to, to: from },
            Segment::Arc { center, radius, theta0, theta1 } => {
                Segment::Arc { center, radius, theta0: theta1, theta1: theta0 }
            }
        }
    }
}

/// A piecewise-smooth path. `reversed` flips the orientation flag rather
/// than the segments, so reversing negates integrals bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    segments: Vec<Segment>,
    reversed: bool,
}

impl Contour {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidArgument("contour needs at least one segment".into()));
        }
        for w in segments.windows(2) {
            if (w[0].end() - w[1].start()).norm() > 1e-12 {
                return Err(Error::InvalidArgument("contour segments are not connected".into()));
            }
        }
        for s in &segments {
            for k in 1..64 {
                let z = s.point(k as f64 / 64.0);
                if !(z.im > 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "segment leaves the upper half-plane at {z}"
                    )));
                }
            }
        }
        Ok(Self { segments, reversed: false })
    }

    /// Segments in the direction they were built (the orientation flag is separate).
    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_reversed(&self) -> bool {
        self.reversed
    }

    pub fn reversed(&self) -> Contour {
        Contour { segments: self.segments.clone(), reversed: !self.reversed }
    }

    pub fn start(&self) -> C64 {
        if self.reversed {
            self.segments.last().unwrap().end()
        } else {
            self.segments[0].start()
        }
    }

    pub fn end(&self) -> C64 {
        if self.reversed {
            self.segments[0].start()
        } else {
            self.segments.last().unwrap().end()
        }
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(Segment::length).sum()
    }

    /// Sampled minimum distance from the path to `p`.
    pub fn min_distance_to(&self, p: C64) -> f64 {
        let mut best = f64::INFINITY;
        for s in &self.segments {
            for k in 0..=2000 {
                best = best.min((s.point(k as f64 / 2000.0) - p).norm());
            }
        }
        best
    }

    /// Point at arclength fraction 1/2 (for symmetric contours, the midpoint).
    pub fn midpoint(&self) -> C64 {
        let half = self.length() / 2.0;
        let mut acc = 0.0;
        for s in &self.segments {
            let l = s.length();
            if acc + l >= half {
                return s.point((half - acc) / l);
            }
            acc += l;
        }
        self.end()
    }
}

/// Unit semicircle from -1 through i to 1.
pub fn semicircle() -> Contour {
    Contour {
        segments: vec![Segment::Arc { center: C64::new(0.0, 0.0), radius: 1.0, theta0: PI, theta1: 0.0 }],
        reversed: false,
    }
}

/// -1 → -1+i → 1+i → 1
pub fn polygon_contour() -> Contour {
    let pts = [C64::new(-1.0, 0.0), C64::new(-1.0, 1.0), C64::new(1.0, 1.0), C64::new(1.0, 0.0)];
    let segments = pts.windows(2).map(|w| Segment::Line { from: w[0], to: w[1] }).collect();
    Contour { segments, reversed: false }
}

pub fn horizontal_line(height: f64, from_re: f64, to_re: f64) -> Result<Contour> {
    if !(height > 0.0) {
        return Err(Error::InvalidArgument(format!("line height must be positive, got {height}")));
    }
    Contour::new(vec![Segment::Line { from: C64::new(from_re, height), to: C64::new(to_re, height) }])
}

/// Positively oriented circle.
pub fn circle_around(center: UpperHalfPoint, radius: f64) -> Result<Contour> {
    if !(radius > 0.0) || radius >= center.im() {
        return Err(Error::RadiusTooLarge { radius, im: center.im() });
    }
    Contour::new(vec![Segment::Arc { center: center.z(), radius, theta0: 0.0, theta1: 2.0 * PI }])
}

/// The low path -1 → 1 through (±1/2 + i/2) used for the interpolation basis.
/// Kernel Fourier coefficients grow like e^{-nπ Im(γz)} towards the cusps; this
/// path keeps that growth near e^{nπ/2} instead of e^{nπ} on the semicircle.
pub fn low_path() -> Contour {
    let c = |re: f64, im: f64| C64::new(re, im);
    Contour {
        segments: vec![
            Segment::Line { from: c(-1.0, 0.0), to: c(-0.75, 0.25) },
            Segment::Arc { center: c(-0.5, 0.25), radius: 0.25, theta0: PI, theta1: PI / 2.0 },
            Segment::Line { from: c(-0.5, 0.5), to: c(0.5, 0.5) },
            Segment::Arc { center: c(0.5, 0.25), radius: 0.25, theta0: PI / 2.0, theta1: 0.0 },
            Segment::Line { from: c(0.75, 0.25), to: c(1.0, 0.0) },
        ],
        reversed: false,
    }
}

/// Which side of which point a deformed semicircle should pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PoleSide {
    /// passes below τ
    BelowTau,
    /// passes above -1/τ
    AboveNegInvTau,
    /// passes above τ (the semicircle pushed above τ)
    AboveTau,
}

pub const DEFORM_CLEARANCE: f64 = 0.05;
const DEFORM_MARGIN: f64 = 0.08;

/// Deformation of the semicircle passing on the requested side of τ (or -1/τ),
/// with clearance at least 0.05. Points far from the semicircle get the
/// semicircle itself.
pub fn pole_avoiding_contour(tau: UpperHalfPoint, which: PoleSide) -> Result<Contour> {
    for end in [-1.0, 1.0] {
        if (tau.z() - C64::new(end, 0.0)).norm() < DEFORM_CLEARANCE {
            return Err(Error::CannotDeform(format!("tau = {} is within {DEFORM_CLEARANCE} of a cusp", tau.z())));
        }
    }
    let (p, below) = match which {
        PoleSide::BelowTau => (tau.z(), true),
        PoleSide::AboveTau => (tau.z(), false),
        PoleSide::AboveNegInvTau => (tau.neg_inv().z(), false),
    };
    let rho = p.norm();
    if !(0.7..=1.3).contains(&rho) || p.re.abs() >= 1.0 {
        return Ok(semicircle());
    }
    let alpha = p.arg();
    let delta = (DEFORM_MARGIN / rho).min(1.0).asin();
    let (a1, a2) = (alpha + delta, alpha - delta);
    if a1 >= PI - 0.02 || a2 <= 0.02 {
        return Err(Error::CannotDeform(format!("point {p} is too close to the real axis")));
    }
    let r = if below { (rho - DEFORM_MARGIN).min(1.0) } else { (rho + DEFORM_MARGIN).max(1.0) };
    if r <= 0.1 {
        return Err(Error::CannotDeform(format!("no room below {p}")));
    }
    let o = C64::new(0.0, 0.0);
    let mut segs = vec![Segment::Arc { center: o, radius: 1.0, theta0: PI, theta1: a1 }];
    if (r - 1.0).abs() > 1e-15 {
        segs.push(Segment::Line { from: C64::from_polar(1.0, a1), to: C64::from_polar(r, a1) });
    }
    segs.push(Segment::Arc { center: o, radius: r, theta0: a1, theta1: a2 });
    if (r - 1.0).abs() > 1e-15 {
        segs.push(Segment::Line { from: C64::from_polar(r, a2), to: C64::from_polar(1.0, a2) });
    }
    segs.push(Segment::Arc { center: o, radius: 1.0, theta0: a2, theta1: 0.0 });
    Contour::new(segs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: C64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Knobs for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Panels are never split below this parameter-space length times the segment length.
    pub min_panel_length: f64,
    pub max_panels: usize,
    /// Initial panels per segment.
    pub initial_panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { min_panel_length: 1e-4, max_panels: 20_000, initial_panels: 4 }
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for k in 0..n {
        let mut t = (PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, t);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * t * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
            let dx = p1 / dp;
            t -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        x[k] = t;
        w[k] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    (x, w)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(16))
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static R: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    R.get_or_init(|| gauss_legendre(32))
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: C64,
    err: f64,
    splittable: bool,
}

// GL16 vs GL32 on [a, b] of the parameter.
fn eval_panel<G: Fn(f64) -> Result<C64>>(g: &G, a: f64, b: f64, min_len: f64) -> Result<Panel> {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    let mut i16 = C64::new(0.0, 0.0);
    for (x, w) in gl16().0.iter().zip(&gl16().1) {
        i16 += *w * g(m + h * x)?;
    }
    let mut i32_ = C64::new(0.0, 0.0);
    let mut mag = 0.0;
    for (x, w) in gl32().0.iter().zip(&gl32().1) {
        let v = g(m + h * x)?;
        i32_ += *w * v;
        mag += w * v.norm();
    }
    let (i16, i32_, mag) = (i16 * h, i32_ * h, mag * h);
    let err = (i32_ - i16).norm().max(50.0 * f64::EPSILON * mag);
    Ok(Panel { a, b, value: i32_, err, splittable: (b - a) / 2.0 >= min_len })
}

// Globally adaptive bisection over several parameter intervals.
fn adaptive<G: Fn(usize, f64) -> Result<C64>>(
    g: &G,
    pieces: usize,
    abs_tol: f64,
    cfg: &QuadratureConfig,
    min_len: &[f64],
) -> Result<QuadratureResult> {
    let mut panels: Vec<(usize, Panel)> = Vec::new();
    let mut nodes = 0usize;
    for s in 0..pieces {
        let k = cfg.initial_panels.max(1);
        for j in 0..k {
            let (a, b) = (j as f64 / k as f64, (j + 1) as f64 / k as f64);
            panels.push((s, eval_panel(&|t| g(s, t), a, b, min_len[s])?));
            nodes += 48;
        }
    }
    loop {
        let total: f64 = panels.iter().map(|p| p.1.err).sum();
        if total <= abs_tol {
            break;
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.1.splittable)
            .max_by(|x, y| x.1 .1.err.partial_cmp(&y.1 .1.err).unwrap())
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Err(Error::ToleranceUnreachable(format!(
                "error estimate {total:e} above {abs_tol:e} with every panel at the refinement floor"
            )));
        };
        if panels.len() >= cfg.max_panels {
            return Err(Error::ToleranceUnreachable(format!(
                "error estimate {total:e} above {abs_tol:e} after {} panels",
                panels.len()
            )));
        }
        let (s, p) = panels[i];
        let m = (p.a + p.b) / 2.0;
        let left = eval_panel(&|t| g(s, t), p.a, m, min_len[s])?;
        let right = eval_panel(&|t| g(s, t), m, p.b, min_len[s])?;
        nodes += 96;
        panels[i] = (s, left);
        panels.insert(i + 1, (s, right));
    }
    // fixed left-to-right reduction
    let mut value = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for (_, p) in &panels {
        value += p.value;
        err += p.err;
    }
    Ok(QuadratureResult { value, error_estimate: err, nodes_used: nodes })
}

fn finite_or_err(v: C64, z: C64) -> Result<C64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { re: z.re, im: z.im })
    }
}

/// Integrate `f` along `path` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(C64) -> C64>(f: F, path: &Contour, abs_tol: f64) -> Result<QuadratureResult> {
    integrate_with(f, path, abs_tol, &QuadratureConfig::default())
}

pub fn integrate_with<F: Fn(C64) -> C64>(
    f: F,
    path: &Contour,
    abs_tol: f64,
    cfg: &QuadratureConfig,
) -> Result<QuadratureResult> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidTolerance(format!("abs_tol must be positive, got {abs_tol}")));
    }
    let segs = &path.segments;
    let min_len: Vec<f64> = segs.iter().map(|s| cfg.min_panel_length / s.length().max(1e-300)).collect();
    let g = |s: usize, t: f64| {
        let z = segs[s].point(t);
        finite_or_err(f(z) * segs[s].derivative(t), z)
    };
    let mut r = adaptive(&g, segs.len(), abs_tol, cfg, &min_len)?;
    if path.reversed {
        r.value = -r.value;
    }
    Ok(r)
}

/// Integral of each segment separately (same orientation handling).
pub fn integrate_segments<F: Fn(C64) -> C64>(f: F, path: &Contour, abs_tol: f64) -> Result<Vec<QuadratureResult>> {
    path.segments
        .iter()
        .map(|s| {
            let c = Contour { segments: vec![*s], reversed: path.reversed };
            integrate(&f, &c, abs_tol / path.segments.len() as f64)
        })
        .collect()
}

/// Real integral ∫_a^b f(x) dx (value in the real part).
pub fn integrate_interval<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<QuadratureResult> {
    integrate_interval_complex(|x| C64::new(f(x), 0.0), a, b, abs_tol)
}

/// ∫_a^b f(x) dx for complex-valued f of a real variable.
pub fn integrate_interval_complex<F: Fn(f64) -> C64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<QuadratureResult> {
    if !(abs_tol > 0.0) {
        return Err(Error::InvalidTolerance(format!("abs_tol must be positive, got {abs_tol}")));
    }
    let cfg = QuadratureConfig { min_panel_length: 1e-9, max_panels: 20_000, initial_panels: 8 };
    let len = b - a;
    let g = |_: usize, t: f64| {
        let x = a + len * t;
        let v = f(x) * len;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteIntegrand { re: x, im: 0.0 })
        }
    };
    adaptive(&g, 1, abs_tol, &cfg, &[cfg.min_panel_length / len.abs().max(1e-300)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn gauss_legendre_weights() {
        let (x, w) = gauss_legendre(16);
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 2.0, epsilon = 1e-14);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert_abs_diff_eq!(m4, 0.4, epsilon = 1e-14);
    }

    #[test]
    fn semicircle_basics() {
        let s = semicircle();
        assert!((s.midpoint() - C64::i()).norm() < 1e-14);
        let one = integrate(|_| c(1.0, 0.0), &s, 1e-12).unwrap();
        assert!((one.value - 2.0).norm() < 1e-13);
        let z = integrate(|z| z, &s, 1e-12).unwrap();
        assert!(z.value.norm() < 1e-13);
        let z2 = integrate(|z| z * z, &s, 1e-12).unwrap();
        assert!((z2.value - 2.0 / 3.0).norm() < 1e-12);
        assert!(z2.nodes_used > 0 && z2.error_estimate >= 0.0);
    }

    #[test]
    fn polygon_and_lines() {
        let p = polygon_contour();
        assert!((integrate(|_| c(1.0, 0.0), &p, 1e-12).unwrap().value - 2.0).norm() < 1e-13);
        let e = |z: C64| (C64::i() * PI * z).exp();
        let a = integrate(e, &p, 1e-13).unwrap().value;
        let b = integrate(e, &semicircle(), 1e-13).unwrap().value;
        assert!((a - b).norm() < 1e-12);
        let l = horizontal_line(1.0, -1.0, 1.0).unwrap();
        assert!(integrate(e, &l, 1e-13).unwrap().value.norm() < 1e-12);
        assert_abs_diff_eq!(l.length(), 2.0, epsilon = 1e-15);
        assert!(horizontal_line(0.0, -1.0, 1.0).is_err());
    }

    #[test]
    fn circles_and_residues() {
        let p2 = UpperHalfPoint::new(0.0, 2.0).unwrap();
        let circ = circle_around(p2, 0.1).unwrap();
        let two_pi_i = c(0.0, 2.0 * PI);
        let r = integrate(|z| 1.0 / (z - c(0.0, 2.0)), &circ, 1e-13).unwrap();
        assert!((r.value - two_pi_i).norm() < 1e-10);
        assert!(integrate(|_| c(1.0, 0.0), &circ, 1e-13).unwrap().value.norm() < 1e-13);
        let r = integrate(|z| z.exp() / (z - c(0.0, 2.0)), &circ, 1e-13).unwrap();
        assert!((r.value - two_pi_i * c(0.0, 2.0).exp()).norm() < 1e-9);
        let i = UpperHalfPoint::new(0.0, 1.0).unwrap();
        let r = integrate(|z| 1.0 / (z - C64::i()), &circle_around(i, 0.2).unwrap(), 1e-13).unwrap();
        assert!((r.value - two_pi_i).norm() < 1e-11);
        assert!(circle_around(i, 1.0).is_err());
    }

    #[test]
    fn reversal_negates_exactly() {
        let s = semicircle();
        let f = |z: C64| (z * 1.7).sin() * z;
        let a = integrate(f, &s, 1e-12).unwrap().value;
        let b = integrate(f, &s.reversed(), 1e-12).unwrap().value;
        assert_eq!(a, -b);
        assert_eq!(s.reversed().start(), s.end());
    }

    #[test]
    fn additivity() {
        let p = low_path();
        let f = |z: C64| (C64::i() * 2.3 * z).exp() * z;
        let whole = integrate(f, &p, 1e-13).unwrap().value;
        let parts: C64 = integrate_segments(f, &p, 1e-13).unwrap().iter().map(|r| r.value).sum();
        assert!((whole - parts).norm() < 1e-12);
    }

    #[test]
    fn deformation_contract() {
        let tau = UpperHalfPoint::from_complex(C64::from_polar(0.95, PI / 2.0 + 0.3)).unwrap();
        for side in [PoleSide::BelowTau, PoleSide::AboveTau, PoleSide::AboveNegInvTau] {
            let c = pole_avoiding_contour(tau, side).unwrap();
            let target = if side == PoleSide::AboveNegInvTau { tau.neg_inv().z() } else { tau.z() };
            assert!(c.min_distance_to(target) >= DEFORM_CLEARANCE);
            assert!((c.start() - C64::new(-1.0, 0.0)).norm() < 1e-14);
            assert!((c.end() - C64::new(1.0, 0.0)).norm() < 1e-14);
        }
        let far = UpperHalfPoint::new(0.0, 3.0).unwrap();
        assert_eq!(pole_avoiding_contour(far, PoleSide::BelowTau).unwrap(), semicircle());
        let cusp = UpperHalfPoint::new(0.98, 0.02).unwrap();
        assert!(matches!(pole_avoiding_contour(cusp, PoleSide::BelowTau), Err(Error::CannotDeform(_))));
    }

    #[test]
    fn deformation_sides_differ_by_residue() {
        let tau = UpperHalfPoint::from_complex(C64::from_polar(0.96, 1.2)).unwrap();
        let f = |z: C64| 1.0 / (z - tau.z());
        let below = integrate(f, &pole_avoiding_contour(tau, PoleSide::BelowTau).unwrap(), 1e-12).unwrap();
        let above = integrate(f, &pole_avoiding_contour(tau, PoleSide::AboveTau).unwrap(), 1e-12).unwrap();
        assert!((below.value - above.value - c(0.0, 2.0 * PI)).norm() < 1e-10);
    }

    #[test]
    fn nonfinite_is_reported() {
        let r = integrate(|_| c(f64::NAN, 0.0), &semicircle(), 1e-10);
        assert!(matches!(r, Err(Error::NonFiniteIntegrand { .. })));
    }

    #[test]
    fn real_interval() {
        let r = integrate_interval(|x| (-x * x).exp(), 0.0, 8.0, 1e-14).unwrap();
        assert_abs_diff_eq!(r.value.re, PI.sqrt() / 2.0, epsilon = 1e-13);
    }
}
