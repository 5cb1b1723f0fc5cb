//! The kernels K and K̂, checks of their transformation laws and residues,
//! and their Fourier coefficients φₙ in τ.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::contours::{circle_around, horizontal_line, integrate};
use crate::error::{Error, Result};
use crate::modular::{gamma_theta_orbit_classified, sqrt_neg_iz, Thetas, UpperHalfPoint, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KernelKind {
    Plain,
    Hat,
}

impl KernelKind {
    // -1 for K, +1 for K̂
    fn sign(self) -> f64 {
        match self {
            KernelKind::Plain => -1.0,
            KernelKind::Hat => 1.0,
        }
    }

    pub fn other(self) -> KernelKind {
        match self {
            KernelKind::Plain => KernelKind::Hat,
            KernelKind::Hat => KernelKind::Plain,
        }
    }
}

pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-10;

// θ and h at a point, through the reduced theta evaluation
#[derive(Clone, Copy)]
struct ThetaH {
    theta: C64,
    h: C64,
}

fn theta_h(z: C64) -> ThetaH {
    let t = Thetas::at(z);
    ThetaH { theta: t.t3, h: 1.0 - 2.0 * t.lambda() }
}

/// h(τ) ∓ h(z), the denominator (up to the factor 4) of the h-form.
pub fn kernel_denominator(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint) -> C64 {
    theta_h(tau.z()).h + kind.sign() * theta_h(z.z()).h
}

fn h_form(kind: KernelKind, t: ThetaH, z: ThetaH) -> (C64, C64) {
    let s = kind.sign();
    let num = t.theta * z.theta * z.theta * z.theta * (1.0 + s * t.h * z.h);
    let den = 4.0 * (t.h + s * z.h);
    (num, den)
}

/// K(τ, z) or K̂(τ, z) from the h-form, with the default denominator floor.
pub fn kernel(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint) -> Result<C64> {
    kernel_with_floor(kind, tau, z, DEFAULT_DENOMINATOR_FLOOR)
}

pub fn kernel_with_floor(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint, floor: f64) -> Result<C64> {
    let (num, den) = h_form(kind, theta_h(tau.z()), theta_h(z.z()));
    if den.norm() / 4.0 < floor {
        return Err(Error::NearPole { denominator: den.norm() / 4.0, floor });
    }
    Ok(num / den)
}

/// Kernel against a fixed τ, with θ(τ), h(τ) computed once.
#[derive(Clone, Copy)]
pub struct FixedTauKernel {
    kind: KernelKind,
    tau: ThetaH,
}

impl FixedTauKernel {
    pub fn new(kind: KernelKind, tau: UpperHalfPoint) -> Self {
        Self { kind, tau: theta_h(tau.z()) }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let w = theta_h(z);
        let (num, den) = h_form(self.kind, self.tau, w);
        let v = num / den;
        // at the cusps θ(z)³ underflows while h(z) overflows; the kernel vanishes there
        if !(v.re.is_finite() && v.im.is_finite()) && w.theta.norm() < 1e-60 {
            return C64::new(0.0, 0.0);
        }
        v
    }
}

/// The J-form: θ(τ)θ(z)³ (J(z)h(τ) ± J(τ)h(z)) / (4(J(z) − J(τ))).
pub fn kernel_j_form(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint) -> Result<C64> {
    let (t, w) = (Thetas::at(tau.z()), Thetas::at(z.z()));
    let (lt, lz) = (t.lambda(), w.lambda());
    let (jt, jz) = (lt * (1.0 - lt) / 16.0, lz * (1.0 - lz) / 16.0);
    let (ht, hz) = (1.0 - 2.0 * lt, 1.0 - 2.0 * lz);
    let num = match kind {
        KernelKind::Plain => jz * ht + jt * hz,
        KernelKind::Hat => jz * ht - jt * hz,
    };
    let den = 4.0 * (jz - jt);
    if den.norm() / 4.0 < DEFAULT_DENOMINATOR_FLOOR {
        return Err(Error::NearPole { denominator: den.norm() / 4.0, floor: DEFAULT_DENOMINATOR_FLOOR });
    }
    Ok(t.t3 * w.t3.powu(3) * num / den)
}

/// Residuals of K(τ, z+2) = K(τ, z) and K(τ, −1/z) = (−iz)^{3/2} K̂(τ, z)
/// (and the same with K and K̂ swapped for `Hat`).
pub fn verify_z_transformations(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint) -> Result<(f64, f64)> {
    let k = kernel(kind, tau, z)?;
    let r1 = (kernel(kind, tau, z.shift(2.0))? - k).norm();
    let rhs = sqrt_neg_iz(z).powu(3) * kernel(kind.other(), tau, z)?;
    let r2 = (kernel(kind, tau, z.neg_inv())? - rhs).norm();
    Ok((r1, r2))
}

/// Residuals of K(τ+2, z) = K(τ, z) and K(−1/τ, z) = −(−iτ)^{1/2} K̂(τ, z)
/// (and the same with K and K̂ swapped for `Hat`).
pub fn verify_tau_transformations(kind: KernelKind, tau: UpperHalfPoint, z: UpperHalfPoint) -> Result<(f64, f64)> {
    let k = kernel(kind, tau, z)?;
    let r1 = (kernel(kind, tau.shift(2.0), z)? - k).norm();
    let rhs = -sqrt_neg_iz(tau) * kernel(kind.other(), tau, z)?;
    let r3 = (kernel(kind, tau.neg_inv(), z)? - rhs).norm();
    Ok((r1, r3))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueReport {
    pub location: UpperHalfPoint,
    pub residue: C64,
    pub circle_radius: f64,
    pub error_estimate: f64,
}

/// (1/2πi) ∮ kernel(τ, z) dz over a small circle around `location`.
pub fn residue_at(kind: KernelKind, tau: UpperHalfPoint, location: UpperHalfPoint, radius: f64) -> Result<ResidueReport> {
    let circ = circle_around(location, radius)?;
    let k = FixedTauKernel::new(kind, tau);
    let q = integrate(|z| k.eval(z), &circ, 1e-12)?;
    let two_pi_i = C64::new(0.0, 2.0 * PI);
    Ok(ResidueReport {
        location,
        residue: q.value / two_pi_i,
        circle_radius: radius,
        error_estimate: q.error_estimate / (2.0 * PI),
    })
}

/// Orbit points of τ where `kind` is expected to have a pole in z: the
/// Γ(2)-orbit of τ (even number of inversions) for K and the Γ(2)-orbit of
/// −1/τ (odd number) for K̂.
pub fn expected_poles(kind: KernelKind, tau: UpperHalfPoint, depth: usize) -> Vec<UpperHalfPoint> {
    let want_odd = kind == KernelKind::Hat;
    gamma_theta_orbit_classified(tau, depth)
        .into_iter()
        .filter(|o| o.odd_inversions == want_odd)
        .map(|o| o.point)
        .collect()
}

/// Largest imaginary part over the SL₂(ℤ)-orbit of z; an upper bound for the
/// height of every pole of τ ↦ K(τ, z).
pub fn max_orbit_height(z: UpperHalfPoint) -> f64 {
    let mut w = z.z();
    for _ in 0..1000 {
        w -= w.re.round();
        if w.norm_sqr() >= 1.0 {
            break;
        }
        w = -1.0 / w;
    }
    w.im
}

pub const DEFAULT_LINE_HEIGHT: f64 = 2.5;

/// φₙ(z) = (1/2) ∫_{−1+iH}^{1+iH} K(τ, z) e^{−nπiτ} dτ by quadrature.
///
/// The factor e^{nπH} is pulled out of the integrand and the requested
/// tolerance is scaled by e^{−nπH}; the scaled tolerance is floored at the
/// roundoff level of the integrand.
pub fn fourier_coefficient(kind: KernelKind, n: u32, z: UpperHalfPoint, line_height: f64) -> Result<C64> {
    formal_fourier_coefficient(kind, n as i64, z, line_height, 1e-11).map(|q| q.0)
}

/// Same integral for any integer index; returns (value, error estimate).
pub fn formal_fourier_coefficient(
    kind: KernelKind,
    n: i64,
    z: UpperHalfPoint,
    line_height: f64,
    abs_tol: f64,
) -> Result<(C64, f64)> {
    if !(line_height > 1.0) {
        return Err(Error::InvalidArgument(format!("line height {line_height} does not keep the line in region S")));
    }
    let top = max_orbit_height(z);
    if line_height < top + 0.05 {
        return Err(Error::NearPole { denominator: line_height - top, floor: 0.05 });
    }
    let line = horizontal_line(line_height, -1.0, 1.0)?;
    let k = FixedTauKernelZ::new(kind, z);
    let scale = (n as f64 * PI * line_height).exp();
    let sample_max = (0..16)
        .map(|j| k.eval(C64::new(-1.0 + j as f64 / 8.0, line_height)).norm())
        .fold(0.0, f64::max);
    let tol = (abs_tol / scale).max(200.0 * f64::EPSILON * sample_max);
    let q = integrate(
        |tau| k.eval(tau) * C64::from_polar(1.0, -(n as f64) * PI * tau.re),
        &line,
        tol,
    )?;
    Ok((q.value * scale / 2.0, q.error_estimate * scale / 2.0))
}

// Kernel with z fixed, τ varying.
struct FixedTauKernelZ {
    kind: KernelKind,
    z: ThetaH,
}

impl FixedTauKernelZ {
    fn new(kind: KernelKind, z: UpperHalfPoint) -> Self {
        Self { kind, z: theta_h(z.z()) }
    }

    fn eval(&self, tau: C64) -> C64 {
        let (num, den) = h_form(self.kind, theta_h(tau), self.z);
        num / den
    }
}

/// Largest series length supported by the exact integer tables.
pub const MAX_SERIES_LEN: usize = 200;

/// q-expansion coefficients of θ(q) = Σ q^{n²}.
pub fn theta_q_coefficients(len: usize) -> Vec<i128> {
    let mut c = vec![0i128; len];
    let mut n = 0usize;
    while n * n < len {
        c[n * n] += if n == 0 { 1 } else { 2 };
        n += 1;
    }
    c
}

fn mul_trunc(a: &[i128], b: &[i128], len: usize) -> Vec<i128> {
    let mut out = vec![0i128; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// q-expansion coefficients of λ = θ₂⁴/θ₃⁴ (integers; λ = 16q − 128q² + …).
pub fn lambda_q_coefficients(len: usize) -> Vec<i128> {
    assert!(len <= MAX_SERIES_LEN + 1, "series length {len} exceeds the exact table");
    // θ₂⁴ = 16 q (Σ_{n≥0} q^{n(n+1)})⁴
    let mut s = vec![0i128; len];
    let mut n = 0usize;
    while n * (n + 1) < len {
        s[n * (n + 1)] += 1;
        n += 1;
    }
    let s2 = mul_trunc(&s, &s, len);
    let s4 = mul_trunc(&s2, &s2, len);
    let mut num = vec![0i128; len];
    for k in 1..len {
        num[k] = 16 * s4[k - 1];
    }
    let t = theta_q_coefficients(len);
    let t2 = mul_trunc(&t, &t, len);
    let t4 = mul_trunc(&t2, &t2, len);
    // num / t4 with t4[0] = 1
    let mut out = vec![0i128; len];
    for k in 0..len {
        let mut v = num[k];
        for j in 1..=k {
            v -= t4[j] * out[k - j];
        }
        out[k] = v;
    }
    out
}

struct SeriesTables {
    theta: Vec<f64>,
    h: Vec<f64>,
}

fn tables() -> &'static SeriesTables {
    static T: OnceLock<SeriesTables> = OnceLock::new();
    T.get_or_init(|| {
        let len = MAX_SERIES_LEN + 1;
        let l = lambda_q_coefficients(len);
        let mut h: Vec<f64> = l.iter().map(|&x| -2.0 * x as f64).collect();
        h[0] = 1.0;
        SeriesTables { theta: theta_q_coefficients(len).iter().map(|&x| x as f64).collect(), h }
    })
}

/// φ₀(z), …, φ_{max_n}(z) from the exact q-expansion of K in τ.
///
/// With u = h(z), K(τ, z) = θ(z)³/4 · θ(q)·(1 − h(q)u)/(h(q) − u) where
/// q = e^{πiτ}; power-series division gives every coefficient at once.
/// For K̂ the signs in front of u flip.
pub fn fourier_coefficients_series(kind: KernelKind, z: UpperHalfPoint, max_n: usize) -> Result<Vec<C64>> {
    Ok(coefficients_at(kind, z.z(), max_n)?.0)
}

/// Coefficients together with θ(z)³/4 separated out: φₙ = pref · cₙ.
pub(crate) fn coefficients_at(kind: KernelKind, z: C64, max_n: usize) -> Result<(Vec<C64>, C64)> {
    if max_n > MAX_SERIES_LEN {
        return Err(Error::InvalidArgument(format!("max_n {max_n} exceeds {MAX_SERIES_LEN}")));
    }
    let tb = tables();
    let w = theta_h(z);
    let (u, s) = (w.h, kind.sign());
    let d0 = tb.h[0] + s * u;
    if d0.norm() < DEFAULT_DENOMINATOR_FLOOR {
        return Err(Error::NearPole { denominator: d0.norm(), floor: DEFAULT_DENOMINATOR_FLOOR });
    }
    let len = max_n + 1;
    let mut r = vec![C64::new(0.0, 0.0); len];
    for n in 0..len {
        let mut v = s * tb.h[n] * u;
        if n == 0 {
            v += 1.0;
        }
        for k in 1..=n {
            v -= tb.h[k] * r[n - k];
        }
        r[n] = v / d0;
    }
    let pref = w.theta.powu(3) / 4.0;
    let mut c = vec![C64::new(0.0, 0.0); len];
    for n in 0..len {
        let mut v = C64::new(0.0, 0.0);
        for k in 0..=n {
            if tb.theta[k] != 0.0 {
                v += tb.theta[k] * r[n - k];
            }
        }
        c[n] = v * pref;
    }
    Ok((c, pref))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthSample {
    pub tau_im: f64,
    pub magnitude: f64,
}

/// |K(τ, z)| along τ = re + it for decreasing t; recorded, never asserted.
pub fn growth_profile(kind: KernelKind, z: UpperHalfPoint, tau_re: f64, heights: &[f64]) -> Vec<GrowthSample> {
    let k = FixedTauKernelZ::new(kind, z);
    heights
        .iter()
        .map(|&t| GrowthSample { tau_im: t, magnitude: k.eval(C64::new(tau_re, t)).norm() })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{h_function, theta};

    fn p(re: f64, im: f64) -> UpperHalfPoint {
        UpperHalfPoint::new(re, im).unwrap()
    }

    #[test]
    fn lambda_series_prefix() {
        let l = lambda_q_coefficients(8);
        assert_eq!(l, vec![0, 16, -128, 704, -3072, 11488, -38400, 117632]);
        assert_eq!(theta_q_coefficients(10), vec![1, 2, 0, 0, 2, 0, 0, 0, 0, 2]);
        // no overflow at the table length
        let big = lambda_q_coefficients(MAX_SERIES_LEN + 1);
        assert!(big[MAX_SERIES_LEN] != 0);
    }

    #[test]
    fn kernel_at_i_2i() {
        let (i, t2) = (p(0.0, 1.0), p(0.0, 2.0));
        let expect = -theta(i) * theta(t2).powu(3) / (4.0 * h_function(t2));
        let k = kernel(KernelKind::Plain, i, t2).unwrap();
        assert!((k - expect).norm() < 1e-13);
    }

    #[test]
    fn h_and_j_forms_agree() {
        for kind in [KernelKind::Plain, KernelKind::Hat] {
            for &(t, z) in &[((0.3, 1.5), (0.1, 0.8)), ((0.2, 1.4), (0.5, 0.9)), ((-0.7, 0.6), (0.4, 1.7))] {
                let (t, z) = (p(t.0, t.1), p(z.0, z.1));
                let a = kernel(kind, t, z).unwrap();
                let b = kernel_j_form(kind, t, z).unwrap();
                assert!((a - b).norm() <= 1e-9 * a.norm());
            }
        }
    }

    #[test]
    fn tau_laws() {
        let (r1, _) = verify_tau_transformations(KernelKind::Plain, p(0.3, 1.5), p(0.1, 0.8)).unwrap();
        assert!(r1 < 1e-10);
        let (_, r3) = verify_tau_transformations(KernelKind::Plain, p(0.2, 1.4), p(0.5, 0.9)).unwrap();
        assert!(r3 < 1e-9);
    }

    #[test]
    fn z_laws() {
        for kind in [KernelKind::Plain, KernelKind::Hat] {
            let (a, b) = verify_z_transformations(kind, p(0.0, 1.7), p(0.4, 1.1)).unwrap();
            assert!(a < 1e-9 && b < 1e-9, "{kind:?}: {a} {b}");
        }
        let t = p(0.0, 2.3);
        let d = kernel(KernelKind::Plain, t, p(0.0, 1.0)).unwrap() - kernel(KernelKind::Hat, t, p(0.0, 1.0)).unwrap();
        assert!(d.norm() < 1e-10);
    }

    #[test]
    fn residues() {
        let tau = p(0.0, 1.3);
        let want = 1.0 / C64::new(0.0, 2.0 * PI);
        let r = residue_at(KernelKind::Plain, tau, tau, 0.1).unwrap();
        assert!((r.residue - want).norm() < 1e-8);
        let r = residue_at(KernelKind::Plain, tau, tau.neg_inv(), 0.05).unwrap();
        assert!(r.residue.norm() < 1e-8);
        let r = residue_at(KernelKind::Hat, tau, tau, 0.1).unwrap();
        assert!(r.residue.norm() < 1e-8);
    }

    #[test]
    fn near_pole_is_detected() {
        let tau = p(0.1, 1.3);
        assert!(matches!(kernel(KernelKind::Plain, tau, tau), Err(Error::NearPole { .. })));
        assert!(matches!(kernel(KernelKind::Hat, tau, tau.neg_inv()), Err(Error::NearPole { .. })));
    }

    #[test]
    fn quadrature_matches_series() {
        let z = p(0.15, 0.9);
        for kind in [KernelKind::Plain, KernelKind::Hat] {
            let s = fourier_coefficients_series(kind, z, 3).unwrap();
            for n in 0..=3u32 {
                let q = fourier_coefficient(kind, n, z, DEFAULT_LINE_HEIGHT).unwrap();
                assert!((q - s[n as usize]).norm() < 1e-7 * (1.0 + s[n as usize].norm()), "{kind:?} {n}: {q} vs {}", s[n as usize]);
            }
        }
    }

    #[test]
    fn coefficient_line_independence_and_negative_index() {
        let z = p(0.0, 1.1);
        let a = fourier_coefficient(KernelKind::Plain, 0, z, 2.5).unwrap();
        let b = fourier_coefficient(KernelKind::Plain, 0, z, 3.5).unwrap();
        assert!((a - b).norm() < 1e-9);
        for n in [-1i64, -2] {
            let (v, _) = formal_fourier_coefficient(KernelKind::Plain, n, z, 2.5, 1e-11).unwrap();
            assert!(v.norm() < 1e-8);
        }
    }

    #[test]
    fn series_resums_to_kernel() {
        let z = p(0.3, 0.8);
        let tau = p(0.2, 2.2);
        let phi = fourier_coefficients_series(KernelKind::Plain, z, 40).unwrap();
        let q = (C64::i() * PI * tau.z()).exp();
        let sum: C64 = phi.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * q + c);
        let k = kernel(KernelKind::Plain, tau, z).unwrap();
        assert!((sum - k).norm() < 1e-10 * (1.0 + k.norm()));
    }

    #[test]
    fn pole_classification() {
        let tau = p(0.2, 1.4);
        for kind in [KernelKind::Plain, KernelKind::Hat] {
            for w in expected_poles(kind, tau, 3) {
                assert!(kernel_denominator(kind, tau, w).norm() < 1e-8);
            }
        }
    }
}
