//! The Fourier interpolation basis aₙ, âₙ, the generating functions F, F̂,
//! and the truncated interpolation formula
//! f(x) = Σ f(√n) aₙ(x) + Σ f̂(√n) âₙ(x).
//!
//! aₙ(x) = ∫ φₙ(z) e^{πizx²} dz over a path from −1 to 1, and
//! âₙ(x) = −∫ φₙ(z) (i/z)^{−3/2} z^{−2} e^{−πix²/z} dz over the same path
//! (the substitution z ↦ −1/z in the integral for âₙ turns φ̂ₙ into φₙ).
//! φₙ comes from the exact q-expansion of the kernel, see
//! [`crate::kernels::fourier_coefficients_series`].

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::{Arc, Mutex, OnceLock};

use crate::contours::{
    gauss_legendre, integrate, low_path, pole_avoiding_contour, polygon_contour, semicircle, Contour, PoleSide,
    Segment,
};
use crate::error::{Error, Result};
use crate::fourier::TransformPair;
use crate::kernels::{coefficients_at, FixedTauKernel, KernelKind};
use crate::modular::{in_region_s, sqrt_neg_iz, Thetas, UpperHalfPoint, C64};

/// Largest x for which the default tolerances are expected to hold.
pub const X_CAP: f64 = 3.0;
/// Default truncation of the interpolation sums.
pub const DEFAULT_TRUNCATION: usize = 40;

/// Number of ways to write m as an ordered sum of three squares.
pub fn theta_cubed_coefficients(max_m: usize) -> Vec<u64> {
    let mut c = vec![0u64; max_m + 1];
    let r = (max_m as f64).sqrt() as i64 + 1;
    for a in -r..=r {
        for b in -r..=r {
            for d in -r..=r {
                let m = (a * a + b * b + d * d) as usize;
                if m <= max_m {
                    c[m] += 1;
                }
            }
        }
    }
    c
}

fn a0_integrand(x: f64) -> impl Fn(C64) -> C64 {
    move |z: C64| {
        let t = Thetas::at(z).t3;
        t * t * t * (C64::i() * PI * z * x * x).exp() / 4.0
    }
}

/// a₀(x) = (1/4) ∫ θ(z)³ e^{πizx²} dz over the given path; complex value.
pub fn a0_on(path: &Contour, x: f64, abs_tol: f64) -> Result<C64> {
    Ok(integrate(a0_integrand(x), path, abs_tol)?.value)
}

/// a₀(x) on the semicircle for x ≤ 1.5 and on the polygon above that.
pub fn a0(x: f64, abs_tol: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::InvalidArgument(format!("x must be nonnegative, got {x}")));
    }
    let path = if x <= 1.5 { semicircle() } else { polygon_contour() };
    let v = a0_on(&path, x, abs_tol)?;
    check_real(v, abs_tol.max(1e-8), 0, x)?;
    Ok(v.re)
}

fn check_real(v: C64, tol: f64, n: usize, x: f64) -> Result<()> {
    if v.im.abs() > tol {
        return Err(Error::ToleranceUnreachable(format!(
            "basis value n={n}, x={x} has imaginary part {:e}",
            v.im
        )));
    }
    Ok(())
}

// One quadrature node on the basis path.
#[derive(Clone)]
struct Node {
    z: C64,
    w: C64,
    // −(i/z)^{−3/2} z^{−2}
    hat_factor: C64,
    phi: Vec<C64>,
}

/// Value of one basis function with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisValue {
    pub value: f64,
    pub imag: f64,
    pub error_estimate: f64,
}

/// Precomputed φₙ on two nested quadrature rules (orders 32 and 16 on the
/// same panels) along the low path; x enters only through the exponential.
pub struct BasisEngine {
    max_n: usize,
    hi: Vec<Node>,
    lo: Vec<Node>,
}

// panel breakpoints in the segment parameter; the end segments are graded
// towards the cusps and cut at 2% of their length, where |φₙ| < 1e−30
fn panel_breaks(segment_index: usize) -> Vec<f64> {
    let graded = || {
        let mut v = vec![0.02];
        let mut t = 0.04;
        while t < 0.5 {
            v.push(t);
            t *= 2.0;
        }
        v.extend([0.5, 0.75, 1.0]);
        v
    };
    match segment_index {
        0 => graded(),
        4 => graded().iter().rev().map(|t| 1.0 - t).collect(),
        2 => (0..=16).map(|k| k as f64 / 16.0).collect(),
        _ => (0..=6).map(|k| k as f64 / 6.0).collect(),
    }
}

fn build_nodes(path: &Contour, order: usize, kind: KernelKind, max_n: usize) -> Result<Vec<Node>> {
    let (gx, gw) = gauss_legendre(order);
    let mut out = Vec::new();
    for (si, seg) in path.segments().iter().enumerate() {
        let breaks = panel_breaks(si);
        for p in breaks.windows(2) {
            let (a, b) = (p[0], p[1]);
            let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
            for (x, w) in gx.iter().zip(&gw) {
                let t = m + h * x;
                out.push(make_node(seg, t, w * h, kind, max_n)?);
            }
        }
    }
    Ok(out)
}

fn make_node(seg: &Segment, t: f64, w: f64, kind: KernelKind, max_n: usize) -> Result<Node> {
    let z = seg.point(t);
    let (mut phi, pref) = coefficients_at(kind, z, max_n)?;
    if phi.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        // only acceptable where θ(z)³ has underflowed next to a cusp
        if pref.norm() < 1e-200 {
            phi.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        } else {
            return Err(Error::NonFiniteIntegrand { re: z.re, im: z.im });
        }
    }
    let hat_factor = -(C64::i() / z).powf(-1.5) / (z * z);
    Ok(Node { z, w: w * seg.derivative(t), hat_factor, phi })
}

impl BasisEngine {
    pub fn new(max_n: usize) -> Result<Self> {
        let path = low_path();
        let hi = build_nodes(&path, 32, KernelKind::Plain, max_n)?;
        let lo = build_nodes(&path, 16, KernelKind::Plain, max_n)?;
        let engine = Self { max_n, hi, lo };
        engine.check_against_semicircle()?;
        Ok(engine)
    }

    pub fn max_n(&self) -> usize {
        self.max_n
    }

    // the low path replaces the semicircle; both must give the same a₀
    fn check_against_semicircle(&self) -> Result<()> {
        for x in [0.0, 0.7, 1.3] {
            let direct = a0_on(&semicircle(), x, 1e-13)?;
            let here = self.raw(0, false, x, &self.hi);
            if (direct - here).norm() > 1e-9 {
                return Err(Error::ToleranceUnreachable(format!(
                    "contour deformation check failed at x={x}: {direct} vs {here}"
                )));
            }
        }
        Ok(())
    }

    fn raw(&self, n: usize, hat: bool, x: f64, nodes: &[Node]) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        for nd in nodes {
            acc += nd.w * nd.phi[n] * kernel_factor(nd, hat, x);
        }
        acc
    }

    /// aₙ(x) (or âₙ(x) when `hat`), with error estimate from the two rules
    /// plus a roundoff term proportional to Σ|w φₙ e|.
    pub fn value(&self, n: usize, hat: bool, x: f64) -> Result<BasisValue> {
        if n > self.max_n {
            return Err(Error::IndexOutOfRange { index: n, len: self.max_n + 1 });
        }
        if !(x >= 0.0) {
            return Err(Error::InvalidArgument(format!("x must be nonnegative, got {x}")));
        }
        let hi = self.raw(n, hat, x, &self.hi);
        let lo = self.raw(n, hat, x, &self.lo);
        let mass: f64 = self.hi.iter().map(|nd| (nd.w * nd.phi[n] * kernel_factor(nd, hat, x)).norm()).sum();
        let err = (hi - lo).norm() + 64.0 * f64::EPSILON * mass;
        Ok(BasisValue { value: hi.re, imag: hi.im, error_estimate: err })
    }

    /// Values for n = 0..=max_n at one x, as (a, â) pairs.
    pub fn row_at(&self, x: f64) -> Result<Vec<(BasisValue, BasisValue)>> {
        (0..=self.max_n).map(|n| Ok((self.value(n, false, x)?, self.value(n, true, x)?))).collect()
    }
}

fn kernel_factor(nd: &Node, hat: bool, x: f64) -> C64 {
    let x2 = x * x;
    if hat {
        nd.hat_factor * (-C64::i() * PI * x2 / nd.z).exp()
    } else {
        (C64::i() * PI * nd.z * x2).exp()
    }
}

/// Engine with max_n = 80 shared across calls.
pub fn shared_engine() -> Result<Arc<BasisEngine>> {
    static E: OnceLock<Mutex<Option<Arc<BasisEngine>>>> = OnceLock::new();
    let cell = E.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap();
    if let Some(e) = guard.as_ref() {
        return Ok(e.clone());
    }
    let e = Arc::new(BasisEngine::new(80)?);
    *guard = Some(e.clone());
    Ok(e)
}

/// aₙ(x) or âₙ(x). Fails if the error estimate exceeds abs_tol.
pub fn basis_value(n: usize, hat: bool, x: f64, abs_tol: f64) -> Result<f64> {
    let e = shared_engine()?;
    let v = e.value(n, hat, x)?;
    if v.error_estimate > abs_tol {
        return Err(Error::ToleranceUnreachable(format!(
            "basis value n={n}, x={x}: error estimate {:e} above {abs_tol:e}",
            v.error_estimate
        )));
    }
    check_real(C64::new(v.value, v.imag), abs_tol.max(1e-8), n, x)?;
    Ok(v.value)
}

/// F(τ, x) = ∫ K(τ, z) e^{πizx²} dz over the semicircle, for τ in region S
/// (F̂ with the hat kernel).
pub fn generating_f(hat: bool, tau: UpperHalfPoint, x: f64, abs_tol: f64) -> Result<C64> {
    if !in_region_s(tau) {
        return Err(Error::OutsideRegionS { re: tau.re(), im: tau.im() });
    }
    let kind = if hat { KernelKind::Hat } else { KernelKind::Plain };
    let k = FixedTauKernel::new(kind, tau);
    let f = |z: C64| k.eval(z) * (C64::i() * PI * z * x * x).exp();
    Ok(integrate(f, &semicircle(), abs_tol)?.value)
}

/// Σ_{n≤N} aₙ(x) e^{nπiτ} (or with âₙ), valid for every τ in ℍ.
pub fn basis_series(engine: &BasisEngine, hat: bool, tau: C64, x: f64, truncation: usize) -> Result<C64> {
    let q = (C64::i() * PI * tau).exp();
    let mut acc = C64::new(0.0, 0.0);
    let mut qn = C64::new(1.0, 0.0);
    for n in 0..=truncation.min(engine.max_n()) {
        acc += engine.value(n, hat, x)?.value * qn;
        qn *= q;
    }
    Ok(acc)
}

/// |F(τ,x) + (−iτ)^{−1/2} F̂(−1/τ,x) − e^{πiτx²}| with F direct and F̂ through
/// the basis sum.
pub fn gaussian_functional_equation_residual(
    engine: &BasisEngine,
    tau: UpperHalfPoint,
    x: f64,
    truncation: usize,
) -> Result<f64> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be positive".into()));
    }
    let f = generating_f(false, tau, x, 1e-12)?;
    let fh = basis_series(engine, true, tau.neg_inv().z(), x, truncation)?;
    let rhs = (C64::i() * PI * tau.z() * x * x).exp();
    Ok((f + fh / sqrt_neg_iz(tau) - rhs).norm())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueDemonstration {
    pub tau: UpperHalfPoint,
    pub x: f64,
    pub below: C64,
    pub above: C64,
    pub expected: C64,
    pub residual: f64,
}

/// ∫ over the path below τ minus ∫ over the path above τ of K(τ,z)e^{πizx²},
/// compared with e^{πiτx²} = 2πi · Res_{z=τ}.
pub fn residue_demonstration(tau: UpperHalfPoint, x: f64) -> Result<ResidueDemonstration> {
    let k = FixedTauKernel::new(KernelKind::Plain, tau);
    let f = |z: C64| k.eval(z) * (C64::i() * PI * z * x * x).exp();
    let below = integrate(f, &pole_avoiding_contour(tau, PoleSide::BelowTau)?, 1e-11)?.value;
    let above = integrate(f, &pole_avoiding_contour(tau, PoleSide::AboveTau)?, 1e-11)?.value;
    let expected = (C64::i() * PI * tau.z() * x * x).exp();
    Ok(ResidueDemonstration { tau, x, below, above, expected, residual: (below - above - expected).norm() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionReport {
    pub x: f64,
    pub truncation_n: usize,
    pub reconstructed: f64,
    pub reference: f64,
    pub abs_error: f64,
    pub term_tail_bound: f64,
}

/// Polynomial envelope C (n+1)^p for max_x |aₙ(x)|, fitted over n ≤ 12 on [0, 3].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeminormEnvelope {
    pub c: f64,
    pub p: f64,
}

impl SeminormEnvelope {
    pub fn fit(engine: &BasisEngine) -> Result<Self> {
        let top = engine.max_n().min(12);
        let mut pts = Vec::new();
        for n in 0..=top {
            let mut m: f64 = 0.0;
            for k in 0..=30 {
                let x = k as f64 * 0.1;
                m = m.max(engine.value(n, false, x)?.value.abs()).max(engine.value(n, true, x)?.value.abs());
            }
            pts.push((((n + 1) as f64).ln(), m.max(1e-300).ln()));
        }
        let k = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
        let (mx, my) = (sx / k, sy / k);
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let p = if sxx > 0.0 { sxy / sxx } else { 0.0 };
        // shift up so the envelope dominates every fitted point
        let shift = pts.iter().map(|q| q.1 - (my + p * (q.0 - mx))).fold(0.0, f64::max);
        Ok(Self { c: (my - p * mx + shift).exp(), p })
    }

    pub fn at(&self, n: usize) -> f64 {
        self.c * ((n + 1) as f64).powf(self.p)
    }
}

/// Σ_{n≤N} f(√n) aₙ(x) + Σ_{n≤N} f̂(√n) âₙ(x), summed in ascending n.
pub fn reconstruct(
    engine: &BasisEngine,
    envelope: &SeminormEnvelope,
    pair: &TransformPair,
    x: f64,
    truncation: usize,
) -> Result<ReconstructionReport> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be positive".into()));
    }
    if truncation > engine.max_n() {
        return Err(Error::IndexOutOfRange { index: truncation, len: engine.max_n() + 1 });
    }
    let mut acc = 0.0;
    for n in 0..=truncation {
        let r = (n as f64).sqrt();
        let fv = pair.f.eval(r).re;
        let fh = pair.f_hat.eval(r).re;
        acc += fv * engine.value(n, false, x)?.value;
        acc += fh * engine.value(n, true, x)?.value;
    }
    let mut tail = 0.0;
    for n in truncation + 1..=truncation + 400 {
        let r = (n as f64).sqrt();
        tail += (pair.f.eval(r).norm() + pair.f_hat.eval(r).norm()) * envelope.at(n);
    }
    let reference = pair.f.eval(x).re;
    Ok(ReconstructionReport {
        x,
        truncation_n: truncation,
        reconstructed: acc,
        reference,
        abs_error: (acc - reference).abs(),
        term_tail_bound: tail,
    })
}

/// Same sum from a table; x must be one of the table's grid points.
pub fn reconstruct_from_table(table: &BasisTable, pair: &TransformPair, x: f64, truncation: usize) -> Result<f64> {
    let j = table
        .x_grid
        .iter()
        .position(|&g| g == x)
        .ok_or_else(|| Error::InvalidArgument(format!("x = {x} is not on the table grid")))?;
    if truncation > table.max_n {
        return Err(Error::IndexOutOfRange { index: truncation, len: table.max_n + 1 });
    }
    let mut acc = 0.0;
    for n in 0..=truncation {
        let r = (n as f64).sqrt();
        acc += pair.f.eval(r).re * table.values_a[n][j] + pair.f_hat.eval(r).re * table.values_ahat[n][j];
    }
    Ok(acc)
}

/// |f(0) + 2Σf(k) − f̂(0) − 2Σf̂(k)| with the f-side summed to `cutoff` and
/// the f̂-side summed until its decay envelope is negligible.
pub fn poisson_redundancy_residual(pair: &TransformPair, cutoff: usize) -> f64 {
    let side = |g: &crate::fourier::EvenTestFunction, k_max: usize| {
        let mut s = g.eval(0.0).re;
        for k in 1..=k_max {
            s += 2.0 * g.eval(k as f64).re;
        }
        s
    };
    let hat_cut = (pair.f_hat.decay.cutoff(1e-16).ceil() as usize).clamp(cutoff, 2000);
    (side(&pair.f, cutoff) - side(&pair.f_hat, hat_cut)).abs()
}

/// Basis values on an x grid, with per-entry error estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisTable {
    pub max_n: usize,
    pub x_grid: Vec<f64>,
    pub values_a: Vec<Vec<f64>>,
    pub values_ahat: Vec<Vec<f64>>,
    pub err_a: Vec<Vec<f64>>,
    pub err_ahat: Vec<Vec<f64>>,
    /// Largest discarded imaginary part per row.
    pub max_imag: Vec<f64>,
}

impl BasisTable {
    pub fn build(engine: &BasisEngine, max_n: usize, x_grid: &[f64]) -> Result<Self> {
        if max_n > engine.max_n() {
            return Err(Error::IndexOutOfRange { index: max_n, len: engine.max_n() + 1 });
        }
        let rows = max_n + 1;
        let cols = x_grid.len();
        let mut t = BasisTable {
            max_n,
            x_grid: x_grid.to_vec(),
            values_a: vec![vec![0.0; cols]; rows],
            values_ahat: vec![vec![0.0; cols]; rows],
            err_a: vec![vec![0.0; cols]; rows],
            err_ahat: vec![vec![0.0; cols]; rows],
            max_imag: vec![0.0; rows],
        };
        for n in 0..rows {
            for (j, &x) in x_grid.iter().enumerate() {
                let a = engine.value(n, false, x)?;
                let ah = engine.value(n, true, x)?;
                if !(a.value.is_finite() && ah.value.is_finite()) {
                    return Err(Error::NonFiniteIntegrand { re: x, im: n as f64 });
                }
                t.values_a[n][j] = a.value;
                t.values_ahat[n][j] = ah.value;
                t.err_a[n][j] = a.error_estimate;
                t.err_ahat[n][j] = ah.error_estimate;
                t.max_imag[n] = t.max_imag[n].max(a.imag.abs()).max(ah.imag.abs());
            }
        }
        Ok(t)
    }

    /// max over 1 ≤ n, m ≤ max_n (with √m on the grid) of |aₙ(√m) − δₙₘ| and |âₙ(√m)|,
    /// plus |a₀(√m)| for m ≥ 1 and |a₀(0) − 1/2|.
    pub fn node_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for (j, &x) in self.x_grid.iter().enumerate() {
            let m2 = x * x;
            let m = m2.round();
            if (m2 - m).abs() > 1e-12 {
                continue;
            }
            let m = m as usize;
            for n in 0..=self.max_n {
                let target = if n == 0 {
                    if m == 0 {
                        0.5
                    } else {
                        0.0
                    }
                } else if n == m {
                    1.0
                } else if m == 0 {
                    continue;
                } else {
                    0.0
                };
                if m > self.max_n && n != 0 {
                    continue;
                }
                dev = dev.max((self.values_a[n][j] - target).abs());
                if m >= 1 && n >= 1 {
                    dev = dev.max(self.values_ahat[n][j].abs());
                }
            }
        }
        dev
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,x,a,a_hat,err_a,err_ahat\n");
        for n in 0..=self.max_n {
            for (j, x) in self.x_grid.iter().enumerate() {
                let _ = writeln!(
                    s,
                    "{n},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                    x, self.values_a[n][j], self.values_ahat[n][j], self.err_a[n][j], self.err_ahat[n][j]
                );
            }
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("n,x,a,a_hat,err_a,err_ahat") {
            return Err(Error::Parse("missing or wrong CSV header".into()));
        }
        let mut rows: Vec<(usize, [f64; 5])> = Vec::new();
        for (i, line) in lines.enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(Error::Parse(format!("line {}: expected 6 fields", i + 2)));
            }
            let n: usize = f[0].parse().map_err(|_| Error::Parse(format!("line {}: bad n", i + 2)))?;
            let mut v = [0.0; 5];
            for k in 0..5 {
                v[k] = f[k + 1].parse().map_err(|_| Error::Parse(format!("line {}: bad number", i + 2)))?;
            }
            rows.push((n, v));
        }
        let max_n = rows.iter().map(|r| r.0).max().ok_or_else(|| Error::Parse("empty table".into()))?;
        let x_grid: Vec<f64> = rows.iter().filter(|r| r.0 == 0).map(|r| r.1[0]).collect();
        let cols = x_grid.len();
        if rows.len() != (max_n + 1) * cols {
            return Err(Error::Parse("table is not rectangular".into()));
        }
        let mut t = BasisTable {
            max_n,
            x_grid,
            values_a: vec![vec![0.0; cols]; max_n + 1],
            values_ahat: vec![vec![0.0; cols]; max_n + 1],
            err_a: vec![vec![0.0; cols]; max_n + 1],
            err_ahat: vec![vec![0.0; cols]; max_n + 1],
            max_imag: vec![0.0; max_n + 1],
        };
        for (i, (n, v)) in rows.iter().enumerate() {
            let j = i % cols;
            if *n != i / cols || v[0] != t.x_grid[j] {
                return Err(Error::Parse(format!("row {} out of order", i + 2)));
            }
            t.values_a[*n][j] = v[1];
            t.values_ahat[*n][j] = v[2];
            t.err_a[*n][j] = v[3];
            t.err_ahat[*n][j] = v[4];
        }
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
