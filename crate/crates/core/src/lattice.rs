//! Lattices, dual lattices, short-vector enumeration and Poisson summation
//! Σ_{x∈Λ} f(x) = covol(Λ)⁻¹ Σ_{y∈Λ*} f̂(y).

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use std::f64::consts::PI;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::modular::{sqrt_neg_iz, theta, UpperHalfPoint, C64};

/// Default cap on enumeration tree nodes.
pub const DEFAULT_ENUMERATION_BUDGET: usize = 20_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub dimension: usize,
    /// Rows are basis vectors.
    pub basis: DMatrix<f64>,
    pub label: String,
}

impl Lattice {
    pub fn new(basis: DMatrix<f64>, label: impl Into<String>) -> Result<Self> {
        let n = basis.nrows();
        if n == 0 || basis.ncols() != n {
            return Err(Error::ShapeMismatch(format!("basis must be square, got {}x{}", n, basis.ncols())));
        }
        let det = basis.determinant();
        if !(det.abs() > 1e-12) {
            return Err(Error::SingularBasis { det });
        }
        Ok(Self { dimension: n, basis, label: label.into() })
    }

    pub fn from_rows(rows: &[Vec<f64>], label: impl Into<String>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("every row must have n entries".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]), label)
    }

    pub fn covolume(&self) -> f64 {
        self.basis.determinant().abs()
    }

    pub fn gram(&self) -> DMatrix<f64> {
        &self.basis * self.basis.transpose()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(&self.basis * s, format!("{}*{s}", self.label))
    }

    pub fn vector(&self, coeffs: &[i64]) -> DVector<f64> {
        let c = DVector::from_iterator(self.dimension, coeffs.iter().map(|&k| k as f64));
        self.basis.transpose() * c
    }

    /// Reads "n" on the first line followed by n rows of n numbers.
    pub fn parse(text: &str, label: impl Into<String>) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let n: usize = tokens
            .next()
            .ok_or_else(|| Error::Parse("empty lattice file".into()))?
            .parse()
            .map_err(|_| Error::Parse("first entry must be the dimension".into()))?;
        if n == 0 {
            return Err(Error::Parse("dimension must be positive".into()));
        }
        let vals: Vec<f64> = tokens
            .map(|t| t.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{t}'"))))
            .collect::<Result<_>>()?;
        if vals.len() != n * n {
            return Err(Error::Parse(format!("expected {} basis entries, found {}", n * n, vals.len())));
        }
        Self::new(DMatrix::from_row_slice(n, n, &vals), label)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "file".into());
        Self::parse(&text, label)
    }
}

/// Basis of the dual lattice: the inverse transpose of the basis matrix.
pub fn dual_lattice(l: &Lattice) -> Result<Lattice> {
    let inv = l
        .basis
        .clone()
        .try_inverse()
        .ok_or(Error::SingularBasis { det: l.basis.determinant() })?;
    Lattice::new(inv.transpose(), format!("{}*", l.label))
}

pub fn integer_lattice(n: usize) -> Lattice {
    Lattice::new(DMatrix::identity(n, n), format!("z{n}")).expect("identity is nonsingular")
}

pub fn hexagonal_lattice() -> Lattice {
    Lattice::from_rows(&[vec![1.0, 0.0], vec![0.5, 3f64.sqrt() / 2.0]], "hex").expect("nonsingular")
}

/// E8 as D8 ∪ (D8 + ½·1): basis 2e₁, eᵢ − eᵢ₋₁ (i = 2..7), ½·1.
pub fn e8_lattice() -> Lattice {
    let mut rows = vec![vec![0.0; 8]; 8];
    rows[0][0] = 2.0;
    for i in 1..7 {
        rows[i][i] = 1.0;
        rows[i][i - 1] = -1.0;
    }
    rows[7] = vec![0.5; 8];
    Lattice::from_rows(&rows, "e8").expect("nonsingular")
}

/// Fixture lattices by label: z1, z2, hex, e8.
pub fn lattice_fixture(label: &str) -> Option<Lattice> {
    match label {
        "z1" => Some(integer_lattice(1)),
        "z2" => Some(integer_lattice(2)),
        "hex" => Some(hexagonal_lattice()),
        "e8" => Some(e8_lattice()),
        _ => None,
    }
}

/// A lattice vector with its integer coordinates in the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeVector {
    pub coeffs: Vec<i64>,
    pub vector: DVector<f64>,
    pub norm_sq: f64,
}

/// All lattice vectors of norm ≤ radius (Fincke–Pohst enumeration), sorted by
/// norm and then by coefficients.
pub fn short_vectors(l: &Lattice, radius: f64) -> Result<Vec<LatticeVector>> {
    short_vectors_with_budget(l, radius, DEFAULT_ENUMERATION_BUDGET)
}

pub fn short_vectors_with_budget(l: &Lattice, radius: f64, budget: usize) -> Result<Vec<LatticeVector>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let n = l.dimension;
    let g = l.gram();
    // |Σcᵢbᵢ|² = Σᵢ q[i][i] (cᵢ + Σ_{j>i} q[i][j] cⱼ)²
    let mut q = vec![vec![0.0; n]; n];
    let mut a = g.clone();
    for i in 0..n {
        q[i][i] = a[(i, i)];
        for j in i + 1..n {
            q[i][j] = a[(i, j)] / a[(i, i)];
        }
        for j in i + 1..n {
            for k in i + 1..n {
                a[(j, k)] -= q[i][j] * q[i][k] * q[i][i];
            }
        }
    }
    let bound = radius * radius * (1.0 + 1e-12);
    let mut out = Vec::new();
    let mut c = vec![0i64; n];
    let mut visited = 0usize;
    enumerate_level(n - 1, 0.0, &q, bound, &mut c, &mut out, &mut visited, budget)?;
    let mut res: Vec<LatticeVector> = out
        .into_iter()
        .map(|coeffs| {
            let vector = l.vector(&coeffs);
            let norm_sq = vector.norm_squared();
            LatticeVector { coeffs, vector, norm_sq }
        })
        .filter(|v| v.norm_sq <= radius * radius + 1e-12 * radius * radius)
        .collect();
    res.sort_by(|a, b| a.norm_sq.partial_cmp(&b.norm_sq).unwrap().then_with(|| a.coeffs.cmp(&b.coeffs)));
    Ok(res)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    i: usize,
    partial: f64,
    q: &[Vec<f64>],
    bound: f64,
    c: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
    visited: &mut usize,
    budget: usize,
) -> Result<()> {
    let n = q.len();
    let center: f64 = -(i + 1..n).map(|j| q[i][j] * c[j] as f64).sum::<f64>();
    let rem = bound - partial;
    if rem < 0.0 {
        return Ok(());
    }
    let half = (rem / q[i][i]).sqrt();
    let lo = (center - half).ceil() as i64;
    let hi = (center + half).floor() as i64;
    for k in lo..=hi {
        *visited += 1;
        if *visited > budget {
            return Err(Error::EnumerationBudgetExceeded { budget });
        }
        c[i] = k;
        let d = k as f64 - center;
        let p = partial + q[i][i] * d * d;
        if p > bound {
            continue;
        }
        if i == 0 {
            out.push(c.clone());
        } else {
            enumerate_level(i - 1, p, q, bound, c, out, visited, budget)?;
        }
    }
    c[i] = 0;
    Ok(())
}

/// Shortest nonzero vector length.
pub fn minimal_length(l: &Lattice) -> Result<f64> {
    // some basis row is a nonzero vector, so the minimum is at most its length
    let r = (0..l.dimension).map(|i| l.basis.row(i).norm()).fold(f64::INFINITY, f64::min);
    let v = short_vectors(l, r)?;
    Ok(v.iter().filter(|v| v.norm_sq > 0.0).map(|v| v.norm_sq.sqrt()).fold(f64::INFINITY, f64::min))
}

/// Volume of the n-ball of the given radius, π^{n/2} rⁿ / Γ(n/2 + 1).
pub fn ball_volume(n: usize, radius: f64) -> f64 {
    // Γ(n/2 + 1) by its exact recursion from Γ(1) = 1 or Γ(1/2) = √π
    let mut g = if n.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut s = if n.is_multiple_of(2) { 1.0 } else { 0.5 };
    while s < n as f64 / 2.0 + 1.0 - 1e-9 {
        g *= s;
        s += 1.0;
    }
    PI.powf(n as f64 / 2.0) * radius.powi(n as i32) / g
}

/// vol(B_{r/2}) / covol with r the minimal vector length.
pub fn lattice_packing_density(l: &Lattice) -> Result<f64> {
    Ok(ball_volume(l.dimension, minimal_length(l)? / 2.0) / l.covolume())
}

pub type VectorFn = Arc<dyn Fn(&[f64]) -> C64 + Send + Sync>;

/// A function on ℝⁿ with its Fourier transform and a Gaussian envelope
/// |f(x)| ≤ amplitude·e^{−rate|x|²} (same form for f̂) used for tail bounds.
#[derive(Clone)]
pub struct PoissonPair {
    pub label: String,
    pub f: VectorFn,
    pub f_hat: VectorFn,
    pub f_envelope: (f64, f64),
    pub f_hat_envelope: (f64, f64),
}

impl PoissonPair {
    /// e^{−πt|x|²} in dimension n, with transform t^{−n/2}e^{−π|y|²/t}.
    pub fn gaussian(n: usize, t: f64) -> Self {
        let amp = t.powf(-(n as f64) / 2.0);
        Self {
            label: format!("gaussian-t{t}"),
            f: Arc::new(move |x| C64::new((-PI * t * norm_sq(x)).exp(), 0.0)),
            f_hat: Arc::new(move |y| C64::new(amp * (-PI * norm_sq(y) / t).exp(), 0.0)),
            f_envelope: (1.0, PI * t),
            f_hat_envelope: (amp, PI / t),
        }
    }

    /// Πf(xᵢ) from a one-dimensional Gaussian dilation tᵢ per coordinate.
    pub fn separable_gaussian(ts: Vec<f64>) -> Self {
        let amp: f64 = ts.iter().map(|t| t.powf(-0.5)).product();
        let tmin = ts.iter().cloned().fold(f64::INFINITY, f64::min);
        let tmax = ts.iter().cloned().fold(0.0, f64::max);
        let (a, b) = (ts.clone(), ts);
        Self {
            label: "separable-gaussian".into(),
            f: Arc::new(move |x| C64::new(x.iter().zip(&a).map(|(xi, t)| (-PI * t * xi * xi).exp()).product(), 0.0)),
            f_hat: Arc::new(move |y| {
                C64::new(y.iter().zip(&b).map(|(yi, t)| t.powf(-0.5) * (-PI * yi * yi / t).exp()).product(), 0.0)
            }),
            f_envelope: (1.0, PI * tmin),
            f_hat_envelope: (amp, PI / tmax),
        }
    }

    /// x ↦ e^{πiz|x|²} on ℝ¹, with transform (−iz)^{−1/2}e^{πi(−1/z)y²}.
    pub fn complex_gaussian_1d(z: UpperHalfPoint) -> Self {
        let (zz, w) = (z.z(), z.neg_inv().z());
        let amp = 1.0 / sqrt_neg_iz(z);
        Self {
            label: format!("complex-gaussian-{zz}"),
            f: Arc::new(move |x| (C64::i() * PI * zz * x[0] * x[0]).exp()),
            f_hat: Arc::new(move |y| amp * (C64::i() * PI * w * y[0] * y[0]).exp()),
            f_envelope: (1.0, PI * zz.im),
            f_hat_envelope: (amp.norm(), PI * w.im),
        }
    }
}

fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoissonReport {
    pub lhs: C64,
    pub rhs: C64,
    pub residual: f64,
    pub lhs_tail_bound: f64,
    pub rhs_tail_bound: f64,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
}

/// Both sides of Poisson summation, truncated at |x|, |y| ≤ radius_budget.
pub fn poisson_check(pair: &PoissonPair, l: &Lattice, radius_budget: f64) -> Result<PoissonReport> {
    let dual = dual_lattice(l)?;
    // for |x| > R, e^{−a|x|²} ≤ e^{−aR²/2}·e^{−a|x|²/2}; the tail estimate
    // uses the enumerated part of Σ e^{−a|x|²/2} only
    let side = |lat: &Lattice, g: &VectorFn, (amp, rate): (f64, f64)| -> Result<(C64, usize, f64)> {
        let v = short_vectors(lat, radius_budget)?;
        let mut s = C64::new(0.0, 0.0);
        let mut half = 0.0;
        // smallest terms first
        for lv in v.iter().rev() {
            s += g(lv.vector.as_slice());
            half += (-rate * lv.norm_sq / 2.0).exp();
        }
        let tail = amp * (-rate * radius_budget * radius_budget / 2.0).exp() * half;
        Ok((s, v.len(), tail))
    };
    let (lhs, lhs_terms, lhs_tail) = side(l, &pair.f, pair.f_envelope)?;
    let (rhs_sum, rhs_terms, rhs_tail) = side(&dual, &pair.f_hat, pair.f_hat_envelope)?;
    let rhs = rhs_sum / l.covolume();
    Ok(PoissonReport {
        lhs,
        rhs,
        residual: (lhs - rhs).norm(),
        lhs_tail_bound: lhs_tail,
        rhs_tail_bound: rhs_tail / l.covolume(),
        lhs_terms,
        rhs_terms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaReplay {
    pub z: UpperHalfPoint,
    pub poisson: PoissonReport,
    /// θ(−1/z) recovered as (−iz)^{1/2} Σ e^{πizn²}.
    pub via_poisson: C64,
    pub direct: C64,
    pub law_residual: f64,
}

/// The transformation θ(−1/z) = (−iz)^{1/2}θ(z) re-derived from Poisson
/// summation on ℤ with f(x) = e^{πizx²}.
pub fn theta_replay(z: UpperHalfPoint) -> Result<ThetaReplay> {
    let pair = PoissonPair::complex_gaussian_1d(z);
    let w = z.neg_inv();
    // radius where both Gaussians are below 1e−18
    let rate = (PI * z.im()).min(PI * w.im());
    let radius = (42.0 / rate).sqrt() + 2.0;
    let poisson = poisson_check(&pair, &integer_lattice(1), radius)?;
    let via_poisson = sqrt_neg_iz(z) * poisson.lhs;
    let direct = theta(w);
    Ok(ThetaReplay { z, poisson, via_poisson, direct, law_residual: (via_poisson - direct).norm() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn duals() {
        let d = dual_lattice(&integer_lattice(3)).unwrap();
        assert_eq!(d.basis, DMatrix::identity(3, 3));
        let two = Lattice::from_rows(&[vec![2.0]], "2z").unwrap();
        assert_relative_eq!(dual_lattice(&two).unwrap().basis[(0, 0)], 0.5);
        let h = dual_lattice(&hexagonal_lattice()).unwrap();
        assert!((h.covolume() - 2.0 / 3f64.sqrt()).abs() < 1e-12);
        // ⟨vᵢ*, vⱼ⟩ = δᵢⱼ
        let l = hexagonal_lattice();
        let p = &h.basis * l.basis.transpose();
        assert!((p - DMatrix::<f64>::identity(2, 2)).norm() < 1e-14);
        assert!(Lattice::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]], "bad").is_err());
    }

    #[test]
    fn short_vector_counts() {
        assert_eq!(short_vectors(&integer_lattice(2), 1.0).unwrap().len(), 5);
        assert_eq!(short_vectors(&hexagonal_lattice(), 1.01).unwrap().len(), 7);
        let e8 = e8_lattice();
        assert!((e8.covolume() - 1.0).abs() < 1e-12);
        let v = short_vectors(&e8, 2.0 + 1e-9).unwrap();
        let count = |m: f64| v.iter().filter(|x| (x.norm_sq - m).abs() < 1e-9).count();
        assert_eq!(count(2.0), 240);
        assert_eq!(count(4.0), 2160);
        assert_eq!(short_vectors(&e8, 2f64.sqrt() + 1e-9).unwrap().len(), 241);
        assert!(matches!(
            short_vectors_with_budget(&e8, 3.0, 100),
            Err(Error::EnumerationBudgetExceeded { budget: 100 })
        ));
    }

    // independent oracle: E8 vectors of norm² ≤ 4 by brute force over the
    // two cosets with coordinates in {−2..2} and {±1/2, ±3/2}
    #[test]
    fn e8_brute_force_oracle() {
        let mut counts = [0usize; 3];
        let rec = |coords: &mut Vec<f64>, half: bool, counts: &mut [usize; 3]| {
            fn go(c: &mut Vec<f64>, half: bool, counts: &mut [usize; 3]) {
                if c.len() == 8 {
                    let s: f64 = c.iter().sum();
                    if (s.rem_euclid(2.0)).abs() > 1e-9 && (s.rem_euclid(2.0) - 2.0).abs() > 1e-9 {
                        return;
                    }
                    let n2: f64 = c.iter().map(|x| x * x).sum();
                    if n2 < 4.0 + 1e-9 {
                        counts[(n2 / 2.0).round() as usize] += 1;
                    }
                    return;
                }
                let vals: &[f64] = if half { &[-1.5, -0.5, 0.5, 1.5] } else { &[-2.0, -1.0, 0.0, 1.0, 2.0] };
                for &v in vals {
                    c.push(v);
                    go(c, half, counts);
                    c.pop();
                }
            }
            go(coords, half, counts);
        };
        rec(&mut Vec::new(), false, &mut counts);
        rec(&mut Vec::new(), true, &mut counts);
        assert_eq!(counts, [1, 240, 2160]);
    }

    #[test]
    fn balls_and_densities() {
        assert_relative_eq!(ball_volume(1, 0.5), 1.0, epsilon = 1e-15);
        assert_relative_eq!(ball_volume(2, 1.0), PI, epsilon = 1e-15);
        let v8 = ball_volume(8, 2f64.sqrt() / 2.0);
        assert_relative_eq!(v8, PI.powi(4) / 384.0, epsilon = 1e-15);
        assert!((v8.powf(1.0 / 8.0) - 0.84242944).abs() < 1e-7);
        assert_relative_eq!(lattice_packing_density(&integer_lattice(1)).unwrap(), 1.0, epsilon = 1e-14);
        let hex = lattice_packing_density(&hexagonal_lattice()).unwrap();
        assert_relative_eq!(hex, PI / 12f64.sqrt(), epsilon = 1e-14);
        assert!((hex.sqrt() - 0.95231281).abs() < 1e-7);
        let e8 = lattice_packing_density(&e8_lattice()).unwrap();
        assert_relative_eq!(e8, PI.powi(4) / 384.0, epsilon = 1e-14);
    }

    #[test]
    fn poisson_examples() {
        let r = poisson_check(&PoissonPair::gaussian(1, 1.0), &integer_lattice(1), 7.0).unwrap();
        assert!(r.residual < 1e-14);
        let r = poisson_check(&PoissonPair::gaussian(1, 2.0), &integer_lattice(1), 8.0).unwrap();
        assert!(r.residual < 1e-10);
        // independent series for the two sides
        let lhs: f64 = (-20i32..=20).map(|n| (-2.0 * PI * (n * n) as f64).exp()).sum();
        let rhs: f64 = (-20i32..=20).map(|m| (-PI * (m * m) as f64 / 2.0).exp()).sum::<f64>() / 2f64.sqrt();
        assert!((r.lhs.re - lhs).abs() < 1e-14 && (r.rhs.re - rhs).abs() < 1e-14);
        let r = poisson_check(&PoissonPair::gaussian(2, 1.0), &hexagonal_lattice(), 6.0).unwrap();
        assert!(r.residual < 1e-9);
        assert!(r.lhs_tail_bound < 1e-9 && r.rhs_tail_bound < 1e-9);
        let r = poisson_check(&PoissonPair::separable_gaussian(vec![1.0, 2.0]), &integer_lattice(2), 7.0).unwrap();
        assert!(r.residual < 1e-10);
    }

    #[test]
    fn theta_replay_matches() {
        for t in [0.5, 1.0, 1.3, 2.0] {
            let r = theta_replay(UpperHalfPoint::imag(t).unwrap()).unwrap();
            assert!(r.law_residual < 1e-10, "t={t}: {}", r.law_residual);
            assert!(r.poisson.residual < 1e-10);
        }
        let r = theta_replay(UpperHalfPoint::new(0.3, 0.9).unwrap()).unwrap();
        assert!(r.law_residual < 1e-10);
    }

    #[test]
    fn parse_round_trip() {
        let l = Lattice::parse("2\n1 0\n0.5 0.8660254037844386\n", "h").unwrap();
        assert!((l.covolume() - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(Lattice::parse("2\n1 0\n0.5\n", "h").is_err());
        assert!(Lattice::parse("x", "h").is_err());
    }
}
