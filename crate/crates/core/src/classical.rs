//! Classical interpolation: Lagrange and Hermite polynomials, Shannon's
//! cardinal series and the partial sine product.

use serde::Serialize;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fourier::sinc;

/// Interpolation nodes with the number of derivatives prescribed at each.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeSet {
    points: Vec<f64>,
    derivative_orders: Vec<usize>,
}

impl NodeSet {
    pub fn new(points: Vec<f64>, derivative_orders: Vec<usize>) -> Result<Self> {
        if points.is_empty() || points.len() != derivative_orders.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} points but {} derivative orders",
                points.len(),
                derivative_orders.len()
            )));
        }
        if points.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("points must be strictly increasing".into()));
        }
        if derivative_orders.contains(&0) {
            return Err(Error::InvalidArgument("derivative orders must be at least 1".into()));
        }
        Ok(Self { points, derivative_orders })
    }

    /// One value per node.
    pub fn lagrange(points: Vec<f64>) -> Result<Self> {
        let n = points.len();
        Self::new(points, vec![1; n])
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn derivative_orders(&self) -> &[usize] {
        &self.derivative_orders
    }

    /// Σ dₖ, the number of interpolation conditions.
    pub fn total_conditions(&self) -> usize {
        self.derivative_orders.iter().sum()
    }
}

/// pₖ(x) = Π_{j≠k} (x − xⱼ)/(xₖ − xⱼ).
pub fn lagrange_basis(nodes: &NodeSet, k: usize, x: f64) -> Result<f64> {
    if nodes.derivative_orders.iter().any(|&d| d != 1) {
        return Err(Error::InvalidArgument("Lagrange basis needs all derivative orders equal to 1".into()));
    }
    let p = &nodes.points;
    if k >= p.len() {
        return Err(Error::IndexOutOfRange { index: k, len: p.len() });
    }
    Ok(p.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &xj)| (x - xj) / (p[k] - xj)).product())
}

/// Σ f(xₖ) pₖ(x).
pub fn lagrange_interpolate(nodes: &NodeSet, values: &[f64], x: f64) -> Result<f64> {
    if values.len() != nodes.points.len() {
        return Err(Error::ShapeMismatch(format!("{} values for {} nodes", values.len(), nodes.points.len())));
    }
    let mut s = 0.0;
    for (k, v) in values.iter().enumerate() {
        s += v * lagrange_basis(nodes, k, x)?;
    }
    Ok(s)
}

/// Σ f(xₖ) pₖ expanded into monomials, one basis product at a time.
pub fn lagrange_polynomial(nodes: &NodeSet, values: &[f64]) -> Result<Polynomial> {
    let p = &nodes.points;
    if values.len() != p.len() {
        return Err(Error::ShapeMismatch(format!("{} values for {} nodes", values.len(), p.len())));
    }
    let mut coeffs = vec![0.0; p.len()];
    for (k, v) in values.iter().enumerate() {
        let mut basis = vec![1.0];
        let mut denom = 1.0;
        for (_, &xj) in p.iter().enumerate().filter(|&(j, _)| j != k) {
            let mut nb = vec![0.0; basis.len() + 1];
            for (i, b) in basis.iter().enumerate() {
                nb[i + 1] += b;
                nb[i] -= xj * b;
            }
            basis = nb;
            denom *= p[k] - xj;
        }
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += v * b / denom;
        }
    }
    Ok(Polynomial { coefficients: coeffs })
}

/// Polynomial in the monomial basis, lowest degree first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polynomial {
    pub coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    pub fn degree_bound(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// The polynomial of degree < Σdₖ with f^{(j)}(xₖ) = data[k][j] for j < dₖ,
/// built from divided differences with repeated nodes.
pub fn hermite_interpolate(nodes: &NodeSet, data: &[Vec<f64>]) -> Result<Polynomial> {
    if data.len() != nodes.points.len() || data.iter().zip(&nodes.derivative_orders).any(|(d, &o)| d.len() != o) {
        return Err(Error::ShapeMismatch("data must hold dₖ values for node k".into()));
    }
    // z: nodes repeated dₖ times; src: which node each entry came from
    let mut z = Vec::new();
    let mut src = Vec::new();
    for (k, (&x, &d)) in nodes.points.iter().zip(&nodes.derivative_orders).enumerate() {
        for _ in 0..d {
            z.push(x);
            src.push(k);
        }
    }
    let m = z.len();
    let mut table: Vec<f64> = src.iter().map(|&k| data[k][0]).collect();
    let mut newton = vec![table[0]];
    let mut factorial = 1.0;
    for level in 1..m {
        factorial *= level as f64;
        let mut next = Vec::with_capacity(m - level);
        for i in 0..m - level {
            let (a, b) = (z[i], z[i + level]);
            if a == b {
                next.push(data[src[i]][level] / factorial);
            } else {
                next.push((table[i + 1] - table[i]) / (b - a));
            }
        }
        newton.push(next[0]);
        table = next;
    }
    // expand Σ cᵢ Π_{j<i}(x − zⱼ) into monomials
    let mut coeffs = vec![0.0; m];
    let mut basis = vec![1.0];
    for (i, c) in newton.iter().enumerate() {
        for (p, b) in basis.iter().enumerate() {
            coeffs[p] += c * b;
        }
        if i + 1 < m {
            let mut nb = vec![0.0; basis.len() + 1];
            for (p, b) in basis.iter().enumerate() {
                nb[p + 1] += b;
                nb[p] -= z[i] * b;
            }
            basis = nb;
        }
    }
    Ok(Polynomial { coefficients: coeffs })
}

/// Σ_{|n|≤N} f(n/r) sinc(rx − n); samples[i] holds f((i − N)/r).
pub fn shannon_reconstruct(samples: &[f64], r: f64, x: f64) -> Result<f64> {
    if samples.len().is_multiple_of(2) {
        return Err(Error::ShapeMismatch("samples must cover −N..=N".into()));
    }
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("r must be positive, got {r}")));
    }
    let big_n = (samples.len() / 2) as i64;
    let t = r * x;
    // exactly on a sample point the series collapses to that sample
    if t == t.round() && t.abs() <= big_n as f64 {
        return Ok(samples[(t as i64 + big_n) as usize]);
    }
    Ok(samples.iter().enumerate().map(|(i, &s)| s * sinc(t - (i as i64 - big_n) as f64)).sum())
}

/// Samples f(n/r) for |n| ≤ N and the tail Σ_{|n|>N} |f(n/r)| up to `tail_terms`.
pub fn sample_symmetric(f: impl Fn(f64) -> f64, r: f64, big_n: usize, tail_terms: usize) -> (Vec<f64>, f64) {
    let n = big_n as i64;
    let samples = (-n..=n).map(|k| f(k as f64 / r)).collect();
    let tail = (n + 1..=n + tail_terms as i64).map(|k| f(k as f64 / r).abs() + f(-k as f64 / r).abs()).sum();
    (samples, tail)
}

/// Π_{j≤J} (1 − x²/j²).
pub fn sinc_product_partial(x: f64, j_max: usize) -> f64 {
    let x2 = x * x;
    (1..=j_max).map(|j| 1.0 - x2 / (j * j) as f64).product()
}

/// sin(πx)/(πx) for comparison with the partial product.
pub fn sinc_limit(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lagrange_examples() {
        let n = NodeSet::lagrange(vec![0.0, 1.0, 2.0]).unwrap();
        assert_eq!(lagrange_basis(&n, 1, 1.0).unwrap(), 1.0);
        assert_eq!(lagrange_basis(&n, 1, 2.0).unwrap(), 0.0);
        let v: Vec<f64> = n.points().iter().map(|x| x * x + 1.0).collect();
        assert!((lagrange_interpolate(&n, &v, 3.0).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(lagrange_basis(&n, 3, 0.0), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn hermite_examples() {
        let n = NodeSet::new(vec![0.0], vec![2]).unwrap();
        let p = hermite_interpolate(&n, &[vec![1.0, 3.0]]).unwrap();
        assert_eq!(p.coefficients, vec![1.0, 3.0]);
        let n = NodeSet::new(vec![0.0, 1.0], vec![2, 2]).unwrap();
        let p = hermite_interpolate(&n, &[vec![0.0, 0.0], vec![1.0, 3.0]]).unwrap();
        for (c, e) in p.coefficients.iter().zip([0.0, 0.0, 0.0, 1.0]) {
            assert!((c - e).abs() < 1e-12);
        }
        let n = NodeSet::lagrange(vec![0.0, 1.0]).unwrap();
        let p = hermite_interpolate(&n, &[vec![0.0], vec![1.0]]).unwrap();
        assert!((p.eval(0.5) - 0.25 - 0.25).abs() < 1e-15);
        assert!(((0.25 - p.eval(0.5)) + 0.25).abs() < 1e-15);
        assert!(hermite_interpolate(&n, &[vec![0.0, 1.0], vec![1.0]]).is_err());
    }

    #[test]
    fn shannon_examples() {
        let (s, _) = sample_symmetric(sinc, 1.0, 50, 0);
        assert_eq!(shannon_reconstruct(&s, 1.0, 0.0).unwrap(), 1.0);
        let f = |x: f64| if x == 0.0 { 0.4 } else { (2.0 * PI * 0.2 * x).sin() / (PI * x) };
        let (s, tail) = sample_symmetric(f, 1.0, 200, 100_000);
        for m in [-3i64, 0, 7] {
            assert_eq!(shannon_reconstruct(&s, 1.0, m as f64).unwrap(), f(m as f64));
        }
        assert!((shannon_reconstruct(&s, 1.0, 0.37).unwrap() - f(0.37)).abs() < 1e-4);
        assert!(tail > 0.0);
    }

    #[test]
    fn sine_product() {
        assert_eq!(sinc_product_partial(1.0, 5), 0.0);
        assert_eq!(sinc_product_partial(0.0, 5), 1.0);
        assert!((sinc_product_partial(0.5, 10_000) - 2.0 / PI).abs() < 1e-4);
    }

    proptest! {
        #[test]
        fn partition_of_unity(x in -1.0f64..4.0) {
            let n = NodeSet::lagrange(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
            let s: f64 = (0..4).map(|k| lagrange_basis(&n, k, x).unwrap()).sum();
            prop_assert!((s - 1.0).abs() < 1e-12);
        }

        #[test]
        fn lagrange_reproduces_polynomials(c in prop::collection::vec(-3.0f64..3.0, 5), x in -0.5f64..4.5) {
            let n = NodeSet::lagrange(vec![0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
            let p = Polynomial { coefficients: c };
            let v: Vec<f64> = n.points().iter().map(|&t| p.eval(t)).collect();
            let got = lagrange_interpolate(&n, &v, x).unwrap();
            let want = p.eval(x);
            prop_assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0));
        }

        #[test]
        fn hermite_with_unit_orders_is_lagrange(v in prop::collection::vec(-5.0f64..5.0, 4)) {
            let n = NodeSet::lagrange(vec![-1.0, 0.5, 2.0, 3.0]).unwrap();
            let data: Vec<Vec<f64>> = v.iter().map(|&a| vec![a]).collect();
            let p = hermite_interpolate(&n, &data).unwrap();
            let q = lagrange_polynomial(&n, &v).unwrap();
            for (a, b) in p.coefficients.iter().zip(&q.coefficients) {
                prop_assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
            }
        }
    }
}
