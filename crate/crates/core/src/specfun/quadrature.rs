use crate::prelude::*;
use core::f64::consts::PI;

use super::legendre::legendre_unchecked;
use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on [−1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("Gauss–Legendre order must be at least 1".into()));
        }
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let nf = n as f64;
        for i in 0..n {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = -(PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            let mut converged = false;
            for _ in 0..100 {
                let p = legendre_unchecked(n, x);
                let pm1 = legendre_unchecked(n - 1, x);
                dp = nf * (x * p - pm1) / (x * x - 1.0);
                let dx = p / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    converged = true;
                    break;
                }
            }
            if !converged {
                return Err(Error::Convergence(format!("Gauss–Legendre node {i} of {n}")));
            }
            let p = legendre_unchecked(n, x);
            let pm1 = legendre_unchecked(n - 1, x);
            dp = if p.abs() < 1.0 { nf * (x * p - pm1) / (x * x - 1.0) } else { dp };
            nodes.push(x);
            weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes and weights mapped onto [a, b].
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        self.on(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

/// Product rule on the unit sphere: Gauss–Legendre in cos θ, trapezoid in φ.
#[derive(Debug, Clone)]
pub struct SphereRule {
    cos_theta: GaussLegendre,
    n_phi: usize,
}

/// One node of a sphere rule.
#[derive(Debug, Clone, Copy)]
pub struct SphereNode {
    pub cos_theta: f64,
    pub theta: f64,
    pub phi: f64,
    pub weight: f64,
}

impl SphereRule {
    pub fn new(n_theta: usize, n_phi: usize) -> Result<Self> {
        if n_phi == 0 {
            return Err(Error::Config("trapezoid order in φ must be at least 1".into()));
        }
        Ok(Self { cos_theta: GaussLegendre::new(n_theta)?, n_phi })
    }

    /// Exact for Y_{l,m}·conj(Y_{l′,m′}) when l + l′ < 2·n_theta and |m − m′| < n_phi.
    pub fn default_orders() -> Self {
        Self::new(64, 128).expect("fixed orders are valid")
    }

    pub fn n_theta(&self) -> usize {
        self.cos_theta.len()
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn theta_rule(&self) -> &GaussLegendre {
        &self.cos_theta
    }

    pub fn phis(&self) -> impl Iterator<Item = f64> + '_ {
        let d = 2.0 * PI / self.n_phi as f64;
        (0..self.n_phi).map(move |j| -PI + d * j as f64)
    }

    pub fn phi_weight(&self) -> f64 {
        2.0 * PI / self.n_phi as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = SphereNode> + '_ {
        let wp = self.phi_weight();
        self.cos_theta
            .nodes
            .iter()
            .zip(&self.cos_theta.weights)
            .flat_map(move |(&x, &w)| {
                self.phis().map(move |phi| SphereNode {
                    cos_theta: x,
                    theta: x.acos(),
                    phi,
                    weight: w * wp,
                })
            })
    }
}

/// Product rule on the ball B(r₀): Gauss–Legendre in r (weight r²) times a sphere rule.
#[derive(Debug, Clone)]
pub struct BallRule {
    radial: GaussLegendre,
    sphere: SphereRule,
    r0: f64,
}

impl BallRule {
    pub fn new(r0: f64, n_r: usize, n_theta: usize, n_phi: usize) -> Result<Self> {
        if !(r0 > 0.0) {
            return Err(Error::Domain(format!("ball radius {r0} must be positive")));
        }
        Ok(Self { radial: GaussLegendre::new(n_r)?, sphere: SphereRule::new(n_theta, n_phi)?, r0 })
    }

    pub fn with_default_orders(r0: f64) -> Result<Self> {
        Self::new(r0, 64, 64, 128)
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn sphere(&self) -> &SphereRule {
        &self.sphere
    }

    /// Radial nodes and weights including the r² Jacobian.
    pub fn radial(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.radial.on(0.0, self.r0).map(|(r, w)| (r, w * r * r))
    }

    pub fn len(&self) -> usize {
        self.radial.len() * self.sphere.n_theta() * self.sphere.n_phi()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let g = GaussLegendre::new(10).unwrap();
        for p in 0..20 {
            let v = g.integrate(-1.0, 1.0, |x| x.powi(p));
            let exact = if p % 2 == 1 { 0.0 } else { 2.0 / (p as f64 + 1.0) };
            assert!((v - exact).abs() < 1e-14, "p={p}");
        }
        let s: f64 = g.weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }

    #[test]
    fn high_order_nodes_are_sorted() {
        let g = GaussLegendre::new(64).unwrap();
        assert!(g.nodes().windows(2).all(|w| w[0] < w[1]));
        assert!((g.integrate(0.0, PI, |x| x.sin()) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn sphere_area_and_ball_volume() {
        let s = SphereRule::new(8, 16).unwrap();
        let a: f64 = s.nodes().map(|n| n.weight).sum();
        assert!((a - 4.0 * PI).abs() < 1e-13);
        let b = BallRule::new(2.0, 8, 8, 16).unwrap();
        let rv: f64 = b.radial().map(|(_, w)| w).sum();
        assert!((rv * a - 4.0 / 3.0 * PI * 8.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_zero_order() {
        assert!(GaussLegendre::new(0).is_err());
        assert!(SphereRule::new(4, 0).is_err());
        assert!(BallRule::new(-1.0, 4, 4, 4).is_err());
    }
}
