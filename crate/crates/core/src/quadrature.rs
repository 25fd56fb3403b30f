//! Gauss–Legendre rules and nested quadrature over ordered time simplices.

use std::num::NonZeroUsize;

use gauss_quad::legendre;

/// Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let order = NonZeroUsize::new(order).expect("quadrature order must be positive");
        let (nodes, weights) = legendre::GaussLegendre::new(order).iter().copied().unzip();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// Integrates `f(t_1, ..., t_n)` over the ordered simplex
    /// `upper >= t_1 >= t_2 >= ... >= t_n >= 0` by nesting the rule in each
    /// coordinate. Cost is `order^n` evaluations.
    pub fn integrate_simplex<F: FnMut(&[f64]) -> f64>(&self, dim: usize, upper: f64, mut f: F) -> f64 {
        let mut point = Vec::with_capacity(dim);
        self.simplex_level(dim, upper, &mut point, &mut f)
    }

    fn simplex_level<F: FnMut(&[f64]) -> f64>(
        &self,
        remaining: usize,
        upper: f64,
        point: &mut Vec<f64>,
        f: &mut F,
    ) -> f64 {
        if remaining == 0 {
            return f(point);
        }
        let half = 0.5 * upper;
        let mut sum = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let t = half * (1.0 + x);
            point.push(t);
            sum += w * self.simplex_level(remaining - 1, t, point, f);
            point.pop();
        }
        sum * half
    }
}
