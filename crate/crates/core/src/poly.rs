//! Real polynomials, their complex roots, and inverse Laplace transforms of
//! proper rational functions by partial fractions.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Roots closer than this (relative to the larger modulus) are treated as a
/// single repeated root.
pub const ROOT_MERGE_TOLERANCE: f64 = 3e-5;

/// Polynomial with real coefficients in ascending order of power.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    /// Builds `c[0] + c[1] s + ...`, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn leading(&self) -> f64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> RealPolynomial {
        if self.degree() == 0 {
            return RealPolynomial::new(vec![0.0]);
        }
        RealPolynomial::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect())
    }

    /// Taylor coefficients of `p(z + u)` in powers of `u`.
    pub fn shifted(&self, z: Complex64) -> Vec<Complex64> {
        let mut c: Vec<Complex64> = self.coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let next = c[j + 1];
                c[j] += z * next;
            }
        }
        c
    }

    /// Complex roots with multiplicity: eigenvalues of the companion matrix,
    /// polished by safeguarded Newton steps and made exactly conjugate-symmetric.
    pub fn roots(&self) -> Vec<Complex64> {
        let n = self.degree();
        if n == 0 {
            return Vec::new();
        }
        let lead = self.leading();
        let companion = DMatrix::from_fn(n, n, |i, j| {
            if j == n - 1 {
                -self.coeffs[i] / lead
            } else if i == j + 1 {
                1.0
            } else {
                0.0
            }
        });
        let mut roots: Vec<Complex64> = companion.complex_eigenvalues().iter().copied().collect();
        self.polish(&mut roots);
        conjugate_symmetrize(&mut roots);
        roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        roots
    }

    fn polish(&self, roots: &mut [Complex64]) {
        let dp = self.derivative();
        for _ in 0..2 {
            for i in 0..roots.len() {
                let r = roots[i];
                let d = dp.eval(r);
                if d.norm() == 0.0 {
                    continue;
                }
                let step = self.eval(r) / d;
                let nearest = roots
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, o)| (o - r).norm())
                    .fold(f64::INFINITY, f64::min);
                let candidate = r - step;
                if step.norm() < 0.25 * nearest && self.eval(candidate).norm() <= self.eval(r).norm() {
                    roots[i] = candidate;
                }
            }
        }
    }
}

fn conjugate_symmetrize(roots: &mut [Complex64]) {
    let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let mut paired = vec![false; roots.len()];
    for i in 0..roots.len() {
        if paired[i] {
            continue;
        }
        if roots[i].im.abs() <= 1e-14 * scale {
            roots[i].im = 0.0;
            paired[i] = true;
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..roots.len())
            .filter(|&j| j != i && !paired[j])
            .min_by(|&a, &b| (roots[a] - target).norm().total_cmp(&(roots[b] - target).norm()));
        if let Some(j) = partner {
            let re = 0.5 * (roots[i].re + roots[j].re);
            let im = 0.5 * (roots[i].im.abs() + roots[j].im.abs());
            roots[i] = Complex64::new(re, im);
            roots[j] = Complex64::new(re, -im);
            paired[i] = true;
            paired[j] = true;
        }
    }
}

/// A root together with its multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub root: Complex64,
    pub multiplicity: usize,
}

/// Groups roots whose separation is below [`ROOT_MERGE_TOLERANCE`] relative to
/// their modulus, replacing each group by its mean.
pub fn cluster_roots(roots: &[Complex64]) -> Vec<RootCluster> {
    let mut used = vec![false; roots.len()];
    let mut clusters = Vec::new();
    for i in 0..roots.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![roots[i]];
        // Grow transitively so a chain of close roots forms one cluster.
        let mut k = 0;
        while k < members.len() {
            let anchor = members[k];
            for j in 0..roots.len() {
                if !used[j] {
                    let tol = ROOT_MERGE_TOLERANCE * anchor.norm().max(roots[j].norm());
                    if (roots[j] - anchor).norm() <= tol {
                        used[j] = true;
                        members.push(roots[j]);
                    }
                }
            }
            k += 1;
        }
        let mean = members.iter().sum::<Complex64>() / members.len() as f64;
        clusters.push(RootCluster { root: mean, multiplicity: members.len() });
    }
    clusters
}

/// One term `Σ_q coeffs[q] t^q e^{root t}` of an inverse Laplace transform.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolyTerm {
    pub root: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl ExpPolyTerm {
    pub fn eval(&self, t: f64) -> Complex64 {
        let poly = self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * t + c);
        poly * (self.root * t).exp()
    }

    /// Value and first time derivative at `t`.
    pub fn eval_with_derivative(&self, t: f64) -> (Complex64, Complex64) {
        let e = (self.root * t).exp();
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p * e, (dp + self.root * p) * e)
    }
}

/// Inverse Laplace transform of the proper rational function `num / den`
/// over the given root clusters of `den`.
pub fn inverse_laplace(num: &RealPolynomial, den: &RealPolynomial, clusters: &[RootCluster]) -> Vec<ExpPolyTerm> {
    assert!(num.degree() < den.degree() || num.coeffs() == [0.0], "rational function must be proper");
    let lead = den.leading();
    clusters
        .iter()
        .enumerate()
        .map(|(k, cluster)| {
            let m = cluster.multiplicity;
            let a = num.shifted(cluster.root);
            // Remaining denominator factors expanded around this root.
            let mut p = vec![Complex64::new(lead, 0.0)];
            for (l, other) in clusters.iter().enumerate() {
                if l == k {
                    continue;
                }
                let offset = cluster.root - other.root;
                for _ in 0..other.multiplicity {
                    p = multiply_linear(&p, offset);
                }
            }
            // Series quotient g = a / p up to order m - 1.
            let mut g = vec![Complex64::new(0.0, 0.0); m];
            for j in 0..m {
                let mut acc = a.get(j).copied().unwrap_or_default();
                for i in 1..=j {
                    if let Some(pi) = p.get(i) {
                        acc -= pi * g[j - i];
                    }
                }
                g[j] = acc / p[0];
            }
            // 1/(s - r)^{q+1}  ->  t^q e^{rt} / q!
            let mut factorial = 1.0;
            let coeffs = (0..m)
                .map(|q| {
                    if q > 0 {
                        factorial *= q as f64;
                    }
                    g[m - 1 - q] / factorial
                })
                .collect();
            ExpPolyTerm { root: cluster.root, coeffs }
        })
        .collect()
}

fn multiply_linear(p: &[Complex64], offset: Complex64) -> Vec<Complex64> {
    // p(u) * (u + offset)
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, c) in p.iter().enumerate() {
        out[i] += c * offset;
        out[i + 1] += c;
    }
    out
}
