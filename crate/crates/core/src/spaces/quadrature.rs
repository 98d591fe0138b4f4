//! Conical-product (collapsed Gauss-Legendre) rules on the reference
//! triangle `{x, y >= 0, x + y <= 1}`.

use crate::error::{Error, Result};

/// Highest polynomial degree a rule can be requested for.
pub const MAX_DEGREE: usize = 30;

/// Degree used for element matrices: bubble gradient products are degree 4,
/// times the affine weight `1 - y` gives 5.
pub const ASSEMBLY_DEGREE: usize = 6;

/// Degree used for error norms against analytic fields.
pub const ERROR_DEGREE: usize = 10;

/// Degree used for load vectors of non-polynomial body forces.
pub const LOAD_DEGREE: usize = 10;

#[derive(Debug, Clone)]
pub struct QuadratureRule {
    degree: usize,
    points: Vec<[f64; 3]>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Barycentric coordinates `(1 - x - y, x, y)` of the reference points.
    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    /// Weights normalized to the reference area; they sum to 1/2.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Iterates `(barycentric point, weight)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (&[f64; 3], f64)> {
        self.points.iter().zip(self.weights.iter().copied())
    }

    /// Integrates `f(x, y)` over the reference triangle.
    pub fn integrate_reference<F: Fn(f64, f64) -> f64>(&self, f: F) -> f64 {
        self.iter().map(|(l, w)| w * f(l[1], l[2])).sum()
    }
}

/// Rule integrating every bivariate polynomial of total degree `<= degree`
/// exactly.
pub fn make_quadrature(degree: usize) -> Result<QuadratureRule> {
    if degree == 0 || degree > MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            requested: degree,
            max: MAX_DEGREE,
        });
    }
    // The collapse Jacobian (1 - s) raises the degree in s by one.
    let n = (degree + 3) / 2;
    let (nodes, weights) = gauss_legendre_unit(n);

    let mut points = Vec::with_capacity(n * n);
    let mut w = Vec::with_capacity(n * n);
    for (s, ws) in nodes.iter().zip(&weights) {
        for (t, wt) in nodes.iter().zip(&weights) {
            let x = *s;
            let y = t * (1.0 - s);
            points.push([1.0 - x - y, x, y]);
            w.push(ws * wt * (1.0 - s));
        }
    }
    Ok(QuadratureRule {
        degree,
        points,
        weights: w,
    })
}

/// Gauss-Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for k in 0..n {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[k] = 0.5 * (1.0 - x);
        weights[k] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `P_n(x)` and its derivative.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// `∫ x^a y^b` over the reference triangle is `a! b! / (a + b + 2)!`.
    fn monomial_exact(a: u32, b: u32) -> f64 {
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        fact(a) * fact(b) / fact(a + b + 2)
    }

    #[test]
    fn weights_sum_to_half_area() {
        for d in 1..=MAX_DEGREE {
            let rule = make_quadrature(d).unwrap();
            let s: f64 = rule.weights().iter().sum();
            assert!((s - 0.5).abs() < 1e-14, "degree {d}: {s}");
        }
    }

    #[test]
    fn exact_on_monomials_up_to_degree() {
        for d in [1, 2, 3, 6, 10, 14] {
            let rule = make_quadrature(d).unwrap();
            for total in 0..=d as u32 {
                for a in 0..=total {
                    let b = total - a;
                    let q = rule.integrate_reference(|x, y| x.powi(a as i32) * y.powi(b as i32));
                    let e = monomial_exact(a, b);
                    assert!((q - e).abs() < 1e-14, "d={d} x^{a} y^{b}: {q} vs {e}");
                }
            }
        }
    }

    #[test]
    fn reference_values() {
        let rule = make_quadrature(ASSEMBLY_DEGREE).unwrap();
        assert!((rule.integrate_reference(|_, _| 1.0) - 0.5).abs() < 1e-15);
        assert!((rule.integrate_reference(|x, y| x * y) - 1.0 / 24.0).abs() < 1e-15);
        assert!((rule.integrate_reference(|x, _| x.powi(6)) - 1.0 / 56.0).abs() < 1e-15);
    }

    #[test]
    fn points_inside_triangle() {
        let rule = make_quadrature(ERROR_DEGREE).unwrap();
        for (l, w) in rule.iter() {
            assert!(w > 0.0);
            assert!(l.iter().all(|c| *c > 0.0 && *c < 1.0));
            assert!((l.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn unsupported_degrees() {
        let err = make_quadrature(0).unwrap_err();
        assert!(err.to_string().contains("1..=30"));
        assert!(make_quadrature(MAX_DEGREE + 1).is_err());
    }
}
