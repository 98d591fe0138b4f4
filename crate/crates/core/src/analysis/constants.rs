use crate::error::{Error, Result};

/// Constants of the abstract saddle-point setting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbstractConstants {
    /// Coercivity of `a` on the kernel of `B`.
    pub alpha: f64,
    /// Continuous inf-sup constant.
    pub beta: f64,
    /// Bound of the kernel/complement cross terms of `a`.
    pub c1: f64,
    /// Bound of `a` on the complement of the kernel.
    pub c2: f64,
}

/// Stabilization weight above which the modified form is coercive:
/// `(α/2 + C2 + 2 C1² / α) / β²`.
pub fn compute_m0(c: &AbstractConstants) -> Result<f64> {
    for (name, v) in [("alpha", c.alpha), ("beta", c.beta), ("C1", c.c1), ("C2", c.c2)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Parameter(format!("{name} must be positive, got {v}")));
        }
    }
    Ok((0.5 * c.alpha + c.c2 + 2.0 * c.c1 * c.c1 / c.alpha) / (c.beta * c.beta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(alpha: f64, beta: f64, c1: f64, c2: f64) -> AbstractConstants {
        AbstractConstants { alpha, beta, c1, c2 }
    }

    #[test]
    fn closed_form_values() {
        assert!((compute_m0(&k(2.0, 1.0, 1.0, 1.0)).unwrap() - 3.0).abs() < 1e-15);
        let base = compute_m0(&k(1.0, 1.0, 1.0, 0.5)).unwrap();
        let doubled = compute_m0(&k(1.0, 2.0, 1.0, 0.5)).unwrap();
        assert!((doubled - base / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(compute_m0(&k(1.0, 2.0, 1.0, 0.0)).is_err());
        assert!(compute_m0(&k(0.0, 1.0, 1.0, 1.0)).is_err());
        assert!(compute_m0(&k(1.0, -1.0, 1.0, 1.0)).is_err());
    }
}
