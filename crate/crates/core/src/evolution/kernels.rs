//! Time integrals shared by the diagram evaluators.

use num_complex::Complex64;

use crate::quadrature::{FixedFamily, FixedRule};

use super::TimeRule;

/// `(e^z − 1)/z`.
pub fn phi1(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // Σ z^k/(k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term *= z / (k as f64 + 1.0);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0) / z
    }
}

/// `(e^z − 1 − z)/z²`.
pub fn phi2(z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        // Σ z^k/(k+2)!
        let mut term = Complex64::new(0.5, 0.0);
        let mut sum = term;
        for k in 1..30 {
            term *= z / (k as f64 + 2.0);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        (z.exp() - 1.0 - z) / (z * z)
    }
}

/// Evaluates `A(Ω) = ∫₀ᵗ e^{iΩs} ds` and `B(Ω) = ∫₀ᵗ (t − τ) e^{−iΩτ} dτ`.
///
/// `|A(Ω)|² = 2 Re B(Ω)` holds for the exact rule; the fixed rules
/// approximate both with the same nodes.
pub struct TimeKernels {
    t: f64,
    rule: Option<FixedRule>,
}

impl TimeKernels {
    pub fn new(rule: TimeRule, n_t: usize, t: f64) -> Self {
        let rule = match rule {
            TimeRule::Exact => None,
            TimeRule::GaussLegendre => Some(FixedRule::new(FixedFamily::GaussLegendre, n_t, 0.0, t)),
            TimeRule::Trapezoid => Some(FixedRule::new(FixedFamily::Trapezoid, n_t, 0.0, t)),
        };
        TimeKernels { t, rule }
    }

    pub fn a(&self, omega: f64) -> Complex64 {
        match &self.rule {
            None => phi1(Complex64::new(0.0, omega * self.t)) * self.t,
            Some(r) => r.apply(|s| Complex64::from_polar(1.0, omega * s)),
        }
    }

    pub fn b(&self, omega: f64) -> Complex64 {
        let t = self.t;
        match &self.rule {
            None => phi2(Complex64::new(0.0, -omega * t)) * (t * t),
            Some(r) => r.apply(|s| Complex64::from_polar(t - s, -omega * s)),
        }
    }
}
