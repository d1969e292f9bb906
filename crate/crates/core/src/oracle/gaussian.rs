//! Complex Gaussian wave packets `A exp(−α(x − c)²)` under free motion and
//! momentum kicks, with the pair Wigner integral in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::phase_space::{InitialStateSpec, StateKind};

/// A Gaussian packet that has moved freely for a total time `elapsed`.
///
/// Free motion leaves `c` unchanged and only rescales `α`; a kick
/// `e^{iκx}` moves `c` by `iκ/(2α)` at the current `α`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Packet {
    /// Logarithm of the amplitude at zero elapsed time.
    log_amp: Complex64,
    alpha0: f64,
    c: Complex64,
    elapsed: f64,
    mass: f64,
}

impl Packet {
    /// `(2πσ²)^{−1/4} exp(−(x − x0)²/(4σ²) + i p0 x)`, times `weight`.
    pub fn new(x0: f64, p0: f64, sigma: f64, mass: f64, weight: Complex64) -> Self {
        let alpha0 = 1.0 / (4.0 * sigma * sigma);
        let log_amp = Complex64::new(-0.25 * (2.0 * PI * sigma * sigma).ln() - p0 * p0 / (4.0 * alpha0), p0 * x0)
            + weight.ln();
        Packet {
            log_amp,
            alpha0,
            c: Complex64::new(x0, p0 / (2.0 * alpha0)),
            elapsed: 0.0,
            mass,
        }
    }

    fn spread(&self) -> Complex64 {
        Complex64::new(1.0, 2.0 * self.elapsed * self.alpha0 / self.mass)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha0 / self.spread()
    }

    pub fn log_amplitude(&self) -> Complex64 {
        self.log_amp - 0.5 * self.spread().ln()
    }

    pub fn center(&self) -> Complex64 {
        self.c
    }

    pub fn evolve(mut self, dt: f64) -> Self {
        self.elapsed += dt;
        self
    }

    /// Multiplies by `e^{iκx}`.
    pub fn kick(mut self, kappa: f64) -> Self {
        let a = self.alpha();
        let c1 = self.c + Complex64::new(0.0, kappa) / (2.0 * a);
        self.log_amp += a * (c1 * c1 - self.c * self.c);
        self.c = c1;
        self
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let u = x - self.c;
        (self.log_amplitude() - self.alpha() * u * u).exp()
    }
}

/// `(1/π) ∫dz a(x − z) b*(x + z) e^{2ipz}` for two packets.
pub fn pair_wigner(a: &Packet, b: &Packet, x: f64, p: f64) -> Complex64 {
    let l1 = a.log_amplitude();
    let l2 = b.log_amplitude().conj();
    let al = a.alpha();
    let be = b.alpha().conj();
    let u1 = x - a.center();
    let u2 = x - b.center().conj();
    let s = al + be;
    let lin = 2.0 * al * u1 - 2.0 * be * u2 + Complex64::new(0.0, 2.0 * p);
    (PI / s).sqrt() / PI * (l1 + l2 + lin * lin / (4.0 * s) - al * u1 * u1 - be * u2 * u2).exp()
}

/// Packets summing to the one-dimensional initial wave function.
pub fn initial_packets(spec: &InitialStateSpec, mass: f64) -> Vec<Packet> {
    let one = Complex64::new(1.0, 0.0);
    match spec.kind {
        StateKind::Gaussian => vec![Packet::new(spec.x0, spec.p0, spec.sigma, mass, one)],
        StateKind::Cat => {
            let s = spec.separation;
            let h = 0.5 * s;
            let norm = (2.0 * (1.0 + spec.phase.cos() * (-s * s / (8.0 * spec.sigma * spec.sigma)).exp()))
                .sqrt()
                .recip();
            vec![
                Packet::new(spec.x0 + h, spec.p0, spec.sigma, mass, one * norm),
                Packet::new(spec.x0 - h, spec.p0, spec.sigma, mass, Complex64::from_polar(norm, spec.phase)),
            ]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::cc::{integrate, CcTolerance, Estimate};

    fn quad_pair(a: &Packet, b: &Packet, x: f64, p: f64) -> Complex64 {
        integrate(
            |z| Estimate::exact(a.eval(x - z) * b.eval(x + z).conj() * Complex64::from_polar(1.0, 2.0 * p * z)),
            -30.0,
            30.0,
            &[0.0],
            CcTolerance {
                abs: 1e-15,
                rel: 1e-13,
                max_evals: 1_000_000,
            },
        )
        .value
            / PI
    }

    #[test]
    fn packet_matches_closed_form_wave_function() {
        let spec = InitialStateSpec::cat(0.3, -0.7, 0.8, 2.5, 0.4);
        let ps = initial_packets(&spec, 1.0);
        for x in [-2.0, -0.3, 0.0, 1.1] {
            let v: Complex64 = ps.iter().map(|q| q.eval(x)).sum();
            assert!((v - spec.wavefunction_1d(x)).norm() < 1e-14);
        }
    }

    #[test]
    fn free_motion_matches_spreading_law() {
        let p = Packet::new(0.0, 0.0, 1.0, 2.0, Complex64::new(1.0, 0.0)).evolve(3.0);
        // |ψ|² has variance σ² + t²/(4 m² σ²)
        let var = 1.0 + 9.0 / 16.0;
        let dens = p.eval(0.7).norm_sqr();
        let exact = (2.0 * PI * var).powf(-0.5) * (-0.49 / (2.0 * var)).exp();
        assert!((dens - exact).abs() < 1e-14);
    }

    #[test]
    fn kick_shifts_momentum() {
        let p = Packet::new(0.2, 0.5, 0.9, 1.0, Complex64::new(1.0, 0.0)).evolve(0.4);
        let k = p.kick(1.3);
        for x in [-1.0, 0.0, 0.6] {
            let want = p.eval(x) * Complex64::from_polar(1.0, 1.3 * x);
            assert!((k.eval(x) - want).norm() < 1e-13);
        }
    }

    #[test]
    fn pair_integral_matches_quadrature() {
        let a = Packet::new(0.2, 0.5, 0.9, 1.0, Complex64::new(1.0, 0.0)).evolve(0.4).kick(-2.0).evolve(0.3);
        let b = Packet::new(-0.4, 0.1, 0.9, 1.0, Complex64::new(0.5, 0.2)).evolve(0.7);
        for (x, p) in [(0.0, 0.0), (0.5, -0.3), (-1.0, 1.2)] {
            let exact = pair_wigner(&a, &b, x, p);
            let num = quad_pair(&a, &b, x, p);
            assert!((exact - num).norm() < 1e-12, "{exact} {num}");
        }
    }
}
