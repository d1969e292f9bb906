//! One-dimensional quadrature used by the fast evaluation paths.
//!
//! Everything here integrates complex-valued integrands over finite
//! intervals. The adaptive driver is a globally adaptive Gauss-Kronrod
//! 7/15 scheme; the fixed rules carry a halving-based error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of a single quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: Complex64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl Quad {
    pub fn zero() -> Self {
        Quad {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            converged: true,
        }
    }
}

/// Stopping rule for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    /// Hard cap on integrand evaluations.
    pub max_evals: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance {
            abs: 0.0,
            rel,
            max_evals: 200_000,
        }
    }
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    resabs: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut resabs = fc.norm() * WGK[7];
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        kron += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let value = kron * h;
    let resabs = resabs * h.abs();
    let raw = ((kron - gauss) * h).norm();
    let floor = 50.0 * f64::EPSILON * resabs;
    Panel {
        a,
        b,
        value,
        error: raw.max(floor),
        resabs,
    }
}

/// Globally adaptive Gauss-Kronrod 7/15 integration of `f` over `[a, b]`.
///
/// The interval is first cut into `panels` equal pieces at every breakpoint
/// segment. Subdivision stops once the summed error estimate drops below
/// `max(tol.abs, tol.rel * max(|I|, 1e-3 * ∫|f|))`, or once it reaches the
/// rounding floor.
pub fn adaptive<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    panels: usize,
    tol: Tolerance,
) -> Quad {
    if a == b {
        return Quad::zero();
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts = vec![lo];
    let mut inner: Vec<f64> = breakpoints
        .iter()
        .copied()
        .filter(|&x| x > lo && x < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(hi);

    let panels = panels.max(1);
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    for w in cuts.windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for k in 0..panels {
            let pa = w[0] + h * k as f64;
            let pb = if k + 1 == panels { w[1] } else { pa + h };
            heap.push(gk15(&mut f, pa, pb));
            evals += 15;
        }
    }

    let totals = |heap: &BinaryHeap<Panel>| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut e = 0.0;
        let mut r = 0.0;
        for p in heap.iter() {
            v += p.value;
            e += p.error;
            r += p.resabs;
        }
        (v, e, r)
    };

    let (mut value, mut error, mut resabs) = totals(&heap);
    // Rounding limits the attainable accuracy to a small multiple of eps·∫|f|.
    let target = |v: Complex64, r: f64| {
        tol.abs
            .max(tol.rel * v.norm().max(1e-3 * r))
            .max(100.0 * f64::EPSILON * r)
    };
    let mut converged = error <= target(value, resabs);
    while !converged && evals + 30 <= tol.max_evals {
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            // Panel can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let left = gk15(&mut f, worst.a, mid);
        let right = gk15(&mut f, mid, worst.b);
        evals += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        resabs += left.resabs + right.resabs - worst.resabs;
        heap.push(left);
        heap.push(right);
        // Re-sum periodically so that running updates do not drift.
        if heap.len() % 64 == 0 {
            let t = totals(&heap);
            value = t.0;
            error = t.1;
            resabs = t.2;
        }
        converged = error <= target(value, resabs);
    }
    let (value, error, _) = {
        let mut panels: Vec<Panel> = heap.into_vec();
        panels.sort_by(|x, y| x.a.total_cmp(&y.a));
        let mut v = Complex64::new(0.0, 0.0);
        let mut e = 0.0;
        let mut r = 0.0;
        for p in &panels {
            v += p.value;
            e += p.error;
            r += p.resabs;
        }
        (v, e, r)
    };
    Quad {
        value: value * sign,
        error,
        evaluations: evals,
        converged,
    }
}

/// Fixed-node rule family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedFamily {
    GaussLegendre,
    Trapezoid,
}

/// Nodes and weights of a fixed rule mapped to a finite interval.
#[derive(Debug, Clone)]
pub struct FixedRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FixedRule {
    pub fn new(family: FixedFamily, n: usize, a: f64, b: f64) -> Self {
        match family {
            FixedFamily::GaussLegendre => {
                let (x, w) = gauss_legendre(n);
                let c = 0.5 * (a + b);
                let h = 0.5 * (b - a);
                FixedRule {
                    nodes: x.iter().map(|&xi| c + h * xi).collect(),
                    weights: w.iter().map(|&wi| h * wi).collect(),
                }
            }
            FixedFamily::Trapezoid => {
                let n = n.max(2);
                let h = (b - a) / (n - 1) as f64;
                let nodes = (0..n).map(|i| a + h * i as f64).collect();
                let weights = (0..n)
                    .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
                    .collect();
                FixedRule { nodes, weights }
            }
        }
    }

    pub fn apply<F: FnMut(f64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }
}

/// Fixed rule with `n` nodes, error estimated from the same family at `n/2`.
pub fn fixed<F: FnMut(f64) -> Complex64>(
    mut f: F,
    a: f64,
    b: f64,
    family: FixedFamily,
    n: usize,
) -> Quad {
    if a == b {
        return Quad::zero();
    }
    let fine = FixedRule::new(family, n, a, b).apply(&mut f);
    let coarse = FixedRule::new(family, (n / 2).max(2), a, b).apply(&mut f);
    Quad {
        value: fine,
        error: (fine - coarse).norm(),
        evaluations: n + (n / 2).max(2),
        converged: true,
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "need at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, z);
        if d != 0.0 {
            dp = d;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
