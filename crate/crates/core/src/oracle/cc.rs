//! Globally adaptive Clenshaw-Curtis quadrature with nested 9/17-point
//! rules. Integrands may report their own error, which is propagated
//! through the rule weights so nested integrals carry an honest estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

const N: usize = 16;

struct Rules {
    /// `cos(jπ/16)`, `j = 0..=16`.
    nodes: [f64; N + 1],
    w17: [f64; N + 1],
    /// Weights of the 9-point rule on the even nodes.
    w9: [f64; N / 2 + 1],
}

fn cc_weights(n: usize) -> Vec<f64> {
    (0..=n)
        .map(|j| {
            let c = if j == 0 || j == n { 1.0 } else { 2.0 };
            let mut s = 0.0;
            for k in 1..=n / 2 {
                let b = if 2 * k == n { 1.0 } else { 2.0 };
                s += b / (4.0 * (k * k) as f64 - 1.0) * (2.0 * (k * j) as f64 * PI / n as f64).cos();
            }
            c / n as f64 * (1.0 - s)
        })
        .collect()
}

fn rules() -> &'static Rules {
    static RULES: OnceLock<Rules> = OnceLock::new();
    RULES.get_or_init(|| {
        let mut nodes = [0.0; N + 1];
        for (j, x) in nodes.iter_mut().enumerate() {
            *x = (j as f64 * PI / N as f64).cos();
        }
        let mut w17 = [0.0; N + 1];
        w17.copy_from_slice(&cc_weights(N));
        let mut w9 = [0.0; N / 2 + 1];
        w9.copy_from_slice(&cc_weights(N / 2));
        Rules { nodes, w17, w9 }
    })
}

/// An integral estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: u64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate {
            value,
            error: 0.0,
            evaluations: 1,
            converged: true,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CcTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_evals: u64,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Panel {
    fn cmp(&self, o: &Self) -> Ordering {
        self.error
            .total_cmp(&o.error)
            .then_with(|| o.a.total_cmp(&self.a))
    }
}

fn panel<F: FnMut(f64) -> Estimate>(f: &mut F, a: f64, b: f64, evals: &mut u64, failed: &mut bool) -> Panel {
    let r = rules();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut q17 = Complex64::new(0.0, 0.0);
    let mut q9 = Complex64::new(0.0, 0.0);
    let mut inner = 0.0;
    for j in 0..=N {
        let e = f(mid + half * r.nodes[j]);
        *evals += e.evaluations;
        *failed |= !e.converged;
        q17 += e.value * r.w17[j];
        inner += r.w17[j] * e.error;
        if j % 2 == 0 {
            q9 += e.value * r.w9[j / 2];
        }
    }
    Panel {
        a,
        b,
        value: q17 * half,
        error: ((q17 - q9) * half).norm() + inner * half.abs(),
    }
}

/// Integrates `f` over `[a, b]`, splitting first at `breaks`.
pub fn integrate<F: FnMut(f64) -> Estimate>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: CcTolerance) -> Estimate {
    if !(b > a) {
        return Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
            evaluations: 0,
            converged: true,
        };
    }
    let mut cuts = vec![a];
    let mut inside: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inside.sort_by(f64::total_cmp);
    inside.dedup();
    cuts.extend(inside);
    cuts.push(b);

    let mut evals = 0;
    let mut failed = false;
    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        heap.push(panel(&mut f, w[0], w[1], &mut evals, &mut failed));
    }
    let total = |heap: &BinaryHeap<Panel>| {
        let mut parts: Vec<&Panel> = heap.iter().collect();
        parts.sort_by(|x, y| x.a.total_cmp(&y.a));
        parts.iter().fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error))
    };
    let (mut value, mut error) = total(&heap);
    let target = |v: Complex64| tol.abs.max(tol.rel * v.norm());
    while error > target(value) && evals < tol.max_evals {
        let worst = heap.pop().expect("non-empty panel heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            heap.push(worst);
            break;
        }
        let left = panel(&mut f, worst.a, mid, &mut evals, &mut failed);
        let right = panel(&mut f, mid, worst.b, &mut evals, &mut failed);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        if heap.len() % 64 == 0 {
            (value, error) = total(&heap);
        }
    }
    (value, error) = total(&heap);
    Estimate {
        value,
        error,
        evaluations: evals,
        converged: !failed && error <= target(value),
    }
}

/// Plain real integrand convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, breaks: &[f64], tol: CcTolerance) -> Estimate {
    integrate(|x| Estimate::exact(Complex64::new(f(x), 0.0)), a, b, breaks, tol)
}
