//! FFT helpers on centered index ranges and per-axis lane iteration over
//! flattened hypercubic arrays.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Sign of the exponent in a discrete Fourier sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Discrete Fourier sums over centered indices `J, M ∈ [-n/2, n/2)`:
/// `out(M) = Σ_J in(J) exp(±2πi M J / n)`, unnormalized.
pub struct CenteredDft {
    n: usize,
    plus: Arc<dyn Fft<f64>>,
    minus: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl CenteredDft {
    pub fn new(n: usize) -> Self {
        assert!(n % 2 == 0, "centered transforms need an even length");
        let mut planner = FftPlanner::new();
        let plus = planner.plan_fft_inverse(n);
        let minus = planner.plan_fft_forward(n);
        let scratch_len = plus
            .get_inplace_scratch_len()
            .max(minus.get_inplace_scratch_len());
        CenteredDft {
            n,
            plus,
            minus,
            scratch_len,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.scratch_len]
    }

    pub fn apply(&self, lane: &mut [Complex64], sign: Sign, scratch: &mut [Complex64]) {
        debug_assert_eq!(lane.len(), self.n);
        for (j, v) in lane.iter_mut().enumerate() {
            if j % 2 == 1 {
                *v = -*v;
            }
        }
        match sign {
            Sign::Plus => self.plus.process_with_scratch(lane, scratch),
            Sign::Minus => self.minus.process_with_scratch(lane, scratch),
        }
        let flip_all = (self.n / 2) % 2 == 1;
        for (m, v) in lane.iter_mut().enumerate() {
            if (m % 2 == 1) != flip_all {
                *v = -*v;
            }
        }
    }
}

/// Signed frequency index of FFT bin `k` for length `n`.
pub fn signed_bin(k: usize, n: usize) -> i64 {
    if k < n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Periodic band-limited translation of a uniformly sampled lane.
///
/// Returns samples of the trigonometric interpolant at `x_i + shift`, with
/// `shift` measured in units of the sample spacing. The Nyquist mode is
/// discarded so that real input stays real.
pub struct Translator {
    n: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl Translator {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch_len = fwd
            .get_inplace_scratch_len()
            .max(inv.get_inplace_scratch_len());
        Translator {
            n,
            fwd,
            inv,
            scratch_len,
        }
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.scratch_len]
    }

    pub fn shift(&self, lane: &mut [Complex64], shift: f64, scratch: &mut [Complex64]) {
        let n = self.n;
        self.fwd.process_with_scratch(lane, scratch);
        let inv_n = 1.0 / n as f64;
        for (k, v) in lane.iter_mut().enumerate() {
            if n % 2 == 0 && k == n / 2 {
                *v = Complex64::new(0.0, 0.0);
                continue;
            }
            let q = signed_bin(k, n) as f64;
            *v *= Complex64::from_polar(inv_n, 2.0 * PI * q * shift / n as f64);
        }
        self.inv.process_with_scratch(lane, scratch);
    }
}

/// Calls `f` on every lane of a flattened `[n; rank]` row-major array
/// along `axis`. Lanes are gathered into a buffer and written back.
pub fn for_each_lane<F>(data: &mut [Complex64], n: usize, rank: usize, axis: usize, mut f: F)
where
    F: FnMut(&mut [Complex64], usize),
{
    debug_assert_eq!(data.len(), n.pow(rank as u32));
    let stride = n.pow((rank - 1 - axis) as u32);
    let outer = n.pow(axis as u32);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut lane_index = 0;
    for o in 0..outer {
        for s in 0..stride {
            let base = o * n * stride + s;
            for k in 0..n {
                buf[k] = data[base + k * stride];
            }
            f(&mut buf, lane_index);
            for k in 0..n {
                data[base + k * stride] = buf[k];
            }
            lane_index += 1;
        }
    }
}

/// Decomposes a flat row-major index into per-axis indices.
pub fn unflatten(mut idx: usize, n: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % n;
        idx /= n;
    }
}

/// Flattens per-axis indices into a row-major index.
pub fn flatten(idx: &[usize], n: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + i)
}
