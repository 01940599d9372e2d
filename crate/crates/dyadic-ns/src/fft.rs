//! Multi-dimensional complex FFT over flat row-major buffers.
//!
//! Transforms are delegated to `rustfft`; plans are cached per thread so the
//! same engine is safe to use from rayon workers without shared state.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(PlanCache::default());
}

#[derive(Default)]
struct PlanCache {
    planner: Option<FftPlanner<f64>>,
    forward: HashMap<usize, Arc<dyn Fft<f64>>>,
    inverse: HashMap<usize, Arc<dyn Fft<f64>>>,
}

fn with_plan<R>(len: usize, inverse: bool, f: impl FnOnce(&Arc<dyn Fft<f64>>) -> R) -> R {
    PLANS.with(|cache| {
        let mut cache = cache.borrow_mut();
        let planner = cache.planner.get_or_insert_with(FftPlanner::new);
        let plan = if inverse {
            planner.plan_fft_inverse(len)
        } else {
            planner.plan_fft_forward(len)
        };
        let map = if inverse {
            &mut cache.inverse
        } else {
            &mut cache.forward
        };
        let plan = map.entry(len).or_insert(plan).clone();
        drop(cache);
        f(&plan)
    })
}

/// In-place FFT along one axis of a row-major `shape`-dimensional buffer.
fn fft_axis(data: &mut [Complex64], shape: &[usize], axis: usize, inverse: bool) {
    let n = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let total: usize = shape.iter().product();
    debug_assert_eq!(data.len(), total);
    let outer_count = total / (n * stride);

    with_plan(n, inverse, |plan| {
        let mut line = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); plan.get_inplace_scratch_len()];
        for outer in 0..outer_count {
            let block = outer * n * stride;
            for inner in 0..stride {
                let base = block + inner;
                for j in 0..n {
                    line[j] = data[base + j * stride];
                }
                plan.process_with_scratch(&mut line, &mut scratch);
                for j in 0..n {
                    data[base + j * stride] = line[j];
                }
            }
        }
    });
}

/// Forward transform: physical samples -> Fourier coefficients.
///
/// Normalization is `û(k) = (1/N) Σ_x u(x) e^{-i k·x}` so that a pure mode
/// `e^{i k·x}` has coefficient 1 and the mean of `|u|²` equals `Σ_k |û(k)|²`.
pub fn forward(data: &mut [Complex64], shape: &[usize]) {
    for axis in 0..shape.len() {
        fft_axis(data, shape, axis, false);
    }
    let scale = 1.0 / shape.iter().product::<usize>() as f64;
    for v in data.iter_mut() {
        *v *= scale;
    }
}

/// Inverse transform: Fourier coefficients -> physical samples,
/// `u(x) = Σ_k û(k) e^{i k·x}` (no normalization factor).
pub fn inverse(data: &mut [Complex64], shape: &[usize]) {
    for axis in 0..shape.len() {
        fft_axis(data, shape, axis, true);
    }
}
