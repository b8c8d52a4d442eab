//! Axis-wise fast transforms over `ndarray` fields.
//!
//! All transforms are unnormalized, matching `rustfft`/`rustdct`. Callers
//! apply the scale factors themselves.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use ndarray::{ArrayD, Axis, Zip};
use num_complex::Complex64;
use rustdct::{DctPlanner, Dst1, TransformType2And3};
use rustfft::{Fft, FftPlanner};

type FftKey = (usize, bool);

fn fft_cache() -> &'static Mutex<(FftPlanner<f64>, HashMap<FftKey, Arc<dyn Fft<f64>>>)> {
    static CACHE: OnceLock<Mutex<(FftPlanner<f64>, HashMap<FftKey, Arc<dyn Fft<f64>>>)>> =
        OnceLock::new();
    CACHE.get_or_init(|| Mutex::new((FftPlanner::new(), HashMap::new())))
}

pub(crate) fn fft_plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    let mut guard = fft_cache().lock().expect("fft plan cache poisoned");
    let (planner, plans) = &mut *guard;
    plans
        .entry((len, inverse))
        .or_insert_with(|| {
            if inverse {
                planner.plan_fft_inverse(len)
            } else {
                planner.plan_fft_forward(len)
            }
        })
        .clone()
}

struct DctPlans {
    planner: DctPlanner<f64>,
    dst1: HashMap<usize, Arc<dyn Dst1<f64>>>,
    dct23: HashMap<usize, Arc<dyn TransformType2And3<f64>>>,
}

fn dct_cache() -> &'static Mutex<DctPlans> {
    static CACHE: OnceLock<Mutex<DctPlans>> = OnceLock::new();
    CACHE.get_or_init(|| {
        Mutex::new(DctPlans {
            planner: DctPlanner::new(),
            dst1: HashMap::new(),
            dct23: HashMap::new(),
        })
    })
}

fn dst1_plan(len: usize) -> Arc<dyn Dst1<f64>> {
    let mut guard = dct_cache().lock().expect("dct plan cache poisoned");
    let DctPlans { planner, dst1, .. } = &mut *guard;
    dst1.entry(len)
        .or_insert_with(|| planner.plan_dst1(len))
        .clone()
}

fn dct23_plan(len: usize) -> Arc<dyn TransformType2And3<f64>> {
    let mut guard = dct_cache().lock().expect("dct plan cache poisoned");
    let DctPlans { planner, dct23, .. } = &mut *guard;
    dct23
        .entry(len)
        .or_insert_with(|| planner.plan_dct2(len))
        .clone()
}

/// Unnormalized complex FFT along one axis. `inverse` selects the `e^{+i}` kernel.
pub(crate) fn fft_axis(data: &mut ArrayD<Complex64>, axis: usize, inverse: bool) {
    let len = data.shape()[axis];
    if len <= 1 {
        return;
    }
    let plan = fft_plan(len, inverse);
    let scratch_len = plan.get_inplace_scratch_len();
    Zip::from(data.lanes_mut(Axis(axis))).par_for_each(|mut lane| {
        let mut buf: Vec<Complex64> = lane.iter().copied().collect();
        let mut scratch = vec![Complex64::default(); scratch_len];
        plan.process_with_scratch(&mut buf, &mut scratch);
        for (dst, src) in lane.iter_mut().zip(buf) {
            *dst = src;
        }
    });
}

pub(crate) fn fft_axes(data: &mut ArrayD<Complex64>, axes: std::ops::Range<usize>, inverse: bool) {
    for axis in axes {
        fft_axis(data, axis, inverse);
    }
}

#[cfg(test)]
pub(crate) fn fft_all(data: &mut ArrayD<Complex64>, inverse: bool) {
    let ndim = data.ndim();
    fft_axes(data, 0..ndim, inverse);
}

#[derive(Clone, Copy)]
enum RealTransform {
    Dst1,
    Dct2,
    Dct3,
}

fn real_transform_axis(data: &mut ArrayD<Complex64>, axis: usize, kind: RealTransform) {
    let len = data.shape()[axis];
    if len == 0 {
        return;
    }
    let dst = matches!(kind, RealTransform::Dst1).then(|| dst1_plan(len));
    let dct = (!matches!(kind, RealTransform::Dst1)).then(|| dct23_plan(len));
    Zip::from(data.lanes_mut(Axis(axis))).par_for_each(|mut lane| {
        let mut re: Vec<f64> = lane.iter().map(|c| c.re).collect();
        let mut im: Vec<f64> = lane.iter().map(|c| c.im).collect();
        for buf in [&mut re, &mut im] {
            match kind {
                RealTransform::Dst1 => dst.as_ref().unwrap().process_dst1(buf),
                RealTransform::Dct2 => dct.as_ref().unwrap().process_dct2(buf),
                RealTransform::Dct3 => dct.as_ref().unwrap().process_dct3(buf),
            }
        }
        for ((dst, r), i) in lane.iter_mut().zip(re).zip(im) {
            *dst = Complex64::new(r, i);
        }
    });
}

/// `X_k = Σ_n x_n sin(π(k+1)(n+1)/(m+1))`; applying it twice multiplies by `(m+1)/2`.
pub(crate) fn dst1_axis(data: &mut ArrayD<Complex64>, axis: usize) {
    real_transform_axis(data, axis, RealTransform::Dst1);
}

/// `X_k = Σ_n x_n cos(πk(2n+1)/(2m))`.
pub(crate) fn dct2_axis(data: &mut ArrayD<Complex64>, axis: usize) {
    real_transform_axis(data, axis, RealTransform::Dct2);
}

/// `X_k = x_0/2 + Σ_{n≥1} x_n cos(πn(2k+1)/(2m))`; `dct3(dct2(x)) = (m/2)·x`.
pub(crate) fn dct3_axis(data: &mut ArrayD<Complex64>, axis: usize) {
    real_transform_axis(data, axis, RealTransform::Dct3);
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::IxDyn;
    use std::f64::consts::PI;

    fn sample(len: usize) -> ArrayD<Complex64> {
        ArrayD::from_shape_fn(IxDyn(&[len]), |i| {
            Complex64::new((i[0] as f64 * 0.7).sin() + 0.1, (i[0] as f64 * 1.3).cos())
        })
    }

    #[test]
    fn dst1_matches_naive_sum() {
        let m = 7;
        let x = sample(m);
        let mut y = x.clone();
        dst1_axis(&mut y, 0);
        for k in 0..m {
            let naive: Complex64 = (0..m)
                .map(|n| x[[n]] * (PI * ((k + 1) * (n + 1)) as f64 / (m + 1) as f64).sin())
                .sum();
            assert!((naive - y[[k]]).norm() < 1e-12);
        }
    }

    #[test]
    fn dct2_matches_naive_sum_and_dct3_inverts() {
        let m = 9;
        let x = sample(m);
        let mut y = x.clone();
        dct2_axis(&mut y, 0);
        for k in 0..m {
            let naive: Complex64 = (0..m)
                .map(|n| x[[n]] * (PI * (k * (2 * n + 1)) as f64 / (2 * m) as f64).cos())
                .sum();
            assert!((naive - y[[k]]).norm() < 1e-12);
        }
        dct3_axis(&mut y, 0);
        for n in 0..m {
            assert!((y[[n]] * (2.0 / m as f64) - x[[n]]).norm() < 1e-12);
        }
    }

    #[test]
    fn fft_roundtrip_2d() {
        let x = ArrayD::from_shape_fn(IxDyn(&[6, 4]), |i| {
            Complex64::new(i[0] as f64 - 2.0 * i[1] as f64, 0.5 * (i[0] * i[1]) as f64)
        });
        let mut y = x.clone();
        fft_all(&mut y, false);
        fft_all(&mut y, true);
        for (a, b) in x.iter().zip(y.iter()) {
            assert!((a * 24.0 - b).norm() < 1e-12);
        }
    }
}
