//! Generating functions `φ₀` with compactly supported, reflection-even
//! Fourier transforms, and sampling-based certification of their properties.
//!
//! Every generating function has product form
//! `φ̂₀(ξ) = Π_j (2π)^{-1/2} b(ξ_j)` for a real, even window `b`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::num::NonZeroUsize;
use std::sync::Arc;

use gauss_quad::GaussLegendre;

use crate::error::{Error, Result};

type Window = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct GeneratingFunction {
    name: String,
    window: Window,
    support_radius: f64,
    /// Points in `(0, r)` where the window is not smooth; used to split quadratures.
    breakpoints: Vec<f64>,
    /// Closed-form `(1/π)∫₀^a cos(xt) dt` applies on `[0, flat_until]`.
    flat_until: f64,
    claimed_tau: f64,
}

impl fmt::Debug for GeneratingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratingFunction")
            .field("name", &self.name)
            .field("support_radius", &self.support_radius)
            .field("claimed_tau", &self.claimed_tau)
            .finish()
    }
}

/// Degree-7 smoothstep used by the Meyer window.
pub fn meyer_transition(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    t.powi(4) * (35.0 - 84.0 * t + 70.0 * t * t - 20.0 * t.powi(3))
}

fn shannon_window(t: f64) -> f64 {
    let a = t.abs();
    if a < PI {
        1.0
    } else if a == PI {
        FRAC_1_SQRT_2
    } else {
        0.0
    }
}

fn meyer_window(t: f64) -> f64 {
    let a = t.abs();
    if a <= 2.0 * PI / 3.0 {
        1.0
    } else if a >= 4.0 * PI / 3.0 {
        0.0
    } else {
        (PI / 2.0 * meyer_transition(3.0 * a / (2.0 * PI) - 1.0)).cos()
    }
}

/// `φ̂₀ = (2π)^{-d/2}·1_{[-π,π]^d}`; `φ₀` is a product of `sinc`.
///
/// The window takes the value `1/√2` at `±π`, so the periodization identity
/// also holds on the cell boundary.
pub fn make_shannon() -> GeneratingFunction {
    GeneratingFunction {
        name: "shannon".into(),
        window: Arc::new(shannon_window),
        support_radius: PI,
        breakpoints: vec![],
        flat_until: PI,
        claimed_tau: 1.0,
    }
}

/// Meyer window: flat on `|t| ≤ 2π/3`, supported in `|t| ≤ 4π/3`.
pub fn make_meyer() -> GeneratingFunction {
    GeneratingFunction {
        name: "meyer".into(),
        window: Arc::new(meyer_window),
        support_radius: 4.0 * PI / 3.0,
        breakpoints: vec![2.0 * PI / 3.0],
        flat_until: 2.0 * PI / 3.0,
        claimed_tau: 4.0,
    }
}

impl GeneratingFunction {
    /// A user-supplied even window `b` with `supp b ⊆ [-r, r]`.
    pub fn custom(
        name: impl Into<String>,
        window: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_radius: f64,
        breakpoints: Vec<f64>,
        claimed_tau: f64,
    ) -> Result<Self> {
        if !(support_radius > 0.0 && support_radius <= 1.5 * PI) {
            return Err(Error::InvalidParameter(format!(
                "support radius {support_radius} must lie in (0, 3π/2]"
            )));
        }
        Ok(Self {
            name: name.into(),
            window: Arc::new(window),
            support_radius,
            breakpoints,
            flat_until: 0.0,
            claimed_tau,
        })
    }

    /// Same generating function with the window multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let inner = self.window.clone();
        Self {
            name: format!("{}*{factor}", self.name),
            window: Arc::new(move |t| factor * inner(t)),
            flat_until: 0.0,
            breakpoints: {
                let mut b = self.breakpoints.clone();
                if self.flat_until > 0.0 && self.flat_until < self.support_radius {
                    b.push(self.flat_until);
                }
                b
            },
            ..self.clone()
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    pub fn claimed_tau(&self) -> f64 {
        self.claimed_tau
    }

    /// Whether the claimed decay exponent meets `τ > d`.
    pub fn satisfies_decay(&self, dim: usize) -> bool {
        self.claimed_tau > dim as f64
    }

    /// Always true: the windows are even.
    pub fn reflection_even(&self) -> bool {
        true
    }

    /// One-dimensional window `b(t) = (2π)^{1/2} φ̂₀(t)`.
    pub fn window(&self, t: f64) -> f64 {
        (self.window)(t)
    }

    pub fn fourier(&self, xi: &[f64]) -> f64 {
        let norm = (2.0 * PI).powf(-0.5 * xi.len() as f64);
        norm * xi.iter().map(|&t| self.window(t)).product::<f64>()
    }

    /// Claimed lower bound `c₀` of `|φ̂₀|` on `[-π/2, π/2]^d`.
    pub fn lower_bound(&self, dim: usize) -> f64 {
        (2.0 * PI).powf(-0.5 * dim as f64) * self.window(PI / 2.0).min(self.window(0.0))
    }

    /// `φ₀(x) = (1/π)∫₀^r b(t) cos(xt) dt` in one dimension.
    pub fn spatial_1d(&self, x: f64) -> f64 {
        let quad = GaussLegendre::new(NonZeroUsize::new(24).unwrap());
        self.spatial_1d_with(&quad, x)
    }

    fn spatial_1d_with(&self, quad: &GaussLegendre, x: f64) -> f64 {
        let a = self.flat_until.min(self.support_radius);
        let mut total = if x.abs() < 1e-12 {
            a
        } else {
            (a * x).sin() / x
        };
        let mut edges = vec![a];
        edges.extend(self.breakpoints.iter().copied().filter(|&b| b > a && b < self.support_radius));
        edges.push(self.support_radius);
        edges.sort_by(f64::total_cmp);
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            // resolve the oscillation: about four panels per period
            let panels = ((hi - lo) * x.abs() / (2.0 * PI) * 4.0).ceil().max(1.0) as usize;
            let step = (hi - lo) / panels as f64;
            for k in 0..panels {
                let p0 = lo + k as f64 * step;
                total += quad.integrate(p0, p0 + step, |t| self.window(t) * (x * t).cos());
            }
        }
        total / PI
    }

    pub fn spatial(&self, x: &[f64]) -> f64 {
        x.iter().map(|&t| self.spatial_1d(t)).product()
    }
}

/// `sup_ξ |Σ_k |φ̂₀(ξ + 2πk)|² − (2π)^{-d}|` over a uniform grid on `[-π, π]^d`.
pub fn validate_orthonormality(g: &GeneratingFunction, dim: usize, grid_points: usize) -> Result<f64> {
    if grid_points < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: grid_points,
        });
    }
    let axis: Vec<f64> = (0..grid_points)
        .map(|i| -PI + 2.0 * PI * i as f64 / (grid_points - 1) as f64)
        .collect();
    let target = (2.0 * PI).powi(-(dim as i32));
    let shifts: Vec<f64> = (-2..=2).map(|k| 2.0 * PI * k as f64).collect();
    let mut worst = 0.0f64;
    let mut xi_idx = vec![0usize; dim];
    let mut xi = vec![0.0; dim];
    loop {
        let mut sum = 0.0;
        let mut k_idx = vec![0usize; dim];
        loop {
            for j in 0..dim {
                xi[j] = axis[xi_idx[j]] + shifts[k_idx[j]];
            }
            sum += g.fourier(&xi).powi(2);
            if !advance(&mut k_idx, shifts.len()) {
                break;
            }
        }
        worst = worst.max((sum - target).abs());
        if !advance(&mut xi_idx, grid_points) {
            break;
        }
    }
    Ok(worst)
}

fn advance(idx: &mut [usize], len: usize) -> bool {
    for i in idx.iter_mut() {
        *i += 1;
        if *i < len {
            return true;
        }
        *i = 0;
    }
    false
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupportCertificate {
    pub support_radius: f64,
    pub c0_measured: f64,
}

/// Samples `φ̂₀` on `[-2π, 2π]` per axis: checks that it vanishes outside
/// `[-r, r]`, that `r ≤ 3π/2`, and measures `min |φ̂₀|` on `[-π/2, π/2]^d`.
pub fn validate_support_and_lower_bound(
    g: &GeneratingFunction,
    dim: usize,
    samples: usize,
) -> Result<SupportCertificate> {
    if samples < 3 {
        return Err(Error::InsufficientPoints {
            needed: 3,
            got: samples,
        });
    }
    let r = g.support_radius();
    if r > 1.5 * PI {
        return Err(Error::Validation(format!(
            "support radius {r} exceeds 3π/2"
        )));
    }
    let mut offending = Vec::new();
    let mut min_inner = f64::INFINITY;
    for i in 0..samples {
        let t = -2.0 * PI + 4.0 * PI * i as f64 / (samples - 1) as f64;
        let b = g.window(t);
        if t.abs() > r && b != 0.0 {
            offending.push(format!("b({t:.6}) = {b:.3e} outside support"));
        }
        if (g.window(-t) - b).abs() > 0.0 {
            offending.push(format!("b({t:.6}) != b({:.6})", -t));
        }
        let inner = -PI / 2.0 + PI * i as f64 / (samples - 1) as f64;
        min_inner = min_inner.min(g.window(inner).abs());
    }
    if min_inner <= 0.0 {
        offending.push("window vanishes inside [-π/2, π/2]".into());
    }
    if !offending.is_empty() {
        offending.truncate(10);
        return Err(Error::Validation(offending.join("; ")));
    }
    // product form: the minimum over the cube is the product of the per-axis minima
    let c0 = ((2.0 * PI).powf(-0.5) * min_inner).powi(dim as i32);
    Ok(SupportCertificate {
        support_radius: r,
        c0_measured: c0,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayEstimate {
    pub tau: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Fits the decay exponent of `|φ₀(x)|` on `x ∈ [1, 100]`.
///
/// `|φ₀|` oscillates through zeros, so the fit uses the envelope: the maximum
/// over 24 logarithmically spaced windows, each placed at its geometric
/// midpoint, from 20000 uniform samples.
pub fn estimate_decay(g: &GeneratingFunction) -> Result<DecayEstimate> {
    estimate_decay_with(g, 20_000, 24)
}

pub fn estimate_decay_with(g: &GeneratingFunction, samples: usize, windows: usize) -> Result<DecayEstimate> {
    use rayon::prelude::*;
    if windows < 3 || samples < windows {
        return Err(Error::InsufficientPoints {
            needed: windows.max(3),
            got: samples,
        });
    }
    let quad = GaussLegendre::new(NonZeroUsize::new(16).unwrap());
    let (lo, hi) = (1.0f64, 100.0f64);
    let values: Vec<(f64, f64)> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let x = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
            (x, g.spatial_1d_with(&quad, x).abs())
        })
        .collect();
    let ratio = (hi / lo).ln() / windows as f64;
    let mut points = Vec::with_capacity(windows);
    for w in 0..windows {
        let a = lo * (ratio * w as f64).exp();
        let c = lo * (ratio * (w + 1) as f64).exp();
        let envelope = values
            .iter()
            .filter(|(x, _)| *x >= a && (*x < c || (w + 1 == windows && *x <= c)))
            .map(|&(_, v)| v)
            .fold(0.0f64, f64::max);
        if envelope > 0.0 {
            points.push(((a * c).sqrt(), envelope));
        }
    }
    let fit = crate::fit::fit_power_law(&points)?;
    Ok(DecayEstimate {
        tau: -fit.slope,
        intercept: fit.intercept,
        r2: fit.r2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shannon_values() {
        let g = make_shannon();
        assert_eq!(g.fourier(&[0.0]), (2.0 * PI).powf(-0.5));
        assert_eq!(g.fourier(&[0.0, 0.0]), 1.0 / (2.0 * PI));
        assert_eq!(g.fourier(&[3.2, 0.0]), 0.0);
        assert!(!g.satisfies_decay(1));
        let cert = validate_support_and_lower_bound(&g, 2, 1001).unwrap();
        assert!((cert.c0_measured - 1.0 / (2.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn meyer_values() {
        let g = make_meyer();
        assert_eq!(g.fourier(&[PI / 2.0, -PI / 2.0]), 1.0 / (2.0 * PI));
        assert!((g.window(PI) - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(g.window(4.0 * PI / 3.0), 0.0);
        assert!(g.satisfies_decay(3));
        let cert = validate_support_and_lower_bound(&g, 1, 1001).unwrap();
        assert!((cert.c0_measured - (2.0 * PI).powf(-0.5)).abs() < 1e-15);
    }

    #[test]
    fn transition_partition_of_unity() {
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let s = meyer_transition(t) + meyer_transition(1.0 - t);
            assert!((s - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn orthonormality() {
        for g in [make_shannon(), make_meyer()] {
            assert!(validate_orthonormality(&g, 1, 1001).unwrap() <= 1e-14, "{}", g.name());
            assert!(validate_orthonormality(&g, 2, 101).unwrap() <= 1e-14, "{}", g.name());
        }
        let broken = make_meyer().scaled(1.1);
        let dev = validate_orthonormality(&broken, 1, 1001).unwrap();
        assert!((dev - 0.21 / (2.0 * PI)).abs() < 1e-12);
        assert!(validate_orthonormality(&broken, 1, 2).is_err());
    }

    #[test]
    fn evenness_and_product_structure() {
        for g in [make_shannon(), make_meyer()] {
            for i in 0..200 {
                let t = -5.0 + 0.05 * i as f64;
                assert_eq!(g.window(t), g.window(-t));
                let (a, b) = (g.fourier(&[t, 0.3 * t]), g.fourier(&[t]) * g.fourier(&[0.3 * t]));
                assert!((a - b).abs() <= 1e-16);
            }
        }
    }

    #[test]
    fn spatial_shannon_is_sinc() {
        let g = make_shannon();
        for &x in &[0.0, 0.25, 1.0, 2.5, 7.3, 40.1] {
            let sinc = if x == 0.0 { 1.0 } else { (PI * x).sin() / (PI * x) };
            assert!((g.spatial_1d(x) - sinc).abs() < 1e-14, "x = {x}");
        }
        // the scaled copy integrates numerically over the whole band
        let s = g.scaled(1.0);
        assert!((s.spatial_1d(2.5) - g.spatial_1d(2.5)).abs() < 1e-12);
    }

    #[test]
    fn meyer_spatial_matches_brute_force() {
        let g = make_meyer();
        for &x in &[0.0, 0.7, 3.0, 11.0] {
            let n = 200_000;
            let r = g.support_radius();
            let dt = r / n as f64;
            // midpoint rule oracle
            let brute: f64 = (0..n)
                .map(|i| {
                    let t = (i as f64 + 0.5) * dt;
                    g.window(t) * (x * t).cos()
                })
                .sum::<f64>()
                * dt
                / PI;
            assert!((g.spatial_1d(x) - brute).abs() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn decay_exponents() {
        let meyer = estimate_decay_with(&make_meyer(), 5000, 24).unwrap();
        assert!((3.5..=4.5).contains(&meyer.tau), "meyer tau {}", meyer.tau);
        let shannon = estimate_decay_with(&make_shannon(), 5000, 24).unwrap();
        assert!((0.8..=1.2).contains(&shannon.tau), "shannon tau {}", shannon.tau);
    }

    #[test]
    fn custom_rejects_wide_support() {
        assert!(GeneratingFunction::custom("w", |_| 1.0, 5.0, vec![], 1.0).is_err());
    }
}
