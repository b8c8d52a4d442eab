//! Resolvents and functions of the free, half-space and perturbed operators.
//!
//! Lattice operators are diagonalized exactly: torus DFT on every periodic
//! axis, DST-I (Dirichlet) or DCT-II (Neumann) along the normal axis. The
//! continuum surrogate uses the Fourier multiplier on the reference grid.
//! Operators with a potential are solved by GMRES preconditioned on the right
//! with the free resolvent, `(I + V R₀(z)) w = f`, `u = R₀(z) w`.

use std::fmt;
use std::sync::Arc;

use ndarray::{ArrayD, Axis, Dimension, Zip};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::krylov::{gmres, SolveInfo, SolverOptions};
use crate::lattice::{
    even_extend_continuum, even_extend_lattice, odd_extend_continuum, odd_extend_lattice,
    restrict_continuum, restrict_lattice, zero_extend_continuum, ContinuumField, EvenVariant,
    Field, HalfContinuumField, HalfLatticeField, LatticeField, ReferenceGrid, Truncation,
};
use crate::operators::{sample_even_potential, sample_potential, torus_eigenvalues, PotentialSpec};
use crate::transforms::{dct2_axis, dct3_axis, dst1_axis, fft_axes};

/// Minimum distance between `z` and the spectrum before a solve is refused.
pub const SPECTRAL_GUARD: f64 = 1e-8;

/// A spectral parameter, optionally with a potential attached.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResolventQuery {
    z: Complex64,
    potential: Option<PotentialSpec>,
}

impl ResolventQuery {
    /// Free operators: `z ∉ [0, ∞)`.
    pub fn free(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InadmissibleSpectralParameter {
                z,
                reason: "not finite".into(),
            });
        }
        if z.im == 0.0 && z.re >= 0.0 {
            return Err(Error::InadmissibleSpectralParameter {
                z,
                reason: "z lies on [0, ∞)".into(),
            });
        }
        Ok(Self { z, potential: None })
    }

    /// Perturbed operators: `Im z ≠ 0`.
    pub fn with_potential(z: Complex64, potential: PotentialSpec) -> Result<Self> {
        if z.im == 0.0 || !z.im.is_finite() || !z.re.is_finite() {
            return Err(Error::InadmissibleSpectralParameter {
                z,
                reason: "a potential requires Im z ≠ 0".into(),
            });
        }
        Ok(Self {
            z,
            potential: Some(potential),
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn potential(&self) -> Option<&PotentialSpec> {
        self.potential.as_ref()
    }

    pub fn conj(&self) -> Self {
        Self {
            z: self.z.conj(),
            potential: self.potential,
        }
    }
}

#[derive(Clone)]
pub enum PsiKind {
    Identity,
    /// `Ψ_s(λ) = λ^{s/2}`.
    Power(f64),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for PsiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PsiKind::Identity => f.write_str("Identity"),
            PsiKind::Power(s) => write!(f, "Power({s})"),
            PsiKind::Custom(_) => f.write_str("Custom"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// The rate for this `s` is not covered by the `(α, β)` conditions and
    /// rests on a separate estimate for small `s`.
    pub relies_on_cited_estimate: bool,
}

/// Parameter choices for `Ψ_s`: `α = (s+2)/2, β = s−1` for `s ≥ 2`,
/// `α = s, β = s−1` otherwise, and `γ = min{s, 2}`.
pub fn derive_psi_params(s: f64) -> Result<PsiParams> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("power s = {s} must be positive")));
    }
    let (alpha, beta) = if s >= 2.0 { ((s + 2.0) / 2.0, s - 1.0) } else { (s, s - 1.0) };
    Ok(PsiParams {
        alpha,
        beta,
        gamma: s.min(2.0),
        relies_on_cited_estimate: s < 1.0,
    })
}

/// `γ = min{2α − 1, 2α − β − 1}`.
pub fn rate_from_alpha_beta(alpha: f64, beta: f64) -> f64 {
    (2.0 * alpha - 1.0).min(2.0 * alpha - beta - 1.0)
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    let ok = alpha > 0.5 && beta > -0.5 && alpha <= 1.0 + beta && 1.0 + beta < 2.0 * alpha && 2.0 * alpha <= 3.0 + beta;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "(α, β) = ({alpha}, {beta}) violates α > ½, β > −½, α ≤ 1+β < 2α ≤ 3+β"
        )))
    }
}

/// `Ψ` together with its growth parameters.
#[derive(Clone, Debug)]
pub struct SpectralFunction {
    kind: PsiKind,
    params: PsiParams,
}

impl SpectralFunction {
    /// `Ψ(λ) = λ`, i.e. `Ψ_2`.
    pub fn identity() -> Self {
        Self {
            kind: PsiKind::Identity,
            params: derive_psi_params(2.0).expect("s = 2 is valid"),
        }
    }

    pub fn power(s: f64) -> Result<Self> {
        Ok(Self {
            kind: PsiKind::Power(s),
            params: derive_psi_params(s)?,
        })
    }

    /// Custom `Ψ` with declared `(α, β)`; checks `Ψ(0) = 0` and the parameter conditions.
    pub fn custom(f: impl Fn(f64) -> f64 + Send + Sync + 'static, alpha: f64, beta: f64) -> Result<Self> {
        check_alpha_beta(alpha, beta)?;
        if f(0.0) != 0.0 {
            return Err(Error::InvalidParameter(format!("Ψ(0) = {} must be 0", f(0.0))));
        }
        Ok(Self {
            kind: PsiKind::Custom(Arc::new(f)),
            params: PsiParams {
                alpha,
                beta,
                gamma: rate_from_alpha_beta(alpha, beta),
                relies_on_cited_estimate: false,
            },
        })
    }

    /// Power `Ψ_s` with explicitly chosen `(α, β)`.
    pub fn power_with_params(s: f64, alpha: f64, beta: f64) -> Result<Self> {
        check_alpha_beta(alpha, beta)?;
        if !(s > 0.0) {
            return Err(Error::InvalidParameter(format!("power s = {s} must be positive")));
        }
        Ok(Self {
            kind: PsiKind::Power(s),
            params: PsiParams {
                alpha,
                beta,
                gamma: rate_from_alpha_beta(alpha, beta),
                relies_on_cited_estimate: false,
            },
        })
    }

    pub fn kind(&self) -> &PsiKind {
        &self.kind
    }

    pub fn params(&self) -> PsiParams {
        self.params
    }

    pub fn gamma(&self) -> f64 {
        self.params.gamma
    }

    pub fn power_s(&self) -> Option<f64> {
        match self.kind {
            PsiKind::Identity => Some(2.0),
            PsiKind::Power(s) => Some(s),
            PsiKind::Custom(_) => None,
        }
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let lambda = lambda.max(0.0);
        match &self.kind {
            PsiKind::Identity => lambda,
            PsiKind::Power(s) => {
                if *s == 2.0 {
                    lambda
                } else if *s == 1.0 {
                    lambda.sqrt()
                } else {
                    lambda.powf(s / 2.0)
                }
            }
            PsiKind::Custom(f) => f(lambda),
        }
    }
}

/// Checks `z` against the real interval spanned by the (sampled) spectrum.
///
/// Free operators reject all of `[min spectrum, ∞)`, since the continuum
/// symbols are unbounded; `lo` is typically 0.
fn check_spectral_distance(z: Complex64, lo: f64, hi: f64) -> Result<()> {
    if z.im == 0.0 && z.re >= lo {
        return Err(Error::InadmissibleSpectralParameter {
            z,
            reason: format!("z lies on the spectral ray [{lo}, ∞)"),
        });
    }
    let dx = if z.re < lo {
        lo - z.re
    } else if z.re > hi {
        z.re - hi
    } else {
        0.0
    };
    let distance = dx.hypot(z.im);
    if distance < SPECTRAL_GUARD {
        return Err(Error::SpectralProximity { z, distance });
    }
    Ok(())
}

/// Multiplies every entry by `f(i₀, rest)`, where `i₀` is the axis-0 index and
/// `rest` the remaining indices; parallel over axis 0.
fn scale_by_index(data: &mut ArrayD<Complex64>, f: impl Fn(usize, &[usize]) -> Complex64 + Sync) {
    data.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .for_each(|(i0, mut slab)| {
            for (idx, x) in slab.indexed_iter_mut() {
                *x *= f(i0, idx.slice());
            }
        });
}

/// Multiplies a torus field by `f(λ)` where `λ` runs over the torus eigenvalues.
pub fn torus_multiplier(v: &LatticeField, f: impl Fn(f64) -> Complex64 + Sync) -> LatticeField {
    let grid = *v.grid();
    let ev = torus_eigenvalues(grid.half_extent(), grid.h());
    let mut data = v.values().clone();
    let d = grid.dim();
    fft_axes(&mut data, 0..d, false);
    let scale = 1.0 / grid.cardinality() as f64;
    scale_by_index(&mut data, |i0, rest| {
        let lambda: f64 = ev[i0] + rest.iter().map(|&i| ev[i]).sum::<f64>();
        f(lambda) * scale
    });
    fft_axes(&mut data, 0..d, true);
    LatticeField::from_values(grid, data).expect("shape preserved")
}

/// Multiplies a half-lattice field by `f(λ)` in the DST-I / DCT-II eigenbasis.
pub fn half_multiplier(u: &HalfLatticeField, f: impl Fn(f64) -> Complex64 + Sync) -> HalfLatticeField {
    let grid = *u.grid();
    let lattice = *grid.parent();
    let n = lattice.half_extent();
    let h = lattice.h();
    let d = lattice.dim();
    let transverse = torus_eigenvalues(n, h);
    let (normal, normal_scale): (Vec<f64>, f64) = match grid.truncation() {
        Truncation::Dirichlet => (
            (1..n).map(|k| 4.0 / (h * h) * (std::f64::consts::PI * k as f64 / (2.0 * n as f64)).sin().powi(2)).collect(),
            2.0 / n as f64,
        ),
        Truncation::Neumann => (
            (0..n).map(|k| 4.0 / (h * h) * (std::f64::consts::PI * k as f64 / (2.0 * n as f64)).sin().powi(2)).collect(),
            2.0 / n as f64,
        ),
    };
    let mut data = u.values().clone();
    match grid.truncation() {
        Truncation::Dirichlet => dst1_axis(&mut data, 0),
        Truncation::Neumann => dct2_axis(&mut data, 0),
    }
    fft_axes(&mut data, 1..d, false);
    let scale = normal_scale / (lattice.period() as f64).powi(d as i32 - 1);
    scale_by_index(&mut data, |i0, rest| {
        let lambda: f64 = normal[i0] + rest.iter().map(|&i| transverse[i]).sum::<f64>();
        f(lambda) * scale
    });
    fft_axes(&mut data, 1..d, true);
    match grid.truncation() {
        Truncation::Dirichlet => dst1_axis(&mut data, 0),
        Truncation::Neumann => dct3_axis(&mut data, 0),
    }
    HalfLatticeField::from_values(grid, data).expect("shape preserved")
}

/// Multiplies a reference-grid field by `f(|ξ|²)`.
pub fn continuum_multiplier(g: &ContinuumField, f: impl Fn(f64) -> Complex64 + Sync) -> ContinuumField {
    let grid = *g.grid();
    let freq: Vec<f64> = (0..grid.samples()).map(|k| grid.frequency(k).powi(2)).collect();
    let d = grid.dim();
    let mut data = g.values().clone();
    fft_axes(&mut data, 0..d, false);
    let scale = 1.0 / (grid.samples() as f64).powi(d as i32);
    scale_by_index(&mut data, |i0, rest| {
        let r2: f64 = freq[i0] + rest.iter().map(|&i| freq[i]).sum::<f64>();
        f(r2) * scale
    });
    fft_axes(&mut data, 0..d, true);
    ContinuumField::from_values(grid, data).expect("shape preserved")
}

fn torus_bounds(v: &LatticeField) -> (f64, f64) {
    let g = v.grid();
    (0.0, 4.0 * g.dim() as f64 / (g.h() * g.h()))
}

fn half_bounds(u: &HalfLatticeField) -> (f64, f64) {
    let lattice = u.grid().parent();
    let n = lattice.half_extent() as f64;
    let h2 = lattice.h().powi(2);
    let d = lattice.dim() as f64;
    let s2 = |k: f64| (std::f64::consts::PI * k / (2.0 * n)).sin().powi(2);
    match u.grid().truncation() {
        Truncation::Dirichlet => (4.0 / h2 * s2(1.0), 4.0 / h2 * (s2(n - 1.0) + d - 1.0)),
        Truncation::Neumann => (0.0, 4.0 / h2 * (s2(n - 1.0) + d - 1.0)),
    }
}

fn continuum_bounds(g: &ReferenceGrid) -> (f64, f64) {
    let k = std::f64::consts::PI * (g.samples() / 2) as f64 / g.half_length();
    (0.0, g.dim() as f64 * k * k)
}

fn resolvent_symbol(z: Complex64) -> impl Fn(f64) -> Complex64 + Sync {
    move |lambda| (Complex64::new(lambda, 0.0) - z).inv()
}

/// `(H_{0,h} − z)^{-1} v` on the torus; with a potential use [`resolve_full_with_potential`].
pub fn resolve_full(q: &ResolventQuery, v: &LatticeField) -> Result<LatticeField> {
    let (lo, hi) = torus_bounds(v);
    check_spectral_distance(q.z, lo, hi)?;
    Ok(torus_multiplier(v, resolvent_symbol(q.z)))
}

/// Free half-lattice resolvent through the DST-I / DCT-II diagonalization.
fn resolve_half_free(z: Complex64, u: &HalfLatticeField) -> Result<HalfLatticeField> {
    let (lo, hi) = half_bounds(u);
    check_spectral_distance(z, lo.min(0.0), hi)?;
    Ok(half_multiplier(u, resolvent_symbol(z)))
}

fn require(u: &HalfLatticeField, t: Truncation) -> Result<()> {
    if u.grid().truncation() != t {
        return Err(Error::mismatch(format!("{t:?}-truncated half lattice"), u.grid().to_string()));
    }
    Ok(())
}

/// `(H^D_{0,h} + V_h − z)^{-1} u`.
pub fn resolve_dirichlet(q: &ResolventQuery, u: &HalfLatticeField, opts: &SolverOptions) -> Result<HalfLatticeField> {
    require(u, Truncation::Dirichlet)?;
    resolve_half(q, u, opts).map(|r| r.0)
}

/// `(H^N_{0,h} + V_h − z)^{-1} u`.
pub fn resolve_neumann(q: &ResolventQuery, u: &HalfLatticeField, opts: &SolverOptions) -> Result<HalfLatticeField> {
    require(u, Truncation::Neumann)?;
    resolve_half(q, u, opts).map(|r| r.0)
}

/// Half-lattice resolvent with solver diagnostics (no iterations for free operators).
pub fn resolve_half(q: &ResolventQuery, u: &HalfLatticeField, opts: &SolverOptions) -> Result<(HalfLatticeField, SolveInfo)> {
    match q.potential() {
        None => Ok((resolve_half_free(q.z, u)?, SolveInfo { iterations: 0, residual_history: vec![] })),
        Some(spec) => {
            let vh = sample_potential(spec, *u.grid());
            let z = q.z;
            resolve_half_free(z, u)?;
            let apply = |w: &HalfLatticeField| -> Result<HalfLatticeField> {
                let r0w = half_multiplier(w, resolvent_symbol(z));
                let mut out = vh.multiply(&r0w)?;
                out.axpy(Complex64::new(1.0, 0.0), w);
                Ok(out)
            };
            let (w, info) = gmres(apply, u, opts)?;
            Ok((half_multiplier(&w, resolvent_symbol(z)), info))
        }
    }
}

/// Route (a): extend, solve on the torus, restrict. Free operators only.
///
/// `variant` selects the even extension for Neumann fields and is ignored for
/// Dirichlet fields.
pub fn resolve_half_by_extension(q: &ResolventQuery, u: &HalfLatticeField, variant: EvenVariant) -> Result<HalfLatticeField> {
    if q.potential().is_some() {
        return Err(Error::InvalidParameter("extension route supports free operators only".into()));
    }
    let t = u.grid().truncation();
    let ext = match t {
        Truncation::Dirichlet => odd_extend_lattice(u)?,
        Truncation::Neumann => even_extend_lattice(u, variant)?,
    };
    Ok(restrict_lattice(&resolve_full(q, &ext)?, t))
}

/// `(H_{0,h} + W − z)^{-1} v` on the torus for a real potential array `W`.
pub fn resolve_full_with_potential(
    z: Complex64,
    potential: &ArrayD<f64>,
    v: &LatticeField,
    opts: &SolverOptions,
) -> Result<(LatticeField, SolveInfo)> {
    if z.im == 0.0 {
        return Err(Error::InadmissibleSpectralParameter {
            z,
            reason: "a potential requires Im z ≠ 0".into(),
        });
    }
    if potential.shape() != v.values().shape() {
        return Err(Error::mismatch(format!("potential of shape {:?}", v.values().shape()), format!("{:?}", potential.shape())));
    }
    let apply = |w: &LatticeField| -> Result<LatticeField> {
        let mut out = torus_multiplier(w, resolvent_symbol(z));
        Zip::from(out.data_mut()).and(potential).for_each(|o, &p| *o *= p);
        out.axpy(Complex64::new(1.0, 0.0), w);
        Ok(out)
    };
    let (w, info) = gmres(apply, v, opts)?;
    Ok((torus_multiplier(&w, resolvent_symbol(z)), info))
}

/// `(H₀ + ℰV − z)^{-1} f` on the reference grid.
pub fn resolve_continuum(q: &ResolventQuery, f: &ContinuumField, opts: &SolverOptions) -> Result<ContinuumField> {
    resolve_continuum_with_info(q, f, opts).map(|r| r.0)
}

pub fn resolve_continuum_with_info(
    q: &ResolventQuery,
    f: &ContinuumField,
    opts: &SolverOptions,
) -> Result<(ContinuumField, SolveInfo)> {
    let (lo, hi) = continuum_bounds(f.grid());
    check_spectral_distance(q.z, lo, hi)?;
    let z = q.z;
    match q.potential() {
        None => Ok((continuum_multiplier(f, resolvent_symbol(z)), SolveInfo { iterations: 0, residual_history: vec![] })),
        Some(spec) => {
            let vs = sample_even_potential(spec, f.grid());
            let apply = |w: &ContinuumField| -> Result<ContinuumField> {
                let mut out = continuum_multiplier(w, resolvent_symbol(z));
                Zip::from(out.data_mut()).and(&vs).for_each(|o, &p| *o *= p);
                out.axpy(Complex64::new(1.0, 0.0), w);
                Ok(out)
            };
            let (w, info) = gmres(apply, f, opts)?;
            Ok((continuum_multiplier(&w, resolvent_symbol(z)), info))
        }
    }
}

/// Half-space continuum resolvent by reflection: `ℛ (H₀ + ℰV − z)^{-1} 𝒪f` (Dirichlet)
/// or `ℛ (H₀ + ℰV − z)^{-1} ℰf` (Neumann).
pub fn resolve_continuum_halfspace(
    q: &ResolventQuery,
    f: &HalfContinuumField,
    bc: Truncation,
    opts: &SolverOptions,
) -> Result<HalfContinuumField> {
    let ext = match bc {
        Truncation::Dirichlet => odd_extend_continuum(f),
        Truncation::Neumann => even_extend_continuum(f),
    };
    Ok(restrict_continuum(&resolve_continuum(q, &ext, opts)?))
}

/// `Ψ(H_{0,h}) v` on the torus.
pub fn apply_psi_full(psi: &SpectralFunction, v: &LatticeField) -> LatticeField {
    torus_multiplier(v, |l| Complex64::new(psi.eval(l), 0.0))
}

/// `Ψ(H^{D/N}_{0,h}) u` through the transform diagonal.
pub fn apply_psi_half(psi: &SpectralFunction, u: &HalfLatticeField) -> HalfLatticeField {
    half_multiplier(u, |l| Complex64::new(psi.eval(l), 0.0))
}

/// `Ψ(H₀) g` on the reference grid.
pub fn apply_psi_continuum(psi: &SpectralFunction, g: &ContinuumField) -> ContinuumField {
    continuum_multiplier(g, |r2| Complex64::new(psi.eval(r2), 0.0))
}

/// `Ψ` of the half-lattice operator by the extension route: `ℛ_h Ψ(H_{0,h}) X_h u`.
pub fn apply_psi_half_by_extension(psi: &SpectralFunction, u: &HalfLatticeField, variant: EvenVariant) -> Result<HalfLatticeField> {
    let t = u.grid().truncation();
    let ext = match t {
        Truncation::Dirichlet => odd_extend_lattice(u)?,
        Truncation::Neumann => even_extend_lattice(u, variant)?,
    };
    Ok(restrict_lattice(&apply_psi_full(psi, &ext), t))
}

fn psi_range(psi: &SpectralFunction, lo: f64, hi: f64) -> (f64, f64) {
    // Ψ is continuous, so its range over [lo, hi] is an interval; sample it
    let samples = 257;
    let mut range = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..samples {
        let l = lo + (hi - lo) * i as f64 / (samples - 1) as f64;
        let v = psi.eval(l);
        range = (range.0.min(v), range.1.max(v));
    }
    (range.0.min(0.0), range.1)
}

/// `(Ψ(H_{0,h}) − z)^{-1} v` on the torus.
pub fn resolve_psi_full(psi: &SpectralFunction, q: &ResolventQuery, v: &LatticeField) -> Result<LatticeField> {
    let (lo, hi) = torus_bounds(v);
    let (a, b) = psi_range(psi, lo, hi);
    check_spectral_distance(q.z, a, b)?;
    let z = q.z;
    Ok(torus_multiplier(v, move |l| (Complex64::new(psi.eval(l), 0.0) - z).inv()))
}

/// `(Ψ(H^{D/N}_{0,h}) − z)^{-1} u` through the transform diagonal.
pub fn resolve_psi_half(psi: &SpectralFunction, q: &ResolventQuery, u: &HalfLatticeField) -> Result<HalfLatticeField> {
    let (lo, hi) = half_bounds(u);
    let (a, b) = psi_range(psi, lo.min(0.0), hi);
    check_spectral_distance(q.z, a, b)?;
    let z = q.z;
    Ok(half_multiplier(u, move |l| (Complex64::new(psi.eval(l), 0.0) - z).inv()))
}

/// `(Ψ(H₀) − z)^{-1} g` on the reference grid.
pub fn resolve_psi_continuum(psi: &SpectralFunction, q: &ResolventQuery, g: &ContinuumField) -> Result<ContinuumField> {
    let (lo, hi) = continuum_bounds(g.grid());
    let (a, b) = psi_range(psi, lo, hi);
    check_spectral_distance(q.z, a, b)?;
    let z = q.z;
    Ok(continuum_multiplier(g, move |r2| (Complex64::new(psi.eval(r2), 0.0) - z).inv()))
}

/// `‖ℛ Ψ(H₀) 𝒪f − ℛ Ψ(H₀) E₀f‖`: reflection versus zero extension.
pub fn compare_zero_extension(psi: &SpectralFunction, f: &HalfContinuumField) -> f64 {
    let odd = restrict_continuum(&apply_psi_continuum(psi, &odd_extend_continuum(f)));
    let zero = restrict_continuum(&apply_psi_continuum(psi, &zero_extend_continuum(f)));
    let mut diff = odd;
    diff.axpy(Complex64::new(-1.0, 0.0), &zero);
    diff.norm()
}
