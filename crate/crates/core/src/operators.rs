//! Finite-difference Laplacians on the torus and the two half-lattices,
//! their symbols and eigenvalues, and potentials.

use std::f64::consts::PI;

use ndarray::{ArrayD, ArrayViewD, ArrayViewMutD, Axis, Dimension, IxDyn, Zip};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::calculus::SpectralFunction;
use crate::error::{Error, Result};
use crate::lattice::{
    signed, EvenVariant, HalfLatticeField, HalfLatticeGrid, LatticeField, LatticeGrid,
    ReferenceGrid, Truncation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StencilKind {
    Full,
    Dirichlet,
    Neumann,
}

impl From<Truncation> for StencilKind {
    fn from(t: Truncation) -> Self {
        match t {
            Truncation::Dirichlet => StencilKind::Dirichlet,
            Truncation::Neumann => StencilKind::Neumann,
        }
    }
}

/// `H_{0,h}`, `H^D_{0,h}` or `H^N_{0,h}` on a truncated lattice.
///
/// Transverse directions are periodic. Along the normal axis the Dirichlet
/// operator has zero boundary values at `n₁ = 0` and `n₁ = N`; the Neumann
/// operator has the boundary row `u(1) - u(2)` and the mirrored far row
/// `u(N) - u(N-1)`. Both are restrictions of the torus operator to its odd
/// and half-plane-even subspaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilOperator {
    kind: StencilKind,
    lattice: LatticeGrid,
}

impl StencilOperator {
    pub fn new(kind: StencilKind, lattice: LatticeGrid) -> Self {
        Self { kind, lattice }
    }

    pub fn full(lattice: LatticeGrid) -> Self {
        Self::new(StencilKind::Full, lattice)
    }

    pub fn dirichlet(lattice: LatticeGrid) -> Self {
        Self::new(StencilKind::Dirichlet, lattice)
    }

    pub fn neumann(lattice: LatticeGrid) -> Self {
        Self::new(StencilKind::Neumann, lattice)
    }

    pub fn kind(&self) -> StencilKind {
        self.kind
    }

    pub fn lattice(&self) -> &LatticeGrid {
        &self.lattice
    }

    pub fn truncation(&self) -> Option<Truncation> {
        match self.kind {
            StencilKind::Full => None,
            StencilKind::Dirichlet => Some(Truncation::Dirichlet),
            StencilKind::Neumann => Some(Truncation::Neumann),
        }
    }

    pub fn half_grid(&self) -> Option<HalfLatticeGrid> {
        self.truncation().map(|t| self.lattice.half(t))
    }

    pub fn apply_full(&self, v: &LatticeField) -> Result<LatticeField> {
        if self.kind != StencilKind::Full {
            return Err(Error::mismatch(
                format!("{:?} operator on a half lattice", self.kind),
                "torus field",
            ));
        }
        if v.grid() != &self.lattice {
            return Err(Error::mismatch(self.lattice.to_string(), v.grid().to_string()));
        }
        let mut out = v.values().clone();
        torus_laplacian(v.values(), &mut out, 0, self.lattice.h());
        LatticeField::from_values(self.lattice, out)
    }

    pub fn apply_half(&self, u: &HalfLatticeField) -> Result<HalfLatticeField> {
        let grid = self.half_grid().ok_or_else(|| {
            Error::mismatch("torus field for the full operator", u.grid().to_string())
        })?;
        if u.grid() != &grid {
            return Err(Error::mismatch(grid.to_string(), u.grid().to_string()));
        }
        let h2 = self.lattice.h().powi(2);
        let src = u.values();
        let mut out = src.clone();
        torus_laplacian(src, &mut out, 1, self.lattice.h());
        let len = grid.normal_len();
        let neumann = self.kind == StencilKind::Neumann;
        for i in 0..len {
            let mut row = out.index_axis_mut(Axis(0), i);
            let centre = src.index_axis(Axis(0), i);
            let up = (i + 1 < len).then(|| src.index_axis(Axis(0), i + 1));
            let down = (i > 0).then(|| src.index_axis(Axis(0), i - 1));
            // mirrored neighbour at the Neumann walls
            let weight = if neumann && (i == 0 || i + 1 == len) { 1.0 } else { 2.0 };
            add_scaled(&mut row, &centre, weight / h2);
            if let Some(up) = up {
                add_scaled(&mut row, &up, -1.0 / h2);
            }
            if let Some(down) = down {
                add_scaled(&mut row, &down, -1.0 / h2);
            }
        }
        HalfLatticeField::from_values(grid, out)
    }

    /// Eigenvalues along the normal axis (all axes for the torus), in transform order.
    pub fn normal_eigenvalues(&self) -> Vec<f64> {
        let n = self.lattice.half_extent();
        let h = self.lattice.h();
        match self.kind {
            StencilKind::Full => torus_eigenvalues(n, h),
            StencilKind::Dirichlet => (1..n).map(|k| sin2_eigenvalue(k as f64, n, h)).collect(),
            StencilKind::Neumann => (0..n).map(|k| sin2_eigenvalue(k as f64, n, h)).collect(),
        }
    }

    /// All eigenvalues of the truncated operator, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.lattice.dim();
        let torus = torus_eigenvalues(self.lattice.half_extent(), self.lattice.h());
        let mut values = self.normal_eigenvalues();
        for _ in 1..d {
            values = values
                .iter()
                .flat_map(|&a| torus.iter().map(move |&b| a + b))
                .collect();
        }
        values.sort_by(f64::total_cmp);
        values
    }

    /// `[min, max]` of the spectrum.
    pub fn spectral_bounds(&self) -> (f64, f64) {
        let e = self.eigenvalues();
        (e[0], e[e.len() - 1])
    }
}

fn sin2_eigenvalue(k: f64, n: usize, h: f64) -> f64 {
    4.0 / (h * h) * (PI * k / (2.0 * n as f64)).sin().powi(2)
}

/// `(4/h²) sin²(πj/(2N))` for `j` in torus storage order.
pub fn torus_eigenvalues(n: usize, h: f64) -> Vec<f64> {
    (0..2 * n).map(|j| sin2_eigenvalue(signed(j, 2 * n) as f64, n, h)).collect()
}

fn add_scaled(dst: &mut ArrayViewMutD<'_, Complex64>, src: &ArrayViewD<'_, Complex64>, a: f64) {
    Zip::from(dst).and(src).for_each(|d, &s| *d += s * a);
}

/// Writes the periodic second-difference part over axes `first_axis..` into `out`
/// (which must start as a copy of `src`).
fn torus_laplacian(src: &ArrayD<Complex64>, out: &mut ArrayD<Complex64>, first_axis: usize, h: f64) {
    let h2 = h * h;
    let periodic_axes = src.ndim() - first_axis;
    out.mapv_inplace(|v| v * (2.0 * periodic_axes as f64 / h2));
    for axis in first_axis..src.ndim() {
        let n = src.shape()[axis];
        for i in 0..n {
            let mut row = out.index_axis_mut(Axis(axis), i);
            add_scaled(&mut row, &src.index_axis(Axis(axis), (i + 1) % n), -1.0 / h2);
            add_scaled(&mut row, &src.index_axis(Axis(axis), (i + n - 1) % n), -1.0 / h2);
        }
    }
}

/// `g_h(ξ) = (4/h²) Σ_j sin²(hξ_j/2)`.
pub fn lattice_symbol(h: f64, xi: &[f64]) -> f64 {
    4.0 / (h * h) * xi.iter().map(|&t| (h * t / 2.0).sin().powi(2)).sum::<f64>()
}

/// `|ξ|²`.
pub fn continuum_symbol(xi: &[f64]) -> f64 {
    xi.iter().map(|t| t * t).sum()
}

/// `G_{0,h}(ξ) = Ψ(g_h(ξ))`.
pub fn psi_lattice_symbol(psi: &SpectralFunction, h: f64, xi: &[f64]) -> f64 {
    psi.eval(lattice_symbol(h, xi))
}

/// Closed-form potentials on the closed half-space `x₁ ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "id", rename_all = "kebab-case")]
pub enum PotentialSpec {
    /// `cos(x₁) e^{-|x|²}`, Lipschitz.
    CosGauss,
    /// `|sin x₁|^{1/2} e^{-|x|²}`, Hölder of order ½.
    SqrtSinGauss,
    Constant { value: f64 },
}

impl PotentialSpec {
    pub fn parse(id: &str) -> Result<Self> {
        match id {
            "cos-gauss" => Ok(PotentialSpec::CosGauss),
            "sqrt-sin-gauss" => Ok(PotentialSpec::SqrtSinGauss),
            "zero" => Ok(PotentialSpec::Constant { value: 0.0 }),
            other => Err(Error::InvalidParameter(format!("unknown potential '{other}'"))),
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            PotentialSpec::CosGauss => "cos-gauss",
            PotentialSpec::SqrtSinGauss => "sqrt-sin-gauss",
            PotentialSpec::Constant { .. } => "constant",
        }
    }

    /// Declared Hölder order θ.
    pub fn theta(&self) -> f64 {
        match self {
            PotentialSpec::SqrtSinGauss => 0.5,
            _ => 1.0,
        }
    }

    pub fn sup_bound(&self) -> f64 {
        match self {
            PotentialSpec::Constant { value } => value.abs(),
            _ => 1.0,
        }
    }

    /// Declared Hölder constant (an upper bound for the measured ratio).
    pub fn holder_constant(&self) -> f64 {
        match self {
            PotentialSpec::CosGauss => 2.0,
            PotentialSpec::SqrtSinGauss => 3.0,
            PotentialSpec::Constant { .. } => 0.0,
        }
    }

    /// `V(x)` for `x₁ ≥ 0`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().map(|t| t * t).sum();
        match self {
            PotentialSpec::CosGauss => x[0].cos() * (-r2).exp(),
            PotentialSpec::SqrtSinGauss => x[0].sin().abs().sqrt() * (-r2).exp(),
            PotentialSpec::Constant { value } => *value,
        }
    }

    /// `ℰV(x) = V(|x₁|, x′)`.
    pub fn eval_even(&self, x: &[f64]) -> f64 {
        let mut y = x.to_vec();
        y[0] = y[0].abs();
        self.eval(&y)
    }

    pub fn is_constant(&self) -> Option<f64> {
        match self {
            PotentialSpec::Constant { value } => Some(*value),
            _ => None,
        }
    }
}

/// `V_h(n) = V(hn)` on a half-lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretePotential {
    grid: HalfLatticeGrid,
    values: ArrayD<f64>,
}

impl DiscretePotential {
    pub fn grid(&self) -> &HalfLatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn get(&self, n: &[i64]) -> f64 {
        let period = self.grid.parent().period();
        let mut idx: Vec<usize> = n.iter().map(|&k| k.rem_euclid(period as i64) as usize).collect();
        idx[0] = (n[0] - 1) as usize;
        self.values[IxDyn(&idx)]
    }

    /// `u ↦ V_h u`.
    pub fn multiply(&self, u: &HalfLatticeField) -> Result<HalfLatticeField> {
        if u.grid() != &self.grid {
            return Err(Error::mismatch(self.grid.to_string(), u.grid().to_string()));
        }
        let mut out = u.values().clone();
        Zip::from(&mut out).and(&self.values).for_each(|o, &v| *o *= v);
        HalfLatticeField::from_values(self.grid, out)
    }
}

pub fn sample_potential(spec: &PotentialSpec, grid: HalfLatticeGrid) -> DiscretePotential {
    let h = grid.parent().h();
    let period = grid.parent().period();
    let values = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
        let x: Vec<f64> = idx
            .slice()
            .iter()
            .enumerate()
            .map(|(axis, &i)| {
                if axis == 0 {
                    h * (i + 1) as f64
                } else {
                    h * signed(i, period) as f64
                }
            })
            .collect();
        spec.eval(&x)
    });
    DiscretePotential { grid, values }
}

/// `ℰV` as an evaluator on all of `R^d`.
pub fn even_extend_potential(spec: PotentialSpec) -> impl Fn(&[f64]) -> f64 + Send + Sync {
    move |x| spec.eval_even(x)
}

/// `ℰV` sampled on the reference grid.
pub fn sample_even_potential(spec: &PotentialSpec, grid: &ReferenceGrid) -> ArrayD<f64> {
    ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
        let x: Vec<f64> = idx.slice().iter().map(|&i| grid.position(i)).collect();
        spec.eval_even(&x)
    })
}

/// Comparison of the lattice even extension `ℰ_h V_h` with the sampled `(ℰV)_h`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionDiscrepancy {
    pub max_abs: f64,
    /// Normal indices `n₁` where the two differ.
    pub slices: Vec<i64>,
}

pub fn potential_extension_discrepancy(
    spec: &PotentialSpec,
    lattice: LatticeGrid,
    variant: EvenVariant,
) -> ExtensionDiscrepancy {
    let n = lattice.half_extent() as i64;
    let h = lattice.h();
    let mut max_abs = 0.0f64;
    let mut slices = Vec::new();
    // transverse coordinates do not interact with the normal reflection; sample one line per n₁
    let transverse = vec![0.0; lattice.dim() - 1];
    for n1 in -n + 1..=0 {
        let source = match variant {
            EvenVariant::PaperLiteral => {
                if n1 == 0 {
                    1
                } else {
                    -n1
                }
            }
            EvenVariant::HalfPlane => 1 - n1,
        };
        let mut x = vec![h * source as f64];
        x.extend(&transverse);
        let discrete = spec.eval(&x);
        x[0] = h * n1 as f64;
        let sampled = spec.eval_even(&x);
        let diff = (discrete - sampled).abs();
        if diff > 0.0 {
            slices.push(n1);
        }
        max_abs = max_abs.max(diff);
    }
    ExtensionDiscrepancy { max_abs, slices }
}

/// `sup |V(x) - V(y)| / |x - y|^θ` over random pairs in `[0, 3] × [-3, 3]^{d-1}`.
///
/// Half of the pairs are close (`|x - y| ≤ 1e-3`) so the estimate probes the
/// small-scale behaviour that θ describes.
pub fn measure_holder_ratio(spec: &PotentialSpec, dim: usize, pairs: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = spec.theta();
    let mut worst = 0.0f64;
    for i in 0..pairs {
        let x: Vec<f64> = (0..dim)
            .map(|j| if j == 0 { rng.random_range(0.0..3.0) } else { rng.random_range(-3.0..3.0) })
            .collect();
        let scale = if i % 2 == 0 { 1e-3 } else { 1.0 };
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(j, &t)| {
                let s = t + scale * rng.random_range(-1.0..1.0);
                if j == 0 {
                    s.abs()
                } else {
                    s
                }
            })
            .collect();
        let dist = x.iter().zip(&y).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        if dist > 0.0 {
            worst = worst.max((spec.eval(&x) - spec.eval(&y)).abs() / dist.powf(theta));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{even_extend_lattice, odd_extend_lattice, Field};
    use crate::transforms::fft_all;
    use proptest::{prop_assert, proptest};

    fn impulse_half(grid: HalfLatticeGrid, n: &[i64]) -> HalfLatticeField {
        let mut u = HalfLatticeField::zeros(grid);
        u.set(n, Complex64::new(1.0, 0.0)).unwrap();
        u
    }

    fn random_half(grid: HalfLatticeGrid, seed: u64) -> HalfLatticeField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        HalfLatticeField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_full(grid: LatticeGrid, seed: u64) -> LatticeField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        LatticeField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn stencil_examples() {
        let lat = LatticeGrid::new(2, 1.0, 4).unwrap();
        let d = StencilOperator::dirichlet(lat);
        let out = d.apply_half(&impulse_half(d.half_grid().unwrap(), &[1, 0])).unwrap();
        assert_eq!(out.get(&[1, 0]).re, 4.0);
        assert_eq!(out.get(&[2, 0]).re, -1.0);
        assert_eq!(out.get(&[1, 1]).re, -1.0);
        assert_eq!(out.get(&[1, -1]).re, -1.0);
        let nm = StencilOperator::neumann(lat);
        let out = nm.apply_half(&impulse_half(nm.half_grid().unwrap(), &[1, 0])).unwrap();
        assert_eq!(out.get(&[1, 0]).re, 3.0);
        let full = StencilOperator::full(lat);
        let c = LatticeField::from_fn(lat, |_| Complex64::new(2.5, -1.0));
        assert!(full.apply_full(&c).unwrap().max_abs() < 1e-15);
        assert!(d.apply_full(&c).is_err());
    }

    #[test]
    fn symbol_values() {
        assert_eq!(lattice_symbol(1.0, &[0.0, 0.0]), 0.0);
        assert!((lattice_symbol(1.0, &[PI]) - 4.0).abs() < 1e-15);
        let h = 0.1;
        for i in 0..=100 {
            let xi = [i as f64 / 100.0 * 0.8, (i as f64 / 100.0 * 0.6) * 0.5];
            let r = continuum_symbol(&xi);
            let bound = h * h * xi.iter().map(|t| t.powi(4)).sum::<f64>() / 12.0;
            assert!((lattice_symbol(h, &xi) - r).abs() <= bound + 1e-15);
        }
    }

    #[test]
    fn fourier_diagonalization() {
        let lat = LatticeGrid::new(2, 0.3, 5).unwrap();
        let v = random_full(lat, 9);
        let direct = StencilOperator::full(lat).apply_full(&v).unwrap();
        let mut spec = v.values().clone();
        fft_all(&mut spec, false);
        let ev = torus_eigenvalues(5, 0.3);
        for (idx, val) in spec.indexed_iter_mut() {
            *val *= ev[idx[0]] + ev[idx[1]];
        }
        fft_all(&mut spec, true);
        spec.mapv_inplace(|x| x / 100.0);
        let via = LatticeField::from_values(lat, spec).unwrap();
        assert!(via.max_abs_diff(&direct) < 1e-12);
    }

    #[test]
    fn intertwining() {
        for dim in [1, 2] {
            let lat = LatticeGrid::new(dim, 0.25, 6).unwrap();
            let full = StencilOperator::full(lat);
            let d = StencilOperator::dirichlet(lat);
            let u = random_half(d.half_grid().unwrap(), 1);
            let lhs = full.apply_full(&odd_extend_lattice(&u).unwrap()).unwrap();
            let rhs = odd_extend_lattice(&d.apply_half(&u).unwrap()).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-13 * lhs.max_abs());

            let nm = StencilOperator::neumann(lat);
            let u = random_half(nm.half_grid().unwrap(), 2);
            let lhs = full.apply_full(&even_extend_lattice(&u, EvenVariant::HalfPlane).unwrap()).unwrap();
            let rhs = even_extend_lattice(&nm.apply_half(&u).unwrap(), EvenVariant::HalfPlane).unwrap();
            assert!(lhs.max_abs_diff(&rhs) <= 1e-13 * lhs.max_abs());
        }
    }

    #[test]
    fn eigenvalue_lists() {
        let lat = LatticeGrid::new(1, 1.0, 4).unwrap();
        let ev = StencilOperator::dirichlet(lat).eigenvalues();
        let expect = [2.0 - 2f64.sqrt(), 2.0, 2.0 + 2f64.sqrt()];
        for (a, b) in ev.iter().zip(expect) {
            assert!((a - b).abs() < 1e-14);
        }
        let lat = LatticeGrid::new(1, 1.0, 2).unwrap();
        assert_eq!(StencilOperator::full(lat).eigenvalues().len(), 4);
        let lat2 = LatticeGrid::new(2, 0.5, 3).unwrap();
        assert_eq!(StencilOperator::neumann(lat2).eigenvalues().len(), 18);
    }

    proptest! {
        #[test]
        fn symmetric_and_nonnegative(seed in 0u64..1000, kind in 0usize..3) {
            let lat = LatticeGrid::new(2, 0.7, 4).unwrap();
            let kinds = [StencilKind::Full, StencilKind::Dirichlet, StencilKind::Neumann];
            let op = StencilOperator::new(kinds[kind], lat);
            let (vw, wv, vv, norm) = match op.half_grid() {
                None => {
                    let v = random_full(lat, seed);
                    let w = random_full(lat, seed + 7);
                    let (av, aw) = (op.apply_full(&v).unwrap(), op.apply_full(&w).unwrap());
                    (av.inner(&w), v.inner(&aw), v.inner(&av), v.norm() * w.norm())
                }
                Some(grid) => {
                    let v = random_half(grid, seed);
                    let w = random_half(grid, seed + 7);
                    let (av, aw) = (op.apply_half(&v).unwrap(), op.apply_half(&w).unwrap());
                    (av.inner(&w), v.inner(&aw), v.inner(&av), v.norm() * w.norm())
                }
            };
            let op_norm = 8.0 / 0.49;
            prop_assert!((vw - wv).norm() <= 1e-12 * norm * op_norm);
            prop_assert!(vv.re >= -1e-12 && vv.im.abs() <= 1e-12 * norm);
        }
    }

    #[test]
    fn potential_sampling_and_extension() {
        let lat = LatticeGrid::new(2, 0.5, 8).unwrap();
        let vh = sample_potential(&PotentialSpec::CosGauss, lat.half(Truncation::Dirichlet));
        assert!((vh.get(&[1, 0]) - 0.5f64.cos() * (-0.25f64).exp()).abs() < 1e-15);
        let ev = even_extend_potential(PotentialSpec::SqrtSinGauss);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..10 {
            let x = [rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)];
            assert_eq!(ev(&[-x[0], x[1]]), ev(&x));
        }
    }

    #[test]
    fn extension_discrepancy_locations() {
        let h = 0.1;
        let lat = LatticeGrid::covering(1, h, 4.0).unwrap();
        let literal = potential_extension_discrepancy(&PotentialSpec::CosGauss, lat, EvenVariant::PaperLiteral);
        assert_eq!(literal.slices, vec![0]);
        let lat2 = LatticeGrid::covering(1, h / 4.0, 4.0).unwrap();
        let finer = potential_extension_discrepancy(&PotentialSpec::CosGauss, lat2, EvenVariant::PaperLiteral);
        // V(h) - V(0) = O(h²) here because V is even in x₁; bounded by C h^θ with θ = 1
        assert!(literal.max_abs <= PotentialSpec::CosGauss.holder_constant() * h);
        assert!(finer.max_abs < literal.max_abs);
        let hp = potential_extension_discrepancy(&PotentialSpec::SqrtSinGauss, lat, EvenVariant::HalfPlane);
        assert!(hp.max_abs <= PotentialSpec::SqrtSinGauss.holder_constant() * h.sqrt());
    }

    #[test]
    fn holder_ratios_are_finite() {
        let r = measure_holder_ratio(&PotentialSpec::SqrtSinGauss, 1, 10_000, 3);
        assert!(r.is_finite() && r <= PotentialSpec::SqrtSinGauss.holder_constant());
        let r = measure_holder_ratio(&PotentialSpec::CosGauss, 2, 10_000, 3);
        assert!(r <= PotentialSpec::CosGauss.holder_constant());
    }
}
