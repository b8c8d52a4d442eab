//! Grids, fields, and the reflection / extension / restriction operators.
//!
//! The infinite lattice `hZ^d` is truncated to a torus with `2N` sites per
//! axis. Storage along every torus axis is in FFT ("wrapped") order: storage
//! index `i` holds signed index `i` for `i < N` and `i - 2N` otherwise, so
//! signed index `-N` lives at storage index `N`.
//!
//! Axis 0 is always the normal direction `n₁`; the remaining axes are
//! transverse and periodic. Half-lattice fields store `n₁ = 1, 2, …` from
//! storage index 0.
//!
//! The continuum surrogate is a periodic reference grid on `[-L, L)^d` with
//! `M` samples per axis, stored in the same wrapped order. Half-space
//! continuum fields keep the closed slab `p₁ ∈ {0, …, M/2}` (both reflection
//! planes `x₁ = 0` and `x₁ = ±L` included) with trapezoid weights `½` on the
//! two planes, which makes the even extension an exact `√2`-isometry.

use std::fmt;

use ndarray::{ArrayD, ArrayViewD, ArrayViewMutD, Axis, Dimension, IxDyn, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Storage index of signed index `n` on a cycle of length `period`.
#[inline]
pub fn wrap(n: i64, period: usize) -> usize {
    n.rem_euclid(period as i64) as usize
}

/// Signed index of storage index `i` on a cycle of length `period` (`period` even).
#[inline]
pub fn signed(i: usize, period: usize) -> i64 {
    if i < period / 2 {
        i as i64
    } else {
        i as i64 - period as i64
    }
}

/// A torus `{-N, …, N-1}^d` with mesh `h`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeGrid {
    dim: usize,
    h: f64,
    half_extent: usize,
}

impl LatticeGrid {
    pub fn new(dim: usize, h: f64, half_extent: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::InvalidGrid(format!("mesh size {h} must be positive")));
        }
        if half_extent < 2 {
            return Err(Error::InvalidGrid(format!(
                "half extent {half_extent} must be at least 2"
            )));
        }
        Ok(Self {
            dim,
            h,
            half_extent,
        })
    }

    /// Lattice covering the box `[-L, L)^d`, i.e. `N = L/h` (must be an integer).
    pub fn covering(dim: usize, h: f64, half_length: f64) -> Result<Self> {
        let ratio = half_length / h;
        let n = ratio.round();
        if (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::InvalidGrid(format!(
                "half length {half_length} is not an integer multiple of h = {h}"
            )));
        }
        Self::new(dim, h, n as usize)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `N`: the torus holds `2N` sites per axis.
    pub fn half_extent(&self) -> usize {
        self.half_extent
    }

    pub fn period(&self) -> usize {
        2 * self.half_extent
    }

    pub fn half_length(&self) -> f64 {
        self.h * self.half_extent as f64
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.period(); self.dim]
    }

    pub fn cardinality(&self) -> usize {
        self.period().pow(self.dim as u32)
    }

    /// `h^d`, the weight of one site in the `ℓ²(hZ^d)` norm.
    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.dim as i32)
    }

    pub fn wrap(&self, n: i64) -> usize {
        wrap(n, self.period())
    }

    pub fn signed(&self, i: usize) -> i64 {
        signed(i, self.period())
    }

    pub fn half(&self, truncation: Truncation) -> HalfLatticeGrid {
        HalfLatticeGrid {
            parent: *self,
            truncation,
        }
    }
}

impl fmt::Display for LatticeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "torus(d={}, h={}, N={})",
            self.dim, self.h, self.half_extent
        )
    }
}

/// Which half-lattice a field lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Truncation {
    /// `n₁ ∈ {1, …, N-1}`; matches the reflection-odd subspace of the torus.
    Dirichlet,
    /// `n₁ ∈ {1, …, N}`.
    Neumann,
}

/// The discrete even extension used on Neumann half-lattices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvenVariant {
    /// `n₁ = 0 ↦ u(1, n′)`, `n₁ ≤ -1 ↦ u(-n₁, n′)`.
    PaperLiteral,
    /// Reflection across the plane `n₁ = ½`: `n₁ ≤ 0 ↦ u(1 - n₁, n′)`.
    #[default]
    HalfPlane,
}

impl fmt::Display for EvenVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvenVariant::PaperLiteral => f.write_str("paper-literal"),
            EvenVariant::HalfPlane => f.write_str("half-plane"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HalfLatticeGrid {
    parent: LatticeGrid,
    truncation: Truncation,
}

impl HalfLatticeGrid {
    pub fn parent(&self) -> &LatticeGrid {
        &self.parent
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    /// Number of stored `n₁` layers.
    pub fn normal_len(&self) -> usize {
        match self.truncation {
            Truncation::Dirichlet => self.parent.half_extent - 1,
            Truncation::Neumann => self.parent.half_extent,
        }
    }

    pub fn shape(&self) -> Vec<usize> {
        let mut shape = self.parent.shape();
        shape[0] = self.normal_len();
        shape
    }

    pub fn cardinality(&self) -> usize {
        self.shape().iter().product()
    }
}

impl fmt::Display for HalfLatticeGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "half-{:?}({})", self.truncation, self.parent)
    }
}

/// Periodic sampling grid on `[-L, L)^d` with `M` samples per axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceGrid {
    dim: usize,
    half_length: f64,
    samples: usize,
}

impl ReferenceGrid {
    pub fn new(dim: usize, half_length: f64, samples: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if !(half_length > 0.0 && half_length.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "half length {half_length} must be positive"
            )));
        }
        if samples < 4 || samples % 2 != 0 {
            return Err(Error::InvalidGrid(format!(
                "sample count {samples} must be even and at least 4"
            )));
        }
        Ok(Self {
            dim,
            half_length,
            samples,
        })
    }

    /// Smallest even sample count `M ≥ oversample · 3N` on the lattice's box.
    ///
    /// `oversample = 1` is the minimal grid with `h_f ≤ 2h/3`.
    pub fn for_lattice(lattice: &LatticeGrid, oversample: f64) -> Result<Self> {
        if !(oversample >= 1.0 && oversample.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "oversample factor {oversample} must be at least 1"
            )));
        }
        let min = (oversample * 3.0 * lattice.half_extent() as f64 - 1e-9).ceil() as usize;
        let samples = min + min % 2;
        Self::new(lattice.dim(), lattice.half_length(), samples)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    /// `h_f = 2L/M`.
    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.samples as f64
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.samples; self.dim]
    }

    pub fn half_shape(&self) -> Vec<usize> {
        let mut shape = self.shape();
        shape[0] = self.samples / 2 + 1;
        shape
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn wrap(&self, p: i64) -> usize {
        wrap(p, self.samples)
    }

    pub fn signed(&self, i: usize) -> i64 {
        signed(i, self.samples)
    }

    /// Sample position of storage index `i` along any axis.
    pub fn position(&self, i: usize) -> f64 {
        self.signed(i) as f64 * self.spacing()
    }

    /// Angular frequency `πk/L` of storage index `i` along any axis.
    pub fn frequency(&self, i: usize) -> f64 {
        std::f64::consts::PI * self.signed(i) as f64 / self.half_length
    }

    /// Checks the pairing with a lattice: same box and `h_f ≤ 2h/3`.
    pub fn check_serves(&self, lattice: &LatticeGrid) -> Result<()> {
        if self.dim != lattice.dim() {
            return Err(Error::mismatch(
                format!("reference grid of dimension {}", lattice.dim()),
                format!("dimension {}", self.dim),
            ));
        }
        let l = lattice.half_length();
        if (self.half_length - l).abs() > 1e-12 * l {
            return Err(Error::mismatch(
                format!("reference half length {l}"),
                format!("{}", self.half_length),
            ));
        }
        if self.samples < 3 * lattice.half_extent() {
            return Err(Error::InvalidGrid(format!(
                "reference spacing {} exceeds 2h/3 = {}",
                self.spacing(),
                2.0 * lattice.h() / 3.0
            )));
        }
        Ok(())
    }
}

impl fmt::Display for ReferenceGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "reference(d={}, L={}, M={})",
            self.dim, self.half_length, self.samples
        )
    }
}

/// Common vector-space surface of all field types. Inner products are
/// conjugate-linear in the first argument.
pub trait Field: Clone + Send + Sync {
    fn data(&self) -> &ArrayD<Complex64>;
    fn data_mut(&mut self) -> &mut ArrayD<Complex64>;
    fn inner(&self, other: &Self) -> Complex64;

    fn norm(&self) -> f64 {
        self.inner(self).re.max(0.0).sqrt()
    }

    fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        z.data_mut().fill(Complex64::default());
        z
    }

    fn axpy(&mut self, a: Complex64, x: &Self) {
        Zip::from(self.data_mut())
            .and(x.data())
            .for_each(|s, &v| *s += a * v);
    }

    fn scale(&mut self, a: Complex64) {
        self.data_mut().mapv_inplace(|v| v * a);
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        Zip::from(self.data())
            .and(other.data())
            .fold(0.0f64, |m, a, b| m.max((a - b).norm()))
    }

    fn max_abs(&self) -> f64 {
        self.data().iter().fold(0.0f64, |m, v| m.max(v.norm()))
    }
}

fn plain_inner(a: &ArrayD<Complex64>, b: &ArrayD<Complex64>) -> Complex64 {
    Zip::from(a)
        .and(b)
        .fold(Complex64::default(), |acc, x, y| acc + x.conj() * y)
}

fn check_shape(values: &ArrayD<Complex64>, shape: &[usize], what: &dyn fmt::Display) -> Result<()> {
    if values.shape() != shape {
        return Err(Error::mismatch(
            format!("{what} with shape {shape:?}"),
            format!("shape {:?}", values.shape()),
        ));
    }
    Ok(())
}

/// Index iterator helper: calls `f(storage_index, signed_index)` for every site.
fn signed_index(idx: &IxDyn, period: usize, out: &mut Vec<i64>) {
    out.clear();
    out.extend(idx.slice().iter().map(|&i| signed(i, period)));
}

/// Element of `ℋ_h = ℓ²(hZ^d)` (truncated to the torus).
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeField {
    grid: LatticeGrid,
    values: ArrayD<Complex64>,
}

impl LatticeField {
    pub fn zeros(grid: LatticeGrid) -> Self {
        Self {
            values: ArrayD::zeros(IxDyn(&grid.shape())),
            grid,
        }
    }

    pub fn from_values(grid: LatticeGrid, values: ArrayD<Complex64>) -> Result<Self> {
        check_shape(&values, &grid.shape(), &grid)?;
        Ok(Self { grid, values })
    }

    /// Builds a field from a function of the signed multi-index `n`.
    pub fn from_fn(grid: LatticeGrid, mut f: impl FnMut(&[i64]) -> Complex64) -> Self {
        let period = grid.period();
        let mut n = Vec::with_capacity(grid.dim());
        let values = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
            signed_index(&idx, period, &mut n);
            f(&n)
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &LatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    pub fn into_values(self) -> ArrayD<Complex64> {
        self.values
    }

    fn storage(&self, n: &[i64]) -> Vec<usize> {
        n.iter().map(|&k| self.grid.wrap(k)).collect()
    }

    pub fn get(&self, n: &[i64]) -> Complex64 {
        self.values[IxDyn(&self.storage(n))]
    }

    pub fn set(&mut self, n: &[i64], value: Complex64) {
        let idx = self.storage(n);
        self.values[IxDyn(&idx)] = value;
    }

    /// `v(ň)` with `ň = (-n₁, n′)`.
    pub fn reflect(&self) -> Self {
        let mut out = self.clone();
        let period = self.grid.period();
        for i in 0..period {
            let j = wrap(-signed(i, period), period);
            out.values
                .index_axis_mut(Axis(0), i)
                .assign(&self.values.index_axis(Axis(0), j));
        }
        out
    }

    pub(crate) fn slab(&self, n1: i64) -> ArrayViewD<'_, Complex64> {
        self.values.index_axis(Axis(0), self.grid.wrap(n1))
    }

    pub(crate) fn slab_mut(&mut self, n1: i64) -> ArrayViewMutD<'_, Complex64> {
        let i = self.grid.wrap(n1);
        self.values.index_axis_mut(Axis(0), i)
    }
}

impl Field for LatticeField {
    fn data(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    fn inner(&self, other: &Self) -> Complex64 {
        plain_inner(&self.values, &other.values) * self.grid.cell_volume()
    }
}

/// Element of `ℋ_h⁺ = ℓ²(hZ^d_+)` (truncated).
#[derive(Clone, Debug, PartialEq)]
pub struct HalfLatticeField {
    grid: HalfLatticeGrid,
    values: ArrayD<Complex64>,
}

impl HalfLatticeField {
    pub fn zeros(grid: HalfLatticeGrid) -> Self {
        Self {
            values: ArrayD::zeros(IxDyn(&grid.shape())),
            grid,
        }
    }

    pub fn from_values(grid: HalfLatticeGrid, values: ArrayD<Complex64>) -> Result<Self> {
        check_shape(&values, &grid.shape(), &grid)?;
        Ok(Self { grid, values })
    }

    /// Builds a field from a function of the signed multi-index `n` (`n₁ ≥ 1`).
    pub fn from_fn(grid: HalfLatticeGrid, mut f: impl FnMut(&[i64]) -> Complex64) -> Self {
        let period = grid.parent.period();
        let mut n = Vec::with_capacity(grid.parent.dim());
        let values = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
            signed_index(&idx, period, &mut n);
            n[0] = idx[0] as i64 + 1;
            f(&n)
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &HalfLatticeGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    fn storage(&self, n: &[i64]) -> Option<Vec<usize>> {
        let len = self.grid.normal_len() as i64;
        if n[0] < 1 || n[0] > len {
            return None;
        }
        let period = self.grid.parent.period();
        let mut idx: Vec<usize> = n.iter().map(|&k| wrap(k, period)).collect();
        idx[0] = (n[0] - 1) as usize;
        Some(idx)
    }

    /// Value at signed index `n`; zero outside the stored `n₁` range.
    pub fn get(&self, n: &[i64]) -> Complex64 {
        self.storage(n)
            .map(|idx| self.values[IxDyn(&idx)])
            .unwrap_or_default()
    }

    pub fn set(&mut self, n: &[i64], value: Complex64) -> Result<()> {
        let idx = self.storage(n).ok_or_else(|| {
            Error::InvalidGrid(format!("index {n:?} outside {}", self.grid))
        })?;
        self.values[IxDyn(&idx)] = value;
        Ok(())
    }

    /// Layer `n₁` (1-based).
    pub(crate) fn layer(&self, n1: i64) -> ArrayViewD<'_, Complex64> {
        self.values.index_axis(Axis(0), (n1 - 1) as usize)
    }

    pub(crate) fn layer_mut(&mut self, n1: i64) -> ArrayViewMutD<'_, Complex64> {
        self.values.index_axis_mut(Axis(0), (n1 - 1) as usize)
    }
}

impl Field for HalfLatticeField {
    fn data(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    fn inner(&self, other: &Self) -> Complex64 {
        plain_inner(&self.values, &other.values) * self.grid.parent.cell_volume()
    }
}

/// Samples of a function in `ℋ = L²(R^d)` on the periodic reference grid.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuumField {
    grid: ReferenceGrid,
    values: ArrayD<Complex64>,
}

impl ContinuumField {
    pub fn zeros(grid: ReferenceGrid) -> Self {
        Self {
            values: ArrayD::zeros(IxDyn(&grid.shape())),
            grid,
        }
    }

    pub fn from_values(grid: ReferenceGrid, values: ArrayD<Complex64>) -> Result<Self> {
        check_shape(&values, &grid.shape(), &grid)?;
        Ok(Self { grid, values })
    }

    /// Samples `f(x)` at the grid positions.
    pub fn from_fn(grid: ReferenceGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut x = vec![0.0; grid.dim()];
        let values = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
            for (xj, &i) in x.iter_mut().zip(idx.slice()) {
                *xj = grid.position(i);
            }
            f(&x)
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &ReferenceGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    /// Value at signed sample index `p`.
    pub fn get(&self, p: &[i64]) -> Complex64 {
        let idx: Vec<usize> = p.iter().map(|&k| self.grid.wrap(k)).collect();
        self.values[IxDyn(&idx)]
    }

    pub fn reflect(&self) -> Self {
        let mut out = self.clone();
        let m = self.grid.samples();
        for i in 0..m {
            let j = wrap(-signed(i, m), m);
            out.values
                .index_axis_mut(Axis(0), i)
                .assign(&self.values.index_axis(Axis(0), j));
        }
        out
    }
}

impl Field for ContinuumField {
    fn data(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    fn inner(&self, other: &Self) -> Complex64 {
        plain_inner(&self.values, &other.values) * self.grid.cell_volume()
    }
}

/// Samples of a function in `ℋ⁺ = L²(R^d_+)` on the closed slab `x₁ ∈ [0, L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfContinuumField {
    grid: ReferenceGrid,
    values: ArrayD<Complex64>,
}

impl HalfContinuumField {
    pub fn zeros(grid: ReferenceGrid) -> Self {
        Self {
            values: ArrayD::zeros(IxDyn(&grid.half_shape())),
            grid,
        }
    }

    pub fn from_values(grid: ReferenceGrid, values: ArrayD<Complex64>) -> Result<Self> {
        check_shape(&values, &grid.half_shape(), &grid)?;
        Ok(Self { grid, values })
    }

    /// Samples `f(x)` for `x₁ ∈ [0, L]`.
    pub fn from_fn(grid: ReferenceGrid, mut f: impl FnMut(&[f64]) -> Complex64) -> Self {
        let mut x = vec![0.0; grid.dim()];
        let h = grid.spacing();
        let values = ArrayD::from_shape_fn(IxDyn(&grid.half_shape()), |idx| {
            x[0] = idx[0] as f64 * h;
            for (xj, &i) in x.iter_mut().zip(idx.slice()).skip(1) {
                *xj = grid.position(i);
            }
            f(&x)
        });
        Self { grid, values }
    }

    pub fn grid(&self) -> &ReferenceGrid {
        &self.grid
    }

    pub fn values(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    /// Trapezoid weight (relative to `h_f^d`) of normal layer `p₁`.
    pub fn layer_weight(&self, p1: usize) -> f64 {
        if p1 == 0 || p1 == self.grid.samples() / 2 {
            0.5
        } else {
            1.0
        }
    }
}

impl Field for HalfContinuumField {
    fn data(&self) -> &ArrayD<Complex64> {
        &self.values
    }

    fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.values
    }

    fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::default();
        for (p1, (a, b)) in self
            .values
            .axis_iter(Axis(0))
            .zip(other.values.axis_iter(Axis(0)))
            .enumerate()
        {
            let layer = Zip::from(&a)
                .and(&b)
                .fold(Complex64::default(), |s, x, y| s + x.conj() * y);
            acc += layer * self.layer_weight(p1);
        }
        acc * self.grid.cell_volume()
    }
}

/// Plain `ℓ²` vector, used for dense test operators.
#[derive(Clone, Debug, PartialEq)]
pub struct PlainVector(pub ArrayD<Complex64>);

impl PlainVector {
    pub fn from_vec(v: Vec<Complex64>) -> Self {
        let n = v.len();
        Self(ArrayD::from_shape_vec(IxDyn(&[n]), v).expect("1-d shape"))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.0.as_slice().expect("standard layout")
    }
}

impl Field for PlainVector {
    fn data(&self) -> &ArrayD<Complex64> {
        &self.0
    }

    fn data_mut(&mut self) -> &mut ArrayD<Complex64> {
        &mut self.0
    }

    fn inner(&self, other: &Self) -> Complex64 {
        plain_inner(&self.0, &other.0)
    }
}

fn require_truncation(u: &HalfLatticeField, wanted: Truncation) -> Result<()> {
    if u.grid.truncation != wanted {
        return Err(Error::mismatch(
            format!("{wanted:?}-truncated half lattice"),
            format!("{}", u.grid),
        ));
    }
    Ok(())
}

fn negate_into(mut dst: ArrayViewMutD<'_, Complex64>, src: ArrayViewD<'_, Complex64>) {
    Zip::from(&mut dst).and(&src).for_each(|d, &s| *d = -s);
}

/// `𝒪_h`: reflection-odd extension from the Dirichlet half-lattice to the torus.
pub fn odd_extend_lattice(u: &HalfLatticeField) -> Result<LatticeField> {
    require_truncation(u, Truncation::Dirichlet)?;
    let mut out = LatticeField::zeros(u.grid.parent);
    for n1 in 1..u.grid.parent.half_extent() as i64 {
        out.slab_mut(n1).assign(&u.layer(n1));
        negate_into(out.slab_mut(-n1), u.layer(n1));
    }
    Ok(out)
}

/// `𝒪_h*`: `n₁ ↦ v(n₁) - v(-n₁)` on the Dirichlet half-lattice.
pub fn odd_extend_lattice_adjoint(v: &LatticeField) -> HalfLatticeField {
    let grid = v.grid.half(Truncation::Dirichlet);
    let mut out = HalfLatticeField::zeros(grid);
    for n1 in 1..v.grid.half_extent() as i64 {
        Zip::from(out.layer_mut(n1))
            .and(&v.slab(n1))
            .and(&v.slab(-n1))
            .for_each(|o, &a, &b| *o = a - b);
    }
    out
}

/// `ℰ_h`: reflection-even extension from the Neumann half-lattice to the torus.
pub fn even_extend_lattice(u: &HalfLatticeField, variant: EvenVariant) -> Result<LatticeField> {
    require_truncation(u, Truncation::Neumann)?;
    let n = u.grid.parent.half_extent() as i64;
    let mut out = LatticeField::zeros(u.grid.parent);
    match variant {
        EvenVariant::HalfPlane => {
            for n1 in 1..=n {
                out.slab_mut(n1).assign(&u.layer(n1));
                out.slab_mut(1 - n1).assign(&u.layer(n1));
            }
        }
        EvenVariant::PaperLiteral => {
            for n1 in 1..n {
                out.slab_mut(n1).assign(&u.layer(n1));
                out.slab_mut(-n1).assign(&u.layer(n1));
            }
            out.slab_mut(0).assign(&u.layer(1));
            out.slab_mut(-n).assign(&u.layer(n));
        }
    }
    Ok(out)
}

/// `ℰ_h*` for either variant.
pub fn even_extend_lattice_adjoint(v: &LatticeField, variant: EvenVariant) -> HalfLatticeField {
    let n = v.grid.half_extent() as i64;
    let grid = v.grid.half(Truncation::Neumann);
    let mut out = HalfLatticeField::zeros(grid);
    match variant {
        EvenVariant::HalfPlane => {
            for n1 in 1..=n {
                Zip::from(out.layer_mut(n1))
                    .and(&v.slab(n1))
                    .and(&v.slab(1 - n1))
                    .for_each(|o, &a, &b| *o = a + b);
            }
        }
        EvenVariant::PaperLiteral => {
            for n1 in 1..n {
                Zip::from(out.layer_mut(n1))
                    .and(&v.slab(n1))
                    .and(&v.slab(-n1))
                    .for_each(|o, &a, &b| *o = a + b);
            }
            Zip::from(out.layer_mut(1))
                .and(&v.slab(0))
                .for_each(|o, &a| *o += a);
            out.layer_mut(n).assign(&v.slab(-n));
        }
    }
    out
}

/// `ℛ_h`: keeps the layers of the requested half-lattice.
pub fn restrict_lattice(v: &LatticeField, truncation: Truncation) -> HalfLatticeField {
    let grid = v.grid.half(truncation);
    let mut out = HalfLatticeField::zeros(grid);
    for n1 in 1..=grid.normal_len() as i64 {
        out.layer_mut(n1).assign(&v.slab(n1));
    }
    out
}

/// Extension by zero, `ℛ_h*`.
pub fn zero_extend_lattice(u: &HalfLatticeField) -> LatticeField {
    let mut out = LatticeField::zeros(u.grid.parent);
    for n1 in 1..=u.grid.normal_len() as i64 {
        out.slab_mut(n1).assign(&u.layer(n1));
    }
    out
}

/// `𝒪`: reflection-odd extension; both reflection planes are set to zero.
pub fn odd_extend_continuum(f: &HalfContinuumField) -> ContinuumField {
    let m = f.grid.samples();
    let mut out = ContinuumField::zeros(f.grid);
    for p in 1..m / 2 {
        let src = f.values.index_axis(Axis(0), p);
        out.values.index_axis_mut(Axis(0), p).assign(&src);
        negate_into(out.values.index_axis_mut(Axis(0), m - p), src);
    }
    out
}

/// `𝒪*` with respect to the trapezoid weights of the half field.
pub fn odd_extend_continuum_adjoint(g: &ContinuumField) -> HalfContinuumField {
    let m = g.grid.samples();
    let mut out = HalfContinuumField::zeros(g.grid);
    for p in 1..m / 2 {
        Zip::from(out.values.index_axis_mut(Axis(0), p))
            .and(&g.values.index_axis(Axis(0), p))
            .and(&g.values.index_axis(Axis(0), m - p))
            .for_each(|o, &a, &b| *o = a - b);
    }
    out
}

/// `ℰ`: reflection-even extension; plane samples are taken from the closed half-space.
pub fn even_extend_continuum(f: &HalfContinuumField) -> ContinuumField {
    let m = f.grid.samples();
    let mut out = ContinuumField::zeros(f.grid);
    for p in 0..=m / 2 {
        let src = f.values.index_axis(Axis(0), p);
        out.values.index_axis_mut(Axis(0), p % m).assign(&src);
        out.values.index_axis_mut(Axis(0), (m - p) % m).assign(&src);
    }
    out
}

/// `ℰ*` with respect to the trapezoid weights of the half field.
pub fn even_extend_continuum_adjoint(g: &ContinuumField) -> HalfContinuumField {
    let m = g.grid.samples();
    let mut out = HalfContinuumField::zeros(g.grid);
    for p in 0..=m / 2 {
        Zip::from(out.values.index_axis_mut(Axis(0), p))
            .and(&g.values.index_axis(Axis(0), p % m))
            .and(&g.values.index_axis(Axis(0), (m - p) % m))
            .for_each(|o, &a, &b| *o = a + b);
    }
    out
}

/// `ℛ`: keeps `x₁ ∈ [0, L]`.
pub fn restrict_continuum(g: &ContinuumField) -> HalfContinuumField {
    let m = g.grid.samples();
    let mut out = HalfContinuumField::zeros(g.grid);
    for p in 0..=m / 2 {
        out.values
            .index_axis_mut(Axis(0), p)
            .assign(&g.values.index_axis(Axis(0), p % m));
    }
    out
}

/// `ℛ*`: interior layers copied, plane layers halved, `x₁ < 0` zero.
pub fn restrict_continuum_adjoint(f: &HalfContinuumField) -> ContinuumField {
    let m = f.grid.samples();
    let mut out = ContinuumField::zeros(f.grid);
    for p in 0..=m / 2 {
        let w = f.layer_weight(p);
        Zip::from(out.values.index_axis_mut(Axis(0), p % m))
            .and(&f.values.index_axis(Axis(0), p))
            .for_each(|o, &a| *o = a * w);
    }
    out
}

/// `E₀`: extension by zero to `x₁ < 0`.
pub fn zero_extend_continuum(f: &HalfContinuumField) -> ContinuumField {
    let m = f.grid.samples();
    let mut out = ContinuumField::zeros(f.grid);
    for p in 0..=m / 2 {
        out.values
            .index_axis_mut(Axis(0), p % m)
            .assign(&f.values.index_axis(Axis(0), p));
    }
    out
}
