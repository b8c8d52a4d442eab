//! Dense matrix oracles for small grids.

use nalgebra::{DMatrix, DVector};
use ndarray::{ArrayD, IxDyn};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{HalfLatticeField, HalfLatticeGrid, LatticeField, LatticeGrid};
use crate::operators::{sample_potential, PotentialSpec, StencilOperator};

/// Values in logical (row-major) order as a column vector.
pub fn field_vector(values: &ArrayD<Complex64>) -> DVector<Complex64> {
    DVector::from_iterator(values.len(), values.iter().copied())
}

pub fn vector_to_array(v: &DVector<Complex64>, shape: &[usize]) -> Result<ArrayD<Complex64>> {
    ArrayD::from_shape_vec(IxDyn(shape), v.iter().copied().collect())
        .map_err(|e| Error::InvalidGrid(e.to_string()))
}

fn unit(shape: &[usize], j: usize) -> ArrayD<Complex64> {
    let mut a = ArrayD::zeros(IxDyn(shape));
    a.as_slice_mut().expect("standard layout")[j] = Complex64::new(1.0, 0.0);
    a
}

/// `H_{0,h}` on the torus, assembled column by column from the stencil.
pub fn torus_matrix(lattice: &LatticeGrid) -> DMatrix<f64> {
    let op = StencilOperator::full(*lattice);
    let shape = lattice.shape();
    let n = lattice.cardinality();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = LatticeField::from_values(*lattice, unit(&shape, j)).expect("shape");
        let col = op.apply_full(&e).expect("grid");
        for (i, v) in col.values().iter().enumerate() {
            m[(i, j)] = v.re;
        }
    }
    m
}

/// `H^{D/N}_{0,h} + V_h` on a half-lattice.
pub fn half_matrix(grid: &HalfLatticeGrid, potential: Option<&PotentialSpec>) -> DMatrix<f64> {
    let op = StencilOperator::new(grid.truncation().into(), *grid.parent());
    let shape = grid.shape();
    let n = grid.cardinality();
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let e = HalfLatticeField::from_values(*grid, unit(&shape, j)).expect("shape");
        let col = op.apply_half(&e).expect("grid");
        for (i, v) in col.values().iter().enumerate() {
            m[(i, j)] = v.re;
        }
    }
    if let Some(spec) = potential {
        let vh = sample_potential(spec, *grid);
        for (i, v) in vh.values().iter().enumerate() {
            m[(i, i)] += v;
        }
    }
    m
}

/// `(A − z)^{-1}` by LU factorization.
pub fn resolvent(a: &DMatrix<f64>, z: Complex64) -> Result<DMatrix<Complex64>> {
    let n = a.nrows();
    let shifted = a.map(|v| Complex64::new(v, 0.0)) - DMatrix::<Complex64>::identity(n, n) * z;
    shifted
        .try_inverse()
        .ok_or_else(|| Error::DegenerateInput(format!("A − z singular at z = {z}")))
}

/// Ascending eigenvalues of a symmetric matrix.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut ev: Vec<f64> = a.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `f(A)` for symmetric `A`.
///
/// Eigenvalues within roundoff of zero are set to zero, so functions that are
/// not Lipschitz at the origin (such as `√λ`) see an exact kernel.
pub fn hermitian_function(a: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> DMatrix<Complex64> {
    let eig = a.clone().symmetric_eigen();
    let q = &eig.eigenvectors;
    let floor = 64.0 * f64::EPSILON * eig.eigenvalues.amax();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| if l <= floor { 0.0 } else { f(l) }));
    (q * d * q.transpose()).map(|v| Complex64::new(v, 0.0))
}

/// Largest singular value.
pub fn spectral_norm(a: &DMatrix<Complex64>) -> f64 {
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .fold(0.0, f64::max)
}
