//! Resolvent-difference operators and matrix-free operator-norm estimation.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::calculus::{
    apply_psi_continuum, apply_psi_half, resolve_continuum_with_info, resolve_half,
    resolve_psi_continuum, resolve_psi_half, ResolventQuery, SpectralFunction,
};
use crate::dense;
use crate::error::{Error, Result};
use crate::genfunc::GeneratingFunction;
use crate::krylov::SolverOptions;
use crate::lattice::{
    even_extend_continuum, even_extend_continuum_adjoint, even_extend_lattice,
    even_extend_lattice_adjoint, odd_extend_continuum, odd_extend_continuum_adjoint,
    odd_extend_lattice, odd_extend_lattice_adjoint, restrict_continuum,
    restrict_continuum_adjoint, restrict_lattice, zero_extend_lattice, ContinuumField,
    EvenVariant, Field, HalfContinuumField, HalfLatticeField, LatticeGrid, PlainVector,
    ReferenceGrid, Truncation,
};
use crate::operators::{sample_even_potential, sample_potential, PotentialSpec, StencilOperator};
use crate::transfer::TransferPlan;

/// A bounded operator on a single space, available through its action and adjoint.
pub trait LinearOperator: Sync {
    type Field: Field;

    fn zero_input(&self) -> Self::Field;
    fn apply(&self, x: &Self::Field) -> Result<Self::Field>;
    fn adjoint(&self, y: &Self::Field) -> Result<Self::Field>;
}

/// Dense matrix acting on plain `ℓ²` vectors.
#[derive(Clone, Debug)]
pub struct DenseOperator(pub DMatrix<Complex64>);

impl LinearOperator for DenseOperator {
    type Field = PlainVector;

    fn zero_input(&self) -> PlainVector {
        PlainVector::from_vec(vec![Complex64::default(); self.0.ncols()])
    }

    fn apply(&self, x: &PlainVector) -> Result<PlainVector> {
        let v = nalgebra::DVector::from_column_slice(x.as_slice());
        Ok(PlainVector::from_vec((&self.0 * v).as_slice().to_vec()))
    }

    fn adjoint(&self, y: &PlainVector) -> Result<PlainVector> {
        let v = nalgebra::DVector::from_column_slice(y.as_slice());
        Ok(PlainVector::from_vec((self.0.adjoint() * v).as_slice().to_vec()))
    }
}

/// The six resolvent-difference estimates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    Dirichlet,
    Neumann,
    PotentialDirichlet,
    PotentialNeumann,
    PsiDirichlet,
    PsiNeumann,
}

impl Case {
    pub const ALL: [Case; 6] = [
        Case::Dirichlet,
        Case::Neumann,
        Case::PotentialDirichlet,
        Case::PotentialNeumann,
        Case::PsiDirichlet,
        Case::PsiNeumann,
    ];

    pub fn boundary(self) -> Truncation {
        match self {
            Case::Dirichlet | Case::PotentialDirichlet | Case::PsiDirichlet => Truncation::Dirichlet,
            _ => Truncation::Neumann,
        }
    }

    pub fn has_potential(self) -> bool {
        matches!(self, Case::PotentialDirichlet | Case::PotentialNeumann)
    }

    pub fn has_psi(self) -> bool {
        matches!(self, Case::PsiDirichlet | Case::PsiNeumann)
    }

    pub fn name(self) -> &'static str {
        match self {
            Case::Dirichlet => "dirichlet",
            Case::Neumann => "neumann",
            Case::PotentialDirichlet => "potential-dirichlet",
            Case::PotentialNeumann => "potential-neumann",
            Case::PsiDirichlet => "psi-dirichlet",
            Case::PsiNeumann => "psi-neumann",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown case '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct ErrorOptions {
    pub variant: EvenVariant,
    pub potential: Option<PotentialSpec>,
    pub psi: Option<SpectralFunction>,
    pub solver: SolverOptions,
}

impl Default for ErrorOptions {
    fn default() -> Self {
        Self {
            variant: EvenVariant::HalfPlane,
            potential: None,
            psi: None,
            solver: SolverOptions::default(),
        }
    }
}

/// `E = ℛ J_h X_h R_h(z) ℛ_h K_h X − ℛ R(z) X` on the reference half-grid,
/// where `X` is the odd (Dirichlet) or even (Neumann) extension.
pub struct ErrorOperator {
    case: Case,
    plan: TransferPlan,
    query: ResolventQuery,
    options: ErrorOptions,
    residual_max: Mutex<f64>,
}

impl fmt::Debug for ErrorOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ErrorOperator")
            .field("case", &self.case)
            .field("lattice", self.plan.lattice())
            .field("reference", self.plan.reference())
            .field("z", &self.query.z())
            .finish()
    }
}

pub fn assemble_error(
    case: Case,
    lattice: LatticeGrid,
    reference: ReferenceGrid,
    genfunc: GeneratingFunction,
    z: Complex64,
    options: ErrorOptions,
) -> Result<ErrorOperator> {
    let plan = TransferPlan::new(lattice, reference, genfunc)?;
    let query = if case.has_potential() {
        let spec = options.potential.ok_or_else(|| {
            Error::InvalidParameter(format!("case {case} needs a potential"))
        })?;
        ResolventQuery::with_potential(z, spec)?
    } else {
        ResolventQuery::free(z)?
    };
    if case.has_psi() && options.psi.is_none() {
        return Err(Error::InvalidParameter(format!("case {case} needs a spectral function")));
    }
    Ok(ErrorOperator {
        case,
        plan,
        query,
        options,
        residual_max: Mutex::new(0.0),
    })
}

impl ErrorOperator {
    pub fn case(&self) -> Case {
        self.case
    }

    pub fn plan(&self) -> &TransferPlan {
        &self.plan
    }

    pub fn z(&self) -> Complex64 {
        self.query.z()
    }

    /// Largest relative residual of any resolvent solve performed so far.
    pub fn residual_max(&self) -> f64 {
        *self.residual_max.lock().expect("residual lock")
    }

    fn record(&self, r: f64) {
        let mut m = self.residual_max.lock().expect("residual lock");
        if r > *m || r.is_nan() {
            *m = r;
        }
    }

    fn boundary(&self) -> Truncation {
        self.case.boundary()
    }

    fn extend_continuum(&self, f: &HalfContinuumField) -> ContinuumField {
        match self.boundary() {
            Truncation::Dirichlet => odd_extend_continuum(f),
            Truncation::Neumann => even_extend_continuum(f),
        }
    }

    fn extend_continuum_adjoint(&self, g: &ContinuumField) -> HalfContinuumField {
        match self.boundary() {
            Truncation::Dirichlet => odd_extend_continuum_adjoint(g),
            Truncation::Neumann => even_extend_continuum_adjoint(g),
        }
    }

    fn lattice_solve(&self, q: &ResolventQuery, u: &HalfLatticeField) -> Result<HalfLatticeField> {
        let out = match &self.options.psi {
            Some(psi) if self.case.has_psi() => resolve_psi_half(psi, q, u)?,
            _ => resolve_half(q, u, &self.options.solver)?.0,
        };
        if u.norm() > 0.0 {
            self.record(residual_certificate(&out, u, |x| self.lattice_operator(x), q.z())?);
        }
        Ok(out)
    }

    fn lattice_operator(&self, u: &HalfLatticeField) -> Result<HalfLatticeField> {
        if let (Some(psi), true) = (&self.options.psi, self.case.has_psi()) {
            return Ok(apply_psi_half(psi, u));
        }
        let mut out = StencilOperator::new(self.boundary().into(), *self.plan.lattice()).apply_half(u)?;
        if let Some(spec) = self.query.potential() {
            out.axpy(Complex64::new(1.0, 0.0), &sample_potential(spec, *u.grid()).multiply(u)?);
        }
        Ok(out)
    }

    fn continuum_solve(&self, q: &ResolventQuery, g: &ContinuumField) -> Result<ContinuumField> {
        let out = match &self.options.psi {
            Some(psi) if self.case.has_psi() => resolve_psi_continuum(psi, q, g)?,
            _ => resolve_continuum_with_info(q, g, &self.options.solver)?.0,
        };
        if g.norm() > 0.0 {
            self.record(residual_certificate(&out, g, |x| Ok(self.continuum_operator(x)), q.z())?);
        }
        Ok(out)
    }

    fn continuum_operator(&self, g: &ContinuumField) -> ContinuumField {
        let psi = match (&self.options.psi, self.case.has_psi()) {
            (Some(psi), true) => psi.clone(),
            _ => SpectralFunction::identity(),
        };
        let mut out = apply_psi_continuum(&psi, g);
        if let Some(spec) = self.query.potential() {
            let vs = sample_even_potential(spec, g.grid());
            let mut vg = g.clone();
            ndarray::Zip::from(vg.data_mut()).and(&vs).for_each(|o, &p| *o *= p);
            out.axpy(Complex64::new(1.0, 0.0), &vg);
        }
        out
    }

    fn extend_lattice(&self, u: &HalfLatticeField) -> Result<crate::lattice::LatticeField> {
        match self.boundary() {
            Truncation::Dirichlet => odd_extend_lattice(u),
            Truncation::Neumann => even_extend_lattice(u, self.options.variant),
        }
    }

    fn extend_lattice_adjoint(&self, v: &crate::lattice::LatticeField) -> HalfLatticeField {
        match self.boundary() {
            Truncation::Dirichlet => odd_extend_lattice_adjoint(v),
            Truncation::Neumann => even_extend_lattice_adjoint(v, self.options.variant),
        }
    }

    /// `ℛ J_h X_h R_h(z) ℛ_h K_h X f`.
    pub fn apply_discrete(&self, f: &HalfContinuumField) -> Result<HalfContinuumField> {
        let ext = self.extend_continuum(f);
        let u = restrict_lattice(&self.plan.discretize(&ext)?, self.boundary());
        let r = self.lattice_solve(&self.query, &u)?;
        Ok(restrict_continuum(&self.plan.embed(&self.extend_lattice(&r)?)?))
    }

    /// `ℛ R(z) X f`.
    pub fn apply_continuum(&self, f: &HalfContinuumField) -> Result<HalfContinuumField> {
        let ext = self.extend_continuum(f);
        Ok(restrict_continuum(&self.continuum_solve(&self.query, &ext)?))
    }
}

impl LinearOperator for ErrorOperator {
    type Field = HalfContinuumField;

    fn zero_input(&self) -> HalfContinuumField {
        HalfContinuumField::zeros(*self.plan.reference())
    }

    fn apply(&self, f: &HalfContinuumField) -> Result<HalfContinuumField> {
        let mut out = self.apply_discrete(f)?;
        out.axpy(Complex64::new(-1.0, 0.0), &self.apply_continuum(f)?);
        Ok(out)
    }

    fn adjoint(&self, y: &HalfContinuumField) -> Result<HalfContinuumField> {
        let q = self.query.conj();
        let lifted = restrict_continuum_adjoint(y);
        // discrete branch: X* J_h ℛ_h* R_h(z̄) X_h* K_h ℛ*
        let v = self.extend_lattice_adjoint(&self.plan.discretize(&lifted)?);
        let r = self.lattice_solve(&q, &v)?;
        let back = self.plan.embed(&zero_extend_lattice(&r))?;
        let mut out = self.extend_continuum_adjoint(&back);
        // continuum branch: X* R(z̄) ℛ*
        let c = self.continuum_solve(&q, &lifted)?;
        out.axpy(Complex64::new(-1.0, 0.0), &self.extend_continuum_adjoint(&c));
        Ok(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormOptions {
    /// Relative change between successive estimates that counts as converged.
    pub tol: f64,
    pub max_iter: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            max_iter: 300,
            restarts: 3,
            seed: 20_240_601,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NormEstimate {
    /// Maximum over restarts.
    pub value: f64,
    pub per_restart: Vec<f64>,
    /// Total iteration count over all restarts.
    pub iterations: usize,
    pub converged: bool,
}

fn random_unit<F: Field>(zero: &F, rng: &mut ChaCha8Rng) -> F {
    let mut x = zero.clone();
    for v in x.data_mut().iter_mut() {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        *v = Complex64::new(re, im);
    }
    let n = x.norm();
    x.scale(Complex64::new(1.0 / n, 0.0));
    x
}

/// Power iteration on `E*E` from seeded random starts.
pub fn operator_norm<A: LinearOperator>(op: &A, opts: &NormOptions) -> Result<NormEstimate> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {} must be positive", opts.tol)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let zero = op.zero_input();
    let mut per_restart = Vec::with_capacity(opts.restarts.max(1));
    let mut iterations = 0;
    let mut converged = true;
    for _ in 0..opts.restarts.max(1) {
        let mut x = random_unit(&zero, &mut rng);
        let mut estimate = 0.0f64;
        let mut best = 0.0f64;
        let mut done = false;
        for _ in 0..opts.max_iter {
            iterations += 1;
            let y = op.apply(&x)?;
            let sigma = y.norm();
            best = best.max(sigma);
            if sigma == 0.0 {
                done = true;
                break;
            }
            let change = (sigma - estimate).abs();
            estimate = sigma;
            if change <= opts.tol * sigma {
                done = true;
                break;
            }
            let mut next = op.adjoint(&y)?;
            let n = next.norm();
            if n == 0.0 {
                done = true;
                break;
            }
            next.scale(Complex64::new(1.0 / n, 0.0));
            x = next;
        }
        converged &= done;
        per_restart.push(best);
    }
    Ok(NormEstimate {
        value: per_restart.iter().copied().fold(0.0, f64::max),
        per_restart,
        iterations,
        converged,
    })
}

/// `‖H u − z u − v‖ / ‖v‖`.
pub fn residual_certificate<F: Field>(
    u: &F,
    v: &F,
    apply_h: impl Fn(&F) -> Result<F>,
    z: Complex64,
) -> Result<f64> {
    let vn = v.norm();
    if vn == 0.0 {
        return Err(Error::DegenerateInput("right-hand side is zero".into()));
    }
    let mut r = apply_h(u)?;
    r.axpy(-z, u);
    r.axpy(Complex64::new(-1.0, 0.0), v);
    Ok(r.norm() / vn)
}

/// Dense matrix of an operator in the orthonormal basis of its weighted space.
pub fn assemble_dense<A: LinearOperator>(op: &A) -> Result<DMatrix<Complex64>> {
    let zero = op.zero_input();
    let n = zero.data().len();
    let mut weights = Vec::with_capacity(n);
    let mut m = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut e = zero.clone();
        e.data_mut().as_slice_mut().expect("standard layout")[j] = Complex64::new(1.0, 0.0);
        weights.push(e.norm());
        let col = op.apply(&e)?;
        for (i, v) in col.data().iter().enumerate() {
            m[(i, j)] = *v;
        }
    }
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] *= weights[i] / weights[j];
        }
    }
    Ok(m)
}

/// Exact operator norm through dense assembly; small problems only.
pub fn dense_operator_norm<A: LinearOperator>(op: &A) -> Result<f64> {
    Ok(dense::spectral_norm(&assemble_dense(op)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfunc::{make_meyer, make_shannon};
    use rand::Rng;

    fn setup(case: Case, h: f64, l: f64, g: GeneratingFunction, z: Complex64, options: ErrorOptions) -> ErrorOperator {
        let lat = LatticeGrid::covering(1, h, l).unwrap();
        let r = ReferenceGrid::for_lattice(&lat, 1.0).unwrap();
        assemble_error(case, lat, r, g, z, options).unwrap()
    }

    #[test]
    fn scaled_projection_norm() {
        let n = 12;
        let mut m = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..4 {
            m[(i, i)] = Complex64::new(0.0, -2.5);
        }
        let est = operator_norm(&DenseOperator(m), &NormOptions::default()).unwrap();
        assert!((est.value - 2.5).abs() < 1e-6 * 2.5);
        assert!(est.converged);
    }

    #[test]
    fn random_matrix_matches_svd() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let m = DMatrix::<Complex64>::from_fn(50, 50, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let exact = dense::spectral_norm(&m);
        let opts = NormOptions {
            tol: 1e-13,
            max_iter: 20_000,
            restarts: 3,
            seed: 1,
        };
        let est = operator_norm(&DenseOperator(m), &opts).unwrap();
        assert!((est.value - exact).abs() <= 1e-6 * exact, "{} vs {exact}", est.value);
        assert!(est.value <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn error_operator_adjoint_and_linearity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let configs: Vec<(Case, ErrorOptions, Complex64)> = vec![
            (Case::Dirichlet, ErrorOptions::default(), Complex64::new(-1.0, 0.0)),
            (Case::Neumann, ErrorOptions { variant: EvenVariant::PaperLiteral, ..Default::default() }, Complex64::new(-1.0, 2.0)),
            (Case::PotentialNeumann, ErrorOptions { potential: Some(PotentialSpec::CosGauss), ..Default::default() }, Complex64::new(-1.0, 2.0)),
            (Case::PsiDirichlet, ErrorOptions { psi: Some(SpectralFunction::power(1.0).unwrap()), ..Default::default() }, Complex64::new(-1.0, 0.0)),
        ];
        for (case, options, z) in configs {
            let e = setup(case, 0.25, 2.0, make_meyer(), z, options);
            let x = random_unit(&e.zero_input(), &mut rng);
            let y = random_unit(&e.zero_input(), &mut rng);
            let lhs = e.apply(&x).unwrap().inner(&y);
            let rhs = x.inner(&e.adjoint(&y).unwrap());
            assert!((lhs - rhs).norm() < 1e-10 * lhs.norm().max(1e-3), "{case}: {lhs} vs {rhs}");
            let a = Complex64::new(0.7, -0.2);
            let mut combo = y.clone();
            combo.axpy(a, &x);
            let mut expect = e.apply(&y).unwrap();
            expect.axpy(a, &e.apply(&x).unwrap());
            assert!(e.apply(&combo).unwrap().max_abs_diff(&expect) < 1e-12);
            assert!(e.residual_max() < 1e-10, "{case}: residual {}", e.residual_max());
        }
    }

    #[test]
    fn power_iteration_matches_dense_oracle() {
        let e = setup(Case::Dirichlet, 0.5, 2.0, make_shannon(), Complex64::new(-1.0, 0.0), ErrorOptions::default());
        let exact = dense_operator_norm(&e).unwrap();
        let opts = NormOptions { tol: 1e-10, max_iter: 2000, ..Default::default() };
        let est = operator_norm(&e, &opts).unwrap();
        assert!((est.value - exact).abs() < 1e-6 * exact, "{} vs {exact}", est.value);
    }

    #[test]
    fn conjugate_pair_norms_agree() {
        let opts = NormOptions { tol: 1e-10, max_iter: 2000, ..Default::default() };
        let z = Complex64::new(-1.0, 2.0);
        let o = || ErrorOptions { potential: Some(PotentialSpec::CosGauss), ..Default::default() };
        let a = operator_norm(&setup(Case::PotentialDirichlet, 0.25, 2.0, make_meyer(), z, o()), &opts).unwrap();
        let b = operator_norm(&setup(Case::PotentialDirichlet, 0.25, 2.0, make_meyer(), z.conj(), o()), &opts).unwrap();
        assert!((a.value - b.value).abs() < 1e-8 * a.value.max(1e-12));
    }

    #[test]
    fn restarts_agree_and_are_reproducible() {
        let e = setup(Case::Dirichlet, 0.25, 4.0, make_meyer(), Complex64::new(-1.0, 0.0), ErrorOptions::default());
        let opts = NormOptions { tol: 1e-8, max_iter: 1000, restarts: 3, seed: 9 };
        let a = operator_norm(&e, &opts).unwrap();
        let b = operator_norm(&e, &opts).unwrap();
        assert_eq!(a.value, b.value);
        let spread = a.per_restart.iter().fold(0.0f64, |m, v| m.max((v - a.value).abs()));
        assert!(spread <= 2.0 * opts.tol * a.value * 10.0, "{:?}", a.per_restart);
    }

    #[test]
    fn certificate_detects_corruption() {
        let lat = LatticeGrid::new(1, 0.25, 8).unwrap();
        let grid = lat.half(Truncation::Dirichlet);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = HalfLatticeField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        let q = ResolventQuery::free(Complex64::new(-1.0, 0.0)).unwrap();
        let u = resolve_half(&q, &v, &SolverOptions::default()).unwrap().0;
        let op = StencilOperator::dirichlet(lat);
        let h = |x: &HalfLatticeField| op.apply_half(x);
        assert!(residual_certificate(&u, &v, h, q.z()).unwrap() < 1e-12);
        let mut bad = u.clone();
        for x in bad.data_mut().iter_mut() {
            *x += Complex64::new(1e-3 * rng.random_range(-1.0..1.0), 0.0);
        }
        assert!(residual_certificate(&bad, &v, h, q.z()).unwrap() > 1e-4);
        let zero = HalfLatticeField::zeros(grid);
        assert!(residual_certificate(&zero, &zero, h, q.z()).is_err());
    }

    #[test]
    fn rejects_inconsistent_requests() {
        let lat = LatticeGrid::covering(1, 0.25, 2.0).unwrap();
        let r = ReferenceGrid::for_lattice(&lat, 1.0).unwrap();
        let z = Complex64::new(-1.0, 0.0);
        assert!(assemble_error(Case::PotentialDirichlet, lat, r, make_meyer(), Complex64::new(-1.0, 1.0), ErrorOptions::default()).is_err());
        let o = ErrorOptions { potential: Some(PotentialSpec::CosGauss), ..Default::default() };
        assert!(assemble_error(Case::PotentialDirichlet, lat, r, make_meyer(), z, o).is_err());
        assert!(assemble_error(Case::PsiNeumann, lat, r, make_meyer(), z, ErrorOptions::default()).is_err());
        assert!(assemble_error(Case::Dirichlet, lat, r, make_meyer(), Complex64::new(2.0, 0.0), ErrorOptions::default()).is_err());
        let coarse = ReferenceGrid::new(1, 2.0, 8).unwrap();
        assert!(assemble_error(Case::Dirichlet, lat, coarse, make_meyer(), z, ErrorOptions::default()).is_err());
    }
}
