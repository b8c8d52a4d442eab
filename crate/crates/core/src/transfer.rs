//! Embedding `J_h` and discretization `K_h = J_h*` between the torus lattice
//! and the reference grid, executed in Fourier space.
//!
//! Both maps are tensor products of one-dimensional maps, so they are applied
//! one axis at a time. Along one axis, with `V = FFT_{2N}(v)`,
//!
//! ```text
//! J v = IFFT_M(C),   C_k = b(hξ_k) · V_{k mod 2N} / (2N),
//! ```
//!
//! and `K` is the adjoint with respect to the `h_f`- and `h`-weighted inner
//! products.

use ndarray::{ArrayD, Axis, IxDyn, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfunc::GeneratingFunction;
use crate::lattice::{
    even_extend_continuum, even_extend_lattice, odd_extend_continuum, odd_extend_lattice,
    restrict_continuum, restrict_lattice, wrap, ContinuumField, EvenVariant, HalfContinuumField,
    HalfLatticeField, LatticeField, LatticeGrid, ReferenceGrid, Truncation,
};
use crate::transforms::fft_plan;

/// Reflection used to pass between half-space and whole-space fields.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferMode {
    Odd,
    EvenPaper,
    EvenHalfplane,
}

impl TransferMode {
    pub fn truncation(self) -> Truncation {
        match self {
            TransferMode::Odd => Truncation::Dirichlet,
            _ => Truncation::Neumann,
        }
    }

    pub fn even_variant(self) -> Option<EvenVariant> {
        match self {
            TransferMode::Odd => None,
            TransferMode::EvenPaper => Some(EvenVariant::PaperLiteral),
            TransferMode::EvenHalfplane => Some(EvenVariant::HalfPlane),
        }
    }

    pub fn even(variant: EvenVariant) -> Self {
        match variant {
            EvenVariant::PaperLiteral => TransferMode::EvenPaper,
            EvenVariant::HalfPlane => TransferMode::EvenHalfplane,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TransferPlan {
    lattice: LatticeGrid,
    reference: ReferenceGrid,
    genfunc: GeneratingFunction,
    /// `b(hξ_k)` for every reference frequency, in storage order.
    weights: Vec<f64>,
}

impl TransferPlan {
    pub fn new(lattice: LatticeGrid, reference: ReferenceGrid, genfunc: GeneratingFunction) -> Result<Self> {
        reference.check_serves(&lattice)?;
        if genfunc.support_radius() > 1.5 * std::f64::consts::PI {
            return Err(Error::InvalidParameter(format!(
                "generating function support {} exceeds 3π/2",
                genfunc.support_radius()
            )));
        }
        let h = lattice.h();
        let weights = (0..reference.samples())
            .map(|k| genfunc.window(h * reference.frequency(k)))
            .collect();
        Ok(Self {
            lattice,
            reference,
            genfunc,
            weights,
        })
    }

    pub fn lattice(&self) -> &LatticeGrid {
        &self.lattice
    }

    pub fn reference(&self) -> &ReferenceGrid {
        &self.reference
    }

    pub fn genfunc(&self) -> &GeneratingFunction {
        &self.genfunc
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    fn check_lattice(&self, grid: &LatticeGrid) -> Result<()> {
        if grid != &self.lattice {
            return Err(Error::mismatch(self.lattice.to_string(), grid.to_string()));
        }
        Ok(())
    }

    fn check_reference(&self, grid: &ReferenceGrid) -> Result<()> {
        if grid != &self.reference {
            return Err(Error::mismatch(self.reference.to_string(), grid.to_string()));
        }
        Ok(())
    }

    /// `J_h v`.
    pub fn embed(&self, v: &LatticeField) -> Result<ContinuumField> {
        self.check_lattice(v.grid())?;
        let mut data = v.values().clone();
        for axis in 0..self.lattice.dim() {
            data = self.embed_axis(&data, axis);
        }
        ContinuumField::from_values(self.reference, data)
    }

    /// `K_h f`.
    pub fn discretize(&self, f: &ContinuumField) -> Result<LatticeField> {
        self.check_reference(f.grid())?;
        let mut data = f.values().clone();
        for axis in 0..self.lattice.dim() {
            data = self.discretize_axis(&data, axis);
        }
        LatticeField::from_values(self.lattice, data)
    }

    fn embed_axis(&self, data: &ArrayD<Complex64>, axis: usize) -> ArrayD<Complex64> {
        let n2 = self.lattice.period();
        let m = self.reference.samples();
        let mut shape = data.shape().to_vec();
        shape[axis] = m;
        let mut out = ArrayD::zeros(IxDyn(&shape));
        let forward = fft_plan(n2, false);
        let inverse = fft_plan(m, true);
        let scale = 1.0 / n2 as f64;
        Zip::from(out.lanes_mut(Axis(axis)))
            .and(data.lanes(Axis(axis)))
            .par_for_each(|mut dst, src| {
                let mut v: Vec<Complex64> = src.iter().copied().collect();
                forward.process(&mut v);
                let mut c: Vec<Complex64> = (0..m)
                    .map(|k| {
                        let w = self.weights[k];
                        if w == 0.0 {
                            Complex64::default()
                        } else {
                            v[wrap(self.reference.signed(k), n2)] * (w * scale)
                        }
                    })
                    .collect();
                inverse.process(&mut c);
                for (d, s) in dst.iter_mut().zip(c) {
                    *d = s;
                }
            });
        out
    }

    fn discretize_axis(&self, data: &ArrayD<Complex64>, axis: usize) -> ArrayD<Complex64> {
        let n2 = self.lattice.period();
        let m = self.reference.samples();
        let mut shape = data.shape().to_vec();
        shape[axis] = n2;
        let mut out = ArrayD::zeros(IxDyn(&shape));
        let forward = fft_plan(m, false);
        let inverse = fft_plan(n2, true);
        let scale = self.reference.spacing() / self.lattice.h() / n2 as f64;
        Zip::from(out.lanes_mut(Axis(axis)))
            .and(data.lanes(Axis(axis)))
            .par_for_each(|mut dst, src| {
                let mut f: Vec<Complex64> = src.iter().copied().collect();
                forward.process(&mut f);
                let mut g = vec![Complex64::default(); n2];
                for (k, fk) in f.iter().enumerate() {
                    let w = self.weights[k];
                    if w != 0.0 {
                        g[wrap(self.reference.signed(k), n2)] += fk * (w * scale);
                    }
                }
                inverse.process(&mut g);
                for (d, s) in dst.iter_mut().zip(g) {
                    *d = s;
                }
            });
        out
    }

    /// `J^ro_h = ℛ J_h 𝒪_h` or `J^re_h = ℛ J_h ℰ_h`.
    pub fn embed_halfspace(&self, u: &HalfLatticeField, mode: TransferMode) -> Result<HalfContinuumField> {
        if u.grid().truncation() != mode.truncation() {
            return Err(Error::mismatch(
                format!("{:?}-truncated half lattice for mode {mode:?}", mode.truncation()),
                u.grid().to_string(),
            ));
        }
        let extended = match mode.even_variant() {
            None => odd_extend_lattice(u)?,
            Some(variant) => even_extend_lattice(u, variant)?,
        };
        Ok(restrict_continuum(&self.embed(&extended)?))
    }

    /// `K^ro_h = ℛ_h K_h 𝒪` or `K^re_h = ℛ_h K_h ℰ`.
    pub fn discretize_halfspace(&self, f: &HalfContinuumField, mode: TransferMode) -> Result<HalfLatticeField> {
        self.check_reference(f.grid())?;
        let extended = match mode {
            TransferMode::Odd => odd_extend_continuum(f),
            _ => even_extend_continuum(f),
        };
        Ok(restrict_lattice(&self.discretize(&extended)?, mode.truncation()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genfunc::{make_meyer, make_shannon};
    use crate::lattice::Field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn plan(dim: usize, h: f64, l: f64, g: GeneratingFunction) -> TransferPlan {
        let lat = LatticeGrid::covering(dim, h, l).unwrap();
        let r = ReferenceGrid::for_lattice(&lat, 1.0).unwrap();
        TransferPlan::new(lat, r, g).unwrap()
    }

    fn random_lattice(grid: LatticeGrid, rng: &mut ChaCha8Rng) -> LatticeField {
        LatticeField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn random_half(grid: crate::lattice::HalfLatticeGrid, rng: &mut ChaCha8Rng) -> HalfLatticeField {
        HalfLatticeField::from_fn(grid, |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    #[test]
    fn impulse_embeds_to_band_limited_kernel() {
        let p = plan(1, 1.0, 8.0, make_shannon());
        let mut v = LatticeField::zeros(*p.lattice());
        v.set(&[0], Complex64::new(1.0, 0.0));
        let f = p.embed(&v).unwrap();
        let n2 = 16.0;
        for i in 0..p.reference().samples() {
            let x = p.reference().position(i);
            // Dirichlet kernel; the two Nyquist terms carry weight b(±π) = 1/√2
            let inner: f64 = (-7..=7).map(|k| (PI * k as f64 * x / 8.0).cos()).sum();
            let expect = (inner + 2f64.sqrt() * (PI * x).cos()) / n2;
            assert!((f.values()[[i]].re - expect).abs() < 1e-13, "x = {x}");
            assert!(f.values()[[i]].im.abs() < 1e-13);
        }
        // away from the period boundary the periodic kernel is close to sinc
        let i = p.reference().wrap(1);
        let x = p.reference().position(i);
        let sinc = (PI * x).sin() / (PI * x);
        assert!((f.values()[[i]].re - sinc).abs() < 0.03);
    }

    #[test]
    fn isometry_adjoint_and_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (dim, h) in [(1, 0.125), (2, 0.25)] {
            for g in [make_shannon(), make_meyer()] {
                let p = plan(dim, h, 2.0, g);
                for _ in 0..3 {
                    let v = random_lattice(*p.lattice(), &mut rng);
                    let jv = p.embed(&v).unwrap();
                    assert!((jv.norm() / v.norm() - 1.0).abs() < 1e-12);
                    let kjv = p.discretize(&jv).unwrap();
                    assert!(kjv.max_abs_diff(&v) < 1e-12);

                    let f = ContinuumField::from_fn(*p.reference(), |_| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    });
                    let lhs = jv.inner(&f);
                    let rhs = v.inner(&p.discretize(&f).unwrap());
                    assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0));

                    let pf = p.embed(&p.discretize(&f).unwrap()).unwrap();
                    let ppf = p.embed(&p.discretize(&pf).unwrap()).unwrap();
                    assert!(ppf.max_abs_diff(&pf) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn linearity_and_symmetry_transport() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = plan(2, 0.25, 2.0, make_meyer());
        let v = random_lattice(*p.lattice(), &mut rng);
        let w = random_lattice(*p.lattice(), &mut rng);
        let a = Complex64::new(0.3, -1.2);
        let mut combo = w.clone();
        combo.axpy(a, &v);
        let mut expect = p.embed(&w).unwrap();
        expect.axpy(a, &p.embed(&v).unwrap());
        assert!(p.embed(&combo).unwrap().max_abs_diff(&expect) < 1e-13);

        let mut odd = v.clone();
        odd.axpy(Complex64::new(-1.0, 0.0), &v.reflect());
        let mut even = v.clone();
        even.axpy(Complex64::new(1.0, 0.0), &v.reflect());
        let jodd = p.embed(&odd).unwrap();
        let jeven = p.embed(&even).unwrap();
        let mut asym = jodd.clone();
        asym.axpy(Complex64::new(1.0, 0.0), &jodd.reflect());
        assert!(asym.max_abs() < 1e-13);
        let mut sym = jeven.clone();
        sym.axpy(Complex64::new(-1.0, 0.0), &jeven.reflect());
        assert!(sym.max_abs() < 1e-13);
    }

    #[test]
    fn disjoint_band_discretizes_to_zero() {
        let p = plan(1, 0.5, 4.0, make_shannon());
        // frequency ξ = 7π/4 > π/h... choose index with |hξ| > π
        let r = *p.reference();
        let k = 7 * r.samples() as i64 / 16;
        let xi = PI * k as f64 / r.half_length();
        assert!(p.lattice().h() * xi > PI);
        let f = ContinuumField::from_fn(r, |x| Complex64::from_polar(1.0, xi * x[0]));
        assert!(p.discretize(&f).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn halfspace_odd_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (dim, h) in [(1, 0.125), (2, 0.25)] {
            let p = plan(dim, h, 2.0, make_meyer());
            let u = random_half(p.lattice().half(Truncation::Dirichlet), &mut rng);
            let ju = p.embed_halfspace(&u, TransferMode::Odd).unwrap();
            assert!((ju.norm() / u.norm() - 1.0).abs() < 1e-12);
            let back = p.discretize_halfspace(&ju, TransferMode::Odd).unwrap();
            assert!(back.max_abs_diff(&u) < 1e-12);
            assert!(p.embed_halfspace(&u, TransferMode::EvenHalfplane).is_err());
        }
    }

    #[test]
    fn halfspace_even_defect_shrinks_for_localized_input() {
        let g = make_meyer();
        let mut defects = Vec::new();
        for h in [0.25, 0.125, 0.0625] {
            let p = plan(1, h, 4.0, g.clone());
            let u = HalfLatticeField::from_fn(p.lattice().half(Truncation::Neumann), |n| {
                let x = h * n[0] as f64;
                Complex64::new((-x * x).exp(), 0.0)
            });
            let ju = p.embed_halfspace(&u, TransferMode::EvenHalfplane).unwrap();
            defects.push((ju.norm() / u.norm() - 1.0).abs());
        }
        assert!(defects[1] < defects[0] && defects[2] < defects[1], "{defects:?}");
        assert!(defects[2] < 0.1);
    }

    #[test]
    fn fourier_pairing_matches_spatial_quadrature() {
        let h = 0.5;
        let p = plan(1, h, 8.0, make_meyer());
        let r = *p.reference();
        // band-limited g: a lattice-band function built through J itself
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let w = random_lattice(*p.lattice(), &mut rng);
        let gfield = p.embed(&w).unwrap();
        let kg = p.discretize(&gfield).unwrap();
        // ⟨φ_{h,n}, g⟩ by trapezoid quadrature against the periodized φ_{h,n} on the torus
        let n = 3i64;
        let period = 2.0 * r.half_length();
        let mut direct = Complex64::default();
        for i in 0..r.samples() {
            let x = r.position(i);
            let mut phi = 0.0;
            for wrapn in -6..=6 {
                phi += p.genfunc().spatial_1d((x - h * n as f64 + wrapn as f64 * period) / h);
            }
            direct += gfield.values()[[i]] * phi;
        }
        direct *= r.spacing() / h;
        // K_h f(n) = h^{-d} ⟨φ_{h,n}, f⟩
        assert!((direct - kg.get(&[n])).norm() < 1e-10 * kg.get(&[n]).norm().max(1.0), "{direct} vs {}", kg.get(&[n]));
    }
}
