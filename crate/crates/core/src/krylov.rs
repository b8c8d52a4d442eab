//! Restarted GMRES over any [`Field`], using the field's own inner product.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::Field;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Relative residual target `‖b - Ax‖ / ‖b‖`.
    pub tol: f64,
    pub max_iter: usize,
    pub restart: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 600,
            restart: 80,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveInfo {
    pub iterations: usize,
    pub residual_history: Vec<f64>,
}

impl SolveInfo {
    pub fn final_residual(&self) -> f64 {
        self.residual_history.last().copied().unwrap_or(0.0)
    }
}

/// Solves `A x = b` from a zero initial guess.
pub fn gmres<F: Field>(
    apply: impl Fn(&F) -> Result<F>,
    b: &F,
    opts: &SolverOptions,
) -> Result<(F, SolveInfo)> {
    let b_norm = b.norm();
    let mut x = b.zeros_like();
    let mut history = vec![1.0];
    if b_norm == 0.0 {
        return Ok((
            x,
            SolveInfo {
                iterations: 0,
                residual_history: vec![0.0],
            },
        ));
    }
    let mut iterations = 0;
    let mut r = b.clone();
    loop {
        let beta = r.norm();
        let rel = beta / b_norm;
        *history.last_mut().unwrap() = rel;
        if rel <= opts.tol {
            return Ok((
                x,
                SolveInfo {
                    iterations,
                    residual_history: history,
                },
            ));
        }
        if iterations >= opts.max_iter {
            return Err(Error::NotConverged {
                iterations,
                residual_history: history,
            });
        }
        let m = opts.restart.min(opts.max_iter - iterations).max(1);
        let mut basis: Vec<F> = Vec::with_capacity(m + 1);
        let mut v0 = r.clone();
        v0.scale(Complex64::new(1.0 / beta, 0.0));
        basis.push(v0);
        // Hessenberg columns, Givens rotations, rotated right-hand side
        let mut hess: Vec<Vec<Complex64>> = Vec::with_capacity(m);
        let mut cs: Vec<(f64, Complex64)> = Vec::with_capacity(m);
        let mut g = vec![Complex64::new(beta, 0.0)];
        let mut k = 0;
        while k < m {
            let mut w = apply(&basis[k])?;
            let mut col = Vec::with_capacity(k + 2);
            for v in &basis {
                let hij = v.inner(&w);
                w.axpy(-hij, v);
                col.push(hij);
            }
            let wn = w.norm();
            col.push(Complex64::new(wn, 0.0));
            for (i, &(c, s)) in cs.iter().enumerate() {
                let (a, bb) = (col[i], col[i + 1]);
                col[i] = a * c + s * bb;
                col[i + 1] = -s.conj() * a + bb * c;
            }
            let (a, bb) = (col[k], col[k + 1]);
            let denom = (a.norm_sqr() + bb.norm_sqr()).sqrt();
            let (c, s) = if denom == 0.0 {
                (1.0, Complex64::default())
            } else if a.norm() == 0.0 {
                (0.0, Complex64::new(1.0, 0.0) * (bb.conj() / bb.norm()))
            } else {
                let c = a.norm() / denom;
                let s = (a / a.norm()) * bb.conj() / denom;
                (c, s)
            };
            col[k] = a * c + s * bb;
            col[k + 1] = Complex64::default();
            cs.push((c, s));
            let gk = g[k];
            g[k] = gk * c;
            g.push(-s.conj() * gk);
            hess.push(col);
            iterations += 1;
            k += 1;
            let rel = g[k].norm() / b_norm;
            history.push(rel);
            if rel <= opts.tol || wn == 0.0 {
                break;
            }
            let mut next = w;
            next.scale(Complex64::new(1.0 / wn, 0.0));
            basis.push(next);
        }
        // back substitution on the triangular system
        let mut y = vec![Complex64::default(); k];
        for i in (0..k).rev() {
            let mut acc = g[i];
            for j in i + 1..k {
                acc -= hess[j][i] * y[j];
            }
            y[i] = acc / hess[i][i];
        }
        for (yi, v) in y.iter().zip(&basis) {
            x.axpy(*yi, v);
        }
        // true residual for the restart
        let ax = apply(&x)?;
        r = b.clone();
        r.axpy(Complex64::new(-1.0, 0.0), &ax);
        history.push(r.norm() / b_norm);
    }
}
