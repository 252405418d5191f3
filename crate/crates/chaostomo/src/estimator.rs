//! State estimation from a measurement record: the regularized unconstrained
//! least-squares estimate, the covariance bookkeeping, and the
//! positivity-constrained estimate solved by an accelerated projected
//! gradient method with an exact projection onto density matrices.

use crate::basis::{density_from_bloch, OperatorBasis};
use crate::error::{Error, Result};
use crate::linalg::{cr, hermitize, BlochVector, DesignMatrix, Operator, RealVector};
use crate::measurement::Record;
use nalgebra::{Cholesky, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Inverse covariance C^-1 = O^T O of the record likelihood, its Tikhonov
/// regularization C^-1 + eps I, and the (cached) raw spectrum.
///
/// The nonzero eigenvalues of O^T O equal those of the row Gram matrix
/// O O^T, so the spectrum is computed on the smaller of the two and padded
/// with exact zeros; regularized eigenvalues are the raw ones shifted by eps.
#[derive(Debug, Clone)]
pub struct CovarianceInfo {
    pub cinv: DMatrix<f64>,
    pub cinv_reg: DMatrix<f64>,
    pub eps: f64,
    eigvals: Vec<f64>,
}

impl CovarianceInfo {
    /// Raw spectrum of C^-1, descending, length D.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigvals
    }

    /// Spectrum of C^-1 + eps I, descending.
    pub fn regularized_eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigvals.iter().map(move |l| l + self.eps)
    }

    pub fn trace(&self) -> f64 {
        self.cinv.trace()
    }

    pub fn trace_reg(&self) -> f64 {
        self.cinv_reg.trace()
    }

    pub fn size(&self) -> usize {
        self.cinv.nrows()
    }
}

/// Absolute regularization strength from a fraction of the mean eigenvalue
/// of O^T O: eps_rel * Tr(O^T O) / D.
pub fn relative_eps(design: &DesignMatrix, eps_rel: f64) -> f64 {
    eps_rel * design.norm_squared() / design.ncols() as f64
}

pub fn covariance_inverse(design: &DesignMatrix, eps: f64) -> Result<CovarianceInfo> {
    if eps < 0.0 || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "regularization strength must be finite and >= 0, got {eps}"
        )));
    }
    let (n, dd) = (design.nrows(), design.ncols());
    let cinv = symmetrized_product(design, true);
    let mut cinv_reg = cinv.clone();
    for i in 0..dd {
        cinv_reg[(i, i)] += eps;
    }
    let mut eigvals: Vec<f64> = if n < dd {
        let gram = symmetrized_product(design, false);
        let mut v: Vec<f64> = gram.symmetric_eigenvalues().iter().copied().collect();
        v.resize(dd, 0.0);
        v
    } else {
        cinv.symmetric_eigenvalues().iter().copied().collect()
    };
    eigvals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(CovarianceInfo {
        cinv,
        cinv_reg,
        eps,
        eigvals,
    })
}

/// O^T O (normal) or O O^T (gram), symmetrized against roundoff.
fn symmetrized_product(design: &DesignMatrix, normal: bool) -> DMatrix<f64> {
    let m = if normal {
        design.tr_mul(design)
    } else {
        design * design.transpose()
    };
    let mt = m.transpose();
    (m + mt).map(|x| 0.5 * x)
}

/// Options for the constrained solver. `eps` regularizes the warm-start
/// unconstrained estimate only; the constrained objective is unregularized.
#[derive(Debug, Clone)]
pub struct SolverOptions {
    pub max_iters: usize,
    pub rel_obj_tol: f64,
    pub eps: f64,
    /// Record the per-iteration objective values (diagnostics only).
    pub record_trace: bool,
    /// Initial iterate; when absent the solver starts from the projected
    /// regularized unconstrained estimate.
    pub init: Option<BlochVector>,
    /// Known value of 2 lambda_max(O^T O); skips the power iteration.
    pub lipschitz: Option<f64>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            max_iters: 20_000,
            rel_obj_tol: 1e-10,
            eps: 1e-12,
            record_trace: false,
            init: None,
            lipschitz: None,
        }
    }
}

impl SolverOptions {
    fn validate(&self) -> Result<()> {
        if self.max_iters < 1 {
            return Err(Error::InvalidParameter("max_iters must be >= 1".into()));
        }
        if !(self.rel_obj_tol > 0.0) {
            return Err(Error::InvalidParameter("rel_obj_tol must be > 0".into()));
        }
        if self.eps < 0.0 {
            return Err(Error::InvalidParameter("eps must be >= 0".into()));
        }
        Ok(())
    }
}

/// Unconstrained ridge-regularized maximum-likelihood Bloch estimate,
/// r = (O^T O + eps I)^-1 O^T M.
///
/// For n < D rows the solve goes through the algebraically identical
/// record-space form O^T (O O^T + eps I)^-1 M, which only factors an n x n
/// matrix.
pub fn ml_estimate(design: &DesignMatrix, record: &Record, eps: f64) -> Result<BlochVector> {
    check_record(design, record)?;
    if eps < 0.0 || !eps.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "regularization strength must be finite and >= 0, got {eps}"
        )));
    }
    let (n, dd) = (design.nrows(), design.ncols());
    if eps == 0.0 && n < dd {
        return Err(Error::Solver(
            "normal matrix is rank-deficient and eps = 0; the system is singular".into(),
        ));
    }
    if eps > 0.0 && n < dd {
        ml_estimate_dual(design, &record.values, eps)
    } else {
        ml_estimate_primal(design, &record.values, eps)
    }
}

fn ml_estimate_primal(design: &DesignMatrix, m: &RealVector, eps: f64) -> Result<BlochVector> {
    let dd = design.ncols();
    let mut a = symmetrized_product(design, true);
    for i in 0..dd {
        a[(i, i)] += eps;
    }
    let chol = Cholesky::new(a).ok_or_else(|| {
        Error::Solver("regularized normal matrix is not positive definite".into())
    })?;
    Ok(chol.solve(&design.tr_mul(m)))
}

fn ml_estimate_dual(design: &DesignMatrix, m: &RealVector, eps: f64) -> Result<BlochVector> {
    let n = design.nrows();
    let mut g = symmetrized_product(design, false);
    for i in 0..n {
        g[(i, i)] += eps;
    }
    let chol = Cholesky::new(g).ok_or_else(|| {
        Error::Solver("regularized record-space matrix is not positive definite".into())
    })?;
    Ok(design.tr_mul(&chol.solve(m)))
}

fn check_record(design: &DesignMatrix, record: &Record) -> Result<()> {
    if record.values.len() != design.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "record has {} samples but design has {} rows",
            record.values.len(),
            design.nrows()
        )));
    }
    Ok(())
}

/// Nearest density matrix in Frobenius distance: eigendecompose, project the
/// eigenvalue vector onto the probability simplex, reassemble.
pub fn project_psd_trace1(h: &Operator) -> Operator {
    let herm = hermitize(h);
    let eig = herm.symmetric_eigen();
    let probs = simplex_projection(eig.eigenvalues.as_slice());
    let mut scaled = eig.eigenvectors.clone();
    for (k, p) in probs.iter().enumerate() {
        for r in 0..scaled.nrows() {
            scaled[(r, k)] *= cr(*p);
        }
    }
    hermitize(&(scaled * eig.eigenvectors.adjoint()))
}

/// Euclidean projection onto the probability simplex by the water-filling
/// threshold; ties are broken by the input ordering (stable sort).
pub fn simplex_projection(v: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..v.len()).collect();
    order.sort_by(|&a, &b| v[b].partial_cmp(&v[a]).unwrap().then(a.cmp(&b)));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (rank, &idx) in order.iter().enumerate() {
        cum += v[idx];
        let t = (cum - 1.0) / (rank + 1) as f64;
        if v[idx] - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Positivity-constrained least-squares estimate.
#[derive(Debug, Clone)]
pub struct ConstrainedEstimate {
    pub rho: Operator,
    pub bloch: BlochVector,
    /// ||M - O r||^2 at the returned point.
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Objective after each iteration, only filled when requested.
    pub objective_trace: Vec<f64>,
}

/// Minimize ||M - O r||^2 over Bloch vectors whose density matrix is
/// positive semidefinite.
///
/// Accelerated projected gradient with step 1/L, L = 2 lambda_max(O^T O)
/// from power iteration; the candidate is kept only if it does not increase
/// the objective, and momentum restarts whenever a candidate is rejected, so
/// the objective sequence is nonincreasing. The iterate is warm-started from
/// the projection of the regularized unconstrained estimate.
pub fn constrained_estimate(
    design: &DesignMatrix,
    record: &Record,
    basis: &OperatorBasis,
    opts: &SolverOptions,
) -> Result<ConstrainedEstimate> {
    opts.validate()?;
    check_record(design, record)?;
    if design.ncols() != basis.len() {
        return Err(Error::DimensionMismatch(format!(
            "design has {} columns but basis has {} elements",
            design.ncols(),
            basis.len()
        )));
    }
    let m = &record.values;

    let lam_max = opts
        .lipschitz
        .map(|l| l / 2.0)
        .unwrap_or_else(|| top_normal_eigenvalue(design));
    let mut lip = (2.0 * lam_max * (1.0 + 1e-2)).max(1e-12);

    let warm = match &opts.init {
        Some(r) => r.clone(),
        None => match ml_estimate(design, record, opts.eps) {
            Ok(r) => r,
            Err(_) => BlochVector::zeros(design.ncols()),
        },
    };
    let project = |r: &BlochVector| -> Result<BlochVector> {
        let rho = density_from_bloch(r, basis)?;
        basis.coords_of(&project_psd_trace1(&rho))
    };
    let objective = |r: &BlochVector| -> f64 { (m - design * r).norm_squared() };

    // The objective cannot be resolved below the roundoff of the residual
    // vector itself; treat that level as exact interpolation.
    let f_floor = {
        let max_row = (0..design.nrows())
            .map(|i| design.row(i).norm())
            .fold(0.0f64, f64::max);
        let scale = max_row + m.amax();
        design.nrows() as f64 * (4.0 * f64::EPSILON * scale).powi(2)
    };

    let mut x = project(&warm)?;
    let mut f_x = objective(&x);
    let mut y = x.clone();
    let mut t = 1.0f64;
    let mut at_restart = true;
    let mut stall = 0usize;
    let mut converged = false;
    let mut iterations = 0usize;
    let mut trace = Vec::new();

    if f_x <= f_floor {
        converged = true;
    }
    for k in 0..opts.max_iters {
        if converged {
            break;
        }
        iterations = k + 1;
        let grad = design.tr_mul(&(design * &y - m)).map(|g| 2.0 * g);
        let z = project(&(&y - grad.map(|g| g / lip)))?;
        let f_z = objective(&z);
        if f_z <= f_x {
            let improvement = f_x - f_z;
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = &z + (&z - &x).map(|w| w * ((t - 1.0) / t_next));
            x = z;
            f_x = f_z;
            t = t_next;
            at_restart = false;
            if f_x <= f_floor {
                converged = true;
            } else if improvement <= opts.rel_obj_tol * f_x {
                stall += 1;
                if stall >= 3 {
                    converged = true;
                }
            } else {
                stall = 0;
            }
        } else if at_restart {
            // a plain gradient step from x failed the descent test: the
            // Lipschitz estimate is too small
            lip *= 1.5;
        } else {
            // momentum overshoot: restart from the best point
            t = 1.0;
            y = x.clone();
            at_restart = true;
            stall = 0;
        }
        if opts.record_trace {
            trace.push(f_x);
        }
        if converged {
            break;
        }
    }

    let rho = density_from_bloch(&x, basis)?;
    Ok(ConstrainedEstimate {
        rho,
        bloch: x,
        residual: f_x,
        converged,
        iterations,
        objective_trace: trace,
    })
}

/// Largest eigenvalue of O^T O by power iteration on the smaller of O^T O
/// and O O^T (identical nonzero spectra); deterministic start vector.
pub fn top_normal_eigenvalue(design: &DesignMatrix) -> f64 {
    let s = symmetrized_product(design, design.nrows() >= design.ncols());
    let mut rng = ChaCha12Rng::seed_from_u64(0x9e37_79b9_7f4a_7c15);
    let mut v = RealVector::from_fn(s.nrows(), |_, _| rng.sample::<f64, _>(StandardNormal));
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    v /= norm;
    let mut lam = 0.0f64;
    for _ in 0..500 {
        let w = &s * &v;
        let lam_new = v.dot(&w);
        let wn = w.norm();
        if wn == 0.0 {
            return 0.0;
        }
        v = w / wn;
        if (lam_new - lam).abs() <= 1e-10 * lam_new.abs().max(1.0) {
            return lam_new;
        }
        lam = lam_new;
    }
    lam
}
