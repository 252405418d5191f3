//! Information-gain metrics: reconstruction fidelity, total Fisher
//! information, mutual information, Shannon entropy of the normalized
//! inverse-covariance spectrum, and Hilbert-Schmidt distance.
//!
//! Logarithms are natural throughout, so the entropy bound for a
//! d-dimensional system is ln(d^2 - 1) nats.

use crate::error::{Error, Result};
use crate::estimator::CovarianceInfo;
use crate::linalg::{Operator, StateVector};

/// F = <psi_0| rho |psi_0>, clipped to [0, 1].
pub fn fidelity(psi0: &StateVector, rho: &Operator) -> Result<f64> {
    if rho.nrows() != psi0.len() || rho.ncols() != psi0.len() {
        return Err(Error::DimensionMismatch(format!(
            "state has dimension {} but operator is {}x{}",
            psi0.len(),
            rho.nrows(),
            rho.ncols()
        )));
    }
    let value = (psi0.adjoint() * rho * psi0)[(0, 0)];
    if value.im.abs() > 1e-9 {
        return Err(Error::Numeric(format!(
            "fidelity has imaginary residue {}",
            value.im
        )));
    }
    if value.re < -1e-9 || value.re > 1.0 + 1e-9 {
        return Err(Error::Numeric(format!(
            "fidelity {} outside [0, 1]",
            value.re
        )));
    }
    Ok(value.re.clamp(0.0, 1.0))
}

/// Total Fisher information J = 1 / Tr((C^-1 + eps I)^-1), dimensionless
/// (record units carry the 1/kappa^2 factor).
pub fn fisher_info(cov: &CovarianceInfo) -> Result<f64> {
    let mut trace_c = 0.0;
    for l in cov.regularized_eigenvalues() {
        if l <= 0.0 {
            return Err(Error::Numeric(format!(
                "regularized covariance has non-positive eigenvalue {l}"
            )));
        }
        trace_c += 1.0 / l;
    }
    Ok(1.0 / trace_c)
}

/// Mutual information between state and record,
/// -1/2 ln det C = 1/2 sum ln(lambda_a + eps).
pub fn mutual_information(cov: &CovarianceInfo) -> Result<f64> {
    let mut acc = 0.0;
    for l in cov.regularized_eigenvalues() {
        if l <= 0.0 {
            return Err(Error::Numeric(format!(
                "regularized covariance has non-positive eigenvalue {l}"
            )));
        }
        acc += l.ln();
    }
    Ok(0.5 * acc)
}

/// Shannon entropy of the normalized raw spectrum of C^-1,
/// H = -sum p_a ln p_a with p_a = lambda_a / Tr(C^-1) and 0 ln 0 = 0.
pub fn eigen_entropy(cov: &CovarianceInfo) -> Result<f64> {
    let clamped: Vec<f64> = cov.eigenvalues().iter().map(|l| l.max(0.0)).collect();
    let trace: f64 = clamped.iter().sum();
    if trace <= 0.0 {
        return Err(Error::InvalidParameter(
            "covariance trace must be positive for the eigenvalue entropy".into(),
        ));
    }
    let mut h = 0.0;
    for l in clamped {
        if l > 0.0 {
            let p = l / trace;
            h -= p * p.ln();
        }
    }
    Ok(h)
}

/// Slack of the arithmetic-geometric mean bound in log form,
/// D ln(Tr(C^-1 + eps I)/D) - ln det(C^-1 + eps I); nonnegative up to
/// roundoff for any positive-semidefinite matrix.
pub fn det_bound_slack(cov: &CovarianceInfo) -> f64 {
    let dd = cov.size() as f64;
    let bound = dd * (cov.trace_reg() / dd).ln();
    let logdet: f64 = cov
        .regularized_eigenvalues()
        .map(|l| if l > 0.0 { l.ln() } else { f64::NEG_INFINITY })
        .sum();
    bound - logdet
}

/// Hilbert-Schmidt distance Tr((rho0 - rho)^2); for Hermitian inputs this is
/// the squared Frobenius distance. For a pure rho0 it expands to
/// 1 + Tr(rho^2) - 2 F.
pub fn hs_distance(rho0: &Operator, rho: &Operator) -> Result<f64> {
    if rho0.nrows() != rho.nrows() || rho0.ncols() != rho.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "operators are {}x{} and {}x{}",
            rho0.nrows(),
            rho0.ncols(),
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok((rho0 - rho).norm_squared())
}
