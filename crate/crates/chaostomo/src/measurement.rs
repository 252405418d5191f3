//! Design matrix built from the Heisenberg observable series, and simulation
//! of noisy weak-measurement records M_i = Tr(O(i) rho_0) + W_i.

use crate::basis::OperatorBasis;
use crate::error::{Error, Result};
use crate::linalg::{hermiticity_error, trace_product, DesignMatrix, Operator, RealVector};
use crate::random::SeededRng;

/// Measurement record: one noisy expectation value per time step, together
/// with the Gaussian noise spread kappa = sigma / N_A it was generated with.
#[derive(Debug, Clone)]
pub struct Record {
    pub values: RealVector,
    pub noise_spread: f64,
}

/// Row i holds the basis coefficients Tr(O(i) Xi_a) of the i-th evolved
/// observable; the noiseless record is then design * r(rho_0).
pub fn design_matrix(series: &[Operator], basis: &OperatorBasis) -> Result<DesignMatrix> {
    if series.is_empty() {
        return Err(Error::InvalidParameter("observable series is empty".into()));
    }
    let d = basis.dim();
    let mut out = DesignMatrix::zeros(series.len(), basis.len());
    for (i, op) in series.iter().enumerate() {
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "series element {i} is {}x{} but basis dimension is {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        if hermiticity_error(op) > 1e-10 {
            return Err(Error::Validation(format!(
                "series element {i} is not Hermitian"
            )));
        }
        let coords = basis.coords_of(op)?;
        out.row_mut(i).copy_from_slice(coords.as_slice());
    }
    Ok(out)
}

/// Simulate a measurement record for the state rho_0: the exact expectation
/// values of the evolved observables plus i.i.d. Gaussian noise of spread
/// kappa. kappa = 0 yields the exact expectations.
pub fn simulate_record(
    rho0: &Operator,
    series: &[Operator],
    kappa: f64,
    rng: &mut SeededRng,
) -> Result<Record> {
    if kappa < 0.0 || !kappa.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "noise spread must be finite and >= 0, got {kappa}"
        )));
    }
    if series.is_empty() {
        return Err(Error::InvalidParameter("observable series is empty".into()));
    }
    let d = series[0].nrows();
    if rho0.nrows() != d || rho0.ncols() != d {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{} but observables are {d}x{d}",
            rho0.nrows(),
            rho0.ncols()
        )));
    }
    let trace = rho0.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 || hermiticity_error(rho0) > 1e-10 {
        return Err(Error::Validation(
            "rho_0 must be a Hermitian unit-trace density matrix".into(),
        ));
    }
    let values = RealVector::from_fn(series.len(), |i, _| {
        trace_product(&series[i], rho0).re + kappa * rng.standard_normal()
    });
    Ok(Record {
        values,
        noise_spread: kappa,
    })
}

pub(crate) fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

impl Record {
    /// Debug CSV, one `step,value` row per time step.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (i, v) in self.values.iter().enumerate() {
            s.push_str(&format!("{i},{}\n", fmt12(*v)));
        }
        s
    }
}

/// Debug CSV for a design matrix: one row per time step, the step index
/// followed by the basis coefficients.
pub fn design_to_csv(design: &DesignMatrix) -> String {
    let mut s = String::new();
    for i in 0..design.nrows() {
        s.push_str(&i.to_string());
        for j in 0..design.ncols() {
            s.push(',');
            s.push_str(&fmt12(design[(i, j)]));
        }
        s.push('\n');
    }
    s
}
