//! Spin-j angular momentum operators, the kicked-top Floquet unitary, and
//! Heisenberg-picture evolution of the measured observable.
//!
//! The matrix basis is ordered by magnetic quantum number m = j, j-1, ..., -j.

use crate::error::{Error, Result};
use crate::linalg::{cr, hermitize, Operator, C64, IM};

/// Validated half-integer spin quantum number, j > 0 with 2j integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spin {
    two_j: u32,
}

impl Spin {
    pub fn new(j: f64) -> Result<Self> {
        let two_j = (2.0 * j).round();
        if !(j > 0.0) || (2.0 * j - two_j).abs() > 1e-9 || two_j < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "spin must be a positive half-integer, got j = {j}"
            )));
        }
        Ok(Spin { two_j: two_j as u32 })
    }

    pub fn j(&self) -> f64 {
        self.two_j as f64 / 2.0
    }

    /// Hilbert-space dimension d = 2j + 1.
    pub fn dim(&self) -> usize {
        self.two_j as usize + 1
    }

    /// Magnetic quantum numbers in basis order, m = j down to -j.
    pub fn projections(&self) -> impl Iterator<Item = f64> + '_ {
        let j = self.j();
        (0..self.dim()).map(move |i| j - i as f64)
    }
}

/// Kicked-top parameters: one period applies an x-rotation by `alpha`
/// followed by the nonlinear twist of strength `lambda`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TopParams {
    pub spin: Spin,
    pub alpha: f64,
    pub lambda: f64,
}

impl TopParams {
    pub fn new(j: f64, alpha: f64, lambda: f64) -> Result<Self> {
        Ok(TopParams {
            spin: Spin::new(j)?,
            alpha,
            lambda,
        })
    }
}

/// j_z: diagonal with entries m = j, j-1, ..., -j.
pub fn build_jz(spin: Spin) -> Operator {
    let d = spin.dim();
    let mut m = Operator::zeros(d, d);
    for (i, mi) in spin.projections().enumerate() {
        m[(i, i)] = cr(mi);
    }
    m
}

/// j_x = (j_+ + j_-) / 2 with <m+1|j_+|m> = sqrt(j(j+1) - m(m+1)).
pub fn build_jx(spin: Spin) -> Operator {
    let d = spin.dim();
    let j = spin.j();
    let mut m = Operator::zeros(d, d);
    let ms: Vec<f64> = spin.projections().collect();
    for i in 1..d {
        // raising element connecting |m_i> to |m_i + 1> = |m_{i-1}>
        let c = 0.5 * (j * (j + 1.0) - ms[i] * (ms[i] + 1.0)).sqrt();
        m[(i - 1, i)] = cr(c);
        m[(i, i - 1)] = cr(c);
    }
    m
}

/// j_y = (j_+ - j_-) / (2i).
pub fn build_jy(spin: Spin) -> Operator {
    let d = spin.dim();
    let j = spin.j();
    let mut m = Operator::zeros(d, d);
    let ms: Vec<f64> = spin.projections().collect();
    for i in 1..d {
        let c = 0.5 * (j * (j + 1.0) - ms[i] * (ms[i] + 1.0)).sqrt();
        m[(i - 1, i)] = -IM * c;
        m[(i, i - 1)] = IM * c;
    }
    m
}

/// One-period kicked-top unitary: exp(-i lambda j_z^2 / (2j)) exp(-i alpha j_x).
///
/// The rotation factor is exponentiated through the eigendecomposition of the
/// Hermitian j_x; the twist factor is diagonal and exponentiated entrywise.
pub fn build_floquet(p: &TopParams) -> Operator {
    let jx = build_jx(p.spin);
    let eig = jx.symmetric_eigen();
    let phases = eig.eigenvalues.map(|w| C64::from_polar(1.0, -p.alpha * w));
    let mut rotation = eig.eigenvectors.clone();
    for (k, phase) in phases.iter().enumerate() {
        for r in 0..rotation.nrows() {
            rotation[(r, k)] *= phase;
        }
    }
    let mut u = rotation * eig.eigenvectors.adjoint();

    let j = p.spin.j();
    for (i, m) in p.spin.projections().enumerate() {
        let twist = C64::from_polar(1.0, -p.lambda * m * m / (2.0 * j));
        for c in 0..u.ncols() {
            u[(i, c)] *= twist;
        }
    }
    u
}

/// Heisenberg series [O(0), ..., O(n_steps - 1)] with O(k) = (U^dag)^k O0 U^k,
/// computed iteratively as O(k+1) = U^dag O(k) U.
pub fn heisenberg_series(u: &Operator, o0: &Operator, n_steps: usize) -> Result<Vec<Operator>> {
    if n_steps < 1 {
        return Err(Error::InvalidParameter("n_steps must be >= 1".into()));
    }
    if u.nrows() != u.ncols() || o0.nrows() != o0.ncols() || u.nrows() != o0.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {}x{} but observable is {}x{}",
            u.nrows(),
            u.ncols(),
            o0.nrows(),
            o0.ncols()
        )));
    }
    let udag = u.adjoint();
    let mut series = Vec::with_capacity(n_steps);
    series.push(o0.clone());
    for k in 1..n_steps {
        let next = hermitize(&(&udag * &series[k - 1] * u));
        series.push(next);
    }
    Ok(series)
}
