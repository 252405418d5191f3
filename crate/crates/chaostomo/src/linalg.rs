//! Shared dense linear-algebra aliases and small helpers.

use nalgebra::{Complex, DMatrix, DVector};

pub type C64 = Complex<f64>;

/// Dense complex operator on the spin Hilbert space.
pub type Operator = DMatrix<C64>;

/// Complex state vector.
pub type StateVector = DVector<C64>;

/// Real vector (records, eigenvalue lists, ...).
pub type RealVector = DVector<f64>;

/// Generalized Bloch coordinates in an orthonormal traceless Hermitian basis.
pub type BlochVector = RealVector;

/// Real n x D matrix whose row i holds the basis coefficients of the
/// observable measured at step i.
pub type DesignMatrix = DMatrix<f64>;

pub const IM: C64 = C64::new(0.0, 1.0);

pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &Operator, b: &Operator) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `m - m^dag`.
pub fn hermiticity_error(m: &Operator) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Largest entrywise modulus of `u^dag u - I`.
pub fn unitarity_error(u: &Operator) -> f64 {
    let d = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &Operator::identity(d, d))
}

/// Symmetrize to the nearest Hermitian matrix, `(m + m^dag) / 2`.
pub fn hermitize(m: &Operator) -> Operator {
    (m + m.adjoint()).map(|z| z * 0.5)
}

/// Tr(a b), exact complex value.
pub fn trace_product(a: &Operator, b: &Operator) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Rank-one density matrix |psi><psi| of a pure state.
pub fn pure_density(psi: &StateVector) -> Operator {
    psi * psi.adjoint()
}
