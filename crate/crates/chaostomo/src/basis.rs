//! Orthonormal traceless Hermitian operator basis (generalized Gell-Mann
//! construction) and conversions between density matrices and generalized
//! Bloch vectors, rho = I/d + sum_a r_a Xi_a.
//!
//! Element ordering is fixed and serialized data depends on it: first the
//! d(d-1)/2 symmetric pair elements (|k><l| + |l><k|)/sqrt(2) with k < l in
//! lexicographic order, then the antisymmetric pair elements
//! (-i|k><l| + i|l><k|)/sqrt(2) in the same pair order, then the d-1
//! diagonal elements diag(1, ..., 1, -l, 0, ...)/sqrt(l(l+1)).

use crate::error::{Error, Result};
use crate::linalg::{cr, hermiticity_error, BlochVector, Operator, C64, IM};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Orthonormal basis of traceless Hermitian operators on a d-dimensional space.
#[derive(Debug, Clone)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<Operator>,
}

/// Generalized Gell-Mann basis for dimension d >= 2.
pub fn gell_mann_basis(d: usize) -> Result<OperatorBasis> {
    OperatorBasis::gell_mann(d)
}

impl OperatorBasis {
    pub fn gell_mann(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "basis dimension must be >= 2, got {d}"
            )));
        }
        let mut elements = Vec::with_capacity(d * d - 1);
        for k in 0..d {
            for l in (k + 1)..d {
                let mut e = Operator::zeros(d, d);
                e[(k, l)] = cr(1.0 / SQRT2);
                e[(l, k)] = cr(1.0 / SQRT2);
                elements.push(e);
            }
        }
        for k in 0..d {
            for l in (k + 1)..d {
                let mut e = Operator::zeros(d, d);
                e[(k, l)] = -IM / SQRT2;
                e[(l, k)] = IM / SQRT2;
                elements.push(e);
            }
        }
        for l in 1..d {
            let norm = (l as f64 * (l as f64 + 1.0)).sqrt();
            let mut e = Operator::zeros(d, d);
            for i in 0..l {
                e[(i, i)] = cr(1.0 / norm);
            }
            e[(l, l)] = cr(-(l as f64) / norm);
            elements.push(e);
        }
        Ok(OperatorBasis { dim: d, elements })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of basis elements, D = d^2 - 1.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, alpha: usize) -> &Operator {
        &self.elements[alpha]
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    fn pair_count(&self) -> usize {
        self.dim * (self.dim - 1) / 2
    }

    fn pair_index(&self, k: usize, l: usize) -> usize {
        // lexicographic index of (k, l), k < l
        k * (self.dim - 1) - k * (k + 1) / 2 + l - 1
    }

    /// Coefficients Tr(op Xi_a) of a Hermitian operator, exploiting the
    /// sparsity of the Gell-Mann elements; O(d^2) total.
    pub fn coords_of(&self, op: &Operator) -> Result<BlochVector> {
        let d = self.dim;
        if op.nrows() != d || op.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{} but basis dimension is {d}",
                op.nrows(),
                op.ncols()
            )));
        }
        let p = self.pair_count();
        let mut r = BlochVector::zeros(self.len());
        for k in 0..d {
            for l in (k + 1)..d {
                let idx = self.pair_index(k, l);
                r[idx] = SQRT2 * op[(k, l)].re;
                r[p + idx] = -SQRT2 * op[(k, l)].im;
            }
        }
        let mut prefix = 0.0;
        for l in 1..d {
            prefix += op[(l - 1, l - 1)].re;
            let norm = (l as f64 * (l as f64 + 1.0)).sqrt();
            r[2 * p + l - 1] = (prefix - l as f64 * op[(l, l)].re) / norm;
        }
        Ok(r)
    }

    /// The traceless Hermitian combination sum_a r_a Xi_a.
    pub fn combine(&self, r: &BlochVector) -> Result<Operator> {
        let d = self.dim;
        if r.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "coordinate vector has length {} but basis has {} elements",
                r.len(),
                self.len()
            )));
        }
        let p = self.pair_count();
        let mut m = Operator::zeros(d, d);
        for k in 0..d {
            for l in (k + 1)..d {
                let idx = self.pair_index(k, l);
                let z = C64::new(r[idx], -r[p + idx]) / SQRT2;
                m[(k, l)] = z;
                m[(l, k)] = z.conj();
            }
        }
        for l in 1..d {
            let norm = (l as f64 * (l as f64 + 1.0)).sqrt();
            let c = r[2 * p + l - 1] / norm;
            for i in 0..l {
                m[(i, i)] += cr(c);
            }
            m[(l, l)] -= cr(l as f64 * c);
        }
        Ok(m)
    }
}

/// Bloch coordinates r_a = Tr(rho Xi_a) of a density matrix.
pub fn bloch_from_density(rho: &Operator, basis: &OperatorBasis) -> Result<BlochVector> {
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > 1e-10 || trace.im.abs() > 1e-10 {
        return Err(Error::Validation(format!(
            "density matrix trace is {trace}, expected 1"
        )));
    }
    if hermiticity_error(rho) > 1e-10 {
        return Err(Error::Validation("density matrix is not Hermitian".into()));
    }
    basis.coords_of(rho)
}

/// Reconstruct I/d + sum_a r_a Xi_a. Hermitian with unit trace by
/// construction; positivity is the caller's concern.
pub fn density_from_bloch(r: &BlochVector, basis: &OperatorBasis) -> Result<Operator> {
    let mut rho = basis.combine(r)?;
    let inv_d = 1.0 / basis.dim() as f64;
    for i in 0..basis.dim() {
        rho[(i, i)] += cr(inv_d);
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, pure_density, trace_product};
    use crate::random::{haar_pure_state, SeededRng};
    use approx::assert_relative_eq;

    /// Reference contraction Tr(op Xi_a) from the dense elements.
    fn coords_by_trace(basis: &OperatorBasis, op: &Operator) -> (BlochVector, f64) {
        let mut r = BlochVector::zeros(basis.len());
        let mut residue = 0.0f64;
        for (a, xi) in basis.elements().iter().enumerate() {
            let t = trace_product(op, xi);
            r[a] = t.re;
            residue = residue.max(t.im.abs());
        }
        (r, residue)
    }

    fn random_density(d: usize, rng: &mut SeededRng) -> Operator {
        // mixture of d Haar states with fixed positive weights
        let mut rho = Operator::zeros(d, d);
        let mut total = 0.0;
        for i in 0..d {
            let w = 1.0 / (1.0 + i as f64);
            rho += pure_density(&haar_pure_state(d, rng).unwrap()).map(|z| z * w);
            total += w;
        }
        rho.map(|z| z / total)
    }

    #[test]
    fn rejects_dimension_below_two() {
        assert!(OperatorBasis::gell_mann(1).is_err());
    }

    #[test]
    fn qubit_basis_is_normalized_paulis() {
        let b = OperatorBasis::gell_mann(2).unwrap();
        let sx = Operator::from_row_slice(2, 2, &[cr(0.0), cr(1.0), cr(1.0), cr(0.0)]);
        let sy = Operator::from_row_slice(2, 2, &[cr(0.0), -IM, IM, cr(0.0)]);
        let sz = Operator::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr(-1.0)]);
        for (e, pauli) in b.elements().iter().zip([sx, sy, sz]) {
            assert!(max_abs_diff(e, &pauli.map(|z| z / SQRT2)) < 1e-15);
        }
    }

    #[test]
    fn element_count_is_d_squared_minus_one() {
        for d in [2, 3, 4, 21] {
            let b = OperatorBasis::gell_mann(d).unwrap();
            assert_eq!(b.len(), d * d - 1);
        }
        assert_eq!(OperatorBasis::gell_mann(21).unwrap().len(), 440);
    }

    #[test]
    fn elements_are_traceless_hermitian() {
        for d in [2, 3, 4, 21] {
            let b = OperatorBasis::gell_mann(d).unwrap();
            for xi in b.elements() {
                assert!(xi.trace().norm() <= 1e-12);
                assert!(hermiticity_error(xi) <= 1e-12);
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity() {
        for d in 2..=6 {
            let b = OperatorBasis::gell_mann(d).unwrap();
            for (a, xa) in b.elements().iter().enumerate() {
                for (bb, xb) in b.elements().iter().enumerate() {
                    let g = trace_product(xa, xb);
                    let want = if a == bb { 1.0 } else { 0.0 };
                    assert!((g.re - want).abs() <= 1e-12 && g.im.abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn gram_matrix_is_identity_via_fast_coords() {
        // Tr(Xi_a Xi_b) = coords_of(Xi_b)[a], so orthonormality at d = 21
        // reduces to checking unit coordinate vectors.
        let b = OperatorBasis::gell_mann(21).unwrap();
        for (idx, xi) in b.elements().iter().enumerate() {
            let r = b.coords_of(xi).unwrap();
            for a in 0..b.len() {
                let want = if a == idx { 1.0 } else { 0.0 };
                assert!((r[a] - want).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn fast_coords_match_dense_contraction() {
        let mut rng = SeededRng::new(11, 0);
        for d in [2, 3, 5, 8] {
            let b = OperatorBasis::gell_mann(d).unwrap();
            let rho = random_density(d, &mut rng);
            let fast = b.coords_of(&rho).unwrap();
            let (dense, residue) = coords_by_trace(&b, &rho);
            assert!(residue <= 1e-12);
            assert!((fast - dense).amax() <= 1e-12);
        }
    }

    #[test]
    fn combine_matches_dense_sum() {
        let d = 4;
        let b = OperatorBasis::gell_mann(d).unwrap();
        let r = BlochVector::from_fn(b.len(), |i, _| ((i * 31 % 17) as f64 - 8.0) / 20.0);
        let fast = b.combine(&r).unwrap();
        let mut dense = Operator::zeros(d, d);
        for (a, xi) in b.elements().iter().enumerate() {
            dense += xi.map(|z| z * r[a]);
        }
        assert!(max_abs_diff(&fast, &dense) < 1e-13);
    }

    #[test]
    fn maximally_mixed_has_zero_bloch_vector() {
        let d = 5;
        let b = OperatorBasis::gell_mann(d).unwrap();
        let rho = Operator::identity(d, d).map(|z| z / d as f64);
        let r = bloch_from_density(&rho, &b).unwrap();
        assert!(r.amax() <= 1e-14);
    }

    #[test]
    fn qubit_ground_state_coordinates() {
        let b = OperatorBasis::gell_mann(2).unwrap();
        let mut rho = Operator::zeros(2, 2);
        rho[(0, 0)] = cr(1.0);
        let r = bloch_from_density(&rho, &b).unwrap();
        assert_relative_eq!(r[0], 0.0, epsilon = 1e-14);
        assert_relative_eq!(r[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(r[2], 1.0 / SQRT2, epsilon = 1e-14);
        let back = density_from_bloch(&r, &b).unwrap();
        assert!(max_abs_diff(&back, &rho) < 1e-14);
    }

    #[test]
    fn zero_vector_gives_maximally_mixed() {
        let b = OperatorBasis::gell_mann(3).unwrap();
        let rho = density_from_bloch(&BlochVector::zeros(8), &b).unwrap();
        assert!(max_abs_diff(&rho, &Operator::identity(3, 3).map(|z| z / 3.0)) < 1e-15);
    }

    #[test]
    fn purity_identity_holds() {
        let mut rng = SeededRng::new(13, 0);
        for d in [2, 3, 6] {
            let b = OperatorBasis::gell_mann(d).unwrap();
            for _ in 0..10 {
                let rho = random_density(d, &mut rng);
                let r = bloch_from_density(&rho, &b).unwrap();
                let purity = (&rho * &rho).trace().re;
                assert_relative_eq!(purity, 1.0 / d as f64 + r.norm_squared(), epsilon = 1e-12);
                assert!(r.norm_squared() <= 1.0 - 1.0 / d as f64 + 1e-12);
            }
        }
    }

    #[test]
    fn roundtrip_on_random_states() {
        let mut rng = SeededRng::new(14, 0);
        let d = 6;
        let b = OperatorBasis::gell_mann(d).unwrap();
        for _ in 0..50 {
            let rho = random_density(d, &mut rng);
            let r = bloch_from_density(&rho, &b).unwrap();
            let back = density_from_bloch(&r, &b).unwrap();
            assert!(max_abs_diff(&back, &rho) <= 1e-12);
        }
    }

    #[test]
    fn rejects_non_unit_trace() {
        let b = OperatorBasis::gell_mann(2).unwrap();
        let rho = Operator::identity(2, 2);
        assert!(bloch_from_density(&rho, &b).is_err());
    }

    #[test]
    fn rejects_length_mismatch() {
        let b = OperatorBasis::gell_mann(2).unwrap();
        assert!(density_from_bloch(&BlochVector::zeros(5), &b).is_err());
    }
}
