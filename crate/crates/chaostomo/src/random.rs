//! Seeded sampling of Haar-random pure states and random unitaries from the
//! circular unitary and circular orthogonal ensembles.
//!
//! Randomness is drawn from ChaCha12 substreams addressed by
//! (master seed, stream index), so ensemble members can run in parallel in
//! any order and still reproduce bit-identical results.

use crate::error::{Error, Result};
use crate::linalg::{Operator, StateVector, C64};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

/// Deterministic random stream identified by (master_seed, stream_index).
pub struct SeededRng {
    inner: ChaCha12Rng,
}

impl SeededRng {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha12Rng::seed_from_u64(master_seed);
        inner.set_stream(stream_index);
        SeededRng { inner }
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.inner.sample(StandardNormal)
    }

    /// Standard complex Gaussian entry (unit variance per real component).
    fn complex_normal(&mut self) -> C64 {
        C64::new(self.standard_normal(), self.standard_normal())
    }
}

impl RngCore for SeededRng {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        Err(Error::InvalidParameter(format!(
            "sampling dimension must be >= 2, got {d}"
        )))
    } else {
        Ok(())
    }
}

/// Haar-random pure state: normalized vector of i.i.d. complex Gaussians.
pub fn haar_pure_state(d: usize, rng: &mut SeededRng) -> Result<StateVector> {
    check_dim(d)?;
    let mut psi = StateVector::from_fn(d, |_, _| rng.complex_normal());
    let norm = psi.norm();
    psi /= C64::new(norm, 0.0);
    Ok(psi)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of
/// the R diagonal absorbed into Q.
pub fn cue_unitary(d: usize, rng: &mut SeededRng) -> Result<Operator> {
    check_dim(d)?;
    let g = Operator::from_fn(d, d, |_, _| rng.complex_normal());
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..d {
        let rkk = r[(k, k)];
        let phase = if rkk.norm() > 0.0 {
            rkk / rkk.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            q[(i, k)] *= phase;
        }
    }
    Ok(q)
}

/// Symmetric random unitary W = U^T U with U Haar-distributed (COE).
pub fn coe_unitary(d: usize, rng: &mut SeededRng) -> Result<Operator> {
    let u = cue_unitary(d, rng)?;
    Ok(u.transpose() * u)
}
