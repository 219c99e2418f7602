//! Seeded sampling of states, Haar unitaries and Hermitian matrices.
//!
//! Every sampler owns a fresh ChaCha8 stream built from its seed, so equal
//! seeds give bit-identical output on one build.

use nalgebra::QR;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(seed: u64) -> Self {
        Self(seed)
    }
}

impl RngSeed {
    /// Seed used when the caller does not supply one.
    pub const DEFAULT: RngSeed = RngSeed(0xB05C);

    /// Child seed for the `index`-th item of the stream named `label`.
    pub fn derive(self, label: &str, index: u64) -> RngSeed {
        let mut h = 0xcbf2_9ce4_8422_2325_u64;
        for b in label.bytes() {
            h = (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3);
        }
        RngSeed(splitmix64(
            splitmix64(self.0 ^ h).wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)),
        ))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: real and imaginary parts `N(0, 1/2)`.
fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * core::f64::consts::FRAC_1_SQRT_2
}

/// `rows × cols` matrix of i.i.d. standard complex Gaussians.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed `d × d` unitary: QR of a Ginibre matrix with the
/// phases of `diag(R)` folded back into `Q`.
pub fn haar_unitary(d: usize, seed: RngSeed) -> ComplexMatrix {
    haar_unitary_from(d, &mut seed.rng())
}

pub fn haar_unitary_from<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    let z = ginibre(d, d, rng);
    let (q, r) = QR::new(z.to_nalgebra()).unpack();
    ComplexMatrix::from_fn(d, d, |i, j| {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        q[(i, j)] * phase
    })
}

/// Uniformly random unit vector in `C^d`.
pub fn random_state(d: usize, seed: RngSeed) -> ComplexMatrix {
    random_state_from(d, &mut seed.rng())
}

pub fn random_state_from<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    assert!(d >= 1, "dimension must be positive");
    loop {
        let v = ginibre(d, 1, rng);
        let n = v.norm();
        if n > 1e-300 {
            return v.scale_real(1.0 / n);
        }
    }
}

/// Random Hermitian `A + A†` with `A` Ginibre.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> ComplexMatrix {
    let a = ginibre(d, d, rng);
    &a + &a.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unitarity_defect;

    #[test]
    fn one_dimensional_samples_are_phases() {
        for s in 0..5 {
            let u = haar_unitary(1, RngSeed(s));
            assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-14);
            let v = random_state(1, RngSeed(s));
            assert!((v[(0, 0)].norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn haar_is_unitary_and_deterministic() {
        let u = haar_unitary(3, RngSeed(42));
        assert!(unitarity_defect(&u).unwrap() < 1e-12);
        assert_eq!(u, haar_unitary(3, RngSeed(42)));
        assert_ne!(u, haar_unitary(3, RngSeed(43)));
    }

    #[test]
    fn random_state_is_normalized_and_deterministic() {
        let v = random_state(4, RngSeed(5));
        assert!((v.norm() - 1.0).abs() < 1e-12);
        assert_eq!(v, random_state(4, RngSeed(5)));
    }

    #[test]
    fn derived_seeds_differ_by_label_and_index() {
        let s = RngSeed(1);
        assert_ne!(s.derive("a", 0), s.derive("b", 0));
        assert_ne!(s.derive("a", 0), s.derive("a", 1));
        assert_eq!(s.derive("a", 3), s.derive("a", 3));
    }

    #[test]
    fn haar_first_moment_vanishes() {
        // E[U_00] = 0 and E[|U_00|^2] = 1/d for Haar unitaries.
        let d = 3;
        let n = 4000;
        let mut mean = C64::new(0.0, 0.0);
        let mut second = 0.0;
        for k in 0..n {
            let u = haar_unitary(d, RngSeed(1000 + k));
            mean += u[(0, 0)];
            second += u[(0, 0)].norm_sqr();
        }
        mean /= n as f64;
        second /= n as f64;
        assert!(mean.norm() < 0.03, "mean {mean}");
        assert!((second - 1.0 / d as f64).abs() < 0.02, "second moment {second}");
    }
}
