//! One-parameter unitary paths `U_t = exp(i·t·H)` from the identity to a
//! target coupling, and the entanglement they generate along the way.

use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;
use core::fmt;

use crate::bipartite::{entanglement_entropy, BipartiteSpace, PureState};
use crate::classifier::{classify_unitary, operator_schmidt_rank, Verdict};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, unitary_eig, UnitaryEig};
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::random::{random_state_from, RngSeed};

pub const DEFAULT_STEPS: usize = 64;

#[derive(Debug, Clone)]
pub struct UnitaryPath {
    space: BipartiteSpace,
    spectral: UnitaryEig,
    generator: ComplexMatrix,
    endpoint: ComplexMatrix,
}

/// Path along the principal logarithm of `endpoint`.
pub fn geodesic_path(endpoint: &ComplexMatrix, d1: usize, d2: usize, tol: Tolerance) -> Result<UnitaryPath> {
    let space = BipartiteSpace::new(d1, d2)?;
    space.check_operator(endpoint)?;
    let spectral = unitary_eig(endpoint, tol)?;
    let g = spectral.generator();
    Ok(UnitaryPath {
        space,
        spectral,
        generator: (&g + &g.adjoint()).scale_real(0.5),
        endpoint: endpoint.clone(),
    })
}

impl UnitaryPath {
    /// Path `exp(i·t·H)` for a Hermitian generator; the endpoint is `exp(iH)`.
    pub fn from_generator(h: &ComplexMatrix, d1: usize, d2: usize, tol: Tolerance) -> Result<Self> {
        let space = BipartiteSpace::new(d1, d2)?;
        space.check_operator(h)?;
        let eig = hermitian_eig(h, tol)?;
        let spectral = UnitaryEig {
            phases: eig.values,
            vectors: eig.vectors,
        };
        let endpoint = spectral.exp_scaled(1.0);
        Ok(Self {
            space,
            spectral,
            generator: h.clone(),
            endpoint,
        })
    }

    pub fn space(&self) -> BipartiteSpace {
        self.space
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn endpoint(&self) -> &ComplexMatrix {
        &self.endpoint
    }

    /// `exp(i·t·H)`; exactly the identity at `t = 0`.
    pub fn point(&self, t: f64) -> Result<ComplexMatrix> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::TimeOutOfRange(t));
        }
        if t == 0.0 {
            return Ok(ComplexMatrix::identity(self.space.dim()));
        }
        Ok(self.spectral.exp_scaled(t))
    }
}

pub fn path_point(p: &UnitaryPath, t: f64) -> Result<ComplexMatrix> {
    p.point(t)
}

/// `t_k = k / n_steps` for `k = 0..=n_steps`.
pub fn time_grid(n_steps: usize) -> Vec<f64> {
    (0..=n_steps).map(|k| k as f64 / n_steps as f64).collect()
}

/// Object-side label of a profile input; the probe is always `probe_init`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileInput {
    /// `e_i`
    Basis(usize),
    /// `(e_i + e_j)/√2`
    Superposition(usize, usize),
    /// The n-th seeded random state.
    Random(usize),
}

impl fmt::Display for ProfileInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Self::Basis(i) => write!(f, "basis:{i}"),
            Self::Superposition(i, j) => write!(f, "sup:{i}+{j}"),
            Self::Random(n) => write!(f, "random:{n}"),
        }
    }
}

/// The input family `{e_i} ∪ {(e_i+e_j)/√2} ∪ {n random}` on the object.
pub fn profile_inputs(d1: usize, seed: RngSeed, n_random: usize) -> Vec<(ProfileInput, ComplexMatrix)> {
    let mut out: Vec<(ProfileInput, ComplexMatrix)> = (0..d1)
        .map(|i| (ProfileInput::Basis(i), ComplexMatrix::basis(d1, i)))
        .collect();
    for i in 0..d1 {
        for j in i + 1..d1 {
            let mut v = ComplexMatrix::basis(d1, i);
            v[(j, 0)] = C64::new(1.0, 0.0);
            out.push((ProfileInput::Superposition(i, j), v.scale_real(FRAC_1_SQRT_2)));
        }
    }
    let mut rng = seed.derive("profile", 0).rng();
    out.extend((0..n_random).map(|n| (ProfileInput::Random(n), random_state_from(d1, &mut rng))));
    out
}

#[derive(Debug, Clone)]
pub struct ProfilePoint {
    pub t: f64,
    /// Largest image entropy over the input family, in bits.
    pub max_entropy: f64,
    pub input: ProfileInput,
    /// The maximizing object state.
    pub object_state: ComplexMatrix,
    pub op_schmidt_rank: usize,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct EntanglementProfile {
    pub space: BipartiteSpace,
    pub probe_init: ComplexMatrix,
    pub points: Vec<ProfilePoint>,
}

impl EntanglementProfile {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn entropies(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.max_entropy).collect()
    }

    /// First grid point (in grid order) with the largest entropy.
    pub fn argmax(&self) -> &ProfilePoint {
        let mut best = &self.points[0];
        for p in &self.points[1..] {
            if p.max_entropy > best.max_entropy {
                best = p;
            }
        }
        best
    }

    /// Some interior grid point is classified entangling.
    pub fn obstruction_witnessed(&self) -> bool {
        self.points
            .iter()
            .any(|p| p.t > 0.0 && p.t < 1.0 && p.verdict == Verdict::Entangling)
    }

    /// Largest jump between successive grid entropies.
    pub fn max_step_change(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| (w[1].max_entropy - w[0].max_entropy).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluates the path on the uniform grid against the input family
/// `{φ ⊗ probe_init}`; verdicts come from `classify_unitary` with `seed`.
pub fn entanglement_profile(
    p: &UnitaryPath,
    probe_init: &ComplexMatrix,
    n_steps: usize,
    seed: RngSeed,
    n_inputs: usize,
    tol: Tolerance,
) -> Result<EntanglementProfile> {
    if n_steps < 2 {
        return Err(Error::InvalidArgument("n_steps must be at least 2"));
    }
    let space = p.space;
    let (d1, d2) = (space.d1(), space.d2());
    space.check_vector(probe_init, d2)?;
    let norm = probe_init.norm();
    if (norm - 1.0).abs() > tol.eps {
        return Err(Error::NotNormalized { norm });
    }
    let inputs: Vec<(ProfileInput, ComplexMatrix, PureState)> = profile_inputs(d1, seed, n_inputs)
        .into_iter()
        .map(|(id, phi)| {
            let psi = PureState::product(&phi, probe_init, tol)?;
            Ok((id, phi, psi))
        })
        .collect::<Result<_>>()?;
    let ceiling = libm::log2(d1.min(d2) as f64);

    let mut points = Vec::with_capacity(n_steps + 1);
    for t in time_grid(n_steps) {
        let u = p.point(t)?;
        let mut best = (-1.0, 0usize);
        for (k, (_, _, psi)) in inputs.iter().enumerate() {
            let s = entanglement_entropy(&psi.evolve(&u)?);
            if s > best.0 {
                best = (s, k);
            }
        }
        let entropy = best.0.clamp(0.0, ceiling);
        let verdict = classify_unitary(&u, d1, d2, tol, seed)?.verdict();
        let (id, phi, _) = &inputs[best.1];
        points.push(ProfilePoint {
            t,
            max_entropy: entropy,
            input: *id,
            object_state: phi.clone(),
            op_schmidt_rank: operator_schmidt_rank(&u, d1, d2, tol)?,
            verdict,
        });
    }
    Ok(EntanglementProfile {
        space,
        probe_init: probe_init.clone(),
        points,
    })
}

/// `(t*, input*, entropy*)` at the first grid maximum.
pub fn max_path_entanglement(
    p: &UnitaryPath,
    probe_init: &ComplexMatrix,
    n_steps: usize,
    seed: RngSeed,
    n_inputs: usize,
    tol: Tolerance,
) -> Result<(f64, ProfileInput, f64)> {
    let profile = entanglement_profile(p, probe_init, n_steps, seed, n_inputs, tol)?;
    let best = profile.argmax();
    Ok((best.t, best.input, best.max_entropy))
}
