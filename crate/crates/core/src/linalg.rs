//! Spectral routines: Hermitian and unitary eigendecompositions, the
//! principal unitary logarithm, exponentials of Hermitian generators and
//! sorted singular value decompositions.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use nalgebra::{Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, Tolerance, C64};

/// True iff both `‖U†U − I‖_F` and `‖UU† − I‖_F` are within `tol`.
pub fn is_unitary(u: &ComplexMatrix, tol: Tolerance) -> Result<bool> {
    Ok(unitarity_defect(u)? <= tol.eps)
}

/// `max(‖U†U − I‖_F, ‖UU† − I‖_F)`.
pub fn unitarity_defect(u: &ComplexMatrix) -> Result<f64> {
    if !u.is_square() {
        return Err(Error::NotSquare {
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let id = ComplexMatrix::identity(u.rows());
    let ud = u.adjoint();
    Ok((&ud * u).distance(&id).max((u * &ud).distance(&id)))
}

/// `‖V†V − I‖_F` for a (possibly rectangular) isometry candidate.
pub fn isometry_defect(v: &ComplexMatrix) -> f64 {
    (&v.adjoint() * v).distance(&ComplexMatrix::identity(v.cols()))
}

pub(crate) fn require_unitary(u: &ComplexMatrix, tol: Tolerance) -> Result<()> {
    let deviation = unitarity_defect(u)?;
    if deviation <= tol.eps {
        Ok(())
    } else {
        Err(Error::NotUnitary { deviation })
    }
}

/// Multiplies `v` by the unit phase that makes its first entry with
/// modulus above `eps` real and positive. Returns the phase applied.
pub fn normalize_phase(v: &mut ComplexMatrix, eps: f64) -> C64 {
    let lead = v.as_slice().iter().copied().find(|z| z.norm() > eps);
    match lead {
        Some(z) => {
            let phase = z.conj() / z.norm();
            *v = v.scale(phase);
            phase
        }
        None => C64::new(1.0, 0.0),
    }
}

fn lex_cmp(a: &ComplexMatrix, b: &ComplexMatrix) -> Ordering {
    for (x, y) in a.as_slice().iter().zip(b.as_slice()) {
        let ord = x
            .re
            .total_cmp(&y.re)
            .then_with(|| x.im.total_cmp(&y.im));
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Eigendecomposition `H = V·diag(λ)·V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| C64::new(x, 0.0)).collect();
        &(&self.vectors * &ComplexMatrix::diagonal(&d)) * &self.vectors.adjoint()
    }

    /// `V·diag(f(λ))·V†`.
    pub fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let d: Vec<C64> = self.values.iter().map(|&x| f(x)).collect();
        let scaled = ComplexMatrix::from_fn(self.vectors.rows(), self.vectors.cols(), |i, j| {
            self.vectors[(i, j)] * d[j]
        });
        &scaled * &self.vectors.adjoint()
    }
}

/// Hermitian eigendecomposition with descending eigenvalues.
///
/// Each eigenvector's first component of modulus above `tol.eps` is made
/// real positive; eigenvalues equal within `tol.eps` are ordered by
/// lexicographic comparison of their (phase-fixed) vectors.
pub fn hermitian_eig(h: &ComplexMatrix, tol: Tolerance) -> Result<HermitianEig> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermiticity_defect();
    if deviation > tol.eps {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(eigh(h, tol.eps))
}

/// Eigendecomposition of the Hermitian part of `h`, without validation.
pub(crate) fn eigh(h: &ComplexMatrix, eps: f64) -> HermitianEig {
    let sym = (h + &h.adjoint()).scale_real(0.5);
    let eig = SymmetricEigen::new(sym.to_nalgebra());
    let n = h.rows();
    let mut pairs: Vec<(f64, ComplexMatrix)> = (0..n)
        .map(|k| {
            let mut v = ComplexMatrix::from_fn(n, 1, |i, _| eig.eigenvectors[(i, k)]);
            normalize_phase(&mut v, eps);
            (eig.eigenvalues[k], v)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    // Stable tie-breaking inside clusters of equal eigenvalues.
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (pairs[end - 1].0 - pairs[end].0).abs() <= eps {
            end += 1;
        }
        pairs[start..end].sort_by(|a, b| lex_cmp(&a.1, &b.1));
        start = end;
    }
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (k, (_, v)) in pairs.iter().enumerate() {
        vectors.set_col(k, v);
    }
    HermitianEig {
        values: pairs.into_iter().map(|(x, _)| x).collect(),
        vectors,
    }
}

/// Orthonormalizes the columns of `m` in index order (modified Gram–Schmidt).
pub fn gram_schmidt(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = m.clone();
    for j in 0..m.cols() {
        let mut v = out.col(j);
        for k in 0..j {
            let q = out.col(k);
            let c = q.inner(&v);
            v = &v - &q.scale(c);
        }
        let n = v.norm();
        if n > 0.0 {
            v = v.scale_real(1.0 / n);
        }
        out.set_col(j, &v);
    }
    out
}

/// Spectral data of a unitary: `U = Q·diag(e^{iθ})·Q†` with each
/// eigenphase `θ ∈ (−π, π]`.
#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub phases: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl UnitaryEig {
    /// The Hermitian generator `Q·diag(θ)·Q†`.
    pub fn generator(&self) -> ComplexMatrix {
        self.apply(|theta| C64::new(theta, 0.0))
    }

    /// `exp(i·t·H)` for the generator `H`.
    pub fn exp_scaled(&self, t: f64) -> ComplexMatrix {
        self.apply(|theta| C64::from_polar(1.0, t * theta))
    }

    fn apply(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let d: Vec<C64> = self.phases.iter().map(|&x| f(x)).collect();
        let scaled = ComplexMatrix::from_fn(self.vectors.rows(), self.vectors.cols(), |i, j| {
            self.vectors[(i, j)] * d[j]
        });
        &scaled * &self.vectors.adjoint()
    }
}

/// Eigendecomposition of a unitary via complex Schur form.
///
/// Phases within `tol.eps` of each other are merged to their mean and the
/// corresponding eigenvectors are re-orthonormalized in index order, so the
/// result is reproducible for degenerate spectra. The eigenvalue `−1` maps
/// to `+π`.
pub fn unitary_eig(u: &ComplexMatrix, tol: Tolerance) -> Result<UnitaryEig> {
    require_unitary(u, tol)?;
    let n = u.rows();
    let (q, t) = Schur::new(u.to_nalgebra()).unpack();
    let q = ComplexMatrix::from_nalgebra(&q);
    let mut phases: Vec<f64> = (0..n)
        .map(|k| {
            let z = t[(k, k)];
            let theta = libm::atan2(z.im, z.re);
            if theta <= -PI + tol.eps {
                PI
            } else {
                theta
            }
        })
        .collect();

    // Cluster eigenphases (ascending) and snap each cluster to its mean.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| phases[a].total_cmp(&phases[b]).then(a.cmp(&b)));
    let mut vectors = q.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && phases[order[end]] - phases[order[end - 1]] <= tol.eps {
            end += 1;
        }
        if end - start > 1 {
            let mut members: Vec<usize> = order[start..end].to_vec();
            members.sort_unstable();
            let mean = members.iter().map(|&k| phases[k]).sum::<f64>() / members.len() as f64;
            let block = ComplexMatrix::from_fn(n, members.len(), |i, j| q[(i, members[j])]);
            let block = gram_schmidt(&block);
            for (j, &k) in members.iter().enumerate() {
                phases[k] = mean;
                vectors.set_col(k, &block.col(j));
            }
        }
        start = end;
    }
    Ok(UnitaryEig { phases, vectors })
}

/// Principal logarithm: Hermitian `H` with `exp(iH) = U`, eigenphases in
/// `(−π, π]`.
pub fn unitary_log(u: &ComplexMatrix, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = unitary_eig(u, tol)?;
    let h = eig.generator();
    Ok((&h + &h.adjoint()).scale_real(0.5))
}

/// `exp(i·t·H)` for Hermitian `H`, computed through its eigendecomposition.
pub fn exp_i_hermitian(h: &ComplexMatrix, t: f64, tol: Tolerance) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h, tol)?;
    Ok(eig.apply(|x| C64::from_polar(1.0, t * x)))
}

/// Singular value decomposition `M = U·diag(σ)·V†` with σ descending.
#[derive(Debug, Clone)]
pub struct Svd {
    /// Left singular vectors as columns (`rows × k`).
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    /// `V†` (`k × cols`).
    pub v_adj: ComplexMatrix,
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    if m.rows() < m.cols() {
        let t = jacobi_svd(&m.adjoint());
        return Svd {
            u: t.v_adj.adjoint(),
            singular_values: t.singular_values,
            v_adj: t.u.adjoint(),
        };
    }
    jacobi_svd(m)
}

const JACOBI_MAX_SWEEPS: usize = 60;

/// One-sided (Hestenes) Jacobi SVD for `rows ≥ cols`. Singular values come
/// out with high relative accuracy, which the relative rank threshold needs.
fn jacobi_svd(m: &ComplexMatrix) -> Svd {
    let (rows, n) = m.shape();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, C64::new(0.0, 0.0));
                for i in 0..rows {
                    let (x, y) = (a[(i, p)], a[(i, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let phase = gamma.conj() / g;
                let tau = (beta - alpha) / (2.0 * g);
                let t = libm::copysign(1.0, tau) / (tau.abs() + libm::sqrt(1.0 + tau * tau));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for mat in [&mut a, &mut v] {
                    for i in 0..mat.rows() {
                        let x = mat[(i, p)];
                        let y = mat[(i, q)] * phase;
                        mat[(i, p)] = x * c - y * s;
                        mat[(i, q)] = x * s + y * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| a.col(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]).then(x.cmp(&y)));
    let top = norms.iter().copied().fold(0.0, f64::max);

    // Left vectors for (numerically) zero singular values are completed
    // against the standard basis.
    let mut u = ComplexMatrix::zeros(rows, n);
    let mut filled = 0;
    for (j, &k) in order.iter().enumerate() {
        if norms[k] > top * f64::EPSILON * rows as f64 && norms[k] > 0.0 {
            u.set_col(j, &a.col(k).scale_real(1.0 / norms[k]));
            filled = j + 1;
        }
    }
    for j in filled..n {
        let mut best = (0.0, ComplexMatrix::zeros(rows, 1));
        for b in 0..rows {
            let mut w = ComplexMatrix::basis(rows, b);
            for k in 0..j {
                let q = u.col(k);
                w = &w - &q.scale(q.inner(&w));
            }
            let norm = w.norm();
            if norm > best.0 {
                best = (norm, w);
            }
        }
        u.set_col(j, &best.1.scale_real(1.0 / best.0));
    }
    Svd {
        u,
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        v_adj: ComplexMatrix::from_fn(n, n, |i, j| v[(j, order[i])].conj()),
    }
}

/// Count of singular values above `rel · σ_max`.
pub fn numerical_rank(singular_values: &[f64], rel: f64) -> usize {
    let top = singular_values.iter().copied().fold(0.0, f64::max);
    if top == 0.0 {
        return 0;
    }
    singular_values.iter().filter(|&&s| s > rel * top).count()
}

/// Operator equality up to a global phase: `‖A‖_F·‖B‖_F − |tr(A†B)|`.
///
/// Zero exactly when `B = c·A` with `c` a positive multiple of a phase.
pub fn phase_equality_gap(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let overlap: C64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum();
    (a.frobenius_norm() * b.frobenius_norm() - overlap.norm()).max(0.0)
}

/// `min_θ ‖B − e^{iθ}A‖_F`, the residual after optimal phase alignment.
pub fn phase_aligned_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let overlap: C64 = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| x.conj() * y)
        .sum();
    let phase = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    a.scale(phase).distance(b)
}
