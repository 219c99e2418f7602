//! Named operators used throughout the crate and as CLI fixtures.

use core::f64::consts::FRAC_1_SQRT_2;

use crate::matrix::{ComplexMatrix, C64, ONE, ZERO};

pub fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]])
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]])
}

pub fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]])
}

pub fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[FRAC_1_SQRT_2, FRAC_1_SQRT_2], [FRAC_1_SQRT_2, -FRAC_1_SQRT_2]])
}

/// The flip `e_i ⊗ f_j ↦ e_j ⊗ f_i` on `C^d ⊗ C^d`.
pub fn swap(d: usize) -> ComplexMatrix {
    let n = d * d;
    ComplexMatrix::from_fn(n, n, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            ONE
        } else {
            ZERO
        }
    })
}

/// Controlled-NOT with the control on the first factor.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
    ])
}

/// Controlled-NOT with the control on the second factor.
pub fn cnot_reversed() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
}

/// `Σ_k |k⟩⟨k| ⊗ diag(e^{i·k·l·angle})` on `C^d1 ⊗ C^d2`: a generalized
/// controlled phase. Entangling unless `angle` is a multiple of `2π`.
pub fn controlled_phase(d1: usize, d2: usize, angle: f64) -> ComplexMatrix {
    let n = d1 * d2;
    ComplexMatrix::from_fn(n, n, |r, c| {
        if r == c {
            let (k, l) = (r / d2, r % d2);
            C64::from_polar(1.0, angle * (k * l) as f64)
        } else {
            ZERO
        }
    })
}

/// Generalized controlled shift `|k⟩⟨k| ⊗ X^k` with `X` the cyclic shift.
pub fn controlled_shift(d1: usize, d2: usize) -> ComplexMatrix {
    let n = d1 * d2;
    ComplexMatrix::from_fn(n, n, |r, c| {
        let (k, l) = (c / d2, c % d2);
        if r == k * d2 + (l + k) % d2 {
            ONE
        } else {
            ZERO
        }
    })
}
