//! Named single-qubit vectors and operators.
//!
//! Spin: computational basis `|↑⟩ = (1, 0)`, `|↓⟩ = (0, 1)`; `|⊙⟩, |⊗⟩` are
//! the x-axis states and `|→⟩, |←⟩` the y-axis states.
//!
//! Atom: computational basis `|±⟩ = (1, 0)` (excited) and `|∓⟩ = (0, 1)`
//! (ground); `|+⟩, |−⟩` and `|⊤⟩, |⊥⟩` are the two conjugate bases. The same
//! vectors describe environment atoms.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;

use crate::error::Result;
use crate::qcore::{PureState, C64};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);
const H: C64 = C64::new(FRAC_1_SQRT_2, 0.0);
const IH: C64 = C64::new(0.0, FRAC_1_SQRT_2);

pub const UP: [C64; 2] = [ONE, ZERO];
pub const DOWN: [C64; 2] = [ZERO, ONE];
/// `(|↑⟩ + |↓⟩)/√2`
pub const ODOT: [C64; 2] = [H, H];
/// `(|↑⟩ − |↓⟩)/√2`
pub const OTIMES: [C64; 2] = [H, C64::new(-FRAC_1_SQRT_2, 0.0)];
/// `(|↑⟩ + i|↓⟩)/√2`
pub const RIGHT: [C64; 2] = [H, IH];
/// `(|↑⟩ − i|↓⟩)/√2`
pub const LEFT: [C64; 2] = [H, C64::new(0.0, -FRAC_1_SQRT_2)];

/// `|±⟩`
pub const EXCITED: [C64; 2] = [ONE, ZERO];
/// `|∓⟩`
pub const GROUND: [C64; 2] = [ZERO, ONE];
/// `(|±⟩ + |∓⟩)/√2`
pub const PLUS: [C64; 2] = [H, H];
/// `(|±⟩ − |∓⟩)/√2`
pub const MINUS: [C64; 2] = [H, C64::new(-FRAC_1_SQRT_2, 0.0)];
/// `(|±⟩ + i|∓⟩)/√2`
pub const TOP: [C64; 2] = [H, IH];
/// `(|±⟩ − i|∓⟩)/√2`
pub const BOT: [C64; 2] = [H, C64::new(0.0, -FRAC_1_SQRT_2)];

pub fn qubit(label: &str, amplitudes: [C64; 2]) -> Result<PureState> {
    PureState::qubit(label, amplitudes)
}

/// `|u⟩⟨v|` as a 2×2 matrix.
pub fn outer(u: [C64; 2], v: [C64; 2]) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |i, j| u[i] * v[j].conj())
}

/// `|u⟩⟨u| − |v⟩⟨v|`
pub fn projector_difference(u: [C64; 2], v: [C64; 2]) -> DMatrix<C64> {
    outer(u, u) - outer(v, v)
}

/// `|↑⟩⟨↑| − |↓⟩⟨↓|`, equally `|±⟩⟨±| − |∓⟩⟨∓|` for an atom.
pub fn sigma_z() -> DMatrix<C64> {
    projector_difference(UP, DOWN)
}

/// Exchange `|0⟩ ↔ |1⟩` of the computational basis.
pub fn sigma_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

/// Hadamard map taking the computational basis to the `(|0⟩ ± |1⟩)/√2` basis;
/// it is its own inverse.
pub fn hadamard() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[H, H, H, -H])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(u: [C64; 2], v: [C64; 2]) -> C64 {
        u[0].conj() * v[0] + u[1].conj() * v[1]
    }

    #[test]
    fn conjugate_bases_are_orthonormal() {
        for (a, b) in [(ODOT, OTIMES), (RIGHT, LEFT), (PLUS, MINUS), (TOP, BOT)] {
            assert!((dot(a, a) - ONE).norm() < 1e-15);
            assert!((dot(b, b) - ONE).norm() < 1e-15);
            assert!(dot(a, b).norm() < 1e-15);
        }
    }

    #[test]
    fn bot_minus_top_is_i_times_exchange() {
        // |⊥⟩⟨⊥| − |⊤⟩⟨⊤| = i(|±⟩⟨∓| − |∓⟩⟨±|)
        let lhs = projector_difference(BOT, TOP);
        let rhs = (outer(EXCITED, GROUND) - outer(GROUND, EXCITED)) * C64::new(0.0, 1.0);
        assert!((lhs - rhs).iter().all(|z| z.norm() < 1e-15));
    }
}
