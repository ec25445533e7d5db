use nalgebra::{DMatrix, DVector};

use super::register::{IndexSplit, Register, Subsystem};
use super::{DensityMatrix, C64, STRUCTURAL_TOL};
use crate::error::{Error, Result};

/// Normalized state vector over a register.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: Register,
    amplitudes: DVector<C64>,
}

impl PureState {
    /// Builds a state, requiring the amplitudes to be normalized to 1e-12.
    pub fn new(register: Register, amplitudes: Vec<C64>) -> Result<Self> {
        let amplitudes = DVector::from_vec(amplitudes);
        check_len(&register, amplitudes.len())?;
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "state on {register} has norm {norm}, expected 1"
            )));
        }
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Builds a state by normalizing `amplitudes`.
    pub fn normalized(register: Register, amplitudes: Vec<C64>) -> Result<Self> {
        let mut amplitudes = DVector::from_vec(amplitudes);
        check_len(&register, amplitudes.len())?;
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::validation("cannot normalize a zero or non-finite vector"));
        }
        amplitudes.unscale_mut(norm);
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(register: Register, index: usize) -> Result<Self> {
        let dim = register.dim();
        if index >= dim {
            return Err(Error::domain(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut amplitudes = DVector::zeros(dim);
        amplitudes[index] = C64::new(1.0, 0.0);
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Single two-level system with amplitudes `(c0, c1)`.
    pub fn qubit(label: &str, amplitudes: [C64; 2]) -> Result<Self> {
        let register = Register::new(vec![Subsystem::qubit(label)?])?;
        Self::new(register, amplitudes.to_vec())
    }

    /// Skips the norm check; used for results of unitary maps whose norm is
    /// preserved up to rounding.
    pub(crate) fn from_parts(register: Register, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(register.dim(), amplitudes.len());
        PureState {
            register,
            amplitudes,
        }
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        if self.register != other.register {
            return Err(Error::domain(format!(
                "inner product across registers {} and {}",
                self.register, other.register
            )));
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Kronecker product `self ⊗ other`; the register is the concatenation.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let register = self.register.concat(&other.register)?;
        let amplitudes = self.amplitudes.kronecker(&other.amplitudes);
        Ok(PureState {
            register,
            amplitudes,
        })
    }

    /// Projector `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DensityMatrix {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::from_parts(self.register.clone(), m)
    }

    /// Applies `op` to the subsystems named in `labels`. The operator's basis
    /// runs over those subsystems in the order given (big-endian).
    pub fn apply_local<S: AsRef<str>>(&self, labels: &[S], op: &DMatrix<C64>) -> Result<PureState> {
        let positions = self.register.positions(labels)?;
        let split = IndexSplit::new(&self.register, &positions);
        if op.nrows() != split.kept_dim || op.ncols() != split.kept_dim {
            return Err(Error::domain(format!(
                "local operator is {}x{}, expected {}x{}",
                op.nrows(),
                op.ncols(),
                split.kept_dim,
                split.kept_dim
            )));
        }
        let full = split.inverse();
        let mut out = DVector::zeros(self.dim());
        let mut local = DVector::zeros(split.kept_dim);
        for r in 0..split.rest_dim {
            for k in 0..split.kept_dim {
                local[k] = self.amplitudes[full[k * split.rest_dim + r]];
            }
            let mapped = op * &local;
            for k in 0..split.kept_dim {
                out[full[k * split.rest_dim + r]] = mapped[k];
            }
        }
        Ok(PureState {
            register: self.register.clone(),
            amplitudes: out,
        })
    }

    /// Reorders the amplitudes onto `target`, a register with the same labels
    /// in a different order.
    pub fn permuted(&self, target: &Register) -> Result<PureState> {
        if !self.register.same_labels(target) {
            return Err(Error::domain(format!(
                "cannot permute {} onto {target}",
                self.register
            )));
        }
        let order: Vec<&str> = target.labels().collect();
        let positions = self.register.positions(&order)?;
        let split = IndexSplit::new(&self.register, &positions);
        let mut out = DVector::zeros(self.dim());
        for (i, &(k, _)) in split.map.iter().enumerate() {
            out[k] = self.amplitudes[i];
        }
        Ok(PureState {
            register: target.clone(),
            amplitudes: out,
        })
    }

    /// Copy with the global phase fixed so that the largest-magnitude
    /// amplitude (first one on ties) is real and positive.
    pub fn phase_gauged(&self) -> PureState {
        let mut best = 0;
        let mut best_abs = -1.0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            // ties within rounding go to the lower index
            if a.norm() > best_abs + 1e-14 {
                best = i;
                best_abs = a.norm();
            }
        }
        let pivot = self.amplitudes[best];
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        PureState {
            register: self.register.clone(),
            amplitudes: self.amplitudes.map(|a| a * phase),
        }
    }

    /// Max elementwise amplitude difference.
    pub fn max_abs_diff(&self, other: &PureState) -> Result<f64> {
        if self.register != other.register {
            return Err(Error::domain(format!(
                "comparing states on {} and {}",
                self.register, other.register
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max elementwise difference after removing the global phase of both
    /// states. Uses the phase that best aligns `other` with `self`, so ties in
    /// the largest amplitude cannot pick different pivots.
    pub fn max_abs_diff_up_to_phase(&self, other: &PureState) -> Result<f64> {
        let overlap = other.inner(self)?;
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        let aligned = PureState {
            register: other.register.clone(),
            amplitudes: other.amplitudes.map(|a| a * phase),
        };
        self.max_abs_diff(&aligned)
    }
}

/// Kronecker product of several states in argument order.
pub fn tensor(states: &[PureState]) -> Result<PureState> {
    let (first, rest) = states
        .split_first()
        .ok_or_else(|| Error::domain("tensor of an empty list"))?;
    rest.iter().try_fold(first.clone(), |acc, s| acc.tensor(s))
}

fn check_len(register: &Register, len: usize) -> Result<()> {
    if register.dim() != len {
        return Err(Error::validation(format!(
            "register {register} has dimension {}, got {len} amplitudes",
            register.dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn tensor_of_up_and_plus() {
        let up = PureState::qubit("spin", [c(1.0), c(0.0)]).unwrap();
        let plus = PureState::qubit("atom", [c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)]).unwrap();
        let s = tensor(&[up, plus]).unwrap();
        let expected = [FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0, 0.0];
        for (a, e) in s.amplitudes().iter().zip(expected) {
            assert!((a - c(e)).norm() < 1e-15);
        }
        assert_eq!(s.register().labels().collect::<Vec<_>>(), ["spin", "atom"]);
    }

    #[test]
    fn single_tensor_is_identity() {
        let s = PureState::qubit("x", [c(0.6), C64::new(0.0, 0.8)]).unwrap();
        assert_eq!(tensor(std::slice::from_ref(&s)).unwrap(), s);
    }

    #[test]
    fn tensor_label_collision() {
        let s = PureState::qubit("x", [c(1.0), c(0.0)]).unwrap();
        assert!(matches!(tensor(&[s.clone(), s]), Err(Error::LabelCollision(_))));
    }

    #[test]
    fn norm_is_checked() {
        let r = Register::qubits(&["a"]).unwrap();
        assert!(PureState::new(r.clone(), vec![c(1.0), c(1.0)]).is_err());
        assert!(PureState::normalized(r.clone(), vec![c(0.0), c(0.0)]).is_err());
        let s = PureState::normalized(r, vec![c(1.0), c(1.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn apply_local_respects_label_order() {
        // CNOT with control "b", target "a" on register (a, b)
        let r = Register::qubits(&["a", "b"]).unwrap();
        let s = PureState::basis(r, 0b01).unwrap(); // a=0, b=1
        let mut cnot = DMatrix::zeros(4, 4);
        for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            cnot[(i, j)] = c(1.0);
        }
        let out = s.apply_local(&["b", "a"], &cnot).unwrap();
        assert!((out.amplitude(0b11) - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn permutation_roundtrip() {
        let r = Register::qubits(&["a", "b", "c"]).unwrap();
        let s = PureState::normalized(r.clone(), (0..8).map(|i| C64::new(i as f64, 1.0)).collect())
            .unwrap();
        let target = Register::qubits(&["c", "a", "b"]).unwrap();
        let p = s.permuted(&target).unwrap();
        // |a b c⟩ = |0 1 1⟩ (index 3) sits at |c a b⟩ = |1 0 1⟩ (index 5)
        assert_eq!(p.amplitude(5), s.amplitude(3));
        assert_eq!(p.permuted(&r).unwrap(), s);
    }

    #[test]
    fn gauge_removes_global_phase() {
        let r = Register::qubits(&["a"]).unwrap();
        let s = PureState::normalized(r.clone(), vec![c(0.3), c(-0.9)]).unwrap();
        let phase = C64::from_polar(1.0, 1.234);
        let t = PureState::from_parts(r, s.amplitudes().map(|a| a * phase));
        assert!(s.phase_gauged().max_abs_diff(&t.phase_gauged()).unwrap() < 1e-15);
        assert!(s.max_abs_diff_up_to_phase(&t).unwrap() < 1e-15);
        assert!(s.phase_gauged().amplitude(1).re > 0.0);
    }
}
