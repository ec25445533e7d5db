use nalgebra::DVector;

use super::register::{IndexSplit, Register};
use super::{Partition, PureState, C64, DECISION_TOL};
use crate::error::{Error, Result};

/// Branch weights at or below this are treated as exactly zero.
const NULL_BRANCH: f64 = 1e-14;

/// One term `b_p |A_p⟩ ⊗ |p⟩` of a relative-state expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    /// `b_p ≥ 0`, the norm of the partial inner product `⟨A_p|Φ⟩`.
    pub weight: f64,
    /// Normalized relative state `|p⟩`; `None` when `b_p = 0`, where no
    /// relative state is defined.
    pub relative: Option<PureState>,
}

/// Expansion of a bipartite state in a chosen orthonormal apparatus basis.
/// The relative states need not be mutually orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeStateDecomposition {
    source_register: Register,
    apparatus_basis: Vec<PureState>,
    branches: Vec<Branch>,
}

impl RelativeStateDecomposition {
    pub fn apparatus_basis(&self) -> &[PureState] {
        &self.apparatus_basis
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn weights(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.weight).collect()
    }

    /// `Σ_p b_p |A_p⟩ ⊗ |p⟩`, expressed on the register of the decomposed
    /// state.
    pub fn reconstruct(&self) -> Result<PureState> {
        let mut acc: Option<DVector<C64>> = None;
        let mut register = None;
        for (a, branch) in self.apparatus_basis.iter().zip(&self.branches) {
            let Some(rel) = &branch.relative else { continue };
            let term = a.tensor(rel)?;
            let scaled = term.amplitudes() * C64::new(branch.weight, 0.0);
            register.get_or_insert_with(|| term.register().clone());
            acc = Some(match acc {
                Some(v) => v + scaled,
                None => scaled,
            });
        }
        let (Some(v), Some(reg)) = (acc, register) else {
            return Err(Error::domain("decomposition has no non-null branch"));
        };
        PureState::from_parts(reg, v).permuted(&self.source_register)
    }

    /// Gram matrix entry `⟨p|q⟩` of two non-null relative states.
    pub fn overlap(&self, p: usize, q: usize) -> Option<C64> {
        let a = self.branches.get(p)?.relative.as_ref()?;
        let b = self.branches.get(q)?.relative.as_ref()?;
        a.inner(b).ok()
    }
}

/// Expands `psi` over `apparatus_basis`, an orthonormal basis of the first
/// block of `cut`, returning the weights `b_p` and relative states `|p⟩` of
/// the second block.
pub fn relative_states(
    psi: &PureState,
    cut: &Partition,
    apparatus_basis: &[PureState],
) -> Result<RelativeStateDecomposition> {
    if cut.len() != 2 {
        return Err(Error::domain(format!(
            "relative states need a two-block cut, got {} blocks",
            cut.len()
        )));
    }
    cut.check(psi.register())?;
    let register = psi.register();
    let app_pos = register.positions(&cut.blocks()[0])?;
    let sys_pos = register.positions(&cut.blocks()[1])?;
    let app_reg = Register::new(app_pos.iter().map(|&p| register.subsystems()[p].clone()).collect())?;
    let sys_reg = Register::new(sys_pos.iter().map(|&p| register.subsystems()[p].clone()).collect())?;

    if apparatus_basis.len() != app_reg.dim() {
        return Err(Error::validation(format!(
            "apparatus basis has {} vectors, the apparatus block has dimension {}",
            apparatus_basis.len(),
            app_reg.dim()
        )));
    }
    for (i, a) in apparatus_basis.iter().enumerate() {
        if a.register() != &app_reg {
            return Err(Error::validation(format!(
                "apparatus basis vector {i} lives on {}, expected {app_reg}",
                a.register()
            )));
        }
        for (j, b) in apparatus_basis.iter().enumerate().skip(i) {
            let expected = if i == j { 1.0 } else { 0.0 };
            let overlap = a.inner(b)?;
            if (overlap - C64::new(expected, 0.0)).norm() > DECISION_TOL {
                return Err(Error::validation(format!(
                    "apparatus basis is not orthonormal: ⟨A_{i}|A_{j}⟩ = {overlap}"
                )));
            }
        }
    }

    // Φ as an (apparatus × system) coefficient matrix.
    let split = IndexSplit::new(register, &app_pos);
    let sys_split = IndexSplit::new(register, &sys_pos);
    let mut phi = nalgebra::DMatrix::<C64>::zeros(app_reg.dim(), sys_reg.dim());
    for i in 0..psi.dim() {
        phi[(split.map[i].0, sys_split.map[i].0)] = psi.amplitude(i);
    }

    let branches = apparatus_basis
        .iter()
        .map(|a| {
            // ⟨A_p|Φ⟩ as a system-side vector
            let partial = phi.tr_mul(&a.amplitudes().conjugate());
            let weight = partial.norm();
            let relative = (weight > NULL_BRANCH)
                .then(|| PureState::from_parts(sys_reg.clone(), partial.unscale(weight)));
            Branch { weight, relative }
        })
        .collect();

    Ok(RelativeStateDecomposition {
        source_register: register.clone(),
        apparatus_basis: apparatus_basis.to_vec(),
        branches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_orthonormal_basis() {
        let r = Register::qubits(&["a", "s"]).unwrap();
        let psi = PureState::basis(r, 0).unwrap();
        let e0 = PureState::basis(Register::qubits(&["a"]).unwrap(), 0).unwrap();
        let cut = Partition::cut(&["a"], &["s"]).unwrap();
        assert!(matches!(
            relative_states(&psi, &cut, &[e0.clone(), e0]),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn interleaved_blocks_reconstruct() {
        let r = Register::qubits(&["s1", "a", "s2"]).unwrap();
        let psi = PureState::normalized(
            r,
            (0..8).map(|i| C64::new(1.0 + i as f64, (i as f64).cos())).collect(),
        )
        .unwrap();
        let ar = Register::qubits(&["a"]).unwrap();
        let basis = [PureState::basis(ar.clone(), 0).unwrap(), PureState::basis(ar, 1).unwrap()];
        let cut = Partition::cut(&["a"], &["s1", "s2"]).unwrap();
        let d = relative_states(&psi, &cut, &basis).unwrap();
        let back = d.reconstruct().unwrap();
        assert!(back.max_abs_diff(&psi).unwrap() < 1e-12);
    }
}
