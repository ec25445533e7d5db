//! The apparatus atom of the bit model monitored by an environment of `N`
//! non-interacting two-level atoms.
//!
//! Environment atom `k` couples to the apparatus pointer through
//! `H_k = −g_k (|⊥)(⊥| − |⊤)(⊤|)_k ⊗ (|±⟩⟨±| − |∓⟩⟨∓|)`. Every `H_k` commutes
//! with the pointer projectors, so each branch of the correlated
//! spin–apparatus state drags its own environment state along:
//!
//! `|ψ(t)⟩ = a|↑⟩|±⟩ ⊗_k [α_k e^{+ig_k t}|⊥) + β_k e^{−ig_k t}|⊤)]
//!         + b|↓⟩|∓⟩ ⊗_k [α_k e^{−ig_k t}|⊥) + β_k e^{+ig_k t}|⊤)]`.
//!
//! Tracing out the environment multiplies the spin–apparatus coherences by
//! the overlap of the two environment branches, the correlation-damping
//! factor `z(t) = Π_k [cos 2g_k t + i(|α_k|² − |β_k|²) sin 2g_k t]`.
//!
//! Registers are ordered `(spin, atom, env1, …, envN)`.

mod damping;
mod recurrence;

pub use damping::{
    predicted_mean_abs_sq, z_ensemble_stats, z_of_t, z_stats, ztrace, ZStats, ZSummary, ZTrace,
};
pub use recurrence::recurrence_time;

use nalgebra::{DMatrix, DVector};
use rand::distributions::Open01;
use rand::Rng;

use crate::bitmodel::{ATOM, SPIN};
use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, HermitianOperator, PureState, Register, C64, STRUCTURAL_TOL};
use crate::states;

/// Label of environment atom `k` (0-based index, 1-based label).
pub fn env_label(k: usize) -> String {
    format!("env{}", k + 1)
}

/// One environment atom: coupling `g_k` and initial amplitudes `α_k`, `β_k`
/// on `|⊥)`, `|⊤)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvAtom {
    coupling: f64,
    alpha: C64,
    beta: C64,
}

impl EnvAtom {
    pub fn new(coupling: f64, alpha: C64, beta: C64) -> Result<Self> {
        if !(coupling > 0.0) || !coupling.is_finite() {
            return Err(Error::validation(format!(
                "environment coupling g = {coupling} must be positive"
            )));
        }
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "|α|² + |β|² = {norm}, expected 1"
            )));
        }
        Ok(EnvAtom {
            coupling,
            alpha,
            beta,
        })
    }

    /// Real amplitudes with `|α|² − |β|² = polarization`.
    pub fn with_polarization(coupling: f64, polarization: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&polarization) {
            return Err(Error::validation(format!(
                "polarization {polarization} outside [-1, 1]"
            )));
        }
        let alpha = ((1.0 + polarization) / 2.0).sqrt();
        let beta = ((1.0 - polarization) / 2.0).sqrt();
        Self::new(coupling, C64::new(alpha, 0.0), C64::new(beta, 0.0))
    }

    /// From the initial state written on the pointer basis `|±), |∓)`.
    pub fn from_pointer_amplitudes(coupling: f64, state: [C64; 2]) -> Result<Self> {
        let project = |basis: [C64; 2]| basis[0].conj() * state[0] + basis[1].conj() * state[1];
        Self::new(coupling, project(states::BOT), project(states::TOP))
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    pub fn beta(&self) -> C64 {
        self.beta
    }

    /// `|α|² − |β|²`
    pub fn polarization(&self) -> f64 {
        self.alpha.norm_sqr() - self.beta.norm_sqr()
    }

    /// `γ = ||α|² − |β|²|`; 1 means the atom starts in an eigenstate of its
    /// coupling and never learns anything about the pointer.
    pub fn gamma(&self) -> f64 {
        self.polarization().abs()
    }

    /// Environment state of this atom in the pointer basis at time `t`, for
    /// the branch where the apparatus pointer reads `sign = ±1`.
    fn branch_vector(&self, t: f64, sign: f64) -> [C64; 2] {
        let phase = C64::from_polar(1.0, sign * self.coupling * t);
        let a = self.alpha * phase;
        let b = self.beta * phase.conj();
        [
            a * states::BOT[0] + b * states::TOP[0],
            a * states::BOT[1] + b * states::TOP[1],
        ]
    }
}

/// Ordered list of `N ≥ 1` environment atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSpec {
    atoms: Vec<EnvAtom>,
}

impl EnvironmentSpec {
    pub fn new(atoms: Vec<EnvAtom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::validation("environment needs at least one atom"));
        }
        Ok(EnvironmentSpec { atoms })
    }

    /// Couplings drawn uniformly from the open interval (0, 1), one per
    /// polarization.
    pub fn random_couplings<R: Rng>(polarizations: &[f64], rng: &mut R) -> Result<Self> {
        let atoms = polarizations
            .iter()
            .map(|&p| {
                let g: f64 = rng.sample(Open01);
                EnvAtom::with_polarization(g, p)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(atoms)
    }

    pub fn atoms(&self) -> &[EnvAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn couplings(&self) -> Vec<f64> {
        self.atoms.iter().map(EnvAtom::coupling).collect()
    }

    pub fn min_coupling(&self) -> f64 {
        self.atoms.iter().map(EnvAtom::coupling).fold(f64::INFINITY, f64::min)
    }

    /// Environment made of `self`'s atoms followed by `other`'s.
    pub fn concat(&self, other: &EnvironmentSpec) -> EnvironmentSpec {
        let mut atoms = self.atoms.clone();
        atoms.extend_from_slice(&other.atoms);
        EnvironmentSpec { atoms }
    }

    pub fn env_labels(&self) -> Vec<String> {
        (0..self.len()).map(env_label).collect()
    }

    /// `(spin, atom, env1, …, envN)`
    pub fn register(&self) -> Register {
        let mut labels = vec![SPIN.to_string(), ATOM.to_string()];
        labels.extend(self.env_labels());
        Register::qubits(&labels).expect("labels are distinct")
    }

    /// `(atom, env1, …, envN)`
    pub fn apparatus_env_register(&self) -> Register {
        let mut labels = vec![ATOM.to_string()];
        labels.extend(self.env_labels());
        Register::qubits(&labels).expect("labels are distinct")
    }
}

/// Coupling of environment atom `k` (0-based) to the apparatus pointer, on
/// `(atom, env1, …, envN)` with identities on the other environment atoms.
pub fn h_ae_k(k: usize, spec: &EnvironmentSpec) -> Result<HermitianOperator> {
    let atom = spec.atoms.get(k).ok_or_else(|| {
        Error::domain(format!(
            "environment atom index {k} out of range for N = {}",
            spec.len()
        ))
    })?;
    let env = states::projector_difference(states::BOT, states::TOP) * C64::new(-atom.coupling, 0.0);
    let local = states::sigma_z().kronecker(&env);
    HermitianOperator::local(&spec.apparatus_env_register(), &[ATOM.to_string(), env_label(k)], local)
}

/// `Σ_k H_k` on the full register `(spin, atom, env…)`.
pub fn h_env_total(spec: &EnvironmentSpec) -> Result<HermitianOperator> {
    let full = spec.register();
    (0..spec.len()).try_fold(HermitianOperator::zero(full.clone()), |acc, k| {
        acc.add(&h_ae_k(k, spec)?.embed(&full)?)
    })
}

fn check_amplitudes(a: C64, b: C64) -> Result<()> {
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::validation(format!("|a|² + |b|² = {norm}, expected 1")));
    }
    Ok(())
}

fn branch_state(spec: &EnvironmentSpec, t: f64, sign: f64) -> DVector<C64> {
    spec.atoms.iter().fold(DVector::from_element(1, C64::new(1.0, 0.0)), |acc, atom| {
        let v = atom.branch_vector(t, sign);
        acc.kronecker(&DVector::from_column_slice(&v))
    })
}

/// Closed-form state of spin, apparatus and environment at time `t`, starting
/// from `(a|↑⟩|±⟩ + b|↓⟩|∓⟩) ⊗_k (α_k|⊥) + β_k|⊤))`.
pub fn evolve_env(spec: &EnvironmentSpec, a: C64, b: C64, t: f64) -> Result<PureState> {
    check_amplitudes(a, b)?;
    let env_dim = 1usize << spec.len();
    let up = branch_state(spec, t, 1.0);
    let down = branch_state(spec, t, -1.0);
    let mut amps = DVector::zeros(4 * env_dim);
    // spin ↑ with atom |±⟩ is block 0; spin ↓ with atom |∓⟩ is block 3
    amps.rows_mut(0, env_dim).copy_from(&(up * a));
    amps.rows_mut(3 * env_dim, env_dim).copy_from(&(down * b));
    PureState::new(spec.register(), amps.iter().copied().collect())
}

/// Reduced spin–apparatus matrix: diagonal `(|a|², 0, 0, |b|²)` with
/// coherences `z(t)ab*` and `z*(t)a*b`, on `(spin, atom)`.
pub fn rho_as_analytic(spec: &EnvironmentSpec, a: C64, b: C64, t: f64) -> Result<DensityMatrix> {
    check_amplitudes(a, b)?;
    let z = z_of_t(spec, t);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(a.norm_sqr(), 0.0);
    m[(3, 3)] = C64::new(b.norm_sqr(), 0.0);
    m[(0, 3)] = z * a * b.conj();
    m[(3, 0)] = z.conj() * a.conj() * b;
    DensityMatrix::new(crate::bitmodel::register(), m)
}
