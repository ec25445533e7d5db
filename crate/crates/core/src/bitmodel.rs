//! A spin measured by a single two-level apparatus atom.
//!
//! The coupling `H = g (|⊥⟩⟨⊥| − |⊤⟩⟨⊤|) ⊗ σ_z` rotates the atom one way for
//! spin up and the other way for spin down. Starting from `|+⟩`, at
//! `τ = π/4g` the atom sits in `|±⟩` or `|∓⟩` in perfect correlation with the
//! spin. All states here live on the register `(spin, atom)`, so basis index
//! order is `↑±, ↑∓, ↓±, ↓∓`.

use std::f64::consts::FRAC_PI_4;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, HermitianOperator, PureState, Register, C64, STRUCTURAL_TOL};
use crate::states;

pub const SPIN: &str = "spin";
pub const ATOM: &str = "atom";

pub fn register() -> Register {
    Register::qubits(&[SPIN, ATOM]).expect("static labels are distinct")
}

/// Spin amplitudes `a, b` and coupling `g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BitModelConfig {
    a: C64,
    b: C64,
    g: f64,
}

impl BitModelConfig {
    pub fn new(a: C64, b: C64, g: f64) -> Result<Self> {
        let norm = a.norm_sqr() + b.norm_sqr();
        if (norm - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "|a|² + |b|² = {norm}, expected 1"
            )));
        }
        check_coupling(g)?;
        Ok(BitModelConfig { a, b, g })
    }

    /// Real amplitudes `a` and `b = √(1 − a²)`.
    pub fn with_real_a(a: f64, g: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a.abs()) {
            return Err(Error::validation(format!("|a| = {} exceeds 1", a.abs())));
        }
        Self::new(C64::new(a, 0.0), C64::new((1.0 - a * a).sqrt(), 0.0), g)
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Time at which the record is complete: `τ = π/4g`.
    pub fn tau(&self) -> f64 {
        FRAC_PI_4 / self.g
    }
}

fn check_coupling(g: f64) -> Result<()> {
    if !(g > 0.0) || !g.is_finite() {
        return Err(Error::validation(format!("coupling g = {g} must be positive")));
    }
    Ok(())
}

/// Spin–atom coupling `σ_z ⊗ g(|⊥⟩⟨⊥| − |⊤⟩⟨⊤|)` on `(spin, atom)`.
pub fn h_as(g: f64) -> Result<HermitianOperator> {
    check_coupling(g)?;
    let atom = states::projector_difference(states::BOT, states::TOP) * C64::new(g, 0.0);
    HermitianOperator::new(register(), states::sigma_z().kronecker(&atom))
}

/// `(a|↑⟩ + b|↓⟩) ⊗ |+⟩`.
pub fn initial_state(cfg: &BitModelConfig) -> PureState {
    let spin = [cfg.a, cfg.b];
    let amps = [0, 1]
        .iter()
        .flat_map(|&s| [spin[s] * states::PLUS[0], spin[s] * states::PLUS[1]])
        .collect();
    PureState::new(register(), amps).expect("normalized by construction")
}

/// Closed-form state at time `t`:
/// `a|↑⟩[sin(π/4+gt)|±⟩ + cos(π/4+gt)|∓⟩] + b|↓⟩[sin(π/4−gt)|±⟩ + cos(π/4−gt)|∓⟩]`.
pub fn evolve_bitbit(cfg: &BitModelConfig, t: f64) -> PureState {
    let gt = cfg.g * t;
    let (up, down) = (FRAC_PI_4 + gt, FRAC_PI_4 - gt);
    let amps = vec![
        cfg.a * up.sin(),
        cfg.a * up.cos(),
        cfg.b * down.sin(),
        cfg.b * down.cos(),
    ];
    PureState::new(register(), amps).expect("normalized by construction")
}

/// `a|↑⟩|±⟩ + b|↓⟩|∓⟩`, the state at `τ`.
pub fn correlated_state(a: C64, b: C64) -> Result<PureState> {
    let z = C64::new(0.0, 0.0);
    PureState::new(register(), vec![a, z, z, b])
}

/// `|Φ(τ)⟩⟨Φ(τ)|`: diagonal `(|a|², 0, 0, |b|²)`, corners `ab*`, `a*b`.
pub fn rho_pure_as(cfg: &BitModelConfig) -> DensityMatrix {
    let (a, b) = (cfg.a, cfg.b);
    let mut m = DMatrix::zeros(4, 4);
    m[(0, 0)] = C64::new(a.norm_sqr(), 0.0);
    m[(3, 3)] = C64::new(b.norm_sqr(), 0.0);
    m[(0, 3)] = a * b.conj();
    m[(3, 0)] = a.conj() * b;
    DensityMatrix::new(register(), m).expect("projector onto a normalized state")
}

/// The reduced mixture `diag(|a|², 0, 0, |b|²)` with the correlations kept
/// and the coherences removed.
pub fn rho_mix_as(cfg: &BitModelConfig) -> DensityMatrix {
    DensityMatrix::diagonal(register(), &[cfg.a.norm_sqr(), 0.0, 0.0, cfg.b.norm_sqr()])
        .expect("populations sum to one")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{commutes, evolve_exact, Reducible};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn half() -> BitModelConfig {
        BitModelConfig::with_real_a(FRAC_1_SQRT_2, 1.0).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(BitModelConfig::new(C64::new(1.0, 0.0), C64::new(1.0, 0.0), 1.0).is_err());
        assert!(BitModelConfig::with_real_a(1.0, 0.0).is_err());
        assert!(h_as(-1.0).is_err());
        assert!((half().tau() - FRAC_PI_4).abs() < 1e-16);
    }

    #[test]
    fn h_as_matches_exchange_form() {
        // second form: i g (|±⟩⟨∓| − |∓⟩⟨±|) ⊗ σ_z, with the factors swapped
        // onto (spin, atom)
        let g = 0.7;
        let exch = (states::outer(states::EXCITED, states::GROUND)
            - states::outer(states::GROUND, states::EXCITED))
            * C64::new(0.0, g);
        let expected = states::sigma_z().kronecker(&exch);
        let h = h_as(g).unwrap();
        assert!((h.matrix() - expected).iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn h_as_spectrum_and_linearity() {
        let mut ev = h_as(1.0).unwrap().eigenvalues();
        ev.iter_mut().for_each(|e| *e = (*e * 1e9).round() / 1e9);
        assert_eq!(ev, vec![-1.0, -1.0, 1.0, 1.0]);
        let h2 = h_as(2.0).unwrap();
        let h1 = h_as(1.0).unwrap();
        assert_eq!(h2.matrix(), &(h1.matrix() * C64::new(2.0, 0.0)));
    }

    #[test]
    fn h_as_is_nondemolition_for_spin_z() {
        let sz = HermitianOperator::new(Register::qubits(&[SPIN]).unwrap(), states::sigma_z()).unwrap();
        assert!(commutes(&h_as(1.3).unwrap(), &sz));
        let spin_x = HermitianOperator::new(
            Register::qubits(&[SPIN]).unwrap(),
            states::projector_difference(states::ODOT, states::OTIMES),
        )
        .unwrap();
        assert!(!commutes(&h_as(1.3).unwrap(), &spin_x));
    }

    #[test]
    fn closed_form_endpoints() {
        let cfg = BitModelConfig::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8), 2.0).unwrap();
        let d0 = evolve_bitbit(&cfg, 0.0).max_abs_diff(&initial_state(&cfg)).unwrap();
        assert!(d0 < 1e-15);
        let at_tau = evolve_bitbit(&cfg, cfg.tau());
        let expected = correlated_state(cfg.a(), cfg.b()).unwrap();
        assert!(at_tau.max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn closed_form_matches_oracle_at_tau() {
        let cfg = half();
        let h = h_as(cfg.g()).unwrap();
        let exact = evolve_exact(&h, cfg.tau(), &initial_state(&cfg)).unwrap();
        let d = evolve_bitbit(&cfg, cfg.tau())
            .phase_gauged()
            .max_abs_diff(&exact.phase_gauged())
            .unwrap();
        assert!(d < 1e-10, "{d}");
    }

    #[test]
    fn reduced_states_at_tau() {
        let cfg = BitModelConfig::with_real_a(0.6, 1.0).unwrap();
        let s = evolve_bitbit(&cfg, cfg.tau());
        let spin = s.partial_trace(&[SPIN]).unwrap();
        let atom = s.partial_trace(&[ATOM]).unwrap();
        for rho in [spin, atom] {
            assert!((rho.get(0, 0).re - 0.36).abs() < 1e-12);
            assert!((rho.get(1, 1).re - 0.64).abs() < 1e-12);
            assert!(rho.get(0, 1).norm() < 1e-12);
        }
    }

    #[test]
    fn density_matrices() {
        let cfg = half();
        let pure = rho_pure_as(&cfg);
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((pure.get(i, j) - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((pure.purity() - 1.0).abs() < 1e-12);
        let outer = evolve_bitbit(&cfg, cfg.tau()).density();
        assert!(pure.max_abs_diff(&outer).unwrap() < 1e-12);

        let mix = rho_mix_as(&cfg);
        assert!((mix.purity() - 0.5).abs() < 1e-15);
        assert_eq!(mix.max_off_diagonal(), 0.0);
        let skew = BitModelConfig::with_real_a(0.75f64.sqrt(), 1.0).unwrap();
        assert!((rho_mix_as(&skew).purity() - 0.625).abs() < 1e-12);
        for i in 0..4 {
            assert_eq!(rho_mix_as(&skew).get(i, i), rho_pure_as(&skew).get(i, i));
        }

        let a1 = BitModelConfig::with_real_a(1.0, 1.0).unwrap();
        let proj = PureState::basis(register(), 0).unwrap().density();
        assert!(rho_pure_as(&a1).max_abs_diff(&proj).unwrap() < 1e-15);
    }
}
