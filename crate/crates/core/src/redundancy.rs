//! Redundant records: one spin copied into `N` apparatus atoms,
//! `a|↑⟩|±…±⟩ + b|↓⟩|∓…∓⟩`, and the two ways of reading it back.
//!
//! Reading every atom in the pointer basis and taking a majority recovers
//! `↑/↓` and tolerates flips of fewer than half the atoms. Reading every
//! atom in the conjugate `|+⟩/|−⟩` basis recovers the spin's `⊙/⊗` relative
//! state through the parity of `|−⟩` results, which needs all `N` atoms and
//! is wrong after any odd number of flips.
//!
//! Registers are ordered `(spin, atom1, …, atomN)`; atom indices in this
//! module are 1-based. Readings are bits: `0` is `|±⟩` (pointer) or `|+⟩`
//! (conjugate), `1` is `|∓⟩` or `|−⟩`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use nalgebra::DMatrix;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;

use crate::bitmodel::SPIN;
use crate::error::{Error, Result};
use crate::qcore::{PureState, Register, C64, STRUCTURAL_TOL};
use crate::seed;
use crate::states;

pub fn atom_label(k: usize) -> String {
    format!("atom{k}")
}

fn record_register(n: usize) -> Register {
    let mut labels = vec![SPIN.to_string()];
    labels.extend((1..=n).map(atom_label));
    Register::qubits(&labels).expect("labels are distinct")
}

/// Spin plus `N` record atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordState {
    n_atoms: usize,
    state: PureState,
}

impl RecordState {
    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn register(&self) -> &Register {
        self.state.register()
    }

    pub fn atom_labels(&self) -> Vec<String> {
        (1..=self.n_atoms).map(atom_label).collect()
    }
}

/// `a|↑⟩ ⊗_k |±⟩_k + b|↓⟩ ⊗_k |∓⟩_k`.
pub fn record_state(a: C64, b: C64, n_atoms: usize) -> Result<RecordState> {
    if n_atoms < 1 {
        return Err(Error::validation("record needs at least one atom"));
    }
    if n_atoms > 24 {
        return Err(Error::validation(format!(
            "record with {n_atoms} atoms exceeds the dense-state limit of 24"
        )));
    }
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > STRUCTURAL_TOL {
        return Err(Error::validation(format!("|a|² + |b|² = {norm}, expected 1")));
    }
    let dim = 1usize << (n_atoms + 1);
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] = a;
    amps[dim - 1] = b;
    Ok(RecordState {
        n_atoms,
        state: PureState::new(record_register(n_atoms), amps)?,
    })
}

/// Basis in which the spin and all atoms are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReadBasis {
    /// Spin `↑/↓`, atoms `|±⟩/|∓⟩`.
    Pointer,
    /// Spin `⊙/⊗`, atoms `|+⟩/|−⟩`.
    Conjugate,
}

impl ReadBasis {
    /// Single-qubit operator exchanging the two states of this basis.
    fn exchange(self) -> DMatrix<C64> {
        match self {
            // |±⟩ ↔ |∓⟩
            ReadBasis::Pointer => states::sigma_x(),
            // |+⟩ ↔ |−⟩
            ReadBasis::Conjugate => states::sigma_z(),
        }
    }
}

/// Applies the `|±⟩ ↔ |∓⟩` exchange to each listed atom.
pub fn flip_atoms(rec: &RecordState, indices: &[usize]) -> Result<RecordState> {
    flip_atoms_in(rec, indices, ReadBasis::Pointer)
}

/// Applies the exchange of `basis`'s two atom states to each listed atom:
/// `|±⟩ ↔ |∓⟩` for the pointer basis, `|+⟩ ↔ |−⟩` for the conjugate one.
pub fn flip_atoms_in(rec: &RecordState, indices: &[usize], basis: ReadBasis) -> Result<RecordState> {
    let op = basis.exchange();
    let mut state = rec.state.clone();
    for &k in indices {
        if k < 1 || k > rec.n_atoms {
            return Err(Error::domain(format!(
                "atom index {k} outside 1..={}",
                rec.n_atoms
            )));
        }
        state = state.apply_local(&[atom_label(k)], &op)?;
    }
    Ok(RecordState {
        n_atoms: rec.n_atoms,
        state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpinLabel {
    Up,
    Down,
    Odot,
    Otimes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MajorityVerdict {
    Up,
    Down,
    Tie,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParityVerdict {
    Odot,
    Otimes,
}

/// Readings of all record atoms in one basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub per_atom: Vec<u8>,
    pub basis: ReadBasis,
}

impl Outcome {
    pub fn new(per_atom: Vec<u8>, basis: ReadBasis) -> Result<Self> {
        if per_atom.is_empty() {
            return Err(Error::validation("outcome must cover at least one atom"));
        }
        if per_atom.iter().any(|&b| b > 1) {
            return Err(Error::validation("atom readings are 0 or 1"));
        }
        Ok(Outcome { per_atom, basis })
    }

    pub fn len(&self) -> usize {
        self.per_atom.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_atom.is_empty()
    }
}

/// "The spin was `↑` if most atoms read `|±⟩`", over `subset` (1-based atom
/// indices) or over all atoms. An even split is reported as a tie.
pub fn majority_decode(outcome: &Outcome, subset: Option<&[usize]>) -> Result<MajorityVerdict> {
    if outcome.basis != ReadBasis::Pointer {
        return Err(Error::contract("majority decoding needs pointer-basis readings"));
    }
    let (mut excited, mut ground) = (0usize, 0usize);
    let mut tally = |bit: u8| if bit == 0 { excited += 1 } else { ground += 1 };
    match subset {
        None => outcome.per_atom.iter().copied().for_each(&mut tally),
        Some([]) => return Err(Error::contract("majority subset must be non-empty")),
        Some(ks) => {
            for &k in ks {
                let bit = k
                    .checked_sub(1)
                    .and_then(|i| outcome.per_atom.get(i))
                    .ok_or_else(|| Error::domain(format!("atom index {k} outside 1..={}", outcome.len())))?;
                tally(*bit);
            }
        }
    }
    Ok(match excited.cmp(&ground) {
        std::cmp::Ordering::Greater => MajorityVerdict::Up,
        std::cmp::Ordering::Less => MajorityVerdict::Down,
        std::cmp::Ordering::Equal => MajorityVerdict::Tie,
    })
}

/// An even number of `|−⟩` readings means `⊙`, an odd number `⊗`. Always
/// uses every atom.
pub fn parity_decode(outcome: &Outcome) -> Result<ParityVerdict> {
    if outcome.basis != ReadBasis::Conjugate {
        return Err(Error::contract("parity decoding needs conjugate-basis readings"));
    }
    let minus = outcome.per_atom.iter().filter(|&&b| b == 1).count();
    Ok(if minus % 2 == 0 {
        ParityVerdict::Odot
    } else {
        ParityVerdict::Otimes
    })
}

/// Born-rule sampler over joint readings of spin and atoms.
#[derive(Debug, Clone)]
pub struct RecordSampler {
    n_atoms: usize,
    basis: ReadBasis,
    probabilities: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RecordSampler {
    pub fn new(rec: &RecordState, basis: ReadBasis) -> Result<Self> {
        let state = match basis {
            ReadBasis::Pointer => rec.state.clone(),
            ReadBasis::Conjugate => {
                // amplitudes on |⊙/⊗⟩ ⊗ |+/−⟩…: the Hadamard map on every qubit
                let h = states::hadamard();
                let mut s = rec.state.clone();
                for label in rec.register().labels().map(str::to_string).collect::<Vec<_>>() {
                    s = s.apply_local(&[label], &h)?;
                }
                s
            }
        };
        let probabilities: Vec<f64> = state.amplitudes().iter().map(|z| z.norm_sqr()).collect();
        let mut acc = 0.0;
        let cumulative = probabilities
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        Ok(RecordSampler {
            n_atoms: rec.n_atoms,
            basis,
            probabilities,
            cumulative,
        })
    }

    /// Probability of joint basis index `i` (spin is the most significant bit).
    pub fn probability(&self, index: usize) -> f64 {
        self.probabilities[index]
    }

    pub fn sample_index<R: Rng>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty");
        let u = rng.gen::<f64>() * total;
        self.cumulative
            .partition_point(|&c| c <= u)
            .min(self.cumulative.len() - 1)
    }

    pub fn decode_index(&self, index: usize) -> (SpinLabel, Outcome) {
        let n = self.n_atoms;
        let spin_bit = (index >> n) & 1;
        let spin = match (self.basis, spin_bit) {
            (ReadBasis::Pointer, 0) => SpinLabel::Up,
            (ReadBasis::Pointer, _) => SpinLabel::Down,
            (ReadBasis::Conjugate, 0) => SpinLabel::Odot,
            (ReadBasis::Conjugate, _) => SpinLabel::Otimes,
        };
        let per_atom = (1..=n).map(|k| ((index >> (n - k)) & 1) as u8).collect();
        (
            spin,
            Outcome {
                per_atom,
                basis: self.basis,
            },
        )
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> (SpinLabel, Outcome) {
        self.decode_index(self.sample_index(rng))
    }
}

/// One joint Born-rule reading of spin and atoms in `basis`, reproducible
/// from `rng_seed`.
pub fn measure_record(rec: &RecordState, basis: ReadBasis, rng_seed: u64) -> Result<(SpinLabel, Outcome)> {
    let sampler = RecordSampler::new(rec, basis)?;
    let mut rng = seed::substream(rng_seed, "measure_record", 0);
    Ok(sampler.sample(&mut rng))
}

/// Success rates of the two decoders under record damage.
#[derive(Debug, Clone, PartialEq)]
pub struct Reliability {
    pub n_atoms: usize,
    pub flip_count: usize,
    pub majority_success: f64,
    pub parity_success: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Reliability {
    pub const CSV_HEADER: &'static str =
        "n_atoms,flip_count,majority_success,parity_success,trials,seed";

    pub fn write_csv_row<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(
            out,
            "{},{},{:.16e},{:.16e},{},{}",
            self.n_atoms,
            self.flip_count,
            self.majority_success,
            self.parity_success,
            self.trials,
            self.seed
        )
    }
}

/// Undamaged records used as decoder inputs: spin `↑` or `↓` for the
/// majority read, spin `⊙` (the `a = b` record) for the parity read. The
/// parity rule pairs even `|−⟩` counts with `⊙` only for `a = b`; for
/// `a = −b` the pairing is reversed.
struct DecoderInputs {
    up: RecordSampler,
    down: RecordSampler,
    odot: RecordSampler,
}

impl DecoderInputs {
    fn new(n: usize) -> Result<Self> {
        let (one, zero, h) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(FRAC_1_SQRT_2, 0.0));
        Ok(DecoderInputs {
            up: RecordSampler::new(&record_state(one, zero, n)?, ReadBasis::Pointer)?,
            down: RecordSampler::new(&record_state(zero, one, n)?, ReadBasis::Pointer)?,
            odot: RecordSampler::new(&record_state(h, h, n)?, ReadBasis::Conjugate)?,
        })
    }
}

fn majority_correct(spin: SpinLabel, outcome: &Outcome) -> bool {
    matches!(
        (spin, majority_decode(outcome, None)),
        (SpinLabel::Up, Ok(MajorityVerdict::Up)) | (SpinLabel::Down, Ok(MajorityVerdict::Down))
    )
}

fn parity_correct(spin: SpinLabel, outcome: &Outcome) -> bool {
    matches!(
        (spin, parity_decode(outcome)),
        (SpinLabel::Odot, Ok(ParityVerdict::Odot)) | (SpinLabel::Otimes, Ok(ParityVerdict::Otimes))
    )
}

/// Flipping atoms in the basis they are read in permutes the readings, so a
/// damaged record can be sampled as the intact one followed by inverting the
/// flipped atoms' bits.
fn apply_flip_mask(outcome: &mut Outcome, flipped: &[bool]) {
    for (bit, &f) in outcome.per_atom.iter_mut().zip(flipped) {
        if f {
            *bit ^= 1;
        }
    }
}

fn run_trials<F>(n: usize, trials: usize, seed_root: u64, purpose: &str, draw_flips: F) -> Result<(f64, f64)>
where
    F: Fn(&mut rand_chacha::ChaCha20Rng) -> Vec<bool> + Sync,
{
    if trials == 0 {
        return Err(Error::validation("trials must be at least 1"));
    }
    let inputs = DecoderInputs::new(n)?;
    let (maj, par) = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = seed::substream(seed_root, purpose, i);
            let pointer = if rng.gen::<bool>() { &inputs.up } else { &inputs.down };
            let flips = draw_flips(&mut rng);
            let (spin, mut reading) = pointer.sample(&mut rng);
            apply_flip_mask(&mut reading, &flips);
            let m = majority_correct(spin, &reading) as u64;
            let flips = draw_flips(&mut rng);
            let (spin, mut reading) = inputs.odot.sample(&mut rng);
            apply_flip_mask(&mut reading, &flips);
            let p = parity_correct(spin, &reading) as u64;
            (m, p)
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok((maj as f64 / trials as f64, par as f64 / trials as f64))
}

fn check_atoms(n: usize) -> Result<()> {
    if n < 1 {
        return Err(Error::validation("record needs at least one atom"));
    }
    Ok(())
}

/// Monte Carlo success rates with exactly `flip_count` atoms flipped per
/// record, the flipped set drawn uniformly. Each record is damaged in the
/// basis it is read in. Trial `i` draws from substream `i` of `rng_seed`.
pub fn reliability_curve(n: usize, flip_count: usize, trials: usize, rng_seed: u64) -> Result<Reliability> {
    check_atoms(n)?;
    if flip_count > n {
        return Err(Error::validation(format!(
            "flip_count {flip_count} exceeds the {n} record atoms"
        )));
    }
    let (majority_success, parity_success) = run_trials(n, trials, rng_seed, "reliability", |rng| {
        let mut mask = vec![false; n];
        for k in index::sample(rng, n, flip_count) {
            mask[k] = true;
        }
        mask
    })?;
    Ok(Reliability {
        n_atoms: n,
        flip_count,
        majority_success,
        parity_success,
        trials,
        seed: rng_seed,
    })
}

/// Monte Carlo success rates when each atom flips independently with
/// probability `rate`.
pub fn reliability_at_rate(n: usize, rate: f64, trials: usize, rng_seed: u64) -> Result<(f64, f64)> {
    check_atoms(n)?;
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::validation(format!("flip rate {rate} outside [0, 1]")));
    }
    run_trials(n, trials, rng_seed, "reliability_rate", |rng| {
        (0..n).map(|_| rng.gen::<f64>() < rate).collect()
    })
}

/// Exact success rates averaged over every flip set of size `flip_count`,
/// the decoder inputs and every Born outcome. Flips are applied to
/// the state itself, so this doubles as a check of the sampling shortcut.
pub fn reliability_exact(n: usize, flip_count: usize) -> Result<(f64, f64)> {
    check_atoms(n)?;
    if flip_count > n || n > 12 {
        return Err(Error::validation(format!(
            "exhaustive reliability needs flip_count ≤ N ≤ 12, got N = {n}, flip_count = {flip_count}"
        )));
    }
    let (one, zero, h) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(FRAC_1_SQRT_2, 0.0));
    let sets: Vec<Vec<usize>> = subsets(n, flip_count);
    let success = |inputs: &[(C64, C64)], basis: ReadBasis, correct: fn(SpinLabel, &Outcome) -> bool| -> Result<f64> {
        let mut total = 0.0;
        for &(a, b) in inputs {
            let rec = record_state(a, b, n)?;
            for set in &sets {
                let damaged = flip_atoms_in(&rec, set, basis)?;
                let sampler = RecordSampler::new(&damaged, basis)?;
                for i in 0..sampler.probabilities.len() {
                    let (spin, outcome) = sampler.decode_index(i);
                    if correct(spin, &outcome) {
                        total += sampler.probability(i);
                    }
                }
            }
        }
        Ok(total / (inputs.len() * sets.len()) as f64)
    };
    let majority = success(&[(one, zero), (zero, one)], ReadBasis::Pointer, majority_correct)?;
    let parity = success(&[(h, h)], ReadBasis::Conjugate, parity_correct)?;
    Ok((majority, parity))
}

/// All `k`-element subsets of `1..=n`.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=n).filter(|&i| m & (1 << (i - 1)) != 0).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{evolve_exact, is_product, HermitianOperator, Partition, Reducible};

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn half() -> C64 {
        c(FRAC_1_SQRT_2)
    }

    #[test]
    fn record_validation() {
        assert!(record_state(c(1.0), c(0.0), 0).is_err());
        assert!(record_state(c(1.0), c(1.0), 3).is_err());
    }

    #[test]
    fn eigenstate_record_is_a_product() {
        let rec = record_state(c(1.0), c(0.0), 3).unwrap();
        assert!(is_product(rec.state(), &Partition::singletons(rec.register())).unwrap().is_product);
        assert_eq!(rec.state().amplitude(0), c(1.0));
    }

    #[test]
    fn record_matches_sequential_measurement() {
        // each atom in turn is coupled to the spin for τ = π/4g
        let (a, b) = (c(0.6), C64::new(0.0, 0.8));
        let n = 3;
        let spin = PureState::qubit(SPIN, [a, b]).unwrap();
        let atoms: Vec<PureState> = (1..=n)
            .map(|k| PureState::qubit(&atom_label(k), states::PLUS).unwrap())
            .collect();
        let mut parts = vec![spin];
        parts.extend(atoms);
        let mut psi = crate::qcore::tensor(&parts).unwrap();
        let g = 1.0;
        let local = states::sigma_z()
            .kronecker(&(states::projector_difference(states::BOT, states::TOP) * c(g)));
        for k in 1..=n {
            let h = HermitianOperator::local(psi.register(), &[SPIN.to_string(), atom_label(k)], local.clone())
                .unwrap();
            psi = evolve_exact(&h, std::f64::consts::FRAC_PI_4 / g, &psi).unwrap();
        }
        let rec = record_state(a, b, n).unwrap();
        assert!(rec.state().max_abs_diff_up_to_phase(&psi).unwrap() < 1e-10);
    }

    #[test]
    fn conjugate_expansion_of_three_atom_record() {
        let rec = record_state(half(), half(), 3).unwrap();
        let sampler = RecordSampler::new(&rec, ReadBasis::Conjugate).unwrap();
        let mut nonzero = 0;
        for i in 0..16 {
            let p = sampler.probability(i);
            let (spin, outcome) = sampler.decode_index(i);
            if p > 1e-12 {
                nonzero += 1;
                assert!((p - 1.0 / 8.0).abs() < 1e-12);
                // even number of |−⟩ goes with ⊙, odd with ⊗
                let minus = outcome.per_atom.iter().filter(|&&x| x == 1).count();
                assert_eq!(spin == SpinLabel::Odot, minus % 2 == 0);
            }
        }
        assert_eq!(nonzero, 8);
    }

    #[test]
    fn antisymmetric_record_reverses_parity_pairing() {
        let rec = record_state(half(), -half(), 3).unwrap();
        let sampler = RecordSampler::new(&rec, ReadBasis::Conjugate).unwrap();
        for i in 0..16 {
            if sampler.probability(i) > 1e-12 {
                let (spin, outcome) = sampler.decode_index(i);
                assert!(!parity_correct(spin, &outcome));
            }
        }
    }

    #[test]
    fn copies_are_classically_correlated() {
        let rec = record_state(half(), half(), 4).unwrap();
        for k in 1..=4 {
            let rho = rec.state().partial_trace(&[atom_label(k)]).unwrap();
            assert!((rho.get(0, 0).re - 0.5).abs() < 1e-12);
            assert!((rho.get(1, 1).re - 0.5).abs() < 1e-12);
            assert!(rho.get(0, 1).norm() < 1e-12);
        }
        let pair = rec.state().partial_trace(&[atom_label(1), atom_label(3)]).unwrap();
        assert!(pair.get(1, 1).norm() < 1e-12 && pair.get(2, 2).norm() < 1e-12);
        assert!((pair.get(0, 0).re - 0.5).abs() < 1e-12);
    }

    #[test]
    fn flips() {
        let rec = record_state(c(1.0), c(0.0), 3).unwrap();
        assert_eq!(flip_atoms(&rec, &[]).unwrap(), rec);
        let one = flip_atoms(&rec, &[2]).unwrap();
        // |↑⟩|±⟩|∓⟩|±⟩ = index 0b0010
        assert!((one.state().amplitude(0b0010) - c(1.0)).norm() < 1e-15);
        let generic = record_state(c(0.6), C64::new(0.0, 0.8), 3).unwrap();
        let twice = flip_atoms(&flip_atoms(&generic, &[1, 2, 3]).unwrap(), &[1, 2, 3]).unwrap();
        assert!(twice.state().max_abs_diff(generic.state()).unwrap() < 1e-12);
        assert!(matches!(flip_atoms(&rec, &[4]), Err(Error::Domain(_))));
        assert!(matches!(flip_atoms(&rec, &[0]), Err(Error::Domain(_))));
    }

    #[test]
    fn pointer_flip_leaves_parity_intact() {
        // |±⟩ ↔ |∓⟩ commutes with the product of conjugate-basis readings, so
        // the parity read still matches the spin's relative state
        let rec = record_state(half(), half(), 3).unwrap();
        let damaged = flip_atoms(&rec, &[2]).unwrap();
        let sampler = RecordSampler::new(&damaged, ReadBasis::Conjugate).unwrap();
        for i in 0..16 {
            if sampler.probability(i) > 1e-12 {
                let (spin, outcome) = sampler.decode_index(i);
                assert!(parity_correct(spin, &outcome));
            }
        }
    }

    #[test]
    fn majority_rules() {
        let o = |v: Vec<u8>| Outcome::new(v, ReadBasis::Pointer).unwrap();
        assert_eq!(majority_decode(&o(vec![0, 0, 1]), None).unwrap(), MajorityVerdict::Up);
        assert_eq!(majority_decode(&o(vec![1, 1, 1]), None).unwrap(), MajorityVerdict::Down);
        assert_eq!(majority_decode(&o(vec![0, 1]), None).unwrap(), MajorityVerdict::Tie);
        assert_eq!(majority_decode(&o(vec![0, 1, 1]), Some(&[1])).unwrap(), MajorityVerdict::Up);
        assert!(matches!(majority_decode(&o(vec![0]), Some(&[])), Err(Error::Contract(_))));
        assert!(majority_decode(&o(vec![0]), Some(&[2])).is_err());
        let conj = Outcome::new(vec![0], ReadBasis::Conjugate).unwrap();
        assert!(matches!(majority_decode(&conj, None), Err(Error::Contract(_))));
    }

    #[test]
    fn parity_rules() {
        let o = |v: Vec<u8>| Outcome::new(v, ReadBasis::Conjugate).unwrap();
        assert_eq!(parity_decode(&o(vec![0, 1, 1])).unwrap(), ParityVerdict::Odot);
        assert_eq!(parity_decode(&o(vec![1, 1, 1])).unwrap(), ParityVerdict::Otimes);
        assert_eq!(parity_decode(&o(vec![0, 0, 0])).unwrap(), ParityVerdict::Odot);
        let ptr = Outcome::new(vec![0], ReadBasis::Pointer).unwrap();
        assert!(matches!(parity_decode(&ptr), Err(Error::Contract(_))));
    }

    #[test]
    fn measurement_of_single_branch_is_certain() {
        let rec = record_state(c(1.0), c(0.0), 3).unwrap();
        for s in 0..20 {
            let (spin, outcome) = measure_record(&rec, ReadBasis::Pointer, s).unwrap();
            assert_eq!(spin, SpinLabel::Up);
            assert_eq!(outcome.per_atom, vec![0, 0, 0]);
        }
    }

    #[test]
    fn subset_majority_is_sufficient() {
        let rec = record_state(c(0.0), c(1.0), 5).unwrap();
        for s in 0..10 {
            let (_, outcome) = measure_record(&rec, ReadBasis::Pointer, s).unwrap();
            for subset in [&[3][..], &[1, 2, 5], &[1, 2, 3, 4, 5]] {
                assert_eq!(majority_decode(&outcome, Some(subset)).unwrap(), MajorityVerdict::Down);
            }
        }
    }

    #[test]
    fn exhaustive_three_atom_reliability() {
        let (m, p) = reliability_exact(3, 0).unwrap();
        assert!((m - 1.0).abs() < 1e-12 && (p - 1.0).abs() < 1e-12);
        let (m, p) = reliability_exact(3, 1).unwrap();
        assert!((m - 1.0).abs() < 1e-12, "{m}");
        assert!(p.abs() < 1e-12, "{p}");
        let (m, p) = reliability_exact(3, 2).unwrap();
        assert!(m.abs() < 1e-12);
        assert!((p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_matches_exhaustive_rates() {
        for flips in 0..=3 {
            let (m, p) = reliability_exact(3, flips).unwrap();
            let r = reliability_curve(3, flips, 2000, 5).unwrap();
            assert!((r.majority_success - m).abs() < 1e-12);
            assert!((r.parity_success - p).abs() < 1e-12);
        }
        assert!(reliability_curve(3, 4, 10, 0).is_err());
    }

    #[test]
    fn reliability_is_reproducible() {
        let a = reliability_curve(7, 2, 500, 99).unwrap();
        let b = reliability_curve(7, 2, 500, 99).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let c = pool.install(|| reliability_curve(7, 2, 500, 99).unwrap());
        assert_eq!(a, c);
    }
}
