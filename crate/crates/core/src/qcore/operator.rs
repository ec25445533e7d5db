use std::sync::OnceLock;

use nalgebra::{DMatrix, DVector};

use super::density::{hermiticity_defect, max_abs};
use super::register::{IndexSplit, Register};
use super::{PureState, C64, DECISION_TOL, STRUCTURAL_TOL};
use crate::error::{Error, Result};

/// Hermitian operator over a register (ħ = 1, so eigenvalues are energies and
/// time is measured in inverse energy). The spectral decomposition is
/// computed once, on first use.
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    register: Register,
    matrix: DMatrix<C64>,
    spectral: OnceLock<Spectral>,
}

impl PartialEq for HermitianOperator {
    fn eq(&self, other: &Self) -> bool {
        self.register == other.register && self.matrix == other.matrix
    }
}

/// Eigen-decomposition of a Hermitian matrix, stored per invariant block.
///
/// The matrix is permuted into block-diagonal form by the connected
/// components of its nonzero pattern, and each block is diagonalized
/// separately. Eigenvectors of different blocks have disjoint supports.
#[derive(Debug, Clone)]
pub struct Spectral {
    dim: usize,
    blocks: Vec<SpectralBlock>,
}

#[derive(Debug, Clone)]
struct SpectralBlock {
    indices: Vec<usize>,
    values: DVector<f64>,
    vectors: DMatrix<C64>,
}

impl HermitianOperator {
    /// Checks that `matrix` matches the register dimension and equals its
    /// adjoint within 1e-12.
    pub fn new(register: Register, matrix: DMatrix<C64>) -> Result<Self> {
        let dim = register.dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::validation(format!(
                "register {register} needs a {dim}x{dim} operator, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "operator is not Hermitian (max |H - H†| = {defect:e})"
            )));
        }
        Ok(Self::from_parts(register, matrix))
    }

    fn from_parts(register: Register, matrix: DMatrix<C64>) -> Self {
        HermitianOperator {
            register,
            matrix,
            spectral: OnceLock::new(),
        }
    }

    pub fn zero(register: Register) -> Self {
        let d = register.dim();
        Self::from_parts(register, DMatrix::zeros(d, d))
    }

    /// Operator acting as `matrix` on the subsystems named in `labels` (in
    /// that order) and as the identity on the rest of `register`.
    pub fn local<S: AsRef<str>>(register: &Register, labels: &[S], matrix: DMatrix<C64>) -> Result<Self> {
        let positions = register.positions(labels)?;
        let split = IndexSplit::new(register, &positions);
        if matrix.nrows() != split.kept_dim || matrix.ncols() != split.kept_dim {
            return Err(Error::validation(format!(
                "local operator on {} subsystems must be {}x{}",
                labels.len(),
                split.kept_dim,
                split.kept_dim
            )));
        }
        let defect = hermiticity_defect(&matrix);
        if defect > STRUCTURAL_TOL {
            return Err(Error::validation(format!(
                "local operator is not Hermitian (max |H - H†| = {defect:e})"
            )));
        }
        let full = split.inverse();
        let rd = split.rest_dim;
        let d = register.dim();
        let mut out = DMatrix::zeros(d, d);
        for r in 0..rd {
            for i in 0..split.kept_dim {
                for j in 0..split.kept_dim {
                    let v = matrix[(i, j)];
                    if v != C64::new(0.0, 0.0) {
                        out[(full[i * rd + r], full[j * rd + r])] = v;
                    }
                }
            }
        }
        Ok(Self::from_parts(register.clone(), out))
    }

    /// Re-expresses this operator on a larger register, acting as identity on
    /// the subsystems it does not mention.
    pub fn embed(&self, target: &Register) -> Result<Self> {
        if &self.register == target {
            return Ok(self.clone());
        }
        let labels: Vec<&str> = self.register.labels().collect();
        for l in &labels {
            if !target.contains(l) {
                return Err(Error::domain(format!(
                    "cannot embed operator on {}: `{l}` missing from {target}",
                    self.register
                )));
            }
        }
        Self::local(target, &labels, self.matrix.clone())
    }

    pub fn register(&self) -> &Register {
        &self.register
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Sum of two operators on the same register.
    pub fn add(&self, other: &HermitianOperator) -> Result<Self> {
        if self.register != other.register {
            return Err(Error::domain(format!(
                "adding operators on {} and {}",
                self.register, other.register
            )));
        }
        Ok(Self::from_parts(
            self.register.clone(),
            &self.matrix + &other.matrix,
        ))
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::from_parts(self.register.clone(), &self.matrix * C64::new(factor, 0.0))
    }

    pub fn spectral(&self) -> &Spectral {
        self.spectral.get_or_init(|| Spectral::compute(&self.matrix))
    }

    /// All eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectral().eigenvalues()
    }
}

impl Spectral {
    fn compute(matrix: &DMatrix<C64>) -> Self {
        let dim = matrix.nrows();
        let mut solved: Vec<DMatrix<C64>> = Vec::new();
        let mut blocks: Vec<SpectralBlock> = Vec::new();
        for indices in connected_blocks(matrix) {
            let n = indices.len();
            let sub = DMatrix::from_fn(n, n, |i, j| matrix[(indices[i], indices[j])]);
            // symmetrize so rounding in the input cannot leak into the solver
            let sub = (&sub + sub.adjoint()) * C64::new(0.5, 0.0);
            // blocks repeated exactly (e.g. a spectator qubit) share one decomposition
            let (values, vectors) = match solved.iter().position(|m| m == &sub) {
                Some(k) => (blocks[k].values.clone(), blocks[k].vectors.clone()),
                None => {
                    let eig = sub.clone().symmetric_eigen();
                    (eig.eigenvalues, eig.eigenvectors)
                }
            };
            solved.push(sub);
            blocks.push(SpectralBlock { indices, values, vectors });
        }
        Spectral { dim, blocks }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    /// Number of invariant blocks found in the sparsity pattern.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `Σ_j f(ε_j) |χ_j⟩⟨χ_j|`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for b in &self.blocks {
            let scaled = DMatrix::from_fn(b.vectors.nrows(), b.vectors.ncols(), |i, j| {
                b.vectors[(i, j)] * f(b.values[j])
            });
            let sub = scaled * b.vectors.adjoint();
            for (i, &gi) in b.indices.iter().enumerate() {
                for (j, &gj) in b.indices.iter().enumerate() {
                    out[(gi, gj)] = sub[(i, j)];
                }
            }
        }
        out
    }

    /// `Σ_j ε_j |χ_j⟩⟨χ_j|`.
    pub fn reconstruct(&self) -> DMatrix<C64> {
        self.reconstruct_with(|e| C64::new(e, 0.0))
    }

    /// `Σ_j e^{-i ε_j t} |χ_j⟩⟨χ_j|ψ⟩`.
    fn propagate(&self, t: f64, psi: &DVector<C64>) -> DVector<C64> {
        let mut out = DVector::zeros(self.dim);
        for b in &self.blocks {
            let local = DVector::from_iterator(b.indices.len(), b.indices.iter().map(|&i| psi[i]));
            let mut coeffs = b.vectors.ad_mul(&local);
            for (c, &e) in coeffs.iter_mut().zip(b.values.iter()) {
                *c *= C64::from_polar(1.0, -e * t);
            }
            let mapped = &b.vectors * coeffs;
            for (k, &i) in b.indices.iter().enumerate() {
                out[i] = mapped[k];
            }
        }
        out
    }
}

/// Connected components of the graph whose edges are the nonzero entries.
fn connected_blocks(matrix: &DMatrix<C64>) -> Vec<Vec<usize>> {
    let n = matrix.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..n {
            if i != j && matrix[(i, j)] != C64::new(0.0, 0.0) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

/// Exact unitary evolution `e^{-iHt}|ψ₀⟩` through the spectral decomposition
/// of `h`. This is the reference every closed-form evolution is checked
/// against.
pub fn evolve_exact(h: &HermitianOperator, t: f64, psi0: &PureState) -> Result<PureState> {
    if h.register() != psi0.register() {
        return Err(Error::domain(format!(
            "operator on {} applied to state on {}",
            h.register(),
            psi0.register()
        )));
    }
    if t == 0.0 {
        return Ok(psi0.clone());
    }
    let amplitudes = h.spectral().propagate(t, psi0.amplitudes());
    Ok(PureState::from_parts(psi0.register().clone(), amplitudes))
}

/// Whether `[a, b] = 0` within 1e-10 (max-abs element). Operators on
/// different registers are first embedded, with identities, into the union
/// register (`a`'s subsystems first).
pub fn commutes(a: &HermitianOperator, b: &HermitianOperator) -> bool {
    let (ea, eb) = if a.register() == b.register() {
        (a.clone(), b.clone())
    } else {
        let extra: Vec<_> = b
            .register()
            .subsystems()
            .iter()
            .filter(|s| !a.register().contains(s.label()))
            .cloned()
            .collect();
        let mut subs = a.register().subsystems().to_vec();
        subs.extend(extra);
        let union = match Register::new(subs) {
            Ok(r) => r,
            Err(_) => return false,
        };
        match (a.embed(&union), b.embed(&union)) {
            (Ok(x), Ok(y)) => (x, y),
            _ => return false,
        }
    };
    let comm = ea.matrix() * eb.matrix() - eb.matrix() * ea.matrix();
    max_abs(&comm) <= DECISION_TOL
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_z() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
    }

    fn pauli_x() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
    }

    #[test]
    fn rejects_non_hermitian() {
        let r = Register::qubits(&["a"]).unwrap();
        let m = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(HermitianOperator::new(r, m).is_err());
    }

    #[test]
    fn local_embedding_matches_kronecker() {
        let r = Register::qubits(&["a", "b"]).unwrap();
        let h = HermitianOperator::local(&r, &["b"], pauli_x()).unwrap();
        let expected = DMatrix::<C64>::identity(2, 2).kronecker(&pauli_x());
        assert_eq!(h.matrix(), &expected);
        let g = HermitianOperator::local(&r, &["a"], pauli_z()).unwrap();
        assert_eq!(g.matrix(), &pauli_z().kronecker(&DMatrix::identity(2, 2)));
    }

    #[test]
    fn reconstruction_and_blocks() {
        let r = Register::qubits(&["a", "b"]).unwrap();
        let h = HermitianOperator::local(&r, &["b"], pauli_x())
            .unwrap()
            .add(&HermitianOperator::local(&r, &["a"], pauli_z()).unwrap().scaled(0.3))
            .unwrap();
        assert_eq!(h.spectral().block_count(), 2);
        let back = h.spectral().reconstruct();
        assert!(max_abs(&(back - h.matrix())) < 1e-12);
    }

    #[test]
    fn evolution_of_precession() {
        // e^{-i t σx} |0⟩ = cos t |0⟩ - i sin t |1⟩
        let r = Register::qubits(&["a"]).unwrap();
        let h = HermitianOperator::new(r.clone(), pauli_x()).unwrap();
        let psi = PureState::basis(r, 0).unwrap();
        let t = 0.37;
        let out = evolve_exact(&h, t, &psi).unwrap();
        assert!((out.amplitude(0) - c(t.cos(), 0.0)).norm() < 1e-14);
        assert!((out.amplitude(1) - c(0.0, -t.sin())).norm() < 1e-14);
    }

    #[test]
    fn register_mismatch_is_domain_error() {
        let h = HermitianOperator::new(Register::qubits(&["a"]).unwrap(), pauli_x()).unwrap();
        let psi = PureState::basis(Register::qubits(&["b"]).unwrap(), 0).unwrap();
        assert!(matches!(evolve_exact(&h, 1.0, &psi), Err(Error::Domain(_))));
    }

    #[test]
    fn commutation_across_registers() {
        let ra = Register::qubits(&["a"]).unwrap();
        let rb = Register::qubits(&["b"]).unwrap();
        let za = HermitianOperator::new(ra.clone(), pauli_z()).unwrap();
        let xa = HermitianOperator::new(ra, pauli_x()).unwrap();
        let xb = HermitianOperator::new(rb, pauli_x()).unwrap();
        assert!(commutes(&za, &xb));
        assert!(!commutes(&za, &xa));
        assert!(commutes(&xa, &xa));
    }
}
