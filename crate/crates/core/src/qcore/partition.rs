use std::collections::HashSet;

use super::density::Reducible;
use super::register::Register;
use super::{PureState, DECISION_TOL};
use crate::error::{Error, Result};

/// Disjoint blocks of subsystem labels.
///
/// Coverage of a particular register is checked by [`Partition::check`], since
/// the same partition is often reused with states built later.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<String>>,
}

impl Partition {
    pub fn new<S: AsRef<str>>(blocks: &[&[S]]) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(blocks.len());
        for block in blocks {
            if block.is_empty() {
                return Err(Error::validation("partition block must be non-empty"));
            }
            let mut labels = Vec::with_capacity(block.len());
            for l in block.iter() {
                let l = l.as_ref().to_string();
                if !seen.insert(l.clone()) {
                    return Err(Error::validation(format!(
                        "label `{l}` appears in more than one block"
                    )));
                }
                labels.push(l);
            }
            out.push(labels);
        }
        if out.is_empty() {
            return Err(Error::validation("partition needs at least one block"));
        }
        Ok(Partition { blocks: out })
    }

    /// One block per subsystem.
    pub fn singletons(register: &Register) -> Self {
        Partition {
            blocks: register.labels().map(|l| vec![l.to_string()]).collect(),
        }
    }

    /// Two-block cut.
    pub fn cut<S: AsRef<str>>(first: &[S], second: &[S]) -> Result<Self> {
        Self::new(&[first, second])
    }

    pub fn blocks(&self) -> &[Vec<String>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Verifies that the blocks cover exactly the labels of `register`.
    pub fn check(&self, register: &Register) -> Result<()> {
        let count: usize = self.blocks.iter().map(Vec::len).sum();
        for l in self.blocks.iter().flatten() {
            if !register.contains(l) {
                return Err(Error::domain(format!("partition label `{l}` not in {register}")));
            }
        }
        if count != register.len() {
            return Err(Error::domain(format!(
                "partition covers {count} of the {} subsystems of {register}",
                register.len()
            )));
        }
        Ok(())
    }
}

/// Outcome of a product-state test.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTest {
    pub is_product: bool,
    /// Schmidt rank of the cut (block | rest), one per block.
    pub schmidt_ranks: Vec<usize>,
    /// Largest eigenvalue of each block's reduced density matrix.
    pub largest_eigenvalues: Vec<f64>,
}

/// Tests whether `psi` factorizes across every block of `partition`: each
/// block's reduced state must have largest eigenvalue ≥ 1 − 1e-10.
pub fn is_product(psi: &PureState, partition: &Partition) -> Result<ProductTest> {
    partition.check(psi.register())?;
    let mut ranks = Vec::with_capacity(partition.len());
    let mut largest = Vec::with_capacity(partition.len());
    for block in partition.blocks() {
        let rho = psi.partial_trace(block)?;
        let eig = rho.eigenvalues();
        ranks.push(eig.iter().filter(|&&e| e > DECISION_TOL).count());
        largest.push(eig[0]);
    }
    let is_product = largest.iter().all(|&l| l >= 1.0 - DECISION_TOL);
    Ok(ProductTest {
        is_product,
        schmidt_ranks: ranks,
        largest_eigenvalues: largest,
    })
}
