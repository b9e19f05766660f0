//! A basis together with its relations, ready for rank computation.

use std::time::Instant;

use crate::basis::{Basis, BasisSpec, BlockKey, Limits, Space};
use crate::diagram::Mode;
use crate::error::Result;
use crate::linalg::{cokernel_functionals, rank_multiprime, RankResult, SparseMatrix};
use crate::relations::{relations_for, RelationSet};

#[derive(Debug)]
pub struct System {
    pub basis: Basis,
    pub relations: RelationSet,
    pub block_keys: Vec<BlockKey>,
    matrix: SparseMatrix,
}

impl System {
    pub fn build(spec: BasisSpec, limits: Limits) -> Result<System> {
        let basis = spec.enumerate(limits)?;
        let relations = relations_for(&basis)?;
        let (col_blocks, block_keys) = basis.column_blocks();
        let matrix = SparseMatrix::from_relations(&relations.rows, basis.len())?.with_blocks(col_blocks)?;
        Ok(System { basis, relations, block_keys, matrix })
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.matrix
    }

    pub fn rank(&self, primes: &[u64]) -> Result<RankResult> {
        rank_multiprime(&self.matrix, primes)
    }

    /// Quotient dimension restricted to columns with the given trivalent count.
    pub fn quotient_dim_at(&self, rank: &RankResult, trivalent: usize) -> usize {
        rank.blocks
            .iter()
            .filter(|b| self.block_keys[b.block].trivalent == trivalent)
            .map(|b| b.cols - b.rank)
            .sum()
    }

    pub fn functionals(&self, p: u64) -> Result<Vec<Vec<u64>>> {
        cokernel_functionals(&self.matrix, p)
    }
}

/// Summary of one quotient computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub mode: Mode,
    pub space: Space,
    pub k: u8,
    pub num_diagrams: usize,
    pub num_relations_raw: u64,
    pub num_relations_effective: usize,
    pub rank: usize,
    pub quotient_dim: usize,
    pub primes: Vec<u64>,
    pub elapsed_ms: u128,
}

/// Enumerates, builds relations and ranks in one call.
pub fn compute(spec: BasisSpec, limits: Limits, primes: &[u64]) -> Result<Outcome> {
    let start = Instant::now();
    let system = System::build(spec, limits)?;
    let rank = system.rank(primes)?;
    Ok(Outcome {
        mode: spec.mode,
        space: spec.space,
        k: spec.k,
        num_diagrams: system.basis.len(),
        num_relations_raw: system.relations.raw,
        num_relations_effective: system.relations.rows.len(),
        rank: rank.rank,
        quotient_dim: rank.quotient_dim,
        primes: rank.primes,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
