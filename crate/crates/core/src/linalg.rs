//! Exact rank of sparse integer matrices via elimination modulo primes.
//!
//! Rows are reduced one at a time against a pivot table keyed by leading
//! column, shortest rows first. Columns may carry a block id; rows never mix
//! blocks, so each block is eliminated independently (and in parallel).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::relations::RelationRow;

/// Default primes: the two largest primes below 2^31.
pub const DEFAULT_PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];

const MAX_ATTEMPTS: usize = 3;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: Vec<Vec<(usize, i64)>>,
    num_cols: usize,
    col_blocks: Option<Vec<usize>>,
}

impl SparseMatrix {
    pub fn new(rows: Vec<Vec<(usize, i64)>>, num_cols: usize) -> Result<Self> {
        for row in &rows {
            if row.iter().any(|&(c, _)| c >= num_cols) {
                return Err(Error::Precondition(format!("row references a column beyond {num_cols}")));
            }
            if row.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::Precondition("row entries must be strictly increasing by column".into()));
            }
        }
        Ok(SparseMatrix { rows, num_cols, col_blocks: None })
    }

    pub fn from_relations(rows: &[RelationRow], num_cols: usize) -> Result<Self> {
        SparseMatrix::new(rows.iter().map(|r| r.entries().to_vec()).collect(), num_cols)
    }

    /// Attaches a block id to every column; every row must stay inside one block.
    pub fn with_blocks(mut self, col_blocks: Vec<usize>) -> Result<Self> {
        if col_blocks.len() != self.num_cols {
            return Err(Error::Precondition("one block id per column required".into()));
        }
        for row in &self.rows {
            if let Some(&(first, _)) = row.first() {
                let b = col_blocks[first];
                if row.iter().any(|&(c, _)| col_blocks[c] != b) {
                    return Err(Error::Precondition("a row spans more than one block".into()));
                }
            }
        }
        self.col_blocks = Some(col_blocks);
        Ok(self)
    }

    pub fn rows(&self) -> &[Vec<(usize, i64)>] {
        &self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    fn max_abs_coefficient(&self) -> u64 {
        self.rows
            .iter()
            .flatten()
            .map(|&(_, v)| v.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Row indices grouped by block, and the column count of each block.
    fn blocks(&self) -> Vec<(Vec<usize>, usize)> {
        match &self.col_blocks {
            None => vec![((0..self.rows.len()).collect(), self.num_cols)],
            Some(ids) => {
                let n = ids.iter().copied().max().map_or(0, |m| m + 1);
                let mut out: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), 0); n];
                for &b in ids {
                    out[b].1 += 1;
                }
                for (i, row) in self.rows.iter().enumerate() {
                    if let Some(&(c, _)) = row.first() {
                        out[ids[c]].0.push(i);
                    }
                }
                out
            }
        }
    }
}

fn check_prime(p: u64, m: &SparseMatrix) -> Result<()> {
    if !is_prime(p) || p >= 1 << 32 {
        return Err(Error::Precondition(format!("{p} is not a prime below 2^32")));
    }
    if m.max_abs_coefficient() >= p {
        return Err(Error::Precondition(format!("prime {p} does not exceed every coefficient")));
    }
    Ok(())
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Largest prime strictly below `n`.
pub fn prev_prime(mut n: u64) -> Option<u64> {
    while n > 2 {
        n -= 1;
        if is_prime(n) {
            return Some(n);
        }
    }
    None
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_mod(v: i64, p: u64) -> u64 {
    let r = v.rem_euclid(p as i64);
    r as u64
}

type ModRow = Vec<(usize, u64)>;

/// `row - factor * pivot`, both sorted by column.
fn axpy(row: &[(usize, u64)], pivot: &[(usize, u64)], factor: u64, p: u64) -> ModRow {
    let neg = (p - factor) % p;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i]);
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, pivot[j].1 * neg % p));
            j += 1;
        } else {
            let v = (row[i].1 + pivot[j].1 * neg) % p;
            if v != 0 {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon form over F_p: pivot rows keyed by leading column, each
/// normalized to a leading 1.
fn echelon(rows: &[&Vec<(usize, i64)>], p: u64) -> HashMap<usize, ModRow> {
    let mut order: Vec<&Vec<(usize, i64)>> = rows.to_vec();
    order.sort_by_key(|r| (r.len(), r.first().map(|e| e.0)));
    let mut pivots: HashMap<usize, ModRow> = HashMap::new();
    for row in order {
        let mut cur: ModRow = row
            .iter()
            .map(|&(c, v)| (c, to_mod(v, p)))
            .filter(|e| e.1 != 0)
            .collect();
        while let Some(&(lead, val)) = cur.first() {
            match pivots.get(&lead) {
                Some(piv) => cur = axpy(&cur, piv, val, p),
                None => {
                    let inv = inv_mod(val, p);
                    for e in &mut cur {
                        e.1 = e.1 * inv % p;
                    }
                    pivots.insert(lead, cur);
                    break;
                }
            }
        }
    }
    pivots
}

/// Rank per block over F_p, in block order.
fn block_ranks(m: &SparseMatrix, p: u64) -> Vec<usize> {
    m.blocks()
        .par_iter()
        .map(|(rows, _)| {
            let rows: Vec<&Vec<(usize, i64)>> = rows.iter().map(|&i| &m.rows[i]).collect();
            echelon(&rows, p).len()
        })
        .collect()
}

/// Rank of `m` over the field with `p` elements.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> Result<usize> {
    check_prime(p, m)?;
    Ok(block_ranks(m, p).iter().sum())
}

/// Rank and column count of one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRank {
    pub block: usize,
    pub cols: usize,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankResult {
    pub rank: usize,
    pub primes: Vec<u64>,
    pub agreement: bool,
    pub quotient_dim: usize,
    pub blocks: Vec<BlockRank>,
}

/// Ranks `m` modulo each prime; on disagreement retries with fresh primes
/// below the smallest one tried, and fails with [`Error::UnluckyPrime`] if
/// the ranks never agree.
pub fn rank_multiprime(m: &SparseMatrix, primes: &[u64]) -> Result<RankResult> {
    let mut distinct = primes.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Precondition("at least two distinct primes are required".into()));
    }
    for &p in primes {
        check_prime(p, m)?;
    }
    let mut current = primes.to_vec();
    let mut attempts = 0;
    loop {
        attempts += 1;
        let per_prime: Vec<Vec<usize>> = current.par_iter().map(|&p| block_ranks(m, p)).collect();
        let totals: Vec<usize> = per_prime.iter().map(|b| b.iter().sum()).collect();
        let agreement = totals.iter().all(|&t| t == totals[0]);
        if agreement {
            let blocks = m
                .blocks()
                .iter()
                .zip(&per_prime[0])
                .enumerate()
                .map(|(block, ((_, cols), &rank))| BlockRank { block, cols: *cols, rank })
                .collect();
            return Ok(RankResult {
                rank: totals[0],
                primes: current,
                agreement,
                quotient_dim: m.num_cols - totals[0],
                blocks,
            });
        }
        if attempts >= MAX_ATTEMPTS {
            return Err(Error::UnluckyPrime { primes: current, ranks: totals, attempts });
        }
        let mut floor = *current.iter().min().expect("nonempty");
        let mut fresh = Vec::with_capacity(current.len());
        for _ in 0..current.len() {
            floor = prev_prime(floor).ok_or_else(|| Error::Precondition("ran out of primes".into()))?;
            fresh.push(floor);
        }
        for &p in &fresh {
            check_prime(p, m)?;
        }
        current = fresh;
    }
}

/// Basis of the functionals on the columns that vanish on every row
/// (the right null space of the matrix over F_p). One vector per non-pivot
/// column of the reduced row echelon form, in increasing column order.
pub fn cokernel_functionals(m: &SparseMatrix, p: u64) -> Result<Vec<Vec<u64>>> {
    check_prime(p, m)?;
    let rows: Vec<&Vec<(usize, i64)>> = m.rows.iter().collect();
    let pivots = echelon(&rows, p);
    let mut leads: Vec<usize> = pivots.keys().copied().collect();
    leads.sort_unstable_by(|a, b| b.cmp(a));
    // back substitution, highest lead first
    let mut reduced: HashMap<usize, ModRow> = HashMap::with_capacity(pivots.len());
    for lead in leads {
        let mut row = pivots[&lead].clone();
        loop {
            let hit = row
                .iter()
                .skip(1)
                .find(|&&(c, _)| reduced.contains_key(&c))
                .copied();
            match hit {
                Some((c, v)) => row = axpy(&row, &reduced[&c], v, p),
                None => break,
            }
        }
        reduced.insert(lead, row);
    }
    let mut by_free_col: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for (&lead, row) in &reduced {
        for &(c, v) in row.iter().skip(1) {
            by_free_col.entry(c).or_default().push((lead, v));
        }
    }
    let mut out = Vec::new();
    for j in 0..m.num_cols {
        if reduced.contains_key(&j) {
            continue;
        }
        let mut f = vec![0u64; m.num_cols];
        f[j] = 1;
        for &(lead, v) in by_free_col.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
            f[lead] = (p - v) % p;
        }
        out.push(f);
    }
    Ok(out)
}

/// `true` when `f` vanishes on every row modulo `p`.
pub fn annihilates(m: &SparseMatrix, f: &[u64], p: u64) -> bool {
    m.rows.iter().all(|row| {
        row.iter()
            .fold(0u64, |acc, &(c, v)| (acc + to_mod(v, p) * f[c]) % p)
            == 0
    })
}

/// Rank over the rationals by dense fraction-free elimination on big
/// integers, keeping each pivot row primitive. Independent of the modular
/// path; intended for small matrices.
pub fn exact_rank(m: &SparseMatrix) -> usize {
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();
    for row in &m.rows {
        let mut dense = vec![BigInt::zero(); m.num_cols];
        for &(c, v) in row {
            dense[c] += v;
        }
        for (lead, piv) in &pivots {
            if dense[*lead].is_zero() {
                continue;
            }
            let a = piv[*lead].clone();
            let b = dense[*lead].clone();
            for (x, y) in dense.iter_mut().zip(piv) {
                *x = &*x * &a - y * &b;
            }
        }
        if let Some(lead) = dense.iter().position(|x| !x.is_zero()) {
            let g = dense.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            if !g.is_zero() && !g.abs().is_zero() {
                for x in &mut dense {
                    *x = &*x / &g;
                }
            }
            pivots.push((lead, dense));
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<(usize, i64)>>, cols: usize) -> SparseMatrix {
        SparseMatrix::new(rows, cols).unwrap()
    }

    #[test]
    fn default_primes_are_prime() {
        assert!(DEFAULT_PRIMES.iter().all(|&p| is_prime(p)));
        assert_eq!(prev_prime(2_147_483_647), Some(2_147_483_629));
    }

    #[test]
    fn trivial_ranks() {
        let p = DEFAULT_PRIMES[0];
        assert_eq!(rank_mod_p(&m(vec![vec![(0, 1)]], 1), p).unwrap(), 1);
        assert_eq!(rank_mod_p(&m(vec![], 4), p).unwrap(), 0);
        let dup = m(vec![vec![(0, 1), (2, -1)], vec![(0, 1), (2, -1)], vec![(1, 2)]], 3);
        assert_eq!(rank_mod_p(&dup, p).unwrap(), 2);
    }

    #[test]
    fn small_prime_sees_lower_rank() {
        // [[1,1],[1,-1]] has determinant -2
        let mat = m(vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -1)]], 2);
        assert_eq!(rank_mod_p(&mat, 3).unwrap(), 2);
        assert_eq!(exact_rank(&mat), 2);
        let mat = m(vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, 3)]], 2);
        assert_eq!(rank_mod_p(&mat, 5).unwrap(), 2);
        // coefficient 3 must stay below the prime
        assert!(rank_mod_p(&mat, 3).is_err());
    }

    #[test]
    fn unlucky_primes_are_reported() {
        // determinant 6: rank 1 mod 2 and 3, rank 2 elsewhere
        let mat = m(vec![vec![(0, 1), (1, 1)], vec![(0, 1), (1, -5)]], 2);
        let res = rank_multiprime(&mat, &[7, 11]).unwrap();
        assert_eq!(res.rank, 2);
        assert!(res.agreement);
        let err = rank_multiprime(&m(vec![vec![(0, 1)]], 1), &[7]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn blocks_sum_to_total() {
        let mat = m(vec![vec![(0, 1), (1, 1)], vec![(2, 1)], vec![(3, 1), (4, -1)], vec![(3, 2), (4, -2)]], 5)
            .with_blocks(vec![0, 0, 1, 2, 2])
            .unwrap();
        let res = rank_multiprime(&mat, &DEFAULT_PRIMES).unwrap();
        assert_eq!(res.rank, 3);
        assert_eq!(res.quotient_dim, 2);
        assert_eq!(res.blocks.iter().map(|b| b.rank).collect::<Vec<_>>(), [1, 1, 1]);
        assert_eq!(res.blocks.iter().map(|b| b.cols).collect::<Vec<_>>(), [2, 1, 2]);
        let bad = m(vec![vec![(0, 1), (2, 1)]], 3).with_blocks(vec![0, 0, 1]);
        assert!(bad.is_err());
    }

    #[test]
    fn functionals_of_empty_matrix_are_units() {
        let p = DEFAULT_PRIMES[0];
        let fs = cokernel_functionals(&m(vec![], 3), p).unwrap();
        assert_eq!(fs, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn functionals_annihilate_rows() {
        let p = DEFAULT_PRIMES[1];
        let mat = m(vec![vec![(0, 1), (1, 2), (3, -1)], vec![(1, 1), (2, 1)], vec![(0, 1), (2, -2), (3, -1)]], 4);
        let fs = cokernel_functionals(&mat, p).unwrap();
        assert_eq!(fs.len(), 4 - rank_mod_p(&mat, p).unwrap());
        assert!(fs.iter().all(|f| annihilates(&mat, f, p)));
    }

    #[test]
    fn exact_rank_handles_dependencies() {
        let mat = m(
            vec![vec![(0, 2), (1, 4)], vec![(0, 3), (1, 6)], vec![(1, 1), (2, 1)], vec![(0, 1), (2, -2)]],
            3,
        );
        assert_eq!(exact_rank(&mat), 2);
    }
}
