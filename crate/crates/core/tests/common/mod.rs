#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use strutforge::basis::{enumerate_basis, enumerate_y_basis, Basis};
use strutforge::diagram::{Node, NODE_MARK};
use strutforge::linalg::{exact_rank, rank_multiprime, SparseMatrix, DEFAULT_PRIMES};
use strutforge::relations::{link_relations, y_link_relations};
use strutforge::{Diagram, Mode, TreeComponent};

/// Planted subtree encodings with leaf colors in `1..=k`.
pub fn planted(k: u8, depth: u32) -> impl Strategy<Value = Vec<u8>> {
    let leaf = (1..=k).prop_map(|c| vec![c]);
    leaf.prop_recursive(depth, 12, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| {
            let mut v = vec![NODE_MARK];
            v.extend(a);
            v.extend(b);
            v
        })
    })
}

pub fn component(k: u8, depth: u32) -> impl Strategy<Value = TreeComponent> {
    (1..=k, planted(k, depth)).prop_map(|(root, sub)| {
        let mut enc = vec![root];
        enc.extend(sub);
        TreeComponent::from_rooted_encoding(&enc).expect("well-formed encoding")
    })
}

pub fn diagram(k: u8, mode: Mode) -> impl Strategy<Value = Diagram> {
    prop::collection::vec(component(k, 3), 1..4).prop_map(move |cs| Diagram::new(cs, mode, k).expect("colors in range"))
}

pub fn mode() -> impl Strategy<Value = Mode> {
    prop_oneof![Just(Mode::Homotopy), Just(Mode::Concordance)]
}

/// Renumbers the vertices of `t` by `perm` (old id -> new id).
pub fn relabel(t: &TreeComponent, perm: &[usize]) -> TreeComponent {
    let mut nodes = vec![Node::Trivalent { nbrs: [0; 3] }; t.nodes().len()];
    for (old, node) in t.nodes().iter().enumerate() {
        nodes[perm[old]] = match *node {
            Node::Leaf { color, nbr } => Node::Leaf { color, nbr: perm[nbr] },
            Node::Trivalent { nbrs } => Node::Trivalent { nbrs: nbrs.map(|v| perm[v]) },
        };
    }
    TreeComponent::new(nodes).expect("relabeling preserves validity")
}

/// Sparse matrices with small coefficients, as `(rows, num_cols)`.
pub fn sparse_matrix(max_cols: usize) -> impl Strategy<Value = (Vec<Vec<(usize, i64)>>, usize)> {
    (1..=max_cols).prop_flat_map(|cols| {
        let row = prop::collection::btree_map(0..cols, -3i64..=3, 0..=cols.min(5))
            .prop_map(|m| m.into_iter().filter(|e| e.1 != 0).collect::<Vec<_>>());
        (prop::collection::vec(row, 0..12), Just(cols))
    })
}

/// Row set keyed by basis encodings, so rows from different bases compare.
pub fn keyed_rows(rows: &[strutforge::RelationRow], basis: &Basis) -> BTreeSet<Vec<(Box<[u8]>, i64)>> {
    rows.iter().map(|r| r.keyed(basis)).collect()
}

/// Y-space link rows versus the full-space link rows supported on Y columns.
pub fn y_rows_match_full(mode: Mode, k: u8, n: usize) -> Result<(), String> {
    let ybasis = enumerate_y_basis(k, n, mode).map_err(|e| e.to_string())?;
    let yset = y_link_relations(k, n, mode, &ybasis).map_err(|e| e.to_string())?;
    let fbasis = enumerate_basis(k, n + 2, mode).map_err(|e| e.to_string())?;
    let fset = link_relations(k, n + 2, mode, &fbasis).map_err(|e| e.to_string())?;
    let y_supported: Vec<_> = fset
        .rows
        .iter()
        .filter(|r| r.entries().iter().all(|&(c, _)| fbasis.elements()[c].trivalent_count() == 1))
        .cloned()
        .collect();
    let lhs = keyed_rows(&yset.rows, &ybasis);
    let rhs = keyed_rows(&y_supported, &fbasis);
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{mode} k={k} n={n}: {} Y-space rows vs {} Y-supported full rows", lhs.len(), rhs.len()))
    }
}

/// Modular rank agrees across primes and, for small matrices, with exact rank.
pub fn check_rank(m: &SparseMatrix) -> Result<usize, String> {
    let res = rank_multiprime(m, &DEFAULT_PRIMES).map_err(|e| e.to_string())?;
    if !res.agreement {
        return Err("primes disagree".into());
    }
    if m.num_cols() <= 200 {
        let exact = exact_rank(m);
        if exact != res.rank {
            return Err(format!("modular rank {} but exact rank {exact}", res.rank));
        }
    }
    Ok(res.rank)
}

/// Every row's columns share one block key.
pub fn rows_are_graded(rows: &[strutforge::RelationRow], basis: &Basis) -> Result<(), String> {
    for (i, row) in rows.iter().enumerate() {
        let keys: BTreeSet<_> = row.entries().iter().map(|&(c, _)| basis.block_key(c)).collect();
        let degrees: BTreeSet<_> = row.entries().iter().map(|&(c, _)| basis.elements()[c].degree()).collect();
        if keys.len() > 1 || degrees.len() > 1 {
            return Err(format!("row {i} mixes gradings: {keys:?}"));
        }
    }
    Ok(())
}
