//! Link and IHX relations as sparse integer rows over a [`Basis`].
//!
//! A link-relation configuration is a marked component (given by its
//! encoding rooted at the marked leg) together with a forest of further
//! components. Its row is the sum, over every leg of the marked color in
//! the forest, of the diagram obtained by grafting the marked component
//! onto that leg. Grafts onto the marked component itself would close a
//! loop and are omitted. Configurations whose forest contains a component
//! that vanishes by antisymmetry only produce zero rows and are skipped.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;

use crate::basis::{for_each_forest, planted_trees, trees_by_degree, Basis, BasisSpec, Space};
use crate::counting;
use crate::diagram::{
    canonicalize_component, encoding_to_string, join_components, parse_diagram_text, Color, Diagram, Mode, TreeComponent,
};
use crate::error::{Error, Result};

/// Where a row came from.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    Link {
        color: Color,
        /// Marked component, rooted at the marked leg.
        marked: Box<[u8]>,
        /// Remaining components.
        rest: Box<[u8]>,
        /// Number of legs the marked component was grafted onto.
        targets: usize,
    },
    Ihx {
        diagram: Box<[u8]>,
        component: usize,
        edge: (usize, usize),
    },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Link { color, marked, rest, targets } => {
                let marked = encoding_to_string(marked);
                write!(
                    f,
                    "link color={color} marked={}* rest={} targets={targets}",
                    marked,
                    encoding_to_string(rest)
                )
            }
            Provenance::Ihx { diagram, component, edge } => write!(
                f,
                "ihx diagram={} component={component} edge={}-{}",
                encoding_to_string(diagram),
                edge.0,
                edge.1
            ),
        }
    }
}

/// Sparse row: `(column, coefficient)` sorted by column, no zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRow {
    entries: Vec<(usize, i64)>,
    provenance: Provenance,
}

impl RelationRow {
    pub fn new(mut entries: Vec<(usize, i64)>, provenance: Provenance) -> Self {
        entries.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|e| e.1 != 0);
        RelationRow { entries: merged, provenance }
    }

    pub fn entries(&self) -> &[(usize, i64)] {
        &self.entries
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn coefficient(&self, col: usize) -> i64 {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .map(|i| self.entries[i].1)
            .unwrap_or(0)
    }

    /// Same row scaled by `-1` if needed so the first coefficient is positive.
    pub fn normalized(&self) -> RelationRow {
        let mut row = self.clone();
        if row.entries.first().is_some_and(|e| e.1 < 0) {
            for e in &mut row.entries {
                e.1 = -e.1;
            }
        }
        row
    }

    /// Entries keyed by basis encodings rather than column numbers.
    pub fn keyed(&self, basis: &Basis) -> Vec<(Box<[u8]>, i64)> {
        self.entries
            .iter()
            .map(|&(c, v)| (basis.elements()[c].encoding().into(), v))
            .collect()
    }

    /// Text form `+2*1-2|1-(2,3) -1*...`; the empty row prints as `0`.
    pub fn format_terms(&self, basis: &Basis) -> String {
        if self.entries.is_empty() {
            return "0".to_string();
        }
        self.entries
            .iter()
            .map(|&(c, v)| format!("{v:+}*{}", basis.elements()[c]))
            .join(" ")
    }

    /// Inverse of [`RelationRow::format_terms`].
    pub fn parse_terms(text: &str, basis: &Basis, provenance: Provenance) -> Result<RelationRow> {
        let text = text.trim();
        if text == "0" {
            return Ok(RelationRow::new(Vec::new(), provenance));
        }
        let mut entries = Vec::new();
        for token in text.split_whitespace() {
            let (coeff, diagram) = token
                .split_once('*')
                .ok_or_else(|| Error::Parse(format!("term {token:?} lacks '*'")))?;
            let coeff: i64 = coeff
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient in {token:?}")))?;
            let enc = parse_diagram_text(diagram)?;
            let col = basis
                .index_of(&enc)
                .ok_or_else(|| Error::Parse(format!("{diagram} is not a basis element")))?;
            entries.push((col, coeff));
        }
        Ok(RelationRow::new(entries, provenance))
    }
}

/// Deduplicated rows plus configuration counters.
#[derive(Clone, Debug, Default)]
pub struct RelationSet {
    pub rows: Vec<RelationRow>,
    /// Configurations enumerated.
    pub raw: u64,
    /// Configurations with at least one graft target.
    pub nonempty: u64,
}

impl RelationSet {
    fn absorb(&mut self, seen: &mut HashSet<Vec<(usize, i64)>>, row: RelationRow) {
        if row.is_empty() {
            return;
        }
        let row = row.normalized();
        if seen.insert(row.entries.clone()) {
            self.rows.push(row);
        }
    }

    /// Concatenates two sets, dropping rows already present.
    pub fn merge(mut self, other: RelationSet) -> RelationSet {
        let mut seen: HashSet<_> = self.rows.iter().map(|r| r.entries.clone()).collect();
        self.raw += other.raw;
        self.nonempty += other.nonempty;
        for row in other.rows {
            self.absorb(&mut seen, row);
        }
        self
    }
}

/// One link-relation configuration, before it is reduced to a row.
#[derive(Clone, Debug)]
pub struct LinkConfig {
    pub color: Color,
    pub marked: Box<[u8]>,
    pub rest: Vec<Box<[u8]>>,
}

/// A configuration together with its (unnormalized) row.
#[derive(Clone, Debug)]
pub struct ConfigRow {
    pub config: LinkConfig,
    pub row: RelationRow,
    pub targets: usize,
}

/// Row of the configuration: grafts onto every leg of `color` in `rest`.
pub fn link_row(config: &LinkConfig, basis: &Basis) -> Result<ConfigRow> {
    let mode = basis.spec().mode;
    let marked = TreeComponent::from_rooted_encoding(&config.marked)?;
    if marked.leaf_color(0) != Some(config.color) {
        return Err(Error::Precondition("marked leg color does not match the configuration".into()));
    }
    let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
    let mut targets = 0;
    let mut i = 0;
    while i < config.rest.len() {
        let enc = &config.rest[i];
        let copies = config.rest[i..].iter().take_while(|e| *e == enc).count();
        let host = TreeComponent::from_rooted_encoding(enc)?;
        for (leaf, color) in host.leaves() {
            if color != config.color {
                continue;
            }
            targets += copies;
            let grafted = marked.graft_onto(0, &host, leaf)?;
            let (genc, sign) = canonicalize_component(&grafted, mode);
            if sign.is_zero() {
                continue;
            }
            let mut parts: Vec<&[u8]> = Vec::with_capacity(config.rest.len());
            parts.extend(config.rest[..i].iter().map(|e| &e[..]));
            parts.extend(config.rest[i + 1..].iter().map(|e| &e[..]));
            parts.push(&genc);
            let key = join_components(&mut parts);
            let col = basis.index_of(&key).ok_or_else(|| {
                Error::Precondition(format!("relation term {} is not in the basis", encoding_to_string(&key)))
            })?;
            *acc.entry(col).or_insert(0) += sign.to_i64() * copies as i64;
        }
        i += copies;
    }
    let mut rest = config.rest.clone();
    let provenance = Provenance::Link {
        color: config.color,
        marked: config.marked.clone(),
        rest: join_components(&mut rest),
        targets,
    };
    Ok(ConfigRow { config: config.clone(), row: RelationRow::new(acc.into_iter().collect(), provenance), targets })
}

fn check_spec(basis: &Basis, expected: BasisSpec) -> Result<()> {
    if basis.spec() != expected {
        return Err(Error::Precondition(format!(
            "basis was built for {:?}, relations requested for {:?}",
            basis.spec(),
            expected
        )));
    }
    Ok(())
}

fn strut_encodings(k: u8, mode: Mode) -> Vec<Box<[u8]>> {
    let mut out = Vec::new();
    for a in 1..=k {
        let start = if mode == Mode::Homotopy { a + 1 } else { a };
        for b in start..=k {
            out.push(vec![a, b].into_boxed_slice());
        }
    }
    out
}

/// Every Y-space configuration with its row, in deterministic order.
pub fn y_link_configurations(k: u8, n: usize, mode: Mode, basis: &Basis) -> Result<Vec<ConfigRow>> {
    check_spec(basis, BasisSpec::y(mode, k, n))?;
    let specials: u64 = if mode == Mode::Homotopy {
        u64::from(k) * u64::from(k - 1)
    } else {
        u64::from(k) * u64::from(k)
    };
    let struts = strut_encodings(k, mode);
    let expected = BigUint::from(specials) * counting::multichoose(struts.len() as u64, n as u64 + 1);
    let limit = basis.limits().max_relations;
    if expected > BigUint::from(limit) {
        return Err(Error::Capacity { what: "relation configurations", limit });
    }
    let rests: Vec<Vec<Box<[u8]>>> = struts
        .iter()
        .cloned()
        .combinations_with_replacement(n + 1)
        .collect();
    let mut marked = Vec::new();
    for c in 1..=k {
        for a in 1..=k {
            if a != c || mode == Mode::Concordance {
                marked.push((c, vec![c, a].into_boxed_slice()));
            }
        }
    }
    let per_marked: Vec<Vec<ConfigRow>> = marked
        .par_iter()
        .map(|(c, m)| {
            rests
                .iter()
                .map(|rest| link_row(&LinkConfig { color: *c, marked: m.clone(), rest: rest.clone() }, basis))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_marked.into_iter().flatten().collect())
}

/// Link relations of the Y-subspace: a special strut `(a, c*)` and `n + 1` struts.
pub fn y_link_relations(k: u8, n: usize, mode: Mode, basis: &Basis) -> Result<RelationSet> {
    let mut set = RelationSet::default();
    let mut seen = HashSet::new();
    for cr in y_link_configurations(k, n, mode, basis)? {
        set.raw += 1;
        if cr.targets > 0 {
            set.nonempty += 1;
        }
        set.absorb(&mut seen, cr.row);
    }
    Ok(set)
}

/// Every full-space link configuration of degree `d` with its row.
pub fn link_configurations(k: u8, d: usize, mode: Mode, basis: &Basis) -> Result<Vec<ConfigRow>> {
    check_spec(basis, BasisSpec::full(mode, k, d))?;
    let limits = basis.limits();
    if d < 2 {
        return Ok(Vec::new());
    }
    let planted = planted_trees(k, d - 1, mode, limits)?;
    let trees = trees_by_degree(k, d - 1, mode, limits)?;
    let mut forests: Vec<Vec<Vec<Box<[u8]>>>> = vec![Vec::new(); d];
    for (rest_degree, slot) in forests.iter_mut().enumerate().skip(1) {
        for_each_forest(&trees, rest_degree, &mut |parts| {
            slot.push(parts.iter().map(|p| Box::<[u8]>::from(*p)).collect());
            Ok(())
        })?;
    }

    let mut marked = Vec::new();
    let mut total = 0usize;
    for (leaves, ps) in planted.iter().enumerate().skip(1).take(d - 1) {
        for p in ps {
            for c in 1..=k {
                if mode == Mode::Homotopy && p.contains(c) {
                    continue;
                }
                let mut enc = vec![c];
                enc.extend_from_slice(&p.enc);
                marked.push((c, enc.into_boxed_slice(), d - leaves));
                total = total.saturating_add(forests[d - leaves].len());
                if total > limits.max_relations {
                    return Err(Error::Capacity { what: "relation configurations", limit: limits.max_relations });
                }
            }
        }
    }
    let per_marked: Vec<Vec<ConfigRow>> = marked
        .par_iter()
        .map(|(c, m, rest_degree)| {
            forests[*rest_degree]
                .iter()
                .map(|rest| link_row(&LinkConfig { color: *c, marked: m.clone(), rest: rest.clone() }, basis))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(per_marked.into_iter().flatten().collect())
}

/// Link relations over the full degree-`d` basis, for every marked component.
pub fn link_relations(k: u8, d: usize, mode: Mode, basis: &Basis) -> Result<RelationSet> {
    let mut set = RelationSet::default();
    let mut seen = HashSet::new();
    for cr in link_configurations(k, d, mode, basis)? {
        set.raw += 1;
        if cr.targets > 0 {
            set.nonempty += 1;
        }
        set.absorb(&mut seen, cr.row);
    }
    Ok(set)
}

/// Three-term IHX rows: for each basis diagram, component and internal edge,
/// `I + H + X` with the orientations of [`TreeComponent::ihx_partners`].
pub fn ihx_relations(k: u8, d: usize, mode: Mode, basis: &Basis) -> Result<RelationSet> {
    check_spec(basis, BasisSpec::full(mode, k, d))?;
    let limit = basis.limits().max_relations;
    let per_element: Vec<Vec<RelationRow>> = basis
        .elements()
        .par_iter()
        .map(|element| {
            let comps = element.components();
            let mut rows = Vec::new();
            for (ci, enc) in comps.iter().enumerate() {
                if ci > 0 && comps[ci - 1] == *enc {
                    continue;
                }
                let tree = TreeComponent::from_rooted_encoding(enc)?;
                for (u, v) in tree.internal_edges() {
                    let (h, x) = tree.ihx_partners(u, v)?;
                    let mut entries = Vec::with_capacity(3);
                    for t in [&tree, &h, &x] {
                        let (tenc, sign) = canonicalize_component(t, mode);
                        if sign.is_zero() {
                            continue;
                        }
                        let mut parts: Vec<&[u8]> = comps.clone();
                        parts[ci] = &tenc;
                        let key = join_components(&mut parts);
                        let col = basis.index_of(&key).ok_or_else(|| {
                            Error::Precondition(format!("IHX term {} is not in the basis", encoding_to_string(&key)))
                        })?;
                        entries.push((col, sign.to_i64()));
                    }
                    let provenance = Provenance::Ihx { diagram: element.encoding().into(), component: ci, edge: (u, v) };
                    rows.push(RelationRow::new(entries, provenance));
                }
            }
            Ok(rows)
        })
        .collect::<Result<_>>()?;
    let mut set = RelationSet::default();
    let mut seen = HashSet::new();
    for row in per_element.into_iter().flatten() {
        set.raw += 1;
        if set.raw as usize > limit {
            return Err(Error::Capacity { what: "IHX relations", limit });
        }
        set.nonempty += 1;
        set.absorb(&mut seen, row);
    }
    Ok(set)
}

/// The link relation obtained by cutting a Y-component of `d` with legs
/// `c` and `fixed` into the special strut `(fixed, c*)` and a residual strut
/// `(c, x)`, `x` being the third leg. The row is returned unnormalized, so
/// the term reproducing `d` carries `1 + m(d; c, x)` times its sign.
pub fn expand_along(d: &Diagram, c: Color, fixed: Color, basis: &Basis) -> Result<RelationRow> {
    if c == fixed {
        return Err(Error::Precondition("expansion and fixed colors must differ".into()));
    }
    let spec = basis.spec();
    if d.mode() != spec.mode || d.k() != spec.k || d.degree() != spec.space.degree() {
        return Err(Error::Precondition("diagram does not belong to the basis' space".into()));
    }
    let canon = d.canonicalize();
    if canon.is_zero() || basis.index_of(canon.encoding()).is_none() {
        return Err(Error::Precondition("diagram is not a basis element".into()));
    }
    let position = d.components().iter().position(|t| {
        let cols: Vec<Color> = t.leaves().map(|(_, col)| col).collect();
        cols.len() == 3 && cols.contains(&c) && cols.contains(&fixed)
    });
    let Some(yi) = position else {
        return Err(Error::Precondition(format!("no Y-component with legs {c} and {fixed}")));
    };
    let mut legs: Vec<Color> = d.components()[yi].leaves().map(|(_, col)| col).collect();
    let ci = legs.iter().position(|&x| x == c).expect("present");
    legs.remove(ci);
    let fi = legs.iter().position(|&x| x == fixed).expect("present");
    legs.remove(fi);
    let third = legs[0];

    let mut rest: Vec<Box<[u8]>> = Vec::with_capacity(d.components().len());
    for (i, t) in d.components().iter().enumerate() {
        if i == yi {
            continue;
        }
        let (enc, sign) = canonicalize_component(t, spec.mode);
        if sign.is_zero() {
            return Err(Error::Precondition("diagram has a vanishing component".into()));
        }
        rest.push(enc.into_boxed_slice());
    }
    let (strut, _) = canonicalize_component(&TreeComponent::strut(c, third), spec.mode);
    rest.push(strut.into_boxed_slice());
    rest.sort();
    let config = LinkConfig { color: c, marked: vec![c, fixed].into_boxed_slice(), rest };
    Ok(link_row(&config, basis)?.row)
}

/// Y-space configuration counts `(raw, nonempty)` for homotopy mode:
/// `raw = r(n, k)`; `nonempty` counts configurations whose distinguished
/// color appears on at least one rest strut.
pub fn count_effective_relations(k: u32, n: u64) -> Result<(BigUint, BigUint)> {
    Ok((counting::r(n, k)?, counting::nonempty_configurations(n, k)?))
}

/// Link and IHX relations for the basis' space.
pub fn relations_for(basis: &Basis) -> Result<RelationSet> {
    let spec = basis.spec();
    match spec.space {
        Space::Y { n } => y_link_relations(spec.k, n, spec.mode, basis),
        Space::Full { degree } => {
            let link = link_relations(spec.k, degree, spec.mode, basis)?;
            let ihx = ihx_relations(spec.k, degree, spec.mode, basis)?;
            Ok(link.merge(ihx))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{enumerate_basis, enumerate_y_basis};
    use crate::diagram::NODE_MARK;

    fn col(basis: &Basis, text: &str) -> usize {
        basis.index_of(&parse_diagram_text(text).unwrap()).unwrap()
    }

    #[test]
    fn k3_n0_single_term() {
        let basis = enumerate_y_basis(3, 0, Mode::Homotopy).unwrap();
        let config = LinkConfig { color: 1, marked: vec![1, 3].into(), rest: vec![vec![1, 2].into()] };
        let cr = link_row(&config, &basis).unwrap();
        assert_eq!(cr.row.entries(), &[(0, 1)]);
        let set = y_link_relations(3, 0, Mode::Homotopy, &basis).unwrap();
        assert_eq!((set.raw, set.nonempty), (18, 12));
        assert_eq!(set.rows.len(), 1);
    }

    #[test]
    fn multiplicity_coefficient() {
        let basis = enumerate_y_basis(3, 1, Mode::Homotopy).unwrap();
        let config = LinkConfig {
            color: 1,
            marked: vec![1, 3].into(),
            rest: vec![vec![1, 2].into(), vec![1, 2].into()],
        };
        let cr = link_row(&config, &basis).unwrap();
        assert_eq!(cr.targets, 2);
        assert_eq!(cr.row.entries(), &[(col(&basis, "1-2|1-(2,3)"), 2)]);
    }

    #[test]
    fn repeated_color_graft_drops_out() {
        let basis = enumerate_y_basis(3, 1, Mode::Homotopy).unwrap();
        let config = LinkConfig {
            color: 1,
            marked: vec![1, 3].into(),
            rest: vec![vec![1, 2].into(), vec![1, 3].into()],
        };
        let cr = link_row(&config, &basis).unwrap();
        assert_eq!(cr.targets, 2);
        assert_eq!(cr.row.entries(), &[(col(&basis, "1-3|1-(2,3)"), 1)]);
    }

    #[test]
    fn y_raw_counts_match_r() {
        for k in 3..=5u8 {
            for n in 0..=2usize {
                let basis = enumerate_y_basis(k, n, Mode::Homotopy).unwrap();
                let set = y_link_relations(k, n, Mode::Homotopy, &basis).unwrap();
                let (raw, nonempty) = count_effective_relations(u32::from(k), n as u64).unwrap();
                assert_eq!(BigUint::from(set.raw), raw);
                assert_eq!(BigUint::from(set.nonempty), nonempty);
            }
        }
    }

    #[test]
    fn full_space_contains_y_killer() {
        let basis = enumerate_basis(3, 2, Mode::Homotopy).unwrap();
        let set = link_relations(3, 2, Mode::Homotopy, &basis).unwrap();
        let y = col(&basis, "1-(2,3)");
        assert!(set.rows.iter().any(|r| r.entries() == [(y, 1)]));
    }

    #[test]
    fn ihx_on_four_leaves() {
        let basis = enumerate_basis(4, 3, Mode::Homotopy).unwrap();
        let set = ihx_relations(4, 3, Mode::Homotopy, &basis).unwrap();
        assert_eq!(set.rows.len(), 1);
        let row = &set.rows[0];
        assert_eq!(row.entries().len(), 3);
        assert!(row.entries().iter().all(|e| e.1.abs() == 1));
        let trees: Vec<usize> = basis
            .elements()
            .iter()
            .enumerate()
            .filter(|(_, e)| e.trivalent_count() == 2)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(row.entries().iter().map(|e| e.0).collect::<Vec<_>>(), trees);
        assert!(ihx_relations(4, 2, Mode::Homotopy, &enumerate_basis(4, 2, Mode::Homotopy).unwrap())
            .unwrap()
            .rows
            .is_empty());
    }

    #[test]
    fn ihx_golden_signs() {
        let basis = enumerate_basis(4, 3, Mode::Homotopy).unwrap();
        let set = ihx_relations(4, 3, Mode::Homotopy, &basis).unwrap();
        let row = &set.rows[0];
        let text = row.format_terms(&basis);
        assert_eq!(text, "+1*1-(2,(3,4)) -1*1-(3,(2,4)) +1*1-(4,(2,3))");
    }

    /// Trees with `m` distinct leaves modulo AS and IHX have dimension `(m-2)!`.
    fn multilinear_tree_quotient(m: u8) -> (usize, usize) {
        let basis = enumerate_basis(m, usize::from(m) - 1, Mode::Homotopy).unwrap();
        let cols: Vec<usize> = (0..basis.len())
            .filter(|&i| basis.elements()[i].trivalent_count() == usize::from(m) - 2)
            .collect();
        let set = ihx_relations(m, usize::from(m) - 1, Mode::Homotopy, &basis).unwrap();
        let pos = |c: usize| cols.iter().position(|&x| x == c);
        let rows: Vec<Vec<(usize, i64)>> = set
            .rows
            .iter()
            .filter(|r| pos(r.entries()[0].0).is_some())
            .map(|r| r.entries().iter().map(|&(c, v)| (pos(c).unwrap(), v)).collect())
            .collect();
        let matrix = crate::linalg::SparseMatrix::new(rows, cols.len()).unwrap();
        (cols.len(), cols.len() - crate::linalg::exact_rank(&matrix))
    }

    #[test]
    fn ihx_quotient_matches_lie_dimension() {
        assert_eq!(multilinear_tree_quotient(4), (3, 2));
        assert_eq!(multilinear_tree_quotient(5), (15, 6));
        assert_eq!(multilinear_tree_quotient(6), (105, 24));
    }

    #[test]
    fn format_parse_round_trip() {
        let basis = enumerate_y_basis(4, 1, Mode::Homotopy).unwrap();
        let set = y_link_relations(4, 1, Mode::Homotopy, &basis).unwrap();
        for row in &set.rows {
            let text = row.format_terms(&basis);
            let back = RelationRow::parse_terms(&text, &basis, row.provenance().clone()).unwrap();
            assert_eq!(&back, row);
        }
    }

    #[test]
    fn spec_mismatch_is_rejected() {
        let basis = enumerate_y_basis(4, 1, Mode::Homotopy).unwrap();
        assert!(matches!(y_link_relations(4, 2, Mode::Homotopy, &basis), Err(Error::Precondition(_))));
        assert!(matches!(link_relations(4, 3, Mode::Homotopy, &basis), Err(Error::Precondition(_))));
    }

    #[test]
    fn expand_bare_y() {
        let basis = enumerate_y_basis(3, 0, Mode::Homotopy).unwrap();
        let d = Diagram::new(vec![TreeComponent::y(1, 2, 3)], Mode::Homotopy, 3).unwrap();
        let row = expand_along(&d, 1, 3, &basis).unwrap();
        assert_eq!(row.entries(), &[(0, 1)]);
        assert!(expand_along(&d, 1, 1, &basis).is_err());
        let strut_only = enumerate_basis(3, 2, Mode::Homotopy).unwrap();
        let d = Diagram::new(vec![TreeComponent::strut(1, 2), TreeComponent::strut(1, 3)], Mode::Homotopy, 3).unwrap();
        assert!(matches!(expand_along(&d, 1, 2, &strut_only), Err(Error::Precondition(_))));
    }

    #[test]
    fn graft_onto_y_leg_makes_four_leaf_tree() {
        // k = 5, d = 4: marked strut (3,1*) with a Y carrying a 1-leg.
        let basis = enumerate_basis(5, 4, Mode::Homotopy).unwrap();
        let config = LinkConfig {
            color: 1,
            marked: vec![1, 3].into(),
            rest: vec![vec![1, 2].into(), vec![1, NODE_MARK, 4, 5].into()],
        };
        let cr = link_row(&config, &basis).unwrap();
        assert_eq!(cr.targets, 2);
        let degrees: Vec<usize> = cr
            .row
            .entries()
            .iter()
            .map(|&(c, _)| basis.elements()[c].components().iter().map(|e| e.len()).max().unwrap())
            .collect();
        assert_eq!(cr.row.entries().len(), 2);
        // one term holds a 4-leaf tree (encoding length 6), the other a Y and a Y
        assert!(degrees.contains(&6));
    }
}
