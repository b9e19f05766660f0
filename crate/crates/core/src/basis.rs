//! Ordered bases of forest diagrams.
//!
//! Trees are generated from planted trees (binary trees hanging off a root
//! edge, children strictly ordered by encoding) and canonicalized; forests
//! are multisets of trees composed by degree.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;

use crate::counting::multichoose;
use crate::diagram::{canonicalize_component, join_components, CanonicalDiagram, Color, Mode, Sign, TreeComponent, MAX_COLORS, NODE_MARK};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    /// One Y-component plus `n` struts.
    Y { n: usize },
    /// All forests of the given degree.
    Full { degree: usize },
}

impl Space {
    pub fn name(self) -> &'static str {
        match self {
            Space::Y { .. } => "y",
            Space::Full { .. } => "full",
        }
    }

    /// Strut count for the Y-space, degree for the full space.
    pub fn param(self) -> usize {
        match self {
            Space::Y { n } => n,
            Space::Full { degree } => degree,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Space::Y { n } => n + 2,
            Space::Full { degree } => degree,
        }
    }
}

/// Resource guards for enumeration and relation generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_basis: usize,
    pub max_relations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_basis: 5_000_000, max_relations: 20_000_000 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    pub mode: Mode,
    pub k: u8,
    pub space: Space,
}

impl BasisSpec {
    pub fn y(mode: Mode, k: u8, n: usize) -> Self {
        BasisSpec { mode, k, space: Space::Y { n } }
    }

    pub fn full(mode: Mode, k: u8, degree: usize) -> Self {
        BasisSpec { mode, k, space: Space::Full { degree } }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > MAX_COLORS {
            return Err(Error::Precondition(format!("k must lie in 1..={MAX_COLORS}, got {}", self.k)));
        }
        match self.space {
            Space::Full { degree: 0 } => Err(Error::Precondition("degree must be at least 1".into())),
            Space::Y { .. } if self.mode == Mode::Homotopy && self.k < 3 => {
                Err(Error::Precondition("a homotopy Y-component needs k >= 3".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn enumerate(&self, limits: Limits) -> Result<Basis> {
        self.validate()?;
        let mut encodings = Vec::new();
        match self.space {
            Space::Y { n } => {
                let ys = tree_encodings(self.k, 2, self.mode, limits)?;
                let struts = tree_encodings(self.k, 1, self.mode, limits)?;
                for y in &ys {
                    for combo in struts.iter().combinations_with_replacement(n) {
                        if encodings.len() >= limits.max_basis {
                            return Err(Error::Capacity { what: "basis size", limit: limits.max_basis });
                        }
                        let mut parts: Vec<&[u8]> = combo.into_iter().map(|s| &s[..]).collect();
                        parts.push(y);
                        encodings.push(join_components(&mut parts));
                    }
                }
            }
            Space::Full { degree } => {
                let trees = trees_by_degree(self.k, degree, self.mode, limits)?;
                for_each_forest(&trees, degree, &mut |parts| {
                    if encodings.len() >= limits.max_basis {
                        return Err(Error::Capacity { what: "basis size", limit: limits.max_basis });
                    }
                    let mut parts = parts.to_vec();
                    encodings.push(join_components(&mut parts));
                    Ok(())
                })?;
            }
        }
        encodings.sort_unstable();
        debug_assert!(encodings.windows(2).all(|w| w[0] < w[1]));
        Ok(Basis::from_sorted(*self, limits, encodings))
    }
}

/// Grading of a column: trivalent vertex count and leaf-color multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockKey {
    pub trivalent: usize,
    /// `(color, multiplicity)` in increasing color order.
    pub colors: Vec<(Color, usize)>,
}

impl fmt::Display for BlockKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}:", self.trivalent)?;
        for (i, (c, m)) in self.colors.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}^{m}")?;
        }
        Ok(())
    }
}

fn block_key(encoding: &[u8]) -> BlockKey {
    let mut trivalent = 0;
    let mut colors: Vec<(Color, usize)> = Vec::new();
    let mut sorted = encoding.to_vec();
    sorted.sort_unstable();
    for b in sorted {
        if b == NODE_MARK {
            trivalent += 1;
        } else if let Some(last) = colors.last_mut().filter(|(c, _)| *c == b) {
            last.1 += 1;
        } else {
            colors.push((b, 1));
        }
    }
    BlockKey { trivalent, colors }
}

/// Deterministically ordered diagram basis (all elements with sign +1).
#[derive(Clone, Debug)]
pub struct Basis {
    spec: BasisSpec,
    limits: Limits,
    elements: Vec<CanonicalDiagram>,
    index: HashMap<Box<[u8]>, usize>,
}

impl Basis {
    fn from_sorted(spec: BasisSpec, limits: Limits, encodings: Vec<Box<[u8]>>) -> Self {
        let index = encodings.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let elements = encodings
            .into_iter()
            .map(|e| CanonicalDiagram::from_canonical(e, Sign::Positive))
            .collect();
        Basis { spec, limits, elements, index }
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CanonicalDiagram] {
        &self.elements
    }

    pub fn get(&self, col: usize) -> Option<&CanonicalDiagram> {
        self.elements.get(col)
    }

    pub fn index_of(&self, encoding: &[u8]) -> Option<usize> {
        self.index.get(encoding).copied()
    }

    pub fn block_key(&self, col: usize) -> BlockKey {
        block_key(self.elements[col].encoding())
    }

    /// Block id per column (ids follow first appearance) and the key of each block.
    pub fn column_blocks(&self) -> (Vec<usize>, Vec<BlockKey>) {
        let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut keys = Vec::new();
        let blocks = self
            .elements
            .iter()
            .map(|e| {
                let sorted = e.grading_key();
                let next = ids.len();
                *ids.entry(sorted).or_insert_with(|| {
                    keys.push(block_key(e.encoding()));
                    next
                })
            })
            .collect();
        (blocks, keys)
    }
}

/// A planted tree: a rooted binary tree whose children are strictly ordered.
#[derive(Clone, Debug)]
pub(crate) struct Planted {
    pub enc: Vec<u8>,
    pub colors: u64,
    pub repeated: bool,
}

impl Planted {
    pub fn contains(&self, c: Color) -> bool {
        self.colors & (1u64 << c) != 0
    }

    fn min_color(&self) -> Color {
        self.colors.trailing_zeros() as Color
    }
}

/// Planted trees with `1..=max_leaves` leaves, indexed by leaf count.
/// Trees with a symmetric vertex are omitted (they vanish by antisymmetry);
/// homotopy mode also omits repeated colors.
pub(crate) fn planted_trees(k: u8, max_leaves: usize, mode: Mode, limits: Limits) -> Result<Vec<Vec<Planted>>> {
    let mut by_size: Vec<Vec<Planted>> = vec![Vec::new(); max_leaves + 1];
    if max_leaves == 0 {
        return Ok(by_size);
    }
    by_size[1] = (1..=k)
        .map(|c| Planted { enc: vec![c], colors: 1u64 << c, repeated: false })
        .collect();
    for size in 2..=max_leaves {
        let mut out = Vec::new();
        for left in 1..size {
            let right = size - left;
            for a in &by_size[left] {
                for b in &by_size[right] {
                    if a.enc >= b.enc {
                        continue;
                    }
                    let overlap = a.colors & b.colors != 0;
                    let repeated = a.repeated || b.repeated || overlap;
                    if repeated && mode == Mode::Homotopy {
                        continue;
                    }
                    if out.len() >= limits.max_basis {
                        return Err(Error::Capacity { what: "planted tree count", limit: limits.max_basis });
                    }
                    let mut enc = Vec::with_capacity(1 + a.enc.len() + b.enc.len());
                    enc.push(NODE_MARK);
                    enc.extend_from_slice(&a.enc);
                    enc.extend_from_slice(&b.enc);
                    out.push(Planted { enc, colors: a.colors | b.colors, repeated });
                }
            }
        }
        by_size[size] = out;
    }
    Ok(by_size)
}

fn tree_encodings(k: u8, degree: usize, mode: Mode, limits: Limits) -> Result<Vec<Box<[u8]>>> {
    let planted = planted_trees(k, degree, mode, limits)?;
    let mut set = BTreeSet::new();
    for p in &planted[degree] {
        for c in 1..=p.min_color() {
            if c > k || (mode == Mode::Homotopy && p.contains(c)) {
                continue;
            }
            let mut enc = Vec::with_capacity(1 + p.enc.len());
            enc.push(c);
            enc.extend_from_slice(&p.enc);
            let tree = TreeComponent::from_rooted_encoding(&enc)?;
            let (canon, sign) = canonicalize_component(&tree, mode);
            if !sign.is_zero() {
                set.insert(canon.into_boxed_slice());
                if set.len() > limits.max_basis {
                    return Err(Error::Capacity { what: "tree count", limit: limits.max_basis });
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// Canonical trees of degree `1..=max_degree`, indexed by degree.
pub(crate) fn trees_by_degree(k: u8, max_degree: usize, mode: Mode, limits: Limits) -> Result<Vec<Vec<Box<[u8]>>>> {
    let mut out = vec![Vec::new()];
    for degree in 1..=max_degree {
        out.push(tree_encodings(k, degree, mode, limits)?);
    }
    Ok(out)
}

/// Calls `f` with the component encodings of every forest of total degree
/// `degree` built from `trees` (indexed by degree). Each multiset is visited once.
pub(crate) fn for_each_forest<'a>(
    trees: &'a [Vec<Box<[u8]>>],
    degree: usize,
    f: &mut dyn FnMut(&[&'a [u8]]) -> Result<()>,
) -> Result<()> {
    let items: Vec<(usize, &[u8])> = trees
        .iter()
        .enumerate()
        .skip(1)
        .take(degree)
        .flat_map(|(d, ts)| ts.iter().map(move |t| (d, &t[..])))
        .collect();
    let mut stack = Vec::new();
    fn rec<'a>(
        items: &[(usize, &'a [u8])],
        start: usize,
        remaining: usize,
        stack: &mut Vec<&'a [u8]>,
        f: &mut dyn FnMut(&[&'a [u8]]) -> Result<()>,
    ) -> Result<()> {
        if remaining == 0 {
            return f(stack);
        }
        for i in start..items.len() {
            let (d, enc) = items[i];
            if d > remaining {
                break;
            }
            stack.push(enc);
            rec(items, i, remaining - d, stack, f)?;
            stack.pop();
        }
        Ok(())
    }
    rec(&items, 0, degree, &mut stack, f)
}

/// Basis of the Y-subspace: one Y-component and `n` struts.
pub fn enumerate_y_basis(k: u8, n: usize, mode: Mode) -> Result<Basis> {
    BasisSpec::y(mode, k, n).enumerate(Limits::default())
}

/// All single-component trees of the given degree, modulo antisymmetry.
pub fn enumerate_trees(k: u8, degree: usize, mode: Mode) -> Result<Vec<CanonicalDiagram>> {
    if degree == 0 {
        return Err(Error::Precondition("degree must be at least 1".into()));
    }
    if k == 0 || k > MAX_COLORS {
        return Err(Error::Precondition(format!("k must lie in 1..={MAX_COLORS}, got {k}")));
    }
    Ok(tree_encodings(k, degree, mode, Limits::default())?
        .into_iter()
        .map(|e| CanonicalDiagram::from_canonical(e, Sign::Positive))
        .collect())
}

/// Basis of all forests of degree `d`.
pub fn enumerate_basis(k: u8, d: usize, mode: Mode) -> Result<Basis> {
    BasisSpec::full(mode, k, d).enumerate(Limits::default())
}

/// Number of degree-`d` multisets of struts.
pub fn strut_union_count(k: u8, d: usize, mode: Mode) -> BigUint {
    let k = u64::from(k);
    let types = k * k.saturating_sub(1) / 2 + if mode == Mode::Concordance { k } else { 0 };
    multichoose(types, d as u64)
}
