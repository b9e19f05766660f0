//! Colored unitrivalent forests and their canonical forms.
//!
//! A [`TreeComponent`] is stored as an adjacency list in which every
//! trivalent vertex lists its three neighbours in cyclic order; reversing
//! that order is the antisymmetry move and negates the diagram.
//!
//! Canonical encodings are byte strings. A component is encoded by rooting
//! it at a leaf: the root color is followed by the encoding of the subtree
//! hanging off the root. A leaf is its color byte, a trivalent vertex is
//! [`NODE_MARK`] followed by its two child subtrees in increasing order.
//! Ordering the children costs a factor of `-1` whenever it disagrees with
//! the vertex's cyclic orientation. The encoding is prefix-free, so a
//! diagram is encoded by concatenating its sorted component encodings.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Leaf color; `1..=k` with `k <= MAX_COLORS`.
pub type Color = u8;

/// Largest supported number of colors (link components).
pub const MAX_COLORS: u8 = 62;

/// Marker byte for a trivalent vertex in an encoding. Sorts after every color.
pub const NODE_MARK: u8 = 0xFF;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Components with two leaves of one color vanish.
    Homotopy,
    Concordance,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Homotopy => "homotopy",
            Mode::Concordance => "concordance",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "homotopy" | "h" => Ok(Mode::Homotopy),
            "concordance" | "c" => Ok(Mode::Concordance),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn is_zero(self) -> bool {
        self == Sign::Zero
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        match (self, rhs) {
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (a, b) if a == b => Sign::Positive,
            _ => Sign::Negative,
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Negative => Sign::Positive,
            Sign::Zero => Sign::Zero,
            Sign::Positive => Sign::Negative,
        }
    }
}

/// A vertex of a [`TreeComponent`]. Vertex ids are positions in the node list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Node {
    Leaf { color: Color, nbr: usize },
    /// Neighbours in cyclic order.
    Trivalent { nbrs: [usize; 3] },
}

/// One connected component of a forest diagram: a unitrivalent tree with
/// colored leaves and cyclically oriented trivalent vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeComponent {
    nodes: Vec<Node>,
}

impl TreeComponent {
    /// Validates that `nodes` form a unitrivalent tree with symmetric adjacency.
    pub fn new(nodes: Vec<Node>) -> Result<Self> {
        let n = nodes.len();
        if n < 2 {
            return Err(Error::Structure(format!("a tree needs at least 2 vertices, got {n}")));
        }
        let mut degree_sum = 0usize;
        for (id, node) in nodes.iter().enumerate() {
            let nbrs: &[usize] = match node {
                Node::Leaf { color, nbr } => {
                    if *color == 0 || *color > MAX_COLORS {
                        return Err(Error::Structure(format!("leaf {id} has invalid color {color}")));
                    }
                    std::slice::from_ref(nbr)
                }
                Node::Trivalent { nbrs } => {
                    if nbrs[0] == nbrs[1] || nbrs[1] == nbrs[2] || nbrs[0] == nbrs[2] {
                        return Err(Error::Structure(format!("vertex {id} has a repeated neighbour")));
                    }
                    nbrs
                }
            };
            for &m in nbrs {
                if m >= n || m == id {
                    return Err(Error::Structure(format!("vertex {id} has invalid neighbour {m}")));
                }
                let back = match &nodes[m] {
                    Node::Leaf { nbr, .. } => *nbr == id,
                    Node::Trivalent { nbrs } => nbrs.contains(&id),
                };
                if !back {
                    return Err(Error::Structure(format!("edge {id}-{m} is not symmetric")));
                }
            }
            degree_sum += nbrs.len();
        }
        if degree_sum != 2 * (n - 1) {
            return Err(Error::Structure("vertex degrees do not describe a tree (cycle present)".into()));
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for m in neighbours(&nodes[v]) {
                if !seen[m] {
                    seen[m] = true;
                    reached += 1;
                    stack.push(m);
                }
            }
        }
        if reached != n {
            return Err(Error::Structure("graph is disconnected".into()));
        }
        Ok(TreeComponent { nodes })
    }

    pub fn strut(a: Color, b: Color) -> Self {
        TreeComponent {
            nodes: vec![Node::Leaf { color: a, nbr: 1 }, Node::Leaf { color: b, nbr: 0 }],
        }
    }

    /// A Y-component whose trivalent vertex has cyclic order `(a, b, c)`.
    pub fn y(a: Color, b: Color, c: Color) -> Self {
        TreeComponent {
            nodes: vec![
                Node::Leaf { color: a, nbr: 3 },
                Node::Leaf { color: b, nbr: 3 },
                Node::Leaf { color: c, nbr: 3 },
                Node::Trivalent { nbrs: [0, 1, 2] },
            ],
        }
    }

    /// Rebuilds a component from a rooted encoding. Vertex 0 is the root leaf,
    /// and every trivalent vertex is oriented `(parent, first child, second child)`.
    pub fn from_rooted_encoding(enc: &[u8]) -> Result<Self> {
        let (&root, _) = enc
            .split_first()
            .ok_or_else(|| Error::Parse("empty component encoding".into()))?;
        check_color_byte(root)?;
        let mut nodes = vec![Node::Leaf { color: root, nbr: usize::MAX }];
        let mut pos = 1;
        let child = decode_sub(enc, &mut pos, 0, &mut nodes)?;
        if pos != enc.len() {
            return Err(Error::Parse("trailing bytes after component encoding".into()));
        }
        nodes[0] = Node::Leaf { color: root, nbr: child };
        Ok(TreeComponent { nodes })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> Option<&Node> {
        self.nodes.get(id)
    }

    /// `(leaf id, color)` for every leaf.
    pub fn leaves(&self) -> impl Iterator<Item = (usize, Color)> + '_ {
        self.nodes.iter().enumerate().filter_map(|(id, n)| match n {
            Node::Leaf { color, .. } => Some((id, *color)),
            Node::Trivalent { .. } => None,
        })
    }

    pub fn leaf_color(&self, id: usize) -> Option<Color> {
        match self.nodes.get(id)? {
            Node::Leaf { color, .. } => Some(*color),
            Node::Trivalent { .. } => None,
        }
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves().count()
    }

    pub fn trivalent_count(&self) -> usize {
        self.nodes.len() - self.num_leaves()
    }

    /// Number of leaves minus one (half the vertex count).
    pub fn degree(&self) -> usize {
        self.num_leaves() - 1
    }

    pub fn is_strut(&self) -> bool {
        self.nodes.len() == 2
    }

    pub fn max_color(&self) -> Color {
        self.leaves().map(|(_, c)| c).max().unwrap_or(0)
    }

    pub fn has_repeated_color(&self) -> bool {
        let mut seen = 0u64;
        for (_, c) in self.leaves() {
            let bit = 1u64 << c;
            if seen & bit != 0 {
                return true;
            }
            seen |= bit;
        }
        false
    }

    /// Reverses the cyclic orientation at trivalent vertex `v`.
    pub fn flip(&mut self, v: usize) -> Result<()> {
        match self.nodes.get_mut(v) {
            Some(Node::Trivalent { nbrs }) => {
                nbrs.swap(1, 2);
                Ok(())
            }
            _ => Err(Error::Precondition(format!("vertex {v} is not trivalent"))),
        }
    }

    /// Internal edges `(u, v)` with `u < v`, both trivalent.
    pub fn internal_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (u, node) in self.nodes.iter().enumerate() {
            if let Node::Trivalent { nbrs } = node {
                for &v in nbrs {
                    if v > u && matches!(self.nodes[v], Node::Trivalent { .. }) {
                        edges.push((u, v));
                    }
                }
            }
        }
        edges
    }

    /// Removes `marked_leg` from `self` and attaches the freed edge to the
    /// edge of `host_leg` in `host`, at a new trivalent vertex oriented
    /// `(marked side, host leaf, rest of host)`. The host leaf survives.
    pub fn graft_onto(&self, marked_leg: usize, host: &TreeComponent, host_leg: usize) -> Result<TreeComponent> {
        let marked_color = self
            .leaf_color(marked_leg)
            .ok_or_else(|| Error::Precondition(format!("marked leg {marked_leg} is not a leaf")))?;
        let host_color = host
            .leaf_color(host_leg)
            .ok_or_else(|| Error::Precondition(format!("host leg {host_leg} is not a leaf")))?;
        if marked_color != host_color {
            return Err(Error::Precondition(format!(
                "cannot graft a leg of color {marked_color} onto a leg of color {host_color}"
            )));
        }

        let offset = host.nodes.len();
        let w = offset + self.nodes.len() - 1;
        let remap = |id: usize| -> usize {
            if id == marked_leg {
                w
            } else if id < marked_leg {
                offset + id
            } else {
                offset + id - 1
            }
        };

        let mut nodes = Vec::with_capacity(w + 1);
        nodes.extend_from_slice(&host.nodes);
        let host_parent = match host.nodes[host_leg] {
            Node::Leaf { nbr, .. } => nbr,
            Node::Trivalent { .. } => unreachable!(),
        };
        nodes[host_leg] = Node::Leaf { color: host_color, nbr: w };
        replace_nbr(&mut nodes[host_parent], host_leg, w);

        let mut marked_parent = usize::MAX;
        for (id, node) in self.nodes.iter().enumerate() {
            if id == marked_leg {
                if let Node::Leaf { nbr, .. } = node {
                    marked_parent = remap(*nbr);
                }
                continue;
            }
            nodes.push(match *node {
                Node::Leaf { color, nbr } => Node::Leaf { color, nbr: remap(nbr) },
                Node::Trivalent { nbrs } => Node::Trivalent { nbrs: nbrs.map(remap) },
            });
        }
        nodes.push(Node::Trivalent { nbrs: [marked_parent, host_leg, host_parent] });
        Ok(TreeComponent { nodes })
    }

    /// The two other trees of the IHX triple at internal edge `(u, v)`.
    ///
    /// With `u = (v, a, b)` and `v = (u, c, d)` in cyclic order, the returned
    /// trees are `u = (v, a, c), v = (u, d, b)` and `u = (v, a, d), v = (u, b, c)`.
    /// Under this convention `self + first + second = 0` is the IHX relation
    /// (it is the Jacobi identity for totally antisymmetric structure constants).
    pub fn ihx_partners(&self, u: usize, v: usize) -> Result<(TreeComponent, TreeComponent)> {
        let (a, b) = self.others_after(u, v)?;
        let (c, d) = self.others_after(v, u)?;
        let mut h = self.clone();
        h.nodes[u] = Node::Trivalent { nbrs: [v, a, c] };
        h.nodes[v] = Node::Trivalent { nbrs: [u, d, b] };
        replace_nbr(&mut h.nodes[c], v, u);
        replace_nbr(&mut h.nodes[b], u, v);
        let mut x = self.clone();
        x.nodes[u] = Node::Trivalent { nbrs: [v, a, d] };
        x.nodes[v] = Node::Trivalent { nbrs: [u, b, c] };
        replace_nbr(&mut x.nodes[d], v, u);
        replace_nbr(&mut x.nodes[b], u, v);
        Ok((h, x))
    }

    /// The two neighbours of trivalent `v` following `from` in cyclic order.
    fn others_after(&self, v: usize, from: usize) -> Result<(usize, usize)> {
        match self.nodes.get(v) {
            Some(Node::Trivalent { nbrs }) => {
                let i = nbrs
                    .iter()
                    .position(|&m| m == from)
                    .ok_or_else(|| Error::Precondition(format!("{from} is not adjacent to {v}")))?;
                Ok((nbrs[(i + 1) % 3], nbrs[(i + 2) % 3]))
            }
            _ => Err(Error::Precondition(format!("vertex {v} is not trivalent"))),
        }
    }

    /// Encoding of the subtree at `node` seen from `parent`, with its sign
    /// relative to the canonical representative. `None` when some vertex
    /// has two isomorphic child subtrees (an odd automorphism).
    fn rooted(&self, node: usize, parent: usize) -> Option<(Vec<u8>, bool)> {
        match self.nodes[node] {
            Node::Leaf { color, .. } => Some((vec![color], false)),
            Node::Trivalent { nbrs } => {
                let i = nbrs.iter().position(|&m| m == parent).expect("parent adjacent");
                let (ea, na) = self.rooted(nbrs[(i + 1) % 3], node)?;
                let (eb, nb) = self.rooted(nbrs[(i + 2) % 3], node)?;
                let mut out = Vec::with_capacity(1 + ea.len() + eb.len());
                out.push(NODE_MARK);
                match ea.cmp(&eb) {
                    Ordering::Equal => None,
                    Ordering::Less => {
                        out.extend_from_slice(&ea);
                        out.extend_from_slice(&eb);
                        Some((out, na ^ nb))
                    }
                    Ordering::Greater => {
                        out.extend_from_slice(&eb);
                        out.extend_from_slice(&ea);
                        Some((out, !(na ^ nb)))
                    }
                }
            }
        }
    }

    /// Encoding of the whole component rooted at `leaf`; `None` for a zero component.
    pub fn rooted_encoding(&self, leaf: usize) -> Option<(Vec<u8>, Sign)> {
        let (color, nbr) = match self.nodes[leaf] {
            Node::Leaf { color, nbr } => (color, nbr),
            Node::Trivalent { .. } => return None,
        };
        let (sub, negated) = self.rooted(nbr, leaf)?;
        let mut enc = Vec::with_capacity(1 + sub.len());
        enc.push(color);
        enc.extend_from_slice(&sub);
        Some((enc, if negated { Sign::Negative } else { Sign::Positive }))
    }
}

fn neighbours(node: &Node) -> impl Iterator<Item = usize> + '_ {
    let s: &[usize] = match node {
        Node::Leaf { nbr, .. } => std::slice::from_ref(nbr),
        Node::Trivalent { nbrs } => nbrs,
    };
    s.iter().copied()
}

fn replace_nbr(node: &mut Node, old: usize, new: usize) {
    match node {
        Node::Leaf { nbr, .. } => {
            debug_assert_eq!(*nbr, old);
            *nbr = new;
        }
        Node::Trivalent { nbrs } => {
            for m in nbrs.iter_mut() {
                if *m == old {
                    *m = new;
                    return;
                }
            }
            panic!("vertex is not adjacent to {old}");
        }
    }
}

fn check_color_byte(b: u8) -> Result<()> {
    if b == 0 || b > MAX_COLORS {
        Err(Error::Parse(format!("invalid color byte {b}")))
    } else {
        Ok(())
    }
}

fn decode_sub(enc: &[u8], pos: &mut usize, parent: usize, nodes: &mut Vec<Node>) -> Result<usize> {
    let b = *enc
        .get(*pos)
        .ok_or_else(|| Error::Parse("truncated encoding".into()))?;
    *pos += 1;
    let id = nodes.len();
    if b == NODE_MARK {
        nodes.push(Node::Trivalent { nbrs: [parent, usize::MAX, usize::MAX] });
        let first = decode_sub(enc, pos, id, nodes)?;
        let second = decode_sub(enc, pos, id, nodes)?;
        nodes[id] = Node::Trivalent { nbrs: [parent, first, second] };
    } else {
        check_color_byte(b)?;
        nodes.push(Node::Leaf { color: b, nbr: parent });
    }
    Ok(id)
}

/// Length of the subtree encoding starting at `pos`.
fn sub_len(enc: &[u8], pos: usize) -> Result<usize> {
    let mut pending = 1usize;
    let mut i = pos;
    while pending > 0 {
        let b = *enc
            .get(i)
            .ok_or_else(|| Error::Parse("truncated encoding".into()))?;
        if b == NODE_MARK {
            pending += 1;
        } else {
            pending -= 1;
        }
        i += 1;
    }
    Ok(i - pos)
}

/// Splits a diagram encoding into its component encodings.
pub fn split_components(enc: &[u8]) -> Result<Vec<&[u8]>> {
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < enc.len() {
        check_color_byte(enc[pos])?;
        let len = 1 + sub_len(enc, pos + 1)?;
        out.push(&enc[pos..pos + len]);
        pos += len;
    }
    Ok(out)
}

/// Concatenates component encodings in sorted order.
pub fn join_components<T: AsRef<[u8]>>(components: &mut [T]) -> Box<[u8]> {
    components.sort_by(|a, b| a.as_ref().cmp(b.as_ref()));
    let len = components.iter().map(|c| c.as_ref().len()).sum();
    let mut out = Vec::with_capacity(len);
    for c in components.iter() {
        out.extend_from_slice(c.as_ref());
    }
    out.into_boxed_slice()
}

/// Canonical `(encoding, sign)` of a single component. The encoding is the
/// least leaf-rooted encoding; a zero component gets an empty encoding.
pub fn canonicalize_component(t: &TreeComponent, mode: Mode) -> (Vec<u8>, Sign) {
    if mode == Mode::Homotopy && t.has_repeated_color() {
        return (Vec::new(), Sign::Zero);
    }
    let min_color = match t.leaves().map(|(_, c)| c).min() {
        Some(c) => c,
        None => return (Vec::new(), Sign::Zero),
    };
    let mut best: Option<(Vec<u8>, Sign)> = None;
    for (leaf, color) in t.leaves() {
        if color != min_color {
            continue;
        }
        let Some((enc, sign)) = t.rooted_encoding(leaf) else {
            return (Vec::new(), Sign::Zero);
        };
        match &best {
            None => best = Some((enc, sign)),
            Some((b, s)) => match enc.cmp(b) {
                Ordering::Less => best = Some((enc, sign)),
                // Two rootings with one encoding differ by an automorphism;
                // opposite signs make it odd.
                Ordering::Equal if *s != sign => return (Vec::new(), Sign::Zero),
                _ => {}
            },
        }
    }
    best.unwrap_or((Vec::new(), Sign::Zero))
}

/// Reference to a leaf of a [`Diagram`]: component index and leaf id.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LegRef {
    pub component: usize,
    pub leaf: usize,
}

/// A multiset of tree components with a mode and a color bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    components: Vec<TreeComponent>,
    mode: Mode,
    k: u8,
}

impl Diagram {
    pub fn new(components: Vec<TreeComponent>, mode: Mode, k: u8) -> Result<Self> {
        if k == 0 || k > MAX_COLORS {
            return Err(Error::Precondition(format!("k must lie in 1..={MAX_COLORS}, got {k}")));
        }
        for c in &components {
            let max = c.max_color();
            if max > k {
                return Err(Error::Precondition(format!("color {max} exceeds k = {k}")));
            }
        }
        Ok(Diagram { components, mode, k })
    }

    pub fn components(&self) -> &[TreeComponent] {
        &self.components
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn degree(&self) -> usize {
        self.components.iter().map(TreeComponent::degree).sum()
    }

    pub fn trivalent_count(&self) -> usize {
        self.components.iter().map(TreeComponent::trivalent_count).sum()
    }

    /// `m(D; i, j)`: how many components are struts with ends `{i, j}`.
    pub fn strut_count(&self, i: Color, j: Color) -> usize {
        let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
        self.components
            .iter()
            .filter(|c| c.is_strut())
            .filter(|c| {
                let mut cols: Vec<Color> = c.leaves().map(|(_, col)| col).collect();
                cols.sort_unstable();
                cols == [lo, hi]
            })
            .count()
    }

    pub fn canonicalize(&self) -> CanonicalDiagram {
        let mut encs = Vec::with_capacity(self.components.len());
        let mut sign = Sign::Positive;
        for c in &self.components {
            let (enc, s) = canonicalize_component(c, self.mode);
            if s.is_zero() {
                return CanonicalDiagram::zero();
            }
            sign = sign * s;
            encs.push(enc);
        }
        CanonicalDiagram { encoding: join_components(&mut encs), sign }
    }

    /// Grafts the marked leg's component onto the host leg. `None` is the
    /// zero diagram, produced when both legs lie on one component (a loop).
    pub fn graft_within(&self, marked: LegRef, host: LegRef) -> Result<Option<Diagram>> {
        let m = self
            .components
            .get(marked.component)
            .ok_or_else(|| Error::Precondition(format!("no component {}", marked.component)))?;
        let h = self
            .components
            .get(host.component)
            .ok_or_else(|| Error::Precondition(format!("no component {}", host.component)))?;
        if marked.component == host.component {
            let (mc, hc) = (m.leaf_color(marked.leaf), h.leaf_color(host.leaf));
            if mc.is_none() || hc.is_none() || mc != hc {
                return Err(Error::Precondition("graft legs must be leaves of equal color".into()));
            }
            return Ok(None);
        }
        let grafted = m.graft_onto(marked.leaf, h, host.leaf)?;
        let mut components = Vec::with_capacity(self.components.len() - 1);
        for (i, c) in self.components.iter().enumerate() {
            if i == host.component {
                components.push(grafted.clone());
            } else if i != marked.component {
                components.push(c.clone());
            }
        }
        Ok(Some(Diagram { components, mode: self.mode, k: self.k }))
    }

    /// Parses the text form produced by [`CanonicalDiagram`]'s `Display`.
    pub fn parse(text: &str, mode: Mode, k: u8) -> Result<Diagram> {
        let enc = parse_diagram_text(text)?;
        let components = split_components(&enc)?
            .into_iter()
            .map(TreeComponent::from_rooted_encoding)
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(components, mode, k)
    }
}

/// Grafts `marked` (at `marked_leg`) onto a leg of `host`, producing a new
/// diagram that contains every host component plus the merged tree.
pub fn graft(marked: &TreeComponent, marked_leg: usize, host: &Diagram, host_leg: LegRef) -> Result<Option<Diagram>> {
    let mut components = host.components.clone();
    components.push(marked.clone());
    let combined = Diagram::new(components, host.mode, host.k)?;
    combined.graft_within(LegRef { component: host.components.len(), leaf: marked_leg }, host_leg)
}

/// Isomorphism-invariant identity of a diagram, up to the sign absorbed from
/// antisymmetry. Zero diagrams carry an empty encoding and [`Sign::Zero`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalDiagram {
    encoding: Box<[u8]>,
    sign: Sign,
}

impl CanonicalDiagram {
    pub fn zero() -> Self {
        CanonicalDiagram { encoding: Box::default(), sign: Sign::Zero }
    }

    /// Wraps an encoding already known to be canonical.
    pub(crate) fn from_canonical(encoding: Box<[u8]>, sign: Sign) -> Self {
        CanonicalDiagram { encoding, sign }
    }

    pub fn encoding(&self) -> &[u8] {
        &self.encoding
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn is_zero(&self) -> bool {
        self.sign.is_zero()
    }

    pub fn components(&self) -> Vec<&[u8]> {
        split_components(&self.encoding).expect("canonical encodings are well formed")
    }

    pub fn degree(&self) -> usize {
        let leaves = self.encoding.iter().filter(|&&b| b != NODE_MARK).count();
        leaves - self.components().len()
    }

    pub fn trivalent_count(&self) -> usize {
        self.encoding.iter().filter(|&&b| b == NODE_MARK).count()
    }

    /// Multiset of leaf colors and trivalent count, as the sorted encoding bytes.
    pub fn grading_key(&self) -> Vec<u8> {
        let mut key = self.encoding.to_vec();
        key.sort_unstable();
        key
    }

    /// The canonical representative (sign +1) as a diagram.
    pub fn to_diagram(&self, mode: Mode, k: u8) -> Result<Diagram> {
        let components = self
            .components()
            .into_iter()
            .map(TreeComponent::from_rooted_encoding)
            .collect::<Result<Vec<_>>>()?;
        Diagram::new(components, mode, k)
    }
}

impl PartialOrd for CanonicalDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.encoding
            .cmp(&other.encoding)
            .then_with(|| self.sign.to_i64().cmp(&other.sign.to_i64()))
    }
}

pub fn canonicalize(d: &Diagram) -> CanonicalDiagram {
    d.canonicalize()
}

/// Writes an encoding in text form: components `root-subtree` joined by `|`,
/// subtrees as colors or `(first,second)`. The zero diagram prints as `0`.
pub fn write_encoding(f: &mut impl fmt::Write, enc: &[u8]) -> fmt::Result {
    if enc.is_empty() {
        return f.write_str("0");
    }
    let comps = split_components(enc).map_err(|_| fmt::Error)?;
    for (i, c) in comps.iter().enumerate() {
        if i > 0 {
            f.write_char('|')?;
        }
        write!(f, "{}-", c[0])?;
        let mut pos = 1;
        write_sub(f, c, &mut pos)?;
    }
    Ok(())
}

fn write_sub(f: &mut impl fmt::Write, enc: &[u8], pos: &mut usize) -> fmt::Result {
    let b = enc[*pos];
    *pos += 1;
    if b == NODE_MARK {
        f.write_char('(')?;
        write_sub(f, enc, pos)?;
        f.write_char(',')?;
        write_sub(f, enc, pos)?;
        f.write_char(')')
    } else {
        write!(f, "{b}")
    }
}

pub fn encoding_to_string(enc: &[u8]) -> String {
    let mut s = String::new();
    write_encoding(&mut s, enc).expect("well-formed encoding");
    s
}

impl fmt::Display for CanonicalDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_encoding(f, &self.encoding)
    }
}

/// Inverse of [`write_encoding`]. The result is not re-canonicalized.
pub fn parse_diagram_text(text: &str) -> Result<Vec<u8>> {
    let text = text.trim();
    if text == "0" {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for comp in text.split('|') {
        let (root, rest) = comp
            .split_once('-')
            .ok_or_else(|| Error::Parse(format!("component {comp:?} lacks '-'")))?;
        out.push(parse_color(root)?);
        let bytes = rest.as_bytes();
        let mut pos = 0;
        parse_sub_text(bytes, &mut pos, &mut out)?;
        if pos != bytes.len() {
            return Err(Error::Parse(format!("trailing text in component {comp:?}")));
        }
    }
    Ok(out)
}

fn parse_color(s: &str) -> Result<u8> {
    let v: u8 = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad color {s:?}")))?;
    check_color_byte(v)?;
    Ok(v)
}

fn parse_sub_text(s: &[u8], pos: &mut usize, out: &mut Vec<u8>) -> Result<()> {
    match s.get(*pos) {
        Some(b'(') => {
            *pos += 1;
            out.push(NODE_MARK);
            parse_sub_text(s, pos, out)?;
            if s.get(*pos) != Some(&b',') {
                return Err(Error::Parse("expected ','".into()));
            }
            *pos += 1;
            parse_sub_text(s, pos, out)?;
            if s.get(*pos) != Some(&b')') {
                return Err(Error::Parse("expected ')'".into()));
            }
            *pos += 1;
            Ok(())
        }
        Some(b) if b.is_ascii_digit() => {
            let start = *pos;
            while s.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let digits = std::str::from_utf8(&s[start..*pos]).expect("ascii");
            out.push(parse_color(digits)?);
            Ok(())
        }
        _ => Err(Error::Parse("expected a color or '('".into())),
    }
}
