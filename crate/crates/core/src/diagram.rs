//! Coxeter–Dynkin diagrams, vertex subsets bound to a diagram, and the
//! line-oriented `.cox` text format.
//!
//! A diagram stores a dense symmetric label matrix. A label of 2 means the
//! two generators commute and corresponds to the absence of an edge; it is
//! never reported as an edge and an explicit `edge a b 2` is normalized away.

use std::cmp::Ordering as CmpOrdering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Vertex sets are bitmasks, which caps the rank.
pub const MAX_VERTICES: usize = 64;

/// Edge label `m_st`: an integer `m >= 2` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Finite(u32),
    Infinity,
}

impl Label {
    /// The label of a commuting pair, i.e. of a non-edge.
    pub const COMMUTING: Label = Label::Finite(2);

    pub fn finite(m: u32) -> Result<Label, DiagramError> {
        if m < 2 {
            return Err(DiagramError::LabelTooSmall(m as u64));
        }
        Ok(Label::Finite(m))
    }

    pub fn is_commuting(self) -> bool {
        self == Label::COMMUTING
    }

    /// `Some(m)` for a finite label.
    pub fn order(self) -> Option<u32> {
        match self {
            Label::Finite(m) => Some(m),
            Label::Infinity => None,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Finite(m) => write!(f, "{m}"),
            Label::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Label {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            return Ok(Label::Infinity);
        }
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(LabelParseError::Malformed(s.to_string()));
        }
        let m: u64 = s
            .parse()
            .map_err(|_| LabelParseError::Malformed(s.to_string()))?;
        if m < 2 {
            return Err(LabelParseError::TooSmall(m));
        }
        let m = u32::try_from(m).map_err(|_| LabelParseError::Malformed(s.to_string()))?;
        Ok(Label::Finite(m))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LabelParseError {
    #[error("malformed label `{0}` (expected an integer >= 2 or `inf`)")]
    Malformed(String),
    #[error("label {0} is below 2")]
    TooSmall(u64),
}

// Finite labels serialize as JSON integers, infinity as the string "inf".
impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Finite(m) => serializer.serialize_u32(*m),
            Label::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LabelVisitor;

        impl Visitor<'_> for LabelVisitor {
            type Value = Label;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer >= 2 or the string \"inf\"")
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Label, E> {
                let m = u32::try_from(v).map_err(|_| E::custom("label out of range"))?;
                Label::finite(m).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Label, E> {
                let v = u64::try_from(v).map_err(|_| E::custom("negative label"))?;
                self.visit_u64(v)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Label, E> {
                if v == "inf" {
                    Ok(Label::Infinity)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(LabelVisitor)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("invalid vertex name `{0}` (names must match [A-Za-z0-9_]+)")]
    InvalidName(String),
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("label {0} is below 2")]
    LabelTooSmall(u64),
    #[error("loop on vertex `{0}`")]
    Loop(String),
    #[error("conflicting labels {first} and {second} for edge {a}-{b}")]
    ConflictingEdge {
        a: String,
        b: String,
        first: Label,
        second: Label,
    },
    #[error("too many vertices ({0}, at most {MAX_VERTICES})")]
    TooManyVertices(usize),
    #[error("vertex index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("vertex set belongs to a different diagram")]
    ForeignVertexSet,
    #[error("vertex sets overlap")]
    OverlappingSets,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error(transparent)]
    Invalid(#[from] DiagramError),
}

/// Non-fatal remark produced while parsing, e.g. an explicit label-2 edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

/// Identity of a constructed diagram. Clones share it; every construction
/// (parsing, induced subdiagrams, products) gets a fresh one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiagramId(u64);

impl DiagramId {
    fn fresh() -> Self {
        static NEXT: AtomicU64 = AtomicU64::new(1);
        DiagramId(NEXT.fetch_add(1, Ordering::Relaxed))
    }
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty() && name.bytes().all(|b| b.is_ascii_alphanumeric() || b == b'_')
}

/// A subset `T` of a diagram's vertices.
///
/// Bound to the identity of the diagram it was taken from; combining sets
/// from different diagrams is an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexSet {
    diagram: DiagramId,
    bits: u64,
}

impl VertexSet {
    pub fn diagram_id(&self) -> DiagramId {
        self.diagram
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, index: usize) -> bool {
        index < MAX_VERTICES && self.bits & (1 << index) != 0
    }

    /// Member indices in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        bit_indices(self.bits)
    }

    fn same_diagram(&self, other: &VertexSet) -> Result<(), DiagramError> {
        if self.diagram == other.diagram {
            Ok(())
        } else {
            Err(DiagramError::ForeignVertexSet)
        }
    }

    pub fn union(&self, other: &VertexSet) -> Result<VertexSet, DiagramError> {
        self.same_diagram(other)?;
        Ok(self.with_bits(self.bits | other.bits))
    }

    pub fn intersection(&self, other: &VertexSet) -> Result<VertexSet, DiagramError> {
        self.same_diagram(other)?;
        Ok(self.with_bits(self.bits & other.bits))
    }

    pub fn difference(&self, other: &VertexSet) -> Result<VertexSet, DiagramError> {
        self.same_diagram(other)?;
        Ok(self.with_bits(self.bits & !other.bits))
    }

    pub fn is_subset(&self, other: &VertexSet) -> Result<bool, DiagramError> {
        self.same_diagram(other)?;
        Ok(self.bits & !other.bits == 0)
    }

    pub fn with_bits(&self, bits: u64) -> VertexSet {
        VertexSet {
            diagram: self.diagram,
            bits,
        }
    }

    /// Canonical order: by cardinality, then lexicographically on the sorted
    /// member indices.
    pub fn canonical_cmp(&self, other: &VertexSet) -> CmpOrdering {
        canonical_cmp(self.bits, other.bits)
    }
}

/// Canonical order on bitmasks: popcount first, then lexicographic order of
/// the ascending index lists. For equal popcounts the set owning the lowest
/// differing index comes first.
pub fn canonical_cmp(a: u64, b: u64) -> CmpOrdering {
    match a.count_ones().cmp(&b.count_ones()) {
        CmpOrdering::Equal if a == b => CmpOrdering::Equal,
        CmpOrdering::Equal => {
            let diff = a ^ b;
            let lowest = diff & diff.wrapping_neg();
            if a & lowest != 0 {
                CmpOrdering::Less
            } else {
                CmpOrdering::Greater
            }
        }
        other => other,
    }
}

pub(crate) fn bit_indices(mut bits: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if bits == 0 {
            None
        } else {
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        }
    })
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A Coxeter–Dynkin diagram: ordered vertex names and a symmetric label
/// matrix whose absent entries are 2.
#[derive(Debug, Clone)]
pub struct CoxeterDiagram {
    id: DiagramId,
    names: Vec<String>,
    index: HashMap<String, usize>,
    labels: Vec<Label>,
    adjacency: Vec<u64>,
}

impl PartialEq for CoxeterDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.labels == other.labels
    }
}

impl Eq for CoxeterDiagram {}

impl CoxeterDiagram {
    /// The diagram with no vertices; it presents the trivial group.
    pub fn empty() -> Self {
        DiagramBuilder::new().build()
    }

    pub fn builder() -> DiagramBuilder {
        DiagramBuilder::new()
    }

    pub fn id(&self) -> DiagramId {
        self.id
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// `m_st`, with the convention `m_ss = 1`.
    pub fn label(&self, s: usize, t: usize) -> Label {
        if s == t {
            Label::Finite(1)
        } else {
            self.labels[s * self.rank() + t]
        }
    }

    pub fn label_by_name(&self, s: &str, t: &str) -> Result<Label, DiagramError> {
        let s = self.require(s)?;
        let t = self.require(t)?;
        Ok(self.label(s, t))
    }

    fn require(&self, name: &str) -> Result<usize, DiagramError> {
        self.index_of(name)
            .ok_or_else(|| DiagramError::UnknownVertex(name.to_string()))
    }

    /// Mask of the vertices joined to `s` by an edge (label other than 2).
    pub fn neighbors(&self, s: usize) -> u64 {
        self.adjacency[s]
    }

    /// Edges `(s, t, m_st)` with `s < t`, excluding label-2 pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        let n = self.rank();
        (0..n).flat_map(move |s| {
            ((s + 1)..n).filter_map(move |t| {
                let m = self.label(s, t);
                (!m.is_commuting()).then_some((s, t, m))
            })
        })
    }

    pub fn full_set(&self) -> VertexSet {
        self.set_unchecked(full_mask(self.rank()))
    }

    pub fn empty_set(&self) -> VertexSet {
        self.set_unchecked(0)
    }

    pub(crate) fn set_unchecked(&self, bits: u64) -> VertexSet {
        VertexSet {
            diagram: self.id,
            bits,
        }
    }

    pub fn set_from_mask(&self, bits: u64) -> Result<VertexSet, DiagramError> {
        let extra = bits & !full_mask(self.rank());
        if extra != 0 {
            return Err(DiagramError::IndexOutOfRange(
                extra.trailing_zeros() as usize
            ));
        }
        Ok(self.set_unchecked(bits))
    }

    pub fn set_from_indices<I: IntoIterator<Item = usize>>(
        &self,
        indices: I,
    ) -> Result<VertexSet, DiagramError> {
        let mut bits = 0u64;
        for i in indices {
            if i >= self.rank() {
                return Err(DiagramError::IndexOutOfRange(i));
            }
            bits |= 1 << i;
        }
        Ok(self.set_unchecked(bits))
    }

    pub fn set_from_names<I, S>(&self, names: I) -> Result<VertexSet, DiagramError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut bits = 0u64;
        for name in names {
            bits |= 1 << self.require(name.as_ref())?;
        }
        Ok(self.set_unchecked(bits))
    }

    /// Member names of `set` in declaration order.
    pub fn set_names(&self, set: &VertexSet) -> Result<Vec<&str>, DiagramError> {
        self.check_owned(set)?;
        Ok(set.iter().map(|i| self.name(i)).collect())
    }

    pub fn check_owned(&self, set: &VertexSet) -> Result<(), DiagramError> {
        if set.diagram != self.id {
            return Err(DiagramError::ForeignVertexSet);
        }
        Ok(())
    }

    /// The induced subdiagram on `set`, inheriting labels.
    pub fn induced(&self, set: &VertexSet) -> Result<CoxeterDiagram, DiagramError> {
        self.check_owned(set)?;
        Ok(self.induced_mask(set.bits))
    }

    pub(crate) fn induced_mask(&self, mask: u64) -> CoxeterDiagram {
        let members: Vec<usize> = bit_indices(mask).collect();
        let mut b = DiagramBuilder::new();
        for &i in &members {
            b.push_vertex_unchecked(self.name(i));
        }
        for (a, &s) in members.iter().enumerate() {
            for (c, &t) in members.iter().enumerate().skip(a + 1) {
                let m = self.label(s, t);
                if !m.is_commuting() {
                    b.set_label_unchecked(a, c, m);
                }
            }
        }
        b.build()
    }

    /// Connected components of the diagram graph, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_of(full_mask(self.rank()))
            .into_iter()
            .map(|bits| self.set_unchecked(bits))
            .collect()
    }

    pub(crate) fn components_of(&self, mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut remaining = mask;
        while remaining != 0 {
            let comp = self.component_containing(remaining, remaining & remaining.wrapping_neg());
            out.push(comp);
            remaining &= !comp;
        }
        out
    }

    /// Component of the induced graph on `mask` containing the vertices in `seed`.
    pub(crate) fn component_containing(&self, mask: u64, seed: u64) -> u64 {
        let mut comp = seed;
        let mut frontier = seed;
        while frontier != 0 {
            let mut next = 0u64;
            for i in bit_indices(frontier) {
                next |= self.adjacency[i];
            }
            next &= mask & !comp;
            comp |= next;
            frontier = next;
        }
        comp
    }

    pub(crate) fn is_connected_mask(&self, mask: u64) -> bool {
        mask == 0 || self.component_containing(mask, mask & mask.wrapping_neg()) == mask
    }

    /// `T^⊥`: vertices outside `T` commuting with every member of `T`.
    pub fn perp(&self, set: &VertexSet) -> Result<VertexSet, DiagramError> {
        self.check_owned(set)?;
        Ok(self.set_unchecked(self.perp_mask(set.bits)))
    }

    pub(crate) fn perp_mask(&self, mask: u64) -> u64 {
        let mut out = full_mask(self.rank()) & !mask;
        for t in bit_indices(mask) {
            out &= !self.adjacency[t];
        }
        out
    }

    /// Whether `[J1, J2] = 1`, i.e. every cross label is 2.
    pub fn commutes(&self, j1: &VertexSet, j2: &VertexSet) -> Result<bool, DiagramError> {
        self.check_owned(j1)?;
        self.check_owned(j2)?;
        if j1.bits & j2.bits != 0 {
            return Err(DiagramError::OverlappingSets);
        }
        Ok(self.commutes_mask(j1.bits, j2.bits))
    }

    pub(crate) fn commutes_mask(&self, j1: u64, j2: u64) -> bool {
        bit_indices(j2).all(|t| self.adjacency[t] & j1 == 0)
    }

    /// Disjoint union with all cross labels 2: the diagram of the direct
    /// product. If any name collides, left names get an `l_` prefix and right
    /// names an `r_` prefix.
    pub fn product(&self, other: &CoxeterDiagram) -> Result<CoxeterDiagram, DiagramError> {
        let n = self.rank() + other.rank();
        if n > MAX_VERTICES {
            return Err(DiagramError::TooManyVertices(n));
        }
        let collide = other.names.iter().any(|name| self.index.contains_key(name));
        let (lp, rp) = if collide { ("l_", "r_") } else { ("", "") };
        let mut b = DiagramBuilder::new();
        for name in &self.names {
            b.push_vertex_unchecked(&format!("{lp}{name}"));
        }
        for name in &other.names {
            b.push_vertex_unchecked(&format!("{rp}{name}"));
        }
        for (s, t, m) in self.edges() {
            b.set_label_unchecked(s, t, m);
        }
        let off = self.rank();
        for (s, t, m) in other.edges() {
            b.set_label_unchecked(s + off, t + off, m);
        }
        Ok(b.build())
    }

    /// The same Coxeter system with vertex `order[k]` moved to position `k`.
    pub fn reordered(&self, order: &[usize]) -> Result<CoxeterDiagram, DiagramError> {
        let n = self.rank();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(DiagramError::IndexOutOfRange(order.len()));
        }
        for &i in order {
            if i >= n || seen[i] {
                return Err(DiagramError::IndexOutOfRange(i));
            }
            seen[i] = true;
        }
        let mut b = DiagramBuilder::new();
        for &i in order {
            b.push_vertex_unchecked(self.name(i));
        }
        for a in 0..n {
            for c in (a + 1)..n {
                let m = self.label(order[a], order[c]);
                if !m.is_commuting() {
                    b.set_label_unchecked(a, c, m);
                }
            }
        }
        Ok(b.build())
    }

    /// The same diagram with new vertex names, position for position.
    pub fn renamed<S: AsRef<str>>(&self, names: &[S]) -> Result<CoxeterDiagram, DiagramError> {
        if names.len() != self.rank() {
            return Err(DiagramError::IndexOutOfRange(names.len()));
        }
        let mut b = DiagramBuilder::new();
        for name in names {
            b.vertex(name.as_ref())?;
        }
        for (s, t, m) in self.edges() {
            b.set_label_unchecked(s, t, m);
        }
        Ok(b.build())
    }

    /// Canonical `.cox` text: one `vertices` line, then edges in index order.
    pub fn to_cox(&self) -> String {
        let mut out = String::from("vertices");
        for name in &self.names {
            out.push(' ');
            out.push_str(name);
        }
        out.push('\n');
        for (s, t, m) in self.edges() {
            out.push_str(&format!("edge {} {} {}\n", self.name(s), self.name(t), m));
        }
        out
    }
}

impl fmt::Display for CoxeterDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_cox())
    }
}

impl FromStr for CoxeterDiagram {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_diagram(s)
    }
}

/// Incremental construction with validation.
#[derive(Debug, Default)]
pub struct DiagramBuilder {
    names: Vec<String>,
    index: HashMap<String, usize>,
    edges: HashMap<(usize, usize), Label>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: &str) -> Result<usize, DiagramError> {
        if !is_valid_name(name) {
            return Err(DiagramError::InvalidName(name.to_string()));
        }
        if self.index.contains_key(name) {
            return Err(DiagramError::DuplicateVertex(name.to_string()));
        }
        if self.names.len() == MAX_VERTICES {
            return Err(DiagramError::TooManyVertices(MAX_VERTICES + 1));
        }
        Ok(self.push_vertex_unchecked(name))
    }

    pub fn vertices<I, S>(mut self, names: I) -> Result<Self, DiagramError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for name in names {
            self.vertex(name.as_ref())?;
        }
        Ok(self)
    }

    fn push_vertex_unchecked(&mut self, name: &str) -> usize {
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    fn set_label_unchecked(&mut self, s: usize, t: usize, m: Label) {
        let key = if s < t { (s, t) } else { (t, s) };
        self.edges.insert(key, m);
    }

    /// Declares `m_ab`. Repeating a declaration with the same label is a
    /// no-op; a different label is an error. Label 2 is recorded for the
    /// conflict check but stored as a non-edge.
    pub fn edge(&mut self, a: &str, b: &str, m: Label) -> Result<(), DiagramError> {
        if let Label::Finite(v) = m {
            if v < 2 {
                return Err(DiagramError::LabelTooSmall(v as u64));
            }
        }
        let s = *self
            .index
            .get(a)
            .ok_or_else(|| DiagramError::UnknownVertex(a.to_string()))?;
        let t = *self
            .index
            .get(b)
            .ok_or_else(|| DiagramError::UnknownVertex(b.to_string()))?;
        if s == t {
            return Err(DiagramError::Loop(a.to_string()));
        }
        let key = if s < t { (s, t) } else { (t, s) };
        match self.edges.get(&key) {
            Some(&prev) if prev != m => Err(DiagramError::ConflictingEdge {
                a: self.names[key.0].clone(),
                b: self.names[key.1].clone(),
                first: prev,
                second: m,
            }),
            _ => {
                self.edges.insert(key, m);
                Ok(())
            }
        }
    }

    pub fn with_edge(mut self, a: &str, b: &str, m: Label) -> Result<Self, DiagramError> {
        self.edge(a, b, m)?;
        Ok(self)
    }

    pub fn build(self) -> CoxeterDiagram {
        let n = self.names.len();
        let mut labels = vec![Label::COMMUTING; n * n];
        let mut adjacency = vec![0u64; n];
        for ((s, t), m) in self.edges {
            if m.is_commuting() {
                continue;
            }
            labels[s * n + t] = m;
            labels[t * n + s] = m;
            adjacency[s] |= 1 << t;
            adjacency[t] |= 1 << s;
        }
        for s in 0..n {
            labels[s * n + s] = Label::Finite(1);
        }
        CoxeterDiagram {
            id: DiagramId::fresh(),
            names: self.names,
            index: self.index,
            labels,
            adjacency,
        }
    }
}

/// Parses `.cox` text, discarding warnings.
pub fn parse_diagram(text: &str) -> Result<CoxeterDiagram, ParseError> {
    parse_diagram_with_warnings(text).map(|(d, _)| d)
}

/// Parses `.cox` text.
///
/// Grammar: `#` starts a comment; the first non-comment line is
/// `vertices <name>*`; every later line is `edge <name> <name> <label>` with
/// label an integer `>= 2` or `inf`.
pub fn parse_diagram_with_warnings(
    text: &str,
) -> Result<(CoxeterDiagram, Vec<ParseWarning>), ParseError> {
    let mut builder: Option<DiagramBuilder> = None;
    let mut warnings = Vec::new();
    let mut last_line = 0;

    for (line_idx, raw) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(kw_col, keyword)) = tokens.first() else {
            continue;
        };
        let err = |column: usize, kind: ParseErrorKind| ParseError {
            line: line_no,
            column,
            kind,
        };
        let syntax = |column: usize, msg: String| err(column, ParseErrorKind::Syntax(msg));

        match (keyword, builder.as_mut()) {
            ("vertices", None) => {
                let mut b = DiagramBuilder::new();
                for &(col, name) in &tokens[1..] {
                    b.vertex(name).map_err(|e| err(col, e.into()))?;
                }
                builder = Some(b);
            }
            ("vertices", Some(_)) => {
                return Err(syntax(kw_col, "duplicate `vertices` line".into()));
            }
            ("edge", None) => {
                return Err(syntax(
                    kw_col,
                    "expected `vertices` line before edges".into(),
                ));
            }
            ("edge", Some(b)) => {
                if tokens.len() != 4 {
                    let col = tokens.get(4).map_or(kw_col, |t| t.0);
                    return Err(syntax(
                        col,
                        format!("`edge` takes 3 arguments, found {}", tokens.len() - 1),
                    ));
                }
                let (a_col, a) = tokens[1];
                let (b_col, bname) = tokens[2];
                let (l_col, ltok) = tokens[3];
                let label = match ltok.parse::<Label>() {
                    Ok(l) => l,
                    Err(LabelParseError::TooSmall(v)) => {
                        return Err(err(l_col, DiagramError::LabelTooSmall(v).into()))
                    }
                    Err(e @ LabelParseError::Malformed(_)) => {
                        return Err(syntax(l_col, e.to_string()))
                    }
                };
                b.edge(a, bname, label).map_err(|e| {
                    let col = match &e {
                        DiagramError::UnknownVertex(n) if n == bname && b.index.contains_key(a) => {
                            b_col
                        }
                        DiagramError::UnknownVertex(_) | DiagramError::Loop(_) => a_col,
                        _ => kw_col,
                    };
                    err(col, e.into())
                })?;
                if label.is_commuting() {
                    warnings.push(ParseWarning {
                        line: line_no,
                        column: l_col,
                        message: format!(
                            "explicit label 2 on {a}-{bname} means no edge; normalized away"
                        ),
                    });
                }
            }
            (other, _) => {
                return Err(syntax(kw_col, format!("unknown keyword `{other}`")));
            }
        }
    }

    match builder {
        Some(b) => Ok((b.build(), warnings)),
        None => Err(ParseError {
            line: last_line.max(1),
            column: 1,
            kind: ParseErrorKind::Syntax("missing `vertices` line".into()),
        }),
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c + 1, &line[b..byte]));
            }
        } else if start.is_none() {
            start = Some((col, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c + 1, &line[b..]));
    }
    out
}
