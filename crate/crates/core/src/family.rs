//! Named irreducible spherical and affine Coxeter diagrams.
//!
//! Recognition is structural: a connected diagram is classified by its shape
//! (path, cycle, three-armed star, double fork) and the labels along it.
//! Families with unbounded rank are matched parametrically.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{bit_indices, full_mask, CoxeterDiagram, DiagramBuilder, Label};

/// A classified irreducible diagram. Subscripts follow the usual convention,
/// so the affine families have one more vertex than their subscript.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyName {
    A(u32),
    B(u32),
    D(u32),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
    ATilde(u32),
    BTilde(u32),
    CTilde(u32),
    DTilde(u32),
    E6Tilde,
    E7Tilde,
    E8Tilde,
    F4Tilde,
    G2Tilde,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("illegal family {0}: {1}")]
    IllegalRank(String, &'static str),
    #[error("unknown family token `{0}`")]
    UnknownToken(String),
    #[error("diagram is empty")]
    Empty,
    #[error("diagram is disconnected")]
    Disconnected,
    #[error("vertex prefix `{0}` does not yield valid vertex names")]
    BadPrefix(String),
}

impl FamilyName {
    /// Number of vertices of the diagram.
    pub fn rank(&self) -> usize {
        use FamilyName::*;
        match *self {
            A(n) | B(n) | D(n) => n as usize,
            E6 => 6,
            E7 => 7,
            E8 => 8,
            F4 | H4 => 4,
            H3 => 3,
            I2(_) => 2,
            ATilde(n) | BTilde(n) | CTilde(n) | DTilde(n) => n as usize + 1,
            E6Tilde => 7,
            E7Tilde => 8,
            E8Tilde => 9,
            F4Tilde => 5,
            G2Tilde => 3,
        }
    }

    pub fn is_affine(&self) -> bool {
        use FamilyName::*;
        matches!(
            self,
            ATilde(_)
                | BTilde(_)
                | CTilde(_)
                | DTilde(_)
                | E6Tilde
                | E7Tilde
                | E8Tilde
                | F4Tilde
                | G2Tilde
        )
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        use FamilyName::*;
        let bad = |why| Err(FamilyError::IllegalRank(self.to_string(), why));
        match *self {
            A(n) if n < 1 => bad("A needs n >= 1"),
            B(n) if n < 2 => bad("B needs n >= 2"),
            D(n) if n < 4 => bad("D needs n >= 4"),
            I2(m) if m < 3 => bad("I2 needs a finite m >= 3"),
            ATilde(n) if n < 1 => bad("Atilde needs n >= 1"),
            BTilde(n) if n < 3 => bad("Btilde needs n >= 3"),
            CTilde(n) if n < 2 => bad("Ctilde needs n >= 2"),
            DTilde(n) if n < 4 => bad("Dtilde needs n >= 4"),
            _ if self.rank() > crate::diagram::MAX_VERTICES => bad("too many vertices"),
            _ => Ok(()),
        }
    }

    /// Rank-2 spherical diagrams are reported as `I2(m)`; this maps `A2` and
    /// `B2` onto that form so names compare as diagrams do.
    pub fn canonical(self) -> FamilyName {
        match self {
            FamilyName::A(2) => FamilyName::I2(3),
            FamilyName::B(2) => FamilyName::I2(4),
            other => other,
        }
    }

    /// The verdict `recognize_irreducible` gives for this family's diagram.
    pub fn verdict(self) -> FamilyVerdict {
        let name = self.canonical();
        if name.is_affine() {
            FamilyVerdict::Affine(name)
        } else {
            FamilyVerdict::Spherical(name)
        }
    }
}

impl fmt::Display for FamilyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilyName::*;
        match self {
            A(n) => write!(f, "A{n}"),
            B(n) => write!(f, "B{n}"),
            D(n) => write!(f, "D{n}"),
            E6 => f.write_str("E6"),
            E7 => f.write_str("E7"),
            E8 => f.write_str("E8"),
            F4 => f.write_str("F4"),
            H3 => f.write_str("H3"),
            H4 => f.write_str("H4"),
            I2(m) => write!(f, "I2:{m}"),
            ATilde(n) => write!(f, "Atilde{n}"),
            BTilde(n) => write!(f, "Btilde{n}"),
            CTilde(n) => write!(f, "Ctilde{n}"),
            DTilde(n) => write!(f, "Dtilde{n}"),
            E6Tilde => f.write_str("E6tilde"),
            E7Tilde => f.write_str("E7tilde"),
            E8Tilde => f.write_str("E8tilde"),
            F4Tilde => f.write_str("F4tilde"),
            G2Tilde => f.write_str("G2tilde"),
        }
    }
}

/// Token grammar: `A<n>`, `B<n>`, `D<n>`, `E6`..`E8`, `F4`, `H3`, `H4`,
/// `I2:<m>`, `Atilde<n>`, `Btilde<n>`, `Ctilde<n>`, `Dtilde<n>`,
/// `E6tilde`..`E8tilde`, `F4tilde`, `G2tilde`. The result is validated.
impl FromStr for FamilyName {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use FamilyName::*;
        let unknown = || FamilyError::UnknownToken(s.to_string());
        if !s.is_ascii() {
            return Err(unknown());
        }
        let number = |digits: &str| -> Result<u32, FamilyError> {
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(unknown());
            }
            digits.parse().map_err(|_| unknown())
        };
        let name = match s {
            "E6" => E6,
            "E7" => E7,
            "E8" => E8,
            "F4" => F4,
            "H3" => H3,
            "H4" => H4,
            "E6tilde" => E6Tilde,
            "E7tilde" => E7Tilde,
            "E8tilde" => E8Tilde,
            "F4tilde" => F4Tilde,
            "G2tilde" => G2Tilde,
            _ => {
                if let Some(m) = s.strip_prefix("I2:") {
                    I2(number(m)?)
                } else if s.get(1..6) == Some("tilde") {
                    let (head, digits) = (&s[..1], &s[6..]);
                    let n = number(digits)?;
                    match head {
                        "A" => ATilde(n),
                        "B" => BTilde(n),
                        "C" => CTilde(n),
                        "D" => DTilde(n),
                        _ => return Err(unknown()),
                    }
                } else {
                    let (head, digits) = s.split_at(s.len().min(1));
                    let n = number(digits)?;
                    match head {
                        "A" => A(n),
                        "B" => B(n),
                        "D" => D(n),
                        _ => return Err(unknown()),
                    }
                }
            }
        };
        name.validate()?;
        Ok(name)
    }
}

impl Serialize for FamilyName {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FamilyName {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "family", rename_all = "snake_case")]
pub enum FamilyVerdict {
    Spherical(FamilyName),
    Affine(FamilyName),
    Neither,
}

impl FamilyVerdict {
    pub fn is_spherical(&self) -> bool {
        matches!(self, FamilyVerdict::Spherical(_))
    }

    pub fn is_affine(&self) -> bool {
        matches!(self, FamilyVerdict::Affine(_))
    }

    pub fn family(&self) -> Option<FamilyName> {
        match *self {
            FamilyVerdict::Spherical(f) | FamilyVerdict::Affine(f) => Some(f),
            FamilyVerdict::Neither => None,
        }
    }
}

/// Classifies a connected, nonempty diagram against the spherical and affine
/// tables. Vertex names play no role.
pub fn recognize_irreducible(d: &CoxeterDiagram) -> Result<FamilyVerdict, FamilyError> {
    let all = full_mask(d.rank());
    if d.rank() == 0 {
        return Err(FamilyError::Empty);
    }
    if !d.is_connected_mask(all) {
        return Err(FamilyError::Disconnected);
    }
    Ok(recognize_connected(d, all))
}

/// Structural recognizer for the induced subdiagram on `mask`, which must be
/// nonempty and connected.
pub(crate) fn recognize_connected(d: &CoxeterDiagram, mask: u64) -> FamilyVerdict {
    use FamilyVerdict::*;
    let n = mask.count_ones() as usize;
    debug_assert!(n > 0 && d.is_connected_mask(mask));

    if n == 1 {
        return Spherical(FamilyName::A(1));
    }
    if n == 2 {
        let mut it = bit_indices(mask);
        let (s, t) = (it.next().unwrap(), it.next().unwrap());
        return match d.label(s, t) {
            Label::Finite(m) => Spherical(FamilyName::I2(m)),
            Label::Infinity => Affine(FamilyName::ATilde(1)),
        };
    }

    // Rank >= 3: no infinite labels appear in either table.
    let mut degree = [0u32; 64];
    let mut edges = 0usize;
    let mut max_degree = 0;
    for s in bit_indices(mask) {
        let nbrs = d.neighbors(s) & mask;
        for t in bit_indices(nbrs) {
            if d.label(s, t) == Label::Infinity {
                return Neither;
            }
        }
        degree[s] = nbrs.count_ones();
        max_degree = max_degree.max(degree[s]);
        edges += degree[s] as usize;
    }
    edges /= 2;

    if edges == n {
        // connected with n edges and all degrees 2 is a cycle
        if max_degree == 2 && all_labels(d, mask, 3) {
            return Affine(FamilyName::ATilde(n as u32 - 1));
        }
        return Neither;
    }
    if edges != n - 1 {
        return Neither;
    }

    let branch: Vec<usize> = bit_indices(mask).filter(|&s| degree[s] >= 3).collect();
    match (max_degree, branch.len()) {
        (1..=2, _) => {
            let start = bit_indices(mask).find(|&s| degree[s] == 1).unwrap();
            let labels = walk_arm(d, mask, usize::MAX, start);
            match_path(&labels)
        }
        (3, 1) => {
            let center = branch[0];
            let mut arms: Vec<Vec<u32>> = bit_indices(d.neighbors(center) & mask)
                .map(|first| {
                    let mut arm = vec![label_value(d, center, first)];
                    arm.extend(walk_arm(d, mask, center, first));
                    arm
                })
                .collect();
            arms.sort_by_key(|a| (a.len(), a.contains(&4)));
            match_star(&arms)
        }
        (3, 2) => {
            // two forks at the ends of a path
            let leaves = |c: usize| {
                bit_indices(d.neighbors(c) & mask)
                    .filter(|&t| degree[t] == 1)
                    .count()
            };
            if all_labels(d, mask, 3) && branch.iter().all(|&c| leaves(c) == 2) {
                Affine(FamilyName::DTilde(n as u32 - 1))
            } else {
                Neither
            }
        }
        (4, 1) if n == 5 && all_labels(d, mask, 3) => Affine(FamilyName::DTilde(4)),
        _ => Neither,
    }
}

fn label_value(d: &CoxeterDiagram, s: usize, t: usize) -> u32 {
    d.label(s, t)
        .order()
        .expect("infinite labels rejected earlier")
}

fn all_labels(d: &CoxeterDiagram, mask: u64, m: u32) -> bool {
    bit_indices(mask)
        .all(|s| bit_indices(d.neighbors(s) & mask).all(|t| d.label(s, t) == Label::Finite(m)))
}

/// Labels met walking from `from` through `start` until a vertex of degree
/// other than 2. `from` is the vertex we arrived from, if any.
fn walk_arm(d: &CoxeterDiagram, mask: u64, from: usize, start: usize) -> Vec<u32> {
    let mut labels = Vec::new();
    let mut prev = from;
    let mut cur = start;
    loop {
        let mut next = d.neighbors(cur) & mask;
        if prev != usize::MAX {
            next &= !(1u64 << prev);
        }
        if next.count_ones() != 1 {
            return labels;
        }
        let nxt = next.trailing_zeros() as usize;
        labels.push(label_value(d, cur, nxt));
        prev = cur;
        cur = nxt;
    }
}

fn match_path(labels: &[u32]) -> FamilyVerdict {
    use FamilyName::*;
    use FamilyVerdict::*;
    let n = labels.len() as u32 + 1;
    let rev: Vec<u32> = labels.iter().rev().copied().collect();
    let either = |f: &dyn Fn(&[u32]) -> bool| f(labels) || f(&rev);
    let threes = |s: &[u32]| s.iter().all(|&m| m == 3);

    if threes(labels) {
        return Spherical(A(n));
    }
    if either(&|s| s[s.len() - 1] == 4 && threes(&s[..s.len() - 1])) {
        return Spherical(B(n));
    }
    if labels == [3, 4, 3] {
        return Spherical(F4);
    }
    if either(&|s| s == [5, 3]) {
        return Spherical(H3);
    }
    if either(&|s| s == [5, 3, 3]) {
        return Spherical(H4);
    }
    if labels[0] == 4 && labels[labels.len() - 1] == 4 && threes(&labels[1..labels.len() - 1]) {
        return Affine(CTilde(n - 1));
    }
    if either(&|s| s == [3, 3, 4, 3]) {
        return Affine(F4Tilde);
    }
    if either(&|s| s == [6, 3]) {
        return Affine(G2Tilde);
    }
    Neither
}

/// `arms` hold labels outward from the branch vertex, sorted by length.
fn match_star(arms: &[Vec<u32>]) -> FamilyVerdict {
    use FamilyName::*;
    use FamilyVerdict::*;
    let lengths: Vec<usize> = arms.iter().map(|a| a.len()).collect();
    let n = lengths.iter().sum::<usize>() as u32 + 1;
    let fours = arms.iter().flatten().filter(|&&m| m == 4).count();
    let others = arms.iter().flatten().filter(|&&m| m != 3 && m != 4).count();
    if others > 0 {
        return Neither;
    }
    match (fours, lengths.as_slice()) {
        (0, [1, 1, _]) => Spherical(D(n)),
        (0, [1, 2, 2]) => Spherical(E6),
        (0, [1, 2, 3]) => Spherical(E7),
        (0, [1, 2, 4]) => Spherical(E8),
        (0, [2, 2, 2]) => Affine(E6Tilde),
        (0, [1, 3, 3]) => Affine(E7Tilde),
        (0, [1, 2, 5]) => Affine(E8Tilde),
        (1, [1, 1, _]) if arms[2].last() == Some(&4) => Affine(BTilde(n - 1)),
        _ => Neither,
    }
}

/// Builds the standard diagram of a family with vertices `{prefix}0`, `{prefix}1`, ...
pub fn build_family(name: FamilyName, vertex_prefix: &str) -> Result<CoxeterDiagram, FamilyError> {
    use FamilyName::*;
    name.validate()?;
    let k = name.rank();
    let mut b = DiagramBuilder::new();
    for i in 0..k {
        b.vertex(&format!("{vertex_prefix}{i}"))
            .map_err(|_| FamilyError::BadPrefix(vertex_prefix.to_string()))?;
    }
    let mut edge = |s: usize, t: usize, m: Label| {
        b.edge(
            &format!("{vertex_prefix}{s}"),
            &format!("{vertex_prefix}{t}"),
            m,
        )
        .expect("family edges are valid");
    };
    let three = Label::Finite(3);
    let path = |labels: &[u32], edge: &mut dyn FnMut(usize, usize, Label)| {
        for (i, &m) in labels.iter().enumerate() {
            edge(i, i + 1, Label::Finite(m));
        }
    };
    match name {
        A(_) => path(&vec![3; k - 1], &mut edge),
        B(_) => {
            let mut l = vec![3; k - 1];
            l[k - 2] = 4;
            path(&l, &mut edge)
        }
        D(_) => {
            path(&vec![3; k - 2], &mut edge);
            edge(k - 3, k - 1, three);
        }
        E6 | E7 | E8 => {
            path(&vec![3; k - 2], &mut edge);
            edge(2, k - 1, three);
        }
        F4 => path(&[3, 4, 3], &mut edge),
        H3 => path(&[5, 3], &mut edge),
        H4 => path(&[5, 3, 3], &mut edge),
        I2(m) => edge(0, 1, Label::Finite(m)),
        ATilde(1) => edge(0, 1, Label::Infinity),
        ATilde(_) => {
            path(&vec![3; k - 1], &mut edge);
            edge(0, k - 1, three);
        }
        BTilde(_) => {
            // fork s0, s1 at s2, then a path ending in a 4
            edge(0, 2, three);
            let mut l = vec![3; k - 2];
            l[k - 3] = 4;
            for (i, &m) in l.iter().enumerate() {
                edge(i + 1, i + 2, Label::Finite(m));
            }
        }
        CTilde(_) => {
            let mut l = vec![3; k - 1];
            l[0] = 4;
            l[k - 2] = 4;
            path(&l, &mut edge)
        }
        DTilde(_) => {
            // forks at both ends: s0, s1 at s2 and s(k-2), s(k-1) at s(k-3)
            edge(0, 2, three);
            for i in 1..(k - 2) {
                edge(i, i + 1, three);
            }
            edge(k - 3, k - 1, three);
        }
        E6Tilde => {
            path(&[3, 3, 3, 3], &mut edge);
            edge(2, 5, three);
            edge(5, 6, three);
        }
        E7Tilde => {
            path(&[3; 6], &mut edge);
            edge(3, 7, three);
        }
        E8Tilde => {
            path(&[3; 7], &mut edge);
            edge(2, 8, three);
        }
        F4Tilde => path(&[3, 3, 4, 3], &mut edge),
        G2Tilde => path(&[6, 3], &mut edge),
    }
    Ok(b.build())
}

/// Every family with at most `max_vertices` vertices, with `I2(m)` for
/// `m` in `i2_params`. Rank-2 aliases (`A2`, `B2`) are omitted in favour of
/// their `I2` form.
pub fn families_up_to(max_vertices: usize, i2_params: &[u32]) -> Vec<FamilyName> {
    use FamilyName::*;
    let mut out = Vec::new();
    let up = max_vertices as u32;
    for n in 1..=up {
        if n != 2 {
            out.push(A(n));
        }
    }
    out.extend((3..=up).map(B));
    out.extend((4..=up).map(D));
    out.extend([E6, E7, E8, F4, H3, H4]);
    out.extend(i2_params.iter().copied().map(I2));
    out.extend((1..up).map(ATilde));
    out.extend((3..up).map(BTilde));
    out.extend((2..up).map(CTilde));
    out.extend((4..up).map(DTilde));
    out.extend([E6Tilde, E7Tilde, E8Tilde, F4Tilde, G2Tilde]);
    out.retain(|f| f.rank() <= max_vertices && f.validate().is_ok());
    out
}
