//! Numeric cross-checks through the Tits representation.
//!
//! Nothing here feeds a decision; the combinatorial tables are authoritative
//! and these routines exist to catch mistakes in them.

use std::collections::HashSet;
use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur, SymmetricEigen};

use crate::classify::{connected_subsets, Analysis};
use crate::diagram::{bit_indices, full_mask, CoxeterDiagram, DiagramError, Label, VertexSet};

pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
pub const DEFAULT_RELATION_TOL: f64 = 1e-8;
pub const DEFAULT_HUNT_BUDGET: usize = 10_000;

/// Above this rank only components are checked against the tables.
const EXHAUSTIVE_ORACLE_RANK: usize = 12;

/// Symmetric matrix `c_st = -cos(pi / m_st)`, with `c_ss = 1` and `-1` for
/// infinite labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CosineMatrix(pub DMatrix<f64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Signature {
    pub fn new(positive: usize, negative: usize, zero: usize) -> Self {
        Signature {
            positive,
            negative,
            zero,
        }
    }

    pub fn rank(&self) -> usize {
        self.positive + self.negative + self.zero
    }

    pub fn is_positive_definite(&self) -> bool {
        self.negative == 0 && self.zero == 0
    }

    /// Positive semidefinite with a one-dimensional kernel.
    pub fn is_corank_one(&self) -> bool {
        self.negative == 0 && self.zero == 1
    }

    /// Type `(n - 1, 1)`.
    pub fn is_lorentzian(&self) -> bool {
        self.negative == 1 && self.zero == 0
    }
}

/// The matrix of `x -> x - 2 B(x, e_s) e_s` in the basis `e_t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionMatrix(pub DMatrix<f64>);

fn cosine(m: Label) -> f64 {
    match m {
        Label::Finite(1) => 1.0,
        Label::Finite(2) => 0.0,
        Label::Finite(m) => -(PI / m as f64).cos(),
        Label::Infinity => -1.0,
    }
}

pub fn cosine_matrix(d: &CoxeterDiagram) -> CosineMatrix {
    cosine_matrix_of(d, full_mask(d.rank()))
}

pub(crate) fn cosine_matrix_of(d: &CoxeterDiagram, mask: u64) -> CosineMatrix {
    let idx: Vec<usize> = bit_indices(mask).collect();
    let n = idx.len();
    CosineMatrix(DMatrix::from_fn(n, n, |i, j| {
        cosine(d.label(idx[i], idx[j]))
    }))
}

pub fn signature(m: &CosineMatrix, zero_tol: f64) -> Signature {
    let mut sig = Signature::new(0, 0, 0);
    if m.0.nrows() == 0 {
        return sig;
    }
    for &ev in SymmetricEigen::new(m.0.clone()).eigenvalues.iter() {
        if ev > zero_tol {
            sig.positive += 1;
        } else if ev < -zero_tol {
            sig.negative += 1;
        } else {
            sig.zero += 1;
        }
    }
    sig
}

pub fn reflection_matrix(d: &CoxeterDiagram, s: usize) -> Result<ReflectionMatrix, DiagramError> {
    if s >= d.rank() {
        return Err(DiagramError::IndexOutOfRange(s));
    }
    Ok(ReflectionMatrix(reflection(d, s)))
}

pub fn reflection_matrix_by_name(
    d: &CoxeterDiagram,
    name: &str,
) -> Result<ReflectionMatrix, DiagramError> {
    let s = d
        .index_of(name)
        .ok_or_else(|| DiagramError::UnknownVertex(name.to_string()))?;
    reflection_matrix(d, s)
}

fn reflection(d: &CoxeterDiagram, s: usize) -> DMatrix<f64> {
    let n = d.rank();
    let mut m = DMatrix::identity(n, n);
    for t in 0..n {
        m[(s, t)] -= 2.0 * cosine(d.label(s, t));
    }
    m
}

fn max_abs_diff_from_identity(m: &DMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((m[(i, j)] - target).abs());
        }
    }
    worst
}

/// `(rho_s rho_t)^{m_st} = I` within `tol` entrywise for every finite label.
pub fn check_relations(d: &CoxeterDiagram, tol: f64) -> bool {
    let n = d.rank();
    let refl: Vec<DMatrix<f64>> = (0..n).map(|s| reflection(d, s)).collect();
    (0..n).all(|s| {
        ((s + 1)..n).all(|t| match d.label(s, t) {
            Label::Infinity => true,
            Label::Finite(m) => {
                let prod = &refl[s] * &refl[t];
                let mut p = DMatrix::identity(n, n);
                for _ in 0..m {
                    p = &p * &prod;
                }
                max_abs_diff_from_identity(&p) <= tol
            }
        })
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Evidence {
    /// The matrix has an eigenvalue off the unit circle.
    SpectralRadius(f64),
    /// No power up to 64 is the identity and the powers keep growing.
    NormGrowth { power: u64, norm: f64 },
}

/// A word whose image under the Tits representation has infinite order.
#[derive(Debug, Clone, PartialEq)]
pub struct InfiniteOrderCertificate {
    pub word: Vec<usize>,
    pub evidence: Evidence,
}

const MAX_IDENTITY_POWER: u32 = 64;
const SPECTRAL_MARGIN: f64 = 1e-6;
const GROWTH_THRESHOLD: f64 = 1e3;
const IDENTITY_TOL: f64 = 1e-8;
const DOUBLINGS: u32 = 14;

fn spectral_radius(m: &DMatrix<f64>) -> Option<f64> {
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 10_000)?;
    schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z.norm())
        .fold(None, |acc: Option<f64>, r| {
            Some(acc.map_or(r, |a| a.max(r)))
        })
}

/// Heuristic, one-sided test that `m` has infinite order.
///
/// Finite order is assumed as soon as some power `k <= 64` is the identity.
/// Otherwise the matrix is certified by a spectral radius above `1 + 1e-6`,
/// by `||m^64|| > 1e3`, or by norms of `m^(64 * 2^j)` that keep growing by a
/// factor of at least 1.5 for three doublings and end above `1e3` (this last
/// case catches unipotent parts, whose powers only grow polynomially).
fn certify_infinite_order(m: &DMatrix<f64>) -> Option<Evidence> {
    let n = m.nrows();
    let mut p = m.clone();
    let mut next = DMatrix::zeros(n, n);
    let mut largest = p.norm().max(1.0);
    for k in 1..=MAX_IDENTITY_POWER {
        if k > 1 {
            p.mul_to(m, &mut next);
            std::mem::swap(&mut p, &mut next);
        }
        let norm = p.norm();
        if !norm.is_finite() {
            break;
        }
        largest = largest.max(norm);
        if max_abs_diff_from_identity(&p) <= IDENTITY_TOL * largest {
            return None;
        }
    }
    if let Some(r) = spectral_radius(m) {
        if r > 1.0 + SPECTRAL_MARGIN {
            return Some(Evidence::SpectralRadius(r));
        }
    }
    let norm64 = p.norm();
    if !norm64.is_finite() || norm64 > GROWTH_THRESHOLD {
        return Some(Evidence::NormGrowth {
            power: MAX_IDENTITY_POWER as u64,
            norm: norm64,
        });
    }
    let mut q = p;
    let mut prev = norm64.max(f64::MIN_POSITIVE);
    let mut power = MAX_IDENTITY_POWER as u64;
    let mut streak = 0;
    for _ in 0..DOUBLINGS {
        q = &q * &q;
        power *= 2;
        let norm = q.norm();
        if !norm.is_finite() {
            return Some(Evidence::NormGrowth { power, norm });
        }
        streak = if norm >= 1.5 * prev { streak + 1 } else { 0 };
        if streak >= 3 && norm > GROWTH_THRESHOLD {
            return Some(Evidence::NormGrowth { power, norm });
        }
        prev = norm.max(f64::MIN_POSITIVE);
    }
    None
}

/// Searches for an element of infinite order among at most `budget` words.
///
/// Candidates are first the Coxeter elements (generators in declaration
/// order) of each component with two or more vertices and of the whole
/// diagram, then all reduced words in shortlex order. A returned word proves
/// the group infinite; `None` proves nothing.
pub fn hunt_infinite_order(d: &CoxeterDiagram, budget: usize) -> Option<InfiniteOrderCertificate> {
    let n = d.rank();
    if n == 0 || budget == 0 {
        return None;
    }
    let refl: Vec<DMatrix<f64>> = (0..n).map(|s| reflection(d, s)).collect();
    let word_matrix = |w: &[usize]| {
        w.iter()
            .fold(DMatrix::identity(n, n), |acc, &s| acc * &refl[s])
    };

    let mut tried: HashSet<Vec<usize>> = HashSet::new();
    let mut spent = 0usize;
    let mut coxeter_words: Vec<Vec<usize>> = d
        .components()
        .iter()
        .filter(|c| c.len() >= 2)
        .map(|c| c.iter().collect())
        .collect();
    coxeter_words.push((0..n).collect());
    for w in coxeter_words {
        if spent == budget {
            return None;
        }
        if !tried.insert(w.clone()) {
            continue;
        }
        spent += 1;
        if let Some(evidence) = certify_infinite_order(&word_matrix(&w)) {
            return Some(InfiniteOrderCertificate { word: w, evidence });
        }
    }

    // Reduced words (no letter twice in a row) of one length at a time, in
    // lexicographic order, each extended from its parent's matrix.
    let cap = budget - spent + tried.len();
    let mut level: Vec<(Vec<usize>, DMatrix<f64>)> = vec![(Vec::new(), DMatrix::identity(n, n))];
    loop {
        let mut next = Vec::new();
        'extend: for (w, m) in &level {
            for (s, r) in refl.iter().enumerate() {
                if w.last() == Some(&s) {
                    continue;
                }
                if next.len() == cap {
                    break 'extend;
                }
                let mut word = w.clone();
                word.push(s);
                next.push((word, m * r));
            }
        }
        if next.is_empty() {
            return None;
        }
        for (w, m) in &next {
            if tried.contains(w) {
                continue;
            }
            if spent == budget {
                return None;
            }
            spent += 1;
            if let Some(evidence) = certify_infinite_order(m) {
                return Some(InfiniteOrderCertificate {
                    word: w.clone(),
                    evidence,
                });
            }
        }
        level = next;
    }
}

/// Table-versus-signature agreement and representation checks for one diagram.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSummary {
    pub signature: Signature,
    /// Whether every connected subdiagram was checked, or only the components.
    pub exhaustive: bool,
    pub subdiagrams_checked: usize,
    pub table_mismatches: Vec<VertexSet>,
    pub minimal_hyperbolic_checked: usize,
    pub minimal_hyperbolic_mismatches: Vec<VertexSet>,
    pub relations_hold: bool,
    pub hunt_budget: usize,
    pub infinite_order: Option<InfiniteOrderCertificate>,
    /// A certificate was found although the tables say the group is finite.
    pub finite_group_certified_infinite: bool,
}

impl OracleSummary {
    pub fn passed(&self) -> bool {
        self.table_mismatches.is_empty()
            && self.minimal_hyperbolic_mismatches.is_empty()
            && self.relations_hold
            && !self.finite_group_certified_infinite
    }
}

/// Does the numeric signature of the connected subset `mask` agree with the
/// table verdict?
pub(crate) fn table_agrees(analysis: &Analysis<'_>, mask: u64, zero_tol: f64) -> bool {
    let sig = signature(&cosine_matrix_of(analysis.diagram(), mask), zero_tol);
    analysis.spherical_mask(mask) == sig.is_positive_definite()
        && analysis.irreducible_affine_mask(mask) == sig.is_corank_one()
}

pub fn cross_check(analysis: &Analysis<'_>, hunt_budget: usize) -> OracleSummary {
    let d = analysis.diagram();
    let all = full_mask(d.rank());
    let exhaustive = d.rank() <= EXHAUSTIVE_ORACLE_RANK;
    let subsets = if exhaustive {
        connected_subsets(d, all)
    } else {
        d.components().iter().map(|c| c.bits()).collect()
    };
    let mut table_mismatches: Vec<VertexSet> = subsets
        .iter()
        .filter(|&&m| !table_agrees(analysis, m, DEFAULT_ZERO_TOL))
        .map(|&m| d.set_unchecked(m))
        .collect();
    table_mismatches.sort_by(|a, b| a.canonical_cmp(b));

    let mh = analysis.minimal_hyperbolic_subsets();
    let minimal_hyperbolic_mismatches = mh
        .iter()
        .filter(|t| !signature(&cosine_matrix_of(d, t.bits()), DEFAULT_ZERO_TOL).is_lorentzian())
        .copied()
        .collect();

    let infinite_order = hunt_infinite_order(d, hunt_budget);
    OracleSummary {
        signature: signature(&cosine_matrix(d), DEFAULT_ZERO_TOL),
        exhaustive,
        subdiagrams_checked: subsets.len(),
        table_mismatches,
        minimal_hyperbolic_checked: mh.len(),
        minimal_hyperbolic_mismatches,
        relations_hold: check_relations(d, DEFAULT_RELATION_TOL),
        hunt_budget,
        finite_group_certified_infinite: infinite_order.is_some() && analysis.spherical_mask(all),
        infinite_order,
    }
}
