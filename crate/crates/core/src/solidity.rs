//! Deciding strong solidity of `L(W)` from the diagram.
//!
//! Two independent procedures:
//!
//! * [`decide_direct`] searches for the forbidden pattern itself: subsets
//!   `J1, J2` with `[J1, J2] = 1`, `W_{J1}` infinite and `W_{J2}`
//!   non-elementary word hyperbolic. Any such `J1` lies in `J2^⊥`, so only
//!   `J1 = J2^⊥` needs checking. A smallest `J2` is always connected: the
//!   unique infinite component of a word hyperbolic `J2` works on its own.
//! * [`decide_caprace`] checks that `T^⊥` is spherical for every minimal
//!   hyperbolic `T`.
//!
//! A non-solid verdict carries a [`Witness`] `(J1, J2)`.

use std::fmt;

use thiserror::Error;

use crate::classify::Analysis;
use crate::diagram::{full_mask, CoxeterDiagram, DiagramError, VertexSet};
use crate::family::{recognize_connected, FamilyVerdict};
use crate::tits::{self, OracleSummary};

/// Certificate of a `Z x F2` subgroup: `Z` inside the infinite `W_{J1}`,
/// `F2` inside the commuting non-elementary hyperbolic `W_{J2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub j1: VertexSet,
    pub j2: VertexSet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Direct search for the commuting pair.
    Direct,
    /// Perps of minimal hyperbolic subsets.
    Caprace,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Caprace => "caprace",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub strongly_solid: bool,
    pub witness: Option<Witness>,
    pub method: Method,
}

impl Decision {
    fn from_witness(witness: Option<Witness>, method: Method) -> Self {
        Decision {
            strongly_solid: witness.is_none(),
            witness,
            method,
        }
    }
}

pub fn decide_direct(analysis: &Analysis<'_>) -> Decision {
    let d = analysis.diagram();
    let witness = analysis.connected_subsets().into_iter().find_map(|j| {
        let perp = d.perp_mask(j);
        // cheap test first; most candidates die here
        if analysis.spherical_mask(perp) || !analysis.nonelementary_mask(j) {
            return None;
        }
        Some(Witness {
            j1: d.set_unchecked(perp),
            j2: d.set_unchecked(j),
        })
    });
    Decision::from_witness(witness, Method::Direct)
}

pub fn decide_caprace(analysis: &Analysis<'_>) -> Decision {
    let d = analysis.diagram();
    let witness = analysis
        .minimal_hyperbolic_subsets()
        .into_iter()
        .find_map(|t| {
            let perp = d.perp_mask(t.bits());
            (!analysis.spherical_mask(perp)).then(|| Witness {
                j1: d.set_unchecked(perp),
                j2: t,
            })
        });
    Decision::from_witness(witness, Method::Caprace)
}

/// The first witness clause that fails.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessViolation {
    #[error("witness sets do not belong to this diagram")]
    Foreign,
    #[error("J1 and J2 overlap")]
    Overlap,
    #[error("{s} in J1 does not commute with {t} in J2")]
    NotCommuting { s: String, t: String },
    #[error("J1 generates a finite group")]
    J1Finite,
    #[error("J2 is not word hyperbolic")]
    J2NotHyperbolic,
    #[error("J2 is Euclidean, hence elementary")]
    J2Elementary,
}

/// Rechecks every witness clause with a fresh analysis.
pub fn verify_witness(d: &CoxeterDiagram, w: &Witness) -> Result<(), WitnessViolation> {
    if d.check_owned(&w.j1).is_err() || d.check_owned(&w.j2).is_err() {
        return Err(WitnessViolation::Foreign);
    }
    if !w
        .j1
        .intersection(&w.j2)
        .map_err(|_| WitnessViolation::Foreign)?
        .is_empty()
    {
        return Err(WitnessViolation::Overlap);
    }
    for t in w.j2.iter() {
        if let Some(s) = w.j1.iter().find(|&s| d.neighbors(t) & (1 << s) != 0) {
            return Err(WitnessViolation::NotCommuting {
                s: d.name(s).to_string(),
                t: d.name(t).to_string(),
            });
        }
    }
    let fresh = Analysis::new(d);
    if fresh.spherical_mask(w.j1.bits()) {
        return Err(WitnessViolation::J1Finite);
    }
    if !fresh.word_hyperbolic_mask(w.j2.bits()) {
        return Err(WitnessViolation::J2NotHyperbolic);
    }
    if fresh.euclidean_mask(w.j2.bits()) {
        return Err(WitnessViolation::J2Elementary);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentFamily {
    pub members: VertexSet,
    pub verdict: FamilyVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalHyperbolicEntry {
    pub subset: VertexSet,
    pub perp: VertexSet,
    pub perp_spherical: bool,
}

/// Every verdict for one diagram.
///
/// `strongly_solid`, `biexact`, `is_relatively_hyperbolic_vab` and
/// `!contains_zxf2` are one computed bit shown under each of its equivalent
/// names.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassificationReport {
    pub rank: usize,
    pub edge_count: usize,
    pub components: Vec<ComponentFamily>,
    pub is_finite: bool,
    pub is_affine: bool,
    pub is_euclidean: bool,
    pub is_amenable: bool,
    pub contains_f2: bool,
    pub is_word_hyperbolic: bool,
    pub is_nonelementary_hyperbolic: bool,
    pub is_minimal_hyperbolic: bool,
    pub is_relatively_hyperbolic_vab: bool,
    pub contains_zxf2: bool,
    pub strongly_solid: bool,
    pub biexact: bool,
    pub decision_direct: Decision,
    pub decision_caprace: Decision,
    pub minimal_hyperbolic_subsets: Vec<MinimalHyperbolicEntry>,
    pub oracle: Option<OracleSummary>,
}

impl ClassificationReport {
    /// The witness of a non-solid verdict, from the direct search.
    pub fn witness(&self) -> Option<&Witness> {
        self.decision_direct.witness.as_ref()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error(
        "procedures disagree: direct search says strongly_solid={}, minimal-hyperbolic perps say strongly_solid={}",
        direct.strongly_solid,
        caprace.strongly_solid
    )]
    ProcedureDisagreement { direct: Decision, caprace: Decision },
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

pub fn classify_report(d: &CoxeterDiagram) -> Result<ClassificationReport, EngineError> {
    let analysis = Analysis::new(d);
    report_from(&analysis, None)
}

/// As [`classify_report`], with the numeric Tits representation checks
/// attached. `hunt_budget` bounds the infinite-order search.
pub fn classify_report_with_oracle(
    d: &CoxeterDiagram,
    hunt_budget: usize,
) -> Result<ClassificationReport, EngineError> {
    let analysis = Analysis::new(d);
    let oracle = tits::cross_check(&analysis, hunt_budget);
    report_from(&analysis, Some(oracle))
}

fn report_from(
    analysis: &Analysis<'_>,
    oracle: Option<OracleSummary>,
) -> Result<ClassificationReport, EngineError> {
    let d = analysis.diagram();
    let direct = decide_direct(analysis);
    let caprace = decide_caprace(analysis);
    if direct.strongly_solid != caprace.strongly_solid {
        return Err(EngineError::ProcedureDisagreement { direct, caprace });
    }
    let all = full_mask(d.rank());
    let solid = direct.strongly_solid;
    let euclidean = analysis.euclidean_mask(all);

    let components = d
        .components()
        .into_iter()
        .map(|c| ComponentFamily {
            members: c,
            verdict: recognize_connected(d, c.bits()),
        })
        .collect();
    let minimal_hyperbolic_subsets = analysis
        .minimal_hyperbolic_subsets()
        .into_iter()
        .map(|t| {
            let perp = d.perp_mask(t.bits());
            MinimalHyperbolicEntry {
                subset: t,
                perp: d.set_unchecked(perp),
                perp_spherical: analysis.spherical_mask(perp),
            }
        })
        .collect();

    Ok(ClassificationReport {
        rank: d.rank(),
        edge_count: d.edges().count(),
        components,
        is_finite: analysis.spherical_mask(all),
        is_affine: analysis.affine_mask(all),
        is_euclidean: euclidean,
        is_amenable: euclidean,
        contains_f2: !euclidean,
        is_word_hyperbolic: analysis.word_hyperbolic_mask(all),
        is_nonelementary_hyperbolic: analysis.nonelementary_mask(all),
        is_minimal_hyperbolic: analysis.minimal_hyperbolic_mask(all),
        is_relatively_hyperbolic_vab: solid,
        contains_zxf2: !solid,
        strongly_solid: solid,
        biexact: solid,
        decision_direct: direct,
        decision_caprace: caprace,
        minimal_hyperbolic_subsets,
        oracle,
    })
}
