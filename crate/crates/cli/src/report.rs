//! The versioned JSON report and its plain-text rendering.

use std::fmt::Write as _;
use std::time::Instant;

use coxsolid_core::family::FamilyVerdict;
use coxsolid_core::solidity::{
    classify_report, ClassificationReport, Decision, EngineError, Witness,
};
use coxsolid_core::tits::{self, Evidence, OracleSummary, DEFAULT_HUNT_BUDGET};
use coxsolid_core::{Analysis, CoxeterDiagram, Label, VertexSet};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub vertices: Vec<String>,
    pub edges: Vec<Edge>,
    pub family_decomposition: Vec<Component>,
    pub predicates: Predicates,
    pub decisions: Decisions,
    pub witness: Option<WitnessEntry>,
    pub minimal_hyperbolic_subsets: Vec<MinimalHyperbolic>,
    pub oracle: Option<Oracle>,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<String>,
    #[serde(flatten)]
    pub verdict: FamilyVerdict,
}

/// `strongly_solid`, `biexact`, both relative hyperbolicity fields and the
/// negation of `contains_zxf2` are one computed value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Predicates {
    pub finite: bool,
    pub affine: bool,
    pub euclidean: bool,
    pub amenable: bool,
    pub contains_f2: bool,
    pub word_hyperbolic: bool,
    pub nonelementary_hyperbolic: bool,
    pub minimal_hyperbolic: bool,
    pub strongly_solid: bool,
    pub biexact: bool,
    pub contains_zxf2: bool,
    pub relatively_hyperbolic_virtually_abelian: bool,
    pub relatively_hyperbolic_amenable: bool,
}

impl Predicates {
    pub fn verdict_names_agree(&self) -> bool {
        let v = self.strongly_solid;
        self.biexact == v
            && self.contains_zxf2 != v
            && self.relatively_hyperbolic_virtually_abelian == v
            && self.relatively_hyperbolic_amenable == v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decisions {
    pub direct: DecisionEntry,
    pub caprace: DecisionEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionEntry {
    pub strongly_solid: bool,
    pub witness: Option<WitnessEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessEntry {
    pub j1: Vec<String>,
    pub j2: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalHyperbolic {
    pub subset: Vec<String>,
    pub perp: Vec<String>,
    pub perp_spherical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Oracle {
    pub passed: bool,
    pub signature: SignatureEntry,
    pub exhaustive: bool,
    pub subdiagrams_checked: usize,
    pub table_mismatches: Vec<Vec<String>>,
    pub minimal_hyperbolic_checked: usize,
    pub minimal_hyperbolic_mismatches: Vec<Vec<String>>,
    pub relations_hold: bool,
    pub hunt_budget: usize,
    /// Found by a one-sided numeric heuristic; `null` proves nothing.
    pub infinite_order: Option<InfiniteOrder>,
    pub finite_group_certified_infinite: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureEntry {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfiniteOrder {
    pub word: Vec<String>,
    pub evidence: EvidenceEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvidenceEntry {
    SpectralRadius { value: f64 },
    NormGrowth { power: u64, norm: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub classify_ms: f64,
    pub oracle_ms: Option<f64>,
}

/// Classifies `d`, attaching the numeric cross-checks when `oracle` is set.
pub fn classify_timed(
    d: &CoxeterDiagram,
    oracle: bool,
) -> Result<(ClassificationReport, Timings), EngineError> {
    let start = Instant::now();
    let mut report = classify_report(d)?;
    let classify_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut oracle_ms = None;
    if oracle {
        let start = Instant::now();
        report.oracle = Some(tits::cross_check(&Analysis::new(d), DEFAULT_HUNT_BUDGET));
        oracle_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok((
        report,
        Timings {
            classify_ms,
            oracle_ms,
        },
    ))
}

fn names(d: &CoxeterDiagram, set: &VertexSet) -> Vec<String> {
    set.iter().map(|i| d.name(i).to_string()).collect()
}

fn witness_entry(d: &CoxeterDiagram, w: &Witness) -> WitnessEntry {
    WitnessEntry {
        j1: names(d, &w.j1),
        j2: names(d, &w.j2),
    }
}

fn decision_entry(d: &CoxeterDiagram, decision: &Decision) -> DecisionEntry {
    DecisionEntry {
        strongly_solid: decision.strongly_solid,
        witness: decision.witness.as_ref().map(|w| witness_entry(d, w)),
    }
}

fn oracle_entry(d: &CoxeterDiagram, o: &OracleSummary) -> Oracle {
    Oracle {
        passed: o.passed(),
        signature: SignatureEntry {
            positive: o.signature.positive,
            negative: o.signature.negative,
            zero: o.signature.zero,
        },
        exhaustive: o.exhaustive,
        subdiagrams_checked: o.subdiagrams_checked,
        table_mismatches: o.table_mismatches.iter().map(|s| names(d, s)).collect(),
        minimal_hyperbolic_checked: o.minimal_hyperbolic_checked,
        minimal_hyperbolic_mismatches: o
            .minimal_hyperbolic_mismatches
            .iter()
            .map(|s| names(d, s))
            .collect(),
        relations_hold: o.relations_hold,
        hunt_budget: o.hunt_budget,
        infinite_order: o.infinite_order.as_ref().map(|c| InfiniteOrder {
            word: c.word.iter().map(|&i| d.name(i).to_string()).collect(),
            evidence: match c.evidence {
                Evidence::SpectralRadius(value) => EvidenceEntry::SpectralRadius { value },
                Evidence::NormGrowth { power, norm } => EvidenceEntry::NormGrowth { power, norm },
            },
        }),
        finite_group_certified_infinite: o.finite_group_certified_infinite,
    }
}

impl ReportDocument {
    pub fn new(d: &CoxeterDiagram, r: &ClassificationReport, timings: Timings) -> Self {
        ReportDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            vertices: d.names().to_vec(),
            edges: d
                .edges()
                .map(|(s, t, label)| Edge {
                    a: d.name(s).to_string(),
                    b: d.name(t).to_string(),
                    label,
                })
                .collect(),
            family_decomposition: r
                .components
                .iter()
                .map(|c| Component {
                    vertices: names(d, &c.members),
                    verdict: c.verdict,
                })
                .collect(),
            predicates: Predicates {
                finite: r.is_finite,
                affine: r.is_affine,
                euclidean: r.is_euclidean,
                amenable: r.is_amenable,
                contains_f2: r.contains_f2,
                word_hyperbolic: r.is_word_hyperbolic,
                nonelementary_hyperbolic: r.is_nonelementary_hyperbolic,
                minimal_hyperbolic: r.is_minimal_hyperbolic,
                strongly_solid: r.strongly_solid,
                biexact: r.biexact,
                contains_zxf2: r.contains_zxf2,
                relatively_hyperbolic_virtually_abelian: r.is_relatively_hyperbolic_vab,
                relatively_hyperbolic_amenable: r.is_relatively_hyperbolic_vab,
            },
            decisions: Decisions {
                direct: decision_entry(d, &r.decision_direct),
                caprace: decision_entry(d, &r.decision_caprace),
            },
            witness: r.witness().map(|w| witness_entry(d, w)),
            minimal_hyperbolic_subsets: r
                .minimal_hyperbolic_subsets
                .iter()
                .map(|e| MinimalHyperbolic {
                    subset: names(d, &e.subset),
                    perp: names(d, &e.perp),
                    perp_spherical: e.perp_spherical,
                })
                .collect(),
            oracle: r.oracle.as_ref().map(|o| oracle_entry(d, o)),
            timings,
        }
    }

    /// The JSON text with `timings` removed, for byte comparisons.
    pub fn to_json_without_timings(&self) -> serde_json::Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(map) = v.as_object_mut() {
            map.remove("timings");
        }
        serde_json::to_string_pretty(&v)
    }

    pub fn render_text(&self, explain: bool) -> String {
        let p = &self.predicates;
        let mut out = String::new();
        let family = |c: &Component| match c.verdict {
            FamilyVerdict::Spherical(f) => format!("{f} (spherical)"),
            FamilyVerdict::Affine(f) => format!("{f} (affine)"),
            FamilyVerdict::Neither => "neither".to_string(),
        };
        let _ = writeln!(out, "vertices: {}", self.vertices.len());
        let _ = writeln!(out, "edges: {}", self.edges.len());
        for c in &self.family_decomposition {
            let _ = writeln!(
                out,
                "component {{{}}}: {}",
                c.vertices.join(", "),
                family(c)
            );
        }
        for (key, value) in [
            ("finite", p.finite),
            ("affine", p.affine),
            ("euclidean", p.euclidean),
            ("amenable", p.amenable),
            ("contains_f2", p.contains_f2),
            ("word_hyperbolic", p.word_hyperbolic),
            ("nonelementary_hyperbolic", p.nonelementary_hyperbolic),
            ("minimal_hyperbolic", p.minimal_hyperbolic),
            ("strongly_solid", p.strongly_solid),
            ("contains_zxf2", p.contains_zxf2),
            (
                "relatively_hyperbolic_virtually_abelian",
                p.relatively_hyperbolic_virtually_abelian,
            ),
        ] {
            let _ = writeln!(out, "{key}: {value}");
        }
        let _ = writeln!(
            out,
            "biexact: {} (equivalent to strong solidity)",
            p.biexact
        );
        let _ = writeln!(
            out,
            "relatively_hyperbolic_amenable: {} (equivalent to strong solidity)",
            p.relatively_hyperbolic_amenable
        );
        if let Some(w) = &self.witness {
            let _ = writeln!(
                out,
                "witness: J1={{{}}} J2={{{}}}",
                w.j1.join(", "),
                w.j2.join(", ")
            );
        }
        if explain {
            if self.witness.is_none() {
                let _ = writeln!(out, "witness: none");
            }
            let _ = writeln!(
                out,
                "minimal hyperbolic subsets: {}",
                self.minimal_hyperbolic_subsets.len()
            );
            for e in &self.minimal_hyperbolic_subsets {
                let _ = writeln!(
                    out,
                    "  {{{}}} perp={{{}}} ({})",
                    e.subset.join(", "),
                    e.perp.join(", "),
                    if e.perp_spherical {
                        "finite"
                    } else {
                        "infinite"
                    }
                );
            }
        }
        if let Some(o) = &self.oracle {
            let s = o.signature;
            let _ = writeln!(out, "oracle: {}", if o.passed { "pass" } else { "FAIL" });
            let _ = writeln!(
                out,
                "  signature: ({}, {}, {})",
                s.positive, s.negative, s.zero
            );
            let _ = writeln!(
                out,
                "  subdiagrams checked: {}{}",
                o.subdiagrams_checked,
                if o.exhaustive {
                    ""
                } else {
                    " (components only)"
                }
            );
            let _ = writeln!(out, "  table mismatches: {}", o.table_mismatches.len());
            let _ = writeln!(
                out,
                "  minimal hyperbolic signature mismatches: {} of {}",
                o.minimal_hyperbolic_mismatches.len(),
                o.minimal_hyperbolic_checked
            );
            let _ = writeln!(out, "  relations hold: {}", o.relations_hold);
            match &o.infinite_order {
                Some(c) => {
                    let evidence = match c.evidence {
                        EvidenceEntry::SpectralRadius { value } => {
                            format!("spectral radius {value:.6}")
                        }
                        EvidenceEntry::NormGrowth { power, norm } => {
                            format!("norm {norm:.3e} at power {power}")
                        }
                    };
                    let _ = writeln!(
                        out,
                        "  infinite order (heuristic): {} by {evidence}",
                        c.word.join(" ")
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "  infinite order (heuristic): none within {} words",
                        o.hunt_budget
                    );
                }
            }
        }
        out
    }
}
