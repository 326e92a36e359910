//! Classifying many diagrams at once.

use std::fmt::Write as _;
use std::path::Path;

use coxsolid_core::random::random_diagram;
use coxsolid_core::{parse_diagram, CoxeterDiagram, EngineError};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::report::{classify_timed, ReportDocument, SCHEMA_VERSION};

pub struct BatchInput {
    pub name: String,
    pub source: Result<CoxeterDiagram, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchEntry {
    pub name: String,
    pub status: Status,
    pub error: Option<String>,
    pub report: Option<ReportDocument>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ParseError,
    Disagreement,
    OracleMismatch,
    InternalError,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub inputs: usize,
    pub strongly_solid: usize,
    pub not_strongly_solid: usize,
    pub finite: usize,
    pub amenable: usize,
    pub word_hyperbolic: usize,
    pub parse_errors: usize,
    pub disagreements: usize,
    pub oracle_mismatches: usize,
    /// Infinite groups for which the heuristic found no infinite-order word.
    pub hunt_misses: usize,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchDocument {
    pub schema_version: String,
    pub entries: Vec<BatchEntry>,
    pub summary: Summary,
}

/// Every `.cox` file directly inside `dir`, sorted by file name.
pub fn read_dir_inputs(dir: &Path) -> std::io::Result<Vec<BatchInput>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|e| e == "cox"));
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p)?;
            Ok(BatchInput {
                name: p
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .into_owned(),
                source: parse_diagram(&text).map_err(|e| e.to_string()),
            })
        })
        .collect()
}

pub fn random_inputs(count: usize, max_rank: usize, seed: u64) -> Vec<BatchInput> {
    (0..count as u64)
        .map(|i| BatchInput {
            name: format!("random-{seed}-{i:05}"),
            source: Ok(random_diagram(seed, i, max_rank)),
        })
        .collect()
}

fn classify_one(input: &BatchInput, oracle: bool) -> BatchEntry {
    let d = match &input.source {
        Ok(d) => d,
        Err(e) => {
            return BatchEntry {
                name: input.name.clone(),
                status: Status::ParseError,
                error: Some(e.clone()),
                report: None,
            }
        }
    };
    match classify_timed(d, oracle) {
        Ok((r, timings)) => {
            let status = match &r.oracle {
                Some(o) if !o.passed() => Status::OracleMismatch,
                _ => Status::Ok,
            };
            BatchEntry {
                name: input.name.clone(),
                status,
                error: (status == Status::OracleMismatch)
                    .then(|| "oracle cross-check failed".to_string()),
                report: Some(ReportDocument::new(d, &r, timings)),
            }
        }
        Err(e @ EngineError::ProcedureDisagreement { .. }) => BatchEntry {
            name: input.name.clone(),
            status: Status::Disagreement,
            error: Some(e.to_string()),
            report: None,
        },
        Err(e) => BatchEntry {
            name: input.name.clone(),
            status: Status::InternalError,
            error: Some(e.to_string()),
            report: None,
        },
    }
}

pub fn run(inputs: &[BatchInput], oracle: bool) -> BatchDocument {
    let entries: Vec<BatchEntry> = inputs.par_iter().map(|i| classify_one(i, oracle)).collect();
    let mut s = Summary {
        inputs: entries.len(),
        ..Summary::default()
    };
    for e in &entries {
        match e.status {
            Status::Ok | Status::OracleMismatch | Status::InternalError => {}
            Status::ParseError => s.parse_errors += 1,
            Status::Disagreement => s.disagreements += 1,
        }
        if e.status == Status::OracleMismatch {
            s.oracle_mismatches += 1;
        }
        if e.status != Status::Ok {
            s.failures += 1;
        }
        if let Some(r) = &e.report {
            let p = &r.predicates;
            if p.strongly_solid {
                s.strongly_solid += 1;
            } else {
                s.not_strongly_solid += 1;
            }
            s.finite += p.finite as usize;
            s.amenable += p.amenable as usize;
            s.word_hyperbolic += p.word_hyperbolic as usize;
            if let Some(o) = &r.oracle {
                if !p.finite && o.infinite_order.is_none() {
                    s.hunt_misses += 1;
                }
            }
        }
    }
    BatchDocument {
        schema_version: SCHEMA_VERSION.to_string(),
        entries,
        summary: s,
    }
}

impl BatchDocument {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            match (&e.report, &e.error) {
                (Some(r), None) => {
                    let p = &r.predicates;
                    let _ = writeln!(
                        out,
                        "{}: strongly_solid={} finite={} amenable={} word_hyperbolic={}",
                        e.name, p.strongly_solid, p.finite, p.amenable, p.word_hyperbolic
                    );
                }
                (_, Some(err)) => {
                    let _ = writeln!(out, "{}: FAILED {err}", e.name);
                }
                (None, None) => {}
            }
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "summary: {} inputs, {} strongly solid, {} not strongly solid, {} failures \
             ({} parse errors, {} disagreements, {} oracle mismatches), {} hunt misses",
            s.inputs,
            s.strongly_solid,
            s.not_strongly_solid,
            s.failures,
            s.parse_errors,
            s.disagreements,
            s.oracle_mismatches,
            s.hunt_misses
        );
        out
    }
}
