//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use coxsolid_core::corpus::{self, CorpusEntry};
use coxsolid_core::fixtures;
use coxsolid_core::random::{random_diagram_with_rank, rng_for};
use coxsolid_core::tits::{
    check_relations, cosine_matrix, signature, DEFAULT_HUNT_BUDGET, DEFAULT_RELATION_TOL,
    DEFAULT_ZERO_TOL,
};
use coxsolid_core::*;
use serde_json::Value;

const ORACLE_MAX_RANK: usize = 8;
const BRUTE_FORCE_MAX_RANK: usize = 6;
const RANK14_LIMIT: Duration = Duration::from_secs(10);
const RANK20_LIMIT: Duration = Duration::from_secs(300);

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn masks(n: usize) -> std::ops::Range<u64> {
    0..1u64 << n
}

fn connected(d: &CoxeterDiagram, m: u64) -> bool {
    m != 0
        && d.induced(&d.set_from_mask(m).unwrap())
            .unwrap()
            .components()
            .len()
            == 1
}

fn procedure_agreement(all: &[CorpusEntry]) -> Outcome {
    let mut bad = Vec::new();
    for e in all {
        let a = Analysis::new(&e.diagram);
        if decide_direct(&a).strongly_solid != decide_caprace(&a).strongly_solid {
            bad.push(e.name.clone());
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} diagrams, {} disagreements {:?}",
            all.len(),
            bad.len(),
            bad
        ),
    )
}

fn oracle_agreement(all: &[CorpusEntry]) -> Outcome {
    let (mut checked, mut bad) = (0usize, Vec::new());
    for e in all.iter().filter(|e| e.diagram.rank() <= ORACLE_MAX_RANK) {
        let d = &e.diagram;
        let a = Analysis::new(d);
        for m in masks(d.rank()).filter(|&m| connected(d, m)) {
            let t = d.set_from_mask(m).unwrap();
            let sig = signature(&cosine_matrix(&d.induced(&t).unwrap()), DEFAULT_ZERO_TOL);
            checked += 1;
            if a.is_spherical(&t).unwrap() != sig.is_positive_definite()
                || a.is_irreducible_affine(&t).unwrap() != sig.is_corank_one()
            {
                bad.push(format!("{} {m:#b}", e.name));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{checked} connected subdiagrams, {} mismatches {:?}",
            bad.len(),
            bad
        ),
    )
}

fn minimal_hyperbolic_signature(all: &[CorpusEntry]) -> Outcome {
    let (mut checked, mut bad) = (0usize, Vec::new());
    for e in all {
        let d = &e.diagram;
        for t in Analysis::new(d).minimal_hyperbolic_subsets() {
            checked += 1;
            let sig = signature(&cosine_matrix(&d.induced(&t).unwrap()), DEFAULT_ZERO_TOL);
            if sig != tits::Signature::new(t.len() - 1, 1, 0) {
                bad.push(format!("{} {:?}", e.name, d.set_names(&t).unwrap()));
            }
        }
    }
    outcome(
        bad.is_empty() && checked > 0,
        format!(
            "{checked} minimal hyperbolic subsets, {} mismatches {:?}",
            bad.len(),
            bad
        ),
    )
}

/// Every disjoint pair of nonempty subsets, no pruning.
fn has_forbidden_pattern(d: &CoxeterDiagram, a: &Analysis) -> bool {
    let n = d.rank();
    masks(n).any(|j1| {
        let s1 = d.set_from_mask(j1).unwrap();
        j1 != 0
            && !a.is_spherical(&s1).unwrap()
            && masks(n).any(|j2| {
                let s2 = d.set_from_mask(j2).unwrap();
                j2 != 0
                    && j1 & j2 == 0
                    && d.commutes(&s1, &s2).unwrap()
                    && a.is_nonelementary_hyperbolic(&s2).unwrap()
            })
    })
}

fn implications(all: &[CorpusEntry]) -> Outcome {
    let (mut brute, mut bad) = (0usize, Vec::new());
    for e in all {
        let d = &e.diagram;
        let r = match classify_report(d) {
            Ok(r) => r,
            Err(err) => {
                bad.push(format!("{}: {err}", e.name));
                continue;
            }
        };
        if r.is_euclidean && !r.strongly_solid {
            bad.push(format!("{}: euclidean but not solid", e.name));
        }
        if r.is_word_hyperbolic && !r.strongly_solid {
            bad.push(format!("{}: hyperbolic but not solid", e.name));
        }
        if r.contains_f2 == r.is_euclidean {
            bad.push(format!("{}: contains_f2 vs euclidean", e.name));
        }
        if d.rank() <= BRUTE_FORCE_MAX_RANK {
            brute += 1;
            if r.strongly_solid == has_forbidden_pattern(d, &Analysis::new(d)) {
                bad.push(format!("{}: brute-force pattern search disagrees", e.name));
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!(
            "{} diagrams ({brute} re-enumerated by brute force), {} violations {:?}",
            all.len(),
            bad.len(),
            bad
        ),
    )
}

fn witness_soundness(all: &[CorpusEntry]) -> Outcome {
    let (mut witnesses, mut probes, mut rejected, mut bad) = (0usize, 0usize, 0usize, Vec::new());
    for e in all {
        let d = &e.diagram;
        let a = Analysis::new(d);
        for decision in [decide_direct(&a), decide_caprace(&a)] {
            if decision.strongly_solid {
                continue;
            }
            let Some(w) = decision.witness else {
                bad.push(format!("{}: no witness from {}", e.name, decision.method));
                continue;
            };
            witnesses += 1;
            if verify_witness(d, &w).is_err() {
                bad.push(format!("{}: {} witness rejected", e.name, decision.method));
            }
            for v in w.j2.iter() {
                let smaller = w.j2.difference(&d.set_from_indices([v]).unwrap()).unwrap();
                probes += 1;
                rejected += verify_witness(
                    d,
                    &Witness {
                        j1: w.j1,
                        j2: smaller,
                    },
                )
                .is_err() as usize;
            }
            let outside = w.j1.union(&w.j2).unwrap();
            for s in (0..d.rank()).filter(|&s| !outside.contains(s)) {
                let larger = w.j1.union(&d.set_from_indices([s]).unwrap()).unwrap();
                probes += 1;
                rejected += verify_witness(
                    d,
                    &Witness {
                        j1: larger,
                        j2: w.j2,
                    },
                )
                .is_err() as usize;
            }
        }
    }
    outcome(
        bad.is_empty() && probes == rejected && witnesses > 0,
        format!(
            "{witnesses} witnesses verified, {rejected}/{probes} mutation probes rejected, {} problems {:?}",
            bad.len(),
            bad
        ),
    )
}

/// The hand-built example diagrams, which carry most of the non-solid cases.
fn instances() -> Vec<CorpusEntry> {
    [
        ("a3", fixtures::a3()),
        ("atilde2", fixtures::atilde2()),
        ("triangle_334", fixtures::triangle_334()),
        ("pentagon", fixtures::pentagon()),
        ("free_triangle", fixtures::free_triangle()),
        ("dinfty_x_triangle", fixtures::dinf_x_triangle()),
        ("dinfty_x_dinfty", fixtures::dinf_x_dinf()),
        (
            "dinfty_x_pentagon",
            fixtures::atilde1().product(&fixtures::pentagon()).unwrap(),
        ),
        (
            "triangle_x_triangle",
            fixtures::free_triangle()
                .product(&fixtures::triangle_334())
                .unwrap(),
        ),
    ]
    .into_iter()
    .map(|(name, diagram)| CorpusEntry {
        name: name.to_string(),
        diagram,
    })
    .collect()
}

fn golden_instances() -> Outcome {
    let tests = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests");
    let mut bad = Vec::new();
    let classify = |name: &str| -> Option<Value> {
        let out = Command::new(env!("CARGO_BIN_EXE_coxsolid"))
            .args(["classify", "--json"])
            .arg(tests.join("fixtures").join(format!("{name}.cox")))
            .output()
            .ok()?;
        let mut v: Value = serde_json::from_slice(&out.stdout).ok()?;
        v.as_object_mut()?.remove("timings");
        Some(v)
    };
    let expectations: [(&str, &[(&str, bool)]); 5] = [
        ("a3", &[("finite", true), ("strongly_solid", true)]),
        (
            "atilde2",
            &[
                ("finite", false),
                ("amenable", true),
                ("strongly_solid", true),
            ],
        ),
        (
            "triangle_334",
            &[
                ("nonelementary_hyperbolic", true),
                ("minimal_hyperbolic", true),
                ("strongly_solid", true),
            ],
        ),
        (
            "pentagon",
            &[
                ("word_hyperbolic", true),
                ("amenable", false),
                ("strongly_solid", true),
            ],
        ),
        ("dinfty_x_triangle", &[("strongly_solid", false)]),
    ];
    for (name, fields) in expectations {
        let Some(got) = classify(name) else {
            bad.push(format!("{name}: no report"));
            continue;
        };
        let golden: Value =
            std::fs::read_to_string(tests.join("golden").join(format!("{name}.json")))
                .ok()
                .and_then(|s| serde_json::from_str(&s).ok())
                .unwrap_or(Value::Null);
        if got != golden {
            bad.push(format!("{name}: differs from golden file"));
        }
        for &(field, want) in fields {
            if got["predicates"][field] != Value::Bool(want) {
                bad.push(format!("{name}: {field} != {want}"));
            }
        }
    }
    let got = classify("dinfty_x_triangle").unwrap_or(Value::Null);
    let witness = serde_json::json!({ "j1": ["u", "v"], "j2": ["x", "y", "z"] });
    if got["witness"] != witness {
        bad.push(format!("dinfty_x_triangle witness {}", got["witness"]));
    }
    outcome(
        bad.is_empty(),
        format!("5 instances, {} problems {:?}", bad.len(), bad),
    )
}

fn tits_representation(all: &[CorpusEntry]) -> Outcome {
    let (mut relation_failures, mut misses, mut false_certs, mut infinite) =
        (Vec::new(), Vec::new(), Vec::new(), 0);
    for e in all {
        let d = &e.diagram;
        if !check_relations(d, DEFAULT_RELATION_TOL) {
            relation_failures.push(e.name.clone());
        }
        let finite = Analysis::new(d).is_spherical(&d.full_set()).unwrap();
        let cert = hunt_infinite_order(d, DEFAULT_HUNT_BUDGET);
        match (finite, cert) {
            (true, Some(_)) => false_certs.push(e.name.clone()),
            (false, None) => misses.push(e.name.clone()),
            (false, Some(_)) => infinite += 1,
            (true, None) => {}
        }
    }
    outcome(
        relation_failures.is_empty() && misses.is_empty() && false_certs.is_empty(),
        format!(
            "relations fail on {} of {} diagrams {:?}; {infinite} infinite groups certified, \
             {} missed {:?}, {} finite groups certified {:?}",
            relation_failures.len(),
            all.len(),
            relation_failures,
            misses.len(),
            misses,
            false_certs.len(),
            false_certs
        ),
    )
}

/// Timing only. Diagrams the engine refuses because the two procedures
/// disagree are listed separately and do not affect the verdict.
fn performance(notes: &mut Vec<String>) -> Outcome {
    let mut rank14 = vec![(
        "right-angled 14-cycle".to_string(),
        fixtures::racg_cycle(14, "v", 0),
    )];
    rank14.extend((0..5).map(|i| {
        (
            format!("random rank 14 seed=14 index={i}"),
            random_diagram_with_rank(&mut rng_for(14, i), 14),
        )
    }));
    let mut slowest14 = Duration::ZERO;
    for (name, d) in &rank14 {
        let start = Instant::now();
        let result = classify_report(d);
        slowest14 = slowest14.max(start.elapsed());
        if let Err(e) = result {
            notes.push(format!("{name}: {e}"));
        }
    }
    let stress = fixtures::racg_cycle(20, "v", 0);
    let start = Instant::now();
    let result = classify_report(&stress);
    let rank20 = start.elapsed();
    if let Err(e) = result {
        notes.push(format!("right-angled 20-cycle: {e}"));
    }
    outcome(
        slowest14 < RANK14_LIMIT && rank20 < RANK20_LIMIT,
        format!(
            "slowest of {} rank-14 diagrams {:.3}s (limit {}s), rank-20 right-angled {:.3}s (limit {}s)",
            rank14.len(),
            slowest14.as_secs_f64(),
            RANK14_LIMIT.as_secs(),
            rank20.as_secs_f64(),
            RANK20_LIMIT.as_secs(),
        ),
    )
}

fn main() -> ExitCode {
    let named = corpus::named_families();
    let products = corpus::family_products();
    let random = corpus::random_corpus_entries();
    let all = corpus::full_corpus();
    let small: Vec<CorpusEntry> = named.iter().chain(&random).cloned().collect();
    let mut with_instances = all.clone();
    with_instances.extend(instances());
    println!(
        "corpus: {} named families, {} products, {} random diagrams",
        named.len(),
        products.len(),
        random.len()
    );

    let criteria: Vec<Criterion> = vec![
        (
            "procedure agreement",
            Box::new(|| procedure_agreement(&all)),
        ),
        (
            "table/signature agreement",
            Box::new(|| oracle_agreement(&small)),
        ),
        (
            "minimal hyperbolic signature",
            Box::new(|| minimal_hyperbolic_signature(&all)),
        ),
        ("implications", Box::new(|| implications(&all))),
        (
            "witness soundness",
            Box::new(|| witness_soundness(&with_instances)),
        ),
        ("golden instances", Box::new(golden_instances)),
        (
            "tits representation",
            Box::new(|| tits_representation(&all)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        failed += !o.passed as usize;
        println!(
            "{} [{}] {name}: {} ({:.1}s)",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            start.elapsed().as_secs_f64()
        );
    }
    let mut notes = Vec::new();
    let start = Instant::now();
    let o = performance(&mut notes);
    failed += !o.passed as usize;
    println!(
        "{} [8] performance: {} ({:.1}s)",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail,
        start.elapsed().as_secs_f64()
    );
    for note in notes {
        println!("NOTE {note}");
    }
    let total = criteria.len() + 1;
    println!("acceptance: {} of {total} criteria passed", total - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
