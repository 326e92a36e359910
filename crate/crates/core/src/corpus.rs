//! The standard test corpus: named families, their pairwise products and
//! seeded random diagrams.

use crate::diagram::CoxeterDiagram;
use crate::family::{build_family, families_up_to, FamilyName};
use crate::random::{random_diagram, random_diagram_with_rank, rng_for};

pub const MAX_FAMILY_RANK: usize = 8;
pub const I2_PARAMS: [u32; 7] = [3, 4, 5, 6, 7, 8, 12];

pub const RANDOM_SEED: u64 = 20_240_601;
pub const RANDOM_COUNT: usize = 500;
pub const RANDOM_MAX_RANK: usize = 6;
pub const RANK7_SEED: u64 = 20_240_602;
pub const RANK7_COUNT: usize = 100;

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub diagram: CoxeterDiagram,
}

fn family(f: FamilyName, prefix: &str) -> CoxeterDiagram {
    build_family(f, prefix).expect("listed families are legal")
}

pub fn family_names() -> Vec<FamilyName> {
    families_up_to(MAX_FAMILY_RANK, &I2_PARAMS)
}

pub fn named_families() -> Vec<CorpusEntry> {
    family_names()
        .into_iter()
        .map(|f| CorpusEntry {
            name: f.to_string(),
            diagram: family(f, "s"),
        })
        .collect()
}

/// Every unordered pair of named families, including a family with itself.
pub fn family_products() -> Vec<CorpusEntry> {
    let names = family_names();
    let mut out = Vec::new();
    for (i, &f) in names.iter().enumerate() {
        for &g in &names[i..] {
            let d = family(f, "x")
                .product(&family(g, "y"))
                .expect("prefixes keep names apart");
            out.push(CorpusEntry {
                name: format!("{f} x {g}"),
                diagram: d,
            });
        }
    }
    out
}

pub fn random_entries(seed: u64, count: usize, max_rank: usize) -> Vec<CorpusEntry> {
    (0..count as u64)
        .map(|i| CorpusEntry {
            name: format!("random seed={seed} index={i} max_rank={max_rank}"),
            diagram: random_diagram(seed, i, max_rank),
        })
        .collect()
}

pub fn random_entries_fixed_rank(seed: u64, count: usize, rank: usize) -> Vec<CorpusEntry> {
    (0..count as u64)
        .map(|i| CorpusEntry {
            name: format!("random seed={seed} index={i} rank={rank}"),
            diagram: random_diagram_with_rank(&mut rng_for(seed, i), rank),
        })
        .collect()
}

/// The two random batches: `RANDOM_COUNT` of rank at most `RANDOM_MAX_RANK`
/// and `RANK7_COUNT` of rank exactly 7.
pub fn random_corpus_entries() -> Vec<CorpusEntry> {
    let mut out = random_entries(RANDOM_SEED, RANDOM_COUNT, RANDOM_MAX_RANK);
    out.extend(random_entries_fixed_rank(RANK7_SEED, RANK7_COUNT, 7));
    out
}

/// Named families, products and both random batches.
pub fn full_corpus() -> Vec<CorpusEntry> {
    let mut out = named_families();
    out.extend(family_products());
    out.extend(random_corpus_entries());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let named = named_families();
        assert!(named.iter().all(|e| e.diagram.rank() <= MAX_FAMILY_RANK));
        let n = named.len();
        assert_eq!(family_products().len(), n * (n + 1) / 2);
        assert_eq!(random_corpus_entries().len(), RANDOM_COUNT + RANK7_COUNT);
    }
}
