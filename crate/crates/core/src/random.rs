//! Seeded random diagrams.
//!
//! Diagram `i` of a corpus with seed `s` is drawn from a ChaCha8 generator
//! created by `ChaCha8Rng::seed_from_u64(s)` and switched to stream `i`, so
//! every diagram depends only on `(s, i)`. The rank is drawn uniformly from
//! `1..=max_rank` (rand 0.8 `gen_range`), then the label of each pair
//! `(s, t)`, `s < t`, in row-major order, independently with weights
//! 2: 0.4, 3: 0.2, 4: 0.1, 5: 0.1, 6: 0.1, inf: 0.1 (rand 0.8
//! `WeightedIndex` over the integer weights 4, 2, 1, 1, 1, 1). Vertices are
//! named `v0`, `v1`, ...

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{CoxeterDiagram, DiagramBuilder, Label};

pub const LABELS: [Label; 6] = [
    Label::Finite(2),
    Label::Finite(3),
    Label::Finite(4),
    Label::Finite(5),
    Label::Finite(6),
    Label::Infinity,
];
pub const WEIGHTS: [u32; 6] = [4, 2, 1, 1, 1, 1];

pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

pub fn random_diagram_with_rank<R: Rng>(rng: &mut R, rank: usize) -> CoxeterDiagram {
    let dist = WeightedIndex::new(WEIGHTS).expect("weights are positive");
    let names: Vec<String> = (0..rank).map(|i| format!("v{i}")).collect();
    let mut b = DiagramBuilder::new()
        .vertices(&names)
        .expect("generated names are valid");
    for s in 0..rank {
        for t in (s + 1)..rank {
            let m = LABELS[dist.sample(rng)];
            b.edge(&names[s], &names[t], m)
                .expect("generated edges are valid");
        }
    }
    b.build()
}

/// Diagram `index` of the corpus `(seed, max_rank)`.
pub fn random_diagram(seed: u64, index: u64, max_rank: usize) -> CoxeterDiagram {
    let mut rng = rng_for(seed, index);
    let rank = rng.gen_range(1..=max_rank.max(1));
    random_diagram_with_rank(&mut rng, rank)
}

pub fn random_corpus(seed: u64, count: usize, max_rank: usize) -> Vec<CoxeterDiagram> {
    (0..count as u64)
        .map(|i| random_diagram(seed, i, max_rank))
        .collect()
}

/// `count` diagrams of exactly `rank` vertices, diagram `i` from stream `i`.
pub fn random_corpus_fixed_rank(seed: u64, count: usize, rank: usize) -> Vec<CoxeterDiagram> {
    (0..count as u64)
        .map(|i| random_diagram_with_rank(&mut rng_for(seed, i), rank))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed_and_index() {
        assert_eq!(random_corpus(42, 20, 6), random_corpus(42, 20, 6));
        assert_eq!(random_corpus(42, 20, 6)[7], random_diagram(42, 7, 6));
        assert_ne!(random_corpus(42, 20, 6), random_corpus(43, 20, 6));
        assert!(random_corpus(1, 50, 6)
            .iter()
            .all(|d| (1..=6).contains(&d.rank())));
    }

    #[test]
    fn label_frequencies_follow_weights() {
        let mut counts = [0usize; 6];
        for d in random_corpus_fixed_rank(9, 200, 8) {
            for s in 0..8 {
                for t in (s + 1)..8 {
                    let i = LABELS.iter().position(|&m| m == d.label(s, t)).unwrap();
                    counts[i] += 1;
                }
            }
        }
        let total: usize = counts.iter().sum();
        let commuting = counts[0] as f64 / total as f64;
        assert!((commuting - 0.4).abs() < 0.03, "{commuting}");
        let inf = counts[5] as f64 / total as f64;
        assert!((inf - 0.1).abs() < 0.02, "{inf}");
    }
}
