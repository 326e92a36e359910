//! Predicates on parabolic subsystems `W_T`, memoized per subset.
//!
//! An [`Analysis`] owns a fact cache keyed by subset bitmask. Entries are
//! bitflags written with `fetch_or`, so concurrent workers either see a
//! finished entry or recompute the same value.

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU8, Ordering};
use std::sync::RwLock;

use crate::diagram::{
    bit_indices, canonical_cmp, full_mask, CoxeterDiagram, DiagramError, VertexSet,
};
use crate::family::{recognize_connected, FamilyVerdict};

const BASE_DONE: u8 = 1;
const SPHERICAL: u8 = 1 << 1;
const IRR_AFFINE: u8 = 1 << 2;
const AFFINE: u8 = 1 << 3;
const EUCLIDEAN: u8 = 1 << 4;
const WH_DONE: u8 = 1 << 5;
const WH: u8 = 1 << 6;

/// Dense storage up to this rank (2^22 bytes), a locked map above.
const DENSE_LIMIT: usize = 22;

enum FactCache {
    Dense(Vec<AtomicU8>),
    Sparse(RwLock<HashMap<u64, u8>>),
}

impl FactCache {
    fn new(rank: usize) -> Self {
        if rank <= DENSE_LIMIT {
            FactCache::Dense((0..1usize << rank).map(|_| AtomicU8::new(0)).collect())
        } else {
            FactCache::Sparse(RwLock::new(HashMap::new()))
        }
    }

    fn get(&self, mask: u64) -> u8 {
        match self {
            FactCache::Dense(v) => v[mask as usize].load(Ordering::Acquire),
            FactCache::Sparse(m) => m.read().unwrap().get(&mask).copied().unwrap_or(0),
        }
    }

    fn merge(&self, mask: u64, bits: u8) {
        match self {
            FactCache::Dense(v) => {
                v[mask as usize].fetch_or(bits, Ordering::AcqRel);
            }
            FactCache::Sparse(m) => {
                *m.write().unwrap().entry(mask).or_insert(0) |= bits;
            }
        }
    }
}

/// All predicates for one subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetClassification {
    pub subset: VertexSet,
    pub spherical: bool,
    pub irreducible_affine: bool,
    pub affine: bool,
    pub euclidean: bool,
    pub minimal_hyperbolic: bool,
    pub word_hyperbolic: bool,
    pub non_elementary_hyperbolic: bool,
}

/// A classification session over one diagram.
pub struct Analysis<'d> {
    diagram: &'d CoxeterDiagram,
    cache: FactCache,
}

impl<'d> Analysis<'d> {
    pub fn new(diagram: &'d CoxeterDiagram) -> Self {
        Analysis {
            diagram,
            cache: FactCache::new(diagram.rank()),
        }
    }

    pub fn diagram(&self) -> &'d CoxeterDiagram {
        self.diagram
    }

    fn base(&self, mask: u64) -> u8 {
        let cached = self.cache.get(mask);
        if cached & BASE_DONE != 0 {
            return cached;
        }
        let facts = self.compute_base(mask);
        self.cache.merge(mask, facts);
        facts
    }

    fn compute_base(&self, mask: u64) -> u8 {
        if mask == 0 {
            return BASE_DONE | SPHERICAL | EUCLIDEAN;
        }
        let d = self.diagram;
        let first = mask & mask.wrapping_neg();
        if d.component_containing(mask, first) == mask {
            return BASE_DONE
                | match recognize_connected(d, mask) {
                    FamilyVerdict::Spherical(_) => SPHERICAL | EUCLIDEAN,
                    FamilyVerdict::Affine(_) => IRR_AFFINE | AFFINE | EUCLIDEAN,
                    FamilyVerdict::Neither => 0,
                };
        }
        let (mut affine, mut other) = (0, 0);
        for comp in d.components_of(mask) {
            let f = self.base(comp);
            if f & IRR_AFFINE != 0 {
                affine += 1;
            } else if f & SPHERICAL == 0 {
                other += 1;
            }
        }
        let mut facts = BASE_DONE;
        if affine == 0 && other == 0 {
            facts |= SPHERICAL;
        }
        if affine == 1 && other == 0 {
            facts |= AFFINE;
        }
        if other == 0 {
            facts |= EUCLIDEAN;
        }
        facts
    }

    pub(crate) fn spherical_mask(&self, mask: u64) -> bool {
        self.base(mask) & SPHERICAL != 0
    }

    pub(crate) fn irreducible_affine_mask(&self, mask: u64) -> bool {
        self.base(mask) & IRR_AFFINE != 0
    }

    pub(crate) fn affine_mask(&self, mask: u64) -> bool {
        self.base(mask) & AFFINE != 0
    }

    pub(crate) fn euclidean_mask(&self, mask: u64) -> bool {
        self.base(mask) & EUCLIDEAN != 0
    }

    /// Moussong's criterion, evaluated hereditarily: `T` is word hyperbolic
    /// iff `T` itself is not a bad configuration and every `T - t` is word
    /// hyperbolic. A bad configuration is an irreducible affine set of rank
    /// at least 3, or a set with two non-spherical components.
    pub(crate) fn word_hyperbolic_mask(&self, mask: u64) -> bool {
        let cached = self.cache.get(mask);
        if cached & WH_DONE != 0 {
            return cached & WH != 0;
        }
        let wh = self.compute_word_hyperbolic(mask);
        self.cache.merge(mask, WH_DONE | if wh { WH } else { 0 });
        wh
    }

    fn compute_word_hyperbolic(&self, mask: u64) -> bool {
        let facts = self.base(mask);
        if facts & SPHERICAL != 0 {
            return true;
        }
        let comps = self.diagram.components_of(mask);
        let mut infinite = comps.iter().copied().filter(|&c| !self.spherical_mask(c));
        let core = infinite
            .next()
            .expect("non-spherical set has an infinite component");
        if infinite.next().is_some() {
            return false;
        }
        if comps.len() > 1 {
            // finite factors neither create nor destroy bad subsets
            return self.word_hyperbolic_mask(core);
        }
        if facts & IRR_AFFINE != 0 {
            return mask.count_ones() < 3;
        }
        bit_indices(mask).all(|t| self.word_hyperbolic_mask(mask & !(1 << t)))
    }

    pub(crate) fn nonelementary_mask(&self, mask: u64) -> bool {
        !self.euclidean_mask(mask) && self.word_hyperbolic_mask(mask)
    }

    pub(crate) fn minimal_hyperbolic_mask(&self, mask: u64) -> bool {
        if mask == 0 {
            return false;
        }
        let facts = self.base(mask);
        if facts & (SPHERICAL | AFFINE) != 0 {
            return false;
        }
        bit_indices(mask).all(|t| self.base(mask & !(1 << t)) & (SPHERICAL | IRR_AFFINE) != 0)
    }

    fn owned(&self, t: &VertexSet) -> Result<u64, DiagramError> {
        self.diagram.check_owned(t)?;
        Ok(t.bits())
    }

    /// `W_T` is finite.
    pub fn is_spherical(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.spherical_mask(self.owned(t)?))
    }

    /// Exactly one component is irreducible affine and the others are spherical.
    pub fn is_affine(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.affine_mask(self.owned(t)?))
    }

    pub fn is_irreducible_affine(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.irreducible_affine_mask(self.owned(t)?))
    }

    /// Every component is spherical or irreducible affine.
    pub fn is_euclidean(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.euclidean_mask(self.owned(t)?))
    }

    pub fn is_minimal_hyperbolic(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.minimal_hyperbolic_mask(self.owned(t)?))
    }

    pub fn is_word_hyperbolic(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.word_hyperbolic_mask(self.owned(t)?))
    }

    /// Word hyperbolic and not virtually cyclic; for Coxeter groups this is
    /// word hyperbolic and not Euclidean.
    pub fn is_nonelementary_hyperbolic(&self, t: &VertexSet) -> Result<bool, DiagramError> {
        Ok(self.nonelementary_mask(self.owned(t)?))
    }

    /// `W` is amenable, equivalently Euclidean.
    pub fn is_amenable(&self) -> bool {
        self.euclidean_mask(full_mask(self.diagram.rank()))
    }

    pub fn classify_subset(&self, t: &VertexSet) -> Result<SubsetClassification, DiagramError> {
        let m = self.owned(t)?;
        Ok(SubsetClassification {
            subset: *t,
            spherical: self.spherical_mask(m),
            irreducible_affine: self.irreducible_affine_mask(m),
            affine: self.affine_mask(m),
            euclidean: self.euclidean_mask(m),
            minimal_hyperbolic: self.minimal_hyperbolic_mask(m),
            word_hyperbolic: self.word_hyperbolic_mask(m),
            non_elementary_hyperbolic: self.nonelementary_mask(m),
        })
    }

    /// Nonempty connected subsets in canonical order.
    pub(crate) fn connected_subsets(&self) -> Vec<u64> {
        let mut out = connected_subsets(self.diagram, full_mask(self.diagram.rank()));
        out.sort_by(|&a, &b| canonical_cmp(a, b));
        out
    }

    /// All minimal hyperbolic subsets in canonical order.
    ///
    /// Only connected subsets are visited: a disconnected set whose facets
    /// are all spherical or irreducible affine is spherical or affine itself.
    pub fn minimal_hyperbolic_subsets(&self) -> Vec<VertexSet> {
        self.connected_subsets()
            .into_iter()
            .filter(|&m| self.minimal_hyperbolic_mask(m))
            .map(|m| self.diagram.set_unchecked(m))
            .collect()
    }
}

/// Nonempty connected subsets of `within`, unordered. Every connected set
/// has a vertex whose removal keeps it connected, so growing connected sets
/// one neighbour at a time reaches all of them.
pub(crate) fn connected_subsets(d: &CoxeterDiagram, within: u64) -> Vec<u64> {
    let mut seen: HashSet<u64> = HashSet::new();
    let mut frontier: Vec<u64> = bit_indices(within).map(|i| 1u64 << i).collect();
    seen.extend(frontier.iter().copied());
    let mut out = frontier.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &set in &frontier {
            let mut boundary = 0u64;
            for i in bit_indices(set) {
                boundary |= d.neighbors(i);
            }
            boundary &= within & !set;
            for v in bit_indices(boundary) {
                let grown = set | (1 << v);
                if seen.insert(grown) {
                    next.push(grown);
                }
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

pub fn is_spherical(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_spherical(t)
}

pub fn is_affine(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_affine(t)
}

pub fn is_irreducible_affine(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_irreducible_affine(t)
}

pub fn is_euclidean(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_euclidean(t)
}

pub fn is_minimal_hyperbolic(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_minimal_hyperbolic(t)
}

pub fn minimal_hyperbolic_subsets(d: &CoxeterDiagram) -> Vec<VertexSet> {
    Analysis::new(d).minimal_hyperbolic_subsets()
}

pub fn is_word_hyperbolic(d: &CoxeterDiagram, t: &VertexSet) -> Result<bool, DiagramError> {
    Analysis::new(d).is_word_hyperbolic(t)
}

pub fn is_nonelementary_hyperbolic(
    d: &CoxeterDiagram,
    t: &VertexSet,
) -> Result<bool, DiagramError> {
    Analysis::new(d).is_nonelementary_hyperbolic(t)
}

pub fn is_amenable(d: &CoxeterDiagram) -> bool {
    Analysis::new(d).is_amenable()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_diagram;
    use crate::fixtures::*;

    fn whole(d: &CoxeterDiagram) -> SubsetClassification {
        Analysis::new(d).classify_subset(&d.full_set()).unwrap()
    }

    #[test]
    fn empty_subset_facts() {
        let d = a3();
        let c = Analysis::new(&d).classify_subset(&d.empty_set()).unwrap();
        assert!(c.spherical && c.euclidean && c.word_hyperbolic);
        assert!(!c.affine && !c.irreducible_affine && !c.minimal_hyperbolic);
        assert!(!c.non_elementary_hyperbolic);
    }

    #[test]
    fn spherical_examples() {
        let d = parse_diagram("vertices a b c d\nedge a b 3\nedge b c 3").unwrap();
        assert!(whole(&d).spherical);
        assert!(!whole(&atilde1()).spherical);
    }

    #[test]
    fn affine_examples() {
        let c = whole(&atilde2());
        assert!(c.irreducible_affine && c.affine && c.euclidean);

        let d = parse_diagram("vertices a b c\nedge a b inf").unwrap();
        let c = whole(&d);
        assert!(c.affine && !c.irreducible_affine);

        let c = whole(&dinf_x_dinf());
        assert!(!c.affine && c.euclidean);
    }

    #[test]
    fn euclidean_examples() {
        let d = atilde2()
            .product(&parse_diagram("vertices p q r\nedge p q 3\nedge q r 4").unwrap())
            .unwrap();
        assert!(whole(&d).euclidean);
        assert!(!whole(&triangle_334()).euclidean);
        assert!(!whole(&pentagon()).euclidean);
    }

    #[test]
    fn minimal_hyperbolic_examples() {
        assert!(whole(&triangle_334()).minimal_hyperbolic);
        assert!(!whole(&atilde2()).minimal_hyperbolic);
        assert!(!whole(&dinf_x_dinf()).minimal_hyperbolic);

        assert!(minimal_hyperbolic_subsets(&a3()).is_empty());
        let t = triangle_334();
        assert_eq!(minimal_hyperbolic_subsets(&t), vec![t.full_set()]);

        let p = pentagon();
        let names: Vec<Vec<&str>> = minimal_hyperbolic_subsets(&p)
            .iter()
            .map(|s| p.set_names(s).unwrap())
            .collect();
        // {v_i, v_{i+2}, v_{i+3}}: a free pair joined through a commuting pair
        assert_eq!(
            names,
            vec![
                vec!["v1", "v2", "v4"],
                vec!["v1", "v3", "v4"],
                vec!["v1", "v3", "v5"],
                vec!["v2", "v3", "v5"],
                vec!["v2", "v4", "v5"],
            ]
        );
    }

    #[test]
    fn word_hyperbolic_examples() {
        assert!(whole(&pentagon()).word_hyperbolic);
        assert!(!whole(&atilde2()).word_hyperbolic);
        assert!(whole(&atilde1()).word_hyperbolic);
        assert!(!whole(&dinf_x_triangle()).word_hyperbolic);
    }

    #[test]
    fn nonelementary_examples() {
        assert!(whole(&free_triangle()).non_elementary_hyperbolic);
        assert!(!whole(&atilde1()).non_elementary_hyperbolic);
        assert!(whole(&triangle_334()).non_elementary_hyperbolic);
    }

    #[test]
    fn amenable_examples() {
        assert!(is_amenable(&atilde2()));
        assert!(!is_amenable(&pentagon()));
        assert!(is_amenable(&CoxeterDiagram::empty()));
    }

    #[test]
    fn foreign_sets_are_rejected() {
        let d = a3();
        let other = a3();
        assert_eq!(
            is_spherical(&d, &other.full_set()),
            Err(DiagramError::ForeignVertexSet)
        );
    }

    #[test]
    fn connected_subsets_of_path() {
        // a path on n vertices has n(n+1)/2 connected subsets
        let d = parse_diagram("vertices a b c d\nedge a b 3\nedge b c 3\nedge c d 3").unwrap();
        assert_eq!(connected_subsets(&d, full_mask(4)).len(), 10);
    }

    #[test]
    fn sparse_cache_matches_dense() {
        let d = crate::random::random_diagram_with_rank(&mut crate::random::rng_for(5, 0), 8);
        let dense = Analysis::new(&d);
        let sparse = Analysis {
            diagram: &d,
            cache: FactCache::Sparse(RwLock::new(HashMap::new())),
        };
        for m in 0..(1u64 << 8) {
            let t = d.set_from_mask(m).unwrap();
            assert_eq!(dense.classify_subset(&t), sparse.classify_subset(&t));
        }
    }
}
