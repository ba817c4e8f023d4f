//! Lattice path matroids: bases, presentations, connectivity, and the
//! deletion / contraction / direct-sum constructions that produce facets.

use std::collections::HashSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{outside_corners, SkewRegion, Step};
use crate::limits;
use crate::util::{binomial, bits, low_mask, UnionFind};

/// A basis as its sorted 1-based elements.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Basis {
    elements: Vec<usize>,
}

impl Basis {
    pub fn new(mut elements: Vec<usize>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        Basis { elements }
    }

    pub fn from_mask(mask: u128) -> Self {
        Basis {
            elements: bits(mask).map(|i| i + 1).collect(),
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn mask(&self) -> u128 {
        self.elements.iter().fold(0, |acc, &i| acc | 1u128 << (i - 1))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeMatroid {
    ground: Vec<usize>,
    rank: usize,
    bases: Vec<Basis>,
    presentation: Option<Vec<(usize, usize)>>,
    region: Option<SkewRegion>,
}

impl LatticeMatroid {
    /// Matroid on `ground` with the given bases. The bases are sorted and
    /// deduplicated; they must be nonempty and of equal size.
    pub fn from_bases(ground: Vec<usize>, bases: Vec<Basis>) -> Result<Self> {
        let mut bases = bases;
        bases.sort();
        bases.dedup();
        let Some(first) = bases.first() else {
            return Err(Error::EmptyBasis("no bases given".into()));
        };
        let rank = first.len();
        if bases.iter().any(|b| b.len() != rank) {
            return Err(Error::Domain("bases have different sizes".into()));
        }
        if bases
            .iter()
            .flat_map(|b| b.elements())
            .any(|e| ground.binary_search(e).is_err())
        {
            return Err(Error::Domain("basis element outside the ground set".into()));
        }
        Ok(LatticeMatroid {
            ground,
            rank,
            bases,
            presentation: None,
            region: None,
        })
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Bases in lexicographic order.
    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn presentation(&self) -> Option<&[(usize, usize)]> {
        self.presentation.as_deref()
    }

    /// The region the matroid was built from, kept through the constructions below.
    pub fn region(&self) -> Option<&SkewRegion> {
        self.region.as_ref()
    }

    fn derived(&self, ground: Vec<usize>, bases: Vec<Basis>) -> LatticeMatroid {
        LatticeMatroid {
            ground,
            rank: self.rank,
            bases,
            presentation: None,
            region: self.region.clone(),
        }
    }

    fn check_element(&self, i: usize) -> Result<()> {
        if self.ground.binary_search(&i).is_err() {
            return Err(Error::Domain(format!("element {i} is not in the ground set")));
        }
        Ok(())
    }

    /// Restriction to the complement of `i`: the bases avoiding `i`.
    pub fn delete_element(&self, i: usize) -> Result<LatticeMatroid> {
        self.check_element(i)?;
        let bases: Vec<Basis> = self.bases.iter().filter(|b| !b.contains(i)).cloned().collect();
        if bases.is_empty() {
            return Err(Error::EmptyBasis(format!("element {i} is a coloop")));
        }
        let ground = self.ground.iter().copied().filter(|&e| e != i).collect();
        Ok(self.derived(ground, bases))
    }

    /// Contraction of `i` with `i` kept as a coloop: the bases containing `i`.
    pub fn contract_element(&self, i: usize) -> Result<LatticeMatroid> {
        self.check_element(i)?;
        let bases: Vec<Basis> = self.bases.iter().filter(|b| b.contains(i)).cloned().collect();
        if bases.is_empty() {
            return Err(Error::EmptyBasis(format!("element {i} is a loop")));
        }
        Ok(self.derived(self.ground.clone(), bases))
    }

    /// Bases meeting `[p + q]` in exactly `q` elements, for an outside corner
    /// `(p, q)` of the underlying region.
    pub fn direct_sum_at(&self, p: usize, q: usize) -> Result<LatticeMatroid> {
        let region = self
            .region
            .as_ref()
            .ok_or_else(|| Error::Domain("matroid has no underlying region".into()))?;
        if !outside_corners(region).iter().any(|c| c.p == p && c.q == q) {
            return Err(Error::Domain(format!(
                "({p},{q}) is not an outside corner of {region}"
            )));
        }
        let head = low_mask(p + q);
        let bases: Vec<Basis> = self
            .bases
            .iter()
            .filter(|b| (b.mask() & head).count_ones() as usize == q)
            .cloned()
            .collect();
        if bases.is_empty() {
            return Err(Error::EmptyBasis(format!("no basis splits at ({p},{q})")));
        }
        Ok(self.derived(self.ground.clone(), bases))
    }
}

/// Interval `[l_i, u_i]` per north step: positions of the `i`-th north step
/// of the upper and of the lower path.
pub fn presentation(region: &SkewRegion) -> Vec<(usize, usize)> {
    region
        .upper()
        .north_positions()
        .into_iter()
        .zip(region.lower().north_positions())
        .collect()
}

fn from_region(region: &SkewRegion, bases: Vec<Basis>) -> LatticeMatroid {
    LatticeMatroid {
        ground: (1..=region.size()).collect(),
        rank: region.r(),
        bases,
        presentation: Some(presentation(region)),
        region: Some(region.clone()),
    }
}

/// Bases as the north-step sets of the lattice paths inside the region.
pub fn bases_by_paths(region: &SkewRegion) -> Result<LatticeMatroid> {
    let bases = region.path_masks()?.into_iter().map(Basis::from_mask).collect();
    Ok(from_region(region, bases))
}

/// Try to match each interval to a distinct element of `chosen`.
fn has_transversal(intervals: &[(usize, usize)], chosen: &[usize]) -> bool {
    fn augment(
        e: usize,
        chosen: &[usize],
        intervals: &[(usize, usize)],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        let x = chosen[e];
        for (k, &(l, u)) in intervals.iter().enumerate() {
            if l <= x && x <= u && !seen[k] {
                seen[k] = true;
                if owner[k].is_none_or(|f| augment(f, chosen, intervals, seen, owner)) {
                    owner[k] = Some(e);
                    return true;
                }
            }
        }
        false
    }
    let mut owner = vec![None; intervals.len()];
    (0..chosen.len()).all(|e| {
        let mut seen = vec![false; intervals.len()];
        augment(e, chosen, intervals, &mut seen, &mut owner)
    })
}

/// Bases as the systems of distinct representatives of the presentation.
pub fn bases_by_transversals(region: &SkewRegion) -> Result<LatticeMatroid> {
    let intervals = presentation(region);
    let (n, r) = (region.size(), region.r());
    let candidates = binomial(n as u64, r as u64);
    let cap = (limits::max_bases() as u128).saturating_mul(64);
    if candidates > cap {
        return Err(Error::Resource(format!(
            "{candidates} candidate subsets exceed the cap {cap}"
        )));
    }
    let bases: Vec<Basis> = (1..=n)
        .combinations(r)
        .filter(|c| has_transversal(&intervals, c))
        .map(Basis::new)
        .collect();
    if bases.len() > limits::max_bases() {
        return Err(Error::Resource(format!(
            "{} bases exceed the cap {}",
            bases.len(),
            limits::max_bases()
        )));
    }
    Ok(from_region(region, bases))
}

/// Connectivity classes of the ground set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// Elements `a`, `b` are joined when some basis contains `a` and swapping
/// `a` for `b` gives another basis.
pub fn connected_components(matroid: &LatticeMatroid) -> ComponentPartition {
    let masks: HashSet<u128> = matroid.bases.iter().map(Basis::mask).collect();
    let ground_mask = matroid.ground.iter().fold(0u128, |acc, &i| acc | 1u128 << (i - 1));
    let mut uf = UnionFind::new(128);
    for &b in &masks {
        for x in bits(b) {
            for y in bits(ground_mask & !b) {
                if uf.find(x) != uf.find(y) && masks.contains(&(b & !(1u128 << x) | 1u128 << y)) {
                    uf.union(x, y);
                }
            }
        }
    }
    let blocks = matroid
        .ground
        .iter()
        .map(|&e| (uf.find(e - 1), e))
        .into_group_map()
        .into_values()
        .sorted()
        .collect();
    ComponentPartition { blocks }
}

/// `m + r - k + 1`, with `k` the number of common points of the two paths.
pub fn polytope_dimension(region: &SkewRegion) -> usize {
    region.size() + 1 - region.k()
}

/// Path of a basis inside a region of length `len`.
pub fn basis_path(len: usize, basis: &Basis) -> Vec<Step> {
    (1..=len)
        .map(|i| if basis.contains(i) { Step::N } else { Step::E })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lists(m: &LatticeMatroid) -> Vec<String> {
        m.bases()
            .iter()
            .map(|b| b.elements().iter().map(|e| e.to_string()).collect())
            .collect()
    }

    fn five_element() -> SkewRegion {
        SkewRegion::from_words("EENNN", "NNENE").unwrap()
    }

    #[test]
    fn presentations() {
        assert_eq!(presentation(&five_element()), vec![(1, 3), (2, 4), (4, 5)]);
        let single = SkewRegion::from_words("EN", "NE").unwrap();
        assert_eq!(presentation(&single), vec![(1, 2)]);
        let flat = SkewRegion::from_words("EN", "EN").unwrap();
        assert_eq!(presentation(&flat), vec![(2, 2)]);
    }

    #[test]
    fn two_basis_definitions_agree_on_small_examples() {
        let m = bases_by_paths(&five_element()).unwrap();
        assert_eq!(
            lists(&m),
            ["124", "125", "134", "135", "145", "234", "235", "245", "345"]
        );
        assert_eq!(m, bases_by_transversals(&five_element()).unwrap());
        let single = SkewRegion::from_words("EN", "NE").unwrap();
        assert_eq!(lists(&bases_by_paths(&single).unwrap()), ["1", "2"]);
        assert_eq!(lists(&bases_by_transversals(&single).unwrap()), ["1", "2"]);
        let flat = SkewRegion::from_words("ENNE", "ENNE").unwrap();
        assert_eq!(lists(&bases_by_paths(&flat).unwrap()), ["23"]);
    }

    #[test]
    fn constructions() {
        let m = bases_by_paths(&five_element()).unwrap();
        assert_eq!(lists(&m.delete_element(2).unwrap()), ["134", "135", "145", "345"]);
        assert_eq!(m.delete_element(2).unwrap().ground(), &[1, 3, 4, 5]);
        assert_eq!(m.delete_element(1).unwrap().bases().len(), 4);
        assert_eq!(m.contract_element(1).unwrap().bases().len(), 5);
        assert_eq!(
            lists(&m.contract_element(4).unwrap()),
            ["124", "134", "145", "234", "245", "345"]
        );
        assert_eq!(m.contract_element(3).unwrap().bases().len(), 5);
        assert_eq!(
            lists(&m.direct_sum_at(1, 2).unwrap()),
            ["124", "125", "134", "135", "234", "235"]
        );
        assert!(matches!(m.direct_sum_at(1, 1), Err(Error::Domain(_))));
        assert!(matches!(m.delete_element(9), Err(Error::Domain(_))));

        let flat = bases_by_paths(&SkewRegion::from_words("EN", "EN").unwrap()).unwrap();
        assert!(matches!(flat.delete_element(2), Err(Error::EmptyBasis(_))));
        assert!(matches!(flat.contract_element(1), Err(Error::EmptyBasis(_))));
        let single = bases_by_paths(&SkewRegion::from_words("EN", "NE").unwrap()).unwrap();
        assert_eq!(lists(&single.contract_element(1).unwrap()), ["1"]);
    }

    #[test]
    fn direct_sum_is_product_of_quadrants() {
        let m = bases_by_paths(&five_element()).unwrap();
        let left = bases_by_paths(&SkewRegion::from_words("ENN", "NNE").unwrap()).unwrap();
        let right = bases_by_paths(&SkewRegion::from_words("EN", "NE").unwrap()).unwrap();
        assert_eq!(
            m.direct_sum_at(1, 2).unwrap().bases().len(),
            left.bases().len() * right.bases().len()
        );
    }

    #[test]
    fn components_and_dimension() {
        let m = bases_by_paths(&five_element()).unwrap();
        assert_eq!(connected_components(&m).len(), 1);
        assert_eq!(polytope_dimension(&five_element()), 4);

        let flat = SkewRegion::from_words("EN", "EN").unwrap();
        let c = connected_components(&bases_by_paths(&flat).unwrap());
        assert_eq!(c.blocks, vec![vec![1], vec![2]]);
        assert_eq!(polytope_dimension(&flat), 0);

        let two = SkewRegion::from_words("ENEN", "NENE").unwrap();
        let c = connected_components(&bases_by_paths(&two).unwrap());
        assert_eq!(c.blocks, vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(polytope_dimension(&two), 4 - c.len());
    }
}
