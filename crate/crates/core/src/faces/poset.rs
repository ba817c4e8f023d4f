//! Covering relations between bottoms and the face poset they generate.

use std::collections::{BTreeMap, HashSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::SkewRegion;
use crate::limits::MAX_POSET_NODES;
use crate::util::{bits, low_mask, UnionFind};

use super::bottoms::{bottom_of_masks, face_masks, BlockTiledBottom};
use super::{facet_operations, require_connected, FacetOperation};

/// How a facet operation cuts a face down to a covered subface.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverCase {
    /// A direct sum at an outside corner.
    DirectSum,
    /// The element ends exactly one block, which disappears.
    BlockDeletion,
    /// The element ends two blocks, which merge into one.
    BlockMerge,
}

/// A face one dimension down, with every operation that cuts it out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subface {
    pub bottom: BlockTiledBottom,
    pub producers: Vec<(FacetOperation, CoverCase)>,
}

/// Number of connected components of the matroid whose bases are `masks`,
/// counted on the elements used by some basis or missed by some basis.
fn component_count(masks: &[u128], n: usize) -> usize {
    let set: HashSet<u128> = masks.iter().copied().collect();
    let ground = low_mask(n);
    let mut uf = UnionFind::new(n);
    for &b in masks {
        for x in bits(b) {
            for y in bits(ground & !b) {
                if uf.find(x) != uf.find(y) && set.contains(&(b & !(1u128 << x) | 1u128 << y)) {
                    uf.union(x, y);
                }
            }
        }
    }
    (0..n).filter(|&e| uf.find(e) == e).count()
}

/// Dimension of the polytope with vertex masks `masks` in `R^n`.
pub(crate) fn face_dimension(masks: &[u128], n: usize) -> usize {
    n - component_count(masks, n)
}

fn classify(op: &FacetOperation, bottom: &BlockTiledBottom) -> Result<CoverCase> {
    let Some(i) = op.element() else {
        return Ok(CoverCase::DirectSum);
    };
    let ends = bottom
        .blocks()
        .iter()
        .filter(|b| {
            let (j, k) = b.endpoints();
            i == j || i == k
        })
        .count();
    match ends {
        1 => Ok(CoverCase::BlockDeletion),
        2 => Ok(CoverCase::BlockMerge),
        _ => Err(Error::Domain(format!(
            "{op} cuts a face but ends {ends} blocks of {}",
            bottom.canonical()
        ))),
    }
}

fn covering_from_masks(
    region: &SkewRegion,
    ops: &[FacetOperation],
    bottom: &BlockTiledBottom,
    face: &[u128],
) -> Result<Vec<Subface>> {
    let n = region.size();
    let dim = face_dimension(face, n);
    let mut found: BTreeMap<String, Subface> = BTreeMap::new();
    for op in ops {
        let cut: Vec<u128> = face.iter().copied().filter(|&m| op.is_tight(m)).collect();
        if cut.is_empty() || cut.len() == face.len() || face_dimension(&cut, n) + 1 != dim {
            continue;
        }
        let sub = bottom_of_masks(region, &cut)?;
        let case = classify(op, bottom)?;
        found
            .entry(sub.canonical())
            .or_insert_with(|| Subface {
                bottom: sub,
                producers: Vec::new(),
            })
            .producers
            .push((*op, case));
    }
    Ok(found.into_values().collect())
}

/// Faces covered by the face of `bottom`, each with the facet operations
/// whose hyperplane cuts it out.
pub fn covering_subfaces(region: &SkewRegion, bottom: &BlockTiledBottom) -> Result<Vec<Subface>> {
    let ops = facet_operations(region)?;
    let face = face_masks(region, bottom)?;
    covering_from_masks(region, &ops, bottom, &face)
}

/// The face poset of a connected region's polytope, without the empty face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FacePoset {
    /// Bottoms sorted by rank, then by canonical form.
    pub nodes: Vec<BlockTiledBottom>,
    /// Rank (face dimension) of each node.
    pub ranks: Vec<usize>,
    /// `(lower, upper)` node indices of each covering pair.
    pub covers: Vec<(usize, usize)>,
}

impl FacePoset {
    /// Number of faces of each dimension, vertices first.
    pub fn rank_sizes(&self) -> Vec<usize> {
        let top = self.ranks.iter().copied().max().unwrap_or(0);
        let mut out = vec![0; top + 1];
        for &r in &self.ranks {
            out[r] += 1;
        }
        out
    }
}

impl Serialize for FacePoset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("FacePoset", 2)?;
        s.serialize_field("ranks", &self.rank_sizes())?;
        s.serialize_field("covers", &self.covers)?;
        s.end()
    }
}

/// Build the face poset by walking covering subfaces down from the top face.
pub fn face_poset(region: &SkewRegion) -> Result<FacePoset> {
    require_connected(region)?;
    let n = region.size();
    let ops = facet_operations(region)?;
    let all = region.path_masks()?;
    let top = bottom_of_masks(region, &all)?;
    let top_rank = face_dimension(&all, n);

    let mut levels: Vec<BTreeMap<String, BlockTiledBottom>> = vec![BTreeMap::new(); top_rank + 1];
    levels[top_rank].insert(top.canonical(), top);
    let mut edges: Vec<(String, String)> = Vec::new();
    let mut total = 1;
    for rank in (1..=top_rank).rev() {
        let current: Vec<BlockTiledBottom> = levels[rank].values().cloned().collect();
        for bottom in current {
            let face = face_masks(region, &bottom)?;
            for sub in covering_from_masks(region, &ops, &bottom, &face)? {
                let key = sub.bottom.canonical();
                edges.push((key.clone(), bottom.canonical()));
                if !levels[rank - 1].contains_key(&key) {
                    total += 1;
                    if total > MAX_POSET_NODES {
                        return Err(Error::Resource(format!(
                            "face poset exceeds {MAX_POSET_NODES} faces"
                        )));
                    }
                    levels[rank - 1].insert(key, sub.bottom);
                }
            }
        }
    }

    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    let mut nodes = Vec::with_capacity(total);
    let mut ranks = Vec::with_capacity(total);
    for (rank, level) in levels.into_iter().enumerate() {
        for (key, bottom) in level {
            index.insert(key, nodes.len());
            nodes.push(bottom);
            ranks.push(rank);
        }
    }
    let mut covers: Vec<(usize, usize)> = edges
        .iter()
        .map(|(lo, hi)| (index[lo], index[hi]))
        .collect();
    covers.sort_unstable();
    covers.dedup();
    Ok(FacePoset {
        nodes,
        ranks,
        covers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_box_poset() {
        let region = SkewRegion::from_words("EN", "NE").unwrap();
        let poset = face_poset(&region).unwrap();
        assert_eq!(poset.rank_sizes(), vec![2, 1]);
        assert_eq!(poset.covers, vec![(0, 2), (1, 2)]);
        assert_eq!(
            serde_json::to_string(&poset).unwrap(),
            r#"{"ranks":[2,1],"covers":[[0,2],[1,2]]}"#
        );
    }

    #[test]
    fn octahedron_poset() {
        let region = SkewRegion::from_words("EENN", "NNEE").unwrap();
        let poset = face_poset(&region).unwrap();
        assert_eq!(poset.rank_sizes(), vec![6, 12, 8, 1]);
        // Every edge has two vertices, every triangle three edges.
        let below = |r: usize| {
            poset
                .covers
                .iter()
                .filter(|&&(lo, _)| poset.ranks[lo] == r)
                .count()
        };
        assert_eq!(below(0), 24);
        assert_eq!(below(1), 24);
        assert_eq!(below(2), 8);
    }

    #[test]
    fn cover_cases() {
        let region = SkewRegion::from_words("EENN", "NNEE").unwrap();
        let top = bottom_of_masks(&region, &region.path_masks().unwrap()).unwrap();
        let subs = covering_subfaces(&region, &top).unwrap();
        assert_eq!(subs.len(), 8);
        for s in &subs {
            assert_eq!(s.bottom.block_count(), 2);
        }
    }

    #[test]
    fn dimension_of_vertex_sets() {
        assert_eq!(face_dimension(&[0b01, 0b10], 2), 1);
        assert_eq!(face_dimension(&[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100], 4), 3);
        assert_eq!(face_dimension(&[0b01], 2), 0);
    }
}
