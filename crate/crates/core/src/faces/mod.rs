//! Combinatorial descriptions of the faces of a lattice path matroid polytope.
//!
//! Facets come from three constructions (deletion, contraction, direct sum).
//! Border strips get a subset calculus over those constructions; general
//! connected regions index faces by block-tiled bottoms.

mod bottoms;
mod poset;
mod strip;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{area_between, l_prime, outside_corners, SkewRegion};
use crate::util::low_mask;

pub use bottoms::{
    bottom_of_face, bottom_to_maximal_region, enumerate_bottoms, face_paths, Block,
    BlockTiledBottom, BlockTiledRegion,
};
pub use poset::{covering_subfaces, face_poset, CoverCase, FacePoset, Subface};
pub use strip::{check_conditions, enumerate_face_subsets, segment_decomposition, SegmentDecomposition};

/// A matroid construction whose bases form a facet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum FacetOperation {
    /// Bases avoiding `i`: the hyperplane `x_i = 0`.
    Deletion { i: usize },
    /// Bases containing `i`: the hyperplane `x_i = 1`.
    Contraction { i: usize },
    /// Bases with `q` elements in `[p + q]`, at the outside corner `(p, q)`.
    DirectSum { p: usize, q: usize },
}

impl FacetOperation {
    /// The element of a deletion or contraction.
    pub fn element(&self) -> Option<usize> {
        match *self {
            FacetOperation::Deletion { i } | FacetOperation::Contraction { i } => Some(i),
            FacetOperation::DirectSum { .. } => None,
        }
    }

    /// `p + q` for a direct sum.
    pub fn sum_index(&self) -> Option<usize> {
        match *self {
            FacetOperation::DirectSum { p, q } => Some(p + q),
            _ => None,
        }
    }

    /// Whether the basis with north mask `mask` lies on the hyperplane.
    pub fn is_tight(&self, mask: u128) -> bool {
        match *self {
            FacetOperation::Deletion { i } => mask >> (i - 1) & 1 == 0,
            FacetOperation::Contraction { i } => mask >> (i - 1) & 1 == 1,
            FacetOperation::DirectSum { p, q } => (mask & low_mask(p + q)).count_ones() as usize == q,
        }
    }
}

impl fmt::Display for FacetOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FacetOperation::Deletion { i } => write!(f, "{i}-deletion"),
            FacetOperation::Contraction { i } => write!(f, "{i}-contraction"),
            FacetOperation::DirectSum { p, q } => write!(f, "({p},{q})-direct sum"),
        }
    }
}

fn require_connected(region: &SkewRegion) -> Result<()> {
    if !region.is_connected() {
        return Err(Error::Domain(format!(
            "{region} is not connected; split it at its meeting points"
        )));
    }
    Ok(())
}

/// One operation per facet of the polytope of a connected region.
///
/// Deletions and contractions are read off the strip paths of all border
/// strips from `(0,0)` to `(m,r)` inside the region; direct sums sit at the
/// outside corners.
pub fn facet_operations(region: &SkewRegion) -> Result<Vec<FacetOperation>> {
    require_connected(region)?;
    let n = region.size();
    let mut ops = BTreeSet::new();
    if n >= 2 {
        for mask in region.path_masks()? {
            if mask & 1 == 1 || mask >> (n - 1) & 1 == 0 {
                continue;
            }
            // The strip is [P', Q'] with Q' one unit above P' inside.
            let mut h = 0;
            let fits = (1..n).all(|i| {
                h += (mask >> (i - 1) & 1) as usize;
                h < region.upper_prefix(i)
            });
            if !fits {
                continue;
            }
            for i in 1..=n {
                let j = if n == 2 {
                    None
                } else if i == 1 {
                    Some(2)
                } else if i == n {
                    Some(n - 1)
                } else {
                    Some(i)
                };
                let north = j.is_none_or(|j| mask >> (j - 1) & 1 == 1);
                ops.insert(if north {
                    FacetOperation::Contraction { i }
                } else {
                    FacetOperation::Deletion { i }
                });
            }
        }
    }
    for c in outside_corners(region) {
        ops.insert(FacetOperation::DirectSum { p: c.p, q: c.q });
    }
    Ok(ops.into_iter().collect())
}

/// Sum over all paths `L` of the area between `L` and `L'`, its rewrite
/// through the meeting points with the lower path.
pub fn edge_count_by_area(region: &SkewRegion) -> Result<usize> {
    require_connected(region)?;
    let lower = region.lower();
    let mut total = 0;
    for path in region.paths()? {
        total += area_between(&l_prime(lower, &path)?, &path)?;
    }
    Ok(total)
}
