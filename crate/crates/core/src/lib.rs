//! Lattice path matroids and the faces of their base polytopes.
//!
//! A region `[P, Q]` between two lattice paths defines a matroid whose bases
//! are the north-step positions of the paths inside the region. This crate
//! enumerates those bases, describes the faces of the base polytope
//! combinatorially, and checks the descriptions against an exact convex-hull
//! oracle.

pub mod error;
pub mod faces;
pub mod lattice;
pub mod limits;
pub mod matroid;
pub mod oracle;
pub mod verify;
mod util;

pub use error::{Error, Result};
pub use faces::{
    bottom_of_face, bottom_to_maximal_region, check_conditions, covering_subfaces,
    edge_count_by_area, enumerate_bottoms, enumerate_face_subsets, face_paths, face_poset,
    facet_operations, segment_decomposition, Block, BlockTiledBottom, BlockTiledRegion,
    CoverCase, FacePoset, FacetOperation, SegmentDecomposition, Subface,
};
pub use lattice::{
    area_between, is_border_strip, l_prime, make_region, outside_corners, parse_path,
    strip_path, CornerSide, LatticePath, OutsideCorner, SkewRegion, Step,
};
pub use matroid::{
    bases_by_paths, bases_by_transversals, connected_components, polytope_dimension,
    presentation, Basis, ComponentPartition, LatticeMatroid,
};
