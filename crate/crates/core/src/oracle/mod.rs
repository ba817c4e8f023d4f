//! Exact-geometry ground truth for base polytopes: vertices, facets by an
//! exact hull, face lattices, flag vectors and cd-indices.

mod cd;
mod hull;
mod lattice;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lattice::SkewRegion;
use crate::matroid::{bases_by_paths, LatticeMatroid};

pub use cd::{cd_index, rank2_cd_rhs, rank2_cd_lhs, region_cd_index, CdPolynomial};
pub use hull::{facets_exact, Hyperplane};
pub use lattice::{
    check_edge_directions, face_lattice, flag_vector, simplex_product_lattice, FaceLatticeGeom,
};

/// Distinct integer points, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexSet {
    points: Vec<Vec<i64>>,
}

impl VertexSet {
    pub fn new(mut points: Vec<Vec<i64>>) -> Self {
        points.sort();
        points.dedup();
        VertexSet { points }
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }
}

/// Incidence vectors of the bases.
pub fn vertices(matroid: &LatticeMatroid) -> VertexSet {
    let n = matroid.ground().iter().copied().max().unwrap_or(0);
    VertexSet::new(
        matroid
            .bases()
            .iter()
            .map(|b| (1..=n).map(|i| b.contains(i) as i64).collect())
            .collect(),
    )
}

/// Dimension of the affine hull, by exact elimination.
pub fn affine_dimension(vertices: &VertexSet) -> usize {
    let pts: Vec<&[i64]> = vertices.points().iter().map(Vec::as_slice).collect();
    hull::hull_pivots(&pts)
        .expect("0/1 coordinates cannot overflow")
        .len()
}

/// Dimension of the affine hull of a subset of the points.
pub(crate) fn subset_dimension(points: &[&[i64]]) -> Result<usize> {
    Ok(hull::hull_pivots(points)?.len())
}

/// Vertices and face lattice of the base polytope of a region.
pub fn region_face_lattice(region: &SkewRegion) -> Result<(VertexSet, FaceLatticeGeom)> {
    let v = vertices(&bases_by_paths(region)?);
    let facets = if affine_dimension(&v) == 0 {
        Vec::new()
    } else {
        facets_exact(&v)?
    };
    let lattice = face_lattice(&v, &facets)?;
    Ok((v, lattice))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertices_and_dimension() {
        let single = SkewRegion::from_words("EN", "NE").unwrap();
        let v = vertices(&bases_by_paths(&single).unwrap());
        assert_eq!(v.points(), &[vec![0, 1], vec![1, 0]]);
        assert_eq!(affine_dimension(&v), 1);

        let five_element = SkewRegion::from_words("EENNN", "NNENE").unwrap();
        let v = vertices(&bases_by_paths(&five_element).unwrap());
        assert_eq!(v.len(), 9);
        assert!(v.points().iter().all(|p| p.iter().sum::<i64>() == 3));
        assert_eq!(affine_dimension(&v), 4);

        let flat = SkewRegion::from_words("ENNE", "ENNE").unwrap();
        let v = vertices(&bases_by_paths(&flat).unwrap());
        assert_eq!(v.len(), 1);
        assert_eq!(affine_dimension(&v), 0);
    }
}
