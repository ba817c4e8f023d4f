//! Face lattices from facet-vertex incidences, and what is read off them.

use std::collections::{BTreeMap, HashMap, HashSet};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::limits;

use super::{hull::Hyperplane, subset_dimension, VertexSet};

/// Faces as vertex sets, ordered by rank. Index 0 is the empty face (rank -1)
/// and the last index is the whole polytope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLatticeGeom {
    pub vertex_count: usize,
    pub faces: Vec<FixedBitSet>,
    pub ranks: Vec<i64>,
    /// Pairs `(lower, upper)` of face indices.
    pub covers: Vec<(usize, usize)>,
}

impl FaceLatticeGeom {
    fn assemble(
        vertex_count: usize,
        mut faces: Vec<(i64, FixedBitSet)>,
        covers: Vec<(FixedBitSet, FixedBitSet)>,
    ) -> FaceLatticeGeom {
        faces.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| a.1.ones().cmp(b.1.ones()))
        });
        let index: HashMap<&FixedBitSet, usize> =
            faces.iter().enumerate().map(|(i, (_, s))| (s, i)).collect();
        let mut cov: Vec<(usize, usize)> = covers
            .iter()
            .map(|(a, b)| (index[a], index[b]))
            .collect();
        cov.sort_unstable();
        cov.dedup();
        let (ranks, faces) = faces.into_iter().unzip();
        FaceLatticeGeom {
            vertex_count,
            faces,
            ranks,
            covers: cov,
        }
    }

    pub fn dim(&self) -> i64 {
        *self.ranks.last().expect("lattice has a top")
    }

    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }

    /// Face counts `f_0, ..., f_dim`; the last entry is the polytope itself.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut out = vec![0usize; (self.dim() + 1) as usize];
        for &r in &self.ranks {
            if r >= 0 {
                out[r as usize] += 1;
            }
        }
        out
    }

    pub fn faces_of_rank(&self, rank: i64) -> impl Iterator<Item = usize> + '_ {
        (0..self.faces.len()).filter(move |&i| self.ranks[i] == rank)
    }

    /// Every cover relation joins consecutive ranks.
    pub fn is_graded(&self) -> bool {
        self.covers
            .iter()
            .all(|&(a, b)| self.ranks[b] == self.ranks[a] + 1)
    }

    /// Every interval of length two has exactly four elements.
    pub fn is_eulerian(&self) -> bool {
        let mut down: Vec<Vec<usize>> = vec![Vec::new(); self.faces.len()];
        for &(a, b) in &self.covers {
            down[b].push(a);
        }
        (0..self.faces.len()).all(|z| {
            let mut count: HashMap<usize, usize> = HashMap::new();
            for &y in &down[z] {
                for &x in &down[y] {
                    *count.entry(x).or_default() += 1;
                }
            }
            count.values().all(|&c| c == 2)
        })
    }
}

/// All faces of `conv(V)` as intersections of facet vertex sets.
pub fn face_lattice(vertices: &VertexSet, facets: &[Hyperplane]) -> Result<FaceLatticeGeom> {
    let n = vertices.len();
    if n == 0 {
        return Err(Error::Domain("no vertices".into()));
    }
    let pts: Vec<&[i64]> = vertices.points().iter().map(Vec::as_slice).collect();
    let facet_sets: Vec<FixedBitSet> = facets
        .iter()
        .map(|h| {
            let mut s = FixedBitSet::with_capacity(n);
            pts.iter()
                .enumerate()
                .filter(|(_, p)| h.is_tight(p))
                .for_each(|(i, _)| s.insert(i));
            s
        })
        .collect();

    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    seen.insert(full.clone());
    let mut queue = vec![full];
    let mut faces: Vec<FixedBitSet> = Vec::new();
    while let Some(f) = queue.pop() {
        for h in &facet_sets {
            let mut g = f.clone();
            g.intersect_with(h);
            if !g.is_clear() && g != f && seen.insert(g.clone()) {
                if seen.len() > limits::MAX_FACES {
                    return Err(Error::Resource(format!(
                        "more than {} faces",
                        limits::MAX_FACES
                    )));
                }
                queue.push(g);
            }
        }
        faces.push(f);
    }

    let rank_of = |s: &FixedBitSet| -> Result<i64> {
        let sub: Vec<&[i64]> = s.ones().map(|i| pts[i]).collect();
        Ok(subset_dimension(&sub)? as i64)
    };
    let mut ranked: Vec<(i64, FixedBitSet)> = Vec::with_capacity(faces.len() + 1);
    let mut rank_map: HashMap<FixedBitSet, i64> = HashMap::new();
    for f in faces {
        let r = rank_of(&f)?;
        rank_map.insert(f.clone(), r);
        ranked.push((r, f));
    }
    let empty = FixedBitSet::with_capacity(n);
    let mut covers = Vec::new();
    for (r, g) in &ranked {
        if *r == 0 {
            covers.push((empty.clone(), g.clone()));
            continue;
        }
        for h in &facet_sets {
            let mut x = g.clone();
            x.intersect_with(h);
            if x != *g && !x.is_clear() && rank_map[&x] == r - 1 {
                covers.push((x, g.clone()));
            }
        }
    }
    ranked.push((-1, empty));
    Ok(FaceLatticeGeom::assemble(n, ranked, covers))
}

/// Every edge joins two vertices that differ by `e_a - e_b`.
pub fn check_edge_directions(lattice: &FaceLatticeGeom, vertices: &VertexSet) -> bool {
    let pts = vertices.points();
    lattice.faces_of_rank(1).all(|e| {
        let ends: Vec<usize> = lattice.faces[e].ones().collect();
        if ends.len() != 2 {
            return false;
        }
        let diff: Vec<i64> = pts[ends[0]]
            .iter()
            .zip(&pts[ends[1]])
            .map(|(a, b)| a - b)
            .filter(|&d| d != 0)
            .collect();
        diff.len() == 2 && diff.iter().sum::<i64>() == 0 && diff.iter().all(|d| d.abs() == 1)
    })
}

/// Number of chains of faces with each rank set `S` of `{0, .., dim-1}`.
pub fn flag_vector(lattice: &FaceLatticeGeom) -> Result<BTreeMap<Vec<usize>, u128>> {
    if !lattice.is_graded() {
        return Err(Error::Domain("face poset is not graded".into()));
    }
    let d = lattice.dim().max(0) as usize;
    let by_rank: Vec<Vec<usize>> = (0..d).map(|k| lattice.faces_of_rank(k as i64).collect()).collect();
    // below[(a, b)][j]: faces of rank a inside the j-th face of rank b.
    let mut below: HashMap<(usize, usize), Vec<Vec<usize>>> = HashMap::new();
    for b in 0..d {
        for a in 0..b {
            let lists = by_rank[b]
                .iter()
                .map(|&g| {
                    by_rank[a]
                        .iter()
                        .enumerate()
                        .filter(|(_, &f)| lattice.faces[f].is_subset(&lattice.faces[g]))
                        .map(|(k, _)| k)
                        .collect()
                })
                .collect();
            below.insert((a, b), lists);
        }
    }
    let mut out = BTreeMap::new();
    for mask in 0u32..1 << d {
        let set: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        let Some((&first, rest)) = set.split_first() else {
            out.insert(set, 1);
            continue;
        };
        let mut counts: Vec<u128> = vec![1; by_rank[first].len()];
        let mut prev = first;
        for &s in rest {
            counts = below[&(prev, s)]
                .iter()
                .map(|lst| lst.iter().map(|&k| counts[k]).sum())
                .collect();
            prev = s;
        }
        out.insert(set, counts.iter().sum());
    }
    Ok(out)
}

/// Face lattice of the product of simplices with `i` and `j` vertices, built
/// from pairs of faces.
pub fn simplex_product_lattice(i: usize, j: usize) -> Result<FaceLatticeGeom> {
    if i == 0 || j == 0 {
        return Err(Error::Domain("simplices need at least one vertex".into()));
    }
    if i + j > 16 {
        return Err(Error::Resource("simplex product too large".into()));
    }
    let n = i * j;
    let set_of = |a: u32, b: u32| -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(n);
        for x in 0..i {
            for y in 0..j {
                if a >> x & 1 == 1 && b >> y & 1 == 1 {
                    s.insert(x * j + y);
                }
            }
        }
        s
    };
    let mut faces = Vec::new();
    let mut covers = Vec::new();
    let empty = FixedBitSet::with_capacity(n);
    for a in 1u32..1 << i {
        for b in 1u32..1 << j {
            let rank = (a.count_ones() + b.count_ones()) as i64 - 2;
            let s = set_of(a, b);
            if rank == 0 {
                covers.push((empty.clone(), s.clone()));
            }
            for x in 0..i {
                let smaller = a & !(1 << x);
                if a >> x & 1 == 1 && smaller != 0 {
                    covers.push((set_of(smaller, b), s.clone()));
                }
            }
            for y in 0..j {
                let smaller = b & !(1 << y);
                if b >> y & 1 == 1 && smaller != 0 {
                    covers.push((set_of(a, smaller), s.clone()));
                }
            }
            faces.push((rank, s));
        }
    }
    faces.push((-1, empty));
    Ok(FaceLatticeGeom::assemble(n, faces, covers))
}

#[cfg(test)]
mod tests {
    use super::super::{affine_dimension, facets_exact};
    use super::*;

    fn hull_lattice(points: Vec<Vec<i64>>) -> (VertexSet, FaceLatticeGeom) {
        let v = VertexSet::new(points);
        let f = if affine_dimension(&v) == 0 {
            Vec::new()
        } else {
            facets_exact(&v).unwrap()
        };
        let l = face_lattice(&v, &f).unwrap();
        (v, l)
    }

    fn product_points(i: usize, j: usize) -> Vec<Vec<i64>> {
        let mut pts = Vec::new();
        for x in 0..i {
            for y in 0..j {
                let mut p = vec![0i64; i + j];
                p[x] = 1;
                p[i + y] = 1;
                pts.push(p);
            }
        }
        pts
    }

    #[test]
    fn square_and_segment() {
        let (_, seg) = hull_lattice(vec![vec![0], vec![1]]);
        assert_eq!(seg.f_vector(), vec![2, 1]);
        let (v, sq) = hull_lattice(product_points(2, 2));
        assert_eq!(sq.f_vector(), vec![4, 4, 1]);
        assert!(sq.is_eulerian());
        assert!(check_edge_directions(&sq, &v));
    }

    #[test]
    fn flag_numbers() {
        let (_, seg) = hull_lattice(vec![vec![0], vec![1]]);
        let f = flag_vector(&seg).unwrap();
        assert_eq!(f[&vec![]], 1);
        assert_eq!(f[&vec![0]], 2);
        let (_, tri) = hull_lattice(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        let f = flag_vector(&tri).unwrap();
        assert_eq!((f[&vec![0]], f[&vec![1]], f[&vec![0, 1]]), (3, 3, 6));
        let (_, sq) = hull_lattice(product_points(2, 2));
        assert_eq!(flag_vector(&sq).unwrap()[&vec![0, 1]], 8);
    }

    #[test]
    fn edge_directions() {
        let (v, tri) = hull_lattice(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(check_edge_directions(&tri, &v));
        let (v, seg) = hull_lattice(vec![vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        assert!(!check_edge_directions(&seg, &v));
    }

    #[test]
    fn simplex_products_match_hulls() {
        for i in 1..=4 {
            for j in 1..=4 {
                let comb = simplex_product_lattice(i, j).unwrap();
                let (_, hull) = hull_lattice(product_points(i, j));
                assert_eq!(comb.f_vector(), hull.f_vector(), "{i} x {j}");
                assert!(comb.is_eulerian());
                assert!(comb.is_graded());
            }
        }
        assert_eq!(simplex_product_lattice(1, 1).unwrap().f_vector(), vec![1]);
        assert_eq!(&simplex_product_lattice(2, 3).unwrap().f_vector()[..3], &[6, 9, 5]);
    }
}
