//! Faces of border-strip polytopes as subsets of facet operations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{is_border_strip, outside_corners, region_from_strip_path, strip_path};
use crate::lattice::{LatticePath, SkewRegion, Step};

use super::FacetOperation;

/// The facet operations of a border strip cut at its direct sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SegmentDecomposition {
    pub strip: LatticePath,
    /// `S_1, ..., S_{d+1}`: deletions and contractions between direct sums.
    pub segments: Vec<Vec<FacetOperation>>,
    /// The `d` direct sums, in order along the strip.
    pub direct_sums: Vec<FacetOperation>,
}

impl SegmentDecomposition {
    pub fn d(&self) -> usize {
        self.direct_sums.len()
    }

    /// `S_i`, 1-based.
    pub fn segment(&self, i: usize) -> &[FacetOperation] {
        &self.segments[i - 1]
    }

    /// `S_i` plus the direct sum before it.
    pub fn left(&self, i: usize) -> Vec<FacetOperation> {
        let mut out = self.segments[i - 1].clone();
        if i > 1 {
            out.push(self.direct_sums[i - 2]);
        }
        out
    }

    /// `S_i` plus the direct sum after it.
    pub fn right(&self, i: usize) -> Vec<FacetOperation> {
        let mut out = self.segments[i - 1].clone();
        if i <= self.d() {
            out.push(self.direct_sums[i - 1]);
        }
        out
    }

    /// All operations: `S_1`, first direct sum, `S_2`, ...
    pub fn operations(&self) -> Vec<FacetOperation> {
        let mut out = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            out.extend(seg);
            if let Some(ds) = self.direct_sums.get(k) {
                out.push(*ds);
            }
        }
        out
    }
}

/// Cut the strip path at every position `i` with `r_i != r_{i+1}`.
pub fn segment_decomposition(strip: &LatticePath) -> Result<SegmentDecomposition> {
    let region = region_from_strip_path(strip)?;
    let n = strip.len();
    let corners = outside_corners(&region);
    let mut segments = vec![Vec::new()];
    let mut direct_sums = Vec::new();
    for i in 1..=n {
        segments.last_mut().expect("nonempty").push(match strip.step(i) {
            Step::E => FacetOperation::Deletion { i },
            Step::N => FacetOperation::Contraction { i },
        });
        if i < n && strip.step(i) != strip.step(i + 1) {
            let c = corners
                .iter()
                .find(|c| c.index() == i)
                .ok_or_else(|| Error::Domain(format!("no outside corner after step {i}")))?;
            direct_sums.push(FacetOperation::DirectSum { p: c.p, q: c.q });
            segments.push(Vec::new());
        }
    }
    Ok(SegmentDecomposition {
        strip: strip.clone(),
        segments,
        direct_sums,
    })
}

fn subset(part: &[FacetOperation], whole: &[FacetOperation]) -> bool {
    part.iter().all(|x| whole.contains(x))
}

/// Whether a set `T` of facet operations passes the segment rules.
///
/// No right variant `S_i^R` with `i >= 2` may lie in `T`. For each left
/// variant `S_i^L` inside `T`, let `S_i, .., S_j` be the longest run of
/// segments inside `T` (`j <= d`). If the run reaches `j = d` and `T` also
/// holds all of `S_{d+1}` apart from the last element's operation, the count
/// `d + 2 - i` must be even; otherwise the run length `j - i + 1` must be even.
pub fn check_conditions(t: &[FacetOperation], dec: &SegmentDecomposition) -> bool {
    let d = dec.d();
    if (2..=d + 1).any(|i| subset(&dec.right(i), t)) {
        return false;
    }
    let n = dec.strip.len();
    let tail: Vec<FacetOperation> = dec
        .segment(d + 1)
        .iter()
        .copied()
        .filter(|op| op.element() != Some(n))
        .collect();
    for i in 1..=d {
        if !subset(&dec.left(i), t) {
            continue;
        }
        let mut j = i;
        while j < d && subset(dec.segment(j + 1), t) {
            j += 1;
        }
        let reaches_end = j == d && subset(&tail, t);
        let even = if reaches_end {
            (d + 2 - i).is_multiple_of(2)
        } else {
            (j - i + 1) % 2 == 0
        };
        if !even {
            return false;
        }
    }
    true
}

/// All `t`-subsets of the facet operations of a border strip that pass
/// [`check_conditions`], each listed in strip order.
pub fn enumerate_face_subsets(region: &SkewRegion, t: usize) -> Result<Vec<Vec<FacetOperation>>> {
    if !is_border_strip(region) {
        return Err(Error::Domain(format!("{region} is not a border strip")));
    }
    if t >= region.size() {
        return Err(Error::Domain(format!(
            "t = {t} exceeds the polytope dimension {}",
            region.size() - 1
        )));
    }
    let dec = segment_decomposition(&strip_path(region)?)?;
    let ops = dec.operations();
    // Positions after which S_i^R is complete, to prune right variants.
    let mut closes: Vec<Option<usize>> = vec![None; ops.len()];
    let mut pos = 0;
    for i in 1..=dec.d() + 1 {
        pos += dec.segment(i).len();
        if i <= dec.d() {
            pos += 1;
        }
        if i >= 2 {
            closes[pos - 1] = Some(i);
        }
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    search(&ops, &closes, &dec, t, 0, &mut chosen, &mut out);
    Ok(out)
}

fn search(
    ops: &[FacetOperation],
    closes: &[Option<usize>],
    dec: &SegmentDecomposition,
    t: usize,
    at: usize,
    chosen: &mut Vec<FacetOperation>,
    out: &mut Vec<Vec<FacetOperation>>,
) {
    if chosen.len() + (ops.len() - at) < t {
        return;
    }
    if at == ops.len() {
        if check_conditions(chosen, dec) {
            out.push(chosen.clone());
        }
        return;
    }
    let mut step = |chosen: &mut Vec<FacetOperation>| {
        let cut = closes[at].is_some_and(|i| subset(&dec.right(i), chosen));
        if !cut {
            search(ops, closes, dec, t, at + 1, chosen, out);
        }
    };
    if chosen.len() < t {
        chosen.push(ops[at]);
        step(chosen);
        chosen.pop();
    }
    step(chosen);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_path;

    fn long_strip() -> SegmentDecomposition {
        segment_decomposition(&parse_path("EENNENEEENENNNN").unwrap()).unwrap()
    }

    fn del(i: usize) -> FacetOperation {
        FacetOperation::Deletion { i }
    }

    fn con(i: usize) -> FacetOperation {
        FacetOperation::Contraction { i }
    }

    #[test]
    fn decomposition_of_long_strip() {
        let dec = long_strip();
        assert_eq!(dec.d(), 7);
        let sums: Vec<usize> = dec.direct_sums.iter().filter_map(|o| o.sum_index()).collect();
        assert_eq!(sums, vec![2, 4, 5, 6, 9, 10, 11]);
        assert_eq!(dec.segment(1), &[del(1), del(2)]);
        assert_eq!(dec.segment(2), &[con(3), con(4)]);
        assert_eq!(dec.segment(3), &[del(5)]);
        assert_eq!(dec.segment(8), &[con(12), con(13), con(14), con(15)]);
    }

    #[test]
    fn small_decompositions() {
        let single = segment_decomposition(&parse_path("NN").unwrap()).unwrap();
        assert_eq!(single.d(), 0);
        assert_eq!(single.segments, vec![vec![con(1), con(2)]]);
        let long_strip = segment_decomposition(&parse_path("NNEEENNEE").unwrap()).unwrap();
        assert_eq!(long_strip.d(), 3);
        assert_eq!(long_strip.segments.len(), 4);
        assert!(segment_decomposition(&parse_path("ENE").unwrap()).is_err());
    }

    #[test]
    fn listed_verdicts() {
        let dec = long_strip();
        let ds = |k: usize| dec.direct_sums[k - 1];
        assert!(!check_conditions(&[con(3), con(4), ds(2), del(5)], &dec));
        assert!(!check_conditions(&[ds(1), con(3), con(4)], &dec));
        assert!(check_conditions(&[ds(1), con(3), con(4), del(5)], &dec));
    }

    #[test]
    fn single_box_subsets() {
        let single = SkewRegion::from_words("EN", "NE").unwrap();
        assert_eq!(enumerate_face_subsets(&single, 0).unwrap(), vec![Vec::<FacetOperation>::new()]);
        assert_eq!(enumerate_face_subsets(&single, 1).unwrap().len(), 2);
        assert!(enumerate_face_subsets(&single, 2).is_err());
    }

    #[test]
    fn facet_subsets_count() {
        let long_strip = SkewRegion::from_words("ENEEENNEN", "NNEEENNEE").unwrap();
        assert_eq!(enumerate_face_subsets(&long_strip, 1).unwrap().len(), 12);
    }
}
