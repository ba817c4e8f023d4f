mod common;

use std::collections::{BTreeSet, HashMap, HashSet};

use common::{connected_strategy, region};
use lpm_core::oracle::{affine_dimension, VertexSet};
use lpm_core::verify::{connected_regions, oracle_data};
use lpm_core::{
    bottom_of_face, bottom_to_maximal_region, covering_subfaces, enumerate_bottoms, face_paths,
    face_poset, Block, BlockTiledBottom, CoverCase, FacetOperation, LatticePath,
};
use proptest::prelude::*;

fn point(path: &LatticePath) -> Vec<i64> {
    path.steps().iter().map(|s| (s.as_char() == 'N') as i64).collect()
}

fn labels(block: &Block) -> Vec<usize> {
    (block.first_label()..=block.last_label()).collect()
}

#[test]
fn clones_of_a_three_box_block() {
    let a = Block::new(vec![(1, 0), (2, 0), (2, 1)]).unwrap();
    let b = Block::new(vec![(0, 1), (1, 1), (1, 2)]).unwrap();
    assert_eq!((a.start(), a.end()), ((1, 0), (3, 2)));
    assert_eq!((b.start(), b.end()), ((0, 1), (2, 3)));
    assert_eq!(labels(&a), vec![2, 3, 4]);
    assert!(a.is_clone_of(&b) && b.is_clone_of(&a));
    let bent = Block::new(vec![(1, 0), (1, 1), (2, 1)]).unwrap();
    assert_eq!(labels(&bent), vec![2, 3, 4]);
    assert!(!a.is_clone_of(&bent));
}

#[test]
fn example_region_face_counts() {
    let r = region("EEENNNENN", "NNNENEENE");
    assert_eq!(r.path_count(), 88);
    let oracle = oracle_data(&r).unwrap();
    let counts: Vec<usize> = (0..oracle.f_vector.len())
        .map(|n| enumerate_bottoms(&r, n).unwrap().len())
        .collect();
    assert_eq!(counts, oracle.f_vector);
}

#[test]
fn maximal_region_inserts_only_fitting_clones() {
    let r = region("EEENNNENN", "NNNENEENE");
    let mut found = false;
    for n in 2..r.size() {
        for bottom in enumerate_bottoms(&r, n).unwrap() {
            let blocks = bottom.blocks();
            let has = |want: &[usize]| blocks.iter().any(|b| labels(b) == want);
            if !(has(&[2, 3, 4]) && has(&[5])) {
                continue;
            }
            let maximal = bottom_to_maximal_region(&r, &bottom).unwrap();
            let count = |want: &[usize]| maximal.tiles.iter().filter(|t| labels(t) == want).count();
            if count(&[2, 3, 4]) == 2 && count(&[5]) == 1 {
                found = true;
                // The extra 2-3-4 tile is a clone of the one in the bottom.
                let tiles: Vec<&Block> = maximal.tiles.iter().filter(|t| labels(t) == [2, 3, 4]).collect();
                assert!(tiles[0].is_clone_of(tiles[1]) && tiles[0] != tiles[1]);
                assert!(maximal.lower.is_weakly_below(bottom.upper()));
                assert!(bottom.upper().is_weakly_below(&maximal.upper));
            }
        }
    }
    assert!(found);
}

#[test]
fn corner_direct_sum_removes_the_block_at_the_corner() {
    let r = region("EEEEENNEENEENNNN", "NNNNEEEENNNEEEEE");
    assert_eq!(r.path_count(), 8890);
    // Lower paths that run under the label-8 box at (4,3).
    let box_path = LatticePath::from_mask;
    let candidates = r.path_masks().unwrap();
    let mut seen = 0;
    for mask in candidates {
        let lambda = box_path(r.size(), mask);
        let Ok(bottom) = BlockTiledBottom::new(&r, lambda, vec![Block::new(vec![(4, 3)]).unwrap()]) else {
            continue;
        };
        seen += 1;
        let subs = covering_subfaces(&r, &bottom).unwrap();
        let sum = subs
            .iter()
            .find(|s| {
                s.producers
                    .iter()
                    .any(|&(op, case)| op == FacetOperation::DirectSum { p: 4, q: 4 } && case == CoverCase::DirectSum)
            })
            .expect("the (4,4) direct sum cuts the edge");
        assert_eq!(sum.bottom.block_count(), 0);
        assert_eq!(sum.bottom.lower(), bottom.upper());
    }
    assert!(seen > 0);
}

#[test]
fn direct_sum_face_and_its_facets() {
    let r = region("EENEEENNNNEN", "NNNENNEENEEE");
    assert_eq!(r.path_count(), 616);
    let through_corner = |path: &LatticePath| path.north_prefix(10) == 5;
    let wanted = [
        FacetOperation::Deletion { i: 1 },
        FacetOperation::Contraction { i: 1 },
        FacetOperation::Contraction { i: 11 },
        FacetOperation::Deletion { i: 11 },
        FacetOperation::Deletion { i: 2 },
        FacetOperation::Contraction { i: 2 },
    ];
    let sixes: Vec<BlockTiledBottom> = enumerate_bottoms(&r, 6)
        .unwrap()
        .into_iter()
        .filter(|b| face_paths(&r, b).unwrap().iter().all(through_corner))
        .collect();
    // The element operations name hyperplanes; 11-contraction is the same
    // cut of these faces as 12-deletion, so compare the cuts themselves.
    let matches: Vec<&BlockTiledBottom> = sixes
        .iter()
        .filter(|b| {
            let face = face_paths(&r, b).unwrap();
            let subs: Vec<BlockTiledBottom> =
                covering_subfaces(&r, b).unwrap().into_iter().map(|s| s.bottom).collect();
            wanted.iter().all(|w| {
                let cut: Vec<LatticePath> =
                    face.iter().filter(|p| w.is_tight(p.north_mask())).cloned().collect();
                !cut.is_empty() && subs.contains(&bottom_of_face(&r, &cut).unwrap())
            })
        })
        .collect();
    assert!(!matches.is_empty());
    // Each such face is cut from a 7-dimensional face by the (5,5) direct sum.
    let sum = FacetOperation::DirectSum { p: 5, q: 5 };
    let masks = |b: &BlockTiledBottom| -> Vec<u128> {
        let mut m: Vec<u128> = face_paths(&r, b).unwrap().iter().map(LatticePath::north_mask).collect();
        m.sort_unstable();
        m
    };
    let cut_by_sum: HashSet<Vec<u128>> = enumerate_bottoms(&r, 7)
        .unwrap()
        .iter()
        .filter_map(|b| {
            let face = masks(b);
            let cut: Vec<u128> = face.iter().copied().filter(|&m| sum.is_tight(m)).collect();
            (cut.len() < face.len()).then_some(cut)
        })
        .collect();
    for six in matches {
        assert!(cut_by_sum.contains(&masks(six)), "{}", six.canonical());
    }
}

#[test]
fn face_poset_is_the_oracle_lattice() {
    for r in connected_regions(6) {
        let oracle = oracle_data(&r).unwrap();
        let poset = face_poset(&r).unwrap();
        assert_eq!(poset.rank_sizes(), oracle.f_vector, "{r}");
        let index: HashMap<&Vec<i64>, usize> =
            oracle.vertices.points().iter().enumerate().map(|(i, p)| (p, i)).collect();
        let face_of: HashMap<Vec<usize>, usize> = oracle
            .lattice
            .faces
            .iter()
            .enumerate()
            .map(|(k, s)| (s.ones().collect(), k))
            .collect();
        let image: Vec<usize> = poset
            .nodes
            .iter()
            .map(|b| {
                let mut ids: Vec<usize> = face_paths(&r, b).unwrap().iter().map(|p| index[&point(p)]).collect();
                ids.sort();
                face_of[&ids]
            })
            .collect();
        let distinct: BTreeSet<usize> = image.iter().copied().collect();
        assert_eq!(distinct.len(), image.len(), "{r}");
        let mapped: BTreeSet<(usize, usize)> = poset.covers.iter().map(|&(a, b)| (image[a], image[b])).collect();
        let expected: BTreeSet<(usize, usize)> = oracle
            .lattice
            .covers
            .iter()
            .copied()
            .filter(|&(lo, _)| oracle.lattice.ranks[lo] >= 0)
            .collect();
        assert_eq!(mapped, expected, "{r}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bottoms_index_faces_of_their_dimension(r in connected_strategy(7)) {
        for n in 0..r.size() {
            for bottom in enumerate_bottoms(&r, n).unwrap() {
                let face = face_paths(&r, &bottom).unwrap();
                let points = VertexSet::new(face.iter().map(point).collect());
                prop_assert_eq!(affine_dimension(&points), n);
                prop_assert_eq!(&bottom_of_face(&r, &face).unwrap(), &bottom);
                prop_assert_eq!(bottom.block_count(), n);
                prop_assert!(face.contains(bottom.lower()));
            }
        }
    }

    #[test]
    fn covers_drop_one_block(r in connected_strategy(6)) {
        for n in 1..r.size() {
            for bottom in enumerate_bottoms(&r, n).unwrap() {
                for sub in covering_subfaces(&r, &bottom).unwrap() {
                    prop_assert_eq!(sub.bottom.block_count(), n - 1);
                    for (op, case) in &sub.producers {
                        prop_assert_eq!(op.element().is_none(), *case == CoverCase::DirectSum);
                    }
                }
            }
        }
    }
}
