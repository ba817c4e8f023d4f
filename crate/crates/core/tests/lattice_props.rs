mod common;

use common::{brute_force_bases, connected_strategy, region, region_strategy};
use lpm_core::lattice::region_from_strip_path;
use lpm_core::{
    area_between, is_border_strip, l_prime, make_region, outside_corners, parse_path, strip_path,
    CornerSide, Error, LatticePath,
};
use proptest::prelude::*;

fn word_strategy() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('E'), Just('N')], 1..20)
        .prop_map(|v| v.into_iter().collect())
}

proptest! {
    #[test]
    fn words_round_trip(word in word_strategy()) {
        let path = parse_path(&word).unwrap();
        prop_assert_eq!(path.to_string(), word.clone());
        prop_assert_eq!(path.len(), word.len());
        let json = serde_json::to_string(&path).unwrap();
        prop_assert_eq!(serde_json::from_str::<LatticePath>(&json).unwrap(), path);
    }

    #[test]
    fn bad_letters_report_their_position(word in word_strategy(), at in 0usize..20, bad in "[a-zA-DF-MO-Z0-9]") {
        let at = at % (word.len() + 1);
        let mut chars: Vec<char> = word.chars().collect();
        let found = bad.chars().next().unwrap();
        chars.insert(at, found);
        let broken: String = chars.into_iter().collect();
        prop_assert_eq!(parse_path(&broken), Err(Error::Parse { position: at + 1, found }));
    }

    #[test]
    fn path_count_matches_brute_force(region in region_strategy(10)) {
        let brute = brute_force_bases(&region);
        prop_assert_eq!(region.path_count(), brute.len() as u128);
        let listed: Vec<Vec<usize>> = region.paths().unwrap().iter().map(LatticePath::north_positions).collect();
        let mut sorted = listed.clone();
        sorted.sort();
        prop_assert_eq!(&listed, &sorted);
        prop_assert_eq!(listed.into_iter().collect::<std::collections::BTreeSet<_>>(), brute);
    }

    #[test]
    fn components_multiply_path_counts(region in region_strategy(10)) {
        let parts = region.components();
        prop_assert_eq!(parts.len(), region.k() - 1);
        prop_assert!(parts.iter().all(|p| p.is_connected()));
        let product: u128 = parts.iter().map(|p| p.path_count()).product();
        prop_assert_eq!(product, region.path_count());
        prop_assert_eq!(parts.iter().map(|p| p.size()).sum::<usize>(), region.size());
    }

    #[test]
    fn l_prime_stays_between(region in region_strategy(9)) {
        let lower = region.lower();
        for path in region.paths().unwrap() {
            let lp = l_prime(lower, &path).unwrap();
            // Each detour is the lowest path between its two meeting points.
            prop_assert!(lp.is_weakly_below(lower));
            prop_assert!(lp.is_weakly_below(&path));
            // Common points with the lower path are kept.
            for i in 0..=path.len() {
                if path.north_prefix(i) == lower.north_prefix(i) {
                    prop_assert_eq!(lp.north_prefix(i), lower.north_prefix(i));
                }
            }
            let area = area_between(&lp, &path).unwrap();
            prop_assert_eq!(area == 0, lp == path);
        }
        prop_assert_eq!(l_prime(lower, lower).unwrap(), lower.clone());
    }

    #[test]
    fn corners_are_turns(region in connected_strategy(10)) {
        for c in outside_corners(&region) {
            let i = c.index();
            let path = match c.side {
                CornerSide::Lower => region.lower(),
                CornerSide::Upper => region.upper(),
            };
            prop_assert_eq!(path.point(i), (c.p, c.q));
            prop_assert!(i > 0 && i < region.size());
            prop_assert!(path.step(i) != path.step(i + 1));
        }
    }
}

#[test]
fn strips_round_trip() {
    for strip in lpm_core::verify::border_strips(9) {
        assert!(is_border_strip(&strip));
        let word = strip_path(&strip).unwrap();
        assert_eq!(word.len(), strip.size());
        assert_eq!(region_from_strip_path(&word).unwrap(), strip);
    }
    assert!(strip_path(&region("EENN", "NNEE")).is_err());
}

#[test]
fn region_errors() {
    let p = |w: &str| parse_path(w).unwrap();
    assert!(matches!(make_region(p("EN"), p("NEE")), Err(Error::Shape(_))));
    assert!(matches!(make_region(p("EN"), p("NN")), Err(Error::Shape(_))));
    assert_eq!(make_region(p("NE"), p("EN")), Err(Error::Ordering { index: 1 }));
    assert_eq!(make_region(p("ENNE"), p("ENEN")), Err(Error::Ordering { index: 3 }));
}
