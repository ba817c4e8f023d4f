//! Lattice paths, skew regions, border strips and path areas.
//!
//! Coordinates are 0-based plane points; step and element labels are 1-based.
//! The unit box with lower-left corner `(x, y)` carries the label `x + y + 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::limits;

/// Longest path the bitmask representations support.
pub const MAX_PATH_LEN: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    E,
    N,
}

impl Step {
    pub fn from_char(c: char) -> Option<Step> {
        match c {
            'E' => Some(Step::E),
            'N' => Some(Step::N),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Step::E => 'E',
            Step::N => 'N',
        }
    }
}

/// A word over `{E, N}` read as a path from the origin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePath {
    steps: Vec<Step>,
}

impl LatticePath {
    pub fn new(steps: Vec<Step>) -> Self {
        LatticePath { steps }
    }

    /// Path of length `len` with north steps exactly at the given 1-based positions.
    pub fn from_north_positions(len: usize, positions: &[usize]) -> Self {
        let mut steps = vec![Step::E; len];
        for &p in positions {
            steps[p - 1] = Step::N;
        }
        LatticePath { steps }
    }

    /// Inverse of [`LatticePath::north_mask`].
    pub fn from_mask(len: usize, mask: u128) -> Self {
        let steps = (0..len)
            .map(|i| if mask >> i & 1 == 1 { Step::N } else { Step::E })
            .collect();
        LatticePath { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Step `i`, 1-based.
    pub fn step(&self, i: usize) -> Step {
        self.steps[i - 1]
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn north_count(&self) -> usize {
        self.steps.iter().filter(|&&s| s == Step::N).count()
    }

    pub fn east_count(&self) -> usize {
        self.len() - self.north_count()
    }

    pub fn endpoint(&self) -> (usize, usize) {
        (self.east_count(), self.north_count())
    }

    /// Number of north steps among the first `i` steps.
    pub fn north_prefix(&self, i: usize) -> usize {
        self.steps[..i].iter().filter(|&&s| s == Step::N).count()
    }

    /// `N(W, i)` for `i = 0..=len`.
    pub fn north_prefixes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len() + 1);
        let mut h = 0;
        out.push(0);
        for &s in &self.steps {
            if s == Step::N {
                h += 1;
            }
            out.push(h);
        }
        out
    }

    /// Point reached after `i` steps.
    pub fn point(&self, i: usize) -> (usize, usize) {
        let n = self.north_prefix(i);
        (i - n, n)
    }

    pub fn points(&self) -> Vec<(usize, usize)> {
        self.north_prefixes()
            .into_iter()
            .enumerate()
            .map(|(i, n)| (i - n, n))
            .collect()
    }

    /// 1-based positions of the north steps (the basis of the path).
    pub fn north_positions(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Step::N)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Bit `i - 1` is set when step `i` is north. Requires `len <= 128`.
    pub fn north_mask(&self) -> u128 {
        debug_assert!(self.len() <= MAX_PATH_LEN);
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Step::N)
            .fold(0u128, |acc, (i, _)| acc | 1u128 << i)
    }

    /// Height of the east step in each column `x = 0..#E`.
    pub fn column_heights(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.east_count());
        let mut h = 0;
        for &s in &self.steps {
            match s {
                Step::N => h += 1,
                Step::E => out.push(h),
            }
        }
        out
    }

    pub fn word(&self) -> String {
        self.steps.iter().map(|s| s.as_char()).collect()
    }

    /// Sub-path made of steps `from+1 ..= to`.
    pub fn slice(&self, from: usize, to: usize) -> LatticePath {
        LatticePath::new(self.steps[from..to].to_vec())
    }

    /// Prefix-wise `self <= other`: never above `other`.
    pub fn is_weakly_below(&self, other: &LatticePath) -> bool {
        self.len() == other.len()
            && self
                .north_prefixes()
                .iter()
                .zip(other.north_prefixes())
                .all(|(a, b)| *a <= b)
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word())
    }
}

impl FromStr for LatticePath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_path(s)
    }
}

impl Serialize for LatticePath {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.word())
    }
}

impl<'de> Deserialize<'de> for LatticePath {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let word = String::deserialize(deserializer)?;
        parse_path(&word).map_err(serde::de::Error::custom)
    }
}

/// Parse an expanded word over `{E, N}`. Errors name the 1-based position.
pub fn parse_path(word: &str) -> Result<LatticePath> {
    if word.is_empty() {
        return Err(Error::EmptyPath);
    }
    let mut steps = Vec::with_capacity(word.len());
    for (i, c) in word.chars().enumerate() {
        match Step::from_char(c) {
            Some(s) => steps.push(s),
            None => {
                return Err(Error::Parse {
                    position: i + 1,
                    found: c,
                })
            }
        }
    }
    Ok(LatticePath::new(steps))
}

/// The region between a lower path `P` and an upper path `Q` with common endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewRegion {
    lower: LatticePath,
    upper: LatticePath,
    m: usize,
    r: usize,
    lower_prefix: Vec<usize>,
    upper_prefix: Vec<usize>,
}

pub fn make_region(lower: LatticePath, upper: LatticePath) -> Result<SkewRegion> {
    if lower.len() != upper.len() {
        return Err(Error::Shape(format!(
            "paths have lengths {} and {}",
            lower.len(),
            upper.len()
        )));
    }
    if lower.endpoint() != upper.endpoint() {
        return Err(Error::Shape(format!(
            "paths end at {:?} and {:?}",
            lower.endpoint(),
            upper.endpoint()
        )));
    }
    if lower.len() > MAX_PATH_LEN {
        return Err(Error::Resource(format!(
            "paths longer than {MAX_PATH_LEN} steps are not supported"
        )));
    }
    let lower_prefix = lower.north_prefixes();
    let upper_prefix = upper.north_prefixes();
    if let Some(index) = (0..lower_prefix.len()).find(|&i| lower_prefix[i] > upper_prefix[i]) {
        return Err(Error::Ordering { index });
    }
    let (m, r) = lower.endpoint();
    Ok(SkewRegion {
        lower,
        upper,
        m,
        r,
        lower_prefix,
        upper_prefix,
    })
}

impl SkewRegion {
    /// Parse both words and build the region.
    pub fn from_words(lower: &str, upper: &str) -> Result<SkewRegion> {
        make_region(parse_path(lower)?, parse_path(upper)?)
    }

    pub fn lower(&self) -> &LatticePath {
        &self.lower
    }

    pub fn upper(&self) -> &LatticePath {
        &self.upper
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// Ground set size `m + r`.
    pub fn size(&self) -> usize {
        self.m + self.r
    }

    /// `N(P, i)`.
    pub fn lower_prefix(&self, i: usize) -> usize {
        self.lower_prefix[i]
    }

    /// `N(Q, i)`.
    pub fn upper_prefix(&self, i: usize) -> usize {
        self.upper_prefix[i]
    }

    /// Prefix indices where the two paths meet.
    pub fn intersection_indices(&self) -> Vec<usize> {
        (0..=self.size())
            .filter(|&i| self.lower_prefix[i] == self.upper_prefix[i])
            .collect()
    }

    pub fn intersection_points(&self) -> Vec<(usize, usize)> {
        self.intersection_indices()
            .into_iter()
            .map(|i| (i - self.lower_prefix[i], self.lower_prefix[i]))
            .collect()
    }

    /// Number of common points of `P` and `Q`.
    pub fn k(&self) -> usize {
        self.intersection_indices().len()
    }

    /// The paths meet only at their endpoints.
    pub fn is_connected(&self) -> bool {
        self.k() == 2
    }

    /// Boxes `(x, y)` between the paths, ordered by label then `x`.
    pub fn boxes(&self) -> Vec<(usize, usize)> {
        let lo = self.lower.column_heights();
        let hi = self.upper.column_heights();
        let mut out: Vec<(usize, usize)> = (0..self.m)
            .flat_map(|x| (lo[x]..hi[x]).map(move |y| (x, y)))
            .collect();
        out.sort_by_key(|&(x, y)| (x + y, x));
        out
    }

    pub fn contains_path(&self, path: &LatticePath) -> bool {
        path.len() == self.size()
            && path
                .north_prefixes()
                .iter()
                .enumerate()
                .all(|(i, &h)| self.lower_prefix[i] <= h && h <= self.upper_prefix[i])
    }

    /// Number of lattice paths inside the region.
    pub fn path_count(&self) -> u128 {
        let n = self.size();
        let mut ways = vec![0u128; self.r + 1];
        ways[0] = 1;
        for i in 1..=n {
            let mut next = vec![0u128; self.r + 1];
            for h in self.lower_prefix[i]..=self.upper_prefix[i] {
                let mut w = 0u128;
                if h <= self.upper_prefix[i - 1] && h >= self.lower_prefix[i - 1] {
                    w = w.saturating_add(ways[h]);
                }
                if h >= 1 && h > self.lower_prefix[i - 1] && h - 1 <= self.upper_prefix[i - 1] {
                    w = w.saturating_add(ways[h - 1]);
                }
                next[h] = w;
            }
            ways = next;
        }
        ways[self.r]
    }

    /// North masks of all paths in the region, in lexicographic order of their bases.
    pub fn path_masks(&self) -> Result<Vec<u128>> {
        let cap = limits::max_bases();
        let count = self.path_count();
        if count > cap as u128 {
            return Err(Error::Resource(format!(
                "region has {count} lattice paths, cap is {cap}"
            )));
        }
        let mut out = Vec::with_capacity(count as usize);
        self.walk(0, 0, 0, &mut out);
        Ok(out)
    }

    fn walk(&self, i: usize, h: usize, mask: u128, out: &mut Vec<u128>) {
        if i == self.size() {
            out.push(mask);
            return;
        }
        // North first: this yields bases in lexicographic order.
        if h < self.upper_prefix[i + 1] {
            self.walk(i + 1, h + 1, mask | 1u128 << i, out);
        }
        if h >= self.lower_prefix[i + 1] {
            self.walk(i + 1, h, mask, out);
        }
    }

    /// All lattice paths inside the region, in lexicographic order of their bases.
    pub fn paths(&self) -> Result<Vec<LatticePath>> {
        Ok(self
            .path_masks()?
            .into_iter()
            .map(|mask| LatticePath::from_mask(self.size(), mask))
            .collect())
    }

    /// Split at the interior meeting points; each piece is connected.
    pub fn components(&self) -> Vec<SkewRegion> {
        self.intersection_indices()
            .windows(2)
            .map(|w| {
                make_region(self.lower.slice(w[0], w[1]), self.upper.slice(w[0], w[1]))
                    .expect("pieces of a valid region are valid")
            })
            .collect()
    }
}

impl fmt::Display for SkewRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lower, self.upper)
    }
}

/// Connected with no 2x2 square of boxes.
pub fn is_border_strip(region: &SkewRegion) -> bool {
    let n = region.size();
    if n < 2 || !region.is_connected() {
        return false;
    }
    let (p, q) = (region.lower.steps(), region.upper.steps());
    (1..n - 1).all(|i| p[i] == q[i])
}

/// The path `R(P, Q)` of a border strip: interior steps of `P` with both end
/// steps doubled; `NN` for a single box.
pub fn strip_path(region: &SkewRegion) -> Result<LatticePath> {
    if !is_border_strip(region) {
        return Err(Error::Domain(format!("{region} is not a border strip")));
    }
    let n = region.size();
    if n == 2 {
        return Ok(LatticePath::new(vec![Step::N, Step::N]));
    }
    let mut steps = region.lower.steps().to_vec();
    steps[0] = steps[1];
    steps[n - 1] = steps[n - 2];
    Ok(LatticePath::new(steps))
}

/// The border strip whose strip path is `strip`.
pub fn region_from_strip_path(strip: &LatticePath) -> Result<SkewRegion> {
    let n = strip.len();
    let s = strip.steps();
    if n < 2 || s[0] != s[1] || s[n - 2] != s[n - 1] {
        return Err(Error::Domain(format!("{strip} is not the path of a border strip")));
    }
    if n == 2 {
        if s[0] != Step::N {
            return Err(Error::Domain(format!("{strip} is not the path of a border strip")));
        }
        return make_region(
            LatticePath::new(vec![Step::E, Step::N]),
            LatticePath::new(vec![Step::N, Step::E]),
        );
    }
    let mut lower = s.to_vec();
    lower[0] = Step::E;
    lower[n - 1] = Step::N;
    let mut upper = s.to_vec();
    upper[0] = Step::N;
    upper[n - 1] = Step::E;
    make_region(LatticePath::new(lower), LatticePath::new(upper))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CornerSide {
    /// A north step followed by an east step on the lower path.
    Lower,
    /// An east step followed by a north step on the upper path.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OutsideCorner {
    pub p: usize,
    pub q: usize,
    pub side: CornerSide,
}

impl OutsideCorner {
    /// Number of steps before the corner.
    pub fn index(&self) -> usize {
        self.p + self.q
    }
}

/// Prefix indices `i` (0 < i < m+r) at which an outside corner sits, per side.
pub(crate) fn corner_flags(region: &SkewRegion) -> (Vec<bool>, Vec<bool>) {
    let n = region.size();
    let (p, q) = (region.lower.steps(), region.upper.steps());
    let mut lower = vec![false; n + 1];
    let mut upper = vec![false; n + 1];
    for i in 1..n {
        lower[i] = p[i - 1] == Step::N && p[i] == Step::E;
        upper[i] = q[i - 1] == Step::E && q[i] == Step::N;
    }
    (lower, upper)
}

/// NE corners of the lower path and EN corners of the upper path, by `p + q`.
pub fn outside_corners(region: &SkewRegion) -> Vec<OutsideCorner> {
    let (lower, upper) = corner_flags(region);
    let mut out = Vec::new();
    for i in 1..region.size() {
        if lower[i] {
            let (p, q) = region.lower.point(i);
            out.push(OutsideCorner {
                p,
                q,
                side: CornerSide::Lower,
            });
        }
        if upper[i] {
            let (p, q) = region.upper.point(i);
            out.push(OutsideCorner {
                p,
                q,
                side: CornerSide::Upper,
            });
        }
    }
    out
}

fn check_pair(lower: &LatticePath, upper: &LatticePath) -> Result<()> {
    if lower.len() != upper.len() || lower.endpoint() != upper.endpoint() {
        return Err(Error::Domain(format!(
            "{lower} and {upper} do not share both endpoints"
        )));
    }
    if !lower.is_weakly_below(upper) {
        return Err(Error::Domain(format!("{lower} goes above {upper}")));
    }
    Ok(())
}

/// The path through every common point of `base` and `path` that runs
/// `E^a N^b` across each region strictly between them.
pub fn l_prime(base: &LatticePath, path: &LatticePath) -> Result<LatticePath> {
    check_pair(base, path)?;
    let a = base.points();
    let b = path.points();
    let n = base.len();
    let mut steps = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if a[i + 1] == b[i + 1] {
            steps.push(base.step(i + 1));
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while a[j] != b[j] {
            j += 1;
        }
        let (x0, y0) = a[i];
        let (x1, y1) = a[j];
        steps.extend(std::iter::repeat_n(Step::E, x1 - x0));
        steps.extend(std::iter::repeat_n(Step::N, y1 - y0));
        i = j;
    }
    Ok(LatticePath::new(steps))
}

/// Number of unit boxes between two paths with common endpoints.
pub fn area_between(lower: &LatticePath, upper: &LatticePath) -> Result<usize> {
    check_pair(lower, upper)?;
    Ok(lower
        .column_heights()
        .iter()
        .zip(upper.column_heights())
        .map(|(a, b)| b - a)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(w: &str) -> LatticePath {
        parse_path(w).unwrap()
    }

    #[test]
    fn parse_reports_position() {
        assert_eq!(p("EENNN").endpoint(), (2, 3));
        assert_eq!(p("NN").endpoint(), (0, 2));
        assert_eq!(
            parse_path("EXN"),
            Err(Error::Parse {
                position: 2,
                found: 'X'
            })
        );
        assert_eq!(parse_path(""), Err(Error::EmptyPath));
    }

    #[test]
    fn region_validation() {
        let r = SkewRegion::from_words("EENNN", "NNENE").unwrap();
        assert_eq!((r.m(), r.r(), r.k()), (2, 3, 2));
        assert_eq!(SkewRegion::from_words("EN", "EN").unwrap().k(), 3);
        assert!(matches!(
            SkewRegion::from_words("NE", "EN"),
            Err(Error::Ordering { index: 1 })
        ));
        assert!(matches!(
            SkewRegion::from_words("EN", "ENN"),
            Err(Error::Shape(_))
        ));
        assert!(matches!(
            SkewRegion::from_words("EEN", "ENN"),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn border_strips() {
        assert!(!is_border_strip(&SkewRegion::from_words("EENNN", "NNENE").unwrap()));
        assert!(is_border_strip(&SkewRegion::from_words("EN", "NE").unwrap()));
        assert!(is_border_strip(&SkewRegion::from_words("EENN", "NENE").unwrap()));
        assert!(!is_border_strip(&SkewRegion::from_words("ENEN", "NENE").unwrap()));
    }

    #[test]
    fn strip_paths() {
        let single = SkewRegion::from_words("EN", "NE").unwrap();
        assert_eq!(strip_path(&single).unwrap().word(), "NN");
        let r = SkewRegion::from_words("ENEEENNEN", "NNEEENNEE").unwrap();
        assert_eq!(strip_path(&r).unwrap().word(), "NNEEENNEE");
        let r = SkewRegion::from_words("ENNEEENENNNN", "NNNEEENENNNE").unwrap();
        assert_eq!((r.m(), r.r()), (5, 7));
        assert_eq!(strip_path(&r).unwrap().endpoint(), (4, 8));
        let five_element = SkewRegion::from_words("EENNN", "NNENE").unwrap();
        assert!(strip_path(&five_element).is_err());
    }

    #[test]
    fn strip_path_round_trip() {
        let r = SkewRegion::from_words("ENEEENNEN", "NNEEENNEE").unwrap();
        let back = region_from_strip_path(&strip_path(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(region_from_strip_path(&p("EN")).is_err());
    }

    #[test]
    fn corners() {
        assert!(outside_corners(&SkewRegion::from_words("EN", "NE").unwrap()).is_empty());
        let r = SkewRegion::from_words("ENEEENNEN", "NNEEENNEE").unwrap();
        let sums: Vec<usize> = outside_corners(&r).iter().map(|c| c.index()).collect();
        assert_eq!(sums, vec![2, 5, 7]);
        let r = SkewRegion::from_words("EEEEENNEENEENNNN", "NNNNEEEENNNEEEEE").unwrap();
        assert!(outside_corners(&r).contains(&OutsideCorner {
            p: 4,
            q: 4,
            side: CornerSide::Upper
        }));
    }

    #[test]
    fn l_prime_examples() {
        let base = p("EEENN");
        let region = make_region(base.clone(), p("NNEEE")).unwrap();
        for l in region.paths().unwrap() {
            assert_eq!(l_prime(&base, &l).unwrap(), base);
        }
        assert_eq!(l_prime(&p("ENEN"), &p("ENEN")).unwrap(), p("ENEN"));
        assert_eq!(l_prime(&p("EN"), &p("NE")).unwrap(), p("EN"));
        assert_eq!(l_prime(&p("ENNEEN"), &p("NENENE")).unwrap().word(), "ENNEEN");
        assert_eq!(l_prime(&p("ENEN"), &p("NNEE")).unwrap().word(), "EENN");
        assert!(l_prime(&p("NE"), &p("EN")).is_err());
    }

    #[test]
    fn areas() {
        assert_eq!(area_between(&p("EN"), &p("NE")).unwrap(), 1);
        assert_eq!(area_between(&p("ENEN"), &p("ENEN")).unwrap(), 0);
        assert_eq!(area_between(&p("EENNN"), &p("NNENE")).unwrap(), 5);
    }

    #[test]
    fn path_listing_is_lexicographic() {
        let r = SkewRegion::from_words("EENNN", "NNENE").unwrap();
        let words: Vec<String> = r.paths().unwrap().iter().map(|l| l.word()).collect();
        assert_eq!(words.len() as u128, r.path_count());
        assert_eq!(words.first().unwrap(), "NNENE");
        assert_eq!(words.last().unwrap(), "EENNN");
    }

    #[test]
    fn components_split_at_meeting_points() {
        let r = SkewRegion::from_words("ENEEN", "NEENE").unwrap();
        let parts: Vec<String> = r.components().iter().map(|c| c.to_string()).collect();
        assert_eq!(parts, vec!["[EN, NE]", "[E, E]", "[EN, NE]"]);
    }
}
