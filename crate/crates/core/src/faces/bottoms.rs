//! Blocks, block-tiled bottoms, and the faces they index.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{corner_flags, LatticePath, SkewRegion};
use crate::util::{bits, UnionFind};

use super::require_connected;

/// A border strip of boxes with consecutive labels, listed by label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    cells: Vec<(usize, usize)>,
}

impl Block {
    /// Boxes `(x, y)` in any order; they must form a ribbon with consecutive labels.
    pub fn new(mut cells: Vec<(usize, usize)>) -> Result<Block> {
        if cells.is_empty() {
            return Err(Error::Domain("empty block".into()));
        }
        cells.sort_by_key(|&(x, y)| (x + y, x));
        for w in cells.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if !((x1 == x0 + 1 && y1 == y0) || (x1 == x0 && y1 == y0 + 1)) {
                return Err(Error::Domain(format!(
                    "boxes {:?} and {:?} are not consecutive in a ribbon",
                    w[0], w[1]
                )));
            }
        }
        Ok(Block { cells })
    }

    /// Block at `start` whose lower boundary reads `shape` (`E w N`).
    pub fn from_shape(start: (usize, usize), shape: &str) -> Result<Block> {
        let moves = shape
            .strip_prefix('E')
            .and_then(|s| s.strip_suffix('N'))
            .ok_or_else(|| Error::Domain(format!("block shape {shape:?} must read E...N")))?;
        let mut cells = vec![start];
        let (mut x, mut y) = start;
        for ch in moves.chars() {
            match ch {
                'E' => x += 1,
                'N' => y += 1,
                _ => return Err(Error::Domain(format!("bad step {ch:?} in block shape"))),
            }
            cells.push((x, y));
        }
        Ok(Block { cells })
    }

    pub fn cells(&self) -> &[(usize, usize)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Lower-left corner of the lowest-labelled box.
    pub fn start(&self) -> (usize, usize) {
        self.cells[0]
    }

    /// Upper-right corner of the highest-labelled box.
    pub fn end(&self) -> (usize, usize) {
        let (x, y) = self.cells[self.cells.len() - 1];
        (x + 1, y + 1)
    }

    pub fn first_label(&self) -> usize {
        let (x, y) = self.start();
        x + y + 1
    }

    pub fn last_label(&self) -> usize {
        self.first_label() + self.len() - 1
    }

    /// The two elements whose swap moves across the block: first label and
    /// one past the last label.
    pub fn endpoints(&self) -> (usize, usize) {
        (self.first_label(), self.last_label() + 1)
    }

    /// Lower boundary from the start point to the end point.
    pub fn shape(&self) -> String {
        let mut s = String::with_capacity(self.len() + 1);
        s.push('E');
        for w in self.cells.windows(2) {
            s.push(if w[1].0 > w[0].0 { 'E' } else { 'N' });
        }
        s.push('N');
        s
    }

    /// Same labels in the same arrangement: a translate along an anti-diagonal.
    pub fn is_clone_of(&self, other: &Block) -> bool {
        self.first_label() == other.first_label() && self.shape() == other.shape()
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Block", 2)?;
        let (x, y) = self.start();
        s.serialize_field("start", &[x, y])?;
        s.serialize_field("shape", &self.shape())?;
        s.end()
    }
}

/// Lower path `lambda`, upper path `nu`, and the blocks tiling the band between them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BlockTiledBottom {
    lower: LatticePath,
    upper: LatticePath,
    blocks: Vec<Block>,
}

impl BlockTiledBottom {
    /// Bottom with no blocks: a vertex.
    pub fn vertex(path: LatticePath) -> Self {
        BlockTiledBottom {
            upper: path.clone(),
            lower: path,
            blocks: Vec::new(),
        }
    }

    /// Assemble from `lambda` and blocks stacked on it; the upper path is derived.
    pub fn new(region: &SkewRegion, lower: LatticePath, mut blocks: Vec<Block>) -> Result<Self> {
        if !region.contains_path(&lower) {
            return Err(Error::Domain(format!("{lower} is not inside {region}")));
        }
        let grid = Grid::new(region)?;
        let base = grid.below(lower.north_mask());
        let mut band = 0u128;
        for b in &blocks {
            for &(x, y) in b.cells() {
                if x >= grid.m || y >= grid.r {
                    return Err(Error::Domain(format!("box ({x},{y}) is outside the grid")));
                }
                let bit = grid.bit(x, y);
                if band & bit != 0 || base & bit != 0 {
                    return Err(Error::Domain(format!("box ({x},{y}) is covered twice")));
                }
                band |= bit;
            }
        }
        let upper = grid
            .path_from_below(base | band)
            .ok_or_else(|| Error::Domain("blocks do not stack into a band".into()))?;
        let upper = LatticePath::from_mask(region.size(), upper);
        if !region.contains_path(&upper) {
            return Err(Error::Domain(format!("{upper} is not inside {region}")));
        }
        blocks.sort_by_key(|b| (b.first_label(), b.start()));
        Ok(BlockTiledBottom {
            lower,
            upper,
            blocks,
        })
    }

    pub fn lower(&self) -> &LatticePath {
        &self.lower
    }

    pub fn upper(&self) -> &LatticePath {
        &self.upper
    }

    /// Blocks ordered by first label.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// `lambda` followed by the blocks as `(start, shape)`, sorted by start.
    pub fn canonical(&self) -> String {
        let mut s = self.lower.word();
        let parts = self
            .blocks
            .iter()
            .map(|b| (b.start(), b.shape()))
            .sorted()
            .map(|((x, y), shape)| format!("|{x},{y}:{shape}"));
        for p in parts {
            s.push_str(&p);
        }
        s
    }
}

impl Serialize for BlockTiledBottom {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BlockTiledBottom", 2)?;
        s.serialize_field("lambda", &self.lower.word())?;
        let mut blocks = self.blocks.clone();
        blocks.sort_by_key(|b| b.start());
        s.serialize_field("blocks", &blocks)?;
        s.end()
    }
}

/// The maximal block-tiled region over a bottom: every clone inserted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockTiledRegion {
    pub lower: LatticePath,
    pub upper: LatticePath,
    /// All tiles, ordered by first label and then from the bottom up.
    pub tiles: Vec<Block>,
}

impl BlockTiledRegion {
    /// Tiles grouped into clone classes, in label order.
    pub fn clone_classes(&self) -> Vec<Vec<Block>> {
        let mut groups: BTreeMap<(usize, String), Vec<Block>> = BTreeMap::new();
        for t in &self.tiles {
            groups
                .entry((t.first_label(), t.shape()))
                .or_default()
                .push(t.clone());
        }
        groups.into_values().collect()
    }
}

/// Box bitmasks over the `m x r` grid; box `(x, y)` is bit `x * r + y`.
pub(crate) struct Grid {
    pub(crate) n: usize,
    pub(crate) m: usize,
    pub(crate) r: usize,
}

impl Grid {
    pub(crate) fn new(region: &SkewRegion) -> Result<Grid> {
        let (m, r) = (region.m(), region.r());
        if m * r > 128 {
            return Err(Error::Resource(format!(
                "a {m} x {r} grid exceeds the 128-box limit"
            )));
        }
        Ok(Grid {
            n: region.size(),
            m,
            r,
        })
    }

    pub(crate) fn bit(&self, x: usize, y: usize) -> u128 {
        1u128 << (x * self.r + y)
    }

    pub(crate) fn cell(&self, index: usize) -> (usize, usize) {
        (index / self.r, index % self.r)
    }

    /// Boxes below the path with north mask `path`.
    pub(crate) fn below(&self, path: u128) -> u128 {
        let mut out = 0u128;
        let (mut x, mut h) = (0, 0);
        for i in 0..self.n {
            if path >> i & 1 == 1 {
                h += 1;
            } else {
                if h > 0 {
                    out |= ((1u128 << h) - 1) << (x * self.r);
                }
                x += 1;
            }
        }
        out
    }

    /// North mask of the path whose below-set is `boxes`, if there is one.
    pub(crate) fn path_from_below(&self, boxes: u128) -> Option<u128> {
        let column = if self.r == 0 { 0 } else { (1u128 << self.r) - 1 };
        let mut steps = 0u128;
        let (mut i, mut prev) = (0, 0);
        let mut rest = boxes;
        for x in 0..self.m {
            let col = rest >> (x * self.r) & column;
            rest &= !(col << (x * self.r));
            let h = col.count_ones() as usize;
            if col != (1u128 << h) - 1 || h < prev {
                return None;
            }
            for _ in prev..h {
                steps |= 1u128 << i;
                i += 1;
            }
            i += 1;
            prev = h;
        }
        if rest != 0 {
            return None;
        }
        for _ in prev..self.r {
            steps |= 1u128 << i;
            i += 1;
        }
        Some(steps)
    }

    fn label(&self, index: usize) -> usize {
        let (x, y) = self.cell(index);
        x + y
    }

    /// Cells of a box set, ordered by label then `x`.
    fn cells(&self, boxes: u128) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = bits(boxes).map(|b| self.cell(b)).collect();
        out.sort_by_key(|&(x, y)| (x + y, x));
        out
    }
}

/// Vertex masks of the face indexed by a bottom: the paths `L` whose
/// incidence vector differs from `lambda`'s by a combination of the block
/// directions `e_j - e_k`.
pub(crate) fn face_masks(region: &SkewRegion, bottom: &BlockTiledBottom) -> Result<Vec<u128>> {
    let n = region.size();
    let mut uf = UnionFind::new(n + 2);
    let mut touched = 0u128;
    for b in bottom.blocks() {
        let (j, k) = b.endpoints();
        if k > n {
            return Err(Error::Domain("block reaches past the last element".into()));
        }
        uf.union(j, k);
        touched |= 1u128 << (j - 1) | 1u128 << (k - 1);
    }
    let mut classes: HashMap<usize, u128> = HashMap::new();
    for e in bits(touched) {
        *classes.entry(uf.find(e + 1)).or_default() |= 1u128 << e;
    }
    let classes: Vec<u128> = classes.into_values().collect();
    let full = crate::util::low_mask(n);
    let fixed = full & !touched;
    let lam = bottom.lower().north_mask();
    Ok(region
        .path_masks()?
        .into_iter()
        .filter(|&l| {
            l & fixed == lam & fixed
                && classes
                    .iter()
                    .all(|&c| (l & c).count_ones() == (lam & c).count_ones())
        })
        .collect())
}

/// Vertices of the face indexed by a bottom.
pub fn face_paths(region: &SkewRegion, bottom: &BlockTiledBottom) -> Result<Vec<LatticePath>> {
    Ok(face_masks(region, bottom)?
        .into_iter()
        .map(|m| LatticePath::from_mask(region.size(), m))
        .collect())
}

struct FaceShape {
    lower: u128,
    upper: u128,
    tiles: Vec<Block>,
}

/// Lowest and highest path of a face and the tiles between consecutive
/// paths that have a single lower cover.
fn face_shape(grid: &Grid, masks: &[u128]) -> Result<FaceShape> {
    if masks.is_empty() {
        return Err(Error::Domain("a face needs at least one vertex".into()));
    }
    let bx: Vec<u128> = masks.iter().map(|&m| grid.below(m)).collect();
    let lo = (0..bx.len()).min_by_key(|&i| bx[i].count_ones()).expect("nonempty");
    let hi = (0..bx.len()).max_by_key(|&i| bx[i].count_ones()).expect("nonempty");
    if bx.iter().any(|&b| b & !bx[hi] != 0 || bx[lo] & !b != 0) {
        return Err(Error::Domain("vertex set has no lowest and highest path".into()));
    }
    // Vertex sets of faces are closed under pointwise max of paths, so the
    // join of everything below `w` is a union, and `w` has a single lower
    // cover exactly when that union falls short of `w`.
    let mut tiles: Vec<u128> = Vec::new();
    for &w in &bx {
        if w == bx[lo] {
            continue;
        }
        let join = bx
            .iter()
            .filter(|&&v| v != w && v & !w == 0)
            .fold(0u128, |acc, &v| acc | v);
        if join != w {
            tiles.push(w & !join);
        }
    }
    tiles.sort_unstable();
    tiles.dedup();
    let tiles = tiles
        .into_iter()
        .map(|t| Block::new(grid.cells(t)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FaceShape {
        lower: masks[lo],
        upper: masks[hi],
        tiles,
    })
}

fn lowest_clones(tiles: &[Block]) -> Result<Vec<Block>> {
    let mut classes: BTreeMap<(usize, String), &Block> = BTreeMap::new();
    for t in tiles {
        let key = (t.first_label(), t.shape());
        let entry = classes.entry(key).or_insert(t);
        if t.start().1 < entry.start().1 {
            *entry = t;
        }
    }
    let chosen: Vec<Block> = classes.into_values().cloned().collect();
    let mut labels = 0u128;
    for b in &chosen {
        for l in b.first_label()..=b.last_label() {
            if labels >> l & 1 == 1 {
                return Err(Error::Domain(format!("label {l} appears in two clone classes")));
            }
            labels |= 1u128 << l;
        }
    }
    Ok(chosen)
}

fn bottom_from_masks(region: &SkewRegion, grid: &Grid, masks: &[u128]) -> Result<BlockTiledBottom> {
    let shape = face_shape(grid, masks)?;
    let blocks = lowest_clones(&shape.tiles)?;
    BlockTiledBottom::new(region, LatticePath::from_mask(grid.n, shape.lower), blocks)
}

pub(crate) fn bottom_of_masks(region: &SkewRegion, masks: &[u128]) -> Result<BlockTiledBottom> {
    bottom_from_masks(region, &Grid::new(region)?, masks)
}

/// The bottom of the face with the given vertices: the lowest path plus the
/// lowest clone of every tile class of the face.
pub fn bottom_of_face(region: &SkewRegion, vertices: &[LatticePath]) -> Result<BlockTiledBottom> {
    let masks: Vec<u128> = vertices.iter().map(LatticePath::north_mask).collect();
    bottom_of_masks(region, &masks)
}

/// The maximal block-tiled region over a bottom: all clones of its blocks
/// that fit while the tiled area stays a skew shape.
pub fn bottom_to_maximal_region(
    region: &SkewRegion,
    bottom: &BlockTiledBottom,
) -> Result<BlockTiledRegion> {
    let grid = Grid::new(region)?;
    let shape = face_shape(&grid, &face_masks(region, bottom)?)?;
    let mut tiles = shape.tiles;
    tiles.sort_by_key(|t| (t.first_label(), t.start().1));
    Ok(BlockTiledRegion {
        lower: LatticePath::from_mask(grid.n, shape.lower),
        upper: LatticePath::from_mask(grid.n, shape.upper),
        tiles,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct BlockKey {
    label: usize,
    len: usize,
    moves: u128,
}

struct Member {
    lower: usize,
    upper: usize,
    cuts: u128,
}

/// All bottoms with `n` blocks: lowest members of the families of
/// block-tiled bands. `n = 0` gives one bare path per vertex.
pub fn enumerate_bottoms(region: &SkewRegion, n: usize) -> Result<Vec<BlockTiledBottom>> {
    require_connected(region)?;
    let size = region.size();
    if n >= size.max(1) {
        return Err(Error::Domain(format!(
            "n = {n} exceeds the polytope dimension {}",
            size - 1
        )));
    }
    let paths = region.path_masks()?;
    if n == 0 {
        let mut out: Vec<BlockTiledBottom> = paths
            .into_iter()
            .map(|m| BlockTiledBottom::vertex(LatticePath::from_mask(size, m)))
            .collect();
        out.sort_by_cached_key(BlockTiledBottom::canonical);
        return Ok(out);
    }
    let grid = Grid::new(region)?;
    let below: Vec<u128> = paths.iter().map(|&m| grid.below(m)).collect();
    let prefixes: Vec<Vec<usize>> = paths
        .iter()
        .map(|&m| LatticePath::from_mask(size, m).north_prefixes())
        .collect();
    let (lower_corner, upper_corner) = corner_flags(region);
    let special = |i: usize, h: usize| {
        i == 0
            || i == size
            || (lower_corner[i] && h == region.lower_prefix(i))
            || (upper_corner[i] && h == region.upper_prefix(i))
    };

    let mut families: HashMap<(Vec<(usize, usize)>, Vec<BlockKey>), Vec<Member>> = HashMap::new();
    for a in 0..paths.len() {
        for b in 0..paths.len() {
            if a == b || below[a] & !below[b] != 0 {
                continue;
            }
            let band = below[b] & !below[a];
            let mut labels = 0u128;
            let mut cells = Vec::with_capacity(band.count_ones() as usize);
            let mut distinct = true;
            for idx in bits(band) {
                let l = grid.label(idx);
                if labels >> l & 1 == 1 {
                    distinct = false;
                    break;
                }
                labels |= 1u128 << l;
                cells.push(grid.cell(idx));
            }
            if !distinct {
                continue;
            }
            cells.sort_by_key(|&(x, y)| x + y);

            // Every maximal run of common points must touch a corner or an end.
            let mut shared = Vec::new();
            let mut ok = true;
            let mut run_special: Option<bool> = None;
            for i in 0..=size {
                let (ha, hb) = (prefixes[a][i], prefixes[b][i]);
                if ha == hb {
                    shared.push((i, ha));
                    run_special = Some(run_special.unwrap_or(false) || special(i, ha));
                } else if let Some(s) = run_special.take() {
                    if !s {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok || run_special == Some(false) {
                continue;
            }

            // Links between consecutive cells of the same ribbon.
            let links: Vec<usize> = (0..cells.len().saturating_sub(1))
                .filter(|&k| {
                    let ((x0, y0), (x1, y1)) = (cells[k], cells[k + 1]);
                    x0 + y0 + 1 == x1 + y1
                        && ((x1 == x0 + 1 && y1 == y0) || (x1 == x0 && y1 == y0 + 1))
                })
                .collect();
            let ribbons = cells.len() - links.len();
            if n < ribbons || n > cells.len() {
                continue;
            }
            let mut link_mask = 0u128;
            links.iter().for_each(|&k| link_mask |= 1u128 << k);
            for chosen in links.iter().copied().combinations(n - ribbons) {
                let mut cuts = !link_mask;
                chosen.iter().for_each(|&k| cuts |= 1u128 << k);
                let keys = block_keys(&cells, cuts);
                families
                    .entry((shared.clone(), keys))
                    .or_default()
                    .push(Member {
                        lower: a,
                        upper: b,
                        cuts,
                    });
            }
        }
    }

    let mut out = Vec::with_capacity(families.len());
    for members in families.values() {
        let lowest: Vec<&Member> = members
            .iter()
            .filter(|c| {
                !members.iter().any(|d| {
                    let (nd, nc) = (below[d.upper], below[c.upper]);
                    let (ld, lc) = (below[d.lower], below[c.lower]);
                    (nd != nc && nd & !nc == 0) || (nd == nc && ld != lc && ld & !lc == 0)
                })
            })
            .collect();
        let [member] = lowest.as_slice() else {
            return Err(Error::Domain(format!(
                "a family of bands has {} lowest members",
                lowest.len()
            )));
        };
        let band = below[member.upper] & !below[member.lower];
        let cells = grid.cells(band);
        let blocks = split_cells(&cells, member.cuts)
            .into_iter()
            .map(Block::new)
            .collect::<Result<Vec<_>>>()?;
        out.push(BlockTiledBottom::new(
            region,
            LatticePath::from_mask(size, paths[member.lower]),
            blocks,
        )?);
    }
    out.sort_by_cached_key(BlockTiledBottom::canonical);
    Ok(out)
}

/// Split label-ordered cells wherever bit `k` of `cuts` is set (between cell
/// `k` and `k + 1`).
fn split_cells(cells: &[(usize, usize)], cuts: u128) -> Vec<Vec<(usize, usize)>> {
    let mut out = vec![vec![cells[0]]];
    for k in 1..cells.len() {
        if cuts >> (k - 1) & 1 == 1 {
            out.push(Vec::new());
        }
        out.last_mut().expect("nonempty").push(cells[k]);
    }
    out
}

fn block_keys(cells: &[(usize, usize)], cuts: u128) -> Vec<BlockKey> {
    let mut keys: Vec<BlockKey> = split_cells(cells, cuts)
        .into_iter()
        .map(|blk| {
            let (x, y) = blk[0];
            let moves = blk
                .windows(2)
                .enumerate()
                .filter(|(_, w)| w[1].1 > w[0].1)
                .fold(0u128, |acc, (j, _)| acc | 1u128 << j);
            BlockKey {
                label: x + y,
                len: blk.len(),
                moves,
            }
        })
        .collect();
    keys.sort();
    keys
}
