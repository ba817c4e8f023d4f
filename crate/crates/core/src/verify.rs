//! Exhaustive cross-checks of the combinatorial descriptions against the
//! exact oracle, over every region up to a given length.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::faces::{
    edge_count_by_area, enumerate_bottoms, enumerate_face_subsets, face_poset, facet_operations,
    segment_decomposition,
};
use crate::lattice::{is_border_strip, make_region, strip_path, LatticePath, SkewRegion};
use crate::matroid::{
    bases_by_paths, bases_by_transversals, connected_components, polytope_dimension, Basis,
};
use crate::oracle::{
    affine_dimension, cd_index, check_edge_directions, face_lattice, facets_exact, vertices,
    Hyperplane, VertexSet,
};

/// Names accepted by `skip`, in the order they run.
pub const CHECKS: [&str; 10] = [
    "bases",
    "dimension",
    "facets",
    "strip-facets",
    "face-subsets",
    "bottoms",
    "edges",
    "poset",
    "edge-directions",
    "cd-index",
];

/// Every region `[P, Q]` with `1 <= m + r <= max_len`, each word pair once.
pub fn all_regions(max_len: usize) -> Vec<SkewRegion> {
    let mut out = Vec::new();
    for len in 1..=max_len {
        for r in 0..=len {
            let paths: Vec<LatticePath> = (0u128..1 << len)
                .filter(|m| m.count_ones() as usize == r)
                .map(|m| LatticePath::from_mask(len, m))
                .collect();
            for p in &paths {
                for q in &paths {
                    if let Ok(region) = make_region(p.clone(), q.clone()) {
                        out.push(region);
                    }
                }
            }
        }
    }
    out
}

/// Regions from [`all_regions`] whose paths meet only at the two ends.
pub fn connected_regions(max_len: usize) -> Vec<SkewRegion> {
    all_regions(max_len)
        .into_iter()
        .filter(SkewRegion::is_connected)
        .collect()
}

/// Connected border strips from [`all_regions`].
pub fn border_strips(max_len: usize) -> Vec<SkewRegion> {
    connected_regions(max_len)
        .into_iter()
        .filter(is_border_strip)
        .collect()
}

/// Outcome of one named check over all regions.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub run: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub max_len: usize,
    pub regions: usize,
    pub checks: BTreeMap<String, CheckTally>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|c| c.failed == 0)
    }
}

/// Exact face data of one region, computed once and shared by the checks.
pub struct OracleData {
    pub vertices: VertexSet,
    pub facets: Vec<Hyperplane>,
    pub f_vector: Vec<usize>,
    pub lattice: crate::oracle::FaceLatticeGeom,
}

/// Vertices, facets and face lattice of the base polytope of a region.
pub fn oracle_data(region: &SkewRegion) -> Result<OracleData> {
    let v = vertices(&bases_by_paths(region)?);
    let facets = if affine_dimension(&v) == 0 {
        Vec::new()
    } else {
        facets_exact(&v)?
    };
    let lattice = face_lattice(&v, &facets)?;
    Ok(OracleData {
        f_vector: lattice.f_vector(),
        vertices: v,
        facets,
        lattice,
    })
}

type Outcome = (&'static str, std::result::Result<(), String>);

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: {got:?} != {want:?}"))
    }
}

fn mask_point(mask: u128, n: usize) -> Vec<i64> {
    (0..n).map(|i| (mask >> i & 1) as i64).collect()
}

fn check_bases(region: &SkewRegion) -> Result<std::result::Result<(), String>> {
    let by_paths: BTreeSet<Basis> = bases_by_paths(region)?.bases().iter().cloned().collect();
    let by_sets: BTreeSet<Basis> = bases_by_transversals(region)?.bases().iter().cloned().collect();
    Ok(expect("path bases vs transversals", by_paths.len(), by_sets.len())
        .and_then(|_| if by_paths == by_sets { Ok(()) } else { Err("basis sets differ".into()) }))
}

fn check_dimension(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    let formula = polytope_dimension(region);
    let comps = connected_components(&bases_by_paths(region)?).len();
    Ok(expect("formula vs hull", formula, affine_dimension(&oracle.vertices))
        .and_then(|_| expect("formula vs components", formula, region.size() - comps)))
}

fn check_facets(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    let ops = facet_operations(region)?;
    if let Err(e) = expect("facet count", ops.len(), oracle.facets.len()) {
        return Ok(Err(e));
    }
    let n = region.size();
    let masks = region.path_masks()?;
    let tight_of_hull: BTreeSet<Vec<Vec<i64>>> = oracle
        .facets
        .iter()
        .map(|h| {
            oracle
                .vertices
                .points()
                .iter()
                .filter(|p| h.is_tight(p))
                .cloned()
                .collect()
        })
        .collect();
    for op in &ops {
        let mut tight: Vec<Vec<i64>> = masks
            .iter()
            .filter(|&&m| op.is_tight(m))
            .map(|&m| mask_point(m, n))
            .collect();
        tight.sort();
        if !tight_of_hull.contains(&tight) {
            return Ok(Err(format!("{op} is not a facet")));
        }
    }
    Ok(Ok(()))
}

fn check_strip_facets(region: &SkewRegion) -> Result<std::result::Result<(), String>> {
    let d = segment_decomposition(&strip_path(region)?)?.d();
    Ok(expect("facets vs m+r+d", facet_operations(region)?.len(), region.size() + d))
}

fn check_face_subsets(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    let n = region.size();
    for t in 0..n {
        let count = enumerate_face_subsets(region, t)?.len();
        let want = oracle.f_vector[n - 1 - t];
        if count != want {
            return Ok(Err(format!("t = {t}: {count} subsets, {want} faces")));
        }
    }
    Ok(Ok(()))
}

fn check_bottoms(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    for (k, &want) in oracle.f_vector.iter().enumerate() {
        let got = enumerate_bottoms(region, k)?.len();
        if got != want {
            return Ok(Err(format!("{k} blocks: {got} bottoms, {want} faces")));
        }
    }
    Ok(Ok(()))
}

fn check_edges(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    let want = oracle.f_vector.get(1).copied().unwrap_or(0);
    let area = edge_count_by_area(region)?;
    let bottoms = if region.size() >= 2 {
        enumerate_bottoms(region, 1)?.len()
    } else {
        0
    };
    let mut out = expect("area vs hull", area, want).and_then(|_| expect("bottoms vs hull", bottoms, want));
    // With a straight lower path the area reduces to the boxes under each path.
    if out.is_ok() && region.lower().word() == format!("{}{}", "E".repeat(region.m()), "N".repeat(region.r())) {
        let below: usize = region.paths()?.iter().map(|p| p.column_heights().iter().sum::<usize>()).sum();
        out = expect("area below paths vs hull", below, want);
    }
    Ok(out)
}

fn check_poset(region: &SkewRegion, oracle: &OracleData) -> Result<std::result::Result<(), String>> {
    let poset = face_poset(region)?;
    let want_covers = oracle
        .lattice
        .covers
        .iter()
        .filter(|&&(lo, _)| oracle.lattice.ranks[lo] >= 0)
        .count();
    Ok(expect("poset ranks", poset.rank_sizes(), oracle.f_vector.clone())
        .and_then(|_| expect("poset covers", poset.covers.len(), want_covers)))
}

fn check_cd(oracle: &OracleData) -> std::result::Result<(), String> {
    if !oracle.lattice.is_eulerian() {
        return Err("face lattice is not Eulerian".into());
    }
    cd_index(&oracle.lattice).map(|_| ()).map_err(|e| e.to_string())
}

/// Run every check that applies to `region`, except those named in `skip`.
pub fn check_region(region: &SkewRegion, skip: &[String]) -> Result<Vec<Outcome>> {
    let wants = |name: &str| !skip.iter().any(|s| s == name);
    let mut out: Vec<Outcome> = Vec::new();
    if wants("bases") {
        out.push(("bases", check_bases(region)?));
    }
    let oracle = oracle_data(region)?;
    if wants("dimension") {
        out.push(("dimension", check_dimension(region, &oracle)?));
    }
    let dim = oracle.lattice.dim();
    if wants("edge-directions") {
        let ok = check_edge_directions(&oracle.lattice, &oracle.vertices);
        out.push(("edge-directions", if ok { Ok(()) } else { Err("edge not parallel to e_i - e_j".into()) }));
    }
    if wants("cd-index") && dim >= 1 {
        out.push(("cd-index", check_cd(&oracle)));
    }
    if !region.is_connected() {
        return Ok(out);
    }
    if wants("facets") && dim >= 1 {
        out.push(("facets", check_facets(region, &oracle)?));
    }
    let strip = is_border_strip(region);
    if strip && wants("strip-facets") && dim >= 1 {
        out.push(("strip-facets", check_strip_facets(region)?));
    }
    if strip && wants("face-subsets") {
        out.push(("face-subsets", check_face_subsets(region, &oracle)?));
    }
    if wants("bottoms") {
        out.push(("bottoms", check_bottoms(region, &oracle)?));
    }
    if wants("edges") {
        out.push(("edges", check_edges(region, &oracle)?));
    }
    if wants("poset") {
        out.push(("poset", check_poset(region, &oracle)?));
    }
    Ok(out)
}

/// Check every region with `m + r <= max_len` in parallel.
pub fn verify_all(max_len: usize, skip: &[String]) -> Result<VerifyReport> {
    if let Some(bad) = skip.iter().find(|s| !CHECKS.contains(&s.as_str())) {
        return Err(Error::Domain(format!("unknown check {bad:?}")));
    }
    let regions = all_regions(max_len);
    let results: Vec<(String, Vec<Outcome>)> = regions
        .par_iter()
        .map(|region| Ok((region.to_string(), check_region(region, skip)?)))
        .collect::<Result<_>>()?;
    let mut report = VerifyReport {
        max_len,
        regions: regions.len(),
        checks: BTreeMap::new(),
    };
    for name in CHECKS.iter().filter(|c| !skip.iter().any(|s| s == *c)) {
        report.checks.insert(name.to_string(), CheckTally::default());
    }
    for (label, outcomes) in results {
        for (name, outcome) in outcomes {
            let tally = report.checks.entry(name.to_string()).or_default();
            tally.run += 1;
            if let Err(msg) = outcome {
                tally.failed += 1;
                tally.first_failure.get_or_insert_with(|| format!("{label}: {msg}"));
            }
        }
    }
    Ok(report)
}
