//! Exact facets of a 0/1 point configuration by double description.

use fixedbitset::FixedBitSet;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;

use super::VertexSet;

/// The inequality `normal . x <= offset`, tight on a facet.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vec<i64>,
    pub offset: i64,
}

impl Hyperplane {
    pub fn value(&self, point: &[i64]) -> i64 {
        self.normal.iter().zip(point).map(|(a, b)| a * b).sum()
    }

    pub fn is_tight(&self, point: &[i64]) -> bool {
        self.value(point) == self.offset
    }

    pub fn is_valid(&self, point: &[i64]) -> bool {
        self.value(point) <= self.offset
    }
}

fn overflow() -> Error {
    Error::Resource("integer overflow in exact arithmetic".into())
}

fn gcd_reduce(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |g, &x| g.gcd(&x));
    if g > 1 {
        v.iter_mut().for_each(|x| *x /= g);
    }
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y)
            .and_then(|p| acc.checked_add(p))
            .ok_or_else(overflow)
    })
}

/// Row-reduce in place over the integers; returns the pivot columns.
pub(crate) fn echelon(rows: &mut Vec<Vec<i128>>) -> Result<Vec<usize>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(top, p);
        for i in 0..rows.len() {
            if i == top || rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[top][c], rows[i][c]);
            let g = a.gcd(&b);
            let (fa, fb) = (a / g, b / g);
            let pivot_row = rows[top].clone();
            for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                *x = x
                    .checked_mul(fa)
                    .and_then(|t| y.checked_mul(fb).and_then(|u| t.checked_sub(u)))
                    .ok_or_else(overflow)?;
            }
            gcd_reduce(&mut rows[i]);
        }
        pivots.push(c);
        top += 1;
        if top == rows.len() {
            break;
        }
    }
    rows.truncate(top);
    Ok(pivots)
}

pub(crate) fn rank(mut rows: Vec<Vec<i128>>) -> Result<usize> {
    Ok(echelon(&mut rows)?.len())
}

/// Coordinates on which the projection of the affine hull is injective.
pub(crate) fn hull_pivots(points: &[&[i64]]) -> Result<Vec<usize>> {
    let Some((first, rest)) = points.split_first() else {
        return Ok(Vec::new());
    };
    let mut rows: Vec<Vec<i128>> = rest
        .iter()
        .map(|p| p.iter().zip(first.iter()).map(|(a, b)| (a - b) as i128).collect())
        .collect();
    echelon(&mut rows)
}

/// Null vector of a `(k) x (k+1)` integer matrix of rank `k`.
fn null_vector(rows: &[Vec<i128>]) -> Result<Vec<i128>> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m)?;
    let cols = rows[0].len();
    let free = (0..cols)
        .find(|c| !pivots.contains(c))
        .ok_or_else(|| Error::Domain("matrix has no null vector".into()))?;
    // Each reduced row reads m[i][p_i] z_{p_i} + m[i][free] z_free = 0.
    let lcm = m
        .iter()
        .zip(&pivots)
        .fold(1i128, |acc, (row, &p)| acc.lcm(&row[p]));
    let mut z = vec![0i128; cols];
    z[free] = lcm;
    for (row, &p) in m.iter().zip(&pivots) {
        z[p] = -row[free]
            .checked_mul(lcm / row[p])
            .ok_or_else(overflow)?;
    }
    gcd_reduce(&mut z);
    Ok(z)
}

struct Ray {
    z: Vec<i128>,
    zeros: FixedBitSet,
}

/// Irredundant facet inequalities of `conv(V)` inside its affine hull.
///
/// The points are projected to pivot coordinates where the polytope is
/// full-dimensional; the homogenized cone `{z : z . (1, y) >= 0}` is built by
/// double description, one point at a time, with the combinatorial adjacency
/// test. Normals are zero outside the pivot coordinates.
pub fn facets_exact(vertices: &VertexSet) -> Result<Vec<Hyperplane>> {
    let n = vertices.len();
    if n > limits::MAX_HULL_VERTICES {
        return Err(Error::Resource(format!(
            "{n} vertices exceed the hull cap {}",
            limits::MAX_HULL_VERTICES
        )));
    }
    let pts: Vec<&[i64]> = vertices.points().iter().map(Vec::as_slice).collect();
    let pivots = hull_pivots(&pts)?;
    let d = pivots.len();
    if d == 0 {
        return Err(Error::Domain("a single point has no facets".into()));
    }
    let rows: Vec<Vec<i128>> = pts
        .iter()
        .map(|p| {
            std::iter::once(1i128)
                .chain(pivots.iter().map(|&c| p[c] as i128))
                .collect()
        })
        .collect();

    // d + 1 independent rows start the cone.
    let mut basis: Vec<usize> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut trial: Vec<Vec<i128>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(row.clone());
        if rank(trial)? == basis.len() + 1 {
            basis.push(i);
            if basis.len() == d + 1 {
                break;
            }
        }
    }
    let mut rays: Vec<Ray> = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let others: Vec<Vec<i128>> = basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, &i)| rows[i].clone())
            .collect();
        let mut z = null_vector(&others)?;
        if dot(&rows[basis[k]], &z)? < 0 {
            z.iter_mut().for_each(|x| *x = -*x);
        }
        let mut zeros = FixedBitSet::with_capacity(n);
        basis
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .for_each(|(_, &i)| zeros.insert(i));
        rays.push(Ray { z, zeros });
    }

    let mut done = FixedBitSet::with_capacity(n);
    basis.iter().for_each(|&i| done.insert(i));
    for i in 0..n {
        if done.contains(i) {
            continue;
        }
        let values: Vec<i128> = rays.iter().map(|r| dot(&rows[i], &r.z)).collect::<Result<_>>()?;
        let mut next: Vec<Ray> = Vec::new();
        for (r, &v) in rays.iter().zip(&values) {
            if v >= 0 {
                let mut zeros = r.zeros.clone();
                if v == 0 {
                    zeros.insert(i);
                }
                next.push(Ray {
                    z: r.z.clone(),
                    zeros,
                });
            }
        }
        for (a, &va) in values.iter().enumerate().filter(|(_, v)| **v > 0) {
            for (b, &vb) in values.iter().enumerate().filter(|(_, v)| **v < 0) {
                let mut common = rays[a].zeros.clone();
                common.intersect_with(&rays[b].zeros);
                if common.count_ones(..) + 1 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(c, r)| c != a && c != b && common.is_subset(&r.zeros));
                if blocked {
                    continue;
                }
                let mut z: Vec<i128> = rays[a]
                    .z
                    .iter()
                    .zip(&rays[b].z)
                    .map(|(&za, &zb)| {
                        va.checked_mul(zb)
                            .and_then(|s| (-vb).checked_mul(za).and_then(|t| s.checked_add(t)))
                            .ok_or_else(overflow)
                    })
                    .collect::<Result<_>>()?;
                gcd_reduce(&mut z);
                common.insert(i);
                next.push(Ray { z, zeros: common });
            }
        }
        rays = next;
        done.insert(i);
    }

    let cols = vertices.ambient_dim();
    let mut out: Vec<Hyperplane> = rays
        .into_iter()
        .map(|r| {
            let mut normal = vec![0i64; cols];
            for (j, &c) in pivots.iter().enumerate() {
                normal[c] = -r.z[j + 1] as i64;
            }
            Hyperplane {
                normal,
                offset: r.z[0] as i64,
            }
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
