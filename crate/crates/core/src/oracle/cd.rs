//! cd-indices: flag vector to ab-index to the c, d basis, and the rank-2
//! closed form assembled from simplex products.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_integer::binomial;
use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::SkewRegion;

use super::lattice::{flag_vector, simplex_product_lattice, FaceLatticeGeom};
use super::region_face_lattice;

/// Integer combination of words over `{c, d}`; zero terms are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CdPolynomial {
    terms: BTreeMap<String, i64>,
}

impl CdPolynomial {
    pub fn zero() -> Self {
        CdPolynomial::default()
    }

    pub fn one() -> Self {
        CdPolynomial::monomial("", 1)
    }

    pub fn monomial(word: &str, coeff: i64) -> Self {
        let mut p = CdPolynomial::zero();
        p.add_term(word, coeff);
        p
    }

    pub fn c() -> Self {
        CdPolynomial::monomial("c", 1)
    }

    pub fn d() -> Self {
        CdPolynomial::monomial("d", 1)
    }

    fn add_term(&mut self, word: &str, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(word.to_string()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(word);
        }
    }

    pub fn terms(&self) -> &BTreeMap<String, i64> {
        &self.terms
    }

    pub fn coeff(&self, word: &str) -> i64 {
        self.terms.get(word).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: i64) -> Self {
        let mut out = CdPolynomial::zero();
        for (w, &c) in &self.terms {
            out.add_term(w, c * k);
        }
        out
    }

    /// Degree of the first term, counting `c` as 1 and `d` as 2.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|w| word_degree(w))
    }
}

fn word_degree(word: &str) -> usize {
    word.chars().map(|ch| if ch == 'd' { 2 } else { 1 }).sum()
}

impl Add for &CdPolynomial {
    type Output = CdPolynomial;

    fn add(self, other: &CdPolynomial) -> CdPolynomial {
        let mut out = self.clone();
        for (w, &c) in &other.terms {
            out.add_term(w, c);
        }
        out
    }
}

impl Sub for &CdPolynomial {
    type Output = CdPolynomial;

    fn sub(self, other: &CdPolynomial) -> CdPolynomial {
        self + &other.scale(-1)
    }
}

impl Mul for &CdPolynomial {
    type Output = CdPolynomial;

    /// Noncommutative product: words concatenate.
    fn mul(self, other: &CdPolynomial) -> CdPolynomial {
        let mut out = CdPolynomial::zero();
        for (a, &x) in &self.terms {
            for (b, &y) in &other.terms {
                out.add_term(&format!("{a}{b}"), x * y);
            }
        }
        out
    }
}

impl fmt::Display for CdPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, &c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let word = if w.is_empty() { "1" } else { w.as_str() };
            if c.abs() == 1 {
                write!(f, "{sign}{word}")?;
            } else {
                write!(f, "{sign}{}{word}", c.abs())?;
            }
        }
        Ok(())
    }
}

fn cd_words(degree: usize) -> Vec<String> {
    match degree {
        0 => vec![String::new()],
        1 => vec!["c".into()],
        _ => {
            let mut out: Vec<String> = cd_words(degree - 1).into_iter().map(|w| format!("c{w}")).collect();
            out.extend(cd_words(degree - 2).into_iter().map(|w| format!("d{w}")));
            out
        }
    }
}

/// ab-words of a cd-word, as masks with bit `i` set for a `b` at position `i`.
fn ab_expansion(word: &str) -> Vec<u32> {
    let mut out = vec![0u32];
    let mut pos = 0;
    for ch in word.chars() {
        out = match ch {
            'c' => out
                .iter()
                .flat_map(|&m| [m, m | 1 << pos])
                .collect(),
            _ => out
                .iter()
                .flat_map(|&m| [m | 1 << (pos + 1), m | 1 << pos])
                .collect(),
        };
        pos += if ch == 'c' { 1 } else { 2 };
    }
    out
}

type Q = Ratio<i128>;

/// Solve `a x = b` exactly; `None` when inconsistent or underdetermined.
fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut row = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        let p = (row..a.len()).find(|&i| !a[i][c].is_zero())?;
        a.swap(row, p);
        b.swap(row, p);
        let inv = Q::one() / a[row][c];
        a[row].iter_mut().for_each(|x| *x *= inv);
        b[row] *= inv;
        for i in 0..a.len() {
            if i != row && !a[i][c].is_zero() {
                let f = a[i][c];
                let (src, bsrc) = (a[row].clone(), b[row]);
                a[i].iter_mut().zip(&src).for_each(|(x, y)| *x -= f * y);
                b[i] -= f * bsrc;
            }
        }
        pivots.push(c);
        row += 1;
    }
    if b[row..].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some(b[..cols].to_vec())
}

/// cd-index of an Eulerian face lattice, by a linear solve over the cd basis.
pub fn cd_index(lattice: &FaceLatticeGeom) -> Result<CdPolynomial> {
    let d = lattice.dim().max(0) as usize;
    if d == 0 {
        return Ok(CdPolynomial::one());
    }
    let flags = flag_vector(lattice)?;
    let f_of = |mask: u32| -> i128 {
        let set: Vec<usize> = (0..d).filter(|&i| mask >> i & 1 == 1).collect();
        flags[&set] as i128
    };
    let h: Vec<i128> = (0u32..1 << d)
        .map(|s| {
            // Sum over submasks t of s.
            let mut total = 0i128;
            let mut t = s;
            loop {
                let sign = if (s ^ t).count_ones() % 2 == 0 { 1 } else { -1 };
                total += sign * f_of(t);
                if t == 0 {
                    break;
                }
                t = (t - 1) & s;
            }
            total
        })
        .collect();
    let words = cd_words(d);
    let mut a = vec![vec![Q::zero(); words.len()]; 1 << d];
    for (j, w) in words.iter().enumerate() {
        for m in ab_expansion(w) {
            a[m as usize][j] = Q::one();
        }
    }
    let b = h.iter().map(|&x| Q::from_integer(x)).collect();
    let x = solve(a, b).ok_or_else(|| {
        Error::NotEulerian("ab-index is not a combination of cd-words".into())
    })?;
    let mut out = CdPolynomial::zero();
    for (w, v) in words.iter().zip(x) {
        if !v.is_integer() {
            return Err(Error::NotEulerian(format!("coefficient {v} of {w} is not integral")));
        }
        out.add_term(w, *v.numer() as i64);
    }
    Ok(out)
}

/// cd-index of the base polytope of a region, through the exact hull.
pub fn region_cd_index(region: &SkewRegion) -> Result<CdPolynomial> {
    let (_, lattice) = region_face_lattice(region)?;
    cd_index(&lattice)
}

fn simplex_product_cd(i: usize, j: usize) -> Result<CdPolynomial> {
    cd_index(&simplex_product_lattice(i, j)?)
}

fn rank2_region(lower: String, upper: String) -> Result<SkewRegion> {
    SkewRegion::from_words(&lower, &upper)
}

fn e(k: usize) -> String {
    "E".repeat(k)
}

fn check_rank2(alpha: usize, beta: usize, gamma: usize) -> Result<()> {
    if beta == 0 {
        return Err(Error::Domain("beta must be at least 1".into()));
    }
    if alpha + beta + gamma > 12 {
        return Err(Error::Resource("rank-2 parameters too large".into()));
    }
    Ok(())
}

/// cd-index of the rank-2 region between `E^(a+b) N E^g N` and `N E^a N E^(b+g)`.
pub fn rank2_cd_lhs(alpha: usize, beta: usize, gamma: usize) -> Result<CdPolynomial> {
    check_rank2(alpha, beta, gamma)?;
    let region = rank2_region(
        format!("{}N{}N", e(alpha + beta), e(gamma)),
        format!("N{}N{}", e(alpha), e(beta + gamma)),
    )?;
    region_cd_index(&region)
}

/// The closed-form side of the rank-2 identity, with every term evaluated by
/// this module's own pipeline.
pub fn rank2_cd_rhs(alpha: usize, beta: usize, gamma: usize) -> Result<CdPolynomial> {
    check_rank2(alpha, beta, gamma)?;
    let m = alpha + beta + gamma;
    let mut total = CdPolynomial::zero();
    for i in alpha + 1..=alpha + beta {
        let region = rank2_region(
            format!("{}N{}N", e(i), e(m - i)),
            format!("N{}N{}", e(i - 1), e(m - i + 1)),
        )?;
        total = &total + &region_cd_index(&region)?;
    }
    let mut corrections = CdPolynomial::zero();
    for i in alpha + 2..=alpha + beta {
        corrections = &corrections + &simplex_product_cd(i, m - i + 2)?;
    }
    total = &total - &(&corrections * &CdPolynomial::c());
    for i in 0..=alpha {
        for j in 0..=gamma {
            if i == 0 && j == 0 {
                continue;
            }
            let mut inner = CdPolynomial::zero();
            for k in 2..=beta.saturating_sub(2) {
                inner = &inner + &simplex_product_cd(alpha - i + k, beta - j + gamma - k + 2)?;
            }
            if inner.is_zero() {
                continue;
            }
            let term = &(&inner * &CdPolynomial::d()) * &simplex_product_cd(i + j, 1)?;
            let weight = binomial(alpha as i64 + 1, i as i64) * binomial(gamma as i64 + 1, j as i64);
            total = &total - &term.scale(weight);
        }
    }
    Ok(total)
}
