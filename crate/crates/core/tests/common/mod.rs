#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use uindex_core::{AuthorProfile, Publication};

pub type Row = (&'static str, u64, f64);

pub const AUTHOR_A: &[Row] = &[
    ("pub1", 770, 4.15),
    ("pub2", 650, 3.84),
    ("pub3", 120, 6.15),
    ("pub4", 100, 1.86),
];
pub const AUTHOR_B: &[Row] = &[
    ("pub1", 5200, 3.56),
    ("pub2", 4160, 4.88),
    ("pub3", 3500, 3.82),
    ("pub4", 180, 2.12),
    ("pub5", 100, 1.88),
];
pub const AUTHOR_C: &[Row] = &[
    ("pub1", 120, 4.58),
    ("pub2", 100, 4.16),
    ("pub3", 20, 4.16),
    ("pub4", 15, 4.58),
];
pub const AUTHOR_D: &[Row] = &[
    ("pub1", 2400, 3.56),
    ("pub2", 2200, 4.18),
    ("pub3", 1400, 2.88),
    ("pub4", 1000, 3.12),
    ("pub5", 850, 39.22),
    ("pub6", 780, 3.48),
];

pub fn profile(rows: &[Row]) -> AuthorProfile {
    AuthorProfile::new(
        "author",
        rows.iter()
            .map(|&(id, c, f)| Publication::new(id, c, f).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn random_profile<R: Rng>(rng: &mut R, max_n: usize, max_c: u64) -> AuthorProfile {
    let n = rng.random_range(0..=max_n);
    let pubs = (0..n)
        .map(|i| {
            // Coarse IF grid so ties in C and in C/IF actually occur.
            let impact_factor = rng.random_range(1..=400) as f64 / 20.0;
            Publication::new(format!("p{i}"), rng.random_range(0..=max_c), impact_factor).unwrap()
        })
        .collect();
    AuthorProfile::new("r", pubs).unwrap()
}

pub fn shuffled<R: Rng>(rng: &mut R, profile: &AuthorProfile) -> AuthorProfile {
    let mut pubs = profile.publications().to_vec();
    pubs.shuffle(rng);
    profile.with_publications(pubs).unwrap()
}

/// h by definition: the largest h in 0..=N with at least h papers cited h+ times.
pub fn brute_force_h(citations: &[u64]) -> usize {
    (0..=citations.len())
        .filter(|&h| citations.iter().filter(|&&c| c >= h as u64).count() >= h)
        .max()
        .unwrap_or(0)
}

/// u by definition, independent of the library's ranking code: papers are
/// sorted with an insertion sort on (C desc, C/IF desc, input position),
/// then the largest u whose first u papers all reach `cif - eps` is taken.
pub fn brute_force_u(rows: &[(u64, f64)], cif: f64, eps: f64) -> usize {
    let mut order: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let key = |j: usize| (rows[j].0, rows[j].0 as f64 / rows[j].1);
        let pos = order
            .iter()
            .position(|&j| {
                let (cj, rj) = key(j);
                let (ci, ri) = key(i);
                ci > cj || (ci == cj && ri > rj)
            })
            .unwrap_or(order.len());
        order.insert(pos, i);
    }
    (0..=rows.len())
        .rev()
        .find(|&u| {
            order[..u]
                .iter()
                .all(|&j| rows[j].0 as f64 / rows[j].1 >= cif - eps)
        })
        .unwrap_or(0)
}

/// CIF by plain summation.
pub fn sum_cif(rows: &[(u64, f64)]) -> f64 {
    let c: f64 = rows.iter().map(|r| r.0 as f64).sum();
    let f: f64 = rows.iter().map(|r| r.1).sum();
    c / f
}

pub fn rows_of(profile: &AuthorProfile) -> Vec<(u64, f64)> {
    profile
        .publications()
        .iter()
        .map(|p| (p.citations(), p.impact_factor()))
        .collect()
}
