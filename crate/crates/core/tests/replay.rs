mod common;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use uindex_core::dynamics::replay;
use uindex_core::{AuthorProfile, CareerEvent, EventKind, Publication, DEFAULT_EPSILON};

fn random_log(rng: &mut ChaCha8Rng) -> (AuthorProfile, Vec<CareerEvent>) {
    let initial = random_profile(rng, 6, 200);
    let mut ids: Vec<String> = initial
        .publications()
        .iter()
        .map(|p| p.id().to_owned())
        .collect();
    let mut seq = rng.random_range(0..5u64);
    let events = (0..rng.random_range(0..30))
        .map(|k| {
            seq += rng.random_range(1..4);
            if ids.is_empty() || rng.random_bool(0.3) {
                let id = format!("new{k}");
                ids.push(id.clone());
                let p = Publication::new(
                    id,
                    rng.random_range(0..50),
                    rng.random_range(1..=200) as f64 / 20.0,
                )
                .unwrap();
                CareerEvent::add_publication(seq, p)
            } else {
                let target = ids[rng.random_range(0..ids.len())].clone();
                CareerEvent::add_citations(seq, target, rng.random_range(1..500))
            }
        })
        .collect();
    (initial, events)
}

/// Apply events to plain `(id, C, IF)` rows and recompute from scratch.
fn oracle_points(initial: &AuthorProfile, events: &[CareerEvent]) -> Vec<(usize, usize)> {
    let mut rows: Vec<(String, u64, f64)> = initial
        .publications()
        .iter()
        .map(|p| (p.id().to_owned(), p.citations(), p.impact_factor()))
        .collect();
    let mut out = Vec::new();
    for e in events {
        match &e.kind {
            EventKind::AddPublication(p) => {
                rows.push((p.id().to_owned(), p.citations(), p.impact_factor()))
            }
            EventKind::AddCitations {
                publication_id,
                count,
            } => {
                rows.iter_mut().find(|r| &r.0 == publication_id).unwrap().1 += count;
            }
        }
        let plain: Vec<(u64, f64)> = rows.iter().map(|r| (r.1, r.2)).collect();
        let cs: Vec<u64> = plain.iter().map(|r| r.0).collect();
        let cif = if plain.is_empty() {
            0.0
        } else {
            sum_cif(&plain)
        };
        out.push((
            brute_force_u(&plain, cif, DEFAULT_EPSILON),
            brute_force_h(&cs),
        ));
    }
    out
}

#[test]
fn citation_inflation_lowers_u() {
    let initial = profile(&[("A", 10, 1.0), ("B", 10, 1.0)]);
    let events = [CareerEvent::add_citations(1, "A", 100)];
    let t = replay(&initial, &events).unwrap();
    assert_eq!(oracle_points(&initial, &events), [(1, 2)]);
    assert_eq!(t.u_series(), [1]);
    assert_eq!(t.h_series(), [2]);
}

#[test]
fn random_replays_agree_with_recomputation() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..300 {
        let (initial, events) = random_log(&mut rng);
        let t = replay(&initial, &events).unwrap();
        let got: Vec<(usize, usize)> = t.points.iter().map(|p| (p.u_index, p.h_index)).collect();
        assert_eq!(got, oracle_points(&initial, &events));
    }
}

#[test]
fn random_replays_keep_invariants() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..1000 {
        let (initial, events) = random_log(&mut rng);
        let t = replay(&initial, &events).unwrap();
        assert_eq!(t.len(), events.len());
        for (p, e) in t.points.iter().zip(&events) {
            assert_eq!(p.sequence_no, e.sequence_no);
            assert!(p.u_index <= p.paper_count);
        }
        let initial_h = uindex_core::compute_h_index(&initial);
        let hs = t.h_series();
        assert!(hs.first().is_none_or(|&h| h >= initial_h));
        assert!(hs.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(t, replay(&initial, &events).unwrap());
    }
}

#[test]
fn uncited_papers_never_move_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let initial = random_profile(&mut rng, 10, 100);
        let h = uindex_core::compute_h_index(&initial);
        let p = Publication::new("zero", 0, 1.5).unwrap();
        let t = replay(&initial, &[CareerEvent::add_publication(1, p)]).unwrap();
        assert_eq!(t.points[0].h_index, h);
    }
}
