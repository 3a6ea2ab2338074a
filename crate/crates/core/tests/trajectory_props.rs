mod common;

use common::{brute_first_visit, reference_protocols};
use evacsim::geometry::{dist, Shape};
use evacsim::protocols::{build_early_meeting, build_triangle_detour1};
use evacsim::trajectory::{format_trajectories, parse_trajectories};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

#[test]
fn first_visit_matches_time_stepped_scan() {
    let protocols = reference_protocols();
    let picks = [
        "detour1",
        "detour2",
        "early T k=3",
        "early S k=4",
        "square detour",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = Vec::new();
    for name in picks {
        let p = &protocols.iter().find(|(n, _)| n == name).unwrap().1;
        for _ in 0..200 {
            cases.push((p, rng.gen_range(0.0..p.shape.perimeter)));
        }
    }
    let bad: Vec<String> = cases
        .par_iter()
        .filter_map(|&(p, s)| {
            let e = p.shape.point_at_arc(s);
            let got = p.first_visit(s).map(|v| v.0);
            let want = brute_first_visit(p, e, 1e-5);
            let ok = match (got, want) {
                (Some(a), Some(b)) => (a - b).abs() <= 2e-5,
                (None, None) => true,
                _ => false,
            };
            (!ok).then(|| format!("{} s={s}: {got:?} vs {want:?}", p.family()))
        })
        .collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn nobody_outruns_the_straight_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (name, p) in reference_protocols() {
        for _ in 0..500 {
            let s = rng.gen_range(0.0..p.shape.perimeter);
            if let Some((t, _)) = p.first_visit(s) {
                let d = dist(p.shape.centroid, p.shape.point_at_arc(s));
                assert!(t >= d - 1e-12, "{name} s={s}: {t} < {d}");
            }
        }
    }
}

#[test]
fn every_exit_is_covered() {
    for (name, p) in reference_protocols() {
        let per = p.shape.perimeter;
        for i in 0..4000 {
            let s = per * (i as f64 + 0.5) / 4000.0;
            let in_section = p
                .common_section
                .is_some_and(|c| c.offset_of(s, per).is_some());
            assert!(
                p.first_visit(s).is_some() || in_section,
                "{name}: s={s} uncovered"
            );
        }
    }
}

#[test]
fn schedules_start_at_centroid_and_respect_speed() {
    for (name, p) in reference_protocols() {
        for t in &p.trajectories {
            let w0 = t.start();
            assert_eq!(w0.time, 0.0, "{name}");
            assert!(dist(w0.point, p.shape.centroid) < 1e-12, "{name}");
            for (a, b) in t.segments() {
                assert!(b.time - a.time >= dist(a.point, b.point) - 1e-12, "{name}");
            }
        }
    }
}

#[test]
fn common_section_is_unexplored_in_phase_one() {
    let p = build_early_meeting(&Shape::triangle(), 3, 0.38601).unwrap();
    let c = p.common_section.unwrap();
    assert!(p.first_visit(c.start + 0.5 * c.length).is_none());
}

#[test]
fn detour_reaches_side_midpoint_on_schedule() {
    let p = build_triangle_detour1(0.70745).unwrap();
    let tri = Shape::triangle();
    let y = tri.centroid_to_side();
    let (t, _) = p.first_visit(0.5).unwrap();
    assert!((t - y).abs() < 1e-12);
    let at = p.trajectories[1].position_at(y + 0.5);
    assert!(dist(at, tri.vertex('C')) < 1e-12);
}

#[test]
fn text_format_round_trips_built_schedules() {
    for (name, p) in reference_protocols() {
        let text = format_trajectories(&p.trajectories);
        let back: Vec<_> = parse_trajectories(&text)
            .unwrap()
            .into_iter()
            .map(|(_, t)| t)
            .collect();
        assert_eq!(back, p.trajectories, "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn position_moves_at_most_unit_speed(idx in 0usize..18, r in 0usize..8, t in 0.0f64..5.0, d in 0.0f64..1.0) {
        let all = reference_protocols();
        let (_, p) = &all[idx % all.len()];
        let traj = &p.trajectories[r % p.k()];
        let a = traj.position_at(t);
        let b = traj.position_at(t + d);
        prop_assert!(dist(a, b) <= d + 1e-9);
    }
}
