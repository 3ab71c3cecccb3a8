//! Frozen instances exhibiting specific behaviours, each rechecked here.

use std::sync::Arc;

use untangle::engine::bichromatic::{uncross_topmost_fan, untangle_semi_collinear};
use untangle::gen;
use untangle::graph::{apply_flip, crossing_count, edge_pair, is_plane, FlipStep};
use untangle::io::{parse_instance, write_instance, Instance};
use untangle::oracle::{crossing_increasing_flip, find_reappearing_crossing, oracle_min_flips, oracle_min_max};
use untangle::svg::render_trace_svg;
use untangle::{Edge, FlipGraph, Matching};

fn load(text: &str) -> Matching {
    match parse_instance(text).unwrap() {
        Instance::Matching(m) => m,
        Instance::Tree(_) => panic!("expected a matching"),
    }
}

const REAPPEARING: &str = include_str!("fixtures/reappearing_crossing.txt");
const INCREASE: &str = include_str!("fixtures/crossing_increase.txt");
const TIGHT_FAN: &str = include_str!("fixtures/tight_fan_chain.txt");
const THREE_PULLS: &str = include_str!("fixtures/three_pulls.txt");

#[test]
fn reappearing_crossing_fixture() {
    let m = load(REAPPEARING);
    let regenerated = gen::gen_random_matching(Arc::new(gen::gen_semi_collinear(8, 46).unwrap()), 46, true).unwrap();
    assert_eq!(write_instance(&regenerated.into()), write_instance(&m.clone().into()));

    let r = untangle_semi_collinear(&m).unwrap();
    assert!(r.plane);
    let re = find_reappearing_crossing(m.points(), &r.trace.states()).expect("crossing reappears");
    assert_eq!(re.pair, (Edge(0, 5), Edge(1, 7)));
    assert_eq!((re.first_seen, re.vanished, re.reappeared), (0, 1, 3));
    let (lo, hi) = oracle_min_max(&m).unwrap();
    assert!(lo <= r.flips_used && r.flips_used <= hi);
}

#[test]
fn flip_can_add_crossings_in_general_position() {
    let m = load(INCREASE);
    assert_eq!(crossing_count(&m), 1);
    let removed = edge_pair(Edge(2, 4), Edge(5, 7));
    let added = edge_pair(Edge(2, 7), Edge(4, 5));
    let step = FlipStep::new(m.points(), removed, added, "witness").unwrap();
    let next = apply_flip(&m, &step).unwrap();
    assert!(crossing_count(&next) > 1);
    assert!(crossing_increasing_flip(&m).unwrap().is_some());
}

#[test]
fn tight_fan_chain() {
    let m = load(TIGHT_FAN);
    let r = uncross_topmost_fan(&m).unwrap();
    let n = m.points().len();
    assert_eq!(r.flips_used, n / 2 - 1);
    assert_eq!(r.trace.crossing_counts, vec![1, 1, 1, 0]);
    assert_eq!(oracle_min_flips(&m).unwrap(), 3);
    assert!(is_plane(&r.final_state));
}

#[test]
fn three_pulls_move_one_red_leftward() {
    let m = load(THREE_PULLS);
    let ps = m.points();
    let r = untangle_semi_collinear(&m).unwrap();
    assert_eq!(r.subcalls[0].kind, "pull");
    assert_eq!(r.subcalls[0].flips, 3);
    let pulls = &r.trace.steps[..3];
    assert!(pulls.iter().all(|s| s.rule == "semi-pull"));
    let mut xs = vec![ps.point(1).x];
    for s in pulls {
        let e = s.added.iter().find(|e| e.contains(6)).expect("red 6 is re-paired");
        xs.push(ps.point(e.other(6)).x);
    }
    assert_eq!(xs, vec![326, 288, 152, 31]);
    assert!(r.plane);
    let svg = render_trace_svg(ps.points(), &r.trace);
    assert_eq!(svg.matches(r#"class="panel""#).count(), r.flips_used + 1);
}
