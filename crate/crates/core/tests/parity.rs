//! Monte Carlo check of the random-parity algorithm on paths against the
//! depth-parity description of its coloring.

use palette_core::adversaries::{path_edge, rp_strategy_mod3, shuffle_edges, RevealSequence};
use palette_core::charging::{compute_l, PathAnalysis};
use palette_core::{EdgeId, OnlineAlgorithm, RandomParity, RngStream};

const TRIALS: u64 = 20_000;

struct Shape {
    critical: Vec<bool>,
    /// Inclusive distance to the first revealed edge of the component.
    depth: Vec<usize>,
}

/// Edge `i` of the sequence is path edge `seq.edges[i].1`.
fn shape(seq: &RevealSequence) -> Shape {
    let m = seq.len();
    let mut when = vec![0; m + 2];
    for (t, &(_, v)) in seq.edges.iter().enumerate() {
        when[v] = t + 1;
    }
    let crit_at = |pos: usize| pos > 1 && pos < m && when[pos - 1] < when[pos] && when[pos + 1] < when[pos];
    let mut depth = vec![0; m];
    let mut pos = 1;
    while pos <= m {
        if crit_at(pos) {
            pos += 1;
            continue;
        }
        let start = pos;
        while pos <= m && !crit_at(pos) {
            pos += 1;
        }
        let seed = (start..pos).min_by_key(|&q| when[q]).unwrap();
        for q in start..pos {
            depth[when[q] - 1] = q.abs_diff(seed) + 1;
        }
    }
    let critical = (0..m).map(|i| crit_at(seq.edges[i].1)).collect();
    Shape { critical, depth }
}

fn within(freq: f64, expect: f64, label: &str) {
    let sigma = (expect * (1.0 - expect) / TRIALS as f64).sqrt();
    assert!(
        (freq - expect).abs() <= 3.0 * sigma + 1e-12,
        "{label}: frequency {freq} vs {expect} (sigma {sigma})"
    );
}

fn check(seq: &RevealSequence, p: f64) {
    let s = shape(seq);
    let analysis = PathAnalysis::new(seq).unwrap();
    let m = seq.len();
    let mut ones = vec![0u64; m];
    let mut colored = vec![0u64; m];
    for t in 0..TRIALS {
        let mut alg = RandomParity::new(p).unwrap();
        let trace = seq.play(&mut alg, &mut RngStream::for_trial(17, t)).unwrap();
        for i in 0..m {
            match trace.coloring.color(EdgeId(i)).map(|c| c.get()) {
                Some(1) => {
                    ones[i] += 1;
                    colored[i] += 1;
                }
                Some(_) => colored[i] += 1,
                None => {}
            }
        }
        assert!(alg.name().starts_with("rp"));
    }
    let p_one = |i: usize| if s.depth[i] % 2 == 1 { p } else { 1.0 - p };
    let mut pos_of = vec![0; m + 2];
    for (i, &(_, v)) in seq.edges.iter().enumerate() {
        pos_of[v] = i;
    }
    for i in 0..m {
        assert_eq!(analysis.critical[i], s.critical[i], "edge {i}");
        let freq = ones[i] as f64 / TRIALS as f64;
        if s.critical[i] {
            let v = seq.edges[i].1;
            let (a, b) = (p_one(pos_of[v - 1]), p_one(pos_of[v + 1]));
            let expect = a * b + (1.0 - a) * (1.0 - b);
            let analytic: f64 = analysis.colored_probability(EdgeId(i), &p);
            assert!((analytic - expect).abs() < 1e-12, "edge {i}: {analytic} vs {expect}");
            within(colored[i] as f64 / TRIALS as f64, expect, &format!("critical edge {i}"));
        } else {
            assert_eq!(compute_l(seq, EdgeId(i)).unwrap(), s.depth[i], "edge {i}");
            assert_eq!(colored[i], TRIALS, "non-critical edge {i} was rejected");
            within(freq, p_one(i), &format!("edge {i} at depth {}", s.depth[i]));
        }
    }
}

#[test]
fn random_orders_follow_depth_parity() {
    let mut rng = RngStream::new(99);
    for p in [0.6, 0.7236] {
        let mut edges: Vec<_> = (1..=25).map(path_edge).collect();
        shuffle_edges(&mut edges, &mut rng);
        check(&RevealSequence::new("random-path", 2, edges), p);
    }
}

#[test]
fn mod3_order_follows_depth_parity() {
    check(&rp_strategy_mod3(16).unwrap(), 0.7236);
}

#[test]
fn compute_l_refuses_critical_edges() {
    let seq = rp_strategy_mod3(4).unwrap();
    let s = shape(&seq);
    let i = s.critical.iter().position(|&c| c).unwrap();
    assert!(compute_l(&seq, EdgeId(i)).is_err());
}
