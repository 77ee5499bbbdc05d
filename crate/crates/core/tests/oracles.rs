//! Independent oracles: exhaustive enumeration, direct payoff comparison,
//! and exact laws on tiny cubes.

use std::collections::BTreeMap;

use hypernash::dynamics::all_tie_vertices;
use hypernash::equilibrium::{count_pne, enumerate, mean_pne, var_pne};
use hypernash::exact::{mark_census, mark_law, moments, pne_count_moments};
use hypernash::experiments::stats::poisson_chi_square;
use hypernash::hypercube::{flip, parity};
use hypernash::randgame::{marks_of, sample_marks, sample_payoffs};
use hypernash::rng::Stream;
use hypernash::{Dimension, DiscreteDistribution, Parity, PayoffTable, TieParameter, VertexId};

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn tp(a: f64) -> TieParameter {
    TieParameter::new(a).unwrap()
}

#[test]
fn enumerated_moments_match_closed_forms() {
    for n in 1..=3 {
        for a in [0.25, 0.5, 0.75] {
            let (mean, var) = pne_count_moments(dim(n), tp(a)).unwrap();
            assert!((mean - mean_pne(n, tp(a))).abs() < 1e-10, "n={n} a={a}");
            assert!((var - var_pne(n, tp(a))).abs() < 1e-10, "n={n} a={a}");
        }
    }
}

/// PNE by definition: no player gains by switching alone.
fn naive_pne(p: &PayoffTable) -> Vec<VertexId> {
    let d = p.dim();
    d.vertices()
        .filter(|&v| d.players().all(|i| p.get(i, flip(v, i)) <= p.get(i, v)))
        .collect()
}

fn naive_spne(p: &PayoffTable) -> Vec<VertexId> {
    let d = p.dim();
    d.vertices()
        .filter(|&v| d.players().all(|i| p.get(i, flip(v, i)) < p.get(i, v)))
        .collect()
}

#[test]
fn payoff_oracle_agrees_with_orientation() {
    let dists = [
        "uniform:-1,1",
        "atoms:0@0.2,1@0.5,2@0.3",
        "uniform:1,2,3,4,5,6,7,8",
    ];
    for spec in dists {
        let dist: DiscreteDistribution = spec.parse().unwrap();
        for seed in 0..10_000u64 {
            let p = sample_payoffs(dim(2), &dist, seed);
            let r = enumerate(&marks_of(&p));
            assert_eq!(r.pne, naive_pne(&p), "{spec} seed={seed}");
            assert_eq!(r.spne, naive_spne(&p), "{spec} seed={seed}");
        }
    }
    let p = sample_payoffs(dim(6), &"uniform:0,1,2".parse().unwrap(), 3);
    assert_eq!(enumerate(&marks_of(&p)).pne, naive_pne(&p));
}

#[test]
fn example_game_by_definition() {
    let p = hypernash::randgame::example_three_player_game();
    assert_eq!(naive_pne(&p), vec![0, 3]);
    assert_eq!(naive_spne(&p), vec![0, 3]);
}

/// Empirical PNE-count law of `samples` is within 4 SE of `law` on every atom.
fn agrees_with_law(samples: &[usize], law: &BTreeMap<usize, f64>) -> bool {
    let k = samples.len() as f64;
    law.iter().all(|(&v, &p)| {
        let f = samples.iter().filter(|&&s| s == v).count() as f64 / k;
        let se = (p * (1.0 - p) / k).sqrt();
        (f - p).abs() <= 4.0 * se + 1e-12
    }) && samples.iter().all(|s| law.contains_key(s))
}

#[test]
fn payoff_and_mark_pipelines_share_the_exact_law() {
    let law = mark_law(&mark_census(dim(3), count_pne).unwrap(), tp(0.5));
    let coin: DiscreteDistribution = "uniform:-1,1".parse().unwrap();
    let from_payoffs: Vec<usize> = (0..10_000)
        .map(|s| count_pne(&marks_of(&sample_payoffs(dim(3), &coin, s))))
        .collect();
    let from_marks: Vec<usize> = (0..10_000)
        .map(|s| count_pne(&sample_marks(dim(3), tp(0.5), s)))
        .collect();
    assert!(agrees_with_law(&from_payoffs, &law));
    assert!(agrees_with_law(&from_marks, &law));
}

#[test]
fn all_tie_count_on_even_vertices_is_binomial() {
    // even vertices share no edge, so their all-tie events are independent
    let even_all_tie = |c: &hypernash::OrientedCube| {
        all_tie_vertices(c)
            .into_iter()
            .filter(|&v| parity(v) == Parity::Even)
            .count()
    };
    let census = mark_census(dim(2), even_all_tie).unwrap();
    for a in [0.2, 0.5, 0.9] {
        let law = mark_law(&census, tp(a));
        let q = a * a;
        assert!((law[&0] - (1.0 - q).powi(2)).abs() < 1e-14);
        assert!((law[&1] - 2.0 * q * (1.0 - q)).abs() < 1e-14);
        assert!((law[&2] - q * q).abs() < 1e-14);
    }
    let census3 = mark_census(dim(3), even_all_tie).unwrap();
    let law = mark_law(&census3, tp(0.5));
    let (mean, var) = moments(&law);
    let q = 0.5f64.powi(3);
    assert!((mean - 4.0 * q).abs() < 1e-12);
    assert!((var - 4.0 * q * (1.0 - q)).abs() < 1e-12);
}

#[test]
fn pne_count_dominates_all_tie_count() {
    for seed in 0..200 {
        let c = sample_marks(dim(8), tp(0.6), seed);
        let all_tie = all_tie_vertices(&c);
        let pne = enumerate(&c).pne;
        assert!(all_tie.iter().all(|v| pne.binary_search(v).is_ok()));
    }
}

/// Inversion sampler for Poisson(1) on a counter stream.
fn poisson_one(stream: &Stream, i: u64) -> u64 {
    let u = stream.unit(i);
    let (mut k, mut p) = (0u64, (-1.0f64).exp());
    let mut cdf = p;
    while u >= cdf && k < 50 {
        k += 1;
        p /= k as f64;
        cdf += p;
    }
    k
}

#[test]
fn chi_square_calibrates_on_true_poisson_samples() {
    let reps = 300;
    let mut below = 0;
    for r in 0..reps {
        let s = Stream::new(r, "poisson");
        let draws: Vec<u64> = (0..2000).map(|i| poisson_one(&s, i)).collect();
        if poisson_chi_square(&draws, 1.0).unwrap().passes() {
            below += 1;
        }
    }
    assert!(below as f64 >= 0.99 * reps as f64, "{below}/{reps}");
}
