use proptest::prelude::*;

use hypernash::dynamics::{accessible_set, brd_run, improving_players, BrdOutcome};
use hypernash::equilibrium::{enumerate, is_pne, is_spne, ClosedFormMoments};
use hypernash::experiments::stats::{ks_distance, ks_two_sample, normal_cdf, SummaryStats};
use hypernash::format::{parse_bond, parse_instance, write_bond, write_instance};
use hypernash::hypercube::{compact, expand, flip, hamming};
use hypernash::percolation::{
    cluster_of, components, coupled_percolation, coupling_holds, sample_bond,
};
use hypernash::randgame::sample_marks;
use hypernash::{Dimension, EdgeMark, MarkSource, OrientedCube, TieParameter};

fn cube_strategy(max_n: u32) -> impl Strategy<Value = OrientedCube> {
    (1..=max_n).prop_flat_map(|n| {
        let d = Dimension::new(n).unwrap();
        prop::collection::vec(0u8..3, d.edge_count()).prop_map(move |ms| {
            let marks = ms
                .into_iter()
                .map(|m| [EdgeMark::Tie, EdgeMark::TowardOne, EdgeMark::TowardZero][m as usize])
                .collect();
            OrientedCube::from_marks(d, marks, None).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn edge_indexing_is_a_bijection(n in 1u32..=10, raw in any::<u64>()) {
        let d = Dimension::new(n).unwrap();
        let idx = (raw % d.edge_count() as u64) as usize;
        let e = d.edge_at(idx);
        prop_assert_eq!(d.edge_index(e.base, e.player), idx);
        prop_assert_eq!(d.edge_index(e.top(), e.player), idx);
        prop_assert_eq!(hamming(e.base, e.top()), 1);
        prop_assert_eq!(expand(compact(e.base, e.player), e.player), e.base);
    }

    #[test]
    fn instance_format_round_trips(c in cube_strategy(7)) {
        prop_assert_eq!(parse_instance(&write_instance(&c)).unwrap(), c);
    }

    #[test]
    fn bond_format_round_trips(n in 1u32..=7, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let b = sample_bond(Dimension::new(n).unwrap(), p, seed).unwrap();
        prop_assert_eq!(parse_bond(&write_bond(&b)).unwrap(), b);
    }

    #[test]
    fn equilibria_are_the_vertices_without_improvement(c in cube_strategy(7)) {
        let r = enumerate(&c);
        for v in c.dim().vertices() {
            let pne = improving_players(&c, v).is_empty();
            prop_assert_eq!(is_pne(&c, v), pne);
            prop_assert_eq!(r.pne.binary_search(&v).is_ok(), pne);
            if is_spne(&c, v) {
                prop_assert!(pne);
            }
        }
    }

    #[test]
    fn accessible_set_is_closed_and_contains_brd_paths(c in cube_strategy(7), s in any::<u32>()) {
        let d = c.dim();
        let start = s % d.vertex_count() as u32;
        let acc = accessible_set(&c, start).accessible;
        prop_assert!(acc.contains(start));
        for v in acc.iter() {
            for i in improving_players(&c, v) {
                prop_assert!(acc.contains(flip(v, i)));
            }
        }
        // BRD stays inside the accessible set
        let t = brd_run(&c, start, s as u64, 10_000);
        prop_assert!(t.path.iter().all(|&v| acc.contains(v)));
        for w in t.path.windows(2) {
            let i = (w[0] ^ w[1]).trailing_zeros();
            prop_assert!(improving_players(&c, w[0]).contains(&i));
        }
        if let BrdOutcome::Converged(v) = t.outcome {
            prop_assert!(is_pne(&c, v));
            prop_assert_eq!(t.steps as usize + 1, t.path.len());
        }
    }

    #[test]
    fn component_sizes_partition_the_cube(n in 1u32..=9, p in 0.0f64..=1.0, seed in any::<u64>()) {
        let b = sample_bond(Dimension::new(n).unwrap(), p, seed).unwrap();
        let s = components(&b);
        prop_assert_eq!(s.sizes.iter().sum::<usize>(), 1usize << n);
        prop_assert!(s.sizes.windows(2).all(|w| w[0] >= w[1]));
        prop_assert_eq!(s.isolated_count, s.sizes.iter().filter(|&&x| x == 1).count());
        prop_assert_eq!(cluster_of(&b, 0).len(), s.component_id.iter().filter(|&&c| c == 0).count());
    }

    #[test]
    fn coupling_reproduces_the_accessible_set(n in 1u32..=9, a in 0.0f64..=1.0, seed in any::<u64>(), s in any::<u32>()) {
        let d = Dimension::new(n).unwrap();
        let c = sample_marks(d, TieParameter::new(a).unwrap(), seed);
        let start = s % d.vertex_count() as u32;
        let out = coupled_percolation(&c, start, seed ^ 1).unwrap();
        prop_assert!(coupling_holds(&c, start, &out));
    }

    #[test]
    fn ks_distances_are_in_unit_interval(xs in prop::collection::vec(-5.0f64..5.0, 1..200), ys in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let d = ks_distance(&xs, normal_cdf).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
        let d2 = ks_two_sample(&xs, &ys).unwrap();
        prop_assert!((0.0..=1.0).contains(&d2));
        prop_assert_eq!(ks_two_sample(&xs, &xs).unwrap(), 0.0);
        prop_assert_eq!(d2, ks_two_sample(&ys, &xs).unwrap());
    }

    #[test]
    fn summary_interval_is_four_standard_errors(xs in prop::collection::vec(-1e3f64..1e3, 2..100)) {
        let s = SummaryStats::from_samples(&xs).unwrap();
        prop_assert!(s.variance >= 0.0);
        prop_assert!((s.interval[1] - s.interval[0] - 8.0 * s.standard_error).abs() <= 1e-9 * (1.0 + s.standard_error));
        prop_assert!(s.covers(s.mean));
    }

    #[test]
    fn normal_cdf_is_symmetric(x in -30.0f64..30.0) {
        prop_assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-7);
        prop_assert!(normal_cdf(x) <= normal_cdf(x + 1e-3));
    }

    #[test]
    fn closed_form_variance_is_nonnegative(n in 1u32..=26, a in 0.0f64..=1.0) {
        let m = ClosedFormMoments::new(n, TieParameter::new(a).unwrap());
        prop_assert!(m.tau_sq >= -1e-9 * m.mean);
        prop_assert!(m.mean >= 1.0 - 1e-12);
    }
}
