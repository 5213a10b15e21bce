use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use rpd_core::inference::{wilson_interval, Z95};
use rpd_core::payoff_m1::{payoff_m1, payoff_m1_limit};
use rpd_core::payoff_m2::payoff_m2;
use rpd_core::simulate::estimate_payoff;
use rpd_core::tournament::run_tournament;
use rpd_core::{Memory1Strategy, Memory2Strategy, StageGame, Strategy as Played};

fn prob() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn interior() -> impl Strategy<Value = f64> {
    0.05..=0.95f64
}

fn m1() -> impl Strategy<Value = Memory1Strategy> {
    prop::array::uniform5(prob()).prop_map(|e| Memory1Strategy::from_entries(e).unwrap())
}

fn m1_interior() -> impl Strategy<Value = Memory1Strategy> {
    prop::array::uniform5(interior()).prop_map(|e| Memory1Strategy::from_entries(e).unwrap())
}

fn m2() -> impl Strategy<Value = Memory2Strategy> {
    prop::collection::vec(prob(), 21).prop_map(|e| Memory2Strategy::from_entries(&e).unwrap())
}

fn game() -> impl Strategy<Value = StageGame> {
    prop::array::uniform4(-5.0..10.0f64).prop_map(StageGame::from_array)
}

fn stop() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), Just(1e-10), 1e-3..=1.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lifting_preserves_payoffs(q in m1(), p in m1(), g in game(), w in stop()) {
        let a = payoff_m1(&q, &p, &g, w).unwrap();
        let b = payoff_m2(&q.lift(), &p.lift(), &g, w).unwrap();
        let scale = 1.0 + g.max().abs().max(g.min().abs());
        prop_assert!((a - b).abs() <= 1e-8 * scale, "{a} vs {b}");
    }

    #[test]
    fn payoffs_lie_within_stage_payoffs(q in m2(), p in m2(), g in game(), w in stop()) {
        let v = payoff_m2(&q, &p, &g, w).unwrap();
        prop_assert!(v >= g.min() - 1e-9 && v <= g.max() + 1e-9);
    }

    #[test]
    fn memory1_payoffs_lie_within_stage_payoffs(q in m1(), p in m1(), g in game(), w in stop()) {
        let v = payoff_m1(&q, &p, &g, w).unwrap();
        prop_assert!(v >= g.min() - 1e-9 && v <= g.max() + 1e-9);
        prop_assert!(payoff_m1_limit(&q, &p, &g) >= g.min() - 1e-9);
    }

    #[test]
    fn mutual_cooperation_is_a_fixed_point(
        e in prop::array::uniform3(prob()),
        f in prop::array::uniform3(prob()),
        g in game(),
        w in stop(),
    ) {
        let q = Memory1Strategy::from_entries([1.0, 1.0, e[0], e[1], e[2]]).unwrap();
        let p = Memory1Strategy::from_entries([1.0, 1.0, f[0], f[1], f[2]]).unwrap();
        prop_assert_eq!(payoff_m1(&q, &p, &g, w).unwrap(), g.a_ll);
        prop_assert_eq!(payoff_m2(&q.lift(), &p.lift(), &g, w).unwrap(), g.a_ll);
    }

    #[test]
    fn small_w_approaches_the_limit(q in m1_interior(), p in m1_interior()) {
        let g = StageGame::standard();
        let v = payoff_m1(&q, &p, &g, 1e-8).unwrap();
        let lim = payoff_m1_limit(&q, &p, &g);
        prop_assert!((v - lim).abs() < 1e-5, "{v} vs {lim}");
    }

    #[test]
    fn wilson_mirror_symmetry(n in 1u32..500, frac in 0.0..=1.0f64) {
        let l = ((n as f64) * frac).floor() as u32;
        let a = wilson_interval::<f64>(l, n, Z95).unwrap();
        let b = wilson_interval::<f64>(n - l, n, Z95).unwrap();
        prop_assert!((a.lower - (1.0 - b.upper)).abs() < 1e-12);
        prop_assert!((a.upper - (1.0 - b.lower)).abs() < 1e-12);
        prop_assert!(a.lower <= a.point && a.point <= a.upper);
    }

    #[test]
    fn strategy_json_round_trip(e in prop::collection::vec(prob(), 21), memory1 in any::<bool>()) {
        let s: Played = if memory1 {
            Memory1Strategy::from_entries([e[0], e[1], e[2], e[3], e[4]]).unwrap().into()
        } else {
            Memory2Strategy::from_entries(&e).unwrap().into()
        };
        let back = Played::from_json(&s.to_json()).unwrap();
        prop_assert_eq!(back, s);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identical_roster_gives_constant_matrix(s in m1(), n in 1usize..5, w in stop()) {
        let g = StageGame::standard();
        let roster: Vec<(String, Played)> = (0..n).map(|i| (i.to_string(), s.into())).collect();
        let t = run_tournament(&roster, &g, w, true).unwrap();
        let v = t.matrix[0][0];
        prop_assert!(t.matrix.iter().flatten().all(|&x| x == v));
        prop_assert!(t.ranks.iter().all(|&r| r == 1));
    }

    #[test]
    fn permuting_the_roster_permutes_the_result(
        ss in prop::collection::vec(m1(), 2..6),
        seed in any::<u64>(),
        w in stop(),
    ) {
        let g = StageGame::standard();
        let roster: Vec<(String, Played)> = ss.iter().enumerate().map(|(i, s)| (i.to_string(), (*s).into())).collect();
        let mut perm: Vec<usize> = (0..roster.len()).collect();
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
        let shuffled: Vec<(String, Played)> = perm.iter().map(|&i| roster[i].clone()).collect();
        let a = run_tournament(&roster, &g, w, true).unwrap();
        let b = run_tournament(&shuffled, &g, w, true).unwrap();
        for (bi, &ai) in perm.iter().enumerate() {
            prop_assert_eq!(b.ranks[bi], a.ranks[ai]);
            for (bj, &aj) in perm.iter().enumerate() {
                prop_assert_eq!(b.matrix[bi][bj], a.matrix[ai][aj]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn simulation_agrees_with_exact_payoff(q in m1(), p in m1(), w in 0.1..=0.5f64) {
        let g = StageGame::standard();
        let exact = payoff_m1(&q, &p, &g, w).unwrap();
        let (mean, se) = estimate_payoff(&Played::M1(q), &Played::M1(p), &g, w, 20_000, 7);
        prop_assert!((mean - exact).abs() < 5.0 * se + 1e-3, "{mean} ± {se} vs {exact}");
    }
}

#[test]
fn deterministic_pairs_at_tiny_w_match_the_limit() {
    let g = StageGame::standard();
    for i in 0..32 {
        for j in 0..32 {
            let q = rpd_core::classify::deterministic_m1::<f64>(i);
            let p = rpd_core::classify::deterministic_m1::<f64>(j);
            let v = payoff_m1(&q, &p, &g, 1e-10).unwrap();
            assert_abs_diff_eq!(v, payoff_m1_limit(&q, &p, &g), epsilon = 1e-8);
        }
    }
}

#[test]
fn single_precision_tracks_double() {
    let g = StageGame::standard();
    let q = Memory1Strategy::from_f64([0.9, 0.8, 0.3, 0.6, 0.2]).unwrap();
    let p = Memory1Strategy::from_f64([0.4, 0.7, 0.1, 0.9, 0.5]).unwrap();
    let g32 = rpd_core::game::StageGame::<f32>::standard();
    for w in [1.0, 0.3, 0.01] {
        let a = payoff_m1(&q, &p, &g, w).unwrap();
        let b = payoff_m1(&q.cast::<f32>(), &p.cast::<f32>(), &g32, w as f32).unwrap();
        assert_abs_diff_eq!(a, b as f64, epsilon = 1e-4);
    }
}
