use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use partial_search_core::analysis::{
    cost_coefficient, large_k_guarantee, max_feasible_epsilon, naive_quantum_coefficient,
    optimize_epsilon, DEFAULT_TOL,
};
use partial_search_core::{Backend, BlockConfig, DenseState, Operator, ReducedState, Simulator};
use proptest::prelude::*;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

prop_compose! {
    fn instance()(exp in 2u32..8, pick in any::<prop::sample::Index>(), t in any::<prop::sample::Index>())
        -> BlockConfig {
        let n = 1u64 << exp;
        let ks = divisors(n);
        let k = ks[pick.index(ks.len())];
        BlockConfig::new(n, k, t.index(n as usize) as u64).unwrap()
    }
}

prop_compose! {
    fn state_for(n: u64)(raw in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n as usize)) -> DenseState {
        let norm = raw.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt().max(1e-3);
        DenseState::from_amplitudes(
            raw.iter().map(|&(a, b)| Complex64::new(a / norm, b / norm)).collect(),
            false,
        ).unwrap_or_else(|_| DenseState::uniform(n, false).unwrap())
    }
}

fn instance_and_state() -> impl Strategy<Value = (BlockConfig, DenseState)> {
    instance().prop_flat_map(|cfg| (Just(cfg), state_for(cfg.n_addresses())))
}

proptest! {
    #[test]
    fn reflections_are_unitary_involutions((cfg, s) in instance_and_state()) {
        let mut x = s.clone();
        x.invert_target(&cfg).unwrap();
        prop_assert!((x.norm_sqr() - 1.0).abs() < 1e-12);
        x.invert_target(&cfg).unwrap();
        prop_assert!(x.max_abs_diff(&s).unwrap() < 1e-12);

        let mut x = s.clone();
        x.global_diffusion().unwrap();
        prop_assert!((x.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
        x.global_diffusion().unwrap();
        prop_assert!(x.max_abs_diff(&s).unwrap() < 1e-12);

        let mut x = s.clone();
        x.block_diffusion(&cfg).unwrap();
        prop_assert!((x.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
        x.block_diffusion(&cfg).unwrap();
        prop_assert!(x.max_abs_diff(&s).unwrap() < 1e-12);
    }

    #[test]
    fn transfer_step_is_unitary((cfg, s) in instance_and_state()) {
        let mut x = s.clone();
        x.attach_ancilla().unwrap();
        x.step3_transfer(&cfg).unwrap();
        prop_assert!((x.norm_sqr() - s.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn single_block_diffusion_equals_global((cfg, s) in instance_and_state()) {
        let one = BlockConfig::new(cfg.n_addresses(), 1, 0).unwrap();
        let mut a = s.clone();
        let mut b = s;
        a.block_diffusion(&one).unwrap();
        b.global_diffusion().unwrap();
        prop_assert!(a.max_abs_diff(&b).unwrap() <= 1e-15);
    }

    #[test]
    fn reduced_norm_is_preserved(cfg in instance(), ops in prop::collection::vec(0usize..3, 0..200)) {
        let mut s = ReducedState::new(cfg);
        for o in ops {
            let op = [Operator::Oracle, Operator::GlobalDiffusion, Operator::BlockDiffusion][o];
            s.apply(op).unwrap();
        }
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        s.apply(Operator::Step3).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn success_is_invariant_within_block(exp in 6u32..12, kexp in 1u32..4, t in any::<prop::sample::Index>(), u in any::<prop::sample::Index>()) {
        let n = 1u64 << exp;
        let k = 1u64 << kexp;
        let block = n / k;
        let t = t.index(n as usize) as u64;
        let mate = (t / block) * block + u.index(block as usize) as u64;
        let sim = Simulator::new(Backend::Dense);
        let a = sim.run_partial_search(&BlockConfig::new(n, k, t).unwrap(), 0.5).unwrap();
        let b = sim.run_partial_search(&BlockConfig::new(n, k, mate).unwrap(), 0.5).unwrap();
        for (p, q) in a.block_probs.iter().zip(&b.block_probs) {
            prop_assert!((p - q).abs() < 1e-12);
        }
        prop_assert!((a.block_probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cost_is_finite_where_feasible(k in 2u64..80, frac in 0.0..=1.0f64) {
        let eps = frac * max_feasible_epsilon(k);
        let b = cost_coefficient(eps, k).unwrap();
        let c = b.coefficient.unwrap();
        prop_assert!(c.is_finite());
        prop_assert!(b.alpha_t > 0.0 && b.alpha_t <= 1.0);
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&b.theta1.unwrap()));
        prop_assert!((0.0..=std::f64::consts::FRAC_PI_2).contains(&b.theta2.unwrap()));
    }
}

#[test]
fn grover_stays_in_two_dimensional_span() {
    let cfg = BlockConfig::new(256, 4, 99).unwrap();
    let mut s = DenseState::uniform(256, false).unwrap();
    for _ in 0..30 {
        s.invert_target(&cfg).unwrap();
        s.global_diffusion().unwrap();
        assert_eq!(s.max_imag(), 0.0);
        let rest = s.amplitude(0).re;
        for x in (0..256).filter(|&x| x != 99) {
            assert!((s.amplitude(x).re - rest).abs() < 1e-12);
        }
    }
}

#[test]
fn grover_drifts_past_the_target() {
    let cfg = BlockConfig::new(1024, 2, 321).unwrap();
    let best = (FRAC_PI_4 * 32.0).round() as u64;
    let sim = Simulator::new(Backend::Dense);
    let at_best = sim.run_full_grover(&cfg, best).unwrap().target_prob;
    let beyond = sim.run_full_grover(&cfg, best * 3 / 2).unwrap().target_prob;
    assert!(at_best > beyond);
}

#[test]
fn cost_at_zero_is_full_search() {
    for k in 2..=64 {
        assert_eq!(
            cost_coefficient(0.0, k).unwrap().coefficient,
            Some(FRAC_PI_4)
        );
        let b = cost_coefficient(0.77 * max_feasible_epsilon(k), 2);
        assert_eq!(b.unwrap().theta2, Some(0.0));
    }
}

#[test]
fn feasible_set_is_an_interval_from_zero() {
    for k in 2..=64u64 {
        let edge = max_feasible_epsilon(k);
        let mut last_feasible = true;
        for i in 0..=2000 {
            let eps = i as f64 / 2000.0;
            let feasible = cost_coefficient(eps, k).unwrap().feasible();
            assert!(!(feasible && !last_feasible), "K={k} hole at {eps}");
            assert_eq!(feasible, eps <= edge + 1e-12, "K={k} eps={eps}");
            last_feasible = feasible;
        }
    }
}

/// Independent oracle: plain scan of the coefficient on a fine grid.
fn brute_force_min(k: u64, steps: usize) -> (f64, f64) {
    (0..=steps)
        .map(|i| i as f64 / steps as f64)
        .filter_map(|e| cost_coefficient(e, k).unwrap().coefficient.map(|c| (e, c)))
        .fold((0.0, f64::INFINITY), |best, cur| {
            if cur.1 < best.1 {
                cur
            } else {
                best
            }
        })
}

#[test]
fn optimizer_beats_fine_grid() {
    for k in [2, 3, 4, 5, 6, 8, 13, 32, 64] {
        let opt = optimize_epsilon(k, DEFAULT_TOL).unwrap();
        let (_, grid_min) = brute_force_min(k, 100_000);
        assert!(opt.coefficient <= grid_min + 1e-9, "K={k}");
        assert!(opt.coefficient < FRAC_PI_4);
        assert!(opt.epsilon <= max_feasible_epsilon(k));
    }
}

#[test]
fn optimum_grows_with_k() {
    let mut last = 0.0;
    for k in 2..=64 {
        let c = optimize_epsilon(k, DEFAULT_TOL).unwrap().coefficient;
        assert!(c >= last, "K={k}");
        last = c;
    }
}

#[test]
fn large_k_bound_holds() {
    for k in 16..=64 {
        let c = optimize_epsilon(k, DEFAULT_TOL).unwrap().coefficient;
        assert!(c <= large_k_guarantee(k) + 0.005, "K={k}");
    }
}

#[test]
fn naive_search_is_worse_than_optimum() {
    for k in [3, 4, 5, 8, 32] {
        let naive = naive_quantum_coefficient(k);
        assert!(naive > optimize_epsilon(k, DEFAULT_TOL).unwrap().coefficient);
        assert!(naive < FRAC_PI_4);
        assert!(naive > partial_search_core::analysis::lower_bound_coefficient(k));
    }
}

#[test]
fn reduced_grover_rotation() {
    let cfg = BlockConfig::new(4096, 8, 4000).unwrap();
    let beta = (1.0f64 / 64.0).asin();
    let mut s = ReducedState::new(cfg);
    for l in 1..=50u64 {
        s.apply(Operator::Oracle).unwrap();
        s.apply(Operator::GlobalDiffusion).unwrap();
        assert!((s.components().0 - ((2 * l + 1) as f64 * beta).sin()).abs() < 1e-9);
    }
}

#[test]
fn success_envelope_sweep() {
    for exp in [16u32, 18, 20] {
        let n = 1u64 << exp;
        let root = (n as f64).sqrt();
        for k in [2u64, 4, 8] {
            let opt = optimize_epsilon(k, DEFAULT_TOL).unwrap();
            let cfg = BlockConfig::new(n, k, n / 3).unwrap();
            let r = Simulator::default()
                .run_partial_search(&cfg, opt.epsilon)
                .unwrap();
            assert!(r.success_prob >= 1.0 - 10.0 / root, "N={n} K={k}");
            assert_eq!(r.queries, r.l1.unwrap() + r.l2.unwrap() + 1);
            if exp == 20 {
                assert!((r.queries as f64 / root - opt.coefficient).abs() < 0.01);
            }
        }
    }
}
