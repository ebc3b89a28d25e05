//! One function per subcommand, each turning parsed flags into a report.

use std::f64::consts::FRAC_PI_4;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use partial_search_core::analysis::{
    build_table, cost_coefficient, large_k_guarantee, lower_bound_coefficient,
    max_feasible_epsilon, naive_quantum_coefficient, optimize_epsilon, reduction_total_queries,
};
use partial_search_core::classical::{
    exact_expected_probes, simulate_randomized, two_case_average,
};
use partial_search_core::partial_search::{step_stages, twelve_item_stages, Stage};
use partial_search_core::zalka::{
    check_lemma1, check_lemma2, check_lemma3, zalka_error_bound, HybridTrajectory,
};
use partial_search_core::{Backend, BlockConfig, PipelineScript, Simulator};

use crate::report::{Meta, Report, Table};
use crate::{
    BoundsArgs, ClassicalArgs, Command, DemoArgs, DemoKind, Failure, GroverArgs, OptimizeArgs,
    SimArgs, SimulateArgs, TableArgs,
};

/// Hybrid step margins may dip below zero by rounding only.
const MARGIN_SLACK: f64 = 1e-9;
const FIG1_TOL: f64 = 1e-12;

pub fn dispatch(command: &Command, command_line: String) -> Result<Report, Failure> {
    let meta = |name, seed, backend| Meta {
        command: name,
        command_line: command_line.clone(),
        seed,
        backend,
    };
    match command {
        Command::Simulate(a) => simulate(
            a,
            meta("simulate", Some(a.sim.seed), Some(backend_name(&a.sim))),
        ),
        Command::Grover(a) => grover(
            a,
            meta("grover", Some(a.sim.seed), Some(backend_name(&a.sim))),
        ),
        Command::Optimize(a) => optimize(a, meta("optimize", None, None)),
        Command::Table(a) => table(a, meta("table", None, None)),
        Command::Classical(a) => classical(a, meta("classical", Some(a.seed), None)),
        Command::Bounds(a) => bounds(a, meta("bounds", None, None)),
        Command::Demo(a) => demo(a, meta("demo", Some(a.seed), Some("dense"))),
    }
}

fn backend_name(sim: &SimArgs) -> &'static str {
    Backend::from(sim.backend).name()
}

fn input(msg: impl Into<String>) -> Failure {
    Failure::Input(msg.into())
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(input(format!("--tol must be positive, got {tol}")))
    }
}

/// The marked address: `--target` if given, else drawn from `--seed`.
fn pick_target(n: u64, target: Option<u64>, seed: u64) -> u64 {
    target.unwrap_or_else(|| {
        if n == 0 {
            0
        } else {
            ChaCha8Rng::seed_from_u64(seed).random_range(0..n)
        }
    })
}

fn simulator(sim: &SimArgs) -> Simulator {
    Simulator {
        backend: sim.backend.into(),
        dense_cap: sim.dense_cap,
        ..Simulator::default()
    }
}

fn block_table(probs: &[f64]) -> Table {
    let mut t = Table::new("blocks", &["block", "probability"]);
    for (i, &p) in probs.iter().enumerate() {
        t.push(vec![(i as u64).into(), p.into()]);
    }
    t
}

fn simulate(a: &SimulateArgs, meta: Meta) -> Result<Report, Failure> {
    check_tol(a.tol)?;
    let cfg = BlockConfig::new(a.n, a.k, pick_target(a.n, a.sim.target, a.sim.seed))?;
    if a.k < 2 {
        return Err(input(format!("partial search needs --k >= 2, got {}", a.k)));
    }
    let (epsilon, source) = match a.epsilon {
        Some(e) => (e, "flag"),
        None => (optimize_epsilon(a.k, a.tol)?.epsilon, "optimizer"),
    };
    let sim = Simulator {
        theta_mode: a.theta_mode.into(),
        ..simulator(&a.sim)
    };
    let plan = sim.plan(&cfg, epsilon)?;
    let run = sim.run_partial_search(&cfg, epsilon)?;
    let root_n = (a.n as f64).sqrt();

    let mut r = Report::new(meta);
    r.set("n", a.n);
    r.set("k", a.k);
    r.set("target", cfg.target());
    r.set("target_block", cfg.target_block());
    r.set("epsilon", epsilon);
    r.set("epsilon_source", source);
    r.set("theta_mode", format!("{:?}", sim.theta_mode).to_lowercase());
    r.set("l1", run.l1);
    r.set("l2", run.l2);
    r.set("queries", run.queries);
    r.set("queries_over_sqrt_n", run.queries as f64 / root_n);
    r.set("predicted_coeff", plan.breakdown.coefficient);
    r.set("success_prob", run.success_prob);
    r.set("target_prob", run.target_prob);
    r.set("predicted_block", run.predicted_block);
    r.set("correct", run.predicted_block == cfg.target_block());
    r.set("block_probs", run.block_probs.clone());
    r.tables.push(block_table(&run.block_probs));
    Ok(r)
}

fn grover(a: &GroverArgs, meta: Meta) -> Result<Report, Failure> {
    let cfg = BlockConfig::new(a.n, a.k, pick_target(a.n, a.sim.target, a.sim.seed))?;
    let root_n = (a.n as f64).sqrt();
    let steps = a
        .steps
        .unwrap_or_else(|| (FRAC_PI_4 * root_n).round() as u64);
    let run = simulator(&a.sim).run_full_grover(&cfg, steps)?;
    let closed_form = (((2 * steps + 1) as f64) * (1.0 / root_n).asin())
        .sin()
        .powi(2);

    let mut r = Report::new(meta);
    r.set("n", a.n);
    r.set("k", a.k);
    r.set("target", cfg.target());
    r.set("steps", steps);
    r.set("queries", run.queries);
    r.set("target_prob", run.target_prob);
    r.set("closed_form_target_prob", closed_form);
    r.set("success_prob", run.success_prob);
    r.set("block_probs", run.block_probs.clone());
    r.tables.push(block_table(&run.block_probs));
    Ok(r)
}

fn optimize(a: &OptimizeArgs, meta: Meta) -> Result<Report, Failure> {
    check_tol(a.tol)?;
    if a.points < 2 {
        return Err(input("--points must be at least 2"));
    }
    let opt = optimize_epsilon(a.k, a.tol)?;
    let b = &opt.breakdown;

    let mut r = Report::new(meta);
    r.set("k", a.k);
    r.set("epsilon_star", opt.epsilon);
    r.set("coefficient", opt.coefficient);
    r.set("theta", b.theta);
    r.set("alpha_t", b.alpha_t);
    r.set("theta1", b.theta1);
    r.set("theta2", b.theta2);
    r.set("savings", b.savings());
    r.set("max_feasible_epsilon", max_feasible_epsilon(a.k));
    r.set("lower_coeff", lower_bound_coefficient(a.k));

    let mut curve = Table::new("curve", &["epsilon", "coefficient", "feasible"]);
    let last = (a.points - 1) as f64;
    for i in 0..a.points {
        let eps = i as f64 / last;
        let c = cost_coefficient(eps, a.k)?;
        curve.push(vec![eps.into(), c.coefficient.into(), c.feasible().into()]);
    }
    r.tables.push(curve);
    Ok(r)
}

/// Comma-separated block counts; an empty list is allowed.
pub fn parse_k_list(s: &str) -> Result<Vec<u64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| input(format!("--k expects comma-separated integers, got {t:?}")))
        })
        .collect()
}

fn table(a: &TableArgs, meta: Meta) -> Result<Report, Failure> {
    let ks = parse_k_list(&a.k)?;
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(input(format!("every K must be at least 2, got {k}")));
    }
    let rows = build_table(&ks)?;
    let mut t = Table::new(
        "rows",
        &[
            "K",
            "epsilon_star",
            "upper_coeff",
            "lower_coeff",
            "naive_coeff",
        ],
    );
    for row in rows {
        t.push(vec![
            row.k.into(),
            row.epsilon_star.into(),
            row.upper_coeff.into(),
            row.lower_coeff.into(),
            row.naive_coeff.into(),
        ]);
    }
    let mut r = Report::new(meta);
    r.tables.push(t);
    Ok(r)
}

fn classical(a: &ClassicalArgs, meta: Meta) -> Result<Report, Failure> {
    let rep = simulate_randomized(a.n, a.k, a.trials, a.seed)?;
    let mean = rep.sample_mean.unwrap_or(f64::NAN);
    let se = rep.sample_std_err.unwrap_or(f64::NAN);

    let mut r = Report::new(meta);
    r.set("n", a.n);
    r.set("k", a.k);
    r.set("trials", rep.trials);
    r.set("expected_randomized", rep.expected_randomized);
    r.set("two_case_average", two_case_average(a.n, a.k));
    r.set("exact_expected", exact_expected_probes(a.n, a.k));
    r.set("deterministic", rep.deterministic);
    r.set("sample_mean", mean);
    r.set("sample_std_err", se);
    r.set("z_vs_expected", (mean - rep.expected_randomized) / se);
    r.set("wrong_answers", rep.wrong_answers);
    if rep.wrong_answers > 0 {
        return Err(Failure::Internal(format!(
            "{} of {} trials reported the wrong block",
            rep.wrong_answers, rep.trials
        )));
    }
    Ok(r)
}

fn bounds(a: &BoundsArgs, meta: Meta) -> Result<Report, Failure> {
    BlockConfig::new(a.n, a.k, 0)?;
    if a.k < 2 {
        return Err(input(format!("--k must be at least 2, got {}", a.k)));
    }
    if !(0.0..=1.0).contains(&a.err) {
        return Err(input(format!("--err must lie in [0, 1], got {}", a.err)));
    }
    if !a.hidden_const.is_finite() || a.hidden_const < 0.0 {
        return Err(input("--hidden-const must be a non-negative number"));
    }
    let opt = optimize_epsilon(a.k, partial_search_core::analysis::DEFAULT_TOL)?;
    let root_n = (a.n as f64).sqrt();
    let erring = zalka_error_bound(a.n, a.err, a.hidden_const);

    let mut r = Report::new(meta);
    r.set("n", a.n);
    r.set("k", a.k);
    r.set("upper_coeff", opt.coefficient);
    r.set("lower_coeff", lower_bound_coefficient(a.k));
    r.set("large_k_guarantee", large_k_guarantee(a.k));
    r.set("naive_coeff", naive_quantum_coefficient(a.k));
    r.set("full_search_queries", FRAC_PI_4 * root_n);
    r.set(
        "reduction_queries_upper",
        reduction_total_queries(opt.coefficient, a.k, a.n),
    );
    r.set(
        "reduction_queries_lower",
        reduction_total_queries(lower_bound_coefficient(a.k), a.k, a.n),
    );
    r.set("err", a.err);
    r.set("hidden_const", a.hidden_const);
    r.set("erring_search_bound", erring.queries);
    r.set("erring_search_in_regime", erring.in_regime);
    Ok(r)
}

fn histogram(stages: &[Stage], cfg: &BlockConfig) -> Table {
    let mut t = Table::new("histogram", &["stage", "block", "slot", "amplitude"]);
    let size = cfg.block_size();
    for stage in stages {
        for x in 0..cfg.n_addresses() {
            t.push(vec![
                stage.label.into(),
                (x / size).into(),
                (x % size).into(),
                stage.state.amplitude(x).re.into(),
            ]);
        }
    }
    t
}

fn demo(a: &DemoArgs, meta: Meta) -> Result<Report, Failure> {
    match a.which {
        DemoKind::Fig1 => demo_fig1(a, meta),
        DemoKind::Steps => demo_steps(a, meta),
        DemoKind::Lemmas => demo_lemmas(a, meta),
    }
}

fn demo_fig1(a: &DemoArgs, meta: Meta) -> Result<Report, Failure> {
    let target = a.target.unwrap_or(1);
    let cfg = BlockConfig::new(12, 3, target)?;
    let stages = twelve_item_stages(target)?;
    let last = &stages.last().expect("five stages").state;
    let queries = PipelineScript::two_query_example().queries();

    let big = 3.0 / 12f64.sqrt();
    let small = 1.0 / 12f64.sqrt();
    let deviation = (0..12)
        .map(|x| {
            let want = if x == target {
                big
            } else if cfg.block_of(x) == cfg.target_block() {
                small
            } else {
                0.0
            };
            (last.amplitude(x).re - want)
                .abs()
                .max(last.amplitude(x).im.abs())
        })
        .fold(0.0, f64::max);
    let probs = last.block_probabilities(&cfg)?;
    let success = probs[cfg.target_block() as usize];
    let target_prob = last.address_probability(target);

    let mut r = Report::new(meta);
    r.set("n", 12u64);
    r.set("k", 3u64);
    r.set("target", target);
    r.set("queries", queries);
    r.set("success_prob", success);
    r.set("target_prob", target_prob);
    r.set("max_deviation", deviation);
    r.tables.push(histogram(&stages, &cfg));
    let ok = deviation <= FIG1_TOL
        && queries == 2
        && (success - 1.0).abs() <= FIG1_TOL
        && (target_prob - 0.75).abs() <= FIG1_TOL;
    if !ok {
        return Err(Failure::Internal(format!(
            "twelve-item example ended off its expected state (deviation {deviation:e})"
        )));
    }
    Ok(r)
}

fn demo_steps(a: &DemoArgs, meta: Meta) -> Result<Report, Failure> {
    let n = a.n.unwrap_or(1 << 16);
    let k = a.k.unwrap_or(4);
    let cfg = BlockConfig::new(n, k, pick_target(n, a.target, a.seed))?;
    if k < 2 {
        return Err(input(format!("partial search needs --k >= 2, got {k}")));
    }
    let epsilon = match a.epsilon {
        Some(e) => e,
        None => optimize_epsilon(k, partial_search_core::analysis::DEFAULT_TOL)?.epsilon,
    };
    let stages = step_stages(&cfg, epsilon, a.dense_cap)?;
    let mut r = Report::new(meta);
    r.set("n", n);
    r.set("k", k);
    r.set("target", cfg.target());
    r.set("epsilon", epsilon);
    for stage in &stages {
        let p = stage.state.block_probabilities(&cfg)?;
        r.set(stage.label, p[cfg.target_block() as usize]);
    }
    r.tables.push(histogram(&stages, &cfg));
    Ok(r)
}

fn demo_lemmas(a: &DemoArgs, meta: Meta) -> Result<Report, Failure> {
    let n = a.n.unwrap_or(16);
    if a.k.is_some_and(|k| k != 1) {
        return Err(input(
            "the lemma demo runs full search; --k must be 1 or omitted",
        ));
    }
    let steps = a
        .epsilon
        .map(|_| Err(input("the lemma demo takes no --epsilon")))
        .transpose()?
        .unwrap_or_else(|| (FRAC_PI_4 * (n as f64).sqrt()).round() as u64);
    let script = PipelineScript::grover(steps);
    let mut per_target = Table::new(
        "targets",
        &["target", "min_margin", "end_to_end_angle", "budget"],
    );
    let mut worst = f64::INFINITY;
    for y in 0..n {
        let cfg = BlockConfig::new(n, 1, y)?;
        let traj = HybridTrajectory::build(&cfg, &script, a.dense_cap)?;
        let margin = check_lemma2(&traj)?
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        worst = worst.min(margin);
        per_target.push(vec![
            y.into(),
            margin.into(),
            traj.end_to_end_angle()?.into(),
            traj.budget().into(),
        ]);
    }
    let angles = check_lemma1(&BlockConfig::new(n, 1, 0)?, &script, a.dense_cap)?;
    let concavity = check_lemma3(n, a.samples, a.seed)?;

    let mut r = Report::new(meta);
    r.set("n", n);
    r.set("steps", steps);
    r.set("queries", script.queries());
    r.set("lemma2_min_margin", worst);
    r.set("lemma1_sum_of_angles", angles.sum_of_angles);
    r.set("lemma1_reference", angles.reference);
    r.set("lemma1_ratio", angles.ratio());
    r.set("lemma3_max_sum", concavity.max_sum);
    r.set("lemma3_bound", concavity.bound);
    r.set("lemma3_checked", concavity.distributions_checked);
    r.tables.push(per_target);
    if worst < -MARGIN_SLACK || !concavity.holds(MARGIN_SLACK) {
        return Err(Failure::Internal(format!(
            "lemma check failed: margin {worst:e}, concavity sum {} over bound {}",
            concavity.max_sum, concavity.bound
        )));
    }
    Ok(r)
}
