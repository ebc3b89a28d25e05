//! The three-step partial search algorithm and generic operator pipelines.
//!
//! 1. `l1` global amplification rounds from the uniform state.
//! 2. `l2` block-local amplification rounds, overshooting the target so
//!    that the target block's non-target amplitudes go negative.
//! 3. One query that moves the target into an ancilla, followed by an
//!    inversion about the mean of the remaining branch, which zeroes every
//!    address outside the target block.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use libm::{asin, round, sqrt};

use crate::analysis::{breakdown_at, theta1, theta2, theta_of_epsilon, CostBreakdown};
use crate::config::BlockConfig;
use crate::error::{Error, Result};
use crate::reduced::{Operator, ReducedState};
use crate::statevector::DenseState;
use crate::DEFAULT_DENSE_CAP;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    Dense,
    #[default]
    Reduced,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Dense => "dense",
            Backend::Reduced => "reduced",
        }
    }
}

/// How the post-Step-1 angle feeding `θ1` and `θ2` is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ThetaMode {
    /// `θ = (π/2)ε`, the large-`N` limit.
    #[default]
    Asymptotic,
    /// `θ = π/2 - (2 l1 + 1) arcsin(1/√N)`, the angle actually reached.
    Exact,
}

/// Iteration counts for one run, with the analysis they came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationPlan {
    pub l1: u64,
    pub l2: u64,
    pub breakdown: CostBreakdown,
}

impl IterationPlan {
    /// Oracle calls of the full pipeline.
    pub fn queries(&self) -> u64 {
        self.l1 + self.l2 + 1
    }
}

/// `l1 = round((π/4)(1 - ε)√N)` and `l2 = round((√(N/K)/2)(θ1 + θ2))`.
pub fn iteration_counts(n: u64, k: u64, epsilon: f64) -> Result<IterationPlan> {
    iteration_counts_with(n, k, epsilon, ThetaMode::Asymptotic)
}

pub fn iteration_counts_with(
    n: u64,
    k: u64,
    epsilon: f64,
    mode: ThetaMode,
) -> Result<IterationPlan> {
    let cfg = BlockConfig::new(n, k, 0)?;
    if k < 2 {
        return Err(Error::InvalidInstance(format!(
            "partial search needs K >= 2, got {k}"
        )));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidInstance(format!(
            "epsilon must lie in [0, 1], got {epsilon}"
        )));
    }
    let root_n = sqrt(cfg.n_f64());
    let l1 = round(FRAC_PI_4 * (1.0 - epsilon) * root_n) as u64;
    let theta = match mode {
        ThetaMode::Asymptotic => theta_of_epsilon(epsilon),
        ThetaMode::Exact => {
            let reached = (2 * l1 + 1) as f64 * asin(1.0 / root_n);
            (FRAC_PI_2 - reached).clamp(0.0, FRAC_PI_2)
        }
    };
    // Surface the specific violated bound rather than a bare flag.
    let t1 = theta1(theta, k)?;
    let t2 = theta2(theta, k)?;
    let l2 = round(sqrt(cfg.block_size_f64()) / 2.0 * (t1 + t2)) as u64;
    Ok(IterationPlan {
        l1,
        l2,
        breakdown: breakdown_at(epsilon, theta, k)?,
    })
}

/// An operator sequence. The transfer step may appear at most once, and
/// only as the final operator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PipelineScript {
    ops: Vec<Operator>,
}

impl PipelineScript {
    pub fn new(ops: Vec<Operator>) -> Result<Self> {
        if let Some(pos) = ops.iter().position(|&op| op == Operator::Step3) {
            if pos + 1 != ops.len() {
                return Err(Error::Script("step3 must be the last operator"));
            }
        }
        Ok(Self { ops })
    }

    /// `steps` rounds of oracle followed by global diffusion.
    pub fn grover(steps: u64) -> Self {
        let mut ops = Vec::with_capacity(2 * steps as usize);
        for _ in 0..steps {
            ops.push(Operator::Oracle);
            ops.push(Operator::GlobalDiffusion);
        }
        Self { ops }
    }

    /// The full three-step algorithm.
    pub fn partial_search(l1: u64, l2: u64) -> Self {
        let mut script = Self::grover(l1);
        script.ops.reserve(2 * l2 as usize + 1);
        for _ in 0..l2 {
            script.ops.push(Operator::Oracle);
            script.ops.push(Operator::BlockDiffusion);
        }
        script.ops.push(Operator::Step3);
        script
    }

    /// The two-query twelve-item example: flip, block diffusion, flip,
    /// global diffusion.
    pub fn two_query_example() -> Self {
        Self {
            ops: alloc::vec![
                Operator::Oracle,
                Operator::BlockDiffusion,
                Operator::Oracle,
                Operator::GlobalDiffusion,
            ],
        }
    }

    pub fn ops(&self) -> &[Operator] {
        &self.ops
    }

    pub fn queries(&self) -> u64 {
        self.ops.iter().map(|op| op.queries()).sum()
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The first `len` operators.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            ops: self.ops[..len].to_vec(),
        }
    }
}

/// Register contents under either backend.
#[derive(Debug, Clone, PartialEq)]
pub enum Register {
    Dense(DenseState),
    Reduced(ReducedState),
}

impl Register {
    pub fn apply(&mut self, op: Operator, cfg: &BlockConfig) -> Result<u64> {
        match self {
            Register::Reduced(s) => s.apply(op),
            Register::Dense(s) => {
                match op {
                    Operator::Oracle => s.invert_target(cfg)?,
                    Operator::GlobalDiffusion => s.global_diffusion()?,
                    Operator::BlockDiffusion => s.block_diffusion(cfg)?,
                    Operator::Step3 => {
                        if !s.has_ancilla() {
                            s.attach_ancilla()?;
                        }
                        s.step3_transfer(cfg)?
                    }
                }
                Ok(op.queries())
            }
        }
    }

    pub fn block_probabilities(&self, cfg: &BlockConfig) -> Result<Vec<f64>> {
        match self {
            Register::Dense(s) => s.block_probabilities(cfg),
            Register::Reduced(s) => Ok(s.block_probabilities()),
        }
    }

    pub fn target_probability(&self, cfg: &BlockConfig) -> f64 {
        match self {
            Register::Dense(s) => s.address_probability(cfg.target()),
            Register::Reduced(s) => s.target_probability(),
        }
    }

    /// Dense view of the register, lifting reduced states.
    pub fn to_dense(&self, cap: u64) -> Result<DenseState> {
        match self {
            Register::Dense(s) => Ok(s.clone()),
            Register::Reduced(s) => s.lift_to_dense(cap),
        }
    }

    pub fn backend(&self) -> Backend {
        match self {
            Register::Dense(_) => Backend::Dense,
            Register::Reduced(_) => Backend::Reduced,
        }
    }
}

/// Final register of a pipeline together with its query count.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub config: BlockConfig,
    pub register: Register,
    pub queries: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: BlockConfig,
    pub backend: Backend,
    pub queries: u64,
    pub block_probs: Vec<f64>,
    /// Probability of measuring an address in the target block.
    pub success_prob: f64,
    /// Probability of measuring the target address itself.
    pub target_prob: f64,
    /// Most likely block; ties resolve to the lowest index.
    pub predicted_block: u64,
    pub epsilon: Option<f64>,
    pub l1: Option<u64>,
    pub l2: Option<u64>,
}

impl RunReport {
    fn from_execution(exec: &Execution) -> Result<Self> {
        let cfg = exec.config;
        let block_probs = exec.register.block_probabilities(&cfg)?;
        let predicted_block = block_probs
            .iter()
            .enumerate()
            .fold((0usize, f64::NEG_INFINITY), |best, (i, &p)| {
                if p > best.1 {
                    (i, p)
                } else {
                    best
                }
            })
            .0 as u64;
        Ok(Self {
            config: cfg,
            backend: exec.register.backend(),
            queries: exec.queries,
            success_prob: block_probs[cfg.target_block() as usize],
            target_prob: exec.register.target_probability(&cfg),
            block_probs,
            predicted_block,
            epsilon: None,
            l1: None,
            l2: None,
        })
    }
}

/// Runs pipelines on a chosen backend.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Simulator {
    pub backend: Backend,
    /// Largest `N` the dense backend will allocate.
    pub dense_cap: u64,
    pub theta_mode: ThetaMode,
}

impl Default for Simulator {
    fn default() -> Self {
        Self {
            backend: Backend::Reduced,
            dense_cap: DEFAULT_DENSE_CAP,
            theta_mode: ThetaMode::Asymptotic,
        }
    }
}

impl Simulator {
    pub fn new(backend: Backend) -> Self {
        Self {
            backend,
            ..Self::default()
        }
    }

    pub fn initial_register(&self, cfg: &BlockConfig) -> Result<Register> {
        Ok(match self.backend {
            Backend::Dense => Register::Dense(DenseState::uniform_capped(
                cfg.n_addresses(),
                false,
                self.dense_cap,
            )?),
            Backend::Reduced => Register::Reduced(ReducedState::new(*cfg)),
        })
    }

    /// Applies `script` to the uniform state.
    pub fn execute(&self, cfg: &BlockConfig, script: &PipelineScript) -> Result<Execution> {
        let mut register = self.initial_register(cfg)?;
        let mut queries = 0;
        for &op in script.ops() {
            queries += register.apply(op, cfg)?;
        }
        Ok(Execution {
            config: *cfg,
            register,
            queries,
        })
    }

    pub fn run_script(&self, cfg: &BlockConfig, script: &PipelineScript) -> Result<RunReport> {
        RunReport::from_execution(&self.execute(cfg, script)?)
    }

    /// `steps` rounds of plain amplitude amplification.
    pub fn run_full_grover(&self, cfg: &BlockConfig, steps: u64) -> Result<RunReport> {
        self.run_script(cfg, &PipelineScript::grover(steps))
    }

    pub fn plan(&self, cfg: &BlockConfig, epsilon: f64) -> Result<IterationPlan> {
        iteration_counts_with(cfg.n_addresses(), cfg.n_blocks(), epsilon, self.theta_mode)
    }

    /// The three-step algorithm at parameter `epsilon`.
    pub fn run_partial_search(&self, cfg: &BlockConfig, epsilon: f64) -> Result<RunReport> {
        let plan = self.plan(cfg, epsilon)?;
        let script = PipelineScript::partial_search(plan.l1, plan.l2);
        let mut report = self.run_script(cfg, &script)?;
        report.epsilon = Some(epsilon);
        report.l1 = Some(plan.l1);
        report.l2 = Some(plan.l2);
        Ok(report)
    }
}

/// One labelled snapshot of a demo pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub label: &'static str,
    pub state: DenseState,
}

/// Dense snapshots `A` through `E` of the twelve-item, three-block
/// example with the given target.
pub fn twelve_item_stages(target: u64) -> Result<Vec<Stage>> {
    let cfg = BlockConfig::new(12, 3, target)?;
    let mut reg = Register::Dense(DenseState::uniform(12, false)?);
    let labels = ["A", "B", "C", "D", "E"];
    let mut stages = Vec::with_capacity(labels.len());
    stages.push(Stage {
        label: labels[0],
        state: reg.to_dense(DEFAULT_DENSE_CAP)?,
    });
    for (&op, &label) in PipelineScript::two_query_example()
        .ops()
        .iter()
        .zip(&labels[1..])
    {
        reg.apply(op, &cfg)?;
        stages.push(Stage {
            label,
            state: reg.to_dense(DEFAULT_DENSE_CAP)?,
        });
    }
    Ok(stages)
}

/// Dense snapshots of the full algorithm: after Step 1, after Step 2 and
/// after Step 3.
pub fn step_stages(cfg: &BlockConfig, epsilon: f64, cap: u64) -> Result<Vec<Stage>> {
    let sim = Simulator {
        backend: Backend::Reduced,
        dense_cap: cap,
        theta_mode: ThetaMode::Asymptotic,
    };
    let plan = sim.plan(cfg, epsilon)?;
    let mut reg = Register::Reduced(ReducedState::new(*cfg));
    let mut stages = Vec::with_capacity(3);
    for _ in 0..plan.l1 {
        reg.apply(Operator::Oracle, cfg)?;
        reg.apply(Operator::GlobalDiffusion, cfg)?;
    }
    stages.push(Stage {
        label: "after_step1",
        state: reg.to_dense(cap)?,
    });
    for _ in 0..plan.l2 {
        reg.apply(Operator::Oracle, cfg)?;
        reg.apply(Operator::BlockDiffusion, cfg)?;
    }
    stages.push(Stage {
        label: "after_step2",
        state: reg.to_dense(cap)?,
    });
    reg.apply(Operator::Step3, cfg)?;
    stages.push(Stage {
        label: "after_step3",
        state: reg.to_dense(cap)?,
    });
    Ok(stages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{cost_coefficient, optimize_epsilon, DEFAULT_TOL};

    #[test]
    fn epsilon_zero_is_plain_search() {
        let n = 1u64 << 16;
        let plan = iteration_counts(n, 4, 0.0).unwrap();
        assert_eq!(plan.l2, 0);
        assert_eq!(plan.l1, (FRAC_PI_4 * 256.0).round() as u64);
        assert_eq!(plan.breakdown.theta1, Some(0.0));
        assert_eq!(plan.breakdown.theta2, Some(0.0));
    }

    #[test]
    fn epsilon_one_two_blocks() {
        let plan = iteration_counts(1 << 16, 2, 1.0).unwrap();
        assert_eq!(plan.l1, 0);
        assert!((plan.breakdown.theta1.unwrap() - FRAC_PI_2).abs() < 1e-7);
        assert_eq!(plan.breakdown.theta2, Some(0.0));
        assert_eq!(plan.l2, 142);
    }

    #[test]
    fn eight_blocks_at_inverse_root() {
        let n = 1u64 << 16;
        let eps = 1.0 / 8f64.sqrt();
        let plan = iteration_counts(n, 8, eps).unwrap();
        let coeff = plan.queries() as f64 / 256.0;
        assert!((coeff - 0.670).abs() < 0.01, "{coeff}");
        let analytic = cost_coefficient(eps, 8).unwrap().coefficient.unwrap();
        assert!((coeff - analytic).abs() < 0.01);
    }

    #[test]
    fn infeasible_plan_names_the_bound() {
        match iteration_counts(1 << 10, 16, 1.0) {
            Err(Error::Infeasible(msg)) => assert!(msg.contains("2/√K")),
            other => panic!("{other:?}"),
        }
        assert!(iteration_counts(1 << 10, 1, 0.3).is_err());
        assert!(iteration_counts(1 << 10, 3, 0.3).is_err());
    }

    #[test]
    fn exact_theta_mode_is_close_to_asymptotic() {
        let n = 1u64 << 20;
        let asym = iteration_counts_with(n, 4, 0.6, ThetaMode::Asymptotic).unwrap();
        let exact = iteration_counts_with(n, 4, 0.6, ThetaMode::Exact).unwrap();
        assert_eq!(asym.l1, exact.l1);
        assert!((asym.breakdown.theta - exact.breakdown.theta).abs() < 1e-2);
        assert!(asym.l2.abs_diff(exact.l2) <= 3);
    }

    #[test]
    fn script_validation() {
        assert!(PipelineScript::new(alloc::vec![Operator::Step3, Operator::Oracle]).is_err());
        assert!(PipelineScript::new(alloc::vec![Operator::Oracle, Operator::Step3]).is_ok());
        assert!(PipelineScript::new(alloc::vec![Operator::Step3, Operator::Step3]).is_err());
        let s = PipelineScript::partial_search(3, 2);
        assert_eq!(s.queries(), 6);
        assert_eq!(s.len(), 11);
    }

    #[test]
    fn twelve_item_script() {
        let cfg = BlockConfig::new(12, 3, 5).unwrap();
        for backend in [Backend::Dense, Backend::Reduced] {
            let r = Simulator::new(backend)
                .run_script(&cfg, &PipelineScript::two_query_example())
                .unwrap();
            assert_eq!(r.queries, 2);
            assert!((r.success_prob - 1.0).abs() < 1e-12);
            assert!((r.target_prob - 0.75).abs() < 1e-12);
            assert_eq!(r.predicted_block, 1);
        }
    }

    #[test]
    fn trivial_scripts() {
        let cfg = BlockConfig::new(16, 4, 3).unwrap();
        let sim = Simulator::new(Backend::Dense);
        let r = sim.run_script(&cfg, &PipelineScript::default()).unwrap();
        assert_eq!(r.queries, 0);
        assert!((r.target_prob - 1.0 / 16.0).abs() < 1e-15);
        let twice = PipelineScript::new(alloc::vec![Operator::Oracle, Operator::Oracle]).unwrap();
        let exec = sim.execute(&cfg, &twice).unwrap();
        assert_eq!(exec.queries, 2);
        assert_eq!(
            exec.register.to_dense(1 << 24).unwrap(),
            DenseState::uniform(16, false).unwrap()
        );
    }

    #[test]
    fn single_block_rejected() {
        let cfg = BlockConfig::new(64, 1, 3).unwrap();
        assert!(Simulator::default().run_partial_search(&cfg, 0.5).is_err());
    }

    #[test]
    fn grover_examples() {
        let cfg = BlockConfig::new(1024, 2, 100).unwrap();
        let sim = Simulator::default();
        let p0 = sim.run_full_grover(&cfg, 0).unwrap().target_prob;
        assert!((p0 - 1.0 / 1024.0).abs() < 1e-15);
        let p25 = sim.run_full_grover(&cfg, 25).unwrap().target_prob;
        let p38 = sim.run_full_grover(&cfg, 38).unwrap().target_prob;
        assert!(p25 >= 0.999);
        assert!(p38 < p25);
    }

    #[test]
    fn four_blocks_at_optimum() {
        let cfg = BlockConfig::new(1 << 16, 4, 40_000).unwrap();
        let opt = optimize_epsilon(4, DEFAULT_TOL).unwrap();
        let r = Simulator::default()
            .run_partial_search(&cfg, opt.epsilon)
            .unwrap();
        assert!(r.success_prob >= 0.95);
        assert!(r.queries as f64 <= 0.625 * 256.0);
        assert_eq!(r.queries, r.l1.unwrap() + r.l2.unwrap() + 1);
        assert_eq!(r.predicted_block, cfg.target_block());
    }

    #[test]
    fn backends_agree_on_two_blocks() {
        let cfg = BlockConfig::new(4096, 2, 3000).unwrap();
        let dense = Simulator::new(Backend::Dense)
            .run_partial_search(&cfg, 1.0)
            .unwrap();
        let reduced = Simulator::new(Backend::Reduced)
            .run_partial_search(&cfg, 1.0)
            .unwrap();
        assert_eq!(dense.queries, reduced.queries);
        for (a, b) in dense.block_probs.iter().zip(&reduced.block_probs) {
            assert!((a - b).abs() < 1e-10);
        }
        assert!((dense.success_prob - reduced.success_prob).abs() < 1e-10);
    }

    #[test]
    fn stage_snapshots() {
        let stages = twelve_item_stages(1).unwrap();
        assert_eq!(stages.len(), 5);
        assert_eq!(stages[4].label, "E");
        let cfg = BlockConfig::new(64, 4, 9).unwrap();
        let s = step_stages(&cfg, 0.6, 1 << 24).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[2].state.has_ancilla());
        // after Step 2 the target block's other addresses are negative
        assert!(s[1].state.amplitude(8).re < 0.0);
    }
}
