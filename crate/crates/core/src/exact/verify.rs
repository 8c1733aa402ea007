//! Structural checks on the exact chains and statistical comparisons with
//! the samplers.

use rand::Rng;
use serde::Serialize;

use super::{
    distance_trace, iso_partition, lift_distribution, project, project_distribution, transition_matrix, worst_case_trace,
    Distribution, StateSpace, TransitionMatrix,
};
use crate::chains::{chain_rng, replica_seed, ChainKind, Walker};
use crate::exact::check_lumpability;
use crate::Result;

pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Outcome of a chi-square goodness-of-fit test with a three-sigma bound.
///
/// The statistic `X² = Σ (O - E)² / E` over cells with positive expected
/// count has mean `df` and standard deviation `sqrt(2 df)` under the null,
/// so the test passes when `X² <= df + 3 sqrt(2 df)` and no observation
/// falls in a cell of probability zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultinomialTest {
    pub statistic: f64,
    pub df: usize,
    pub bound: f64,
    pub impossible_hits: u64,
    pub passed: bool,
}

pub fn multinomial_test(observed: &[u64], probabilities: &[f64]) -> MultinomialTest {
    assert_eq!(observed.len(), probabilities.len(), "cell count");
    let total: u64 = observed.iter().sum();
    let mut statistic = 0.0;
    let mut cells = 0usize;
    let mut impossible_hits = 0;
    for (&o, &p) in observed.iter().zip(probabilities) {
        if p <= 1e-15 {
            impossible_hits += o;
            continue;
        }
        let e = p * total as f64;
        statistic += (o as f64 - e).powi(2) / e;
        cells += 1;
    }
    let df = cells.saturating_sub(1);
    let bound = df as f64 + 3.0 * (2.0 * df as f64).sqrt();
    MultinomialTest {
        statistic,
        df,
        bound,
        impossible_hits,
        passed: impossible_hits == 0 && statistic <= bound,
    }
}

/// Counts of the states reached by `trials` independent single steps of
/// the sampler from state `start`.
pub fn empirical_step_counts(space: &StateSpace, chain: ChainKind, start: usize, trials: u64, seed: u64) -> Result<Vec<u64>> {
    let walker = Walker::new(space.state(start).clone(), space.kind())?;
    let mut rng = chain_rng(seed);
    let mut counts = vec![0u64; space.len()];
    for _ in 0..trials {
        let mut w = walker.clone();
        w.step(chain, &mut rng);
        let idx = space.index_of(w.state()).ok_or_else(|| {
            crate::Error::VerificationFailed(format!("sampler left the state space at {:?}", w.state()))
        })?;
        counts[idx] += 1;
    }
    Ok(counts)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: &'static str, deviation: f64, tolerance: f64) -> Self {
        Check {
            name,
            passed: deviation <= tolerance,
            deviation,
            tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub chain: ChainKind,
    pub states: usize,
    pub classes: usize,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Steps over which the projected chain must never be farther from
    /// stationarity than the original chain.
    pub trace_steps: usize,
    /// Steps over which lifted and projected distance traces must agree.
    pub identity_steps: usize,
    /// Random distributions used for the commutation identities.
    pub random_trials: usize,
    /// Sampler steps per start state in the Monte Carlo comparison; 0 skips it.
    pub monte_carlo_trials: u64,
    /// The Monte Carlo comparison only runs on spaces up to this size.
    pub monte_carlo_max_states: usize,
    pub seed: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            trace_steps: 200,
            identity_steps: 50,
            random_trials: 20,
            monte_carlo_trials: 100_000,
            monte_carlo_max_states: 30,
            seed: 0,
        }
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn random_distribution<R: Rng>(dim: usize, rng: &mut R) -> Distribution {
    let raw: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    Distribution::new(raw.iter().map(|w| w / total).collect()).expect("normalized weights")
}

/// Runs every structural check on `chain` over `space`: lumpability,
/// symmetry, detailed balance of the projection, dominance of the original
/// distance trace over the projected one, the project/lift commutation
/// identities, agreement of lifted and projected traces, and a Monte Carlo
/// comparison of sampler steps with the exact rows.
pub fn verify(space: &StateSpace, chain: ChainKind, opts: &VerifyOptions) -> Result<VerifyReport> {
    let p = transition_matrix(space, chain)?;
    let part = iso_partition(space)?;
    let mut checks = vec![
        Check::new("lumpability", check_lumpability(&p, &part)?, STRUCTURAL_TOL),
        Check::new("symmetry", p.asymmetry(), STRUCTURAL_TOL),
    ];
    let q = project(&p, &part)?;
    let pi = Distribution::uniform(space.len());
    let pi_bar = project_distribution(&pi, &part)?;
    checks.push(Check::new("detailed-balance", detailed_balance(&q, pi_bar.weights()), STRUCTURAL_TOL));

    let original = worst_case_trace(&p, &pi, opts.trace_steps)?;
    let projected = worst_case_trace(&q, &pi_bar, opts.trace_steps)?;
    let excess = projected.iter().zip(&original).map(|(b, a)| b - a).fold(0.0, f64::max);
    checks.push(Check::new("projection-dominance", excess, STRUCTURAL_TOL));

    let mut rng = chain_rng(opts.seed);
    let mut project_gap = 0.0f64;
    let mut lift_gap = 0.0f64;
    for _ in 0..opts.random_trials {
        let mu = random_distribution(space.len(), &mut rng);
        let left = project_distribution(&mu.evolve(&p)?, &part)?;
        let right = project_distribution(&mu, &part)?.evolve(&q)?;
        project_gap = project_gap.max(max_abs_diff(left.weights(), right.weights()));

        let mu_bar = random_distribution(part.len(), &mut rng);
        let left = lift_distribution(&mu_bar, &part)?.evolve(&p)?;
        let right = lift_distribution(&mu_bar.evolve(&q)?, &part)?;
        lift_gap = lift_gap.max(max_abs_diff(left.weights(), right.weights()));
    }
    checks.push(Check::new("project-commutes", project_gap, STRUCTURAL_TOL));
    checks.push(Check::new("lift-commutes", lift_gap, STRUCTURAL_TOL));

    let mut trace_gap = 0.0f64;
    for c in 0..part.len() {
        let point = Distribution::point(part.len(), c);
        let lifted = distance_trace(&p, &lift_distribution(&point, &part)?, &pi, opts.identity_steps)?;
        let quotient = distance_trace(&q, &point, &pi_bar, opts.identity_steps)?;
        trace_gap = trace_gap.max(max_abs_diff(&lifted, &quotient));
    }
    checks.push(Check::new("lifted-trace", trace_gap, STRUCTURAL_TOL));

    if opts.monte_carlo_trials > 0 && space.len() <= opts.monte_carlo_max_states {
        // one chi-square test on the joint table of all starts: X² and df
        // add up over independent rows; reported as X² / bound
        let (mut statistic, mut df, mut impossible) = (0.0, 0usize, 0u64);
        for x in 0..space.len() {
            let seed = replica_seed(opts.seed, x as u64);
            let counts = empirical_step_counts(space, chain, x, opts.monte_carlo_trials, seed)?;
            let test = multinomial_test(&counts, p.row(x));
            statistic += test.statistic;
            df += test.df;
            impossible += test.impossible_hits;
        }
        let bound = df as f64 + 3.0 * (2.0 * df as f64).sqrt();
        let ratio = match (impossible, df) {
            (0, 0) => 0.0,
            (0, _) => statistic / bound,
            _ => f64::INFINITY,
        };
        checks.push(Check::new("monte-carlo", ratio, 1.0));
    }

    Ok(VerifyReport {
        chain,
        states: space.len(),
        classes: part.len(),
        checks,
    })
}

/// `max |pi_c P[c][d] - pi_d P[d][c]|`.
pub fn detailed_balance(p: &TransitionMatrix, pi: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..p.dim() {
        for d in c + 1..p.dim() {
            worst = worst.max((pi[c] * p.get(c, d) - pi[d] * p.get(d, c)).abs());
        }
    }
    worst
}
