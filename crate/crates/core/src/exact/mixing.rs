use std::collections::VecDeque;

use serde::Serialize;

use super::{lift_distribution, variation_distance, Distribution, IsoPartition, TransitionMatrix};
use crate::{Error, Result};

pub const MAX_ITERATIONS: usize = 1_000_000;

/// Slack allowed when asserting that distance traces never increase.
const MONOTONE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MixingReport {
    pub epsilon: f64,
    /// Worst first-hit time over all starts.
    pub tau: usize,
    /// First `t` with `d_V(mu_t, pi) <= epsilon`, per start.
    pub per_start: Vec<usize>,
    /// `max` over starts of `d_V(mu_t, pi)` for `t = 0..=tau`.
    pub distances: Vec<f64>,
}

fn check_pi(p: &TransitionMatrix, pi: &Distribution) -> Result<()> {
    if p.dim() != pi.len() {
        return Err(Error::DimensionMismatch {
            left: p.dim(),
            right: pi.len(),
        });
    }
    Ok(())
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(Error::ParameterOutOfRange(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Evolves all starts together until each has come within `epsilon` of
/// `pi`. Errors if any start's distance ever increases, since first-hit
/// times would then not bound the mixing time.
fn first_hits(p: &TransitionMatrix, pi: &Distribution, starts: Vec<Distribution>, epsilon: f64) -> Result<MixingReport> {
    check_pi(p, pi)?;
    check_epsilon(epsilon)?;
    let mut current = starts;
    let mut last: Vec<f64> = current.iter().map(|mu| variation_distance(mu, pi)).collect::<Result<_>>()?;
    let mut per_start: Vec<Option<usize>> = last.iter().map(|&d| (d <= epsilon).then_some(0)).collect();
    let mut distances = vec![last.iter().copied().fold(0.0, f64::max)];
    let mut t = 0;
    while per_start.iter().any(Option::is_none) {
        if t == MAX_ITERATIONS {
            return Err(Error::NoConvergence { iterations: t });
        }
        t += 1;
        let mut worst = 0.0f64;
        for (s, mu) in current.iter_mut().enumerate() {
            *mu = mu.evolve(p)?;
            let d = variation_distance(mu, pi)?;
            if d > last[s] + MONOTONE_TOL {
                return Err(Error::VerificationFailed(format!(
                    "distance from start {s} increased from {} to {d} at step {t}",
                    last[s]
                )));
            }
            last[s] = d;
            if per_start[s].is_none() && d <= epsilon {
                per_start[s] = Some(t);
            }
            worst = worst.max(d);
        }
        distances.push(worst);
    }
    let per_start: Vec<usize> = per_start.into_iter().map(|h| h.expect("loop ends once all starts hit")).collect();
    Ok(MixingReport {
        epsilon,
        tau: per_start.iter().copied().max().unwrap_or(0),
        per_start,
        distances,
    })
}

/// Mixing time from point masses on every state.
pub fn mixing_time(p: &TransitionMatrix, pi: &Distribution, epsilon: f64) -> Result<MixingReport> {
    let starts = (0..p.dim()).map(|x| Distribution::point(p.dim(), x)).collect();
    first_hits(p, pi, starts, epsilon)
}

/// Mixing time from the uniform distribution on each class. Requires a
/// uniform `pi`.
pub fn mixing_time_lifted(p: &TransitionMatrix, part: &IsoPartition, pi: &Distribution, epsilon: f64) -> Result<MixingReport> {
    check_pi(p, pi)?;
    if !pi.is_uniform() {
        return Err(Error::NonUniformPi);
    }
    let starts = (0..part.len())
        .map(|c| lift_distribution(&Distribution::point(part.len(), c), part))
        .collect::<Result<_>>()?;
    first_hits(p, pi, starts, epsilon)
}

/// `d_V(mu P^t, pi)` for `t = 0..=steps`.
pub fn distance_trace(p: &TransitionMatrix, mu: &Distribution, pi: &Distribution, steps: usize) -> Result<Vec<f64>> {
    check_pi(p, pi)?;
    let mut mu = mu.clone();
    let mut trace = Vec::with_capacity(steps + 1);
    trace.push(variation_distance(&mu, pi)?);
    for _ in 0..steps {
        mu = mu.evolve(p)?;
        trace.push(variation_distance(&mu, pi)?);
    }
    Ok(trace)
}

/// `max` over point-mass starts of `d_V(P^t_x, pi)` for `t = 0..=steps`.
pub fn worst_case_trace(p: &TransitionMatrix, pi: &Distribution, steps: usize) -> Result<Vec<f64>> {
    let mut worst = vec![0.0f64; steps + 1];
    for x in 0..p.dim() {
        let trace = distance_trace(p, &Distribution::point(p.dim(), x), pi, steps)?;
        for (w, d) in worst.iter_mut().zip(trace) {
            *w = w.max(d);
        }
    }
    Ok(worst)
}

/// Fewest transitions with positive probability leading from `a` to `b`,
/// or `None` if `b` is unreachable.
pub fn state_graph_distance(p: &TransitionMatrix, a: usize, b: usize) -> Option<usize> {
    let mut dist = vec![usize::MAX; p.dim()];
    dist[a] = 0;
    let mut queue = VecDeque::from([a]);
    while let Some(u) = queue.pop_front() {
        if u == b {
            return Some(dist[u]);
        }
        for &(v, _) in p.row_nonzeros(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_state(q: f64) -> TransitionMatrix {
        TransitionMatrix::from_rows(&[vec![1.0 - q, q], vec![q, 1.0 - q]]).unwrap()
    }

    #[test]
    fn two_state_chain() {
        // d_V from a point mass is |1 - 2q|^t / 2
        let p = two_state(0.25);
        let pi = Distribution::uniform(2);
        let r = mixing_time(&p, &pi, 0.01).unwrap();
        let oracle = (0..).find(|&t| 0.5 * 0.5f64.powi(t) <= 0.01).unwrap() as usize;
        assert_eq!(r.tau, oracle);
        assert_eq!(r.per_start, vec![oracle, oracle]);
        assert_eq!(r.distances.len(), oracle + 1);
        assert!(r.distances.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn single_state() {
        let r = mixing_time(&TransitionMatrix::identity(1), &Distribution::uniform(1), 0.001).unwrap();
        assert_eq!((r.tau, r.per_start.clone()), (0, vec![0]));
    }

    #[test]
    fn failures() {
        let pi = Distribution::uniform(2);
        assert_eq!(
            mixing_time(&TransitionMatrix::identity(2), &pi, 0.1).unwrap_err(),
            Error::NoConvergence { iterations: MAX_ITERATIONS }
        );
        // periodic chain: distance does not decrease but never increases either
        assert!(matches!(mixing_time(&two_state(1.0), &pi, 0.1), Err(Error::NoConvergence { .. })));
        assert!(mixing_time(&two_state(0.5), &pi, 0.0).is_err());
        let part = IsoPartition::singletons(2);
        let skewed = Distribution::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(mixing_time_lifted(&two_state(0.5), &part, &skewed, 0.1).unwrap_err(), Error::NonUniformPi);
    }

    #[test]
    fn lifted_equals_plain_for_singletons() {
        let p = two_state(0.3);
        let pi = Distribution::uniform(2);
        let part = IsoPartition::singletons(2);
        assert_eq!(mixing_time(&p, &pi, 0.001).unwrap(), mixing_time_lifted(&p, &part, &pi, 0.001).unwrap());
    }

    #[test]
    fn distances_in_state_graph() {
        // 0 -> 1 -> 2, 2 absorbing
        let p = TransitionMatrix::from_rows(&[vec![0.5, 0.5, 0.0], vec![0.0, 0.5, 0.5], vec![0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(state_graph_distance(&p, 0, 0), Some(0));
        assert_eq!(state_graph_distance(&p, 0, 2), Some(2));
        assert_eq!(state_graph_distance(&p, 2, 0), None);
    }
}
