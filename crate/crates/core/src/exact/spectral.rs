use serde::Serialize;

use super::{Distribution, TransitionMatrix};
use crate::{Error, Result};

pub const MAX_SPECTRAL_DIM: usize = 2000;

const REVERSIBILITY_TOL: f64 = 1e-10;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSummary {
    /// Eigenvalues in non-increasing order.
    pub eigenvalues: Vec<f64>,
    /// Largest modulus among all eigenvalues but the first; 0 for a
    /// single-state chain.
    pub lambda_star: f64,
    pub gap: f64,
}

/// Spectrum of a chain reversible with respect to `pi`.
///
/// The eigenvalues are those of the symmetric matrix
/// `D^{1/2} P D^{-1/2}`, `D = diag(pi)`, found by cyclic Jacobi rotations.
pub fn spectral(p: &TransitionMatrix, pi: &Distribution) -> Result<SpectralSummary> {
    let n = p.dim();
    if n != pi.len() {
        return Err(Error::DimensionMismatch { left: n, right: pi.len() });
    }
    if n > MAX_SPECTRAL_DIM {
        return Err(Error::ParameterOutOfRange(format!(
            "spectral analysis is limited to {MAX_SPECTRAL_DIM} states, got {n}"
        )));
    }
    let w = pi.weights();
    if let Some(x) = w.iter().position(|&v| v <= 0.0) {
        return Err(Error::VerificationFailed(format!("stationary weight of state {x} is not positive")));
    }
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in i + 1..n {
            deviation = deviation.max((w[i] * p.get(i, j) - w[j] * p.get(j, i)).abs());
        }
    }
    if deviation > REVERSIBILITY_TOL {
        return Err(Error::NotReversible { deviation });
    }
    let root: Vec<f64> = w.iter().map(|v| v.sqrt()).collect();
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let s_ij = root[i] * p.get(i, j) / root[j];
            let s_ji = root[j] * p.get(j, i) / root[i];
            a[i * n + j] = 0.5 * (s_ij + s_ji);
        }
    }
    let mut eigenvalues = jacobi_eigenvalues(a, n)?;
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    let lambda_star = eigenvalues.iter().skip(1).map(|v| v.abs()).fold(0.0, f64::max);
    Ok(SpectralSummary {
        eigenvalues,
        lambda_star,
        gap: 1.0 - lambda_star,
    })
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[i * n + j] * a[i * n + j];
            }
        }
    }
    sum.sqrt()
}

/// Eigenvalues of the symmetric `n x n` row-major matrix `a`.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < OFF_DIAGONAL_TOL {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Err(Error::NoConvergence { iterations: MAX_SWEEPS })
}
