//! Exact survivor masses and the asymptotics of the scaled sequence.
//!
//! `mu(Delta_n)` is the mass of the points whose first n symbols stay in
//! Delta; it equals the integral of the n-th restricted iterate of the
//! constant function 1. The sweep keeps the iterate scaled by
//! `exp(-n P_Delta)` so the sequence stays well conditioned for large n,
//! and compares each residue class against its predicted limit
//!
//! ```text
//! predicted(k) = sum_j alpha_j(k) int h_{j+k mod m} dmu
//! ```
//!
//! whose spread across k decides whether the scaled sequence converges at
//! all.

use crate::defaults::{SPREAD_INDETERMINATE, SPREAD_TOL};
use crate::error::{Error, Result};
use crate::mat::sup_norm;
use crate::scalar::Scalar;
use crate::subsystem::SubsystemAnalysis;
use crate::transfer::GibbsMeasure;

/// Verdict on the convergence of the scaled sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceVerdict {
    /// Residue limits coincide within the strict threshold.
    Converges,
    /// Spread falls between the strict and the loose threshold.
    Indeterminate,
    /// Residue limits differ by more than the loose threshold.
    Diverges,
}

/// Verdict for a given spread under the default thresholds.
pub fn convergence_verdict(spread: f64) -> ConvergenceVerdict {
    if spread <= SPREAD_INDETERMINATE {
        ConvergenceVerdict::Converges
    } else if spread <= SPREAD_TOL {
        ConvergenceVerdict::Indeterminate
    } else {
        ConvergenceVerdict::Diverges
    }
}

/// Sweep of the survivor masses and their scaled residue-class behaviour.
#[derive(Clone, Debug)]
pub struct AsymptoticsReport<S> {
    pub n_max: usize,
    /// `mu(Delta_n)` for n = 0..=n_max (may underflow to 0 for huge n).
    pub mu_seq: Vec<S>,
    /// `exp(-n P_Delta) mu(Delta_n)` for n = 0..=n_max.
    pub scaled_seq: Vec<S>,
    /// Predicted limit per residue class k = 0..m-1.
    pub residue_limits: Vec<S>,
    /// Per class k: |scaled(k + n m) - predicted(k)| for k + n m <= n_max.
    pub residue_errors: Vec<Vec<S>>,
    /// max over k of predicted(k) minus min over k.
    pub spread: S,
    /// True when the spread is at most the caller's tolerance.
    pub converges_overall: bool,
    /// Classification of the spread under the default thresholds.
    pub verdict: ConvergenceVerdict,
}

/// The scaled iterates integrated against the measure:
/// `scaled[n] = exp(-n P_Delta) mu(Delta_n)` for n = 0..=n_max.
pub fn scaled_sequence<S: Scalar>(
    analysis: &SubsystemAnalysis<S>,
    measure: &GibbsMeasure<S>,
    n_max: usize,
) -> Vec<S> {
    let dim = analysis.restricted().transfer().dim();
    let step_scale = (-analysis.p_delta).exp();
    let mut psi = vec![S::one(); dim];
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(measure.integrate(&psi));
    for _ in 1..=n_max {
        psi = analysis.restricted().apply(&psi);
        for x in psi.iter_mut() {
            *x = *x * step_scale;
        }
        out.push(measure.integrate(&psi));
    }
    out
}

/// Exact survivor mass `mu(Delta_n)`, computed through the scaled iterate
/// and rescaled in the log domain; n = 0 is the whole space, mass 1.
pub fn mu_delta_n<S: Scalar>(
    analysis: &SubsystemAnalysis<S>,
    measure: &GibbsMeasure<S>,
    n: usize,
) -> S {
    if n == 0 {
        return S::one();
    }
    let scaled = scaled_sequence(analysis, measure, n);
    let last = scaled[n];
    if last <= S::zero() {
        return S::zero();
    }
    (S::from_count(n) * analysis.p_delta + last.ln()).exp()
}

/// Predicted limit of the scaled sequence along each residue class.
pub fn predicted_limits<S: Scalar>(
    analysis: &SubsystemAnalysis<S>,
    measure: &GibbsMeasure<S>,
) -> Vec<S> {
    let m = analysis.period;
    let integral_h: Vec<S> = analysis.h.iter().map(|hj| measure.integrate(hj)).collect();
    (0..m)
        .map(|k| {
            (0..m)
                .map(|j| analysis.alpha[j][k] * integral_h[(j + k) % m])
                .sum()
        })
        .collect()
}

/// Sweep n = 0..=n_max and compare each residue class against its
/// predicted limit; `tol` is the spread below which the residue limits
/// count as a single limit.
pub fn report<S: Scalar>(
    analysis: &SubsystemAnalysis<S>,
    measure: &GibbsMeasure<S>,
    n_max: usize,
    tol: S,
) -> Result<AsymptoticsReport<S>> {
    if tol <= S::zero() {
        return Err(Error::InvalidTolerance);
    }
    let m = analysis.period;
    if n_max < m {
        return Err(Error::RangeTooShort { n_max, period: m });
    }
    let scaled_seq = scaled_sequence(analysis, measure, n_max);
    let mu_seq: Vec<S> = scaled_seq
        .iter()
        .enumerate()
        .map(|(n, &s)| {
            if s <= S::zero() {
                S::zero()
            } else {
                (S::from_count(n) * analysis.p_delta + s.ln()).exp()
            }
        })
        .collect();
    let residue_limits = predicted_limits(analysis, measure);
    let residue_errors: Vec<Vec<S>> = (0..m)
        .map(|k| {
            (0..)
                .map(|i| k + i * m)
                .take_while(|&n| n <= n_max)
                .map(|n| (scaled_seq[n] - residue_limits[k]).abs())
                .collect()
        })
        .collect();
    let hi = residue_limits
        .iter()
        .fold(S::neg_infinity(), |a, &b| a.max(b));
    let lo = residue_limits.iter().fold(S::infinity(), |a, &b| a.min(b));
    let spread = hi - lo;
    Ok(AsymptoticsReport {
        n_max,
        mu_seq,
        scaled_seq,
        residue_limits,
        residue_errors,
        spread,
        converges_overall: spread <= tol,
        verdict: convergence_verdict(spread.to_f64().unwrap_or(f64::NAN)),
    })
}

/// Sup-norm gap between the scaled n-th restricted iterate of `psi` and
/// the theorem's finite mixture of eigenfunctions.
pub fn theorem_gap<S: Scalar>(analysis: &SubsystemAnalysis<S>, psi: &[S], n: usize) -> S {
    let m = analysis.period;
    let parent = analysis.restricted().transfer();
    let step_scale = (-analysis.p_delta).exp();
    let mut lhs = psi.to_vec();
    for _ in 0..n {
        lhs = analysis.restricted().apply(&lhs);
        for x in lhs.iter_mut() {
            *x = *x * step_scale;
        }
    }
    let k = n % m;
    let dim = parent.dim();
    let mut rhs = vec![S::zero(); dim];
    for j in 0..m {
        let weight = analysis.alpha[j][k] * analysis.nu[j].integrate_states(parent, psi);
        let hjk = &analysis.h[(j + k) % m];
        for (acc, &hv) in rhs.iter_mut().zip(hjk) {
            *acc = *acc + weight * hv;
        }
    }
    let diff: Vec<S> = lhs.iter().zip(&rhs).map(|(&a, &b)| a - b).collect();
    sup_norm(&diff)
}
