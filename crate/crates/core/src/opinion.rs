//! Binomial subjective-logic opinions and the operators the simulation uses:
//! projection to expectations, evidence mapping, competence-adjusted base
//! rates, cosine homophily, discounting, consensus fusion and decay.
//!
//! Every operator is a pure function on `Copy` values.

use serde::{Deserialize, Serialize};

use crate::error::{check_range, Error, Result};

/// Largest deviation of `b + d + u` from 1 that construction silently repairs.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// Consensus is skipped when `β = u_i + u_j − u_i·u_j` falls to or below this.
pub const BETA_EPS: f64 = 1e-12;

/// A binomial opinion `(b, d, u, a)` with `b + d + u = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Opinion {
    b: f64,
    d: f64,
    u: f64,
    a: f64,
}

impl Opinion {
    /// Builds an opinion, renormalizing the masses when their sum is within
    /// [`MASS_TOLERANCE`] of 1 and rejecting it otherwise.
    pub fn new(b: f64, d: f64, u: f64, a: f64) -> Result<Self> {
        check_range("belief", b, 0.0, 1.0)?;
        check_range("disbelief", d, 0.0, 1.0)?;
        check_range("uncertainty", u, 0.0, 1.0)?;
        check_range("base rate", a, 0.0, 1.0)?;
        let sum = b + d + u;
        if (sum - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidOpinion(format!(
                "b + d + u = {sum}, expected 1"
            )));
        }
        if sum == 1.0 {
            Ok(Opinion { b, d, u, a })
        } else {
            Ok(Opinion {
                b: b / sum,
                d: d / sum,
                u: u / sum,
                a,
            })
        }
    }

    /// Full ignorance: `(0, 0, 1)`.
    pub fn vacuous(a: f64) -> Result<Self> {
        Opinion::new(0.0, 0.0, 1.0, a)
    }

    /// Operator outputs go through here: components are clamped against
    /// rounding but never rescaled, so multiplicative trajectories stay exact.
    fn from_parts(b: f64, d: f64, u: f64, a: f64) -> Self {
        let op = Opinion {
            b: b.clamp(0.0, 1.0),
            d: d.clamp(0.0, 1.0),
            u: u.clamp(0.0, 1.0),
            a,
        };
        debug_assert!(
            (op.b + op.d + op.u - 1.0).abs() <= MASS_TOLERANCE,
            "operator left the simplex: {op:?}"
        );
        op
    }

    pub fn belief(&self) -> f64 {
        self.b
    }

    pub fn disbelief(&self) -> f64 {
        self.d
    }

    pub fn uncertainty(&self) -> f64 {
        self.u
    }

    pub fn base_rate(&self) -> f64 {
        self.a
    }

    /// Same masses, different base rate.
    pub fn with_base_rate(self, a: f64) -> Result<Self> {
        check_range("base rate", a, 0.0, 1.0)?;
        Ok(Opinion { a, ..self })
    }

    pub fn expectation(&self) -> Expectation {
        expectation(self)
    }
}

/// Projected probabilities of belief and disbelief.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expectation {
    pub belief: f64,
    pub disbelief: f64,
}

/// Positive, negative and uncertain evidence behind an opinion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvidenceCounts {
    pub positive: u64,
    pub negative: u64,
    pub uncertain: f64,
}

impl EvidenceCounts {
    pub fn new(positive: u64, negative: u64, uncertain: f64) -> Self {
        EvidenceCounts {
            positive,
            negative,
            uncertain,
        }
    }

    fn total(&self) -> f64 {
        self.positive as f64 + self.negative as f64 + self.uncertain
    }
}

/// `E_b = b + a·u`, `E_d = d + (1 − a)·u`.
pub fn expectation(op: &Opinion) -> Expectation {
    Expectation {
        belief: op.b + op.a * op.u,
        disbelief: op.d + (1.0 - op.a) * op.u,
    }
}

/// Maps evidence counts `(r, s, W)` to `(r, s, W) / (r + s + W)`.
pub fn from_evidence(ev: EvidenceCounts, a: f64) -> Result<Opinion> {
    check_range("base rate", a, 0.0, 1.0)?;
    if !ev.uncertain.is_finite() || ev.uncertain < 0.0 {
        return Err(Error::InvalidOpinion(format!(
            "uncertain evidence mass must be finite and non-negative, got {}",
            ev.uncertain
        )));
    }
    let total = ev.total();
    if total <= 0.0 {
        return Err(Error::ZeroEvidence);
    }
    let b = ev.positive as f64 / total;
    let d = ev.negative as f64 / total;
    let u = ev.uncertain / total;
    Opinion::new(b, d, u, a)
}

/// Competence-adjusted prior: `(1 − (tc − 0.5))·a`, clamped to `[0, 1]`.
///
/// `tc = 0.5` leaves the prior intact; higher competence shrinks it.
pub fn adjust_base_rate(a: f64, tc: f64) -> Result<f64> {
    check_range("base rate", a, 0.0, 1.0)?;
    check_range("topic competence", tc, 0.0, 1.0)?;
    Ok(((1.0 - (tc - 0.5)) * a).clamp(0.0, 1.0))
}

/// Cosine similarity of the `(b, d)` vectors; 0 if either vector is zero.
pub fn similarity(wi: &Opinion, wj: &Opinion) -> f64 {
    let ni = wi.b.hypot(wi.d);
    let nj = wj.b.hypot(wj.d);
    if ni == 0.0 || nj == 0.0 {
        return 0.0;
    }
    ((wi.b * wj.b + wi.d * wj.d) / (ni * nj)).clamp(0.0, 1.0)
}

/// Scales `wj`'s committed mass by the trust weight `s`; the remainder
/// becomes uncertainty. Keeps `wj`'s base rate.
pub fn discount(wj: &Opinion, s: f64) -> Opinion {
    debug_assert!((0.0..=1.0).contains(&s), "trust weight {s} out of range");
    Opinion::from_parts(s * wj.b, s * wj.d, 1.0 - s * (1.0 - wj.u), wj.a)
}

/// Consensus fusion of the receiver `wi` with an incoming opinion.
///
/// Returns `None` when both opinions are (numerically) dogmatic, i.e.
/// `β ≤ BETA_EPS`; the receiver should then keep its opinion. The result
/// carries `wi`'s base rate.
pub fn consensus(wi: &Opinion, incoming: &Opinion) -> Option<Opinion> {
    let beta = wi.u + incoming.u - wi.u * incoming.u;
    if beta <= BETA_EPS {
        return None;
    }
    let b = (wi.b * incoming.u + incoming.b * wi.u) / beta;
    let d = (wi.d * incoming.u + incoming.d * wi.u) / beta;
    Some(Opinion::from_parts(b, d, 1.0 - b - d, wi.a))
}

/// Moves a fraction `gamma` of the committed mass into uncertainty.
pub fn decay(op: &Opinion, gamma: f64) -> Opinion {
    debug_assert!((0.0..=1.0).contains(&gamma), "decay {gamma} out of range");
    Opinion::from_parts(
        (1.0 - gamma) * op.b,
        (1.0 - gamma) * op.d,
        op.u + gamma * (1.0 - op.u),
        op.a,
    )
}
