//! Critical exponents, hyperbola gaps and hypothesis verdicts for the
//! existence, nonexistence and symmetry-breaking regimes.
//!
//! Everything in this module is plain arithmetic over the parameter tuple
//! (N, p, q, alpha, beta); no grids, no solves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{HenonError, Result};

/// Default absolute tolerance for "on the hyperbola" detection.
pub const ON_HYPERBOLA_TOL: f64 = 1e-12;

/// Parameters of the weighted problem on the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub q: f64,
}

impl ProblemSpec {
    pub fn new(n: u32, alpha: f64, beta: f64, p: f64, q: f64) -> Result<Self> {
        if n < 2 {
            return Err(HenonError::DimensionTooSmall {
                n: n as i32,
                context: "problem dimension must be at least 2".into(),
            });
        }
        if !(p > 1.0) || !(q > 1.0) {
            return Err(HenonError::InvalidSpec(format!(
                "exponents must satisfy p, q > 1 (got p={p}, q={q})"
            )));
        }
        let min = -(n as f64);
        if !(alpha > min) {
            return Err(HenonError::WeightOutOfRange { a: alpha, min });
        }
        if !(beta > min) {
            return Err(HenonError::WeightOutOfRange { a: beta, min });
        }
        Ok(Self { n, alpha, beta, p, q })
    }

    /// Scalar problem: only (N, alpha, p) matter; q is a dummy just above 1.
    pub fn scalar(n: u32, alpha: f64, p: f64) -> Result<Self> {
        Self::new(n, alpha, 0.0, p, 2.0)
    }
}

/// Which side of the weighted critical hyperbola a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Below,
    On,
    Above,
}

/// One hypothesis verdict: does the parameter tuple satisfy the assumptions
/// of a given existence / nonexistence / symmetry-breaking result?
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub holds: bool,
    pub reason: String,
}

impl Verdict {
    fn new(holds: bool, reason: impl Into<String>) -> Self {
        Self { holds, reason: reason.into() }
    }
}

/// Classification of a parameter tuple against the critical hyperbolas.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HyperbolaReport {
    /// (N+alpha)/(p+1) + (N+beta)/(q+1) - (N-2); positive = subcritical.
    pub gap: f64,
    pub side: Side,
    /// Same gap with alpha = beta = 0 (the unweighted hyperbola).
    pub m_gap: f64,
    pub hypotheses: BTreeMap<String, Verdict>,
}

/// Asymptotic exponents in alpha for the radial / unconstrained levels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalSlopes {
    /// Growth of the scalar radial level: 1 + 2/(p+1).
    pub scalar_rad: f64,
    /// Growth bound from boundary bumps: 2 - N + 2N/(p+1).
    pub scalar_upper: f64,
    /// Lower growth of the system radial level: 2r + r/(p+1) - 1 - 1/q.
    pub system_rad_lower: f64,
    /// Growth bound for the system ground level: 2r - N + N r/(p+1).
    pub system_upper: f64,
}

/// Sobolev exponent 2N/(N-2) (order 1) or 2N/(N-4) (order 2).
pub fn critical_exponent(n: u32, order: u32) -> Result<f64> {
    match order {
        1 => {
            if n < 3 {
                return Err(HenonError::DimensionTooSmall {
                    n: n as i32,
                    context: "second-order critical exponent needs N >= 3".into(),
                });
            }
            Ok(2.0 * n as f64 / (n as f64 - 2.0))
        }
        2 => {
            if n < 5 {
                return Err(HenonError::DimensionTooSmall {
                    n: n as i32,
                    context: "fourth-order critical exponent needs N >= 5".into(),
                });
            }
            Ok(2.0 * n as f64 / (n as f64 - 4.0))
        }
        _ => Err(HenonError::InvalidSpec(format!("order must be 1 or 2, got {order}"))),
    }
}

/// Weighted critical exponent 2* + 2 alpha/(N-2) for the radial embedding.
pub fn ni_exponent(n: u32, alpha: f64) -> Result<f64> {
    if n < 3 {
        return Err(HenonError::DimensionTooSmall {
            n: n as i32,
            context: "weighted critical exponent needs N >= 3".into(),
        });
    }
    if !(alpha > -(n as f64)) {
        return Err(HenonError::WeightOutOfRange { a: alpha, min: -(n as f64) });
    }
    Ok(critical_exponent(n, 1)? + 2.0 * alpha / (n as f64 - 2.0))
}

/// Signed distance from the weighted critical hyperbola.
///
/// Positive values are subcritical (below the hyperbola).
pub fn hyperbola_gap(spec: &ProblemSpec) -> f64 {
    let n = spec.n as f64;
    (n + spec.alpha) / (spec.p + 1.0) + (n + spec.beta) / (spec.q + 1.0) - (n - 2.0)
}

fn m_hyperbola_gap(spec: &ProblemSpec) -> f64 {
    let n = spec.n as f64;
    n / (spec.p + 1.0) + n / (spec.q + 1.0) - (n - 2.0)
}

/// The threshold p > N/((N-1)q - 1) under which the bump upper bound beats
/// the radial lower bound for systems.
pub fn system_breaking_threshold(n: u32, q: f64) -> f64 {
    n as f64 / ((n as f64 - 1.0) * q - 1.0)
}

/// Classify a parameter tuple against both hyperbolas and evaluate every
/// hypothesis set tracked by the lab.
pub fn classify_point(spec: &ProblemSpec, tol: f64) -> HyperbolaReport {
    let n = spec.n as f64;
    let (alpha, beta, p, q) = (spec.alpha, spec.beta, spec.p, spec.q);
    let gap = hyperbola_gap(spec);
    let m_gap = m_hyperbola_gap(spec);
    let side = if gap.abs() <= tol {
        Side::On
    } else if gap > 0.0 {
        Side::Below
    } else {
        Side::Above
    };
    let below = gap > tol;

    let mut hyp = BTreeMap::new();

    // de Figueiredo-Peral-Rossi existence: negative weights, subcritical,
    // superlinear coupling, extra caps in high dimension.
    {
        let weights_ok = alpha < 0.0 && beta < 0.0;
        let superlinear = 1.0 / (p + 1.0) + 1.0 / (q + 1.0) < 1.0;
        let caps_ok = if spec.n >= 5 {
            p + 1.0 < 2.0 * (n + alpha) / (n - 4.0) && q + 1.0 < 2.0 * (n + beta) / (n - 4.0)
        } else {
            true
        };
        let holds = weights_ok && below && superlinear && caps_ok;
        let reason = if !weights_ok {
            format!("needs -N < alpha, beta < 0 (alpha={alpha}, beta={beta})")
        } else if !below {
            format!("needs (N+a)/(p+1)+(N+b)/(q+1) > N-2 (gap={gap:.6})")
        } else if !superlinear {
            "needs 1/(p+1) + 1/(q+1) < 1".into()
        } else if !caps_ok {
            "needs p+1 < 2(N+alpha)/(N-4) and q+1 < 2(N+beta)/(N-4) for N >= 5".into()
        } else {
            "negative weights, subcritical, superlinear; at least one positive solution".into()
        };
        hyp.insert("existence_dpr".into(), Verdict::new(holds, reason));
    }

    // Liu-Yang existence, three weight regimes under the weighted hyperbola.
    {
        let hardy = alpha <= 0.0 && beta <= 0.0 && alpha + beta > -4.0;
        let holds = below && hardy;
        let reason = if holds {
            format!("Hardy case: 0 >= alpha, beta > -N and alpha+beta = {} > -4", alpha + beta)
        } else if !below {
            format!("needs subcritical gap > 0 (gap={gap:.6})")
        } else {
            format!("needs 0 >= alpha, beta and alpha+beta > -4 (alpha={alpha}, beta={beta})")
        };
        hyp.insert("existence_liu_yang_hardy".into(), Verdict::new(holds, reason));

        let balance = alpha * n / (n + alpha) + beta * n / (n + beta);
        let henon = alpha >= 0.0 && beta >= 0.0 && balance < 4.0;
        let holds = below && henon;
        let reason = if holds {
            format!("Henon case: alpha, beta >= 0 and alpha N/(N+alpha)+beta N/(N+beta) = {balance:.6} < 4")
        } else if !below {
            format!("needs subcritical gap > 0 (gap={gap:.6})")
        } else {
            format!("needs alpha, beta >= 0 and weight balance {balance:.6} < 4")
        };
        hyp.insert("existence_liu_yang_henon".into(), Verdict::new(holds, reason));

        let mixed = beta <= 0.0 && alpha >= 0.0;
        let holds = below && mixed;
        let reason = if holds {
            "mixed case: -N < beta <= 0 <= alpha under the weighted hyperbola".into()
        } else if !below {
            format!("needs subcritical gap > 0 (gap={gap:.6})")
        } else {
            format!("needs beta <= 0 <= alpha (alpha={alpha}, beta={beta})")
        };
        hyp.insert("existence_liu_yang_mixed".into(), Verdict::new(holds, reason));
    }

    // Pohozaev nonexistence: on or above the weighted hyperbola on a
    // star-shaped domain there is no nontrivial strong positive solution.
    {
        let holds = gap <= tol;
        let reason = if holds {
            format!("on/above the weighted hyperbola (gap={gap:.6} <= {tol:e}); no positive solutions")
        } else {
            format!("strictly below the hyperbola (gap={gap:.6}); identity gives no obstruction")
        };
        hyp.insert("nonexistence_pohozaev".into(), Verdict::new(holds, reason));
    }

    // Hardy system ground state: both weights nonpositive, below the
    // weighted hyperbola; minimizer exists and is radial on the ball.
    {
        let weights_ok = alpha <= 0.0 && beta <= 0.0;
        let holds = weights_ok && below;
        let reason = if holds {
            "Hardy weights below the weighted hyperbola: radial ground state exists".into()
        } else if !weights_ok {
            format!("needs 0 >= alpha, beta > -N (alpha={alpha}, beta={beta})")
        } else {
            format!("needs gap > 0 (gap={gap:.6})")
        };
        hyp.insert("existence_hardy_system".into(), Verdict::new(holds, reason));
    }

    // Henon system, radial branch: q > max(1, beta/N) below the weighted
    // hyperbola gives a radial (not necessarily minimal) solution.
    {
        let q_ok = q > (beta / n).max(1.0);
        let weights_ok = alpha >= 0.0 && beta >= 0.0;
        let holds = weights_ok && q_ok && below;
        let reason = if holds {
            format!("alpha, beta >= 0, q = {q} > max(1, beta/N) and gap > 0: radial solution exists")
        } else if !weights_ok {
            format!("needs alpha, beta >= 0 (alpha={alpha}, beta={beta})")
        } else if !q_ok {
            format!("needs q > max(1, beta/N) = {}", (beta / n).max(1.0))
        } else {
            format!("needs gap > 0 (gap={gap:.6})")
        };
        hyp.insert("radial_existence_henon".into(), Verdict::new(holds, reason));
    }

    // Henon system, symmetry breaking: below the unweighted hyperbola the
    // ground state exists; for p above the threshold and alpha large it is
    // not radial.
    {
        let thr = system_breaking_threshold(spec.n, q);
        let m_below = m_gap > tol;
        let p_ok = p > thr;
        let holds = alpha > 0.0 && beta >= 0.0 && m_below && p_ok;
        let reason = if holds {
            format!("below the unweighted hyperbola with p = {p} > N/((N-1)q-1) = {thr:.6}: ground state non-radial for large alpha")
        } else if !(alpha > 0.0 && beta >= 0.0) {
            format!("needs alpha > 0 and beta >= 0 (alpha={alpha}, beta={beta})")
        } else if !m_below {
            format!("needs N/(p+1)+N/(q+1) > N-2 (m_gap={m_gap:.6})")
        } else {
            format!("needs p > N/((N-1)q-1) = {thr:.6}")
        };
        hyp.insert("symmetry_breaking_henon".into(), Verdict::new(holds, reason));
    }

    // Mixed Henon-Hardy system (alpha > 0 > beta): radial existence below
    // the weighted hyperbola, symmetry breaking below the half-weighted one.
    {
        let mixed = alpha > 0.0 && beta < 0.0;
        let holds = mixed && below;
        let reason = if holds {
            "alpha > 0 > beta below the weighted hyperbola: radial solution exists".into()
        } else if !mixed {
            format!("needs alpha > 0 > beta > -N (alpha={alpha}, beta={beta})")
        } else {
            format!("needs gap > 0 (gap={gap:.6})")
        };
        hyp.insert("radial_existence_mixed".into(), Verdict::new(holds, reason));

        let half_gap = n / (p + 1.0) + (n - beta.abs()) / (q + 1.0) - (n - 2.0);
        let thr = system_breaking_threshold(spec.n, q);
        let p_ok = p > thr;
        let holds = mixed && half_gap > tol && p_ok;
        let reason = if holds {
            format!("N/(p+1)+(N-|beta|)/(q+1) > N-2 and p > {thr:.6}: ground state non-radial for large alpha")
        } else if !mixed {
            format!("needs alpha > 0 > beta (alpha={alpha}, beta={beta})")
        } else if !(half_gap > tol) {
            format!("needs N/(p+1)+(N-|beta|)/(q+1) > N-2 (value-(N-2)={half_gap:.6})")
        } else {
            format!("needs p > N/((N-1)q-1) = {thr:.6}")
        };
        hyp.insert("symmetry_breaking_mixed".into(), Verdict::new(holds, reason));
    }

    // He-Yang boundary concentration: recorded only, never acted upon.
    {
        let holds = alpha >= 0.0 && alpha < p * n && beta > 0.0 && spec.n >= 8;
        let reason = if holds {
            "0 <= alpha < pN, beta > 0, N >= 8: concentration regime (recorded only)".into()
        } else {
            format!("needs 0 <= alpha < pN, beta > 0 and N >= 8 (alpha={alpha}, beta={beta}, N={})", spec.n)
        };
        hyp.insert("concentration_he_yang".into(), Verdict::new(holds, reason));
    }

    HyperbolaReport { gap, side, m_gap, hypotheses: hyp }
}

/// Theoretical alpha-growth exponents of the radial and unconstrained
/// levels, for the scalar problem and the system (r = (q+1)/q).
pub fn theoretical_slopes(n: u32, p: f64, q: f64) -> TheoreticalSlopes {
    let nf = n as f64;
    let r = (q + 1.0) / q;
    TheoreticalSlopes {
        scalar_rad: 1.0 + 2.0 / (p + 1.0),
        scalar_upper: 2.0 - nf + 2.0 * nf / (p + 1.0),
        system_rad_lower: 2.0 * r + r / (p + 1.0) - 1.0 - 1.0 / q,
        system_upper: 2.0 * r - nf + nf * r / (p + 1.0),
    }
}
