//! Growth-rate diagnostics: least-squares slopes on log-log data, the
//! radial substitution that flattens the power weight, and the dominated
//! limit behind the concentration estimates.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::gamma::gamma;

use crate::error::{HenonError, Result};
use crate::grids::{unit_sphere_area, RadialFunction, RadialGrid};

/// Ordinary least-squares fit of log y against log x.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// Half width of the 95% confidence interval for the slope.
    pub half_width: f64,
    pub n_points: usize,
}

pub fn fit_log_slope(xs: &[f64], ys: &[f64]) -> Result<SlopeFit> {
    if xs.len() != ys.len() {
        return Err(HenonError::InvalidSpec(format!(
            "mismatched lengths {} vs {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 4 {
        return Err(HenonError::InvalidSpec(format!(
            "slope fit needs at least 4 points, got {n}"
        )));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0) || !(y > 0.0) {
            return Err(HenonError::NonPositiveData {
                context: format!("log-log fit requires positive data, got ({x}, {y})"),
            });
        }
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if !(sxx > 0.0) {
        return Err(HenonError::InvalidSpec("all abscissae coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let df = nf - 2.0;
    let se = (ss_res / df / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, df)
        .map_err(|e| HenonError::InvalidSpec(e.to_string()))?
        .inverse_cdf(0.975);
    Ok(SlopeFit { slope, intercept, half_width: t * se, n_points: n })
}

/// Result of the substitution r = rho^{N/(N+alpha)} applied to a radial
/// profile: the transplanted profile and the relative defect in the
/// weighted-mass identity it must preserve.
#[derive(Debug, Clone)]
pub struct SubstitutionReport {
    pub eps: f64,
    pub v: RadialFunction,
    /// Relative gap between int |x|^alpha |u|^{p+1} and
    /// eps * omega * int rho^{N-1} |v|^{p+1} d rho.
    pub identity_gap: f64,
}

/// Transplant u(r) to v(rho) = u(rho^eps), eps = N/(N+alpha), which trades
/// the weight |x|^alpha for a constant multiple of the plain measure.
pub fn henon_substitution(u: &RadialFunction, alpha: f64, p: f64) -> Result<SubstitutionReport> {
    let n = u.grid.n;
    let nf = n as f64;
    if !(alpha > -nf) {
        return Err(HenonError::WeightOutOfRange { a: alpha, min: -nf });
    }
    let eps = nf / (nf + alpha);
    let grid = RadialGrid::new(n, u.grid.m)?;
    let v = grid.sample(|rho| eval_linear(u, rho.powf(eps)));
    let weighted = u.weighted_integral_abs_pow(alpha, p + 1.0)?;
    let omega = unit_sphere_area(n);
    let h = grid.h;
    let plain: f64 = grid
        .nodes()
        .iter()
        .zip(&v.values)
        .map(|(&rho, &vi)| rho.powf(nf - 1.0) * vi.abs().powf(p + 1.0) * h)
        .sum();
    let transformed = eps * omega * plain;
    let scale = weighted.abs().max(transformed.abs()).max(1e-300);
    Ok(SubstitutionReport {
        eps,
        v,
        identity_gap: (weighted - transformed).abs() / scale,
    })
}

/// Piecewise-linear evaluation of a cell-centered radial profile, with the
/// boundary value pinned to zero and a symmetric center.
fn eval_linear(u: &RadialFunction, r: f64) -> f64 {
    let m = u.grid.m;
    let h = u.grid.h;
    let r = r.clamp(0.0, 1.0);
    let s = r / h - 0.5;
    if s <= 0.0 {
        return u.values[0];
    }
    let i = s.floor() as usize;
    let frac = s - i as f64;
    if i + 1 < m {
        u.values[i] * (1.0 - frac) + u.values[i + 1] * frac
    } else {
        // Last half cell: interpolate to u(1) = 0 over h/2.
        let frac = ((r - u.grid.nodes()[m - 1]) / (h / 2.0)).clamp(0.0, 1.0);
        u.values[m - 1] * (1.0 - frac)
    }
}

/// One evaluation of the rescaled integral family against its limit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominatedLimitReport {
    /// Limit Gamma(p+2) / N^{p+2}.
    pub limit: f64,
    /// Integral value for each requested eps, in input order.
    pub values: Vec<f64>,
    /// Relative gap at the smallest eps supplied.
    pub final_gap: f64,
}

/// Check that the integral family
///   I(eps) = int_0^1 ((1 - t^{e}) / e)^{p+1} t^{N-1} dt,  e = eps * c,
///   c = 2 - N + (N + beta)/(q + 1),
/// converges to Gamma(p+2)/N^{p+2} as eps -> 0, staying under the
/// dominating envelope (-log t)^{p+1} t^{N-1}.
pub fn dominated_limit_check(
    p: f64,
    n: u32,
    q: f64,
    beta: f64,
    eps_list: &[f64],
) -> Result<DominatedLimitReport> {
    let nf = n as f64;
    if n < 2 {
        return Err(HenonError::DimensionTooSmall {
            n: n as i32,
            context: "dominated limit needs N >= 2".into(),
        });
    }
    if eps_list.is_empty() {
        return Err(HenonError::InvalidSpec("empty eps list".into()));
    }
    let c = 2.0 - nf + (nf + beta) / (q + 1.0);
    if c.abs() < 1e-12 {
        return Err(HenonError::DegenerateExponent);
    }
    if c < 0.0 {
        return Err(HenonError::HypothesisViolation(format!(
            "domination needs 2 - N + (N+beta)/(q+1) > 0, got {c}"
        )));
    }
    let limit = gamma(p + 2.0) / nf.powf(p + 2.0);
    // Substitute t = exp(-s); the envelope decays like exp(-N s) so the
    // tail beyond 80/N is below machine precision.
    let s_max = 80.0 / nf;
    let steps = 20_000usize;
    let ds = s_max / steps as f64;
    let mut values = Vec::with_capacity(eps_list.len());
    for &eps in eps_list {
        if !(eps > 0.0) {
            return Err(HenonError::InvalidSpec(format!("eps must be positive, got {eps}")));
        }
        let e = eps * c;
        let mut acc = 0.0;
        for k in 0..steps {
            let s = (k as f64 + 0.5) * ds;
            let base = (-(-e * s).exp_m1()) / e;
            debug_assert!(base <= s * (1.0 + 1e-12));
            acc += base.powf(p + 1.0) * (-nf * s).exp() * ds;
        }
        values.push(acc);
    }
    let smallest = eps_list
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    let final_gap = (values[smallest] - limit).abs() / limit;
    Ok(DominatedLimitReport { limit, values, final_gap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exact_power_law_slope() {
        let xs: Vec<f64> = (1..=8).map(|k| k as f64 * 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.4 * x.powf(1.75)).collect();
        let fit = fit_log_slope(&xs, &ys).unwrap();
        assert_relative_eq!(fit.slope, 1.75, epsilon = 1e-10);
        assert!(fit.half_width < 1e-9);
    }

    #[test]
    fn constant_data_slope_zero() {
        let xs: Vec<f64> = (1..=6).map(|k| k as f64).collect();
        let ys = vec![2.5; 6];
        let fit = fit_log_slope(&xs, &ys).unwrap();
        assert!(fit.slope.abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_and_short_data() {
        assert!(matches!(
            fit_log_slope(&[1.0, 2.0, 3.0, 4.0], &[1.0, -2.0, 3.0, 4.0]),
            Err(HenonError::NonPositiveData { .. })
        ));
        assert!(fit_log_slope(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn noisy_slope_within_interval() {
        let xs: Vec<f64> = (1..=10).map(|k| 1.5f64.powi(k)).collect();
        let ys: Vec<f64> = xs
            .iter()
            .enumerate()
            .map(|(i, x)| 2.0 * x.powf(0.5) * (1.0 + 0.01 * ((i * 37 % 11) as f64 - 5.0) / 5.0))
            .collect();
        let fit = fit_log_slope(&xs, &ys).unwrap();
        assert!((fit.slope - 0.5).abs() < fit.half_width + 0.02);
    }

    #[test]
    fn substitution_identity_small_gap() {
        let grid = RadialGrid::new(3, 512).unwrap();
        let u = grid.sample(|r| 1.0 - r * r);
        let rep = henon_substitution(&u, 4.0, 3.0).unwrap();
        assert_relative_eq!(rep.eps, 3.0 / 7.0, epsilon = 1e-15);
        assert!(rep.identity_gap < 1e-4, "gap {}", rep.identity_gap);
    }

    #[test]
    fn substitution_identity_second_order() {
        let u1 = RadialGrid::new(3, 128).unwrap().sample(|r| (1.0 - r * r).powi(2));
        let u2 = RadialGrid::new(3, 256).unwrap().sample(|r| (1.0 - r * r).powi(2));
        let g1 = henon_substitution(&u1, 2.5, 2.0).unwrap().identity_gap;
        let g2 = henon_substitution(&u2, 2.5, 2.0).unwrap().identity_gap;
        assert!(g2 < g1 / 2.5, "g1={g1} g2={g2}");
    }

    #[test]
    fn alpha_zero_substitution_is_identity() {
        let grid = RadialGrid::new(4, 256).unwrap();
        let u = grid.sample(|r| 1.0 - r);
        let rep = henon_substitution(&u, 0.0, 1.0).unwrap();
        assert_eq!(rep.eps, 1.0);
        for (a, b) in u.values.iter().zip(&rep.v.values) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn dominated_limit_basic() {
        // p = 1, N = 3: limit Gamma(3)/3^3 = 2/27.
        let rep =
            dominated_limit_check(1.0, 3, 1.0, 0.0, &[0.1, 0.01, 1e-3, 1e-4]).unwrap();
        assert_relative_eq!(rep.limit, 2.0 / 27.0, epsilon = 1e-12);
        assert!(rep.final_gap < 1e-4, "gap {}", rep.final_gap);
        // Values increase toward the limit as eps decreases.
        for w in rep.values.windows(2) {
            assert!(w[1] > w[0]);
            assert!(w[1] <= rep.limit * (1.0 + 1e-9));
        }
    }

    #[test]
    fn dominated_limit_degenerate_exponent() {
        // q + 1 = (N + beta)/(N - 2) makes the exponent collapse: N=4,
        // beta=2, q=2 gives c = 0.
        assert!(matches!(
            dominated_limit_check(1.0, 4, 2.0, 2.0, &[0.1]),
            Err(HenonError::DegenerateExponent)
        ));
    }

    #[test]
    fn dominated_limit_rejects_supercritical_pair() {
        // c < 0: the envelope no longer dominates.
        assert!(matches!(
            dominated_limit_check(1.0, 5, 3.0, 0.0, &[0.1]),
            Err(HenonError::HypothesisViolation(_))
        ));
    }
}
