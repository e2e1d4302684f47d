//! Radial ground states of the weighted second-order system via the reduced
//! scalar quotient in u, with r = (q+1)/q: minimization, recovery of the
//! second component, Pohozaev boundary identity and the bump-vs-radial
//! symmetry certificate.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{HenonError, Result};
use crate::exponents::{hyperbola_gap, ProblemSpec};
use crate::grids::{solve_neg_laplacian, unit_sphere_area, RadialFunction, RadialGrid};
use crate::scalar::SolveOpts;

/// System parameters plus the cached conjugate exponent r = (q+1)/q.
///
/// Unlike the scalar path, systems admit p = q = 1 (the Navier biharmonic
/// eigenvalue problem), so validation here is looser than `ProblemSpec::new`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SystemSpec {
    pub base: ProblemSpec,
    pub r: f64,
}

impl SystemSpec {
    pub fn new(n: u32, alpha: f64, beta: f64, p: f64, q: f64) -> Result<Self> {
        if n < 2 {
            return Err(HenonError::DimensionTooSmall {
                n: n as i32,
                context: "system needs N >= 2".into(),
            });
        }
        if !(p >= 1.0) || !(q >= 1.0) {
            return Err(HenonError::InvalidSpec(format!(
                "system exponents must satisfy p, q >= 1 (got p={p}, q={q})"
            )));
        }
        let min = -(n as f64);
        if !(alpha > min) {
            return Err(HenonError::WeightOutOfRange { a: alpha, min });
        }
        if !(beta > min) {
            return Err(HenonError::WeightOutOfRange { a: beta, min });
        }
        let r = (q + 1.0) / q;
        debug_assert!(r > 1.0 && r <= 2.0);
        Ok(Self { base: ProblemSpec { n, alpha, beta, p, q }, r })
    }
}

/// Converged pair (u, v) with its level and Pohozaev diagnostic.
#[derive(Debug, Clone)]
pub struct SystemGroundState {
    pub u: RadialFunction,
    pub v: RadialFunction,
    pub level: f64,
    pub pohozaev_residual: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

/// Bump-vs-radial symmetry certificate.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetryCertificate {
    pub rad_level: f64,
    pub bump_upper: f64,
    pub bump_width: f64,
    pub breaks: bool,
}

const DENOM_FLOOR: f64 = 1e-300;
const EPS_FLOOR: f64 = 1e-8;

/// Weighted second-order Rayleigh quotient
/// int |x|^{-beta(r-1)} |lap u|^r / (int |x|^alpha |u|^{p+1})^{r/(p+1)}.
pub fn rayleigh_system(u: &RadialFunction, spec: &SystemSpec) -> Result<f64> {
    let w_num = u.grid.weight_cells(-spec.base.beta * (spec.r - 1.0))?;
    let lap = u.laplacian()?;
    let num: f64 = w_num
        .iter()
        .zip(&lap.values)
        .map(|(wi, ti)| wi * ti.abs().powf(spec.r))
        .sum();
    let d0 = u.weighted_integral_abs_pow(spec.base.alpha, spec.base.p + 1.0)?;
    if !(d0 > DENOM_FLOOR) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(num / d0.powf(spec.r / (spec.base.p + 1.0)))
}

fn check_radial_hypotheses(spec: &SystemSpec) -> Result<()> {
    let gap = hyperbola_gap(&spec.base);
    if !(gap > 0.0) {
        return Err(HenonError::HypothesisViolation(format!(
            "radial theory needs (N+a)/(p+1)+(N+b)/(q+1) > N-2, gap = {gap}"
        )));
    }
    let b = spec.base.beta;
    let n = spec.base.n as f64;
    if b > 0.0 && !(spec.base.q > b / n) {
        return Err(HenonError::HypothesisViolation(format!(
            "radial branch with beta > 0 needs q > beta/N = {}",
            b / n
        )));
    }
    Ok(())
}

struct SystemWorkspace {
    grid: Arc<RadialGrid>,
    /// Cells of |x|^{-beta(r-1)} (the numerator weight).
    w_num: Vec<f64>,
    /// Cells of |x|^alpha (the denominator weight).
    w_den: Vec<f64>,
    vols: Vec<f64>,
    r: f64,
    p: f64,
}

impl SystemWorkspace {
    fn new(spec: &SystemSpec, m: usize) -> Result<Self> {
        let grid = RadialGrid::new(spec.base.n, m)?;
        let w_num = grid.weight_cells(-spec.base.beta * (spec.r - 1.0))?;
        let w_den = grid.weight_cells(spec.base.alpha)?;
        let vols = grid.cell_volumes().to_vec();
        Ok(Self { grid, w_num, w_den, vols, r: spec.r, p: spec.base.p })
    }

    fn normalize(&self, u: &mut [f64]) -> Result<()> {
        let d0: f64 = self
            .w_den
            .iter()
            .zip(u.iter())
            .map(|(wi, ui)| wi * ui.abs().powf(self.p + 1.0))
            .sum();
        if !(d0 > DENOM_FLOOR) {
            return Err(HenonError::ZeroDenominator);
        }
        let s = d0.powf(-1.0 / (self.p + 1.0));
        for v in u.iter_mut() {
            *v *= s;
        }
        Ok(())
    }

    fn laplacian(&self, u: &[f64]) -> Result<Vec<f64>> {
        let uf = RadialFunction { grid: Arc::clone(&self.grid), values: u.to_vec() };
        Ok(uf.laplacian()?.values)
    }

    /// Regularized numerator sum_i W_i (t_i^2 + eps^2)^{r/2}.
    fn numerator(&self, t: &[f64], eps: f64) -> f64 {
        self.w_num
            .iter()
            .zip(t)
            .map(|(wi, ti)| wi * (ti * ti + eps * eps).powf(self.r / 2.0))
            .sum()
    }
}

/// Minimize the system quotient over radial functions.
pub fn minimize_system_radial(
    spec: &SystemSpec,
    m: usize,
    opts: &SolveOpts,
) -> Result<SystemGroundState> {
    check_radial_hypotheses(spec)?;
    let ws = SystemWorkspace::new(spec, m)?;
    let grid = Arc::clone(&ws.grid);
    let (r, p) = (ws.r, ws.p);
    let quadratic = (r - 2.0).abs() < 1e-14;

    let mut u = grid.sample(|x| 1.0 - x * x).values;
    ws.normalize(&mut u)?;
    let mut iters = 0;

    // Phase one: fixed-point sweeps through the coupled equations (solve
    // for the second component, push it back through the first). This is
    // inverse power iteration in the linear case and usually contracts to
    // the radial ground state in a few dozen steps; the annealed descent
    // below then only has to confirm stationarity.
    let mut fp_change = f64::INFINITY;
    while iters < opts.max_iters && fp_change > 1e-13 {
        iters += 1;
        let b1: Vec<f64> = (0..m)
            .map(|i| (ws.w_den[i] / ws.vols[i]) * u[i].abs().powf(p - 1.0) * u[i])
            .collect();
        let v_new = solve_neg_laplacian(&grid, &b1);
        let b2: Vec<f64> = (0..m)
            .map(|i| {
                let dens_beta = (ws.vols[i] / ws.w_num[i]).powf(spec.base.q);
                dens_beta * v_new[i].abs().powf(spec.base.q - 1.0) * v_new[i]
            })
            .collect();
        let mut u2 = solve_neg_laplacian(&grid, &b2);
        if ws.normalize(&mut u2).is_err() || u2.iter().any(|x| !x.is_finite()) {
            break;
        }
        let sup = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        fp_change =
            u.iter().zip(&u2).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max) / sup.max(1e-300);
        u = u2;
    }
    log::debug!("system fixed point: iters={iters} change={fp_change:.3e}");

    let mut t = ws.laplacian(&u)?;
    let t_scale = t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut eps = if quadratic {
        0.0
    } else if fp_change <= 1e-10 {
        EPS_FLOOR
    } else {
        (1e-2 * t_scale).max(EPS_FLOOR)
    };

    let mut num = ws.numerator(&t, eps);
    let mut step = 1.0f64;
    let mut grad_norm = f64::INFINITY;
    let mut converged = false;

    while iters < opts.max_iters {
        iters += 1;
        // Function-space gradient of the quotient at unit denominator.
        let z: Vec<f64> = ws
            .w_num
            .iter()
            .zip(&t)
            .map(|(wi, ti)| wi * r * ti * (ti * ti + eps * eps).powf((r - 2.0) / 2.0))
            .collect();
        let z_over_v: Vec<f64> = z.iter().zip(&ws.vols).map(|(zi, vi)| zi / vi).collect();
        let grad_num = {
            let zf = RadialFunction { grid: Arc::clone(&grid), values: z_over_v.clone() };
            zf.laplacian()?.values
        };
        let g: Vec<f64> = (0..m)
            .map(|i| {
                grad_num[i]
                    - r * num * (ws.w_den[i] / ws.vols[i]) * u[i].abs().powf(p - 1.0) * u[i]
            })
            .collect();
        // Stationarity in integrated form: z/V + r num (-lap)^{-1}(dens u^p)
        // must vanish. Equivalent to g = 0 but free of the h^{-2}
        // amplification of the raw gradient near the boundary.
        {
            let b1: Vec<f64> = (0..m)
                .map(|i| (ws.w_den[i] / ws.vols[i]) * u[i].abs().powf(p - 1.0) * u[i])
                .collect();
            let vt = solve_neg_laplacian(&grid, &b1);
            let mut res2 = 0.0;
            let mut ref2 = 0.0;
            for i in 0..m {
                let target = r * num * vt[i];
                let res = z_over_v[i] + target;
                res2 += res * res * ws.vols[i];
                ref2 += target * target * ws.vols[i];
            }
            grad_norm = (res2 / ref2.max(1e-300)).sqrt();
        }
        let at_floor = quadratic || eps <= EPS_FLOOR * 1.0001;
        if grad_norm <= opts.tol {
            if at_floor {
                converged = true;
                break;
            }
            // Smoothed problem solved; sharpen it.
            eps = (eps * 0.5).max(EPS_FLOOR);
            num = ws.numerator(&t, eps);
            step = 1.0;
            continue;
        }

        // Gauss-Newton metric: lap (M lap d) = g with M ~ W r(r-1) psi / V.
        let t_abs_max = t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let eps_m = eps.max(1e-6 * t_abs_max);
        let m_diag: Vec<f64> = ws
            .w_num
            .iter()
            .zip(&t)
            .zip(&ws.vols)
            .map(|((wi, ti), vi)| {
                wi * r * (r - 1.0).max(0.5) * (ti * ti + eps_m * eps_m).powf((r - 2.0) / 2.0) / vi
            })
            .collect();
        let vol_total: f64 = ws.vols.iter().sum();
        let m_scale: f64 =
            m_diag.iter().zip(&ws.vols).map(|(mi, vi)| mi * vi).sum::<f64>() / vol_total;
        let y: Vec<f64> = solve_neg_laplacian(&grid, &g).iter().map(|v| -v).collect();
        let y_over_m: Vec<f64> = y.iter().zip(&m_diag).map(|(yi, mi)| yi / mi).collect();
        let d_gn: Vec<f64> = solve_neg_laplacian(&grid, &y_over_m).iter().map(|v| -v).collect();
        // Fallback metric when the Gauss-Newton solve degrades at small eps:
        // plain biharmonic inverse, scaled like the local curvature.
        let d_bh: Vec<f64> = {
            let inner: Vec<f64> = y.iter().map(|yi| yi / m_scale).collect();
            solve_neg_laplacian(&grid, &inner).iter().map(|v| -v).collect()
        };

        let mut stalled = true;
        'dirs: for d in [&d_gn, &d_bh] {
            let decr: f64 =
                g.iter().zip(d.iter()).zip(&ws.vols).map(|((gi, di), vi)| gi * di * vi).sum();
            if !(decr > 0.0) {
                continue;
            }
            let mut tstep = step;
            for _ in 0..60 {
                let mut trial: Vec<f64> =
                    u.iter().zip(d.iter()).map(|(ui, di)| ui - tstep * di).collect();
                if ws.normalize(&mut trial).is_ok() {
                    let tt = ws.laplacian(&trial)?;
                    let nt = ws.numerator(&tt, eps);
                    if nt <= num - 1e-4 * tstep * decr {
                        // Steps with negligible progress count as stalls so
                        // the smoothing keeps annealing.
                        let progressed = num - nt > 1e-14 * num.abs() && tstep > 1e-11;
                        u = trial;
                        t = tt;
                        num = nt;
                        if progressed {
                            step = (tstep * 2.0).min(8.0);
                            stalled = false;
                            break 'dirs;
                        }
                        break;
                    }
                }
                tstep *= 0.5;
            }
        }
        if stalled {
            if quadratic || eps <= EPS_FLOOR * 1.0001 {
                break;
            }
            // Anneal the smoothing and refresh the objective.
            eps = (eps * 0.5).max(EPS_FLOOR);
            num = ws.numerator(&t, eps);
            step = 1.0;
        }
        if iters % 100 == 0 {
            log::debug!(
                "system iter {iters}: num={num:.6e} grad={grad_norm:.3e} eps={eps:.3e} step={step:.3e}"
            );
        }
    }

    // Sign convention: positive bulk.
    let total: f64 = u.iter().zip(&ws.vols).map(|(ui, vi)| ui * vi).sum();
    if total < 0.0 {
        for x in u.iter_mut() {
            *x = -*x;
        }
        for x in t.iter_mut() {
            *x = -*x;
        }
    }

    let u_fn = RadialFunction { grid: Arc::clone(&grid), values: u };
    // Level without regularization.
    let level = rayleigh_system(&u_fn, spec)?;
    let clamp_tol = 1e-3 * t.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let (u_scaled, v_scaled) = rescale_to_solution(&u_fn, spec, clamp_tol)?;
    let pohozaev = pohozaev_residual(&u_scaled, &v_scaled, spec)?;

    Ok(SystemGroundState {
        u: u_scaled,
        v: v_scaled,
        level,
        pohozaev_residual: pohozaev,
        iterations: iters,
        grad_norm,
        converged,
    })
}

/// Recover the second component v = (-lap u)^{1/q} |x|^{-beta/q}.
///
/// The weight density is taken as the cell average of |x|^{-beta(r-1)}
/// (identical exponent, since r - 1 = 1/q), which makes the recovered pair
/// satisfy the discrete second equation identically.
pub fn recover_v(u: &RadialFunction, spec: &SystemSpec, clamp_tol: f64) -> Result<RadialFunction> {
    let lap = u.laplacian()?;
    let w_num = u.grid.weight_cells(-spec.base.beta * (spec.r - 1.0))?;
    let vols = u.grid.cell_volumes();
    let q = spec.base.q;
    let mut min_neg = 0.0f64;
    for &t in &lap.values {
        // -lap u should be nonnegative; track the worst excursion.
        if -t < min_neg {
            min_neg = -t;
        }
    }
    if min_neg < -clamp_tol {
        return Err(HenonError::NegativeLaplacianBeyondTol { min: min_neg, tol: clamp_tol });
    }
    let values = lap
        .values
        .iter()
        .zip(w_num.iter().zip(vols))
        .map(|(&t, (&wi, &vi))| (-t).max(0.0).powf(1.0 / q) * (wi / vi))
        .collect();
    Ok(RadialFunction { grid: Arc::clone(&u.grid), values })
}

/// Rescale a converged minimizer so the Euler-Lagrange system holds with
/// unit constants, and return the pair (u, v).
///
/// For pq = 1 (the linear eigenvalue case) the constant cannot be scaled
/// away; the pair is returned with the eigenvalue folded into v.
pub fn rescale_to_solution(
    u: &RadialFunction,
    spec: &SystemSpec,
    clamp_tol: f64,
) -> Result<(RadialFunction, RadialFunction)> {
    let v = recover_v(u, spec, clamp_tol)?;
    let (p, q) = (spec.base.p, spec.base.q);
    let lambda = el_lambda(u, &v, spec)?;
    if (p * q - 1.0).abs() < 1e-12 || !(lambda > 0.0) {
        return Ok((u.clone(), v));
    }
    let c = lambda.powf(q / (p * q - 1.0));
    let u2 = RadialFunction {
        grid: Arc::clone(&u.grid),
        values: u.values.iter().map(|x| c * x).collect(),
    };
    let v2 = RadialFunction {
        grid: Arc::clone(&u.grid),
        values: v.values.iter().map(|x| c.powf(1.0 / q) * x).collect(),
    };
    Ok((u2, v2))
}

/// Least-squares Euler-Lagrange constant of the first equation:
/// -lap v = lambda |x|^alpha u^p.
fn el_lambda(u: &RadialFunction, v: &RadialFunction, spec: &SystemSpec) -> Result<f64> {
    let lap_v = v.laplacian()?;
    let w_den = u.grid.weight_cells(spec.base.alpha)?;
    let vols = u.grid.cell_volumes();
    let p = spec.base.p;
    let mut ab = 0.0;
    let mut bb = 0.0;
    for i in 0..u.grid.m {
        let a = -lap_v.values[i];
        let b = (w_den[i] / vols[i]) * u.values[i].abs().powf(p - 1.0) * u.values[i];
        ab += a * b * vols[i];
        bb += b * b * vols[i];
    }
    if !(bb > 0.0) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(ab / bb)
}

/// Best-fit constant and relative misfit of the first equation
/// -lap v = lambda |x|^alpha u^p in the cell-volume norm.
fn el_fit(u: &RadialFunction, v: &RadialFunction, spec: &SystemSpec) -> Result<(f64, f64)> {
    let lambda = el_lambda(u, v, spec)?;
    let lap_v = v.laplacian()?;
    let w_den = u.grid.weight_cells(spec.base.alpha)?;
    let vols = u.grid.cell_volumes();
    let p = spec.base.p;
    let mut err2 = 0.0;
    let mut ref2 = 0.0;
    for i in 0..u.grid.m {
        let rhs = lambda * (w_den[i] / vols[i]) * u.values[i].abs().powf(p - 1.0) * u.values[i];
        let e = -lap_v.values[i] - rhs;
        err2 += e * e * vols[i];
        ref2 += rhs * rhs * vols[i];
    }
    if !(ref2 > 0.0) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok((lambda, (err2 / ref2).sqrt()))
}

/// Relative Euler-Lagrange residual of the pair, with the constant of the
/// first equation fitted by least squares (1 after rescaling, or the
/// eigenvalue when pq = 1).
pub fn el_residual(u: &RadialFunction, v: &RadialFunction, spec: &SystemSpec) -> Result<f64> {
    Ok(el_fit(u, v, spec)?.1)
}

/// Pohozaev boundary identity residual
/// | omega u'(1) v'(1) - gap * int |x|^alpha |u|^{p+1} |.
///
/// Expects a pair rescaled to unit Euler-Lagrange constants; rejects pairs
/// whose first-equation residual exceeds 5%.
pub fn pohozaev_residual(u: &RadialFunction, v: &RadialFunction, spec: &SystemSpec) -> Result<f64> {
    let zero_u = u.values.iter().all(|&x| x == 0.0);
    let zero_v = v.values.iter().all(|&x| x == 0.0);
    if zero_u && zero_v {
        return Ok(0.0);
    }
    let (lambda, res) = el_fit(u, v, spec)?;
    if res > 0.05 {
        return Err(HenonError::NotASolution { residual: res, tol: 0.05 });
    }
    let grid = &u.grid;
    let h = grid.h;
    let m = grid.m;
    let omega = unit_sphere_area(grid.n);
    // One-sided normal derivatives at r = 1 (both components vanish there).
    let du = -u.values[m - 1] / (h / 2.0);
    let dv = -v.values[m - 1] / (h / 2.0);
    let boundary = omega * du * dv;
    let gap = hyperbola_gap(&spec.base);
    let mass = u.weighted_integral_abs_pow(spec.base.alpha, spec.base.p + 1.0)?;
    Ok((boundary - gap * lambda * mass).abs())
}

/// Quotient of a boundary cap profile u(x) = (1 - |x-x0|^2/w^2)^2 centered
/// at distance w from the boundary, by quadrature independent of any grid.
pub fn system_bump_quotient(spec: &SystemSpec, width: f64) -> Result<f64> {
    if !(width > 0.0 && width < 0.5) {
        return Err(HenonError::InvalidSpec(format!(
            "cap width must lie in (0, 1/2), got {width}"
        )));
    }
    let n = spec.base.n;
    let nf = n as f64;
    let (r, p) = (spec.r, spec.base.p);
    let (alpha, beta) = (spec.base.alpha, spec.base.beta);
    let r0 = 1.0 - width;
    let omega_sub = if n >= 3 { unit_sphere_area(n - 1) } else { 2.0 };

    let profile = |s: f64| -> f64 {
        let z = 1.0 - s * s;
        z * z
    };
    let lap_profile = |s: f64| -> f64 {
        // lap of (1 - s^2)^2 in the cap variable: phi'' + (N-1) phi'/s,
        // phi' = -4s(1-s^2), phi'' = -4 + 12 s^2.
        (-4.0 + 12.0 * s * s) + (nf - 1.0) * (-4.0 * (1.0 - s * s))
    };

    let n_rho = 400usize;
    let n_gam = 200usize;
    let drho = width / n_rho as f64;
    let dgam = std::f64::consts::PI / n_gam as f64;
    let mut num = 0.0;
    let mut den0 = 0.0;
    for ir in 0..n_rho {
        let rho = (ir as f64 + 0.5) * drho;
        let s = rho / width;
        let lap_u = lap_profile(s) / (width * width);
        let u = profile(s);
        // Angular average of the two radial weights over the cap shell.
        let mut w_num_avg = 0.0;
        let mut w_den_avg = 0.0;
        for ig in 0..n_gam {
            let gam = (ig as f64 + 0.5) * dgam;
            let x = (r0 * r0 + rho * rho + 2.0 * r0 * rho * gam.cos()).sqrt();
            let sphere = gam.sin().powf(nf - 2.0) * dgam;
            w_num_avg += x.powf(-beta * (r - 1.0)) * sphere;
            w_den_avg += x.powf(alpha) * sphere;
        }
        let shell = omega_sub * rho.powf(nf - 1.0) * drho;
        num += lap_u.abs().powf(r) * w_num_avg * shell;
        den0 += u.powf(p + 1.0) * w_den_avg * shell;
    }
    if !(den0 > DENOM_FLOOR) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(num / den0.powf(r / (p + 1.0)))
}

/// Minimum of the cap quotient over a small family of widths ~ c/alpha.
pub fn system_bump_upper(spec: &SystemSpec) -> Result<f64> {
    let mut best = f64::INFINITY;
    for c in [1.0, 1.5, 2.0, 3.0, 4.5, 6.0] {
        let w = (c / spec.base.alpha.max(12.0)).min(0.4);
        best = best.min(system_bump_quotient(spec, w)?);
    }
    Ok(best)
}

/// Relative margin by which the bump upper bound must undercut the radial
/// level before symmetry breaking is declared.
pub const CERT_MARGIN: f64 = 0.05;

/// Compare the radial level against the translated boundary-cap family.
pub fn system_symmetry_certificate(
    spec: &SystemSpec,
    m: usize,
    opts: &SolveOpts,
) -> Result<SymmetryCertificate> {
    if !(spec.base.alpha >= 0.0) {
        return Err(HenonError::HypothesisViolation(format!(
            "bump certificate needs alpha >= 0, got {}",
            spec.base.alpha
        )));
    }
    let nf = spec.base.n as f64;
    let m_gap = nf / (spec.base.p + 1.0) + nf / (spec.base.q + 1.0) - (nf - 2.0);
    if !(m_gap > 0.0) {
        return Err(HenonError::HypothesisViolation(format!(
            "bump certificate needs N/(p+1)+N/(q+1) > N-2, gap = {m_gap}"
        )));
    }
    let rad = minimize_system_radial(spec, m, opts)?;
    let mut best = f64::INFINITY;
    let mut best_w = 0.0;
    for c in [1.0, 1.5, 2.0, 3.0, 4.5, 6.0] {
        let w = (c / spec.base.alpha.max(12.0)).min(0.4);
        let val = system_bump_quotient(spec, w)?;
        if val < best {
            best = val;
            best_w = w;
        }
    }
    Ok(SymmetryCertificate {
        rad_level: rad.level,
        bump_upper: best,
        bump_width: best_w,
        breaks: best < rad.level * (1.0 - CERT_MARGIN),
    })
}
