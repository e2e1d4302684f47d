//! Scalar weighted Rayleigh quotient: radial minimization in any dimension,
//! full minimization on the unit disk, boundary-bump upper bounds and the
//! radial-vs-full symmetry-breaking scan.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HenonError, Result};
use crate::exponents::ni_exponent;
use crate::grids::{solve_neg_laplacian, DiskFunction, DiskGrid, DiskPoisson, RadialFunction, RadialGrid};

/// Solver options shared by the scalar and system minimizers.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolveOpts {
    /// Relative KKT residual target.
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SolveOpts {
    fn default() -> Self {
        Self { tol: 1e-6, max_iters: 50_000, seed: 0 }
    }
}

/// A converged (or best-effort) minimizer of a Rayleigh quotient, normalized
/// so the weighted denominator equals 1.
#[derive(Debug, Clone)]
pub struct GroundState<F> {
    pub level: f64,
    pub minimizer: F,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
}

/// Initial guess family for the disk multistart.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitKind {
    Radial,
    BoundaryBump,
    Random,
}

/// One row of a radial-vs-full scan.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanRow {
    pub alpha: f64,
    pub s_rad: f64,
    pub s_full: f64,
    pub ratio: f64,
    pub iters_rad: usize,
    pub iters_full: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanResult {
    pub rows: Vec<ScanRow>,
}

const DENOM_FLOOR: f64 = 1e-300;

/// Scalar Rayleigh quotient on a radial function.
pub fn rayleigh_scalar_radial(u: &RadialFunction, alpha: f64, p: f64) -> Result<f64> {
    let d0 = u.weighted_integral_abs_pow(alpha, p + 1.0)?;
    if !(d0 > DENOM_FLOOR) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(u.dirichlet_energy() / d0.powf(2.0 / (p + 1.0)))
}

/// Scalar Rayleigh quotient on a disk function.
pub fn rayleigh_scalar_disk(u: &DiskFunction, alpha: f64, p: f64) -> Result<f64> {
    let d0 = u.weighted_integral_abs_pow(alpha, p + 1.0)?;
    if !(d0 > DENOM_FLOOR) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(u.dirichlet_energy() / d0.powf(2.0 / (p + 1.0)))
}

impl RadialFunction {
    /// Weighted integral of |u|^s against |x|^a.
    pub fn weighted_integral_abs_pow(&self, a: f64, s: f64) -> Result<f64> {
        let w = self.grid.weight_cells(a)?;
        Ok(w.iter()
            .zip(&self.values)
            .map(|(wi, ui)| wi * ui.abs().powf(s))
            .sum())
    }
}

impl DiskFunction {
    /// Weighted integral of |u|^s against |x|^a.
    pub fn weighted_integral_abs_pow(&self, a: f64, s: f64) -> Result<f64> {
        let w = self.grid.weight_cells_radial(a)?;
        let m_t = self.grid.m_t;
        let mut total = 0.0;
        for i in 0..self.grid.m_r {
            let mut row = 0.0;
            for j in 0..m_t {
                row += self.values[i * m_t + j].abs().powf(s);
            }
            total += w[i] * row;
        }
        Ok(total)
    }
}

fn validate_scalar(n: u32, p: f64, alpha: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(HenonError::InvalidSpec(format!("need p >= 1, got {p}")));
    }
    if !(alpha > -(n as f64)) {
        return Err(HenonError::WeightOutOfRange { a: alpha, min: -(n as f64) });
    }
    if n >= 3 {
        let limit = ni_exponent(n, alpha)?;
        if p + 1.0 >= limit {
            return Err(HenonError::SupercriticalExponent { p, limit });
        }
    }
    Ok(())
}

/// Minimize the scalar quotient over radial functions on the unit ball.
///
/// Projected gradient on the unit weighted-denominator sphere, inverse
/// Laplacian metric, Armijo backtracking.
pub fn minimize_radial(
    n: u32,
    p: f64,
    alpha: f64,
    m: usize,
    opts: &SolveOpts,
) -> Result<GroundState<RadialFunction>> {
    validate_scalar(n, p, alpha)?;
    let grid = RadialGrid::new(n, m)?;
    let w = grid.weight_cells(alpha)?;
    let vols = grid.cell_volumes().to_vec();
    let mut u = grid.sample(|r| 1.0 - r * r).values;

    let normalize = |u: &mut [f64]| -> Result<()> {
        let d0: f64 = w.iter().zip(u.iter()).map(|(wi, ui)| wi * ui.abs().powf(p + 1.0)).sum();
        if !(d0 > DENOM_FLOOR) {
            return Err(HenonError::ZeroDenominator);
        }
        let s = d0.powf(-1.0 / (p + 1.0));
        for v in u.iter_mut() {
            *v *= s;
        }
        Ok(())
    };
    let energy = |u: &[f64]| -> f64 {
        RadialFunction { grid: Arc::clone(&grid), values: u.to_vec() }.dirichlet_energy()
    };

    normalize(&mut u)?;
    let mut iters = 0;

    // Normalized fixed-point sweeps (inverse power iteration for p = 1)
    // contract to the critical point in the basin of the initial guess;
    // the descent below then only confirms stationarity.
    let mut fp_change = f64::INFINITY;
    while iters < opts.max_iters.min(400) && fp_change > 1e-13 {
        iters += 1;
        let rhs: Vec<f64> = (0..m)
            .map(|i| (w[i] / vols[i]) * u[i].abs().powf(p - 1.0) * u[i])
            .collect();
        let mut u2 = solve_neg_laplacian(&grid, &rhs);
        if normalize(&mut u2).is_err() || u2.iter().any(|x| !x.is_finite()) {
            break;
        }
        let sup = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        fp_change =
            u.iter().zip(&u2).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max) / sup.max(1e-300);
        u = u2;
    }

    let mut e = energy(&u);
    let mut step = 1.0f64;
    let mut grad_norm = f64::INFINITY;
    let mut converged = false;

    while iters < opts.max_iters {
        iters += 1;
        let uf = RadialFunction { grid: Arc::clone(&grid), values: u.clone() };
        let lap = uf.laplacian()?;
        // Function-space gradient of R at denominator = 1.
        let g: Vec<f64> = (0..m)
            .map(|i| {
                -2.0 * lap.values[i]
                    - 2.0 * e * (w[i] / vols[i]) * u[i].abs().powf(p - 1.0) * u[i]
            })
            .collect();
        let gnorm2: f64 = g.iter().zip(&vols).map(|(gi, vi)| gi * gi * vi).sum();
        grad_norm = gnorm2.sqrt() / (2.0 * e);
        if grad_norm <= opts.tol {
            converged = true;
            break;
        }
        let d = solve_neg_laplacian(&grid, &g);
        let decr: f64 = g.iter().zip(&d).zip(&vols).map(|((gi, di), vi)| gi * di * vi).sum();
        if !(decr > 0.0) {
            break;
        }
        // Armijo backtracking on the renormalized iterate.
        let mut accepted = false;
        let mut t = step;
        for _ in 0..60 {
            let mut trial: Vec<f64> = u.iter().zip(&d).map(|(ui, di)| ui - t * di).collect();
            if normalize(&mut trial).is_ok() {
                let et = energy(&trial);
                if et <= e - 1e-4 * t * decr {
                    u = trial;
                    e = et;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (t * 2.0).min(8.0);
    }

    // Sign normalization and |.|: the quotient does not increase.
    let total: f64 = u.iter().zip(&vols).map(|(ui, vi)| ui * vi).sum();
    let flip = if total < 0.0 { -1.0 } else { 1.0 };
    for v in u.iter_mut() {
        *v = (flip * *v).abs();
    }
    normalize(&mut u)?;
    let e = energy(&u);
    Ok(GroundState {
        level: e,
        minimizer: RadialFunction { grid, values: u },
        iterations: iters,
        grad_norm,
        converged,
    })
}

/// Boundary bump on the disk: C^1 radial tent profile of width `width`
/// against the boundary, cos-hat in theta, peak at theta = 0.
#[derive(Debug, Clone)]
pub struct BoundaryBump {
    pub function: DiskFunction,
    /// Rayleigh quotient of the continuum bump by fine local quadrature.
    pub r_value: f64,
    pub width: f64,
    pub theta_width: f64,
}

/// Default bump width: half-life in alpha, capped away from 1/2.
pub fn default_bump_width(alpha: f64) -> f64 {
    (3.0 / alpha.max(7.0)).min(0.42)
}

fn bump_profile(s: f64) -> f64 {
    // sin^2 tent on [0, 2], peak at s = 1.
    if s <= 0.0 || s >= 2.0 {
        0.0
    } else {
        let v = (std::f64::consts::FRAC_PI_2 * s).sin();
        v * v
    }
}

fn bump_profile_deriv(s: f64) -> f64 {
    if s <= 0.0 || s >= 2.0 {
        0.0
    } else {
        std::f64::consts::FRAC_PI_2 * (std::f64::consts::PI * s).sin()
    }
}

fn wrap_angle(t: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut x = t % two_pi;
    if x > std::f64::consts::PI {
        x -= two_pi;
    } else if x < -std::f64::consts::PI {
        x += two_pi;
    }
    x
}

/// Build the bump and evaluate its Rayleigh quotient by quadrature that is
/// independent of the working grid resolution.
pub fn boundary_bump(alpha: f64, p: f64, grid: &Arc<DiskGrid>, width: f64) -> Result<BoundaryBump> {
    if !(width > 0.0 && width < 0.5) {
        return Err(HenonError::InvalidSpec(format!(
            "bump width must lie in (0, 1/2), got {width}"
        )));
    }
    let theta_w = (2.0 * width).min(std::f64::consts::PI);
    let value = |r: f64, t: f64| -> f64 {
        let s = (1.0 - r) / width;
        let a = wrap_angle(t).abs();
        if a >= theta_w {
            return 0.0;
        }
        let hat = (std::f64::consts::FRAC_PI_2 * a / theta_w).cos();
        bump_profile(s) * hat * hat
    };
    let function = grid.sample(value);
    let r_value = bump_quotient(alpha, p, width)?;
    Ok(BoundaryBump { function, r_value, width, theta_width: theta_w })
}

/// Rayleigh quotient of the continuum boundary bump of the given width,
/// by local quadrature over its support. No grid involved.
pub fn bump_quotient(alpha: f64, p: f64, width: f64) -> Result<f64> {
    if !(width > 0.0 && width < 0.5) {
        return Err(HenonError::InvalidSpec(format!(
            "bump width must lie in (0, 1/2), got {width}"
        )));
    }
    let theta_w = (2.0 * width).min(std::f64::consts::PI);
    // Local fine quadrature over the support [1-2w, 1] x [-tw, tw].
    let n_r = 600usize;
    let n_t = 400usize;
    let r_lo = (1.0 - 2.0 * width).max(0.0);
    let dr = (1.0 - r_lo) / n_r as f64;
    let dt = 2.0 * theta_w / n_t as f64;
    let mut num = 0.0;
    let mut den0 = 0.0;
    for ir in 0..n_r {
        let r = r_lo + (ir as f64 + 0.5) * dr;
        let s = (1.0 - r) / width;
        let phi = bump_profile(s);
        let dphi_dr = -bump_profile_deriv(s) / width;
        for it in 0..n_t {
            let t = -theta_w + (it as f64 + 0.5) * dt;
            let a = t.abs();
            let hat_c = (std::f64::consts::FRAC_PI_2 * a / theta_w).cos();
            let hat = hat_c * hat_c;
            let dhat = -std::f64::consts::FRAC_PI_2 / theta_w
                * (std::f64::consts::PI * a / theta_w).sin()
                * t.signum();
            let u = phi * hat;
            let ur = dphi_dr * hat;
            let ut = phi * dhat;
            num += (ur * ur + ut * ut / (r * r)) * r * dr * dt;
            den0 += r.powf(alpha) * u.abs().powf(p + 1.0) * r * dr * dt;
        }
    }
    if !(den0 > DENOM_FLOOR) {
        return Err(HenonError::ZeroDenominator);
    }
    Ok(num / den0.powf(2.0 / (p + 1.0)))
}

/// Minimum of the bump quotient over a small family of widths ~ c/alpha:
/// an unconstrained upper bound for the ground level on the disk.
pub fn bump_upper_bound(alpha: f64, p: f64) -> Result<f64> {
    let mut best = f64::INFINITY;
    for c in [1.5, 2.0, 3.0, 4.5, 6.0] {
        let w = (c / alpha.max(12.0)).min(0.42);
        best = best.min(bump_quotient(alpha, p, w)?);
    }
    Ok(best)
}

fn disk_initial(kind: InitKind, grid: &Arc<DiskGrid>, alpha: f64, p: f64, seed: u64) -> Result<DiskFunction> {
    match kind {
        InitKind::Radial => Ok(grid.sample(|r, _| 1.0 - r * r)),
        InitKind::BoundaryBump => {
            let w = default_bump_width(alpha.max(10.0));
            Ok(boundary_bump(alpha, p, grid, w)?.function)
        }
        InitKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
            // One inverse-Laplacian pass smooths the noise and applies the
            // Dirichlet boundary condition.
            let poisson = DiskPoisson::new(grid);
            let smooth = poisson.solve(&raw);
            Ok(DiskFunction { grid: Arc::clone(grid), values: smooth })
        }
    }
}

fn minimize_disk_single(
    p: f64,
    alpha: f64,
    init: DiskFunction,
    poisson: &DiskPoisson,
    opts: &SolveOpts,
) -> Result<GroundState<DiskFunction>> {
    let grid = Arc::clone(&init.grid);
    let w = grid.weight_cells_radial(alpha)?;
    let m_t = grid.m_t;
    let measures: Vec<f64> = (0..grid.m_r).map(|i| grid.cell_measure(i)).collect();
    let mut u = init.values;

    let normalize = |u: &mut [f64]| -> Result<()> {
        let mut d0 = 0.0;
        for i in 0..grid.m_r {
            let mut row = 0.0;
            for j in 0..m_t {
                row += u[i * m_t + j].abs().powf(p + 1.0);
            }
            d0 += w[i] * row;
        }
        if !(d0 > DENOM_FLOOR) {
            return Err(HenonError::ZeroDenominator);
        }
        let s = d0.powf(-1.0 / (p + 1.0));
        for v in u.iter_mut() {
            *v *= s;
        }
        Ok(())
    };
    let energy = |u: &[f64]| -> f64 {
        DiskFunction { grid: Arc::clone(&grid), values: u.to_vec() }.dirichlet_energy()
    };

    normalize(&mut u)?;
    let mut iters = 0;

    // Normalized fixed-point sweeps first, as in the radial solver.
    let mut fp_change = f64::INFINITY;
    while iters < opts.max_iters.min(400) && fp_change > 1e-13 {
        iters += 1;
        let mut rhs = vec![0.0; u.len()];
        for i in 0..grid.m_r {
            let wd = w[i] / measures[i];
            for j in 0..m_t {
                let idx = i * m_t + j;
                rhs[idx] = wd * u[idx].abs().powf(p - 1.0) * u[idx];
            }
        }
        let mut u2 = poisson.solve(&rhs);
        if normalize(&mut u2).is_err() || u2.iter().any(|x| !x.is_finite()) {
            break;
        }
        let sup = u.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        fp_change =
            u.iter().zip(&u2).map(|(a, b)| (a - b).abs()).fold(0.0f64, f64::max) / sup.max(1e-300);
        u = u2;
    }

    let mut e = energy(&u);
    let mut step = 1.0f64;
    let mut grad_norm = f64::INFINITY;
    let mut converged = false;

    while iters < opts.max_iters {
        iters += 1;
        let uf = DiskFunction { grid: Arc::clone(&grid), values: u.clone() };
        let lap = uf.laplacian()?;
        let mut g = vec![0.0; u.len()];
        let mut gnorm2 = 0.0;
        for i in 0..grid.m_r {
            // Local weight density ~ r_i^alpha (cell weight over cell measure).
            let wd = w[i] / measures[i];
            for j in 0..m_t {
                let idx = i * m_t + j;
                let gi = -2.0 * lap.values[idx]
                    - 2.0 * e * wd * u[idx].abs().powf(p - 1.0) * u[idx];
                g[idx] = gi;
                gnorm2 += gi * gi * measures[i];
            }
        }
        grad_norm = gnorm2.sqrt() / (2.0 * e);
        if grad_norm <= opts.tol {
            converged = true;
            break;
        }
        let d = poisson.solve(&g);
        let mut decr = 0.0;
        for i in 0..grid.m_r {
            for j in 0..m_t {
                let idx = i * m_t + j;
                decr += g[idx] * d[idx] * measures[i];
            }
        }
        if !(decr > 0.0) {
            break;
        }
        let mut accepted = false;
        let mut t = step;
        for _ in 0..60 {
            let mut trial: Vec<f64> = u.iter().zip(&d).map(|(ui, di)| ui - t * di).collect();
            if normalize(&mut trial).is_ok() {
                let et = energy(&trial);
                if et <= e - 1e-4 * t * decr {
                    u = trial;
                    e = et;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
        step = (t * 2.0).min(8.0);
    }

    let total: f64 = (0..grid.m_r)
        .flat_map(|i| (0..m_t).map(move |j| (i, j)))
        .map(|(i, j)| u[i * m_t + j] * measures[i])
        .sum();
    let flip = if total < 0.0 { -1.0 } else { 1.0 };
    for v in u.iter_mut() {
        *v = (flip * *v).abs();
    }
    normalize(&mut u)?;
    let e = energy(&u);
    Ok(GroundState {
        level: e,
        minimizer: DiskFunction { grid, values: u },
        iterations: iters,
        grad_norm,
        converged,
    })
}

/// Minimize the scalar quotient over the full disk, multistart over the
/// given init kinds, best level wins.
pub fn minimize_disk(
    p: f64,
    alpha: f64,
    grid: &Arc<DiskGrid>,
    opts: &SolveOpts,
    inits: &[InitKind],
) -> Result<GroundState<DiskFunction>> {
    if !(p >= 1.0) {
        return Err(HenonError::InvalidSpec(format!("need p >= 1, got {p}")));
    }
    if !(alpha >= 0.0) {
        return Err(HenonError::WeightOutOfRange { a: alpha, min: 0.0 });
    }
    let poisson = DiskPoisson::new(grid);
    let mut best: Option<GroundState<DiskFunction>> = None;
    let mut rng_tag = 0u64;
    for &kind in inits {
        let seed = opts.seed.wrapping_add(0x9e37_79b9_7f4a_7c15u64.wrapping_mul(rng_tag + 1));
        rng_tag += 1;
        let init = disk_initial(kind, grid, alpha, p, seed)?;
        let gs = minimize_disk_single(p, alpha, init, &poisson, opts)?;
        let better = match &best {
            None => true,
            Some(b) => gs.level < b.level,
        };
        if better {
            best = Some(gs);
        }
    }
    best.ok_or_else(|| HenonError::InvalidSpec("empty multistart set".into()))
}

/// Default multistart policy: radial, boundary bump, two random starts.
pub const DEFAULT_MULTISTART: [InitKind; 4] = [
    InitKind::Radial,
    InitKind::BoundaryBump,
    InitKind::Random,
    InitKind::Random,
];

/// Radial-vs-full levels over an increasing list of alphas (N = 2 only).
pub fn scan_alpha(
    p: f64,
    alphas: &[f64],
    m_r: usize,
    m_t: usize,
    opts: &SolveOpts,
) -> Result<ScanResult> {
    let rows: Result<Vec<ScanRow>> = alphas
        .par_iter()
        .map(|&alpha| {
            let rad = minimize_radial(2, p, alpha, m_r, opts)?;
            let grid = DiskGrid::new(m_r, m_t)?;
            let full = minimize_disk(p, alpha, &grid, opts, &DEFAULT_MULTISTART)?;
            Ok(ScanRow {
                alpha,
                s_rad: rad.level,
                s_full: full.level,
                ratio: rad.level / full.level,
                iters_rad: rad.iterations,
                iters_full: full.iterations,
            })
        })
        .collect();
    Ok(ScanResult { rows: rows? })
}

fn ratio_at(p: f64, alpha: f64, m_r: usize, m_t: usize, opts: &SolveOpts) -> Result<f64> {
    let rad = minimize_radial(2, p, alpha, m_r, opts)?;
    let grid = DiskGrid::new(m_r, m_t)?;
    let full = minimize_disk(p, alpha, &grid, opts, &DEFAULT_MULTISTART)?;
    Ok(rad.level / full.level)
}

/// Smallest alpha in [lo, hi] at which the radial/full ratio exceeds
/// 1 + delta, by bracketing scan plus bisection, with one grid refinement
/// near the crossing.
pub fn find_alpha_star(
    p: f64,
    lo: f64,
    hi: f64,
    delta: f64,
    m_r: usize,
    m_t: usize,
    opts: &SolveOpts,
) -> Result<f64> {
    let threshold = 1.0 + delta;
    let n_probe = 9;
    let mut bracket: Option<(f64, f64)> = None;
    let mut prev = lo;
    for k in 0..=n_probe {
        let a = lo + (hi - lo) * k as f64 / n_probe as f64;
        let r = ratio_at(p, a, m_r, m_t, opts)?;
        if r > threshold {
            bracket = Some((prev, a));
            break;
        }
        prev = a;
    }
    let (mut a_lo, mut a_hi) = bracket.ok_or(HenonError::NotBracketed { lo, hi })?;
    for _ in 0..7 {
        let mid = 0.5 * (a_lo + a_hi);
        let r = ratio_at(p, mid, m_r, m_t, opts)?;
        if r > threshold {
            a_hi = mid;
        } else {
            a_lo = mid;
        }
    }
    // One refinement pass near the crossing.
    let (rm_r, rm_t) = (m_r * 3 / 2, m_t * 3 / 2);
    let mut f_lo = (a_lo * 0.8).max(lo);
    let mut f_hi = (a_hi * 1.25).min(hi.max(a_hi));
    if ratio_at(p, f_lo, rm_r, rm_t, opts)? > threshold {
        return Ok(f_lo);
    }
    for _ in 0..6 {
        let mid = 0.5 * (f_lo + f_hi);
        let r = ratio_at(p, mid, rm_r, rm_t, opts)?;
        if r > threshold {
            f_hi = mid;
        } else {
            f_lo = mid;
        }
    }
    Ok(0.5 * (f_lo + f_hi))
}
