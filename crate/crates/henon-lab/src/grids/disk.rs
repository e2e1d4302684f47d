use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{HenonError, Result};

use super::radial::{RadialFunction, RadialGrid};

/// Polar grid on the unit disk: cell-centered radii r_i = (i + 1/2)/m_r,
/// uniform angles theta_j = 2 pi j / m_t, Dirichlet 0 at r = 1.
#[derive(Debug, Clone)]
pub struct DiskGrid {
    pub m_r: usize,
    pub m_t: usize,
    pub h: f64,
    pub dtheta: f64,
    nodes_r: Vec<f64>,
}

impl DiskGrid {
    pub fn new(m_r: usize, m_t: usize) -> Result<Arc<Self>> {
        if m_r < 3 {
            return Err(HenonError::GridTooCoarse {
                context: format!("disk grid needs at least 3 radial cells, got {m_r}"),
            });
        }
        if m_t < 8 {
            return Err(HenonError::GridTooCoarse {
                context: format!("disk grid needs at least 8 angular cells, got {m_t}"),
            });
        }
        let h = 1.0 / m_r as f64;
        let dtheta = 2.0 * std::f64::consts::PI / m_t as f64;
        let nodes_r = (0..m_r).map(|i| (i as f64 + 0.5) * h).collect();
        Ok(Arc::new(Self { m_r, m_t, h, dtheta, nodes_r }))
    }

    pub fn nodes_r(&self) -> &[f64] {
        &self.nodes_r
    }

    pub fn theta(&self, j: usize) -> f64 {
        j as f64 * self.dtheta
    }

    pub fn len(&self) -> usize {
        self.m_r * self.m_t
    }

    /// Exact cell measure int r dr dtheta = r_i h dtheta (cell-centered).
    pub fn cell_measure(&self, i: usize) -> f64 {
        self.nodes_r[i] * self.h * self.dtheta
    }

    /// Per-cell integrals of |x|^a over one (r, theta) cell; exact in r.
    pub fn weight_cells_radial(&self, a: f64) -> Result<Vec<f64>> {
        if !(a > -2.0) {
            return Err(HenonError::WeightNotIntegrable { a, min: -2.0 });
        }
        let e = a + 2.0;
        Ok((0..self.m_r)
            .map(|i| {
                let lo = i as f64 * self.h;
                let hi = (i as f64 + 1.0) * self.h;
                self.dtheta * (hi.powf(e) - lo.powf(e)) / e
            })
            .collect())
    }

    pub fn sample(self: &Arc<Self>, f: impl Fn(f64, f64) -> f64) -> DiskFunction {
        let mut values = Vec::with_capacity(self.len());
        for i in 0..self.m_r {
            let r = self.nodes_r[i];
            for j in 0..self.m_t {
                values.push(f(r, self.theta(j)));
            }
        }
        DiskFunction { grid: Arc::clone(self), values }
    }

    pub fn zeros(self: &Arc<Self>) -> DiskFunction {
        DiskFunction { grid: Arc::clone(self), values: vec![0.0; self.len()] }
    }
}

/// Grid-sampled function on the polar unit disk, row-major [i * m_t + j].
#[derive(Debug, Clone)]
pub struct DiskFunction {
    pub grid: Arc<DiskGrid>,
    pub values: Vec<f64>,
}

impl DiskFunction {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.m_t + j]
    }

    /// Approximate integral of |x|^a f over the disk; exact weight
    /// integration in r, uniform (periodic trapezoid) weights in theta.
    pub fn weighted_integral(&self, a: f64) -> Result<f64> {
        let w = self.grid.weight_cells_radial(a)?;
        let m_t = self.grid.m_t;
        let mut total = 0.0;
        for i in 0..self.grid.m_r {
            let mut row = 0.0;
            for j in 0..m_t {
                row += self.values[i * m_t + j];
            }
            total += w[i] * row;
        }
        Ok(total)
    }

    /// Discrete Dirichlet energy int (u_r^2 + u_theta^2 / r^2) r dr dtheta.
    ///
    /// Radial face fluxes carry weight h (h/2 at the boundary face), so the
    /// disk Laplacian below is exactly the formal gradient of this energy
    /// divided by the cell measure.
    pub fn dirichlet_energy(&self) -> f64 {
        let g = &self.grid;
        let (m_r, m_t, h, dth) = (g.m_r, g.m_t, g.h, g.dtheta);
        let mut e = 0.0;
        // Radial part.
        for j in 0..m_t {
            for k in 1..m_r {
                let rho = k as f64 * h;
                let gr = (self.at(k, j) - self.at(k - 1, j)) / h;
                e += dth * rho * gr * gr * h;
            }
            let gr = -2.0 * self.at(m_r - 1, j) / h;
            e += dth * 1.0 * gr * gr * h / 2.0;
        }
        // Angular part.
        for i in 0..m_r {
            let r = g.nodes_r()[i];
            for j in 0..m_t {
                let jn = (j + 1) % m_t;
                let d = (self.at(i, jn) - self.at(i, j)) / dth;
                e += d * d / r * h * dth;
            }
        }
        e
    }

    /// Polar Laplacian: formal gradient of the Dirichlet energy divided by
    /// the cell measure, second order in the interior.
    pub fn laplacian(&self) -> Result<DiskFunction> {
        let g = &self.grid;
        let (m_r, m_t, h, dth) = (g.m_r, g.m_t, g.h, g.dtheta);
        let mut out = vec![0.0; self.values.len()];
        for i in 0..m_r {
            let r = g.nodes_r()[i];
            let rho_lo = i as f64 * h;
            let rho_hi = (i as f64 + 1.0) * h;
            for j in 0..m_t {
                let flux_lo = if i == 0 {
                    0.0
                } else {
                    rho_lo * (self.at(i, j) - self.at(i - 1, j)) / h
                };
                let flux_hi = if i + 1 == m_r {
                    rho_hi * (-2.0 * self.at(i, j) / h)
                } else {
                    rho_hi * (self.at(i + 1, j) - self.at(i, j)) / h
                };
                let radial = (flux_hi - flux_lo) / (r * h);
                let jp = (j + 1) % m_t;
                let jm = (j + m_t - 1) % m_t;
                let angular =
                    (self.at(i, jp) - 2.0 * self.at(i, j) + self.at(i, jm)) / (r * r * dth * dth);
                out[i * m_t + j] = radial + angular;
            }
        }
        Ok(DiskFunction { grid: Arc::clone(g), values: out })
    }

    /// Average over theta, returned as a radial function on a matching
    /// N = 2 radial grid.
    pub fn theta_average(&self) -> Result<RadialFunction> {
        let g = &self.grid;
        let rgrid = RadialGrid::new(2, g.m_r)?;
        let values = (0..g.m_r)
            .map(|i| {
                (0..g.m_t).map(|j| self.at(i, j)).sum::<f64>() / g.m_t as f64
            })
            .collect();
        Ok(RadialFunction { grid: rgrid, values })
    }

    /// Max over radii of the relative theta-variation of the function,
    /// scaled by the overall sup norm.
    pub fn theta_variation(&self) -> f64 {
        let g = &self.grid;
        let sup = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        if sup == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..g.m_r {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for j in 0..g.m_t {
                let v = self.at(i, j);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            worst = worst.max((hi - lo) / sup);
        }
        worst
    }
}

/// Fast solver for (-lap) d = rhs on the disk grid: FFT in theta, Thomas
/// sweeps per angular mode in r. The factorization is precomputed, so each
/// solve is O(m_r m_t log m_t).
pub struct DiskPoisson {
    grid: Arc<DiskGrid>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    /// Per mode: lower coefficient a_i, scaled upper cp_i, inverse pivot.
    lower: Vec<Vec<f64>>,
    cp: Vec<Vec<f64>>,
    inv_pivot: Vec<Vec<f64>>,
}

impl DiskPoisson {
    pub fn new(grid: &Arc<DiskGrid>) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.m_t);
        let inv = planner.plan_fft_inverse(grid.m_t);
        let (m_r, m_t, h, dth) = (grid.m_r, grid.m_t, grid.h, grid.dtheta);
        let mut lower = Vec::with_capacity(m_t);
        let mut cp_all = Vec::with_capacity(m_t);
        let mut inv_pivot = Vec::with_capacity(m_t);
        for k in 0..m_t {
            let lambda = (2.0 - 2.0 * (k as f64 * dth).cos()) / (dth * dth);
            let mut a = vec![0.0; m_r];
            let mut b = vec![0.0; m_r];
            let mut c = vec![0.0; m_r];
            for i in 0..m_r {
                let r = grid.nodes_r()[i];
                let v = r * h;
                let s_lo = i as f64 * h;
                let s_hi = (i as f64 + 1.0) * h;
                if i + 1 == m_r {
                    a[i] = -s_lo / (h * v);
                    b[i] = (s_lo + 2.0 * s_hi) / (h * v);
                } else {
                    a[i] = -s_lo / (h * v);
                    b[i] = (s_lo + s_hi) / (h * v);
                    c[i] = -s_hi / (h * v);
                }
                b[i] += lambda / (r * r);
            }
            let mut cp = vec![0.0; m_r];
            let mut piv = vec![0.0; m_r];
            piv[0] = 1.0 / b[0];
            cp[0] = c[0] * piv[0];
            for i in 1..m_r {
                let denom = b[i] - a[i] * cp[i - 1];
                piv[i] = 1.0 / denom;
                cp[i] = c[i] * piv[i];
            }
            lower.push(a);
            cp_all.push(cp);
            inv_pivot.push(piv);
        }
        Self { grid: Arc::clone(grid), fwd, inv, lower, cp: cp_all, inv_pivot }
    }

    /// Solve (-lap) d = rhs.
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let (m_r, m_t) = (self.grid.m_r, self.grid.m_t);
        debug_assert_eq!(rhs.len(), m_r * m_t);
        // Forward FFT each radial row.
        let mut spec = vec![Complex::new(0.0, 0.0); m_r * m_t];
        let mut row = vec![Complex::new(0.0, 0.0); m_t];
        for i in 0..m_r {
            for j in 0..m_t {
                row[j] = Complex::new(rhs[i * m_t + j], 0.0);
            }
            self.fwd.process(&mut row);
            spec[i * m_t..(i + 1) * m_t].copy_from_slice(&row);
        }
        // Thomas solve per mode, complex rhs with real coefficients.
        let mut dp = vec![Complex::new(0.0, 0.0); m_r];
        for k in 0..m_t {
            let a = &self.lower[k];
            let cp = &self.cp[k];
            let piv = &self.inv_pivot[k];
            dp[0] = spec[k] * piv[0];
            for i in 1..m_r {
                dp[i] = (spec[i * m_t + k] - dp[i - 1] * a[i]) * piv[i];
            }
            let mut x_next = dp[m_r - 1];
            spec[(m_r - 1) * m_t + k] = x_next;
            for i in (0..m_r - 1).rev() {
                let x = dp[i] - x_next * cp[i];
                spec[i * m_t + k] = x;
                x_next = x;
            }
        }
        // Inverse FFT each row.
        let mut out = vec![0.0; m_r * m_t];
        let scale = 1.0 / m_t as f64;
        for i in 0..m_r {
            row.copy_from_slice(&spec[i * m_t..(i + 1) * m_t]);
            self.inv.process(&mut row);
            for j in 0..m_t {
                out[i * m_t + j] = row[j].re * scale;
            }
        }
        out
    }
}
