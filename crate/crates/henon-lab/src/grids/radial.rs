use std::sync::Arc;

use crate::error::{HenonError, Result};

use super::unit_sphere_area;

/// Cell-centered radial grid on [0, 1] for dimension N.
///
/// Nodes sit at r_i = (i + 1/2)/m; faces at k/m for k = 0..m. The value at
/// the boundary face r = 1 is the Dirichlet value 0, enforced through the
/// mirror ghost u_m = -u_{m-1}.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub n: u32,
    pub m: usize,
    pub h: f64,
    nodes: Vec<f64>,
    /// omega_{N-1}, surface area of the unit sphere.
    pub surface_const: f64,
    /// Exact cell volumes: omega * ((r+h/2)^N - (r-h/2)^N)/N.
    cell_volumes: Vec<f64>,
    /// Face areas S_k = omega * (k h)^{N-1}, k = 0..m.
    face_areas: Vec<f64>,
}

impl RadialGrid {
    pub fn new(n: u32, m: usize) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(HenonError::DimensionTooSmall {
                n: n as i32,
                context: "radial grid needs N >= 2".into(),
            });
        }
        if m < 3 {
            return Err(HenonError::GridTooCoarse {
                context: format!("radial grid needs at least 3 cells, got {m}"),
            });
        }
        let h = 1.0 / m as f64;
        let omega = unit_sphere_area(n);
        let nodes: Vec<f64> = (0..m).map(|i| (i as f64 + 0.5) * h).collect();
        let nf = n as f64;
        let cell_volumes = (0..m)
            .map(|i| {
                let lo = i as f64 * h;
                let hi = (i as f64 + 1.0) * h;
                omega * (hi.powf(nf) - lo.powf(nf)) / nf
            })
            .collect();
        let face_areas = (0..=m)
            .map(|k| omega * (k as f64 * h).powf(nf - 1.0))
            .collect();
        Ok(Arc::new(Self { n, m, h, nodes, surface_const: omega, cell_volumes, face_areas }))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn cell_volumes(&self) -> &[f64] {
        &self.cell_volumes
    }

    /// Exact per-cell integrals of |x|^a: omega * ((r+h/2)^{a+N} - (r-h/2)^{a+N})/(a+N).
    ///
    /// Summing w_i f_i approximates the weighted integral of f over the ball
    /// and is exact for constant f.
    pub fn weight_cells(&self, a: f64) -> Result<Vec<f64>> {
        let nf = self.n as f64;
        if !(a > -nf) {
            return Err(HenonError::WeightNotIntegrable { a, min: -nf });
        }
        let e = a + nf;
        Ok((0..self.m)
            .map(|i| {
                let lo = i as f64 * self.h;
                let hi = (i as f64 + 1.0) * self.h;
                self.surface_const * (hi.powf(e) - lo.powf(e)) / e
            })
            .collect())
    }

    /// Sample a scalar profile at the nodes.
    pub fn sample(self: &Arc<Self>, f: impl Fn(f64) -> f64) -> RadialFunction {
        let values = self.nodes.iter().map(|&r| f(r)).collect();
        RadialFunction { grid: Arc::clone(self), values }
    }

    pub fn zeros(self: &Arc<Self>) -> RadialFunction {
        RadialFunction { grid: Arc::clone(self), values: vec![0.0; self.m] }
    }

    /// Face gradients g_k, k = 0..m, of a value vector under the Dirichlet
    /// ghost convention: g_0 = 0, g_m = -2 u_{m-1}/h.
    fn face_gradients(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.m + 1];
        for k in 1..self.m {
            g[k] = (u[k] - u[k - 1]) / self.h;
        }
        g[self.m] = -2.0 * u[self.m - 1] / self.h;
        g
    }
}

/// Grid-sampled radial function with implied Dirichlet value 0 at r = 1.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    pub grid: Arc<RadialGrid>,
    pub values: Vec<f64>,
}

/// Result of checking the pointwise radial decay bound.
#[derive(Debug, Clone, Copy)]
pub struct RadialLemmaReport {
    /// Largest signed value of |u(r_i)| - bound(r_i); negative means the
    /// bound holds with slack everywhere.
    pub max_violation: f64,
}

impl RadialFunction {
    pub fn m(&self) -> usize {
        self.grid.m
    }

    /// Approximate integral of |x|^a f(x) over the unit ball.
    pub fn weighted_integral(&self, a: f64) -> Result<f64> {
        let w = self.grid.weight_cells(a)?;
        Ok(w.iter().zip(&self.values).map(|(wi, fi)| wi * fi).sum())
    }

    /// Discrete Dirichlet energy int |grad u|^2 via face fluxes.
    ///
    /// Interior faces carry weight h, the boundary face h/2, which makes
    /// sum_i (-lap u)_i u_i V_i reproduce this value exactly.
    pub fn dirichlet_energy(&self) -> f64 {
        let grid = &self.grid;
        let g = grid.face_gradients(&self.values);
        let mut e = 0.0;
        for k in 1..grid.m {
            e += grid.face_areas[k] * g[k] * g[k] * grid.h;
        }
        e += grid.face_areas[grid.m] * g[grid.m] * g[grid.m] * grid.h / 2.0;
        e
    }

    /// Conservative second-order Laplacian u'' + (N-1)u'/r with even
    /// symmetry at the origin and u(1) = 0.
    pub fn laplacian(&self) -> Result<RadialFunction> {
        let grid = &self.grid;
        if grid.m < 3 {
            return Err(HenonError::GridTooCoarse {
                context: "laplacian needs at least 3 cells".into(),
            });
        }
        let g = grid.face_gradients(&self.values);
        let values = (0..grid.m)
            .map(|i| {
                (grid.face_areas[i + 1] * g[i + 1] - grid.face_areas[i] * g[i])
                    / grid.cell_volumes[i]
            })
            .collect();
        Ok(RadialFunction { grid: Arc::clone(grid), values })
    }

    /// Verify |u(r)| <= ||grad u|| / (sqrt(omega (N-2)) r^{(N-2)/2}) at every
    /// node. Only reports; never rejects.
    pub fn radial_lemma_check(&self) -> Result<RadialLemmaReport> {
        let grid = &self.grid;
        if grid.n < 3 {
            return Err(HenonError::DimensionTooSmall {
                n: grid.n as i32,
                context: "the radial decay bound needs N >= 3".into(),
            });
        }
        let nf = grid.n as f64;
        let grad_norm = self.dirichlet_energy().sqrt();
        let c = (grid.surface_const * (nf - 2.0)).sqrt();
        let mut max_violation = f64::NEG_INFINITY;
        for (i, &r) in grid.nodes().iter().enumerate() {
            let bound = grad_norm / (c * r.powf((nf - 2.0) / 2.0));
            let v = self.values[i].abs() - bound;
            if v > max_violation {
                max_violation = v;
            }
        }
        Ok(RadialLemmaReport { max_violation })
    }
}

/// Tridiagonal solver for (-lap) d = rhs with the grid's Dirichlet ghost
/// convention. The operator is symmetric positive definite in the volume
/// inner product, so the Thomas algorithm applies without pivoting.
pub fn solve_neg_laplacian(grid: &Arc<RadialGrid>, rhs: &[f64]) -> Vec<f64> {
    let m = grid.m;
    debug_assert_eq!(rhs.len(), m);
    let h = grid.h;
    // Rows of -lap: diag b, lower a, upper c.
    let mut a = vec![0.0; m];
    let mut b = vec![0.0; m];
    let mut c = vec![0.0; m];
    for i in 0..m {
        let v = grid.cell_volumes[i];
        let s_lo = grid.face_areas[i];
        let s_hi = grid.face_areas[i + 1];
        if i + 1 == m {
            // Boundary ghost doubles the upper-face coupling.
            a[i] = -s_lo / (h * v);
            b[i] = (s_lo + 2.0 * s_hi) / (h * v);
        } else {
            a[i] = -s_lo / (h * v);
            b[i] = (s_lo + s_hi) / (h * v);
            c[i] = -s_hi / (h * v);
        }
    }
    // Thomas sweep.
    let mut cp = vec![0.0; m];
    let mut dp = vec![0.0; m];
    cp[0] = c[0] / b[0];
    dp[0] = rhs[0] / b[0];
    for i in 1..m {
        let denom = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / denom;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / denom;
    }
    let mut x = vec![0.0; m];
    x[m - 1] = dp[m - 1];
    for i in (0..m - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn ball_volumes_exact() {
        for &(n, a, expect) in &[
            (3u32, 0.0, 4.0 * PI / 3.0),
            (3, 2.0, 4.0 * PI / 5.0),
            (3, -2.0, 4.0 * PI),
        ] {
            for &m in &[5usize, 32, 257] {
                let grid = RadialGrid::new(n, m).unwrap();
                let one = grid.sample(|_| 1.0);
                assert_relative_eq!(one.weighted_integral(a).unwrap(), expect, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn weight_rejects_nonintegrable() {
        let grid = RadialGrid::new(3, 8).unwrap();
        let one = grid.sample(|_| 1.0);
        assert!(matches!(
            one.weighted_integral(-3.0),
            Err(HenonError::WeightNotIntegrable { .. })
        ));
    }

    #[test]
    fn laplacian_of_parabola() {
        for &n in &[3u32, 4] {
            let grid = RadialGrid::new(n, 64).unwrap();
            let u = grid.sample(|r| 1.0 - r * r);
            let lap = u.laplacian().unwrap();
            // Exclude the boundary cell where the one-sided ghost is O(h).
            for i in 0..grid.m - 1 {
                assert_relative_eq!(lap.values[i], -2.0 * n as f64, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn laplacian_eigenfunction_second_order() {
        // u = sin(pi r)/r is the first Dirichlet eigenfunction for N = 3.
        let err_at = |m: usize| -> f64 {
            let grid = RadialGrid::new(3, m).unwrap();
            let u = grid.sample(|r| (PI * r).sin() / r);
            let lap = u.laplacian().unwrap();
            let mut worst: f64 = 0.0;
            // Interior nodes only.
            for i in 1..grid.m - 2 {
                let e = (lap.values[i] + PI * PI * u.values[i]).abs();
                worst = worst.max(e);
            }
            worst
        };
        let e1 = err_at(64);
        let e2 = err_at(128);
        assert!(e1 < 0.02, "e1 = {e1}");
        let ratio = e1 / e2;
        assert!(ratio > 3.0 && ratio < 5.0, "convergence ratio {ratio}");
    }

    #[test]
    fn integration_by_parts_closes() {
        let grid = RadialGrid::new(3, 97).unwrap();
        let u = grid.sample(|r| (1.0 - r * r) * (0.3 + r).cos());
        let lap = u.laplacian().unwrap();
        let ibp: f64 = (0..grid.m)
            .map(|i| -lap.values[i] * u.values[i] * grid.cell_volumes()[i])
            .sum();
        let energy = u.dirichlet_energy();
        assert_relative_eq!(ibp, energy, max_relative = 1e-12);
    }

    #[test]
    fn energy_converges_to_analytic() {
        // u = 1 - r^2 in N = 3: int |grad u|^2 = int 4 r^2 = 16 pi / 5.
        let exact = 16.0 * PI / 5.0;
        let grid = RadialGrid::new(3, 256).unwrap();
        let u = grid.sample(|r| 1.0 - r * r);
        assert_relative_eq!(u.dirichlet_energy(), exact, max_relative = 2e-4);
    }

    #[test]
    fn poisson_solver_inverts_laplacian() {
        let grid = RadialGrid::new(3, 83).unwrap();
        let u = grid.sample(|r| (1.0 - r) * (1.0 + 0.5 * r));
        let lap = u.laplacian().unwrap();
        let rhs: Vec<f64> = lap.values.iter().map(|v| -v).collect();
        let back = solve_neg_laplacian(&grid, &rhs);
        for i in 0..grid.m {
            assert_relative_eq!(back[i], u.values[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn radial_lemma_linear_cone() {
        let grid = RadialGrid::new(3, 128).unwrap();
        let u = grid.sample(|r| 1.0 - r);
        let rep = u.radial_lemma_check().unwrap();
        assert!(rep.max_violation <= 0.0, "violation {}", rep.max_violation);
    }

    #[test]
    fn radial_lemma_zero_function() {
        let grid = RadialGrid::new(4, 32).unwrap();
        let u = grid.zeros();
        let rep = u.radial_lemma_check().unwrap();
        // Both sides are 0 at every node.
        assert!(rep.max_violation <= 0.0);
    }

    #[test]
    fn radial_lemma_needs_three_dimensions() {
        let grid = RadialGrid::new(2, 32).unwrap();
        let u = grid.sample(|r| 1.0 - r);
        assert!(matches!(
            u.radial_lemma_check(),
            Err(HenonError::DimensionTooSmall { .. })
        ));
    }
}
