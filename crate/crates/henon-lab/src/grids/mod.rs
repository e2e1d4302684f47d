//! Discrete radial functions on the unit ball (any N) and full functions on
//! the polar unit disk (N = 2).
//!
//! Grids are cell-centered with nodes r_i = (i + 1/2)/m, so singular power
//! weights |x|^a with a > -N are never evaluated at the origin and can be
//! integrated exactly per cell. Dirichlet data at r = 1 is imposed through a
//! mirror ghost value, and the Laplacians are the formal gradients of the
//! face-flux Dirichlet energies divided by the cell measure, so discrete
//! integration by parts closes to rounding.

mod disk;
mod io;
mod radial;

pub use disk::{DiskFunction, DiskGrid, DiskPoisson};
pub use io::{load_function, save_function, GridFunction};
pub use radial::{solve_neg_laplacian, RadialFunction, RadialGrid, RadialLemmaReport};

use statrs::function::gamma::gamma;

/// Surface area of the unit sphere S^{N-1} in R^N: 2 pi^{N/2} / Gamma(N/2).
pub fn unit_sphere_area(n: u32) -> f64 {
    let nf = n as f64;
    2.0 * std::f64::consts::PI.powf(nf / 2.0) / gamma(nf / 2.0)
}
