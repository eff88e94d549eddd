//! Gap statistics of `SF_Q`: exact enumeration of runs and gaps, the
//! triangle map, region areas, and the limiting constants `C_r(η)`.

pub mod empirical;
pub mod montecarlo;
pub mod regions;
pub mod theory;
pub mod tmap;

pub use empirical::{empirical_gap_cdf, enumerate_h, GapTable, Run};
pub use regions::{area_omega1, area_omega2, area_omega3, Region, RegionSpec};
pub use theory::{c1, c2, c_r, gap_cdf_theory, QuadConfig};
pub use tmap::{kappa, phi_fn, psi_fn, rho_fn, t_map, t_orbit, TState};
