//! The planar regions whose areas give the constants `C_r(η)`.
//!
//! Every region lives over a fixed `w ∈ (1/2, 1]` in the `(u, v)` plane and
//! has the form `{u in some interval, lower(u) <= v <= upper(u)}`, so its
//! area is a one-dimensional integral of the height `upper - lower`.
//!
//! * `Ω_1`: runs of one Farey step.
//! * `Ω_{2,1}^{(k)}`, `Ω_{2,2}^{(ℓ)}`: runs of two steps, split by
//!   `k = ⌊q_2/q_1⌋ >= 3` (first family) or `ℓ = ⌊q_2/(q_2 - q_1)⌋ >= 2`
//!   (second family). Both carry the constraint `u <= 2w - 1`, which says
//!   the middle Farey step has `ν = 1`.
//! * `Ω_{3,r}`: runs of `r` steps, described through the orbit of `(u, w)`
//!   under the triangle map.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gap::tmap::{in_omega, kappa_unchecked, phi_unchecked, psi_unchecked};
use crate::quadrature::{integrate_piecewise, PiecewiseOpts, Sample, SeamHasher};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Region {
    Omega1,
    Omega21 { k: u32 },
    Omega22 { ell: u32 },
    /// Orbit description for runs of `r` steps. Defined for `r >= 2`; for
    /// `r = 2` it describes the union of the two-step families.
    Omega3 { r: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RegionSpec {
    pub region: Region,
    pub eta: f64,
}

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.5 && w <= 1.0) {
        return Err(Error::InvalidArgument(format!("w = {w} is outside (1/2, 1]")));
    }
    Ok(())
}

impl RegionSpec {
    pub fn new(region: Region, eta: f64) -> Result<Self> {
        let ok = match region {
            Region::Omega1 => true,
            Region::Omega21 { k } => k >= 3,
            Region::Omega22 { ell } => ell >= 2,
            Region::Omega3 { r } => r >= 2,
        };
        if !ok || !(eta > 0.0) {
            return Err(Error::InvalidArgument(format!("invalid region {region:?} with eta = {eta}")));
        }
        Ok(RegionSpec { region, eta })
    }

    /// `u`-interval cut out by the linear constraints; the region lies in
    /// this interval times `[0, w]`.
    pub fn u_box(&self, w: f64) -> (f64, f64) {
        match self.region {
            Region::Omega1 | Region::Omega3 { .. } => (1.0 - w, w),
            Region::Omega21 { k } => {
                let k = k as f64;
                ((1.0 - w).max(w / k), w / (k - 1.0))
            }
            Region::Omega22 { ell } => {
                let l = ell as f64;
                ((1.0 - w).max((l - 1.0) * w / l), l * w / (l + 1.0))
            }
        }
    }

    /// Membership, written directly from the set definitions.
    pub fn contains(&self, w: f64, u: f64, v: f64) -> bool {
        let eta = self.eta;
        let (lo, hi) = self.u_box(w);
        match self.region {
            Region::Omega1 => {
                (1.0 - w).max(1.0 / (eta * w)) <= u && u <= w && (3.0 * w - 1.0 - u).max(0.0) <= v && v <= w
            }
            Region::Omega21 { k } => {
                let k = k as f64;
                lo <= u
                    && u <= hi
                    && u * (w - u) >= 1.0 / eta
                    && u <= 2.0 * w - 1.0
                    && 0.0 <= v
                    && v <= w
                    && v <= w * (1.0 - w) / (w - u)
                    && v <= w * (1.0 + w - (k + 1.0) * u) / u
            }
            Region::Omega22 { ell } => {
                let l = ell as f64;
                lo <= u
                    && u <= hi
                    && u * (w - u) >= 1.0 / eta
                    && u <= 2.0 * w - 1.0
                    && 0.0 <= v
                    && v <= w
                    && v <= w * (1.0 + w - 3.0 * u) / u
                    && v <= w * (1.0 + (l - 2.0) * w - (l - 1.0) * u) / (w - u)
            }
            Region::Omega3 { r } => match orbit_bounds(r, w, u) {
                Some(b) => lo <= u && u <= hi && b.rho_sum <= eta && b.lower <= v && v <= b.upper,
                None => false,
            },
        }
    }

    /// `upper(u) - lower(u)` where positive, labelled by the active branch.
    pub fn height(&self, w: f64, u: f64) -> Sample {
        match self.region {
            Region::Omega1 => {
                let lower = 3.0 * w - 1.0 - u;
                let (lower, which) = if lower > 0.0 { (lower, 1) } else { (0.0, 2) };
                positive(w - lower, SeamHasher::new().add(which))
            }
            Region::Omega21 { k } => {
                let k = k as f64;
                let bounds = [w, w * (1.0 - w) / (w - u), w * (1.0 + w - (k + 1.0) * u) / u];
                let (i, up) = argmin(&bounds);
                positive(up, SeamHasher::new().add(i))
            }
            Region::Omega22 { ell } => {
                let l = ell as f64;
                let bounds =
                    [w, w * (1.0 + w - 3.0 * u) / u, w * (1.0 + (l - 2.0) * w - (l - 1.0) * u) / (w - u)];
                let (i, up) = argmin(&bounds);
                positive(up, SeamHasher::new().add(i))
            }
            Region::Omega3 { r } => {
                let mut seam = SeamHasher::new();
                match orbit_bounds_labelled(r, w, u, &mut seam) {
                    Some(b) if b.rho_sum <= self.eta => positive(b.upper - b.lower, &mut seam),
                    _ => Sample::ZERO,
                }
            }
        }
    }

    /// The `u`-interval outside of which the height vanishes identically.
    fn support(&self, w: f64) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = self.u_box(w);
        match self.region {
            Region::Omega1 => lo = lo.max(1.0 / (self.eta * w)).max(2.0 * w - 1.0),
            Region::Omega21 { .. } | Region::Omega22 { .. } => {
                let disc = w * w - 4.0 / self.eta;
                if disc < 0.0 {
                    return None;
                }
                let s = disc.sqrt();
                lo = lo.max((w - s) / 2.0);
                hi = hi.min((w + s) / 2.0).min(2.0 * w - 1.0);
            }
            Region::Omega3 { .. } => {}
        }
        (lo < hi).then_some((lo, hi))
    }

    /// Area by quadrature of the height over its support.
    pub fn area_quadrature(&self, w: f64, opts: PiecewiseOpts) -> f64 {
        if let Region::Omega3 { r } = self.region {
            if self.eta <= r as f64 {
                return 0.0;
            }
        }
        match self.support(w) {
            Some((lo, hi)) => integrate_piecewise(&|u| self.height(w, u), lo, hi, opts),
            None => 0.0,
        }
    }
}

fn positive(h: f64, seam: &mut SeamHasher) -> Sample {
    if h > 0.0 {
        Sample { value: h, seam: seam.finish() }
    } else {
        Sample::ZERO
    }
}

fn argmin(xs: &[f64]) -> (usize, f64) {
    xs.iter().copied().enumerate().fold((0, f64::INFINITY), |best, (i, x)| if x < best.1 { (i, x) } else { best })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitBounds {
    pub rho_sum: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Bounds of the orbit region at `(u, w)`: the sum of `𝔯` over the first
/// `r` orbit points, `max(0, w Φ(P_1), ..., w Φ(P_{r-1}))` and
/// `min(w, w Φ(P_0), w Ψ(P_{r-1}))`. `None` when the orbit leaves the
/// triangle.
pub fn orbit_bounds(r: u32, w: f64, u: f64) -> Option<OrbitBounds> {
    orbit_bounds_labelled(r, w, u, &mut SeamHasher::new())
}

fn orbit_bounds_labelled(r: u32, w: f64, u: f64, seam: &mut SeamHasher) -> Option<OrbitBounds> {
    let (mut x, mut y) = (u, w);
    if !in_omega(x, y) {
        log::debug!("start ({u}, {w}) is outside the triangle");
        return None;
    }
    let mut rho_sum = 0.0;
    let (mut lower, mut lower_at) = (0.0, 0u32);
    let p0 = w * phi_unchecked(x, y);
    seam.add((y / x).floor() as i64);
    let (mut upper, mut upper_at) = if p0 < w { (p0, 1u32) } else { (w, 0u32) };
    for i in 0..r {
        rho_sum += 1.0 / (x * y);
        if i >= 1 {
            let p = w * phi_unchecked(x, y);
            seam.add((y / x).floor() as i64);
            if p > lower {
                (lower, lower_at) = (p, i);
            }
        }
        if i == r - 1 {
            let p = w * psi_unchecked(x, y);
            seam.add((x / y).floor() as i64);
            if p < upper {
                (upper, upper_at) = (p, 2);
            }
            break;
        }
        let k = kappa_unchecked(x, y);
        seam.add(k);
        (x, y) = (y, k as f64 * y - x);
        if !in_omega(x, y) {
            log::debug!("orbit of ({u}, {w}) leaves the triangle at step {}", i + 1);
            return None;
        }
    }
    seam.add(lower_at).add(upper_at);
    Some(OrbitBounds { rho_sum, lower, upper })
}

fn default_opts() -> PiecewiseOpts {
    PiecewiseOpts::default()
}

/// Area of `Ω_1(w, η)`: closed forms for `η <= 2` and `η >= 9/2`,
/// quadrature in between.
pub fn area_omega1(w: f64, eta: f64) -> Result<f64> {
    check_w(w)?;
    Ok(area_omega1_unchecked(w, eta, default_opts()))
}

pub(crate) fn area_omega1_unchecked(w: f64, eta: f64, opts: PiecewiseOpts) -> f64 {
    if eta <= 1.0 {
        return 0.0;
    }
    if eta <= 2.0 {
        let w0 = (1.0 + (1.0 + 8.0 / eta).sqrt()) / 4.0;
        return if w <= 1.0 / eta.sqrt() {
            0.0
        } else if w <= w0 {
            let m = 1.0 / (eta * w);
            (w - m) * (2.0 - 3.0 * w + m) / 2.0
        } else {
            (1.0 - w).powi(2) / 2.0
        };
    }
    if eta >= 4.5 {
        return if w <= 2.0 / 3.0 { (3.0 - 4.0 * w) * (2.0 * w - 1.0) / 2.0 } else { (1.0 - w).powi(2) / 2.0 };
    }
    RegionSpec { region: Region::Omega1, eta }.area_quadrature(w, opts)
}

/// Area of `Ω_1(w, η)` by quadrature for every `η`.
pub fn area_omega1_quadrature(w: f64, eta: f64) -> Result<f64> {
    check_w(w)?;
    Ok(RegionSpec { region: Region::Omega1, eta }.area_quadrature(w, default_opts()))
}

/// Area of `Ω_{2,1}^{(k)}` (`branch = 1`, `k >= 3`) or `Ω_{2,2}^{(ℓ)}`
/// (`branch = 2`, `ℓ >= 2`).
pub fn area_omega2(branch: u8, index: u32, w: f64, eta: f64) -> Result<f64> {
    check_w(w)?;
    let region = match branch {
        1 => Region::Omega21 { k: index },
        2 => Region::Omega22 { ell: index },
        _ => return Err(Error::InvalidArgument(format!("branch must be 1 or 2, got {branch}"))),
    };
    Ok(RegionSpec::new(region, eta)?.area_quadrature(w, default_opts()))
}

/// Area of `Ω_{3,r}(w, η)`, `r >= 3`.
pub fn area_omega3(r: u32, w: f64, eta: f64) -> Result<f64> {
    check_w(w)?;
    if r < 3 {
        return Err(Error::InvalidArgument(format!("r must be >= 3, got {r}")));
    }
    Ok(RegionSpec::new(Region::Omega3 { r }, eta)?.area_quadrature(w, default_opts()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed form valid for every `η`: with `m = max(1-w, 1/(ηw), 2w-1)`,
    /// the area is `((1-w)² - (1+m-2w)²)/2` when `m < w`.
    fn omega1_oracle(w: f64, eta: f64) -> f64 {
        let m = (1.0 - w).max(1.0 / (eta * w)).max(2.0 * w - 1.0);
        if m >= w {
            0.0
        } else {
            ((1.0 - w).powi(2) - (1.0 + m - 2.0 * w).powi(2)) / 2.0
        }
    }

    #[test]
    fn omega1_examples() {
        assert_eq!(area_omega1(0.8, 1.0).unwrap(), 0.0);
        assert!((area_omega1(0.75, 4.5).unwrap() - 1.0 / 32.0).abs() < 1e-15);
        assert!((area_omega1(0.6, 4.5).unwrap() - 0.06).abs() < 1e-15);
        assert!(area_omega1(0.5, 3.0).is_err());
        assert!(area_omega1(1.01, 3.0).is_err());
    }

    #[test]
    fn omega1_matches_general_formula() {
        for eta in [0.5, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0, 4.2, 4.5, 6.0, 100.0] {
            for i in 1..=100 {
                let w = 0.5 + i as f64 / 200.0;
                let want = omega1_oracle(w, eta);
                assert!((area_omega1(w, eta).unwrap() - want).abs() < 1e-12, "w {w} eta {eta}");
                assert!((area_omega1_quadrature(w, eta).unwrap() - want).abs() < 1e-10, "w {w} eta {eta}");
            }
        }
    }

    #[test]
    fn omega2_empty_cases() {
        // k = 3 needs w >= 2/3 for max(1-w, w/3) <= w/2
        assert_eq!(area_omega2(1, 3, 0.6, 50.0).unwrap(), 0.0);
        // u(w-u) <= w²/4 < 1/η
        assert_eq!(area_omega2(1, 3, 0.9, 4.0).unwrap(), 0.0);
        assert_eq!(area_omega2(2, 2, 0.9, 4.0).unwrap(), 0.0);
        assert!(area_omega2(2, 2, 0.9, 8.0).unwrap() > 0.0);
        assert!(area_omega2(1, 2, 0.9, 8.0).is_err());
        assert!(area_omega2(2, 1, 0.9, 8.0).is_err());
        assert!(area_omega2(3, 2, 0.9, 8.0).is_err());
    }

    #[test]
    fn omega3_examples() {
        assert_eq!(area_omega3(3, 0.9, 3.0).unwrap(), 0.0);
        assert_eq!(area_omega3(4, 0.9, 2.0).unwrap(), 0.0);
        let a = area_omega3(3, 1.0, 10.0).unwrap();
        assert!(a > 0.0 && a <= 1.0);
        assert!(area_omega3(2, 0.9, 10.0).is_err());
        for i in 1..=20 {
            let w = 0.5 + i as f64 / 40.0;
            for r in 3..=6 {
                assert!(area_omega3(r, w, 30.0).unwrap() <= w * (2.0 * w - 1.0) + 1e-12);
            }
        }
    }

    #[test]
    fn heights_agree_with_membership() {
        let specs = [
            RegionSpec::new(Region::Omega1, 3.0).unwrap(),
            RegionSpec::new(Region::Omega21 { k: 3 }, 9.0).unwrap(),
            RegionSpec::new(Region::Omega22 { ell: 2 }, 9.0).unwrap(),
            RegionSpec::new(Region::Omega3 { r: 3 }, 10.0).unwrap(),
        ];
        for spec in specs {
            for i in 1..40 {
                let w = 0.5 + i as f64 / 80.0;
                for j in 0..=50 {
                    let u = j as f64 / 50.0;
                    let h = spec.height(w, u).value;
                    let in_support = spec.support(w).is_some_and(|(lo, hi)| lo <= u && u <= hi);
                    let count = (0..=400).filter(|&t| spec.contains(w, u, w * t as f64 / 400.0)).count();
                    let approx = count as f64 / 400.0 * w;
                    let expect = if in_support { h } else { 0.0 };
                    assert!((approx - expect).abs() <= 2.0 * w / 400.0 + 1e-12, "{spec:?} w {w} u {u}: {approx} vs {h}");
                }
            }
        }
    }

    #[test]
    fn monotone_in_eta() {
        let mut prev = 0.0;
        for i in 0..40 {
            let eta = 3.0 + i as f64 * 0.25;
            let a = area_omega3(3, 0.85, eta).unwrap();
            assert!(a >= prev - 1e-12);
            prev = a;
        }
    }
}
