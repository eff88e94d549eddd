//! The constants `C_r(η)` with `#H_{Q,r}(η) ~ C_r(η) Q²`, and the limiting
//! gap distribution `𝒢(λ) = (1/A) Σ_{1 <= r < λ/A} C_r(λ/A)`.

use crate::distribution::{count_constant, ZETA2};
use crate::exec::Exec;
use crate::gap::regions::{area_omega1_unchecked, Region, RegionSpec};
use crate::quadrature::{adaptive_simpson, breaks_in, PiecewiseOpts};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    /// Absolute tolerance of each outer `w`-integral.
    pub outer_tol: f64,
    /// Inner `u`-integration settings.
    pub inner: PiecewiseOpts,
    /// Equal panels the outer range is cut into, besides the known seams.
    pub panels: usize,
    pub exec: Exec,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { outer_tol: 1e-10, inner: PiecewiseOpts { tol: 1e-12, ..Default::default() }, panels: 8, exec: Exec::Parallel }
    }
}

impl QuadConfig {
    /// Looser settings for orbit-based integrands with many seams.
    pub fn orbit() -> Self {
        QuadConfig { outer_tol: 1e-8, inner: PiecewiseOpts { grid: 64, xtol: 1e-12, tol: 1e-10 }, panels: 16, ..Default::default() }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        QuadConfig { exec, ..self }
    }
}

/// `∫_lo^hi f(w) dw / w` over panels cut at `seams` and at `panels` equal
/// steps, integrated independently and summed in order.
fn outer<F: Fn(f64) -> f64 + Sync>(f: F, lo: f64, hi: f64, seams: &[f64], cfg: &QuadConfig) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let mut pts: Vec<f64> = seams.to_vec();
    pts.extend((1..cfg.panels).map(|i| lo + (hi - lo) * i as f64 / cfg.panels as f64));
    let pts = breaks_in(lo, hi, &pts);
    let panels: Vec<(f64, f64)> = pts.windows(2).map(|p| (p[0], p[1])).collect();
    let g = |w: f64| f(w) / w;
    cfg.exec
        .map(&panels, |&(a, b)| adaptive_simpson(&g, a, b, cfg.outer_tol * (b - a) / (hi - lo)))
        .into_iter()
        .sum()
}

/// `(2 log 3 - (7/2) log 2 + 1/4) / ζ(2)`, the value of `C_1(η)` for `η >= 9/2`.
pub fn c1_saturated() -> f64 {
    (2.0 * 3f64.ln() - 3.5 * 2f64.ln() + 0.25) / ZETA2
}

fn omega1_seams(eta: f64) -> Vec<f64> {
    let mut s = vec![2.0 / 3.0, 1.0 / eta.sqrt(), (1.0 + (1.0 + 8.0 / eta).sqrt()) / 4.0];
    if eta >= 4.0 {
        let d = (1.0 - 4.0 / eta).sqrt();
        s.extend([(1.0 - d) / 2.0, (1.0 + d) / 2.0]);
    }
    s
}

/// `C_1(η)`: zero for `η <= 1`, the closed form for `η >= 9/2`, otherwise the
/// `w`-integral of the `Ω_1` area.
pub fn c1(eta: f64, cfg: &QuadConfig) -> f64 {
    if eta <= 1.0 {
        return 0.0;
    }
    if eta >= 4.5 {
        return c1_saturated();
    }
    let lo = 0.5f64.max(1.0 / eta.sqrt());
    outer(|w| area_omega1_unchecked(w, eta, cfg.inner), lo, 1.0, &omega1_seams(eta), cfg) / ZETA2
}

/// `C_1(η)` by quadrature of the region height for every `η`, including the
/// range covered by the closed form.
pub fn c1_quadrature(eta: f64, cfg: &QuadConfig) -> f64 {
    if eta <= 1.0 {
        return 0.0;
    }
    let spec = RegionSpec { region: Region::Omega1, eta };
    outer(|w| spec.area_quadrature(w, cfg.inner), 0.5, 1.0, &omega1_seams(eta), cfg) / ZETA2
}

/// `C_2(η)`: the `k`-family over `3 <= k < 1 + η` plus the `ℓ`-family over
/// `2 <= ℓ < η`.
pub fn c2(eta: f64, cfg: &QuadConfig) -> f64 {
    if eta <= 2.0 {
        return 0.0;
    }
    // u(w - u) >= 1/η needs w >= 2/√η
    let w_min = 2.0 / eta.sqrt();
    let mut total = 0.0;
    let mut k = 3u32;
    while (k as f64) < 1.0 + eta {
        let lo = (1.0 - 1.0 / k as f64).max(w_min);
        let spec = RegionSpec { region: Region::Omega21 { k }, eta };
        total += outer(|w| spec.area_quadrature(w, cfg.inner), lo, 1.0, &[2.0 / 3.0], cfg);
        k += 1;
    }
    let mut ell = 2u32;
    while (ell as f64) < eta {
        let l = ell as f64;
        let lo = ((l + 1.0) / (2.0 * l + 1.0)).max(w_min);
        let spec = RegionSpec { region: Region::Omega22 { ell }, eta };
        total += outer(|w| spec.area_quadrature(w, cfg.inner), lo, 1.0, &[2.0 / 3.0], cfg);
        ell += 1;
    }
    total / ZETA2
}

/// `C_r(η)` from the orbit region; valid for `r >= 2` (for `r = 2` it
/// reproduces [`c2`]).
pub fn c_orbit(r: u32, eta: f64, cfg: &QuadConfig) -> f64 {
    if r < 2 || eta <= r as f64 {
        return 0.0;
    }
    let spec = RegionSpec { region: Region::Omega3 { r }, eta };
    outer(|w| spec.area_quadrature(w, cfg.inner), 0.5, 1.0, &[2.0 / 3.0], cfg) / ZETA2
}

/// `C_r(η)` for `r >= 3`.
pub fn c_r(r: u32, eta: f64, cfg: &QuadConfig) -> f64 {
    assert!(r >= 3, "c_r needs r >= 3");
    c_orbit(r, eta, cfg)
}

/// `C_r(η)` for any `r >= 1`, dispatching to the matching family.
pub fn c_any(r: u32, eta: f64, cfg: &QuadConfig) -> f64 {
    match r {
        0 => 0.0,
        1 => c1(eta, cfg),
        2 => c2(eta, cfg),
        _ => c_orbit(r, eta, &QuadConfig::orbit().with_exec(cfg.exec)),
    }
}

/// `𝒢(λ)`; zero on `[0, A]`.
pub fn gap_cdf_theory(lambda: f64, cfg: &QuadConfig) -> f64 {
    let a = count_constant();
    if lambda <= a {
        return 0.0;
    }
    let eta = lambda / a;
    let mut total = 0.0;
    let mut r = 1u32;
    while (r as f64) < eta {
        total += c_any(r, eta, cfg);
        r += 1;
    }
    total / a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn c1_values() {
        assert_eq!(c1(1.0, &cfg()), 0.0);
        assert_eq!(c1(0.3, &cfg()), 0.0);
        assert!((c1_saturated() - 0.0128937966596).abs() < 1e-12);
        assert!((c1(4.5, &cfg()) - 0.0128938).abs() < 1e-6);
        assert!((c1(100.0, &cfg()) - 0.0128938).abs() < 1e-6);
        assert!((c1_quadrature(4.5, &cfg()) - c1_saturated()).abs() < 1e-9);
        assert!((c1_quadrature(6.0, &cfg()) - c1_saturated()).abs() < 1e-9);
        for (eta, want) in [(1.5, 0.00047324), (2.0, 0.0020933), (3.0, 0.0070308), (4.0, 0.0125304)] {
            let got = c1(eta, &cfg());
            assert!((got - want).abs() < 5e-7, "eta {eta}: {got}");
            assert!((c1_quadrature(eta, &cfg()) - got).abs() < 1e-9);
        }
    }

    #[test]
    fn c1_is_nondecreasing() {
        let mut prev = 0.0;
        for i in 0..60 {
            let v = c1(0.8 + i as f64 * 0.07, &cfg());
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn c2_values() {
        assert_eq!(c2(2.0, &cfg()), 0.0);
        assert_eq!(c2(4.0, &cfg()), 0.0);
        for (eta, want) in [(5.0, 0.00566), (6.0, 0.012529), (8.0, 0.026524), (10.0, 0.028982)] {
            let got = c2(eta, &cfg());
            assert!((got - want).abs() < 2e-5, "eta {eta}: {got}");
        }
    }

    #[test]
    fn orbit_form_reproduces_two_step_families() {
        for eta in [4.5, 6.0, 8.0, 10.0] {
            let a = c2(eta, &cfg());
            let b = c_orbit(2, eta, &QuadConfig::orbit());
            assert!((a - b).abs() < 1e-6, "eta {eta}: {a} vs {b}");
        }
    }

    #[test]
    fn c_r_values() {
        assert_eq!(c_r(3, 3.0, &cfg()), 0.0);
        assert_eq!(c_r(3, 5.0, &QuadConfig::orbit()), 0.0);
        let c3 = c_r(3, 10.0, &QuadConfig::orbit());
        assert!((c3 - 0.00892).abs() < 1e-4, "{c3}");
        let c4 = c_r(4, 10.0, &QuadConfig::orbit());
        assert!((c4 - 0.00089).abs() < 3e-5, "{c4}");
    }

    #[test]
    fn theory_cdf_edges() {
        let a = count_constant();
        assert_eq!(gap_cdf_theory(0.0, &cfg()), 0.0);
        assert_eq!(gap_cdf_theory(a, &cfg()), 0.0);
        assert!((gap_cdf_theory(2.0 * a, &cfg()) - c1(2.0, &cfg()) / a).abs() < 1e-15);
        assert!((gap_cdf_theory(1.5 * a, &cfg()) - c1(1.5, &cfg()) / a).abs() < 1e-15);
    }

    #[test]
    fn modes_agree() {
        let s = c2(7.0, &cfg().with_exec(Exec::Sequential));
        let p = c2(7.0, &cfg().with_exec(Exec::Parallel));
        assert_eq!(s, p);
    }
}
