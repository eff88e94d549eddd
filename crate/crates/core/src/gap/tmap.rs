//! The map `T(x, y) = (y, κ(x, y) y - x)` with `κ = ⌊(1 + x)/y⌋` on the
//! triangle `Ω = {0 < x, y <= 1, x + y > 1}`.
//!
//! For consecutive Farey denominators `q1, q2` of order `Q`,
//! `T(q1/Q, q2/Q) = (q2/Q, q3/Q)`, so orbits of `T` shadow the Farey
//! recurrence in normalized coordinates.

use crate::error::{Error, Result};

/// Slack allowed on the edges of `Ω` for floating-point states.
pub const OMEGA_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TState {
    pub x: f64,
    pub y: f64,
}

pub fn in_omega(x: f64, y: f64) -> bool {
    x > 0.0 && y > 0.0 && x <= 1.0 + OMEGA_TOL && y <= 1.0 + OMEGA_TOL && x + y > 1.0 - OMEGA_TOL
}

impl TState {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !in_omega(x, y) {
            return Err(Error::OutsideTriangle { x, y });
        }
        Ok(TState { x, y })
    }
}

/// `⌊(1 + x)/y⌋`, nudged up when `(1 + x)/y` is an integer up to rounding,
/// so lattice points on the edge `x + y = 1` of the image are not lost.
#[inline]
pub(crate) fn kappa_unchecked(x: f64, y: f64) -> i64 {
    let t = 1.0 + x;
    let mut k = (t / y).floor();
    if (k + 1.0) * y <= t + OMEGA_TOL {
        k += 1.0;
    } else if k * y > t + OMEGA_TOL {
        k -= 1.0;
    }
    k as i64
}

pub fn kappa(x: f64, y: f64) -> Result<i64> {
    TState::new(x, y)?;
    Ok(kappa_unchecked(x, y))
}

#[inline]
pub(crate) fn t_map_unchecked(x: f64, y: f64) -> (f64, f64) {
    (y, kappa_unchecked(x, y) as f64 * y - x)
}

pub fn t_map(s: TState) -> Result<TState> {
    TState::new(s.x, s.y)?;
    let (x, y) = t_map_unchecked(s.x, s.y);
    TState::new(x, y)
}

/// `[s, T s, ..., T^n s]`.
pub fn t_orbit(s: TState, n: usize) -> Result<Vec<TState>> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = TState::new(s.x, s.y)?;
    out.push(cur);
    for _ in 0..n {
        cur = t_map(cur)?;
        out.push(cur);
    }
    Ok(out)
}

pub fn phi_fn(x: f64, y: f64) -> Result<f64> {
    nonzero(x, y)?;
    Ok(phi_unchecked(x, y))
}

pub fn psi_fn(x: f64, y: f64) -> Result<f64> {
    nonzero(x, y)?;
    Ok(psi_unchecked(x, y))
}

pub fn rho_fn(x: f64, y: f64) -> Result<f64> {
    nonzero(x, y)?;
    Ok(1.0 / (x * y))
}

fn nonzero(x: f64, y: f64) -> Result<()> {
    if x == 0.0 || y == 0.0 {
        return Err(Error::OutsideTriangle { x, y });
    }
    Ok(())
}

/// `(1 + y)/x - 2 - ⌊y/x⌋`.
#[inline]
pub(crate) fn phi_unchecked(x: f64, y: f64) -> f64 {
    (1.0 + y) / x - 2.0 - (y / x).floor()
}

/// `(1 - x)/y - 1 + ⌊x/y⌋`.
#[inline]
pub(crate) fn psi_unchecked(x: f64, y: f64) -> f64 {
    (1.0 - x) / y - 1.0 + (x / y).floor()
}

/// A point `(x/den, y/den)` of the scaled lattice, mapped exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
    pub den: i64,
}

impl LatticePoint {
    pub fn new(x: i64, y: i64, den: i64) -> Result<Self> {
        if den < 1 || x < 1 || y < 1 || x > den || y > den || x + y <= den {
            return Err(Error::OutsideTriangle { x: x as f64 / den as f64, y: y as f64 / den as f64 });
        }
        Ok(LatticePoint { x, y, den })
    }

    pub fn kappa(self) -> i64 {
        (self.den + self.x) / self.y
    }

    pub fn t_map(self) -> LatticePoint {
        LatticePoint { x: self.y, y: self.kappa() * self.y - self.x, den: self.den }
    }

    pub fn to_state(self) -> TState {
        TState { x: self.x as f64 / self.den as f64, y: self.y as f64 / self.den as f64 }
    }
}
