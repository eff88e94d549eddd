//! Exact arithmetic on reduced fractions in `[0, 1]`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest denominator used when a real number is turned into an exact
/// rational (`Fraction::approximate`, decimal parsing).
pub const MAX_APPROX_DEN: i64 = 1_000_000;

pub fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A reduced fraction `num/den` with `0 <= num <= den`, `den >= 1`.
///
/// Ordering is by value. Because the representation is canonical, equality
/// of fields and equality of values coincide.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fraction {
    num: i64,
    den: i64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den < 1 || num < 0 || num > den || gcd(num, den) != 1 {
            return Err(Error::InvalidFraction { num, den });
        }
        Ok(Fraction { num, den })
    }

    /// Reduces `num/den` first; still rejects values outside `[0, 1]`.
    pub fn reduced(num: i64, den: i64) -> Result<Self> {
        let g = gcd(num, den);
        if g == 0 {
            return Err(Error::InvalidFraction { num, den });
        }
        let (mut n, mut d) = (num / g, den / g);
        if d < 0 {
            n = -n;
            d = -d;
        }
        Fraction::new(n, d)
    }

    /// Caller guarantees the invariants (e.g. coprimality from a
    /// determinant-one identity).
    pub(crate) const fn new_unchecked(num: i64, den: i64) -> Self {
        Fraction { num, den }
    }

    pub fn num(self) -> i64 {
        self.num
    }

    pub fn den(self) -> i64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `right.num * left.den - left.num * right.den`; equal to 1 exactly for a
    /// unimodular pair `left < right`.
    pub fn cross(left: Fraction, right: Fraction) -> i128 {
        right.num as i128 * left.den as i128 - left.num as i128 * right.den as i128
    }

    pub fn is_unimodular_pair(left: Fraction, right: Fraction) -> bool {
        Fraction::cross(left, right) == 1
    }

    /// Best rational approximation of `x ∈ [0, 1]` with denominator at most
    /// `max_den`, from the continued-fraction convergents and the final
    /// semiconvergent.
    pub fn approximate(x: f64, max_den: i64) -> Result<Self> {
        if !(0.0..=1.0).contains(&x) || max_den < 1 {
            return Err(Error::InvalidArgument(format!(
                "cannot approximate {x} with denominator <= {max_den}"
            )));
        }
        let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
        let mut v = x;
        for _ in 0..64 {
            let a = v.floor();
            let ai = a as i64;
            let q2 = q0.saturating_add(ai.saturating_mul(q1));
            if q2 > max_den {
                let k = (max_den - q0) / q1;
                let (ps, qs) = (p0 + k * p1, q0 + k * q1);
                let semi = (ps as f64 / qs as f64 - x).abs();
                let conv = (p1 as f64 / q1 as f64 - x).abs();
                return if semi < conv { Fraction::reduced(ps, qs) } else { Fraction::reduced(p1, q1) };
            }
            let p2 = p0 + ai * p1;
            (p0, q0, p1, q1) = (p1, q1, p2, q2);
            let frac = v - a;
            if frac <= f64::EPSILON || p1 as f64 / q1 as f64 == x {
                break;
            }
            v = 1.0 / frac;
        }
        Fraction::reduced(p1, q1)
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as i128 * other.den as i128).cmp(&(other.num as i128 * self.den as i128))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `a/b` (reduced on the fly), the integers `0` and `1`, or a
/// decimal in `[0, 1]`, which is converted with [`Fraction::approximate`].
impl FromStr for Fraction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_err = |reason: &str| Error::Parse { input: s.to_string(), reason: reason.to_string() };
        if let Some((n, d)) = s.split_once('/') {
            let n: i64 = n.trim().parse().map_err(|_| parse_err("bad numerator"))?;
            let d: i64 = d.trim().parse().map_err(|_| parse_err("bad denominator"))?;
            return Fraction::reduced(n, d).map_err(|e| parse_err(&e.to_string()));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Fraction::new(n, 1).map_err(|e| parse_err(&e.to_string()));
        }
        let x: f64 = s.parse().map_err(|_| parse_err("expected a/b or a decimal"))?;
        Fraction::approximate(x, MAX_APPROX_DEN).map_err(|e| parse_err(&e.to_string()))
    }
}

/// `h(a/q) = q + a + ā`: the least order at which a fraction becomes saturated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct HValue(pub i64);

impl HValue {
    pub fn get(self) -> i64 {
        self.0
    }
}

impl fmt::Display for HValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Inverse of `a` modulo `q` in `[1, q)` by the extended Euclidean algorithm.
pub fn mod_inverse(a: i64, q: i64) -> Result<i64> {
    if q < 2 || a < 1 || a >= q {
        return Err(Error::NotInvertible { a, modulus: q });
    }
    let (mut r0, mut r1) = (q, a);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    if r0 != 1 {
        return Err(Error::NotInvertible { a, modulus: q });
    }
    Ok(if t0 < 0 { t0 + q } else { t0 })
}

/// `h(0/1) = 1`, `h(1/1) = 3`, otherwise `q + a + ā`.
pub fn h_value(f: Fraction) -> HValue {
    match (f.num, f.den) {
        (0, 1) => HValue(1),
        (1, 1) => HValue(3),
        (a, q) => HValue(q + a + mod_inverse(a, q).expect("reduced fraction is invertible")),
    }
}

/// `(a1 + a2)/(q1 + q2)` for a unimodular pair `f1 < f2`.
pub fn mediant(f1: Fraction, f2: Fraction) -> Result<Fraction> {
    if !Fraction::is_unimodular_pair(f1, f2) {
        return Err(Error::NotUnimodular { left: f1, right: f2 });
    }
    Ok(Fraction::new_unchecked(f1.num + f2.num, f1.den + f2.den))
}

/// Successor of `cur` in the Farey sequence of order `order`, given its
/// predecessor `prev`.
pub fn next_farey(order: i64, prev: Fraction, cur: Fraction) -> Result<Fraction> {
    if cur == Fraction::ONE {
        return Err(Error::NoSuccessor);
    }
    if prev.den > order
        || cur.den > order
        || prev.den + cur.den <= order
        || !Fraction::is_unimodular_pair(prev, cur)
    {
        return Err(Error::NotConsecutive { order, prev, cur });
    }
    let nu = (order + prev.den) / cur.den;
    Ok(Fraction::new_unchecked(nu * cur.num - prev.num, nu * cur.den - prev.den))
}

/// Membership in `SF_order`: `den <= order` and `h <= order`. `0/1` is never
/// saturated.
pub fn is_saturated(f: Fraction, order: i64) -> bool {
    f.num > 0 && f.den <= order && h_value(f).0 <= order
}

/// The Farey sequence of order `Q`, from `0/1` to `1/1`, by the successor
/// recurrence.
#[derive(Clone, Debug)]
pub struct FareyWalk {
    order: i64,
    // last emitted a/b, next c/d
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    started: bool,
    done: bool,
}

impl FareyWalk {
    pub fn new(order: i64) -> Self {
        assert!(order >= 1, "Farey order must be positive");
        FareyWalk { order, a: 0, b: 1, c: 1, d: order, started: false, done: false }
    }

    /// Walk that also reports `h` of every term, using the neighbour identity
    /// `ā₂ = q₁ mod q₂` for consecutive `a₁/q₁ < a₂/q₂`, so no modular
    /// inversion is needed.
    pub fn with_h(self) -> HWalk {
        HWalk { inner: self }
    }

    #[inline]
    fn step(&mut self) -> Option<(i64, i64, i64)> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some((0, 1, 1));
        }
        let (c, d) = (self.c, self.d);
        let h = if d == 1 { 3 } else { d + c + self.b % d };
        if c == 1 && d == 1 {
            self.done = true;
        } else {
            let nu = (self.order + self.b) / d;
            (self.a, self.b, self.c, self.d) = (c, d, nu * c - self.a, nu * d - self.b);
        }
        Some((c, d, h))
    }
}

impl Iterator for FareyWalk {
    type Item = Fraction;

    fn next(&mut self) -> Option<Fraction> {
        self.step().map(|(n, d, _)| Fraction::new_unchecked(n, d))
    }
}

#[derive(Clone, Debug)]
pub struct HWalk {
    inner: FareyWalk,
}

impl Iterator for HWalk {
    type Item = (Fraction, i64);

    fn next(&mut self) -> Option<(Fraction, i64)> {
        self.inner.step().map(|(n, d, h)| (Fraction::new_unchecked(n, d), h))
    }
}
