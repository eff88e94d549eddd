//! Exact gap statistics of `SF_Q`.
//!
//! A *run* is a maximal block `γ_1 < γ_2 < ... < γ_{r+1}` of consecutive
//! Farey fractions of order `Q` with `γ_1, γ_{r+1} ∈ SF_Q` and every interior
//! term outside it; `r` is its number of Farey steps. Every element of `SF_Q`
//! except `1/1` starts exactly one run, and the run's span is the gap to the
//! next saturated fraction.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::export::fmt_real;
use crate::farey::{mod_inverse, FareyWalk, Fraction};
use crate::saturated::SaturatedSequence;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Run {
    pub steps: u32,
    pub left: Fraction,
    pub right: Fraction,
    /// Denominator of the second term, `q_2`.
    pub second_den: i64,
}

impl Run {
    /// `a_{r+1} q_1 - a_1 q_{r+1}`; the raw gap is this over `q_1 q_{r+1}`.
    pub fn det(&self) -> i64 {
        self.right.num() * self.left.den() - self.left.num() * self.right.den()
    }

    /// `Q² (γ_{r+1} - γ_1)`.
    pub fn scaled_gap(&self, order: i64) -> f64 {
        let q = order as f64;
        q * q * self.det() as f64 / (self.left.den() as f64 * self.right.den() as f64)
    }

    /// `ν = ⌊(Q + q_1)/q_2⌋`, the multiplier producing `q_3`.
    pub fn first_nu(&self, order: i64) -> i64 {
        (order + self.left.den()) / self.second_den
    }

    /// `Q² (γ_{r+1} - γ_1) <= η`, decided in exact integers when `η` is.
    pub fn within(&self, order: i64, eta: f64) -> bool {
        let lhs = order as i128 * order as i128 * self.det() as i128;
        let prod = self.left.den() as i128 * self.right.den() as i128;
        if eta.fract() == 0.0 && eta.abs() < 1e15 {
            lhs <= eta as i128 * prod
        } else {
            (lhs as f64) <= eta * prod as f64
        }
    }
}

/// Successor of the saturated `a/q` in the Farey sequence of order `Q`: its
/// denominator is the largest `q' <= Q` with `q' ≡ -ā (mod q)`.
fn farey_successor(order: i64, a: i64, q: i64, abar: i64) -> (i64, i64) {
    let r0 = (q - abar) % q;
    let q2 = order - (order - r0).rem_euclid(q);
    ((1 + a * q2) / q, q2)
}

/// The run starting at the saturated `a/q` (`0 < a < q`).
fn run_from(order: i64, a: i64, q: i64, abar: i64) -> Run {
    let (a2, q2) = farey_successor(order, a, q, abar);
    let (mut pa, mut pq, mut ca, mut cq) = (a, q, a2, q2);
    let mut steps = 1u32;
    loop {
        let h = if cq == 1 { 3 } else { cq + ca + pq % cq };
        if h <= order {
            break;
        }
        let nu = (order + pq) / cq;
        (pa, pq, ca, cq) = (ca, cq, nu * ca - pa, nu * cq - pq);
        steps += 1;
    }
    Run {
        steps,
        left: Fraction::new_unchecked(a, q),
        right: Fraction::new_unchecked(ca, cq),
        second_den: q2,
    }
}

/// Folds every run of order `Q`, split over the left denominator `q_1`.
pub fn fold_runs<A, I, F, M>(order: i64, exec: Exec, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, &Run) -> A + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    Ok(exec.fold_range(
        2..=order,
        &init,
        |mut acc, q| {
            // a + 1 + q > Q rules out h <= Q whatever the inverse
            for a in 1..q.min(order - q) {
                if let Ok(abar) = mod_inverse(a, q) {
                    if q + a + abar <= order {
                        acc = fold(acc, &run_from(order, a, q, abar));
                    }
                }
            }
            acc
        },
        &merge,
    ))
}

/// Reference: every run, in order, from one walk of the Farey sequence.
pub fn runs_by_walk(order: i64) -> Result<Vec<Run>> {
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    let mut out = Vec::new();
    let mut start: Option<(Fraction, u32, i64)> = None;
    for (f, h) in FareyWalk::new(order).with_h().skip(1) {
        if let Some((left, steps, second)) = start.as_mut() {
            *steps += 1;
            if *steps == 1 {
                *second = f.den();
            }
            if h <= order {
                out.push(Run { steps: *steps, left: *left, right: f, second_den: *second });
            }
        }
        if h <= order {
            start = Some((f, 0, 0));
        }
    }
    Ok(out)
}

/// `#H_{Q,r}(η)`: runs of exactly `r` steps spanning at most `η/Q²`.
pub fn enumerate_h(order: i64, r: u32, eta: f64, exec: Exec) -> Result<u64> {
    if order < 4 {
        return Err(Error::OrderTooSmall { order, min: 4 });
    }
    if r < 1 || r as f64 >= eta {
        return Ok(0);
    }
    fold_runs(
        order,
        exec,
        || 0u64,
        |n, run| n + (run.steps == r && run.within(order, eta)) as u64,
        |a, b| a + b,
    )
}

/// `#H_{Q,r}(η)` for `r = 1..=r_max` in one pass.
pub fn enumerate_h_all(order: i64, r_max: u32, eta: f64, exec: Exec) -> Result<Vec<u64>> {
    if order < 4 {
        return Err(Error::OrderTooSmall { order, min: 4 });
    }
    let len = r_max as usize;
    fold_runs(
        order,
        exec,
        || vec![0u64; len],
        |mut v, run| {
            if (run.steps as usize) <= len && run.within(order, eta) {
                v[run.steps as usize - 1] += 1;
            }
            v
        },
        |mut a, b| {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
            a
        },
    )
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct RunClass {
    pub count: u64,
    /// Smallest `Q² · gap` among runs of this length.
    pub min_scaled_gap: f64,
}

/// Count and smallest scaled gap for each run length.
pub fn run_histogram(order: i64, exec: Exec) -> Result<BTreeMap<u32, RunClass>> {
    fold_runs(
        order,
        exec,
        BTreeMap::new,
        |mut m: BTreeMap<u32, RunClass>, run| {
            let g = run.scaled_gap(order);
            let e = m.entry(run.steps).or_insert(RunClass { count: 0, min_scaled_gap: f64::INFINITY });
            e.count += 1;
            e.min_scaled_gap = e.min_scaled_gap.min(g);
            m
        },
        |mut a, b| {
            for (k, v) in b {
                let e = a.entry(k).or_insert(RunClass { count: 0, min_scaled_gap: f64::INFINITY });
                e.count += v.count;
                e.min_scaled_gap = e.min_scaled_gap.min(v.min_scaled_gap);
            }
            a
        },
    )
}

/// Gaps between consecutive elements of `SF_Q`, scaled by `N(Q)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapTable {
    order: i64,
    n: usize,
    /// `(a_2 q_1 - a_1 q_2, q_1 q_2)` for each gap, in sequence order.
    raw: Vec<(i64, i64)>,
    /// `N(Q) · gap`, ascending.
    sorted: Vec<f64>,
}

impl GapTable {
    pub fn from_sequence(seq: &SaturatedSequence) -> Self {
        let elems = &seq.elems()[1..];
        let n = elems.len();
        let raw: Vec<(i64, i64)> = elems
            .windows(2)
            .map(|p| {
                let det = p[1].num() * p[0].den() - p[0].num() * p[1].den();
                (det, p[0].den() * p[1].den())
            })
            .collect();
        let mut sorted: Vec<f64> = raw.iter().map(|&(d, p)| n as f64 * d as f64 / p as f64).collect();
        sorted.sort_by(f64::total_cmp);
        GapTable { order: seq.order(), n, raw, sorted }
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    /// `N(Q)`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn raw(&self) -> &[(i64, i64)] {
        &self.raw
    }

    pub fn normalized(&self) -> &[f64] {
        &self.sorted
    }

    /// `𝒢_Q(λ) = #{gaps <= λ/N(Q)} / N(Q)`.
    pub fn cdf(&self, lambda: f64) -> f64 {
        self.sorted.partition_point(|&g| g <= lambda) as f64 / self.n as f64
    }

    /// Exact `sum of raw gaps`, as a reduced fraction.
    pub fn raw_sum(&self) -> (i128, i128) {
        let (mut num, mut den) = (0i128, 1i128);
        for &(d, p) in &self.raw {
            num = num * p as i128 + d as i128 * den;
            den *= p as i128;
            let g = gcd128(num, den);
            num /= g;
            den /= g;
        }
        (num, den)
    }

    /// Every raw gap is at least `1/Q²`.
    pub fn min_gap_bound_holds(&self) -> bool {
        let q2 = self.order as i128 * self.order as i128;
        self.raw.iter().all(|&(d, p)| d as i128 * q2 >= p as i128)
    }
}

fn gcd128(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs().max(1)
}

/// `(λ, 𝒢_Q(λ))` for each `λ`.
pub fn empirical_gap_cdf(seq: &SaturatedSequence, lambdas: &[f64]) -> Vec<(f64, f64)> {
    let table = GapTable::from_sequence(seq);
    lambdas.iter().map(|&l| (l, table.cdf(l))).collect()
}

/// `start, start + step, ...` up to `stop` inclusive (with a little slack for
/// rounding), computed by index to avoid accumulated drift.
pub fn lambda_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || stop < start || !start.is_finite() || !stop.is_finite() {
        return Err(Error::InvalidArgument(format!("bad grid {start}:{stop}:{step}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// One row of a CDF curve: `λ`, `𝒢_Q(λ)`, the theoretical value, and the
/// forward difference quotients `(G(λ + step) - G(λ))/step` of both.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CdfRow {
    pub lambda: f64,
    pub g_empirical: f64,
    pub g_theory: Option<f64>,
    pub density_empirical: f64,
    pub density_theory: Option<f64>,
}

pub fn write_cdf_csv<W: Write>(rows: &[CdfRow], out: W) -> csv::Result<()> {
    let opt = |x: Option<f64>| x.map(fmt_real).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["lambda", "G_empirical", "G_theory", "density_empirical", "density_theory"])?;
    for r in rows {
        w.write_record(&[
            fmt_real(r.lambda),
            fmt_real(r.g_empirical),
            opt(r.g_theory),
            fmt_real(r.density_empirical),
            opt(r.density_theory),
        ])?;
    }
    w.flush()?;
    Ok(())
}
