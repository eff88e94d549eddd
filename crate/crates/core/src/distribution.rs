//! Counting functions of the saturated sets and of the monoid against their
//! main terms.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::export::fmt_real;
use crate::farey::{FareyWalk, Fraction};
use crate::monoid::count_s_q_below;

/// `ζ(2) = π²/6`.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;

/// `A = log(4/3) / (2ζ(2))`: `N(Q) ~ A Q²`, and the mean gap of `SF_Q` in
/// units of `1/Q²`.
pub fn count_constant() -> f64 {
    (4.0f64 / 3.0).ln() / (2.0 * ZETA2)
}

/// `#S_Q ~ (log 2 / (2ζ(2))) Q²`.
pub fn monoid_constant() -> f64 {
    2f64.ln() / (2.0 * ZETA2)
}

/// `#(SF_Q ∩ [0, beta])`, from a Farey walk that stops past `beta`.
pub fn count_saturated_below(order: i64, beta: Fraction) -> Result<u64> {
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    Ok(FareyWalk::new(order)
        .with_h()
        .skip(1)
        .take_while(|&(f, _)| f <= beta)
        .filter(|&(_, h)| h <= order)
        .count() as u64)
}

/// `(Q² / 2ζ(2)) log(2(1+β)/(2+β))`.
pub fn theory_count(order: i64, beta: f64) -> f64 {
    let q = order as f64;
    q * q / (2.0 * ZETA2) * (2.0 * (1.0 + beta) / (2.0 + beta)).ln()
}

pub fn limit_cdf(beta: f64) -> f64 {
    (2.0 * (1.0 + beta) / (2.0 + beta)).ln() / (4.0f64 / 3.0).ln()
}

pub fn limit_density(beta: f64) -> f64 {
    (1.0 / (1.0 + beta) - 1.0 / (2.0 + beta)) / (4.0f64 / 3.0).ln()
}

/// `(Q² / 2ζ(2)) log(1 + β)`, the main term of the monoid count.
pub fn monoid_theory_count(order: i64, beta: f64) -> f64 {
    let q = order as f64;
    q * q / (2.0 * ZETA2) * (1.0 + beta).ln()
}

pub fn monoid_count_below(order: i64, beta: Fraction, exec: Exec) -> Result<u64> {
    count_s_q_below(order, beta, exec)
}

/// `|x - main| / main`, and 0 when the main term vanishes.
pub fn rel_error(empirical: f64, main_term: f64) -> f64 {
    if main_term == 0.0 {
        0.0
    } else {
        (empirical - main_term).abs() / main_term
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CountReport {
    pub q: i64,
    #[serde(serialize_with = "ser_fraction")]
    pub beta: Fraction,
    pub empirical: u64,
    pub main_term: f64,
    pub rel_error: f64,
}

fn ser_fraction<S: serde::Serializer>(f: &Fraction, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayVerdict {
    #[serde(serialize_with = "ser_fraction")]
    pub beta: Fraction,
    pub rel_errors: Vec<f64>,
    pub strictly_decreasing: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<CountReport>,
    pub decay: Vec<DecayVerdict>,
}

/// Counts for every `β` at once from one walk of the Farey sequence.
pub fn counts_below(order: i64, betas: &[Fraction]) -> Result<Vec<u64>> {
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    let mut idx: Vec<usize> = (0..betas.len()).collect();
    idx.sort_by_key(|&i| betas[i]);
    let mut out = vec![0u64; betas.len()];
    let mut running = 0u64;
    let mut next = 0;
    for (f, h) in FareyWalk::new(order).with_h().skip(1) {
        while next < idx.len() && f > betas[idx[next]] {
            out[idx[next]] = running;
            next += 1;
        }
        if next == idx.len() {
            break;
        }
        if h <= order {
            running += 1;
        }
    }
    for &i in &idx[next..] {
        out[i] = running;
    }
    Ok(out)
}

pub fn convergence_report(qs: &[i64], betas: &[Fraction], exec: Exec) -> Result<ConvergenceReport> {
    if qs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("Q list must be strictly ascending".into()));
    }
    let counts = exec.map(qs, |&q| counts_below(q, betas));
    let mut rows = Vec::with_capacity(qs.len() * betas.len());
    for (&q, c) in qs.iter().zip(counts) {
        for (&beta, empirical) in betas.iter().zip(c?) {
            let main_term = theory_count(q, beta.to_f64());
            rows.push(CountReport { q, beta, empirical, main_term, rel_error: rel_error(empirical as f64, main_term) });
        }
    }
    let decay = betas
        .iter()
        .enumerate()
        .map(|(j, &beta)| {
            let rel_errors: Vec<f64> = rows.iter().skip(j).step_by(betas.len()).map(|r| r.rel_error).collect();
            let strictly_decreasing = rel_errors.windows(2).all(|w| w[1] < w[0]);
            DecayVerdict { beta, rel_errors, strictly_decreasing }
        })
        .collect();
    Ok(ConvergenceReport { rows, decay })
}

pub fn write_report_csv<W: Write>(rows: &[CountReport], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["Q", "beta", "empirical", "main_term", "rel_error"])?;
    for r in rows {
        w.write_record(&[
            r.q.to_string(),
            r.beta.to_string(),
            r.empirical.to_string(),
            fmt_real(r.main_term),
            fmt_real(r.rel_error),
        ])?;
    }
    w.flush()?;
    Ok(())
}
