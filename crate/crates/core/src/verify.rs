//! Exhaustive integer sweeps over ranges of `Q`. Each returns the number of
//! cases examined, or the first counterexample in order of `Q`.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::exec::Exec;
use crate::farey::{h_value, mediant, mod_inverse, FareyWalk, Fraction};
use crate::gap::empirical::fold_runs;
use crate::monoid::{enumerate_s_q, matrix_from_fraction};
use crate::saturated::{generate_by_filter, generate_by_insertion, verify_unimodular};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Check {
    /// Adjacent elements of every `SF_Q*` have cross-determinant 1.
    Unimodular,
    /// Filter, insertion and `Ψ(S_Q)` give the same set.
    CrossMethod,
    /// Inverse and `h` identities for consecutive Farey fractions.
    NeighbourIdentities,
    /// `q_1 < q_2` forces `h(γ_2) > Q`; `q_2 < q_1` and `h(γ_1) <= Q` force
    /// `h(γ_2) <= Q`.
    SaturationPropagation,
    /// The mediant of a unimodular pair is born after both parents.
    MediantBirth,
    /// The least trace over the fibre `Ψ^{-1}(a/q)` is `h(a/q)`, at `k = 1`.
    HMinimality,
    /// Every two-step run has `ν = 1` in its middle step.
    NuDichotomy,
}

impl Check {
    pub fn label(self) -> &'static str {
        match self {
            Check::Unimodular => "unimodular",
            Check::CrossMethod => "cross-method",
            Check::NeighbourIdentities => "lemma5",
            Check::SaturationPropagation => "corollary6",
            Check::MediantBirth => "mediant-birth",
            Check::HMinimality => "h-minimality",
            Check::NuDichotomy => "nu-dichotomy",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub check: Check,
    pub order: i64,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed at Q = {}: {}", self.check, self.order, self.detail)
    }
}

impl std::error::Error for Violation {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SweepStats {
    pub check: Check,
    pub max_order: i64,
    pub cases: u64,
}

pub type Sweep = std::result::Result<SweepStats, Violation>;

fn sweep<F>(check: Check, lo: i64, hi: i64, exec: Exec, per_order: F) -> Sweep
where
    F: Fn(i64) -> std::result::Result<u64, String> + Sync + Send,
{
    let results = exec.map_range(lo..=hi, &per_order);
    let mut cases = 0;
    for (order, r) in (lo..=hi).zip(results) {
        match r {
            Ok(n) => cases += n,
            Err(detail) => return Err(Violation { check, order, detail }),
        }
    }
    Ok(SweepStats { check, max_order: hi, cases })
}

/// Consecutive pairs of the Farey sequence of order `Q` with their `h`.
fn farey_pairs(order: i64) -> impl Iterator<Item = ((Fraction, i64), (Fraction, i64))> {
    let mut walk = FareyWalk::new(order).with_h();
    let mut prev = walk.next();
    walk.map(move |cur| {
        let p = prev.replace(cur).expect("walk starts at 0/1");
        (p, cur)
    })
}

pub fn check_unimodular(q_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(q_max)?;
    Ok(sweep(Check::Unimodular, 3, q_max, exec, |q| {
        let seq = generate_by_filter(q).map_err(|e| e.to_string())?;
        let e = seq.elems();
        if e[0] != Fraction::ZERO || e[e.len() - 1] != Fraction::ONE {
            return Err("sequence does not run from 0/1 to 1/1".into());
        }
        let chk = verify_unimodular(e);
        match chk.first_violation {
            None => Ok(e.len() as u64 - 1),
            Some(i) => Err(format!("{} and {} are adjacent", e[i - 1], e[i])),
        }
    }))
}

pub fn check_cross_method(q_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(q_max)?;
    Ok(sweep(Check::CrossMethod, 3, q_max, exec, |q| {
        let a = generate_by_filter(q).map_err(|e| e.to_string())?;
        let b = generate_by_insertion(q).map_err(|e| e.to_string())?;
        if a != b {
            let i = a.elems().iter().zip(b.elems()).position(|(x, y)| x != y).unwrap_or(a.n().min(b.n()) + 1);
            return Err(format!("filter and insertion differ at index {i}"));
        }
        let mut images: Vec<Fraction> = enumerate_s_q(q).map_err(|e| e.to_string())?.map(|m| m.psi()).collect();
        images.push(Fraction::ZERO);
        images.sort_unstable();
        images.dedup();
        if images != a.elems() {
            return Err(format!("Ψ(S_Q) has {} points, the filter {}", images.len() - 1, a.n()));
        }
        Ok(a.n() as u64)
    }))
}

/// For consecutive `a_1/q_1 < a_2/q_2` with `0 < a_i < q_i`, with `x̄` the
/// inverse modulo `q_1` and `x̿` the inverse modulo `q_2`:
/// `ā_1 = (1 + ⌊q_2/q_1⌋) q_1 - q_2`, `a̿_2 = q_1 - ⌊q_1/q_2⌋ q_2`,
/// `a_1 = q_1 - q̄_2 = (q_1 q̿_1 - 1)/q_2`, `a_2 = q̿_1 = q_2 - (q_2 q̄_2 - 1)/q_1`,
/// and the two expressions for `h(a_1/q_1)`, `h(a_2/q_2)` that follow.
fn neighbour_identities(a1: i64, q1: i64, a2: i64, q2: i64) -> std::result::Result<(), String> {
    let inv = |x: i64, m: i64| mod_inverse(x.rem_euclid(m), m).map_err(|e| e.to_string());
    let a1b = inv(a1, q1)?;
    let q2b = inv(q2, q1)?;
    let a2bb = inv(a2, q2)?;
    let q1bb = inv(q1, q2)?;
    let k = q2 / q1;
    let l = q1 / q2;
    let rows: [(&str, i64, i64); 8] = [
        ("inverse of a_1", a1b, (1 + k) * q1 - q2),
        ("inverse of a_2", a2bb, q1 - l * q2),
        ("a_1 from q_2", a1, q1 - q2b),
        ("a_2 from q_1", a2, q1bb),
        ("a_1 from q_1", a1 * q2, q1 * q1bb - 1),
        ("a_2 from q_2", (q2 - a2) * q1, q2 * q2b - 1),
        ("h of a_1/q_1", h_value(Fraction::new_unchecked(a1, q1)).get(), (2 + k) * q1 - q2 + (q1 * q1bb - 1) / q2),
        ("h of a_2/q_2", h_value(Fraction::new_unchecked(a2, q2)).get(), q1 + (2 - l) * q2 - (q2 * q2b - 1) / q1),
    ];
    for (name, lhs, rhs) in rows {
        if lhs != rhs {
            return Err(format!("{name}: {lhs} != {rhs} for {a1}/{q1} < {a2}/{q2}"));
        }
    }
    Ok(())
}

pub fn check_neighbour_identities(q_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(q_max)?;
    Ok(sweep(Check::NeighbourIdentities, 3, q_max, exec, |q| {
        let mut n = 0;
        for ((f1, _), (f2, _)) in farey_pairs(q) {
            let (a1, q1, a2, q2) = (f1.num(), f1.den(), f2.num(), f2.den());
            if 0 < a1 && a1 < q1 && 0 < a2 && a2 < q2 {
                neighbour_identities(a1, q1, a2, q2)?;
                n += 1;
            }
        }
        Ok(n)
    }))
}

pub fn check_saturation_propagation(q_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(q_max)?;
    Ok(sweep(Check::SaturationPropagation, 3, q_max, exec, |q| {
        let mut n = 0;
        for ((f1, h1), (f2, h2)) in farey_pairs(q) {
            if f1.den() < f2.den() && h2 <= q {
                return Err(format!("{f2} is saturated after {f1} with a smaller denominator"));
            }
            if f2.den() < f1.den() && h1 <= q && h2 > q {
                return Err(format!("{f1} is saturated but its successor {f2} is not"));
            }
            n += 1;
        }
        Ok(n)
    }))
}

/// Every unimodular pair `γ_1 < γ_2` in `[0, 1]` with `q_1 + q_2 <= s_max`.
/// Each such pair is consecutive in the Farey sequence of order
/// `max(q_1, q_2)`, so it is visited exactly once.
pub fn check_mediant_birth(s_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(s_max)?;
    Ok(sweep(Check::MediantBirth, 1, s_max - 1, exec, |q| {
        let mut n = 0;
        for ((f1, h1), (f2, h2)) in farey_pairs(q) {
            if f1.den().max(f2.den()) != q || f1.den() + f2.den() > s_max {
                continue;
            }
            let m = mediant(f1, f2).map_err(|e| e.to_string())?;
            let hm = h_value(m).get();
            if hm <= h1.max(h2) {
                return Err(format!("h({m}) = {hm} is not above h({f1}) = {h1}, h({f2}) = {h2}"));
            }
            n += 1;
        }
        Ok(n)
    }))
}

/// For every reduced `d/b` in `(0, 1]` with `b <= q_max`, searches
/// `(a b; c d) ∈ S` by increasing `a` and compares the first hit with the
/// `k = 1` lift.
pub fn check_h_minimality(q_max: i64, exec: Exec) -> Result<Sweep> {
    Ok(sweep(Check::HMinimality, 1, q_max, exec, |b| {
        let mut n = 0;
        for d in 1..=b {
            let Ok(f) = Fraction::new(d, b) else { continue };
            let hit = (b..).find_map(|a| {
                let ad = a * d - 1;
                let c = ad / b;
                (ad % b == 0 && c >= d && c <= a).then_some((a, c))
            });
            let (a, c) = hit.expect("the lift exists");
            let lift = matrix_from_fraction(f, 1).map_err(|e| e.to_string())?;
            let h = h_value(f).get();
            if a + d != h || (lift.a, lift.c) != (a, c) {
                return Err(format!("least trace over {f} is {} (matrix {a} {b}; {c} {d}), h = {h}, lift {lift}", a + d));
            }
            n += 1;
        }
        Ok(n)
    }))
}

pub fn check_nu_dichotomy(q_max: i64, exec: Exec) -> Result<Sweep> {
    generate_by_filter(q_max)?;
    // parallel over Q inside each order already
    let mut cases = 0;
    for q in 3..=q_max {
        let (n, bad) = fold_runs(
            q,
            exec,
            || (0u64, None),
            |(n, bad), run| {
                if run.steps != 2 {
                    return (n, bad);
                }
                let bad = bad.or_else(|| (run.first_nu(q) != 1).then_some(*run));
                (n + 1, bad)
            },
            |(n1, b1), (n2, b2)| (n1 + n2, match (b1, b2) {
                (Some(x), Some(y)) => Some(if x.left <= y.left { x } else { y }),
                (x, y) => x.or(y),
            }),
        )?;
        if let Some(run) = bad {
            return Ok(Err(Violation {
                check: Check::NuDichotomy,
                order: q,
                detail: format!("run {} -> {} has ν = {}", run.left, run.right, run.first_nu(q)),
            }));
        }
        cases += n;
    }
    Ok(Ok(SweepStats { check: Check::NuDichotomy, max_order: q_max, cases }))
}

/// The four sweeps summarised by the command line `verify`.
pub fn verify_all(q_max: i64, exec: Exec) -> Result<Vec<Sweep>> {
    Ok(vec![
        check_unimodular(q_max, exec)?,
        check_cross_method(q_max, exec)?,
        check_neighbour_identities(q_max, exec)?,
        check_saturation_propagation(q_max, exec)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(s: Result<Sweep>) -> SweepStats {
        s.unwrap().unwrap_or_else(|v| panic!("{v}"))
    }

    #[test]
    fn small_sweeps_pass() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(ok(check_unimodular(7, exec)).cases, 1 + 2 + 3 + 4 + 6);
            ok(check_cross_method(60, exec));
            ok(check_neighbour_identities(100, exec));
            ok(check_saturation_propagation(100, exec));
            ok(check_mediant_birth(80, exec));
            ok(check_h_minimality(60, exec));
            ok(check_nu_dichotomy(120, exec));
        }
    }

    #[test]
    fn sweeps_reject_small_orders() {
        assert!(check_unimodular(2, Exec::Sequential).is_err());
        assert!(check_nu_dichotomy(2, Exec::Sequential).is_err());
    }

    #[test]
    fn identities_catch_a_wrong_pair() {
        assert!(neighbour_identities(1, 3, 1, 2).is_ok());
        assert!(neighbour_identities(2, 5, 3, 7).is_ok());
        // 3·3 - 1·7 = 2
        assert!(neighbour_identities(1, 3, 3, 7).is_err());
    }

    #[test]
    fn sweep_reports_first_failure_in_order() {
        let r = sweep(Check::Unimodular, 1, 10, Exec::Parallel, |q| if q % 4 == 0 { Err(format!("{q}")) } else { Ok(1) });
        assert_eq!(r, Err(Violation { check: Check::Unimodular, order: 4, detail: "4".into() }));
        let r = sweep(Check::Unimodular, 1, 3, Exec::Parallel, |_| Ok(2));
        assert_eq!(r.unwrap().cases, 6);
    }

    #[test]
    fn verify_all_labels() {
        let labels: Vec<&str> = verify_all(30, Exec::Parallel)
            .unwrap()
            .into_iter()
            .map(|s| s.unwrap().check.label())
            .collect();
        assert_eq!(labels, ["unimodular", "cross-method", "lemma5", "corollary6"]);
    }
}
