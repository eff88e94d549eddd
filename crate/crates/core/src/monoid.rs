//! The monoid `S` of positive unimodular matrices `(a b; c d)` with
//! `a >= b >= d >= 1`, `a >= c >= d`, its trace slices `S_Q`, the map
//! `Ψ(M) = d/b`, and continued-fraction words.

use std::fmt;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::farey::{mod_inverse, Fraction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonoidMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

pub fn is_in_s(a: i64, b: i64, c: i64, d: i64) -> bool {
    let det = a as i128 * d as i128 - b as i128 * c as i128;
    det == 1 && a >= b && b >= d && d >= 1 && a >= c && c >= d
}

impl MonoidMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if !is_in_s(a, b, c, d) {
            return Err(Error::NotInMonoid { a, b, c, d });
        }
        Ok(MonoidMatrix { a, b, c, d })
    }

    pub fn trace(&self) -> i64 {
        self.a + self.d
    }

    /// `Ψ(M) = d/b`; reduced because `ad - bc = 1`.
    pub fn psi(&self) -> Fraction {
        Fraction::new_unchecked(self.d, self.b)
    }
}

impl fmt::Display for MonoidMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {}; {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Inverse of `d` modulo `b`, with the convention `1` for `b = 1`.
fn dbar(d: i64, b: i64) -> i64 {
    if b == 1 {
        1
    } else {
        mod_inverse(d, b).expect("coprime by construction")
    }
}

/// The lift `(d̄ + kb, b; (d d̄ - 1)/b + kd, d)` of `d/b`, with trace
/// `d + d̄ + kb`. For `k = 1` the trace is `h(d/b)`.
pub fn matrix_from_fraction(f: Fraction, k: i64) -> Result<MonoidMatrix> {
    if f == Fraction::ZERO {
        return Err(Error::InvalidArgument("0/1 has no lift to the monoid".into()));
    }
    if k < 1 {
        return Err(Error::InvalidArgument(format!("lift index k must be >= 1, got {k}")));
    }
    let (d, b) = (f.num(), f.den());
    let db = dbar(d, b);
    let c = ((d as i128 * db as i128 - 1) / b as i128) as i64 + k * d;
    MonoidMatrix::new(db + k * b, b, c, d)
}

/// Every `M ∈ S` with trace at most `Q`, each exactly once, ordered by `b`,
/// then `d`, then `k`.
pub fn enumerate_s_q(order: i64) -> Result<impl Iterator<Item = MonoidMatrix>> {
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    Ok((1..=order).flat_map(move |b| {
        (1..=b).filter_map(move |d| coprime_inverse(d, b).map(|db| (d, db))).flat_map(move |(d, db)| {
            let c0 = (d * db - 1) / b;
            (1..).take_while(move |&k| d + db + k * b <= order).map(move |k| MonoidMatrix {
                a: db + k * b,
                b,
                c: c0 + k * d,
                d,
            })
        })
    }))
}

fn coprime_inverse(d: i64, b: i64) -> Option<i64> {
    if b == 1 {
        return (d == 1).then_some(1);
    }
    if d >= b {
        return None;
    }
    mod_inverse(d, b).ok()
}

/// `#{M ∈ S_Q : d/b <= beta}` by a closed count over `k` for every `d/b`,
/// split over `b`.
pub fn count_s_q_below(order: i64, beta: Fraction, exec: Exec) -> Result<u64> {
    if order < 3 {
        return Err(Error::OrderTooSmall { order, min: 3 });
    }
    let (bn, bd) = (beta.num() as i128, beta.den() as i128);
    Ok(exec.fold_range(
        1..=order,
        || 0u64,
        |acc, b| {
            let mut n = acc;
            for d in 1..=b {
                if d as i128 * bd > bn * b as i128 {
                    break;
                }
                if let Some(db) = coprime_inverse(d, b) {
                    let room = order - d - db;
                    if room >= b {
                        n += (room / b) as u64;
                    }
                }
            }
            n
        },
        |x, y| x + y,
    ))
}

pub fn write_matrices_csv<W: Write>(ms: impl IntoIterator<Item = MonoidMatrix>, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "c", "d", "trace"])?;
    for m in ms {
        w.write_record([m.a, m.b, m.c, m.d, m.trace()].map(|x| x.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// An even-length word of positive digits, standing for the product of the
/// matrices `(x 1; 1 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CfWord(Vec<i64>);

impl CfWord {
    pub fn new(digits: Vec<i64>) -> Result<Self> {
        if digits.is_empty() || digits.len() % 2 != 0 || digits.iter().any(|&x| x < 1) {
            return Err(Error::InvalidWord(digits));
        }
        Ok(CfWord(digits))
    }

    pub fn digits(&self) -> &[i64] {
        &self.0
    }
}

pub fn cf_compose(word: &CfWord) -> MonoidMatrix {
    let (mut a, mut b, mut c, mut d) = (1i64, 0i64, 0i64, 1i64);
    for &x in word.digits() {
        (a, b, c, d) = (a * x + b, a, c * x + d, c);
    }
    debug_assert!(is_in_s(a, b, c, d));
    MonoidMatrix { a, b, c, d }
}

/// Peels digits from the left: `M = (x 1; 1 0) R` with
/// `x = min(⌊a/c⌋, ⌊b/d⌋)`, until `R` is the identity.
pub fn cf_factorize(m: &MonoidMatrix) -> Result<CfWord> {
    let not_in = || Error::NotInMonoid { a: m.a, b: m.b, c: m.c, d: m.d };
    if !is_in_s(m.a, m.b, m.c, m.d) {
        return Err(not_in());
    }
    let (mut a, mut b, mut c, mut d) = (m.a, m.b, m.c, m.d);
    let mut digits = Vec::new();
    while (a, b, c, d) != (1, 0, 0, 1) {
        if c <= 0 || b < 0 || d < 0 {
            return Err(not_in());
        }
        let mut x = a / c;
        if d > 0 {
            x = x.min(b / d);
        }
        if x == 0 {
            return Err(not_in());
        }
        digits.push(x);
        (a, b, c, d) = (c, d, a - x * c, b - x * d);
        if a < 0 || b < 0 || c < 0 || d < 0 {
            return Err(not_in());
        }
    }
    let word = CfWord::new(digits).map_err(|_| not_in())?;
    if cf_compose(&word) != *m {
        return Err(not_in());
    }
    Ok(word)
}

/// `K_ℓ = x_ℓ K_{ℓ-1} - K_{ℓ-2}` from `K_{-1} = 0`, `K_0 = 1`.
pub fn farey_continuant(digits: &[i64]) -> i64 {
    let (mut prev, mut cur) = (0i64, 1i64);
    for &x in digits {
        (prev, cur) = (cur, x * cur - prev);
    }
    cur
}
