//! One-dimensional quadrature for piecewise-smooth integrands.
//!
//! The region heights integrated by [`crate::gap`] are smooth except at
//! finitely many seams (floor jumps, switches of the active bound in a
//! `min`/`max`, the edge of a side constraint). When the integrand can label
//! the smooth branch it is on, [`integrate_piecewise`] locates every seam by
//! bisection and integrates each smooth piece separately.

use std::hash::{Hash, Hasher};

/// Integrand value together with a label of the smooth branch it comes from.
/// Two points with the same label must be connected by a smooth arc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub value: f64,
    pub seam: u64,
}

impl Sample {
    pub const ZERO: Sample = Sample { value: 0.0, seam: 0 };
}

/// Builds branch labels from the discrete data that select a branch.
#[derive(Default)]
pub struct SeamHasher(std::collections::hash_map::DefaultHasher);

impl SeamHasher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add<T: Hash>(&mut self, x: T) -> &mut Self {
        x.hash(&mut self.0);
        self
    }

    /// Never 0, which is reserved for [`Sample::ZERO`].
    pub fn finish(&self) -> u64 {
        self.0.finish() | 1
    }
}

const MAX_DEPTH: u32 = 50;
const MIN_DEPTH: u32 = 4;

/// Adaptive Simpson with Richardson correction; `tol` is absolute.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f((a + b) / 2.0), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (lm, rm) = ((a + m) / 2.0, (m + b) / 2.0);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || (depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol) || m <= a || m >= b {
        return left + right + delta / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth + 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth + 1)
}

/// Adaptive Simpson on each interval between consecutive `points`, with the
/// tolerance shared in proportion to length. `points` need not be sorted;
/// values outside `[a, b]` are dropped.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, points: &[f64], tol: f64) -> f64 {
    breaks_in(a, b, points)
        .windows(2)
        .map(|p| adaptive_simpson(f, p[0], p[1], tol * (p[1] - p[0]) / (b - a)))
        .sum()
}

/// Sorted, deduplicated `{a, b} ∪ (points ∩ (a, b))`.
pub fn breaks_in(a: f64, b: f64, points: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = points.iter().copied().filter(|&x| x > a && x < b).collect();
    v.push(a);
    v.push(b);
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiecewiseOpts {
    /// Initial grid cells used to detect label changes.
    pub grid: usize,
    /// Width below which a label change is considered located.
    pub xtol: f64,
    /// Absolute tolerance for the whole integral.
    pub tol: f64,
}

impl Default for PiecewiseOpts {
    fn default() -> Self {
        PiecewiseOpts { grid: 48, xtol: 1e-13, tol: 1e-11 }
    }
}

/// Integral of a piecewise-smooth function over `[a, b]`.
///
/// Label changes between grid points are bracketed to width `xtol`. Each
/// bracket's ends become the ends of the neighbouring pieces, so every
/// piece is evaluated on a single branch; the brackets themselves are
/// dropped, which costs at most `xtol · sup|f|` each.
pub fn integrate_piecewise<F: Fn(f64) -> Sample>(f: &F, a: f64, b: f64, opts: PiecewiseOpts) -> f64 {
    if !(b > a) {
        return 0.0;
    }
    let n = opts.grid.max(1);
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 }).collect();
    let samples: Vec<Sample> = xs.iter().map(|&x| f(x)).collect();

    let mut brackets = Vec::new();
    for i in 0..n {
        locate(f, xs[i], samples[i].seam, xs[i + 1], samples[i + 1].seam, opts.xtol, &mut brackets);
    }

    let mut total = 0.0;
    let mut start = a;
    for &(lo, hi) in &brackets {
        total += piece(f, start, lo, opts, opts.tol * (lo - start) / (b - a));
        start = hi;
    }
    total + piece(f, start, b, opts, opts.tol * (b - start) / (b - a))
}

fn piece<F: Fn(f64) -> Sample>(f: &F, lo: f64, hi: f64, opts: PiecewiseOpts, tol: f64) -> f64 {
    if !(hi > lo) {
        return 0.0;
    }
    let (fa, fm, fb) = (f(lo), f((lo + hi) / 2.0), f(hi));
    let whole = (hi - lo) / 6.0 * (fa.value + 4.0 * fm.value + fb.value);
    let same = fm.seam == fa.seam && fb.seam == fa.seam;
    seam_rec(f, lo, hi, [fa, fm, fb], whole, same, tol.max(f64::MIN_POSITIVE), opts.xtol, 0)
}

/// Adaptive Simpson that also refuses to accept a panel whose nodes do not
/// all carry the same label, so seams missed by the grid are still resolved.
#[allow(clippy::too_many_arguments)]
fn seam_rec<F: Fn(f64) -> Sample>(
    f: &F,
    a: f64,
    b: f64,
    [fa, fm, fb]: [Sample; 3],
    whole: f64,
    same: bool,
    tol: f64,
    xtol: f64,
    depth: u32,
) -> f64 {
    let m = (a + b) / 2.0;
    let (flm, frm) = (f((a + m) / 2.0), f((m + b) / 2.0));
    let left = (m - a) / 6.0 * (fa.value + 4.0 * flm.value + fm.value);
    let right = (b - m) / 6.0 * (fm.value + 4.0 * frm.value + fb.value);
    let delta = left + right - whole;
    let uniform = same && flm.seam == fa.seam && frm.seam == fa.seam;
    let converged = uniform && depth >= MIN_DEPTH && delta.abs() <= 15.0 * tol;
    if converged || depth >= MAX_DEPTH || b - a <= xtol {
        return left + right + if uniform { delta / 15.0 } else { 0.0 };
    }
    let same_l = flm.seam == fa.seam && fm.seam == fa.seam;
    let same_r = frm.seam == fm.seam && fb.seam == fm.seam;
    seam_rec(f, a, m, [fa, flm, fm], left, same_l, tol / 2.0, xtol, depth + 1)
        + seam_rec(f, m, b, [fm, frm, fb], right, same_r, tol / 2.0, xtol, depth + 1)
}

fn locate<F: Fn(f64) -> Sample>(
    f: &F,
    a: f64,
    sa: u64,
    b: f64,
    sb: u64,
    xtol: f64,
    out: &mut Vec<(f64, f64)>,
) {
    if sa == sb {
        return;
    }
    let m = (a + b) / 2.0;
    if b - a <= xtol || m <= a || m >= b {
        out.push((a, b));
        return;
    }
    let sm = f(m).seam;
    locate(f, a, sa, m, sm, xtol, out);
    locate(f, m, sm, b, sb, xtol, out);
}
