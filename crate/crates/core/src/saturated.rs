//! The saturated sequences `SF_Q* = {0} ∪ SF_Q` and the mediant-insertion tree.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{h_value, Fraction, FareyWalk};

pub const MIN_ORDER: i64 = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedSequence {
    order: i64,
    elems: Vec<Fraction>,
}

impl SaturatedSequence {
    pub fn order(&self) -> i64 {
        self.order
    }

    /// All elements, starting with `0/1` and ending with `1/1`.
    pub fn elems(&self) -> &[Fraction] {
        &self.elems
    }

    /// `N(Q) = |SF_Q|`, i.e. without the leading `0/1`.
    pub fn n(&self) -> usize {
        self.elems.len() - 1
    }

    /// `#(SF_Q ∩ [0, beta])`.
    pub fn count_at_most(&self, beta: Fraction) -> usize {
        self.elems.partition_point(|&f| f <= beta) - 1
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["num", "den", "h"])?;
        for &f in &self.elems {
            w.write_record(&[f.num().to_string(), f.den().to_string(), h_value(f).to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn check_order(order: i64, min: i64) -> Result<()> {
    if order < min {
        return Err(Error::OrderTooSmall { order, min });
    }
    Ok(())
}

/// Walks the Farey sequence of order `Q` and keeps the terms with `h <= Q`.
pub fn generate_by_filter(order: i64) -> Result<SaturatedSequence> {
    check_order(order, MIN_ORDER)?;
    let elems = FareyWalk::new(order).with_h().filter(|&(_, h)| h <= order).map(|(f, _)| f).collect();
    Ok(SaturatedSequence { order, elems })
}

/// `h` of the mediant of a unimodular pair, in O(1): the mediant's left
/// neighbour has the smaller denominator, so its inverse is `q_l`.
fn mediant_h(l: Fraction, r: Fraction) -> i64 {
    2 * l.den() + r.den() + l.num() + r.num()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionRecord {
    pub fraction: Fraction,
    pub birth: i64,
    pub left_parent: Fraction,
    pub right_parent: Fraction,
}

/// Mediant insertion from `{0/1, 1/1}` in increasing birth order, ties by
/// value. Returns the final list and the records of every insertion.
fn insert_mediants(order: i64) -> (Vec<Fraction>, Vec<InsertionRecord>) {
    let mut value = vec![Fraction::ZERO, Fraction::ONE];
    let mut next: Vec<usize> = vec![1, usize::MAX];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((mediant_h(Fraction::ZERO, Fraction::ONE), Fraction::new_unchecked(1, 2), 0usize)));
    let mut records = Vec::new();

    while let Some(&Reverse((birth, frac, left))) = heap.peek() {
        if birth > order {
            break;
        }
        heap.pop();
        let right = next[left];
        let (lf, rf) = (value[left], value[right]);
        debug_assert_eq!(frac, Fraction::new_unchecked(lf.num() + rf.num(), lf.den() + rf.den()));
        debug_assert_eq!(birth, h_value(frac).get());
        debug_assert!(birth > h_value(lf).get().max(h_value(rf).get()));

        let idx = value.len();
        value.push(frac);
        next.push(right);
        next[left] = idx;
        records.push(InsertionRecord { fraction: frac, birth, left_parent: lf, right_parent: rf });

        for (l, r, li) in [(lf, frac, left), (frac, rf, idx)] {
            let m = Fraction::new_unchecked(l.num() + r.num(), l.den() + r.den());
            heap.push(Reverse((mediant_h(l, r), m, li)));
        }
    }

    let mut out = Vec::with_capacity(value.len());
    let mut i = 0;
    while i != usize::MAX {
        out.push(value[i]);
        i = next[i];
    }
    (out, records)
}

pub fn generate_by_insertion(order: i64) -> Result<SaturatedSequence> {
    check_order(order, MIN_ORDER)?;
    let (elems, _) = insert_mediants(order);
    Ok(SaturatedSequence { order, elems })
}

/// Every fraction with `h <= q_max`, with its birth order and parents, sorted
/// by birth and then by value.
pub fn insertion_tree(q_max: i64) -> Result<Vec<InsertionRecord>> {
    check_order(q_max, 4)?;
    Ok(insert_mediants(q_max).1)
}

pub fn write_tree_csv<W: Write>(records: &[InsertionRecord], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["num", "den", "birth", "lp_num", "lp_den", "rp_num", "rp_den"])?;
    for r in records {
        w.write_record(&[
            r.fraction.num().to_string(),
            r.fraction.den().to_string(),
            r.birth.to_string(),
            r.left_parent.num().to_string(),
            r.left_parent.den().to_string(),
            r.right_parent.num().to_string(),
            r.right_parent.den().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnimodularCheck {
    pub ok: bool,
    /// Index `i` of the right element of the first pair `(i-1, i)` whose
    /// cross-determinant is not 1.
    pub first_violation: Option<usize>,
}

pub fn verify_unimodular(elems: &[Fraction]) -> UnimodularCheck {
    let first_violation =
        elems.windows(2).position(|p| !Fraction::is_unimodular_pair(p[0], p[1])).map(|i| i + 1);
    UnimodularCheck { ok: first_violation.is_none(), first_violation }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::is_saturated;

    fn fr(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    fn fracs(v: &[(i64, i64)]) -> Vec<Fraction> {
        v.iter().map(|&(n, d)| fr(n, d)).collect()
    }

    #[test]
    fn filter_examples() {
        assert_eq!(generate_by_filter(3).unwrap().elems(), fracs(&[(0, 1), (1, 1)]));
        assert_eq!(generate_by_filter(5).unwrap().elems(), fracs(&[(0, 1), (1, 3), (1, 2), (1, 1)]));
        assert_eq!(
            generate_by_filter(7).unwrap().elems(),
            fracs(&[(0, 1), (1, 5), (1, 4), (1, 3), (1, 2), (2, 3), (1, 1)])
        );
        assert_eq!(generate_by_filter(2), Err(Error::OrderTooSmall { order: 2, min: 3 }));
    }

    #[test]
    fn insertion_examples() {
        assert_eq!(generate_by_insertion(4).unwrap().elems(), fracs(&[(0, 1), (1, 2), (1, 1)]));
        assert_eq!(
            generate_by_insertion(6).unwrap().elems(),
            fracs(&[(0, 1), (1, 4), (1, 3), (1, 2), (1, 1)])
        );
        assert_eq!(generate_by_insertion(10).unwrap(), generate_by_filter(10).unwrap());
        assert!(generate_by_insertion(1).is_err());
    }

    #[test]
    fn methods_agree_and_nest() {
        let mut prev: Option<SaturatedSequence> = None;
        for q in 3..=500 {
            let s = generate_by_filter(q).unwrap();
            assert_eq!(s, generate_by_insertion(q).unwrap(), "order {q}");
            for &f in &s.elems()[1..] {
                assert!(is_saturated(f, q));
            }
            if let Some(p) = prev {
                assert!(p.elems().iter().all(|f| s.elems().binary_search(f).is_ok()));
            }
            prev = Some(s);
        }
    }

    #[test]
    fn tree_examples() {
        let t4 = insertion_tree(4).unwrap();
        assert_eq!(
            t4,
            vec![InsertionRecord {
                fraction: fr(1, 2),
                birth: 4,
                left_parent: Fraction::ZERO,
                right_parent: Fraction::ONE
            }]
        );
        let t5 = insertion_tree(5).unwrap();
        assert_eq!(t5.len(), 2);
        assert_eq!((t5[1].fraction, t5[1].birth, t5[1].left_parent, t5[1].right_parent), (fr(1, 3), 5, fr(0, 1), fr(1, 2)));
        let t7 = insertion_tree(7).unwrap();
        assert!(t7.iter().any(|r| r.fraction == fr(2, 3) && r.birth == 7 && r.left_parent == fr(1, 2) && r.right_parent == Fraction::ONE));
        assert!(insertion_tree(3).is_err());
    }

    #[test]
    fn tree_records_are_consistent() {
        let t = insertion_tree(60).unwrap();
        for w in t.windows(2) {
            assert!((w[0].birth, w[0].fraction) < (w[1].birth, w[1].fraction));
        }
        for r in &t {
            assert_eq!(r.birth, h_value(r.fraction).get());
            assert_eq!(crate::farey::mediant(r.left_parent, r.right_parent).unwrap(), r.fraction);
        }
        assert_eq!(t.len(), generate_by_filter(60).unwrap().n() - 1);
    }

    #[test]
    fn one_quarter_enters_at_six() {
        // 1/4 sits between 0/1 and 1/3 already at order 6.
        let s6 = generate_by_filter(6).unwrap();
        assert!(s6.elems().contains(&fr(1, 4)));
        assert!(!generate_by_filter(5).unwrap().elems().contains(&fr(1, 4)));
    }

    #[test]
    fn unimodular_examples() {
        let s7 = generate_by_filter(7).unwrap();
        assert_eq!(verify_unimodular(s7.elems()), UnimodularCheck { ok: true, first_violation: None });
        assert!(verify_unimodular(&fracs(&[(0, 1), (1, 3), (1, 2), (1, 1)])).ok);
        let bad = verify_unimodular(&fracs(&[(0, 1), (2, 5), (1, 1)]));
        assert_eq!(bad, UnimodularCheck { ok: false, first_violation: Some(1) });
    }

    #[test]
    fn counting() {
        let s = generate_by_filter(7).unwrap();
        assert_eq!(s.n(), 6);
        assert_eq!(s.count_at_most(Fraction::ONE), 6);
        assert_eq!(s.count_at_most(fr(1, 2)), 4);
        assert_eq!(s.count_at_most(Fraction::ZERO), 0);
    }

    #[test]
    fn csv_layout() {
        let mut buf = Vec::new();
        generate_by_filter(5).unwrap().write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "num,den,h\n0,1,1\n1,3,5\n1,2,4\n1,1,3\n");
        let mut buf = Vec::new();
        write_tree_csv(&insertion_tree(5).unwrap(), &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "num,den,birth,lp_num,lp_den,rp_num,rp_den\n1,2,4,0,1,1,1\n1,3,5,0,1,1,2\n"
        );
    }
}
