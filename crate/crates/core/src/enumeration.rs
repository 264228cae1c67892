//! Brute-force enumeration of the overpartitions counted by `D(A_N; k, n)`
//! and `E(A'_N; k, n)`, and of the refined counts `p_alpha(i)(k, m, n)`.
//!
//! Counts are accumulated in `u64`: every count is obtained by visiting each
//! object once, so no feasible enumeration can overflow it.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::report::VerificationReport;
use crate::series::{Monomial, Window};
use crate::spectrum::SpectrumSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// Parts from `A_N`, no difference condition.
    D,
    /// Parts from `A'_N` with the gap condition.
    E,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::D => "D",
            Side::E => "E",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error("entry ({i}, {k}, {m}, {n}) lies outside the computed p-table")]
    RangeTooSmall { i: usize, k: i64, m: i64, n: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Part {
    pub value: u32,
    pub overlined: bool,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.overlined {
            write!(f, "{}'", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Parts in nonincreasing order, the overlined copy first among equal values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Overpartition {
    pub parts: Vec<Part>,
}

impl Overpartition {
    pub fn sum(&self) -> u32 {
        self.parts.iter().map(|p| p.value).sum()
    }

    /// Number of non-overlined parts.
    pub fn k(&self) -> u32 {
        self.parts.iter().filter(|p| !p.overlined).count() as u32
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn smallest(&self) -> Option<u32> {
        self.parts.last().map(|p| p.value)
    }

    pub fn is_canonical(&self) -> bool {
        self.parts.windows(2).all(|w| {
            w[0].value > w[1].value || (w[0].value == w[1].value && !w[1].overlined)
        })
    }
}

impl fmt::Display for Overpartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join("+"))
    }
}

struct Walker<'a> {
    spectrum: &'a SpectrumSet,
    side: Side,
    allowed: Vec<u32>,
}

impl<'a> Walker<'a> {
    fn new(spectrum: &'a SpectrumSet, side: Side, n_max: u32) -> Self {
        let allowed = (1..=n_max)
            .filter(|&v| match side {
                Side::D => spectrum.in_a_n(v),
                Side::E => spectrum.in_a_prime_n(v),
            })
            .collect();
        Walker { spectrum, side, allowed }
    }

    /// Smallest admissible value for the part above `below`.
    fn lower_bound(&self, below: Part) -> u32 {
        let strict = below.value + below.overlined as u32;
        match self.side {
            Side::D => strict,
            Side::E => {
                let beta = self.spectrum.beta(below.value);
                let gap = self.spectrum.gap(beta, below.overlined).expect("part lies in A'_N");
                strict.max(below.value + gap)
            }
        }
    }

    /// Visits every overpartition with sum at most `n_max`, built from the
    /// smallest part upwards. The callback sees the parts in increasing
    /// order together with the non-overlined count and the sum.
    fn run<F: FnMut(&[Part], u32, u32)>(&self, n_max: u32, visit: &mut F) {
        let mut stack = Vec::new();
        self.descend(&mut stack, 0, 0, n_max, visit);
    }

    fn descend<F: FnMut(&[Part], u32, u32)>(
        &self,
        stack: &mut Vec<Part>,
        k: u32,
        sum: u32,
        n_max: u32,
        visit: &mut F,
    ) {
        visit(stack, k, sum);
        let lb = stack.last().map_or(1, |&p| self.lower_bound(p));
        let start = self.allowed.partition_point(|&v| v < lb);
        for &v in &self.allowed[start..] {
            if sum + v > n_max {
                break;
            }
            for overlined in [false, true] {
                stack.push(Part { value: v, overlined });
                self.descend(stack, k + !overlined as u32, sum + v, n_max, visit);
                stack.pop();
            }
        }
    }
}

/// Exact counts indexed by `(k, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub side: Side,
    pub spectrum: SpectrumSet,
    pub k_max: u32,
    pub n_max: u32,
    counts: Vec<u64>,
}

impl CountTable {
    fn idx(&self, k: u32, n: u32) -> usize {
        n as usize * (self.k_max as usize + 1) + k as usize
    }

    pub fn get(&self, k: u32, n: u32) -> u64 {
        if k > self.k_max || n > self.n_max {
            return 0;
        }
        self.counts[self.idx(k, n)]
    }

    /// Sum over `k` at fixed `n`.
    pub fn total(&self, n: u32) -> u64 {
        (0..=self.k_max).map(|k| self.get(k, n)).sum()
    }

    /// CSV with header `n,k,count`, rows ordered by `n` then `k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,count\n");
        for n in 0..=self.n_max {
            for k in 0..=self.k_max {
                out.push_str(&format!("{n},{k},{}\n", self.get(k, n)));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = (0..=self.n_max)
            .flat_map(|n| (0..=self.k_max).map(move |k| (n, k)))
            .map(|(n, k)| serde_json::json!({"n": n, "k": k, "count": self.get(k, n).to_string()}))
            .collect();
        serde_json::json!({
            "side": self.side.to_string(),
            "a": self.spectrum.elements(),
            "N": self.spectrum.modulus(),
            "k_max": self.k_max,
            "n_max": self.n_max,
            "counts": rows,
        })
    }
}

fn count_side(s: &SpectrumSet, side: Side, k_max: u32, n_max: u32) -> CountTable {
    let mut table = CountTable {
        side,
        spectrum: s.clone(),
        k_max,
        n_max,
        counts: vec![0; (n_max as usize + 1) * (k_max as usize + 1)],
    };
    Walker::new(s, side, n_max).run(n_max, &mut |_, k, sum| {
        if k <= k_max {
            let i = table.idx(k, sum);
            table.counts[i] += 1;
        }
    });
    table
}

/// `D(A_N; k, n)` for `k <= k_max`, `n <= n_max`.
pub fn count_d(s: &SpectrumSet, k_max: u32, n_max: u32) -> CountTable {
    count_side(s, Side::D, k_max, n_max)
}

/// `E(A'_N; k, n)` for `k <= k_max`, `n <= n_max`.
pub fn count_e(s: &SpectrumSet, k_max: u32, n_max: u32) -> CountTable {
    count_side(s, Side::E, k_max, n_max)
}

/// Default `k_max`: no overpartition of `n` has more than `n / a(1)` parts.
pub fn default_k_max(s: &SpectrumSet, n_max: u32) -> u32 {
    n_max / s.a(1)
}

/// Every overpartition counted by `side` at `(k, n)`, in canonical part
/// order, listed with the largest part sequences first.
pub fn list_witnesses(s: &SpectrumSet, side: Side, k: u32, n: u32) -> Vec<Overpartition> {
    let mut out = Vec::new();
    Walker::new(s, side, n).run(n, &mut |parts, kk, sum| {
        if kk == k && sum == n {
            out.push(Overpartition { parts: parts.iter().rev().copied().collect() });
        }
    });
    out.sort_by(|a, b| {
        let va: Vec<u32> = a.parts.iter().map(|p| p.value).collect();
        let vb: Vec<u32> = b.parts.iter().map(|p| p.value).collect();
        vb.cmp(&va).then_with(|| {
            let fa: Vec<bool> = a.parts.iter().map(|p| p.overlined).collect();
            let fb: Vec<bool> = b.parts.iter().map(|p| p.overlined).collect();
            fa.cmp(&fb)
        })
    });
    out
}

/// Ranges `k <= k_max`, `m <= m_max`, `n <= n_max` for a p-table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PRange {
    pub k_max: u32,
    pub m_max: u32,
    pub n_max: u32,
}

/// `p_alpha(i)(k, m, n)` for every alpha index `1 <= i <= 2^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PTable {
    pub spectrum: SpectrumSet,
    pub range: PRange,
    counts: Vec<u64>,
}

impl PTable {
    fn idx(&self, i: usize, k: u32, m: u32, n: u32) -> usize {
        let PRange { k_max, m_max, n_max } = self.range;
        (((i - 1) * (k_max as usize + 1) + k as usize) * (m_max as usize + 1) + m as usize)
            * (n_max as usize + 1)
            + n as usize
    }

    fn in_range(&self, k: u32, m: u32, n: u32) -> bool {
        k <= self.range.k_max && m <= self.range.m_max && n <= self.range.n_max
    }

    /// The stored count, `None` outside the computed range.
    pub fn get(&self, i: usize, k: u32, m: u32, n: u32) -> Option<u64> {
        assert!(i >= 1 && i <= self.spectrum.alpha_count());
        self.in_range(k, m, n).then(|| self.counts[self.idx(i, k, m, n)])
    }

    /// Signed lookup: zero for any negative argument.
    pub fn p(&self, i: usize, k: i64, m: i64, n: i64) -> Result<u64, EnumerationError> {
        if k < 0 || m < 0 || n < 0 {
            return Ok(0);
        }
        self.get(i, k as u32, m as u32, n as u32)
            .ok_or(EnumerationError::RangeTooSmall { i, k, m, n })
    }

    /// Adds `delta` to one entry. Used for fault injection.
    pub fn perturb(&mut self, i: usize, k: u32, m: u32, n: u32, delta: i64) {
        assert!(self.in_range(k, m, n));
        let j = self.idx(i, k, m, n);
        self.counts[j] = self.counts[j].checked_add_signed(delta).expect("count stays nonnegative");
    }

    /// Iterates over the nonzero entries `(k, m, n, count)` of index `i`.
    pub fn nonzero(&self, i: usize) -> impl Iterator<Item = (u32, u32, u32, u64)> + '_ {
        let PRange { k_max, m_max, n_max } = self.range;
        (0..=k_max).flat_map(move |k| {
            (0..=m_max).flat_map(move |m| {
                (0..=n_max).filter_map(move |n| {
                    let c = self.counts[self.idx(i, k, m, n)];
                    (c != 0).then_some((k, m, n, c))
                })
            })
        })
    }
}

/// Builds the p-table by filtering the `E`-side enumeration on part count
/// and smallest part.
pub fn count_p(s: &SpectrumSet, k_max: u32, m_max: u32, n_max: u32) -> PTable {
    let range = PRange { k_max, m_max, n_max };
    let indices = s.alpha_count();
    let mut table = PTable {
        spectrum: s.clone(),
        range,
        counts: vec![0; indices * (k_max as usize + 1) * (m_max as usize + 1) * (n_max as usize + 1)],
    };
    let alphas: Vec<u32> = (1..=indices).map(|i| s.alpha(i)).collect();
    Walker::new(s, Side::E, n_max).run(n_max, &mut |parts, k, sum| {
        let m = parts.len() as u32;
        if k > k_max || m > m_max {
            return;
        }
        let smallest = parts.first().map_or(u32::MAX, |p| p.value);
        for (i0, &a) in alphas.iter().enumerate() {
            if a > smallest {
                break;
            }
            let j = table.idx(i0 + 1, k, m, sum);
            table.counts[j] += 1;
        }
    });
    table
}

/// Checks the two recurrences on the p-table:
///
/// * for `1 <= i < 2^r`, with `alpha = alpha(i)`, `w = w(alpha)` and
///   `v = v(alpha)`:
///   `p_i(k,m,n) - p_{i+1}(k,m,n) = p_v(k, m-1, n-(m-1)Nw-alpha)
///   + p_v(k-1, m-1, n-(m-1)N(w-1)-alpha)`;
/// * `p_{2^r}(k,m,n) = p_1(k, m, n-mN)`.
pub fn check_lemma1(table: &PTable, range: PRange) -> Result<Vec<VerificationReport>, EnumerationError> {
    let s = &table.spectrum;
    let t = table.range;
    if range.k_max > t.k_max || range.m_max > t.m_max || range.n_max > t.n_max {
        return Err(EnumerationError::RangeTooSmall {
            i: 1,
            k: range.k_max as i64,
            m: range.m_max as i64,
            n: range.n_max as i64,
        });
    }
    let big_n = s.modulus() as i64;
    let region = Window::new(range.n_max, range.m_max);
    let base = |eq: &str| {
        VerificationReport::new("lemma1", region)
            .param("equation", eq)
            .param("k_max", range.k_max)
    };

    let mut eq1 = base("eq1");
    let mut eq2 = base("eq2");
    let top = s.alpha_count();
    for k in 0..=range.k_max as i64 {
        for m in 0..=range.m_max as i64 {
            for n in 0..=range.n_max as i64 {
                let mono = Monomial::new(k as u32, m as u32, n as u32);
                if eq1.is_ok() {
                    for i in 1..top {
                        let e = &s.alpha_table()[i - 1];
                        let (alpha, w) = (e.value as i64, e.weight as i64);
                        let v = s.alpha_index(e.smallest).expect("v(alpha) is an alpha");
                        let lhs = table.p(i, k, m, n)? as i128 - table.p(i + 1, k, m, n)? as i128;
                        let rhs = if m == 0 {
                            0
                        } else {
                            table.p(v, k, m - 1, n - (m - 1) * big_n * w - alpha)? as i128
                                + table.p(v, k - 1, m - 1, n - (m - 1) * big_n * (w - 1) - alpha)? as i128
                        };
                        if lhs != rhs {
                            eq1 = eq1.fail(mono, &lhs.into(), &rhs.into());
                            eq1.detail = Some(serde_json::json!({"i": i}));
                            break;
                        }
                    }
                }
                if eq2.is_ok() {
                    let lhs = table.p(top, k, m, n)?;
                    let rhs = table.p(1, k, m, n - m * big_n)?;
                    if lhs != rhs {
                        eq2 = eq2.fail(mono, &lhs.into(), &rhs.into());
                    }
                }
            }
        }
    }
    Ok(vec![eq1, eq2])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(a: &[u32], n: u32) -> SpectrumSet {
        SpectrumSet::new(a, n).unwrap()
    }

    fn parts(p: &[(u32, bool)]) -> Overpartition {
        Overpartition { parts: p.iter().map(|&(value, overlined)| Part { value, overlined }).collect() }
    }

    #[test]
    fn fourteen_overpartitions_of_four() {
        let d = count_d(&sp(&[1], 1), 4, 4);
        assert_eq!(d.total(4), 14);
        assert_eq!(d.get(0, 0), 1);
        assert_eq!(list_witnesses(&sp(&[1], 1), Side::D, 0, 4).len() as u64, d.get(0, 4));
    }

    #[test]
    fn schur_instance_small_values() {
        let s = sp(&[1, 2], 3);
        assert_eq!(count_d(&s, 3, 3).get(0, 3), 1);
        let e = count_e(&s, 7, 7);
        assert_eq!(e.get(0, 7), 3);
        assert_eq!(e.get(0, 0), 1);
    }

    #[test]
    fn witness_listings() {
        let s = sp(&[1, 2], 3);
        assert_eq!(
            list_witnesses(&s, Side::E, 0, 7),
            vec![parts(&[(7, true)]), parts(&[(6, true), (1, true)]), parts(&[(5, true), (2, true)])]
        );
        assert_eq!(list_witnesses(&s, Side::D, 0, 0), vec![parts(&[])]);
        assert_eq!(list_witnesses(&sp(&[1], 1), Side::D, 2, 2), vec![parts(&[(1, false), (1, false)])]);
    }

    #[test]
    fn witnesses_are_canonical() {
        let s = sp(&[1, 2, 4], 7);
        for n in 0..=16 {
            for k in 0..=n {
                for side in [Side::D, Side::E] {
                    for w in list_witnesses(&s, side, k, n) {
                        assert!(w.is_canonical(), "{w}");
                        assert_eq!((w.sum(), w.k()), (n, k));
                        if side == Side::E {
                            // overlined parts strictly exceed their successor
                            for pair in w.parts.windows(2) {
                                if pair[0].value == pair[1].value {
                                    assert!(!pair[1].overlined);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn p_table_small_examples() {
        let s = sp(&[1, 2], 3);
        let p = count_p(&s, 4, 4, 12);
        assert_eq!(p.get(3, 0, 1, 3), Some(1));
        assert_eq!(p.get(3, 0, 1, 2), Some(0));
        for i in 1..=4 {
            assert_eq!(p.get(i, 0, 0, 0), Some(1));
            assert_eq!(p.get(i, 2, 0, 0), Some(0));
            assert_eq!(p.get(i, 0, 0, 5), Some(0));
        }
        // single overlined part: every n in A'_N
        for n in 1..=12 {
            let expected = s.in_a_prime_n(n) as u64;
            assert_eq!(p.get(1, 0, 1, n), Some(expected), "n = {n}");
        }
    }

    #[test]
    fn p_table_marginal_and_monotonicity() {
        let s = sp(&[1, 2, 4], 7);
        let n_max = 20;
        let p = count_p(&s, n_max, n_max, n_max);
        let e = count_e(&s, n_max, n_max);
        for k in 0..=n_max {
            for n in 0..=n_max {
                let total: u64 = (0..=n_max).map(|m| p.get(1, k, m, n).unwrap()).sum();
                assert_eq!(total, e.get(k, n));
                for m in 0..=n_max {
                    for i in 1..s.alpha_count() {
                        assert!(p.get(i + 1, k, m, n) <= p.get(i, k, m, n));
                    }
                }
            }
        }
    }

    #[test]
    fn lemma1_on_oracle_tables() {
        for (a, n, r) in [(vec![1u32, 2], 3u32, (4, 4, 30)), (vec![1, 2, 4], 7, (3, 3, 40))] {
            let s = sp(&a, n);
            let range = PRange { k_max: r.0, m_max: r.1, n_max: r.2 };
            let p = count_p(&s, range.k_max, range.m_max, range.n_max);
            let reports = check_lemma1(&p, range).unwrap();
            assert!(reports.iter().all(|r| r.is_ok()), "{reports:?}");
        }
    }

    #[test]
    fn lemma1_detects_a_mutation() {
        let s = sp(&[1, 2], 3);
        let range = PRange { k_max: 3, m_max: 3, n_max: 20 };
        let mut p = count_p(&s, 3, 3, 20);
        p.perturb(2, 1, 2, 9, 1);
        let reports = check_lemma1(&p, range).unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| r.is_fail()).collect();
        assert!(!failed.is_empty());
        assert!(failed[0].first_counterexample.is_some());
    }

    #[test]
    fn lemma1_range_too_small() {
        let s = sp(&[1, 2], 3);
        let p = count_p(&s, 2, 2, 10);
        let err = check_lemma1(&p, PRange { k_max: 2, m_max: 2, n_max: 11 });
        assert!(matches!(err, Err(EnumerationError::RangeTooSmall { .. })));
    }
}
