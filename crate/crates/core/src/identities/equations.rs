//! Functional equations satisfied by the family `f_alpha(i)`.

use std::fmt;

use crate::report::VerificationReport;
use crate::series::{Series, Window};
use crate::spectrum::{AlphaEntry, SpectrumSet};

use super::{mono, one_minus, qb, sign, FFamily};

/// Overpartitions with smallest part exactly `alpha`:
/// `x q^alpha f_v(x q^(N w)) + d x q^alpha f_v(x q^(N (w - 1)))`.
fn smallest_part_term(fam: &FFamily, e: &AlphaEntry) -> Series {
    let w = fam.window;
    let n = fam.spectrum.modulus();
    let fv = fam.f_value(e.smallest);
    &mono(w, 1, 0, 1, e.value) * &fv.subst_x(n * e.weight)
        + &mono(w, 1, 1, 1, e.value) * &fv.subst_x(n * (e.weight - 1))
}

/// Checks `f_alpha(i) - f_alpha(i+1)` against the smallest-part term for
/// every `i < 2^r`, and `f_alpha(2^r)(x) = f_a(1)(x q^N)`.
pub fn check_lemma2(fam: &FFamily) -> Vec<VerificationReport> {
    let s = &fam.spectrum;
    let mut out = Vec::new();
    for (i0, e) in s.alpha_table().iter().enumerate() {
        let i = i0 + 1;
        let lhs = fam.f(i) - fam.f(i + 1);
        let rhs = smallest_part_term(fam, e);
        out.push(
            VerificationReport::new("lemma2", fam.window)
                .param("equation", "eqf1")
                .param("i", i)
                .compare(&lhs, &rhs),
        );
    }
    let lhs = fam.f(s.alpha_count());
    let rhs = fam.f_a1().subst_x(s.modulus());
    out.push(
        VerificationReport::new("lemma2", fam.window)
            .param("equation", "eqf2")
            .compare(lhs, &rhs),
    );
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Intermediate {
    /// `f_a(1) - f_a(k)` as a sum over `alpha < a(k)`.
    Eq35,
    /// `f_a(k-1) - f_a(k)` as a sum over `a(k-1) <= alpha < a(k)`.
    Eq36,
    /// `f_a(k)` in terms of `f_a(k-1)` and `f_a(1)(x q^N)`.
    Eq37,
}

impl Intermediate {
    pub const ALL: [Intermediate; 3] = [Intermediate::Eq35, Intermediate::Eq36, Intermediate::Eq37];
}

impl fmt::Display for Intermediate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Intermediate::Eq35 => "eq3.5",
            Intermediate::Eq36 => "eq3.6",
            Intermediate::Eq37 => "eq3.7",
        })
    }
}

/// Checks one of the three intermediate equations for every `2 <= k <= r`.
///
/// `eq3.7` carries the factor `q^(a(k-1) - N)`; it is compared after
/// multiplying through by `q^(N - a(k-1))`.
pub fn check_intermediate(fam: &FFamily, which: Intermediate) -> Vec<VerificationReport> {
    let s = &fam.spectrum;
    let w = fam.window;
    let n = s.modulus();
    let sum_over = |lo: u32, hi: u32| {
        s.alpha_table()
            .iter()
            .filter(|e| e.value >= lo && e.value < hi)
            .fold(Series::zero(w), |acc, e| acc + smallest_part_term(fam, e))
    };
    let mut out = Vec::new();
    for k in 2..=s.rank() {
        let (ak, prev) = (s.a(k), s.a(k - 1));
        let mut report = VerificationReport::new("intermediate", w)
            .param("equation", which.to_string())
            .param("k", k);
        let (lhs, rhs) = match which {
            Intermediate::Eq35 => (fam.f_a1() - fam.f_value(ak), sum_over(0, ak)),
            Intermediate::Eq36 => (fam.f_value(prev) - fam.f_value(ak), sum_over(prev, ak)),
            Intermediate::Eq37 => {
                report = report.param("cleared_factor", format!("q^{}", n - prev));
                let clear = mono(w, 1, 0, 0, n - prev);
                let fp = fam.f_value(prev);
                let lhs = &clear * fam.f_value(ak);
                let rhs = &clear * &one_minus(w, 1, 1, prev) * fp - fam.f_a1().subst_x(n)
                    + one_minus(w, 0, 1, n) * fp.subst_x(n);
                (lhs, rhs)
            }
        };
        out.push(report.compare(&lhs, &rhs));
    }
    out
}

/// `prod_{j=1}^{k-1} (1 - d x q^a(j))` on `window`.
fn d_product(s: &SpectrumSet, k: usize, window: Window) -> Series {
    (1..k).fold(Series::one(window), |acc, j| acc * one_minus(window, 1, 1, s.a(j)))
}

/// The sum `s_k(x)` of the key lemma, built from `f_a(1)` alone:
///
/// `sum_{j=1}^{k-1} P_{k,j}(x) prod_{h=1}^{j-1} (1 - x q^(hN)) f_a(1)(x q^(jN))`
/// with `P_{k,j} = sum_{m=0}^{k-j-1} d^m sum_{alpha < a(k), w(alpha) = j+m}
/// x q^alpha ((-x)^(m-1) [j+m-1, m-1] + (-x)^m [j+m, m])` in base `q^N`.
pub(crate) fn s_k(s: &SpectrumSet, k: usize, f1: &Series) -> Series {
    let w = f1.window();
    let n = s.modulus();
    let bound = s.a(k);
    let mut total = Series::zero(w);
    let mut x_product = Series::one(w);
    for j in 1..k {
        if j > 1 {
            x_product = x_product * one_minus(w, 0, 1, (j as u32 - 1) * n);
        }
        let mut p = Series::zero(w);
        for m in 0..(k - j) {
            let sigma = s.restricted_power_sum(bound, (j + m) as u32).truncated(w);
            if sigma.is_zero() {
                continue;
            }
            let (j, m) = (j as i64, m as i64);
            let mut inner = mono(w, sign(m as u32), m as u32, m as u32 + 1, 0) * qb(j + m, m, n, w);
            if m >= 1 {
                inner = inner
                    + mono(w, sign(m as u32 - 1), m as u32, m as u32, 0) * qb(j + m - 1, m - 1, n, w);
            }
            p = p + sigma * inner;
        }
        if p.is_zero() {
            continue;
        }
        total = total + p * &x_product * f1.subst_x(j as u32 * n);
    }
    total
}

/// The key lemma at level `k`, `1 <= k <= r + 1`:
/// `prod_{j<k} (1 - d x q^a(j)) f_a(1)(x) = f_a(k)(x) + s_k(x)`.
pub fn check_conj(fam: &FFamily, k: usize) -> VerificationReport {
    let s = &fam.spectrum;
    assert!((1..=s.rank() + 1).contains(&k), "k = {k} out of range");
    let lhs = d_product(s, k, fam.window) * fam.f_a1();
    let rhs = fam.f_value(s.a(k)) + s_k(s, k, fam.f_a1());
    VerificationReport::new("conj", fam.window).param("k", k).compare(&lhs, &rhs)
}

/// Both sides of the q-difference equation of rank `r` applied to `f1`.
pub(crate) fn qdiff_sides(s: &SpectrumSet, f1: &Series) -> (Series, Series) {
    let r = s.rank();
    let lhs = d_product(s, r + 1, f1.window()) * f1;
    let rhs = f1.subst_x(s.modulus()) + s_k(s, r + 1, f1);
    (lhs, rhs)
}

/// The q-difference equation relating `f_a(1)(x q^(jN))`, `0 <= j <= r`.
pub fn check_qdiff(fam: &FFamily) -> VerificationReport {
    check_qdiff_series(&fam.spectrum, fam.f_a1())
}

/// [`check_qdiff`] for an arbitrary candidate series `f1`.
pub fn check_qdiff_series(s: &SpectrumSet, f1: &Series) -> VerificationReport {
    let (lhs, rhs) = qdiff_sides(s, f1);
    VerificationReport::new("qdiff", f1.window())
        .param("a", s.elements())
        .param("N", s.modulus())
        .compare(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::build_f_family;
    use crate::series::Monomial;

    fn fam(a: &[u32], n: u32, q: u32) -> FFamily {
        build_f_family(&SpectrumSet::new(a, n).unwrap(), Window::new(q, q))
    }

    fn all_ok(r: &[VerificationReport]) -> bool {
        r.iter().all(|r| r.is_ok())
    }

    #[test]
    fn lemma2_holds() {
        assert!(all_ok(&check_lemma2(&fam(&[1, 2], 3, 30))));
        assert!(all_ok(&check_lemma2(&fam(&[1, 2, 4], 7, 35))));
    }

    #[test]
    fn lemma2_detects_fault() {
        let mut f = fam(&[1, 2], 3, 20);
        f.perturb(2, Monomial::new(1, 2, 11), 1);
        let reports = check_lemma2(&f);
        let bad: Vec<_> = reports.iter().filter(|r| r.is_fail()).collect();
        assert!(!bad.is_empty());
        assert!(bad[0].first_counterexample.is_some());
    }

    #[test]
    fn intermediate_equations_hold() {
        for which in Intermediate::ALL {
            assert!(all_ok(&check_intermediate(&fam(&[1, 2], 3, 25), which)), "{which}");
            assert!(all_ok(&check_intermediate(&fam(&[1, 2, 4], 7, 25), which)), "{which}");
        }
        assert!(check_intermediate(&fam(&[1], 1, 10), Intermediate::Eq37).is_empty());
    }

    #[test]
    fn key_lemma_all_levels() {
        for (a, n) in [(vec![1u32, 2], 3u32), (vec![1, 2, 4], 7), (vec![1, 3], 5)] {
            let f = fam(&a, n, 25);
            for k in 1..=a.len() + 1 {
                let r = check_conj(&f, k);
                assert!(r.is_ok(), "{a:?} k={k}: {r:?}");
            }
        }
    }

    #[test]
    fn rank_one_qdiff_is_the_simple_equation() {
        let f = fam(&[1], 1, 15);
        assert!(check_qdiff(&f).is_ok());
        // (1 - d x q) f(x) = (1 + x q) f(x q)
        let w = f.window;
        let f1 = f.f_a1();
        let lhs = one_minus(w, 1, 1, 1) * f1;
        let rhs = (Series::one(w) + mono(w, 1, 0, 1, 1)) * f1.subst_x(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn qdiff_holds() {
        assert!(check_qdiff(&fam(&[1, 2], 3, 30)).is_ok());
        assert!(check_qdiff(&fam(&[1, 2, 4], 7, 30)).is_ok());
    }

    #[test]
    fn key_lemma_at_top_matches_qdiff() {
        let f = fam(&[1, 2, 4], 7, 25);
        let s = &f.spectrum;
        let (lhs, rhs) = qdiff_sides(s, f.f_a1());
        let conj_rhs = f.f_value(s.sentinel()) + s_k(s, 4, f.f_a1());
        assert_eq!(rhs, conj_rhs);
        assert_eq!(lhs, d_product(s, 4, f.window) * f.f_a1());
    }
}
