//! The chain `f -> F -> A_n -> a_n -> G -> g` taking a solution of the
//! rank-`r` q-difference equation to one of rank `r - 1`, and the closed
//! form at rank one.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::report::VerificationReport;
use crate::series::{Monomial, Series, Window};
use crate::spectrum::SpectrumSet;

use super::coefficients::CoeffFamilies;
use super::equations::check_qdiff_series;
use super::theorem::product_formula;
use super::{build_f_family, mono, sign, IdentityError};

/// Which transform produced a [`CoefficientSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    /// `F = sum A_n x^n`.
    A,
    /// `G = sum a_n x^n`.
    LowerA,
    /// `A'_n = a_n prod_{k<n} (1 + q^(Nk + a(r)))`.
    APrime,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Origin::A => "A",
            Origin::LowerA => "a",
            Origin::APrime => "A'",
        })
    }
}

/// `x`-coefficients of a series, each a `(d, q)`-series in window `(Q, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSequence {
    pub entries: Vec<Series>,
    pub origin: Origin,
    /// Window of the series the entries came from.
    pub window: Window,
}

impl CoefficientSequence {
    pub fn get(&self, n: usize) -> &Series {
        &self.entries[n]
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `sum_n entries[n] x^n` on the original window.
    pub fn reassemble(&self) -> Series {
        Series::from_x_coefficients(self.window, &self.entries)
    }
}

/// `F = f prod_{n>=0} (1 - d x q^(Nn + a(r))) / (1 - x q^(Nn))`.
pub fn to_f(s: &SpectrumSet, f1: &Series) -> Series {
    let w = f1.window();
    let n = s.modulus();
    let ar = s.a(s.rank());
    let num = Series::pochhammer_product(w, -1, true, true, ar, n, true).expect("positive offset");
    let den = Series::pochhammer_product(w, -1, false, true, 0, n, false).expect("x attached");
    f1 * &num * &den
}

/// `A_n = [x^n] F` for `n <= X`.
pub fn extract_a(big_f: &Series) -> CoefficientSequence {
    let w = big_f.window();
    CoefficientSequence {
        entries: (0..=w.x_max).map(|n| big_f.x_coefficient(n)).collect(),
        origin: Origin::A,
        window: w,
    }
}

/// The q-difference equation satisfied by `F`:
///
/// `(1 + sum_j lead_j (-x)^j) F(x) = F(x q^N)
///   + sum_{j,l=1}^r T_{l,j} (-1)^(l-1) x^l F(x q^(jN))`.
pub fn check_eq_f(s: &SpectrumSet, big_f: &Series, cf: &CoeffFamilies) -> VerificationReport {
    let w = big_f.window();
    let r = s.rank();
    let n = s.modulus();
    let mut factor = Series::one(w);
    for j in 1..=r {
        factor = factor + cf.lead(j).truncated(w) * mono(w, sign(j as u32), 0, j as u32, 0);
    }
    let lhs = factor * big_f;
    let mut rhs = big_f.subst_x(n);
    for j in 1..=r {
        let shifted = big_f.subst_x(j as u32 * n);
        let mut poly = Series::zero(w);
        for l in 1..=r {
            poly = poly + cf.t(l, j).truncated(w) * mono(w, sign(l as u32 - 1), 0, l as u32, 0);
        }
        rhs = rhs + poly * shifted;
    }
    VerificationReport::new("eqF", w)
        .param("a", s.elements())
        .param("N", n)
        .compare(&lhs, &rhs)
}

/// The right side of the recurrence for `A_n`:
/// `sum_{m=1}^{min(r,n)} (lead_m + sum_j T_{m,j} q^(jN(n-m))) (-1)^(m+1) A_{n-m}`.
fn rec_rhs(s: &SpectrumSet, cf: &CoeffFamilies, earlier: &[Series], n: usize) -> Series {
    let w = earlier[0].window();
    let r = s.rank();
    let big_n = s.modulus() as u64;
    let mut out = Series::zero(w);
    for m in 1..=r.min(n) {
        let mut coeff = cf.lead(m).truncated(w);
        for j in 1..=r {
            let e = j as u64 * big_n * (n - m) as u64;
            if e <= w.q_max as u64 {
                coeff = coeff + cf.t(m, j).truncated(w).shift(Monomial::q(e as u32));
            }
        }
        let term = coeff * &earlier[n - m];
        out = if m % 2 == 1 { out + term } else { out - term };
    }
    out
}

/// The recurrence `(1 - q^(nN)) A_n = ...` on an extracted sequence, and the
/// same sequence recomputed from `A_0 = 1` by solving the recurrence.
pub fn check_rec_a(seq: &CoefficientSequence, cf: &CoeffFamilies) -> Vec<VerificationReport> {
    let s = &cf.spectrum;
    let w = seq.window;
    let w0 = Window::new(w.q_max, 0);
    let step = s.modulus();
    let mut lhs = Vec::with_capacity(seq.len());
    let mut rhs = Vec::with_capacity(seq.len());
    let mut solved: Vec<Series> = Vec::with_capacity(seq.len());
    for n in 0..seq.len() {
        let a_n = seq.get(n);
        let shift = n as u64 * step as u64;
        let mut l = a_n.clone();
        if shift <= w.q_max as u64 {
            l = l - a_n.shift(Monomial::q(shift as u32));
        }
        lhs.push(l);
        if n == 0 {
            rhs.push(Series::zero(w0));
            solved.push(Series::one(w0));
            continue;
        }
        rhs.push(rec_rhs(s, cf, &seq.entries, n));
        let next = rec_rhs(s, cf, &solved, n);
        let next = if shift <= w.q_max as u64 {
            next.div_one_minus_term(&BigInt::from(1), Monomial::q(shift as u32))
                .expect("q-power divisor")
        } else {
            next
        };
        solved.push(next);
    }
    let base = |part: &str| {
        VerificationReport::new("recA", w)
            .param("a", s.elements())
            .param("N", step)
            .param("part", part)
    };
    vec![
        base("recurrence").compare(&Series::from_x_coefficients(w, &lhs), &Series::from_x_coefficients(w, &rhs)),
        base("solve").compare(&seq.reassemble(), &Series::from_x_coefficients(w, &solved)),
    ]
}

/// `A_n -> a_n = A_n / prod_{k<n} (1 + q^(Nk + a(r)))`.
fn lower(s: &SpectrumSet, seq: &CoefficientSequence) -> CoefficientSequence {
    let big_n = s.modulus() as u64;
    let ar = s.a(s.rank()) as u64;
    let q_max = seq.window.q_max as u64;
    let minus_one = BigInt::from(-1);
    let entries = seq
        .entries
        .iter()
        .enumerate()
        .map(|(n, a)| {
            let mut out = a.clone();
            for k in 0..n as u64 {
                let e = big_n * k + ar;
                if e > q_max {
                    break;
                }
                out = out.div_one_minus_term(&minus_one, Monomial::q(e as u32)).expect("q-power divisor");
            }
            out
        })
        .collect();
    CoefficientSequence {
        entries,
        origin: Origin::LowerA,
        window: seq.window,
    }
}

/// One descent step: from a solution `f1` of the rank-`r` equation to the
/// series `g` that solves the equation of the truncated spectrum.
pub fn descend(s: &SpectrumSet, f1: &Series) -> Result<Series, IdentityError> {
    if s.rank() < 2 {
        return Err(IdentityError::RankTooSmall(s.rank()));
    }
    let w = f1.window();
    let big_g = lower(s, &extract_a(&to_f(s, f1))).reassemble();
    let p = Series::pochhammer_product(w, -1, false, true, 0, s.modulus(), true)?;
    Ok(big_g * p)
}

/// Follows the chain from rank `r` down to rank one. At each step `g` is
/// compared against the independently enumerated family of the truncated
/// spectrum and checked against that spectrum's q-difference equation.
pub fn check_descend(s: &SpectrumSet, window: Window) -> Vec<VerificationReport> {
    if s.rank() < 2 {
        return vec![VerificationReport::skipped("descend", "rank 1 has no lower spectrum")];
    }
    let mut out = Vec::new();
    let mut current = s.clone();
    let mut f1 = build_f_family(s, window).f_a1().clone();
    while let Some(lower_s) = current.truncated() {
        let g = descend(&current, &f1).expect("rank at least 2");
        let expected = build_f_family(&lower_s, window).f_a1().clone();
        out.push(
            VerificationReport::new("descend", window)
                .param("from", current.elements())
                .param("to", lower_s.elements())
                .param("part", "family")
                .compare(&g, &expected),
        );
        out.push(
            check_qdiff_series(&lower_s, &g)
                .param("from", current.elements())
                .param("part", "qdiff")
                .renamed("descend"),
        );
        if lower_s.rank() < 2 {
            break;
        }
        current = lower_s;
        f1 = g;
    }
    out
}

/// `prod_{n>=0} (1 + x q^(Nn + a1)) / (1 - d x q^(Nn + a1))`.
pub fn solve_r1(a1: u32, modulus: u32, window: Window) -> Series {
    assert!(a1 >= 1 && modulus >= a1, "need 1 <= a1 <= N");
    let num = Series::pochhammer_product(window, 1, false, true, a1, modulus, true).expect("positive offset");
    let den = Series::pochhammer_product(window, -1, true, true, a1, modulus, false).expect("positive offset");
    num * den
}

/// The rank-one closed form against the enumerated family and, at `x = 1`,
/// against the product formula.
pub fn check_r1_closed_form(a1: u32, modulus: u32, window: Window) -> Vec<VerificationReport> {
    let s = SpectrumSet::new(&[a1], modulus).expect("a1 <= N is a valid spectrum");
    let closed = solve_r1(a1, modulus, window);
    let fam = build_f_family(&s, window);
    let base = |part: &str, w: Window| {
        VerificationReport::new("r1-closed-form", w)
            .param("a1", a1)
            .param("N", modulus)
            .param("part", part)
    };
    let mut out = vec![base("family", window).compare(&closed, fam.f_a1())];
    // x = 1 is only exact when every x-power at q-order <= Q is present
    if window.x_max >= window.q_max / a1 {
        let w0 = Window::new(window.q_max, 0);
        out.push(base("product", w0).compare(&closed.eval_x_one(), &product_formula(&s, window.q_max)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(a: &[u32], n: u32) -> SpectrumSet {
        SpectrumSet::new(a, n).unwrap()
    }

    #[test]
    fn f_has_unit_q0_row() {
        let s = sp(&[1, 2], 3);
        let w = Window::new(12, 12);
        let big_f = to_f(&s, build_f_family(&s, w).f_a1());
        for n in 0..=12 {
            assert_eq!(big_f.coefficient(Monomial::new(0, n, 0)).unwrap(), 1.into());
        }
        let seq = extract_a(&big_f);
        assert_eq!(seq.get(0), &Series::one(Window::new(12, 0)));
        assert_eq!(seq.reassemble(), big_f);
    }

    #[test]
    fn eq_f_and_rec_hold() {
        for (a, n, q, x) in [(vec![1u32, 2], 3u32, 25u32, 25u32), (vec![1, 2, 4], 7, 30, 20)] {
            let s = sp(&a, n);
            let w = Window::new(q, x);
            let cf = CoeffFamilies::new(&s);
            let big_f = to_f(&s, build_f_family(&s, w).f_a1());
            let r = check_eq_f(&s, &big_f, &cf);
            assert!(r.is_ok(), "{r:?}");
            for r in check_rec_a(&extract_a(&big_f), &cf) {
                assert!(r.is_ok(), "{r:?}");
            }
        }
    }

    #[test]
    fn eq_f_detects_c_fault() {
        let s = sp(&[1, 2], 3);
        let w = Window::new(20, 20);
        let mut cf = CoeffFamilies::new(&s);
        cf.c.get_mut(&(1, 2)).unwrap().add_to_coefficient(Monomial::new(1, 0, 6), &1.into());
        let big_f = to_f(&s, build_f_family(&s, w).f_a1());
        assert!(check_eq_f(&s, &big_f, &cf).is_fail());
    }

    #[test]
    fn descend_reaches_rank_one() {
        let w = Window::new(20, 20);
        for r in check_descend(&sp(&[1, 2, 4], 7), w) {
            assert!(r.is_ok(), "{r:?}");
        }
        assert_eq!(descend(&sp(&[1], 1), &Series::one(w)), Err(IdentityError::RankTooSmall(1)));
    }

    #[test]
    fn rank_one_closed_form() {
        for (a1, n) in [(1, 3), (1, 1), (2, 5)] {
            for r in check_r1_closed_form(a1, n, Window::new(20, 20)) {
                assert!(r.is_ok(), "{r:?}");
            }
        }
        let w = Window::new(4, 4);
        assert_eq!(solve_r1(1, 1, w).eval_x_one().q_total(4), 14.into());
        assert_eq!(solve_r1(1, 1, Window::new(10, 0)), Series::one(Window::new(10, 0)));
    }
}
