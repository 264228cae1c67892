//! Polynomial coefficient families `c, b, e, f` of the recurrences and the
//! exact polynomial identities between them.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::report::VerificationReport;
use crate::series::{Monomial, Series, Window};
use crate::spectrum::SpectrumSet;

use super::{mono, qb};

const P: Window = Window::polynomial();

/// Exact `(d, q)`-polynomials built from a spectrum of rank `r`, with
/// `sigma(B, w) = sum_{alpha < B, w(alpha) = w} q^alpha`:
///
/// * `c[k,j] = q^(N k(k+1)/2 + k a(r)) [j-1, k] d^k`
/// * `b[m,j] = (d^(m-1) sigma(a(r+1), j+m-1) + d^m sigma(a(r+1), j+m)) [j+m-1, m-1]`
/// * `e[m,j] = (d^(m-1) sigma(a(r), j+m-1) + d^m sigma(a(r), j+m)) [j+m-1, m-1]`
/// * `f[m,k] = q^(N k(k+1)/2 + k a(r)) [m-1, k]`
/// * `lead[j] = d^(j-1) sigma(a(r), j-1) + d^j sigma(a(r), j)`
///
/// Gaussian binomials are in base `q^N`. Entries are stored for every index
/// in `0..=r+1`; all other entries are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffFamilies {
    pub spectrum: SpectrumSet,
    pub c: BTreeMap<(usize, usize), Series>,
    pub b: BTreeMap<(usize, usize), Series>,
    pub e: BTreeMap<(usize, usize), Series>,
    pub f: BTreeMap<(usize, usize), Series>,
    pub lead: BTreeMap<usize, Series>,
}

fn q_power(n: u64) -> Series {
    Series::term(P, Monomial::q(n as u32), 1)
}

impl CoeffFamilies {
    pub fn new(s: &SpectrumSet) -> Self {
        let r = s.rank();
        let n = s.modulus();
        let ar = s.a(r) as u64;
        let top = s.a(r + 1);
        let sigma = |bound: u32, w: i64| {
            if w < 0 {
                Series::zero(P)
            } else {
                s.restricted_power_sum(bound, w as u32)
            }
        };
        let tri = |k: u64| q_power(n as u64 * k * (k + 1) / 2 + k * ar);
        let pair = |bound: u32, m: i64, w: i64| {
            // d^(m-1) sigma(bound, w-1) + d^m sigma(bound, w), for m >= 1
            mono(P, 1, m as u32 - 1, 0, 0) * sigma(bound, w - 1) + mono(P, 1, m as u32, 0, 0) * sigma(bound, w)
        };

        let mut fam = CoeffFamilies {
            spectrum: s.clone(),
            c: BTreeMap::new(),
            b: BTreeMap::new(),
            e: BTreeMap::new(),
            f: BTreeMap::new(),
            lead: BTreeMap::new(),
        };
        for i in 0..=r + 1 {
            for j in 0..=r + 1 {
                let (ii, jj) = (i as i64, j as i64);
                // c[k=i, j]
                let c = tri(i as u64) * qb(jj - 1, ii, n, P) * mono(P, 1, i as u32, 0, 0);
                fam.c.insert((i, j), c);
                // f[m=i, k=j]
                fam.f.insert((i, j), tri(j as u64) * qb(ii - 1, jj, n, P));
                if i >= 1 {
                    let binom = qb(jj + ii - 1, ii - 1, n, P);
                    fam.b.insert((i, j), pair(top, ii, jj + ii) * &binom);
                    fam.e.insert((i, j), pair(s.a(r), ii, jj + ii) * &binom);
                } else {
                    fam.b.insert((i, j), Series::zero(P));
                    fam.e.insert((i, j), Series::zero(P));
                }
            }
            let lead = if i == 0 { Series::one(P) } else { pair(s.a(r), i as i64, i as i64) };
            fam.lead.insert(i, lead);
        }
        fam
    }

    fn get(map: &BTreeMap<(usize, usize), Series>, key: (usize, usize)) -> Series {
        map.get(&key).cloned().unwrap_or_else(|| Series::zero(P))
    }

    pub fn c(&self, k: usize, j: usize) -> Series {
        Self::get(&self.c, (k, j))
    }

    pub fn b(&self, m: usize, j: usize) -> Series {
        Self::get(&self.b, (m, j))
    }

    pub fn e(&self, m: usize, j: usize) -> Series {
        Self::get(&self.e, (m, j))
    }

    pub fn f(&self, m: usize, k: usize) -> Series {
        Self::get(&self.f, (m, k))
    }

    pub fn lead(&self, j: usize) -> Series {
        self.lead.get(&j).cloned().unwrap_or_else(|| Series::zero(P))
    }

    /// `T[m,j] = sum_{k=0}^{min(j-1, m-1)} c[k,j] b[m-k,j]`.
    pub fn t(&self, m: usize, j: usize) -> Series {
        (0..j.min(m)).fold(Series::zero(P), |acc, k| acc + self.c(k, j) * self.b(m - k, j))
    }

    /// `T'[m,j] = sum_{k=0}^{min(m-1, j)} f[m,k] e[m,j-k]
    ///          + q^a(r) sum_{k=0}^{min(m-1, j-1)} f[m,k] e[m,j-k-1]`.
    pub fn t_prime(&self, m: usize, j: usize) -> Series {
        let ar = self.spectrum.a(self.spectrum.rank()) as u64;
        let first = (0..=(m - 1).min(j)).fold(Series::zero(P), |acc, k| acc + self.f(m, k) * self.e(m, j - k));
        let second = if j == 0 {
            Series::zero(P)
        } else {
            (0..=(m - 1).min(j - 1)).fold(Series::zero(P), |acc, k| acc + self.f(m, k) * self.e(m, j - k - 1))
        };
        first + q_power(ar) * second
    }
}

/// `T = T'` for all `1 <= m, j <= r`, the assembled coefficients `S_m = S'_m`
/// (with a formal variable, carried in the `x` slot, standing for
/// `q^(N(n-m))`), the Gaussian binomial product identity for
/// `0 <= j, k, m <= r`, and the vanishing statements the rearrangements use.
pub fn check_t_identity(s: &SpectrumSet) -> Vec<VerificationReport> {
    check_t_identity_with(&CoeffFamilies::new(s))
}

/// [`check_t_identity`] on a given (possibly perturbed) set of families.
pub fn check_t_identity_with(cf: &CoeffFamilies) -> Vec<VerificationReport> {
    let s = &cf.spectrum;
    let r = s.rank();
    let n = s.modulus();
    let ar = s.a(r) as u64;
    let mut out = Vec::new();

    for m in 1..=r {
        for j in 1..=r {
            out.push(
                VerificationReport::new("T-identity", P)
                    .param("part", "T")
                    .param("m", m)
                    .param("j", j)
                    .compare(&cf.t(m, j), &cf.t_prime(m, j)),
            );
        }
    }

    let y = |nu: usize| mono(P, 1, 0, nu as u32, 0);
    for m in 1..=r {
        let s_m = (1..=r).fold(cf.lead(m), |acc, j| acc + cf.t(m, j) * y(j));
        let mut s_prime = Series::zero(P);
        for nu in 0..r {
            for mu in 0..=(m - 1).min(nu) {
                s_prime = s_prime + cf.f(m, mu) * cf.e(m, nu - mu) * y(nu);
            }
        }
        for nu in 1..=r {
            for mu in 0..=(m - 1).min(nu - 1) {
                s_prime = s_prime + q_power(ar) * cf.f(m, mu) * cf.e(m, nu - mu - 1) * y(nu);
            }
        }
        out.push(
            VerificationReport::new("T-identity", P)
                .param("part", "S")
                .param("m", m)
                .compare(&s_m, &s_prime),
        );
        out.push(
            VerificationReport::new("T-identity", P)
                .param("part", "f0e0")
                .param("m", m)
                .compare(&(cf.f(m, 0) * cf.e(m, 0)), &cf.lead(m)),
        );
    }

    // [m-1, k] [j+m-k-1, m-1] = [j, k] [j+m-k-1, m-k-1]
    let mut qbin = VerificationReport::new("T-identity", P).param("part", "equalityqbin").param("max", r);
    'outer: for j in 0..=r as i64 {
        for k in 0..=r as i64 {
            for m in 0..=r as i64 {
                let lhs = qb(m - 1, k, n, P) * qb(j + m - k - 1, m - 1, n, P);
                let rhs = qb(j, k, n, P) * qb(j + m - k - 1, m - k - 1, n, P);
                if let Some((at, a, b)) = lhs.first_difference(&rhs, P) {
                    qbin = qbin.fail(at, &a, &b);
                    qbin.detail = Some(serde_json::json!({"j": j, "k": k, "m": m}));
                    break 'outer;
                }
            }
        }
    }
    out.push(qbin);

    let zero = Series::zero(P);
    let mut vanish = VerificationReport::new("T-identity", P).param("part", "vanishing");
    'e: for m in 1..=r {
        for mu in 0..m {
            if let Some((at, a, b)) = cf.e(m, r - mu).first_difference(&zero, P) {
                vanish = vanish.fail(at, &a, &b);
                vanish.detail = Some(serde_json::json!({"family": "e", "m": m, "j": r - mu}));
                break 'e;
            }
        }
    }
    'b: for m in 1..=r + 1 {
        for j in 1..=r + 1 {
            if j + m > r + 1 {
                if let Some((at, a, b)) = cf.b(m, j).first_difference(&zero, P) {
                    vanish = vanish.fail(at, &a, &b);
                    vanish.detail = Some(serde_json::json!({"family": "b", "m": m, "j": j}));
                    break 'b;
                }
            }
        }
    }
    out.push(vanish);
    out
}

/// Both q-Pascal identities for `1 <= m <= m_max`, `0 <= r <= m`, in base
/// `q^step`, and the specialisation `q = 1` to ordinary binomials.
pub fn check_pascal(step: u32, m_max: i64) -> Vec<VerificationReport> {
    let mut out = Vec::new();
    for identity in ["pascal1", "pascal2"] {
        let mut report = VerificationReport::new("pascal", P)
            .param("identity", identity)
            .param("step", step)
            .param("m_max", m_max);
        'scan: for m in 1..=m_max {
            for r in 0..=m {
                let lhs = qb(m, r, step, P);
                let rhs = if identity == "pascal1" {
                    mono(P, 1, 0, 0, step * r as u32) * qb(m - 1, r, step, P) + qb(m - 1, r - 1, step, P)
                } else {
                    qb(m - 1, r, step, P) + mono(P, 1, 0, 0, step * (m - r) as u32) * qb(m - 1, r - 1, step, P)
                };
                if let Some((at, a, b)) = lhs.first_difference(&rhs, P) {
                    report = report.fail(at, &a, &b);
                    report.detail = Some(serde_json::json!({"m": m, "r": r}));
                    break 'scan;
                }
            }
        }
        out.push(report);
    }
    let mut at_one = VerificationReport::new("pascal", P).param("identity", "q=1").param("step", step);
    'one: for m in 0..=m_max {
        let mut binom = BigInt::from(1);
        for r in 0..=m {
            let value: BigInt = qb(m, r, step, P).iter().map(|(_, c)| c).sum();
            if value != binom {
                at_one = at_one.fail(Monomial::ONE, &value, &binom);
                at_one.detail = Some(serde_json::json!({"m": m, "r": r}));
                break 'one;
            }
            binom = binom * (m - r) / (r + 1);
        }
    }
    out.push(at_one);
    out
}

/// `prod_{k<n} (1 + q^(sk) t) = sum_k q^(s k(k-1)/2) [n, k]_(q^s) t^k` for
/// `0 <= n <= n_max` and several monomials `t`, among them
/// `t = -d x q^(N + a(r))` in base `q^N`.
pub fn check_qbinom_theorem(s: &SpectrumSet, n_max: u32) -> Vec<VerificationReport> {
    let r = s.rank();
    let n = s.modulus();
    let shift = n + s.a(r);
    let cases = [
        (1i64, Monomial::new(0, 1, 0), 1u32),
        (1, Monomial::new(1, 1, 1), 1),
        (-1, Monomial::new(1, 1, shift), 1),
        (-1, Monomial::new(1, 1, shift), n),
    ];
    let mut out = Vec::new();
    for (c, t, step) in cases {
        let t_series = Series::term(P, t, c);
        let mut report = VerificationReport::new("qbinom-theorem", P)
            .param("t", t_series.to_string())
            .param("step", step)
            .param("n_max", n_max);
        for len in 0..=n_max {
            let lhs = (0..len).fold(Series::one(P), |acc, k| {
                acc * (Series::one(P) + t_series.shift(Monomial::q(step * k)))
            });
            let mut rhs = Series::zero(P);
            let mut t_pow = Series::one(P);
            for k in 0..=len {
                let tri = step * (k * k.saturating_sub(1) / 2);
                rhs = rhs + mono(P, 1, 0, 0, tri) * qb(len as i64, k as i64, step, P) * &t_pow;
                t_pow = t_pow * &t_series;
            }
            report = report.compare(&lhs, &rhs);
            if report.is_fail() {
                report.detail = Some(serde_json::json!({"n": len}));
                break;
            }
        }
        out.push(report);
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
    fn t_identity_three_spectra() {
        for (a, n) in [(vec![1u32], 1u32), (vec![1, 2], 3), (vec![1, 2, 4], 7), (vec![1, 2, 4, 8], 15)] {
            for r in check_t_identity(&sp(&a, n)) {
                assert!(r.is_ok(), "{a:?}: {r:?}");
            }
        }
    }

    #[test]
    fn b_nonzero_at_the_boundary() {
        // j + m - 1 = r still carries the full subset sum
        let cf = CoeffFamilies::new(&sp(&[1], 1));
        assert_eq!(cf.b(1, 1), Series::term(P, Monomial::q(1), 1));
    }

    #[test]
    fn c_fault_is_detected() {
        let mut cf = CoeffFamilies::new(&sp(&[1, 2, 4], 7));
        cf.c.get_mut(&(1, 2)).unwrap().add_to_coefficient(Monomial::q(3), &1.into());
        assert!(check_t_identity_with(&cf).iter().any(|r| r.is_fail()));
    }

    #[test]
    fn pascal_and_binomial_theorem() {
        for step in [1, 7] {
            assert!(check_pascal(step, 12).iter().all(|r| r.is_ok()));
        }
        assert!(check_qbinom_theorem(&sp(&[1, 2, 4], 7), 8).iter().all(|r| r.is_ok()));
    }
}
