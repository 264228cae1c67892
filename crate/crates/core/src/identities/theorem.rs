//! `D(A_N; k, n) = E(A'_N; k, n)`, with both generating functions.

use num_bigint::BigInt;
use serde_json::json;

use crate::enumeration::{count_d, count_e, default_k_max};
use crate::report::VerificationReport;
use crate::series::{Monomial, Series, Window};
use crate::spectrum::SpectrumSet;

use super::build_f_family;

/// `prod_k (-q^a(k); q^N)_inf / (d q^a(k); q^N)_inf` as a `(d, q)`-series to `q^Q`.
pub fn product_formula(s: &SpectrumSet, q_max: u32) -> Series {
    let w = Window::new(q_max, 0);
    let n = s.modulus();
    s.elements().iter().fold(Series::one(w), |acc, &a| {
        let num = Series::pochhammer_product(w, 1, false, false, a, n, true).expect("positive offset");
        let den = Series::pochhammer_product(w, -1, true, false, a, n, false).expect("positive offset");
        acc * num * den
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoremRow {
    pub n: u32,
    pub k: u32,
    pub d: u64,
    pub e: u64,
    /// `[d^k q^n] f_a(1)(x = 1)`.
    pub f: BigInt,
    /// `[d^k q^n]` of the product.
    pub product: BigInt,
}

impl TheoremRow {
    pub fn agrees(&self) -> bool {
        BigInt::from(self.d) == BigInt::from(self.e) && BigInt::from(self.e) == self.f && self.f == self.product
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "k": self.k,
            "D": self.d.to_string(),
            "E": self.e.to_string(),
            "f": self.f.to_string(),
            "product": self.product.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremCheck {
    pub report: VerificationReport,
    /// Every `(n, k)` with `k <= n / a(1)`, ordered by `n` then `k`.
    pub rows: Vec<TheoremRow>,
}

impl TheoremCheck {
    /// CSV with header `n,k,D,E,match`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,k,D,E,match\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{}\n", r.n, r.k, r.d, r.e, r.agrees()));
        }
        out
    }

    pub fn rows_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.rows.iter().map(TheoremRow::to_json).collect())
    }
}

/// Four-way comparison for every `n <= Q` and every `k`: the two counts, the
/// `f_a(1)` series at `x = 1` and the product.
pub fn check_theorem(s: &SpectrumSet, q_max: u32) -> TheoremCheck {
    let k_max = default_k_max(s, q_max);
    let d = count_d(s, k_max, q_max);
    let e = count_e(s, k_max, q_max);
    let window = Window::new(q_max, q_max / s.a(1));
    let f = build_f_family(s, window).f_a1().eval_x_one();
    let product = product_formula(s, q_max);

    let mut report = VerificationReport::new("theorem", Window::new(q_max, 0))
        .param("a", s.elements())
        .param("N", s.modulus())
        .param("k_max", k_max);
    let mut rows = Vec::new();
    for n in 0..=q_max {
        for k in 0..=n / s.a(1) {
            let m = Monomial::new(k, 0, n);
            let row = TheoremRow {
                n,
                k,
                d: d.get(k, n),
                e: e.get(k, n),
                f: f.coefficient(m).expect("inside window"),
                product: product.coefficient(m).expect("inside window"),
            };
            if !row.agrees() && !report.is_fail() {
                report = report.fail(m, &BigInt::from(row.d), &BigInt::from(row.e));
                report.detail = Some(row.to_json());
            }
            rows.push(row);
        }
    }
    TheoremCheck { report, rows }
}
