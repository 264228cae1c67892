//! Generating functions of the gap-condition overpartitions and the
//! identities relating them.
//!
//! [`FFamily`] holds `f_alpha(i)(d, x, q) = sum p_alpha(i)(k, m, n) d^k x^m q^n`
//! for every alpha index, built from the enumeration oracle. The checkers in
//! [`equations`] verify the functional equations among the `f`'s; those in
//! [`transform`] follow `f -> F -> A_n -> a_n -> G -> g` down to the
//! spectrum of rank `r - 1`; [`coefficients`] holds the polynomial families
//! entering the recurrences and the identities between them.

use num_bigint::BigInt;
use thiserror::Error;

use crate::enumeration::{count_p, EnumerationError, PTable};
use crate::series::{Monomial, Series, SeriesError, Window};
use crate::spectrum::SpectrumSet;

pub mod coefficients;
pub mod equations;
pub mod suite;
pub mod theorem;
pub mod transform;

pub use coefficients::{check_pascal, check_qbinom_theorem, check_t_identity, CoeffFamilies};
pub use equations::{check_conj, check_intermediate, check_lemma2, check_qdiff, Intermediate};
pub use suite::{CheckKind, Suite, SuiteConfig};
pub use theorem::{check_theorem, product_formula, TheoremCheck, TheoremRow};
pub use transform::{
    check_descend, check_eq_f, check_r1_closed_form, check_rec_a, descend, extract_a, solve_r1, to_f,
    CoefficientSequence, Origin,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("descent needs rank at least 2, got {0}")]
    RankTooSmall(usize),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
}

/// The family `f_alpha(i)`, `1 <= i <= 2^r`, on a common window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FFamily {
    pub spectrum: SpectrumSet,
    pub window: Window,
    f: Vec<Series>,
}

impl FFamily {
    /// `f_alpha(i)`, 1-based.
    pub fn f(&self, i: usize) -> &Series {
        &self.f[i - 1]
    }

    pub fn f_a1(&self) -> &Series {
        &self.f[0]
    }

    /// `f_alpha` for an alpha value (the sentinel `N + a(1)` included).
    pub fn f_value(&self, alpha: u32) -> &Series {
        let i = self
            .spectrum
            .alpha_index(alpha)
            .unwrap_or_else(|| panic!("{alpha} is not an alpha value"));
        self.f(i)
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    /// Adds `delta` to one coefficient of `f_alpha(i)`. Used for fault injection.
    pub fn perturb(&mut self, i: usize, mono: Monomial, delta: i64) {
        self.f[i - 1].add_to_coefficient(mono, &BigInt::from(delta));
    }
}

/// Assembles every `f_alpha(i)` from the enumerated p-table on `window`.
pub fn build_f_family(s: &SpectrumSet, window: Window) -> FFamily {
    let m_max = family_x_max(s, window);
    family_from_table(&count_p(s, m_max, m_max, window.q_max), window)
}

/// The largest part count inside `window`: `min(X, Q / a(1))`.
pub fn family_x_max(s: &SpectrumSet, window: Window) -> u32 {
    window.x_max.min(window.q_max / s.a(1))
}

/// [`build_f_family`] from an existing table covering `k, m <= min(X, Q/a(1))`
/// and `n <= Q`.
pub fn family_from_table(table: &PTable, window: Window) -> FFamily {
    let s = &table.spectrum;
    let f = (1..=s.alpha_count())
        .map(|i| {
            Series::from_terms(
                window,
                table.nonzero(i).map(|(k, m, n, c)| (Monomial::new(k, m, n), BigInt::from(c))),
            )
        })
        .collect();
    FFamily { spectrum: s.clone(), window, f }
}

/// Gaussian binomial in base `q^step`, restricted to `window`.
pub(crate) fn qb(m: i64, r: i64, step: u32, window: Window) -> Series {
    Series::qbinom(m, r, step)
        .expect("Gaussian binomial division is exact")
        .truncated(window)
}

/// `c d^d x^x q^q` on `window`.
pub(crate) fn mono(window: Window, c: i64, d: u32, x: u32, q: u32) -> Series {
    Series::term(window, Monomial::new(d, x, q), c)
}

/// `(1 - d^d x^x q^q)` on `window`.
pub(crate) fn one_minus(window: Window, d: u32, x: u32, q: u32) -> Series {
    Series::one(window) - mono(window, 1, d, x, q)
}

pub(crate) fn sign(e: u32) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}
