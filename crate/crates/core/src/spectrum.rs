//! Spectrum sets `A = {a(1), ..., a(r)}`, the table `A'` of their subset
//! sums, residues modulo `N` and the difference conditions between parts.

use serde::Serialize;
use thiserror::Error;

use crate::series::{Monomial, Series, Window};

/// Largest accepted rank; the subset-sum table has `2^r - 1` entries.
pub const MAX_RANK: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("spectrum set is empty")]
    Empty,
    #[error("spectrum rank {0} exceeds the supported maximum {MAX_RANK}")]
    RankTooLarge(usize),
    #[error("subset sums collide: {first:?} and {second:?} both sum to {sum}")]
    CollidingSums {
        sum: u32,
        first: Vec<u32>,
        second: Vec<u32>,
    },
    #[error("a({k}) = {value} does not exceed the sum {prefix} of the smaller elements")]
    PrefixSumViolation { k: usize, value: u32, prefix: u64 },
    #[error("modulus {modulus} is smaller than the total sum {total}")]
    ModulusTooSmall { modulus: u32, total: u64 },
    #[error("{0} is not a subset sum of the spectrum")]
    NotInAlphaTable(u32),
}

/// One subset sum `alpha` together with its defining summands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaEntry {
    pub value: u32,
    /// `w(alpha)`: number of summands.
    pub weight: u32,
    /// `v(alpha)`: smallest summand.
    pub smallest: u32,
    /// Bit `j` set iff `a(j+1)` is a summand.
    #[serde(skip)]
    pub summands: u32,
}

impl AlphaEntry {
    /// 1-based indices `j` of the summands `a(j)`.
    pub fn summand_indices(&self) -> Vec<usize> {
        (0..32)
            .filter(|b| self.summands & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }
}

/// A validated spectrum set with modulus `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumSet {
    a: Vec<u32>,
    modulus: u32,
    alpha: Vec<AlphaEntry>,
}

impl SpectrumSet {
    /// Validates `a` and `modulus` and builds the subset-sum table.
    ///
    /// Checks run in the order: empty set, colliding subset sums, prefix-sum
    /// condition, modulus bound.
    pub fn new(a: &[u32], modulus: u32) -> Result<Self, SpectrumError> {
        if a.is_empty() {
            return Err(SpectrumError::Empty);
        }
        let r = a.len();
        if r > MAX_RANK {
            return Err(SpectrumError::RankTooLarge(r));
        }

        let mut sums: Vec<(u64, u32)> = (1u32..(1 << r))
            .map(|mask| {
                let s = (0..r)
                    .filter(|j| mask & (1 << j) != 0)
                    .map(|j| a[j] as u64)
                    .sum();
                (s, mask)
            })
            .collect();
        sums.sort();
        for w in sums.windows(2) {
            if w[0].0 == w[1].0 {
                let pick = |mask: u32| -> Vec<u32> {
                    (0..r).filter(|j| mask & (1 << j) != 0).map(|j| a[j]).collect()
                };
                return Err(SpectrumError::CollidingSums {
                    sum: w[0].0 as u32,
                    first: pick(w[0].1),
                    second: pick(w[1].1),
                });
            }
        }

        let mut prefix = 0u64;
        for (k, &value) in a.iter().enumerate() {
            if prefix >= value as u64 {
                return Err(SpectrumError::PrefixSumViolation { k: k + 1, value, prefix });
            }
            prefix += value as u64;
        }
        if (modulus as u64) < prefix {
            return Err(SpectrumError::ModulusTooSmall { modulus, total: prefix });
        }

        let alpha = sums
            .into_iter()
            .map(|(value, mask)| AlphaEntry {
                value: value as u32,
                weight: mask.count_ones(),
                smallest: a[mask.trailing_zeros() as usize],
                summands: mask,
            })
            .collect();
        Ok(SpectrumSet { a: a.to_vec(), modulus, alpha })
    }

    pub fn elements(&self) -> &[u32] {
        &self.a
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// `a(k)` for `1 <= k <= r + 1`, where `a(r+1)` is the sentinel `N + a(1)`.
    pub fn a(&self, k: usize) -> u32 {
        assert!(k >= 1 && k <= self.rank() + 1, "a({k}) out of range");
        if k == self.rank() + 1 {
            self.sentinel()
        } else {
            self.a[k - 1]
        }
    }

    /// `alpha(2^r) = N + a(1)`.
    pub fn sentinel(&self) -> u32 {
        self.modulus + self.a[0]
    }

    /// The `2^r - 1` proper entries, sorted by value.
    pub fn alpha_table(&self) -> &[AlphaEntry] {
        &self.alpha
    }

    /// Number of alpha indices including the sentinel, i.e. `2^r`.
    pub fn alpha_count(&self) -> usize {
        self.alpha.len() + 1
    }

    /// `alpha(i)` for `1 <= i <= 2^r`.
    pub fn alpha(&self, i: usize) -> u32 {
        assert!(i >= 1 && i <= self.alpha_count(), "alpha({i}) out of range");
        if i == self.alpha_count() {
            self.sentinel()
        } else {
            self.alpha[i - 1].value
        }
    }

    pub fn entry(&self, value: u32) -> Option<&AlphaEntry> {
        self.alpha
            .binary_search_by_key(&value, |e| e.value)
            .ok()
            .map(|i| &self.alpha[i])
    }

    /// The 1-based alpha index of `value`, including the sentinel.
    pub fn alpha_index(&self, value: u32) -> Option<usize> {
        if value == self.sentinel() {
            return Some(self.alpha_count());
        }
        self.alpha.binary_search_by_key(&value, |e| e.value).ok().map(|i| i + 1)
    }

    /// Least positive residue of `m` modulo `N`, in `1..=N`.
    pub fn beta(&self, m: u32) -> u32 {
        assert!(m >= 1, "beta is defined for positive integers");
        (m - 1) % self.modulus + 1
    }

    /// Whether `m` belongs to `A_N`.
    pub fn in_a_n(&self, m: u32) -> bool {
        m >= 1 && self.a.contains(&self.beta(m))
    }

    /// Whether `m` belongs to `A'_N`.
    pub fn in_a_prime_n(&self, m: u32) -> bool {
        m >= 1 && self.entry(self.beta(m)).is_some()
    }

    /// Minimal difference `lambda_i - lambda_{i+1}` when the residue of the
    /// lower part is `beta`: `N (w(beta) - 1 + chi) + v(beta) - beta`.
    pub fn gap(&self, beta: u32, overlined: bool) -> Result<u32, SpectrumError> {
        let e = self.entry(beta).ok_or(SpectrumError::NotInAlphaTable(beta))?;
        let chi = overlined as u32;
        Ok(self.modulus * (e.weight - 1 + chi) + e.smallest - e.value)
    }

    /// `sum q^alpha` over `alpha < bound` with `w(alpha) = weight`.
    ///
    /// Weight zero gives the constant `1`; an empty range gives `0`.
    pub fn restricted_power_sum(&self, bound: u32, weight: u32) -> Series {
        let w = Window::polynomial();
        if weight == 0 {
            return Series::one(w);
        }
        let mut out = Series::zero(w);
        for e in self.alpha.iter().filter(|e| e.value < bound && e.weight == weight) {
            out.add_to_coefficient(Monomial::new(0, 0, e.value), &1.into());
        }
        out
    }

    /// The spectrum `{a(1), ..., a(r-1)}` with the same modulus.
    pub fn truncated(&self) -> Option<SpectrumSet> {
        if self.rank() < 2 {
            return None;
        }
        SpectrumSet::new(&self.a[..self.rank() - 1], self.modulus).ok()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "a": self.a,
            "N": self.modulus,
            "alpha": self.alpha,
            "sentinel": self.sentinel(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s124() -> SpectrumSet {
        SpectrumSet::new(&[1, 2, 4], 7).unwrap()
    }

    #[test]
    fn powers_of_two_give_consecutive_sums() {
        let s = s124();
        let values: Vec<u32> = s.alpha_table().iter().map(|e| e.value).collect();
        assert_eq!(values, (1..=7).collect::<Vec<_>>());
        assert_eq!(s.sentinel(), 8);
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            SpectrumSet::new(&[1, 2, 3], 6),
            Err(SpectrumError::CollidingSums { sum: 3, .. })
        ));
        assert!(matches!(
            SpectrumSet::new(&[1, 2], 2),
            Err(SpectrumError::ModulusTooSmall { modulus: 2, total: 3 })
        ));
        assert!(matches!(
            SpectrumSet::new(&[2, 3, 4], 20),
            Err(SpectrumError::PrefixSumViolation { k: 3, .. })
        ));
        assert_eq!(SpectrumSet::new(&[], 3), Err(SpectrumError::Empty));
        assert!(SpectrumSet::new(&[0], 3).is_err());
    }

    #[test]
    fn weights_and_smallest_summands() {
        let s = s124();
        let e7 = s.entry(7).unwrap();
        assert_eq!((e7.weight, e7.smallest), (3, 1));
        let e6 = s.entry(6).unwrap();
        assert_eq!((e6.weight, e6.smallest), (2, 2));
        assert_eq!(e6.summand_indices(), vec![2, 3]);

        let s12 = SpectrumSet::new(&[1, 2], 3).unwrap();
        let rows: Vec<(u32, u32, u32)> = s12
            .alpha_table()
            .iter()
            .map(|e| (e.value, e.weight, e.smallest))
            .collect();
        assert_eq!(rows, vec![(1, 1, 1), (2, 1, 2), (3, 2, 1)]);
        assert_eq!(s12.sentinel(), 4);
    }

    #[test]
    fn least_positive_residue() {
        let s = s124();
        assert_eq!(s.beta(10), 3);
        assert_eq!(s.beta(14), 7);
        assert_eq!(SpectrumSet::new(&[1, 2], 3).unwrap().beta(5), 2);
    }

    #[test]
    fn mod_seven_gap_table() {
        // 0/5/3/8 + 7 chi for residues {1,2,4} / 3 / {5,6} / 0.
        let s = s124();
        let expected = [(1, 0), (2, 0), (3, 5), (4, 0), (5, 3), (6, 3), (7, 8)];
        for (beta, g) in expected {
            assert_eq!(s.gap(beta, false).unwrap(), g, "beta = {beta}");
            assert_eq!(s.gap(beta, true).unwrap(), g + 7, "beta = {beta}");
        }
        assert_eq!(s.gap(7, true).unwrap(), 15);
        assert_eq!(s.gap(8, false), Err(SpectrumError::NotInAlphaTable(8)));
    }

    #[test]
    fn power_sum_conventions() {
        let s = s124();
        let q = |e| Monomial::new(0, 0, e);
        let p = s.restricted_power_sum(4, 1);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coefficient(q(1)).unwrap(), 1.into());
        assert_eq!(p.coefficient(q(2)).unwrap(), 1.into());
        assert_eq!(s.restricted_power_sum(4, 0), Series::one(Window::polynomial()));
        assert!(s.restricted_power_sum(4, 3).is_zero());
    }

    #[test]
    fn alpha_at_powers_of_two_is_the_generator() {
        for (a, n) in [(vec![1u32, 2, 4], 7u32), (vec![1, 3, 7], 11), (vec![2, 3], 5), (vec![1, 2, 4, 8], 15)] {
            let s = SpectrumSet::new(&a, n).unwrap();
            for k in 0..s.rank() {
                assert_eq!(s.alpha(1 << k), s.a(k + 1));
            }
        }
    }
}
