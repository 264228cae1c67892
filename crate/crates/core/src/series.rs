//! Sparse truncated formal power series in `d`, `x`, `q` with exact integer
//! coefficients.
//!
//! A [`Series`] stores the coefficients of every monomial `d^a x^m q^n` with
//! `m <= x_max` and `n <= q_max`; the exponent of `d` is not truncated. The
//! stored window is a down-set of the exponent lattice and every operation
//! here is monotone in the exponents, so a result computed from exact inputs
//! is exact on its whole window.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("window mismatch: {0:?} vs {1:?}")]
    WindowMismatch(Window, Window),
    #[error("series to invert has a term free of x and q: {0}")]
    NonzeroConstantTerm(Monomial),
    #[error("product factor {0} does not tend to 1 inside the window")]
    DivergentAtWindow(String),
    #[error("inexact polynomial division (internal error)")]
    InexactDivision,
    #[error("monomial {0} lies outside the window {1:?}")]
    OutsideWindow(Monomial, Window),
}

/// `d^d x^x q^q`. Ordered by `(q, x, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub d: u32,
    pub x: u32,
    pub q: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { d: 0, x: 0, q: 0 };

    pub const fn new(d: u32, x: u32, q: u32) -> Self {
        Monomial { d, x, q }
    }

    pub const fn q(q: u32) -> Self {
        Monomial { d: 0, x: 0, q }
    }

    pub fn degree(&self) -> u64 {
        self.d as u64 + self.x as u64 + self.q as u64
    }

    fn checked_mul(self, other: Monomial) -> Option<Monomial> {
        Some(Monomial {
            d: self.d.checked_add(other.d)?,
            x: self.x.checked_add(other.x)?,
            q: self.q.checked_add(other.q)?,
        })
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.q, self.x, self.d).cmp(&(other.q, other.x, other.d))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (name, e) in [("d", self.d), ("x", self.x), ("q", self.q)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                _ => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Truncation orders: monomials with `x <= x_max` and `q <= q_max` are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub q_max: u32,
    pub x_max: u32,
}

impl Window {
    pub const fn new(q_max: u32, x_max: u32) -> Self {
        Window { q_max, x_max }
    }

    /// No truncation; used for exact polynomials.
    pub const fn polynomial() -> Self {
        Window { q_max: u32::MAX, x_max: u32::MAX }
    }

    pub fn contains(&self, m: Monomial) -> bool {
        m.q <= self.q_max && m.x <= self.x_max
    }

    pub fn meet(&self, other: Window) -> Window {
        Window {
            q_max: self.q_max.min(other.q_max),
            x_max: self.x_max.min(other.x_max),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Monomial, BigInt>,
    window: Window,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    d: u32,
    x: u32,
    q: u32,
    coeff: String,
}

impl Series {
    pub fn zero(window: Window) -> Self {
        Series { terms: BTreeMap::new(), window }
    }

    pub fn one(window: Window) -> Self {
        Self::term(window, Monomial::ONE, 1)
    }

    /// `coeff * mono`, or zero if `mono` lies outside `window`.
    pub fn term(window: Window, mono: Monomial, coeff: impl Into<BigInt>) -> Self {
        let mut s = Series::zero(window);
        s.add_to_coefficient(mono, &coeff.into());
        s
    }

    pub fn from_terms<I, C>(window: Window, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut s = Series::zero(window);
        for (m, c) in terms {
            s.add_to_coefficient(m, &c.into());
        }
        s
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in `(q, x, d)` order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, mono: Monomial) -> Result<BigInt, SeriesError> {
        if !self.window.contains(mono) {
            return Err(SeriesError::OutsideWindow(mono, self.window));
        }
        Ok(self.terms.get(&mono).cloned().unwrap_or_default())
    }

    /// Adds `c` to the coefficient of `mono`; monomials outside the window
    /// are dropped.
    pub fn add_to_coefficient(&mut self, mono: Monomial, c: &BigInt) {
        if c.is_zero() || !self.window.contains(mono) {
            return;
        }
        let slot = self.terms.entry(mono).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&mono);
        }
    }

    /// Restricts to the intersection of the current window and `window`.
    pub fn truncated(&self, window: Window) -> Series {
        let w = self.window.meet(window);
        Series {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| w.contains(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            window: w,
        }
    }

    fn same_window(&self, other: &Series) -> Result<(), SeriesError> {
        if self.window == other.window {
            Ok(())
        } else {
            Err(SeriesError::WindowMismatch(self.window, other.window))
        }
    }

    pub fn checked_add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_window(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_to_coefficient(*m, c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_window(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_to_coefficient(*m, &-c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.same_window(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &small.terms {
            for (m2, c2) in &large.terms {
                let Some(m) = m1.checked_mul(*m2) else { continue };
                if self.window.contains(m) {
                    *acc.entry(m).or_default() += c1 * c2;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(Series { terms: acc, window: self.window })
    }

    pub fn scale(&self, c: &BigInt) -> Series {
        if c.is_zero() {
            return Series::zero(self.window);
        }
        Series {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
            window: self.window,
        }
    }

    /// Multiplication by the monomial `mono`.
    pub fn shift(&self, mono: Monomial) -> Series {
        let mut out = Series::zero(self.window);
        for (m, c) in &self.terms {
            if let Some(t) = m.checked_mul(mono) {
                if self.window.contains(t) {
                    out.terms.insert(t, c.clone());
                }
            }
        }
        out
    }

    /// The substitution `x -> x q^t`.
    pub fn subst_x(&self, t: u32) -> Series {
        let mut out = Series::zero(self.window);
        for (m, c) in &self.terms {
            let q = m.q as u64 + t as u64 * m.x as u64;
            if q <= self.window.q_max as u64 {
                out.terms.insert(Monomial::new(m.d, m.x, q as u32), c.clone());
            }
        }
        out
    }

    /// `1 / (1 - u)` as the Neumann series `sum_j u^j`.
    ///
    /// Every monomial of `u` must carry a positive power of `x` or `q`,
    /// otherwise the sum does not terminate inside the window.
    pub fn invert_one_minus(u: &Series) -> Result<Series, SeriesError> {
        if let Some(m) = u.terms.keys().find(|m| m.x == 0 && m.q == 0) {
            return Err(SeriesError::NonzeroConstantTerm(*m));
        }
        let mut result = Series::one(u.window);
        let mut power = Series::one(u.window);
        loop {
            power = power.checked_mul(u)?;
            if power.is_zero() {
                return Ok(result);
            }
            result = result.checked_add(&power)?;
        }
    }

    /// `self / (1 - c * mono)` for a monomial carrying `x` or `q`.
    pub fn div_one_minus_term(&self, c: &BigInt, mono: Monomial) -> Result<Series, SeriesError> {
        if mono.x == 0 && mono.q == 0 {
            return Err(SeriesError::NonzeroConstantTerm(mono));
        }
        let mut result = self.clone();
        let mut current = self.clone();
        loop {
            current = current.shift(mono).scale(c);
            if current.is_zero() {
                return Ok(result);
            }
            for (m, v) in &current.terms {
                result.add_to_coefficient(*m, v);
            }
        }
    }

    /// `self * (1 + c * mono)`.
    pub fn mul_one_plus_term(&self, c: &BigInt, mono: Monomial) -> Series {
        let mut out = self.clone();
        for (m, v) in self.shift(mono).terms {
            out.add_to_coefficient(m, &(v * c));
        }
        out
    }

    /// `prod_{n >= 0} (1 + sign [d] [x] q^(step n + offset))`, or its
    /// reciprocal when `numerator` is false.
    #[allow(clippy::too_many_arguments)]
    pub fn pochhammer_product(
        window: Window,
        sign: i32,
        d_attached: bool,
        x_attached: bool,
        offset: u32,
        step: u32,
        numerator: bool,
    ) -> Result<Series, SeriesError> {
        assert!(sign == 1 || sign == -1, "sign must be +1 or -1");
        assert!(step >= 1, "step must be positive");
        if offset == 0 && !x_attached {
            return Err(SeriesError::DivergentAtWindow(format!(
                "1 {} {}q^0",
                if sign > 0 { "+" } else { "-" },
                if d_attached { "d" } else { "" }
            )));
        }
        let c = BigInt::from(sign);
        let mut out = Series::one(window);
        if x_attached && window.x_max == 0 {
            return Ok(out);
        }
        let mut e = offset as u64;
        while e <= window.q_max as u64 {
            let mono = Monomial::new(d_attached as u32, x_attached as u32, e as u32);
            out = if numerator {
                out.mul_one_plus_term(&c, mono)
            } else {
                out.div_one_minus_term(&-&c, mono)?
            };
            e += step as u64;
        }
        Ok(out)
    }

    /// Gaussian binomial `[m, r]` in the base `q^step`, as an exact polynomial.
    ///
    /// Zero unless `0 <= r <= m`.
    pub fn qbinom(m: i64, r: i64, step: u32) -> Result<Series, SeriesError> {
        let w = Window::polynomial();
        if r < 0 || r > m {
            return Ok(Series::zero(w));
        }
        let r = r.min(m - r) as u64;
        let m = m as u64;
        // dense coefficients in powers of q^step
        let mut num: Vec<BigInt> = vec![BigInt::one()];
        for i in 0..r {
            num = mul_one_minus_power(&num, (m - i) as usize);
        }
        for i in 1..=r {
            num = div_one_minus_power(&num, i as usize)?;
        }
        let step = step as u64;
        Ok(Series::from_terms(
            w,
            num.into_iter()
                .enumerate()
                .map(|(e, c)| (Monomial::q((e as u64 * step) as u32), c)),
        ))
    }

    /// Sum over the exponent of `x`: the specialisation `x = 1`.
    ///
    /// Only meaningful when the represented object has finitely many
    /// `x`-powers at each `q`-order inside the window (the caller's
    /// responsibility; series with a pole at `x = 1` give garbage).
    pub fn eval_x_one(&self) -> Series {
        let mut out = Series::zero(Window::new(self.window.q_max, 0));
        for (m, c) in &self.terms {
            out.add_to_coefficient(Monomial::new(m.d, 0, m.q), c);
        }
        out
    }

    /// Specialises `d` to an integer value.
    pub fn eval_d(&self, value: i64) -> Series {
        let v = BigInt::from(value);
        let mut out = Series::zero(self.window);
        for (m, c) in &self.terms {
            let f = num_traits::pow::pow(v.clone(), m.d as usize);
            out.add_to_coefficient(Monomial::new(0, m.x, m.q), &(c * f));
        }
        out
    }

    /// The coefficient of `x^n` as a series in `d, q`.
    pub fn x_coefficient(&self, n: u32) -> Series {
        let mut out = Series::zero(Window::new(self.window.q_max, 0));
        for (m, c) in self.terms.iter().filter(|(m, _)| m.x == n) {
            out.terms.insert(Monomial::new(m.d, 0, m.q), c.clone());
        }
        out
    }

    /// `sum_n coeffs[n] x^n`.
    pub fn from_x_coefficients(window: Window, coeffs: &[Series]) -> Series {
        let mut out = Series::zero(window);
        for (n, s) in coeffs.iter().enumerate() {
            for (m, c) in &s.terms {
                out.add_to_coefficient(Monomial::new(m.d, m.x + n as u32, m.q), c);
            }
        }
        out
    }

    /// Sum of all coefficients at `q^n`, over every `d` and `x`.
    pub fn q_total(&self, n: u32) -> BigInt {
        self.terms.iter().filter(|(m, _)| m.q == n).map(|(_, c)| c).sum()
    }

    pub fn min_coefficient(&self) -> Option<&BigInt> {
        self.terms.values().min()
    }

    /// Terms as `[{d, x, q, coeff}]`, sorted by `(q, x, d)`, coefficients
    /// as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson { d: m.d, x: m.x, q: m.q, coeff: c.to_string() })
            .collect();
        serde_json::to_value(terms).expect("series terms serialize")
    }

    pub fn from_json(window: Window, value: &serde_json::Value) -> Result<Series, String> {
        let terms: Vec<TermJson> = serde_json::from_value(value.clone()).map_err(|e| e.to_string())?;
        let mut s = Series::zero(window);
        for t in terms {
            let c: BigInt = t.coeff.parse().map_err(|_| format!("bad coefficient {:?}", t.coeff))?;
            s.add_to_coefficient(Monomial::new(t.d, t.x, t.q), &c);
        }
        Ok(s)
    }

    /// First monomial (in `(q, x, d)` order) inside `region` where the two
    /// series differ.
    pub fn first_difference(&self, other: &Series, region: Window) -> Option<(Monomial, BigInt, BigInt)> {
        let mut keys: Vec<Monomial> = self
            .terms
            .keys()
            .chain(other.terms.keys())
            .filter(|m| region.contains(**m))
            .copied()
            .collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|m| {
            let a = self.terms.get(&m).cloned().unwrap_or_default();
            let b = other.terms.get(&m).cloned().unwrap_or_default();
            (a != b).then_some((m, a, b))
        })
    }
}

/// Coefficient vector times `(1 - t^e)`.
fn mul_one_minus_power(p: &[BigInt], e: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + e];
    for (i, c) in p.iter().enumerate() {
        out[i] += c;
        out[i + e] -= c;
    }
    while out.len() > 1 && out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Exact quotient of a coefficient vector by `(1 - t^e)`.
fn div_one_minus_power(p: &[BigInt], e: usize) -> Result<Vec<BigInt>, SeriesError> {
    if p.len() <= e {
        return if p.iter().all(|c| c.is_zero()) { Ok(vec![BigInt::zero()]) } else { Err(SeriesError::InexactDivision) };
    }
    let qlen = p.len() - e;
    let mut quot = vec![BigInt::zero(); qlen];
    for i in 0..qlen {
        quot[i] = if i >= e { &p[i] + &quot[i - e] } else { p[i].clone() };
    }
    if mul_one_minus_power(&quot, e) != p {
        return Err(SeriesError::InexactDivision);
    }
    Ok(quot)
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $method(self, rhs: &Series) -> Series {
                (&self).$method(rhs)
            }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $method(self, rhs: Series) -> Series {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&BigInt::from(-1))
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

/// Graded lexicographic rendering (`d > x > q`): total degree first, then
/// lexicographic on `(d, x, q)` with larger exponents of `d` first.
impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| (m.degree(), std::cmp::Reverse((m.d, m.x, m.q))));
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            match (*m == Monomial::ONE, abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{m}")?,
                (false, false) => write!(f, "{abs}*{m}")?,
            }
        }
        Ok(())
    }
}
