//! Exact computer algebra for an overpartition analogue of Andrews'
//! generalisation of Schur's partition theorem.
//!
//! * [`spectrum`]: spectrum sets `A`, their subset sums `A'`, residues and
//!   difference conditions.
//! * [`series`]: sparse truncated power series in `d, x, q` over big integers.
//! * [`enumeration`]: brute-force counts `D`, `E` and the refined `p`-table.
//! * [`identities`]: the generating functions `f_alpha(i)`, every
//!   q-difference equation and recurrence between them, the descent from
//!   rank `r` to rank `r - 1`, and the product formula.
//! * [`report`]: the structured result of each check.

pub mod enumeration;
pub mod identities;
pub mod report;
pub mod series;
pub mod spectrum;

pub use enumeration::{count_d, count_e, count_p, list_witnesses, CountTable, Overpartition, PTable, Side};
pub use report::{Status, VerificationReport};
pub use series::{Monomial, Series, SeriesError, Window};
pub use spectrum::{AlphaEntry, SpectrumError, SpectrumSet};
