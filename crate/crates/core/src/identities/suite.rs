//! Named checks over one spectrum, sharing the expensive intermediate objects.

use std::cell::OnceCell;
use std::fmt;

use crate::enumeration::{check_lemma1, count_p, PTable};
use crate::report::VerificationReport;
use crate::series::{Series, Window};
use crate::spectrum::SpectrumSet;

use super::coefficients::{check_pascal, check_qbinom_theorem, check_t_identity, CoeffFamilies};
use super::equations::{check_conj, check_intermediate, check_lemma2, check_qdiff, Intermediate};
use super::theorem::check_theorem;
use super::transform::{check_descend, check_eq_f, check_r1_closed_form, check_rec_a, extract_a, to_f};
use super::{family_from_table, family_x_max, FFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckKind {
    Lemma1,
    Lemma2,
    Intermediate,
    Conj,
    Qdiff,
    Pascal,
    QbinomTheorem,
    EqF,
    RecA,
    TIdentity,
    Descend,
    R1ClosedForm,
    Theorem,
}

impl CheckKind {
    pub const ALL: [CheckKind; 13] = [
        CheckKind::Lemma1,
        CheckKind::Lemma2,
        CheckKind::Intermediate,
        CheckKind::Conj,
        CheckKind::Qdiff,
        CheckKind::Pascal,
        CheckKind::QbinomTheorem,
        CheckKind::EqF,
        CheckKind::RecA,
        CheckKind::TIdentity,
        CheckKind::Descend,
        CheckKind::R1ClosedForm,
        CheckKind::Theorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Lemma1 => "lemma1",
            CheckKind::Lemma2 => "lemma2",
            CheckKind::Intermediate => "intermediate",
            CheckKind::Conj => "conj",
            CheckKind::Qdiff => "qdiff",
            CheckKind::Pascal => "pascal",
            CheckKind::QbinomTheorem => "qbinom-theorem",
            CheckKind::EqF => "eqF",
            CheckKind::RecA => "recA",
            CheckKind::TIdentity => "T-identity",
            CheckKind::Descend => "descend",
            CheckKind::R1ClosedForm => "r1-closed-form",
            CheckKind::Theorem => "theorem",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Window of the series chain.
    pub window: Window,
    /// `Q` of the theorem table.
    pub theorem_q: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { window: Window::new(30, 30), theorem_q: 40 }
    }
}

/// Runs checks against one spectrum; the p-table, the f-family, `F` and the
/// coefficient families are built on first use.
pub struct Suite {
    pub spectrum: SpectrumSet,
    pub config: SuiteConfig,
    table: OnceCell<PTable>,
    family: OnceCell<FFamily>,
    big_f: OnceCell<Series>,
    coeffs: OnceCell<CoeffFamilies>,
}

impl Suite {
    pub fn new(spectrum: SpectrumSet, config: SuiteConfig) -> Self {
        Suite {
            spectrum,
            config,
            table: OnceCell::new(),
            family: OnceCell::new(),
            big_f: OnceCell::new(),
            coeffs: OnceCell::new(),
        }
    }

    pub fn p_table(&self) -> &PTable {
        self.table.get_or_init(|| {
            let m = family_x_max(&self.spectrum, self.config.window);
            count_p(&self.spectrum, m, m, self.config.window.q_max)
        })
    }

    pub fn family(&self) -> &FFamily {
        self.family.get_or_init(|| family_from_table(self.p_table(), self.config.window))
    }

    pub fn big_f(&self) -> &Series {
        self.big_f.get_or_init(|| to_f(&self.spectrum, self.family().f_a1()))
    }

    pub fn coeffs(&self) -> &CoeffFamilies {
        self.coeffs.get_or_init(|| CoeffFamilies::new(&self.spectrum))
    }

    pub fn run(&self, kind: CheckKind) -> Vec<VerificationReport> {
        let s = &self.spectrum;
        match kind {
            CheckKind::Lemma1 => {
                let t = self.p_table();
                check_lemma1(t, t.range).expect("range is the table's own")
            }
            CheckKind::Lemma2 => check_lemma2(self.family()),
            CheckKind::Intermediate => {
                let out: Vec<_> = Intermediate::ALL
                    .into_iter()
                    .flat_map(|which| check_intermediate(self.family(), which))
                    .collect();
                if out.is_empty() {
                    vec![VerificationReport::new("intermediate", self.config.window).param("vacuous", true)]
                } else {
                    out
                }
            }
            CheckKind::Conj => (1..=s.rank() + 1).map(|k| check_conj(self.family(), k)).collect(),
            CheckKind::Qdiff => vec![check_qdiff(self.family())],
            CheckKind::Pascal => {
                let mut out = check_pascal(1, 12);
                if s.modulus() != 1 {
                    out.extend(check_pascal(s.modulus(), 12));
                }
                out
            }
            CheckKind::QbinomTheorem => check_qbinom_theorem(s, 8),
            CheckKind::EqF => vec![check_eq_f(s, self.big_f(), self.coeffs())],
            CheckKind::RecA => check_rec_a(&extract_a(self.big_f()), self.coeffs()),
            CheckKind::TIdentity => check_t_identity(s),
            CheckKind::Descend => check_descend(s, self.config.window),
            CheckKind::R1ClosedForm => check_r1_closed_form(s.a(1), s.modulus(), self.config.window),
            CheckKind::Theorem => vec![check_theorem(s, self.config.theorem_q).report],
        }
    }

    pub fn run_all(&self, kinds: &[CheckKind]) -> Vec<VerificationReport> {
        kinds.iter().flat_map(|&k| self.run(k)).collect()
    }
}
