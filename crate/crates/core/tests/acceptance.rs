//! The eight acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use overpart::enumeration::{check_lemma1, count_d, count_e, count_p};
use overpart::identities::coefficients::check_t_identity_with;
use overpart::identities::{
    build_f_family, check_conj, check_descend, check_eq_f, check_intermediate, check_lemma2, check_pascal,
    check_qbinom_theorem, check_qdiff, check_r1_closed_form, check_rec_a, check_t_identity, check_theorem,
    extract_a, product_formula, to_f, CoeffFamilies, Intermediate,
};
use overpart::{Monomial, SpectrumSet, VerificationReport, Window};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn sp(a: &[u32], n: u32) -> SpectrumSet {
    SpectrumSet::new(a, n).expect("valid spectrum")
}

fn spectra() -> [SpectrumSet; 3] {
    [sp(&[1, 2], 3), sp(&[1, 2, 4], 7), sp(&[1, 2, 4, 8], 15)]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn all_ok(reports: &[VerificationReport]) -> Outcome {
    match reports.iter().find(|r| !r.is_ok()) {
        None => Ok(()),
        Some(r) => Err(serde_json::to_string(&r.to_json()).unwrap()),
    }
}

fn overpartitions_of_four() -> Outcome {
    let s = sp(&[1], 1);
    let direct: u64 = count_d(&s, 4, 4).total(4);
    let product = product_formula(&s, 4).q_total(4);
    let family = build_f_family(&s, Window::new(4, 4)).f_a1().eval_x_one().q_total(4);
    ensure(direct == 14 && product == 14.into() && family == 14.into(), || {
        format!("direct {direct}, product {product}, family {family}")
    })
}

fn theorem_instance(s: &SpectrumSet, q: u32) -> Outcome {
    let t = check_theorem(s, q);
    all_ok(std::slice::from_ref(&t.report))?;
    let k_max = q / s.a(1);
    let (d, e) = (count_d(s, k_max, q), count_e(s, k_max, q));
    for n in 0..=q {
        for k in 0..=k_max {
            ensure(d.get(k, n) == e.get(k, n), || format!("D != E at k={k}, n={n}"))?;
        }
    }
    Ok(())
}

fn schur_instance() -> Outcome {
    let s = sp(&[1, 2], 3);
    theorem_instance(&s, 40)?;
    let e = count_e(&s, 0, 40);
    ensure(e.get(0, 7) == 3, || format!("E(0,7) = {}", e.get(0, 7)))?;
    // the k = 0 slice: partitions into distinct parts = 1, 2 mod 3
    let distinct = product_formula(&s, 40);
    for n in 0..=40 {
        let c = distinct.coefficient(Monomial::q(n)).unwrap();
        ensure(c == BigInt::from(e.get(0, n)), || format!("k=0 slice differs at n={n}"))?;
    }
    Ok(())
}

fn mod_seven_instance() -> Outcome {
    let s = sp(&[1, 2, 4], 7);
    let expected = [(1, 0), (2, 0), (3, 5), (4, 0), (5, 3), (6, 3), (7, 8)];
    for (beta, g) in expected {
        for chi in [false, true] {
            let got = s.gap(beta, chi).map_err(|e| e.to_string())?;
            ensure(got == g + 7 * chi as u32, || format!("gap({beta}, {chi}) = {got}"))?;
        }
    }
    theorem_instance(&s, 40)
}

fn identity_suites() -> Outcome {
    for s in &spectra() {
        all_ok(&check_pascal(1, 12))?;
        all_ok(&check_pascal(s.modulus(), 12))?;
        all_ok(&check_qbinom_theorem(s, 8))?;
        all_ok(&check_t_identity(s))?;
    }
    Ok(())
}

fn series_equations() -> Outcome {
    let w = Window::new(30, 30);
    for s in &spectra() {
        let m = w.x_max.min(w.q_max / s.a(1));
        let table = count_p(s, m, m, w.q_max);
        all_ok(&check_lemma1(&table, table.range).map_err(|e| e.to_string())?)?;
        let fam = build_f_family(s, w);
        all_ok(&check_lemma2(&fam))?;
        for which in Intermediate::ALL {
            all_ok(&check_intermediate(&fam, which))?;
        }
        for k in 1..=s.rank() + 1 {
            all_ok(&[check_conj(&fam, k)])?;
        }
        all_ok(&[check_qdiff(&fam)])?;
        let cf = CoeffFamilies::new(s);
        let big_f = to_f(s, fam.f_a1());
        all_ok(&[check_eq_f(s, &big_f, &cf)])?;
        all_ok(&check_rec_a(&extract_a(&big_f), &cf))?;
    }
    Ok(())
}

fn descent() -> Outcome {
    let w = Window::new(30, 30);
    let reports = check_descend(&sp(&[1, 2, 4], 7), w);
    ensure(reports.len() == 4, || format!("{} descent reports", reports.len()))?;
    all_ok(&reports)?;
    for (a1, n) in [(1, 7), (1, 3), (1, 1)] {
        let r = check_r1_closed_form(a1, n, w);
        ensure(r.len() == 2, || "closed form skipped the product".into())?;
        all_ok(&r)?;
    }
    Ok(())
}

/// Adds one to a coefficient of a random checked object and expects some
/// check to fail with a counterexample.
fn fault_injection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let w = Window::new(14, 14);
    let specs = spectra();
    for round in 0..20 {
        let s = &specs[rng.gen_range(0..specs.len())];
        let r = s.rank();
        let (what, reports) = match round % 4 {
            0 => {
                let mut fam = build_f_family(s, w);
                let i = rng.gen_range(1..=fam.len());
                let x = rng.gen_range(0..=6);
                let mono = Monomial::new(rng.gen_range(0..=x), x, rng.gen_range(0..=w.q_max));
                fam.perturb(i, mono, 1);
                (format!("f_{i} at {mono}"), check_lemma2(&fam))
            }
            1 => {
                let mut t = count_p(s, 8, 8, w.q_max);
                let i = rng.gen_range(1..=s.alpha_count());
                let (k, m, n) = (rng.gen_range(0..=8), rng.gen_range(0..=8), rng.gen_range(0..=w.q_max));
                t.perturb(i, k, m, n, 1);
                (format!("p_{i}({k},{m},{n})"), check_lemma1(&t, t.range).unwrap())
            }
            2 => {
                let mut cf = CoeffFamilies::new(s);
                let mono = Monomial::new(rng.gen_range(0..=3), 0, rng.gen_range(0..=30));
                let (name, slot) = match rng.gen_range(0..5) {
                    0 => {
                        let j = rng.gen_range(1..=r);
                        let k = rng.gen_range(0..j);
                        ("c", cf.c.get_mut(&(k, j)).unwrap())
                    }
                    1 => ("b", cf.b.get_mut(&(rng.gen_range(1..=r), rng.gen_range(1..=r))).unwrap()),
                    2 => ("e", cf.e.get_mut(&(rng.gen_range(1..=r), rng.gen_range(0..=r))).unwrap()),
                    3 => {
                        let m = rng.gen_range(1..=r);
                        ("f", cf.f.get_mut(&(m, rng.gen_range(0..m))).unwrap())
                    }
                    _ => ("lead", cf.lead.get_mut(&rng.gen_range(1..=r)).unwrap()),
                };
                slot.add_to_coefficient(mono, &1.into());
                (format!("{name} at {mono}"), check_t_identity_with(&cf))
            }
            _ => {
                let mut seq = extract_a(&to_f(s, build_f_family(s, w).f_a1()));
                let n = rng.gen_range(0..seq.len());
                let mono = Monomial::new(rng.gen_range(0..=3), 0, rng.gen_range(0..=w.q_max));
                seq.entries[n].add_to_coefficient(mono, &1.into());
                (format!("A_{n} at {mono}"), check_rec_a(&seq, &CoeffFamilies::new(s)))
            }
        };
        let located = reports.iter().any(|r| r.is_fail() && r.first_counterexample.is_some());
        ensure(located, || format!("round {round}: fault in {what} went unnoticed"))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    // (label, check, time limit)
    let criteria: [Criterion; 8] = [
        ("1 overpartitions of 4", overpartitions_of_four, Duration::from_secs(1)),
        ("2 theorem {1,2} mod 3, n <= 40", schur_instance, Duration::from_secs(10)),
        ("3 theorem {1,2,4} mod 7, n <= 40", mod_seven_instance, Duration::from_secs(30)),
        ("4 theorem {1,2,4,8} mod 15, n <= 30", || theorem_instance(&sp(&[1, 2, 4, 8], 15), 30), Duration::from_secs(60)),
        ("5 polynomial identity suites", identity_suites, Duration::from_secs(5)),
        ("6 series equations at Q = X = 30", series_equations, Duration::from_secs(120)),
        ("7 descent and rank-one closed form", descent, Duration::from_secs(60)),
        ("8 fault injection, 20 rounds", fault_injection, Duration::from_secs(120)),
    ];
    let mut failed = 0;
    for (label, check, limit) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        let outcome = outcome.and_then(|()| {
            ensure(took <= limit, || format!("took {took:.2?}, limit {limit:?}"))
        });
        match outcome {
            Ok(()) => println!("PASS  {label}  ({took:.2?})"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {label}  ({took:.2?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
