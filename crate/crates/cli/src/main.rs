use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use overpart::identities::{check_theorem, product_formula, solve_r1, CheckKind, Suite, SuiteConfig};
use overpart::report::overall;
use overpart::{count_d, count_e, Series, Side, SpectrumSet, Status, VerificationReport, Window};

#[derive(Parser)]
#[command(name = "overpart", version, about = "Counts, expansions and identity checks for gap-condition overpartitions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subset sums of the spectrum with weights, smallest summands and gaps.
    Spectrum(Common),
    /// The count table D(k, n) or E(k, n).
    Count {
        #[arg(long, value_enum)]
        side: SideArg,
        /// Only this number of non-overlined parts.
        #[arg(long)]
        k: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
    /// Expands a generating function to the window.
    Expand {
        #[arg(value_enum)]
        target: Target,
        #[command(flatten)]
        common: Common,
    },
    /// Runs identity checks and reports the outcome.
    Verify {
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone)]
struct Common {
    /// Spectrum elements, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    a: Vec<u32>,
    /// Modulus.
    #[arg(long = "N")]
    n: u32,
    #[arg(long, default_value_t = 40)]
    qmax: u32,
    /// Defaults to `qmax`.
    #[arg(long)]
    xmax: Option<u32>,
    /// Defaults to `qmax`.
    #[arg(long)]
    kmax: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "D", alias = "d")]
    D,
    #[value(name = "E", alias = "e")]
    E,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Product,
    F,
    R1,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

struct Failure(String);

impl Common {
    fn spectrum(&self) -> Result<SpectrumSet, Failure> {
        SpectrumSet::new(&self.a, self.n).map_err(|e| Failure(format!("invalid spectrum: {e:?}: {e}")))
    }

    fn x_max(&self) -> u32 {
        self.xmax.unwrap_or(self.qmax)
    }

    fn k_max(&self) -> u32 {
        self.kmax.unwrap_or(self.qmax)
    }

    fn config_json(&self) -> Value {
        json!({
            "a": self.a,
            "N": self.n,
            "q_max": self.qmax,
            "x_max": self.x_max(),
            "k_max": self.k_max(),
            "format": self.format.name(),
        })
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_spectrum(c: &Common) -> Result<String, Failure> {
    let s = c.spectrum()?;
    let rows: Vec<(u32, u32, u32, u32, u32)> = s
        .alpha_table()
        .iter()
        .map(|e| {
            let g0 = s.gap(e.value, false).expect("alpha value");
            let g1 = s.gap(e.value, true).expect("alpha value");
            (e.value, e.weight, e.smallest, g0, g1)
        })
        .collect();
    Ok(match c.format {
        Format::Json => {
            let mut v = s.to_json();
            v["gaps"] = rows
                .iter()
                .map(|&(b, _, _, g0, g1)| json!({"beta": b, "plain": g0, "overlined": g1}))
                .collect();
            pretty(&v)
        }
        Format::Csv => {
            let mut out = String::from("alpha,weight,smallest,gap,gap_overlined\n");
            for (a, w, v, g0, g1) in rows {
                writeln!(out, "{a},{w},{v},{g0},{g1}").unwrap();
            }
            out
        }
        Format::Text => {
            let mut out = format!("A = {:?}, N = {}\n", s.elements(), s.modulus());
            out.push_str("alpha  w  v  gap  gap'\n");
            for (a, w, v, g0, g1) in rows {
                writeln!(out, "{a:>5} {w:>2} {v:>2} {g0:>4} {g1:>5}").unwrap();
            }
            writeln!(out, "sentinel {}", s.sentinel()).unwrap();
            out
        }
    })
}

fn cmd_count(c: &Common, side: SideArg, only_k: Option<u32>) -> Result<String, Failure> {
    let s = c.spectrum()?;
    let k_max = only_k.unwrap_or(c.k_max());
    let table = match side {
        SideArg::D => count_d(&s, k_max, c.qmax),
        SideArg::E => count_e(&s, k_max, c.qmax),
    };
    let ks: Vec<u32> = match only_k {
        Some(k) => vec![k],
        None => (0..=k_max).collect(),
    };
    Ok(match c.format {
        Format::Json => {
            let rows: Vec<Value> = (0..=c.qmax)
                .flat_map(|n| ks.iter().map(move |&k| (n, k)))
                .map(|(n, k)| json!({"n": n, "k": k, "count": table.get(k, n).to_string()}))
                .collect();
            pretty(&json!({
                "side": table.side.to_string(),
                "a": s.elements(),
                "N": s.modulus(),
                "n_max": c.qmax,
                "k": ks,
                "counts": rows,
            }))
        }
        Format::Csv => {
            let mut out = String::from("n,k,count\n");
            for n in 0..=c.qmax {
                for &k in &ks {
                    writeln!(out, "{n},{k},{}", table.get(k, n)).unwrap();
                }
            }
            out
        }
        Format::Text => {
            let side = match side {
                SideArg::D => Side::D,
                SideArg::E => Side::E,
            };
            let mut out = format!("{side}(k, n) for A = {:?}, N = {}\n", s.elements(), s.modulus());
            write!(out, "{:>4}", "n").unwrap();
            for k in &ks {
                write!(out, " {:>8}", format!("k={k}")).unwrap();
            }
            writeln!(out, " {:>10}", "total").unwrap();
            for n in 0..=c.qmax {
                write!(out, "{n:>4}").unwrap();
                let mut total = 0u64;
                for &k in &ks {
                    total += table.get(k, n);
                    write!(out, " {:>8}", table.get(k, n)).unwrap();
                }
                writeln!(out, " {total:>10}").unwrap();
            }
            out
        }
    })
}

fn render_series(series: &Series, label: &str, c: &Common) -> String {
    match c.format {
        Format::Json => pretty(&json!({
            "target": label,
            "window": {"q_max": series.window().q_max, "x_max": series.window().x_max},
            "terms": series.to_json(),
        })),
        Format::Csv => {
            let mut out = String::from("d,x,q,coeff\n");
            for (m, v) in series.iter() {
                writeln!(out, "{},{},{},{v}", m.d, m.x, m.q).unwrap();
            }
            out
        }
        Format::Text => format!("{series}\n"),
    }
}

fn cmd_expand(c: &Common, target: Target) -> Result<String, Failure> {
    let s = c.spectrum()?;
    let window = Window::new(c.qmax, c.x_max());
    let (series, label) = match target {
        Target::Product => (product_formula(&s, c.qmax), "product"),
        Target::F => (overpart::identities::build_f_family(&s, window).f_a1().clone(), "f"),
        Target::R1 => {
            if s.rank() != 1 {
                return Err(Failure(format!("r1 needs a single element, got {:?}", s.elements())));
            }
            (solve_r1(s.a(1), s.modulus(), window), "r1")
        }
    };
    Ok(render_series(&series, label, c))
}

fn parse_checks(spec: &str) -> Result<Vec<CheckKind>, Failure> {
    let mut kinds = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|n| !n.is_empty()) {
        if name == "all" {
            kinds.extend(CheckKind::ALL);
            continue;
        }
        let kind = CheckKind::from_name(name).ok_or_else(|| {
            let known: Vec<_> = CheckKind::ALL.iter().map(|k| k.name()).collect();
            Failure(format!("unknown check `{name}`; known: {}, all", known.join(", ")))
        })?;
        kinds.push(kind);
    }
    if kinds.is_empty() {
        return Err(Failure("no checks selected".into()));
    }
    kinds.sort();
    kinds.dedup();
    Ok(kinds)
}

fn describe(r: &VerificationReport) -> String {
    let status = match r.status {
        Status::Ok => "ok",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
    };
    let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let mut line = format!("{status:<8} {:<15} {}", r.name, params.join(" "));
    if let Some(ce) = &r.first_counterexample {
        let m = ce.monomial;
        write!(line, "  at d^{} x^{} q^{}: {} != {}", m.d, m.x, m.q, ce.lhs, ce.rhs).unwrap();
    }
    line.trim_end().to_string()
}

fn cmd_verify(c: &Common, checks: &str) -> Result<(String, Status), Failure> {
    let s = c.spectrum()?;
    let kinds = parse_checks(checks)?;
    let config = SuiteConfig { window: Window::new(c.qmax, c.x_max()), theorem_q: c.qmax };
    let suite = Suite::new(s.clone(), config);
    let mut theorem = None;
    let mut reports = Vec::new();
    for &kind in &kinds {
        if kind == CheckKind::Theorem {
            let t = check_theorem(&s, c.qmax);
            reports.push(t.report.clone());
            theorem = Some(t);
        } else {
            reports.extend(suite.run(kind));
        }
    }
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let status = overall(&reports);

    let out = match c.format {
        Format::Json => {
            let mut config = c.config_json();
            config["checks"] = kinds.iter().map(|k| k.name()).collect();
            let mut v = json!({
                "tool_version": env!("CARGO_PKG_VERSION"),
                "config": config,
                "checks": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
                "status": serde_json::to_value(status).unwrap(),
            });
            if let Some(t) = &theorem {
                v["theorem_table"] = t.rows_json();
            }
            pretty(&v)
        }
        Format::Csv => match &theorem {
            Some(t) => t.to_csv(),
            None => {
                let mut out = String::from("name,status,params\n");
                for r in &reports {
                    let params = serde_json::to_string(&r.params).unwrap().replace('"', "'");
                    writeln!(out, "{},{},\"{params}\"", r.name, serde_json::to_value(r.status).unwrap().as_str().unwrap())
                        .unwrap();
                }
                out
            }
        },
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{}", describe(r)).unwrap();
            }
            if let Some(t) = &theorem {
                out.push_str("\n   n    k          D          E  match\n");
                for row in &t.rows {
                    writeln!(out, "{:>4} {:>4} {:>10} {:>10}  {}", row.n, row.k, row.d, row.e, row.agrees()).unwrap();
                }
            }
            let total = reports.len();
            let skipped = reports.iter().filter(|r| r.status == Status::Skipped).count();
            let failed = reports.iter().filter(|r| r.is_fail()).count();
            writeln!(
                out,
                "\n{}: {total} checks, {failed} failed, {skipped} skipped",
                serde_json::to_value(status).unwrap().as_str().unwrap()
            )
            .unwrap();
            out
        }
    };
    Ok((out, status))
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Status, Failure> {
    let (text, status, out) = match &cli.command {
        Command::Spectrum(c) => (cmd_spectrum(c)?, Status::Ok, &c.out),
        Command::Count { side, k, common } => (cmd_count(common, *side, *k)?, Status::Ok, &common.out),
        Command::Expand { target, common } => (cmd_expand(common, *target)?, Status::Ok, &common.out),
        Command::Verify { checks, common } => {
            let (text, status) = cmd_verify(common, checks)?;
            (text, status, &common.out)
        }
    };
    emit(&text, out)?;
    Ok(status)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Fail) => ExitCode::from(1),
        Ok(_) => ExitCode::SUCCESS,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
