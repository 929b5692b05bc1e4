use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use eulerian_dmod::catalog::parse_module_spec;
use eulerian_dmod::cech::{cech_complex, lyubeznik_pipeline, parse_pipeline, MonomialIdeal};
use eulerian_dmod::euler::{eulerian_check, ge_offset_detect};
use eulerian_dmod::homalg::{ext_a1, hm_of_tor_report, evidence_suite, sharp, tor_a1, A1Module};
use eulerian_dmod::koszul::{self, concentration_check, koszul_homology, koszul_homology_iterated, parse_ops};
use eulerian_dmod::multigraded::StraightModule;
use eulerian_dmod::report::{Format, Instance, Verdict, VerificationReport};
use eulerian_dmod::suites::{run_verify, Suite, VerifyOptions, DEFAULT_MAX_N, DEFAULT_SEED};
use eulerian_dmod::weyl::parse_element;
use eulerian_dmod::Error;

/// Graded D-module homology: Koszul, De Rham, local cohomology, Tor and Ext.
#[derive(Parser)]
#[command(name = "eulerian-dmod", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or pretty.
    #[arg(long, default_value = "json")]
    format: Format,
    /// Record wall time per instance (makes output nondeterministic).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct ModuleArg {
    /// Number of variables.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// R, E, R^k, loc:1,2 or lc:H1(x1);H2(x1,x2).
    #[arg(long, default_value = "R", conflicts_with = "module_json")]
    module: String,
    /// Load the module from a JSON file instead.
    #[arg(long)]
    module_json: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification battery.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
        /// Degree window lo..hi.
        #[arg(long, default_value = "-12..6", value_parser = parse_window, allow_hyphen_values = true)]
        window: (i64, i64),
        /// Shift vector for the shift battery, e.g. 1 or 1,-1.
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        shift: Option<IntList>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Koszul homology of a module on a list of x and d operators.
    Koszul {
        #[command(flatten)]
        module: ModuleArg,
        /// Operators such as x1,x2,d3 (default: all x's).
        #[arg(long)]
        ops: Option<String>,
        #[arg(long, default_value = "-12..6", value_parser = parse_window, allow_hyphen_values = true)]
        window: (i64, i64),
        /// Check concentration in this degree.
        #[arg(long, allow_hyphen_values = true)]
        expect: Option<i64>,
        /// Use the one-variable-at-a-time splice engine.
        #[arg(long)]
        iterated: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Euler operator check, optionally after a shift.
    EulerCheck {
        #[command(flatten)]
        module: ModuleArg,
        #[arg(long, value_parser = parse_ints, allow_hyphen_values = true)]
        shift: Option<IntList>,
        #[command(flatten)]
        output: Output,
    },
    /// H^l_m of Tor^R_nu(H^i_I(R), H_J(R)).
    TorR {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ideal_i: String,
        #[arg(long)]
        spot_i: usize,
        #[arg(long)]
        ideal_j: String,
        #[command(flatten)]
        output: Output,
    },
    /// Tor over A_1 of module# against another catalog module.
    TorA1 {
        /// R, Rx or E.
        #[arg(long)]
        module: String,
        #[arg(long)]
        against: String,
        #[command(flatten)]
        output: Output,
    },
    /// Ext over A_1 between catalog modules.
    ExtA1 {
        #[arg(long)]
        module: String,
        #[arg(long)]
        against: String,
        #[command(flatten)]
        output: Output,
    },
    /// De Rham battery on H^nu_(x_1..x_nu)(R) plus the known Ext classes.
    Evidence {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value = "-12..6", value_parser = parse_window, allow_hyphen_values = true)]
        window: (i64, i64),
        #[command(flatten)]
        output: Output,
    },
    /// Local cohomology of a module, or a pipeline applied to R; prints module JSON.
    Lc {
        #[command(flatten)]
        module: ModuleArg,
        /// Ideal such as x1,x2*x3.
        #[arg(long, required_unless_present = "pipeline")]
        ideal: Option<String>,
        #[arg(long, default_value_t = 0)]
        index: usize,
        /// Stages such as H1(x1);H2(x1,x2), applied to R.
        #[arg(long, conflicts_with = "ideal")]
        pipeline: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Weyl algebra arithmetic.
    Weyl {
        #[arg(long)]
        n: usize,
        /// Element such as 2*x1*d1 - d2.
        #[arg(long, allow_hyphen_values = true)]
        expr: String,
        /// Multiply on the right by this element.
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
        /// Apply the anti-involution x -> x, d -> -d.
        #[arg(long)]
        tau: bool,
        /// Reduce modulo the right ideal generated by the d's.
        #[arg(long)]
        mod_d: bool,
    },
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once("..").ok_or("expected lo..hi")?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo > hi {
        return Err(format!("empty window {lo}..{hi}"));
    }
    Ok((lo, hi))
}

/// Comma-separated integers taken as one argument.
#[derive(Clone, Debug)]
struct IntList(Vec<i64>);

fn parse_ints(s: &str) -> Result<IntList, String> {
    s.split(',').map(|t| t.trim().parse::<i64>().map_err(|_| format!("bad integer {t:?}"))).collect::<Result<_, _>>().map(IntList)
}

/// Failure that maps to an exit code.
enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidArgument(_) | Error::TooManyVariables { .. } => Failure::Usage(e.into()),
            other => Failure::Runtime(other.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn notice(lines: &[String]) {
    for line in lines {
        eprintln!("notice: {line}");
    }
}

fn load_module(arg: &ModuleArg) -> Result<StraightModule, Failure> {
    if let Some(path) = &arg.module_json {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(Failure::Usage)?;
        return Ok(StraightModule::from_json(&text)?);
    }
    let (module, notes) = parse_module_spec(arg.n, &arg.module)?;
    notice(&notes);
    Ok(module)
}

impl ModuleArg {
    fn label(&self) -> String {
        match &self.module_json {
            Some(path) => path.display().to_string(),
            None => self.module.clone(),
        }
    }
}

fn write_text(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit(mut report: VerificationReport, output: &Output) -> Result<ExitCode, Failure> {
    if !output.timings {
        report.strip_timings();
    }
    write_text(output.out.as_ref(), &report.emit(output.format)?)?;
    Ok(ExitCode::from(report.exit_code() as u8))
}

fn single(suite: &str, inst: Instance, output: &Output) -> Result<ExitCode, Failure> {
    let mut report = VerificationReport::new(suite);
    report.push(inst);
    emit(report, output)
}

fn a1_module(s: &str) -> Result<A1Module, Failure> {
    Ok(A1Module::parse(s)?)
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Verify { suite, max_n, window, shift, seed, output } => {
            let opts = VerifyOptions { max_n, window, shift: shift.map(|c| c.0), timings: output.timings, seed };
            emit(run_verify(suite, &opts)?, &output)
        }
        Command::Koszul { module, ops, window, expect, iterated, output } => {
            let m = load_module(&module)?;
            let ops = match ops {
                Some(text) => parse_ops(&text)?,
                None => koszul::x_ops(1..=m.n()),
            };
            let names: Vec<String> = ops.iter().map(ToString::to_string).collect();
            let label = format!("H_*({}; {})", names.join(","), module.label());
            let dims = if iterated {
                koszul_homology_iterated(&m, &ops, window.0, window.1)?
            } else {
                koszul_homology(&m, &ops, window.0, window.1)?
            };
            let inst = match expect {
                Some(degree) => concentration_check("koszul", label, &dims, degree),
                None => Instance::new("koszul", label, Verdict::Pass).with_tables(dims),
            };
            single("koszul", inst, &output)
        }
        Command::EulerCheck { module, shift, output } => {
            let mut m = load_module(&module)?;
            if let Some(IntList(c)) = &shift {
                let padded: Vec<i64> = (0..m.n()).map(|i| c.get(i).copied().unwrap_or(0)).collect();
                m = m.shift(&padded)?;
            }
            let verdict = eulerian_check(&m, 4)?;
            let offset = ge_offset_detect(&m)?.map_or("none".to_string(), |l| l.to_string());
            let label = match &shift {
                Some(IntList(c)) => format!("{} shifted by {c:?}", module.label()),
                None => module.label(),
            };
            let inst = Instance::new("euler", label, Verdict::from_bool(verdict.passes()))
                .with_detail(format!("{verdict}; detected offset {offset}"));
            single("euler-check", inst, &output)
        }
        Command::TorR { n, ideal_i, spot_i, ideal_j, output } => {
            let (i_ideal, notes) = MonomialIdeal::parse(n, &ideal_i)?;
            notice(&notes);
            let (j_ideal, notes) = MonomialIdeal::parse(n, &ideal_j)?;
            notice(&notes);
            single("tor-r", hm_of_tor_report(&i_ideal, spot_i, &j_ideal), &output)
        }
        Command::TorA1 { module, against, output } => {
            let (m, n) = (a1_module(&module)?, a1_module(&against)?);
            let dims = tor_a1(&sharp(&m.presentation())?, &n.straight())?;
            let label = format!("Tor^A1_*({}#, {})", m.name(), n.name());
            single("tor-a1", concentration_check("thm-first", label, &dims, -1), &output)
        }
        Command::ExtA1 { module, against, output } => {
            let (m, n) = (a1_module(&module)?, a1_module(&against)?);
            let dims = ext_a1(&m.presentation(), &n.straight())?;
            let mut inst = concentration_check("conj-ext", format!("Ext^*_A1({}, {})", m.name(), n.name()), &dims, 0);
            inst.verdict = Verdict::ConjectureEvidence;
            single("ext-a1", inst, &output)
        }
        Command::Evidence { max_n, window, output } => {
            eulerian_dmod::config::check_vars(max_n)?;
            emit(evidence_suite(max_n, window.0, window.1), &output)
        }
        Command::Lc { module, ideal, index, pipeline, out } => {
            let result = match pipeline {
                Some(text) => {
                    let (stages, notes) = parse_pipeline(module.n, &text)?;
                    notice(&notes);
                    lyubeznik_pipeline(module.n, &stages)?
                }
                None => {
                    let m = load_module(&module)?;
                    let (ideal, notes) = MonomialIdeal::parse(m.n(), ideal.as_deref().unwrap_or_default())?;
                    notice(&notes);
                    cech_complex(&m, &ideal)?.cohomology(index)?
                }
            };
            let mut text = result.to_json();
            text.push('\n');
            write_text(out.as_ref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Weyl { n, expr, times, tau, mod_d } => {
            let mut a = parse_element(n, &expr)?;
            if let Some(other) = times {
                a = a.multiply(&parse_element(n, &other)?)?;
            }
            if tau {
                a = a.tau();
            }
            if mod_d {
                a = a.normal_form_mod_da();
            }
            println!("{a}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = koszul::self_test() {
        eprintln!("error: startup self-test failed: {e}");
        return ExitCode::from(1);
    }
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
