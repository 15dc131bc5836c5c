//! `macmahon`: series, identity checks, detection sweeps and lattice counts.
//!
//! Exit status is 0 on success, 1 when a check reports a mismatch or a sweep
//! reports a violation, and 2 on a usage error.

mod report;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use macmahon_core::detector::{detect_range, level2_factorization_checks};
use macmahon_core::eisenstein::identity_suite;
use macmahon_core::lattice::{lattice_count_formula, theta_series, LatticeName, ShiftedLattice};
use macmahon_core::macmahon::{macmahon_bruteforce, macmahon_series, main_identity_sides, verify_variant};
use macmahon_core::{Backend, ExpressionId, MacMahonParams, ResidueClassSet, SeriesCheck, SignEps, Variant};

use report::{num, Report};

#[derive(Parser, Debug)]
#[command(name = "macmahon", version, about = "Generalized MacMahon series, divisor-sum identities and prime detection")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Coefficients of the generalized MacMahon series up to --order.
    Series {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// A single coefficient, by the series and by direct enumeration.
    Mk {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        n: u64,
    },
    /// Identity checks.
    Verify {
        #[command(subcommand)]
        what: VerifyCommand,
    },
    /// Evaluate a prime-detecting expression over a range and compare each sign with its prediction.
    Detect {
        /// level1-quadratic, level1-cubic, level2-quadratic, level2-quartic,
        /// level3-quadratic, lattice1-mod4, lattice3-mod4 or lelievre:N:k:l.
        #[arg(long)]
        expr: ExpressionId,
        /// Inclusive range `lo:hi` with 2 ≤ lo ≤ hi.
        #[arg(long, value_parser = parse_range)]
        range: (u64, u64),
        #[arg(long, default_value = "formula")]
        backend: Backend,
    },
    /// Enumerated lattice counts next to the divisor-sum formula.
    Lattice {
        /// L1, L2 or E8 (E8 rows are indexed by half the norm).
        #[arg(long)]
        name: LatticeName,
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum VerifyCommand {
    /// The series against its Lehmer-polynomial expression in Eisenstein series.
    MainIdentity {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 40)]
        order: usize,
        /// Add one to the last coefficient of the direct side before comparing.
        #[arg(long)]
        inject_fault: bool,
    },
    /// The main identity for the named variants A-H with k = 1, 2, 3.
    Variants {
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
    /// Eisenstein, refinement and level-2 factorization identities.
    Suites {
        #[arg(long, default_value_t = 40)]
        order: usize,
    },
}

#[derive(Args, Debug, Clone)]
struct ParamArgs {
    /// Named parameter set A-H; excludes --modulus and --residues.
    #[arg(long, conflicts_with_all = ["modulus", "residues"])]
    variant: Option<Variant>,
    #[arg(long)]
    modulus: Option<u64>,
    /// Comma-separated residues modulo --modulus.
    #[arg(long, value_delimiter = ',')]
    residues: Option<Vec<u64>>,
    /// +1 or -1.
    #[arg(long, allow_hyphen_values = true, default_value = "+1")]
    epsilon: SignEps,
    #[arg(long)]
    k: usize,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
}

impl ParamArgs {
    /// Parameters together with the overall sign carried by a named variant.
    fn resolve(&self) -> Result<(MacMahonParams, i64), CliError> {
        if let Some(v) = self.variant {
            let p = v.params(self.k).map_err(|e| CliError::Usage(format!("--k: {e}")))?;
            return Ok((p, v.sign(self.k)));
        }
        let modulus = self
            .modulus
            .ok_or_else(|| CliError::Usage("--modulus is required without --variant".into()))?;
        let residues = self
            .residues
            .clone()
            .ok_or_else(|| CliError::Usage("--residues is required without --variant".into()))?;
        let classes = ResidueClassSet::new(modulus, residues).map_err(|e| CliError::Usage(format!("--residues: {e}")))?;
        let p = MacMahonParams::new(classes, self.epsilon, self.k).map_err(|e| CliError::Usage(format!("--k: {e}")))?;
        Ok((p, 1))
    }

    fn record(&self, report: &mut Report, p: &MacMahonParams) {
        if let Some(v) = self.variant {
            report.param("variant", v.to_string());
        }
        report
            .param("modulus", p.classes.modulus())
            .param("residues", Value::Array(p.classes.residues().iter().map(|&r| r.into()).collect()))
            .param("epsilon", p.eps.to_string())
            .param("k", p.k);
    }
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo = lo.trim().parse::<u64>().map_err(|e| format!("lo: {e}"))?;
    let hi = hi.trim().parse::<u64>().map_err(|e| format!("hi: {e}"))?;
    if lo < 2 || hi < lo {
        return Err(format!("need 2 ≤ lo ≤ hi, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn check_rows(report: &mut Report, checks: &[SeriesCheck]) {
    for c in checks {
        let (status, power) = match &c.mismatch {
            None => ("ExactMatch".to_string(), Value::Null),
            Some(m) => (format!("Mismatch at q^{}", m.power), m.power.into()),
        };
        report.row([
            ("check", Value::from(c.name.clone())),
            ("status", status.into()),
            ("order", c.order.into()),
            ("first_mismatch", power),
        ]);
        if !c.passed() {
            report.violations.push(c.name.clone().into());
        }
    }
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Series { params, order } => {
            let (p, sign) = params.resolve()?;
            let mut report = Report::new("series");
            params.record(&mut report, &p);
            report.param("order", *order);
            let s = macmahon_series(&p, *order).scale_int(sign);
            for (n, c) in s.coeffs().iter().enumerate() {
                report.row([("n", Value::from(n)), ("coefficient", num(c))]);
            }
            Ok(report)
        }
        Command::Mk { params, n } => {
            let (p, sign) = params.resolve()?;
            let mut report = Report::new("mk");
            params.record(&mut report, &p);
            report.param("n", *n);
            let order = usize::try_from(*n).map_err(|_| CliError::Usage("--n: too large".into()))?;
            let series = macmahon_series(&p, order).coeff(order).clone() * macmahon_core::Rational::from_integer(sign.into());
            let brute = macmahon_bruteforce(&p, *n) * sign;
            let agree = series == macmahon_core::Rational::from_integer(brute.clone());
            report.row([
                ("n", Value::from(*n)),
                ("value", num(&brute)),
                ("series", num(&series)),
                ("agree", agree.into()),
            ]);
            if !agree {
                report.violations.push((*n).into());
            }
            Ok(report)
        }
        Command::Verify { what } => match what {
            VerifyCommand::MainIdentity {
                params,
                order,
                inject_fault,
            } => {
                let (p, _) = params.resolve()?;
                let mut report = Report::new("verify main-identity");
                params.record(&mut report, &p);
                report.param("order", *order).param("inject_fault", *inject_fault);
                let (mut direct, via_lehmer) = main_identity_sides(&p, *order);
                if *inject_fault {
                    let last = direct.order();
                    let bumped = direct.coeff(last) + macmahon_core::Rational::from_integer(1.into());
                    direct.set_coeff(last, bumped);
                }
                let check = SeriesCheck::compare(format!("A[{p}] = Lambda_{}(G)", p.k), &direct, &via_lehmer);
                check_rows(&mut report, &[check]);
                Ok(report)
            }
            VerifyCommand::Variants { order } => {
                let mut report = Report::new("verify variants");
                report.param("order", *order);
                let mut checks = Vec::new();
                for v in Variant::ALL {
                    for k in 1..=3 {
                        checks.push(verify_variant(v, k, *order).map_err(|e| CliError::Usage(e.to_string()))?);
                    }
                }
                check_rows(&mut report, &checks);
                Ok(report)
            }
            VerifyCommand::Suites { order } => {
                let mut report = Report::new("verify suites");
                report.param("order", *order);
                let mut checks = identity_suite(*order);
                checks.extend(level2_factorization_checks(*order));
                check_rows(&mut report, &checks);
                Ok(report)
            }
        },
        Command::Detect { expr, range, backend } => {
            let (lo, hi) = *range;
            let d = detect_range(*expr, lo, hi, *backend).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut report = Report::new("detect");
            report
                .param("expr", expr.to_string())
                .param("range", format!("{lo}:{hi}"))
                .param("backend", backend.to_string());
            for r in &d.rows {
                report.row([
                    ("n", Value::from(r.n)),
                    ("value", num(&r.value)),
                    ("sign", r.outcome.sign.to_string().into()),
                    ("label", r.outcome.label.clone().into()),
                    ("expected", r.expected.sign.to_string().into()),
                    ("consistent", r.consistent().into()),
                ]);
            }
            report.violations = d.violations.iter().map(|&n| n.into()).collect();
            Ok(report)
        }
        Command::Lattice { name, order } => {
            let lat = ShiftedLattice::catalog(*name);
            let theta = theta_series(&lat, *order).map_err(|e| CliError::Usage(format!("--order: {e}")))?;
            let mut report = Report::new("lattice");
            report.param("name", name.to_string()).param("order", *order);
            for (n, &count) in theta.counts.iter().enumerate() {
                let formula = (n > 0).then(|| lattice_count_formula(*name, n as u64));
                let agree = formula.as_ref().map_or(true, |f| *f == count.into());
                report.row([
                    ("n", Value::from(n)),
                    ("enumerated", num(count)),
                    ("formula", formula.map_or(Value::Null, num)),
                    ("agree", agree.into()),
                ]);
                if !agree {
                    report.violations.push(n.into());
                }
            }
            Ok(report)
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("MACMAHON_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Usage(format!("MACMAHON_THREADS: expected a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(format!("MACMAHON_THREADS: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else if let (Command::Mk { .. }, [row]) = (&cli.command, report.rows.as_slice()) {
                match &row["value"] {
                    Value::String(v) => println!("{v}"),
                    other => println!("{other}"),
                }
            } else {
                print!("{}", report.to_text());
            }
            if report.violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
