//! Verification front end: runs the identity suites and emits reports.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on
//! invalid configuration or input. JSON output is byte-identical across
//! repeated runs with the same configuration.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use suq2::geometry;
use suq2::gns::{self, TruncatedSpace};
use suq2::ktheory::{self, PairingTable};
use suq2::qalgebra::{self, AlgebraElement, Generator, PBWMonomial};
use suq2::report::{Check, Report};
use suq2::scalar::LaurentQ;
use suq2::Error;

#[derive(Parser)]
#[command(name = "suq2", version, about = "Quantum SU(2) verification suites")]
struct Cli {
    /// Deformation parameter, strictly inside (0, 1)
    #[arg(long, global = true, default_value_t = 0.5)]
    q: f64,

    /// Truncation level twolmax of the Peter-Weyl space
    #[arg(long, global = true, default_value_t = 20)]
    cutoff: i64,

    /// Numerical tolerance for residual checks
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol: f64,

    /// Threshold the final commutator tail norm must fall below
    #[arg(long, global = true, default_value_t = 1e-6)]
    decay_threshold: f64,

    #[arg(long, global = true, value_enum, default_value_t = Output::Json)]
    output: Output,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out_file: Option<std::path::PathBuf>,

    /// Seed for randomized monomial sampling
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Hopf-axiom suite on PBW monomials of bounded degree
    CheckHopf {
        #[arg(long, default_value_t = 4)]
        degree: u32,
    },
    /// Defining relations and fundamental-matrix unitarity on a truncation
    CheckRelations,
    /// Haar state values, positivity sampling, and the modular property
    Haar {
        /// Element in the interchange text form, e.g. "(1*q^0) * g^1 gs^1"
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 12)]
        samples: usize,
    },
    /// Dirac eigenvalues and the exact phase identities
    Spectrum,
    /// Tail norms of [F, pi(x)] for the sphere generators
    Commutators {
        #[arg(long, default_value = "4,8,12,16,20")]
        cutoffs: String,
    },
    /// Tail norms of [F, adjoint action] for the four generators
    DrinfeldCommutators {
        #[arg(long, default_value = "4,8,12,16,20")]
        cutoffs: String,
    },
    /// Pairing table over a (k, l) rectangle, cross-checked by the operator
    /// oracle
    IndexTable {
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        kmin: i64,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        kmax: i64,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        lmin: i64,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        lmax: i64,
    },
    /// Duality composites comp(a) and comp2(a) over a range of a
    Duality {
        /// Range in the form "min..max", inclusive
        #[arg(long, default_value = "-5..5", allow_hyphen_values = true)]
        arange: String,
    },
    /// The 2x2 rank-2 duality identity matrix
    DsDouble,
    /// Index stability across a grid of q values
    QGrid {
        #[arg(long, default_value = "0.3,0.5,0.9")]
        qs: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(pass) => {
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, Error> {
    if cli.cutoff < 4 {
        return Err(Error::InvalidInput(format!(
            "cutoff {} below the minimum 4",
            cli.cutoff
        )));
    }
    if !(cli.tol > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let report = match &cli.command {
        Command::CheckHopf { degree } => qalgebra::verify_hopf_axioms(*degree),
        Command::CheckRelations => {
            let space = TruncatedSpace::new(cli.cutoff);
            gns::verify_relations(&space, cli.q, cli.tol)?
        }
        Command::Haar { element, samples } => haar_report(cli, element.as_deref(), *samples)?,
        Command::Spectrum => geometry::verify_spectrum(cli.q, cli.cutoff, cli.tol)?,
        Command::Commutators { cutoffs } => {
            let cutoffs = parse_i64_list(cutoffs)?;
            let mut report = Report::new("commutators");
            report.set_param("q", cli.q);
            report.set_param("twolmax", cli.cutoff);
            report.set_param("cutoffs", &cutoffs);
            report.set_param("decay_threshold", cli.decay_threshold);
            for x in geometry::podles_generators() {
                let sub = geometry::commutator_decay(
                    &x,
                    cli.q,
                    cli.cutoff,
                    &cutoffs,
                    cli.decay_threshold,
                )?;
                merge_checks(&mut report, &x.to_text(), sub);
            }
            report.finalize()
        }
        Command::DrinfeldCommutators { cutoffs } => {
            let cutoffs = parse_i64_list(cutoffs)?;
            let mut report = Report::new("drinfeld-commutators");
            report.set_param("q", cli.q);
            report.set_param("twolmax", cli.cutoff);
            report.set_param("cutoffs", &cutoffs);
            report.set_param("decay_threshold", cli.decay_threshold);
            for g in Generator::ALL {
                let sub = geometry::drinfeld_commutator_decay(
                    g,
                    cli.q,
                    cli.cutoff,
                    &cutoffs,
                    cli.decay_threshold,
                )?;
                merge_checks(&mut report, &format!("{g:?}"), sub);
            }
            report.finalize()
        }
        Command::IndexTable { kmin, kmax, lmin, lmax } => {
            let table = PairingTable::build((*kmin, *kmax), (*lmin, *lmax));
            if matches!(cli.output, Output::Csv) {
                emit(cli, table.to_csv())?;
                return Ok(true);
            }
            let mut report = Report::new("index-table");
            report.set_param("kmin", kmin);
            report.set_param("kmax", kmax);
            report.set_param("lmin", lmin);
            report.set_param("lmax", lmax);
            report.set_param("twolmax", cli.cutoff);
            for e in &table.entries {
                let m = e.k + e.l;
                let oracle = ktheory::index_operator(m, cli.cutoff.max(m.abs() + 4), cli.q)?;
                report.add_check(Check::exact(
                    &format!("pairing({},{})", e.k, e.l),
                    oracle.to_text(),
                    e.result.clone(),
                ));
            }
            report.finalize()
        }
        Command::Duality { arange } => {
            let (lo, hi) = parse_range(arange)?;
            ktheory::verify_pd_unit_counit((lo, hi))
        }
        Command::DsDouble => ktheory::verify_ds_double(),
        Command::QGrid { qs } => {
            let qs = parse_f64_list(qs)?;
            ktheory::q_grid_consistency(&qs, cli.cutoff)?
        }
    };
    let body = match cli.output {
        Output::Json => report.to_json(),
        Output::Text => report.to_text(),
        Output::Csv => {
            let mut out = String::from("name,pass,measured,expected\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    c.name, c.pass, c.measured, c.expected
                ));
            }
            out
        }
    };
    emit(cli, body)?;
    Ok(report.pass)
}

fn emit(cli: &Cli, body: String) -> Result<(), Error> {
    match &cli.out_file {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{body}");
            Ok(())
        }
    }
}

fn merge_checks(report: &mut Report, prefix: &str, sub: Report) {
    for mut check in sub.checks {
        check.name = format!("[{prefix}] {}", check.name);
        report.add_check(check);
    }
}

fn haar_report(cli: &Cli, element: Option<&str>, samples: usize) -> Result<Report, Error> {
    let mut report = Report::new("haar");
    report.set_param("q", cli.q);
    report.set_param("cutoff", cli.cutoff);
    report.set_param("seed", cli.seed);
    let cutoff = cli.cutoff as u32;

    if let Some(text) = element {
        let x = AlgebraElement::parse(text)?;
        report.set_param("element", x.to_text());
        let h = qalgebra::haar(&x, cli.q, cutoff)?;
        report.set_param("haar_value", format!("{:+.12e} {:+.12e}i", h.re, h.im));
        let p = qalgebra::haar(&x.star().multiply(&x), cli.q, cutoff)?;
        report.add_check(Check::residual("positivity: -Re haar(x*x)", -p.re, cli.tol));
        report.add_check(Check::residual("haar(x*x) real", p.im.abs(), cli.tol));
        return Ok(report.finalize());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let monos = PBWMonomial::all_up_to_degree(2);
    let random_element = |rng: &mut ChaCha8Rng| {
        let mut x = AlgebraElement::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let m = monos[rng.gen_range(0..monos.len())];
            let c = rng.gen_range(-3i64..=3);
            x.add_term(m, LaurentQ::term(num::BigRational::from_integer(c.into()), 0));
        }
        x
    };
    for n in 0..samples {
        let x = random_element(&mut rng);
        let p = qalgebra::haar(&x.star().multiply(&x), cli.q, cutoff)?;
        report.add_check(Check::residual(
            &format!("positivity sample {n}: -Re haar(x*x), x = {}", x.to_text()),
            -p.re,
            cli.tol,
        ));
        let y = random_element(&mut rng);
        let defect = suq2::qalgebra::haar(&x.multiply(&y), cli.q, cutoff)?
            - suq2::qalgebra::haar(&y.multiply(&x.modular_twist()), cli.q, cutoff)?;
        report.add_check(Check::residual(
            &format!("modular property sample {n}"),
            defect.norm(),
            cli.tol,
        ));
    }
    // the vacuum expectation of the unit is exactly 1
    let one: Complex64 = qalgebra::haar(&AlgebraElement::one(), cli.q, cutoff)?;
    report.add_check(Check::residual("haar(1) = 1", (one.re - 1.0).abs(), 0.0));
    Ok(report.finalize())
}

fn parse_i64_list(s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {t:?}")))
        })
        .collect()
}

fn parse_range(s: &str) -> Result<(i64, i64), Error> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| Error::Parse(format!("range must look like \"-5..5\", got {s:?}")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range start {lo:?}")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad range end {hi:?}")))?;
    if lo > hi {
        return Err(Error::Parse(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}
