use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hgmod_core::instance::{self, InstanceSpec};
use hgmod_core::pipeline::{self, Options};
use hgmod_core::report::{self, Report};
use hgmod_core::Error;

/// Hopf-Galois structures, associated orders and local freeness of rings of
/// integers.
#[derive(Parser, Debug)]
#[command(name = "hgmod", version)]
struct Cli {
    /// Largest permutation degree the enumeration accepts.
    #[arg(long, global = true)]
    max_points: Option<usize>,
    /// Residues scanned per prime before the local search gives up.
    #[arg(long, global = true)]
    scan_budget: Option<u64>,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// List the built-in instances and exit.
    #[arg(long)]
    catalog: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Hopf-Galois structures of an instance.
    Enumerate {
        /// Built-in name or path to an instance file.
        instance: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the Hopf algebra of one structure with its structure constants.
    Build {
        /// Built-in name or path to an instance file.
        instance: String,
        #[arg(long)]
        structure: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full pipeline and print a summary.
    Check {
        /// Built-in name or path to an instance file.
        instance: String,
        /// Extra primes to check, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Height bound of the global generator search (0 disables it).
        #[arg(long)]
        global_search: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full pipeline and print the whole report.
    Report {
        /// Built-in name or path to an instance file.
        instance: String,
        /// Extra primes to check, comma separated.
        #[arg(long, value_delimiter = ',')]
        primes: Vec<u64>,
        /// Height bound of the global generator search (0 disables it).
        #[arg(long)]
        global_search: Option<i64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::ResourceLimit(_) | Error::Inconclusive(_) => 2,
        Error::DescentFailure(_) | Error::Internal(_) | Error::Unsupported(_) => 1,
        _ => 3,
    }
}

fn options(cli: &Cli, spec: &InstanceSpec, primes: &[u64], global_search: Option<i64>) -> Options {
    let mut o = Options::for_spec(spec);
    if let Some(m) = cli.max_points {
        o.max_points = m;
    }
    if let Some(b) = cli.scan_budget {
        o.scan_budget = b;
    }
    for &p in primes {
        if !o.primes.contains(&p) {
            o.primes.push(p);
        }
    }
    if let Some(b) = global_search {
        o.global_search = (b > 0).then_some(b);
    }
    o
}

fn run(cli: &Cli, command: &Command) -> Result<(String, u8), Error> {
    match command {
        Command::Enumerate { instance, format } => {
            let spec = instance::resolve(instance)?;
            let inst = spec.build()?;
            let r = pipeline::enumeration_report(&inst, &options(cli, &spec, &[], None))?;
            Ok((if *format == Format::Json { r.to_json() } else { r.render_text() }, 0))
        }
        Command::Build { instance, structure, format } => {
            let spec = instance::resolve(instance)?;
            let inst = spec.build()?;
            let r = pipeline::build_report(&inst, *structure, &options(cli, &spec, &[], None))?;
            let code = if r.axioms.all_hold() { 0 } else { 1 };
            Ok((if *format == Format::Json { r.to_json() } else { r.render_text() }, code))
        }
        Command::Check { instance, primes, global_search, format }
        | Command::Report { instance, primes, global_search, format } => {
            let spec = instance::resolve(instance)?;
            let r = pipeline::run_pipeline(&spec, &options(cli, &spec, primes, *global_search))?;
            let text = match (format, command) {
                (Format::Json, _) => r.to_json(),
                (Format::Text, Command::Check { .. }) => verdict_table(&r),
                (Format::Text, _) => r.render_text(),
            };
            Ok((text, r.exit_code() as u8))
        }
    }
}

fn verdict_table(r: &Report) -> String {
    let mut rows = vec![["structure", "N", "verdict", "p", "status"].map(String::from).to_vec()];
    for s in &r.structures {
        for v in &s.verdicts {
            rows.push(vec![
                s.index.to_string(),
                s.fingerprint.to_string(),
                format!("{:?}", v.tag),
                v.prime.map_or_else(|| "-".to_string(), |p| p.to_string()),
                format!("{:?}", v.status),
            ]);
        }
    }
    let s = &r.summary;
    let mut out = format!("instance {}: {} structures\n{}", r.instance, r.structures.len(), report::table(&rows));
    out.push_str(&format!(
        "pass {} fail {} not-applicable {} inconclusive {} unresolved {}\n",
        s.pass, s.fail, s.not_applicable, s.inconclusive, s.unresolved_checks
    ));
    for f in &s.structural_failures {
        out.push_str(&format!("structural failure: {f}\n"));
    }
    out.push_str(&format!("exit {}\n", r.exit_code()));
    out
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    if cli.catalog {
        for name in instance::catalog_names() {
            println!("{name}");
        }
        if cli.command.is_none() {
            return ExitCode::SUCCESS;
        }
    }
    let Some(command) = &cli.command else {
        eprintln!("error: a subcommand is required (see --help)");
        return ExitCode::from(3);
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    match run(&cli, command) {
        Ok((text, code)) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
