//! The `wfomc` command line: argument parsing, input loading and output
//! formatting over the `wfomc` library.

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use wfomc::encode::{encode_mln, encode_problog, query_probability, EncodeError, WfomcEncoding};
use wfomc::ground::{
    brute_force_cap, count, ground, ground_tseitin, to_dimacs, CountError, Engine,
};
use wfomc::logic::{Domain, LogicError, Mode, Weight, WeightedTheory};
use wfomc::parse::{
    count_to_json, parse_formula, parse_mln, parse_problog, parse_theory, print_theory,
    probability_to_json, ParseError,
};
use wfomc::propcheck::{
    full_elimination, run_modularity, run_soundness, sabotage_forall_rewrite,
    sabotage_skolem_weight, CheckReport, GenConfig,
};
use wfomc::transform::{
    skolemize_with, to_cnf_distribute, to_cnf_tseitin, unit_propagate, FreshNamer, SkolemConfig,
    TransformError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_CHECK: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "wfomc",
    version,
    about = "Weighted first-order model counting with count-preserving Skolemization"
)]
struct Cli {
    /// Print results as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct DomainArgs {
    /// Domain of N constants: those named in the input, padded with C1, C2, ...
    #[arg(long, value_name = "N", conflicts_with = "domain")]
    domain_size: Option<usize>,
    /// Explicit domain as a comma-separated constant list.
    #[arg(long, value_name = "A,B,...")]
    domain: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum EngineArg {
    Brute,
    Dpll,
    Auto,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mutation {
    /// Skolem predicates weighted (1, 1).
    SkolemWeight,
    /// Universal sites eliminated as existential ones.
    ForallRewrite,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eliminate quantifiers, convert to clauses and unit-propagate.
    Skolemize {
        input: PathBuf,
        /// Skip the Tseitin predicate for existentials behind only universals.
        #[arg(long)]
        shortcut: bool,
        /// Print the clauses without unit propagation.
        #[arg(long)]
        no_propagate: bool,
    },
    /// First-order CNF of the (Skolemized) theory, or its ground DIMACS form.
    Cnf {
        input: PathBuf,
        /// Name nested subformulas with fresh predicates instead of distributing.
        #[arg(long)]
        tseitin: bool,
        /// Ground over the domain and print weighted DIMACS.
        #[arg(long)]
        dimacs: bool,
        #[command(flatten)]
        domain: DomainArgs,
    },
    /// Weighted model count over a finite domain.
    Count {
        input: PathBuf,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
        /// Arithmetic; defaults to float when a weight is irrational.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Probability of a closed query.
    Prob {
        input: PathBuf,
        #[arg(long, value_name = "FORMULA")]
        query: String,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Check soundness and modularity of Skolemization on random theories.
    Check {
        /// Number of random theories per property.
        #[arg(long, default_value_t = 500)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        first_seed: u64,
        /// Domain sizes, a subset of 1,2,3.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        sizes: Vec<usize>,
        /// Skip theories whose Herbrand base exceeds this many atoms.
        #[arg(long)]
        max_atoms: Option<usize>,
        /// Run with a deliberately broken Skolemization.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
    },
}

/// A failed run with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(m: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: m.into(),
        }
    }

    fn input(m: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: m.to_string(),
        }
    }

    fn resource(m: impl fmt::Display) -> Self {
        Failure {
            code: EXIT_RESOURCE,
            message: m.to_string(),
        }
    }
}

impl From<LogicError> for Failure {
    fn from(e: LogicError) -> Self {
        Failure::input(e)
    }
}

impl From<CountError> for Failure {
    fn from(e: CountError) -> Self {
        if e.is_resource() {
            Failure::resource(e)
        } else {
            Failure::input(e)
        }
    }
}

impl From<EncodeError> for Failure {
    fn from(e: EncodeError) -> Self {
        if e.is_resource() {
            Failure::resource(e)
        } else {
            Failure::input(e)
        }
    }
}

impl From<TransformError> for Failure {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::TooLarge { .. } => Failure::resource(e),
            _ => Failure::input(e),
        }
    }
}

/// A loaded input: the theory to work on and any domain it declares.
struct Input {
    encoding: WfomcEncoding,
    domain: Option<Domain>,
}

fn located(path: &Path, e: ParseError) -> Failure {
    Failure::input(format!("{}:{e}", path.display()))
}

/// Reads a `.fol` theory, `.mln` network or `.plp` program. Networks and
/// programs are encoded as weighted theories.
fn load(path: &Path) -> Result<Input, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
    Ok(match ext {
        "mln" => Input {
            encoding: encode_mln(&parse_mln(&src).map_err(|e| located(path, e))?)?,
            domain: None,
        },
        "plp" => Input {
            encoding: encode_problog(&parse_problog(&src).map_err(|e| located(path, e))?)?,
            domain: None,
        },
        _ => {
            let parsed = parse_theory(&src).map_err(|e| located(path, e))?;
            Input {
                encoding: WfomcEncoding::new(parsed.theory),
                domain: parsed.domain,
            }
        }
    })
}

/// The domain from the flags, else the input's declaration. `named` are
/// the constants the domain must contain.
fn resolve_domain(
    args: &DomainArgs,
    declared: Option<Domain>,
    named: &[String],
) -> Result<Domain, Failure> {
    let d = match (args.domain_size, &args.domain) {
        (Some(n), _) => {
            if n == 0 {
                return Err(LogicError::EmptyDomain.into());
            }
            if named.len() > n {
                return Err(Failure::input(format!(
                    "input names {} constants, more than --domain-size {n}",
                    named.len()
                )));
            }
            Domain::with_size(n, named)?
        }
        (None, Some(list)) => Domain::new(list.split(',').map(str::trim))?,
        (None, None) => declared.ok_or_else(|| {
            Failure::usage("a domain is required: pass --domain-size or --domain")
        })?,
    };
    if let Some(c) = named.iter().find(|c| !d.contains(c)) {
        return Err(LogicError::MissingConstant(c.clone()).into());
    }
    Ok(d)
}

fn engine(e: EngineArg) -> Engine {
    match e {
        EngineArg::Brute => Engine::Brute,
        EngineArg::Dpll => Engine::Dpll,
        EngineArg::Auto => Engine::Auto,
    }
}

fn mode(m: Option<ModeArg>, t: &WeightedTheory) -> Mode {
    match m {
        Some(ModeArg::Exact) => Mode::Exact,
        Some(ModeArg::Float) => Mode::Float,
        None => {
            let irrational = t
                .weights
                .iter()
                .any(|(_, w)| matches!(w.pos, Weight::Exp(_)) || matches!(w.neg, Weight::Exp(_)));
            if irrational {
                Mode::Float
            } else {
                Mode::Exact
            }
        }
    }
}

/// Full elimination (or the shortcut), clausal form by distribution with a
/// Tseitin fallback for large matrices, then optional unit propagation.
fn skolemize_pipeline(
    t: &WeightedTheory,
    shortcut: bool,
    propagate: bool,
) -> Result<WeightedTheory, Failure> {
    let config = SkolemConfig {
        use_shortcut: shortcut,
        ..SkolemConfig::default()
    };
    let mut namer = FreshNamer::for_theory(t);
    let (sk, _) = skolemize_with(t, &config, &mut namer)?;
    let cnf = match to_cnf_distribute(&sk) {
        Err(TransformError::TooLarge { .. }) => to_cnf_tseitin(&sk, &mut namer)?,
        other => other?,
    };
    Ok(if propagate { unit_propagate(&cnf) } else { cnf })
}

fn text_or_json(json: bool, key: &str, text: String) -> String {
    if json {
        json!({ key: text }).to_string() + "\n"
    } else {
        text
    }
}

fn report_json(r: &CheckReport) -> Value {
    json!({
        "property": r.property.to_string(),
        "sizes": r.sizes,
        "passed": r.passed,
        "failed": r.failures.len(),
        "skipped": r.skipped,
        "failures": r.failures.iter().map(|(seed, c)| json!({
            "seed": seed,
            "theory": print_theory(&c.theory, None),
            "query": c.query.as_ref().map(|q| q.to_string()),
            "domain_size": c.size,
            "expected": c.expected.to_string(),
            "got": c.got.to_string(),
        })).collect::<Vec<_>>(),
    })
}

fn execute(cli: Cli) -> Result<(String, i32), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Skolemize {
            input,
            shortcut,
            no_propagate,
        } => {
            let inp = load(&input)?;
            let out = skolemize_pipeline(&inp.encoding.theory, shortcut, !no_propagate)?;
            let text = print_theory(&out, inp.domain.as_ref());
            Ok((text_or_json(json, "theory", text), EXIT_OK))
        }
        Command::Cnf {
            input,
            tseitin,
            dimacs,
            domain,
        } => {
            let inp = load(&input)?;
            let t = &inp.encoding.theory;
            if dimacs {
                let d = resolve_domain(&domain, inp.domain, &t.constants())?;
                let cnf = ground_tseitin(&ground(t, &d)?)?;
                return Ok((text_or_json(json, "dimacs", to_dimacs(&cnf)), EXIT_OK));
            }
            let mut namer = FreshNamer::for_theory(t);
            let sk = if inp.encoding.skolemized {
                t.clone()
            } else {
                skolemize_with(t, &full_elimination(), &mut namer)?.0
            };
            let out = if tseitin {
                to_cnf_tseitin(&sk, &mut namer)?
            } else {
                to_cnf_distribute(&sk)?
            };
            let text = print_theory(&out, inp.domain.as_ref());
            Ok((text_or_json(json, "theory", text), EXIT_OK))
        }
        Command::Count {
            input,
            domain,
            engine: e,
            mode: m,
        } => {
            let inp = load(&input)?;
            let t = &inp.encoding.theory;
            let d = resolve_domain(&domain, inp.domain, &t.constants())?;
            let c = count(t, &d, engine(e), mode(m, t))?;
            let text = if json {
                count_to_json(&c).to_string()
            } else {
                c.to_string()
            };
            Ok((text + "\n", EXIT_OK))
        }
        Command::Prob {
            input,
            query,
            domain,
            engine: e,
            mode: m,
        } => {
            let inp = load(&input)?;
            let phi = parse_formula(&query).map_err(|e| Failure::input(format!("query:{e}")))?;
            let t = &inp.encoding.theory;
            let mut named = t.constants();
            phi.collect_constants(&mut named);
            let mut unique = Vec::new();
            for c in named {
                if !unique.contains(&c) {
                    unique.push(c);
                }
            }
            let d = resolve_domain(&domain, inp.domain, &unique)?;
            let p = query_probability(&inp.encoding, &d, &phi, engine(e), mode(m, t))?;
            let text = if json {
                probability_to_json(&p).to_string()
            } else {
                p.to_string()
            };
            Ok((text + "\n", EXIT_OK))
        }
        Command::Check {
            seeds,
            first_seed,
            sizes,
            max_atoms,
            mutate,
        } => {
            if sizes.is_empty() || sizes.iter().any(|s| !(1..=3).contains(s)) {
                return Err(Failure::usage("--sizes must be a subset of 1,2,3"));
            }
            let mut gen = if sizes.contains(&3) {
                GenConfig::for_size_three()
            } else {
                GenConfig::default()
            };
            gen.sizes = sizes;
            gen.max_atoms = max_atoms.unwrap_or_else(brute_force_cap);
            let config = match mutate {
                None => full_elimination(),
                Some(Mutation::SkolemWeight) => sabotage_skolem_weight(),
                Some(Mutation::ForallRewrite) => sabotage_forall_rewrite(),
            };
            let range = first_seed..first_seed.saturating_add(seeds);
            let reports = [
                run_soundness(&gen, range.clone(), &config),
                run_modularity(&gen, range, &config),
            ];
            let code = if reports.iter().all(CheckReport::ok) {
                EXIT_OK
            } else {
                EXIT_CHECK
            };
            let text = if json {
                Value::Array(reports.iter().map(report_json).collect()).to_string() + "\n"
            } else {
                reports.iter().map(ToString::to_string).collect()
            };
            Ok((text, code))
        }
    }
}

/// Runs the command line `args` (program name first), writing results to
/// `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let stream: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(stream, "{}", e.render());
            return code;
        }
    };
    match execute(cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
