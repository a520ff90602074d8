use std::fmt::Write as _;
use std::io::Read as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use orient_duality::literal::{class_to_json, hom_to_json, parse_class, parse_hom, parse_morphism};
use orient_duality::{
    all_passed, duality_to_coh, duality_to_hom, fundamental_class, render_table, reports_to_json, run_suite,
    CheckConfig, Error, Mutation, RingKind, Space, Theory,
};

/// Oriented cohomology calculator for products of projective spaces.
#[derive(Parser)]
#[command(name = "orient-duality", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// additive, multiplicative or universal; `verify` also takes a comma list or `all`
    #[arg(long, global = true)]
    theory: Option<String>,
    /// Truncation order N of the formal group law
    #[arg(long, global = true, default_value_t = 10)]
    truncation: u32,
    /// Space such as P2xP1 or pt; `verify` also takes a comma list
    #[arg(long, global = true)]
    space: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Direction {
    /// Cohomology class to homology class
    ToHom,
    /// Homology class to cohomology class
    ToCoh,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient ring, law coefficients and classes of projective spaces
    Ring,
    /// Euler class of O(d_1, ..., d_k)
    Euler {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        degrees: Vec<i64>,
    },
    /// Gysin pushforward of a class along a morphism literal
    Pushforward {
        #[arg(long)]
        morphism: String,
        /// Class JSON, `@path` or `-` for stdin
        #[arg(long)]
        class: String,
    },
    /// Diagonal class on X x X
    Kernel,
    /// Fundamental class [X]
    Fundamental,
    /// Poincare duality in either direction
    Dualize {
        #[arg(long, value_enum)]
        direction: Direction,
        /// Class JSON, `@path` or `-` for stdin
        #[arg(long)]
        class: String,
    },
    /// Run the verification suite
    Verify {
        #[arg(long, default_value_t = 4)]
        samples: usize,
        /// Comma list of check ids; all checks when omitted
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Sign-flip one coefficient: law:i,j or kernel:i,j
        #[arg(long)]
        mutate: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Compute(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(Error::TruncationUnsound { .. }) => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => f.write_str(m),
            Failure::Compute(e) => write!(f, "{e}"),
        }
    }
}

struct Rendered {
    text: String,
    json: Value,
    ok: bool,
}

impl Rendered {
    fn new(text: String, json: Value) -> Rendered {
        Rendered { text, json, ok: true }
    }
}

fn theory_kind(name: &str) -> Result<RingKind, Failure> {
    RingKind::from_name(name.trim()).ok_or_else(|| {
        Failure::Usage(format!(
            "unknown theory `{name}` (expected additive, multiplicative or universal)"
        ))
    })
}

fn single_theory(g: &Global) -> Result<Theory, Failure> {
    let name = g
        .theory
        .as_deref()
        .ok_or_else(|| Failure::Usage("--theory is required".into()))?;
    Ok(Theory::new(theory_kind(name)?, g.truncation)?)
}

fn single_space(g: &Global) -> Result<Space, Failure> {
    let spec = g
        .space
        .as_deref()
        .ok_or_else(|| Failure::Usage("--space is required".into()))?;
    let space = Space::parse(spec)?;
    require_truncation(g.truncation, &space)?;
    Ok(space)
}

fn require_truncation(n: u32, space: &Space) -> Result<(), Failure> {
    if n < space.dim() + 1 {
        return Err(Error::TruncationUnsound {
            needed: space.dim() + 1,
            available: n,
        }
        .into());
    }
    Ok(())
}

fn read_literal(arg: &str) -> Result<String, Failure> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn ring(g: &Global) -> Result<Rendered, Failure> {
    let theory = single_theory(g)?;
    let ring = theory.ring();
    let symbols: Vec<&str> = ring.symbols().iter().map(|s| s.name.as_str()).collect();
    let g_values: Vec<String> = (0..theory.truncation())
        .map(|n| theory.pn_class(n).map(ToString::to_string))
        .collect::<Result<_, _>>()?;
    let mut law: Vec<((u32, u32), String)> = theory
        .law()
        .coefficients()
        .filter(|(_, c)| !c.is_zero())
        .map(|(&ij, c)| (ij, c.to_string()))
        .collect();
    law.sort_by_key(|&((i, j), _)| (i + j, i));
    let mut text = String::new();
    let _ = writeln!(text, "theory: {}", theory.kind());
    let _ = writeln!(text, "truncation: {}", theory.truncation());
    let _ = writeln!(text, "symbols: {}", symbols.join(", "));
    for (n, v) in g_values.iter().enumerate() {
        let _ = writeln!(text, "[P{n}] = {v}");
    }
    for ((i, j), c) in &law {
        let _ = writeln!(text, "a_{i},{j} = {c}");
    }
    let json = json!({
        "theory": theory.kind().name(),
        "truncation": theory.truncation(),
        "symbols": symbols,
        "pn_classes": g_values,
        "law": law.iter().map(|((i, j), c)| json!({"i": i, "j": j, "coeff": c})).collect::<Vec<_>>(),
    });
    Ok(Rendered::new(text, json))
}

fn coh_output(class: &orient_duality::CohClass) -> Rendered {
    Rendered::new(format!("{}: {class}\n", class.space()), class_to_json(class))
}

fn hom_output(a: &orient_duality::HomClass) -> Rendered {
    Rendered::new(format!("{}: {a}\n", a.space()), hom_to_json(a))
}

fn verify(g: &Global, samples: usize, checks: &[String], mutate: Option<&str>) -> Result<Rendered, Failure> {
    let theories = match g.theory.as_deref() {
        None | Some("all") => RingKind::ALL.to_vec(),
        Some(list) => list.split(',').map(theory_kind).collect::<Result<_, _>>()?,
    };
    let spec = g
        .space
        .as_deref()
        .ok_or_else(|| Failure::Usage("--space is required".into()))?;
    let spaces = spec
        .split(',')
        .map(|s| Space::parse(s.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let mut cfg = CheckConfig::new(theories, spaces, g.truncation);
    cfg.seed = g.seed;
    cfg.samples = samples;
    cfg.checks = checks.to_vec();
    cfg.mutation = mutate.map(Mutation::parse).transpose()?;
    let reports = run_suite(&cfg)?;
    let json: Value = serde_json::from_str(&reports_to_json(&reports)).expect("report JSON");
    Ok(Rendered {
        text: render_table(&reports),
        json,
        ok: all_passed(&reports),
    })
}

fn run(cli: &Cli) -> Result<Rendered, Failure> {
    let g = &cli.global;
    match &cli.command {
        Command::Ring => ring(g),
        Command::Euler { degrees } => {
            let (theory, space) = (single_theory(g)?, single_space(g)?);
            if degrees.len() != space.num_factors() {
                return Err(Failure::Usage(format!(
                    "--degrees has {} entries but {space} has {} factors",
                    degrees.len(),
                    space.num_factors()
                )));
            }
            Ok(coh_output(&theory.euler(&space, degrees)?))
        }
        Command::Pushforward { morphism, class } => {
            let (theory, space) = (single_theory(g)?, single_space(g)?);
            let f = parse_morphism(morphism, &space)?;
            require_truncation(g.truncation, f.target())?;
            let alpha = parse_class(&read_literal(class)?, &space, theory.ring())?;
            Ok(coh_output(&theory.pushforward(&f, &alpha)?))
        }
        Command::Kernel => {
            let (theory, space) = (single_theory(g)?, single_space(g)?);
            Ok(coh_output(&theory.kernel_class(&space)?))
        }
        Command::Fundamental => {
            let (theory, space) = (single_theory(g)?, single_space(g)?);
            Ok(hom_output(&fundamental_class(&theory, &space)?))
        }
        Command::Dualize { direction, class } => {
            let (theory, space) = (single_theory(g)?, single_space(g)?);
            let text = read_literal(class)?;
            match direction {
                Direction::ToHom => {
                    let alpha = parse_class(&text, &space, theory.ring())?;
                    Ok(hom_output(&duality_to_hom(&theory, &alpha)?))
                }
                Direction::ToCoh => {
                    let a = parse_hom(&text, &space, theory.ring())?;
                    Ok(coh_output(&duality_to_coh(&theory, &a)?))
                }
            }
        }
        Command::Verify {
            samples,
            checks,
            mutate,
        } => verify(g, *samples, checks, mutate.as_deref()),
    }
}

fn emit(g: &Global, r: &Rendered) -> Result<(), Failure> {
    let body = match g.format {
        Format::Text => r.text.clone(),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&r.json).expect("JSON value")),
    };
    match &g.out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|r| emit(&cli.global, &r).map(|()| r.ok));
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
