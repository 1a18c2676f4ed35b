//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 when a file cannot be read or written, 2 on
//! usage or parse errors, 3 when the input parses but violates an
//! invariant. Diagnostics go to stderr as `file:line: entity: message`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::cosheaf_tower::cosheaf_tower_homology;
use crate::error::Error;
use crate::field::Field;
use crate::io::{self, InputError, Parsed, SourceMap};
use crate::oracle::pointwise_homology_barcode;
use crate::poset::{poset_cohomology, Route, DEFAULT_CHAIN_LIMIT};
use crate::pres_hom::homology_of_pair;
use crate::pres_pers_mod::pres_pers_mod;
use crate::sheaf::local_sheaf_cohomology;
use crate::tower::tower_homology;

#[derive(Parser, Debug)]
#[command(name = "presmod", version, about = "Barcodes of complexes of persistence modules")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Prime field; must agree with any modulus given in the input.
    #[arg(long, global = true)]
    field: Option<u64>,
    /// Keep zero-length bars [a,a) in the output.
    #[arg(long, global = true)]
    keep_empty: bool,
    /// Worker threads for the per-simplex presentations of `sheaf`.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of a pair of annotated matrices f0, g0.
    Preshom {
        f0: PathBuf,
        g0: PathBuf,
        /// Degree label of the output bars.
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
    /// Canonical presentation of a morphism of persistence modules.
    Present { input: PathBuf },
    /// Persistent homology of a simplicial tower.
    Tower {
        input: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Persistent cosheaf homology over a simplicial tower.
    Cosheaf {
        input: PathBuf,
        #[arg(long)]
        dim: usize,
    },
    /// Persistent sheaf cohomology over a simplicial complex.
    Sheaf {
        input: PathBuf,
        #[arg(long)]
        deg: usize,
    },
    /// Persistent sheaf cohomology over a finite poset.
    Poset {
        input: PathBuf,
        #[arg(long)]
        deg: usize,
        #[arg(long, value_enum, default_value_t = RouteArg::Auto)]
        route: RouteArg,
        /// Largest order complex, in simplices, that may be built.
        #[arg(long, default_value_t = DEFAULT_CHAIN_LIMIT)]
        chain_limit: u128,
    },
    /// Pointwise homology of a raw complex, computed index by index.
    Oracle {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        deg: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RouteArg {
    Auto,
    Order,
    Alternating,
}

/// A failure with its exit code and diagnostic.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(file: &Path, e: InputError) -> Self {
        let (code, line, entity, detail) = match e {
            InputError::Parse { line, entity, message } => (2, line, entity, message),
            InputError::Invalid { line, entity, source } => (3, line, entity, source.to_string()),
        };
        Failure {
            code,
            message: format!("{}:{line}: {entity}: {detail}", file.display()),
        }
    }

    fn invalid(file: &Path, source: &SourceMap, e: Error) -> Self {
        Failure::input(file, source.attach(e))
    }
}

type Outcome = std::result::Result<String, Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 1,
        message: format!("{}: cannot read: {e}", path.display()),
    })
}

fn load<T>(path: &Path, parse: impl FnOnce(&str) -> Result<Parsed<T>, InputError>) -> std::result::Result<Parsed<T>, Failure> {
    let text = read(path)?;
    parse(&text).map_err(|e| Failure::input(path, e))
}

fn default_field(cli: &Cli) -> std::result::Result<Field, Failure> {
    Field::new(cli.field.unwrap_or(2)).map_err(|e| Failure {
        code: 2,
        message: format!("--field: {e}"),
    })
}

fn check_field(cli: &Cli, path: &Path, source: &SourceMap, k: Field) -> std::result::Result<(), Failure> {
    match cli.field {
        Some(p) if p != k.p() as u64 => Err(Failure::input(
            path,
            InputError::Invalid {
                line: source.header,
                entity: "field".into(),
                source: Error::FieldMismatch {
                    left: p as u32,
                    right: k.p(),
                },
            },
        )),
        _ => Ok(()),
    }
}

fn execute(cli: &Cli) -> Outcome {
    let keep = cli.keep_empty;
    match &cli.command {
        Command::Preshom { f0, g0, deg } => {
            let a = load(f0, io::parse_annmat)?;
            let b = load(g0, io::parse_annmat)?;
            check_field(cli, f0, &a.source, a.value.field())?;
            check_field(cli, g0, &b.source, b.value.field())?;
            a.value.validate().map_err(|e| Failure::invalid(f0, &a.source, e))?;
            b.value.validate().map_err(|e| Failure::invalid(g0, &b.source, e))?;
            let bars = homology_of_pair(&a.value, &b.value, *deg, keep).map_err(|e| Failure::invalid(g0, &b.source, e))?;
            Ok(bars.to_string())
        }
        Command::Present { input } => {
            let raw = load(input, io::parse_rawmod)?;
            check_field(cli, input, &raw.source, raw.value.field)?;
            let f = pres_pers_mod(&raw.value).map_err(|e| Failure::invalid(input, &raw.source, e))?;
            Ok(io::write_annmat(&f))
        }
        Command::Tower { input, dim } => {
            let t = load(input, io::parse_tower)?;
            check_field(cli, input, &t.source, t.value.field)?;
            let bars = tower_homology(&t.value, &[*dim], keep).map_err(|e| Failure::invalid(input, &t.source, e))?;
            Ok(bars.to_string())
        }
        Command::Cosheaf { input, dim } => {
            let c = load(input, io::parse_cosheaf)?;
            let (script, data) = &c.value;
            check_field(cli, input, &c.source, script.field)?;
            let bars = cosheaf_tower_homology(script, data, &[*dim], keep).map_err(|e| Failure::invalid(input, &c.source, e))?;
            Ok(bars.to_string())
        }
        Command::Sheaf { input, deg } => {
            let k = default_field(cli)?;
            let s = load(input, |t| io::parse_sheaf(t, k))?;
            check_field(cli, input, &s.source, s.value.field)?;
            let bars = local_sheaf_cohomology(&s.value, *deg, cli.threads, keep).map_err(|e| Failure::invalid(input, &s.source, e))?;
            Ok(bars.to_string())
        }
        Command::Poset {
            input,
            deg,
            route,
            chain_limit,
        } => {
            let k = default_field(cli)?;
            let s = load(input, |t| io::parse_poset(t, k))?;
            check_field(cli, input, &s.source, s.value.field)?;
            let route = match route {
                RouteArg::Auto => Route::Auto,
                RouteArg::Order => Route::OrderComplex,
                RouteArg::Alternating => Route::Alternating,
            };
            let bars = poset_cohomology(&s.value, *deg, route, *chain_limit, keep).map_err(|e| Failure::invalid(input, &s.source, e))?;
            Ok(bars.to_string())
        }
        Command::Oracle { input, deg } => {
            let raw = load(input, io::parse_rawcplx)?;
            check_field(cli, input, &raw.source, raw.value.field)?;
            let bars = pointwise_homology_barcode(&raw.value, *deg).map_err(|e| Failure::invalid(input, &raw.source, e))?;
            Ok(bars.filtered(keep).to_string())
        }
    }
}

/// Runs the command line `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    let result = execute(&cli).and_then(|text| match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| Failure {
            code: 1,
            message: format!("{}: cannot write: {e}", path.display()),
        }),
        None => stdout.write_all(text.as_bytes()).map_err(|e| Failure {
            code: 1,
            message: format!("stdout: {e}"),
        }),
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "presmod: {}", f.message);
            f.code
        }
    }
}
