//! Command-line interface.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qchar_core::cache::CharacterKind;
use qchar_core::engine::special_character;
use qchar_core::kl::{self, KLTable};
use qchar_core::standard::membership_check;
use qchar_core::{CartanDatum, DrinfeldPoly, EngineOptions, Error, Session, SpectralSpec};
use serde::Serialize;

use crate::format::{self, Header};
use crate::store::DiskCache;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_SPECIAL: i32 = 2;
pub const EXIT_CAP_EXCEEDED: i32 = 3;
pub const EXIT_ROOT_OF_UNITY: i32 = 4;

const NUMBERING: &str = "Node numbering: A_n is the path 1-2-...-n; D_n is the path \
1-...-(n-2) with n-1 and n attached to n-2; E_n is the path 1-...-(n-1) with n attached to 3.";

#[derive(Parser, Debug)]
#[command(name = "qchar", version, about = "t-analogs of q-characters and KL polynomials for ADE quantum loop algebras", after_help = NUMBERING)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Character of a fundamental module, or of any special module with --weights
    Fundamental(FundamentalArgs),
    /// Character of a standard module
    Standard(ModuleArgs),
    /// Character of a simple module in the Y-variables (generic epsilon only)
    Simple(ModuleArgs),
    /// Index set and the matrices c, u, Z
    Kl(ModuleArgs),
    /// Multiplicities [M(P):L(Q)]
    Mult(ModuleArgs),
    /// Membership and special/small/semismall verdicts
    Check(ModuleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct Common {
    /// Cartan type: A1..A64, D4..D64, E6, E7, E8
    #[arg(long = "type", value_name = "TYPE")]
    pub cartan: String,
    /// Order s of epsilon; 0 means generic
    #[arg(long, default_value_t = 0)]
    pub epsilon_order: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory of the character cache
    #[arg(long, env = "QCHAR_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Largest v-degree explored by the engine
    #[arg(long)]
    pub cap: Option<u32>,
    /// Evaluate coefficients at t = 1
    #[arg(long)]
    pub at_t_one: bool,
}

#[derive(Args, Debug)]
pub struct FundamentalArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, required_unless_present = "weights")]
    pub node: Option<u32>,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub shift: i32,
    /// Highest monomial as a Drinfeld datum; the module must be special
    #[arg(long, conflicts_with = "node")]
    pub weights: Option<String>,
}

#[derive(Args, Debug)]
pub struct ModuleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Drinfeld datum: comma-separated items i:n or i:n:mult, e.g. 1:0:2,1:2
    #[arg(long, allow_hyphen_values = true)]
    pub weights: String,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotSpecial(_) => EXIT_NOT_SPECIAL,
            Error::CapExceeded(_) => EXIT_CAP_EXCEEDED,
            Error::RootOfUnityUnsupported => EXIT_ROOT_OF_UNITY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: e.to_string(),
        }
    }
}

struct Context {
    cartan: CartanDatum,
    spec: SpectralSpec,
    session: Session,
}

fn context(common: &Common) -> Result<Context, Failure> {
    let cartan = CartanDatum::parse(&common.cartan)?;
    let options = EngineOptions {
        cap: common.cap,
        cross_check: false,
    };
    let session = match &common.cache_dir {
        Some(dir) => {
            let cache = DiskCache::open(dir)?;
            Session::with_cache(cartan.clone(), Box::new(cache))
        }
        None => Session::new(cartan.clone()),
    }
    .with_options(options);
    Ok(Context {
        cartan,
        spec: SpectralSpec::with_order(common.epsilon_order),
        session,
    })
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
struct CheckDoc {
    format_version: u32,
    cartan: String,
    epsilon_order: u32,
    drinfeld: Vec<format::RootJson>,
    membership: bool,
    failing_nodes: Vec<u8>,
    special: Option<bool>,
    small: bool,
    semismall: bool,
}

fn execute(cli: Cli) -> Result<String, Failure> {
    match cli.command {
        Command::Fundamental(a) => {
            let mut ctx = context(&a.common)?;
            let (p, x) = match (&a.weights, a.node) {
                (Some(w), _) => {
                    let p = DrinfeldPoly::parse(&ctx.cartan, w, ctx.spec)?;
                    let opts = ctx.session.options();
                    (p.clone(), special_character(&ctx.cartan, &p.top(), opts)?)
                }
                (None, Some(node)) => {
                    let node = ctx.cartan.check_node(node)?;
                    let p = DrinfeldPoly::from_roots(ctx.spec, [(node, a.shift, 1)]);
                    let x = ctx.session.fundamental_character(node, a.shift, ctx.spec)?;
                    (p, x)
                }
                (None, None) => unreachable!("clap requires --node or --weights"),
            };
            let header = Header {
                cartan: ctx.cartan.label_string(),
                spec: ctx.spec,
                kind: CharacterKind::Fundamental,
                drinfeld: p,
            };
            Ok(match a.common.format {
                Format::Text => format::character_text(&x, a.common.at_t_one),
                Format::Json => json(&format::character_doc(&header, &x, a.common.at_t_one)),
            })
        }
        Command::Standard(a) => {
            let mut ctx = context(&a.common)?;
            let p = DrinfeldPoly::parse(&ctx.cartan, &a.weights, ctx.spec)?;
            let x = ctx.session.standard_character(&p)?;
            let header = Header {
                cartan: ctx.cartan.label_string(),
                spec: ctx.spec,
                kind: CharacterKind::Standard,
                drinfeld: p,
            };
            Ok(match a.common.format {
                Format::Text => format::character_text(&x, a.common.at_t_one),
                Format::Json => json(&format::character_doc(&header, &x, a.common.at_t_one)),
            })
        }
        Command::Simple(a) => {
            let mut ctx = context(&a.common)?;
            let p = DrinfeldPoly::parse(&ctx.cartan, &a.weights, ctx.spec)?;
            let x = kl::simple_character(&mut ctx.session, &p)?;
            let header = Header {
                cartan: ctx.cartan.label_string(),
                spec: ctx.spec,
                kind: CharacterKind::Simple,
                drinfeld: p,
            };
            Ok(match a.common.format {
                Format::Text => format::y_character_text(&x, a.common.at_t_one),
                Format::Json => json(&format::y_character_doc(&header, &x, a.common.at_t_one)),
            })
        }
        Command::Kl(a) => {
            let mut ctx = context(&a.common)?;
            let p = DrinfeldPoly::parse(&ctx.cartan, &a.weights, ctx.spec)?;
            let t = KLTable::build(&mut ctx.session, &p)?;
            Ok(match a.common.format {
                Format::Text => format::kl_text(&t, a.common.at_t_one),
                Format::Json => json(&format::kl_doc(&ctx.cartan, &p, &t, a.common.at_t_one)),
            })
        }
        Command::Mult(a) => {
            let mut ctx = context(&a.common)?;
            let p = DrinfeldPoly::parse(&ctx.cartan, &a.weights, ctx.spec)?;
            let m = kl::multiplicities(&mut ctx.session, &p)?;
            Ok(match a.common.format {
                Format::Text => format::multiplicity_text(&m),
                Format::Json => json(&format::multiplicity_doc(&ctx.cartan, &p, &m)),
            })
        }
        Command::Check(a) => {
            let mut ctx = context(&a.common)?;
            let p = DrinfeldPoly::parse(&ctx.cartan, &a.weights, ctx.spec)?;
            let x = ctx.session.standard_character(&p)?;
            let report = membership_check(&ctx.cartan, &x);
            let table = kl::c_matrix(&mut ctx.session, &p)?;
            // the simple character, hence speciality, only exists at generic epsilon
            let special = if ctx.spec.is_generic() {
                Some(kl::is_special(&mut ctx.session, &p)?)
            } else {
                None
            };
            let doc = CheckDoc {
                format_version: format::FORMAT_VERSION,
                cartan: ctx.cartan.label_string(),
                epsilon_order: ctx.spec.order(),
                drinfeld: format::roots_to_json(&p),
                membership: report.passed(),
                failing_nodes: report.failing_nodes(),
                special,
                small: table.is_small(),
                semismall: table.is_semismall(),
            };
            Ok(match a.common.format {
                Format::Json => json(&doc),
                Format::Text => {
                    let special = match doc.special {
                        Some(b) => b.to_string(),
                        None => "undefined at a root of unity".into(),
                    };
                    format!(
                        "membership: {}\nspecial: {special}\nsmall: {}\nsemismall: {}\n",
                        doc.membership, doc.small, doc.semismall
                    )
                }
            })
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    match execute(cli) {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                let _ = writeln!(err, "qchar: {e}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(err, "qchar: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("qchar").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_str(&["fundamental", "--type", "B2", "--node", "1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["fundamental", "--type", "A2", "--node", "3"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["standard", "--type", "A2", "--weights", "1:x"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn error_exit_codes() {
        let (code, _, err) = run_str(&["fundamental", "--type", "A1", "--weights", "1:0,1:2"]);
        assert_eq!(code, EXIT_NOT_SPECIAL, "{err}");
        let (code, _, _) = run_str(&["fundamental", "--type", "A3", "--node", "2", "--cap", "1"]);
        assert_eq!(code, EXIT_CAP_EXCEEDED);
        let (code, _, _) = run_str(&[
            "simple", "--type", "A1", "--weights", "1:0", "--epsilon-order", "2",
        ]);
        assert_eq!(code, EXIT_ROOT_OF_UNITY);
    }

    #[test]
    fn negative_shift() {
        let (code, out, _) = run_str(&["fundamental", "--type", "A1", "--node", "1", "--shift", "-3"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(out, "1 W_{1,-3}\n1 W_{1,-3} V_{1,-2}\n");
    }
}
