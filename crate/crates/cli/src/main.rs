use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use tricx::tricomplex::OutSigns;
use tricx::zigzag::BraidWord;
use tricx::{FieldSpec, PrimeField, Rationals};
use tricx_cli::{execute, format, parse_window, Command, Output, RandomKind, Side, Suite, SuiteConfig};
use tricx_cli::{EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};

#[derive(Parser)]
#[command(name = "tricx", version, about = "Bicomplexes, zigzag complexes and tricomplexes, computed exactly")]
struct Cli {
    /// `q` or `p:<prime>`. Defaults to the field named in the input file,
    /// or p:32003.
    #[arg(long, global = true)]
    field: Option<FieldSpec>,
    /// Where to write the produced module, basis or witness file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Split a bicomplex into indecomposable summands.
    Decompose { file: PathBuf },
    /// A page of the spectral sequence of a bicomplex.
    Espage {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        page: usize,
    },
    /// Total cohomology of a bicomplex.
    Tot { file: PathBuf },
    /// Apply a braid word and report the fingerprint of the result.
    Braid {
        file: PathBuf,
        /// Comma-separated indices; `-r` is the inverse of generator `r`.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        #[arg(long, value_enum, default_value_t = SideArg::Tricomplex)]
        side: SideArg,
    },
    /// Run a randomized verification suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true, value_parser = parse_window)]
        window: (i32, i32),
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        /// Flip one sign of the counit (omega_top, top_m, d1w or d2w).
        #[arg(long, hide = true)]
        flip_out_sign: Option<String>,
    },
    /// Write a random module file.
    Random {
        #[arg(value_enum)]
        kind: KindArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "-2:2", allow_hyphen_values = true, value_parser = parse_window)]
        window: (i32, i32),
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Complex,
    Tricomplex,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Tl,
    Inverse,
    Braid,
    Bridge,
    Homtable,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Bicomplex,
    Tricomplex,
    ZigzagComplex,
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// The command and the field to run it over.
fn prepare(cli: &Cli) -> anyhow::Result<(Command, FieldSpec)> {
    let mut file_field = None;
    let mut load = |path: &PathBuf| -> anyhow::Result<String> {
        let text = read(path)?;
        file_field = Some(format::peek_field(&text)?);
        Ok(text)
    };
    let cmd = match &cli.command {
        Cmd::Decompose { file } => Command::Decompose { input: load(file)? },
        Cmd::Espage { file, page } => Command::Espage {
            input: load(file)?,
            page: *page,
        },
        Cmd::Tot { file } => Command::Tot { input: load(file)? },
        Cmd::Braid { file, word, side } => Command::Braid {
            input: load(file)?,
            word: word.parse::<BraidWord>()?,
            side: match side {
                SideArg::Complex => Side::Complex,
                SideArg::Tricomplex => Side::Tricomplex,
            },
        },
        Cmd::Verify {
            suite,
            trials,
            seed,
            window,
            max_dim,
            flip_out_sign,
        } => {
            let signs = match flip_out_sign {
                None => OutSigns::default(),
                Some(name) => OutSigns::single_flips()
                    .into_iter()
                    .find(|(n, _)| n == name)
                    .map(|(_, s)| s)
                    .ok_or_else(|| anyhow!("unknown counit term `{name}`"))?,
            };
            let suite = match suite {
                SuiteArg::Tl => Suite::Tl,
                SuiteArg::Inverse => Suite::Inverse,
                SuiteArg::Braid => Suite::Braid,
                SuiteArg::Bridge => Suite::Bridge,
                SuiteArg::Homtable => Suite::Homtable,
            };
            Command::Verify {
                suite,
                config: SuiteConfig {
                    trials: *trials,
                    seed: *seed,
                    window: *window,
                    max_dim: *max_dim,
                    signs,
                },
            }
        }
        Cmd::Random {
            kind,
            seed,
            window,
            max_dim,
        } => Command::Random {
            kind: match kind {
                KindArg::Bicomplex => RandomKind::Bicomplex,
                KindArg::Tricomplex => RandomKind::Tricomplex,
                KindArg::ZigzagComplex => RandomKind::ZigzagComplex,
            },
            seed: *seed,
            window: *window,
            max_dim: *max_dim,
        },
    };
    let field = cli.field.or(file_field).unwrap_or_default();
    Ok((cmd, field))
}

fn run(cli: &Cli) -> anyhow::Result<Output> {
    let (cmd, field) = prepare(cli)?;
    let out = match field {
        FieldSpec::Rationals => execute(&Rationals, &cmd)?,
        FieldSpec::Prime(p) => execute(&PrimeField::new(p)?, &cmd)?,
    };
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    print!("{}", out.report.render());
    if let (Some(path), Some(text)) = (&cli.out, &out.file) {
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    }
    eprintln!("elapsed: {:.3}s", start.elapsed().as_secs_f64());
    let code = if out.report.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
    ExitCode::from(code as u8)
}
