//! Command-line and configuration-file parsing.
//!
//! Every setting can come from a flag, from a `key=value` line of the file
//! named by `--config`, or from a built-in default, in that order of
//! precedence. File keys are the long flag names without the leading dashes.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmlab_core::gm::Thresholds;
use gmlab_core::sequence::{self, RealSequence};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "gmlab",
    version,
    about = "General monotone sequences and sine series laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Defect profile of a sequence against β*(r, c) on dyadic windows.
    Defect(Flags),
    /// Majorant growth condition Σ_{i<r} β*_{n+i} / β*_n behind the step-1 to step-r embedding.
    Embed(Flags),
    /// Step-r Abel identity on seeded random series.
    Lemma1(Flags),
    /// Uniform-convergence diagnostics for the sine series with the family as coefficients.
    Converge(Flags),
    /// Checkpointed partial sums at 2π/3 against the telescoped lower bound.
    Diverge(Flags),
    /// Class overview for steps 1..=r: membership, weak monotonicity and side condition.
    Report(Flags),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Thm2,
    Thm3,
    Remark3,
    Remark4,
    Powerlog,
    Random,
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        <Self as ValueEnum>::from_str(s, false)
    }
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// Coefficient family.
    #[arg(long, value_enum)]
    family: Option<FamilyKind>,
    /// Step r (upper step for lemma1 and report).
    #[arg(long)]
    r: Option<u64>,
    /// Period r1 of the thm3 family.
    #[arg(long)]
    r1: Option<u64>,
    /// Period r2 of the thm2 family.
    #[arg(long)]
    r2: Option<u64>,
    /// Period of the remark4 family.
    #[arg(long)]
    period: Option<u64>,
    /// Power exponent of the powerlog family.
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Log exponent of the powerlog family.
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    /// Support length of the random family.
    #[arg(long)]
    length: Option<u64>,
    /// Amplitude of the random family.
    #[arg(long, allow_negative_numbers = true)]
    amplitude: Option<f64>,
    /// Window constant c > 1.
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Largest dyadic window start.
    #[arg(long = "m-max")]
    m_max: Option<u64>,
    /// Smallest dyadic n (converge).
    #[arg(long = "n-min")]
    n_min: Option<u64>,
    /// Largest n (meaning depends on the command).
    #[arg(long = "n-max")]
    n_max: Option<u64>,
    /// Number of Chebyshev evaluation points.
    #[arg(long = "grid-size")]
    grid_size: Option<usize>,
    /// Truncation index of the remainders.
    #[arg(long = "N-max")]
    big_n_max: Option<u64>,
    /// Truncation index of the suprema.
    #[arg(long)]
    cap: Option<u64>,
    /// Random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random series (lemma1).
    #[arg(long)]
    trials: Option<u64>,
    /// Largest checkpoint K, a power of ten (diverge).
    #[arg(long)]
    k: Option<u64>,
    /// Bounded verdict requires slope <= this.
    #[arg(long = "slope-hi", allow_negative_numbers = true)]
    slope_hi: Option<f64>,
    /// Growing verdict requires slope >= this.
    #[arg(long = "slope-lo", allow_negative_numbers = true)]
    slope_lo: Option<f64>,
    /// Bounded verdict requires max ratio <= this.
    #[arg(long = "ratio-cap")]
    ratio_cap: Option<f64>,
    /// Minimum |sin(rx/2)| for the Abel identity.
    #[arg(long = "exclusion-tol")]
    exclusion_tol: Option<f64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// key=value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Exit with status 2 when a numerical guard fires.
    #[arg(long)]
    strict: bool,
}

/// Keys accepted in configuration files.
pub const CONFIG_KEYS: &[&str] = &[
    "family",
    "r",
    "r1",
    "r2",
    "period",
    "p",
    "q",
    "length",
    "amplitude",
    "c",
    "m-max",
    "n-min",
    "n-max",
    "grid-size",
    "N-max",
    "cap",
    "seed",
    "trials",
    "k",
    "slope-hi",
    "slope-lo",
    "ratio-cap",
    "exclusion-tol",
    "out",
    "format",
    "strict",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Defect,
    Embed,
    Lemma1,
    Converge,
    Diverge,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Defect => "defect",
            Command::Embed => "embed",
            Command::Lemma1 => "lemma1",
            Command::Converge => "converge",
            Command::Diverge => "diverge",
            Command::Report => "report",
        }
    }
}

/// A coefficient family with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Thm2 { r2: u64 },
    Thm3 { r1: u64 },
    Remark3,
    Remark4 { period: u64 },
    PowerLog { p: f64, q: f64 },
    Random { seed: u64, length: u64, amplitude: f64 },
}

impl Family {
    pub fn build(&self) -> gmlab_core::Result<RealSequence> {
        match *self {
            Family::Thm2 { r2 } => sequence::theorem2(r2),
            Family::Thm3 { r1 } => sequence::theorem3(r1),
            Family::Remark3 => Ok(sequence::remark3()),
            Family::Remark4 { period } => sequence::remark4(period),
            Family::PowerLog { p, q } => sequence::power_log(p, q),
            Family::Random {
                seed,
                length,
                amplitude,
            } => sequence::random(seed, length, amplitude),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Thm2 { r2 } => write!(f, "thm2(r2={r2})"),
            Family::Thm3 { r1 } => write!(f, "thm3(r1={r1})"),
            Family::Remark3 => write!(f, "remark3"),
            Family::Remark4 { period } => write!(f, "remark4(period={period})"),
            Family::PowerLog { p, q } => write!(f, "powerlog(p={p}, q={q})"),
            Family::Random {
                seed,
                length,
                amplitude,
            } => {
                write!(f, "random(seed={seed}, length={length}, amplitude={amplitude})")
            }
        }
    }
}

/// Fully resolved settings for one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Family,
    pub r: u64,
    pub c: f64,
    pub m_max: u64,
    pub n_min: u64,
    pub n_max: u64,
    pub grid_size: usize,
    pub big_n_max: u64,
    pub cap: u64,
    pub seed: u64,
    pub trials: u64,
    pub k: u64,
    pub thresholds: Thresholds,
    pub exclusion_tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub strict: bool,
}

/// Reads a `key=value` file: blank lines and lines starting with `#` are
/// skipped, unknown and repeated keys are rejected.
pub fn parse_config_file(text: &str, origin: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let at = || format!("{}:{}", origin.display(), i + 1);
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}: expected key=value, got {line:?}", at())))?;
        let key = key.trim();
        if !CONFIG_KEYS.contains(&key) {
            return Err(CliError::Usage(format!("{}: unknown key {key:?}", at())));
        }
        if map.insert(key.to_owned(), value.trim().to_owned()).is_some() {
            return Err(CliError::Usage(format!("{}: key {key:?} given twice", at())));
        }
    }
    Ok(map)
}

struct Layers<'a> {
    file: &'a BTreeMap<String, String>,
}

impl Layers<'_> {
    /// Flag value, else file value, else `None`.
    fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| CliError::Usage(format!("config key {key}: invalid value {v:?}: {e}"))),
        }
    }

    fn or<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: fmt::Display,
    {
        Ok(self.get(flag, key)?.unwrap_or(default))
    }
}

/// Parses the process arguments (including the program name) into a
/// [`RunConfig`], reading the `--config` file if one is named.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(CliError::Clap)?;
    let (command, flags) = match cli.command {
        CommandArgs::Defect(f) => (Command::Defect, f),
        CommandArgs::Embed(f) => (Command::Embed, f),
        CommandArgs::Lemma1(f) => (Command::Lemma1, f),
        CommandArgs::Converge(f) => (Command::Converge, f),
        CommandArgs::Diverge(f) => (Command::Diverge, f),
        CommandArgs::Report(f) => (Command::Report, f),
    };
    let file = match &flags.config {
        None => BTreeMap::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.clone(),
                source: e,
            })?;
            parse_config_file(&text, path)?
        }
    };
    resolve(command, flags, &file)
}

fn resolve(command: Command, f: Flags, file: &BTreeMap<String, String>) -> Result<RunConfig, CliError> {
    let l = Layers { file };
    let usage = |msg: String| Err(CliError::Usage(msg));

    if let Some(c) = l.get(f.c, "c")? {
        if !(c > 1.0) {
            return usage(format!("c must exceed 1, got {c}"));
        }
    }

    let default_family = match command {
        Command::Diverge => Some(FamilyKind::Remark3),
        _ => None,
    };
    let kind = l.get(f.family, "family")?.or(default_family);
    let kind = match (command, kind) {
        (Command::Lemma1, Some(_)) => {
            return usage("lemma1 draws its own random series; --family does not apply".into());
        }
        (Command::Lemma1, None) => FamilyKind::Random,
        (_, Some(k)) => k,
        (cmd, None) => return usage(format!("{} needs --family", cmd.name())),
    };

    // family parameters may only accompany their own family
    let owners: [(&str, bool, FamilyKind); 7] = [
        ("r1", l.get(f.r1, "r1")?.is_some(), FamilyKind::Thm3),
        ("r2", l.get(f.r2, "r2")?.is_some(), FamilyKind::Thm2),
        ("period", l.get(f.period, "period")?.is_some(), FamilyKind::Remark4),
        ("p", l.get(f.p, "p")?.is_some(), FamilyKind::Powerlog),
        ("q", l.get(f.q, "q")?.is_some(), FamilyKind::Powerlog),
        ("length", l.get(f.length, "length")?.is_some(), FamilyKind::Random),
        (
            "amplitude",
            l.get(f.amplitude, "amplitude")?.is_some(),
            FamilyKind::Random,
        ),
    ];
    for (key, given, owner) in owners {
        if given && (owner != kind || command == Command::Lemma1) {
            return usage(format!(
                "--{key} contradicts the selected family {}",
                kind.to_possible_value().expect("named").get_name()
            ));
        }
    }

    let seed = l.or(f.seed, "seed", 42)?;
    let family = match kind {
        FamilyKind::Thm2 => Family::Thm2 {
            r2: l.or(f.r2, "r2", 2)?,
        },
        FamilyKind::Thm3 => Family::Thm3 {
            r1: l.or(f.r1, "r1", 2)?,
        },
        FamilyKind::Remark3 => Family::Remark3,
        FamilyKind::Remark4 => Family::Remark4 {
            period: l.or(f.period, "period", 3)?,
        },
        FamilyKind::Powerlog => Family::PowerLog {
            p: l.or(f.p, "p", 1.0)?,
            q: l.or(f.q, "q", 1.0)?,
        },
        FamilyKind::Random => Family::Random {
            seed,
            length: l.or(f.length, "length", 1024)?,
            amplitude: l.or(f.amplitude, "amplitude", 1.0)?,
        },
    };

    let (r_default, n_max_default) = match command {
        Command::Defect => (1, 1 << 13),
        Command::Embed => (2, 1 << 13),
        Command::Lemma1 => (8, 64),
        Command::Converge => (2, 1 << 10),
        Command::Diverge => (3, 0),
        Command::Report => (4, 10_000),
    };
    let t = Thresholds::default();
    let strict_file: bool = l.or(None, "strict", false)?;
    let cfg = RunConfig {
        command,
        family,
        r: l.or(f.r, "r", r_default)?,
        c: l.or(f.c, "c", 2.0)?,
        m_max: l.or(f.m_max, "m-max", 1 << 13)?,
        n_min: l.or(f.n_min, "n-min", 16)?,
        n_max: l.or(f.n_max, "n-max", n_max_default)?,
        grid_size: l.or(f.grid_size, "grid-size", gmlab_core::series::DEFAULT_GRID_SIZE)?,
        big_n_max: l.or(f.big_n_max, "N-max", 1 << 16)?,
        cap: l.or(f.cap, "cap", 1 << 20)?,
        seed,
        trials: l.or(f.trials, "trials", 200)?,
        k: l.or(f.k, "k", 1_000_000)?,
        thresholds: Thresholds {
            slope_hi: l.or(f.slope_hi, "slope-hi", t.slope_hi)?,
            slope_lo: l.or(f.slope_lo, "slope-lo", t.slope_lo)?,
            ratio_cap: l.or(f.ratio_cap, "ratio-cap", t.ratio_cap)?,
        },
        exclusion_tol: l.or(
            f.exclusion_tol,
            "exclusion-tol",
            if command == Command::Lemma1 {
                1e-3
            } else {
                gmlab_core::series::DEFAULT_EXCLUSION_TOL
            },
        )?,
        out: l.get(f.out, "out")?,
        format: l.or(f.format, "format", Format::Csv)?,
        strict: f.strict || strict_file,
    };
    validate(&cfg)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let fail = |msg: String| Err(CliError::Usage(msg));
    if !(cfg.c > 1.0) {
        return fail(format!("c must exceed 1, got {}", cfg.c));
    }
    if cfg.r == 0 {
        return fail("r must be at least 1".into());
    }
    if let Err(e) = cfg.thresholds.validate() {
        return fail(e.to_string());
    }
    match cfg.command {
        Command::Defect if cfg.m_max == 0 => fail("m-max must be at least 1".into()),
        Command::Embed | Command::Lemma1 if cfg.n_max == 0 => fail("n-max must be at least 1".into()),
        Command::Lemma1 if cfg.trials == 0 => fail("trials must be at least 1".into()),
        Command::Lemma1 if !(cfg.exclusion_tol > 0.0 && cfg.exclusion_tol < 0.5) => {
            fail(format!("exclusion-tol must lie in (0, 0.5), got {}", cfg.exclusion_tol))
        }
        Command::Converge => {
            if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
                return fail(format!("need 1 <= n-min <= n-max, got {} and {}", cfg.n_min, cfg.n_max));
            }
            if cfg.big_n_max < 2 * cfg.n_max {
                return fail(format!("N-max must be at least 2·n-max = {}", 2 * cfg.n_max));
            }
            if cfg.cap < cfg.big_n_max {
                return fail(format!("cap must be at least N-max = {}", cfg.big_n_max));
            }
            if cfg.grid_size == 0 {
                return fail("grid-size must be at least 1".into());
            }
            Ok(())
        }
        Command::Diverge => {
            let decades = decades_of(cfg.k);
            match decades {
                Some(d) if d >= 2 => Ok(()),
                _ => fail(format!("k must be a power of ten, at least 100, got {}", cfg.k)),
            }
        }
        Command::Report if cfg.n_max <= cfg.r => fail(format!("n-max must exceed r = {}", cfg.r)),
        _ => Ok(()),
    }
}

/// `j` with `10^j = k`.
pub fn decades_of(k: u64) -> Option<u32> {
    (1..=19).find(|&j| 10u64.checked_pow(j) == Some(k))
}
