//! The `pmwom` command line.

use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use num_traits::One;
use serde_json::{json, Value};

use crate::bounds::{self, check_half_optimal, BoundReport, KNOWN_CODES};
use crate::error::{ErrorKind, WomError};
use crate::planner::{plan, plan_uniform_series, CodeParams};
use crate::wom_device::Device;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;
pub const EXIT_CORRUPT: i32 = 5;

/// Published wit counts for configurations that appear in the literature,
/// `(m, t, bits per write, n)`.
pub const PUBLISHED_WITS: [(u32, usize, u32, u64); 10] = [
    (2, 2, 56, 98),
    (2, 3, 56, 124),
    (2, 4, 56, 150),
    (2, 5, 56, 172),
    (2, 6, 56, 196),
    (2, 7, 56, 216),
    (2, 8, 56, 238),
    (2, 9, 56, 258),
    (2, 10, 56, 278),
    (3, 2, 56, 96),
];

#[derive(Debug, Parser)]
#[command(
    name = "pmwom",
    version,
    about = "Position modulation codes for write-once memories"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plan a code and report its parameters; optionally start a session file.
    Plan {
        #[command(flatten)]
        code: CodeArgs,
        /// Write a fresh session file for the planned code.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Overwrite an existing session file.
        #[arg(long)]
        force: bool,
    },
    /// Write a message as the next generation of a session.
    Write {
        #[arg(long)]
        file: PathBuf,
        /// Decimal, or hexadecimal with a 0x prefix.
        message: String,
    },
    /// Decode the generation and message stored in a session.
    Read {
        #[arg(long)]
        file: PathBuf,
    },
    /// Show symbol and wit usage of a session.
    EraseStatus {
        #[arg(long)]
        file: PathBuf,
    },
    /// Lower bound on wits for the given cardinalities, against the planned code.
    Bound {
        #[command(flatten)]
        code: CodeArgs,
    },
    /// Planned codes for 2..=10 writes of 56 bits beside the best known codes.
    Table,
    /// Rate curves of position modulation (m = 2) and three other code families.
    Rates {
        /// Bits per write of the position modulation code.
        #[arg(long, default_value_t = 32)]
        bits: u32,
        /// Largest number of writes.
        #[arg(long, default_value_t = 100)]
        tmax: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CodeArgs {
    /// Wits per symbol.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Number of writes (required with --bits).
    #[arg(long)]
    pub writes: Option<usize>,
    /// Every write stores this many bits (cardinality 2^bits).
    #[arg(long, conflicts_with = "v")]
    pub bits: Option<u32>,
    /// Comma-separated cardinality of each write.
    #[arg(long, value_delimiter = ',')]
    pub v: Option<Vec<String>>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Wom(#[from] WomError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io { .. } => EXIT_IO,
            CliError::Wom(e) => match e.kind() {
                ErrorKind::Domain => EXIT_DOMAIN,
                ErrorKind::Exhausted => EXIT_EXHAUSTED,
                ErrorKind::Corrupt => EXIT_CORRUPT,
            },
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

/// Parses a non-negative integer in decimal or `0x` hexadecimal.
pub fn parse_big(s: &str) -> Option<BigUint> {
    let s = s.trim().replace('_', "");
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => BigUint::parse_bytes(hex.as_bytes(), 16),
        None => BigUint::parse_bytes(s.as_bytes(), 10),
    }
}

impl CodeArgs {
    pub fn cardinalities(&self) -> Result<Vec<BigUint>, CliError> {
        match (&self.v, self.bits) {
            (Some(list), None) => {
                let v = list
                    .iter()
                    .map(|s| {
                        parse_big(s).ok_or_else(|| {
                            CliError::Usage(format!("cannot parse cardinality {s:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if let Some(t) = self.writes {
                    if t != v.len() {
                        return Err(CliError::Usage(format!(
                            "--writes {t} disagrees with {} values in --v",
                            v.len()
                        )));
                    }
                }
                Ok(v)
            }
            (None, Some(bits)) => {
                let t = self
                    .writes
                    .ok_or_else(|| CliError::Usage("--bits needs --writes".into()))?;
                if bits == 0 {
                    return Err(CliError::Usage("--bits must be at least 1".into()));
                }
                Ok(vec![BigUint::one() << bits; t])
            }
            _ => Err(CliError::Usage("give either --bits or --v".into())),
        }
    }
}

/// `2^k` for powers of two, decimal otherwise.
pub fn show_cardinality(v: &BigUint) -> String {
    let bits = v.bits();
    if bits > 4 && *v == BigUint::one() << (bits - 1) {
        format!("2^{}", bits - 1)
    } else {
        v.to_string()
    }
}

/// `<v>^t/n` when all cardinalities agree, `<v1,...,vt>/n` otherwise.
pub fn code_label(p: &CodeParams) -> String {
    let first = &p.v[0];
    if p.writes() > 1 && p.v.iter().all(|x| x == first) {
        format!("<{}>^{}/{}", show_cardinality(first), p.writes(), p.wits())
    } else {
        let list: Vec<String> = p.v.iter().map(show_cardinality).collect();
        format!("<{}>/{}", list.join(","), p.wits())
    }
}

/// Published wit count for this configuration, if there is one.
pub fn published_wits(p: &CodeParams) -> Option<u64> {
    let first = &p.v[0];
    if !p.v.iter().all(|x| x == first) {
        return None;
    }
    PUBLISHED_WITS
        .iter()
        .find(|&&(m, t, bits, _)| m == p.m && t == p.writes() && *first == BigUint::one() << bits)
        .map(|&(_, _, _, n)| n)
}

/// Everything `plan` reports about a code.
#[derive(Debug, Clone)]
pub struct PlanReport {
    pub params: CodeParams,
    pub capacities: Vec<BigUint>,
    pub bound: BoundReport,
    pub published_wits: Option<u64>,
}

impl PlanReport {
    pub fn new(params: CodeParams) -> Self {
        let capacities = (1..=params.writes())
            .map(|g| params.generation_capacity(g))
            .collect();
        let bound = check_half_optimal(&params);
        let published_wits = published_wits(&params);
        PlanReport {
            params,
            capacities,
            bound,
            published_wits,
        }
    }

    /// Text describing how the planned size compares with the published one.
    pub fn discrepancy(&self) -> Option<String> {
        let published = self.published_wits?;
        let n = self.params.wits();
        (published != n).then(|| {
            format!(
                "planned size {n} wits differs from the published {published} wits ({:+})",
                n as i64 - published as i64
            )
        })
    }

    pub fn to_json(&self) -> Value {
        let p = &self.params;
        json!({
            "code": code_label(p),
            "m": p.m,
            "t": p.writes(),
            "v": p.v.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "h": p.h,
            "n": p.wits(),
            "rate": self.bound.rate,
            "capacities": self.capacities.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "z": self.bound.z,
            "half_optimal": self.bound.half_optimal_ok,
            "guaranteed": self.bound.guaranteed,
            "published_n": self.published_wits,
            "discrepancy": self.discrepancy(),
        })
    }

    pub fn write_text(&self, out: &mut dyn Write) -> io::Result<()> {
        let p = &self.params;
        writeln!(out, "code:  {} (m = {})", code_label(p), p.m)?;
        let h: Vec<String> = p.h.iter().map(|x| x.to_string()).collect();
        writeln!(out, "h:     {}", h.join(" "))?;
        writeln!(out, "n:     {} wits", p.wits())?;
        writeln!(
            out,
            "rate:  {:.2} ({:.4}) bits/wit",
            self.bound.rate, self.bound.rate
        )?;
        writeln!(out, "write  window  capacity  cardinality")?;
        for g in 1..=p.writes() {
            writeln!(
                out,
                "{:>5}  {:>6}  {}  {}",
                g,
                p.h[g - 1],
                self.capacities[g - 1],
                show_cardinality(&p.v[g - 1])
            )?;
        }
        write_bound_lines(out, &self.bound)?;
        if let Some(published) = self.published_wits {
            match self.discrepancy() {
                Some(d) => writeln!(out, "note:  {d}")?,
                None => writeln!(out, "note:  matches the published {published} wits")?,
            }
        }
        Ok(())
    }
}

fn write_bound_lines(out: &mut dyn Write, b: &BoundReport) -> io::Result<()> {
    writeln!(
        out,
        "Z_t:   {} (no code with these cardinalities uses fewer wits)",
        b.z
    )?;
    let verdict = match (b.half_optimal_ok, b.guaranteed) {
        (true, true) => "h1 <= Z_t: rate is at least half of optimal",
        (true, false) => "h1 <= Z_t: rate is at least half of optimal (not guaranteed for m != 2)",
        (false, true) => "h1 > Z_t: VIOLATION of the m = 2 guarantee",
        (false, false) => "h1 > Z_t: half-optimality not reached (no guarantee for m != 2)",
    };
    writeln!(out, "half:  {verdict}")
}

fn load_device(path: &Path) -> Result<Device, CliError> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    Ok(Device::parse_state(&text)?)
}

fn emit(out: &mut dyn Write, format: Format, value: Value, text: String) -> io::Result<()> {
    match format {
        Format::Machine => writeln!(out, "{value}"),
        Format::Text => write!(out, "{text}"),
    }
}

/// One row of the comparison table.
#[derive(Debug, Clone)]
pub struct TableRow {
    pub t: usize,
    pub known_code: &'static str,
    pub known_rate: f64,
    pub params: CodeParams,
    pub rate: f64,
}

/// Position modulation codes for 2..=10 writes of 56 bits at `m = 2`, next
/// to the best known codes.
pub fn table_rows() -> Result<Vec<TableRow>, WomError> {
    let plans = plan_uniform_series(2, &(BigUint::one() << 56u32), 10)?;
    Ok(KNOWN_CODES
        .iter()
        .map(|&(t, code, rate)| {
            let p = plans[t as usize - 1].clone();
            TableRow {
                t: t as usize,
                known_code: code,
                known_rate: rate,
                rate: bounds::rate(&p),
                params: p,
            }
        })
        .collect())
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let fmt = cli.format;
    match cli.command {
        Command::Plan { code, file, force } => {
            let params = plan(code.m, &code.cardinalities()?)?;
            let report = PlanReport::new(params.clone());
            if let Some(path) = &file {
                if path.exists() && !force {
                    return Err(CliError::Usage(format!(
                        "{} exists; pass --force to overwrite",
                        path.display()
                    )));
                }
                Device::new(params)?.save(path).map_err(io_err(path))?;
            }
            match fmt {
                Format::Machine => writeln!(out, "{}", report.to_json()),
                Format::Text => {
                    report.write_text(out)?;
                    if let Some(path) = &file {
                        writeln!(out, "session: {}", path.display())?;
                    }
                    Ok(())
                }
            }?;
        }
        Command::Write { file, message } => {
            let msg = parse_big(&message)
                .ok_or_else(|| CliError::Usage(format!("cannot parse message {message:?}")))?;
            let mut dev = load_device(&file)?;
            let generation = dev.write(&msg)?;
            dev.save(&file).map_err(io_err(&file))?;
            emit(
                out,
                fmt,
                json!({"generation": generation, "message": msg.to_string(), "wits": dev.wits().to_string()}),
                format!("wrote generation {generation} message {msg}\n"),
            )?;
        }
        Command::Read { file } => {
            let r = load_device(&file)?.read()?;
            emit(
                out,
                fmt,
                json!({"generation": r.generation, "message": r.message.to_string()}),
                format!("generation {} message {}\n", r.generation, r.message),
            )?;
        }
        Command::EraseStatus { file } => {
            let dev = load_device(&file)?;
            let img = dev.image()?;
            let p = dev.params();
            let zeros = img.zeros();
            let erased = img.erased();
            let written = p.symbols() - zeros - erased;
            let current = if img.is_fresh() {
                0
            } else {
                img.detect_generation()
            };
            let next = img.next_generation().ok();
            let ones = dev.wits().ones();
            let next_text = next.map_or("none (exhausted)".to_string(), |g| g.to_string());
            emit(
                out,
                fmt,
                json!({
                    "generation": current,
                    "next_generation": next,
                    "zero_symbols": zeros,
                    "erased_symbols": erased,
                    "written_symbols": written,
                    "programmed_wits": ones,
                    "wits": p.wits(),
                }),
                format!(
                    "generation:      {current}\nnext generation: {next_text}\nzero symbols:    {zeros}\nerased symbols:  {erased}\nwritten symbols: {written}\nprogrammed wits: {ones}/{}\n",
                    p.wits()
                ),
            )
            ?;
        }
        Command::Bound { code } => {
            let v = code.cardinalities()?;
            let params = plan(code.m, &v)?;
            let b = check_half_optimal(&params);
            let value = json!({
                "z": b.z,
                "h1": b.h1,
                "n": b.n,
                "rate": b.rate,
                "optimal_rate_bound": b.optimal_rate_bound,
                "half_optimal": b.half_optimal_ok,
                "guaranteed": b.guaranteed,
            });
            let mut text = Vec::new();
            writeln!(text, "h1:    {}", b.h1)?;
            writeln!(text, "rate:  {:.2} bits/wit", b.rate)?;
            writeln!(
                text,
                "bound: rate of any code <= {:.2} bits/wit",
                b.optimal_rate_bound
            )?;
            write_bound_lines(&mut text, &b)?;
            emit(out, fmt, value, String::from_utf8_lossy(&text).into_owned())?;
        }
        Command::Table => {
            let rows = table_rows()?;
            let value = Value::Array(
                rows.iter()
                    .map(|r| {
                        json!({
                            "t": r.t,
                            "known_code": r.known_code,
                            "known_rate": r.known_rate,
                            "code": code_label(&r.params),
                            "n": r.params.wits(),
                            "rate": r.rate,
                        })
                    })
                    .collect(),
            );
            let mut text = String::from("t   known code    R     position modulation  R\n");
            for r in &rows {
                text.push_str(&format!(
                    "{:<3} {:<13} {:.2}  {:<20} {:.2}\n",
                    r.t,
                    r.known_code,
                    r.known_rate,
                    code_label(&r.params),
                    r.rate
                ));
            }
            emit(out, fmt, value, text)?;
        }
        Command::Rates { bits, tmax } => {
            if bits == 0 || tmax == 0 {
                return Err(CliError::Usage("--bits and --tmax must be positive".into()));
            }
            let rows = bounds::rate_curves(&(BigUint::one() << bits), tmax)?;
            let cell = |x: Option<f64>| x.map_or(String::new(), |r| format!("{r:.6}"));
            match fmt {
                Format::Machine => {
                    let value = Value::Array(
                        rows.iter()
                            .map(|r| {
                                json!({
                                    "t": r.t,
                                    "position_modulation": r.position_modulation,
                                    "fiat_shamir": r.fiat_shamir,
                                    "rivest_shamir_linear": r.rivest_shamir_linear,
                                    "cohen": r.cohen,
                                })
                            })
                            .collect(),
                    );
                    writeln!(out, "{value}")
                }
                Format::Text => {
                    let header: Vec<&str> = bounds::Scheme::ALL.iter().map(|s| s.key()).collect();
                    writeln!(out, "t,{}", header.join(",")).and_then(|_| {
                        rows.iter().try_for_each(|r| {
                            writeln!(
                                out,
                                "{},{:.6},{:.6},{},{}",
                                r.t,
                                r.position_modulation,
                                r.fiat_shamir,
                                cell(r.rivest_shamir_linear),
                                cell(r.cohen)
                            )
                        })
                    })
                }
            }?;
        }
    }
    Ok(())
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match run(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

impl From<io::Error> for CliError {
    fn from(source: io::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }
    }
}
