//! `mrcodes` command-line front end.
//!
//! Exit status: 0 on success, 1 when a verification fails or an erasure
//! pattern is unrecoverable, 2 on usage and parameter errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::completion::{self, CompletionError};
use crate::convmdp::{self, ConvCode};
use crate::descriptor::{format_elements, parse_elements, Code, Descriptor};
use crate::gf::{prime_power, GaloisField};
use crate::mrlrc::{self, LocalityProfile, MrLrcCode, MrLrcError};

#[derive(Parser, Debug)]
#[command(name = "mrcodes", version, about = "Construct and verify MR-LRCs and MDP convolutional codes")]
pub struct Cli {
    /// Worker threads for verification sweeps.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a code and write its descriptor.
    Construct(ConstructArgs),
    /// Check the non-trivial minors of a stored code.
    Verify(VerifyArgs),
    /// Encode a message with a stored MR-LRC.
    Encode(EncodeArgs),
    /// Recover a message from a received word; erasures are written `?`.
    Decode(DecodeArgs),
    /// Change one message symbol of an MR-LRC codeword in place.
    Update(UpdateArgs),
    /// Column distance of a stored convolutional code by exhaustion.
    Coldist(ColdistArgs),
    /// Smallest extension degree whose MR-LRC instance passes verification.
    Search(SearchArgs),
    /// Maximum of the pairwise-distance quadratic form over compositions.
    OracleQh(QhArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    #[value(name = "mr-lrc")]
    MrLrc,
    Conv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    /// Cauchy `G_0`, diagonal memory block.
    Diag,
    /// Vandermonde `G_0`, Toeplitz block, degree 2.
    Vdm2,
    /// Vandermonde `G_0`, Toeplitz block, degree 3.
    Vdm3,
}

#[derive(Args, Debug)]
struct ProfileArgs {
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    ns: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    ks: Vec<usize>,
    #[arg(long)]
    h: Option<usize>,
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[command(flatten)]
    profile: ProfileArgs,
    /// Base field order, a prime power.
    #[arg(long)]
    q: u64,
    /// Extension degree; defaults to the guaranteed bound.
    #[arg(long)]
    d: Option<u32>,
    /// Allow a degree below the guaranteed bound.
    #[arg(long)]
    override_degree: bool,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Also require the construction shape (MR-LRC) or declared degree (conv).
    #[arg(long)]
    strict: bool,
    /// Window to sweep instead of the one implied by the degree (conv).
    #[arg(long)]
    window: Option<usize>,
    /// Also sweep the parity-check window of the dual code (conv).
    #[arg(long)]
    dual: bool,
}

#[derive(Args, Debug)]
struct EncodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Comma-separated element encodings.
    #[arg(long)]
    message: String,
}

#[derive(Args, Debug)]
struct DecodeArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    received: String,
}

#[derive(Args, Debug)]
struct UpdateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    codeword: String,
    #[arg(long)]
    group: usize,
    #[arg(long)]
    index: usize,
    #[arg(long)]
    value: u64,
}

#[derive(Args, Debug)]
struct ColdistArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1)]
    j: usize,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[command(flatten)]
    profile: ProfileArgs,
    #[arg(long)]
    q: u64,
    #[arg(long, default_value_t = 1)]
    d_lo: u32,
    /// Defaults to the guaranteed bound.
    #[arg(long)]
    d_hi: Option<u32>,
}

#[derive(Args, Debug)]
struct QhArgs {
    #[arg(long)]
    ell: usize,
    #[arg(long)]
    h: u64,
}

enum Failure {
    Usage(String),
    Negative(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    2
                }
            };
            return status;
        }
    };
    let mut buf = Vec::new();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command, &mut buf)),
            Err(e) => Err(Failure::from(e)),
        },
        None => dispatch(cli.command, &mut buf),
    };
    let _ = out.write_all(&buf);
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(Failure::Negative(msg)) => {
            let _ = writeln!(err, "{msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Outcome {
    match command {
        Command::Construct(a) => construct(a, out),
        Command::Verify(a) => verify(a, out),
        Command::Encode(a) => encode(a, out),
        Command::Decode(a) => decode(a, out),
        Command::Update(a) => update(a, out),
        Command::Coldist(a) => coldist(a, out),
        Command::Search(a) => search(a, out),
        Command::OracleQh(a) => oracle_qh(a, out),
    }
}

fn base_field(q: u64) -> Result<GaloisField, Failure> {
    let (p, a) = prime_power(q).ok_or_else(|| Failure::Usage(format!("{q} is not a prime power")))?;
    Ok(GaloisField::new(p, a, None)?)
}

fn profile(a: &ProfileArgs) -> Result<LocalityProfile, Failure> {
    let ell = a.ell.unwrap_or(a.ns.len());
    let h = a.h.ok_or_else(|| Failure::Usage("--h is required".into()))?;
    Ok(LocalityProfile::new(ell, h, a.ns.clone(), a.ks.clone())?)
}

fn require(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn construct(a: ConstructArgs, out: &mut dyn Write) -> Outcome {
    let q = base_field(a.q)?;
    let doc = match a.kind {
        Kind::MrLrc => {
            let p = profile(&a.profile)?;
            let d = a.d.unwrap_or_else(|| mrlrc::field_degree_bound(&p));
            Descriptor::from_mrlrc(&mrlrc::build_theorem3(&p, &q, d, a.override_degree)?)
        }
        Kind::Conv => {
            let family = a.family.ok_or_else(|| Failure::Usage("--family is required for conv".into()))?;
            let n = require(a.n, "n")?;
            let code = match family {
                Family::Diag => convmdp::build_diag(n, require(a.k, "k")?, &q)?,
                Family::Vdm2 => convmdp::build_vdm2(n, &q)?,
                Family::Vdm3 => convmdp::build_vdm3(n, &q)?,
            };
            Descriptor::from_conv(&code)
        }
    };
    match a.out {
        Some(path) => {
            doc.write(&path)?;
            writeln!(out, "wrote {} descriptor to {}", doc.kind(), path.display())?;
        }
        None => writeln!(out, "{}", doc.to_json())?,
    }
    Ok(true)
}

fn load(path: &Path, strict: bool) -> Result<Code, Failure> {
    Ok(Descriptor::read(path, strict)?.1)
}

fn load_mrlrc(path: &Path) -> Result<MrLrcCode, Failure> {
    match load(path, false)? {
        Code::MrLrc(c) => Ok(c),
        Code::Conv(_) => Err(Failure::Usage("this command needs an mr-lrc descriptor".into())),
    }
}

fn load_conv(path: &Path) -> Result<ConvCode, Failure> {
    match load(path, false)? {
        Code::Conv(c) => Ok(c),
        Code::MrLrc(_) => Err(Failure::Usage("this command needs a conv descriptor".into())),
    }
}

fn print_report(out: &mut dyn Write, label: Option<&str>, report: &completion::VerificationReport) -> std::io::Result<()> {
    match label {
        Some(l) => writeln!(out, "{l}: {}", report.summary())?,
        None => writeln!(out, "{}", report.summary())?,
    }
    writeln!(out, "{}", serde_json::to_string(report).expect("report serializes"))
}

fn verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    match load(&a.input, a.strict)? {
        Code::MrLrc(code) => {
            let v = mrlrc::verify_mr(&code)?;
            print_report(out, None, &v.global)?;
            let bad = v.failed_groups();
            if !bad.is_empty() {
                writeln!(out, "local generators not MDS: {bad:?}")?;
            }
            Ok(v.passed())
        }
        Code::Conv(code) => {
            let report = match a.window {
                Some(j) => convmdp::verify_window(&code, j)?,
                None => convmdp::is_mdp(&code)?,
            };
            print_report(out, None, &report)?;
            let mut ok = report.passed;
            if a.dual {
                let dual = convmdp::dual_mdp_check(&code)?;
                print_report(out, Some("dual"), &dual)?;
                ok &= dual.passed;
            }
            Ok(ok)
        }
    }
}

fn encode(a: EncodeArgs, out: &mut dyn Write) -> Outcome {
    let code = load_mrlrc(&a.input)?;
    let msg = parse_elements(code.ext_field(), &a.message)?;
    writeln!(out, "{}", format_elements(&mrlrc::encode(&code, &msg)?))?;
    Ok(true)
}

fn decode(a: DecodeArgs, out: &mut dyn Write) -> Outcome {
    let code = load_mrlrc(&a.input)?;
    let f = code.ext_field();
    let received = a
        .received
        .split(',')
        .map(str::trim)
        .map(|tok| match tok {
            "?" => Ok(None),
            _ => parse_elements(f, tok).map(|v| v.first().copied()),
        })
        .collect::<Result<Vec<_>, _>>()?;
    match mrlrc::decode_erasures(&code, &received) {
        Ok(d) => {
            writeln!(out, "message: {}", format_elements(&d.message))?;
            writeln!(out, "codeword: {}", format_elements(&d.codeword))?;
            writeln!(out, "locally repaired groups: {:?}", d.locally_repaired)?;
            Ok(true)
        }
        Err(e @ (MrLrcError::Unrecoverable { .. } | MrLrcError::InconsistentCodeword)) => {
            Err(Failure::Negative(e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

fn update(a: UpdateArgs, out: &mut dyn Write) -> Outcome {
    let code = load_mrlrc(&a.input)?;
    let f = code.ext_field();
    let cw = parse_elements(f, &a.codeword)?;
    let value = f.elem(a.value)?;
    let u = mrlrc::update_symbol(&code, &cw, a.group, a.index, value)?;
    writeln!(out, "codeword: {}", format_elements(&u.codeword))?;
    writeln!(out, "touched: {}", u.touched.iter().map(usize::to_string).collect::<Vec<_>>().join(","))?;
    Ok(true)
}

fn coldist(a: ColdistArgs, out: &mut dyn Write) -> Outcome {
    let code = load_conv(&a.input)?;
    let d = convmdp::column_distance_bruteforce(&code, a.j)?;
    let bound = (code.n() - code.k()) * (a.j + 1) + 1;
    writeln!(out, "column distance {} = {d} (bound {bound})", a.j)?;
    Ok(true)
}

fn search(a: SearchArgs, out: &mut dyn Write) -> Outcome {
    let q = base_field(a.q)?;
    let p = profile(&a.profile)?;
    let d_hi = a.d_hi.unwrap_or_else(|| mrlrc::field_degree_bound(&p));
    let result = completion::minimal_degree_search(
        |d| -> Result<_, MrLrcError> {
            let code = mrlrc::build_theorem3(&p, &q, d, true)?;
            Ok((code.generator().clone(), mrlrc::admissible_column_sets(&p)))
        },
        a.d_lo,
        d_hi,
    )
    .map_err(|e| match e {
        MrLrcError::Completion(CompletionError::EmptyRange { lo, hi }) => {
            Failure::Usage(format!("empty degree range {lo}..={hi}"))
        }
        other => other.into(),
    })?;
    for (d, report) in &result.reports {
        writeln!(out, "d = {d}: {}", report.summary())?;
    }
    match result.smallest_passing {
        Some(d) => {
            writeln!(out, "smallest passing degree: {d}")?;
            Ok(true)
        }
        None => {
            writeln!(out, "no passing degree in {}..={d_hi}", a.d_lo)?;
            Ok(false)
        }
    }
}

fn oracle_qh(a: QhArgs, out: &mut dyn Write) -> Outcome {
    if a.ell == 0 {
        return Err(Failure::Usage("--ell must be at least 1".into()));
    }
    let max = mrlrc::qh_max(a.ell, a.h);
    let closed = (a.ell as u64 - 1) * (a.h / 2) * a.h.div_ceil(2);
    writeln!(out, "max = {max}, (ell-1)*floor(h/2)*ceil(h/2) = {closed}")?;
    Ok(max == closed)
}
