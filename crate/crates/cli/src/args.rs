use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::emit::OutputFormat;

#[derive(Debug, Parser)]
#[command(
    name = "zetaline",
    version,
    about = "Values and zeros of the Riemann zeta function on the critical line",
    propagate_version = true
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Directory for cached zero tables [env: ZETALINE_CACHE_DIR].
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Worker threads (default: available parallelism).
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Z(t), theta(t) and zeta(1/2+it) with an error bound.
    ///
    /// Z(t) = exp(i theta(t)) zeta(1/2+it) is real, and |Z(t)| = |zeta(1/2+it)|.
    /// Evaluates one height with --T, or a uniform grid with --from/--to/--step.
    Eval(EvalArgs),
    /// Zero ordinates in (from, to], checked against the Riemann-von Mangoldt count.
    ///
    /// The table is complete when |found - ((T/2pi) log(T/2pi) - T/2pi + 7/8)| stays within 3.
    Zeros(ZerosArgs),
    /// Measure of {t <= T : |zeta(1/2+it)| <= c}.
    ///
    /// Asymptotically half of (0, T] for every fixed c > 0.
    Measure(MeasureArgs),
    /// Measure of {t <= T : c1 < |zeta(1/2+it)| <= c2}.
    ///
    /// Also reports the Gaussian prediction T * integral over (log c1, log c2) of the
    /// normal density with variance (1/2) log log T.
    Band(BandArgs),
    /// Empirical CDF of log|zeta(1/2+it)| / sqrt((1/2) log log T) against Phi.
    Distribution(DistributionArgs),
    /// Moments (1/T) int |zeta|^(2k / sqrt(2 log log T)) against exp(k^2/2).
    ///
    /// With --lambda, reports int_0^T |zeta|^lambda dt / T instead, for
    /// 0 <= lambda <= (psi(T) log log T)^(-1/2), psi(T) = log log T / (9 (log log log T)^2).
    Moments(MomentsArgs),
    /// int_T^{T+H} (S(t+h) - S(t))^(2k) dt against H (2k)! / ((2 pi^2)^k k!) log^k(2 + h log T).
    Sdiff(SdiffArgs),
    /// Gap power sums sum (gamma_{n+1} - gamma_n)^alpha and large/small gap counts.
    Gaps(GapsArgs),
    /// Checks sum (gamma_{n+1} - gamma_n)^2 <= 9 * 2pi T / log(T/2pi).
    Fujii(HeightArgs),
    /// Splits (gamma_1, T] by whether |zeta(1/2+it)| is at most the local zero gap.
    Abmeasure(AbMeasureArgs),
    /// Counts zero intervals whose maximum of |zeta| is at most / above the gap length.
    ///
    /// Also reports the sum of gaps below (log log T)^6 / log T whose maximum exceeds the gap.
    Abd(HeightArgs),
    /// Pair counts of zero differences against int_0^alpha (1 - (sin pi t / pi t)^2) dt.
    ///
    /// Differences are measured in units of 2pi / log(T/2pi) and counts are divided by N(T).
    Paircorr(PaircorrArgs),
    /// Runs the acceptance checks at a height tier and prints one line per criterion.
    Verify(VerifyArgs),
    /// Loads a zero table (plain text, one ordinate per line, or a .ztbl cache file).
    Ingest(IngestArgs),
    /// Compares a zero table file against freshly computed ordinates.
    Crosscheck(CrosscheckArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct EvalArgs {
    /// Single height.
    #[arg(long = "T", value_name = "T", conflicts_with_all = ["from", "to"])]
    pub t: Option<f64>,
    #[arg(long, requires = "to")]
    pub from: Option<f64>,
    #[arg(long, requires = "from")]
    pub to: Option<f64>,
    /// Grid spacing for --from/--to.
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ZerosArgs {
    #[arg(long, default_value_t = 0.0)]
    pub from: f64,
    #[arg(long)]
    pub to: f64,
    /// Initial scan grid spacing (default: a quarter of the mean gap at --to).
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct HeightArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MeasureArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    #[arg(long)]
    pub c: f64,
    /// Sampling step (default: sixteen samples per mean zero gap).
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct BandArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    #[arg(long)]
    pub c1: f64,
    #[arg(long)]
    pub c2: f64,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct DistributionArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    #[arg(long, default_value_t = crate::thresholds::SAMPLE_STEP)]
    pub step: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Lambda {
    Max,
    Value(f64),
}

impl FromStr for Lambda {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "max" {
            return Ok(Lambda::Max);
        }
        s.parse()
            .map(Lambda::Value)
            .map_err(|_| format!("expected a number or 'max', got '{s}'"))
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MomentsArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    /// Comma-separated moment orders.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub k: Vec<f64>,
    /// Exponent for the small-exponent integral, or 'max'.
    #[arg(long)]
    pub lambda: Option<Lambda>,
    #[arg(long, default_value_t = crate::thresholds::SAMPLE_STEP)]
    pub step: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SdiffArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    /// Window length, T^0.6 <= H <= T.
    #[arg(long = "H", value_name = "H")]
    pub big_h: f64,
    /// Shift, 0 < h < 1.
    #[arg(long = "h", value_name = "h")]
    pub h: f64,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GapsArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    /// Comma-separated exponents (each >= 1).
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub alpha: Vec<f64>,
    /// Comma-separated gap thresholds in units of 1/log T.
    #[arg(long, value_delimiter = ',')]
    pub lambda: Vec<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AbMeasureArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PaircorrArgs {
    #[arg(long = "T", value_name = "T")]
    pub t: f64,
    /// Comma-separated, strictly increasing window sizes (default 0.25, 0.3, ..., 2).
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Tier {
    /// Heights up to 1e3.
    Small,
    /// Heights up to 1e4.
    Medium,
    /// Heights up to 1e5.
    Large,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Tier::Small)]
    pub tier: Tier,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IngestArgs {
    pub path: PathBuf,
    /// Also write the table in the binary cache format.
    #[arg(long, value_name = "FILE")]
    pub save: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CrosscheckArgs {
    pub path: PathBuf,
    #[arg(long, default_value_t = zetaline::io::CROSS_CHECK_TOL)]
    pub tol: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn negative_heights_parse() {
        let cli = Cli::try_parse_from(["zetaline", "measure", "--T", "-5", "--c", "1"]).unwrap();
        match cli.command {
            Command::Measure(m) => assert_eq!(m.t, -5.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn lambda_accepts_max() {
        assert_eq!("max".parse::<Lambda>().unwrap(), Lambda::Max);
        assert_eq!("0.5".parse::<Lambda>().unwrap(), Lambda::Value(0.5));
        assert!("x".parse::<Lambda>().is_err());
    }

    #[test]
    fn lists_split_on_commas() {
        let cli = Cli::try_parse_from([
            "zetaline", "gaps", "--T", "1000", "--alpha", "1,2,3", "--format", "json",
        ])
        .unwrap();
        match cli.command {
            Command::Gaps(g) => assert_eq!(g.alpha, vec![1.0, 2.0, 3.0]),
            other => panic!("{other:?}"),
        }
        assert_eq!(cli.format, OutputFormat::Json);
    }
}
