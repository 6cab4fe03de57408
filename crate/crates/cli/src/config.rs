//! Run configuration: command-line flags merged over a flat `key = value`
//! file and built-in defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use tcres::resonances::{Branch, C_MIN};
use tcres::{ProblemParams, Regime};

#[derive(Debug, Parser)]
#[command(name = "tcres", version, about = "Resonances of the planar two-center Coulomb problem")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args, Default, Clone)]
pub struct CommonArgs {
    /// Flat `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file, `-` for stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Default, Clone)]
pub struct ChargeArgs {
    /// Z+ = Z1 + Z2.
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<f64>,
    /// Z- = Z2 - Z1, non-negative.
    #[arg(long, allow_hyphen_values = true)]
    pub zm: Option<f64>,
    /// Semiclassical parameter.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Angular eigenvalues mu_0..mu_{count-1} at energy E.
    Angular {
        #[command(flatten)]
        charges: ChargeArgs,
        #[arg(long, allow_hyphen_values = true)]
        e_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        e_im: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
    },
    /// Jost functions at momentum k, with mu given or taken from an angular level.
    Radial {
        #[command(flatten)]
        charges: ChargeArgs,
        #[arg(long, allow_hyphen_values = true)]
        k_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        k_im: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu_re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        mu_im: Option<f64>,
        /// Angular level whose eigenvalue at E = k^2 is used for mu.
        #[arg(long)]
        level: Option<usize>,
    },
    /// Resonance grid over barrier modes n and angular numbers m.
    Resonances {
        #[command(flatten)]
        charges: ChargeArgs,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Sampled bifurcation curves.
    Bifurcation {
        #[command(flatten)]
        charges: ChargeArgs,
        #[arg(long, allow_hyphen_values = true)]
        emin: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        emax: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Preset resonance dataset.
    Figure {
        #[arg(long, value_enum)]
        id: FigureId,
    },
}

#[derive(Debug, Args, Default, Clone)]
pub struct GridArgs {
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    #[arg(long)]
    pub nmin: Option<usize>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub mmin: Option<usize>,
    #[arg(long)]
    pub mmax: Option<usize>,
    /// Start the m range at ceil(C/h); overrides --mmin.
    #[arg(long = "C")]
    pub c: Option<f64>,
    /// Number of m values starting from mmin (or ceil(C/h)).
    #[arg(long)]
    pub mspan: Option<usize>,
    #[arg(long, value_enum)]
    pub branch: Option<BranchArg>,
    /// Also emit anti-resonances.
    #[arg(long)]
    pub keep_anti: bool,
    /// Lower bound on (m+1) h for the high-energy equation.
    #[arg(long)]
    pub c_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    EqualCharges,
    LowLying,
    HighEnergy,
    DirectJost,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::EqualCharges => Regime::EqualCharges,
            RegimeArg::LowLying => Regime::LowLying,
            RegimeArg::HighEnergy => Regime::HighEnergy,
            RegimeArg::DirectJost => Regime::DirectJost,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BranchArg {
    Small,
    Large,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Branch {
        match b {
            BranchArg::Small => Branch::Small,
            BranchArg::Large => Branch::Large,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    /// Equal charges, Z+ = 2, h = 0.01, n = 0..4, m = 1..250.
    LlsolPos,
    /// Equal charges, Z+ = -2, h = 0.01, n = 0..4, m = 1..250.
    LlsolNeg,
    /// High energy, large family, h = 0.05, C = 10.
    HesolLarge,
    /// High energy, small family, h = 0.05, C = 10.
    HesolSmall,
    /// (Z+, Z-) = (2, 4), h = 0.001, C = 4.
    CompresA,
    /// (Z+, Z-) = (-2, 4), h = 0.001, C = 7.
    CompresB,
    /// (Z+, Z-) = (4, 2), h = 0.001, C = 4.
    CompresC,
    /// (Z+, Z-) = (-4, 2), h = 0.001, C = 7.
    CompresD,
    /// Large family, h = 0.001, C = 9, m = 9000..9010.
    HeresolLarge,
    /// Small family, h = 0.001, C = 9, m = 9000..9010.
    HeresolSmall,
}

/// Parsed `key = value` pairs; `#` starts a comment.
pub fn read_config_file(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| anyhow!("{}:{}: expected key = value", path.display(), i + 1))?;
        map.insert(k.trim().replace('_', "-"), v.trim().to_string());
    }
    Ok(map)
}

/// Flag value if given, else the config entry, else `None`.
pub struct Layer<'a> {
    file: &'a BTreeMap<String, String>,
}

impl<'a> Layer<'a> {
    pub fn new(file: &'a BTreeMap<String, String>) -> Self {
        Layer { file }
    }

    pub fn get<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow!("config key {key}: cannot parse {v:?}: {e}")),
        }
    }

    pub fn enum_of<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(v) => T::from_str(v, true).map(Some).map_err(|e| anyhow!("config key {key}: {e}")),
        }
    }
}

pub fn params(layer: &Layer, c: &ChargeArgs) -> Result<ProblemParams> {
    params_with_h(layer, c, None)
}

/// As [`params`], with `h` falling back to `default_h` when absent.
pub fn params_with_h(layer: &Layer, c: &ChargeArgs, default_h: Option<f64>) -> Result<ProblemParams> {
    let zp = layer.get(c.zp, "zp")?.ok_or_else(|| anyhow!("missing --zp"))?;
    let zm = layer.get(c.zm, "zm")?.unwrap_or(0.0);
    let h = layer.get(c.h, "h")?.or(default_h).ok_or_else(|| anyhow!("missing --h"))?;
    if zm < 0.0 {
        bail!("--zm must be non-negative (swap the charges instead)");
    }
    Ok(ProblemParams::from_sum_difference(zp, zm, h)?)
}

/// Output settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct OutputConfig {
    pub out: String,
    pub format: Format,
    pub threads: usize,
}

pub fn output(layer: &Layer, common: &CommonArgs, env_threads: Option<String>) -> Result<OutputConfig> {
    let out = layer.get(common.out.clone(), "out")?.unwrap_or_else(|| "-".to_string());
    let format = layer.enum_of(common.format, "format")?.unwrap_or(Format::Csv);
    let env = match env_threads {
        Some(s) => Some(s.trim().parse::<usize>().map_err(|e| anyhow!("TCRES_THREADS={s:?}: {e}"))?),
        None => None,
    };
    let threads = match common.threads.or(env) {
        Some(t) => t,
        None => layer.get(None, "threads")?.unwrap_or_else(default_threads),
    };
    if threads == 0 {
        bail!("threads must be at least 1");
    }
    Ok(OutputConfig { out, format, threads })
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

/// First `m` of the family `ceil(C/h) + j`, robust to `C/h` landing a
/// rounding error above an integer.
pub fn m_start(c: f64, h: f64) -> usize {
    let x = c / h;
    if (x - x.round()).abs() < 1e-9 * x.abs().max(1.0) {
        x.round() as usize
    } else {
        x.ceil() as usize
    }
}

/// Fully resolved grid request.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub regime: Regime,
    pub n: (usize, usize),
    pub m: (usize, usize),
    pub branch: Branch,
    pub keep_anti: bool,
    pub c_min: f64,
}

pub fn grid(layer: &Layer, g: &GridArgs, h: f64) -> Result<GridSpec> {
    let regime: Regime = layer
        .enum_of(g.regime, "regime")?
        .ok_or_else(|| anyhow!("missing --regime"))?
        .into();
    let nmin = layer.get(g.nmin, "nmin")?.unwrap_or(0);
    let nmax = layer.get(g.nmax, "nmax")?.unwrap_or(nmin);
    let c = layer.get(g.c, "C")?;
    let mmin = match c {
        Some(c) if c > 0.0 => m_start(c, h),
        Some(c) => bail!("--C must be positive, got {c}"),
        None => layer.get(g.mmin, "mmin")?.ok_or_else(|| anyhow!("missing --mmin or --C"))?,
    };
    let mmax = match layer.get(g.mspan, "mspan")? {
        Some(0) => bail!("--mspan must be at least 1"),
        Some(span) => mmin + span - 1,
        None => layer.get(g.mmax, "mmax")?.unwrap_or(mmin),
    };
    if nmax < nmin || mmax < mmin {
        bail!("empty range: n {nmin}..={nmax}, m {mmin}..={mmax}");
    }
    let default_branch = if regime == Regime::HighEnergy || regime == Regime::DirectJost {
        Branch::Small
    } else {
        Branch::Large
    };
    let branch = layer.enum_of(g.branch, "branch")?.map(Branch::from).unwrap_or(default_branch);
    let keep_anti = g.keep_anti || layer.get(None::<bool>, "keep-anti")?.unwrap_or(false);
    let c_min = layer.get(g.c_min, "c-min")?.unwrap_or(C_MIN);
    Ok(GridSpec { regime, n: (nmin, nmax), m: (mmin, mmax), branch, keep_anti, c_min })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_start_rounds_up_except_at_integers() {
        assert_eq!(m_start(4.0, 0.001), 4000);
        assert_eq!(m_start(7.0, 0.001), 7000);
        assert_eq!(m_start(10.0, 0.05), 200);
        assert_eq!(m_start(0.25, 0.1), 3);
    }

    #[test]
    fn config_lines() {
        let dir = std::env::temp_dir().join(format!("tcres-conf-{}", std::process::id()));
        std::fs::write(&dir, "c_min = 0.2  # relaxed\n\n  keep_anti=true\n").unwrap();
        let map = read_config_file(&dir).unwrap();
        std::fs::remove_file(&dir).unwrap();
        assert_eq!(map.get("c-min").map(String::as_str), Some("0.2"));
        assert_eq!(map.get("keep-anti").map(String::as_str), Some("true"));
        let layer = Layer::new(&map);
        assert_eq!(layer.get(None::<f64>, "c-min").unwrap(), Some(0.2));
        assert_eq!(layer.get(Some(0.7), "c-min").unwrap(), Some(0.7));
        assert!(layer.get(None::<usize>, "c-min").is_err());
    }
}
