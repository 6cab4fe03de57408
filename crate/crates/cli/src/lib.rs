//! Driver behind the `tcres` binary: configuration merging, dataset
//! emission and the figure presets.

pub mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::Parser;
use num_complex::Complex64;
use tcres::resonances::{resonance_grid, Branch, GridOptions, C_MIN};
use tcres::{angular, classical, radial, ProblemParams, Regime};

use config::{Cli, Command, FigureId, GridSpec, Layer, OutputConfig};
use output::{AngularRow, RadialRow, ResonanceRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

/// Error tagged with the exit status it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub error: anyhow::Error,
}

fn config_err(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_CONFIG, error }
}

fn numeric_err(error: anyhow::Error) -> Failure {
    Failure { code: EXIT_FAILED, error }
}

type Outcome = std::result::Result<i32, Failure>;

/// Parses `args`, runs the command and returns the process exit status.
/// Diagnostics and the run log go to stderr.
pub fn main_with(args: impl IntoIterator<Item = OsString>, env_threads: Option<String>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(cli, env_threads) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("tcres: error: {:#}", f.error);
            f.code
        }
    }
}

pub fn run(cli: Cli, env_threads: Option<String>) -> Outcome {
    let file = match &cli.common.config {
        Some(path) => config::read_config_file(path).map_err(config_err)?,
        None => BTreeMap::new(),
    };
    let layer = Layer::new(&file);
    let out = config::output(&layer, &cli.common, env_threads).map_err(config_err)?;
    match cli.command {
        Command::Angular { charges, e_re, e_im, count } => {
            let params = config::params(&layer, &charges).map_err(config_err)?;
            let e_re = layer.get(e_re, "e-re").map_err(config_err)?.ok_or_else(|| config_err(anyhow!("missing --e-re")))?;
            let e_im = layer.get(e_im, "e-im").map_err(config_err)?.unwrap_or(0.0);
            let count = layer.get(count, "count").map_err(config_err)?.unwrap_or(10);
            let w = open(&out)?;
            let levels = angular::angular_eigenvalues(&params, Complex64::new(e_re, e_im), count)
                .map_err(|e| numeric_err(e.into()))?;
            let rows: Vec<AngularRow> = levels
                .iter()
                .map(|l| AngularRow {
                    index: l.index,
                    re_mu: l.mu.re,
                    im_mu: l.mu.im,
                    parity: enum_name(&l.parity),
                    method: enum_name(&l.method),
                    err_estimate: l.err_estimate,
                })
                .collect();
            emit(w, |w| output::write_rows(w, &rows, out.format))
        }
        Command::Radial { charges, k_re, k_im, mu_re, mu_im, level } => {
            let params = config::params(&layer, &charges).map_err(config_err)?;
            let k_re = layer.get(k_re, "k-re").map_err(config_err)?.ok_or_else(|| config_err(anyhow!("missing --k-re")))?;
            let k_im = layer.get(k_im, "k-im").map_err(config_err)?.unwrap_or(0.0);
            let k = Complex64::new(k_re, k_im);
            let mu_re = layer.get(mu_re, "mu-re").map_err(config_err)?;
            let mu_im = layer.get(mu_im, "mu-im").map_err(config_err)?.unwrap_or(0.0);
            let level = layer.get(level, "level").map_err(config_err)?;
            let w = open(&out)?;
            let mu = match (mu_re, level) {
                (Some(re), None) => Complex64::new(re, mu_im),
                (None, Some(idx)) => angular::angular_level(&params, k * k, idx).map_err(|e| numeric_err(e.into()))?.mu,
                _ => return Err(config_err(anyhow!("give exactly one of --mu-re and --level"))),
            };
            let j = radial::jost(&params, k, mu).map_err(|e| numeric_err(e.into()))?;
            let row = RadialRow {
                re_k: j.k.re,
                im_k: j.k.im,
                re_mu: j.mu.re,
                im_mu: j.mu.im,
                re_f_plus: j.f_plus.re,
                im_f_plus: j.f_plus.im,
                re_f_minus: j.f_minus.re,
                im_f_minus: j.f_minus.im,
                re_s: j.s_matrix.re,
                im_s: j.s_matrix.im,
                wronskian_check: j.wronskian_check,
                consistency: j.consistency,
                ray_plus: j.ray_plus,
                ray_minus: j.ray_minus,
            };
            emit(w, |w| output::write_rows(w, &[row], out.format))
        }
        Command::Bifurcation { charges, emin, emax, samples } => {
            // the classical diagram does not depend on h
            let params = config::params_with_h(&layer, &charges, Some(1.0)).map_err(config_err)?;
            let emin = layer.get(emin, "emin").map_err(config_err)?.ok_or_else(|| config_err(anyhow!("missing --emin")))?;
            let emax = layer.get(emax, "emax").map_err(config_err)?.ok_or_else(|| config_err(anyhow!("missing --emax")))?;
            let samples = layer.get(samples, "samples").map_err(config_err)?.unwrap_or(200);
            let curves = classical::bifurcation_diagram(&params, (emin, emax), samples).map_err(|e| config_err(e.into()))?;
            let w = open(&out)?;
            emit(w, |w| output::write_curves(w, &curves, out.format))
        }
        Command::Resonances { charges, grid } => {
            let params = config::params(&layer, &charges).map_err(config_err)?;
            let spec = config::grid(&layer, &grid, params.h).map_err(config_err)?;
            run_grid(&params, &spec, &out)
        }
        Command::Figure { id } => {
            let (params, spec) = figure_preset(id);
            run_grid(&params, &spec, &out)
        }
    }
}

/// Charges and grid of the dataset behind figure `id`. Ranges follow the
/// family `m = ceil(C/h) + j` wherever a constant `C` is given.
pub fn figure_preset(id: FigureId) -> (ProblemParams, GridSpec) {
    let spec = |regime, n, m, branch| GridSpec { regime, n, m, branch, keep_anti: false, c_min: C_MIN };
    let from_c = |c: f64, h: f64, span: usize| {
        let m0 = config::m_start(c, h);
        (m0, m0 + span - 1)
    };
    let p = |zp, zm, h| ProblemParams::from_sum_difference(zp, zm, h).expect("preset charges are valid");
    use FigureId::*;
    match id {
        LlsolPos => (p(2.0, 0.0, 0.01), spec(Regime::EqualCharges, (0, 4), (1, 250), Branch::Large)),
        LlsolNeg => (p(-2.0, 0.0, 0.01), spec(Regime::EqualCharges, (0, 4), (1, 250), Branch::Large)),
        HesolLarge => (p(2.0, 0.0, 0.05), spec(Regime::HighEnergy, (0, 3), from_c(10.0, 0.05, 21), Branch::Large)),
        HesolSmall => (p(2.0, 0.0, 0.05), spec(Regime::HighEnergy, (0, 3), from_c(10.0, 0.05, 21), Branch::Small)),
        CompresA => (p(2.0, 4.0, 0.001), spec(Regime::HighEnergy, (0, 3), from_c(4.0, 0.001, 31), Branch::Large)),
        CompresB => (p(-2.0, 4.0, 0.001), spec(Regime::HighEnergy, (0, 3), from_c(7.0, 0.001, 31), Branch::Large)),
        CompresC => (p(4.0, 2.0, 0.001), spec(Regime::HighEnergy, (0, 3), from_c(4.0, 0.001, 31), Branch::Large)),
        CompresD => (p(-4.0, 2.0, 0.001), spec(Regime::HighEnergy, (0, 3), from_c(7.0, 0.001, 31), Branch::Large)),
        HeresolLarge => (p(2.0, 0.0, 0.001), spec(Regime::HighEnergy, (0, 3), (9000, 9010), Branch::Large)),
        HeresolSmall => (p(2.0, 0.0, 0.001), spec(Regime::HighEnergy, (0, 3), (9000, 9010), Branch::Small)),
    }
}

/// Solves the grid on a pool of `out.threads` workers; rows come out in
/// `(n, m)` order whatever the thread count.
pub fn grid_rows(params: &ProblemParams, spec: &GridSpec, threads: usize) -> anyhow::Result<Vec<ResonanceRow>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let opts = GridOptions { branch: spec.branch, c_min: spec.c_min, keep_anti: spec.keep_anti };
    let cells = pool.install(|| resonance_grid(params, spec.regime, spec.n.0..=spec.n.1, spec.m.0..=spec.m.1, opts));
    Ok(cells.iter().map(|c| ResonanceRow::from_cell(params, spec.regime, c)).collect())
}

fn run_grid(params: &ProblemParams, spec: &GridSpec, out: &OutputConfig) -> Outcome {
    let w = open(out)?;
    let start = Instant::now();
    let rows = grid_rows(params, spec, out.threads).map_err(numeric_err)?;
    let failed = rows.iter().filter(|r| r.status == "failed").count();
    eprintln!(
        "tcres: {} n={}..{} m={}..{} branch={:?} cells={} failed={} threads={} elapsed={:.2}s",
        spec.regime.as_str(),
        spec.n.0,
        spec.n.1,
        spec.m.0,
        spec.m.1,
        spec.branch,
        rows.len(),
        failed,
        out.threads,
        start.elapsed().as_secs_f64()
    );
    emit(w, |w| output::write_resonances(w, &rows, out.format))?;
    Ok(if failed > 0 { EXIT_FAILED } else { EXIT_OK })
}

fn open(out: &OutputConfig) -> std::result::Result<Box<dyn Write>, Failure> {
    if out.out == "-" {
        return Ok(Box::new(BufWriter::new(std::io::stdout().lock())));
    }
    let f = File::create(&out.out)
        .with_context(|| format!("output path {} is not writable", out.out))
        .map_err(config_err)?;
    Ok(Box::new(BufWriter::new(f)))
}

fn emit(mut w: Box<dyn Write>, f: impl FnOnce(&mut dyn Write) -> anyhow::Result<()>) -> Outcome {
    f(&mut w).and_then(|_| Ok(w.flush()?)).map_err(numeric_err)?;
    Ok(EXIT_OK)
}

fn enum_name<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_value(v)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}
