use std::io::Write;

use anyhow::{anyhow, bail, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use tcres::classical::BifurcationCurve;
use tcres::resonances::GridCell;
use tcres::{energy_from_k, ComplexEnergy, ProblemParams, Regime, ResonanceRecord, ZeroKind};

use crate::config::Format;

pub const RESONANCE_HEADER: &str = "n,m,h,z_plus,z_minus,regime,re_e,im_e,re_mu,im_mu,k_est,residual,status,reason";

/// One line of a resonance dataset; failed cells carry only the labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRow {
    pub n: usize,
    pub m: usize,
    pub h: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    pub regime: String,
    pub re_e: Option<f64>,
    pub im_e: Option<f64>,
    pub re_mu: Option<f64>,
    pub im_mu: Option<f64>,
    pub k_est: Option<f64>,
    pub residual: Option<f64>,
    pub status: String,
    pub reason: String,
}

fn kind_str(k: ZeroKind) -> &'static str {
    match k {
        ZeroKind::Resonance => "resonance",
        ZeroKind::AntiResonance => "anti_resonance",
        ZeroKind::Eigenvalue => "eigenvalue",
    }
}

fn parse_regime(s: &str) -> Result<Regime> {
    Ok(match s {
        "equal_charges" => Regime::EqualCharges,
        "low_lying" => Regime::LowLying,
        "high_energy" => Regime::HighEnergy,
        "direct_jost" => Regime::DirectJost,
        _ => bail!("unknown regime {s:?}"),
    })
}

impl ResonanceRow {
    pub fn from_cell(params: &ProblemParams, regime: Regime, cell: &GridCell) -> Self {
        let base = ResonanceRow {
            n: cell.n,
            m: cell.m,
            h: params.h,
            z_plus: params.z_plus,
            z_minus: params.z_minus,
            regime: regime.as_str().to_string(),
            re_e: None,
            im_e: None,
            re_mu: None,
            im_mu: None,
            k_est: None,
            residual: None,
            status: "failed".into(),
            reason: String::new(),
        };
        match &cell.outcome {
            Ok(r) => ResonanceRow {
                re_e: Some(r.energy.e.re),
                im_e: Some(r.energy.e.im),
                re_mu: Some(r.mu.re),
                im_mu: Some(r.mu.im),
                k_est: Some(r.k_classical),
                residual: Some(r.residual),
                status: kind_str(r.kind).into(),
                ..base
            },
            Err(reason) => ResonanceRow { reason: reason.clone(), ..base },
        }
    }

    /// The record behind a successful row; `None` for a failed cell.
    pub fn to_record(&self) -> Result<Option<ResonanceRecord>> {
        let kind = match self.status.as_str() {
            "failed" => return Ok(None),
            "resonance" => ZeroKind::Resonance,
            "anti_resonance" => ZeroKind::AntiResonance,
            "eigenvalue" => ZeroKind::Eigenvalue,
            s => bail!("unknown status {s:?}"),
        };
        let need = |v: Option<f64>, name: &str| v.ok_or_else(|| anyhow!("row ({}, {}) lacks {name}", self.n, self.m));
        let e = Complex64::new(need(self.re_e, "re_e")?, need(self.im_e, "im_e")?);
        let mu = Complex64::new(need(self.re_mu, "re_mu")?, need(self.im_mu, "im_mu")?);
        let mut k = e.sqrt();
        if k.re < 0.0 {
            k = -k;
        }
        if kind == ZeroKind::Eigenvalue && k.im < 0.0 {
            k = -k;
        }
        let energy = ComplexEnergy { e, ..energy_from_k(k, false)? };
        Ok(Some(ResonanceRecord {
            n: self.n,
            m: self.m,
            energy,
            mu,
            k_classical: need(self.k_est, "k_est")?,
            regime: parse_regime(&self.regime)?,
            residual: need(self.residual, "residual")?,
            kind,
        }))
    }
}

pub fn write_rows<T: Serialize>(w: impl Write, rows: &[T], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut wr = csv::Writer::from_writer(w);
            for r in rows {
                wr.serialize(r)?;
            }
            wr.flush()?;
        }
        Format::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}

/// Resonance rows, with the header written even for an empty list.
pub fn write_resonances(mut w: impl Write, rows: &[ResonanceRow], format: Format) -> Result<()> {
    if rows.is_empty() && format == Format::Csv {
        writeln!(w, "{RESONANCE_HEADER}")?;
        return Ok(());
    }
    write_rows(w, rows, format)
}

pub fn read_resonances(r: impl std::io::Read) -> Result<Vec<ResonanceRow>> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers()?.iter().collect::<Vec<_>>().join(",");
    if header != RESONANCE_HEADER {
        bail!("unexpected header {header:?}");
    }
    rd.deserialize().map(|r| r.map_err(Into::into)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveRow {
    pub curve: &'static str,
    pub e: f64,
    pub k: String,
}

pub fn write_curves(w: impl Write, curves: &[BifurcationCurve], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let rows: Vec<CurveRow> = curves
                .iter()
                .flat_map(|c| c.samples.iter().map(|(e, k)| CurveRow { curve: c.id.as_str(), e: *e, k: k.to_string() }))
                .collect();
            write_rows(w, &rows, format)
        }
        Format::Json => write_rows(w, curves, format),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AngularRow {
    pub index: usize,
    pub re_mu: f64,
    pub im_mu: f64,
    pub parity: String,
    pub method: String,
    pub err_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialRow {
    pub re_k: f64,
    pub im_k: f64,
    pub re_mu: f64,
    pub im_mu: f64,
    pub re_f_plus: f64,
    pub im_f_plus: f64,
    pub re_f_minus: f64,
    pub im_f_minus: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub wronskian_check: f64,
    pub consistency: f64,
    pub ray_plus: f64,
    pub ray_minus: f64,
}
