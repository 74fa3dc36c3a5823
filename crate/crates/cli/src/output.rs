//! Report emission: every floating-point number is serialised with 17
//! significant digits, which round-trips `f64` exactly, so re-ingesting an
//! emitted document reproduces the computation bit for bit.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;
use thermoshift::asymptotics::{predicted_limits, ConvergenceVerdict};
use thermoshift::subsystem::py_measure;
use thermoshift::{Analysis, Measure, Report};

use crate::model_file::ModelFile;

/// 17 significant digits; enough to recover the exact bit pattern.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

struct Fmt17;

impl Formatter for Fmt17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        writer.write_all(fmt17(value).as_bytes())
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Fmt17);
    value.serialize(&mut ser).expect("in-memory serialisation");
    String::from_utf8(out).expect("serialised JSON is utf-8")
}

#[derive(Serialize)]
pub struct AnalysisDoc {
    pub model: ModelFile,
    pub analysis: AnalysisBody,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<SequenceBody>,
}

#[derive(Serialize)]
pub struct AnalysisBody {
    pub m: usize,
    pub p_delta: f64,
    /// Pressure of the potential actually analysed (0 once normalised).
    pub pressure: f64,
    pub states: Vec<String>,
    pub class_of: BTreeMap<String, usize>,
    pub d: Vec<f64>,
    pub alpha: Vec<Vec<f64>>,
    pub h: Vec<Vec<f64>>,
    pub h_delta: Vec<f64>,
    pub z_classes: Vec<Vec<bool>>,
    pub z_delta: Vec<bool>,
    pub integral_h: Vec<f64>,
    pub py_total_mass: f64,
    pub residue_limits: Vec<f64>,
    pub spread: f64,
    pub converges_overall: bool,
    pub verdict: String,
    pub h_steps: Vec<usize>,
}

#[derive(Serialize)]
pub struct SequenceBody {
    pub n_max: usize,
    pub tol: f64,
    pub spread: f64,
    pub converges_overall: bool,
}

fn verdict_name(v: ConvergenceVerdict) -> &'static str {
    match v {
        ConvergenceVerdict::Converges => "converges",
        ConvergenceVerdict::Indeterminate => "indeterminate",
        ConvergenceVerdict::Diverges => "diverges",
    }
}

pub fn analysis_body(analysis: &Analysis, measure: &Measure) -> AnalysisBody {
    let transfer = analysis.restricted().transfer();
    let model = transfer.model();
    let states = (0..transfer.dim())
        .map(|u| transfer.state_label(u))
        .collect();
    let class_of = analysis
        .class_of
        .iter()
        .enumerate()
        .filter_map(|(s, c)| c.map(|c| (model.label(s).to_string(), c)))
        .collect();
    let integral_h: Vec<f64> = analysis.h.iter().map(|hj| measure.integrate(hj)).collect();
    let residue_limits = predicted_limits(analysis, measure);
    let hi = residue_limits
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let lo = residue_limits.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = hi - lo;
    AnalysisBody {
        m: analysis.period,
        p_delta: analysis.p_delta,
        pressure: measure.perron().pressure(),
        states,
        class_of,
        d: analysis.d.clone(),
        alpha: analysis.alpha.clone(),
        h: analysis.h.clone(),
        h_delta: analysis.h_delta.clone(),
        z_classes: analysis.z_classes.clone(),
        z_delta: analysis.z_delta.clone(),
        integral_h,
        py_total_mass: py_measure(analysis, measure, &[]),
        residue_limits,
        spread,
        converges_overall: spread <= thermoshift::defaults::SPREAD_TOL,
        verdict: verdict_name(thermoshift::asymptotics::convergence_verdict(spread)).to_string(),
        h_steps: analysis.h_steps.clone(),
    }
}

/// CSV with the stable header, rows ordered by n ascending.
pub fn sequence_csv(report: &Report) -> String {
    let m = report.residue_limits.len();
    let mut out = String::from("n,mu_delta_n,scaled,residue,predicted,abs_error\n");
    for n in 0..=report.n_max {
        let residue = n % m;
        let predicted = report.residue_limits[residue];
        let err = (report.scaled_seq[n] - predicted).abs();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            n,
            fmt17(report.mu_seq[n]),
            fmt17(report.scaled_seq[n]),
            residue,
            fmt17(predicted),
            fmt17(err),
        ));
    }
    out
}
