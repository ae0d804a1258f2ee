use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Result};
use serde::Serialize;
use sktdpc::baseline::{dpc_original, sktdpc_reference};
use sktdpc::dpc::Warning;
use sktdpc::metrics::{evaluate, Scores};
use sktdpc::{run_sktdpc_with, ClusteringResult, Dataset, SktdpcOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    Sktdpc {
        k: usize,
    },
    /// Same pipeline evaluated on the full distance matrix.
    Reference {
        k: usize,
    },
    /// Cut-off density with a fixed number of centres.
    Dpc {
        dc: f64,
        n_centers: usize,
    },
}

impl Algorithm {
    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::Sktdpc { .. } => "sktdpc",
            Algorithm::Reference { .. } => "reference",
            Algorithm::Dpc { .. } => "dpc",
        }
    }

    pub fn run(&self, data: &Dataset) -> sktdpc::Result<ClusteringResult> {
        match *self {
            Algorithm::Sktdpc { k } => run_sktdpc_with(data, &SktdpcOptions::new(k)),
            Algorithm::Reference { k } => sktdpc_reference(data, k),
            Algorithm::Dpc { dc, n_centers } => dpc_original(data, dc, n_centers),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_centers: Option<usize>,
}

impl From<Algorithm> for Params {
    fn from(a: Algorithm) -> Self {
        match a {
            Algorithm::Sktdpc { k } | Algorithm::Reference { k } => Params {
                k: Some(k),
                dc: None,
                n_centers: None,
            },
            Algorithm::Dpc { dc, n_centers } => Params {
                k: None,
                dc: Some(dc),
                n_centers: Some(n_centers),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MetricsReport {
    pub acc: f64,
    pub ami: f64,
    pub ari: f64,
    pub nmi: f64,
    pub fmi: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
}

impl From<&Scores> for MetricsReport {
    fn from(s: &Scores) -> Self {
        MetricsReport {
            acc: s.acc,
            ami: s.ami,
            ari: s.ari,
            nmi: s.nmi,
            fmi: s.fmi,
            degenerate: s.degenerate.iter().map(|i| i.name().to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CounterReport {
    pub evaluations: u64,
    pub knn_evaluations: u64,
    pub separation_evaluations: u64,
    pub assign_evaluations: u64,
    pub full_pairs: u64,
    pub ratio: f64,
    pub intersection_points: usize,
    pub fallback_points: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TimingReport {
    pub repeats: usize,
    pub mean_s: f64,
    pub per_repeat_s: Vec<f64>,
    /// Mean per-phase time over repeats.
    pub phases_s: BTreeMap<String, f64>,
}

/// One clustering run. Every field except `timings` is a pure function of
/// the input and parameters.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub dataset: String,
    pub algorithm: String,
    pub n: usize,
    pub dim: usize,
    pub normalize: bool,
    pub clusters: usize,
    pub m_p: usize,
    pub centers: Vec<usize>,
    pub warnings: Vec<String>,
    pub params: Params,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricsReport>,
    pub counters: CounterReport,
    pub timings: TimingReport,
}

pub fn warning_text(w: &Warning) -> String {
    match w {
        Warning::CoincidentPoints(n) => format!("{n} points coincide with all their neighbours"),
        Warning::Mutation(f) => format!("mutation point fallback: {f:?}"),
        Warning::EmptyCenterFilter => "no candidate passed the centre filter; kept rank 1".into(),
        Warning::DensestReassigned => "densest point was not a centre".into(),
    }
}

pub struct Execution {
    pub result: ClusteringResult,
    pub report: RunReport,
}

/// Runs `algorithm` `repeats` times and checks that every repeat labels the
/// points identically.
pub fn execute(
    data: &Dataset,
    algorithm: Algorithm,
    repeats: usize,
    normalize: bool,
) -> Result<Execution> {
    ensure!(repeats >= 1, "repeats must be at least 1");
    let mut walls = Vec::with_capacity(repeats);
    let mut phases: BTreeMap<String, Duration> = BTreeMap::new();
    let mut first: Option<ClusteringResult> = None;
    for _ in 0..repeats {
        let t = Instant::now();
        let result = algorithm.run(data)?;
        walls.push(t.elapsed());
        for (name, d) in result.timings.phases() {
            *phases.entry(name.to_string()).or_default() += d;
        }
        match &first {
            None => first = Some(result),
            Some(f) => {
                if f.labels != result.labels || f.centers != result.centers {
                    bail!("repeats of {} on {} disagree", algorithm.id(), data.name());
                }
            }
        }
    }
    let result = first.expect("at least one repeat");
    let metrics = match data.labels() {
        Some(truth) => Some(MetricsReport::from(&evaluate(truth, &result.labels)?)),
        None => None,
    };
    let c = result.counters;
    let secs: Vec<f64> = walls.iter().map(Duration::as_secs_f64).collect();
    let report = RunReport {
        dataset: data.name().to_string(),
        algorithm: algorithm.id().to_string(),
        n: data.len(),
        dim: data.dim(),
        normalize,
        clusters: result.cluster_count(),
        m_p: result.m_p,
        centers: result.centers.clone(),
        warnings: result.warnings.iter().map(warning_text).collect(),
        params: algorithm.into(),
        metrics,
        counters: CounterReport {
            evaluations: c.total_evaluations(),
            knn_evaluations: c.knn_evaluations,
            separation_evaluations: c.separation_evaluations,
            assign_evaluations: c.assign_evaluations,
            full_pairs: c.full_pairs(),
            ratio: c.ratio(),
            intersection_points: c.intersection_points,
            fallback_points: c.fallback_points,
        },
        timings: TimingReport {
            repeats,
            mean_s: secs.iter().sum::<f64>() / repeats as f64,
            per_repeat_s: secs,
            phases_s: phases
                .into_iter()
                .map(|(k, v)| (k, v.as_secs_f64() / repeats as f64))
                .collect(),
        },
    };
    Ok(Execution { result, report })
}

pub fn to_toml<T: Serialize>(value: &T) -> Result<String> {
    Ok(toml::to_string(value)?)
}
