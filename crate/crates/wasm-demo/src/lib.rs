//! Browser demo: generate or paste 2-D points, cluster them, and draw the
//! scatter plot, decision graph and sorted decision values.
//!
//! [`Session`] holds the state and is plain Rust; [`Demo`] wraps it for
//! JavaScript.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use sktdpc::dataset::{generate_gaussian_blobs, parse, BlobSpec, LoadOptions};
use sktdpc::metrics::evaluate;
use sktdpc::{plot, run_sktdpc_with, ClusteringResult, Dataset, SktdpcOptions};
use wasm_bindgen::prelude::*;

#[derive(Debug, Serialize, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub k: usize,
    pub clusters: usize,
    pub m_p: usize,
    pub centers: Vec<usize>,
    pub evaluations: u64,
    pub full_pairs: u64,
    pub ratio: f64,
    /// Present when the points carry labels.
    pub acc: Option<f64>,
    pub ari: Option<f64>,
    pub warnings: Vec<String>,
}

pub struct Session {
    data: Dataset,
    result: Option<ClusteringResult>,
}

impl Default for Session {
    fn default() -> Self {
        let mut s = Session {
            data: Dataset::from_rows("empty", &[vec![0.0, 0.0]], None).expect("one point"),
            result: None,
        };
        s.generate(3, 120, 1.0, 7).expect("default fixture");
        s
    }
}

impl Session {
    pub fn data(&self) -> &Dataset {
        &self.data
    }

    /// `clusters` Gaussian blobs with centres drawn uniformly from a square
    /// that grows with the cluster count.
    pub fn generate(
        &mut self,
        clusters: usize,
        points_per_cluster: usize,
        spread: f64,
        seed: u64,
    ) -> Result<(), String> {
        if clusters == 0 || clusters > 30 {
            return Err(format!("clusters must be in 1..=30, got {clusters}"));
        }
        if points_per_cluster == 0 || clusters * points_per_cluster > 20_000 {
            return Err("between 1 and 20000 points please".into());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let side = 8.0 * (clusters as f64).sqrt();
        let centers = (0..clusters)
            .map(|_| vec![rng.gen_range(0.0..side), rng.gen_range(0.0..side)])
            .collect();
        self.data = generate_gaussian_blobs(&BlobSpec {
            centers,
            spreads: vec![spread],
            points_per_cluster,
            seed,
        })
        .map_err(|e| e.to_string())?;
        self.result = None;
        Ok(())
    }

    /// Two numeric columns, optionally followed by a label column.
    pub fn load_text(&mut self, text: &str) -> Result<(), String> {
        let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
        let fields = first
            .split([',', ' ', '\t', ';'])
            .filter(|f| !f.is_empty())
            .count();
        let opts = match fields {
            2 => LoadOptions::default(),
            3 => LoadOptions::default().with_label_column(-1),
            n => return Err(format!("expected 2 or 3 columns, found {n}")),
        };
        self.data = parse(text, "pasted", &opts).map_err(|e| e.to_string())?;
        self.result = None;
        Ok(())
    }

    pub fn cluster(&mut self, k: usize) -> Result<Summary, String> {
        let options = SktdpcOptions { k, parallel: false };
        let r = run_sktdpc_with(&self.data, &options).map_err(|e| e.to_string())?;
        let scores = match self.data.labels() {
            Some(truth) => Some(evaluate(truth, &r.labels).map_err(|e| e.to_string())?),
            None => None,
        };
        let summary = Summary {
            n: self.data.len(),
            k,
            clusters: r.cluster_count(),
            m_p: r.m_p,
            centers: r.centers.clone(),
            evaluations: r.counters.total_evaluations(),
            full_pairs: r.counters.full_pairs(),
            ratio: r.counters.ratio(),
            acc: scores.as_ref().map(|s| s.acc),
            ari: scores.as_ref().map(|s| s.ari),
            warnings: r.warnings.iter().map(|w| format!("{w:?}")).collect(),
        };
        self.result = Some(r);
        Ok(summary)
    }

    /// Points coloured by cluster, or by their given labels before the first
    /// clustering run.
    pub fn scatter_svg(&self) -> Result<String, String> {
        let (labels, centers, title) = match &self.result {
            Some(r) => (r.labels.clone(), r.centers.clone(), "clusters"),
            None => (
                self.data
                    .labels()
                    .map_or_else(|| vec![0; self.data.len()], <[usize]>::to_vec),
                Vec::new(),
                "input",
            ),
        };
        plot::scatter(&self.data, &labels, &centers, title).map_err(|e| e.to_string())
    }

    pub fn decision_graph_svg(&self) -> Result<String, String> {
        let r = self.result.as_ref().ok_or("cluster first")?;
        Ok(plot::decision_graph(
            &r.profile,
            &r.centers,
            "decision graph",
        ))
    }

    pub fn gamma_svg(&self, ranks: usize) -> Result<String, String> {
        let r = self.result.as_ref().ok_or("cluster first")?;
        Ok(plot::gamma_chart(
            &r.profile.sorted_gamma(),
            r.m_p,
            ranks,
            "sorted decision values",
        ))
    }
}

#[wasm_bindgen]
pub struct Demo {
    session: Session,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo {
            session: Session::default(),
        }
    }

    pub fn generate(
        &mut self,
        clusters: usize,
        points_per_cluster: usize,
        spread: f64,
        seed: u32,
    ) -> Result<(), JsError> {
        self.session
            .generate(clusters, points_per_cluster, spread, u64::from(seed))
            .map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = loadText)]
    pub fn load_text(&mut self, text: &str) -> Result<(), JsError> {
        self.session.load_text(text).map_err(|e| JsError::new(&e))
    }

    /// Runs the clustering and returns a JSON summary.
    pub fn cluster(&mut self, k: usize) -> Result<String, JsError> {
        let summary = self.session.cluster(k).map_err(|e| JsError::new(&e))?;
        serde_json::to_string(&summary).map_err(|e| JsError::new(&e.to_string()))
    }

    #[wasm_bindgen(js_name = scatterSvg)]
    pub fn scatter_svg(&self) -> Result<String, JsError> {
        self.session.scatter_svg().map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = decisionGraphSvg)]
    pub fn decision_graph_svg(&self) -> Result<String, JsError> {
        self.session
            .decision_graph_svg()
            .map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(js_name = gammaSvg)]
    pub fn gamma_svg(&self, ranks: usize) -> Result<String, JsError> {
        self.session.gamma_svg(ranks).map_err(|e| JsError::new(&e))
    }

    #[wasm_bindgen(getter)]
    pub fn size(&self) -> usize {
        self.session.data().len()
    }
}

impl Default for Demo {
    fn default() -> Self {
        Self::new()
    }
}
