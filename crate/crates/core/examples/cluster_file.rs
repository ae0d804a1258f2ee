//! `cargo run --example cluster_file -- points.csv 6`
//!
//! Clusters a delimited file whose last column holds class labels.

use sktdpc::dataset::{load, LoadOptions};
use sktdpc::metrics::evaluate;
use sktdpc::run_sktdpc;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().ok_or("usage: cluster_file <file> [k]")?;
    let k = args.next().map_or(Ok(6), |a| a.parse())?;

    let data = load(&path, &LoadOptions::default().with_label_column(-1))?;
    let result = run_sktdpc(&data, k)?;
    println!(
        "{} clusters, centres {:?}",
        result.cluster_count(),
        result.centers
    );
    if let Some(truth) = data.labels() {
        let s = evaluate(truth, &result.labels)?;
        println!(
            "acc {:.3} ami {:.3} ari {:.3} nmi {:.3} fmi {:.3}",
            s.acc, s.ami, s.ari, s.nmi, s.fmi
        );
    }
    println!(
        "{} of {} distances evaluated",
        result.counters.total_evaluations(),
        result.counters.full_pairs()
    );
    Ok(())
}
