//! Benchmark datasets known by name.
//!
//! Files are looked up in `$SKTDPC_DATA_DIR`, then `./data`, then the
//! `data/` directory of this workspace. All files are delimited text with a
//! class label column: the last one, except UCI's `wine.data` which leads
//! with it.

use std::path::{Path, PathBuf};

use sktdpc::dataset::{load, LoadOptions};
use sktdpc::Dataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DatasetInfo {
    pub name: &'static str,
    /// Accepted file names with their label column, first match wins.
    pub files: &'static [(&'static str, isize)],
    pub n: usize,
    pub dim: usize,
    pub classes: usize,
    pub source: &'static str,
}

const SIPU: &str = "http://cs.joensuu.fi/sipu/datasets/";

pub const DATASETS: &[DatasetInfo] = &[
    DatasetInfo {
        name: "flame",
        files: &[("flame.txt", -1), ("flame.csv", -1), ("Flame.txt", -1)],
        n: 240,
        dim: 2,
        classes: 2,
        source: SIPU,
    },
    DatasetInfo {
        name: "spiral",
        files: &[("spiral.txt", -1), ("spiral.csv", -1), ("Spiral.txt", -1)],
        n: 312,
        dim: 2,
        classes: 3,
        source: SIPU,
    },
    DatasetInfo {
        name: "aggregation",
        files: &[
            ("Aggregation.txt", -1),
            ("aggregation.txt", -1),
            ("aggregation.csv", -1),
        ],
        n: 788,
        dim: 2,
        classes: 7,
        source: SIPU,
    },
    DatasetInfo {
        name: "r15",
        files: &[("R15.txt", -1), ("r15.txt", -1), ("r15.csv", -1)],
        n: 600,
        dim: 2,
        classes: 15,
        source: SIPU,
    },
    DatasetInfo {
        name: "iris",
        files: &[("iris.csv", -1), ("iris.data", -1), ("iris.txt", -1)],
        n: 150,
        dim: 4,
        classes: 3,
        source: "https://archive.ics.uci.edu/dataset/53/iris",
    },
    DatasetInfo {
        name: "seeds",
        files: &[
            ("seeds_dataset.txt", -1),
            ("seeds.txt", -1),
            ("seeds.csv", -1),
        ],
        n: 210,
        dim: 7,
        classes: 3,
        source: "https://archive.ics.uci.edu/dataset/236/seeds",
    },
    DatasetInfo {
        name: "wine",
        files: &[("wine.csv", -1), ("wine.data", 0), ("wine.txt", -1)],
        n: 178,
        dim: 13,
        classes: 3,
        source: "https://archive.ics.uci.edu/dataset/109/wine",
    },
];

pub fn lookup(name: &str) -> Option<&'static DatasetInfo> {
    DATASETS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

pub fn data_dirs() -> Vec<PathBuf> {
    let mut dirs = Vec::new();
    if let Some(dir) = std::env::var_os("SKTDPC_DATA_DIR") {
        dirs.push(PathBuf::from(dir));
    }
    dirs.push(PathBuf::from("data"));
    dirs.push(Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"));
    dirs
}

#[derive(Debug)]
pub enum Resolved {
    /// Path and its label column.
    File(PathBuf, isize),
    /// A registered dataset whose file is not present anywhere.
    Missing(DatasetInfo, Vec<PathBuf>),
}

impl DatasetInfo {
    pub fn resolve(&self) -> Resolved {
        let dirs = data_dirs();
        for dir in &dirs {
            for &(file, label_col) in self.files {
                let path = dir.join(file);
                if path.is_file() {
                    return Resolved::File(path, label_col);
                }
            }
        }
        Resolved::Missing(*self, dirs)
    }

    /// Loads the dataset with its label column and checks the registered
    /// shape.
    pub fn load(&self) -> anyhow::Result<Dataset> {
        let (path, label_col) = match self.resolve() {
            Resolved::File(p, c) => (p, c),
            Resolved::Missing(info, dirs) => anyhow::bail!(missing_message(&info, &dirs)),
        };
        let mut data = load(&path, &LoadOptions::default().with_label_column(label_col))?;
        data.set_name(self.name);
        anyhow::ensure!(
            data.len() == self.n && data.dim() == self.dim && data.class_count() == Some(self.classes),
            "{}: expected {} points, {} dimensions, {} classes; found {} points, {} dimensions, {:?} classes",
            path.display(),
            self.n,
            self.dim,
            self.classes,
            data.len(),
            data.dim(),
            data.class_count()
        );
        Ok(data)
    }
}

pub fn missing_message(info: &DatasetInfo, dirs: &[PathBuf]) -> String {
    format!(
        "dataset `{}` not found: looked for {} in {}; download it from {} and place it there or set SKTDPC_DATA_DIR",
        info.name,
        info.files.iter().map(|f| f.0).collect::<Vec<_>>().join(", "),
        dirs.iter().map(|d| d.display().to_string()).collect::<Vec<_>>().join(", "),
        info.source
    )
}
