//! Delimited text input and output.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::Dataset;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Comma if the first data line contains one, otherwise whitespace runs.
    #[default]
    Auto,
    Comma,
    Whitespace,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub delimiter: Delimiter,
    /// Column holding the class label; negative values count from the end.
    pub label_column: Option<isize>,
    pub has_header: bool,
}

impl LoadOptions {
    pub fn with_label_column(mut self, column: isize) -> Self {
        self.label_column = Some(column);
        self
    }
}

/// Reads a delimited text file. The dataset is named after the file stem.
pub fn load(path: impl AsRef<Path>, options: &LoadOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse(&text, name, options).map_err(|e| match e {
        Error::Empty(_) => Error::Empty(path.display().to_string()),
        other => other,
    })
}

/// Parses delimited text. Blank lines are skipped; line numbers in errors are
/// 1-based physical lines.
pub fn parse(text: &str, name: impl Into<String>, options: &LoadOptions) -> Result<Dataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    if options.has_header {
        lines.next();
    }
    let mut lines = lines.peekable();
    let Some(&(_, first)) = lines.peek() else {
        return Err(Error::Empty("no data rows".into()));
    };
    let comma = match options.delimiter {
        Delimiter::Comma => true,
        Delimiter::Whitespace => false,
        Delimiter::Auto => first.contains(','),
    };

    let mut width = None;
    let mut dim = 0;
    let mut coords = Vec::new();
    let mut raw_labels = Vec::new();
    for (line_no, line) in lines {
        let fields: Vec<&str> = if comma {
            line.split(',').map(str::trim).collect()
        } else {
            line.split_whitespace().collect()
        };
        let expected = *width.get_or_insert(fields.len());
        if fields.len() != expected {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {expected} fields, found {}", fields.len()),
            });
        }
        let label_at = match options.label_column {
            None => None,
            Some(c) => {
                let idx = if c < 0 { expected as isize + c } else { c };
                if idx < 0 || idx as usize >= expected {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("label column {c} out of range for {expected} fields"),
                    });
                }
                Some(idx as usize)
            }
        };
        dim = expected - usize::from(label_at.is_some());
        if dim == 0 {
            return Err(Error::Parse {
                line: line_no,
                message: "no numeric columns".into(),
            });
        }
        for (col, field) in fields.iter().enumerate() {
            if Some(col) == label_at {
                raw_labels.push(field.to_string());
                continue;
            }
            let value: f64 = field.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("field {} is not numeric: {field:?}", col + 1),
            })?;
            if !value.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("field {} is not finite", col + 1),
                });
            }
            coords.push(value);
        }
    }

    let (labels, names) = if options.label_column.is_some() {
        let (ids, names) = dense_ids(&raw_labels);
        (Some(ids), Some(names))
    } else {
        (None, None)
    };
    Ok(Dataset::from_flat(name, dim, coords, labels)?.with_label_names(names))
}

/// Maps arbitrary label strings to `0..c` in first-occurrence order.
fn dense_ids(raw: &[String]) -> (Vec<usize>, Vec<String>) {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut names = Vec::new();
    let ids = raw
        .iter()
        .map(|s| {
            *seen.entry(s.as_str()).or_insert_with(|| {
                names.push(s.clone());
                names.len() - 1
            })
        })
        .collect();
    (ids, names)
}

impl Dataset {
    /// Renders the dataset as delimited text, label last when present.
    /// Values use the shortest representation that parses back exactly.
    pub fn to_delimited(&self, delimiter: Delimiter) -> String {
        let sep = match delimiter {
            Delimiter::Whitespace => " ",
            Delimiter::Comma | Delimiter::Auto => ",",
        };
        let mut out = String::new();
        for (i, p) in self.points().enumerate() {
            for (h, v) in p.iter().enumerate() {
                if h > 0 {
                    out.push_str(sep);
                }
                let _ = write!(out, "{v:?}");
            }
            if let Some(labels) = self.labels() {
                let id = labels[i];
                match self.label_names() {
                    Some(names) => {
                        let _ = write!(out, "{sep}{}", names[id]);
                    }
                    None => {
                        let _ = write!(out, "{sep}{id}");
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn save(&self, path: impl AsRef<Path>, delimiter: Delimiter) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_delimited(delimiter)).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
