//! Text formats: edge lists, label files and feature CSVs.
//!
//! Edge lists hold one `u v w` triple per line, whitespace separated. Label
//! files hold `node class` pairs; nodes not listed are unrevealed. In both,
//! `#` starts a comment and blank lines are skipped.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use mucca_core::graph::{FullLabeling, WeightedGraph};
use mucca_core::knn::FeatureMatrix;
use mucca_core::spanning::SpanningTree;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Graph(#[from] mucca_core::Error),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("input is empty")]
    EmptyInput,
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

/// Opens `path` for reading; `-` is standard input.
pub fn open_input(path: &Path) -> io::Result<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufReader::new(io::stdin())))
    } else {
        Ok(Box::new(BufReader::new(File::open(path)?)))
    }
}

/// Creates `path` for writing; `-` is standard output.
pub fn create_output(path: &Path) -> io::Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufWriter::new(io::stdout())))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

/// Content lines with their 1-based line numbers, comments stripped.
fn content_lines(reader: impl BufRead) -> impl Iterator<Item = io::Result<(usize, String)>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(i, line)| match line {
            Err(e) => Some(Err(e)),
            Ok(line) => {
                let body = line.split('#').next().unwrap_or("").trim();
                (!body.is_empty()).then(|| Ok((i + 1, body.to_owned())))
            }
        })
}

fn malformed(line: usize, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedLine {
        line,
        reason: reason.into(),
    }
}

pub fn read_edge_list(reader: impl BufRead) -> Result<WeightedGraph> {
    let mut records = Vec::new();
    for item in content_lines(reader) {
        let (line, body) = item?;
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(malformed(
                line,
                format!("expected `u v w`, found {} fields", fields.len()),
            ));
        };
        let node = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| malformed(line, format!("invalid node id `{s}`")))
        };
        let weight = w
            .parse::<f64>()
            .map_err(|_| malformed(line, format!("invalid weight `{w}`")))?;
        records.push((line, node(u)?, node(v)?, weight));
    }
    Ok(WeightedGraph::from_numbered_edges(records, 0)?)
}

pub fn load_edge_list(path: &Path) -> Result<WeightedGraph> {
    read_edge_list(open_input(path)?)
}

pub fn write_edge_list(g: &WeightedGraph, mut out: impl Write) -> io::Result<()> {
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.weight)?;
    }
    out.flush()
}

/// Writes the tree edges as `child parent weight`.
pub fn write_tree(t: &SpanningTree, mut out: impl Write) -> io::Result<()> {
    for (child, parent, w) in t.edges() {
        writeln!(out, "{child} {parent} {w}")?;
    }
    out.flush()
}

/// Labels read from a `node class` file.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelFile {
    /// Indexed by node; `None` where the file says nothing.
    pub labels: Vec<Option<usize>>,
    /// One more than the largest class seen.
    pub classes: usize,
}

/// Reads a label file for a graph of `n` nodes.
pub fn read_labels(reader: impl BufRead, n: usize) -> Result<LabelFile> {
    let mut labels = vec![None; n];
    let mut classes = 0;
    for item in content_lines(reader) {
        let (line, body) = item?;
        let fields: Vec<&str> = body.split_whitespace().collect();
        let [node, class] = fields[..] else {
            return Err(malformed(
                line,
                format!("expected `node class`, found {} fields", fields.len()),
            ));
        };
        let node: usize = node
            .parse()
            .map_err(|_| malformed(line, format!("invalid node id `{node}`")))?;
        let class: usize = class
            .parse()
            .map_err(|_| malformed(line, format!("invalid class `{class}`")))?;
        if node >= n {
            return Err(malformed(
                line,
                format!("node {node} is not in the graph ({n} nodes)"),
            ));
        }
        if labels[node].is_some_and(|c| c != class) {
            return Err(malformed(line, format!("node {node} is labeled twice")));
        }
        labels[node] = Some(class);
        classes = classes.max(class + 1);
    }
    Ok(LabelFile { labels, classes })
}

pub fn load_labels(path: &Path, n: usize) -> Result<LabelFile> {
    read_labels(open_input(path)?, n)
}

pub fn write_labels(labels: &FullLabeling, mut out: impl Write) -> io::Result<()> {
    for (node, class) in labels.as_slice().iter().enumerate() {
        writeln!(out, "{node} {class}")?;
    }
    out.flush()
}

/// Writes the known entries of a partial label vector.
pub fn write_partial_labels(labels: &[Option<usize>], mut out: impl Write) -> io::Result<()> {
    for (node, class) in labels.iter().enumerate() {
        if let Some(class) = class {
            writeln!(out, "{node} {class}")?;
        }
    }
    out.flush()
}

/// A feature CSV: the matrix plus, when labels were names rather than
/// integers, the name of each class id.
#[derive(Debug, Clone)]
pub struct FeatureFile {
    pub matrix: FeatureMatrix,
    pub class_names: Option<Vec<String>>,
}

/// Reads a headed CSV of numeric features. A column named `label` (any
/// case), if present, holds classes: integers are used as class ids, other
/// values are numbered in sorted order, and empty cells mean unlabeled.
pub fn read_features(reader: impl Read) -> Result<FeatureFile> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv.headers().map_err(csv_error)?.clone();
    if headers.is_empty() {
        return Err(FormatError::EmptyInput);
    }
    let label_col = headers.iter().position(|h| h.eq_ignore_ascii_case("label"));
    let cols = headers.len() - usize::from(label_col.is_some());
    if cols == 0 {
        return Err(FormatError::MalformedRow {
            line: 1,
            reason: "no feature columns".into(),
        });
    }

    let mut data = Vec::new();
    let mut raw_labels = Vec::new();
    for record in csv.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        for (i, cell) in record.iter().enumerate() {
            if Some(i) == label_col {
                raw_labels.push((!cell.is_empty()).then(|| cell.to_owned()));
                continue;
            }
            let x: f64 = cell.parse().map_err(|_| FormatError::MalformedRow {
                line,
                reason: format!("`{cell}` in column `{}` is not a number", &headers[i]),
            })?;
            if !x.is_finite() {
                return Err(FormatError::MalformedRow {
                    line,
                    reason: format!("non-finite value `{cell}`"),
                });
            }
            data.push(x);
        }
    }
    if data.is_empty() {
        return Err(FormatError::EmptyInput);
    }
    let mut matrix = FeatureMatrix::new(data, cols)?;
    let mut class_names = None;
    if label_col.is_some() {
        let numeric: Option<Vec<Option<usize>>> = raw_labels
            .iter()
            .map(|l| match l {
                None => Some(None),
                Some(s) => s.parse().ok().map(Some),
            })
            .collect();
        let labels = match numeric {
            Some(ids) => ids,
            None => {
                let names: Vec<String> = raw_labels
                    .iter()
                    .flatten()
                    .cloned()
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect();
                let ids = raw_labels
                    .iter()
                    .map(|l| {
                        l.as_ref()
                            .map(|s| names.binary_search(s).expect("name was collected"))
                    })
                    .collect();
                class_names = Some(names);
                ids
            }
        };
        matrix = matrix.with_labels(labels)?;
    }
    Ok(FeatureFile {
        matrix,
        class_names,
    })
}

pub fn load_features(path: &Path) -> Result<FeatureFile> {
    read_features(open_input(path)?)
}

fn csv_error(e: csv::Error) -> FormatError {
    let line = e.position().map_or(0, |p| p.line());
    match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => FormatError::MalformedRow {
            line,
            reason: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Io(_) => match e.into_kind() {
            csv::ErrorKind::Io(io) => FormatError::Io(io),
            _ => unreachable!(),
        },
        _ => FormatError::MalformedRow {
            line,
            reason: e.to_string(),
        },
    }
}
