//! Tabular input: delimited files, missing values, discretization and folds.
//!
//! The pipeline is `load_table` → `drop_missing` → `fit_coding` (on training
//! rows only) → `apply_cutpoints` (on any table with the same layout).

mod discretize;
pub mod synthetic;

use std::collections::BTreeSet;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub use discretize::{bin_of, discretize_binary, discretize_mdlp};

/// Cells treated as missing when no explicit set is given.
pub const DEFAULT_MISSING_TOKENS: [&str; 3] = ["?", "", "NA"];

/// Feature count at or below which `Discretization::Auto` picks MDLP.
pub const AUTO_MDLP_MAX_FEATURES: usize = 100;

/// Where the class label lives in a delimited file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassColumn {
    Last,
    Index(usize),
    Name(String),
}

impl std::str::FromStr for ClassColumn {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(if s.eq_ignore_ascii_case("last") {
            ClassColumn::Last
        } else if let Ok(i) = s.parse::<usize>() {
            ClassColumn::Index(i)
        } else {
            ClassColumn::Name(s.to_string())
        })
    }
}

/// Parsed delimited text with verbatim string cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub class_column: usize,
}

impl RawTable {
    pub fn new(header: Vec<String>, rows: Vec<Vec<String>>, class_column: usize) -> Result<Self> {
        let width = header.len();
        if class_column >= width {
            return Err(Error::Config(format!("class column {class_column} out of range for {width} columns")));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != width) {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected {width} cells, found {}", rows[i].len()),
            });
        }
        Ok(Self { header, rows, class_column })
    }

    /// Number of records.
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Number of feature columns.
    pub fn d(&self) -> usize {
        self.header.len() - 1
    }

    pub fn width(&self) -> usize {
        self.header.len()
    }

    /// Raw column indices of the features, in file order.
    pub fn feature_columns(&self) -> Vec<usize> {
        (0..self.width()).filter(|&c| c != self.class_column).collect()
    }

    pub fn subset(&self, rows: &[usize]) -> RawTable {
        RawTable {
            header: self.header.clone(),
            rows: rows.iter().map(|&i| self.rows[i].clone()).collect(),
            class_column: self.class_column,
        }
    }

    /// SHA-256 over the canonicalized table (unit/record separators between cells/rows).
    pub fn checksum(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.class_column.to_le_bytes());
        for row in std::iter::once(&self.header).chain(self.rows.iter()) {
            for cell in row {
                h.update(cell.as_bytes());
                h.update([0x1f]);
            }
            h.update([0x1e]);
        }
        hex::encode(h.finalize())
    }
}

/// Reads a delimited file.
pub fn load_table(
    path: impl AsRef<Path>,
    delimiter: u8,
    has_header: bool,
    class_column: &ClassColumn,
) -> Result<RawTable> {
    let file = File::open(path.as_ref())?;
    read_table(file, delimiter, has_header, class_column)
}

pub fn read_table<R: Read>(reader: R, delimiter: u8, has_header: bool, class_column: &ClassColumn) -> Result<RawTable> {
    let mut rdr = csv::ReaderBuilder::new().delimiter(delimiter).has_headers(false).flexible(true).from_reader(reader);

    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    let mut width = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let cells: Vec<String> = rec.iter().map(str::to_string).collect();
        match width {
            None => width = Some(cells.len()),
            Some(w) if w != cells.len() => {
                return Err(Error::Parse { line, message: format!("expected {w} fields, found {}", cells.len()) })
            }
            _ => {}
        }
        if has_header && header.is_none() {
            header = Some(cells.iter().map(|c| c.trim().to_string()).collect());
        } else {
            rows.push(cells);
        }
    }
    let width = width.ok_or_else(|| Error::EmptyDataset("input has no records".into()))?;
    if width < 2 {
        return Err(Error::Config("need at least one feature column and a class column".into()));
    }

    let class_idx = match class_column {
        ClassColumn::Last => width - 1,
        ClassColumn::Index(i) if *i < width => *i,
        ClassColumn::Index(i) => {
            return Err(Error::Config(format!("class column {i} out of range for {width} columns")))
        }
        ClassColumn::Name(name) => header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(|| Error::Config(format!("class column {name:?} not found in header")))?,
    };
    let header = header.unwrap_or_else(|| default_header(width, class_idx));
    Ok(RawTable { header, rows, class_column: class_idx })
}

fn default_header(width: usize, class_idx: usize) -> Vec<String> {
    let mut k = 0;
    (0..width)
        .map(|c| {
            if c == class_idx {
                "Y".to_string()
            } else {
                k += 1;
                format!("X{k}")
            }
        })
        .collect()
}

/// Removes every row containing a missing token; row order is preserved.
pub fn drop_missing(table: &RawTable, missing_tokens: &[&str]) -> Result<RawTable> {
    let rows: Vec<Vec<String>> =
        table.rows.iter().filter(|r| !r.iter().any(|c| missing_tokens.contains(&c.trim()))).cloned().collect();
    if rows.is_empty() {
        return Err(Error::EmptyDataset("every row contains a missing value".into()));
    }
    Ok(RawTable { header: table.header.clone(), rows, class_column: table.class_column })
}

/// Choice of numeric discretizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Discretization {
    /// MDLP for up to 100 features, binary binning above.
    Auto,
    Mdlp,
    Binary,
}

impl Discretization {
    pub fn resolve(self, d: usize) -> Discretization {
        match self {
            Discretization::Auto if d <= AUTO_MDLP_MAX_FEATURES => Discretization::Mdlp,
            Discretization::Auto => Discretization::Binary,
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColumnCoding {
    Numeric { cutpoints: Vec<f64> },
    Categorical { levels: Vec<String> },
}

impl ColumnCoding {
    /// Arity on the fitting data.
    pub fn arity(&self) -> usize {
        match self {
            ColumnCoding::Numeric { cutpoints } => cutpoints.len() + 1,
            ColumnCoding::Categorical { levels } => levels.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureCoding {
    pub name: String,
    pub column: usize,
    pub arity: usize,
    #[serde(flatten)]
    pub coding: ColumnCoding,
}

/// Per-column encodings fitted on a training table; serialized as the
/// arity/cutpoint side file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coding {
    pub discretization: Discretization,
    pub width: usize,
    pub class_column: usize,
    pub class_name: String,
    pub class_levels: Vec<String>,
    pub features: Vec<FeatureCoding>,
}

fn parse_numeric(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok().filter(|v| v.is_finite())
}

fn distinct_count(values: &[f64]) -> usize {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

fn sorted_levels<'a>(cells: impl Iterator<Item = &'a str>) -> Vec<String> {
    cells.map(str::to_string).collect::<BTreeSet<_>>().into_iter().collect()
}

fn level_index(levels: &[String], cell: &str) -> usize {
    levels.binary_search_by(|l| l.as_str().cmp(cell)).unwrap_or(levels.len())
}

/// Fits cutpoints and category levels on `train`.
///
/// A column is numeric when every cell parses as a finite number; otherwise
/// its trimmed cells are categories indexed in sorted order. Numeric columns
/// with exactly two distinct values always get the single midpoint cut.
pub fn fit_coding(train: &RawTable, mode: Discretization) -> Result<Coding> {
    if train.n() == 0 {
        return Err(Error::EmptyDataset("training table has no rows".into()));
    }
    let cc = train.class_column;
    let class_levels = sorted_levels(train.rows.iter().map(|r| r[cc].trim()));
    if class_levels.len() < 2 {
        return Err(Error::Config(format!("need at least two classes, found {}", class_levels.len())));
    }
    let class: Vec<u32> = train.rows.iter().map(|r| level_index(&class_levels, r[cc].trim()) as u32).collect();

    let mode = mode.resolve(train.d());
    let features = train
        .feature_columns()
        .into_iter()
        .map(|c| {
            let numeric: Option<Vec<f64>> = train.rows.iter().map(|r| parse_numeric(&r[c])).collect();
            let coding = match numeric {
                Some(values) => ColumnCoding::Numeric {
                    cutpoints: match mode {
                        // two-valued columns are indicators already; keep both values apart
                        _ if distinct_count(&values) == 2 => discretize_binary(&values),
                        Discretization::Binary => discretize_binary(&values),
                        _ => discretize_mdlp(&values, &class),
                    },
                },
                None => ColumnCoding::Categorical { levels: sorted_levels(train.rows.iter().map(|r| r[c].trim())) },
            };
            FeatureCoding { name: train.header[c].clone(), column: c, arity: coding.arity(), coding }
        })
        .collect();

    Ok(Coding {
        discretization: mode,
        width: train.width(),
        class_column: cc,
        class_name: train.header[cc].clone(),
        class_levels,
        features,
    })
}

impl Coding {
    pub fn d(&self) -> usize {
        self.features.len()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    /// Encodes the feature cells of one full-width record (class cell ignored).
    /// Unseen categories map to index `levels.len()`.
    pub fn encode_record(&self, row: &[String], line: usize) -> Result<Vec<u32>> {
        self.features.iter().map(|f| self.encode_cell(f, &row[f.column], line)).collect()
    }

    /// Encodes a record that has only the feature cells, in feature order.
    pub fn encode_unlabeled(&self, cells: &[String], line: usize) -> Result<Vec<u32>> {
        if cells.len() != self.d() {
            return Err(Error::Validation(format!("expected {} feature cells, found {}", self.d(), cells.len())));
        }
        self.features.iter().zip(cells).map(|(f, cell)| self.encode_cell(f, cell, line)).collect()
    }

    fn encode_cell(&self, f: &FeatureCoding, cell: &str, line: usize) -> Result<u32> {
        Ok(match &f.coding {
            ColumnCoding::Numeric { cutpoints } => {
                let v = parse_numeric(cell).ok_or_else(|| Error::Parse {
                    line,
                    message: format!("column {:?}: {cell:?} is not numeric", f.name),
                })?;
                bin_of(v, cutpoints) as u32
            }
            ColumnCoding::Categorical { levels } => level_index(levels, cell.trim()) as u32,
        })
    }

    pub fn encode_class(&self, cell: &str) -> u32 {
        level_index(&self.class_levels, cell.trim()) as u32
    }
}

/// Maps a raw table through a fitted coding.
///
/// Numeric values beyond the outer thresholds land in the outermost bins.
/// Categories (or classes) unseen at fit time get one reserved extra index,
/// which is then counted in that column's arity.
pub fn apply_cutpoints(table: &RawTable, coding: &Coding) -> Result<Dataset> {
    if table.width() != coding.width || table.class_column != coding.class_column {
        return Err(Error::Validation(format!(
            "table layout ({} columns, class at {}) does not match coding ({} columns, class at {})",
            table.width(),
            table.class_column,
            coding.width,
            coding.class_column
        )));
    }
    let d = coding.d();
    let n = table.n();
    let mut columns = vec![Vec::with_capacity(n); d];
    let mut class = Vec::with_capacity(n);
    for (i, row) in table.rows.iter().enumerate() {
        for (j, v) in coding.encode_record(row, i + 1)?.into_iter().enumerate() {
            columns[j].push(v);
        }
        class.push(coding.encode_class(&row[table.class_column]));
    }
    let arities = coding
        .features
        .iter()
        .zip(&columns)
        .map(|(f, col)| {
            let seen = col.iter().copied().max().map_or(0, |m| m as usize + 1);
            f.arity.max(seen)
        })
        .collect();
    let class_arity = coding.class_levels.len().max(class.iter().copied().max().map_or(0, |m| m as usize + 1));
    let cutpoints = coding
        .features
        .iter()
        .map(|f| match &f.coding {
            ColumnCoding::Numeric { cutpoints } => cutpoints.clone(),
            ColumnCoding::Categorical { .. } => Vec::new(),
        })
        .collect();

    let mut ds = Dataset::new(columns, arities, class, class_arity)?;
    ds.feature_names = coding.feature_names();
    ds.class_names = coding.class_levels.clone();
    ds.cutpoints = cutpoints;
    Ok(ds)
}

/// Discretized data: a column-major matrix of category indices plus the class vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    columns: Vec<Vec<u32>>,
    arities: Vec<usize>,
    class: Vec<u32>,
    class_arity: usize,
    feature_names: Vec<String>,
    class_names: Vec<String>,
    cutpoints: Vec<Vec<f64>>,
}

impl Dataset {
    /// Validates and wraps column-major data. Feature names default to `X1..Xd`.
    pub fn new(columns: Vec<Vec<u32>>, arities: Vec<usize>, class: Vec<u32>, class_arity: usize) -> Result<Self> {
        let d = columns.len();
        if d == 0 {
            return Err(Error::Config("dataset needs at least one feature".into()));
        }
        if arities.len() != d {
            return Err(Error::Validation(format!("{} arities for {d} features", arities.len())));
        }
        if class_arity < 2 {
            return Err(Error::Validation("class arity must be at least 2".into()));
        }
        let n = class.len();
        for (j, (col, &a)) in columns.iter().zip(&arities).enumerate() {
            if col.len() != n {
                return Err(Error::Validation(format!("feature {j} has {} rows, expected {n}", col.len())));
            }
            if a == 0 {
                return Err(Error::Validation(format!("feature {j} has arity 0")));
            }
            if let Some(&v) = col.iter().find(|&&v| v as usize >= a) {
                return Err(Error::Validation(format!("feature {j} value {v} exceeds arity {a}")));
            }
        }
        if let Some(&y) = class.iter().find(|&&y| y as usize >= class_arity) {
            return Err(Error::Validation(format!("class {y} exceeds class arity {class_arity}")));
        }
        Ok(Self {
            feature_names: (1..=d).map(|k| format!("X{k}")).collect(),
            class_names: (0..class_arity).map(|c| c.to_string()).collect(),
            cutpoints: vec![Vec::new(); d],
            columns,
            arities,
            class,
            class_arity,
        })
    }

    pub fn with_feature_names(mut self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.d() {
            return Err(Error::Validation(format!("{} names for {} features", names.len(), self.d())));
        }
        self.feature_names = names;
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.class.len()
    }

    pub fn d(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[u32] {
        &self.columns[j]
    }

    pub fn arity(&self, j: usize) -> usize {
        self.arities[j]
    }

    pub fn arities(&self) -> &[usize] {
        &self.arities
    }

    pub fn class(&self) -> &[u32] {
        &self.class
    }

    pub fn class_arity(&self) -> usize {
        self.class_arity
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn cutpoints(&self) -> &[Vec<f64>] {
        &self.cutpoints
    }

    pub fn row(&self, i: usize) -> Vec<u32> {
        self.columns.iter().map(|c| c[i]).collect()
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_arity];
        for &y in &self.class {
            counts[y as usize] += 1;
        }
        counts
    }

    /// Rows `rows` in the given order; arities and names are kept.
    pub fn subset(&self, rows: &[usize]) -> Dataset {
        Dataset {
            columns: self.columns.iter().map(|c| rows.iter().map(|&i| c[i]).collect()).collect(),
            class: rows.iter().map(|&i| self.class[i]).collect(),
            ..self.clone()
        }
    }

    /// Appends feature columns; used for noise augmentation.
    pub(crate) fn push_feature(&mut self, name: String, column: Vec<u32>, arity: usize) {
        debug_assert_eq!(column.len(), self.n());
        self.columns.push(column);
        self.arities.push(arity);
        self.feature_names.push(name);
        self.cutpoints.push(Vec::new());
    }
}

/// Assignment of rows to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldPlan {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub seed: u64,
}

/// Shuffles `0..n` with a seeded ChaCha8 stream and deals positions round-robin into `k` folds.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::Config(format!("need at least 2 folds, got {k}")));
    }
    if n < k {
        return Err(Error::Config(format!("{n} rows cannot fill {k} folds")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut assignment = vec![0; n];
    for (pos, &row) in order.iter().enumerate() {
        assignment[row] = pos % k;
    }
    Ok(FoldPlan { k, assignment, seed })
}

impl FoldPlan {
    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] == fold).collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len()).filter(|&i| self.assignment[i] != fold).collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut s = vec![0; self.k];
        for &f in &self.assignment {
            s[f] += 1;
        }
        s
    }
}
