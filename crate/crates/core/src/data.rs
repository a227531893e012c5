//! Labeled tabular datasets: CSV loading, standardization and the design
//! matrices `A` (features by samples) and `B` (one-hot targets).

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::matrix::DenseMatrix;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("csv error: {0}")]
    Csv(String),

    #[error("cannot parse {value:?} as a number at record {record}, column {column}")]
    Parse {
        record: usize,
        column: String,
        value: String,
    },

    #[error("label column {0} not found")]
    MissingLabel(String),

    #[error("empty label at record {0}")]
    EmptyLabel(usize),

    #[error("record {record} has {found} fields, expected {expected}")]
    InconsistentWidth {
        record: usize,
        expected: usize,
        found: usize,
    },

    #[error("{labels} labels for {samples} samples")]
    LabelCount { samples: usize, labels: usize },

    #[error("dataset has no samples")]
    NoSamples,

    #[error("dataset has no feature columns")]
    NoFeatures,

    #[error("standardization needs at least 2 samples, got {0}")]
    TooFewSamples(usize),

    #[error("class {0} has no samples")]
    EmptyClass(usize),

    #[error("invalid standardization file: {0}")]
    Params(String),

    #[error("dataset has {found} features but the standardization expects {expected}")]
    FeatureCount { expected: usize, found: usize },
}

pub type DataResult<T> = std::result::Result<T, DataError>;

/// Which column holds the class label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelColumn {
    Name(String),
    Index(usize),
}

impl LabelColumn {
    /// Parses a CLI value: a bare non-negative integer is an index, anything
    /// else a header name.
    pub fn parse(s: &str) -> Self {
        match s.parse::<usize>() {
            Ok(i) => Self::Index(i),
            Err(_) => Self::Name(s.to_owned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsvSchema {
    pub label_column: LabelColumn,
    pub delimiter: u8,
    pub has_header: bool,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            label_column: LabelColumn::Name("label".into()),
            delimiter: b',',
            has_header: true,
        }
    }
}

/// Denominator of the standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StdDenominator {
    /// `n − 1`, the sample standard deviation.
    #[default]
    Sample,
    /// `n`.
    Population,
}

impl StdDenominator {
    fn as_str(self) -> &'static str {
        match self {
            Self::Sample => "n-1",
            Self::Population => "n",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureScale {
    pub mean: f64,
    pub std: f64,
    pub zero_variance: bool,
}

/// Per-feature transform learned by [`standardize`].
#[derive(Debug, Clone, PartialEq)]
pub struct Standardization {
    pub denominator: StdDenominator,
    pub features: Vec<FeatureScale>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Samples by features.
    pub features: DenseMatrix,
    /// Class ids in `0..class_count`.
    pub labels: Vec<usize>,
    pub class_count: usize,
    pub feature_names: Option<Vec<String>>,
    /// Original label strings by class id, when labels were not integers.
    pub class_names: Option<Vec<String>>,
    pub standardization: Option<Standardization>,
}

impl Dataset {
    /// Validates labels: all in `0..class_count`, every class present.
    pub fn new(features: DenseMatrix, labels: Vec<usize>, class_count: usize) -> DataResult<Self> {
        if labels.len() != features.rows() {
            return Err(DataError::LabelCount {
                samples: features.rows(),
                labels: labels.len(),
            });
        }
        let present: BTreeSet<usize> = labels.iter().copied().collect();
        for class in 0..class_count {
            if !present.contains(&class) {
                return Err(DataError::EmptyClass(class));
            }
        }
        if let Some(&bad) = present.iter().find(|&&l| l >= class_count) {
            return Err(DataError::EmptyClass(bad));
        }
        Ok(Self {
            features,
            labels,
            class_count,
            feature_names: None,
            class_names: None,
            standardization: None,
        })
    }

    pub fn samples(&self) -> usize {
        self.features.rows()
    }

    pub fn feature_count(&self) -> usize {
        self.features.cols()
    }

    /// Name of feature `j`, falling back to its index.
    pub fn feature_name(&self, j: usize) -> String {
        self.feature_names
            .as_ref()
            .and_then(|n| n.get(j).cloned())
            .unwrap_or_else(|| format!("f{j}"))
    }

    /// Keeps the listed samples in order. Class ids are preserved; the
    /// result may lack some classes, so no presence check is made.
    pub fn subset(&self, samples: &[usize]) -> DataResult<Self> {
        let features = self.features.select_rows(samples).map_err(|_| DataError::NoSamples)?;
        Ok(Self {
            features,
            labels: samples.iter().map(|&i| self.labels[i]).collect(),
            class_count: self.class_count,
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
            standardization: self.standardization.clone(),
        })
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> DataError {
    DataError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads a labeled CSV. Features are returned raw.
pub fn load_csv(path: &Path, schema: &CsvSchema) -> DataResult<Dataset> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    parse_csv(&text, schema)
}

/// [`load_csv`] on in-memory text.
pub fn parse_csv(text: &str, schema: &CsvSchema) -> DataResult<Dataset> {
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(schema.delimiter)
        .has_headers(schema.has_header)
        .flexible(true)
        .from_reader(text.as_bytes());

    let header: Option<Vec<String>> = if schema.has_header {
        let h = reader.headers().map_err(|e| DataError::Csv(e.to_string()))?;
        Some(h.iter().map(|s| s.trim().to_owned()).collect())
    } else {
        None
    };

    let mut records = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| DataError::Csv(e.to_string()))?;
        if rec.len() == 1 && rec.get(0).is_some_and(|f| f.trim().is_empty()) {
            continue;
        }
        records.push(rec);
    }
    let width = match (&header, records.first()) {
        (Some(h), _) => h.len(),
        (None, Some(r)) => r.len(),
        (None, None) => return Err(DataError::NoSamples),
    };
    let label_idx = match &schema.label_column {
        LabelColumn::Index(i) if *i < width => *i,
        LabelColumn::Index(i) => return Err(DataError::MissingLabel(format!("#{i}"))),
        LabelColumn::Name(name) => header
            .as_ref()
            .and_then(|h| h.iter().position(|c| c == name))
            .ok_or_else(|| DataError::MissingLabel(name.clone()))?,
    };
    if records.is_empty() {
        return Err(DataError::NoSamples);
    }
    if width < 2 {
        return Err(DataError::NoFeatures);
    }
    let column_name = |j: usize| -> String {
        header
            .as_ref()
            .map_or_else(|| format!("#{j}"), |h| format!("{} (#{j})", h[j]))
    };

    let d = width - 1;
    let mut data = Vec::with_capacity(records.len() * d);
    let mut raw_labels = Vec::with_capacity(records.len());
    for (r, rec) in records.iter().enumerate() {
        let record = r + 1;
        if rec.len() != width {
            return Err(DataError::InconsistentWidth {
                record,
                expected: width,
                found: rec.len(),
            });
        }
        for (j, field) in rec.iter().enumerate() {
            let field = field.trim();
            if j == label_idx {
                if field.is_empty() {
                    return Err(DataError::EmptyLabel(record));
                }
                raw_labels.push(field.to_owned());
                continue;
            }
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => data.push(v),
                _ => {
                    return Err(DataError::Parse {
                        record,
                        column: column_name(j),
                        value: field.to_owned(),
                    })
                }
            }
        }
    }

    let features = DenseMatrix::new(records.len(), d, data).map_err(|_| DataError::NoFeatures)?;
    let (labels, class_count, class_names) = encode_labels(&raw_labels);
    let mut ds = Dataset::new(features, labels, class_count)?;
    ds.class_names = class_names;
    ds.feature_names = header.map(|h| {
        h.into_iter()
            .enumerate()
            .filter(|&(j, _)| j != label_idx)
            .map(|(_, n)| n)
            .collect()
    });
    Ok(ds)
}

/// Integer labels are used as class ids directly; anything else is mapped
/// to ids in sorted order of the distinct strings.
fn encode_labels(raw: &[String]) -> (Vec<usize>, usize, Option<Vec<String>>) {
    let as_ints: Option<Vec<usize>> = raw.iter().map(|s| s.parse::<usize>().ok()).collect();
    if let Some(ids) = as_ints {
        let count = ids.iter().max().map_or(0, |m| m + 1);
        return (ids, count, None);
    }
    let names: Vec<String> = raw.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    let ids = raw
        .iter()
        .map(|s| names.binary_search(s).expect("name collected above"))
        .collect();
    (ids, names.len(), Some(names))
}

/// Writes `ds` so that [`load_csv`] with the same schema reads it back
/// unchanged (standardization records are not part of the file).
pub fn write_csv(ds: &Dataset, path: &Path, schema: &CsvSchema) -> DataResult<()> {
    fs::write(path, to_csv_string(ds, schema)?).map_err(|e| io_err(path, e))
}

pub fn to_csv_string(ds: &Dataset, schema: &CsvSchema) -> DataResult<String> {
    let d = ds.feature_count();
    let (label_pos, label_name) = match &schema.label_column {
        LabelColumn::Index(i) => ((*i).min(d), "label".to_owned()),
        LabelColumn::Name(n) => (0, n.clone()),
    };
    let mut writer = csv::WriterBuilder::new()
        .delimiter(schema.delimiter)
        .from_writer(Vec::new());
    let csv_err = |e: csv::Error| DataError::Csv(e.to_string());
    if schema.has_header {
        let mut header: Vec<String> = (0..d).map(|j| ds.feature_name(j)).collect();
        header.insert(label_pos, label_name);
        writer.write_record(&header).map_err(csv_err)?;
    }
    for (i, row) in ds.features.row_iter().enumerate() {
        let mut fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        let label = match &ds.class_names {
            Some(names) => names[ds.labels[i]].clone(),
            None => ds.labels[i].to_string(),
        };
        fields.insert(label_pos, label);
        writer.write_record(&fields).map_err(csv_err)?;
    }
    let bytes = writer.into_inner().map_err(|e| DataError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Centers every feature and divides by its standard deviation. Features
/// with (numerically) zero variance become all-zeros and are flagged.
pub fn standardize(ds: &Dataset, denominator: StdDenominator) -> DataResult<Dataset> {
    let n = ds.samples();
    if n < 2 {
        return Err(DataError::TooFewSamples(n));
    }
    let d = ds.feature_count();
    let x = &ds.features;
    let features = (0..d)
        .map(|j| {
            let col = (0..n).map(|i| x.get(i, j));
            let mean = col.clone().sum::<f64>() / n as f64;
            let ss: f64 = col.clone().map(|v| (v - mean).powi(2)).sum();
            let denom = match denominator {
                StdDenominator::Sample => (n - 1) as f64,
                StdDenominator::Population => n as f64,
            };
            let std = (ss / denom).sqrt();
            let max_abs = col.map(f64::abs).fold(0.0, f64::max);
            // rounding leaves ~1e-17 relative spread in a constant column
            let zero_variance = std <= 1e-12 * max_abs || std == 0.0;
            FeatureScale {
                mean,
                std,
                zero_variance,
            }
        })
        .collect();
    let params = Standardization { denominator, features };
    apply_standardization(ds, &params)
}

/// Applies stored parameters (e.g. learned on a training split).
pub fn apply_standardization(ds: &Dataset, params: &Standardization) -> DataResult<Dataset> {
    let d = ds.feature_count();
    if params.features.len() != d {
        return Err(DataError::FeatureCount {
            expected: params.features.len(),
            found: d,
        });
    }
    let features = DenseMatrix::from_fn(ds.samples(), d, |i, j| {
        let s = &params.features[j];
        if s.zero_variance {
            0.0
        } else {
            (ds.features.get(i, j) - s.mean) / s.std
        }
    })
    .expect("finite inputs and positive scales");
    Ok(Dataset {
        features,
        standardization: Some(params.clone()),
        ..ds.clone()
    })
}

impl Standardization {
    /// `key = value` text, one feature per block of lines.
    pub fn to_key_value(&self, names: &[String]) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "denominator = {}", self.denominator.as_str());
        let _ = writeln!(out, "features = {}", self.features.len());
        for (j, s) in self.features.iter().enumerate() {
            let name = names.get(j).cloned().unwrap_or_else(|| format!("f{j}"));
            let _ = writeln!(out, "feature.{j}.name = {name}");
            let _ = writeln!(out, "feature.{j}.mean = {}", s.mean);
            let _ = writeln!(out, "feature.{j}.std = {}", s.std);
            let _ = writeln!(out, "feature.{j}.zero_variance = {}", s.zero_variance);
        }
        out
    }

    pub fn from_key_value(text: &str) -> DataResult<Self> {
        let bad = |m: String| DataError::Params(m);
        let mut denominator = None;
        let mut count = None;
        let mut means = std::collections::BTreeMap::new();
        let mut stds = std::collections::BTreeMap::new();
        let mut flags = std::collections::BTreeMap::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| bad(format!("line {}: expected key = value", ln + 1)))?;
            let num = |v: &str| {
                v.parse::<f64>()
                    .map_err(|_| bad(format!("line {}: bad number {v:?}", ln + 1)))
            };
            match key.split('.').collect::<Vec<_>>().as_slice() {
                ["denominator"] => {
                    denominator = Some(match value {
                        "n-1" => StdDenominator::Sample,
                        "n" => StdDenominator::Population,
                        other => return Err(bad(format!("unknown denominator {other:?}"))),
                    })
                }
                ["features"] => count = Some(value.parse::<usize>().map_err(|_| bad("bad feature count".into()))?),
                ["feature", j, field] => {
                    let j: usize = j.parse().map_err(|_| bad(format!("line {}: bad index", ln + 1)))?;
                    match *field {
                        "name" => {}
                        "mean" => {
                            means.insert(j, num(value)?);
                        }
                        "std" => {
                            stds.insert(j, num(value)?);
                        }
                        "zero_variance" => {
                            flags.insert(j, value == "true");
                        }
                        other => return Err(bad(format!("unknown field {other:?}"))),
                    }
                }
                _ => return Err(bad(format!("unknown key {key:?}"))),
            }
        }
        let count = count.ok_or_else(|| bad("missing `features`".into()))?;
        let features = (0..count)
            .map(|j| {
                Ok(FeatureScale {
                    mean: *means
                        .get(&j)
                        .ok_or_else(|| bad(format!("missing mean of feature {j}")))?,
                    std: *stds.get(&j).ok_or_else(|| bad(format!("missing std of feature {j}")))?,
                    zero_variance: flags.get(&j).copied().unwrap_or(false),
                })
            })
            .collect::<DataResult<Vec<_>>>()?;
        Ok(Self {
            denominator: denominator.unwrap_or_default(),
            features,
        })
    }
}

/// One-hot targets, n×c.
pub fn encode_targets(ds: &Dataset) -> DenseMatrix {
    let c = ds.class_count.max(1);
    DenseMatrix::from_fn(ds.samples(), c, |i, k| if ds.labels[i] == k { 1.0 } else { 0.0 }).expect("non-empty dataset")
}

/// `A` (features by samples, plus an all-ones row with `include_bias`) and
/// the one-hot `B`.
pub fn to_design_matrices(ds: &Dataset, include_bias: bool) -> (DenseMatrix, DenseMatrix) {
    let a = ds.features.transpose();
    let a = if include_bias {
        crate::regression::with_bias_row(&a)
    } else {
        a
    };
    (a, encode_targets(ds))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schema() -> CsvSchema {
        CsvSchema::default()
    }

    #[test]
    fn loads_small_file() {
        let ds = parse_csv("label,a,b\n0,1.5,2\n1,3,4\n0,-1,0.25\n", &schema()).unwrap();
        assert_eq!(ds.features.shape(), (3, 2));
        assert_eq!(ds.labels, vec![0, 1, 0]);
        assert_eq!(ds.class_count, 2);
        assert_eq!(
            ds.feature_names.as_deref(),
            Some(&["a".to_string(), "b".to_string()][..])
        );
    }

    #[test]
    fn parse_error_names_the_cell() {
        let err = parse_csv("label,a,b\n0,1,2\n1,x3,4\n", &schema()).unwrap_err();
        match err {
            DataError::Parse { record, column, value } => {
                assert_eq!(record, 2);
                assert_eq!(column, "a (#1)");
                assert_eq!(value, "x3");
            }
            other => panic!("{other:?}"),
        }
        let msg = parse_csv("label,a\n0,nan\n", &schema()).unwrap_err().to_string();
        assert!(msg.contains("record 1"), "{msg}");
    }

    #[test]
    fn structural_errors() {
        assert!(matches!(
            parse_csv("a,b\n1,2\n", &schema()),
            Err(DataError::MissingLabel(_))
        ));
        assert!(matches!(
            parse_csv("label,a\n0,1\n1\n", &schema()),
            Err(DataError::InconsistentWidth {
                record: 2,
                expected: 2,
                found: 1
            })
        ));
        assert!(matches!(parse_csv("label,a\n", &schema()), Err(DataError::NoSamples)));
        assert!(matches!(
            parse_csv("label,a\n,1\n", &schema()),
            Err(DataError::EmptyLabel(1))
        ));
        // integer labels must cover 0..c
        assert!(matches!(
            parse_csv("label,a\n0,1\n2,1\n", &schema()),
            Err(DataError::EmptyClass(1))
        ));
    }

    #[test]
    fn headerless_with_index_and_delimiter() {
        let s = CsvSchema {
            label_column: LabelColumn::Index(2),
            delimiter: b';',
            has_header: false,
        };
        let ds = parse_csv("1;2;1\n3;4;0\n", &s).unwrap();
        assert_eq!(ds.labels, vec![1, 0]);
        assert_eq!(ds.features.data(), &[1.0, 2.0, 3.0, 4.0]);
        assert!(ds.feature_names.is_none());
    }

    #[test]
    fn string_labels_map_in_sorted_order() {
        let ds = parse_csv("label,a\nAML,1\nALL,2\nAML,3\n", &schema()).unwrap();
        assert_eq!(ds.labels, vec![1, 0, 1]);
        assert_eq!(
            ds.class_names.as_deref(),
            Some(&["ALL".to_string(), "AML".to_string()][..])
        );
    }

    #[test]
    fn csv_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = DenseMatrix::from_fn(7, 4, |_, _| rng.random_range(-1e3..1e3)).unwrap();
        let mut ds = Dataset::new(x, vec![0, 1, 2, 0, 1, 2, 2], 3).unwrap();
        ds.feature_names = Some(vec!["g1".into(), "g 2".into(), "g,3".into(), "g4".into()]);
        for s in [
            schema(),
            CsvSchema {
                label_column: LabelColumn::Index(4),
                delimiter: b'\t',
                has_header: false,
            },
        ] {
            let text = to_csv_string(&ds, &s).unwrap();
            let back = parse_csv(&text, &s).unwrap();
            assert_eq!(back.features, ds.features);
            assert_eq!(back.labels, ds.labels);
            if s.has_header {
                assert_eq!(back, ds);
            }
        }
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        write_csv(&ds, &path, &schema()).unwrap();
        assert_eq!(load_csv(&path, &schema()).unwrap(), ds);
    }

    #[test]
    fn two_point_standardization() {
        let x = DenseMatrix::from_rows(&[[1.0, 5.0], [3.0, 5.0]]).unwrap();
        let ds = Dataset::new(x, vec![0, 0], 1).unwrap();
        let st = standardize(&ds, StdDenominator::Sample).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((st.features.get(0, 0) + h).abs() < 1e-15);
        assert!((st.features.get(1, 0) - h).abs() < 1e-15);
        assert_eq!(st.features.get(0, 1), 0.0);
        assert!(st.standardization.as_ref().unwrap().features[1].zero_variance);
        assert!(!st.standardization.as_ref().unwrap().features[0].zero_variance);

        let one = Dataset::new(DenseMatrix::zeros(1, 2), vec![0], 1).unwrap();
        assert!(matches!(
            standardize(&one, StdDenominator::Sample),
            Err(DataError::TooFewSamples(1))
        ));
    }

    #[test]
    fn constant_column_with_rounding_is_flagged() {
        let x = DenseMatrix::from_rows(&[[0.1], [0.1], [0.1]]).unwrap();
        let st = standardize(&Dataset::new(x, vec![0, 0, 0], 1).unwrap(), StdDenominator::Sample).unwrap();
        assert_eq!(st.features.data(), &[0.0, 0.0, 0.0]);
    }

    fn column_stats(x: &DenseMatrix, j: usize) -> (f64, f64) {
        let n = x.rows() as f64;
        let mean = (0..x.rows()).map(|i| x.get(i, j)).sum::<f64>() / n;
        let var = (0..x.rows()).map(|i| (x.get(i, j) - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (mean, var.sqrt())
    }

    #[test]
    fn random_standardization_and_idempotence() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let x = DenseMatrix::from_fn(50, 10, |_, j| rng.random_range(-5.0..5.0) * (j + 1) as f64 + j as f64).unwrap();
        let ds = Dataset::new(x, vec![0; 50], 1).unwrap();
        let st = standardize(&ds, StdDenominator::Sample).unwrap();
        for j in 0..10 {
            let (m, s) = column_stats(&st.features, j);
            assert!(m.abs() <= 1e-9 && (s - 1.0).abs() <= 1e-9);
        }
        let again = standardize(&st, StdDenominator::Sample).unwrap();
        let diff = again.features.sub(&st.features).unwrap().frobenius_norm();
        assert!(diff <= 1e-9);

        let pop = standardize(&ds, StdDenominator::Population).unwrap();
        let n = 50.0f64;
        let ratio = pop.features.get(0, 0) / st.features.get(0, 0);
        assert!((ratio - (n / (n - 1.0)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn stored_parameters_apply_and_round_trip() {
        let x = DenseMatrix::from_rows(&[[1.0, 7.0], [3.0, 7.0], [5.0, 7.0]]).unwrap();
        let ds = Dataset::new(x, vec![0, 1, 1], 2).unwrap();
        let st = standardize(&ds, StdDenominator::Sample).unwrap();
        let params = st.standardization.clone().unwrap();
        let text = params.to_key_value(&["a".into(), "b".into()]);
        let back = Standardization::from_key_value(&text).unwrap();
        assert_eq!(back, params);

        let held_out = Dataset::new(DenseMatrix::from_rows(&[[5.0, 1.0]]).unwrap(), vec![0], 1).unwrap();
        let applied = apply_standardization(&held_out, &back).unwrap();
        assert_eq!(applied.features.data(), &[1.0, 0.0]);
        assert!(Standardization::from_key_value("denominator = n\n").is_err());
        assert!(Standardization::from_key_value("bogus\n").is_err());
    }

    #[test]
    fn one_hot_targets() {
        let ds = Dataset::new(DenseMatrix::zeros(3, 1), vec![0, 1, 0], 2).unwrap();
        let b = encode_targets(&ds);
        assert_eq!(
            b,
            DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]).unwrap()
        );
        let single = Dataset::new(DenseMatrix::zeros(2, 1), vec![0, 0], 1).unwrap();
        assert_eq!(encode_targets(&single).data(), &[1.0, 1.0]);

        let ds = Dataset::new(DenseMatrix::zeros(6, 1), vec![2, 0, 1, 2, 2, 0], 3).unwrap();
        let b = encode_targets(&ds);
        for row in b.row_iter() {
            assert_eq!(row.iter().sum::<f64>(), 1.0);
            assert_eq!(row.iter().filter(|&&v| v == 1.0).count(), 1);
        }
        let col_sums: Vec<f64> = (0..3).map(|k| (0..6).map(|i| b.get(i, k)).sum()).collect();
        assert_eq!(col_sums, vec![2.0, 1.0, 3.0]);
    }

    #[test]
    fn design_matrices() {
        let x = DenseMatrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]]).unwrap();
        let ds = Dataset::new(x, vec![0, 1], 2).unwrap();
        let (a, b) = to_design_matrices(&ds, true);
        assert_eq!(a.shape(), (4, 2));
        assert_eq!(a.row(3), &[1.0, 1.0]);
        assert_eq!(a.row(0), &[1.0, 4.0]);
        let x = DenseMatrix::zeros(4, 2);
        assert_eq!(a.transpose().matmul(&x).unwrap().shape(), b.shape());
        let (a, _) = to_design_matrices(&ds, false);
        assert_eq!(a.shape(), (3, 2));
    }
}
