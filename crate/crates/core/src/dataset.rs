//! Multi-label datasets, CSV ingest, train/test splitting and the
//! prediction-augmented views used along a classifier chain.
//!
//! Labels are stored internally as [`Sign`]s. On ingest both `{-1, +1}` and
//! `{0, 1}` label encodings are accepted (`0 -> -1`, `1 -> +1`).

use std::io::{Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::sign::{signs_from_f64, Sign};

/// Read access to a rectangular block of real-valued inputs.
///
/// Implemented by plain matrices and by [`AugmentedView`], so learners can be
/// trained on augmented inputs without materializing a widened copy.
pub trait FeatureRows {
    fn n_rows(&self) -> usize;
    fn width(&self) -> usize;
    fn value(&self, row: usize, col: usize) -> f64;

    /// Writes row `row` into `buf`, replacing its contents.
    fn row_into(&self, row: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend((0..self.width()).map(|j| self.value(row, j)));
    }

    fn row_vec(&self, row: usize) -> Vec<f64> {
        let mut buf = Vec::with_capacity(self.width());
        self.row_into(row, &mut buf);
        buf
    }
}

impl<T: FeatureRows + ?Sized> FeatureRows for &T {
    fn n_rows(&self) -> usize {
        (**self).n_rows()
    }
    fn width(&self) -> usize {
        (**self).width()
    }
    fn value(&self, row: usize, col: usize) -> f64 {
        (**self).value(row, col)
    }
}

/// Dense row-major matrix of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix data length",
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Csv {
                    row: i + 1,
                    message: format!("expected {cols} values, found {}", r.len()),
                });
            }
            data.extend_from_slice(r);
        }
        Matrix::new(rows.len(), cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(self.row(i));
        }
        Matrix {
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }
}

impl FeatureRows for Matrix {
    fn n_rows(&self) -> usize {
        self.rows
    }
    fn width(&self) -> usize {
        self.cols
    }
    #[inline]
    fn value(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }
    fn row_into(&self, row: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend_from_slice(self.row(row));
    }
}

/// Feature matrix plus a `K`-column sign label matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiLabelDataset {
    features: Matrix,
    /// Row-major `m x K`.
    labels: Vec<Sign>,
    n_labels: usize,
    feature_names: Vec<String>,
    label_names: Vec<String>,
}

impl MultiLabelDataset {
    /// Builds a dataset with default column names `x0..` and `y0..`.
    pub fn new(features: Matrix, labels: Vec<Vec<Sign>>) -> Result<Self> {
        let d = features.cols();
        let k = labels.first().map(Vec::len).unwrap_or(0);
        let feature_names = (0..d).map(|j| format!("x{j}")).collect();
        let label_names = (0..k).map(|j| format!("y{j}")).collect();
        Self::with_names(features, labels, feature_names, label_names)
    }

    pub fn with_names(
        features: Matrix,
        labels: Vec<Vec<Sign>>,
        feature_names: Vec<String>,
        label_names: Vec<String>,
    ) -> Result<Self> {
        let m = features.rows();
        if m == 0 {
            return Err(Error::invalid("dataset must have at least one row"));
        }
        if features.cols() == 0 {
            return Err(Error::invalid("dataset must have at least one feature column"));
        }
        if labels.len() != m {
            return Err(Error::DimensionMismatch {
                what: "label rows",
                expected: m,
                found: labels.len(),
            });
        }
        let k = labels[0].len();
        if k == 0 {
            return Err(Error::invalid("dataset must have at least one label column"));
        }
        let mut flat = Vec::with_capacity(m * k);
        for (i, row) in labels.iter().enumerate() {
            if row.len() != k {
                return Err(Error::Csv {
                    row: i + 1,
                    message: format!("expected {k} labels, found {}", row.len()),
                });
            }
            flat.extend_from_slice(row);
        }
        if feature_names.len() != features.cols() {
            return Err(Error::DimensionMismatch {
                what: "feature names",
                expected: features.cols(),
                found: feature_names.len(),
            });
        }
        if label_names.len() != k {
            return Err(Error::DimensionMismatch {
                what: "label names",
                expected: k,
                found: label_names.len(),
            });
        }
        Ok(MultiLabelDataset {
            features,
            labels: flat,
            n_labels: k,
            feature_names,
            label_names,
        })
    }

    /// Number of examples `m`.
    pub fn m(&self) -> usize {
        self.features.rows()
    }

    /// Number of input features `d`.
    pub fn d(&self) -> usize {
        self.features.cols()
    }

    /// Number of labels `K`.
    pub fn k(&self) -> usize {
        self.n_labels
    }

    pub fn features(&self) -> &Matrix {
        &self.features
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn label_names(&self) -> &[String] {
        &self.label_names
    }

    #[inline]
    pub fn label(&self, row: usize, label: usize) -> Sign {
        self.labels[row * self.n_labels + label]
    }

    pub fn label_row(&self, row: usize) -> &[Sign] {
        &self.labels[row * self.n_labels..(row + 1) * self.n_labels]
    }

    pub fn label_column(&self, label: usize) -> Vec<Sign> {
        (0..self.m()).map(|i| self.label(i, label)).collect()
    }

    /// Rows `idx` (in that order) as a new dataset.
    pub fn subset(&self, idx: &[usize]) -> Result<MultiLabelDataset> {
        let features = self.features.select_rows(idx);
        let labels = idx.iter().map(|&i| self.label_row(i).to_vec()).collect();
        Self::with_names(
            features,
            labels,
            self.feature_names.clone(),
            self.label_names.clone(),
        )
    }

    /// The same examples with label columns reordered: new column `j` is old
    /// column `perm[j]`.
    pub fn permute_labels(&self, perm: &[usize]) -> Result<MultiLabelDataset> {
        crate::chain::ChainOrder::new(perm.to_vec(), self.k())?;
        let labels = (0..self.m())
            .map(|i| perm.iter().map(|&p| self.label(i, p)).collect())
            .collect();
        let names = perm.iter().map(|&p| self.label_names[p].clone()).collect();
        Self::with_names(self.features.clone(), labels, self.feature_names.clone(), names)
    }

    /// Reads a CSV whose last `k_labels` columns are labels.
    pub fn load_csv(path: impl AsRef<Path>, k_labels: usize) -> Result<Self> {
        let path = path.as_ref();
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv(file, k_labels)
    }

    /// Parses CSV from any reader. Row numbers in errors are 1-based data
    /// rows, not counting the header.
    pub fn read_csv<R: Read>(reader: R, k_labels: usize) -> Result<Self> {
        if k_labels == 0 {
            return Err(Error::invalid("at least one label column is required"));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| Error::Csv {
                row: 0,
                message: e.to_string(),
            })?
            .iter()
            .map(str::to_owned)
            .collect();
        let width = header.len();
        if width <= k_labels {
            return Err(Error::Csv {
                row: 0,
                message: format!(
                    "header has {width} columns; need at least one feature plus {k_labels} labels"
                ),
            });
        }
        let d = width - k_labels;

        let mut features = Vec::new();
        let mut labels = Vec::new();
        for (i, record) in rdr.records().enumerate() {
            let row = i + 1;
            let record = record.map_err(|e| Error::Csv {
                row,
                message: e.to_string(),
            })?;
            if record.len() != width {
                return Err(Error::Csv {
                    row,
                    message: format!("expected {width} fields, found {}", record.len()),
                });
            }
            for (j, field) in record.iter().take(d).enumerate() {
                let v: f64 = field.parse().map_err(|_| Error::Csv {
                    row,
                    message: format!("feature column {} is not numeric: {field:?}", header[j]),
                })?;
                if !v.is_finite() {
                    return Err(Error::Csv {
                        row,
                        message: format!("feature column {} is not finite", header[j]),
                    });
                }
                features.push(v);
            }
            let mut lab = Vec::with_capacity(k_labels);
            for (j, field) in record.iter().skip(d).enumerate() {
                let v: i64 = field.parse().map_err(|_| Error::Csv {
                    row,
                    message: format!("label column {} is not an integer: {field:?}", header[d + j]),
                })?;
                let s = match v {
                    -1 | 0 => Sign::Neg,
                    1 => Sign::Pos,
                    _ => {
                        return Err(Error::Csv {
                            row,
                            message: format!(
                                "label column {} has value {v}; expected -1, 0 or 1",
                                header[d + j]
                            ),
                        })
                    }
                };
                lab.push(s);
            }
            labels.push(lab);
        }
        let m = labels.len();
        let features = Matrix::new(m, d, features)?;
        Self::with_names(
            features,
            labels,
            header[..d].to_vec(),
            header[d..].to_vec(),
        )
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let csv_err = |e: csv::Error| Error::Csv {
            row: 0,
            message: e.to_string(),
        };
        w.write_record(self.feature_names.iter().chain(&self.label_names))
            .map_err(csv_err)?;
        let mut fields = Vec::with_capacity(self.d() + self.k());
        for i in 0..self.m() {
            fields.clear();
            fields.extend(self.features.row(i).iter().map(|v| v.to_string()));
            fields.extend(self.label_row(i).iter().map(|s| s.to_string()));
            w.write_record(&fields).map_err(csv_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv writer>", e))?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    /// Random row partition into `(train, test)`, deterministic given `seed`.
    ///
    /// The train side gets `floor(train_fraction * m)` rows, clamped so both
    /// sides keep at least one row.
    pub fn split(&self, train_fraction: f64, seed: u64) -> Result<(Self, Self)> {
        let (train, test) = split_indices(self.m(), train_fraction, seed)?;
        Ok((self.subset(&train)?, self.subset(&test)?))
    }
}

/// The index partition used by [`MultiLabelDataset::split`].
pub fn split_indices(m: usize, train_fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::invalid(format!(
            "train fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    if m < 2 {
        return Err(Error::invalid("splitting needs at least two rows"));
    }
    let n_train = ((train_fraction * m as f64).floor() as usize).clamp(1, m - 1);
    let mut idx: Vec<usize> = (0..m).collect();
    idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let test = idx.split_off(n_train);
    Ok((idx, test))
}

/// The inputs `z^(k)` seen by the `k`-th classifier of a chain: the base
/// features followed by `k - 1` prediction columns.
///
/// Predictions are kept as a separate column block; the base dataset is only
/// borrowed.
#[derive(Debug, Clone)]
pub struct AugmentedView<'a> {
    base: &'a MultiLabelDataset,
    order: Vec<usize>,
    step: usize,
    predictions: Vec<Vec<Sign>>,
}

impl<'a> AugmentedView<'a> {
    /// The step-1 view (`z^(1) = x`).
    pub fn new(base: &'a MultiLabelDataset, order: &[usize]) -> Self {
        AugmentedView {
            base,
            order: order.to_vec(),
            step: 1,
            predictions: Vec::new(),
        }
    }

    pub fn base(&self) -> &'a MultiLabelDataset {
        self.base
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// 1-based chain step.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn predictions(&self) -> &[Vec<Sign>] {
        &self.predictions
    }

    /// Original label index trained at this view's step, if the order covers it.
    pub fn target_label(&self) -> Option<usize> {
        self.order.get(self.step - 1).copied()
    }

    /// Appends a prediction column, producing the view for the next step.
    pub fn augment(&self, column: &[Sign]) -> Result<AugmentedView<'a>> {
        if column.len() != self.base.m() {
            return Err(Error::DimensionMismatch {
                what: "augmentation column length",
                expected: self.base.m(),
                found: column.len(),
            });
        }
        let mut predictions = self.predictions.clone();
        predictions.push(column.to_vec());
        Ok(AugmentedView {
            base: self.base,
            order: self.order.clone(),
            step: self.step + 1,
            predictions,
        })
    }

    /// Like [`augment`](Self::augment) but validates real-valued entries.
    pub fn augment_values(&self, column: &[f64]) -> Result<AugmentedView<'a>> {
        self.augment(&signs_from_f64(column)?)
    }
}

impl FeatureRows for AugmentedView<'_> {
    fn n_rows(&self) -> usize {
        self.base.m()
    }

    fn width(&self) -> usize {
        self.base.d() + self.predictions.len()
    }

    #[inline]
    fn value(&self, row: usize, col: usize) -> f64 {
        let d = self.base.d();
        if col < d {
            self.base.features.value(row, col)
        } else {
            self.predictions[col - d][row].to_f64()
        }
    }

    fn row_into(&self, row: usize, buf: &mut Vec<f64>) {
        buf.clear();
        buf.extend_from_slice(self.base.features.row(row));
        buf.extend(self.predictions.iter().map(|c| c[row].to_f64()));
    }
}
