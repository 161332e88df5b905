//! Trained linear readout: ridge regression of one-hot digit targets on
//! X = [1, u, f], classification by argmax, and the no-reservoir linear
//! baseline.

use std::path::Path;

use nalgebra::DMatrix;

use crate::dataset::InputSignal;
use crate::error::{Error, Result};

/// Column-per-sample design matrix; rows are [1, u (16), f (feature dim)].
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    x: DMatrix<f64>,
    image_ids: Vec<usize>,
}

impl DesignMatrix {
    /// Assemble from per-image signals and (optionally empty) feature
    /// vectors. All feature vectors must share one length.
    pub fn assemble(us: &[[f64; 16]], features: &[Vec<f64>]) -> Result<Self> {
        if us.is_empty() {
            return Err(Error::invalid("design matrix needs at least one sample"));
        }
        let f_dim = if features.is_empty() {
            0
        } else {
            if features.len() != us.len() {
                return Err(Error::DimensionMismatch {
                    context: "DesignMatrix::assemble",
                    expected: us.len(),
                    found: features.len(),
                });
            }
            let d = features[0].len();
            if features.iter().any(|f| f.len() != d) {
                return Err(Error::invalid("inconsistent feature lengths"));
            }
            d
        };
        let rows = 1 + 16 + f_dim;
        let mut x = DMatrix::zeros(rows, us.len());
        for (k, u) in us.iter().enumerate() {
            x[(0, k)] = 1.0;
            for i in 0..16 {
                x[(1 + i, k)] = u[i];
            }
            if f_dim > 0 {
                for (i, v) in features[k].iter().enumerate() {
                    x[(17 + i, k)] = *v;
                }
            }
        }
        Ok(DesignMatrix {
            x,
            image_ids: (0..us.len()).collect(),
        })
    }

    /// Wrap an arbitrary design matrix (columns = samples). The image
    /// pipeline always goes through [`DesignMatrix::assemble`]; this exists
    /// for readouts over externally built feature sets.
    pub fn from_raw(x: DMatrix<f64>) -> Result<Self> {
        if x.ncols() == 0 || x.nrows() == 0 {
            return Err(Error::invalid("design matrix must be non-empty"));
        }
        let ids = (0..x.ncols()).collect();
        Ok(DesignMatrix { x, image_ids: ids })
    }

    pub fn with_image_ids(mut self, ids: Vec<usize>) -> Result<Self> {
        if ids.len() != self.n_samples() {
            return Err(Error::DimensionMismatch {
                context: "DesignMatrix::with_image_ids",
                expected: self.n_samples(),
                found: ids.len(),
            });
        }
        self.image_ids = ids;
        Ok(self)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn image_ids(&self) -> &[usize] {
        &self.image_ids
    }

    pub fn n_rows(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_samples(&self) -> usize {
        self.x.ncols()
    }

    /// Scale-aware default ridge coefficient: 1e−6 · trace(XXᵀ)/rows.
    pub fn default_beta(&self) -> f64 {
        let tr: f64 = self.x.iter().map(|v| v * v).sum();
        1e-6 * tr / self.n_rows() as f64
    }
}

/// Trained output layer mapping X-columns to 10 class scores.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ReadoutWeights {
    /// 10 × (1+16+feature-dim), row-major.
    rows: usize,
    cols: usize,
    beta: f64,
    data: Vec<f64>,
}

impl ReadoutWeights {
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string(self)
            .map_err(|e| Error::Config(format!("serializing weights: {e}")))?;
        std::fs::write(path, json).map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let w: ReadoutWeights = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("parsing weights {}: {e}", path.display())))?;
        if w.data.len() != w.rows * w.cols {
            return Err(Error::Config(format!(
                "weight file {}: {}×{} header does not match {} values",
                path.display(),
                w.rows,
                w.cols,
                w.data.len()
            )));
        }
        Ok(w)
    }
}

/// One-hot 10×N target matrix from digit labels.
pub fn one_hot_targets(labels: &[u8]) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(10, labels.len());
    for (k, &l) in labels.iter().enumerate() {
        y[(l as usize, k)] = 1.0;
    }
    y
}

/// W_out = Y Xᵀ (XXᵀ + βI)⁻¹ via Cholesky factorization of the Gram matrix
/// (never an explicit inverse).
pub fn train_ridge(x: &DesignMatrix, y_target: &DMatrix<f64>, beta: f64) -> Result<ReadoutWeights> {
    if y_target.ncols() != x.n_samples() {
        return Err(Error::DimensionMismatch {
            context: "train_ridge",
            expected: x.n_samples(),
            found: y_target.ncols(),
        });
    }
    if !(beta >= 0.0) {
        return Err(Error::invalid(format!("beta must be ≥ 0, got {beta}")));
    }
    let xm = x.matrix();
    let mut gram = xm * xm.transpose();
    for i in 0..gram.nrows() {
        gram[(i, i)] += beta;
    }
    let chol = nalgebra::Cholesky::new(gram).ok_or_else(|| {
        Error::Singular(format!(
            "XXᵀ + βI not positive definite at beta = {beta}; increase beta"
        ))
    })?;
    // nalgebra accepts exactly-zero pivots; treat a collapsed pivot as
    // numerical singularity so rank-deficient systems fail loudly.
    let l = chol.l_dirty();
    let d_max = (0..l.nrows()).map(|i| l[(i, i)]).fold(0.0, f64::max);
    let healthy = (0..l.nrows()).all(|i| {
        let d = l[(i, i)];
        d.is_finite() && d > d_max * 1e-7
    });
    if !healthy {
        return Err(Error::Singular(format!(
            "XXᵀ + βI numerically singular at beta = {beta}; increase beta"
        )));
    }
    // Solve (XXᵀ + βI) Wᵀ = X Yᵀ, then transpose.
    let rhs = xm * y_target.transpose();
    let wt = chol.solve(&rhs);
    let w = wt.transpose();
    Ok(ReadoutWeights {
        rows: w.nrows(),
        cols: w.ncols(),
        beta,
        data: w.transpose().as_slice().to_vec(), // row-major storage
    })
}

/// Argmax over the 10 class scores of W·x, ties broken by lowest digit.
pub fn classify(w: &ReadoutWeights, x_col: &[f64]) -> Result<u8> {
    if x_col.len() != w.cols {
        return Err(Error::DimensionMismatch {
            context: "classify",
            expected: w.cols,
            found: x_col.len(),
        });
    }
    let mut best = 0usize;
    let mut best_score = f64::NEG_INFINITY;
    for digit in 0..w.rows {
        let row = &w.data[digit * w.cols..(digit + 1) * w.cols];
        let score: f64 = row.iter().zip(x_col).map(|(a, b)| a * b).sum();
        if score > best_score {
            best_score = score;
            best = digit;
        }
    }
    Ok(best as u8)
}

/// Fraction of misclassified samples.
pub fn error_rate(w: &ReadoutWeights, x_test: &DesignMatrix, labels: &[u8]) -> Result<f64> {
    if labels.is_empty() {
        return Err(Error::invalid("empty test set"));
    }
    if labels.len() != x_test.n_samples() {
        return Err(Error::DimensionMismatch {
            context: "error_rate",
            expected: x_test.n_samples(),
            found: labels.len(),
        });
    }
    let xm = x_test.matrix();
    let mut wrong = 0usize;
    let mut col = vec![0.0; x_test.n_rows()];
    for k in 0..x_test.n_samples() {
        for i in 0..x_test.n_rows() {
            col[i] = xm[(i, k)];
        }
        if classify(w, &col)? != labels[k] {
            wrong += 1;
        }
    }
    Ok(wrong as f64 / labels.len() as f64)
}

/// Normalize a signal to unit Euclidean norm (used by the "normalized"
/// baseline variant); zero signals pass through unchanged.
pub fn normalize_signal(u: &[f64; 16]) -> [f64; 16] {
    let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return *u;
    }
    let mut out = *u;
    for v in &mut out {
        *v /= norm;
    }
    out
}

/// Linear classifier on X = [1, u] only (no reservoir features); returns the
/// test error rate. `normalized` rescales each u to unit norm first.
pub fn linear_baseline(
    train: &[InputSignal],
    test: &[InputSignal],
    normalized: bool,
    beta: Option<f64>,
) -> Result<f64> {
    let prep = |sigs: &[InputSignal]| -> Vec<[f64; 16]> {
        sigs.iter()
            .map(|s| if normalized { normalize_signal(&s.u) } else { s.u })
            .collect()
    };
    let us_train = prep(train);
    let us_test = prep(test);
    let x_train = DesignMatrix::assemble(&us_train, &[])?;
    let x_test = DesignMatrix::assemble(&us_test, &[])?;
    let y = one_hot_targets(&train.iter().map(|s| s.label).collect::<Vec<_>>());
    let beta = beta.unwrap_or_else(|| x_train.default_beta());
    let w = train_ridge(&x_train, &y, beta)?;
    error_rate(&w, &x_test, &test.iter().map(|s| s.label).collect::<Vec<_>>())
}
