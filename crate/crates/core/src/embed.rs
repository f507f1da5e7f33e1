//! Euclidean realization of squared-distance matrices.
//!
//! A symmetric matrix `M` with zero diagonal is realizable as squared
//! Euclidean distances of a point set exactly when its double-centered Gram
//! matrix `G = -1/2 J M J` (with `J = I - 11^T/n`) is positive
//! semidefinite. `schoenberg_check` tests that; `classical_mds` recovers
//! coordinates `P = V L^{1/2}` from the spectral decomposition of `G`.
//!
//! The eigensolver is a cyclic Jacobi rotation scheme with a fixed sweep
//! order, so all results are deterministic.

use std::fmt::Write as _;

use thiserror::Error;

use crate::facility::LocationInstance;

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("matrix must be square, got {rows} rows of width {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix not symmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("matrix diagonal entry ({i},{i}) is nonzero")]
    NonzeroDiagonal { i: usize },
    #[error("negative entry at ({i},{j})")]
    Negative { i: usize, j: usize },
    #[error("matrix is not embeddable (minimal Gram eigenvalue {min_eigenvalue:e})")]
    NotEmbeddable { min_eigenvalue: f64 },
    #[error("point rows do not match the matrix dimension")]
    DimensionMismatch,
    #[error("invalid matrix file: {0}")]
    Format(String),
}

/// Symmetric nonnegative matrix with zero diagonal, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self, EmbedError> {
        if entries.len() != n * n {
            return Err(EmbedError::NotSquare {
                rows: n,
                cols: entries.len().checked_div(n).unwrap_or(0),
            });
        }
        for i in 0..n {
            if entries[i * n + i] != 0.0 {
                return Err(EmbedError::NonzeroDiagonal { i });
            }
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(EmbedError::Asymmetric { i, j });
                }
                if entries[i * n + j] < 0.0 {
                    return Err(EmbedError::Negative { i, j });
                }
            }
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, EmbedError> {
        let n = rows.len();
        for r in rows {
            if r.len() != n {
                return Err(EmbedError::NotSquare {
                    rows: n,
                    cols: r.len(),
                });
            }
        }
        DistanceMatrix::new(n, rows.iter().flatten().copied().collect())
    }

    /// Float view of an instance's exact distance matrix.
    pub fn from_instance(inst: &LocationInstance) -> Self {
        DistanceMatrix::from_rows(&inst.dist().to_f64_rows())
            .expect("exact matrices are symmetric with zero diagonal")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// The quadratic form `u^T M u`.
    pub fn quadratic_form(&self, u: &[f64]) -> f64 {
        let mut total = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                total += self.get(i, j) * u[i] * u[j];
            }
        }
        total
    }

    /// Double-centered Gram matrix `G = -1/2 J M J`, row-major.
    pub fn gram(&self) -> Vec<f64> {
        let n = self.n;
        let row_mean: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).sum::<f64>() / n as f64)
            .collect();
        let grand_mean = row_mean.iter().sum::<f64>() / n as f64;
        let mut g = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                g[i * n + j] = -0.5 * (self.get(i, j) - row_mean[i] - row_mean[j] + grand_mean);
            }
        }
        g
    }

    /// `n` header line followed by comma-separated rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self, EmbedError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| EmbedError::Format("empty matrix file".to_string()))?;
        let n: usize = header
            .trim()
            .split(',')
            .next()
            .unwrap_or("")
            .trim()
            .parse()
            .map_err(|_| EmbedError::Format(format!("invalid header `{header}`")))?;
        let mut entries = Vec::with_capacity(n * n);
        for line in lines {
            for field in line.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| EmbedError::Format(format!("invalid entry `{field}`")))?;
                entries.push(v);
            }
        }
        if entries.len() != n * n {
            return Err(EmbedError::Format(format!(
                "expected {} entries, found {}",
                n * n,
                entries.len()
            )));
        }
        DistanceMatrix::new(n, entries)
    }
}

/// Outcome of the embeddability test.
#[derive(Clone, Debug)]
pub enum SchoenbergResult {
    /// PSD Gram matrix: realizable as squared Euclidean distances.
    Embeddable { min_eigenvalue: f64 },
    /// Witness `u` with `u . 1 = 0` and `u^T M u > 0`.
    NotEmbeddable {
        min_eigenvalue: f64,
        witness: Vec<f64>,
        quadratic_form: f64,
    },
}

impl SchoenbergResult {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, SchoenbergResult::Embeddable { .. })
    }
}

/// Point realization of an embeddable matrix.
#[derive(Clone, Debug)]
pub struct EmbeddingResult {
    /// One row per point, `dim` coordinates each.
    pub points: Vec<Vec<f64>>,
    pub dim: usize,
    /// `max |  ||p_i - p_j||^2 - M_ij |` over all pairs.
    pub max_abs_error: f64,
}

impl EmbeddingResult {
    /// `n,D` header line followed by the coordinate rows.
    pub fn to_csv(&self) -> String {
        let mut out = format!("{},{}\n", self.points.len(), self.dim);
        for p in &self.points {
            let row: Vec<String> = p.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Tests embeddability into squared Euclidean space: the Gram matrix must
/// have no eigenvalue below `-tol`. On failure the eigenvector of the most
/// negative eigenvalue, re-centered against the all-ones direction, is
/// returned as a witness.
pub fn schoenberg_check(m: &DistanceMatrix, tol: f64) -> SchoenbergResult {
    let n = m.n();
    if n <= 1 {
        return SchoenbergResult::Embeddable {
            min_eigenvalue: 0.0,
        };
    }
    let eig = jacobi_eigen(n, m.gram());
    let min_eigenvalue = *eig.values.last().expect("nonempty spectrum");
    if min_eigenvalue >= -tol {
        return SchoenbergResult::Embeddable { min_eigenvalue };
    }
    let v = &eig.vectors[eig.values.len() - 1];
    let mean = v.iter().sum::<f64>() / n as f64;
    let mut witness: Vec<f64> = v.iter().map(|x| x - mean).collect();
    // deterministic sign: first component of visible magnitude positive
    if let Some(first) = witness.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            witness.iter_mut().for_each(|x| *x = -*x);
        }
    }
    let quadratic_form = m.quadratic_form(&witness);
    SchoenbergResult::NotEmbeddable {
        min_eigenvalue,
        witness,
        quadratic_form,
    }
}

/// Classical multidimensional scaling: spectral decomposition of the Gram
/// matrix, eigenvalues within `tol` of zero clamped away, coordinates
/// `V L^{1/2}` on the remaining positive eigendirections.
pub fn classical_mds(m: &DistanceMatrix, tol: f64) -> Result<EmbeddingResult, EmbedError> {
    let n = m.n();
    if n == 0 {
        return Ok(EmbeddingResult {
            points: Vec::new(),
            dim: 0,
            max_abs_error: 0.0,
        });
    }
    let eig = jacobi_eigen(n, m.gram());
    let min_eigenvalue = *eig.values.last().unwrap();
    if min_eigenvalue < -tol {
        return Err(EmbedError::NotEmbeddable { min_eigenvalue });
    }
    let kept: Vec<usize> = (0..n).filter(|&i| eig.values[i] > tol).collect();
    let dim = kept.len();
    let mut points = vec![vec![0.0; dim]; n];
    for (col, &idx) in kept.iter().enumerate() {
        let scale = eig.values[idx].sqrt();
        for (row, point) in points.iter_mut().enumerate() {
            point[col] = eig.vectors[idx][row] * scale;
        }
    }
    let max_abs_error = roundtrip_error(m, &points)?;
    Ok(EmbeddingResult {
        points,
        dim,
        max_abs_error,
    })
}

/// Largest absolute deviation between pairwise squared distances of `points`
/// and the matrix entries.
pub fn roundtrip_error(m: &DistanceMatrix, points: &[Vec<f64>]) -> Result<f64, EmbedError> {
    let n = m.n();
    if points.len() != n {
        return Err(EmbedError::DimensionMismatch);
    }
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            if points[i].len() != points[j].len() {
                return Err(EmbedError::DimensionMismatch);
            }
            let sq: f64 = points[i]
                .iter()
                .zip(&points[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            worst = worst.max((sq - m.get(i, j)).abs());
        }
    }
    Ok(worst)
}

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector of `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major).
/// Sweeps run in a fixed (p,q) order until the off-diagonal Frobenius mass
/// drops below 1e-12, so the output is deterministic.
pub fn jacobi_eigen(n: usize, mut a: Vec<f64>) -> SymmetricEigen {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    const OFF_THRESHOLD: f64 = 1e-12;
    const MAX_SWEEPS: usize = 64;

    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                s += a[p * n + q] * a[p * n + q];
            }
        }
        (2.0 * s).sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= OFF_THRESHOLD {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[j * n + j]
            .partial_cmp(&a[i * n + i])
            .expect("eigenvalues are finite")
            .then(i.cmp(&j))
    });
    let values: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<f64> = (0..n).map(|row| v[row * n + col]).collect();
            if let Some(first) = vec.iter().find(|x| x.abs() > 1e-12) {
                if *first < 0.0 {
                    vec.iter_mut().for_each(|x| *x = -*x);
                }
            }
            vec
        })
        .collect();
    SymmetricEigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[f64]]) -> DistanceMatrix {
        DistanceMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn jacobi_diagonalizes_known_matrix() {
        // eigenvalues of [[2,1],[1,2]] are 3 and 1
        let eig = jacobi_eigen(2, vec![2.0, 1.0, 1.0, 2.0]);
        assert!((eig.values[0] - 3.0).abs() < 1e-12);
        assert!((eig.values[1] - 1.0).abs() < 1e-12);
        let v0 = &eig.vectors[0];
        assert!((v0[0] - v0[1]).abs() < 1e-9);
    }

    #[test]
    fn jacobi_reconstructs_input() {
        let a = vec![
            4.0, 1.0, -2.0, 1.0, //
            1.0, 2.0, 0.0, 3.0, //
            -2.0, 0.0, 3.0, -1.0, //
            1.0, 3.0, -1.0, 1.0,
        ];
        let n = 4;
        let eig = jacobi_eigen(n, a.clone());
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for k in 0..n {
                    sum += eig.values[k] * eig.vectors[k][i] * eig.vectors[k][j];
                }
                assert!((sum - a[i * n + j]).abs() < 1e-9, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn two_points_embed_on_a_line() {
        let m = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(schoenberg_check(&m, 1e-9).is_embeddable());
        let emb = classical_mds(&m, 1e-9).unwrap();
        assert_eq!(emb.dim, 1);
        let d = (emb.points[0][0] - emb.points[1][0]).powi(2);
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn triangle_violator_rejected_with_witness() {
        let m = mat(&[&[0.0, 1.0, 9.0], &[1.0, 0.0, 1.0], &[9.0, 1.0, 0.0]]);
        match schoenberg_check(&m, 1e-9) {
            SchoenbergResult::NotEmbeddable {
                witness,
                quadratic_form,
                ..
            } => {
                let sum: f64 = witness.iter().sum();
                let norm: f64 = witness.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!(sum.abs() <= 1e-12 * norm);
                assert!(quadratic_form > 0.0);
                // the witness direction is (1,-2,1)/sqrt(6): u^T M u = 10/6 per unit norm
                assert!((quadratic_form / (norm * norm) - 10.0 / 6.0).abs() < 1e-9);
            }
            SchoenbergResult::Embeddable { .. } => panic!("matrix must be rejected"),
        }
        assert!(classical_mds(&m, 1e-9).is_err());
    }

    #[test]
    fn direct_quadratic_form_of_reference_witness() {
        let m = mat(&[&[0.0, 1.0, 9.0], &[1.0, 0.0, 1.0], &[9.0, 1.0, 0.0]]);
        assert_eq!(m.quadratic_form(&[1.0, -2.0, 1.0]), 10.0);
    }

    #[test]
    fn regular_simplex_embeds_in_full_dimension() {
        for n in 2..=6usize {
            let rows: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
                .collect();
            let m = DistanceMatrix::from_rows(&rows).unwrap();
            assert!(schoenberg_check(&m, 1e-9).is_embeddable());
            let emb = classical_mds(&m, 1e-9).unwrap();
            assert_eq!(emb.dim, n - 1);
            assert!(emb.max_abs_error < 1e-9, "n={n}: {}", emb.max_abs_error);
        }
    }

    #[test]
    fn zero_matrix_embeds_as_identical_points() {
        let m = mat(&[&[0.0, 0.0], &[0.0, 0.0]]);
        let emb = classical_mds(&m, 1e-9).unwrap();
        assert_eq!(emb.dim, 0);
        assert_eq!(emb.max_abs_error, 0.0);
    }

    #[test]
    fn roundtrip_error_measures_max_deviation() {
        let m = mat(&[&[0.0, 4.0], &[4.0, 0.0]]);
        // all points at the origin: error equals the largest entry
        assert_eq!(roundtrip_error(&m, &[vec![0.0], vec![0.0]]).unwrap(), 4.0);
        assert_eq!(roundtrip_error(&m, &[vec![0.0], vec![2.0]]).unwrap(), 0.0);
        assert!(roundtrip_error(&m, &[vec![0.0]]).is_err());
    }

    #[test]
    #[allow(clippy::needless_range_loop)] // symmetric matrix fill
    fn quadratic_form_and_gram_psd_agree() {
        // randomized cross-check of the two formulations on 1-orthogonal u
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.random_range(2..7usize);
            let mut rows = vec![vec![0.0; n]; n];
            for i in 0..n {
                for j in 0..i {
                    let d: f64 = rng.random_range(0.0..4.0);
                    rows[i][j] = d;
                    rows[j][i] = d;
                }
            }
            let m = DistanceMatrix::from_rows(&rows).unwrap();
            let psd = schoenberg_check(&m, 1e-9).is_embeddable();
            // sample 1-orthogonal directions; any positive form contradicts PSD
            let mut saw_positive = false;
            for _ in 0..200 {
                let mut u: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
                let mean = u.iter().sum::<f64>() / n as f64;
                u.iter_mut().for_each(|x| *x -= mean);
                if m.quadratic_form(&u) > 1e-7 {
                    saw_positive = true;
                    break;
                }
            }
            if psd {
                assert!(!saw_positive, "embeddable matrix with positive form");
            }
            if let SchoenbergResult::NotEmbeddable {
                witness,
                quadratic_form,
                ..
            } = schoenberg_check(&m, 1e-9)
            {
                assert!(quadratic_form > 0.0);
                let recomputed = m.quadratic_form(&witness);
                assert!(
                    (recomputed - quadratic_form).abs() <= 1e-9 * quadratic_form.abs().max(1.0)
                );
            }
        }
    }

    #[test]
    fn csv_round_trip() {
        let m = mat(&[&[0.0, 1.5], &[1.5, 0.0]]);
        let text = m.to_csv();
        assert!(text.starts_with("2\n"));
        assert_eq!(DistanceMatrix::parse_csv(&text).unwrap(), m);
    }

    #[test]
    fn csv_rejects_malformed_input() {
        assert!(DistanceMatrix::parse_csv("").is_err());
        assert!(DistanceMatrix::parse_csv("2\n0,1\n").is_err());
        assert!(DistanceMatrix::parse_csv("2\n0,x\n1,0\n").is_err());
    }

    #[test]
    fn points_csv_header() {
        let m = mat(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let emb = classical_mds(&m, 1e-9).unwrap();
        assert!(emb.to_csv().starts_with("2,1\n"));
    }
}
