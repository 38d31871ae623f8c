//! Co-boundary matrices, weighted up/down/full Laplacians and their spectra.
//!
//! With `D_i` the co-boundary matrix and `W_i` the diagonal weight matrix of
//! dimension `i`:
//!
//! ```text
//! L_up(i)   = W_i^-1 D_i^T W_{i+1} D_i
//! L_down(i) = D_{i-1} W_{i-1}^-1 D_{i-1}^T W_i
//! ```
//!
//! Both are self-adjoint for the weighted inner product, so the similarity
//! `S = W^{1/2} M W^{-1/2}` is symmetric and carries the same spectrum.

use serde::Serialize;

use crate::complex::{orient, Orientation, SimplicialComplex, WeightAssignment};
use crate::dense::{symmetric_eigenvalues, DenseMatrix};
use crate::error::{Error, Result};

pub const DEFAULT_ZERO_THRESHOLD: f64 = 1e-8;
pub const EIGEN_OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_JACOBI_SWEEPS: usize = 100;

/// Integer matrix of `δ_i`: rows are `(i+1)`-faces, columns `i`-faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoboundaryMatrix {
    pub dim: usize,
    rows: usize,
    cols: usize,
    entries: Vec<i32>,
}

impl CoboundaryMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i32 {
        self.entries[r * self.cols + c]
    }

    pub fn to_rows(&self) -> Vec<Vec<i32>> {
        self.entries
            .chunks(self.cols.max(1))
            .take(self.rows)
            .map(<[i32]>::to_vec)
            .collect()
    }

    /// Exact integer product `self * rhs`.
    pub fn compose(&self, rhs: &CoboundaryMatrix) -> Vec<Vec<i64>> {
        assert_eq!(self.cols, rhs.rows);
        (0..self.rows)
            .map(|r| {
                (0..rhs.cols)
                    .map(|c| {
                        (0..self.cols)
                            .map(|k| self.get(r, k) as i64 * rhs.get(k, c) as i64)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }
}

/// Matrix of `δ_i` in the lexicographic face bases. When `orientation` is
/// given for dimension `i + 1`, each row is multiplied by that face's sign.
pub fn coboundary_matrix(
    k: &SimplicialComplex,
    i: usize,
    orientation: Option<&Orientation>,
) -> Result<CoboundaryMatrix> {
    if i >= k.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, max: k.dim() });
    }
    let rows = k.face_count(i + 1);
    let cols = k.face_count(i);
    let mut entries = vec![0i32; rows * cols];
    let flip = orientation.filter(|o| o.dim == i + 1);
    for r in 0..rows {
        let s = flip.map_or(1, |o| o.signs[r]) as i32;
        for (j, &c) in k.boundary(i + 1, r).iter().enumerate() {
            entries[r * cols + c] = s * if j % 2 == 0 { 1 } else { -1 };
        }
    }
    Ok(CoboundaryMatrix {
        dim: i,
        rows,
        cols,
        entries,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LaplacianKind {
    Up,
    Down,
    Full,
}

#[derive(Clone, Debug)]
pub struct LaplacianMatrix {
    pub kind: LaplacianKind,
    pub dim: usize,
    /// Operator in the face basis.
    pub operator: DenseMatrix,
    /// `W^{1/2} M W^{-1/2}`.
    pub symmetric: DenseMatrix,
}

fn symmetrize(m: &DenseMatrix, w: &[f64]) -> DenseMatrix {
    let n = m.rows();
    let mut s = DenseMatrix::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            s[(a, b)] = w[a].sqrt() * m[(a, b)] / w[b].sqrt();
        }
    }
    s
}

pub fn up_laplacian(k: &SimplicialComplex, i: usize, w: &WeightAssignment) -> Result<LaplacianMatrix> {
    k.require_dim(i)?;
    let n = k.face_count(i);
    let wi = w.dimension(i);
    let mut m = DenseMatrix::zeros(n, n);
    if i < k.dim() {
        let d = coboundary_matrix(k, i, None)?;
        let wup = w.dimension(i + 1);
        for (r, &wr) in wup.iter().enumerate().take(d.rows()) {
            let bd = k.boundary(i + 1, r);
            for &a in bd {
                for &b in bd {
                    m[(a, b)] += (d.get(r, a) * d.get(r, b)) as f64 * wr / wi[a];
                }
            }
        }
    }
    let symmetric = symmetrize(&m, wi);
    Ok(LaplacianMatrix {
        kind: LaplacianKind::Up,
        dim: i,
        operator: m,
        symmetric,
    })
}

fn down_matrix(
    k: &SimplicialComplex,
    i: usize,
    w: &WeightAssignment,
    orientation: Option<&Orientation>,
) -> Result<DenseMatrix> {
    if i == 0 || i > k.dim() {
        return Err(Error::DimensionOutOfRange { dim: i, max: k.dim() });
    }
    let d = coboundary_matrix(k, i - 1, orientation)?;
    let n = k.face_count(i);
    let wi = w.dimension(i);
    let wlow = w.dimension(i - 1);
    let mut m = DenseMatrix::zeros(n, n);
    for (c, &wc) in wlow.iter().enumerate().take(k.face_count(i - 1)) {
        let cf = k.cofacets(i - 1, c);
        for &a in cf {
            for &b in cf {
                m[(a, b)] += (d.get(a, c) * d.get(b, c)) as f64 * wi[b] / wc;
            }
        }
    }
    Ok(m)
}

pub fn down_laplacian(k: &SimplicialComplex, i: usize, w: &WeightAssignment) -> Result<LaplacianMatrix> {
    let m = down_matrix(k, i, w, None)?;
    let symmetric = symmetrize(&m, w.dimension(i));
    Ok(LaplacianMatrix {
        kind: LaplacianKind::Down,
        dim: i,
        operator: m,
        symmetric,
    })
}

/// Down Laplacian of the top dimension expressed in the basis oriented by `orientation`.
pub fn down_laplacian_oriented(
    k: &SimplicialComplex,
    w: &WeightAssignment,
    orientation: &Orientation,
) -> Result<LaplacianMatrix> {
    let i = orientation.dim;
    let m = down_matrix(k, i, w, Some(orientation))?;
    let symmetric = symmetrize(&m, w.dimension(i));
    Ok(LaplacianMatrix {
        kind: LaplacianKind::Down,
        dim: i,
        operator: m,
        symmetric,
    })
}

pub fn full_laplacian(k: &SimplicialComplex, i: usize, w: &WeightAssignment) -> Result<LaplacianMatrix> {
    let mut up = up_laplacian(k, i, w)?;
    if i > 0 {
        let down = down_laplacian(k, i, w)?;
        let n = up.operator.rows();
        for a in 0..n {
            for b in 0..n {
                up.operator[(a, b)] += down.operator[(a, b)];
                up.symmetric[(a, b)] += down.symmetric[(a, b)];
            }
        }
    }
    up.kind = LaplacianKind::Full;
    Ok(up)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub zero_threshold: f64,
}

impl Spectrum {
    pub fn nonzero(&self) -> Vec<f64> {
        self.eigenvalues
            .iter()
            .copied()
            .filter(|x| x.abs() > self.zero_threshold)
            .collect()
    }

    pub fn zero_multiplicity(&self) -> usize {
        self.eigenvalues.len() - self.nonzero().len()
    }

    /// Distinct eigenvalues (clustered at `tol`) with their multiplicities.
    pub fn multiplicities(&self, tol: f64) -> Vec<(f64, usize)> {
        let mut out: Vec<(f64, usize)> = Vec::new();
        for &x in &self.eigenvalues {
            match out.last_mut() {
                Some((v, n)) if (x - *v).abs() <= tol => *n += 1,
                _ => out.push((x, 1)),
            }
        }
        out
    }

    pub fn min(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

pub fn spectrum(l: &LaplacianMatrix, zero_threshold: f64) -> Result<Spectrum> {
    spectrum_of_symmetric(&l.symmetric, zero_threshold)
}

pub(crate) fn spectrum_of_symmetric(s: &DenseMatrix, zero_threshold: f64) -> Result<Spectrum> {
    if !s.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let eigenvalues = symmetric_eigenvalues(s, EIGEN_OFF_DIAGONAL_TOL, MAX_JACOBI_SWEEPS)
        .ok_or_else(|| Error::Solver("Jacobi iteration did not converge".into()))?;
    Ok(Spectrum {
        eigenvalues,
        zero_threshold,
    })
}

/// Compares two ascending lists of nonzero eigenvalues as multisets; returns
/// the largest positional deviation, or infinity when the counts differ.
pub fn multiset_deviation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub const PAIRING_TOL: f64 = 1e-7;

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub dim: usize,
    pub up_nonzero: Vec<f64>,
    pub down_nonzero: Vec<f64>,
    pub max_deviation: f64,
    pub passed: bool,
}

/// Nonzero spectra of `L_up(i)` and `L_down(i+1)` must coincide.
pub fn check_spectrum_pairing(
    k: &SimplicialComplex,
    i: usize,
    w: &WeightAssignment,
    zero_threshold: f64,
) -> Result<PairingReport> {
    let up = spectrum(&up_laplacian(k, i, w)?, zero_threshold)?.nonzero();
    let down = if i < k.dim() {
        spectrum(&down_laplacian(k, i + 1, w)?, zero_threshold)?.nonzero()
    } else {
        Vec::new()
    };
    let max_deviation = multiset_deviation(&up, &down);
    Ok(PairingReport {
        dim: i,
        passed: max_deviation <= PAIRING_TOL,
        up_nonzero: up,
        down_nonzero: down,
        max_deviation,
    })
}

/// `Σ_{E ∈ ∂F} 1/deg E` for every `i`-face `F`.
pub fn inverse_degree_sums(k: &SimplicialComplex, i: usize, w: &WeightAssignment) -> Vec<f64> {
    (0..k.face_count(i))
        .map(|f| k.boundary(i, f).iter().map(|&e| 1.0 / k.degree_of(i - 1, e, w)).sum())
        .collect()
}

/// Common value of `Σ_{E ∈ ∂F} 1/deg E`, i.e. `1/D`.
pub(crate) fn uniform_inverse_degree_sum(sums: &[f64]) -> Result<f64> {
    let min = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sums.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max - min > 1e-12 * max.abs().max(1.0) {
        return Err(Error::HeterogeneousDegreeSum { min, max });
    }
    Ok(min)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantEigenvalue {
    pub dim: usize,
    /// `1/D`
    pub inverse_degree_sum: f64,
    /// `Σ_{E ∈ ∂F} 2/deg E − (i+1)`
    pub value: f64,
    /// `max |L f − λ f|` for the oriented all-ones vector `f`.
    pub residual: f64,
    pub verified: bool,
}

/// Eigenvalue of the top-dimensional down Laplacian (delta weights) on the
/// function that is constant in an oriented basis.
pub fn constant_function_eigenvalue(k: &SimplicialComplex) -> Result<ConstantEigenvalue> {
    let orientation = orient(k)?;
    let w = WeightAssignment::delta(k)?;
    let i = orientation.dim;
    let inv = uniform_inverse_degree_sum(&inverse_degree_sums(k, i, &w))?;
    let value = 2.0 * inv - (i as f64 + 1.0);
    let l = down_laplacian_oriented(k, &w, &orientation)?;
    let ones = vec![1.0; k.face_count(i)];
    let residual = l
        .operator
        .mul_vec(&ones)
        .iter()
        .map(|x| (x - value).abs())
        .fold(0.0, f64::max);
    Ok(ConstantEigenvalue {
        dim: i,
        inverse_degree_sum: inv,
        value,
        residual,
        verified: residual <= 1e-9,
    })
}
