//! Symmetric eigensolver and spectral statistics.
//!
//! Householder tridiagonalization followed by implicit QL with Wilkinson-type
//! shifts. Before solving, the matrix is split along exact block structure
//! when it has any: index classes mod 4 or mod 2 with vanishing cross entries
//! (Galerkin matrices), or invariance under reversing the index order
//! (Nyström matrices on symmetric nodes). Each block is solved separately and
//! eigenvectors are mapped back to the full space.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::operators::ConcentrationMatrix;

/// QL iterations allowed per eigenvalue.
pub const MAX_SWEEPS: usize = 64;

/// Eigenvalues sorted in descending order, with optional eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSpectrum {
    dim: usize,
    eigenvalues: Vec<f64>,
    /// Column-major: column `j` is the unit eigenvector for `eigenvalues[j]`.
    eigenvectors: Option<Vec<f64>>,
}

impl SymSpectrum {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn has_vectors(&self) -> bool {
        self.eigenvectors.is_some()
    }

    pub fn eigenvector(&self, j: usize) -> Option<&[f64]> {
        self.eigenvectors
            .as_ref()
            .map(|v| &v[j * self.dim..(j + 1) * self.dim])
    }

    /// `Σ λ^p`.
    pub fn moment(&self, p: i32) -> f64 {
        self.eigenvalues.iter().map(|l| l.powi(p)).sum()
    }

    pub fn count_above(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > threshold).count()
    }

    /// Eigenvalues in the open interval `(low, high)`.
    pub fn count_in(&self, low: f64, high: f64) -> usize {
        self.eigenvalues.iter().filter(|&&l| l > low && l < high).count()
    }

    /// Number of eigenvalues in `(eps, 1 - eps)`.
    pub fn plunge_width(&self, eps: f64) -> usize {
        self.count_in(eps, 1.0 - eps)
    }

    /// Largest index `k` (1-based count) such that the first `k` eigenvalues
    /// all exceed `threshold`.
    pub fn leading_run_above(&self, threshold: f64) -> usize {
        self.eigenvalues.iter().take_while(|&&l| l > threshold).count()
    }
}

/// Eigen-decomposition of a concentration matrix.
pub fn eigvals_symmetric(matrix: &ConcentrationMatrix, want_vectors: bool) -> Result<SymSpectrum> {
    eigen_dense(matrix.dim(), matrix.entries(), want_vectors)
}

/// Eigen-decomposition of a dense symmetric row-major matrix.
pub fn eigen_dense(dim: usize, entries: &[f64], want_vectors: bool) -> Result<SymSpectrum> {
    if entries.len() != dim * dim {
        return invalid(format!("expected {} entries, got {}", dim * dim, entries.len()));
    }
    if dim == 0 {
        return invalid("empty matrix");
    }
    if entries.iter().any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("matrix has non-finite entries".into()));
    }
    let blocks = split_blocks(dim, entries);
    let solved: Vec<Result<(Vec<f64>, Option<Vec<f64>>)>> = blocks
        .par_iter()
        .map(|block| {
            let local = block.restrict(dim, entries);
            tridiagonal_eigen(block.len(), local, want_vectors)
        })
        .collect();

    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(dim);
    let mut results = Vec::with_capacity(blocks.len());
    for (b, res) in solved.into_iter().enumerate() {
        let (vals, vecs) = res?;
        for (j, &v) in vals.iter().enumerate() {
            pairs.push((v, b, j));
        }
        results.push(vecs);
    }
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    let eigenvalues: Vec<f64> = pairs.iter().map(|p| p.0).collect();

    let eigenvectors = if want_vectors {
        let mut full = vec![0.0; dim * dim];
        for (col, &(_, b, j)) in pairs.iter().enumerate() {
            let block = &blocks[b];
            let local = results[b].as_ref().expect("vectors requested");
            let y = &local[j * block.len()..(j + 1) * block.len()];
            let out = &mut full[col * dim..(col + 1) * dim];
            for (coef, basis) in y.iter().zip(&block.basis) {
                for &(idx, w) in basis.iter() {
                    out[idx] += coef * w;
                }
            }
        }
        Some(full)
    } else {
        None
    };
    Ok(SymSpectrum {
        dim,
        eigenvalues,
        eigenvectors,
    })
}

/// An invariant subspace spanned by orthonormal vectors that each touch at
/// most two coordinates.
#[derive(Debug, Clone)]
struct Block {
    basis: Vec<Vec<(usize, f64)>>,
}

impl Block {
    fn len(&self) -> usize {
        self.basis.len()
    }

    /// Compressed matrix `Bᵀ M B`, row-major (it is symmetric).
    fn restrict(&self, dim: usize, m: &[f64]) -> Vec<f64> {
        let k = self.len();
        let mut out = vec![0.0; k * k];
        for (a, va) in self.basis.iter().enumerate() {
            for (b, vb) in self.basis.iter().enumerate().skip(a) {
                let mut s = 0.0;
                for &(i, wi) in va {
                    for &(j, wj) in vb {
                        s += wi * wj * m[i * dim + j];
                    }
                }
                out[a * k + b] = s;
                out[b * k + a] = s;
            }
        }
        out
    }
}

fn classes_decouple(dim: usize, m: &[f64], modulus: usize) -> bool {
    (0..dim).all(|i| {
        (0..dim)
            .filter(|j| (i + modulus - j % modulus) % modulus != 0)
            .all(|j| m[i * dim + j] == 0.0)
    })
}

fn is_reversal_symmetric(dim: usize, m: &[f64]) -> bool {
    (0..dim).all(|i| (0..dim).all(|j| m[i * dim + j] == m[(dim - 1 - i) * dim + (dim - 1 - j)]))
}

fn split_blocks(dim: usize, m: &[f64]) -> Vec<Block> {
    let by_class = |modulus: usize| -> Vec<Block> {
        (0..modulus)
            .map(|c| Block {
                basis: (c..dim).step_by(modulus).map(|i| vec![(i, 1.0)]).collect(),
            })
            .filter(|b| b.len() > 0)
            .collect()
    };
    if dim >= 8 && classes_decouple(dim, m, 4) {
        return by_class(4);
    }
    if dim >= 4 && classes_decouple(dim, m, 2) {
        return by_class(2);
    }
    if dim >= 4 && is_reversal_symmetric(dim, m) {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let half = dim / 2;
        let mut even: Vec<Vec<(usize, f64)>> =
            (0..half).map(|i| vec![(i, h), (dim - 1 - i, h)]).collect();
        if dim % 2 == 1 {
            even.push(vec![(half, 1.0)]);
        }
        let odd = (0..half).map(|i| vec![(i, h), (dim - 1 - i, -h)]).collect();
        return vec![Block { basis: even }, Block { basis: odd }];
    }
    vec![Block {
        basis: (0..dim).map(|i| vec![(i, 1.0)]).collect(),
    }]
}

/// Eigenpairs of a symmetric `n × n` matrix (row-major, consumed). Values in
/// ascending order; vectors column-major.
fn tridiagonal_eigen(n: usize, mut a: Vec<f64>, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    if n == 1 {
        return Ok((vec![a[0]], want_vectors.then(|| vec![1.0])));
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    // The matrix is symmetric, so its row-major storage doubles as the
    // column-major storage the reduction below walks through.
    householder(n, &mut a, &mut d, &mut e, want_vectors);
    let mut vectors = if want_vectors { Some(a) } else { None };
    implicit_ql(n, &mut d, &mut e, vectors.as_deref_mut())?;
    Ok((d, vectors))
}

/// Reduction to tridiagonal form. `v` is column-major: `v[j*n + k]` is row
/// `k`, column `j`. On return `d` holds the diagonal, `e[1..]` the
/// subdiagonal and, when `accumulate`, `v` the orthogonal transformation.
fn householder(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let at = |k: usize, j: usize| j * n + k;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);
            for j in 0..i {
                let f = d[j];
                v[at(j, i)] = f;
                let col = &v[j * n..j * n + n];
                let mut g = e[j] + col[j] * f;
                for k in j + 1..i {
                    g += col[k] * d[k];
                    e[k] += col[k] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                let col = &mut v[j * n..j * n + n];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = col[i - 1];
                col[i] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for (j, dj) in d.iter_mut().enumerate() {
            *dj = v[at(j, j)];
        }
        e[0] = 0.0;
        return;
    }
    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            let (head, tail) = v.split_at_mut((i + 1) * n);
            let pivot = &tail[..n];
            for k in 0..=i {
                d[k] = pivot[k] / h;
            }
            for j in 0..=i {
                let col = &mut head[j * n..j * n + n];
                let g: f64 = (0..=i).map(|k| pivot[k] * col[k]).sum();
                for k in 0..=i {
                    col[k] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`; rotations are applied to the
/// column-major `v` when present. Sorts ascending.
fn implicit_ql(n: usize, d: &mut [f64], e: &mut [f64], mut v: Option<&mut [f64]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    let mut shift_total = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > MAX_SWEEPS {
                    return Err(Error::NumericalFailure(format!(
                        "QL iteration did not converge for eigenvalue {l} within {MAX_SWEEPS} sweeps"
                    )));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                shift_total += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        let (left, right) = v.split_at_mut((i + 1) * n);
                        let col_i = &mut left[i * n..];
                        let col_next = &mut right[..n];
                        for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                            let h = *b;
                            *b = s * *a + c * h;
                            *a = c * *a - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += shift_total;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(v) = v {
        let old = v.to_vec();
        for (dst, &src) in order.iter().enumerate() {
            v[dst * n..(dst + 1) * n].copy_from_slice(&old[src * n..(src + 1) * n]);
        }
    }
    Ok(())
}

/// Largest `|u_aᵀ M u_b|` over pairs of the leading `count` eigenvectors
/// of `spectrum` whose eigenvalues differ by more than `gap_tol`.
///
/// With `spectrum` from the two-sided operator and `matrix` the one-sided
/// Galerkin matrix, this measures how far the two-sided eigenfunctions are
/// from being orthogonal on the interval.
pub fn double_orthogonality_defect(
    matrix: &ConcentrationMatrix,
    spectrum: &SymSpectrum,
    gap_tol: f64,
    count: usize,
) -> Result<f64> {
    let dim = matrix.dim();
    if spectrum.dim() != dim {
        return invalid("spectrum and matrix dimensions differ");
    }
    if !spectrum.has_vectors() {
        return invalid("spectrum was computed without eigenvectors");
    }
    let count = count.min(dim);
    let m = matrix.entries();
    let images: Vec<Vec<f64>> = (0..count)
        .into_par_iter()
        .map(|a| {
            let u = spectrum.eigenvector(a).expect("vectors present");
            (0..dim)
                .map(|i| m[i * dim..(i + 1) * dim].iter().zip(u).map(|(x, y)| x * y).sum())
                .collect()
        })
        .collect();
    let lambda = spectrum.eigenvalues();
    let mut worst: f64 = 0.0;
    for a in 0..count {
        for b in a + 1..count {
            if (lambda[a] - lambda[b]).abs() <= gap_tol {
                continue;
            }
            let u = spectrum.eigenvector(b).expect("vectors present");
            let v: f64 = images[a].iter().zip(u).map(|(x, y)| x * y).sum();
            worst = worst.max(v.abs());
        }
    }
    Ok(worst)
}
