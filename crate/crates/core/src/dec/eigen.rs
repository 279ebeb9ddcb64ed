//! Dense symmetric eigenvalue solvers.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Largest matrix order accepted by [`spectrum`].
pub const MAX_DENSE_ORDER: usize = 4000;

/// Above this order the cyclic Jacobi sweep is replaced by Householder
/// tridiagonalization with implicit QL.
pub const JACOBI_MAX_ORDER: usize = 400;

const MAX_SWEEPS: usize = 100;

/// Dense symmetric matrix in row-major full storage.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    pub fn zeros(n: usize) -> Self {
        SymmetricMatrix { n, data: vec![0.0; n * n] }
    }

    /// Builds from rows; does not check symmetry (see [`Self::asymmetry`]).
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        m
    }

    pub fn from_diagonal(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, *x);
        }
        m
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub(crate) fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    /// Replaces each off-diagonal pair by its average.
    pub(crate) fn symmetrize(&mut self) {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let v = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, v);
                self.set(j, i, v);
            }
        }
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Kronecker sum `A ⊗ I + I ⊗ B`.
    pub fn kronecker_sum(a: &SymmetricMatrix, b: &SymmetricMatrix) -> SymmetricMatrix {
        let (na, nb) = (a.n, b.n);
        let mut m = Self::zeros(na * nb);
        for i in 0..na {
            for j in 0..na {
                let aij = a.get(i, j);
                if aij != 0.0 {
                    for k in 0..nb {
                        m.add(i * nb + k, j * nb + k, aij);
                    }
                }
            }
            for k in 0..nb {
                for l in 0..nb {
                    m.add(i * nb + k, i * nb + l, b.get(k, l));
                }
            }
        }
        m
    }
}

/// Eigenvalues by cyclic Jacobi rotations, unsorted.
///
/// Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
/// falls below `tol` times the Frobenius norm of the input.
pub fn jacobi_eigenvalues(m: &SymmetricMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = m.n;
    let mut a = m.data.clone();
    let target = tol * m.frobenius();
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += 2.0 * a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= target {
            return Ok((0..n).map(|i| a[i * n + i]).collect());
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[p * n + p], a[q * n + q]);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // rows p and q
                for k in 0..n {
                    let (x, y) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * x - s * y;
                    a[q * n + k] = s * x + c * y;
                }
                // columns p and q
                for k in 0..n {
                    let (x, y) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * x - s * y;
                    a[k * n + q] = s * x + c * y;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    Err(Error::numerical(format!("Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")))
}

/// Eigenvalues by Householder tridiagonalization and implicit QL, unsorted.
pub fn tridiagonal_ql_eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>> {
    let dm = DMatrix::from_row_slice(m.n, m.n, &m.data);
    let values = dm.symmetric_eigenvalues();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical("tridiagonal QL produced non-finite eigenvalues"));
    }
    Ok(values.iter().copied().collect())
}

/// Eigenvalues of a symmetric matrix with a kernel count.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplacianSpectrum {
    /// Form degree the matrix acts on (0 for matrices not built from a complex).
    pub degree: usize,
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    pub kernel_dim: usize,
}

impl LaplacianSpectrum {
    /// Eigenvalues counted as zero are below `1e-7 · (λ_max + 1)`.
    pub fn kernel_tolerance(&self) -> f64 {
        kernel_tolerance(&self.eigenvalues)
    }

    pub fn smallest_nonzero(&self) -> Option<f64> {
        self.eigenvalues.get(self.kernel_dim).copied()
    }

    /// Group index for each eigenvalue; neighbours closer than
    /// `1e-6 · max(1, |λ|)` share a group.
    pub fn multiplicity_groups(&self) -> Vec<usize> {
        multiplicity_groups(&self.eigenvalues)
    }

    /// CSV table `index,eigenvalue,multiplicity_group`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,multiplicity_group\n");
        for (i, (v, g)) in self.eigenvalues.iter().zip(self.multiplicity_groups()).enumerate() {
            out.push_str(&format!("{i},{v},{g}\n"));
        }
        out
    }
}

fn kernel_tolerance(sorted: &[f64]) -> f64 {
    1e-7 * (sorted.last().copied().unwrap_or(0.0) + 1.0)
}

pub fn multiplicity_groups(sorted: &[f64]) -> Vec<usize> {
    let mut groups = Vec::with_capacity(sorted.len());
    let mut g = 0;
    for (i, v) in sorted.iter().enumerate() {
        if i > 0 && (v - sorted[i - 1]).abs() > 1e-6 * v.abs().max(1.0) {
            g += 1;
        }
        groups.push(g);
    }
    groups
}

/// All eigenvalues of a dense symmetric matrix, ascending, with kernel count.
///
/// Orders up to [`JACOBI_MAX_ORDER`] use cyclic Jacobi with off-diagonal
/// tolerance `tol`; larger ones up to [`MAX_DENSE_ORDER`] use tridiagonal QL.
pub fn spectrum(m: &SymmetricMatrix, tol: f64) -> Result<LaplacianSpectrum> {
    if m.n > MAX_DENSE_ORDER {
        return Err(Error::Resource(format!("matrix order {} exceeds the dense limit {MAX_DENSE_ORDER}", m.n)));
    }
    if m.asymmetry() > 1e-12 * m.max_abs().max(1.0) {
        return Err(Error::domain(format!("matrix is not symmetric (asymmetry {:e})", m.asymmetry())));
    }
    let mut eigenvalues =
        if m.n <= JACOBI_MAX_ORDER { jacobi_eigenvalues(m, tol)? } else { tridiagonal_ql_eigenvalues(m)? };
    eigenvalues.sort_by(f64::total_cmp);
    let ktol = kernel_tolerance(&eigenvalues);
    let kernel_dim = eigenvalues.iter().filter(|v| v.abs() < ktol).count();
    Ok(LaplacianSpectrum { degree: 0, eigenvalues, kernel_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_two_by_two() {
        let m = SymmetricMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]);
        let s = spectrum(&m, 1e-14).unwrap();
        assert_eq!(s.eigenvalues, vec![2.0, 3.0]);
        assert_eq!(s.kernel_dim, 0);
    }

    #[test]
    fn known_three_by_three() {
        // eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
        let m = SymmetricMatrix::from_rows(&[vec![2.0, -1.0, 0.0], vec![-1.0, 2.0, -1.0], vec![0.0, -1.0, 2.0]]);
        let s = spectrum(&m, 1e-15).unwrap();
        let r2 = 2f64.sqrt();
        for (a, b) in s.eigenvalues.iter().zip([2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn rejects_asymmetric_and_oversized() {
        let m = SymmetricMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]);
        assert!(matches!(spectrum(&m, 1e-14), Err(Error::Domain(_))));
        assert!(matches!(spectrum(&SymmetricMatrix::zeros(MAX_DENSE_ORDER + 1), 1e-14), Err(Error::Resource(_))));
    }

    fn random_symmetric(n: usize, seed: u64) -> SymmetricMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let v: f64 = rng.gen_range(-1.0..1.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    #[test]
    fn jacobi_and_ql_agree() {
        for (n, seed) in [(5, 1), (40, 2), (120, 3)] {
            let m = random_symmetric(n, seed);
            let mut a = jacobi_eigenvalues(&m, 1e-15).unwrap();
            let mut b = tridiagonal_ql_eigenvalues(&m).unwrap();
            a.sort_by(f64::total_cmp);
            b.sort_by(f64::total_cmp);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-11, "n={n}: {x} vs {y}");
            }
            // trace is preserved
            let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
            assert!((a.iter().sum::<f64>() - trace).abs() < 1e-10);
        }
    }

    #[test]
    fn kronecker_sum_spectrum_is_pairwise_sums() {
        let a = random_symmetric(4, 7);
        let b = random_symmetric(3, 8);
        let ea = spectrum(&a, 1e-15).unwrap().eigenvalues;
        let eb = spectrum(&b, 1e-15).unwrap().eigenvalues;
        let mut sums: Vec<f64> = ea.iter().flat_map(|x| eb.iter().map(move |y| x + y)).collect();
        sums.sort_by(f64::total_cmp);
        let ek = spectrum(&SymmetricMatrix::kronecker_sum(&a, &b), 1e-15).unwrap().eigenvalues;
        for (x, y) in ek.iter().zip(&sums) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn groups() {
        assert_eq!(multiplicity_groups(&[0.0, 0.0, 2.0, 2.0 + 1e-9, 2.0, 6.0]), vec![0, 0, 1, 1, 1, 2]);
    }
}
