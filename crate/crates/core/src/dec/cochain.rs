//! Coboundary operators, diagonal Hodge stars and Hodge Laplacians.

use std::fmt;

use super::eigen::{spectrum, LaplacianSpectrum, SymmetricMatrix};
use super::geometry::{barycenter, circumcenter, side_sign, simplex_volume};
use super::mesh::Mesh;
use crate::error::{Error, Result};

/// Sparse integer matrix stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Vec<(usize, i64)>>,
}

impl IntMatrix {
    pub fn row(&self, r: usize) -> &[(usize, i64)] {
        &self.entries[r]
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                d[r][c] += v;
            }
        }
        d
    }

    /// Exact integer product `self · rhs`.
    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let entries = self
            .entries
            .iter()
            .map(|row| {
                let mut acc: std::collections::BTreeMap<usize, i64> = Default::default();
                for &(k, a) in row {
                    for &(c, b) in &rhs.entries[k] {
                        *acc.entry(c).or_default() += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| *v != 0).collect()
            })
            .collect();
        IntMatrix { rows: self.rows, cols: rhs.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|r| r.iter().all(|(_, v)| *v == 0))
    }

    fn transpose_lists(&self) -> Vec<Vec<(usize, i64)>> {
        let mut t = vec![Vec::new(); self.cols];
        for (r, row) in self.entries.iter().enumerate() {
            for &(c, v) in row {
                t[c].push((r, v));
            }
        }
        t
    }
}

/// Which dual cells the Hodge star was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualKind {
    Circumcentric,
    /// Used when some circumcentric dual volume is not positive.
    Barycentric,
}

impl fmt::Display for DualKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DualKind::Circumcentric => f.write_str("circumcentric"),
            DualKind::Barycentric => f.write_str("barycentric (fallback)"),
        }
    }
}

/// Coboundary matrices `D_p` and diagonal Hodge stars `*_p = |dual| / |primal|`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    coboundary: Vec<IntMatrix>,
    star: Vec<Vec<f64>>,
    dual_kind: DualKind,
}

/// Primal and dual volumes, one vector per simplex dimension.
struct Volumes {
    primal: Vec<Vec<f64>>,
    dual: Vec<Vec<f64>>,
}

fn compute_volumes(mesh: &Mesh, kind: DualKind) -> Result<Volumes> {
    let n = mesh.dim();
    let maps = mesh.index_maps();
    let mut primal: Vec<Vec<f64>> = (0..=n).map(|k| vec![0.0; mesh.count(k)]).collect();
    let mut dual: Vec<Vec<f64>> = (0..=n).map(|k| vec![0.0; mesh.count(k)]).collect();
    let full = (1u32 << (n + 1)) - 1;

    for top in mesh.simplices(n) {
        let local = mesh.local_coordinates(top);
        let subset = |mask: u32| -> Vec<&[f64]> {
            (0..=n).filter(|i| mask & (1 << i) != 0).map(|i| local[i].as_slice()).collect()
        };
        let mut centers: Vec<Vec<f64>> = vec![Vec::new(); 1 << (n + 1)];
        for mask in 1..=full {
            let pts = subset(mask);
            centers[mask as usize] = match kind {
                DualKind::Circumcentric => circumcenter(&pts).ok_or_else(|| {
                    Error::numerical(format!("degenerate simplex in top simplex {top:?}"))
                })?,
                DualKind::Barycentric => barycenter(&pts),
            };
            let ids: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).map(|i| top[i]).collect();
            let idx = maps[ids.len() - 1][ids.as_slice()];
            primal[ids.len() - 1][idx] = simplex_volume(&pts);
        }

        // Each flag σ = σ_k ⊂ σ_{k+1} ⊂ … ⊂ σ_n = top contributes the signed
        // simplex spanned by the centers along the flag.
        fn walk(
            mask: u32,
            full: u32,
            chain: &mut Vec<u32>,
            sign: f64,
            local: &[Vec<f64>],
            centers: &[Vec<f64>],
            kind: DualKind,
            acc: &mut f64,
        ) {
            if mask == full {
                let pts: Vec<&[f64]> = chain.iter().map(|m| centers[*m as usize].as_slice()).collect();
                *acc += sign * simplex_volume(&pts);
                return;
            }
            for v in 0..local.len() {
                if mask & (1 << v) != 0 {
                    continue;
                }
                let next = mask | (1 << v);
                let s = match kind {
                    DualKind::Barycentric => 1.0,
                    DualKind::Circumcentric => {
                        let face: Vec<&[f64]> = (0..local.len())
                            .filter(|i| mask & (1 << i) != 0)
                            .map(|i| local[i].as_slice())
                            .collect();
                        side_sign(&face, &local[v], &centers[next as usize])
                    }
                };
                if s == 0.0 {
                    continue;
                }
                chain.push(next);
                walk(next, full, chain, sign * s, local, centers, kind, acc);
                chain.pop();
            }
        }

        for mask in 1..=full {
            let ids: Vec<usize> = (0..=n).filter(|i| mask & (1 << i) != 0).map(|i| top[i]).collect();
            let k = ids.len() - 1;
            let idx = maps[k][ids.as_slice()];
            if k == n {
                dual[k][idx] = 1.0;
                continue;
            }
            let mut acc = 0.0;
            walk(mask, full, &mut vec![mask], 1.0, &local, &centers, kind, &mut acc);
            dual[k][idx] += acc;
        }
    }
    Ok(Volumes { primal, dual })
}

fn first_nonpositive(vol: &Volumes) -> Option<(usize, usize, &'static str)> {
    for (k, level) in vol.primal.iter().enumerate() {
        let scale = level.iter().fold(0.0f64, |m, x| m.max(*x));
        if let Some(i) = level.iter().position(|v| *v <= 1e-12 * scale) {
            return Some((k, i, "primal"));
        }
    }
    for (k, level) in vol.dual.iter().enumerate() {
        let scale = level.iter().fold(0.0f64, |m, x| m.max(*x));
        if let Some(i) = level.iter().position(|v| *v <= 1e-10 * scale) {
            return Some((k, i, "dual"));
        }
    }
    None
}

/// Builds the cochain complex of a mesh. Uses circumcentric duals when every
/// dual volume is positive and barycentric duals otherwise.
pub fn build_cochain_complex(mesh: &Mesh) -> Result<CochainComplex> {
    let n = mesh.dim();
    let maps = mesh.index_maps();
    let coboundary = (0..n)
        .map(|p| {
            let entries = mesh
                .simplices(p + 1)
                .iter()
                .map(|s| {
                    (0..s.len())
                        .map(|skip| {
                            let facet: Vec<usize> =
                                s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
                            let sign = if skip % 2 == 0 { 1 } else { -1 };
                            (maps[p][facet.as_slice()], sign)
                        })
                        .collect()
                })
                .collect();
            IntMatrix { rows: mesh.count(p + 1), cols: mesh.count(p), entries }
        })
        .collect();

    let mut dual_kind = DualKind::Circumcentric;
    let mut vol = compute_volumes(mesh, dual_kind);
    if vol.as_ref().map_or(true, |v| first_nonpositive(v).is_some()) {
        dual_kind = DualKind::Barycentric;
        vol = compute_volumes(mesh, dual_kind);
    }
    let vol = vol?;
    if let Some((k, i, what)) = first_nonpositive(&vol) {
        return Err(Error::numerical(format!(
            "nonpositive {what} volume at {k}-simplex {:?} under both dual schemes",
            mesh.simplices(k)[i]
        )));
    }
    let star = vol.dual.iter().zip(&vol.primal).map(|(d, p)| d.iter().zip(p).map(|(a, b)| a / b).collect()).collect();
    Ok(CochainComplex { coboundary, star, dual_kind })
}

impl CochainComplex {
    pub fn dim(&self) -> usize {
        self.star.len() - 1
    }

    /// `D_p`: rows are `(p+1)`-simplices, columns `p`-simplices.
    pub fn coboundary(&self, p: usize) -> &IntMatrix {
        &self.coboundary[p]
    }

    pub fn star(&self, p: usize) -> &[f64] {
        &self.star[p]
    }

    pub fn dual_kind(&self) -> DualKind {
        self.dual_kind
    }

    pub fn cochain_count(&self, p: usize) -> usize {
        self.star[p].len()
    }

    fn check_degree(&self, p: usize) -> Result<()> {
        if p > self.dim() {
            return Err(Error::domain(format!("degree {p} exceeds complex dimension {}", self.dim())));
        }
        Ok(())
    }

    /// `*_{p+1}^{1/2} D_p *_p^{-1/2}` as dense rows.
    pub fn weighted_coboundary(&self, p: usize) -> Vec<Vec<f64>> {
        let d = &self.coboundary[p];
        let mut out = vec![vec![0.0; d.cols]; d.rows];
        for (r, row) in out.iter_mut().enumerate() {
            let sr = self.star[p + 1][r].sqrt();
            for &(c, v) in d.row(r) {
                row[c] = sr * v as f64 / self.star[p][c].sqrt();
            }
        }
        out
    }

    /// The `δd` part of `Δ_p`, symmetrized: `B_pᵀ B_p`.
    pub fn up_laplacian(&self, p: usize) -> Result<SymmetricMatrix> {
        self.check_degree(p)?;
        let mut m = SymmetricMatrix::zeros(self.cochain_count(p));
        if p < self.dim() {
            let d = &self.coboundary[p];
            for r in 0..d.rows {
                let w = self.star[p + 1][r];
                for &(i, si) in d.row(r) {
                    for &(j, sj) in d.row(r) {
                        let v = w * (si * sj) as f64 / (self.star[p][i] * self.star[p][j]).sqrt();
                        m.add(i, j, v);
                    }
                }
            }
        }
        m.symmetrize();
        Ok(m)
    }

    /// The `dδ` part of `Δ_p`, symmetrized: `B_{p-1} B_{p-1}ᵀ`.
    pub fn down_laplacian(&self, p: usize) -> Result<SymmetricMatrix> {
        self.check_degree(p)?;
        let mut m = SymmetricMatrix::zeros(self.cochain_count(p));
        if p > 0 {
            let columns = self.coboundary[p - 1].transpose_lists();
            for (c, col) in columns.iter().enumerate() {
                let w = 1.0 / self.star[p - 1][c];
                for &(a, sa) in col {
                    for &(b, sb) in col {
                        let v = w * (sa * sb) as f64 * (self.star[p][a] * self.star[p][b]).sqrt();
                        m.add(a, b, v);
                    }
                }
            }
        }
        m.symmetrize();
        Ok(m)
    }
}

/// Symmetrized Hodge Laplacian `*^{1/2} (δd + dδ) *^{-1/2}` on `p`-cochains.
pub fn hodge_laplacian(cx: &CochainComplex, p: usize) -> Result<SymmetricMatrix> {
    let mut m = cx.up_laplacian(p)?;
    let down = cx.down_laplacian(p)?;
    let n = m.order();
    for i in 0..n {
        for j in 0..n {
            m.add(i, j, down.get(i, j));
        }
    }
    Ok(m)
}

/// Spectrum of `Δ_p` with the kernel counted at the relative kernel tolerance.
pub fn laplacian_spectrum(cx: &CochainComplex, p: usize, tol: f64) -> Result<LaplacianSpectrum> {
    let mut s = spectrum(&hodge_laplacian(cx, p)?, tol)?;
    s.degree = p;
    Ok(s)
}

/// `b_p = dim ker Δ_p`.
pub fn betti(cx: &CochainComplex, p: usize) -> Result<usize> {
    Ok(laplacian_spectrum(cx, p, 1e-13)?.kernel_dim)
}

#[cfg(test)]
mod tests {
    use super::super::mesh::{build_circle_mesh, build_sphere_mesh, build_torus_mesh};
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_coboundary() {
        let m = build_circle_mesh(4, 2.0 * PI).unwrap();
        let cx = build_cochain_complex(&m).unwrap();
        let d = cx.coboundary(0).to_dense();
        assert_eq!(d.len(), 4);
        for row in &d {
            assert_eq!(row.iter().filter(|v| **v == 1).count(), 1);
            assert_eq!(row.iter().filter(|v| **v == -1).count(), 1);
            assert_eq!(row.iter().sum::<i64>(), 0);
        }
        assert_eq!(cx.dual_kind(), DualKind::Circumcentric);
    }

    #[test]
    fn circle_laplacian_matches_circulant() {
        let m = build_circle_mesh(4, 2.0 * PI).unwrap();
        let cx = build_cochain_complex(&m).unwrap();
        let s = laplacian_spectrum(&cx, 0, 1e-15).unwrap();
        let h = PI / 2.0;
        let mut expected: Vec<f64> = (0..4).map(|k| (2.0 - 2.0 * (2.0 * PI * k as f64 / 4.0).cos()) / (h * h)).collect();
        expected.sort_by(f64::total_cmp);
        for (a, b) in s.eigenvalues.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
        assert!((expected[1] - 8.0 / (PI * PI)).abs() < 1e-13);
        assert!((expected[3] - 16.0 / (PI * PI)).abs() < 1e-13);
    }

    #[test]
    fn constants_in_kernel() {
        for mesh in [build_sphere_mesh(1, 1.0).unwrap(), build_torus_mesh(4, 5, 1.0, 2.0).unwrap()] {
            let cx = build_cochain_complex(&mesh).unwrap();
            let l = hodge_laplacian(&cx, 0).unwrap();
            // Δ_0 is conjugated by *_0^{1/2}, so its kernel vector is sqrt(*_0).
            let v: Vec<f64> = cx.star(0).iter().map(|s| s.sqrt()).collect();
            for i in 0..l.order() {
                let r: f64 = (0..l.order()).map(|j| l.get(i, j) * v[j]).sum();
                assert!(r.abs() < 1e-10, "row {i}: {r}");
            }
        }
    }

    #[test]
    fn exactness() {
        for mesh in [build_sphere_mesh(2, 1.0).unwrap(), build_torus_mesh(5, 4, 1.0, 1.0).unwrap()] {
            let cx = build_cochain_complex(&mesh).unwrap();
            assert!(cx.coboundary(1).mul(cx.coboundary(0)).is_zero());
        }
    }

    #[test]
    fn sphere_stars_positive_circumcentric() {
        let cx = build_cochain_complex(&build_sphere_mesh(2, 1.0).unwrap()).unwrap();
        assert_eq!(cx.dual_kind(), DualKind::Circumcentric);
        for p in 0..=2 {
            assert!(cx.star(p).iter().all(|s| *s > 0.0));
        }
        // dual areas tile the sphere (minus the chordal deficit)
        let area: f64 = cx.star(0).iter().sum();
        let flat: f64 = cx.star(2).iter().map(|s| 1.0 / s).sum();
        assert!((area - flat).abs() < 1e-10);
    }

    #[test]
    fn torus_grid_falls_back_to_barycentric() {
        // Right triangles put the circumcenter on the diagonal: zero dual length.
        let cx = build_cochain_complex(&build_torus_mesh(4, 4, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!(cx.dual_kind(), DualKind::Barycentric);
        assert!(cx.star(1).iter().all(|s| *s > 0.0));
    }

    #[test]
    fn degree_out_of_range() {
        let cx = build_cochain_complex(&build_circle_mesh(5, 1.0).unwrap()).unwrap();
        assert!(matches!(hodge_laplacian(&cx, 2), Err(Error::Domain(_))));
    }
}
