//! Spectra of minimal faces: closed manifolds described by a geometry tag.

use std::fmt;

use super::catalog::{circle_eigenvalues, sphere_eigenvalues, torus_eigenvalues};
use super::cochain::{build_cochain_complex, laplacian_spectrum, CochainComplex};
use super::eigen::LaplacianSpectrum;
use super::mesh::{build_circle_mesh, build_sphere_mesh, build_torus_mesh, Mesh};
use crate::corner_complex::GeometryTag;
use crate::error::{Error, Result};
use crate::spectrum::SpectrumDesc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseMethod {
    /// Closed-form eigenvalues where available, DEC for meshes.
    Catalog,
    /// DEC wherever a mesh can be generated, catalog otherwise.
    Dec,
}

/// How minimal-face spectra are computed.
#[derive(Clone, Debug, PartialEq)]
pub struct BaseResolution {
    pub method: BaseMethod,
    /// Catalog eigenvalues above this value are dropped.
    pub cutoff: f64,
    pub circle_segments: usize,
    pub torus_grid: usize,
    pub sphere_subdivisions: u32,
    /// Relative off-diagonal tolerance for the Jacobi solver.
    pub eigen_tol: f64,
}

impl Default for BaseResolution {
    fn default() -> Self {
        BaseResolution {
            method: BaseMethod::Catalog,
            cutoff: 100.0,
            circle_segments: 64,
            torus_grid: 16,
            sphere_subdivisions: 2,
            eigen_tol: 1e-13,
        }
    }
}

impl fmt::Display for BaseResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let method = match self.method {
            BaseMethod::Catalog => "catalog",
            BaseMethod::Dec => "dec",
        };
        write!(
            f,
            "method={method} cutoff={} circle_segments={} torus_grid={} sphere_subdivisions={} eigen_tol={:e}",
            self.cutoff, self.circle_segments, self.torus_grid, self.sphere_subdivisions, self.eigen_tol
        )
    }
}

/// Where a base spectrum came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseSource {
    Trivial,
    Catalog,
    Dec,
}

/// Which path [`face_base_spectrum`] takes for a geometry.
pub fn base_source(geometry: &GeometryTag, res: &BaseResolution) -> BaseSource {
    match (geometry, res.method) {
        (GeometryTag::Point, _) => BaseSource::Trivial,
        (GeometryTag::Mesh { .. }, _) => BaseSource::Dec,
        (GeometryTag::Circle { .. }, BaseMethod::Dec) => BaseSource::Dec,
        (GeometryTag::RectTorus { lengths }, BaseMethod::Dec) if lengths.len() <= 2 => BaseSource::Dec,
        (GeometryTag::RoundSphere { dim, .. }, BaseMethod::Dec) if *dim <= 2 => BaseSource::Dec,
        _ => BaseSource::Catalog,
    }
}

/// Mesh realizing a geometry tag at the given resolution, if one exists.
pub fn mesh_for(geometry: &GeometryTag, res: &BaseResolution) -> Result<Option<Mesh>> {
    Ok(Some(match geometry {
        GeometryTag::Circle { circumference } => build_circle_mesh(res.circle_segments, *circumference)?,
        GeometryTag::RectTorus { lengths } if lengths.len() == 1 => build_circle_mesh(res.circle_segments, lengths[0])?,
        GeometryTag::RectTorus { lengths } if lengths.len() == 2 => {
            build_torus_mesh(res.torus_grid, res.torus_grid, lengths[0], lengths[1])?
        }
        GeometryTag::RoundSphere { dim: 1, radius } => {
            build_circle_mesh(res.circle_segments, 2.0 * std::f64::consts::PI * radius)?
        }
        GeometryTag::RoundSphere { dim: 2, radius } => build_sphere_mesh(res.sphere_subdivisions, *radius)?,
        GeometryTag::Mesh { path } => Mesh::from_off_path(path)?,
        _ => return Ok(None),
    }))
}

/// Converts a DEC spectrum to a discrete spectrum description, snapping the
/// kernel to exact zeros.
pub fn dec_spectrum_desc(s: &LaplacianSpectrum) -> Result<SpectrumDesc> {
    let values = s
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, v)| if i < s.kernel_dim { 0.0 } else { v.max(0.0) })
        .collect();
    SpectrumDesc::discrete(values)
}

pub fn dec_face_spectrum(cx: &CochainComplex, p: usize, res: &BaseResolution) -> Result<LaplacianSpectrum> {
    laplacian_spectrum(cx, p, res.eigen_tol)
}

/// Spectrum of `Δ_p` on a closed minimal face, as a purely discrete set.
pub fn face_base_spectrum(geometry: &GeometryTag, p: usize, res: &BaseResolution) -> Result<SpectrumDesc> {
    let dim = match geometry {
        GeometryTag::None => return Err(Error::domain("face has no geometry")),
        GeometryTag::Mesh { .. } => None,
        g => g.dim(),
    };
    if let Some(d) = dim {
        if p > d {
            return Err(Error::domain(format!("degree {p} exceeds dimension {d} of {geometry}")));
        }
    }
    match base_source(geometry, res) {
        BaseSource::Trivial => SpectrumDesc::discrete(vec![0.0]),
        BaseSource::Dec => {
            let mesh = mesh_for(geometry, res)?.expect("DEC source has a mesh");
            if p > mesh.dim() {
                return Err(Error::domain(format!("degree {p} exceeds mesh dimension {}", mesh.dim())));
            }
            let cx = build_cochain_complex(&mesh)?;
            dec_spectrum_desc(&dec_face_spectrum(&cx, p, res)?)
        }
        BaseSource::Catalog => {
            let values = match geometry {
                GeometryTag::Circle { circumference } => circle_eigenvalues(*circumference, p, res.cutoff)?,
                GeometryTag::RectTorus { lengths } => torus_eigenvalues(lengths, p, res.cutoff)?,
                GeometryTag::RoundSphere { dim, radius } => sphere_eigenvalues(*dim, *radius, p, res.cutoff)?,
                other => return Err(Error::domain(format!("no catalog for geometry {other}"))),
            };
            SpectrumDesc::discrete(values)
        }
    }
}
