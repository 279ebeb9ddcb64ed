//! Discrete exterior calculus on triangulated closed faces.
//!
//! Meshes carry integer coboundary matrices `D_p` and diagonal Hodge stars;
//! the symmetrized Hodge Laplacians are diagonalized densely.

pub mod base;
pub mod catalog;
pub mod cochain;
pub mod eigen;
pub mod geometry;
pub mod mesh;

pub use base::{base_source, face_base_spectrum, BaseMethod, BaseResolution, BaseSource};
pub use cochain::{betti, build_cochain_complex, hodge_laplacian, laplacian_spectrum, CochainComplex, DualKind, IntMatrix};
pub use eigen::{spectrum, LaplacianSpectrum, SymmetricMatrix};
pub use mesh::{build_circle_mesh, build_sphere_mesh, build_torus_mesh, Mesh};
