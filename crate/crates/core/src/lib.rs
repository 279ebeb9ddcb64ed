//! Essential spectra, Fredholm and compactness criteria for Hodge Laplacians
//! on the interior of a compact manifold with corners, equipped with a
//! multi-cylindrical end metric.
//!
//! The engine walks the face lattice of the manifold: the essential spectrum
//! of `Δ_p` is a ray `[m, ∞)` whose start is read off the spectra of the
//! Laplacians on the boundary hyperfaces, which are computed recursively down
//! to the minimal faces. Minimal faces are closed manifolds whose spectra come
//! from analytic catalogs or from a discrete exterior calculus solver.

pub mod corner_complex;
pub mod dec;
pub mod error;
pub mod oracle;
pub mod recursion;
pub mod spectrum;

pub use corner_complex::{
    hyperfaces, minimal_faces, restrict, restrict_to_face, validate_complex, ComplexDocument, CornerComplex, Face,
    FaceId, FaceSpec, GeometryTag, Rule, ValidationReport, Violation, WeightSystem,
};
pub use error::{Error, Result};
pub use spectrum::{indicial_spectrum, min_spectrum, union, SpectrumDesc};
pub use recursion::{
    essential_threshold, face_min_spectrum, full_spectrum, hyperface_indicial_spectrum, is_compact, is_fredholm,
    BoundStates, FaceMinimum, IndicialCertificate, IndicialVerdict, OperatorKind, OperatorQuery, RecursionOptions,
    Threshold,
};
pub use oracle::{
    cayley_symbol_limit, cylinder_ground_energy, phi, psi, rescale_symbol, CayleyLimit, CylinderModel, FlowMap,
    ScalarSymbol,
};
