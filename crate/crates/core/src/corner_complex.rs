//! Combinatorial model of a compact manifold with corners.
//!
//! A complex is a finite set of faces. Each face records its dimension, the
//! set of boundary hyperfaces that contain it, and (for minimal faces) a
//! geometry tag describing the closed manifold it is. Faces are ordered by
//! closure containment. The order is read off the hyperface sets, except that
//! a face may list its covering faces explicitly under `within` when an
//! intersection `H ∩ F'` has several components sharing the same hyperface
//! set.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FaceId(pub String);

impl FaceId {
    pub fn new(id: impl Into<String>) -> Self {
        FaceId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for FaceId {
    fn from(s: &str) -> Self {
        FaceId(s.to_string())
    }
}

/// The closed manifold a minimal face is, with its metric.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", try_from = "RawGeometry")]
pub enum GeometryTag {
    Point,
    Circle { circumference: f64 },
    /// Flat torus `ℝⁿ / (L₁ℤ × … × Lₙℤ)`.
    RectTorus { lengths: Vec<f64> },
    RoundSphere { dim: usize, radius: f64 },
    Mesh { path: PathBuf },
    #[default]
    None,
}

/// Flat wire form of a geometry tag; lets unknown or misplaced keys be rejected
/// for every kind, including the parameterless ones.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGeometry {
    kind: String,
    circumference: Option<f64>,
    lengths: Option<Vec<f64>>,
    dim: Option<usize>,
    radius: Option<f64>,
    path: Option<PathBuf>,
}

impl TryFrom<RawGeometry> for GeometryTag {
    type Error = String;

    fn try_from(raw: RawGeometry) -> std::result::Result<Self, String> {
        let RawGeometry { kind, circumference, lengths, dim, radius, path } = raw;
        let given = [
            ("circumference", circumference.is_some()),
            ("lengths", lengths.is_some()),
            ("dim", dim.is_some()),
            ("radius", radius.is_some()),
            ("path", path.is_some()),
        ];
        let expected: &[&str] = match kind.as_str() {
            "point" | "none" => &[],
            "circle" => &["circumference"],
            "rect_torus" => &["lengths"],
            "round_sphere" => &["dim", "radius"],
            "mesh" => &["path"],
            other => return Err(format!("unknown geometry kind `{other}`")),
        };
        for (key, present) in given {
            if present != expected.contains(&key) {
                let what = if present { "unexpected" } else { "missing" };
                return Err(format!("{what} key `{key}` for geometry kind `{kind}`"));
            }
        }
        Ok(match kind.as_str() {
            "point" => GeometryTag::Point,
            "none" => GeometryTag::None,
            "circle" => GeometryTag::Circle { circumference: circumference.unwrap() },
            "rect_torus" => GeometryTag::RectTorus { lengths: lengths.unwrap() },
            "round_sphere" => GeometryTag::RoundSphere { dim: dim.unwrap(), radius: radius.unwrap() },
            _ => GeometryTag::Mesh { path: path.unwrap() },
        })
    }
}

impl GeometryTag {
    /// Dimension of the manifold the tag describes, if fixed by the tag.
    pub fn dim(&self) -> Option<usize> {
        match self {
            GeometryTag::Point => Some(0),
            GeometryTag::Circle { .. } => Some(1),
            GeometryTag::RectTorus { lengths } => Some(lengths.len()),
            GeometryTag::RoundSphere { dim, .. } => Some(*dim),
            GeometryTag::Mesh { .. } | GeometryTag::None => None,
        }
    }

    fn parameter_problem(&self) -> Option<String> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        match self {
            GeometryTag::Circle { circumference } if !positive(*circumference) => {
                Some(format!("circumference {circumference} must be positive"))
            }
            GeometryTag::RectTorus { lengths } if lengths.is_empty() => {
                Some("torus needs at least one edge length".into())
            }
            GeometryTag::RectTorus { lengths } if !lengths.iter().all(|l| positive(*l)) => {
                Some(format!("torus edge lengths {lengths:?} must be positive"))
            }
            GeometryTag::RoundSphere { dim: 0, .. } => Some("sphere dimension must be positive".into()),
            GeometryTag::RoundSphere { radius, .. } if !positive(*radius) => {
                Some(format!("sphere radius {radius} must be positive"))
            }
            _ => None,
        }
    }
}

impl fmt::Display for GeometryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryTag::Point => write!(f, "point"),
            GeometryTag::Circle { circumference } => write!(f, "circle(circumference={circumference})"),
            GeometryTag::RectTorus { lengths } => write!(f, "rect_torus(lengths={lengths:?})"),
            GeometryTag::RoundSphere { dim, radius } => write!(f, "round_sphere(dim={dim}, radius={radius})"),
            GeometryTag::Mesh { path } => write!(f, "mesh({})", path.display()),
            GeometryTag::None => write!(f, "none"),
        }
    }
}

/// One face as written in an input document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaceSpec {
    pub id: FaceId,
    pub dim: usize,
    pub contained_in_hyperfaces: Vec<FaceId>,
    #[serde(default)]
    pub geometry: GeometryTag,
    /// Faces of one dimension higher that directly contain this face. Only
    /// needed when the hyperface sets alone are ambiguous.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub within: Option<Vec<FaceId>>,
}

/// Unvalidated input document.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDocument {
    pub name: String,
    pub dim: usize,
    pub weights: BTreeMap<FaceId, i64>,
    pub faces: Vec<FaceSpec>,
}

impl ComplexDocument {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads a document from disk. Relative mesh paths are resolved against
    /// the directory holding the document.
    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let mut doc = Self::from_json_str(&text)?;
        if let Some(dir) = path.parent() {
            for face in &mut doc.faces {
                if let GeometryTag::Mesh { path: mesh } = &mut face.geometry {
                    if mesh.is_relative() {
                        *mesh = dir.join(&*mesh);
                    }
                }
            }
        }
        Ok(doc)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    DuplicateId,
    CodimZeroCount,
    DimensionRange,
    CodimContainmentMismatch,
    UnknownHyperface,
    HyperfaceSelf,
    WeightMissing,
    WeightBelowOne,
    WeightNotHyperface,
    UnknownFace,
    NotGraded,
    MissingIntermediateFace,
    AmbiguousContainment,
    MinimalFaceGeometry,
    BadGeometry,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Rule::DuplicateId => "duplicate id",
            Rule::CodimZeroCount => "codim-0 face count",
            Rule::DimensionRange => "dimension out of range",
            Rule::CodimContainmentMismatch => "codim/containment mismatch",
            Rule::UnknownHyperface => "unknown hyperface",
            Rule::HyperfaceSelf => "hyperface must contain itself",
            Rule::WeightMissing => "weight missing",
            Rule::WeightBelowOne => "weight below 1",
            Rule::WeightNotHyperface => "weight for non-hyperface",
            Rule::UnknownFace => "unknown face in within",
            Rule::NotGraded => "covering relation not graded",
            Rule::MissingIntermediateFace => "missing intermediate face",
            Rule::AmbiguousContainment => "ambiguous containment",
            Rule::MinimalFaceGeometry => "minimal face without geometry",
            Rule::BadGeometry => "bad geometry",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub face: Option<FaceId>,
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.face {
            Some(id) => write!(f, "face `{id}`: {}: {}", self.rule, self.detail),
            None => write!(f, "{}: {}", self.rule, self.detail),
        }
    }
}

/// List of violations. Empty means valid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, face: Option<&FaceId>, rule: Rule, detail: impl Into<String>) {
        self.violations.push(Violation { face: face.cloned(), rule, detail: detail.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        Ok(())
    }
}

/// Covering relation derived from a document, or `None` entries for faces
/// whose `within` list names unknown faces.
fn covers_of(doc: &ComplexDocument) -> Vec<Vec<usize>> {
    let index: BTreeMap<&FaceId, usize> = doc.faces.iter().enumerate().map(|(i, f)| (&f.id, i)).collect();
    let sets: Vec<BTreeSet<&FaceId>> =
        doc.faces.iter().map(|f| f.contained_in_hyperfaces.iter().collect()).collect();
    doc.faces
        .iter()
        .enumerate()
        .map(|(i, f)| match &f.within {
            Some(list) => list.iter().filter_map(|id| index.get(id).copied()).collect(),
            None => (0..doc.faces.len())
                .filter(|&j| j != i && sets[j].len() + 1 == sets[i].len() && sets[j].is_subset(&sets[i]))
                .collect(),
        })
        .collect()
}

/// Upward closure: for each face, every face containing it (itself included).
fn ancestors_of(covers: &[Vec<usize>]) -> Vec<BTreeSet<usize>> {
    fn visit(i: usize, covers: &[Vec<usize>], memo: &mut Vec<Option<BTreeSet<usize>>>, depth: usize) -> BTreeSet<usize> {
        if let Some(s) = &memo[i] {
            return s.clone();
        }
        let mut out = BTreeSet::from([i]);
        // A cyclic `within` list would recurse forever; validation reports it as ungraded.
        if depth <= covers.len() {
            for &j in &covers[i] {
                out.extend(visit(j, covers, memo, depth + 1));
            }
        }
        memo[i] = Some(out.clone());
        out
    }
    let mut memo = vec![None; covers.len()];
    (0..covers.len()).map(|i| visit(i, covers, &mut memo, 0)).collect()
}

/// Checks every structural axiom of a complex. Pure; never fails.
pub fn validate_complex(doc: &ComplexDocument) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = doc.dim;

    let mut seen = BTreeSet::new();
    for f in &doc.faces {
        if !seen.insert(&f.id) {
            report.push(Some(&f.id), Rule::DuplicateId, "id appears more than once");
        }
    }
    let top_count = doc.faces.iter().filter(|f| f.dim == n).count();
    if top_count != 1 {
        report.push(None, Rule::CodimZeroCount, format!("expected exactly one codim-0 face, found {top_count}"));
    }

    let hyperfaces: BTreeSet<&FaceId> = doc.faces.iter().filter(|f| f.dim + 1 == n).map(|f| &f.id).collect();
    let ids: BTreeSet<&FaceId> = doc.faces.iter().map(|f| &f.id).collect();

    for f in &doc.faces {
        if f.dim > n {
            report.push(Some(&f.id), Rule::DimensionRange, format!("dim {} exceeds ambient dim {n}", f.dim));
            continue;
        }
        let codim = n - f.dim;
        let set: BTreeSet<&FaceId> = f.contained_in_hyperfaces.iter().collect();
        if set.len() != codim || f.contained_in_hyperfaces.len() != codim {
            report.push(
                Some(&f.id),
                Rule::CodimContainmentMismatch,
                format!("codim {codim} face lists {} containing hyperfaces", f.contained_in_hyperfaces.len()),
            );
        }
        for h in &set {
            if !hyperfaces.contains(h) {
                report.push(Some(&f.id), Rule::UnknownHyperface, format!("`{h}` is not a hyperface"));
            }
        }
        if codim == 1 && !set.contains(&f.id) {
            report.push(Some(&f.id), Rule::HyperfaceSelf, "hyperface does not list itself");
        }
        if let Some(list) = &f.within {
            for id in list {
                if !ids.contains(id) {
                    report.push(Some(&f.id), Rule::UnknownFace, format!("`{id}` is not a face"));
                }
            }
        }
        if let Some(problem) = f.geometry.parameter_problem() {
            report.push(Some(&f.id), Rule::BadGeometry, problem);
        }
        if let Some(d) = f.geometry.dim() {
            if d != f.dim {
                report.push(
                    Some(&f.id),
                    Rule::BadGeometry,
                    format!("geometry {} has dimension {d}, face has dimension {}", f.geometry, f.dim),
                );
            }
        }
    }

    for h in &hyperfaces {
        match doc.weights.get(*h) {
            None => report.push(Some(h), Rule::WeightMissing, "hyperface has no weight"),
            Some(&w) if w < 1 => report.push(Some(h), Rule::WeightBelowOne, format!("weight {w} < 1")),
            Some(_) => {}
        }
    }
    for id in doc.weights.keys() {
        if !hyperfaces.contains(id) {
            report.push(Some(id), Rule::WeightNotHyperface, "weight given for a face that is not a hyperface");
        }
    }

    if !report.is_valid() {
        return report;
    }

    // Order-dependent checks, only meaningful once the local data is sound.
    let covers = covers_of(doc);
    let sets: Vec<BTreeSet<&FaceId>> =
        doc.faces.iter().map(|f| f.contained_in_hyperfaces.iter().collect()).collect();
    for (i, f) in doc.faces.iter().enumerate() {
        for &j in &covers[i] {
            let g = &doc.faces[j];
            if g.dim != f.dim + 1 || !sets[j].is_subset(&sets[i]) {
                report.push(
                    Some(&f.id),
                    Rule::NotGraded,
                    format!("covered by `{}` (dim {}) which is not a codim-1 face containing it", g.id, g.dim),
                );
            }
        }
        if f.dim == n {
            continue;
        }
        // Each (k-1)-subset of the hyperface set must be realized by exactly one cover.
        for h in &sets[i] {
            let mut sub = sets[i].clone();
            sub.remove(h);
            let matching: Vec<usize> = covers[i].iter().copied().filter(|&j| sets[j] == sub).collect();
            let names: Vec<&str> = sub.iter().map(|s| s.as_str()).collect();
            match matching.len() {
                0 => report.push(
                    Some(&f.id),
                    Rule::MissingIntermediateFace,
                    format!("no face with hyperface set {names:?} contains it"),
                ),
                1 => {}
                _ => report.push(
                    Some(&f.id),
                    Rule::AmbiguousContainment,
                    format!("several faces with hyperface set {names:?} contain it; list them under `within`"),
                ),
            }
        }
    }
    if !report.is_valid() {
        return report;
    }

    let ancestors = ancestors_of(&covers);
    for (i, f) in doc.faces.iter().enumerate() {
        let minimal = !ancestors.iter().enumerate().any(|(j, a)| j != i && a.contains(&i));
        if minimal && f.geometry == GeometryTag::None {
            report.push(Some(&f.id), Rule::MinimalFaceGeometry, "minimal face needs a concrete geometry");
        }
    }
    report
}

/// Hyperface weights `c_H ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WeightSystem(BTreeMap<FaceId, u32>);

impl WeightSystem {
    pub fn get(&self, id: &FaceId) -> Option<u32> {
        self.0.get(id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FaceId, u32)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub id: FaceId,
    pub dim: usize,
    pub codim: usize,
    pub containing_hyperfaces: BTreeSet<FaceId>,
    pub geometry: GeometryTag,
    within: Option<Vec<FaceId>>,
}

/// A validated complex. Immutable after construction.
#[derive(Clone, Debug)]
pub struct CornerComplex {
    name: String,
    dim: usize,
    faces: Vec<Face>,
    index: BTreeMap<FaceId, usize>,
    weights: WeightSystem,
    ancestors: Vec<BTreeSet<usize>>,
}

impl TryFrom<ComplexDocument> for CornerComplex {
    type Error = Error;

    fn try_from(doc: ComplexDocument) -> Result<Self> {
        let report = validate_complex(&doc);
        if !report.is_valid() {
            return Err(Error::InvalidComplex(report));
        }
        let ancestors = ancestors_of(&covers_of(&doc));
        let faces: Vec<Face> = doc
            .faces
            .into_iter()
            .map(|f| Face {
                codim: doc.dim - f.dim,
                containing_hyperfaces: f.contained_in_hyperfaces.into_iter().collect(),
                id: f.id,
                dim: f.dim,
                geometry: f.geometry,
                within: f.within,
            })
            .collect();
        let index = faces.iter().enumerate().map(|(i, f)| (f.id.clone(), i)).collect();
        let weights = WeightSystem(doc.weights.into_iter().map(|(k, v)| (k, v as u32)).collect());
        Ok(CornerComplex { name: doc.name, dim: doc.dim, faces, index, weights, ancestors })
    }
}

impl CornerComplex {
    pub fn from_json_str(s: &str) -> Result<Self> {
        ComplexDocument::from_json_str(s)?.try_into()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        ComplexDocument::from_path(path)?.try_into()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn weights(&self) -> &WeightSystem {
        &self.weights
    }

    pub fn face(&self, id: &FaceId) -> Option<&Face> {
        self.index.get(id).map(|&i| &self.faces[i])
    }

    pub(crate) fn require_face(&self, id: &FaceId) -> Result<&Face> {
        self.face(id)
            .ok_or_else(|| Error::domain(format!("`{id}` is not a face of complex `{}`", self.name)))
    }

    /// The codim-0 face.
    pub fn top(&self) -> &Face {
        self.faces.iter().find(|f| f.codim == 0).expect("validated complex has a top face")
    }

    /// Closure order: `a ≤ b` when face `a` lies in the closure of face `b`.
    pub fn le(&self, a: &FaceId, b: &FaceId) -> bool {
        match (self.index.get(a), self.index.get(b)) {
            (Some(&i), Some(&j)) => self.ancestors[i].contains(&j),
            _ => false,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.faces.iter().all(|f| f.codim == 0)
    }

    pub fn to_document(&self) -> ComplexDocument {
        ComplexDocument {
            name: self.name.clone(),
            dim: self.dim,
            weights: self.weights.iter().map(|(k, v)| (k.clone(), v as i64)).collect(),
            faces: self
                .faces
                .iter()
                .map(|f| FaceSpec {
                    id: f.id.clone(),
                    dim: f.dim,
                    contained_in_hyperfaces: f.containing_hyperfaces.iter().cloned().collect(),
                    geometry: f.geometry.clone(),
                    within: f.within.clone(),
                })
                .collect(),
        }
    }
}

/// Codim-1 faces, sorted by id.
pub fn hyperfaces(cc: &CornerComplex) -> Vec<FaceId> {
    let mut ids: Vec<FaceId> = cc.faces.iter().filter(|f| f.codim == 1).map(|f| f.id.clone()).collect();
    ids.sort();
    ids
}

/// Faces containing no other face, sorted by id.
pub fn minimal_faces(cc: &CornerComplex) -> Vec<FaceId> {
    let mut ids: Vec<FaceId> = (0..cc.faces.len())
        .filter(|&i| !cc.ancestors.iter().enumerate().any(|(j, a)| j != i && a.contains(&i)))
        .map(|i| cc.faces[i].id.clone())
        .collect();
    ids.sort();
    ids
}

/// The complex of faces lying in the hyperface `h`, with `h` as its top face
/// and the induced weights: each hyperface `F` of `h` (a component of
/// `h ∩ F'`) carries the weight of the ambient hyperface `F'`.
pub fn restrict(cc: &CornerComplex, h: &FaceId) -> Result<CornerComplex> {
    let hf = cc.require_face(h)?;
    if hf.codim != 1 {
        return Err(Error::domain(format!("`{h}` has codim {} and is not a hyperface", hf.codim)));
    }
    let members: Vec<&Face> = cc.faces.iter().filter(|f| cc.le(&f.id, h)).collect();
    let new_hyperfaces: Vec<&Face> = members.iter().copied().filter(|f| f.codim == 2).collect();

    let mut weights = BTreeMap::new();
    for g in &new_hyperfaces {
        let other = g
            .containing_hyperfaces
            .iter()
            .find(|x| *x != h)
            .expect("codim-2 face lies in two hyperfaces");
        let w = cc.weights.get(other).expect("validated weights");
        weights.insert(g.id.clone(), w as i64);
    }

    let keep: BTreeSet<&FaceId> = members.iter().map(|f| &f.id).collect();
    let faces = members
        .iter()
        .map(|f| FaceSpec {
            id: f.id.clone(),
            dim: f.dim,
            contained_in_hyperfaces: new_hyperfaces
                .iter()
                .filter(|g| cc.le(&f.id, &g.id))
                .map(|g| g.id.clone())
                .collect(),
            geometry: f.geometry.clone(),
            within: f
                .within
                .as_ref()
                .map(|list| list.iter().filter(|id| keep.contains(id)).cloned().collect()),
        })
        .collect();

    let doc = ComplexDocument { name: format!("{}|{}", cc.name, h), dim: hf.dim, weights, faces };
    CornerComplex::try_from(doc)
}

/// Restriction to an arbitrary face, obtained by restricting through a chain
/// of hyperfaces. The result does not depend on the chain.
pub fn restrict_to_face(cc: &CornerComplex, f: &FaceId) -> Result<CornerComplex> {
    cc.require_face(f)?;
    let mut current = cc.clone();
    while current.top().id != *f {
        let next = hyperfaces(&current)
            .into_iter()
            .find(|h| current.le(f, h))
            .ok_or_else(|| Error::numerical(format!("face `{f}` is not reachable from the top face")))?;
        current = restrict(&current, &next)?;
    }
    Ok(current)
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    fn face(id: &str, dim: usize, hs: &[&str], geometry: GeometryTag) -> FaceSpec {
        FaceSpec {
            id: id.into(),
            dim,
            contained_in_hyperfaces: hs.iter().map(|s| FaceId::from(*s)).collect(),
            geometry,
            within: None,
        }
    }

    pub fn square_doc() -> ComplexDocument {
        let edges = ["e1", "e2", "e3", "e4"];
        let mut faces = vec![face("M", 2, &[], GeometryTag::None)];
        for e in edges {
            faces.push(face(e, 1, &[e], GeometryTag::None));
        }
        for (a, b) in [("e1", "e2"), ("e2", "e3"), ("e3", "e4"), ("e4", "e1")] {
            faces.push(face(&format!("v_{a}_{b}"), 0, &[a, b], GeometryTag::Point));
        }
        ComplexDocument {
            name: "square".into(),
            dim: 2,
            weights: edges.iter().map(|e| (FaceId::from(*e), 1)).collect(),
            faces,
        }
    }

    pub fn cylinder_doc(sphere_dim: usize) -> ComplexDocument {
        ComplexDocument {
            name: format!("cyl_s{sphere_dim}"),
            dim: sphere_dim + 1,
            weights: [(FaceId::from("S"), 1)].into_iter().collect(),
            faces: vec![
                face("M", sphere_dim + 1, &[], GeometryTag::None),
                face("S", sphere_dim, &["S"], GeometryTag::RoundSphere { dim: sphere_dim, radius: 1.0 }),
            ],
        }
    }

    pub fn closed_torus_doc() -> ComplexDocument {
        let two_pi = 2.0 * std::f64::consts::PI;
        ComplexDocument {
            name: "torus".into(),
            dim: 2,
            weights: BTreeMap::new(),
            faces: vec![face("T", 2, &[], GeometryTag::RectTorus { lengths: vec![two_pi, two_pi] })],
        }
    }

    /// Ball whose boundary is three disks meeting along three arcs, which in
    /// turn meet at two corner points `N` and `S`.
    pub fn cube_corner_doc(weights: [i64; 3]) -> ComplexDocument {
        let mut faces = vec![face("M", 3, &[], GeometryTag::None)];
        for h in ["H1", "H2", "H3"] {
            faces.push(face(h, 2, &[h], GeometryTag::None));
        }
        for (a, b) in [("H1", "H2"), ("H1", "H3"), ("H2", "H3")] {
            faces.push(face(&format!("E{}{}", &a[1..], &b[1..]), 1, &[a, b], GeometryTag::None));
        }
        faces.push(face("N", 0, &["H1", "H2", "H3"], GeometryTag::Point));
        faces.push(face("S", 0, &["H1", "H2", "H3"], GeometryTag::Point));
        ComplexDocument {
            name: "cube_corner".into(),
            dim: 3,
            weights: ["H1", "H2", "H3"].iter().zip(weights).map(|(h, w)| (FaceId::from(*h), w)).collect(),
            faces,
        }
    }
}
