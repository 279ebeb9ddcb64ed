//! Essential-spectrum recursion over the face lattice, spectrum assembly, and
//! Fredholm / compactness queries for `Δ_p` on the interior of a complex.
//!
//! For a hyperface `H` the indicial operator of `Δ_p` is the family
//! `(λ² + Δ_p^H) ⊕ (λ² + Δ_{p-1}^H)`, `λ ∈ ℝ`, so its spectrum is the ray
//! starting at `min{m_H^(p), m_H^(p-1)}` where `m_H^(q) = min σ(Δ_q^H)`. The
//! essential spectrum of `Δ_p` is the ray starting at the smallest of these
//! over all hyperfaces. A face that is itself noncompact is handled the same
//! way one level down, bottoming out at the minimal faces, whose spectra come
//! from [`face_base_spectrum`].

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_complex::Complex64;
use serde::Deserialize;

use crate::corner_complex::{hyperfaces, minimal_faces, restrict, restrict_to_face, CornerComplex, FaceId};
use crate::dec::base::{face_base_spectrum, BaseResolution};
use crate::error::{Error, Result};
use crate::spectrum::{indicial_spectrum, min_spectrum, SpectrumDesc};

/// User-asserted discrete eigenvalues below a face's essential threshold,
/// keyed by face and degree.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundStates(BTreeMap<(FaceId, usize), Vec<f64>>);

impl BoundStates {
    pub fn insert(&mut self, face: impl Into<FaceId>, degree: usize, values: Vec<f64>) -> Result<()> {
        if let Some(bad) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("bound state {bad} is not a nonnegative real")));
        }
        let mut values = values;
        values.sort_by(f64::total_cmp);
        self.0.insert((face.into(), degree), values);
        Ok(())
    }

    pub fn get(&self, face: &FaceId, degree: usize) -> Option<&[f64]> {
        self.0.get(&(face.clone(), degree)).map(Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parses `{"face": {"degree": [values...]}}`.
    pub fn from_json_str(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(transparent)]
        struct Wire(BTreeMap<FaceId, BTreeMap<String, Vec<f64>>>);
        let wire: Wire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut out = BoundStates::default();
        for (face, per_degree) in wire.0 {
            for (degree, values) in per_degree {
                let p: usize =
                    degree.parse().map_err(|_| Error::Parse(format!("bound-state degree `{degree}` is not an integer")))?;
                out.insert(face.clone(), p, values)?;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RecursionOptions {
    pub bound_states: BoundStates,
    pub base_resolution: BaseResolution,
    /// Annotate values that may be too large because bound states of a
    /// noncompact face were not supplied.
    pub certified_only: bool,
}

/// `min σ(Δ_q)` on a face, or `+∞` for an absent form block.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FaceMinimum {
    pub value: f64,
    /// Only meaningful with `certified_only`: the true minimum may be smaller
    /// (the value is an upper bound).
    pub upper_bound_only: bool,
}

impl FaceMinimum {
    fn exact(value: f64) -> Self {
        FaceMinimum { value, upper_bound_only: false }
    }
}

/// Start of the essential ray, `None` on a closed manifold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Threshold {
    pub value: Option<f64>,
    pub upper_bound_only: bool,
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            None => f.write_str("none (closed manifold)"),
            Some(m) if self.upper_bound_only => write!(f, "{m} (upper bound)"),
            Some(m) => write!(f, "{m}"),
        }
    }
}

/// Per-query engine; memoizes face minima by `(face, degree)`.
struct Engine<'a> {
    root: &'a CornerComplex,
    opts: &'a RecursionOptions,
    cache: RefCell<HashMap<(FaceId, usize), FaceMinimum>>,
    restrictions: RefCell<HashMap<FaceId, CornerComplex>>,
}

impl<'a> Engine<'a> {
    fn new(root: &'a CornerComplex, opts: &'a RecursionOptions) -> Self {
        Engine { root, opts, cache: RefCell::default(), restrictions: RefCell::default() }
    }

    fn restriction(&self, f: &FaceId) -> Result<CornerComplex> {
        if let Some(c) = self.restrictions.borrow().get(f) {
            return Ok(c.clone());
        }
        let c = restrict_to_face(self.root, f)?;
        self.restrictions.borrow_mut().insert(f.clone(), c.clone());
        Ok(c)
    }

    /// Face minimum with absent blocks (`q > dim F`) mapped to `+∞`.
    fn block_min(&self, f: &FaceId, q: Option<usize>) -> Result<FaceMinimum> {
        let face = self.root.require_face(f)?;
        match q {
            Some(q) if q <= face.dim => self.face_min(f, q),
            _ => Ok(FaceMinimum::exact(f64::INFINITY)),
        }
    }

    fn face_min(&self, f: &FaceId, q: usize) -> Result<FaceMinimum> {
        if let Some(hit) = self.cache.borrow().get(&(f.clone(), q)) {
            return Ok(*hit);
        }
        let sub = self.restriction(f)?;
        let result = if sub.is_closed() {
            FaceMinimum::exact(min_spectrum(&face_base_spectrum(&sub.top().geometry, q, &self.opts.base_resolution)?)?)
        } else {
            let t = self.threshold_of(&sub, q)?;
            let m = t.value.expect("complex with hyperfaces has a threshold");
            match self.opts.bound_states.get(f, q) {
                Some(states) if !states.is_empty() => {
                    let lowest = states[0].min(m);
                    FaceMinimum { value: lowest, upper_bound_only: t.upper_bound_only && lowest > 0.0 && lowest == m }
                }
                Some(_) => FaceMinimum { value: m, upper_bound_only: t.upper_bound_only },
                None => FaceMinimum {
                    value: m,
                    upper_bound_only: t.upper_bound_only || (self.opts.certified_only && q > 0 && m > 0.0),
                },
            }
        };
        self.cache.borrow_mut().insert((f.clone(), q), result);
        Ok(result)
    }

    /// Threshold of a (sub)complex whose faces all belong to the root.
    fn threshold_of(&self, cc: &CornerComplex, p: usize) -> Result<Threshold> {
        let hs = hyperfaces(cc);
        if hs.is_empty() {
            return Ok(Threshold { value: None, upper_bound_only: false });
        }
        let mut best = f64::INFINITY;
        let mut flagged = false;
        for h in &hs {
            let same = self.block_min(h, Some(p))?;
            let lower = if p == 0 { FaceMinimum::exact(f64::INFINITY) } else { self.block_min(h, Some(p - 1))? };
            best = best.min(same.value).min(lower.value);
            flagged |= same.upper_bound_only || lower.upper_bound_only;
        }
        if !best.is_finite() {
            return Err(Error::numerical(format!("no form block of degree {p} on any hyperface of `{}`", cc.name())));
        }
        Ok(Threshold { value: Some(best), upper_bound_only: self.opts.certified_only && flagged && best > 0.0 })
    }
}

fn check_degree(cc: &CornerComplex, p: usize) -> Result<()> {
    if p > cc.dim() {
        return Err(Error::Unsupported(format!("degree {p} exceeds dimension {} of `{}`", cc.dim(), cc.name())));
    }
    Ok(())
}

/// `min σ(Δ_p)` on the face `f` (on its interior when `f` is not minimal).
pub fn face_min_spectrum(cc: &CornerComplex, f: &FaceId, p: usize, opts: &RecursionOptions) -> Result<FaceMinimum> {
    let face = cc.require_face(f)?;
    if p > face.dim {
        return Err(Error::domain(format!("degree {p} exceeds dimension {} of face `{f}`", face.dim)));
    }
    Engine::new(cc, opts).face_min(f, p)
}

/// Start `m` of `σ_ess(Δ_p) = [m, ∞)`: `m^(0)` for `p = 0`, otherwise
/// `min{m^(p), m^(p-1)}`. `None` for a closed manifold.
pub fn essential_threshold(cc: &CornerComplex, p: usize, opts: &RecursionOptions) -> Result<Threshold> {
    check_degree(cc, p)?;
    Engine::new(cc, opts).threshold_of(cc, p)
}

/// Spectrum of `Δ_p` on the interior: the essential ray plus any asserted
/// bound states of the top face; the full discrete spectrum when closed.
pub fn full_spectrum(cc: &CornerComplex, p: usize, opts: &RecursionOptions) -> Result<SpectrumDesc> {
    check_degree(cc, p)?;
    if cc.is_closed() {
        return face_base_spectrum(&cc.top().geometry, p, &opts.base_resolution);
    }
    let m = essential_threshold(cc, p, opts)?.value.expect("complex with boundary");
    let states = opts.bound_states.get(&cc.top().id, p).unwrap_or(&[]).to_vec();
    SpectrumDesc::new(states, Some(m))
}

/// Spectrum of `In_H(Δ_p)`, assembled from the face spectra of `H` through
/// [`indicial_spectrum`].
pub fn hyperface_indicial_spectrum(
    cc: &CornerComplex,
    h: &FaceId,
    p: usize,
    opts: &RecursionOptions,
) -> Result<SpectrumDesc> {
    check_degree(cc, p)?;
    let sub = restrict(cc, h)?;
    let block = |q: usize| -> Result<SpectrumDesc> {
        if q > sub.dim() {
            Ok(SpectrumDesc::empty())
        } else {
            full_spectrum(&sub, q, opts)
        }
    };
    let same = block(p)?;
    let lower = if p == 0 { None } else { Some(block(p - 1)?) };
    indicial_spectrum(p, &same, lower.as_ref())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OperatorKind {
    /// `Δ_p − z`.
    LaplacianShift { p: usize, z: Complex64 },
    /// `(1 + Δ_p)^{-s}`.
    ResolventPower { p: usize, s: f64 },
}

impl fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperatorKind::LaplacianShift { p, .. } => write!(f, "laplacian_shift(p={p})"),
            OperatorKind::ResolventPower { p, .. } => write!(f, "resolvent_power(p={p})"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct OperatorQuery<'a> {
    pub kind: OperatorKind,
    pub complex: &'a CornerComplex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IndicialVerdict {
    Invertible,
    NotInvertible,
    /// The indicial restriction is a nonzero operator.
    Nonvanishing,
}

impl fmt::Display for IndicialVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndicialVerdict::Invertible => "invertible",
            IndicialVerdict::NotInvertible => "not_invertible",
            IndicialVerdict::Nonvanishing => "nonvanishing",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyperfaceCertificate {
    pub face: FaceId,
    pub degree: usize,
    pub indicial: SpectrumDesc,
    pub verdict: IndicialVerdict,
}

/// Evidence behind a Fredholm or compactness answer.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicialCertificate {
    pub operator: OperatorKind,
    pub elliptic: bool,
    pub entries: Vec<HyperfaceCertificate>,
    pub verdict: bool,
}

impl IndicialCertificate {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("face_id,degree,threshold,verdict\n");
        for e in &self.entries {
            let m = e.indicial.essential_threshold().map_or("none".to_string(), |m| m.to_string());
            out.push_str(&format!("{},{},{},{}\n", e.face, e.degree, m, e.verdict));
        }
        match self.operator {
            OperatorKind::LaplacianShift { z, .. } => {
                out.push_str("operator,z,fredholm_verdict\n");
                out.push_str(&format!("{},{},{}\n", self.operator, format_complex(z), self.verdict));
            }
            OperatorKind::ResolventPower { s, .. } => {
                out.push_str("operator,s,compact_verdict\n");
                out.push_str(&format!("{},{},{}\n", self.operator, s, self.verdict));
            }
        }
        out
    }
}

/// Renders `a`, `a+bi` or `a-bi`.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im > 0.0 {
        format!("{}+{}i", z.re, z.im)
    } else {
        format!("{}-{}i", z.re, -z.im)
    }
}

/// Fredholmness of `Δ_p − z` on the interior.
///
/// `Δ_p − z` is elliptic, so it is Fredholm exactly when every indicial
/// operator `In_H(Δ_p) − z` is invertible, i.e. when `z` avoids every
/// indicial ray. Nonreal shifts are always Fredholm; `z = m` is not.
pub fn is_fredholm(q: &OperatorQuery<'_>, opts: &RecursionOptions) -> Result<(bool, IndicialCertificate)> {
    let OperatorKind::LaplacianShift { p, z } = q.kind else {
        return Err(Error::Unsupported("Fredholm queries take a Laplacian shift".into()));
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain("shift must be finite"));
    }
    let cc = q.complex;
    check_degree(cc, p)?;
    let mut entries = Vec::new();
    for h in hyperfaces(cc) {
        let indicial = hyperface_indicial_spectrum(cc, &h, p, opts)?;
        let m = indicial.essential_threshold().expect("indicial spectra are rays");
        let verdict = if z.im != 0.0 || z.re < m { IndicialVerdict::Invertible } else { IndicialVerdict::NotInvertible };
        entries.push(HyperfaceCertificate { face: h, degree: p, indicial, verdict });
    }
    let elliptic = true;
    let verdict = elliptic && entries.iter().all(|e| e.verdict == IndicialVerdict::Invertible);
    Ok((verdict, IndicialCertificate { operator: q.kind, elliptic, entries, verdict }))
}

/// Compactness of `(1 + Δ_p)^{-s}` on the interior: its principal symbol
/// vanishes, and each indicial restriction `(1 + λ² + Δ^H)^{-s}` is nonzero,
/// so it is compact exactly when there is no boundary.
pub fn is_compact(q: &OperatorQuery<'_>, opts: &RecursionOptions) -> Result<(bool, IndicialCertificate)> {
    let OperatorKind::ResolventPower { p, s } = q.kind else {
        return Err(Error::Unsupported("compactness queries take a resolvent power".into()));
    };
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::domain(format!("resolvent power s = {s} must be positive")));
    }
    let cc = q.complex;
    check_degree(cc, p)?;
    let mut entries = Vec::new();
    for h in hyperfaces(cc) {
        let indicial = hyperface_indicial_spectrum(cc, &h, p, opts)?;
        entries.push(HyperfaceCertificate { face: h, degree: p, indicial, verdict: IndicialVerdict::Nonvanishing });
    }
    let verdict = entries.is_empty();
    Ok((verdict, IndicialCertificate { operator: q.kind, elliptic: true, entries, verdict }))
}

/// Minimal faces of a complex with their per-degree base spectrum minima,
/// used in reports.
pub fn minimal_face_summary(cc: &CornerComplex, opts: &RecursionOptions) -> Result<Vec<(FaceId, Vec<f64>)>> {
    minimal_faces(cc)
        .into_iter()
        .map(|f| {
            let face = cc.require_face(&f)?;
            let mins = (0..=face.dim)
                .map(|q| min_spectrum(&face_base_spectrum(&face.geometry, q, &opts.base_resolution)?))
                .collect::<Result<Vec<_>>>()?;
            Ok((f, mins))
        })
        .collect()
}
