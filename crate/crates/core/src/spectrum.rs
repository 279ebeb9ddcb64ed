//! Spectrum descriptions of the form "finite discrete part below a single
//! essential ray", and the set arithmetic used to assemble indicial spectra.

use std::fmt;

use crate::error::{Error, Result};

/// A spectrum `{v1, v2, ...} ∪ [m, ∞)`.
///
/// The discrete part is a sorted multiset of nonnegative reals. When a ray is
/// present only the discrete values strictly below its start are kept.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SpectrumDesc {
    discrete: Vec<f64>,
    essential_threshold: Option<f64>,
}

impl SpectrumDesc {
    /// Builds a normalized spectrum. Fails on negative or non-finite input.
    pub fn new(mut discrete: Vec<f64>, essential_threshold: Option<f64>) -> Result<Self> {
        if let Some(m) = essential_threshold {
            if !(m.is_finite() && m >= 0.0) {
                return Err(Error::domain(format!("essential threshold {m} is not a nonnegative real")));
            }
        }
        if let Some(bad) = discrete.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::domain(format!("discrete eigenvalue {bad} is not a nonnegative real")));
        }
        discrete.sort_by(f64::total_cmp);
        let mut s = SpectrumDesc { discrete, essential_threshold };
        s.normalize();
        Ok(s)
    }

    pub fn discrete(values: Vec<f64>) -> Result<Self> {
        Self::new(values, None)
    }

    pub fn ray(threshold: f64) -> Result<Self> {
        Self::new(Vec::new(), Some(threshold))
    }

    /// The empty set: the spectrum of an operator on a zero-dimensional space.
    pub fn empty() -> Self {
        SpectrumDesc::default()
    }

    pub fn discrete_values(&self) -> &[f64] {
        &self.discrete
    }

    pub fn essential_threshold(&self) -> Option<f64> {
        self.essential_threshold
    }

    pub fn is_empty(&self) -> bool {
        self.discrete.is_empty() && self.essential_threshold.is_none()
    }

    fn normalize(&mut self) {
        if let Some(m) = self.essential_threshold {
            self.discrete.retain(|v| *v < m);
        }
    }

    /// Smallest point of the spectrum.
    pub fn min(&self) -> Result<f64> {
        min_spectrum(self)
    }

    /// Kernel dimension of a purely discrete spectrum (number of exact zeros).
    pub fn zero_multiplicity(&self) -> usize {
        self.discrete.iter().take_while(|v| **v == 0.0).count()
    }

    /// One-line CSV row: `;`-joined discrete values, then the threshold or `none`.
    pub fn to_csv_row(&self) -> String {
        let discrete: Vec<String> = self.discrete.iter().map(|v| v.to_string()).collect();
        let threshold = match self.essential_threshold {
            Some(m) => m.to_string(),
            None => "none".to_string(),
        };
        format!("{},{}", discrete.join(";"), threshold)
    }

    pub fn from_csv_row(row: &str) -> Result<Self> {
        let (discrete, threshold) = row
            .trim()
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("spectrum row `{row}` has no `,` separator")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("bad number `{s}`: {e}")))
        };
        let values = if discrete.trim().is_empty() {
            Vec::new()
        } else {
            discrete.split(';').map(parse).collect::<Result<Vec<_>>>()?
        };
        let threshold = match threshold.trim() {
            "none" => None,
            s => Some(parse(s)?),
        };
        Self::new(values, threshold)
    }
}

pub const CSV_HEADER: &str = "discrete,essential_threshold";

impl fmt::Display for SpectrumDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let discrete: Vec<String> = self.discrete.iter().map(|v| v.to_string()).collect();
        match (self.discrete.is_empty(), self.essential_threshold) {
            (true, None) => write!(f, "∅"),
            (true, Some(m)) => write!(f, "[{m}, ∞)"),
            (false, None) => write!(f, "{{{}}}", discrete.join(", ")),
            (false, Some(m)) => write!(f, "{{{}}} ∪ [{m}, ∞)", discrete.join(", ")),
        }
    }
}

/// Minimum of the discrete values and the threshold.
pub fn min_spectrum(s: &SpectrumDesc) -> Result<f64> {
    let d = s.discrete.first().copied();
    match (d, s.essential_threshold) {
        (None, None) => Err(Error::domain("minimum of an empty spectrum")),
        (Some(a), None) => Ok(a),
        (None, Some(m)) => Ok(m),
        (Some(a), Some(m)) => Ok(a.min(m)),
    }
}

/// Set union, renormalized so that points at or above the ray are absorbed.
///
/// A value repeated in both inputs keeps the larger of its two multiplicities,
/// which makes the operation idempotent.
pub fn union(a: &SpectrumDesc, b: &SpectrumDesc) -> SpectrumDesc {
    let essential_threshold = match (a.essential_threshold, b.essential_threshold) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    let (mut i, mut j) = (0, 0);
    let mut discrete = Vec::with_capacity(a.discrete.len().max(b.discrete.len()));
    while i < a.discrete.len() || j < b.discrete.len() {
        match (a.discrete.get(i), b.discrete.get(j)) {
            (Some(x), Some(y)) if x == y => {
                discrete.push(*x);
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                discrete.push(*x);
                i += 1;
            }
            (Some(_), Some(y)) => {
                discrete.push(*y);
                j += 1;
            }
            (Some(x), None) => {
                discrete.push(*x);
                i += 1;
            }
            (None, Some(y)) => {
                discrete.push(*y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    let mut s = SpectrumDesc { discrete, essential_threshold };
    s.normalize();
    s
}

/// Spectrum of the indicial family `λ² + Δ_p ⊕ λ² + Δ_{p-1}` swept over `λ ∈ ℝ`.
///
/// Every point `μ` of either block becomes the ray `[μ, ∞)`, so the result is
/// the ray starting at the smallest point of the two blocks. `lower` must be
/// given exactly when `p > 0`. A block that is the empty set (no forms of that
/// degree on the face) contributes nothing.
pub fn indicial_spectrum(
    p: usize,
    same_degree: &SpectrumDesc,
    lower: Option<&SpectrumDesc>,
) -> Result<SpectrumDesc> {
    let blocks = match (p, lower) {
        (0, None) => same_degree.clone(),
        (0, Some(_)) => {
            return Err(Error::domain("degree 0 has no lower form block"));
        }
        (_, None) => {
            return Err(Error::domain(format!("degree {p} requires the degree {} block", p - 1)));
        }
        (_, Some(low)) => union(same_degree, low),
    };
    SpectrumDesc::ray(min_spectrum(&blocks)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(d: &[f64], m: Option<f64>) -> SpectrumDesc {
        SpectrumDesc::new(d.to_vec(), m).unwrap()
    }

    #[test]
    fn min_examples() {
        assert_eq!(min_spectrum(&s(&[0.0, 2.0, 2.0, 6.0], None)).unwrap(), 0.0);
        assert_eq!(min_spectrum(&s(&[], Some(3.0))).unwrap(), 3.0);
        assert_eq!(min_spectrum(&s(&[1.0], Some(4.0))).unwrap(), 1.0);
        assert!(matches!(min_spectrum(&SpectrumDesc::empty()), Err(Error::Domain(_))));
    }

    #[test]
    fn indicial_examples() {
        let r = indicial_spectrum(0, &s(&[0.0, 2.0], None), None).unwrap();
        assert_eq!(r, s(&[], Some(0.0)));

        let r = indicial_spectrum(2, &s(&[0.0, 6.0], None), Some(&s(&[2.0, 6.0], None))).unwrap();
        assert_eq!(r.essential_threshold(), Some(0.0));

        let three = s(&[3.0, 8.0, 15.0], None);
        let r = indicial_spectrum(2, &three, Some(&three)).unwrap();
        assert_eq!(r.essential_threshold(), Some(3.0));
        assert!(r.discrete_values().is_empty());
    }

    #[test]
    fn indicial_block_mismatch() {
        let a = s(&[0.0], None);
        assert!(indicial_spectrum(0, &a, Some(&a)).is_err());
        assert!(indicial_spectrum(1, &a, None).is_err());
    }

    #[test]
    fn indicial_empty_block_is_skipped() {
        let r = indicial_spectrum(3, &SpectrumDesc::empty(), Some(&s(&[0.0], None))).unwrap();
        assert_eq!(r.essential_threshold(), Some(0.0));
        assert!(indicial_spectrum(3, &SpectrumDesc::empty(), Some(&SpectrumDesc::empty())).is_err());
    }

    #[test]
    fn union_examples() {
        assert_eq!(union(&s(&[0.0], None), &s(&[], Some(3.0))), s(&[0.0], Some(3.0)));
        assert_eq!(union(&s(&[], Some(2.0)), &s(&[], Some(5.0))), s(&[], Some(2.0)));
        assert_eq!(union(&s(&[1.0, 4.0], Some(3.0)), &SpectrumDesc::empty()), s(&[1.0], Some(3.0)));
    }

    #[test]
    fn tie_is_absorbed() {
        assert_eq!(s(&[1.0, 3.0], Some(3.0)).discrete_values(), &[1.0]);
    }

    #[test]
    fn rejects_negative() {
        assert!(SpectrumDesc::new(vec![-1.0], None).is_err());
        assert!(SpectrumDesc::new(vec![], Some(f64::NAN)).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(s(&[0.0, 1.5], Some(3.0)).to_string(), "{0, 1.5} ∪ [3, ∞)");
        assert_eq!(s(&[], Some(0.0)).to_string(), "[0, ∞)");
        assert_eq!(SpectrumDesc::empty().to_string(), "∅");
    }

    /// Brute-force sweep of `λ² + μ` over a λ-grid in [-10, 10] with step 0.01.
    fn swept_min(points: &[f64]) -> f64 {
        let mut lo = f64::INFINITY;
        for i in -1000..=1000 {
            let lambda = i as f64 * 0.01;
            for mu in points {
                lo = lo.min(lambda * lambda + mu);
            }
        }
        lo
    }

    #[test]
    fn indicial_threshold_matches_lambda_sweep() {
        let a = s(&[3.0, 8.0], None);
        let b = s(&[3.0, 5.0], None);
        let r = indicial_spectrum(2, &a, Some(&b)).unwrap();
        assert_eq!(r.essential_threshold().unwrap(), swept_min(&[3.0, 8.0, 3.0, 5.0]));
    }

    fn arb_spectrum() -> impl Strategy<Value = SpectrumDesc> {
        (
            prop::collection::vec(0.0f64..50.0, 0..6),
            prop::option::of(0.0f64..50.0),
        )
            .prop_map(|(d, m)| SpectrumDesc::new(d, m).unwrap())
    }

    proptest! {
        #[test]
        fn union_laws(a in arb_spectrum(), b in arb_spectrum(), c in arb_spectrum()) {
            prop_assert_eq!(union(&a, &b), union(&b, &a));
            prop_assert_eq!(union(&union(&a, &b), &c), union(&a, &union(&b, &c)));
            prop_assert_eq!(&union(&a, &a), &a);
            if !a.is_empty() && !b.is_empty() {
                prop_assert_eq!(
                    min_spectrum(&union(&a, &b)).unwrap(),
                    min_spectrum(&a).unwrap().min(min_spectrum(&b).unwrap())
                );
            }
        }

        #[test]
        fn indicial_ray_contains_sweep(points in prop::collection::vec(0.0f64..20.0, 1..5), p in 1usize..4) {
            let same = SpectrumDesc::discrete(points[..points.len() / 2].to_vec()).unwrap();
            let low = SpectrumDesc::discrete(points[points.len() / 2..].to_vec()).unwrap();
            let r = indicial_spectrum(p, &same, Some(&low)).unwrap();
            prop_assert!(r.discrete_values().is_empty());
            let m = r.essential_threshold().unwrap();
            for i in -1000..=1000 {
                let lambda = i as f64 * 0.01;
                for mu in &points {
                    prop_assert!(lambda * lambda + mu >= m);
                }
            }
            prop_assert!((swept_min(&points) - m).abs() <= 1e-12);
        }

        #[test]
        fn csv_round_trip(a in arb_spectrum()) {
            prop_assert_eq!(SpectrumDesc::from_csv_row(&a.to_csv_row()).unwrap(), a);
        }
    }
}
