//! Independent checks: the flow maps `ψ_l` / `φ_l` of the weighted corner
//! charts, a finite-difference truncated-cylinder eigenvalue oracle, symbol
//! rescaling and the Cayley-transform symbol limit.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::corner_complex::GeometryTag;
use crate::dec::base::{face_base_spectrum, mesh_for, BaseResolution, BaseSource};
use crate::dec::cochain::{build_cochain_complex, hodge_laplacian};
use crate::dec::eigen::{spectrum, SymmetricMatrix};
use crate::error::{Error, Result};
use crate::spectrum::min_spectrum;

/// Chart data for a hyperface of weight `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlowMap {
    l: u32,
}

impl FlowMap {
    pub fn new(l: u32) -> Result<Self> {
        if l == 0 {
            return Err(Error::domain("flow weight must be at least 1"));
        }
        Ok(FlowMap { l })
    }

    pub fn weight(&self) -> u32 {
        self.l
    }
}

/// `ψ_1(x) = ln x`, `ψ_l(x) = x + x^{1-l}/(1-l)` for `l > 1`.
pub fn psi(f: FlowMap, x: f64) -> Result<f64> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("ψ needs a positive argument, got {x}")));
    }
    Ok(psi_unchecked(f.l, x))
}

fn psi_unchecked(l: u32, x: f64) -> f64 {
    if l == 1 {
        x.ln()
    } else {
        let e = 1.0 - l as f64;
        x + x.powf(e) / e
    }
}

const MAX_FLOW_ITERATIONS: usize = 400;

/// `φ_l(t, x) = ψ_l^{-1}(ψ_l(x) + t)`, with `φ_l(t, 0) = 0`.
///
/// For `l > 1` the inverse is found in `u = ln y`, where `ψ_l(e^u)` is
/// increasing with slope `e^u + e^{(1-l)u} ≥ 1`, so the root lies within
/// `|t|` of `ln x`. Newton steps are kept inside a shrinking bracket.
pub fn phi(f: FlowMap, t: f64, x: f64) -> Result<f64> {
    if !t.is_finite() || !x.is_finite() || x < 0.0 {
        return Err(Error::domain(format!("φ needs finite t and x ≥ 0, got t={t}, x={x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if f.l == 1 {
        return Ok(t.exp() * x);
    }
    let l = f.l;
    let target = psi_unchecked(l, x) + t;
    if !target.is_finite() {
        return Err(Error::numerical(format!("ψ_{l}({x}) + {t} is not finite")));
    }
    let e = 1.0 - l as f64;
    let g = |u: f64| {
        let y = u.exp();
        y + (e * u).exp() / e - target
    };
    let dg = |u: f64| u.exp() + (e * u).exp();

    let u0 = x.ln();
    let (mut lo, mut hi) = (u0 - t.abs() - 1.0, u0 + t.abs() + 1.0);
    for _ in 0..64 {
        if g(lo) <= 0.0 {
            break;
        }
        lo -= hi - lo;
    }
    for _ in 0..64 {
        if g(hi) >= 0.0 {
            break;
        }
        hi += hi - lo;
    }
    if !(g(lo) <= 0.0 && g(hi) >= 0.0) {
        return Err(Error::numerical(format!("could not bracket φ_{l}({t}, {x})")));
    }

    let mut u = u0 + t.signum() * t.abs().min(1.0);
    u = u.clamp(lo, hi);
    for _ in 0..MAX_FLOW_ITERATIONS {
        let gu = g(u);
        if gu == 0.0 {
            return Ok(u.exp());
        }
        if gu < 0.0 {
            lo = u;
        } else {
            hi = u;
        }
        if hi - lo <= 1e-15 * u.abs().max(1.0) {
            return Ok((0.5 * (lo + hi)).exp());
        }
        let step = gu / dg(u);
        if step.abs() <= 1e-16 * u.abs().max(1.0) {
            return Ok((u - step).exp());
        }
        let next = u - step;
        u = if next.is_finite() && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
    }
    Err(Error::numerical(format!("φ_{l}({t}, {x}) did not converge")))
}

/// Finite truncated cylinder `[0, L] × Y` with Dirichlet ends, discretized by
/// `grid_n` interior points along the axis.
#[derive(Clone, Debug, PartialEq)]
pub struct CylinderModel {
    pub cross_section: GeometryTag,
    /// Form degree on the cross-section.
    pub degree: usize,
    pub length: f64,
    pub grid_n: usize,
    pub resolution: BaseResolution,
}

pub const MIN_CYLINDER_GRID: usize = 16;

impl CylinderModel {
    fn check(&self) -> Result<()> {
        if !(self.length.is_finite() && self.length > 0.0) {
            return Err(Error::domain(format!("cylinder length {} must be positive", self.length)));
        }
        if self.grid_n < MIN_CYLINDER_GRID {
            return Err(Error::domain(format!("grid_n {} is below {MIN_CYLINDER_GRID}", self.grid_n)));
        }
        Ok(())
    }

    fn step(&self) -> f64 {
        self.length / (self.grid_n + 1) as f64
    }
}

/// Number of eigenvalues of the `n × n` matrix `tridiag(-1, 2, -1)/h²`
/// strictly below `x` (Sturm count via the LDLᵀ pivots).
fn dirichlet_count_below(n: usize, h: f64, x: f64) -> usize {
    let a = 2.0 / (h * h);
    let b2 = 1.0 / (h * h * h * h);
    let mut count = 0;
    let mut d = a - x;
    for i in 0..n {
        if i > 0 {
            d = a - x - b2 / d;
        }
        if d == 0.0 {
            d = -f64::EPSILON * a;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of the 1-D Dirichlet second difference on `[0, L]`
/// with `n` interior points, by bisection on the Sturm count.
pub fn dirichlet_min(length: f64, n: usize) -> Result<f64> {
    if !(length.is_finite() && length > 0.0) || n == 0 {
        return Err(Error::domain("Dirichlet problem needs L > 0 and n ≥ 1"));
    }
    let h = length / (n + 1) as f64;
    let (mut lo, mut hi) = (0.0f64, 4.0 / (h * h));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if dirichlet_count_below(n, h, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn dirichlet_matrix(n: usize, h: f64) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::zeros(n);
    let (a, b) = (2.0 / (h * h), -1.0 / (h * h));
    for i in 0..n {
        m.set(i, i, a);
        if i + 1 < n {
            m.set(i, i + 1, b);
            m.set(i + 1, i, b);
        }
    }
    m
}

/// Lowest eigenvalue of `-∂_t² + Δ_q^Y` on the truncated cylinder:
/// `min σ(Δ_q^Y) + dirichlet_min(L, n)`.
pub fn cylinder_ground_energy(m: &CylinderModel) -> Result<f64> {
    m.check()?;
    let mu = min_spectrum(&face_base_spectrum(&m.cross_section, m.degree, &m.resolution)?)?;
    Ok(mu + dirichlet_min(m.length, m.grid_n)?)
}

/// Same quantity from the assembled product matrix, for small sizes. The
/// cross-section enters through its DEC Laplacian when a mesh exists, and
/// through the diagonal of its lowest catalog eigenvalues otherwise.
pub fn cylinder_ground_energy_dense(m: &CylinderModel, max_cross_modes: usize) -> Result<f64> {
    m.check()?;
    let cross = match crate::dec::base::base_source(&m.cross_section, &m.resolution) {
        BaseSource::Dec => {
            let mesh = mesh_for(&m.cross_section, &m.resolution)?.expect("DEC source has a mesh");
            hodge_laplacian(&build_cochain_complex(&mesh)?, m.degree)?
        }
        _ => {
            let s = face_base_spectrum(&m.cross_section, m.degree, &m.resolution)?;
            let values = s.discrete_values();
            SymmetricMatrix::from_diagonal(&values[..values.len().min(max_cross_modes.max(1))])
        }
    };
    let axis = dirichlet_matrix(m.grid_n, m.step());
    let product = SymmetricMatrix::kronecker_sum(&cross, &axis);
    let s = spectrum(&product, 1e-13)?;
    Ok(s.eigenvalues[0])
}

/// Ground energy of the full indicial model for `Δ_p` over a hyperface: the
/// smaller of the degree-`p` and degree-`p-1` cross-section blocks.
pub fn indicial_ground_energy(
    cross_section: &GeometryTag,
    p: usize,
    length: f64,
    grid_n: usize,
    resolution: &BaseResolution,
) -> Result<f64> {
    let dim = cross_section.dim();
    let blocks = [Some(p), p.checked_sub(1)];
    let mut best = f64::INFINITY;
    for q in blocks.into_iter().flatten() {
        if dim.is_some_and(|d| q > d) {
            continue;
        }
        let model = CylinderModel {
            cross_section: cross_section.clone(),
            degree: q,
            length,
            grid_n,
            resolution: resolution.clone(),
        };
        best = best.min(cylinder_ground_energy(&model)?);
    }
    if best.is_infinite() {
        return Err(Error::Unsupported(format!("no degree-{p} block over {cross_section}")));
    }
    Ok(best)
}

/// One line of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub length: f64,
    pub grid_n: usize,
    pub energy: f64,
    pub threshold: f64,
}

impl ConvergenceRow {
    pub fn gap(&self) -> f64 {
        self.energy - self.threshold
    }
}

pub const CONVERGENCE_CSV_HEADER: &str = "L,grid_n,ground_energy,predicted_threshold,gap";

impl fmt::Display for ConvergenceRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{},{}", self.length, self.grid_n, self.energy, self.threshold, self.gap())
    }
}

/// A scalar symbol `ξ ↦ a(scale · ξ)` of a declared order.
#[derive(Clone)]
pub struct ScalarSymbol {
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
    scale: f64,
    order: f64,
}

impl fmt::Debug for ScalarSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarSymbol").field("scale", &self.scale).field("order", &self.order).finish()
    }
}

impl ScalarSymbol {
    pub fn new(order: f64, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        ScalarSymbol { f: Arc::new(f), scale: 1.0, order }
    }

    /// `|ξ|²`, order 2.
    pub fn norm_squared() -> Self {
        Self::new(2.0, |xi| xi.iter().map(|x| x * x).sum())
    }

    pub fn constant(c: f64) -> Self {
        Self::new(0.0, move |_| c)
    }

    pub fn order(&self) -> f64 {
        self.order
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        if self.scale == 1.0 {
            return (self.f)(xi);
        }
        let scaled: Vec<f64> = xi.iter().map(|x| self.scale * x).collect();
        (self.f)(&scaled)
    }
}

/// `a_t(ξ) = a(tξ)`. Scales compose multiplicatively.
pub fn rescale_symbol(a: &ScalarSymbol, t: f64) -> Result<ScalarSymbol> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::domain(format!("rescaling factor {t} must be positive")));
    }
    Ok(ScalarSymbol { f: a.f.clone(), scale: a.scale * t, order: a.order })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CayleyLimit {
    pub value: Complex64,
    /// Whether the value approximates the limit 1 (positive order only).
    pub converges: bool,
}

/// `|(x+i)/(x-i) - 1| = 2/√(x²+1)` for real `x`.
pub fn cayley_error_bound(x: f64) -> f64 {
    2.0 / (x * x + 1.0).sqrt()
}

/// `(a(tξ)+i)/(a(tξ)-i)` at `t = t_max` for a unit covector `ξ`.
pub fn cayley_symbol_limit(a: &ScalarSymbol, xi: &[f64], t_max: f64) -> Result<CayleyLimit> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::domain(format!("t_max {t_max} must be positive")));
    }
    let norm = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("covector has norm {norm}, expected 1")));
    }
    if !(a.eval(xi) > 0.0) {
        return Err(Error::domain("symbol is not positive on the covector; not elliptic"));
    }
    let x = rescale_symbol(a, t_max)?.eval(xi);
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("symbol value {x} at t_max is not positive")));
    }
    let value = Complex64::new(x, 1.0) / Complex64::new(x, -1.0);
    Ok(CayleyLimit { value, converges: a.order > 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{E, LN_2, PI};

    fn flow(l: u32) -> FlowMap {
        FlowMap::new(l).unwrap()
    }

    #[test]
    fn psi_examples() {
        assert!((psi(flow(1), E).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(psi(flow(2), 4.0).unwrap(), 3.75);
        assert_eq!(psi(flow(3), 1.0).unwrap(), 0.5);
        assert!(psi(flow(2), 0.0).is_err());
        assert!(FlowMap::new(0).is_err());
    }

    #[test]
    fn phi_examples() {
        assert!((phi(flow(1), LN_2, 3.0).unwrap() - 6.0).abs() < 1e-12);
        for l in 1..=3 {
            assert_eq!(phi(flow(l), 3.7, 0.0).unwrap(), 0.0);
        }
        assert!((phi(flow(2), 0.0, 7.0).unwrap() - 7.0).abs() < 1e-12);
        assert!(phi(flow(2), 1.0, -1.0).is_err());
    }

    #[test]
    fn flow_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let l = rng.gen_range(1..=3);
            let f = flow(l);
            let (s, t) = (rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
            let x = rng.gen_range(f64::EPSILON..=100.0);
            let lhs = phi(f, s, phi(f, t, x).unwrap()).unwrap();
            let rhs = phi(f, s + t, x).unwrap();
            assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs(), "l={l} s={s} t={t} x={x}: {lhs} vs {rhs}");
            let y = phi(f, t, x).unwrap();
            assert!(y > 0.0);
            let want = psi(f, x).unwrap() + t;
            assert!((psi(f, y).unwrap() - want).abs() <= 1e-10 * want.abs().max(1.0));
        }
    }

    #[test]
    fn flow_is_monotone_and_converges_on_wide_range() {
        for l in 1..=3 {
            for t in [-50.0, -7.5, 0.3, 12.0, 50.0] {
                let mut prev = 0.0;
                for x in [1e-3, 0.5, 1.0, 2.0, 1e3, 1e6] {
                    let y = phi(flow(l), t, x).unwrap();
                    assert!(y > prev, "l={l} t={t} x={x}");
                    prev = y;
                }
            }
        }
    }

    #[test]
    fn dirichlet_matches_closed_form() {
        for (l, n) in [(1.0, 16), (10.0, 400), (3.5, 77)] {
            let h = l / (n + 1) as f64;
            let exact = 4.0 / (h * h) * (PI / (2.0 * (n + 1) as f64)).sin().powi(2);
            let got = dirichlet_min(l, n).unwrap();
            // Sturm pivots lose accuracy relative to the largest eigenvalue 4/h²
            assert!((got - exact).abs() <= 1e-13 * 4.0 / (h * h), "{got} vs {exact}");
        }
    }

    fn circle_model(length: f64, grid_n: usize) -> CylinderModel {
        CylinderModel {
            cross_section: GeometryTag::Circle { circumference: 2.0 * PI },
            degree: 0,
            length,
            grid_n,
            resolution: BaseResolution::default(),
        }
    }

    #[test]
    fn circle_cylinder() {
        let e = cylinder_ground_energy(&circle_model(10.0, 400)).unwrap();
        let want = (PI / 10.0).powi(2);
        assert!((e - want).abs() / want < 0.01, "{e}");
    }

    #[test]
    fn sphere_cylinders() {
        let res = BaseResolution { method: crate::dec::BaseMethod::Dec, sphere_subdivisions: 3, ..Default::default() };
        let m = CylinderModel {
            cross_section: GeometryTag::RoundSphere { dim: 2, radius: 1.0 },
            degree: 0,
            length: 20.0,
            grid_n: 800,
            resolution: res,
        };
        let want = (PI / 20.0).powi(2);
        let e = cylinder_ground_energy(&m).unwrap();
        assert!((e - want).abs() / want < 0.02, "{e}");

        let m = CylinderModel {
            degree: 1,
            length: 10.0,
            grid_n: 400,
            resolution: BaseResolution::default(),
            ..m
        };
        let want = 2.0 + (PI / 10.0).powi(2);
        let e = cylinder_ground_energy(&m).unwrap();
        assert!((e - want).abs() / want < 0.02, "{e}");
    }

    #[test]
    fn tensor_path_matches_dense_assembly() {
        let res = BaseResolution { method: crate::dec::BaseMethod::Dec, circle_segments: 12, ..Default::default() };
        for degree in 0..=1 {
            let m = CylinderModel {
                cross_section: GeometryTag::Circle { circumference: 3.0 },
                degree,
                length: 4.0,
                grid_n: 20,
                resolution: res.clone(),
            };
            let a = cylinder_ground_energy(&m).unwrap();
            let b = cylinder_ground_energy_dense(&m, 0).unwrap();
            assert!((a - b).abs() <= 1e-9 * a.max(1.0), "{a} vs {b}");
        }
        // catalog cross-section with positive ground state: S² 1-forms
        let m = CylinderModel {
            cross_section: GeometryTag::RoundSphere { dim: 2, radius: 1.0 },
            degree: 1,
            length: 10.0,
            grid_n: 40,
            resolution: BaseResolution::default(),
        };
        let a = cylinder_ground_energy(&m).unwrap();
        let b = cylinder_ground_energy_dense(&m, 20).unwrap();
        assert!((a - b).abs() <= 1e-9 * a, "{a} vs {b}");
    }

    #[test]
    fn ground_energy_decreases_towards_threshold() {
        let mut prev = f64::INFINITY;
        for l in [5.0, 10.0, 20.0, 40.0] {
            let e = cylinder_ground_energy(&circle_model(l, 400)).unwrap();
            assert!(e < prev && e >= 0.0);
            assert!(e <= (PI / l).powi(2) * 1.05);
            prev = e;
        }
        let s3 = GeometryTag::RoundSphere { dim: 3, radius: 1.0 };
        let e = indicial_ground_energy(&s3, 2, 20.0, 400, &BaseResolution::default()).unwrap();
        assert!(e >= 3.0 && e - 3.0 <= (PI / 20.0).powi(2) * 1.05);
        assert!(cylinder_ground_energy(&circle_model(-1.0, 400)).is_err());
        assert!(cylinder_ground_energy(&circle_model(1.0, 8)).is_err());
    }

    #[test]
    fn rescaling() {
        let a = ScalarSymbol::norm_squared();
        assert_eq!(rescale_symbol(&a, 2.0).unwrap().eval(&[1.0, 0.0]), 4.0);
        assert!(rescale_symbol(&a, 0.0).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let id = rescale_symbol(&a, 1.0).unwrap();
        let (s, t) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let nested = rescale_symbol(&rescale_symbol(&a, s).unwrap(), t).unwrap();
        let direct = rescale_symbol(&a, s * t).unwrap();
        for _ in 0..100 {
            let xi = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
            assert_eq!(id.eval(&xi), a.eval(&xi));
            assert_eq!(nested.eval(&xi), direct.eval(&xi));
        }
    }

    #[test]
    fn cayley() {
        let a = ScalarSymbol::norm_squared();
        for (t, bound) in [(1000.0, 2.1e-6), (10.0, 0.021)] {
            let c = cayley_symbol_limit(&a, &[1.0, 0.0], t).unwrap();
            assert!(c.converges);
            assert!((c.value - 1.0).norm() < bound);
        }
        for t in [10.0, 100.0, 1000.0] {
            let c = cayley_symbol_limit(&a, &[0.6, 0.8], t).unwrap();
            let x: f64 = t * t;
            assert!((c.value - 1.0).norm() <= cayley_error_bound(x) * (1.0 + 1e-12));
        }
        let c = cayley_symbol_limit(&ScalarSymbol::constant(1.0), &[1.0], 5.0).unwrap();
        assert!(!c.converges);
        assert!((c.value - Complex64::i()).norm() < 1e-15);
        assert!(cayley_symbol_limit(&ScalarSymbol::constant(0.0), &[1.0], 5.0).is_err());
        assert!(cayley_symbol_limit(&a, &[2.0], 5.0).is_err());
    }
}
