//! Closed-form Hodge spectra of flat tori and round spheres, truncated at a cutoff.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Catalogs longer than this are refused.
pub const MAX_CATALOG_LEN: usize = 2_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

fn push_repeated(out: &mut Vec<f64>, value: f64, times: u128) -> Result<()> {
    if out.len() as u128 + times > MAX_CATALOG_LEN as u128 {
        return Err(Error::Resource(format!("catalog exceeds {MAX_CATALOG_LEN} eigenvalues; lower the cutoff")));
    }
    out.extend(std::iter::repeat_n(value, times as usize));
    Ok(())
}

/// Eigenvalues `Σ (2π kᵢ / Lᵢ)²` over `k ∈ ℤⁿ`, each with multiplicity
/// `C(n, p)` (the constant-coefficient p-form frames), up to `cutoff`.
pub fn torus_eigenvalues(lengths: &[f64], p: usize, cutoff: f64) -> Result<Vec<f64>> {
    let n = lengths.len();
    if p > n {
        return Err(Error::domain(format!("degree {p} exceeds torus dimension {n}")));
    }
    let frames = binomial(n, p);
    let bounds: Vec<i64> = lengths.iter().map(|l| (cutoff.max(0.0).sqrt() * l / (2.0 * PI)).floor() as i64).collect();
    let mut out = Vec::new();
    let mut k: Vec<i64> = bounds.iter().map(|b| -b).collect();
    loop {
        let value: f64 = k
            .iter()
            .zip(lengths)
            .map(|(ki, l)| {
                let w = 2.0 * PI * *ki as f64 / l;
                w * w
            })
            .sum();
        if value <= cutoff {
            push_repeated(&mut out, value, frames)?;
        }
        // odometer increment
        let mut axis = 0;
        loop {
            if axis == n {
                out.sort_by(f64::total_cmp);
                return Ok(out);
            }
            if k[axis] < bounds[axis] {
                k[axis] += 1;
                break;
            }
            k[axis] = -bounds[axis];
            axis += 1;
        }
    }
}

/// Multiplicity of the co-closed `p`-form eigenvalue `(k+p)(k+n-p-1)` on the
/// unit `Sⁿ`, for `k ≥ 1` and `p ≤ n - 1`.
pub fn coclosed_multiplicity(n: usize, p: usize, k: usize) -> Result<u128> {
    assert!(k >= 1 && p < n);
    let overflow = || Error::Resource(format!("multiplicity overflow on S^{n} at level {k}"));
    let fact = |m: usize| -> Result<u128> { (1..=m as u128).try_fold(1u128, |a, b| a.checked_mul(b)).ok_or_else(overflow) };
    let num = fact(k + n - 1)?.checked_mul((2 * k + n - 1) as u128).ok_or_else(overflow)?;
    let den = fact(p)?
        .checked_mul(fact(n - p - 1)?)
        .and_then(|x| x.checked_mul(fact(k - 1).ok()?))
        .and_then(|x| x.checked_mul(((k + p) * (k + n - p - 1)) as u128))
        .ok_or_else(overflow)?;
    Ok(num / den)
}

/// Spectrum of `Δ_p` on the round `Sⁿ` of the given radius, up to `cutoff`.
/// The lowest level of each series is kept even above the cutoff, so the
/// minimum is always present.
///
/// Harmonic forms exist only in degrees 0 and n. Co-closed p-forms contribute
/// `(k+p)(k+n-p-1)` and exact p-forms `(k+p-1)(k+n-p)`, both for `k ≥ 1` and
/// scaled by `1/r²`; the exact ones are `d` of the co-closed (p-1)-forms.
pub fn sphere_eigenvalues(n: usize, radius: f64, p: usize, cutoff: f64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::domain("sphere dimension must be positive"));
    }
    if p > n {
        return Err(Error::domain(format!("degree {p} exceeds sphere dimension {n}")));
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    if p == 0 || p == n {
        out.push(0.0);
    }
    if p < n {
        for k in 1.. {
            let value = ((k + p) * (k + n - p - 1)) as f64 / r2;
            if value > cutoff && k > 1 {
                break;
            }
            push_repeated(&mut out, value, coclosed_multiplicity(n, p, k)?)?;
        }
    }
    if p >= 1 {
        for k in 1.. {
            let value = ((k + p - 1) * (k + n - p)) as f64 / r2;
            if value > cutoff && k > 1 {
                break;
            }
            push_repeated(&mut out, value, coclosed_multiplicity(n, p - 1, k)?)?;
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Circle of the given circumference: `(2πk/C)²`, in degree 0 and 1 alike.
pub fn circle_eigenvalues(circumference: f64, p: usize, cutoff: f64) -> Result<Vec<f64>> {
    if p > 1 {
        return Err(Error::domain(format!("degree {p} exceeds circle dimension 1")));
    }
    torus_eigenvalues(&[circumference], p, cutoff)
}
