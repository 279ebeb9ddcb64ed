//! Small dense helpers for simplex geometry in Euclidean space.

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solves a small dense system by Gaussian elimination with partial pivoting.
/// Returns `None` when the matrix is numerically singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

fn determinant(mut a: Vec<Vec<f64>>) -> f64 {
    let n = a.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        if a[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            a.swap(col, piv);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
        }
    }
    det
}

/// Unsigned k-volume of the simplex spanned by `points` (k + 1 points).
pub fn simplex_volume(points: &[&[f64]]) -> f64 {
    let k = points.len() - 1;
    if k == 0 {
        return 1.0;
    }
    let edges: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, points[0])).collect();
    let gram: Vec<Vec<f64>> = edges.iter().map(|a| edges.iter().map(|b| dot(a, b)).collect()).collect();
    let factorial: f64 = (1..=k).map(|i| i as f64).product();
    determinant(gram).max(0.0).sqrt() / factorial
}

/// Circumcenter of a simplex, within its affine hull.
pub fn circumcenter(points: &[&[f64]]) -> Option<Vec<f64>> {
    let p0 = points[0];
    if points.len() == 1 {
        return Some(p0.to_vec());
    }
    let edges: Vec<Vec<f64>> = points[1..].iter().map(|p| sub(p, p0)).collect();
    let gram: Vec<Vec<f64>> = edges.iter().map(|a| edges.iter().map(|b| 2.0 * dot(a, b)).collect()).collect();
    let rhs: Vec<f64> = edges.iter().map(|e| dot(e, e)).collect();
    let alpha = solve(gram, rhs)?;
    let mut c = p0.to_vec();
    for (a, e) in alpha.iter().zip(&edges) {
        for (ci, ei) in c.iter_mut().zip(e) {
            *ci += a * ei;
        }
    }
    Some(c)
}

pub fn barycenter(points: &[&[f64]]) -> Vec<f64> {
    let mut c = vec![0.0; points[0].len()];
    for p in points {
        for (ci, pi) in c.iter_mut().zip(p.iter()) {
            *ci += pi;
        }
    }
    let n = points.len() as f64;
    c.iter_mut().for_each(|x| *x /= n);
    c
}

/// Sign of the side of the facet `face` on which `point` lies, relative to the
/// vertex `apex` opposite that facet inside the larger simplex.
/// Returns `1.0`, `-1.0`, or `0.0` when `point` lies on the facet's hull.
pub fn side_sign(face: &[&[f64]], apex: &[f64], point: &[f64]) -> f64 {
    let p0 = face[0];
    // Gram-Schmidt basis of the facet directions.
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for p in &face[1..] {
        let mut v = sub(p, p0);
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let norm = dot(&v, &v).sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        basis.push(v);
    }
    let mut normal = sub(apex, p0);
    for b in &basis {
        let d = dot(&normal, b);
        normal.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
    }
    let height = dot(&normal, &normal).sqrt();
    let offset = dot(&sub(point, p0), &normal) / height;
    if offset.abs() <= 1e-12 * height {
        0.0
    } else {
        offset.signum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        let a = [0.0, 0.0, 0.0];
        let b = [3.0, 0.0, 0.0];
        let c = [0.0, 4.0, 0.0];
        let d = [0.0, 0.0, 6.0];
        assert_eq!(simplex_volume(&[&a]), 1.0);
        assert!((simplex_volume(&[&a, &b]) - 3.0).abs() < 1e-14);
        assert!((simplex_volume(&[&a, &b, &c]) - 6.0).abs() < 1e-14);
        assert!((simplex_volume(&[&a, &b, &c, &d]) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn circumcenters() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let c = [0.0, 2.0];
        let cc = circumcenter(&[&a, &b, &c]).unwrap();
        assert!((cc[0] - 1.0).abs() < 1e-14 && (cc[1] - 1.0).abs() < 1e-14);
        let m = circumcenter(&[&a, &b]).unwrap();
        assert_eq!(m, vec![1.0, 0.0]);
        assert!(circumcenter(&[&a, &b, &[4.0, 0.0]]).is_none());
    }

    #[test]
    fn sides() {
        let a = [0.0, 0.0];
        let b = [2.0, 0.0];
        let apex = [1.0, 1.0];
        assert_eq!(side_sign(&[&a, &b], &apex, &[0.5, 0.3]), 1.0);
        assert_eq!(side_sign(&[&a, &b], &apex, &[0.5, -0.3]), -1.0);
        assert_eq!(side_sign(&[&a, &b], &apex, &[0.5, 0.0]), 0.0);
        assert_eq!(side_sign(&[&a], &b, &[1.0, 5.0]), 1.0);
    }
}
