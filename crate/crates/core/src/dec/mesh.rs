//! Simplicial meshes of closed faces: generators for the catalog shapes and an
//! OFF reader for user meshes.

use std::collections::HashMap;
use std::path::Path;

use crate::corner_complex::GeometryTag;
use crate::error::{Error, Result};

pub const MAX_SPHERE_SUBDIVISIONS: u32 = 6;

/// A simplicial complex with vertex coordinates.
///
/// Simplices of every dimension are stored as increasing vertex-id tuples, in
/// lexicographic order. Periodic meshes (circle, flat torus) store one period
/// per coordinate axis; edge vectors are taken with the minimum-image rule.
#[derive(Clone, Debug)]
pub struct Mesh {
    vertices: Vec<Vec<f64>>,
    period: Option<Vec<f64>>,
    simplices: Vec<Vec<Vec<usize>>>,
    geometry: GeometryTag,
}

impl Mesh {
    /// Builds the full complex generated by `tops` (all of dimension `dim`).
    pub fn from_top_simplices(
        dim: usize,
        vertices: Vec<Vec<f64>>,
        tops: Vec<Vec<usize>>,
        period: Option<Vec<f64>>,
        geometry: GeometryTag,
    ) -> Result<Self> {
        if tops.is_empty() {
            return Err(Error::domain("mesh has no simplices"));
        }
        let ambient = vertices.first().map(Vec::len).unwrap_or(0);
        if vertices.iter().any(|v| v.len() != ambient) {
            return Err(Error::Parse("vertices have inconsistent coordinate counts".into()));
        }
        if let Some(p) = &period {
            if p.len() != ambient {
                return Err(Error::domain("period count differs from coordinate count"));
            }
        }
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); dim + 1];
        for mut t in tops {
            t.sort_unstable();
            if t.len() != dim + 1 {
                return Err(Error::Parse(format!("simplex {t:?} does not have {} vertices", dim + 1)));
            }
            if t.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Parse(format!("simplex {t:?} repeats a vertex")));
            }
            if let Some(&bad) = t.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::Parse(format!("vertex index {bad} out of range")));
            }
            // every nonempty subset, by bitmask
            for mask in 1u32..(1 << (dim + 1)) {
                let face: Vec<usize> = (0..=dim).filter(|i| mask & (1 << i) != 0).map(|i| t[i]).collect();
                simplices[face.len() - 1].push(face);
            }
        }
        for level in &mut simplices {
            level.sort_unstable();
            level.dedup();
        }
        Ok(Mesh { vertices, period, simplices, geometry })
    }

    pub fn dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn simplices(&self, k: usize) -> &[Vec<usize>] {
        &self.simplices[k]
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, Vec::len)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn geometry(&self) -> &GeometryTag {
        &self.geometry
    }

    pub fn euler_characteristic(&self) -> i64 {
        (0..=self.dim()).map(|k| if k % 2 == 0 { 1 } else { -1 } * self.count(k) as i64).sum()
    }

    /// Coordinates of a simplex's vertices, unwrapped across periodic
    /// boundaries relative to its first vertex.
    pub fn local_coordinates(&self, simplex: &[usize]) -> Vec<Vec<f64>> {
        let base = &self.vertices[simplex[0]];
        simplex
            .iter()
            .map(|&v| {
                let mut x = self.vertices[v].clone();
                if let Some(period) = &self.period {
                    for ((xi, bi), p) in x.iter_mut().zip(base).zip(period) {
                        let d = *xi - bi;
                        *xi = bi + d - p * (d / p).round();
                    }
                }
                x
            })
            .collect()
    }

    /// Index of a simplex (given as sorted vertex ids) within its dimension.
    pub(crate) fn index_maps(&self) -> Vec<HashMap<&[usize], usize>> {
        self.simplices
            .iter()
            .map(|level| level.iter().enumerate().map(|(i, s)| (s.as_slice(), i)).collect())
            .collect()
    }

    /// Reads an OFF file. Faces with two vertices make a curve, faces with
    /// three a surface; mixing them or using larger polygons is rejected.
    pub fn from_off_str(text: &str, geometry: GeometryTag) -> Result<Self> {
        let mut tokens = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace);
        let header = tokens.next().ok_or_else(|| Error::Parse("empty OFF file".into()))?;
        if header != "OFF" {
            return Err(Error::Parse(format!("expected `OFF` header, found `{header}`")));
        }
        let mut next_usize = |what: &str| -> Result<usize> {
            let t = tokens.next().ok_or_else(|| Error::Parse(format!("OFF: missing {what}")))?;
            t.parse().map_err(|_| Error::Parse(format!("OFF: bad {what} `{t}`")))
        };
        let nv = next_usize("vertex count")?;
        let nf = next_usize("face count")?;
        let _ne = next_usize("edge count")?;
        // Re-tokenize by line for the body: face lines may carry trailing colour data.
        let body: Vec<Vec<&str>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").split_whitespace().collect::<Vec<_>>())
            .filter(|t| !t.is_empty())
            .collect();
        let start = if body[0].len() > 1 { 1 } else { 2 };
        if body.len() < start + nv + nf {
            return Err(Error::Parse("OFF: file shorter than its counts".into()));
        }
        let parse_f = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("OFF: bad coordinate `{s}`")));
        let vertices = body[start..start + nv]
            .iter()
            .map(|line| line.iter().take(3).map(|s| parse_f(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let mut tops = Vec::with_capacity(nf);
        let mut size = None;
        for line in &body[start + nv..start + nv + nf] {
            let k: usize = line[0].parse().map_err(|_| Error::Parse(format!("OFF: bad face size `{}`", line[0])))?;
            if !(k == 2 || k == 3) {
                return Err(Error::Parse(format!("OFF: face with {k} vertices is not a simplex of dimension 1 or 2")));
            }
            if *size.get_or_insert(k) != k {
                return Err(Error::Parse("OFF: mixed face sizes".into()));
            }
            let ids = line
                .get(1..=k)
                .ok_or_else(|| Error::Parse("OFF: truncated face line".into()))?
                .iter()
                .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("OFF: bad index `{s}`"))))
                .collect::<Result<Vec<_>>>()?;
            tops.push(ids);
        }
        let dim = size.ok_or_else(|| Error::Parse("OFF: no faces".into()))? - 1;
        Mesh::from_top_simplices(dim, vertices, tops, None, geometry)
    }

    pub fn from_off_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_off_str(&text, GeometryTag::Mesh { path: path.to_path_buf() })
    }
}

/// `n` equally spaced vertices on a circle of the given circumference,
/// measured intrinsically (edges have length `circumference / n`).
pub fn build_circle_mesh(n: usize, circumference: f64) -> Result<Mesh> {
    if n < 3 {
        return Err(Error::domain(format!("circle mesh needs at least 3 segments, got {n}")));
    }
    if !(circumference.is_finite() && circumference > 0.0) {
        return Err(Error::domain("circumference must be positive"));
    }
    let h = circumference / n as f64;
    let vertices = (0..n).map(|i| vec![i as f64 * h]).collect();
    let tops = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Mesh::from_top_simplices(1, vertices, tops, Some(vec![circumference]), GeometryTag::Circle { circumference })
}

/// Flat torus `ℝ²/(L₁ℤ × L₂ℤ)` on an `n1 × n2` grid, each cell cut along its diagonal.
pub fn build_torus_mesh(n1: usize, n2: usize, l1: f64, l2: f64) -> Result<Mesh> {
    if n1 < 3 || n2 < 3 {
        return Err(Error::domain(format!("torus grid must be at least 3x3, got {n1}x{n2}")));
    }
    if !(l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite()) {
        return Err(Error::domain("torus edge lengths must be positive"));
    }
    let id = |i: usize, j: usize| (i % n1) * n2 + (j % n2);
    let vertices = (0..n1)
        .flat_map(|i| (0..n2).map(move |j| vec![i as f64 * l1 / n1 as f64, j as f64 * l2 / n2 as f64]))
        .collect();
    let mut tops = Vec::with_capacity(2 * n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            tops.push(vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tops.push(vec![id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    Mesh::from_top_simplices(
        2,
        vertices,
        tops,
        Some(vec![l1, l2]),
        GeometryTag::RectTorus { lengths: vec![l1, l2] },
    )
}

/// Icosahedron refined `subdivisions` times by edge midpoints, projected to
/// the sphere of the given radius.
pub fn build_sphere_mesh(subdivisions: u32, radius: f64) -> Result<Mesh> {
    if subdivisions > MAX_SPHERE_SUBDIVISIONS {
        return Err(Error::Resource(format!(
            "sphere subdivision level {subdivisions} exceeds the limit {MAX_SPHERE_SUBDIVISIONS}"
        )));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::domain("sphere radius must be positive"));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut vertices: Vec<[f64; 3]> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let normalize = |v: [f64; 3]| {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        [v[0] / n, v[1] / n, v[2] / n]
    };
    vertices.iter_mut().for_each(|v| *v = normalize(*v));
    for _ in 0..subdivisions {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let mut mid = |x: usize, y: usize| {
                *midpoint.entry((x.min(y), x.max(y))).or_insert_with(|| {
                    let (p, q) = (vertices[x], vertices[y]);
                    vertices.push(normalize([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    vertices.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    let vertices = vertices.iter().map(|v| v.iter().map(|x| x * radius).collect()).collect();
    Mesh::from_top_simplices(
        2,
        vertices,
        faces.iter().map(|f| f.to_vec()).collect(),
        None,
        GeometryTag::RoundSphere { dim: 2, radius },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_counts() {
        let m = build_circle_mesh(4, 2.0 * PI).unwrap();
        assert_eq!((m.count(0), m.count(1)), (4, 4));
        for e in m.simplices(1) {
            let x = m.local_coordinates(e);
            assert!(((x[1][0] - x[0][0]).abs() - PI / 2.0).abs() < 1e-14);
        }
        let m = build_circle_mesh(3, 3.0).unwrap();
        let x = m.local_coordinates(&m.simplices(1)[2]);
        assert!(((x[1][0] - x[0][0]).abs() - 1.0).abs() < 1e-14);
        assert!(matches!(build_circle_mesh(2, 1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn torus_counts() {
        let m = build_torus_mesh(8, 8, 2.0 * PI, 2.0 * PI).unwrap();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (64, 192, 128));
        assert_eq!(m.euler_characteristic(), 0);
        let m = build_torus_mesh(3, 4, 1.0, 2.0).unwrap();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (12, 36, 24));
        assert!(build_torus_mesh(2, 5, 1.0, 1.0).is_err());
    }

    #[test]
    fn sphere_counts() {
        let m = build_sphere_mesh(0, 1.0).unwrap();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (12, 30, 20));
        let m = build_sphere_mesh(1, 1.0).unwrap();
        assert_eq!((m.count(0), m.count(1), m.count(2)), (42, 120, 80));
        for s in 0..4 {
            assert_eq!(build_sphere_mesh(s, 2.5).unwrap().euler_characteristic(), 2);
        }
        assert!(matches!(build_sphere_mesh(7, 1.0), Err(Error::Resource(_))));
    }

    #[test]
    fn facets_are_present() {
        let m = build_sphere_mesh(1, 1.0).unwrap();
        let maps = m.index_maps();
        for k in 1..=m.dim() {
            for s in m.simplices(k) {
                for skip in 0..s.len() {
                    let facet: Vec<usize> = s.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, v)| *v).collect();
                    assert!(maps[k - 1].contains_key(facet.as_slice()));
                }
            }
        }
    }

    #[test]
    fn off_reader() {
        let tetra = "OFF\n# tetrahedron surface\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3 255 0 0\n";
        let m = Mesh::from_off_str(tetra, GeometryTag::None).unwrap();
        assert_eq!(m.dim(), 2);
        assert_eq!((m.count(0), m.count(1), m.count(2)), (4, 6, 4));
        assert_eq!(m.euler_characteristic(), 2);

        let triangle_curve = "OFF 3 3 0\n0 0 0\n1 0 0\n0 1 0\n2 0 1\n2 1 2\n2 2 0\n";
        let m = Mesh::from_off_str(triangle_curve, GeometryTag::None).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.euler_characteristic(), 0);

        assert!(Mesh::from_off_str("PLY\n", GeometryTag::None).is_err());
        assert!(Mesh::from_off_str("OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n", GeometryTag::None).is_err());
        assert!(Mesh::from_off_str("OFF\n3 1 0\n0 0 0\n1 0 0\n1 1 0\n3 0 1 7\n", GeometryTag::None).is_err());
    }
}
