//! Graded polar-ring triangulations of a disk.
//!
//! ```text
//!   center vertex ── cap polygon (radius h²/R) ── geometric rings ── uniform rings (spacing ≈ h) ── boundary
//! ```
//!
//! Ring radii double until the spacing would exceed `h`, then grow
//! uniformly. Ring `j` carries `max(n_min, ⌈2π r_j / h⌉)` vertices,
//! so elements near the center shrink with the radius. Neighbouring rings are
//! zipped into triangles sector by sector; when jump angles are supplied,
//! every ring has a vertex on each of them and the rays between are mesh
//! edges.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{DiskDomain, Point2};

#[derive(Debug, Clone, PartialEq)]
pub struct MeshOptions {
    /// Vertices on the cap polygon and on every graded ring.
    pub min_ring_vertices: usize,
    /// Angles, about the domain center, that element edges must follow.
    pub breaks: Vec<f64>,
}

impl Default for MeshOptions {
    fn default() -> Self {
        Self {
            min_ring_vertices: 24,
            breaks: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<Point2>,
    /// Positively oriented vertex triples.
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    pub h: f64,
    pub domain: DiskDomain,
}

impl Mesh {
    pub fn triangle(&self, t: usize) -> [Point2; 3] {
        let [a, b, c] = self.triangles[t];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Signed area of triangle `t`.
    pub fn area(&self, t: usize) -> f64 {
        signed_area(self.triangle(t))
    }

    pub fn barycenter(&self, t: usize) -> Point2 {
        let [a, b, c] = self.triangle(t);
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }
}

pub fn signed_area(p: [Point2; 3]) -> f64 {
    0.5 * ((p[1].x - p[0].x) * (p[2].y - p[0].y) - (p[2].x - p[0].x) * (p[1].y - p[0].y))
}

pub fn build_mesh(domain: DiskDomain, h: f64) -> Result<Mesh> {
    build_mesh_with(domain, h, &MeshOptions::default())
}

/// One ring: its radius, vertex angles (unwrapped, increasing from the first
/// break) and the index in `angles` where each sector starts.
struct Ring {
    radius: f64,
    angles: Vec<f64>,
    sector_start: Vec<usize>,
    first_vertex: usize,
}

const RING_RATIO: f64 = 2.0;

fn ring_radii(radius: f64, h: f64) -> Vec<f64> {
    let growth = RING_RATIO;
    let mut radii = vec![h * h / radius];
    let mut r = radii[0];
    while r * (growth - 1.0) < h && r * growth < radius - h {
        r *= growth;
        radii.push(r);
    }
    let steps = ((radius - r) / h).ceil().max(1.0) as usize;
    let dr = (radius - r) / steps as f64;
    for i in 1..steps {
        radii.push(r + i as f64 * dr);
    }
    radii.push(radius);
    radii
}

fn ring_angles(count: usize, breaks: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut angles = Vec::with_capacity(count + breaks.len());
    let mut starts = Vec::with_capacity(breaks.len());
    for i in 0..breaks.len() {
        let a0 = breaks[i];
        let a1 = if i + 1 < breaks.len() {
            breaks[i + 1]
        } else {
            breaks[0] + TAU
        };
        let segs = (((a1 - a0) * count as f64 / TAU).round() as usize).max(1);
        starts.push(angles.len());
        for t in 0..segs {
            angles.push(a0 + (a1 - a0) * t as f64 / segs as f64);
        }
    }
    (angles, starts)
}

pub fn build_mesh_with(domain: DiskDomain, h: f64, opts: &MeshOptions) -> Result<Mesh> {
    let radius = domain.radius;
    if !(h > 0.0 && h < radius / 4.0) {
        return Err(Error::InvalidMeshSize { h, radius });
    }
    if opts.min_ring_vertices < 3 {
        return Err(Error::InvalidArgument(
            "rings need at least three vertices".into(),
        ));
    }
    let mut breaks: Vec<f64> = opts.breaks.iter().map(|t| t.rem_euclid(TAU)).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    if breaks.is_empty() {
        breaks.push(0.0);
    }
    let n_min = opts.min_ring_vertices.max(breaks.len());

    let c = domain.center;
    let mut vertices = vec![c];
    let mut boundary = vec![false];
    let mut rings = Vec::new();
    let mut count = n_min;
    let radii = ring_radii(radius, h);
    let last = radii.len() - 1;
    for (j, &r) in radii.iter().enumerate() {
        count = count.max((TAU * r / h).ceil() as usize);
        let (angles, sector_start) = ring_angles(count, &breaks);
        let first_vertex = vertices.len();
        for &t in &angles {
            vertices.push(if j == last {
                Point2::polar(c, radius, t)
            } else {
                Point2::polar(c, r, t)
            });
            boundary.push(j == last);
        }
        rings.push(Ring {
            radius: r,
            angles,
            sector_start,
            first_vertex,
        });
    }

    let mut triangles = Vec::new();
    let cap = &rings[0];
    let m = cap.angles.len();
    for i in 0..m {
        triangles.push([0, cap.first_vertex + i, cap.first_vertex + (i + 1) % m]);
    }
    for pair in rings.windows(2) {
        zip_rings(&pair[0], &pair[1], &mut triangles);
    }

    let mesh = Mesh {
        vertices,
        triangles,
        boundary,
        h,
        domain,
    };
    debug_assert!(rings.iter().all(|r| r.radius > 0.0));
    Ok(mesh)
}

/// Triangulates the annulus between `inner` and `outer`, one sector at a time.
fn zip_rings(inner: &Ring, outer: &Ring, out: &mut Vec<[usize; 3]>) {
    let sectors = inner.sector_start.len();
    for s in 0..sectors {
        let chain = |ring: &Ring| -> Vec<(f64, usize)> {
            let n = ring.angles.len();
            let start = ring.sector_start[s];
            let end = if s + 1 < sectors {
                ring.sector_start[s + 1]
            } else {
                n
            };
            let mut v: Vec<(f64, usize)> = (start..end)
                .map(|i| (ring.angles[i], ring.first_vertex + i))
                .collect();
            // closing vertex: the next sector's first, one period later for the last sector
            let close_angle = if s + 1 < sectors {
                ring.angles[end]
            } else {
                ring.angles[0] + TAU
            };
            v.push((close_angle, ring.first_vertex + end % n));
            v
        };
        let a = chain(inner);
        let b = chain(outer);
        let (mut i, mut j) = (0, 0);
        while i + 1 < a.len() || j + 1 < b.len() {
            let advance_inner = if i + 1 == a.len() {
                false
            } else if j + 1 == b.len() {
                true
            } else {
                a[i + 1].0 < b[j + 1].0
            };
            if advance_inner {
                out.push([a[i].1, b[j].1, a[i + 1].1]);
                i += 1;
            } else {
                out.push([a[i].1, b[j].1, b[j + 1].1]);
                j += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    fn check_conforming(mesh: &Mesh) {
        // every interior edge is shared by exactly two triangles with opposite orientation
        let mut edges: HashMap<(usize, usize), i32> = HashMap::new();
        for t in &mesh.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                *edges.entry((a, b)).or_default() += 1;
            }
        }
        for (&(a, b), &n) in &edges {
            assert_eq!(n, 1, "edge ({a},{b}) repeated");
            if !edges.contains_key(&(b, a)) {
                assert!(
                    mesh.boundary[a] && mesh.boundary[b],
                    "open edge ({a},{b}) off the boundary"
                );
            }
        }
    }

    #[test]
    fn unit_disk_quality() {
        let mesh = build_mesh(DiskDomain::unit(), 0.1).unwrap();
        for t in 0..mesh.n_triangles() {
            let a = mesh.area(t);
            assert!(a >= 1e-5 && a <= 0.01, "triangle {t} area {a}");
        }
        for (p, &b) in mesh.vertices.iter().zip(&mesh.boundary) {
            if b {
                assert!((p.norm() - 1.0).abs() < 1e-12);
            }
        }
        check_conforming(&mesh);
        let total: f64 = (0..mesh.n_triangles()).map(|t| mesh.area(t)).sum();
        assert!((total - std::f64::consts::PI).abs() < 0.01);
    }

    #[test]
    fn refinement_quadruples_triangles() {
        let coarse = build_mesh(DiskDomain::unit(), 0.1).unwrap().n_triangles() as f64;
        let fine = build_mesh(DiskDomain::unit(), 0.05).unwrap().n_triangles() as f64;
        let ratio = fine / coarse;
        assert!(ratio > 2.0 && ratio < 8.0, "ratio {ratio}");
    }

    #[test]
    fn invalid_sizes() {
        assert!(matches!(
            build_mesh(DiskDomain::unit(), 0.25),
            Err(Error::InvalidMeshSize { .. })
        ));
        assert!(build_mesh(DiskDomain::unit(), 0.0).is_err());
    }

    #[test]
    fn breaks_become_mesh_rays() {
        let opts = MeshOptions {
            breaks: vec![0.0, 1.0, 4.0],
            ..Default::default()
        };
        let mesh = build_mesh_with(DiskDomain::unit(), 0.05, &opts).unwrap();
        check_conforming(&mesh);
        for t in 0..mesh.n_triangles() {
            assert!(mesh.area(t) > 1e-14);
            // no triangle straddles a break ray: barycenter sector matches every vertex sector
            let bc = mesh.barycenter(t).arg();
            let sector = |a: f64| {
                if a < 1.0 {
                    0
                } else if a < 4.0 {
                    1
                } else {
                    2
                }
            };
            for v in mesh.triangles[t] {
                let p = mesh.vertices[v];
                if p.norm() == 0.0 {
                    continue;
                }
                let a = p.arg();
                let on_break = [0.0, 1.0, 4.0, TAU].iter().any(|b| (a - b).abs() < 1e-9);
                assert!(
                    on_break || sector(a) == sector(bc),
                    "triangle {t} crosses a break"
                );
            }
        }
    }
}
