//! Point location in a triangle mesh by uniform buckets.

use super::mesh::{signed_area, Mesh};
use crate::geometry::Point2;

const BARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Locator {
    origin: Point2,
    cell: f64,
    n: usize,
    buckets: Vec<Vec<u32>>,
}

impl Locator {
    pub fn new(mesh: &Mesh) -> Self {
        let r = mesh.domain.radius * (1.0 + 1e-9);
        let origin = Point2::new(mesh.domain.center.x - r, mesh.domain.center.y - r);
        let n = ((mesh.n_triangles() as f64).sqrt().ceil() as usize).clamp(1, 1024);
        let cell = 2.0 * r / n as f64;
        let mut buckets = vec![Vec::new(); n * n];
        let idx = |v: f64, o: f64| (((v - o) / cell).floor().max(0.0) as usize).min(n - 1);
        for t in 0..mesh.n_triangles() {
            let p = mesh.triangle(t);
            let (x0, x1) = (
                p.iter().map(|q| q.x).fold(f64::MAX, f64::min),
                p.iter().map(|q| q.x).fold(f64::MIN, f64::max),
            );
            let (y0, y1) = (
                p.iter().map(|q| q.y).fold(f64::MAX, f64::min),
                p.iter().map(|q| q.y).fold(f64::MIN, f64::max),
            );
            for j in idx(y0, origin.y)..=idx(y1, origin.y) {
                for i in idx(x0, origin.x)..=idx(x1, origin.x) {
                    buckets[j * n + i].push(t as u32);
                }
            }
        }
        Self {
            origin,
            cell,
            n,
            buckets,
        }
    }

    /// Triangle containing `p` and the barycentric coordinates of `p` in it.
    pub fn locate(&self, mesh: &Mesh, p: Point2) -> Option<(usize, [f64; 3])> {
        self.closest(mesh, p)
            .filter(|(_, lam)| lam.iter().all(|&l| l > -BARY_TOL))
    }

    /// Like [`Locator::locate`], but for points just outside the mesh (the
    /// slivers between boundary chords and the circle) returns the nearby
    /// triangle with the least negative barycentric coordinate.
    pub fn closest(&self, mesh: &Mesh, p: Point2) -> Option<(usize, [f64; 3])> {
        let i = ((p.x - self.origin.x) / self.cell).floor();
        let j = ((p.y - self.origin.y) / self.cell).floor();
        if i < 0.0 || j < 0.0 || i >= self.n as f64 || j >= self.n as f64 {
            return None;
        }
        let mut best: Option<(usize, [f64; 3])> = None;
        let mut best_min = f64::NEG_INFINITY;
        for &t in &self.buckets[j as usize * self.n + i as usize] {
            let t = t as usize;
            let lam = barycentric(mesh.triangle(t), p);
            let m = lam[0].min(lam[1]).min(lam[2]);
            if m >= 0.0 {
                return Some((t, lam));
            }
            if m > best_min {
                best_min = m;
                best = Some((t, lam));
            }
        }
        best
    }
}

pub fn barycentric(tri: [Point2; 3], p: Point2) -> [f64; 3] {
    let area = signed_area(tri);
    let l0 = signed_area([p, tri[1], tri[2]]) / area;
    let l1 = signed_area([tri[0], p, tri[2]]) / area;
    [l0, l1, 1.0 - l0 - l1]
}
