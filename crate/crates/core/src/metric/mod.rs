//! Flat metric on each face and the quasi-distances built from it.
//!
//! Every face is realized as a Euclidean triangle from its three edge lengths.
//! Distances inside a face are plane distances between placed points; the
//! quasi-distance `d_i` on face `i` minimizes over all representatives of the
//! two points that lie in that face.

mod angles;
mod lengths;
mod point;
mod radii;

pub use angles::{corner_angle, AngleReport};
pub use lengths::{check_lengths, lengths_to_text, parse_lengths, EdgeLengths, LengthError};
pub use point::{make_point, parse_point, Barycentric, PointError, Rep, SurfacePoint};

pub(crate) use point::across_side;

use serde::Serialize;

use crate::geom::{heron_area, Point2};
use crate::gluing::Triangulation;

/// A face realized in the plane: corner 0 at the origin, corner 1 on the
/// positive x-axis, corner 2 in the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FacePlacement {
    pub face: usize,
    pub corners: [Point2; 3],
}

impl FacePlacement {
    /// Endpoints of side `k`, start first.
    pub fn side(&self, k: u8) -> (Point2, Point2) {
        (
            self.corners[((k + 1) % 3) as usize],
            self.corners[((k + 2) % 3) as usize],
        )
    }

    pub fn position(&self, b: &Barycentric) -> Point2 {
        b.position(&self.corners)
    }

    /// Signed area, positive for counterclockwise corners.
    pub fn signed_area(&self) -> f64 {
        0.5 * crate::geom::orient(self.corners[0], self.corners[1], self.corners[2])
    }
}

/// Place face `face` from the lengths of its sides.
pub fn embed_face(tri: &Triangulation, lengths: &EdgeLengths, face: usize) -> FacePlacement {
    let [l0, l1, l2] = lengths.face_sides(tri, face);
    // |c0 c1| = l2, |c0 c2| = l1, |c1 c2| = l0
    let area = heron_area(l0, l1, l2);
    let x = (l1 * l1 + l2 * l2 - l0 * l0) / (2.0 * l2);
    let y = 2.0 * area / l2;
    FacePlacement {
        face,
        corners: [
            Point2::new(0.0, 0.0),
            Point2::new(l2, 0.0),
            Point2::new(x, y),
        ],
    }
}

/// Euclidean distance between two points of a placed face.
pub fn face_distance(placement: &FacePlacement, p: &Barycentric, q: &Barycentric) -> f64 {
    if p == q {
        return 0.0;
    }
    placement.position(p).dist(placement.position(q))
}

/// A triangulation with a valid edge-length assignment and all faces placed.
#[derive(Debug, Clone)]
pub struct FlatSurface {
    tri: Triangulation,
    lengths: EdgeLengths,
    placements: Vec<FacePlacement>,
}

impl FlatSurface {
    pub fn new(tri: Triangulation, lengths: EdgeLengths) -> Result<Self, LengthError> {
        // re-checks the chart conditions against this triangulation
        let lengths = EdgeLengths::from_slice(&tri, lengths.values())?;
        let placements = (0..tri.face_count())
            .map(|f| embed_face(&tri, &lengths, f))
            .collect();
        Ok(Self {
            tri,
            lengths,
            placements,
        })
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn lengths(&self) -> &EdgeLengths {
        &self.lengths
    }

    pub fn placement(&self, face: usize) -> &FacePlacement {
        &self.placements[face]
    }

    pub fn placements(&self) -> &[FacePlacement] {
        &self.placements
    }

    /// Same surface with every length multiplied by `c > 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c > 0.0 && c.is_finite());
        Self::new(self.tri.clone(), self.lengths.scaled_unchecked(c))
            .expect("similar lengths stay valid")
    }

    pub fn point(&self, face: usize, bary: Barycentric) -> SurfacePoint {
        make_point(&self.tri, face, bary)
    }

    pub fn position(&self, rep: &Rep) -> Point2 {
        self.placements[rep.face].position(&rep.bary)
    }

    pub fn face_distance(&self, face: usize, p: &Barycentric, q: &Barycentric) -> f64 {
        face_distance(&self.placements[face], p, q)
    }

    /// `d_i(x, y)` with the representatives realizing it, or `None` if either
    /// point misses face `face`.
    pub fn quasi_distance_witness(
        &self,
        face: usize,
        x: &SurfacePoint,
        y: &SurfacePoint,
    ) -> Option<(f64, Rep, Rep)> {
        let mut best: Option<(f64, Rep, Rep)> = None;
        for rx in x.reps_in(face) {
            for ry in y.reps_in(face) {
                let d = self.face_distance(face, &rx.bary, &ry.bary);
                if best.as_ref().is_none_or(|b| d < b.0) {
                    best = Some((d, *rx, *ry));
                }
            }
        }
        best
    }

    pub fn quasi_distance(&self, face: usize, x: &SurfacePoint, y: &SurfacePoint) -> Option<f64> {
        self.quasi_distance_witness(face, x, y).map(|w| w.0)
    }

    /// Smallest `d_i(x, y)` over faces carrying both points.
    pub fn shared_distance(&self, x: &SurfacePoint, y: &SurfacePoint) -> Option<(f64, Rep, Rep)> {
        let mut best: Option<(f64, Rep, Rep)> = None;
        for face in x.faces() {
            if let Some(w) = self.quasi_distance_witness(face, x, y) {
                if best.as_ref().is_none_or(|b| w.0 < b.0) {
                    best = Some(w);
                }
            }
        }
        best
    }

    /// Whether some face carries representatives of both points.
    pub fn share_face(&self, x: &SurfacePoint, y: &SurfacePoint) -> bool {
        x.faces().into_iter().any(|f| y.touches_face(f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::gluing::{parse_spec, validate};
    use crate::tol;
    use std::f64::consts::PI;

    fn single_face_lengths(l: [f64; 3]) -> FlatSurface {
        // pillow: side k of both faces is edge k
        let tri = fixtures::PILLOW.triangulation();
        FlatSurface::new(tri.clone(), EdgeLengths::from_slice(&tri, &l).unwrap()).unwrap()
    }

    #[test]
    fn right_triangle_placement() {
        let s = single_face_lengths([3.0, 4.0, 5.0]);
        let p = s.placement(0);
        assert!((corner_angle(p, 2) - PI / 2.0).abs() < 1e-12);
        for k in 0..3u8 {
            let (a, b) = p.side(k);
            let l = s.lengths().face_sides(s.triangulation(), 0)[k as usize];
            assert!((a.dist(b) - l).abs() <= tol::EMBED_REL * l);
        }
        assert!(p.signed_area() > 0.0);
    }

    #[test]
    fn equilateral_height() {
        let s = fixtures::PILLOW.surface();
        let c = s.placement(0).corners[2];
        assert!((c.x - 0.5).abs() < 1e-15);
        assert!((c.y - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn face_distance_basics() {
        let s = fixtures::PILLOW.surface();
        let p = Barycentric::new([0.2, 0.3, 0.5]).unwrap();
        assert_eq!(s.face_distance(0, &p, &p), 0.0);
        let d = s.face_distance(0, &Barycentric::corner(0), &Barycentric::corner(2));
        assert!((d - 1.0).abs() < 1e-15);
    }

    #[test]
    fn centroid_to_side_midpoint() {
        // centroid (1/2, sqrt3/6), midpoint of side c0c1 (1/2, 0)
        let s = fixtures::PILLOW.surface();
        let d = s.face_distance(
            0,
            &Barycentric::centroid(),
            &Barycentric::on_side(2, 0.5, 0.5),
        );
        assert!((d - 3f64.sqrt() / 6.0).abs() < 1e-15);
    }

    #[test]
    fn quasi_distance_pillow_vertices() {
        let s = fixtures::PILLOW.surface();
        let x = s.point(0, Barycentric::corner(0));
        let y = s.point(0, Barycentric::corner(1));
        assert!((s.quasi_distance(0, &x, &y).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(s.quasi_distance(0, &x, &x), Some(0.0));
    }

    #[test]
    fn quasi_distance_missing_face() {
        let s = fixtures::TETRAHEDRON.surface();
        let x = s.point(0, Barycentric::centroid());
        let y = s.point(1, Barycentric::centroid());
        assert_eq!(s.quasi_distance(0, &x, &y), None);
    }

    #[test]
    fn quasi_distance_is_min_over_rep_pairs_on_self_glued_face() {
        // face 1 has sides 1 and 2 glued to each other, so side points have two reps there
        let tri = validate(
            &parse_spec("faces 2\nglue 1.1 1.2 flip\nglue 1.3 2.3 keep\nglue 2.1 2.2 flip")
                .unwrap(),
        )
        .unwrap();
        let l = EdgeLengths::from_slice(&tri, &vec![1.0; tri.edge_count()]).unwrap();
        let s = FlatSurface::new(tri, l).unwrap();
        let x = s.point(0, Barycentric::on_side(0, 0.3, 0.7));
        let y = s.point(0, Barycentric::on_side(1, 0.6, 0.4));
        assert_eq!(x.reps_in(0).count(), 2);
        assert_eq!(y.reps_in(0).count(), 2);
        let mut brute = f64::INFINITY;
        for a in x.reps_in(0) {
            for b in y.reps_in(0) {
                brute = brute.min(s.position(a).dist(s.position(b)));
            }
        }
        assert_eq!(s.quasi_distance(0, &x, &y).unwrap(), brute);
    }
}
