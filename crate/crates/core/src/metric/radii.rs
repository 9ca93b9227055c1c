//! Safety and separation radii of a surface point.

use crate::geom::dist_point_segment;

use super::{FlatSurface, Rep, SurfacePoint};

impl FlatSurface {
    /// Distance from a representative to the sides of its face that do not contain it.
    pub fn rep_radius(&self, rep: &Rep) -> f64 {
        let placement = self.placement(rep.face);
        let p = placement.position(&rep.bary);
        (0..3u8)
            .filter(|&k| !rep.bary.on_closed_side(k))
            .map(|k| {
                let (a, b) = placement.side(k);
                dist_point_segment(p, a, b)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `r(x)`: the smallest [`rep_radius`](Self::rep_radius) over all representatives.
    pub fn safety_radius(&self, x: &SurfacePoint) -> f64 {
        x.reps()
            .iter()
            .map(|r| self.rep_radius(r))
            .fold(f64::INFINITY, f64::min)
    }

    /// `r'(x)`: half the smallest distance between two distinct representatives
    /// in a common face; infinite when no face carries two.
    pub fn separation_radius(&self, x: &SurfacePoint) -> f64 {
        let reps = x.reps();
        let mut best = f64::INFINITY;
        for (i, a) in reps.iter().enumerate() {
            for b in &reps[i + 1..] {
                if a.face == b.face {
                    best = best.min(0.5 * self.position(a).dist(self.position(b)));
                }
            }
        }
        best
    }

    /// `r''(x) = min(r(x), r'(x))`.
    pub fn combined_radius(&self, x: &SurfacePoint) -> f64 {
        self.safety_radius(x).min(self.separation_radius(x))
    }
}
