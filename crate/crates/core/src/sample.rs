//! Random inputs for property checks and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gluing::{validate, GluingSpec, Orientation, Pairing, SideRef, Triangulation};
use crate::metric::{Barycentric, EdgeLengths, FlatSurface, SurfacePoint};

/// Uniform point of the open triangle.
pub fn interior_bary<R: Rng + ?Sized>(rng: &mut R) -> Barycentric {
    loop {
        let (a, b): (f64, f64) = (rng.gen(), rng.gen());
        let (a, b) = if a + b > 1.0 {
            (1.0 - a, 1.0 - b)
        } else {
            (a, b)
        };
        let c = 1.0 - a - b;
        if a > 0.0 && b > 0.0 && c > 0.0 {
            if let Ok(p) = Barycentric::new([a, b, c]) {
                return p;
            }
        }
    }
}

/// Interior point with every coordinate at least `margin`.
pub fn inner_bary<R: Rng + ?Sized>(rng: &mut R, margin: f64) -> Barycentric {
    let p = interior_bary(rng).coords();
    let s = 1.0 - 3.0 * margin;
    Barycentric::snapped(p.map(|x| margin + s * x))
}

/// Point on the relative interior of side `k`.
pub fn side_bary<R: Rng + ?Sized>(rng: &mut R, k: u8) -> Barycentric {
    loop {
        let t: f64 = rng.gen();
        if t > 0.0 && t < 1.0 {
            return Barycentric::on_side(k, 1.0 - t, t);
        }
    }
}

/// Random point: mostly interior, sometimes on a side or at a vertex.
pub fn random_point<R: Rng + ?Sized>(rng: &mut R, surface: &FlatSurface) -> SurfacePoint {
    let face = rng.gen_range(0..surface.triangulation().face_count());
    let roll: f64 = rng.gen();
    let bary = if roll < 0.7 {
        interior_bary(rng)
    } else if roll < 0.9 {
        let k = rng.gen_range(0..3);
        side_bary(rng, k)
    } else {
        Barycentric::corner(rng.gen_range(0..3))
    };
    surface.point(face, bary)
}

/// Point in a face of `x`, a log-uniform fraction of the way toward a random point of that face.
pub fn point_near<R: Rng + ?Sized>(
    rng: &mut R,
    surface: &FlatSurface,
    x: &SurfacePoint,
) -> SurfacePoint {
    let rep = x.reps()[rng.gen_range(0..x.reps().len())];
    loop {
        let target = interior_bary(rng);
        let t = 10f64.powf(-rng.gen_range(0.0..3.0));
        let b = rep.bary.lerp(&target, t);
        if b != rep.bary {
            return surface.point(rep.face, b);
        }
    }
}

/// Either a uniform point or one near `x`, with equal odds.
pub fn partner_point<R: Rng + ?Sized>(
    rng: &mut R,
    surface: &FlatSurface,
    x: &SurfacePoint,
) -> SurfacePoint {
    if rng.gen_bool(0.5) {
        point_near(rng, surface, x)
    } else {
        random_point(rng, surface)
    }
}

/// `base` with every edge scaled by an independent factor in `[0.8, 1.25]`,
/// resampled until the triangle inequalities hold.
pub fn perturbed_lengths<R: Rng + ?Sized>(
    rng: &mut R,
    tri: &Triangulation,
    base: &EdgeLengths,
) -> EdgeLengths {
    loop {
        let values: Vec<f64> = base
            .values()
            .iter()
            .map(|v| v * rng.gen_range(0.8..1.25))
            .collect();
        if let Ok(l) = EdgeLengths::from_slice(tri, &values) {
            return l;
        }
    }
}

pub fn perturbed_surface<R: Rng + ?Sized>(rng: &mut R, surface: &FlatSurface) -> FlatSurface {
    let tri = surface.triangulation();
    let lengths = perturbed_lengths(rng, tri, surface.lengths());
    FlatSurface::new(tri.clone(), lengths).expect("lengths checked")
}

/// A random closed connected gluing with an even face count in `2..=max_faces`.
pub fn random_gluing<R: Rng + ?Sized>(rng: &mut R, max_faces: usize) -> Triangulation {
    assert!(max_faces >= 2);
    loop {
        let n = 2 * rng.gen_range(1..=max_faces / 2);
        let mut sides: Vec<SideRef> = (0..3 * n).map(SideRef::from_index).collect();
        sides.shuffle(rng);
        let pairings = sides
            .chunks(2)
            .map(|p| {
                let o = if rng.gen_bool(0.5) {
                    Orientation::Keep
                } else {
                    Orientation::Flip
                };
                Pairing::new(p[0], p[1], o)
            })
            .collect();
        let spec = GluingSpec::new(n, pairings).expect("distinct in-range sides");
        if let Ok(tri) = validate(&spec) {
            return tri;
        }
    }
}
