//! Brute-force distance oracle.
//!
//! Enumerates every side sequence up to a fixed length from every
//! representative of the source, develops the faces with its own placement
//! code, and accepts a target image only if the straight segment to it crosses
//! each developed side in its open interior, in order. Paths through vertices
//! are handled by a Floyd-Warshall pass over vertex-to-vertex candidates.

#![allow(dead_code)]

use flatsurf_core::{Barycentric, FlatSurface, Point2, Rep, SideRef, SurfacePoint};

fn place_across(
    s: &FlatSurface,
    face_corners: &[Point2; 3],
    side: SideRef,
) -> (usize, [Point2; 3]) {
    let tri = s.triangulation();
    let (t, o) = tri.partner(side);
    let k = side.side as usize;
    let p_start = face_corners[(k + 1) % 3];
    let p_end = face_corners[(k + 2) % 3];
    // keep: start of t sits on end of side; flip: start on start
    let (t_start, t_end) = if o.starts_match() {
        (p_start, p_end)
    } else {
        (p_end, p_start)
    };
    let l = s.lengths().face_sides(tri, t.face);
    let ti = t.side as usize;
    // sides of t's face meeting at t's start and end corners
    let from_start = l[(ti + 2) % 3];
    let from_end = l[(ti + 1) % 3];
    let base = t_start.dist(t_end);
    // circle intersection on the far side from the current face's third corner
    let a = (from_start * from_start - from_end * from_end + base * base) / (2.0 * base);
    let h = (from_start * from_start - a * a).max(0.0).sqrt();
    let u = (t_end - t_start) * (1.0 / base);
    let n = Point2::new(-u.y, u.x);
    let third = face_corners[k];
    let side_of_third = (third - t_start).dot(n);
    let apex = if side_of_third > 0.0 {
        t_start + u * a - n * h
    } else {
        t_start + u * a + n * h
    };
    let mut out = [Point2::default(); 3];
    out[(ti + 1) % 3] = t_start;
    out[(ti + 2) % 3] = t_end;
    out[ti] = apex;
    (t.face, out)
}

/// Parameter along `p -> q` where it meets segment `a -> b`, with the parameter on `a -> b`.
fn intersect(p: Point2, q: Point2, a: Point2, b: Point2) -> Option<(f64, f64)> {
    let r = q - p;
    let s = b - a;
    let denom = r.cross(s);
    if denom == 0.0 {
        return None;
    }
    let t = (a - p).cross(s) / denom;
    let u = (a - p).cross(r) / denom;
    Some((t, u))
}

const EDGE_EPS: f64 = 1e-9;

/// Face, developed corners, sides crossed so far, side entered through.
type Frame = (usize, [Point2; 3], Vec<(Point2, Point2)>, Option<u8>);

/// Shortest straight development from `x` to any rep of each target, over side
/// sequences of length at most `depth`.
pub fn vertex_free(
    s: &FlatSurface,
    x: &SurfacePoint,
    targets: &[SurfacePoint],
    depth: usize,
) -> Vec<f64> {
    let mut best = vec![f64::INFINITY; targets.len()];
    for rep in x.reps() {
        let corners = s.placement(rep.face).corners;
        let src = rep.bary.position(&corners);
        let mut stack: Vec<Frame> = vec![(rep.face, corners, Vec::new(), None)];
        while let Some((face, corners, crossed, entry)) = stack.pop() {
            for (ti, t) in targets.iter().enumerate() {
                for r in t.reps().iter().filter(|r| r.face == face) {
                    let b = r.bary.position(&corners);
                    if straight_ok(src, b, &crossed) {
                        best[ti] = best[ti].min(src.dist(b));
                    }
                }
            }
            if crossed.len() == depth {
                continue;
            }
            for k in 0..3u8 {
                if Some(k) == entry {
                    continue;
                }
                let side = SideRef::new(face, k);
                let (next, c) = place_across(s, &corners, side);
                let (tside, _) = s.triangulation().partner(side);
                let mut cr = crossed.clone();
                cr.push((
                    corners[((k + 1) % 3) as usize],
                    corners[((k + 2) % 3) as usize],
                ));
                stack.push((next, c, cr, Some(tside.side)));
            }
        }
    }
    best
}

fn straight_ok(src: Point2, dst: Point2, crossed: &[(Point2, Point2)]) -> bool {
    let mut last = 0.0;
    for &(a, b) in crossed {
        let Some((t, u)) = intersect(src, dst, a, b) else {
            return false;
        };
        if !(t > last && t <= 1.0 + EDGE_EPS && u > EDGE_EPS && u < 1.0 - EDGE_EPS) {
            return false;
        }
        last = t;
    }
    true
}

pub fn vertex_points(s: &FlatSurface) -> Vec<SurfacePoint> {
    let tri = s.triangulation();
    tri.vertices()
        .map(|v| {
            let c = tri.vertex_corners(v)[0];
            s.point(c.face, Barycentric::corner(c.corner))
        })
        .collect()
}

/// Vertex-to-vertex distances allowing paths through vertices.
pub fn vertex_table(s: &FlatSurface, depth: usize) -> Vec<Vec<f64>> {
    let vs = vertex_points(s);
    let n = vs.len();
    let mut d: Vec<Vec<f64>> = vs.iter().map(|v| vertex_free(s, v, &vs, depth)).collect();
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for m in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][m] + d[m][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Brute-force distance with strips of length at most `depth`.
pub fn distance(s: &FlatSurface, x: &SurfacePoint, y: &SurfacePoint, depth: usize) -> f64 {
    if x == y {
        return 0.0;
    }
    let vs = vertex_points(s);
    let table = vertex_table(s, depth);
    let mut targets = vec![y.clone()];
    targets.extend(vs.iter().cloned());
    let from_x = vertex_free(s, x, &targets, depth);
    let from_y = vertex_free(s, y, &vs, depth);
    let mut best = from_x[0];
    for v in 0..vs.len() {
        for w in 0..vs.len() {
            best = best.min(from_x[1 + v] + table[v][w] + from_y[w]);
        }
    }
    best
}

pub fn rep(face: usize, b: [f64; 3]) -> Rep {
    Rep::new(face, Barycentric::new(b).unwrap())
}
