//! Randomized invariant checks over a set of flat surfaces.
//!
//! Every trial draws from its own ChaCha8 stream determined by the suite seed,
//! the property, the subject and the trial index, so results do not depend on
//! thread scheduling. Trials run in parallel; the reported counterexample is
//! the failing trial with the smallest index.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{check_length_preservation, FaceCurve};
use crate::engine::{DistanceEngine, EngineError, EngineOptions};
use crate::fixtures;
use crate::metric::{corner_angle, FlatSurface, SurfacePoint};
use crate::sample;
use crate::teich::{self, Verdict};

/// A named surface the suite runs on.
#[derive(Debug, Clone)]
pub struct Subject {
    pub name: String,
    pub surface: FlatSurface,
}

impl Subject {
    pub fn new(name: impl Into<String>, surface: FlatSurface) -> Self {
        Self {
            name: name.into(),
            surface,
        }
    }

    /// The bundled pillow, torus and tetrahedron.
    pub fn fixtures() -> Vec<Subject> {
        fixtures::ALL
            .iter()
            .map(|f| Subject::new(f.name, f.surface()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    /// `|E| = 3|V| - 3 chi` on random gluings.
    EdgeCount,
    /// Cone angles satisfy Gauss-Bonnet; each face's angles sum to pi.
    GaussBonnet,
    /// Every representative of a boundary point regenerates the same orbit.
    OrbitClosure,
    /// `d(x, y) < r(x)` forces `d = d_i` on a shared face.
    Locality,
    /// Short in-face distances transfer to every face carrying the far point.
    SideTransfer,
    /// `d_i(x, z) + d_i(z, w) >= d_i(x, w)` when `d_i(x, z) < r(x)`.
    LocalTriangle,
    /// Points within `eps < r''(x)` of `x` share a face with it.
    BallLocality,
    /// Symmetry, identity and the triangle inequality.
    MetricAxioms,
    /// Steiner distances never undercut the exact distance.
    ApproxSoundness,
    /// Nested Steiner sets give nonincreasing distances.
    ApproxMonotone,
    /// The fast path agrees with the full search.
    FastPath,
    /// Scaling lengths scales distances and area, fixes angles.
    Homothety,
    /// Returned geodesics are continuous curves of the reported length.
    Witness,
    /// Face curves keep their length on the surface.
    LengthPreservation,
    /// `distinguish` never separates a point from itself and does separate scalings.
    DistinguishSoundness,
}

impl Property {
    pub const ALL: [Property; 15] = [
        Property::EdgeCount,
        Property::GaussBonnet,
        Property::OrbitClosure,
        Property::Locality,
        Property::SideTransfer,
        Property::LocalTriangle,
        Property::BallLocality,
        Property::MetricAxioms,
        Property::ApproxSoundness,
        Property::ApproxMonotone,
        Property::FastPath,
        Property::Homothety,
        Property::Witness,
        Property::LengthPreservation,
        Property::DistinguishSoundness,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::EdgeCount => "edge_count",
            Property::GaussBonnet => "gauss_bonnet",
            Property::OrbitClosure => "orbit_closure",
            Property::Locality => "locality",
            Property::SideTransfer => "side_transfer",
            Property::LocalTriangle => "local_triangle",
            Property::BallLocality => "ball_locality",
            Property::MetricAxioms => "metric_axioms",
            Property::ApproxSoundness => "approx_soundness",
            Property::ApproxMonotone => "approx_monotone",
            Property::FastPath => "fast_path",
            Property::Homothety => "homothety",
            Property::Witness => "witness",
            Property::LengthPreservation => "length_preservation",
            Property::DistinguishSoundness => "distinguish_soundness",
        }
    }

    fn index(self) -> u64 {
        Property::ALL.iter().position(|p| *p == self).unwrap() as u64
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: usize,
    /// Run approximate queries on a Steiner graph with miswired edge points.
    pub inject_fault: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 100,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub property: Property,
    pub subject: String,
    pub trials: usize,
    /// Trials whose hypothesis held.
    pub applicable: usize,
    pub violations: usize,
    /// Largest error measured among applicable trials.
    pub worst: f64,
    pub counterexample: Option<Counterexample>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Result of one trial.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub applicable: bool,
    pub error: f64,
    pub violation: Option<String>,
}

impl Outcome {
    fn vacuous() -> Self {
        Self::default()
    }

    fn check(error: f64, tol: f64, detail: impl FnOnce() -> String) -> Self {
        Self {
            applicable: true,
            error,
            violation: (error.is_nan() || error > tol).then(detail),
        }
    }

    fn and(self, other: Outcome) -> Outcome {
        Outcome {
            applicable: self.applicable || other.applicable,
            error: self.error.max(other.error),
            violation: self.violation.or(other.violation),
        }
    }

    fn fail(detail: String) -> Self {
        Self {
            applicable: true,
            error: f64::INFINITY,
            violation: Some(detail),
        }
    }
}

impl From<EngineError> for Outcome {
    fn from(e: EngineError) -> Self {
        Outcome::fail(e.to_string())
    }
}

/// Engines and data shared by the trials of one property on one subject.
pub struct Context {
    pub subject: Subject,
    /// Full search on every query, no fast path.
    pub engine: DistanceEngine,
    /// Default options, possibly with the injected fault.
    pub fast: DistanceEngine,
}

impl Context {
    pub fn new(subject: &Subject, cfg: &SuiteConfig) -> Self {
        let surface = subject.surface.clone();
        Self {
            subject: subject.clone(),
            engine: DistanceEngine::new(
                surface.clone(),
                EngineOptions {
                    fast_path: false,
                    miswire_steiner: cfg.inject_fault,
                    ..EngineOptions::default()
                },
            ),
            fast: DistanceEngine::new(
                surface,
                EngineOptions {
                    miswire_steiner: cfg.inject_fault,
                    ..EngineOptions::default()
                },
            ),
        }
    }

    fn surface(&self) -> &FlatSurface {
        &self.subject.surface
    }
}

/// The random stream for one trial.
pub fn trial_rng(seed: u64, property: Property, subject: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((property.index() << 32) | subject as u64);
    rng.set_word_pos((trial as u128) << 32);
    rng
}

pub fn run_suite(subjects: &[Subject], cfg: &SuiteConfig) -> Vec<PropertyReport> {
    let mut out = Vec::new();
    for (si, subject) in subjects.iter().enumerate() {
        let ctx = Context::new(subject, cfg);
        for p in Property::ALL {
            out.push(run_property(p, &ctx, si, cfg));
        }
    }
    out
}

/// Run `cfg.trials` trials of `property` against the context's subject.
pub fn run_property(
    property: Property,
    ctx: &Context,
    subject_index: usize,
    cfg: &SuiteConfig,
) -> PropertyReport {
    let outcomes: Vec<Outcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, property, subject_index, t);
            trial(property, ctx, &mut rng)
        })
        .collect();
    let mut report = PropertyReport {
        property,
        subject: ctx.subject.name.clone(),
        trials: cfg.trials,
        applicable: 0,
        violations: 0,
        worst: 0.0,
        counterexample: None,
    };
    for (t, o) in outcomes.into_iter().enumerate() {
        if o.applicable {
            report.applicable += 1;
            report.worst = report.worst.max(o.error);
        }
        if let Some(detail) = o.violation {
            report.violations += 1;
            if report.counterexample.is_none() {
                report.counterexample = Some(Counterexample { trial: t, detail });
            }
        }
    }
    report
}

pub fn trial(property: Property, ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let result = match property {
        Property::EdgeCount => Ok(edge_count(rng)),
        Property::GaussBonnet => Ok(gauss_bonnet(ctx, rng)),
        Property::OrbitClosure => Ok(orbit_closure(ctx, rng)),
        Property::Locality => locality(ctx, rng),
        Property::SideTransfer => Ok(side_transfer(ctx, rng)),
        Property::LocalTriangle => Ok(local_triangle(ctx, rng)),
        Property::BallLocality => ball_locality(ctx, rng),
        Property::MetricAxioms => metric_axioms(ctx, rng),
        Property::ApproxSoundness => approx_soundness(ctx, rng),
        Property::ApproxMonotone => Ok(approx_monotone(ctx, rng)),
        Property::FastPath => fast_path(ctx, rng),
        Property::Homothety => homothety(ctx, rng),
        Property::Witness => witness(ctx, rng),
        Property::LengthPreservation => length_preservation(ctx, rng),
        Property::DistinguishSoundness => Ok(distinguish_soundness(ctx, rng)),
    };
    result.unwrap_or_else(Outcome::from)
}

const TOL: f64 = 1e-9;

fn edge_count(rng: &mut ChaCha8Rng) -> Outcome {
    let tri = sample::random_gluing(rng, 12);
    let (v, e, chi) = (
        tri.vertex_count() as i64,
        tri.edge_count() as i64,
        tri.euler_char(),
    );
    let ok = e == 3 * v - 3 * chi && teich::chart_dimension(&tri).ok() == Some(e as usize);
    Outcome {
        applicable: true,
        error: if ok { 0.0 } else { 1.0 },
        violation: (!ok).then(|| format!("V={v} E={e} chi={chi}\n{}", tri.spec().to_text())),
    }
}

fn gauss_bonnet(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let s = sample::perturbed_surface(rng, ctx.surface());
    let residual = s.gauss_bonnet_residual().abs();
    let face_err = s
        .placements()
        .iter()
        .map(|p| ((0..3).map(|c| corner_angle(p, c)).sum::<f64>() - PI).abs())
        .fold(0.0, f64::max);
    Outcome::check(residual.max(face_err), TOL, || {
        format!(
            "lengths {:?}: residual {residual:e}, face angle error {face_err:e}",
            s.lengths().values()
        )
    })
}

fn orbit_closure(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let s = ctx.surface();
    let face = rng.gen_range(0..s.triangulation().face_count());
    let bary = if rng.gen_bool(0.8) {
        {
            let k = rng.gen_range(0..3);
            sample::side_bary(rng, k)
        }
    } else {
        crate::metric::Barycentric::corner(rng.gen_range(0..3))
    };
    let x = s.point(face, bary);
    for r in x.reps() {
        let y = s.point(r.face, r.bary);
        if y.reps() != x.reps() {
            return Outcome::fail(format!("orbit of {x} regenerated from {r} differs"));
        }
    }
    Outcome::check(0.0, 0.0, String::new)
}

fn locality(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let y = sample::partner_point(rng, s, &x);
    let d = ctx.engine.distance_exact(&x, &y)?;
    if d >= s.safety_radius(&x) {
        return Ok(Outcome::vacuous());
    }
    Ok(match s.shared_distance(&x, &y) {
        None => Outcome::fail(format!("x={x} y={y}: d={d} < r(x) but no shared face")),
        Some((di, ..)) => Outcome::check((d - di).abs(), TOL, || {
            format!("x={x} y={y}: d={d} d_i={di}")
        }),
    })
}

fn side_transfer(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let z = sample::point_near(rng, s, &x);
    let faces: Vec<usize> = x
        .faces()
        .into_iter()
        .filter(|&f| z.touches_face(f))
        .collect();
    let i = faces[rng.gen_range(0..faces.len())];
    let di = s.quasi_distance(i, &x, &z).unwrap();
    if di >= s.safety_radius(&x) {
        return Outcome::vacuous();
    }
    let mut out = Outcome::check(0.0, TOL, String::new);
    for zr in z.reps() {
        let j = zr.face;
        // every rep of z has a rep of x at the same in-face distance
        let best = x
            .reps_in(j)
            .map(|xr| (s.face_distance(j, &xr.bary, &zr.bary) - di).abs())
            .fold(f64::INFINITY, f64::min);
        out = out.and(Outcome::check(best, TOL, || {
            format!(
                "x={x} z={z} face {}: d_i={di}, no rep of x matches rep {zr}",
                i + 1
            )
        }));
        let dj = s.quasi_distance(j, &x, &z);
        let err = dj.map_or(f64::INFINITY, |dj| (dj - di).abs());
        out = out.and(Outcome::check(err, TOL, || {
            format!("x={x} z={z}: d_{}={di} but d_{}={dj:?}", i + 1, j + 1)
        }));
    }
    out
}

fn local_triangle(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let z = sample::point_near(rng, s, &x);
    let faces: Vec<usize> = x
        .faces()
        .into_iter()
        .filter(|&f| z.touches_face(f))
        .collect();
    let i = faces[rng.gen_range(0..faces.len())];
    let dxz = s.quasi_distance(i, &x, &z).unwrap();
    if dxz >= s.safety_radius(&x) {
        return Outcome::vacuous();
    }
    let w = s.point(i, sample::interior_bary(rng));
    let dzw = s.quasi_distance(i, &z, &w).unwrap();
    let dxw = s.quasi_distance(i, &x, &w).unwrap();
    Outcome::check((dxw - dxz - dzw).max(0.0), TOL, || {
        format!("x={x} z={z} w={w} on face {}: {dxz} + {dzw} < {dxw}", i + 1)
    })
}

fn ball_locality(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let eps = rng.gen_range(0.0..1.0) * s.combined_radius(&x);
    let y = sample::point_near(rng, s, &x);
    let d = ctx.engine.distance_exact(&x, &y)?;
    if d >= eps {
        return Ok(Outcome::vacuous());
    }
    let shared = s.share_face(&x, &y);
    Ok(Outcome::check(if shared { 0.0 } else { 1.0 }, 0.0, || {
        format!("x={x} y={y}: d={d} < eps={eps} without a shared face")
    }))
}

fn metric_axioms(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let e = &ctx.engine;
    let x = sample::random_point(rng, s);
    let y = sample::partner_point(rng, s, &x);
    let z = sample::partner_point(rng, s, &y);
    let (dxy, dyx) = (e.distance_exact(&x, &y)?, e.distance_exact(&y, &x)?);
    let (dyz, dxz) = (e.distance_exact(&y, &z)?, e.distance_exact(&x, &z)?);
    let dxx = e.distance_exact(&x, &x)?;
    let mut out = Outcome::check(0.0, 0.0, String::new);
    if dxy.to_bits() != dyx.to_bits() {
        out = out.and(Outcome::fail(format!(
            "x={x} y={y}: d(x,y)={dxy} d(y,x)={dyx}"
        )));
    }
    if dxx != 0.0 || (dxy == 0.0) != (x == y) || !dxy.is_finite() {
        out = out.and(Outcome::fail(format!(
            "x={x} y={y}: d(x,x)={dxx} d(x,y)={dxy}"
        )));
    }
    out = out.and(Outcome::check((dxz - dxy - dyz).max(0.0), TOL, || {
        format!("x={x} y={y} z={z}: {dxz} > {dxy} + {dyz}")
    }));
    Ok(out)
}

/// Steiner refinements checked for soundness.
pub const APPROX_LEVELS: [usize; 5] = [4, 8, 16, 32, 64];

fn approx_soundness(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let y = sample::random_point(rng, s);
    let exact = ctx.engine.distance_exact(&x, &y)?;
    let mut out = Outcome::check(0.0, TOL, String::new);
    for k in APPROX_LEVELS {
        let approx = ctx.engine.distance_approx(&x, &y, k);
        out = out.and(Outcome::check((exact - approx).max(0.0), TOL, || {
            format!("x={x} y={y} k={k}: approx {approx} < exact {exact}")
        }));
    }
    Ok(out)
}

/// Steiner counts whose point sets are nested: `j/(k+1)` refines under `k -> 2k + 1`.
pub const NESTED_LEVELS: [usize; 6] = [1, 3, 7, 15, 31, 63];

fn approx_monotone(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let y = sample::random_point(rng, s);
    let d: Vec<f64> = NESTED_LEVELS
        .iter()
        .map(|&k| ctx.engine.distance_approx(&x, &y, k))
        .collect();
    let err = d
        .windows(2)
        .map(|w| (w[1] - w[0]).max(0.0))
        .fold(0.0, f64::max);
    Outcome::check(err, TOL, || format!("x={x} y={y}: {d:?}"))
}

fn fast_path(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let y = sample::point_near(rng, s, &x);
    let (a, b) = (
        ctx.fast.distance_exact(&x, &y)?,
        ctx.engine.distance_exact(&x, &y)?,
    );
    Ok(Outcome::check((a - b).abs(), TOL, || {
        format!("x={x} y={y}: fast {a} full {b}")
    }))
}

/// Scale factors checked for homothety.
pub const SCALES: [f64; 3] = [0.5, 2.0, 10.0];

fn homothety(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let x = sample::random_point(rng, s);
    let y = sample::partner_point(rng, s, &x);
    let d = ctx.engine.distance_exact(&x, &y)?;
    let base = s.angle_report();
    let mut out = Outcome::check(0.0, TOL, String::new);
    for c in SCALES {
        let scaled = s.scaled(c);
        let e = DistanceEngine::new(
            scaled.clone(),
            EngineOptions {
                fast_path: false,
                ..EngineOptions::default()
            },
        );
        let dc = e.distance_exact(&x, &y)?;
        let rel = if d == 0.0 {
            dc.abs()
        } else {
            (dc - c * d).abs() / (c * d)
        };
        out = out.and(Outcome::check(rel, TOL, || {
            format!("x={x} y={y} c={c}: {dc} vs {}", c * d)
        }));
        let report = scaled.angle_report();
        let area_rel = (report.area / base.area - c * c).abs() / (c * c);
        out = out.and(Outcome::check(area_rel, TOL, || {
            format!("c={c}: area ratio {}", report.area / base.area)
        }));
        let angle_err = report
            .cone_angles
            .iter()
            .zip(&base.cone_angles)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out = out.and(Outcome::check(angle_err, 1e-12, || {
            format!("c={c}: cone angles moved by {angle_err:e}")
        }));
    }
    Ok(out)
}

fn witness(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let s = ctx.surface();
    let tri = s.triangulation();
    let x = sample::random_point(rng, s);
    let y = sample::partner_point(rng, s, &x);
    let g = ctx.engine.realize_geodesic(&x, &y)?;
    let d = ctx.engine.distance_exact(&x, &y)?;
    if let Err(e) = g.curve.check(tri) {
        return Ok(Outcome::fail(format!("x={x} y={y}: {e}")));
    }
    if x != y && (g.curve.start(tri).as_ref() != Some(&x) || g.curve.end(tri).as_ref() != Some(&y))
    {
        return Ok(Outcome::fail(format!(
            "x={x} y={y}: curve endpoints are wrong"
        )));
    }
    let len = g.curve.length(s);
    Ok(Outcome::check((len - d).abs(), TOL, || {
        format!("x={x} y={y}: curve {len} distance {d}")
    }))
}

/// A random polyline with 2 to 5 breakpoints in one face, mostly away from the sides.
pub fn random_face_curve<R: Rng + ?Sized>(rng: &mut R, surface: &FlatSurface) -> FaceCurve {
    let face = rng.gen_range(0..surface.triangulation().face_count());
    loop {
        let n = rng.gen_range(2..=5);
        let points: Vec<_> = (0..n)
            .map(|_| {
                let roll: f64 = rng.gen();
                if roll < 0.8 {
                    sample::inner_bary(rng, 0.02)
                } else if roll < 0.95 {
                    {
                        let k = rng.gen_range(0..3);
                        sample::side_bary(rng, k)
                    }
                } else {
                    crate::metric::Barycentric::corner(rng.gen_range(0..3))
                }
            })
            .collect();
        if let Ok(c) = FaceCurve::new(face, points) {
            return c;
        }
    }
}

fn length_preservation(ctx: &Context, rng: &mut ChaCha8Rng) -> Result<Outcome, EngineError> {
    let curve = random_face_curve(rng, ctx.surface());
    match check_length_preservation(&curve, &ctx.fast, 1e-6) {
        Ok((_, report)) => {
            let err = (report.face_length - report.estimate()).abs();
            Ok(Outcome::check(err, 1e-6, || {
                format!("curve {curve:?}: {report:?}")
            }))
        }
        Err(crate::curves::CurveError::Engine(e)) => Err(e),
        Err(e) => Ok(Outcome::fail(format!("curve {curve:?}: {e}"))),
    }
}

fn distinguish_soundness(ctx: &Context, rng: &mut ChaCha8Rng) -> Outcome {
    let p = sample::perturbed_surface(rng, ctx.surface());
    let c = rng.gen_range(1.1..3.0);
    let same = teich::distinguish(&p, &p);
    let scaled = teich::distinguish(&p, &p.scaled(c));
    let ok = same == Ok(Verdict::Inconclusive) && scaled == Ok(Verdict::Distinct);
    Outcome::check(if ok { 0.0 } else { 1.0 }, 0.0, || {
        format!(
            "lengths {:?}: self {same:?}, scaled by {c} {scaled:?}",
            p.lengths().values()
        )
    })
}

/// Points whose distances the suite samples, for callers that need the raw pairs.
pub fn sample_pair<R: Rng + ?Sized>(
    rng: &mut R,
    surface: &FlatSurface,
) -> (SurfacePoint, SurfacePoint) {
    let x = sample::random_point(rng, surface);
    let y = sample::partner_point(rng, surface, &x);
    (x, y)
}
