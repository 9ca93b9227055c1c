//! Polyhedral metrics on closed surfaces glued edge-to-edge from Euclidean triangles.
//!
//! * [`gluing`]: gluing files, validation, quotient vertices and edges.
//! * [`metric`]: edge lengths, face placements, surface points, radii, angles.
//! * [`engine`]: exact and approximate geodesic distance.
//! * [`curves`]: piecewise-linear curves and their lengths.
//! * [`teich`]: edge-length chart utilities.
//! * [`props`]: the randomized property suite behind `flatsurf proptest`.

pub mod curves;
pub mod engine;
pub mod fixtures;
pub mod geom;
pub mod gluing;
pub mod metric;
pub mod props;
pub mod sample;
pub mod teich;
pub mod tol;

pub use curves::{
    check_length_preservation, face_curve_length, parse_curve, surface_curve_length, CurveError,
    FaceCurve, LengthReport, SurfaceCurve,
};
pub use engine::{
    build_engine, DistanceEngine, EngineError, EngineOptions, Geodesic, StripUnfolding,
};
pub use geom::Point2;
pub use gluing::{
    euler_characteristic, parse_spec, validate, Corner, EdgeId, GluingSpec, Orientation, Pairing,
    ParseError, SideRef, SpecError, Triangulation, ValidationError, VertexId,
};
pub use metric::{
    check_lengths, corner_angle, embed_face, face_distance, make_point, parse_lengths, parse_point,
    AngleReport, Barycentric, EdgeLengths, FacePlacement, FlatSurface, LengthError, PointError,
    Rep, SurfacePoint,
};
pub use teich::{
    chart_dimension, distinguish, gb_membership, invariants, scale_lengths, InvariantRecord,
    TeichError, Verdict,
};
