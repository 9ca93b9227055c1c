//! Combinatorial surfaces glued edge-to-edge from model triangles.
//!
//! A [`GluingSpec`] is the raw side-pairing data read from a gluing file; a
//! [`Triangulation`] is the validated quotient: every side paired, vertex and
//! edge classes enumerated, connectivity and the vertex links checked.
//!
//! Conventions (0-based internally, 1-based in the text format):
//!
//! * corners `0, 1, 2` of every model triangle are counterclockwise;
//! * side `k` is opposite corner `k` and runs from corner `k+1` to corner `k+2`
//!   (mod 3);
//! * a pairing with [`Orientation::Keep`] is orientation preserving and sends the
//!   start of one side to the end of the other; [`Orientation::Flip`] sends
//!   start to start.
//!
//! ```text
//! # doubled unit triangle
//! faces 2
//! glue 1.1 2.1 flip
//! glue 1.2 2.2 flip
//! glue 1.3 2.3 flip
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

/// One side of one model triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SideRef {
    pub face: usize,
    pub side: u8,
}

impl SideRef {
    pub const fn new(face: usize, side: u8) -> Self {
        Self { face, side }
    }

    pub fn index(self) -> usize {
        3 * self.face + self.side as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(i / 3, (i % 3) as u8)
    }

    /// Corner the side starts at.
    pub fn start(self) -> Corner {
        Corner::new(self.face, (self.side + 1) % 3)
    }

    /// Corner the side ends at.
    pub fn end(self) -> Corner {
        Corner::new(self.face, (self.side + 2) % 3)
    }
}

impl fmt::Display for SideRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.face + 1, self.side + 1)
    }
}

/// One corner of one model triangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Corner {
    pub face: usize,
    pub corner: u8,
}

impl Corner {
    pub const fn new(face: usize, corner: u8) -> Self {
        Self { face, corner }
    }

    pub fn index(self) -> usize {
        3 * self.face + self.corner as usize
    }

    pub fn from_index(i: usize) -> Self {
        Self::new(i / 3, (i % 3) as u8)
    }

    /// The two sides meeting at this corner: the one ending here, then the one starting here.
    pub fn incident_sides(self) -> [SideRef; 2] {
        [
            SideRef::new(self.face, (self.corner + 1) % 3),
            SideRef::new(self.face, (self.corner + 2) % 3),
        ]
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.face + 1, self.corner + 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Orientation preserving: start of one side to the end of the other.
    Keep,
    /// Orientation reversing: start to start.
    Flip,
}

impl Orientation {
    pub fn as_str(self) -> &'static str {
        match self {
            Orientation::Keep => "keep",
            Orientation::Flip => "flip",
        }
    }

    /// Whether the identification sends the start of `a` to the start of `b`.
    pub fn starts_match(self) -> bool {
        self == Orientation::Flip
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Keep => Orientation::Flip,
            Orientation::Flip => Orientation::Keep,
        }
    }
}

impl FromStr for Orientation {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "keep" => Ok(Orientation::Keep),
            "flip" => Ok(Orientation::Flip),
            _ => Err(()),
        }
    }
}

/// An isometric identification of two sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Pairing {
    pub a: SideRef,
    pub b: SideRef,
    pub orientation: Orientation,
}

impl Pairing {
    pub fn new(a: SideRef, b: SideRef, orientation: Orientation) -> Self {
        Self { a, b, orientation }
    }

    /// Same identification with the smaller side first.
    pub fn normalized(self) -> Self {
        if self.b < self.a {
            Self::new(self.b, self.a, self.orientation)
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("face count must be positive")]
    NoFaces,
    #[error("face {face} out of range 1..={face_count}")]
    FaceOutOfRange { face: usize, face_count: usize },
    #[error("side {side} out of range 1..=3")]
    SideOutOfRange { side: usize },
    #[error("side {0} appears in two pairings")]
    DuplicateSide(SideRef),
    #[error("side {0} is glued to itself")]
    SelfGluedSide(SideRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: SpecError,
    },
}

/// Raw gluing data: `n` model triangles and a list of side pairings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingSpec {
    face_count: usize,
    pairings: Vec<Pairing>,
}

impl GluingSpec {
    pub fn new(face_count: usize, pairings: Vec<Pairing>) -> Result<Self, SpecError> {
        if face_count == 0 {
            return Err(SpecError::NoFaces);
        }
        let mut seen = vec![false; 3 * face_count];
        for p in &pairings {
            for s in [p.a, p.b] {
                if s.face >= face_count {
                    return Err(SpecError::FaceOutOfRange {
                        face: s.face + 1,
                        face_count,
                    });
                }
                if s.side > 2 {
                    return Err(SpecError::SideOutOfRange {
                        side: s.side as usize + 1,
                    });
                }
            }
            if p.a == p.b {
                return Err(SpecError::SelfGluedSide(p.a));
            }
            for s in [p.a, p.b] {
                if std::mem::replace(&mut seen[s.index()], true) {
                    return Err(SpecError::DuplicateSide(s));
                }
            }
        }
        Ok(Self {
            face_count,
            pairings,
        })
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// Pairings in declaration order.
    pub fn pairings(&self) -> &[Pairing] {
        &self.pairings
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        parse_spec(text)
    }

    /// Same gluing with each pairing normalized and pairings sorted by their smaller side.
    pub fn canonical(&self) -> Self {
        let mut pairings: Vec<Pairing> = self.pairings.iter().map(|p| p.normalized()).collect();
        pairings.sort_by_key(|p| p.a);
        Self {
            face_count: self.face_count,
            pairings,
        }
    }

    /// Canonical text form; parsing it yields [`GluingSpec::canonical`].
    pub fn to_text(&self) -> String {
        let canon = self.canonical();
        let mut out = format!("faces {}\n", canon.face_count);
        for p in &canon.pairings {
            out.push_str(&format!(
                "glue {} {} {}\n",
                p.a,
                p.b,
                p.orientation.as_str()
            ));
        }
        out
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (col, (byte, ch)) in line.char_indices().enumerate() {
        if ch.is_whitespace() {
            if let Some((c, b)) = start.take() {
                out.push((c, &line[b..byte]));
            }
        } else if start.is_none() {
            start = Some((col + 1, byte));
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &line[b..]));
    }
    out
}

fn parse_side(tok: &str, line: usize, column: usize) -> Result<(usize, usize), ParseError> {
    let (f, s) = tok.split_once('.').ok_or_else(|| {
        syntax(
            line,
            column,
            format!("expected <face>.<side>, found `{tok}`"),
        )
    })?;
    let face = f
        .parse::<usize>()
        .map_err(|_| syntax(line, column, format!("bad face index `{f}`")))?;
    let side = s.parse::<usize>().map_err(|_| {
        syntax(
            line,
            column + f.chars().count() + 1,
            format!("bad side index `{s}`"),
        )
    })?;
    Ok((face, side))
}

/// Parse a gluing file. Pairings keep their declaration order.
pub fn parse_spec(text: &str) -> Result<GluingSpec, ParseError> {
    let mut face_count: Option<usize> = None;
    let mut pairings = Vec::new();
    let mut seen: Vec<Option<usize>> = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match head {
            "faces" => {
                if face_count.is_some() {
                    return Err(syntax(line, col, "duplicate `faces` declaration"));
                }
                if toks.len() != 2 {
                    return Err(syntax(line, col, "expected `faces <n>`"));
                }
                let (c, t) = toks[1];
                let n = t
                    .parse::<usize>()
                    .map_err(|_| syntax(line, c, format!("bad face count `{t}`")))?;
                if n == 0 {
                    return Err(ParseError::Invalid {
                        line,
                        source: SpecError::NoFaces,
                    });
                }
                face_count = Some(n);
                seen = vec![None; 3 * n];
            }
            "glue" => {
                let Some(n) = face_count else {
                    return Err(syntax(line, col, "`glue` before `faces`"));
                };
                if toks.len() != 4 {
                    return Err(syntax(
                        line,
                        col,
                        "expected `glue <i>.<e> <j>.<f> <keep|flip>`",
                    ));
                }
                let mut sides = [SideRef::new(0, 0); 2];
                for (slot, &(c, t)) in sides.iter_mut().zip(&toks[1..3]) {
                    let (face, side) = parse_side(t, line, c)?;
                    if face == 0 || face > n {
                        return Err(ParseError::Invalid {
                            line,
                            source: SpecError::FaceOutOfRange {
                                face,
                                face_count: n,
                            },
                        });
                    }
                    if !(1..=3).contains(&side) {
                        return Err(ParseError::Invalid {
                            line,
                            source: SpecError::SideOutOfRange { side },
                        });
                    }
                    *slot = SideRef::new(face - 1, (side - 1) as u8);
                }
                let (c, t) = toks[3];
                let orientation = t
                    .parse::<Orientation>()
                    .map_err(|_| syntax(line, c, format!("expected keep or flip, found `{t}`")))?;
                let [a, b] = sides;
                if a == b {
                    return Err(ParseError::Invalid {
                        line,
                        source: SpecError::SelfGluedSide(a),
                    });
                }
                for s in sides {
                    if seen[s.index()].replace(line).is_some() {
                        return Err(ParseError::Invalid {
                            line,
                            source: SpecError::DuplicateSide(s),
                        });
                    }
                }
                pairings.push(Pairing::new(a, b, orientation));
            }
            other => return Err(syntax(line, col, format!("unknown directive `{other}`"))),
        }
    }

    let n = face_count.ok_or_else(|| syntax(1, 1, "missing `faces <n>` declaration"))?;
    GluingSpec::new(n, pairings).map_err(|source| ParseError::Invalid { line: 0, source })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("side {0} is not glued to anything; the surface is not closed")]
    UnpairedSide(SideRef),
    #[error("vertex at corner {corner} has a link made of {circles} circles")]
    NonSurfaceLink { corner: Corner, circles: usize },
    #[error("gluing has {components} connected components")]
    Disconnected { components: usize },
}

/// Quotient vertex, numbered by the smallest corner in its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexId(pub usize);

/// Quotient edge, numbered by the smallest side in its class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EdgeId(pub usize);

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// A validated gluing. Immutable; safe to share across threads.
#[derive(Debug, Clone)]
pub struct Triangulation {
    spec: GluingSpec,
    partner: Vec<(SideRef, Orientation)>,
    corner_vertex: Vec<VertexId>,
    side_edge: Vec<EdgeId>,
    vertex_members: Vec<Vec<Corner>>,
    edge_members: Vec<[SideRef; 2]>,
    euler_char: i64,
}

impl PartialEq for Triangulation {
    fn eq(&self, other: &Self) -> bool {
        self.spec.canonical() == other.spec.canonical()
    }
}

impl Triangulation {
    pub fn spec(&self) -> &GluingSpec {
        &self.spec
    }

    pub fn face_count(&self) -> usize {
        self.spec.face_count
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_members.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_members.len()
    }

    pub fn euler_char(&self) -> i64 {
        self.euler_char
    }

    pub fn vertices(&self) -> impl ExactSizeIterator<Item = VertexId> {
        (0..self.vertex_count()).map(VertexId)
    }

    pub fn edges(&self) -> impl ExactSizeIterator<Item = EdgeId> {
        (0..self.edge_count()).map(EdgeId)
    }

    /// The side glued to `s` and the orientation of that identification.
    pub fn partner(&self, s: SideRef) -> (SideRef, Orientation) {
        self.partner[s.index()]
    }

    pub fn side_partner(&self, s: SideRef) -> SideRef {
        self.partner(s).0
    }

    /// Vertex class of a corner.
    pub fn orbit_of_corner(&self, c: Corner) -> VertexId {
        self.corner_vertex[c.index()]
    }

    /// Edge class of a side.
    pub fn orbit_of_side(&self, s: SideRef) -> EdgeId {
        self.side_edge[s.index()]
    }

    /// Corners identified to vertex `v`, sorted.
    pub fn vertex_corners(&self, v: VertexId) -> &[Corner] {
        &self.vertex_members[v.0]
    }

    /// The two sides forming edge `e`, smaller first.
    pub fn edge_sides(&self, e: EdgeId) -> [SideRef; 2] {
        self.edge_members[e.0]
    }

    /// Image of an endpoint of side `s` under the gluing map onto its partner.
    pub fn map_endpoint(&self, s: SideRef, c: Corner) -> Corner {
        let (t, o) = self.partner(s);
        let at_start = c == s.start();
        debug_assert!(at_start || c == s.end());
        if at_start == o.starts_match() {
            t.start()
        } else {
            t.end()
        }
    }

    /// Edge classes of the three sides of a face, indexed by side.
    pub fn face_edges(&self, face: usize) -> [EdgeId; 3] {
        [0u8, 1, 2].map(|k| self.orbit_of_side(SideRef::new(face, k)))
    }

    /// Vertex classes of the three corners of a face, indexed by corner.
    pub fn face_vertices(&self, face: usize) -> [VertexId; 3] {
        [0u8, 1, 2].map(|k| self.orbit_of_corner(Corner::new(face, k)))
    }
}

/// Validate a gluing: closedness, vertex links, connectivity; enumerate quotient classes.
pub fn validate(spec: &GluingSpec) -> Result<Triangulation, ValidationError> {
    let n = spec.face_count;
    let sides = 3 * n;
    let mut partner: Vec<Option<(SideRef, Orientation)>> = vec![None; sides];
    for p in &spec.pairings {
        partner[p.a.index()] = Some((p.b, p.orientation));
        partner[p.b.index()] = Some((p.a, p.orientation));
    }
    let partner: Vec<(SideRef, Orientation)> = partner
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or(ValidationError::UnpairedSide(SideRef::from_index(i))))
        .collect::<Result<_, _>>()?;

    let mut faces = UnionFind::new(n);
    for p in &spec.pairings {
        faces.union(p.a.face, p.b.face);
    }
    let components = (0..n).filter(|&f| faces.find(f) == f).count();
    if components != 1 {
        return Err(ValidationError::Disconnected { components });
    }

    let mut tri = Triangulation {
        spec: spec.clone(),
        partner,
        corner_vertex: Vec::new(),
        side_edge: Vec::new(),
        vertex_members: Vec::new(),
        edge_members: Vec::new(),
        euler_char: 0,
    };

    // Corner classes from side-endpoint identifications.
    let mut corners = UnionFind::new(sides);
    for i in 0..sides {
        let s = SideRef::from_index(i);
        for c in [s.start(), s.end()] {
            corners.union(c.index(), tri.map_endpoint(s, c).index());
        }
    }
    // Roots are class minima, so scanning corners in order numbers classes by smallest member.
    let mut root_id = vec![usize::MAX; sides];
    for i in 0..sides {
        let r = corners.find(i);
        if root_id[r] == usize::MAX {
            root_id[r] = tri.vertex_members.len();
            tri.vertex_members.push(Vec::new());
        }
        tri.vertex_members[root_id[r]].push(Corner::from_index(i));
        tri.corner_vertex.push(VertexId(root_id[r]));
    }

    for i in 0..sides {
        let s = SideRef::from_index(i);
        let t = tri.partner[i].0;
        if s < t {
            tri.side_edge.push(EdgeId(tri.edge_members.len()));
            tri.edge_members.push([s, t]);
        } else {
            let e = tri.side_edge[t.index()];
            tri.side_edge.push(e);
        }
    }

    check_links(&tri)?;

    let v = tri.vertex_count() as i64;
    let e = tri.edge_count() as i64;
    tri.euler_char = v - e + n as i64;
    Ok(tri)
}

/// Each vertex link must be a single circle.
///
/// A flag is a corner together with one of its two incident sides. Rotating
/// around the vertex maps a flag to the flag reached by leaving through the
/// other incident side; its cycles, paired with their reversals, are the link
/// circles.
fn check_links(tri: &Triangulation) -> Result<(), ValidationError> {
    let corners = 3 * tri.face_count();
    let flag_index = |c: Corner, s: SideRef| -> usize {
        let slot = usize::from(c.incident_sides()[1] == s);
        2 * c.index() + slot
    };
    let step = |c: Corner, s: SideRef| -> (Corner, SideRef) {
        let [s0, s1] = c.incident_sides();
        let out = if s == s0 { s1 } else { s0 };
        (tri.map_endpoint(out, c), tri.side_partner(out))
    };

    let mut cycle = vec![usize::MAX; 2 * corners];
    let mut cycles = 0;
    for i in 0..corners {
        let c = Corner::from_index(i);
        for s in c.incident_sides() {
            if cycle[flag_index(c, s)] != usize::MAX {
                continue;
            }
            let (mut cc, mut ss) = (c, s);
            while cycle[flag_index(cc, ss)] == usize::MAX {
                cycle[flag_index(cc, ss)] = cycles;
                (cc, ss) = step(cc, ss);
            }
            cycles += 1;
        }
    }

    let mut circles = UnionFind::new(cycles);
    for i in 0..corners {
        circles.union(cycle[2 * i], cycle[2 * i + 1]);
    }
    for members in &tri.vertex_members {
        let distinct: BTreeSet<usize> = members
            .iter()
            .map(|c| circles.find(cycle[2 * c.index()]))
            .collect();
        if distinct.len() > 1 {
            return Err(ValidationError::NonSurfaceLink {
                corner: members[0],
                circles: distinct.len(),
            });
        }
    }
    Ok(())
}

/// Euler characteristic `|V| - |E| + |F|`.
///
/// Panics if the edge count identity `|E| = 3|V| - 3 chi` fails, which would
/// mean the class enumeration is broken.
pub fn euler_characteristic(tri: &Triangulation) -> i64 {
    let chi = tri.euler_char;
    let v = tri.vertex_count() as i64;
    let e = tri.edge_count() as i64;
    assert_eq!(chi, v - e + tri.face_count() as i64);
    assert_eq!(e, 3 * v - 3 * chi, "edge count identity violated");
    chi
}
