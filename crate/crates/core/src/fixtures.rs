//! Bundled golden complexes with their hand-derived quotient data.

use crate::gluing::{parse_spec, validate, Triangulation};
use crate::metric::{parse_lengths, EdgeLengths, FlatSurface};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler_char: i64,
}

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub glue: &'static str,
    pub lengths: &'static str,
    pub expected: Expected,
}

pub const PILLOW: Fixture = Fixture {
    name: "pillow",
    glue: include_str!("../fixtures/pillow.glue"),
    lengths: include_str!("../fixtures/pillow.len"),
    expected: Expected {
        vertices: 3,
        edges: 3,
        faces: 2,
        euler_char: 2,
    },
};

pub const TORUS: Fixture = Fixture {
    name: "torus",
    glue: include_str!("../fixtures/torus.glue"),
    lengths: include_str!("../fixtures/torus.len"),
    expected: Expected {
        vertices: 1,
        edges: 3,
        faces: 2,
        euler_char: 0,
    },
};

pub const TETRAHEDRON: Fixture = Fixture {
    name: "tetrahedron",
    glue: include_str!("../fixtures/tetra.glue"),
    lengths: include_str!("../fixtures/tetra.len"),
    expected: Expected {
        vertices: 4,
        edges: 6,
        faces: 4,
        euler_char: 2,
    },
};

pub const ALL: [Fixture; 3] = [PILLOW, TORUS, TETRAHEDRON];

impl Fixture {
    pub fn by_name(name: &str) -> Option<Fixture> {
        ALL.into_iter().find(|f| f.name == name)
    }

    pub fn triangulation(&self) -> Triangulation {
        validate(&parse_spec(self.glue).expect("bundled gluing parses"))
            .expect("bundled gluing is valid")
    }

    pub fn lengths(&self, tri: &Triangulation) -> EdgeLengths {
        parse_lengths(tri, self.lengths).expect("bundled lengths are valid")
    }

    pub fn surface(&self) -> FlatSurface {
        let tri = self.triangulation();
        let lengths = self.lengths(&tri);
        FlatSurface::new(tri, lengths).expect("bundled lengths match")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_match_expected_quotients() {
        for f in ALL {
            let t = f.triangulation();
            let got = Expected {
                vertices: t.vertex_count(),
                edges: t.edge_count(),
                faces: t.face_count(),
                euler_char: t.euler_char(),
            };
            assert_eq!(got, f.expected, "{}", f.name);
        }
    }
}
