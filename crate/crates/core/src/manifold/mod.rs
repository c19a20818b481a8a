//! Graph-manifold descriptions.
//!
//! A [`ManifoldExpr`] is a circle bundle over a closed orientable surface, a
//! connected sum, or a plumbing of trivial circle bundles over compact
//! surfaces glued along their boundary tori.
//!
//! Boundary tori carry the basis `(∂, f)`: the boundary curve of the base
//! surface and the circle fiber. A [`GluingMatrix`] `[[a, b], [c, d]]` sends the
//! source basis to the target basis row by row: `∂ ↦ a∂' + bf'` and
//! `f ↦ c∂' + df'`. Orientability of the glued result is assumed, only
//! `|det| = 1` is checked.

mod parse;
mod representation;

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use thiserror::Error;

use crate::intlat::IntMatrix;

pub use parse::{parse, ParseError};
pub use representation::{canonical_representation, RepVertex, RepresentationGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ManifoldError {
    #[error("a connected sum needs at least one part")]
    EmptySum,
    #[error("piece `{name}` must have at least one boundary torus")]
    NoBoundary { name: String },
    #[error("piece name `{0}` is used twice")]
    DuplicatePiece(String),
    #[error(
        "edge {edge} uses boundary {boundary} of piece `{piece}`, which has {count} boundary tori"
    )]
    BoundaryOutOfRange {
        edge: usize,
        piece: String,
        boundary: u32,
        count: u32,
    },
    #[error("edge {edge} reuses boundary slot {piece}.{boundary}")]
    DuplicateSlot {
        edge: usize,
        piece: String,
        boundary: u32,
    },
    #[error("boundary slot {piece}.{boundary} is not glued to anything")]
    UnmatchedSlot { piece: String, boundary: u32 },
    #[error("edge {edge} has gluing matrix with determinant {det}, expected ±1")]
    BadGluing { edge: usize, det: i128 },
    #[error("plumbing is disconnected")]
    Disconnected,
    #[error("plumbing has no pieces")]
    NoPieces,
}

/// 2×2 integer matrix in the `(∂, f)` basis, rows are images of source basis vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GluingMatrix(pub [[i64; 2]; 2]);

impl GluingMatrix {
    pub const IDENTITY: Self = Self([[1, 0], [0, 1]]);

    pub fn from_row_major(e: [i64; 4]) -> Self {
        Self([[e[0], e[1]], [e[2], e[3]]])
    }

    pub fn row_major(&self) -> [i64; 4] {
        let [[a, b], [c, d]] = self.0;
        [a, b, c, d]
    }

    pub fn determinant(&self) -> i128 {
        let [[a, b], [c, d]] = self.0;
        a as i128 * d as i128 - b as i128 * c as i128
    }

    /// Image of the source class `x∂ + yf` in the target basis.
    pub fn apply(&self, (x, y): (i64, i64)) -> (i64, i64) {
        let [[a, b], [c, d]] = self.0;
        (x * a + y * c, x * b + y * d)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let (l, r) = (self.0, other.0);
        let mut out = [[0i64; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = l[i][0] * r[0][j] + l[i][1] * r[1][j];
            }
        }
        Self(out)
    }

    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::from_i64(2, 2, &self.row_major()).expect("2x2")
    }
}

impl fmt::Display for GluingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.row_major();
        write!(f, "[{a} {b} {c} {d}]")
    }
}

/// Fiber-preserving mapping class of the boundary torus: `∂ ↦ ∂ + j·f`, `f ↦ f`.
pub fn twist_matrix(j: i64) -> GluingMatrix {
    GluingMatrix([[1, j], [0, 1]])
}

/// Trivial circle bundle over the surface of genus `genus` with
/// `boundary_count` boundary circles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Piece {
    pub name: String,
    pub genus: u32,
    pub boundary_count: u32,
}

impl Piece {
    /// Rank of the free group `H₁`: `2g` surface classes, `b − 1` independent
    /// boundary classes and the fiber.
    pub fn h1_rank(&self) -> usize {
        2 * self.genus as usize + self.boundary_count as usize
    }
}

/// Boundary torus `boundary` (1-based) of piece index `piece`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub piece: usize,
    pub boundary: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GluingEdge {
    pub from: Slot,
    pub to: Slot,
    pub matrix: GluingMatrix,
}

/// Closed, connected plumbing; construct through [`Plumbing::new`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Plumbing {
    pieces: Vec<Piece>,
    edges: Vec<GluingEdge>,
}

impl Plumbing {
    pub fn new(pieces: Vec<Piece>, edges: Vec<GluingEdge>) -> Result<Self, ManifoldError> {
        if pieces.is_empty() {
            return Err(ManifoldError::NoPieces);
        }
        let mut names = HashSet::new();
        for p in &pieces {
            if p.boundary_count == 0 {
                return Err(ManifoldError::NoBoundary {
                    name: p.name.clone(),
                });
            }
            if !names.insert(p.name.as_str()) {
                return Err(ManifoldError::DuplicatePiece(p.name.clone()));
            }
        }
        let mut used = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            for s in [e.from, e.to] {
                let piece = pieces.get(s.piece).ok_or(ManifoldError::NoPieces)?;
                if s.boundary == 0 || s.boundary > piece.boundary_count {
                    return Err(ManifoldError::BoundaryOutOfRange {
                        edge: i,
                        piece: piece.name.clone(),
                        boundary: s.boundary,
                        count: piece.boundary_count,
                    });
                }
                if !used.insert(s) {
                    return Err(ManifoldError::DuplicateSlot {
                        edge: i,
                        piece: piece.name.clone(),
                        boundary: s.boundary,
                    });
                }
            }
            let det = e.matrix.determinant();
            if det.abs() != 1 {
                return Err(ManifoldError::BadGluing { edge: i, det });
            }
        }
        for (pi, p) in pieces.iter().enumerate() {
            for boundary in 1..=p.boundary_count {
                if !used.contains(&Slot {
                    piece: pi,
                    boundary,
                }) {
                    return Err(ManifoldError::UnmatchedSlot {
                        piece: p.name.clone(),
                        boundary,
                    });
                }
            }
        }
        let plumbing = Self { pieces, edges };
        if !plumbing.is_connected() {
            return Err(ManifoldError::Disconnected);
        }
        Ok(plumbing)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn edges(&self) -> &[GluingEdge] {
        &self.edges
    }

    /// First Betti number of the piece/edge graph.
    pub fn graph_betti(&self) -> usize {
        self.edges.len() + 1 - self.pieces.len()
    }

    fn is_connected(&self) -> bool {
        let n = self.pieces.len();
        let mut adj = vec![Vec::new(); n];
        for e in &self.edges {
            adj[e.from.piece].push(e.to.piece);
            adj[e.to.piece].push(e.from.piece);
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ManifoldExpr {
    /// Circle bundle of Euler number `euler` over the closed surface of genus `genus`.
    Bundle {
        genus: u32,
        euler: i64,
    },
    /// Connected sum of at least two parts.
    Sum {
        parts: Vec<ManifoldExpr>,
    },
    Plumbed(Plumbing),
}

impl ManifoldExpr {
    pub fn bundle(genus: u32, euler: i64) -> Self {
        Self::Bundle { genus, euler }
    }

    /// Connected sum; a single part is returned unchanged.
    pub fn sum(mut parts: Vec<ManifoldExpr>) -> Result<Self, ManifoldError> {
        match parts.len() {
            0 => Err(ManifoldError::EmptySum),
            1 => Ok(parts.pop().expect("one part")),
            _ => Ok(Self::Sum { parts }),
        }
    }

    /// DSL text that parses back to `self`.
    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn euler_of_bundle(&self) -> Option<(u32, i64)> {
        match self {
            Self::Bundle { genus, euler } => Some((*genus, *euler)),
            _ => None,
        }
    }
}

impl fmt::Display for ManifoldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Bundle { genus, euler } => write!(f, "bundle({genus},{euler})"),
            Self::Sum { parts } => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Self::Plumbed(p) => {
                write!(f, "plumb{{")?;
                for piece in &p.pieces {
                    write!(
                        f,
                        " piece {}({},{});",
                        piece.name, piece.genus, piece.boundary_count
                    )?;
                }
                for e in &p.edges {
                    write!(
                        f,
                        " edge {}.{}-{}.{} {};",
                        p.pieces[e.from.piece].name,
                        e.from.boundary,
                        p.pieces[e.to.piece].name,
                        e.to.boundary,
                        e.matrix
                    )?;
                }
                write!(f, " }}")
            }
        }
    }
}

/// Plumbed form of `bundle(genus, euler)`: the surface with one disk removed,
/// times the circle, glued to a solid torus by `twist_matrix(euler)`.
pub fn lower_bundle(genus: u32, euler: i64) -> ManifoldExpr {
    let pieces = vec![
        Piece {
            name: "a".into(),
            genus,
            boundary_count: 1,
        },
        Piece {
            name: "b".into(),
            genus: 0,
            boundary_count: 1,
        },
    ];
    let edges = vec![GluingEdge {
        from: Slot {
            piece: 0,
            boundary: 1,
        },
        to: Slot {
            piece: 1,
            boundary: 1,
        },
        matrix: twist_matrix(euler),
    }];
    ManifoldExpr::Plumbed(Plumbing::new(pieces, edges).expect("two glued pieces are closed"))
}
