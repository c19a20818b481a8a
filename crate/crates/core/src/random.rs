//! Seeded generators of random inputs for property checks and the self-test.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::intlat::IntMatrix;
use crate::manifold::{GluingEdge, GluingMatrix, ManifoldExpr, Piece, Plumbing, Slot};

pub fn matrix<R: Rng>(rng: &mut R, max_dim: usize, bound: i64) -> IntMatrix {
    let rows = rng.gen_range(1..=max_dim);
    let cols = rng.gen_range(1..=max_dim);
    let data = (0..rows * cols)
        .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
        .collect();
    IntMatrix::new(rows, cols, data).expect("sized")
}

/// Uniform over 2×2 matrices with entries in `[-bound, bound]` and `|det| = 1`.
pub fn unimodular_2x2<R: Rng>(rng: &mut R, bound: i64) -> GluingMatrix {
    loop {
        let m = GluingMatrix::from_row_major([(); 4].map(|_| rng.gen_range(-bound..=bound)));
        if m.determinant().abs() == 1 {
            return m;
        }
    }
}

/// Random closed connected plumbing with at most `max_pieces` pieces: a random
/// spanning tree plus a few extra edges (possibly loops), boundary counts set
/// to the resulting degrees.
pub fn plumbing<R: Rng>(rng: &mut R, max_pieces: usize, bound: i64) -> ManifoldExpr {
    let n = rng.gen_range(1..=max_pieces);
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|i| (rng.gen_range(0..i), i)).collect();
    let extra = if n == 1 {
        rng.gen_range(1..=2)
    } else {
        rng.gen_range(0..=2)
    };
    for _ in 0..extra {
        pairs.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    pairs.shuffle(rng);
    let mut degree = vec![0u32; n];
    let mut edges = Vec::with_capacity(pairs.len());
    for (a, b) in pairs {
        degree[a] += 1;
        let from = Slot {
            piece: a,
            boundary: degree[a],
        };
        degree[b] += 1;
        let to = Slot {
            piece: b,
            boundary: degree[b],
        };
        edges.push(GluingEdge {
            from,
            to,
            matrix: unimodular_2x2(rng, bound),
        });
    }
    let pieces = degree
        .iter()
        .enumerate()
        .map(|(i, &b)| Piece {
            name: format!("p{i}"),
            genus: rng.gen_range(0..=2),
            boundary_count: b,
        })
        .collect();
    ManifoldExpr::Plumbed(Plumbing::new(pieces, edges).expect("generated plumbing is closed"))
}

/// Connected sum of `1..=max_parts` circle bundles over the sphere.
pub fn sphere_bundle_sum<R: Rng>(rng: &mut R, max_parts: usize, max_euler: i64) -> ManifoldExpr {
    let parts = rng.gen_range(1..=max_parts);
    let parts = (0..parts)
        .map(|_| ManifoldExpr::bundle(0, rng.gen_range(-max_euler..=max_euler)))
        .collect();
    ManifoldExpr::sum(parts).expect("nonempty")
}

/// Bundle, sum or plumbing, nested up to `depth`.
pub fn expr<R: Rng>(rng: &mut R, depth: u32) -> ManifoldExpr {
    match rng.gen_range(0..if depth == 0 { 2 } else { 3 }) {
        0 => ManifoldExpr::bundle(rng.gen_range(0..=3), rng.gen_range(-12..=12)),
        1 => plumbing(rng, 4, 5),
        _ => {
            let k = rng.gen_range(2..=3);
            ManifoldExpr::sum((0..k).map(|_| expr(rng, depth - 1)).collect()).expect("nonempty")
        }
    }
}
