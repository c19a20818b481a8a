//! Genus-zero representation graphs: one vertex per circle-bundle piece, one
//! edge per gluing torus. A tree-shaped graph is a witness for a directed
//! round fold map; failing to build one proves nothing.

use serde::{Deserialize, Serialize};

use super::ManifoldExpr;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepVertex {
    pub label: String,
    pub genus: u32,
    pub boundary_count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationGraph {
    vertices: Vec<RepVertex>,
    edges: Vec<(usize, usize)>,
    all_genus_zero: bool,
}

impl RepresentationGraph {
    fn new(vertices: Vec<RepVertex>, edges: Vec<(usize, usize)>) -> Self {
        let all_genus_zero = vertices.iter().all(|v| v.genus == 0);
        Self {
            vertices,
            edges,
            all_genus_zero,
        }
    }

    pub fn vertices(&self) -> &[RepVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn all_genus_zero(&self) -> bool {
        self.all_genus_zero
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        if n == 0 {
            return false;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = n;
        for &(a, b) in &self.edges {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components == 1
    }

    /// Connected with `|E| = |V| − 1`.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && self.edges.len() + 1 == self.vertices.len()
    }

    /// Every edge joins two distinct vertices and degrees match boundary counts.
    pub fn is_well_formed(&self) -> bool {
        let mut degree = vec![0u32; self.vertices.len()];
        for &(a, b) in &self.edges {
            if a == b || a >= degree.len() || b >= degree.len() {
                return false;
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        degree
            .iter()
            .zip(&self.vertices)
            .all(|(d, v)| *d == v.boundary_count)
    }
}

struct Builder {
    vertices: Vec<RepVertex>,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn vertex(&mut self, label: String, genus: u32) -> usize {
        self.vertices.push(RepVertex {
            label,
            genus,
            boundary_count: 0,
        });
        self.vertices.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.vertices[a].boundary_count += 1;
        self.vertices[b].boundary_count += 1;
        self.edges.push((a, b));
    }

    /// Adds the tree for `m`, returning the vertex later summands attach to.
    fn add(&mut self, m: &ManifoldExpr, prefix: &str) -> Option<usize> {
        match m {
            ManifoldExpr::Bundle { genus: 0, .. } => {
                let a = self.vertex(format!("{prefix}disk1"), 0);
                let b = self.vertex(format!("{prefix}disk2"), 0);
                self.edge(a, b);
                Some(b)
            }
            ManifoldExpr::Bundle { .. } => None,
            ManifoldExpr::Sum { parts } => {
                let mut prev = None;
                for (i, part) in parts.iter().enumerate() {
                    let anchor = self.add(part, &format!("{prefix}s{}.", i + 1))?;
                    if let Some(prev) = prev {
                        let j = self.vertex(format!("{prefix}junction{i}"), 0);
                        self.edge(prev, j);
                        self.edge(j, anchor);
                    }
                    prev = Some(anchor);
                }
                prev
            }
            ManifoldExpr::Plumbed(p) => {
                let eligible = p
                    .pieces()
                    .iter()
                    .all(|pc| pc.genus == 0 && pc.boundary_count <= 3)
                    && p.graph_betti() == 0;
                if !eligible {
                    return None;
                }
                let base = self.vertices.len();
                for pc in p.pieces() {
                    self.vertex(format!("{prefix}{}", pc.name), 0);
                }
                for e in p.edges() {
                    self.edge(base + e.from.piece, base + e.to.piece);
                }
                Some(base + p.pieces().len() - 1)
            }
        }
    }
}

/// A genus-zero tree representation of `m`, when one of the implemented
/// constructions applies:
///
/// * `bundle(0, e)` is two solid tori glued along their boundary;
/// * a connected sum of representable parts joins consecutive part trees
///   through an extra genus-zero vertex;
/// * a plumbing of disks and pairs of pants whose graph is already a tree is
///   its own representation.
///
/// `None` means undecided.
pub fn canonical_representation(m: &ManifoldExpr) -> Option<RepresentationGraph> {
    let mut b = Builder {
        vertices: Vec::new(),
        edges: Vec::new(),
    };
    b.add(m, "")?;
    Some(RepresentationGraph::new(b.vertices, b.edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{lower_bundle, parse};

    #[test]
    fn sphere_bundle_is_an_edge() {
        let g = canonical_representation(&ManifoldExpr::bundle(0, 7)).unwrap();
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.edges().len(), 1);
        assert!(g.all_genus_zero() && g.is_tree() && g.is_well_formed());
    }

    #[test]
    fn two_part_sum_has_five_vertices() {
        let m = parse("sum(bundle(0,0), bundle(0,5))").unwrap();
        let g = canonical_representation(&m).unwrap();
        assert_eq!(g.vertices().len(), 5);
        assert_eq!(g.edges().len(), g.vertices().len() - 1);
        assert!(g.is_tree() && g.all_genus_zero() && g.is_well_formed());
    }

    #[test]
    fn nested_sum() {
        let m = parse("sum(bundle(0,1), sum(bundle(0,2), bundle(0,3)), bundle(0,0))").unwrap();
        let g = canonical_representation(&m).unwrap();
        assert_eq!(g.vertices().len(), 4 * 2 + 3);
        assert!(g.is_tree() && g.is_well_formed());
    }

    #[test]
    fn positive_genus_is_undecided() {
        assert!(canonical_representation(&ManifoldExpr::bundle(1, 2)).is_none());
        let m = parse("sum(bundle(0,0), bundle(1,0))").unwrap();
        assert!(canonical_representation(&m).is_none());
        assert!(canonical_representation(&lower_bundle(1, 3)).is_none());
    }

    #[test]
    fn tree_plumbings_of_disks_and_pants() {
        let g = canonical_representation(&lower_bundle(0, 4)).unwrap();
        assert!(g.is_tree() && g.vertices().len() == 2);

        let m = parse(
            "plumb{ piece p(0,3); piece a(0,1); piece b(0,1); piece c(0,1);
               edge p.1-a.1 [1 2 0 1]; edge p.2-b.1 [0 1 -1 0]; edge p.3-c.1 [1 0 0 1]; }",
        )
        .unwrap();
        assert!(canonical_representation(&m).unwrap().is_tree());

        // a cycle is not a witness
        let cyc = parse(
            "plumb{ piece a(0,2); piece b(0,2); edge a.1-b.1 [1 0 0 1]; edge a.2-b.2 [1 0 0 1]; }",
        )
        .unwrap();
        assert!(canonical_representation(&cyc).is_none());
    }
}
