//! Integral homology of closed graph manifolds.
//!
//! Plumbings go through the Mayer–Vietoris sequence of the decomposition into
//! pieces. With `J` the map from the `H₁` of the gluing tori into the direct sum
//! of the pieces' `H₁`,
//!
//! ```text
//! H₁(M) ≅ coker(J) ⊕ Z^{b₁(Γ)}
//! ```
//!
//! where `Γ` is the piece/edge graph; the `Z^{b₁(Γ)}` part comes from the free
//! kernel at the `H₀` level, so the extension splits. `H₂` is the free group of
//! the same rank by duality.
//!
//! Boundary curves are oriented as boundaries of the base surface, so
//! `∂₁ + … + ∂_b = 0`. Under that convention an orientation-compatible gluing of
//! two boundary tori has determinant −1. Over a tree every gluing is orientable
//! after reorienting pieces; along graph cycles orientability is assumed and not
//! checked. Bundles and connected sums also have closed forms,
//! which serve as an independent oracle for the matrix pipeline.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::intlat::{FgAbelianGroup, IntMatrix, Quotient};
use crate::manifold::{ManifoldExpr, Plumbing, Slot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomologyError {
    #[error("expected a plumbed description")]
    NotPlumbed,
    #[error("no closed form for {0}")]
    Unsupported(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassKind {
    Surface,
    Boundary,
    Fiber,
    GraphCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    /// `H₀ … H₃` over the integers.
    pub groups: [FgAbelianGroup; 4],
    /// For each free generator of `H₁`: which kinds of classes it involves.
    pub basis_meta: Vec<BTreeSet<ClassKind>>,
}

impl HomologyProfile {
    /// Profile of a closed connected orientable 3-manifold with the given `H₁`.
    pub fn from_h1(h1: FgAbelianGroup, basis_meta: Vec<BTreeSet<ClassKind>>) -> Self {
        let h2 = FgAbelianGroup::free(h1.rank());
        Self {
            groups: [FgAbelianGroup::free(1), h1, h2, FgAbelianGroup::free(1)],
            basis_meta,
        }
    }

    pub fn h1(&self) -> &FgAbelianGroup {
        &self.groups[1]
    }

    pub fn betti(&self) -> [usize; 4] {
        [0, 1, 2, 3].map(|i| self.groups[i].rank())
    }

    /// Degreewise direct sum in degrees 1 and 2, as for a connected sum.
    pub fn connected_sum(&self, other: &Self) -> Self {
        let h1 = self.h1().direct_sum(other.h1());
        let mut meta = self.basis_meta.clone();
        meta.extend(other.basis_meta.iter().cloned());
        Self::from_h1(h1, meta)
    }

    /// Names of violated structural invariants; empty when all hold.
    pub fn violations(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let z = FgAbelianGroup::free(1);
        if self.groups[0] != z {
            out.push("H0 = Z");
        }
        if self.groups[3] != z {
            out.push("H3 = Z");
        }
        if self.groups[1].rank() != self.groups[2].rank() {
            out.push("rank H1 = rank H2");
        }
        if !self.groups[2].is_torsion_free() {
            out.push("H2 torsion-free");
        }
        let b = self.betti();
        if b[0] + b[2] != b[1] + b[3] {
            out.push("alternating rank sum 0");
        }
        if self.basis_meta.len() != self.groups[1].rank() {
            out.push("one tag per free H1 generator");
        }
        out
    }
}

impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.groups.iter().map(|g| g.to_string()).collect();
        write!(f, "({})", g.join("; "))
    }
}

/// Designated free basis of one piece's `H₁`: surface handles, the first
/// `b − 1` boundary curves, then the fiber.
struct PieceBasis {
    offset: usize,
    genus: usize,
    boundary_count: usize,
}

impl PieceBasis {
    fn fiber(&self) -> usize {
        self.offset + 2 * self.genus + self.boundary_count - 1
    }

    /// Adds `factor · [∂_boundary]` to `v`, using `∂_b = −Σ_{i<b} ∂ᵢ`.
    fn add_boundary(&self, v: &mut [BigInt], boundary: u32, factor: i64) {
        let b = self.boundary_count;
        let i = boundary as usize;
        let start = self.offset + 2 * self.genus;
        if i < b {
            v[start + i - 1] += factor;
        } else {
            for k in 0..b - 1 {
                v[start + k] -= factor;
            }
        }
    }

    fn add_fiber(&self, v: &mut [BigInt], factor: i64) {
        v[self.fiber()] += factor;
    }

    fn kinds(&self) -> impl Iterator<Item = ClassKind> {
        std::iter::repeat_n(ClassKind::Surface, 2 * self.genus)
            .chain(std::iter::repeat_n(
                ClassKind::Boundary,
                self.boundary_count - 1,
            ))
            .chain(std::iter::once(ClassKind::Fiber))
    }
}

fn bases(p: &Plumbing) -> (Vec<PieceBasis>, usize) {
    let mut offset = 0;
    let bases = p
        .pieces()
        .iter()
        .map(|pc| {
            let b = PieceBasis {
                offset,
                genus: pc.genus as usize,
                boundary_count: pc.boundary_count as usize,
            };
            offset += pc.h1_rank();
            b
        })
        .collect();
    (bases, offset)
}

/// The Mayer–Vietoris matrix: two columns per gluing torus, for its `∂` and
/// `f`, each the source inclusion minus the target inclusion of the image.
pub fn gluing_matrix(p: &Plumbing) -> IntMatrix {
    let (bases, n) = bases(p);
    let mut columns = Vec::with_capacity(2 * p.edges().len());
    for e in p.edges() {
        let Slot {
            piece: sp,
            boundary: sb,
        } = e.from;
        let Slot {
            piece: tp,
            boundary: tb,
        } = e.to;
        for (row, source_is_fiber) in [(0, false), (1, true)] {
            let mut col = vec![BigInt::zero(); n];
            if source_is_fiber {
                bases[sp].add_fiber(&mut col, 1);
            } else {
                bases[sp].add_boundary(&mut col, sb, 1);
            }
            let [to_boundary, to_fiber] = e.matrix.0[row];
            bases[tp].add_boundary(&mut col, tb, -to_boundary);
            bases[tp].add_fiber(&mut col, -to_fiber);
            columns.push(col);
        }
    }
    IntMatrix::from_columns(n, &columns).expect("columns sized to the basis")
}

/// Homology of a plumbed description by Mayer–Vietoris.
pub fn homology_mv(m: &ManifoldExpr) -> Result<HomologyProfile, HomologyError> {
    match m {
        ManifoldExpr::Plumbed(p) => Ok(homology_plumbing(p)),
        _ => Err(HomologyError::NotPlumbed),
    }
}

pub fn homology_plumbing(p: &Plumbing) -> HomologyProfile {
    let (bases, _) = bases(p);
    let kinds: Vec<ClassKind> = bases.iter().flat_map(PieceBasis::kinds).collect();
    let quotient = Quotient::new(&gluing_matrix(p));
    let mut meta: Vec<BTreeSet<ClassKind>> = quotient
        .free_generators()
        .iter()
        .map(|g| {
            g.iter()
                .zip(&kinds)
                .filter(|(x, _)| !x.is_zero())
                .map(|(_, k)| *k)
                .collect()
        })
        .collect();
    let cycles = p.graph_betti();
    meta.extend(std::iter::repeat_n(
        BTreeSet::from([ClassKind::GraphCycle]),
        cycles,
    ));
    let mut h1 = quotient.group().clone();
    h1 = h1.direct_sum(&FgAbelianGroup::free(cycles));
    HomologyProfile::from_h1(h1, meta)
}

/// Closed-form homology of bundles and connected sums of closed-form parts.
pub fn homology_closed_form(m: &ManifoldExpr) -> Result<HomologyProfile, HomologyError> {
    match m {
        ManifoldExpr::Bundle { genus, euler } => {
            let surface = 2 * *genus as usize;
            let mut meta = vec![BTreeSet::from([ClassKind::Surface]); surface];
            let h1 = if *euler == 0 {
                meta.push(BTreeSet::from([ClassKind::Fiber]));
                FgAbelianGroup::free(surface + 1)
            } else {
                FgAbelianGroup::from_cyclic(surface, [BigInt::from(*euler).abs()])
            };
            Ok(HomologyProfile::from_h1(h1, meta))
        }
        ManifoldExpr::Sum { parts } => sum_profiles(parts, homology_closed_form),
        ManifoldExpr::Plumbed(_) => Err(HomologyError::Unsupported(m.render())),
    }
}

fn sum_profiles(
    parts: &[ManifoldExpr],
    each: fn(&ManifoldExpr) -> Result<HomologyProfile, HomologyError>,
) -> Result<HomologyProfile, HomologyError> {
    let mut acc = HomologyProfile::from_h1(FgAbelianGroup::trivial(), Vec::new());
    for p in parts {
        acc = acc.connected_sum(&each(p)?);
    }
    Ok(acc)
}

/// Homology of any description: closed forms for bundles, summand-wise for
/// sums, Mayer–Vietoris for plumbings.
pub fn homology(m: &ManifoldExpr) -> HomologyProfile {
    match m {
        ManifoldExpr::Bundle { .. } => homology_closed_form(m).expect("bundles have closed forms"),
        ManifoldExpr::Sum { parts } => {
            sum_profiles(parts, |p| Ok(homology(p))).expect("infallible")
        }
        ManifoldExpr::Plumbed(p) => homology_plumbing(p),
    }
}

/// Cohomology `H⁰ … H³` over the integers: `H¹` is free of rank `b₁` and `H²`
/// picks up the torsion of `H₁`.
pub fn derived_groups(p: &HomologyProfile) -> [FgAbelianGroup; 4] {
    let r = p.h1().rank();
    [
        FgAbelianGroup::free(1),
        FgAbelianGroup::free(r),
        FgAbelianGroup::free(r).direct_sum(&p.h1().torsion_subgroup()),
        FgAbelianGroup::free(1),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{lower_bundle, parse};

    fn groups(text: &str) -> String {
        homology(&parse(text).unwrap()).to_string()
    }

    #[test]
    fn torus_bundle_by_mayer_vietoris() {
        let p = homology_mv(&lower_bundle(1, 5)).unwrap();
        assert_eq!(p.to_string(), "(Z; Z^2 + Z/5; Z^2; Z)");
        assert!(p.violations().is_empty());
        assert!(p.basis_meta.iter().all(|k| k.contains(&ClassKind::Surface)));
    }

    #[test]
    fn sphere_bundles_by_mayer_vietoris() {
        assert_eq!(
            homology_mv(&lower_bundle(0, 0)).unwrap().to_string(),
            "(Z; Z; Z; Z)"
        );
        for k in [1, -1, 2, -3, 7] {
            let p = homology_mv(&lower_bundle(0, k)).unwrap();
            assert_eq!(p.betti(), [1, 0, 0, 1]);
            assert_eq!(p.h1().order(), Some(BigInt::from(k).abs()));
        }
    }

    #[test]
    fn mv_rejects_closed_forms() {
        assert_eq!(
            homology_mv(&ManifoldExpr::bundle(0, 0)),
            Err(HomologyError::NotPlumbed)
        );
    }

    #[test]
    fn closed_forms() {
        assert_eq!(groups("bundle(1,-4)"), "(Z; Z^2 + Z/4; Z^2; Z)");
        assert_eq!(groups("bundle(0,1)"), "(Z; 0; 0; Z)");
        assert_eq!(groups("bundle(2,0)"), "(Z; Z^5; Z^5; Z)");
        assert_eq!(
            groups("sum(bundle(0,0), bundle(0,0), bundle(0,6))"),
            "(Z; Z^2 + Z/6; Z^2; Z)"
        );
        assert!(homology_closed_form(&lower_bundle(0, 1)).is_err());
    }

    #[test]
    fn sums_mix_closed_forms_and_plumbings() {
        let m = ManifoldExpr::sum(vec![lower_bundle(1, 2), ManifoldExpr::bundle(0, 3)]).unwrap();
        assert_eq!(homology(&m).to_string(), "(Z; Z^2 + Z/6; Z^2; Z)");
    }

    #[test]
    fn cohomology_by_duality() {
        let [h0, h1, h2, h3] = derived_groups(&homology(&ManifoldExpr::bundle(1, 5)));
        assert_eq!(h0, FgAbelianGroup::free(1));
        assert_eq!(h1, FgAbelianGroup::free(2));
        assert_eq!(h2, FgAbelianGroup::from_cyclic(2, [5]));
        assert_eq!(h3, FgAbelianGroup::free(1));

        let [_, h1, h2, _] = derived_groups(&homology(&ManifoldExpr::bundle(0, 1)));
        assert!(h1.is_trivial() && h2.is_trivial());

        let m = parse("sum(bundle(0,0), bundle(0,0), bundle(0,5))").unwrap();
        let [_, h1, h2, _] = derived_groups(&homology(&m));
        assert_eq!(h1, FgAbelianGroup::free(2));
        assert_eq!(h2, FgAbelianGroup::from_cyclic(2, [5]));
    }

    #[test]
    fn graph_cycle_adds_rank() {
        let ring = parse(
            "plumb{ piece a(0,2); piece b(0,2); edge a.1-b.1 [1 2 0 1]; edge a.2-b.2 [-1 0 0 1]; }",
        )
        .unwrap();
        let ManifoldExpr::Plumbed(p) = &ring else {
            unreachable!()
        };
        let h = homology(&ring);
        assert!(h.violations().is_empty());
        let cycles = h
            .basis_meta
            .iter()
            .filter(|k| k.contains(&ClassKind::GraphCycle))
            .count();
        assert_eq!(cycles, 1);
        let coker = crate::intlat::cokernel(&gluing_matrix(p));
        assert_eq!(h.h1().rank(), coker.rank() + 1);
        assert_eq!(h.h1().torsion(), coker.torsion());
    }

    #[test]
    fn self_glued_annulus_is_torus_bundle() {
        // T² × S¹: the two boundary curves of the annulus carry opposite
        // induced orientations, so the orientable identification flips ∂.
        let m = parse("plumb{ piece a(0,2); edge a.1-a.2 [-1 0 0 1]; }").unwrap();
        assert_eq!(homology(&m).to_string(), "(Z; Z^3; Z^3; Z)");
    }
}
