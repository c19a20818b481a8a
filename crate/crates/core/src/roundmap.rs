//! Directed round fold maps into the plane, as combinatorial level schedules.
//!
//! The singular set of a round fold map is a family of concentric circles at
//! radii `1..=L`; in the dimension pair (3, 2) every fold has index 0 or 1.
//! Between consecutive circles the regular fiber is a disjoint union of
//! circles whose number changes by one across each singular circle.
//!
//! A directed map with `l` summands has `l + 1` singular circles: index 1 at
//! radii `1..=l` and index 0 at the outermost radius `l + 1`. The fiber counts
//! read `l + 1, l, …, 1` from the inner disk outward, and the source manifold
//! is the connected sum of the circle bundles over the sphere with Euler
//! numbers attached to the index-1 circles.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cupring::{cup_form, H2Element};
use crate::homology::homology;
use crate::intlat::{CoefficientRing, FgAbelianGroup};
use crate::manifold::{canonical_representation, ManifoldExpr, RepresentationGraph};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoundMapError {
    #[error("a directed round fold map needs at least one summand")]
    NoSummands,
    #[error("expected {expected} Euler numbers, got {found}")]
    TwistCount { expected: usize, found: usize },
    #[error("malformed description: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularCircle {
    pub radius: u32,
    pub index: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundMapDescription {
    circles: Vec<SingularCircle>,
    /// Fiber-circle counts: `counts[0]` over the inner disk, `counts[r]` over
    /// the annulus between radii `r` and `r + 1`. Zero beyond the last circle.
    counts: Vec<u32>,
    /// Euler numbers attached to the index-1 circles, innermost first.
    twists: Option<Vec<i64>>,
}

fn malformed(msg: impl Into<String>) -> RoundMapError {
    RoundMapError::Malformed(msg.into())
}

impl RoundMapDescription {
    pub fn new(
        circles: Vec<SingularCircle>,
        counts: Vec<u32>,
        twists: Option<Vec<i64>>,
    ) -> Result<Self, RoundMapError> {
        let l = circles.len();
        if l == 0 {
            return Err(malformed("no singular circles"));
        }
        for (i, c) in circles.iter().enumerate() {
            if c.radius as usize != i + 1 {
                return Err(malformed(format!(
                    "circle {} has radius {}, expected {}",
                    i + 1,
                    c.radius,
                    i + 1
                )));
            }
            if c.index > 1 {
                return Err(malformed(format!(
                    "fold index {} at radius {} exceeds 1",
                    c.index, c.radius
                )));
            }
        }
        if circles[l - 1].index != 0 {
            return Err(malformed("outermost circle must have index 0"));
        }
        if counts.len() != l {
            return Err(malformed(format!(
                "{} region counts for {l} circles",
                counts.len()
            )));
        }
        let outside = counts.iter().skip(1).chain(std::iter::once(&0));
        if let Some(r) = counts
            .iter()
            .zip(outside)
            .position(|(inner, outer)| inner.abs_diff(*outer) != 1)
        {
            return Err(malformed(format!(
                "fiber count does not change by one across radius {}",
                r + 1
            )));
        }
        if let Some(t) = &twists {
            let index_one = circles.iter().filter(|c| c.index == 1).count();
            if t.len() != index_one {
                return Err(RoundMapError::TwistCount {
                    expected: index_one,
                    found: t.len(),
                });
            }
        }
        Ok(Self {
            circles,
            counts,
            twists,
        })
    }

    /// The map with a single singular circle: the standard projection of the sphere.
    pub fn sphere() -> Self {
        Self::new(
            vec![SingularCircle {
                radius: 1,
                index: 0,
            }],
            vec![1],
            None,
        )
        .expect("valid")
    }

    pub fn circles(&self) -> &[SingularCircle] {
        &self.circles
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn twists(&self) -> Option<&[i64]> {
        self.twists.as_deref()
    }

    /// Number of connected-sum summands when this has the directed standard shape.
    fn summands(&self) -> Option<usize> {
        let big_l = self.circles.len();
        let l = big_l.checked_sub(1).filter(|&l| l >= 1)?;
        let shape = self.circles[..l].iter().all(|c| c.index == 1)
            && self
                .counts
                .iter()
                .enumerate()
                .all(|(r, &c)| c as usize == big_l - r);
        (shape && self.twists.as_ref().is_some_and(|t| t.len() == l)).then_some(l)
    }
}

impl fmt::Display for RoundMapDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let circles: Vec<String> = self
            .circles
            .iter()
            .map(|c| format!("r{}:i{}", c.radius, c.index))
            .collect();
        write!(
            f,
            "circles [{}] counts {:?}",
            circles.join(" "),
            self.counts
        )?;
        if let Some(t) = &self.twists {
            write!(f, " twists {t:?}")?;
        }
        Ok(())
    }
}

/// Level schedule of the directed round fold map on the connected sum of `l`
/// circle bundles over the sphere with the given Euler numbers.
pub fn directed_standard(l: usize, eulers: &[i64]) -> Result<RoundMapDescription, RoundMapError> {
    if l < 1 {
        return Err(RoundMapError::NoSummands);
    }
    if eulers.len() != l {
        return Err(RoundMapError::TwistCount {
            expected: l,
            found: eulers.len(),
        });
    }
    let circles = (1..=l as u32 + 1)
        .map(|radius| SingularCircle {
            radius,
            index: u8::from(radius <= l as u32),
        })
        .collect();
    let counts = (0..=l).map(|r| (l + 1 - r) as u32).collect();
    RoundMapDescription::new(circles, counts, Some(eulers.to_vec()))
}

/// Source manifold of a directed description; the single-circle map gives
/// the 3-sphere, written `bundle(0,1)`.
pub fn manifold_of(d: &RoundMapDescription) -> Result<ManifoldExpr, RoundMapError> {
    if sphere_check(d) {
        return Ok(ManifoldExpr::bundle(0, 1));
    }
    let l = d
        .summands()
        .ok_or_else(|| malformed("not a directed standard schedule"))?;
    let eulers = &d.twists.as_ref().expect("checked by summands")[..l];
    ManifoldExpr::sum(eulers.iter().map(|&e| ManifoldExpr::bundle(0, e)).collect())
        .map_err(|e| malformed(e.to_string()))
}

/// A connected singular set forces the source to be a homotopy sphere, which
/// in dimension 3 is the sphere.
pub fn sphere_check(d: &RoundMapDescription) -> bool {
    d.circles.len() == 1
}

/// Homology `H₀, H₁, H₂` of the Reeb space: a bouquet of `l` 2-spheres, or a
/// disk in the single-circle case.
pub fn reeb_homology(d: &RoundMapDescription) -> Result<[FgAbelianGroup; 3], RoundMapError> {
    let spheres = if sphere_check(d) {
        0
    } else {
        d.summands()
            .ok_or_else(|| malformed("not a directed standard schedule"))?
    };
    Ok([
        FgAbelianGroup::free(1),
        FgAbelianGroup::trivial(),
        FgAbelianGroup::free(spheres),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let mark = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "[{mark}] {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Rank-level consequences of the Reeb-space quotient for the source manifold
/// of a directed description.
pub fn reeb_quotient_audit(d: &RoundMapDescription) -> Result<AuditReport, RoundMapError> {
    let l = d
        .summands()
        .ok_or_else(|| malformed("not a directed standard schedule"))?;
    let m = manifold_of(d)?;
    let h = homology(&m);
    let reeb_h2 = reeb_homology(d)?[2].rank();
    let trivial = d
        .twists()
        .expect("directed")
        .iter()
        .filter(|&&e| e == 0)
        .count();
    let h2 = &h.groups[2];
    let h1_rank = h.groups[1].rank();
    let check = |name: &str, passed: bool, detail: String| AuditCheck {
        name: name.into(),
        passed,
        detail,
    };
    Ok(AuditReport {
        checks: vec![
            check("H2 free", h2.is_torsion_free(), format!("H2 = {h2}")),
            check(
                "H2 embeds in Reeb H2",
                h2.rank() <= reeb_h2 && reeb_h2 == l,
                format!("rank {} <= {reeb_h2}", h2.rank()),
            ),
            check(
                "sphere basis",
                h2.rank() == trivial,
                format!("rank {} = #trivial summands {trivial}", h2.rank()),
            ),
            check(
                "H1 free part from central fibers",
                h1_rank == trivial,
                format!("rank H1 {h1_rank} = {trivial}"),
            ),
        ],
    })
}

/// Existence of a directed round fold map: a tree witness proves it, a
/// nonzero integral cup product of degree-one classes rules it out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    AdmitsDirected {
        witness: RepresentationGraph,
    },
    NoDirected {
        left: String,
        right: String,
        value: H2Element,
    },
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::AdmitsDirected { witness } => write!(
                f,
                "admits-directed (witness: tree with {} vertices)",
                witness.vertices().len()
            ),
            Verdict::NoDirected { left, right, .. } => {
                write!(f, "no-directed (certificate: {left}∪{right} ≠ 0)")
            }
            Verdict::Unknown => write!(f, "unknown"),
        }
    }
}

pub fn classify(m: &ManifoldExpr) -> Verdict {
    if let Some(witness) = canonical_representation(m) {
        return Verdict::AdmitsDirected { witness };
    }
    if let Ok(form) = cup_form(m, CoefficientRing::Integers) {
        if let Some((i, j)) = form.nonzero_pair() {
            return Verdict::NoDirected {
                left: form.basis[i].clone(),
                right: form.basis[j].clone(),
                value: form.get(i, j).clone(),
            };
        }
    }
    Verdict::Unknown
}

/// Re-checks a verdict against `m`: witnesses must be genus-zero trees,
/// certificates must re-evaluate to the stated nonzero product.
pub fn verify_verdict(m: &ManifoldExpr, v: &Verdict) -> bool {
    match v {
        Verdict::AdmitsDirected { witness } => {
            witness.is_tree() && witness.all_genus_zero() && witness.is_well_formed()
        }
        Verdict::NoDirected { left, right, value } => {
            let Ok(form) = cup_form(m, CoefficientRing::Integers) else {
                return false;
            };
            match (form.index_of(left), form.index_of(right)) {
                (Some(i), Some(j)) => !value.is_zero() && form.get(i, j) == value,
                _ => false,
            }
        }
        Verdict::Unknown => true,
    }
}
