//! Degree-one cup products `H¹ × H¹ → H²` for circle bundles over closed
//! surfaces and connected sums of them.
//!
//! For `bundle(g, e)` the basis of `H¹` is `a1, b1, …, ag, bg`, plus `phi` (the
//! fiber-dual class) when `e = 0`:
//!
//! * `e ≠ 0`: `H² = Z^{2g} ⊕ Z/|e|` and `aᵢ ∪ bᵢ = t`, the torsion generator;
//! * `e = 0`: `H² = Z^{2g+1}` with free generators `σ, μ₁, ν₁, …` and
//!   `aᵢ ∪ bᵢ = σ`, `aᵢ ∪ phi = μᵢ`, `bᵢ ∪ phi = νᵢ`.
//!
//! All other products of basis elements vanish, apart from those forced by
//! antisymmetry. In a connected sum the table is block diagonal and the basis
//! labels are prefixed with `s1.`, `s2.`, ….

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::homology::homology;
use crate::intlat::{
    subgroup_structure, CoefficientRing, FgAbelianGroup, GroupElement, IntMatrix, Quotient,
};
use crate::manifold::ManifoldExpr;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CupError {
    #[error(
        "cup products are only available for circle bundles and their connected sums, not {0}"
    )]
    Unsupported(String),
}

/// Element of `H²` in the coordinates of [`CupForm::ambient`].
pub type H2Element = GroupElement;

type Converter = Box<dyn Fn(&[BigInt]) -> H2Element>;

/// Integral form before torsion coordinates are normalized: `H²` as
/// `Z^free ⊕ ⊕ Z/cyclic[i]`, entries as raw coordinate vectors.
struct RawForm {
    basis: Vec<String>,
    free: usize,
    cyclic: Vec<BigInt>,
    table: Vec<Vec<Vec<BigInt>>>,
}

impl RawForm {
    fn new(basis: Vec<String>, free: usize, cyclic: Vec<BigInt>) -> Self {
        let n = basis.len();
        let zero = vec![BigInt::zero(); free + cyclic.len()];
        Self {
            basis,
            free,
            cyclic,
            table: vec![vec![zero; n]; n],
        }
    }

    /// Sets `u ∪ v` to the unit vector `coord` and `v ∪ u` to its negative.
    fn set_unit(&mut self, u: usize, v: usize, coord: usize) {
        self.table[u][v][coord] = BigInt::one();
        self.table[v][u][coord] = -BigInt::one();
    }

    fn bundle(genus: u32, euler: i64) -> Self {
        let g = genus as usize;
        let mut basis: Vec<String> = (1..=g)
            .flat_map(|i| [format!("a{i}"), format!("b{i}")])
            .collect();
        if euler == 0 {
            basis.push("phi".into());
            let mut f = Self::new(basis, 2 * g + 1, Vec::new());
            let phi = 2 * g;
            for i in 0..g {
                let (a, b) = (2 * i, 2 * i + 1);
                f.set_unit(a, b, 0);
                f.set_unit(a, phi, 1 + 2 * i);
                f.set_unit(b, phi, 2 + 2 * i);
            }
            f
        } else {
            let order = BigInt::from(euler).magnitude().clone().into();
            let mut f = Self::new(basis, 2 * g, vec![order]);
            for i in 0..g {
                f.set_unit(2 * i, 2 * i + 1, 2 * g);
            }
            f
        }
    }

    fn sum(parts: Vec<RawForm>) -> Self {
        let basis = parts
            .iter()
            .enumerate()
            .flat_map(|(i, p)| p.basis.iter().map(move |l| format!("s{}.{l}", i + 1)))
            .collect();
        let free: usize = parts.iter().map(|p| p.free).sum();
        let cyclic: Vec<BigInt> = parts.iter().flat_map(|p| p.cyclic.clone()).collect();
        let mut out = Self::new(basis, free, cyclic);
        let (mut row, mut free_at, mut cyc_at) = (0, 0, free);
        for p in &parts {
            let n = p.basis.len();
            for i in 0..n {
                for j in 0..n {
                    let src = &p.table[i][j];
                    let dst = &mut out.table[row + i][row + j];
                    dst[free_at..free_at + p.free].clone_from_slice(&src[..p.free]);
                    dst[cyc_at..cyc_at + p.cyclic.len()].clone_from_slice(&src[p.free..]);
                }
            }
            row += n;
            free_at += p.free;
            cyc_at += p.cyclic.len();
        }
        out
    }

    fn of(m: &ManifoldExpr) -> Result<Self, CupError> {
        match m {
            ManifoldExpr::Bundle { genus, euler } => Ok(Self::bundle(*genus, *euler)),
            ManifoldExpr::Sum { parts } => Ok(Self::sum(
                parts.iter().map(Self::of).collect::<Result<_, _>>()?,
            )),
            ManifoldExpr::Plumbed(_) => Err(CupError::Unsupported(m.render())),
        }
    }

    fn reduce(self, ring: CoefficientRing) -> CupForm {
        let Self {
            basis,
            free,
            cyclic,
            table,
        } = self;
        let (ambient, convert): (FgAbelianGroup, Converter) = match ring {
            CoefficientRing::Integers => {
                let n = free + cyclic.len();
                let relations: Vec<Vec<BigInt>> = cyclic
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let mut col = vec![BigInt::zero(); n];
                        col[free + i] = c.clone();
                        col
                    })
                    .collect();
                let q = Quotient::new(&IntMatrix::from_columns(n, &relations).expect("sized"));
                (
                    q.group().clone(),
                    Box::new(move |x| q.reduce(x).expect("sized")),
                )
            }
            CoefficientRing::Rationals => (
                FgAbelianGroup::free(free),
                Box::new(move |x| GroupElement {
                    free: x[..free].to_vec(),
                    torsion: Vec::new(),
                }),
            ),
            CoefficientRing::ModP { p } => {
                let p = BigInt::from(p);
                let kept: Vec<usize> = (0..free)
                    .chain(
                        cyclic
                            .iter()
                            .enumerate()
                            .filter(|(_, c)| c.is_multiple_of(&p))
                            .map(|(i, _)| free + i),
                    )
                    .collect();
                let ambient = FgAbelianGroup::from_cyclic(0, vec![p.clone(); kept.len()]);
                (
                    ambient,
                    Box::new(move |x| GroupElement {
                        free: Vec::new(),
                        torsion: kept.iter().map(|&i| x[i].mod_floor(&p)).collect(),
                    }),
                )
            }
        };
        let table = table
            .iter()
            .map(|row| row.iter().map(|x| convert(x)).collect())
            .collect();
        CupForm {
            ring,
            basis,
            table,
            ambient,
        }
    }
}

/// The pairing `H¹ × H¹ → H²` on a labeled basis of `H¹`.
///
/// Over the rationals the values are the integral classes with torsion
/// killed; mod `p` they are the images of the integral classes in
/// `H²(M; Z) ⊗ Z/p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CupForm {
    pub ring: CoefficientRing,
    pub basis: Vec<String>,
    pub table: Vec<Vec<H2Element>>,
    pub ambient: FgAbelianGroup,
}

impl CupForm {
    pub fn get(&self, i: usize, j: usize) -> &H2Element {
        &self.table[i][j]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|l| l == label)
    }

    /// First basis pair `(i, j)`, `i < j`, with a nonzero product.
    pub fn nonzero_pair(&self) -> Option<(usize, usize)> {
        let n = self.basis.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.table[i][j].is_zero())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.basis.len();
        let sum_is_zero = |x: &H2Element, y: &H2Element| {
            let free = x.free.iter().zip(&y.free).all(|(a, b)| (a + b).is_zero());
            let torsion = x
                .torsion
                .iter()
                .zip(&y.torsion)
                .zip(self.ambient.torsion())
                .all(|((a, b), d)| (a + b).is_multiple_of(d));
            free && torsion
        };
        (0..n).all(|i| (0..n).all(|j| sum_is_zero(&self.table[i][j], &self.table[j][i])))
    }
}

impl fmt::Display for CupForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        let n = self.basis.len();
        for i in 0..n {
            for j in i + 1..n {
                let v = &self.table[i][j];
                if !v.is_zero() {
                    writeln!(f, "{} ∪ {} = {v}", self.basis[i], self.basis[j])?;
                    any = true;
                }
            }
        }
        if !any {
            writeln!(f, "all products vanish")?;
        }
        Ok(())
    }
}

pub fn cup_form(m: &ManifoldExpr, ring: CoefficientRing) -> Result<CupForm, CupError> {
    Ok(RawForm::of(m)?.reduce(ring))
}

/// Isomorphism class of the subgroup of `H²` generated by all products.
pub fn cup_image(f: &CupForm) -> FgAbelianGroup {
    let generators: Vec<Vec<BigInt>> = f
        .table
        .iter()
        .flatten()
        .filter(|e| !e.is_zero())
        .map(GroupElement::coordinates)
        .collect();
    subgroup_structure(&f.ambient, &generators).expect("entries live in the ambient group")
}

/// Every product of two degree-one classes is zero.
pub fn integrally_trivial(f: &CupForm) -> bool {
    f.table.iter().flatten().all(GroupElement::is_zero)
}

/// `μ(u, v, w) = ⟨u ∪ v ∪ w, [M]⟩` on the basis of [`cup_form`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrilinearForm {
    pub basis: Vec<String>,
    #[serde(with = "crate::bigint_serde::vec")]
    values: Vec<BigInt>,
}

impl TrilinearForm {
    fn zeros(basis: Vec<String>) -> Self {
        let n = basis.len();
        Self {
            basis,
            values: vec![BigInt::zero(); n * n * n],
        }
    }

    fn idx(&self, i: usize, j: usize, k: usize) -> usize {
        let n = self.basis.len();
        (i * n + j) * n + k
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.values[self.idx(i, j, k)]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    /// Sets `μ(i, j, k) = value` and every permutation with its sign.
    fn set_alternating(&mut self, i: usize, j: usize, k: usize, value: i64) {
        for (p, sign) in [
            ((i, j, k), 1),
            ((j, k, i), 1),
            ((k, i, j), 1),
            ((j, i, k), -1),
            ((i, k, j), -1),
            ((k, j, i), -1),
        ] {
            let at = self.idx(p.0, p.1, p.2);
            self.values[at] = BigInt::from(sign * value);
        }
    }

    fn of(m: &ManifoldExpr) -> Result<Self, CupError> {
        match m {
            ManifoldExpr::Bundle { genus, euler } => {
                let basis = RawForm::bundle(*genus, *euler).basis;
                let mut t = Self::zeros(basis);
                if *euler == 0 {
                    let phi = 2 * *genus as usize;
                    for i in 0..*genus as usize {
                        t.set_alternating(2 * i, 2 * i + 1, phi, 1);
                    }
                }
                Ok(t)
            }
            ManifoldExpr::Sum { parts } => {
                let parts: Vec<Self> = parts.iter().map(Self::of).collect::<Result<_, _>>()?;
                let basis = parts
                    .iter()
                    .enumerate()
                    .flat_map(|(s, p)| p.basis.iter().map(move |l| format!("s{}.{l}", s + 1)))
                    .collect();
                let mut t = Self::zeros(basis);
                let mut at = 0;
                for p in &parts {
                    let n = p.dim();
                    for i in 0..n {
                        for j in 0..n {
                            for k in 0..n {
                                let dst = t.idx(at + i, at + j, at + k);
                                t.values[dst] = p.get(i, j, k).clone();
                            }
                        }
                    }
                    at += n;
                }
                Ok(t)
            }
            ManifoldExpr::Plumbed(_) => Err(CupError::Unsupported(m.render())),
        }
    }
}

pub fn trilinear_form(m: &ManifoldExpr) -> Result<TrilinearForm, CupError> {
    TrilinearForm::of(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingComparison {
    Yes,
    No,
    Undecided,
}

/// Compares rational cohomology rings through Betti numbers and the
/// triple-product form, which determines the ring of a closed 3-manifold.
pub fn rational_rings_isomorphic(
    m1: &ManifoldExpr,
    m2: &ManifoldExpr,
) -> Result<RingComparison, CupError> {
    let (t1, t2) = (trilinear_form(m1)?, trilinear_form(m2)?);
    if homology(m1).betti() != homology(m2).betti() {
        return Ok(RingComparison::No);
    }
    Ok(match (t1.is_zero(), t2.is_zero()) {
        (true, true) => RingComparison::Yes,
        (true, false) | (false, true) => RingComparison::No,
        (false, false) if t1.values == t2.values => RingComparison::Yes,
        (false, false) => RingComparison::Undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::parse;

    fn form(text: &str, ring: CoefficientRing) -> CupForm {
        cup_form(&parse(text).unwrap(), ring).unwrap()
    }

    const Z: CoefficientRing = CoefficientRing::Integers;
    const Q: CoefficientRing = CoefficientRing::Rationals;

    #[test]
    fn torus_bundle_cup_is_torsion_generator() {
        let f = form("bundle(1,5)", Z);
        assert_eq!(f.basis, ["a1", "b1"]);
        assert_eq!(f.ambient, FgAbelianGroup::from_cyclic(2, [5]));
        let ab = f.get(0, 1);
        assert_eq!(ab.order_in(&f.ambient), Some(BigInt::from(5)));
        assert!(f.is_antisymmetric());
        assert!(!integrally_trivial(&f));
        assert_eq!(cup_image(&f), FgAbelianGroup::from_cyclic(0, [5]));
    }

    #[test]
    fn rational_form_forgets_torsion() {
        let f = form("bundle(1,5)", Q);
        assert!(integrally_trivial(&f));
        assert_eq!(f.ambient, FgAbelianGroup::free(2));
    }

    #[test]
    fn mod_p_reduction() {
        for (k, p, nonzero) in [
            (6, 2, true),
            (6, 3, true),
            (6, 5, false),
            (5, 5, true),
            (5, 2, false),
        ] {
            let f = form(&format!("bundle(1,{k})"), CoefficientRing::ModP { p });
            assert_eq!(f.nonzero_pair().is_some(), nonzero, "k={k} p={p}");
        }
        let f = form("bundle(1,5)", CoefficientRing::ModP { p: 5 });
        assert_eq!(f.ambient, FgAbelianGroup::from_cyclic(0, [5, 5, 5]));
    }

    #[test]
    fn sphere_times_circle() {
        let f = form("bundle(0,0)", Z);
        assert_eq!(f.basis, ["phi"]);
        assert!(f.get(0, 0).is_zero());
        assert!(integrally_trivial(&f));
    }

    #[test]
    fn surface_times_circle() {
        let f = form("bundle(1,0)", Z);
        assert_eq!(f.basis, ["a1", "b1", "phi"]);
        assert_eq!(f.get(0, 1).free, [1, 0, 0].map(BigInt::from));
        assert_eq!(f.get(0, 2).free, [0, 1, 0].map(BigInt::from));
        assert_eq!(f.get(1, 2).free, [0, 0, 1].map(BigInt::from));
        assert_eq!(cup_image(&form("bundle(2,0)", Z)), FgAbelianGroup::free(5));
    }

    #[test]
    fn sums_are_block_diagonal() {
        let f = form("sum(bundle(0,0), bundle(0,0), bundle(0,7))", Z);
        assert_eq!(f.basis, ["s1.phi", "s2.phi"]);
        assert!(integrally_trivial(&f));
        assert!(cup_image(&f).is_trivial());
        assert_eq!(f.ambient, FgAbelianGroup::from_cyclic(2, [7]));

        let f = form("sum(bundle(1,2), bundle(1,3))", Z);
        assert_eq!(f.ambient, FgAbelianGroup::from_cyclic(4, [6]));
        assert_eq!(cup_image(&f), FgAbelianGroup::from_cyclic(0, [6]));
        assert!(f.get(0, 2).is_zero());
        assert!(f.is_antisymmetric());
        assert!(integrally_trivial(&form(
            "sum(bundle(0,3), bundle(0,0))",
            Z
        )));
    }

    #[test]
    fn unit_euler_number_kills_the_product() {
        assert!(integrally_trivial(&form("bundle(1,1)", Z)));
        assert!(!integrally_trivial(&form("bundle(1,2)", Z)));
    }

    #[test]
    fn plumbings_unsupported() {
        let m = crate::manifold::lower_bundle(1, 2);
        assert!(matches!(cup_form(&m, Z), Err(CupError::Unsupported(_))));
        assert!(trilinear_form(&m).is_err());
    }

    #[test]
    fn trilinear_forms() {
        let t = trilinear_form(&parse("bundle(1,0)").unwrap()).unwrap();
        assert_eq!(t.get(0, 1, 2), &BigInt::from(1));
        assert_eq!(t.get(1, 0, 2), &BigInt::from(-1));
        assert_eq!(t.get(2, 0, 1), &BigInt::from(1));
        assert!(t.get(0, 0, 2).is_zero());
        assert!(trilinear_form(&parse("bundle(1,7)").unwrap())
            .unwrap()
            .is_zero());
        assert!(
            trilinear_form(&parse("sum(bundle(0,0), bundle(0,0))").unwrap())
                .unwrap()
                .is_zero()
        );
        let s = trilinear_form(&parse("sum(bundle(0,3), bundle(1,0))").unwrap()).unwrap();
        assert_eq!(s.basis, ["s2.a1", "s2.b1", "s2.phi"]);
        assert_eq!(s.get(0, 1, 2), &BigInt::from(1));
    }

    #[test]
    fn rational_ring_comparisons() {
        let cmp = |a: &str, b: &str| {
            rational_rings_isomorphic(&parse(a).unwrap(), &parse(b).unwrap()).unwrap()
        };
        assert_eq!(
            cmp("bundle(1,5)", "sum(bundle(0,0), bundle(0,0), bundle(0,5))"),
            RingComparison::Yes
        );
        assert_eq!(cmp("bundle(0,0)", "bundle(0,5)"), RingComparison::No);
        assert_eq!(cmp("bundle(1,0)", "bundle(1,0)"), RingComparison::Yes);
        // same Betti numbers (1,3,3,1), one form zero and the other not
        assert_eq!(
            cmp("bundle(1,0)", "sum(bundle(0,0), bundle(0,0), bundle(0,0))"),
            RingComparison::No
        );
        assert_eq!(
            cmp(
                "sum(bundle(1,0), bundle(0,0))",
                "sum(bundle(0,0), bundle(1,0))"
            ),
            RingComparison::Undecided
        );
    }
}
