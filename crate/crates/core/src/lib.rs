//! Exact invariants of 3-dimensional graph manifolds.
//!
//! * [`intlat`]: integer matrices, Smith normal form, finitely generated abelian groups.
//! * [`manifold`]: descriptions of graph manifolds and the DSL parser.
//! * [`homology`]: integral homology by Mayer–Vietoris, with closed-form oracles.
//! * [`cupring`]: degree-one cup products for circle bundles and their sums.
//! * [`roundmap`]: directed round fold maps into the plane and the existence verdict.
//! * [`cli`]: reports and commands behind the `graphfold` binary.
//! * [`selftest`]: the built-in acceptance suites.
//! * [`random`]: seeded generators of test inputs.

mod bigint_serde;

pub mod cli;
pub mod cupring;
pub mod homology;
pub mod intlat;
pub mod manifold;
pub mod random;
pub mod roundmap;
pub mod selftest;
