//! Exact integer lattice algebra.
//!
//! Dense matrices over arbitrary-precision integers, Smith normal form with
//! tracked unimodular transforms, and the finitely generated abelian groups
//! that fall out of cokernels and subgroup computations.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IntlatError {
    #[error("matrix data has {found} entries, expected {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("coordinate vector has length {found}, expected {expected}")]
    CoordinateLength { expected: usize, found: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self, IntlatError> {
        if data.len() != rows * cols {
            return Err(IntlatError::Shape {
                rows,
                cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` entries in row-major order.
    pub fn from_i64(rows: usize, cols: usize, data: &[i64]) -> Result<Self, IntlatError> {
        Self::new(rows, cols, data.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// Builds a matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> Result<Self, IntlatError> {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(IntlatError::CoordinateLength {
                    expected: rows,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.data[i * cols + i] = d.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: BigInt) {
        self.data[r * self.cols + c] = value;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    /// Matrix product; panics on an inner-dimension mismatch.
    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            self.cols,
            v.len(),
            "vector length differs from column count"
        );
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination. `None` for non-square input.
    pub fn determinant(&self) -> Option<BigInt> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Some(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (a.get(i, j) * a.get(k, k) - a.get(i, k) * a.get(k, j)) / &prev;
                    a.set(i, j, v);
                }
            }
            prev = a.get(k, k).clone();
        }
        Some(sign * a.get(n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().is_some_and(|d| d.abs().is_one())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|r| (0..self.cols).all(|c| r == c || self.get(r, c).is_zero()))
    }

    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for c in 0..self.cols {
            let v = factor * &self.data[src * self.cols + c];
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for r in 0..self.rows {
            let v = factor * &self.data[r * self.cols + src];
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = v;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` in Smith normal form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `u`, maintained alongside it.
    pub u_inv: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal of `D`, length `min(rows, cols)`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.d.diagonal_entries()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors()
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }
}

/// Row and column operations applied to the working matrix, mirrored into
/// the transforms.
struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl SnfState {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
    }

    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.d.add_row(dst, src, factor);
        self.u.add_row(dst, src, factor);
        self.u_inv.add_col(src, dst, &-factor);
    }

    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        self.d.add_col(dst, src, factor);
        self.v.add_col(dst, src, factor);
    }

    fn negate_row(&mut self, r: usize) {
        self.d.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Position of the smallest nonzero |entry| in the lower-right block from `t`.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for r in t..self.d.rows {
            for c in t..self.d.cols {
                let x = self.d.get(r, c);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(br, bc)| x.abs() < self.d.get(br, bc).abs()) {
                    best = Some((r, c));
                }
            }
        }
        best
    }

    /// Smallest nonzero |entry| in row `t` and column `t`, restricted to the block.
    fn smallest_in_cross(&self, t: usize) -> (usize, usize) {
        let mut best = (t, t);
        let mut best_abs = self.d.get(t, t).abs();
        let mut consider = |r: usize, c: usize, x: &BigInt| {
            if !x.is_zero() && (best_abs.is_zero() || x.abs() < best_abs) {
                best = (r, c);
                best_abs = x.abs();
            }
        };
        for r in t..self.d.rows {
            consider(r, t, self.d.get(r, t));
        }
        for c in t..self.d.cols {
            consider(t, c, self.d.get(t, c));
        }
        best
    }

    fn move_to_pivot(&mut self, t: usize, (r, c): (usize, usize)) {
        self.swap_rows(t, r);
        self.swap_cols(t, c);
    }

    /// Reduces row and column `t` against the pivot; true when both are clear.
    fn clear_cross(&mut self, t: usize) -> bool {
        let mut clear = true;
        for r in t + 1..self.d.rows {
            if self.d.get(r, t).is_zero() {
                continue;
            }
            let q = self.d.get(r, t) / self.d.get(t, t);
            if !q.is_zero() {
                self.add_row(r, t, &-q);
            }
            if !self.d.get(r, t).is_zero() {
                clear = false;
            }
        }
        for c in t + 1..self.d.cols {
            if self.d.get(t, c).is_zero() {
                continue;
            }
            let q = self.d.get(t, c) / self.d.get(t, t);
            if !q.is_zero() {
                self.add_col(c, t, &-q);
            }
            if !self.d.get(t, c).is_zero() {
                clear = false;
            }
        }
        clear
    }
}

/// Smith normal form with transforms, smallest-absolute-value pivoting.
pub fn snf(a: &IntMatrix) -> SnfDecomposition {
    let (m, n) = (a.rows, a.cols);
    let mut st = SnfState {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
    };
    for t in 0..m.min(n) {
        let Some(pos) = st.smallest_in_block(t) else {
            break;
        };
        st.move_to_pivot(t, pos);
        loop {
            if !st.clear_cross(t) {
                let pos = st.smallest_in_cross(t);
                st.move_to_pivot(t, pos);
                continue;
            }
            // Pivot must divide the whole remaining block.
            let offender = (t + 1..m)
                .find(|&r| (t + 1..n).any(|c| !st.d.get(r, c).is_multiple_of(st.d.get(t, t))));
            match offender {
                Some(r) => st.add_row(t, r, &BigInt::one()),
                None => break,
            }
        }
        if st.d.get(t, t).is_negative() {
            st.negate_row(t);
        }
    }
    SnfDecomposition {
        u: st.u,
        d: st.d,
        v: st.v,
        u_inv: st.u_inv,
    }
}

/// Finitely generated abelian group `Z^rank ⊕ Z/d₁ ⊕ … ⊕ Z/dₖ` in canonical
/// invariant-factor form: every `dᵢ ≥ 2` and `dᵢ | dᵢ₊₁`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FgAbelianGroup {
    rank: usize,
    #[serde(with = "crate::bigint_serde::vec")]
    torsion: Vec<BigInt>,
}

impl FgAbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self {
            rank,
            torsion: Vec::new(),
        }
    }

    /// `Z^rank ⊕ ⊕ Z/orders[i]`, normalized; orders of 0 count as free summands
    /// and the sign of an order is ignored.
    pub fn from_cyclic<I>(rank: usize, orders: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<BigInt>,
    {
        let diag: Vec<BigInt> = orders.into_iter().map(Into::into).collect();
        let n = diag.len();
        let mut g = cokernel(&IntMatrix::diagonal(n, n, &diag));
        g.rank += rank;
        g
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    /// Number of coordinates of an element: free ones first, then torsion.
    pub fn coordinate_len(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn torsion_subgroup(&self) -> Self {
        Self {
            rank: 0,
            torsion: self.torsion.clone(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::from_cyclic(
            self.rank + other.rank,
            self.torsion.iter().chain(&other.torsion).cloned(),
        )
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<BigInt> {
        (self.rank == 0).then(|| self.torsion.iter().product())
    }

    /// Relations presenting this group on its own coordinates.
    pub fn presentation(&self) -> Quotient {
        let n = self.coordinate_len();
        let columns: Vec<Vec<BigInt>> = self
            .torsion
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut col = vec![BigInt::zero(); n];
                col[self.rank + i] = d.clone();
                col
            })
            .collect();
        Quotient::new(&IntMatrix::from_columns(n, &columns).expect("column lengths match"))
    }
}

impl fmt::Display for FgAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Canonical form of `Z^rows / column-span(A)`.
pub fn cokernel(a: &IntMatrix) -> FgAbelianGroup {
    Quotient::new(a).group().clone()
}

/// `Z^n / column-span(A)` with explicit coordinates in canonical form.
#[derive(Debug, Clone)]
pub struct Quotient {
    group: FgAbelianGroup,
    u: IntMatrix,
    u_inv: IntMatrix,
    /// Per ambient coordinate after transformation: its relation order (0 = free).
    orders: Vec<BigInt>,
}

impl Quotient {
    pub fn new(a: &IntMatrix) -> Self {
        let dec = snf(a);
        let n = a.rows;
        let mut orders = dec.invariant_factors();
        orders.resize(n, BigInt::zero());
        let rank = orders.iter().filter(|d| d.is_zero()).count();
        let torsion = orders
            .iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .cloned()
            .collect();
        Self {
            group: FgAbelianGroup { rank, torsion },
            u: dec.u,
            u_inv: dec.u_inv,
            orders,
        }
    }

    pub fn group(&self) -> &FgAbelianGroup {
        &self.group
    }

    pub fn ambient_len(&self) -> usize {
        self.orders.len()
    }

    /// Coordinates of the class of `x` in the canonical group: free part, then
    /// torsion part reduced into `[0, dᵢ)`.
    pub fn reduce(&self, x: &[BigInt]) -> Result<GroupElement, IntlatError> {
        if x.len() != self.ambient_len() {
            return Err(IntlatError::CoordinateLength {
                expected: self.ambient_len(),
                found: x.len(),
            });
        }
        let y = self.u.mul_vec(x);
        let mut free = Vec::new();
        let mut torsion = Vec::new();
        for (yi, d) in y.into_iter().zip(&self.orders) {
            if d.is_zero() {
                free.push(yi);
            } else if !d.is_one() {
                torsion.push(yi.mod_floor(d));
            }
        }
        Ok(GroupElement { free, torsion })
    }

    /// Representatives in `Z^n` of the free generators of the canonical group.
    pub fn free_generators(&self) -> Vec<Vec<BigInt>> {
        self.orders
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_zero())
            .map(|(i, _)| self.u_inv.column(i))
            .collect()
    }

    /// A representative in `Z^n` of the given canonical element.
    pub fn lift(&self, e: &GroupElement) -> Result<Vec<BigInt>, IntlatError> {
        let expected = self.group.coordinate_len();
        let found = e.free.len() + e.torsion.len();
        if e.free.len() != self.group.rank || found != expected {
            return Err(IntlatError::CoordinateLength { expected, found });
        }
        let mut free = e.free.iter();
        let mut torsion = e.torsion.iter();
        let y: Vec<BigInt> = self
            .orders
            .iter()
            .map(|d| {
                if d.is_zero() {
                    free.next().cloned().unwrap_or_default()
                } else if d.is_one() {
                    BigInt::zero()
                } else {
                    torsion.next().cloned().unwrap_or_default()
                }
            })
            .collect();
        Ok(self.u_inv.mul_vec(&y))
    }
}

/// Element of a canonical [`FgAbelianGroup`], in its free and torsion coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct GroupElement {
    #[serde(with = "crate::bigint_serde::vec")]
    pub free: Vec<BigInt>,
    #[serde(with = "crate::bigint_serde::vec")]
    pub torsion: Vec<BigInt>,
}

impl GroupElement {
    pub fn zero(group: &FgAbelianGroup) -> Self {
        Self {
            free: vec![BigInt::zero(); group.rank()],
            torsion: vec![BigInt::zero(); group.torsion().len()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().chain(&self.torsion).all(Zero::is_zero)
    }

    pub fn coordinates(&self) -> Vec<BigInt> {
        self.free.iter().chain(&self.torsion).cloned().collect()
    }

    /// Additive order inside `group`; `None` when infinite.
    pub fn order_in(&self, group: &FgAbelianGroup) -> Option<BigInt> {
        if self.free.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(
            self.torsion
                .iter()
                .zip(group.torsion())
                .fold(BigInt::one(), |acc, (x, d)| {
                    let ord = d / x.gcd(d);
                    acc.lcm(&ord)
                }),
        )
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[BigInt]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "({};{})", show(&self.free), show(&self.torsion))
    }
}

/// Isomorphism class of the subgroup of `ambient` generated by `generators`,
/// each given in the ambient's free-then-torsion coordinates.
pub fn subgroup_structure(
    ambient: &FgAbelianGroup,
    generators: &[Vec<BigInt>],
) -> Result<FgAbelianGroup, IntlatError> {
    let n = ambient.coordinate_len();
    if let Some(g) = generators.iter().find(|g| g.len() != n) {
        return Err(IntlatError::CoordinateLength {
            expected: n,
            found: g.len(),
        });
    }
    let s = generators.len();
    // [generators | relations]; the kernel's generator block presents the subgroup.
    let mut columns = generators.to_vec();
    for (i, d) in ambient.torsion().iter().enumerate() {
        let mut col = vec![BigInt::zero(); n];
        col[ambient.rank() + i] = d.clone();
        columns.push(col);
    }
    let a = IntMatrix::from_columns(n, &columns)?;
    let dec = snf(&a);
    let rank = dec.rank();
    let kernel: Vec<Vec<BigInt>> = (rank..a.cols())
        .map(|j| dec.v.column(j)[..s].to_vec())
        .collect();
    let k = IntMatrix::from_columns(s, &kernel)?;
    Ok(cokernel(&k))
}

/// Coefficient ring for universal-coefficient conversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientRing {
    Integers,
    Rationals,
    ModP { p: u64 },
}

impl CoefficientRing {
    pub fn mod_p(p: u64) -> Result<Self, IntlatError> {
        if is_prime(p) {
            Ok(Self::ModP { p })
        } else {
            Err(IntlatError::NotPrime(p))
        }
    }
}

impl fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integers => write!(f, "Z"),
            Self::Rationals => write!(f, "Q"),
            Self::ModP { p } => write!(f, "Z/{p}"),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Homology in one degree after changing coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoefficientGroup {
    Integral { group: FgAbelianGroup },
    VectorSpace { dim: usize },
}

impl CoefficientGroup {
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::VectorSpace { dim } => Some(*dim),
            Self::Integral { .. } => None,
        }
    }
}

impl fmt::Display for CoefficientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Integral { group } => write!(f, "{group}"),
            Self::VectorSpace { dim } => write!(f, "dim {dim}"),
        }
    }
}

fn divisible_count(torsion: &[BigInt], p: u64) -> usize {
    let p = BigInt::from(p);
    torsion.iter().filter(|d| d.is_multiple_of(&p)).count()
}

/// Homology with other coefficients from integral homology `h[0..]`, by the
/// universal coefficient theorem.
pub fn coefficients(
    h: &[FgAbelianGroup],
    ring: CoefficientRing,
) -> Result<Vec<CoefficientGroup>, IntlatError> {
    match ring {
        CoefficientRing::Integers => Ok(h
            .iter()
            .map(|g| CoefficientGroup::Integral { group: g.clone() })
            .collect()),
        CoefficientRing::Rationals => Ok(h
            .iter()
            .map(|g| CoefficientGroup::VectorSpace { dim: g.rank() })
            .collect()),
        CoefficientRing::ModP { p } => {
            if !is_prime(p) {
                return Err(IntlatError::NotPrime(p));
            }
            Ok(h.iter()
                .enumerate()
                .map(|(n, g)| {
                    let below = if n == 0 {
                        0
                    } else {
                        divisible_count(h[n - 1].torsion(), p)
                    };
                    CoefficientGroup::VectorSpace {
                        dim: g.rank() + divisible_count(g.torsion(), p) + below,
                    }
                })
                .collect())
        }
    }
}

/// Small-integer view of a [`BigInt`], for display and indexing.
pub fn to_i64(x: &BigInt) -> Option<i64> {
    x.to_i64()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, data: &[i64]) -> IntMatrix {
        IntMatrix::from_i64(rows, cols, data).unwrap()
    }

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_contract(a: &IntMatrix) -> SnfDecomposition {
        let dec = snf(a);
        assert_eq!(dec.u.mul(a).mul(&dec.v), dec.d);
        assert!(dec.u.is_unimodular() && dec.v.is_unimodular());
        assert_eq!(dec.u.mul(&dec.u_inv), IntMatrix::identity(a.rows()));
        assert!(dec.d.is_diagonal());
        let diag = dec.invariant_factors();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            assert!(
                w[1].is_multiple_of(&w[0]),
                "{} does not divide {}",
                w[0],
                w[1]
            );
        }
        dec
    }

    #[test]
    fn snf_identity() {
        let id = IntMatrix::identity(3);
        let dec = check_contract(&id);
        assert_eq!(dec.d, id);
        assert_eq!(dec.u, id);
        assert_eq!(dec.v, id);
    }

    #[test]
    fn snf_zero_one_by_one() {
        let z = m(1, 1, &[0]);
        let dec = check_contract(&z);
        assert_eq!(dec.d, z);
        assert_eq!(dec.u, IntMatrix::identity(1));
        assert_eq!(dec.v, IntMatrix::identity(1));
    }

    #[test]
    fn snf_coprime_diagonal() {
        let dec = check_contract(&m(2, 2, &[2, 0, 0, 3]));
        assert_eq!(dec.invariant_factors(), b(&[1, 6]));
    }

    #[test]
    fn snf_empty_shapes() {
        for (r, c) in [(0, 3), (3, 0), (0, 0)] {
            let dec = check_contract(&IntMatrix::zeros(r, c));
            assert_eq!(dec.u, IntMatrix::identity(r));
            assert_eq!(dec.v, IntMatrix::identity(c));
        }
    }

    #[test]
    fn snf_negative_and_rectangular() {
        let dec = check_contract(&m(2, 3, &[-4, 6, 2, 8, -2, 10]));
        assert!(dec.invariant_factors().iter().all(|d| !d.is_negative()));
        check_contract(&m(3, 2, &[0, 0, 0, -7, 0, 0]));
    }

    #[test]
    fn cokernel_torus_bundle_map() {
        // columns (0,0,0,5) and (0,0,1,1)
        let a = IntMatrix::from_columns(4, &[b(&[0, 0, 0, 5]), b(&[0, 0, 1, 1])]).unwrap();
        let g = cokernel(&a);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.torsion(), b(&[5]).as_slice());
        assert_eq!(g.to_string(), "Z^2 + Z/5");
    }

    #[test]
    fn cokernel_trivial_cases() {
        assert_eq!(cokernel(&IntMatrix::zeros(2, 0)), FgAbelianGroup::free(2));
        assert_eq!(cokernel(&IntMatrix::identity(3)), FgAbelianGroup::trivial());
    }

    #[test]
    fn canonical_form_from_cyclic() {
        let g = FgAbelianGroup::from_cyclic(1, [2, 3, 0, 1, -4]);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.torsion(), b(&[2, 12]).as_slice());
        assert_eq!(g, FgAbelianGroup::from_cyclic(2, [4, 6]));
    }

    #[test]
    fn subgroup_of_torsion_generator() {
        let g = FgAbelianGroup::from_cyclic(2, [5]);
        let s = subgroup_structure(&g, &[b(&[0, 0, 1])]).unwrap();
        assert_eq!(s, FgAbelianGroup::from_cyclic(0, [5]));
    }

    #[test]
    fn subgroup_edge_cases() {
        let g = FgAbelianGroup::from_cyclic(3, [2, 4]);
        assert_eq!(
            subgroup_structure(&g, &[]).unwrap(),
            FgAbelianGroup::trivial()
        );
        let z = FgAbelianGroup::free(1);
        assert_eq!(
            subgroup_structure(&z, &[b(&[2])]).unwrap(),
            FgAbelianGroup::free(1)
        );
        assert_eq!(
            subgroup_structure(&z, &[b(&[2, 1])]),
            Err(IntlatError::CoordinateLength {
                expected: 1,
                found: 2
            })
        );
    }

    #[test]
    fn subgroup_full_basis_is_ambient() {
        let g = FgAbelianGroup::from_cyclic(2, [3, 6]);
        let basis: Vec<Vec<BigInt>> = (0..g.coordinate_len())
            .map(|i| {
                let mut v = vec![BigInt::zero(); g.coordinate_len()];
                v[i] = BigInt::one();
                v
            })
            .collect();
        assert_eq!(subgroup_structure(&g, &basis).unwrap(), g);
    }

    #[test]
    fn quotient_reduce_and_lift() {
        // Z/2 ⊕ Z/3 ≅ Z/6; (1,1) generates it.
        let q = Quotient::new(&m(2, 2, &[2, 0, 0, 3]));
        assert_eq!(q.group(), &FgAbelianGroup::from_cyclic(0, [6]));
        let e = q.reduce(&b(&[1, 1])).unwrap();
        assert_eq!(e.order_in(q.group()), Some(BigInt::from(6)));
        let back = q.lift(&e).unwrap();
        assert_eq!(q.reduce(&back).unwrap(), e);
        assert!(q.reduce(&b(&[2, 3])).unwrap().is_zero());
    }

    #[test]
    fn coefficient_conversions() {
        let h = vec![
            FgAbelianGroup::free(1),
            FgAbelianGroup::from_cyclic(2, [5]),
            FgAbelianGroup::free(2),
            FgAbelianGroup::free(1),
        ];
        let dims = |ring| -> Vec<usize> {
            coefficients(&h, ring)
                .unwrap()
                .iter()
                .map(|g| g.dim().unwrap())
                .collect()
        };
        assert_eq!(dims(CoefficientRing::Rationals), vec![1, 2, 2, 1]);
        assert_eq!(dims(CoefficientRing::ModP { p: 5 }), vec![1, 3, 3, 1]);
        assert_eq!(dims(CoefficientRing::ModP { p: 2 }), vec![1, 2, 2, 1]);
        assert_eq!(
            coefficients(&h, CoefficientRing::ModP { p: 4 }),
            Err(IntlatError::NotPrime(4))
        );
        assert_eq!(CoefficientRing::mod_p(1), Err(IntlatError::NotPrime(1)));
    }

    #[test]
    fn determinant_bareiss() {
        assert_eq!(
            m(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 2]).determinant(),
            Some(BigInt::from(6))
        );
        assert_eq!(
            m(3, 3, &[2, 0, 1, 1, 3, 2, 1, 1, 1]).determinant(),
            Some(BigInt::from(0))
        );
        assert_eq!(m(2, 2, &[0, 1, 1, 0]).determinant(), Some(BigInt::from(-1)));
        assert_eq!(m(2, 3, &[0; 6]).determinant(), None);
    }
}
