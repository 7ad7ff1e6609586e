//! Exact integer linear algebra: Smith normal form, cokernels of integer
//! presentations, and maps induced on cokernels.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// A dense integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged integer matrix");
            data.extend(row.iter().cloned().map(Into::into));
        }
        Self { rows: r, cols: c, data }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns<T: Into<BigInt> + Clone>(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column of wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn hcat(&self, other: &Self) -> Result<Self> {
        check_dim(self.rows, other.rows)?;
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(m)
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        check_dim(self.cols, rhs.rows)?;
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    /// Exact determinant by Bareiss elimination.
    pub fn det(&self) -> Result<BigInt> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(BigInt::zero());
                };
                a.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if negate { -d } else { d })
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            if !v.is_zero() {
                self.data[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            if !v.is_zero() {
                self.data[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// A finitely generated abelian group `Z^r ⊕ Z/d1 ⊕ ... ⊕ Z/dk` with `d1 | d2 | ... | dk`, `di >= 2`.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn free(rank: usize) -> Self {
        Self { free_rank: rank, torsion: Vec::new() }
    }

    pub fn cyclic<C: Into<BigInt>>(order: C) -> Self {
        Self::from_orders(&[order.into()])
    }

    /// The group `⊕ Z/ci`, where `ci = 0` means a copy of `Z`; the factors are
    /// brought into invariant-factor form.
    pub fn from_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|c| c.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|c| !c.is_zero()).map(|c| c.abs()).filter(|c| !c.is_one()).collect();
        let m = IntMatrix::from_rows(&(0..finite.len())
            .map(|i| (0..finite.len()).map(|j| if i == j { finite[i].clone() } else { BigInt::zero() }).collect::<Vec<_>>())
            .collect::<Vec<_>>());
        let diag = invariant_factors(&m);
        let torsion = diag.into_iter().filter(|d| !d.is_one() && !d.is_zero()).collect();
        Self { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Direct sum.
    pub fn sum(&self, other: &Self) -> Self {
        let mut orders: Vec<BigInt> = vec![BigInt::zero(); self.free_rank + other.free_rank];
        orders.extend(self.torsion.iter().cloned());
        orders.extend(other.torsion.iter().cloned());
        Self::from_orders(&orders)
    }

    /// `self ⊗ Z/m` (`m = 0` leaves the group unchanged).
    pub fn tensor_cyclic(&self, m: &BigInt) -> Self {
        if m.is_zero() {
            return self.clone();
        }
        let mut orders: Vec<BigInt> = vec![m.clone(); self.free_rank];
        orders.extend(self.torsion.iter().map(|d| d.gcd(m)));
        Self::from_orders(&orders)
    }

    /// `self ⊗ Z[1/d]` described by the surviving factors: free part kept,
    /// torsion stripped of the primes dividing `d`.
    pub fn invert(&self, d: u64) -> Self {
        let primes = prime_factors(d);
        let orders: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().map(|t| strip_primes(t, &primes)))
            .collect();
        Self::from_orders(&orders)
    }

    /// Localisation at a prime `p`: the free part is kept, torsion reduced to its p-part.
    pub fn localize(&self, p: u64) -> Self {
        let orders: Vec<BigInt> = std::iter::repeat_n(BigInt::zero(), self.free_rank)
            .chain(self.torsion.iter().map(|t| p_part(t, p)))
            .collect();
        Self::from_orders(&orders)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let mut j = i;
            while j < self.torsion.len() && &self.torsion[j] == d {
                j += 1;
            }
            if j - i == 1 {
                parts.push(format!("Z/{d}"));
            } else {
                parts.push(format!("(Z/{d})^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl fmt::Debug for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AbelianGroup({self})")
    }
}

/// `U · M · V = D`, with `U`, `V` unimodular and `D` diagonal with `d1 | d2 | ...`.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    /// `U^{-1}`, tracked alongside `U`.
    pub u_inv: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries `D_ii` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Smith normal form with transforms, pivoting on the entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut u_inv = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_abs_position(&a, t) else {
                return SmithForm { u, d: a, v, u_inv };
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let x = a.get(i, t).clone();
                if x.is_zero() {
                    continue;
                }
                let q = x.div_floor(&pivot);
                let neg_q = -&q;
                a.add_row(i, t, &neg_q);
                u.add_row(i, t, &neg_q);
                u_inv.add_col(t, i, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in t + 1..c {
                let x = a.get(t, j).clone();
                if x.is_zero() {
                    continue;
                }
                let q = -x.div_floor(&pivot);
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let bad_row = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                    u_inv.add_col(i, t, &-one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
    }
    SmithForm { u, d: a, v, u_inv }
}

fn min_abs_position(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| &ax < b) {
                let done = ax.is_one();
                best = Some((i, j, ax));
                if done {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// Diagonal of the Smith form, without tracking transforms.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut diag = Vec::new();
    for t in 0..r.min(c) {
        loop {
            let Some((pi, pj)) = min_abs_position(&a, t) else {
                diag.resize(r.min(c), BigInt::zero());
                return diag;
            };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            let pivot = a.get(t, t).clone();
            let mut clean = true;
            for i in t + 1..r {
                let x = a.get(i, t).clone();
                if !x.is_zero() {
                    a.add_row(i, t, &-x.div_floor(&pivot));
                    clean &= a.get(i, t).is_zero();
                }
            }
            for j in t + 1..c {
                let x = a.get(t, j).clone();
                if !x.is_zero() {
                    a.add_col(j, t, &-x.div_floor(&pivot));
                    clean &= a.get(t, j).is_zero();
                }
            }
            if !clean {
                continue;
            }
            match (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.get(i, j).is_multiple_of(&pivot))) {
                Some(i) => a.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        diag.push(a.get(t, t).abs());
    }
    diag
}

/// An integer lattice kept in row-echelon form, fed one vector at a time.
/// Arithmetic is done in `i64` with overflow detection.
#[derive(Clone, Debug)]
pub struct EchelonLattice {
    dim: usize,
    pivots: BTreeMap<usize, Vec<i64>>,
    seen: HashSet<Vec<i64>>,
}

/// Signals that an `i64` lattice computation overflowed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overflow;

impl EchelonLattice {
    pub fn new(dim: usize) -> Self {
        Self { dim, pivots: BTreeMap::new(), seen: HashSet::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Adds a vector to the spanned lattice.
    pub fn insert(&mut self, v: &[i64]) -> std::result::Result<(), Overflow> {
        assert_eq!(v.len(), self.dim);
        if v.iter().all(|&x| x == 0) || !self.seen.insert(v.to_vec()) {
            return Ok(());
        }
        let mut v = v.to_vec();
        let mut start = 0;
        loop {
            let Some(p) = (start..self.dim).find(|&i| v[i] != 0) else {
                return Ok(());
            };
            let Some(b) = self.pivots.get(&p) else {
                if v[p] < 0 {
                    for x in &mut v {
                        *x = -*x;
                    }
                }
                self.reduce_above(&mut v, p)?;
                self.pivots.insert(p, v);
                return Ok(());
            };
            let (bp, vp) = (b[p], v[p]);
            if vp % bp == 0 {
                let q = vp / bp;
                for i in p..self.dim {
                    v[i] = v[i].checked_sub(q.checked_mul(b[i]).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            } else {
                let e = bp.extended_gcd(&vp);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let (bq, vq) = (bp / g, vp / g);
                let mut nb = vec![0; self.dim];
                let mut nv = vec![0; self.dim];
                for i in p..self.dim {
                    nb[i] = x.checked_mul(b[i]).and_then(|s| y.checked_mul(v[i]).and_then(|t| s.checked_add(t))).ok_or(Overflow)?;
                    nv[i] = bq.checked_mul(v[i]).and_then(|s| vq.checked_mul(b[i]).and_then(|t| s.checked_sub(t))).ok_or(Overflow)?;
                }
                if nb[p] < 0 {
                    for z in &mut nb {
                        *z = -*z;
                    }
                }
                self.reduce_above(&mut nb, p)?;
                self.pivots.insert(p, nb);
                v = nv;
            }
            start = p + 1;
        }
    }

    /// Reduces entries of `v` past its pivot `p` against later pivots, keeping numbers small.
    fn reduce_above(&self, v: &mut [i64], p: usize) -> std::result::Result<(), Overflow> {
        for (&q, b) in self.pivots.range(p + 1..) {
            let bq = b[q];
            let r = Integer::div_floor(&v[q], &bq);
            if r != 0 {
                for i in q..self.dim {
                    v[i] = v[i].checked_sub(r.checked_mul(b[i]).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            }
        }
        Ok(())
    }

    /// Whether `v` lies in the lattice.
    pub fn contains(&self, v: &[i64]) -> std::result::Result<bool, Overflow> {
        let mut v = v.to_vec();
        for p in 0..self.dim {
            if v[p] == 0 {
                continue;
            }
            let Some(b) = self.pivots.get(&p) else {
                return Ok(false);
            };
            if v[p] % b[p] != 0 {
                return Ok(false);
            }
            let q = v[p] / b[p];
            for i in p..self.dim {
                v[i] = v[i].checked_sub(q.checked_mul(b[i]).ok_or(Overflow)?).ok_or(Overflow)?;
            }
        }
        Ok(true)
    }

    /// Basis vectors as columns of an integer matrix (`dim` rows).
    pub fn basis_matrix(&self) -> IntMatrix {
        let cols: Vec<Vec<i64>> = self.pivots.values().cloned().collect();
        IntMatrix::from_columns(self.dim, &cols)
    }

    /// The quotient `Z^dim / lattice`.
    pub fn quotient(&self) -> AbelianGroup {
        cokernel_of_full_basis(&self.basis_matrix())
    }
}

fn cokernel_of_full_basis(m: &IntMatrix) -> AbelianGroup {
    let diag = invariant_factors(m);
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    AbelianGroup {
        free_rank: m.rows - rank,
        torsion: diag.into_iter().filter(|d| !d.is_zero() && !d.is_one()).collect(),
    }
}

/// `Z^rows / (column span of m)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    if let Some(basis) = compress_columns(m) {
        return cokernel_of_full_basis(&basis);
    }
    cokernel_of_full_basis(m)
}

/// Replaces a wide presentation by a basis of its column span, if `i64` suffices.
pub fn compress_columns(m: &IntMatrix) -> Option<IntMatrix> {
    let mut lattice = EchelonLattice::new(m.rows);
    for j in 0..m.cols {
        let col: Option<Vec<i64>> = (0..m.rows).map(|i| m.get(i, j).to_i64()).collect();
        lattice.insert(&col?).ok()?;
    }
    Some(lattice.basis_matrix())
}

/// Whether `v` lies in the column span of `m`.
pub fn in_column_span(m: &IntMatrix, v: &[BigInt]) -> bool {
    let rank_before = invariant_factors(m).iter().filter(|d| !d.is_zero()).count();
    let extended = m.hcat(&IntMatrix::from_columns(m.rows, &[v.to_vec()])).expect("matching rows");
    let rank_after = invariant_factors(&extended).iter().filter(|d| !d.is_zero()).count();
    if rank_after != rank_before {
        return false;
    }
    // Same rank: v is in the rational span; integrality is decided by the index.
    let a = cokernel(m);
    let b = cokernel(&extended);
    a == b
}

/// The map induced on cokernels by `f : Z^a -> Z^b`, expressed in the
/// Smith-adapted generators of both cokernels (only nontrivial summands kept).
#[derive(Clone, Debug)]
pub struct InducedMap {
    /// Orders of the cyclic source summands (`0` means `Z`).
    pub source_orders: Vec<BigInt>,
    pub target_orders: Vec<BigInt>,
    /// `target_orders.len() x source_orders.len()`; row `i` is reduced modulo `target_orders[i]`.
    pub matrix: IntMatrix,
}

impl InducedMap {
    pub fn source(&self) -> AbelianGroup {
        AbelianGroup::from_orders(&self.source_orders)
    }

    pub fn target(&self) -> AbelianGroup {
        AbelianGroup::from_orders(&self.target_orders)
    }

    pub fn is_identity(&self) -> bool {
        self.source_orders == self.target_orders
            && (0..self.matrix.rows).all(|i| {
                (0..self.matrix.cols).all(|j| {
                    let want = if i == j { BigInt::one() } else { BigInt::zero() };
                    reduce_mod(&(self.matrix.get(i, j) - want), &self.target_orders[i]).is_zero()
                })
            })
    }

    /// The composite `other ∘ self` (with `other` defined on the target of `self`).
    pub fn then(&self, other: &InducedMap) -> Result<InducedMap> {
        check_dim(self.target_orders.len(), other.source_orders.len())?;
        let mut m = other.matrix.try_mul(&self.matrix)?;
        for i in 0..m.rows {
            for j in 0..m.cols {
                let v = reduce_mod(m.get(i, j), &other.target_orders[i]);
                m.set(i, j, v);
            }
        }
        Ok(InducedMap {
            source_orders: self.source_orders.clone(),
            target_orders: other.target_orders.clone(),
            matrix: m,
        })
    }

    /// Whether the map is surjective.
    pub fn is_epi(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Cokernel of the induced map.
    pub fn cokernel(&self) -> AbelianGroup {
        let rels = diagonal_relations(&self.target_orders);
        cokernel(&self.matrix.hcat(&rels).expect("matching rows"))
    }

    /// Whether the map becomes surjective after inverting `d`.
    pub fn is_epi_after_inverting(&self, d: u64) -> bool {
        let c = self.cokernel().invert(d);
        c.is_trivial()
    }

    /// Whether the map becomes an isomorphism after inverting `d`. The free
    /// block must have determinant a unit of `Z[1/d]`, and the map must be
    /// injective on every p-primary torsion part with `p ∤ d`.
    pub fn is_iso_after_inverting(&self, d: u64) -> bool {
        let primes = prime_factors(d);
        let free_src: Vec<usize> = (0..self.source_orders.len()).filter(|&j| self.source_orders[j].is_zero()).collect();
        let free_tgt: Vec<usize> = (0..self.target_orders.len()).filter(|&i| self.target_orders[i].is_zero()).collect();
        if free_src.len() != free_tgt.len() {
            return false;
        }
        let block = IntMatrix::from_rows(
            &free_tgt.iter().map(|&i| free_src.iter().map(|&j| self.matrix.get(i, j).clone()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        );
        let det = if free_src.is_empty() { BigInt::one() } else { block.det().expect("square block") };
        if det.is_zero() || !strip_primes(&det, &primes).is_one() {
            return false;
        }
        let torsion_primes: Vec<u64> = self
            .source_orders
            .iter()
            .chain(&self.target_orders)
            .filter(|o| !o.is_zero())
            .flat_map(|o| prime_factors(o.to_u64().expect("torsion order fits u64")))
            .filter(|p| !primes.contains(p))
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        torsion_primes.into_iter().all(|p| self.injective_on_p_part(p))
    }

    /// Injectivity on the p-primary part of the torsion, by counting the kernel.
    fn injective_on_p_part(&self, p: u64) -> bool {
        let src: Vec<(usize, BigInt)> = self
            .source_orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(j, o)| (j, p_part(o, p)))
            .filter(|(_, q)| !q.is_one())
            .collect();
        let tgt: Vec<(usize, BigInt)> = self
            .target_orders
            .iter()
            .enumerate()
            .filter(|(_, o)| !o.is_zero())
            .map(|(i, o)| (i, p_part(o, p)))
            .filter(|(_, q)| !q.is_one())
            .collect();
        if src.is_empty() {
            return true;
        }
        // Generator j of the p-part is (order_j / p^v) e_j; its image lands in the
        // target p-part. A vector x (coordinates mod p^v_j) is in the kernel iff
        // the image is zero mod every target p-part order.
        // Kernel = ker(Z^src -> ⊕ Z/tgt) / ⊕ p^v_j Z, counted via the lattice index.
        let ns = src.len();
        let nt = tgt.len();
        let mut map_rows = Vec::new();
        for (i, ti) in &tgt {
            let full_i = &self.target_orders[*i];
            let scale_back = full_i / ti;
            let mut row = Vec::new();
            for (j, sj) in &src {
                let gen_scale = &self.source_orders[*j] / sj;
                // image of the generator, in the p-part coordinate of summand i
                let img = reduce_mod(&(self.matrix.get(*i, *j) * &gen_scale), full_i);
                let coord = (&img / &scale_back).mod_floor(ti);
                debug_assert!((&img % &scale_back).is_zero());
                row.push(coord);
            }
            map_rows.push(row);
        }
        // |image| = |src group| / |kernel|; compute the image size as the index of
        // the subgroup generated by image columns inside ⊕ Z/t_i.
        let image_cols: Vec<Vec<BigInt>> = (0..ns).map(|j| (0..nt).map(|i| map_rows[i][j].clone()).collect()).collect();
        let mut gens = IntMatrix::from_columns(nt, &image_cols);
        gens = gens.hcat(&diagonal_relations(&tgt.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>())).expect("rows");
        let quotient = cokernel(&gens);
        let target_order: BigInt = tgt.iter().map(|(_, t)| t.clone()).product();
        let image_order = target_order / quotient.order().expect("finite");
        let source_order: BigInt = src.iter().map(|(_, s)| s.clone()).product();
        image_order == source_order
    }
}

fn diagonal_relations(orders: &[BigInt]) -> IntMatrix {
    let n = orders.len();
    IntMatrix::from_rows(&(0..n).map(|i| (0..n).map(|j| if i == j { orders[i].clone() } else { BigInt::zero() }).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn reduce_mod(x: &BigInt, m: &BigInt) -> BigInt {
    if m.is_zero() {
        x.clone()
    } else {
        x.mod_floor(m)
    }
}

/// Cokernel data of a presentation: Smith form plus which summands are nontrivial.
struct CokernelData {
    orders: Vec<BigInt>,
    keep: Vec<usize>,
    snf: SmithForm,
}

fn cokernel_data(rels: &IntMatrix) -> CokernelData {
    let snf = smith_normal_form(rels);
    let diag = snf.diagonal();
    let mut orders = Vec::new();
    let mut keep = Vec::new();
    for i in 0..rels.rows {
        let d = diag.get(i).cloned().unwrap_or_default();
        if !d.is_one() {
            keep.push(i);
            orders.push(d.abs());
        }
    }
    CokernelData { orders, keep, snf }
}

/// The map `coker(rels_a) -> coker(rels_b)` induced by `f`.
pub fn map_on_cokernels(f: &IntMatrix, rels_a: &IntMatrix, rels_b: &IntMatrix) -> Result<InducedMap> {
    check_dim(f.cols, rels_a.rows)?;
    check_dim(f.rows, rels_b.rows)?;
    let image = f.try_mul(rels_a)?;
    for j in 0..image.cols {
        if !in_column_span(rels_b, &image.column(j)) {
            return Err(Error::NotWellDefined(format!("image of relation {j} is not a relation")));
        }
    }
    let a = cokernel_data(rels_a);
    let b = cokernel_data(rels_b);
    // New source generator k is column keep[k] of U_a^{-1}; target coordinates are U_b · x.
    let composite = b.snf.u.try_mul(f)?.try_mul(&a.snf.u_inv)?;
    let mut m = IntMatrix::zeros(b.keep.len(), a.keep.len());
    for (ri, &i) in b.keep.iter().enumerate() {
        for (ci, &j) in a.keep.iter().enumerate() {
            m.set(ri, ci, reduce_mod(composite.get(i, j), &b.orders[ri]));
        }
    }
    Ok(InducedMap {
        source_orders: a.orders,
        target_orders: b.orders,
        matrix: m,
    })
}

/// Distinct prime factors.
pub fn prime_factors(mut d: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= d {
        if d.is_multiple_of(p) {
            out.push(p);
            while d.is_multiple_of(p) {
                d /= p;
            }
        }
        p += 1;
    }
    if d > 1 {
        out.push(d);
    }
    out
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && prime_factors(p) == [p]
}

/// `x` with every factor from `primes` removed (sign dropped).
pub fn strip_primes(x: &BigInt, primes: &[u64]) -> BigInt {
    let mut x = x.abs();
    if x.is_zero() {
        return x;
    }
    for &p in primes {
        let bp = BigInt::from(p);
        while x.is_multiple_of(&bp) {
            x /= &bp;
        }
    }
    x
}

/// The largest power of `p` dividing `x`.
pub fn p_part(x: &BigInt, p: u64) -> BigInt {
    let x = x.abs();
    &x / strip_primes(&x, &[p])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_smith(m: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.u.try_mul(m).unwrap().try_mul(&s.v).unwrap(), s.d);
        assert!(s.u.is_unimodular());
        assert!(s.v.is_unimodular());
        assert!(s.u.try_mul(&s.u_inv).unwrap() == IntMatrix::identity(m.rows()));
        let diag = s.diagonal();
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!(w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn smith_of_zero_and_small_cases() {
        let s = check_smith(&IntMatrix::zeros(3, 2));
        assert!(s.d.is_zero());
        // diag(2, 3): gcd 1 and lcm 6.
        let s = check_smith(&ints(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        let s = check_smith(&ints(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
    }

    #[test]
    fn cokernel_examples() {
        assert!(cokernel(&IntMatrix::identity(3)).is_trivial());
        let g = cokernel(&ints(&[&[2], &[0]]));
        assert_eq!(g, AbelianGroup { free_rank: 1, torsion: vec![BigInt::from(2)] });
        assert_eq!(g.to_string(), "Z + Z/2");
        assert_eq!(cokernel(&IntMatrix::zeros(4, 0)), AbelianGroup::free(4));
    }

    #[test]
    fn lattice_agrees_with_direct_snf() {
        let m = ints(&[&[2, 4, 6, 0, 1], &[0, 6, 3, 9, 0], &[4, 2, 1, 0, 7]]);
        let direct = cokernel_of_full_basis(&m);
        assert_eq!(cokernel(&m), direct);
        let mut lattice = EchelonLattice::new(3);
        for c in m.columns() {
            lattice.insert(&c.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>()).unwrap();
        }
        for c in m.columns() {
            assert!(lattice.contains(&c.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>()).unwrap());
        }
        assert_eq!(lattice.quotient(), direct);
    }

    #[test]
    fn induced_identity_and_localisation() {
        let rels = ints(&[&[2, 0], &[0, 0]]);
        let id = map_on_cokernels(&IntMatrix::identity(2), &rels, &rels).unwrap();
        assert!(id.is_identity());
        let two = map_on_cokernels(&ints(&[&[2]]), &IntMatrix::zeros(1, 0), &IntMatrix::zeros(1, 0)).unwrap();
        assert!(!two.is_iso_after_inverting(1));
        assert!(two.is_iso_after_inverting(2));
        assert!(!two.is_iso_after_inverting(3));
        assert!(two.is_epi_after_inverting(2));
        assert!(!two.is_epi_after_inverting(3));
    }

    #[test]
    fn ill_defined_map_is_rejected() {
        // Z/2 -> Z/3 by 1 is not well defined.
        let r = map_on_cokernels(&ints(&[&[1]]), &ints(&[&[2]]), &ints(&[&[3]]));
        assert!(matches!(r, Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn group_arithmetic() {
        let g = AbelianGroup::from_orders(&[BigInt::from(4), BigInt::from(6), BigInt::zero()]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(g.invert(2).to_string(), "Z + Z/3");
        assert_eq!(g.localize(2).to_string(), "Z + Z/2 + Z/4");
        assert_eq!(g.tensor_cyclic(&BigInt::from(3)).to_string(), "(Z/3)^2");
        assert_eq!(AbelianGroup::cyclic(240).localize(3).to_string(), "Z/3");
    }
}
