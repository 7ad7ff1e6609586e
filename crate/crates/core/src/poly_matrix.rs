//! Dense matrices over Z[t, t^-1].

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::laurent::LaurentPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    data: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![LaurentPoly::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, LaurentPoly::one());
        }
        m
    }

    pub fn diagonal(entries: &[LaurentPoly]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row);
        }
        Ok(Self { rows: r, cols: c, data })
    }

    /// Builds a matrix of constants.
    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&c| LaurentPoly::constant(c)).collect()).collect())
            .expect("ragged integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: LaurentPoly) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[LaurentPoly] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<LaurentPoly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<LaurentPoly>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
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

    /// Entrywise bar.
    pub fn bar(&self) -> Self {
        self.map(LaurentPoly::bar)
    }

    /// Entrywise-bar transpose `M†`.
    pub fn dagger(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).bar());
            }
        }
        t
    }

    pub fn map(&self, f: impl Fn(&LaurentPoly) -> LaurentPoly) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        self.map(|x| x * c)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(LaurentPoly::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    /// Augmentation `t -> 1` entrywise, as integers.
    pub fn augmentation(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).iter().map(LaurentPoly::augmentation).collect()).collect()
    }

    /// Largest absolute exponent of any entry.
    pub fn exponent_radius(&self) -> i64 {
        self.data.iter().map(LaurentPoly::exponent_radius).max().unwrap_or(0)
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
                        *out.get_mut(i, j) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `M v` for a column vector `v`.
    pub fn apply(&self, v: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
        check_dim(self.cols, v.len())?;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = LaurentPoly::zero();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect())
    }

    /// Square block `[r0, r0+n) x [c0, c0+n)`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Self {
        let mut out = Self::zeros(nr, nc);
        for i in 0..nr {
            for j in 0..nc {
                out.set(i, j, self.get(r0 + i, c0 + j).clone());
            }
        }
        out
    }

    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Result<Self> {
        check_dim(a.rows, b.rows)?;
        check_dim(c.rows, d.rows)?;
        check_dim(a.cols, c.cols)?;
        check_dim(b.cols, d.cols)?;
        let (r, cc) = (a.rows + c.rows, a.cols + b.cols);
        let mut m = Self::zeros(r, cc);
        for i in 0..r {
            for j in 0..cc {
                let v = match (i < a.rows, j < a.cols) {
                    (true, true) => a.get(i, j),
                    (true, false) => b.get(i, j - a.cols),
                    (false, true) => c.get(i - a.rows, j),
                    (false, false) => d.get(i - a.rows, j - a.cols),
                };
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut m = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    /// Simultaneous row and column permutation: entry `(i, j)` moves to `(perm[i], perm[j])`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(perm[i], perm[j], self.get(i, j).clone());
            }
        }
        m
    }

    /// Exact determinant by fraction-free (Bareiss) elimination over the domain Z[t, t^-1].
    pub fn det(&self) -> Result<LaurentPoly> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        if n == 0 {
            return Ok(LaurentPoly::one());
        }
        let mut a: Vec<Vec<LaurentPoly>> = self.to_rows();
        let mut sign_negative = false;
        let mut prev = LaurentPoly::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                    return Ok(LaurentPoly::zero());
                };
                a.swap(k, p);
                sign_negative = !sign_negative;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact");
                }
                a[i][k] = LaurentPoly::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign_negative { -d } else { d })
    }

    /// Inverse of a matrix whose determinant is a unit, via the adjugate.
    pub fn inverse(&self) -> Result<Self> {
        check_dim(self.rows, self.cols)?;
        let n = self.rows;
        let det = self.det()?;
        let (sign, e) = det.unit_decompose()?;
        let det_inv = LaurentPoly::monomial(sign as i64, -e);
        let mut inv = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let c = minor.det()?;
                let c = if (i + j) % 2 == 1 { -c } else { c };
                inv.set(i, j, &c * &det_inv);
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        let rows = (0..self.rows)
            .filter(|&i| i != skip_r)
            .map(|i| (0..self.cols).filter(|&j| j != skip_c).map(|j| self.get(i, j).clone()).collect())
            .collect();
        Self::from_rows(rows).unwrap_or_else(|_| Self::zeros(0, 0))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Debug for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "PolyMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &PolyMatrix {
    type Output = PolyMatrix;
    fn mul(self, rhs: &PolyMatrix) -> PolyMatrix {
        self.try_mul(rhs).expect("matrix shapes do not compose")
    }
}

impl Add for &PolyMatrix {
    type Output = PolyMatrix;
    fn add(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &PolyMatrix {
    type Output = PolyMatrix;
    fn sub(self, rhs: &PolyMatrix) -> PolyMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        PolyMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Matrices serialize as nested arrays of polynomials (each an array of `[exponent, coefficient]`).
impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<LaurentPoly>>::deserialize(deserializer)?;
        PolyMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        s.parse().unwrap()
    }

    #[test]
    fn determinant_of_diagonal_and_triangular() {
        let m = PolyMatrix::diagonal(&[p("t"), p("t")]);
        assert_eq!(m.det().unwrap(), p("t^2"));
        let m = PolyMatrix::from_rows(vec![vec![p("1 + t"), p("t^-1")], vec![p("0"), p("2 - t")]]).unwrap();
        assert_eq!(m.det().unwrap(), &p("1 + t") * &p("2 - t"));
    }

    #[test]
    fn determinant_needs_pivoting() {
        let m = PolyMatrix::from_rows(vec![
            vec![p("0"), p("1"), p("t")],
            vec![p("1"), p("0"), p("0")],
            vec![p("t^-1"), p("3"), p("1")],
        ])
        .unwrap();
        // Cofactor expansion along the second row: -1 * (1*1 - t*3).
        assert_eq!(m.det().unwrap(), p("-1 + 3*t"));
    }

    #[test]
    fn determinant_is_multiplicative() {
        let a = PolyMatrix::from_rows(vec![vec![p("1 + t"), p("2")], vec![p("t^-2"), p("t - 1")]]).unwrap();
        let b = PolyMatrix::from_rows(vec![vec![p("3"), p("t^3")], vec![p("-t"), p("1 + t^-1")]]).unwrap();
        assert_eq!((&a * &b).det().unwrap(), &a.det().unwrap() * &b.det().unwrap());
    }

    #[test]
    fn inverse_of_unimodular() {
        let m = PolyMatrix::from_rows(vec![vec![p("1"), p("t")], vec![p("0"), p("t^2")]]).unwrap();
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let singular = PolyMatrix::from_rows(vec![vec![p("1 + t")]]).unwrap();
        assert!(singular.inverse().is_err());
    }

    #[test]
    fn dagger_reverses_products() {
        let a = PolyMatrix::from_rows(vec![vec![p("1 + t"), p("2*t^-1")], vec![p("t^2"), p("3")]]).unwrap();
        let b = PolyMatrix::from_rows(vec![vec![p("t"), p("0")], vec![p("1 - t"), p("t^-3")]]).unwrap();
        assert_eq!((&a * &b).dagger(), &b.dagger() * &a.dagger());
    }

    #[test]
    fn json_round_trip() {
        let m = PolyMatrix::from_rows(vec![vec![p("1 + t"), p("0")], vec![p("-t^-2"), p("3")]]).unwrap();
        let json = m.to_json();
        assert_eq!(json, "[[[[0,1],[1,1]],[]],[[[-2,-1]],[[0,3]]]]");
        assert_eq!(PolyMatrix::from_json(&json).unwrap(), m);
    }
}
