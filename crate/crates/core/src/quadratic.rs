//! Based quadratic modules over Z[t, t^-1] (and over Z, as constant forms):
//! the ε-hermitian form λ, its quadratic refinement q, isometries, and the
//! named forms E8, K and hyperbolic space.

use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::laurent::{epsilon, FormParameter, LaurentPoly};
use crate::poly_matrix::PolyMatrix;
use crate::snf::EchelonLattice;

/// A class in `Z[t, t^-1] / Λ`, stored by its canonical representative.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuotientClass {
    representative: LaurentPoly,
    parameter: FormParameter,
}

impl QuotientClass {
    pub fn new(p: &LaurentPoly, parameter: FormParameter) -> Self {
        Self { representative: parameter.reduce(p), parameter }
    }

    pub fn zero(parameter: FormParameter) -> Self {
        Self { representative: LaurentPoly::zero(), parameter }
    }

    pub fn representative(&self) -> &LaurentPoly {
        &self.representative
    }

    pub fn parameter(&self) -> FormParameter {
        self.parameter
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::new(&self.representative.scale(&BigInt::from(k)), self.parameter)
    }
}

impl Add for &QuotientClass {
    type Output = QuotientClass;
    fn add(self, rhs: &QuotientClass) -> QuotientClass {
        assert_eq!(self.parameter, rhs.parameter, "classes modulo different parameters");
        QuotientClass::new(&(&self.representative + &rhs.representative), self.parameter)
    }
}

impl fmt::Display for QuotientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.representative)
    }
}

impl fmt::Debug for QuotientClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuotientClass{self}")
    }
}

/// A based module with ε-hermitian form and quadratic refinement, `ε = (-1)^n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuadraticModule {
    n: i64,
    parameter: FormParameter,
    gram: PolyMatrix,
    q_values: Vec<LaurentPoly>,
}

impl QuadraticModule {
    /// Validates `bar(G_ij) = ε·G_ji` and `G_ii = q_i + ε·bar(q_i)`.
    pub fn new(n: i64, parameter: FormParameter, gram: PolyMatrix, q_values: Vec<LaurentPoly>) -> Result<Self> {
        check_dim(gram.rows(), gram.cols())?;
        check_dim(gram.rows(), q_values.len())?;
        if parameter.n() != n {
            return Err(Error::BadParameters(format!("parameter is for n = {}, form for n = {n}", parameter.n())));
        }
        let eps = BigInt::from(epsilon(n));
        let r = gram.rows();
        for i in 0..r {
            for j in 0..r {
                if gram.get(i, j).bar() != gram.get(j, i).scale(&eps) {
                    return Err(Error::BadParameters(format!("gram is not ε-hermitian at ({i}, {j})")));
                }
            }
            let expected = &q_values[i] + &q_values[i].bar().scale(&eps);
            if gram.get(i, i) != &expected {
                return Err(Error::BadParameters(format!("q value {i} does not refine the diagonal of λ")));
            }
        }
        let q_values = q_values.iter().map(|q| parameter.reduce(q)).collect();
        Ok(Self { n, parameter, gram, q_values })
    }

    /// The genus-g hyperbolic module, basis `a_1..a_g, b_1..b_g`.
    pub fn hyperbolic(g: usize, n: i64, parameter: FormParameter) -> Self {
        Self {
            n,
            parameter,
            gram: hyperbolic_gram(g, n),
            q_values: vec![LaurentPoly::zero(); 2 * g],
        }
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn epsilon(&self) -> i64 {
        epsilon(self.n)
    }

    pub fn parameter(&self) -> FormParameter {
        self.parameter
    }

    pub fn gram(&self) -> &PolyMatrix {
        &self.gram
    }

    pub fn q_values(&self) -> &[LaurentPoly] {
        &self.q_values
    }

    /// Whether all entries and q values are constants.
    pub fn is_over_z(&self) -> bool {
        let constant = |p: &LaurentPoly| p.terms().all(|(e, _)| e == 0);
        (0..self.rank()).all(|i| (0..self.rank()).all(|j| constant(self.gram.get(i, j)))) && self.q_values.iter().all(constant)
    }

    /// `λ(x, y) = Σ x_i · G_ij · bar(y_j)`.
    pub fn eval_lambda(&self, x: &[LaurentPoly], y: &[LaurentPoly]) -> Result<LaurentPoly> {
        check_dim(self.rank(), x.len())?;
        check_dim(self.rank(), y.len())?;
        let ybar: Vec<LaurentPoly> = y.iter().map(LaurentPoly::bar).collect();
        let gy = self.gram.apply(&ybar)?;
        let mut acc = LaurentPoly::zero();
        for (xi, gi) in x.iter().zip(&gy) {
            if !xi.is_zero() && !gi.is_zero() {
                acc += xi * gi;
            }
        }
        Ok(acc)
    }

    /// `Σ x_i·q_i·bar(x_i) + Σ_{i<j} x_i·G_ij·bar(x_j)`, before reduction modulo Λ.
    pub fn eval_q_raw(&self, x: &[LaurentPoly]) -> Result<LaurentPoly> {
        check_dim(self.rank(), x.len())?;
        let r = self.rank();
        let mut acc = LaurentPoly::zero();
        for i in 0..r {
            if x[i].is_zero() {
                continue;
            }
            let xbar = x[i].bar();
            if !self.q_values[i].is_zero() {
                acc += &(&x[i] * &self.q_values[i]) * &xbar;
            }
            for j in i + 1..r {
                if !x[j].is_zero() && !self.gram.get(i, j).is_zero() {
                    acc += &(&x[i] * self.gram.get(i, j)) * &x[j].bar();
                }
            }
        }
        Ok(acc)
    }

    pub fn eval_q(&self, x: &[LaurentPoly]) -> Result<QuotientClass> {
        Ok(QuotientClass::new(&self.eval_q_raw(x)?, self.parameter))
    }

    pub fn class(&self, p: &LaurentPoly) -> QuotientClass {
        QuotientClass::new(p, self.parameter)
    }

    /// Whether `M` (columns are images of basis vectors) preserves λ and q.
    pub fn is_isometry(&self, m: &PolyMatrix) -> Result<bool> {
        check_dim(self.rank(), m.rows())?;
        check_dim(self.rank(), m.cols())?;
        let cols: Vec<Vec<LaurentPoly>> = (0..m.cols()).map(|j| m.column(j)).collect();
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                if &self.eval_lambda(&cols[i], &cols[j])? != self.gram.get(i, j) {
                    return Ok(false);
                }
            }
            if self.eval_q(&cols[i])? != self.class(&self.q_values[i]) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Orthogonal sum.
    pub fn ortho_sum(&self, other: &Self) -> Result<Self> {
        if self.n != other.n || self.parameter != other.parameter {
            return Err(Error::BadParameters("orthogonal sum of forms with different n or parameter".into()));
        }
        let mut q = self.q_values.clone();
        q.extend(other.q_values.iter().cloned());
        Ok(Self { n: self.n, parameter: self.parameter, gram: self.gram.direct_sum(&other.gram), q_values: q })
    }

    /// The form with λ and q negated.
    pub fn negate(&self) -> Self {
        Self {
            n: self.n,
            parameter: self.parameter,
            gram: self.gram.map(|p| -p),
            q_values: self.q_values.iter().map(|q| self.parameter.reduce(&-q)).collect(),
        }
    }

    /// Entrywise augmentation `t -> 1`.
    pub fn base_change_to_z(&self) -> Self {
        Self {
            n: self.n,
            parameter: self.parameter,
            gram: self.gram.map(|p| LaurentPoly::from(p.augmentation())),
            q_values: self.q_values.iter().map(|q| self.parameter.reduce(&LaurentPoly::from(q.augmentation()))).collect(),
        }
    }

    /// Extension of scalars from Z to Z[t, t^-1]; a no-op on the stored data.
    pub fn extend_to_laurent(&self) -> Self {
        self.clone()
    }

    /// Integer gram matrix of a form over Z.
    pub fn integer_gram(&self) -> Result<Vec<Vec<i64>>> {
        if !self.is_over_z() {
            return Err(Error::BadParameters("form is not defined over Z".into()));
        }
        (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| self.gram.get(i, j).coeff(0).to_i64().ok_or_else(|| Error::OutOfRange("gram entry exceeds i64".into())))
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("form serialization cannot fail")
    }
}

/// `(0, I; εI, 0)`.
pub fn hyperbolic_gram(g: usize, n: i64) -> PolyMatrix {
    let mut m = PolyMatrix::zeros(2 * g, 2 * g);
    for i in 0..g {
        m.set(i, g + i, LaurentPoly::one());
        m.set(g + i, i, LaurentPoly::constant(epsilon(n)));
    }
    m
}

/// The named forms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormSpec {
    E8,
    KervaireK,
    Hyperbolic(usize),
    OrthoSum(Box<FormSpec>, Box<FormSpec>),
    Negate(Box<FormSpec>),
    BaseChangeToZ(Box<FormSpec>),
}

/// Simple roots of E8 in the usual Dynkin labelling: a chain 1-2-3-4-5-6-7 with 8 attached to 5.
const E8_EDGES: [(usize, usize); 7] = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];

/// Builds a named form for the given `n`, with form parameter `MIN(n)`.
pub fn named_form(spec: &FormSpec, n: i64) -> Result<QuadraticModule> {
    named_form_with(spec, n, FormParameter::min(n))
}

pub fn named_form_with(spec: &FormSpec, n: i64, parameter: FormParameter) -> Result<QuadraticModule> {
    match spec {
        FormSpec::E8 => {
            if epsilon(n) != 1 {
                return Err(Error::BadParameters("E8 is a symmetric form; n must be even".into()));
            }
            let mut rows = vec![vec![0i64; 8]; 8];
            for (i, row) in rows.iter_mut().enumerate() {
                row[i] = 2;
            }
            for &(i, j) in &E8_EDGES {
                rows[i][j] = 1;
                rows[j][i] = 1;
            }
            QuadraticModule::new(n, parameter, PolyMatrix::from_ints(&rows), vec![LaurentPoly::one(); 8])
        }
        FormSpec::KervaireK => {
            if epsilon(n) != -1 {
                return Err(Error::BadParameters("K is a skew-symmetric form; n must be odd".into()));
            }
            let gram = PolyMatrix::from_ints(&[vec![0, 1], vec![-1, 0]]);
            QuadraticModule::new(n, parameter, gram, vec![LaurentPoly::one(), LaurentPoly::one()])
        }
        FormSpec::Hyperbolic(g) => {
            if *g == 0 {
                return Err(Error::BadParameters("hyperbolic genus must be positive".into()));
            }
            Ok(QuadraticModule::hyperbolic(*g, n, parameter))
        }
        FormSpec::OrthoSum(a, b) => named_form_with(a, n, parameter)?.ortho_sum(&named_form_with(b, n, parameter)?),
        FormSpec::Negate(a) => Ok(named_form_with(a, n, parameter)?.negate()),
        FormSpec::BaseChangeToZ(a) => Ok(named_form_with(a, n, parameter)?.base_change_to_z()),
    }
}

/// `(M ⊕ -M) ⊗ Z[t, t^-1]` together with the automorphism `Id ⊕ t·Id`.
pub fn shaneson_image(m: &QuadraticModule) -> Result<(QuadraticModule, PolyMatrix)> {
    if !m.is_over_z() {
        return Err(Error::BadParameters("input form must be defined over Z".into()));
    }
    if m.rank() > 0 {
        let det = m.gram().det()?;
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::SingularForm(format!("determinant {det}")));
        }
    }
    let q = m.ortho_sum(&m.negate())?.extend_to_laurent();
    let r = m.rank();
    let mut diag = vec![LaurentPoly::one(); r];
    diag.extend(std::iter::repeat_n(LaurentPoly::t(), r));
    let u = PolyMatrix::diagonal(&diag);
    debug_assert!(q.is_isometry(&u)?);
    Ok((q, u))
}

/// A change of basis exhibiting a form over Z as hyperbolic.
#[derive(Clone, Debug)]
pub struct HyperbolicBasis {
    /// Columns are `a_1..a_g, b_1..b_g` in the original coordinates.
    pub matrix: Vec<Vec<i64>>,
}

impl HyperbolicBasis {
    pub fn as_poly_matrix(&self) -> PolyMatrix {
        PolyMatrix::from_ints(&self.matrix)
    }
}

/// Searches for a hyperbolic basis: a primitive isotropic vector (by increasing
/// support within `[-bound, bound]`), completed to a hyperbolic pair, then the
/// same on the orthogonal complement. The result is re-certified exactly.
pub fn hyperbolize(q: &QuadraticModule, search_bound: i64) -> Result<HyperbolicBasis> {
    let r = q.rank();
    if !r.is_multiple_of(2) {
        return Err(Error::BadParameters("odd rank cannot be hyperbolic".into()));
    }
    let gram = q.integer_gram()?;
    if r > 0 {
        let det = q.gram().det()?;
        if !(det.is_one() || (-&det).is_one()) {
            return Err(Error::SingularForm(format!("determinant {det}")));
        }
    }
    let eps = q.epsilon();
    let mut basis: Vec<Vec<i64>> = (0..r).map(|i| unit_vector(r, i)).collect();
    let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    while !basis.is_empty() {
        let x = find_isotropic(q, &basis, search_bound)
            .ok_or_else(|| Error::SearchExhausted(format!("no primitive isotropic vector within bound {search_bound} in rank {}", basis.len())))?;
        // w_k = λ(x, B_k); find d with Σ w_k d_k = 1.
        let w: Vec<i64> = basis.iter().map(|b| lambda_z(&gram, &x, b)).collect();
        let d = solve_unit_combination(&w).ok_or_else(|| Error::SingularForm("restricted form is not unimodular".into()))?;
        let mut y = vec![0i64; r];
        for (dk, b) in d.iter().zip(&basis) {
            axpy(&mut y, *dk, b);
        }
        let qy = q_lift(q, &y)?;
        axpy(&mut y, -eps * qy, &x);
        let mut lattice = EchelonLattice::new(r);
        for z in &basis {
            let mut zp = z.clone();
            let lzy = lambda_z(&gram, z, &y);
            let lzx = lambda_z(&gram, z, &x);
            axpy(&mut zp, -lzy, &x);
            axpy(&mut zp, -eps * lzx, &y);
            lattice
                .insert(&zp)
                .map_err(|_| Error::OutOfRange("coefficient growth in complement basis".into()))?;
        }
        let m = lattice.basis_matrix();
        basis = (0..m.cols()).map(|j| m.column(j).iter().map(|c| c.to_i64().expect("fits")).collect()).collect();
        pairs.push((x, y));
    }
    let g = pairs.len();
    let mut cols: Vec<Vec<i64>> = pairs.iter().map(|(x, _)| x.clone()).collect();
    cols.extend(pairs.iter().map(|(_, y)| y.clone()));
    let matrix: Vec<Vec<i64>> = (0..r).map(|i| (0..2 * g).map(|j| cols[j][i]).collect()).collect();
    let out = HyperbolicBasis { matrix };
    certify_hyperbolic(q, &out)?;
    Ok(out)
}

/// Exact check that `Pᵀ G P` is the hyperbolic gram, q vanishes on the new basis, and `det P = ±1`.
pub fn certify_hyperbolic(q: &QuadraticModule, basis: &HyperbolicBasis) -> Result<()> {
    let p = basis.as_poly_matrix();
    let g = q.rank() / 2;
    let hyp = QuadraticModule::hyperbolic(g, q.n(), q.parameter());
    let transformed = &(&p.transpose() * q.gram()) * &p.bar();
    if &transformed != hyp.gram() {
        return Err(Error::SearchExhausted("candidate basis failed the gram recheck".into()));
    }
    for j in 0..p.cols() {
        if !q.eval_q(&p.column(j))?.is_zero() {
            return Err(Error::SearchExhausted("candidate basis failed the q recheck".into()));
        }
    }
    let det = p.det()?;
    if !(det.is_one() || (-&det).is_one()) {
        return Err(Error::SearchExhausted("candidate basis is not unimodular".into()));
    }
    Ok(())
}

fn unit_vector(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn axpy(y: &mut [i64], a: i64, x: &[i64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn lambda_z(gram: &[Vec<i64>], x: &[i64], y: &[i64]) -> i64 {
    let mut acc = 0;
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        for (j, yj) in y.iter().enumerate() {
            acc += xi * gram[i][j] * yj;
        }
    }
    acc
}

fn to_poly_vec(x: &[i64]) -> Vec<LaurentPoly> {
    x.iter().map(|&c| LaurentPoly::constant(c)).collect()
}

/// An integer lift of `q(x)` for a form over Z.
fn q_lift(q: &QuadraticModule, x: &[i64]) -> Result<i64> {
    let raw = q.eval_q_raw(&to_poly_vec(x))?;
    raw.coeff(0).to_i64().ok_or_else(|| Error::OutOfRange("q value exceeds i64".into()))
}

fn find_isotropic(q: &QuadraticModule, basis: &[Vec<i64>], bound: i64) -> Option<Vec<i64>> {
    let k = basis.len();
    let r = q.rank();
    let values: Vec<i64> = (1..=bound).flat_map(|v| [v, -v]).collect();
    for support in 1..=k {
        let mut idx: Vec<usize> = (0..support).collect();
        loop {
            // Enumerate nonzero coefficient assignments on the chosen support.
            let mut choice = vec![0usize; support];
            loop {
                let coeffs: Vec<i64> = choice.iter().map(|&c| values[c]).collect();
                let g = coeffs.iter().fold(0i64, |acc, &c| acc.gcd(&c));
                if g == 1 {
                    let mut x = vec![0i64; r];
                    for (&i, &c) in idx.iter().zip(&coeffs) {
                        axpy(&mut x, c, &basis[i]);
                    }
                    if q.eval_q(&to_poly_vec(&x)).ok()?.is_zero() {
                        return Some(x);
                    }
                }
                if !advance(&mut choice, values.len()) {
                    break;
                }
            }
            if !next_combination(&mut idx, k) {
                break;
            }
        }
    }
    None
}

fn advance(choice: &mut [usize], base: usize) -> bool {
    for c in choice.iter_mut() {
        *c += 1;
        if *c < base {
            return true;
        }
        *c = 0;
    }
    false
}

fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Integers `d` with `Σ w_k d_k = 1`, if the entries of `w` are coprime.
fn solve_unit_combination(w: &[i64]) -> Option<Vec<i64>> {
    let mut d = vec![0i64; w.len()];
    let mut g = 0i64;
    for (k, &wk) in w.iter().enumerate() {
        if wk == 0 {
            continue;
        }
        if g == 0 {
            g = wk;
            d[k] = 1;
            continue;
        }
        let e = g.extended_gcd(&wk);
        for dj in d.iter_mut().take(k) {
            *dj *= e.x;
        }
        d[k] = e.y;
        g = e.gcd;
    }
    match g {
        1 => Some(d),
        -1 => Some(d.into_iter().map(|x| -x).collect()),
        _ => None,
    }
}
