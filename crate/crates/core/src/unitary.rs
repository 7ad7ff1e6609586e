//! The unitary group of the hyperbolic quadratic module: block-matrix
//! membership, elementary generators, σ, determinant splitting and seeded
//! random words.
//!
//! Matrices act on coordinate columns: column `k` holds the image of the
//! `k`-th basis vector, in the order `a_1..a_g, b_1..b_g`.

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::laurent::{epsilon, FormParameter, LaurentPoly};
use crate::poly_matrix::PolyMatrix;
use crate::quadratic::{hyperbolic_gram, QuadraticModule};

/// A `2g × 2g` matrix over Z[t, t^-1] viewed in block form `(A, B; C, D)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "PolyMatrix", into = "PolyMatrix")]
pub struct BlockMatrix {
    g: usize,
    matrix: PolyMatrix,
}

impl TryFrom<PolyMatrix> for BlockMatrix {
    type Error = Error;
    fn try_from(m: PolyMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<BlockMatrix> for PolyMatrix {
    fn from(b: BlockMatrix) -> Self {
        b.matrix
    }
}

impl BlockMatrix {
    pub fn new(matrix: PolyMatrix) -> Result<Self> {
        check_dim(matrix.rows(), matrix.cols())?;
        if !matrix.rows().is_multiple_of(2) {
            return Err(Error::DimensionMismatch { expected: matrix.rows() + 1, found: matrix.rows() });
        }
        Ok(Self { g: matrix.rows() / 2, matrix })
    }

    pub fn from_blocks(a: &PolyMatrix, b: &PolyMatrix, c: &PolyMatrix, d: &PolyMatrix) -> Result<Self> {
        Self::new(PolyMatrix::from_blocks(a, b, c, d)?)
    }

    pub fn identity(g: usize) -> Self {
        Self { g, matrix: PolyMatrix::identity(2 * g) }
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn a(&self) -> PolyMatrix {
        self.matrix.block(0, 0, self.g, self.g)
    }

    pub fn b(&self) -> PolyMatrix {
        self.matrix.block(0, self.g, self.g, self.g)
    }

    pub fn c(&self) -> PolyMatrix {
        self.matrix.block(self.g, 0, self.g, self.g)
    }

    pub fn d(&self) -> PolyMatrix {
        self.matrix.block(self.g, self.g, self.g, self.g)
    }

    pub fn dagger(&self) -> Self {
        Self { g: self.g, matrix: self.matrix.dagger() }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.matrix.try_mul(&rhs.matrix)?)
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.matrix.inverse()?)
    }

    pub fn det(&self) -> Result<LaurentPoly> {
        self.matrix.det()
    }

    /// Conjugation `P M P^-1` by the simultaneous permutation `a_i -> a_perm[i]`, `b_i -> b_perm[i]`.
    pub fn conjugate_by_pair_permutation(&self, perm: &[usize]) -> Result<Self> {
        check_dim(self.g, perm.len())?;
        let full: Vec<usize> = perm.iter().copied().chain(perm.iter().map(|&p| p + self.g)).collect();
        Self::new(self.matrix.permute(&full))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Which block conditions a matrix satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// `A·D† + ε·B·C† = I`.
    pub ad_plus_bc: bool,
    /// `A·B† + ε·(A·B†)† = 0`.
    pub ab_skew: bool,
    /// `C·D† + ε·(C·D†)† = 0`.
    pub cd_skew: bool,
    /// Diagonals of `A·B†` and `C·D†` lie in the form parameter.
    pub diagonals_in_parameter: bool,
    /// `det` is a unit of Z[t, t^-1].
    pub invertible: bool,
}

impl ConditionReport {
    pub fn all(&self) -> bool {
        self.ad_plus_bc && self.ab_skew && self.cd_skew && self.diagonals_in_parameter && self.invertible
    }

    pub fn failed(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (ok, name) in [
            (self.ad_plus_bc, "ad_plus_bc"),
            (self.ab_skew, "ab_skew"),
            (self.cd_skew, "cd_skew"),
            (self.diagonals_in_parameter, "diagonals_in_parameter"),
            (self.invertible, "invertible"),
        ] {
            if !ok {
                out.push(name);
            }
        }
        out
    }
}

fn skew_vanishes(x: &PolyMatrix, eps: &LaurentPoly) -> bool {
    (x + &x.dagger().scale(eps)).is_zero()
}

/// Evaluates each block condition separately.
pub fn check_conditions(m: &BlockMatrix, n: i64, parameter: FormParameter) -> Result<ConditionReport> {
    let eps = LaurentPoly::constant(epsilon(n));
    let (a, b, c, d) = (m.a(), m.b(), m.c(), m.d());
    let ab = a.try_mul(&b.dagger())?;
    let cd = c.try_mul(&d.dagger())?;
    let first = &a.try_mul(&d.dagger())? + &b.try_mul(&c.dagger())?.scale(&eps);
    let diagonals_in_parameter = (0..m.genus()).all(|i| parameter.contains(ab.get(i, i)) && parameter.contains(cd.get(i, i)));
    Ok(ConditionReport {
        ad_plus_bc: first.is_identity(),
        ab_skew: skew_vanishes(&ab, &eps),
        cd_skew: skew_vanishes(&cd, &eps),
        diagonals_in_parameter,
        invertible: m.det()?.is_unit(),
    })
}

pub fn membership_by_conditions(m: &BlockMatrix, n: i64, parameter: FormParameter) -> bool {
    check_conditions(m, n, parameter).map(|r| r.all()).unwrap_or(false)
}

/// Membership as an invertible isometry of the hyperbolic module `q`.
pub fn membership_by_form(m: &BlockMatrix, q: &QuadraticModule) -> Result<bool> {
    check_dim(q.rank(), m.matrix().rows())?;
    if q.gram() != &hyperbolic_gram(m.genus(), q.n()) || q.q_values().iter().any(|v| !v.is_zero()) {
        return Err(Error::BadParameters("membership_by_form expects the hyperbolic module".into()));
    }
    if !m.det()?.is_unit() {
        return Ok(false);
    }
    q.is_isometry(m.matrix())
}

/// `M·Φ·M† = Φ` for `Φ = (0, I; εI, 0)`.
pub fn preserves_phi(m: &BlockMatrix, n: i64) -> bool {
    let phi = hyperbolic_gram(m.genus(), n);
    let lhs = &(m.matrix() * &phi) * &m.matrix().dagger();
    lhs == phi
}

/// The seven generator shapes: four on two hyperbolic pairs with `r ∈ Z[π]`,
/// two transvections on one pair with `l ∈ Λ`, and σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    Sigma,
}

impl Family {
    pub fn pairs(&self) -> usize {
        match self {
            Family::F5 | Family::F6 => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    /// `r`, `l`, or unused for σ.
    pub parameter: LaurentPoly,
    /// The hyperbolic pairs the generator acts on (one or two distinct indices).
    pub positions: Vec<usize>,
}

impl GeneratorSpec {
    pub fn new(family: Family, parameter: LaurentPoly, positions: Vec<usize>) -> Self {
        Self { family, parameter, positions }
    }

    /// The generator on the genus-`g` hyperbolic module.
    pub fn instantiate(&self, g: usize, n: i64) -> Result<BlockMatrix> {
        let k = self.family.pairs();
        if self.positions.len() != k || self.positions.iter().any(|&p| p >= g) || (k == 2 && self.positions[0] == self.positions[1]) {
            return Err(Error::BadParameters(format!("bad positions {:?} for {:?} in genus {g}", self.positions, self.family)));
        }
        if matches!(self.family, Family::F5 | Family::F6) && !FormParameter::min(n).contains(&self.parameter) {
            return Err(Error::BadParameters(format!("{} is not in the minimal form parameter", self.parameter)));
        }
        let local = local_matrix(self.family, &self.parameter, n);
        // Local basis is a_(pos..), b_(pos..).
        let mut index = Vec::with_capacity(2 * k);
        index.extend(self.positions.iter().copied());
        index.extend(self.positions.iter().map(|&p| p + g));
        let mut m = PolyMatrix::identity(2 * g);
        for (li, &gi) in index.iter().enumerate() {
            for (lj, &gj) in index.iter().enumerate() {
                m.set(gi, gj, local.get(li, lj).clone());
            }
        }
        BlockMatrix::new(m)
    }
}

/// The generator as displayed on `(a_1, a_2, b_1, b_2)` or `(a, b)`.
fn local_matrix(family: Family, r: &LaurentPoly, n: i64) -> PolyMatrix {
    let eps = LaurentPoly::constant(epsilon(n));
    let o = LaurentPoly::one;
    let z = LaurentPoly::zero;
    let rb = r.bar();
    let rows: Vec<Vec<LaurentPoly>> = match family {
        Family::F1 => vec![
            vec![o(), z(), z(), z()],
            vec![z(), o(), z(), z()],
            vec![z(), r.clone(), o(), z()],
            vec![-&(&eps * &rb), z(), z(), o()],
        ],
        Family::F2 => vec![
            vec![o(), z(), z(), r.clone()],
            vec![z(), o(), -&(&eps * &rb), z()],
            vec![z(), z(), o(), z()],
            vec![z(), z(), z(), o()],
        ],
        Family::F3 => vec![
            vec![o(), r.clone(), z(), z()],
            vec![z(), o(), z(), z()],
            vec![z(), z(), o(), z()],
            vec![z(), z(), -&rb, o()],
        ],
        Family::F4 => vec![
            vec![o(), z(), z(), z()],
            vec![r.clone(), o(), z(), z()],
            vec![z(), z(), o(), -&rb],
            vec![z(), z(), z(), o()],
        ],
        Family::F5 => vec![vec![o(), r.clone()], vec![z(), o()]],
        Family::F6 => vec![vec![o(), z()], vec![r.clone(), o()]],
        Family::Sigma => return sigma_local(n),
    };
    PolyMatrix::from_rows(rows).expect("rectangular by construction")
}

fn sigma_local(n: i64) -> PolyMatrix {
    let e = epsilon(n);
    PolyMatrix::from_ints(&[vec![0, 0, 0, -1], vec![0, 0, e, 0], vec![0, -e, 0, 0], vec![1, 0, 0, 0]])
}

/// σ on `(a_1, a_2, b_1, b_2)`.
pub fn sigma(n: i64) -> BlockMatrix {
    BlockMatrix::new(sigma_local(n)).expect("4 x 4")
}

/// The three factors whose product is σ.
pub fn sigma_factors(n: i64) -> [PolyMatrix; 3] {
    let e = epsilon(n);
    let x = PolyMatrix::from_ints(&[vec![1, 0, 0, -1], vec![0, 1, e, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]);
    let y = PolyMatrix::from_ints(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, -e, 1, 0], vec![1, 0, 0, 1]]);
    [x.clone(), y, x]
}

/// Exact check of the three-factor product identity for σ.
pub fn sigma_factorization_check(n: i64) -> bool {
    let [x, y, z] = sigma_factors(n);
    &(&x * &y) * &z == sigma_local(n)
}

fn ordered_pairs(g: usize) -> Vec<(usize, usize)> {
    (0..g).flat_map(|i| (0..g).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

/// A permutation of `0..g` sending `0 -> i` and `1 -> j` (or just `0 -> i`).
fn placing_permutation(g: usize, targets: &[usize]) -> Vec<usize> {
    let mut perm: Vec<usize> = targets.to_vec();
    perm.extend((0..g).filter(|x| !targets.contains(x)));
    // perm[k] is where local pair k lands.
    perm
}

/// Generator specs for `r ∈ {±t^e : |e| ≤ window}`, `l` in the truncated minimal
/// parameter, every placement, and σ on every ordered pair.
pub fn generator_specs(g: usize, n: i64, window: i64) -> Result<Vec<GeneratorSpec>> {
    if g < 2 {
        return Err(Error::BadParameters("elementary generators need genus at least 2".into()));
    }
    if window < 0 {
        return Err(Error::BadParameters("exponent window must be non-negative".into()));
    }
    let mut specs = Vec::new();
    let rs: Vec<LaurentPoly> = (-window..=window).flat_map(|e| [LaurentPoly::monomial(1, e), LaurentPoly::monomial(-1, e)]).collect();
    for (i, j) in ordered_pairs(g) {
        for fam in [Family::F1, Family::F2, Family::F3, Family::F4] {
            for r in &rs {
                specs.push(GeneratorSpec::new(fam, r.clone(), vec![i, j]));
            }
        }
        specs.push(GeneratorSpec::new(Family::Sigma, LaurentPoly::zero(), vec![i, j]));
    }
    let ls = FormParameter::min(n).truncated_basis(window);
    for i in 0..g {
        for fam in [Family::F5, Family::F6] {
            for l in &ls {
                specs.push(GeneratorSpec::new(fam, l.clone(), vec![i]));
            }
        }
    }
    Ok(specs)
}

/// Instantiates each spec on pairs `(0, 1)` (or pair `0`), then conjugates by a
/// simultaneous pair permutation to reach the requested placement.
pub fn elementary_generators(g: usize, n: i64, window: i64) -> Result<Vec<BlockMatrix>> {
    generator_specs(g, n, window)?
        .into_iter()
        .map(|spec| {
            let base_positions: Vec<usize> = (0..spec.positions.len()).collect();
            let base = GeneratorSpec::new(spec.family, spec.parameter.clone(), base_positions).instantiate(g, n)?;
            base.conjugate_by_pair_permutation(&placing_permutation(g, &spec.positions))
        })
        .collect()
}

/// Half the t-exponent of `det(M)`.
pub fn det_splitting(m: &BlockMatrix) -> Result<Ratio<i64>> {
    let (_, e) = m.det()?.unit_decompose()?;
    Ok(Ratio::new(e, 2))
}

/// The generator pool sampled by [`random_word`].
pub fn word_alphabet(g: usize, n: i64) -> Result<Vec<BlockMatrix>> {
    elementary_generators(g, n, 1)
}

/// A product of `length` generators drawn uniformly from [`word_alphabet`] with a seeded ChaCha stream.
pub fn random_word(g: usize, n: i64, length: usize, seed: u64) -> Result<BlockMatrix> {
    let alphabet = word_alphabet(g, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = BlockMatrix::identity(g);
    for _ in 0..length {
        let k = rng.gen_range(0..alphabet.len());
        acc = acc.mul(&alphabet[k])?;
    }
    Ok(acc)
}

/// The word's letters, for callers that need per-letter data.
pub fn random_word_letters(g: usize, n: i64, length: usize, seed: u64) -> Result<Vec<BlockMatrix>> {
    let alphabet = word_alphabet(g, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..length).map(|_| alphabet[rng.gen_range(0..alphabet.len())].clone()).collect())
}

/// `det·bar(det) = 1`.
pub fn det_is_norm_one(m: &BlockMatrix) -> Result<bool> {
    let d = m.det()?;
    Ok((&d * &d.bar()).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hyp(g: usize, n: i64) -> QuadraticModule {
        QuadraticModule::hyperbolic(g, n, FormParameter::min(n))
    }

    #[test]
    fn identity_and_sigma_are_members() {
        for n in 2..=7 {
            let p = FormParameter::min(n);
            assert!(membership_by_conditions(&BlockMatrix::identity(2), n, p));
            assert!(membership_by_conditions(&sigma(n), n, p));
            assert!(membership_by_form(&sigma(n), &hyp(2, n)).unwrap());
        }
    }

    #[test]
    fn sigma_factorization_both_parities() {
        assert!(sigma_factorization_check(4));
        assert!(sigma_factorization_check(3));
        let [x, y, z] = sigma_factors(3);
        assert_ne!(&(&y * &x) * &z, sigma_local(3));
    }

    #[test]
    fn third_family_with_r_one() {
        let m = GeneratorSpec::new(Family::F3, LaurentPoly::one(), vec![0, 1]).instantiate(2, 4).unwrap();
        let expected = PolyMatrix::from_ints(&[vec![1, 1, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, -1, 1]]);
        assert_eq!(m.matrix(), &expected);
        // a_2 -> a_1 + a_2 and b_1 -> b_1 - b_2.
        assert_eq!(m.matrix().column(1), PolyMatrix::from_ints(&[vec![1], vec![1], vec![0], vec![0]]).column(0));
        assert_eq!(m.matrix().column(2), PolyMatrix::from_ints(&[vec![0], vec![0], vec![1], vec![-1]]).column(0));
    }

    #[test]
    fn generators_pass_both_predicates() {
        for n in 3..=6 {
            for g in [2, 3] {
                let q = hyp(g, n);
                for m in elementary_generators(g, n, 1).unwrap() {
                    assert!(membership_by_conditions(&m, n, FormParameter::min(n)));
                    assert!(membership_by_form(&m, &q).unwrap());
                    assert!(preserves_phi(&m, n));
                }
            }
        }
    }

    #[test]
    fn window_zero_even_n_has_no_transvections() {
        let specs = generator_specs(2, 4, 0).unwrap();
        assert!(specs.iter().all(|s| !matches!(s.family, Family::F5 | Family::F6)));
        let specs = generator_specs(2, 5, 0).unwrap();
        assert!(specs.iter().any(|s| s.family == Family::F5 && s.parameter == LaurentPoly::constant(2)));
        assert!(matches!(generator_specs(1, 4, 1), Err(Error::BadParameters(_))));
    }

    #[test]
    fn placement_matches_direct_instantiation() {
        let g = 3;
        for spec in generator_specs(g, 5, 1).unwrap() {
            let direct = spec.instantiate(g, 5).unwrap();
            let base = GeneratorSpec::new(spec.family, spec.parameter.clone(), (0..spec.positions.len()).collect())
                .instantiate(g, 5)
                .unwrap();
            let conj = base.conjugate_by_pair_permutation(&placing_permutation(g, &spec.positions)).unwrap();
            assert_eq!(direct, conj, "{spec:?}");
        }
    }

    #[test]
    fn det_splitting_examples() {
        assert_eq!(det_splitting(&BlockMatrix::identity(2)).unwrap(), Ratio::from_integer(0));
        let tt = BlockMatrix::new(PolyMatrix::diagonal(&[LaurentPoly::t(), LaurentPoly::t()])).unwrap();
        assert_eq!(det_splitting(&tt).unwrap(), Ratio::from_integer(1));
        let singular = BlockMatrix::new(PolyMatrix::diagonal(&[LaurentPoly::constant(2), LaurentPoly::one()])).unwrap();
        assert!(matches!(det_splitting(&singular), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn random_words_are_members() {
        assert_eq!(random_word(2, 4, 0, 1).unwrap(), BlockMatrix::identity(2));
        for seed in 0..30 {
            let n = 3 + (seed as i64 % 4);
            let w = random_word(2, n, 6, seed).unwrap();
            assert!(membership_by_conditions(&w, n, FormParameter::min(n)));
            assert!(det_is_norm_one(&w).unwrap());
            let letters = random_word_letters(2, n, 6, seed).unwrap();
            let expected: Ratio<i64> = letters.iter().map(|l| det_splitting(l).unwrap()).sum();
            assert_eq!(det_splitting(&w).unwrap(), expected);
        }
        assert_eq!(random_word(3, 5, 5, 42).unwrap(), random_word(3, 5, 5, 42).unwrap());
    }

    #[test]
    fn block_json_round_trip() {
        let w = random_word(2, 3, 4, 7).unwrap();
        assert_eq!(BlockMatrix::from_json(&w.to_json()).unwrap(), w);
        assert!(BlockMatrix::from_json("[[[[0,1]]],[[]]]").is_err());
    }
}
