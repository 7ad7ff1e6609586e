//! Modules with Frobenius operators `F_d`, tameness, the covering maps `τ_d`,
//! and the Frobenius action on the torsion coinvariants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

use crate::coinvariants::pairing_trace;
use crate::error::{Error, Result};
use crate::laurent::{epsilon, LaurentPoly};
use crate::poly_matrix::PolyMatrix;
use crate::snf::{cokernel, in_column_span, is_prime, map_on_cokernels, smith_normal_form, AbelianGroup, IntMatrix, InducedMap};

/// Default operator support.
pub const DEFAULT_SUPPORT: [u64; 4] = [2, 3, 4, 5];

/// A finitely presented abelian group `Z^rank / relations` with operators `F_d`
/// given on generators.
#[derive(Clone, Debug)]
pub struct FrobeniusModule {
    relations: IntMatrix,
    operators: BTreeMap<u64, IntMatrix>,
}

impl FrobeniusModule {
    /// Validates that each operator maps relations into relations.
    pub fn new(relations: IntMatrix, operators: BTreeMap<u64, IntMatrix>) -> Result<Self> {
        for (d, f) in &operators {
            if *d == 0 {
                return Err(Error::BadParameters("operators are indexed by d >= 1".into()));
            }
            if f.rows() != relations.rows() || f.cols() != relations.rows() {
                return Err(Error::DimensionMismatch { expected: relations.rows(), found: f.rows() });
            }
            map_on_cokernels(f, &relations, &relations)?;
        }
        Ok(Self { relations, operators })
    }

    pub fn zero() -> Self {
        Self { relations: IntMatrix::zeros(0, 0), operators: BTreeMap::new() }
    }

    /// `Z` with `F_d` multiplication by `d`.
    pub fn multiplication(support: &[u64]) -> Self {
        let ops = support.iter().map(|&d| (d, IntMatrix::from_rows(&[vec![d as i64]]))).collect();
        Self { relations: IntMatrix::zeros(1, 0), operators: ops }
    }

    /// `⊕ Z/orders[i]` (`0` meaning `Z`) with the given operators.
    pub fn from_orders(orders: &[u64], operators: BTreeMap<u64, IntMatrix>) -> Result<Self> {
        Self::new(diagonal_relations(orders), operators)
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn rank(&self) -> usize {
        self.relations.rows()
    }

    pub fn support(&self) -> Vec<u64> {
        self.operators.keys().copied().collect()
    }

    pub fn operator(&self, d: u64) -> Option<&IntMatrix> {
        self.operators.get(&d)
    }

    pub fn group(&self) -> AbelianGroup {
        cokernel(&self.relations)
    }

    pub fn induced(&self, d: u64) -> Result<InducedMap> {
        let f = self.operators.get(&d).ok_or_else(|| Error::BadParameters(format!("no operator F_{d}")))?;
        map_on_cokernels(f, &self.relations, &self.relations)
    }

    /// Whether two generator-level maps agree on the quotient.
    fn agree(&self, f: &IntMatrix, g: &IntMatrix) -> bool {
        (0..self.rank()).all(|j| {
            let diff: Vec<BigInt> = f.column(j).iter().zip(g.column(j)).map(|(a, b)| a - b).collect();
            diff.iter().all(Zero::is_zero) || in_column_span(&self.relations, &diff)
        })
    }

    /// `F_d ∘ F_e = F_{de}` whenever all three are present.
    pub fn is_multiplicative(&self) -> Result<bool> {
        for (&d, fd) in &self.operators {
            for (&e, fe) in &self.operators {
                if let Some(fde) = self.operators.get(&(d * e)) {
                    if !self.agree(&fd.try_mul(fe)?, fde) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Tests invertibility of every `F_d ⊗ Z[1/d]` in the support.
    pub fn is_tame(&self) -> Result<TameCertificate> {
        let mut checked = Vec::new();
        for &d in self.operators.keys() {
            let ok = self.induced(d)?.is_iso_after_inverting(d);
            checked.push((d, ok));
        }
        let failing = checked.iter().find(|(_, ok)| !ok).map(|(d, _)| *d);
        Ok(TameCertificate { tame: failing.is_none(), failing, checked })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TameCertificate {
    pub tame: bool,
    /// The first `d` whose operator is not invertible after inverting `d`.
    pub failing: Option<u64>,
    pub checked: Vec<(u64, bool)>,
}

/// Outcome of the criterion "epi after inverting d implies iso after inverting d".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CriterionOutcome {
    /// Not epi after inverting `d`; the criterion says nothing.
    NoClaim,
    Holds,
    Violated,
}

pub fn tame_criterion_check(f: &InducedMap, d: u64) -> CriterionOutcome {
    if !f.is_epi_after_inverting(d) {
        CriterionOutcome::NoClaim
    } else if f.is_iso_after_inverting(d) {
        CriterionOutcome::Holds
    } else {
        CriterionOutcome::Violated
    }
}

pub fn diagonal_relations(orders: &[u64]) -> IntMatrix {
    let torsion: Vec<usize> = (0..orders.len()).filter(|&i| orders[i] != 0).collect();
    let cols: Vec<Vec<BigInt>> = torsion
        .iter()
        .map(|&i| (0..orders.len()).map(|k| if k == i { BigInt::from(orders[i]) } else { BigInt::zero() }).collect())
        .collect();
    IntMatrix::from_columns(orders.len(), &cols)
}

/// A random endomorphism of `⊕ Z/orders[i]` (`0` meaning `Z`). Entry `(i, j)`
/// is a multiple of `a_i / gcd(a_i, a_j)` between torsion summands, and
/// torsion maps to zero in free summands.
pub fn random_endomorphism<R: Rng>(orders: &[u64], rng: &mut R, bound: i64) -> IntMatrix {
    let n = orders.len();
    let mut rows = vec![vec![0i64; n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let (ai, aj) = (orders[i], orders[j]);
            let x = rng.gen_range(-bound..=bound);
            *cell = match (ai, aj) {
                (0, 0) => x,
                (0, _) => 0,
                (_, 0) => x,
                _ => x * (ai / ai.gcd(&aj)) as i64,
            };
        }
    }
    IntMatrix::from_rows(&rows)
}

/// A random group `⊕ Z/a_i ⊕ Z^r` as a list of orders.
pub fn random_orders<R: Rng>(rng: &mut R, max_summands: usize) -> Vec<u64> {
    const CHOICES: [u64; 10] = [0, 2, 3, 4, 5, 6, 8, 9, 12, 0];
    let k = rng.gen_range(1..=max_summands);
    (0..k).map(|_| CHOICES[rng.gen_range(0..CHOICES.len())]).collect()
}

/// A random endomorphism biased towards the interesting cases: scalars `1`
/// and `d`, unitriangular maps, and unconstrained ones.
pub fn random_operator<R: Rng>(orders: &[u64], d: u64, rng: &mut R) -> IntMatrix {
    let n = orders.len();
    let scalar = |c: i64| IntMatrix::from_rows(&(0..n).map(|i| (0..n).map(|j| if i == j { c } else { 0 }).collect::<Vec<_>>()).collect::<Vec<_>>());
    match rng.gen_range(0..4) {
        0 => scalar(1),
        1 => scalar(d as i64),
        2 => {
            // Entries above the diagonal already respect the summand orders.
            let mut m = random_endomorphism(orders, rng, 2);
            for i in 0..n {
                for j in 0..=i {
                    m.set(i, j, BigInt::from(i32::from(i == j)));
                }
            }
            m
        }
        _ => random_endomorphism(orders, rng, 3),
    }
}

/// `0 → A → B → C → 0` with `B` presented by `[[R_A, Y], [0, R_C]]` and
/// `F_d^B = [[F_d^A, X_d], [0, F_d^C]]`.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub sub: FrobeniusModule,
    pub middle: FrobeniusModule,
    pub quotient: FrobeniusModule,
}

impl ShortExactSequence {
    /// Requires `R_C` to have full column rank so that `A → B` is injective.
    pub fn build(sub: &FrobeniusModule, quotient: &FrobeniusModule, twist: &IntMatrix, coupling: &BTreeMap<u64, IntMatrix>) -> Result<Self> {
        let (ra, rc) = (&sub.relations, &quotient.relations);
        let rc_rank = smith_normal_form(rc).diagonal().iter().filter(|x| !x.is_zero()).count();
        if rc_rank != rc.cols() {
            return Err(Error::BadParameters("quotient relations must be independent".into()));
        }
        if twist.rows() != ra.rows() || twist.cols() != rc.cols() {
            return Err(Error::DimensionMismatch { expected: ra.rows(), found: twist.rows() });
        }
        let (na, nc) = (ra.rows(), rc.rows());
        let mut rel = IntMatrix::zeros(na + nc, ra.cols() + rc.cols());
        for i in 0..na {
            for j in 0..ra.cols() {
                rel.set(i, j, ra.get(i, j).clone());
            }
            for j in 0..rc.cols() {
                rel.set(i, ra.cols() + j, twist.get(i, j).clone());
            }
        }
        for i in 0..nc {
            for j in 0..rc.cols() {
                rel.set(na + i, ra.cols() + j, rc.get(i, j).clone());
            }
        }
        let mut ops = BTreeMap::new();
        for d in sub.support() {
            let (fa, fc) = match (sub.operator(d), quotient.operator(d)) {
                (Some(a), Some(c)) => (a, c),
                _ => continue,
            };
            let x = coupling.get(&d).cloned().unwrap_or_else(|| IntMatrix::zeros(na, nc));
            let mut f = IntMatrix::zeros(na + nc, na + nc);
            for i in 0..na {
                for j in 0..na {
                    f.set(i, j, fa.get(i, j).clone());
                }
                for j in 0..nc {
                    f.set(i, na + j, x.get(i, j).clone());
                }
            }
            for i in 0..nc {
                for j in 0..nc {
                    f.set(na + i, na + j, fc.get(i, j).clone());
                }
            }
            ops.insert(d, f);
        }
        let middle = FrobeniusModule::new(rel, ops)?;
        Ok(Self { sub: sub.clone(), middle, quotient: quotient.clone() })
    }
}

/// The `d`-fold covering map `τ_d : π_n(X_g) → π_n(X_{dg})`, semilinear over `t^d ↦ T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringMap {
    pub d: u64,
    pub g: usize,
}

impl CoveringMap {
    pub fn new(d: u64, g: usize) -> Result<Self> {
        if d == 0 || g == 0 {
            return Err(Error::BadParameters("need d >= 1 and g >= 1".into()));
        }
        Ok(Self { d, g })
    }

    pub fn target_genus(&self) -> usize {
        self.d as usize * self.g
    }

    /// Image of the basis label `t^e x_p`, `0 <= e < d`, as an index in the target basis.
    pub fn label(&self, p: usize, e: u64) -> usize {
        let shift = e as usize * self.g;
        if p < self.g {
            p + shift
        } else {
            self.target_genus() + (p - self.g) + shift
        }
    }

    /// `t^m x_p ↦ T^k x_{label(p, r)}` with `m = kd + r`.
    pub fn monomial(&self, p: usize, m: i64) -> (usize, i64) {
        let d = self.d as i64;
        let (k, r) = m.div_mod_floor(&d);
        (self.label(p, r as u64), k)
    }

    pub fn apply_vector(&self, v: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
        if v.len() != 2 * self.g {
            return Err(Error::DimensionMismatch { expected: 2 * self.g, found: v.len() });
        }
        let mut out = vec![LaurentPoly::zero(); 2 * self.target_genus()];
        for (p, poly) in v.iter().enumerate() {
            for (m, c) in poly.terms() {
                let (q, k) = self.monomial(p, m);
                out[q].add_term(k, c.clone());
            }
        }
        Ok(out)
    }

    /// Pushes `Σ P_kl x_k ⊗ x_l` forward with the ring element kept on the left factor.
    pub fn apply_tensor(&self, p: &PolyMatrix) -> Result<PolyMatrix> {
        if p.rows() != 2 * self.g || p.cols() != 2 * self.g {
            return Err(Error::DimensionMismatch { expected: 2 * self.g, found: p.rows() });
        }
        let mut out = PolyMatrix::zeros(2 * self.target_genus(), 2 * self.target_genus());
        for k in 0..p.rows() {
            for l in 0..p.cols() {
                for (m, c) in p.get(k, l).terms() {
                    let (q, e) = self.monomial(k, m);
                    out.get_mut(q, self.label(l, 0)).add_term(e, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// The labels `(p, e)` map bijectively onto the target basis.
    pub fn is_label_bijection(&self) -> bool {
        let mut seen = vec![false; 2 * self.target_genus()];
        for p in 0..2 * self.g {
            for e in 0..self.d {
                let q = self.label(p, e);
                if q >= seen.len() || seen[q] {
                    return false;
                }
                seen[q] = true;
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// The closed formula: `F_d(t^a - t^-a)` is `t^{a/d} - t^{-a/d}` if `d | a`, else `0`,
/// returned as the index of the image generator.
pub fn frobenius_formula(d: u64, a: u64) -> Option<u64> {
    (d != 0 && a.is_multiple_of(d)).then(|| a / d)
}

/// `t^a - t^-a`.
pub fn antisymmetric(a: i64) -> LaurentPoly {
    LaurentPoly::from_terms([(a, 1), (-a, -1)])
}

/// `F_d` on the class `t^a - t^-a` through the cover: push
/// `t^a a_1 ⊗ b_1 - ε t^-a b_1 ⊗ a_1` along `τ_d`, pair in `X_{dg}`, and read
/// the answer in `T = t^d`.
pub fn frobenius_oracle(d: u64, a: i64, n: i64, g: usize) -> Result<LaurentPoly> {
    let cover = CoveringMap::new(d, g)?;
    let mut xi = PolyMatrix::zeros(2 * g, 2 * g);
    xi.set(0, g, LaurentPoly::monomial(1, a));
    xi.set(g, 0, LaurentPoly::monomial(-epsilon(n), -a));
    Ok(pairing_trace(&cover.apply_tensor(&xi)?, cover.target_genus(), n))
}

/// `φ` of the image of `a_1 ⊗ b_1 - ε b_1 ⊗ a_1` under `τ_d`: the order-2 class is fixed by every `F_d`.
pub fn frobenius_on_phi_class(d: u64, n: i64, g: usize) -> Result<u8> {
    let cover = CoveringMap::new(d, g)?;
    let mut xi = PolyMatrix::zeros(2 * g, 2 * g);
    xi.set(0, g, LaurentPoly::one());
    xi.set(g, 0, LaurentPoly::constant(-epsilon(n)));
    let image = cover.apply_tensor(&xi)?;
    let h = cover.target_genus();
    let total: BigInt = (0..h).map(|i| image.get(i, h + i).augmentation()).sum();
    Ok(total.mod_floor(&BigInt::from(2)).to_u8().expect("mod 2"))
}

/// Coefficients of `x = Σ c_b (t^b - t^-b)` for `b = 1..=window`.
pub fn antisymmetric_coordinates(x: &LaurentPoly, window: i64) -> Result<Vec<i64>> {
    if !(x + &x.bar()).is_zero() {
        return Err(Error::BadParameters(format!("{x} is not of the form Σ c (t^b - t^-b)")));
    }
    let mut out = vec![0; window as usize];
    for (b, c) in x.terms() {
        if b > window {
            return Err(Error::WindowOverflow);
        }
        if b > 0 {
            out[b as usize - 1] = c.to_i64().ok_or_else(|| Error::OutOfRange("coefficient".into()))?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct FrobeniusComparison {
    pub d: u64,
    pub n: i64,
    pub g: usize,
    pub window: i64,
    /// Column `a - 1` is the image of `t^a - t^-a`.
    pub formula: Vec<Vec<i64>>,
    pub oracle: Vec<Vec<i64>>,
    pub agree: bool,
}

/// `F_d` on `⊕_{0<a≤window} Z{t^a - t^-a}` computed by the closed formula and by the cover.
pub fn frobenius_on_coinvariants(d: u64, n: i64, g: usize, window: i64) -> Result<FrobeniusComparison> {
    if d == 0 || window < 1 || g == 0 {
        return Err(Error::BadParameters("need d >= 1, g >= 1 and window >= 1".into()));
    }
    let w = window as usize;
    let mut formula = vec![vec![0; w]; w];
    let mut oracle = vec![vec![0; w]; w];
    for a in 1..=window {
        if let Some(b) = frobenius_formula(d, a as u64) {
            formula[b as usize - 1][a as usize - 1] = 1;
        }
        let image = antisymmetric_coordinates(&frobenius_oracle(d, a, n, g)?, window)?;
        for (b, c) in image.into_iter().enumerate() {
            oracle[b][a as usize - 1] = c;
        }
    }
    Ok(FrobeniusComparison { d, n, g, window, agree: formula == oracle, formula, oracle })
}

/// The truncated module `⊕_{0<a≤window} Z/p{t^a - t^-a}` with the formula operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremBModule {
    pub p: u64,
    pub window: u64,
}

impl TheoremBModule {
    pub fn new(p: u64, window: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::BadParameters(format!("{p} is not prime")));
        }
        Ok(Self { p, window })
    }

    pub fn operator(&self, d: u64) -> IntMatrix {
        let w = self.window as usize;
        let mut m = IntMatrix::zeros(w, w);
        for a in 1..=self.window {
            if let Some(b) = frobenius_formula(d, a) {
                m.set(b as usize - 1, a as usize - 1, BigInt::from(1));
            }
        }
        m
    }

    pub fn to_module(&self, support: &[u64]) -> Result<FrobeniusModule> {
        let orders = vec![self.p; self.window as usize];
        FrobeniusModule::from_orders(&orders, support.iter().map(|&d| (d, self.operator(d))).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NoTameWitness {
    pub holds: bool,
    /// A prime `q ≠ p`, `q > window`, with `F_q = 0`; `None` for the zero module.
    pub q: Option<u64>,
}

/// A tame submodule `N` has `F_q` invertible on `N[1/q]`; with `F_q = 0` this
/// forces `N[1/q] = 0`, and `N = N[1/q]` because `N` is p-torsion.
pub fn no_tame_submodule(m: &TheoremBModule) -> Result<NoTameWitness> {
    if m.window == 0 {
        return Ok(NoTameWitness { holds: true, q: None });
    }
    let q = (m.window + 1..).find(|&q| is_prime(q) && q != m.p).expect("primes are unbounded");
    let module = m.to_module(&[q])?;
    let vanishes = module.induced(q)?.matrix.is_zero();
    let p_torsion = module.group().torsion.iter().all(|o| *o == BigInt::from(m.p)) && module.group().free_rank == 0;
    Ok(NoTameWitness { holds: vanishes && p_torsion, q: Some(q) })
}
