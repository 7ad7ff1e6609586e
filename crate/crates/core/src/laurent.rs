//! Sparse Laurent polynomials over the integers, i.e. the group ring Z[t, t^-1]
//! of the infinite cyclic group, together with the bar involution and the
//! form parameters used by quadratic modules over it.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of Z[t, t^-1], stored as exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The group element `t`.
    pub fn t() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant<C: Into<BigInt>>(c: C) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * t^e`.
    pub fn monomial<C: Into<BigInt>>(c: C, e: i64) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Self { terms }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, summing repeats.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Largest absolute exponent, 0 for the zero polynomial.
    pub fn exponent_radius(&self) -> i64 {
        self.terms.keys().map(|e| e.abs()).max().unwrap_or(0)
    }

    /// The bar involution `t^i -> t^-i`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// The augmentation `t -> 1`.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Substitutes `t -> t^d`.
    pub fn substitute_power(&self, d: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (e * d, c.clone())))
    }

    /// Reduces every coefficient into `[0, m)`; `m = 0` leaves the polynomial unchanged.
    pub fn reduce_coefficients(&self, m: &BigInt) -> Self {
        if m.is_zero() {
            return self.clone();
        }
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.mod_floor(m))))
    }

    /// Returns `(sign, exponent)` when `self = sign * t^exponent`.
    pub fn unit_decompose(&self) -> Result<(i8, i64)> {
        if self.terms.len() != 1 {
            return Err(Error::NotAUnit(self.to_string()));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        if c.is_one() {
            Ok((1, *e))
        } else if (-c).is_one() {
            Ok((-1, *e))
        } else {
            Err(Error::NotAUnit(self.to_string()))
        }
    }

    pub fn is_unit(&self) -> bool {
        self.unit_decompose().is_ok()
    }

    /// Exact quotient `self / divisor` in Z[t, t^-1], or `None` if it does not divide.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.terms.len() == 1 {
            let (de, dc) = divisor.terms.iter().next().unwrap();
            let mut out = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                out.insert(e - de, q);
            }
            return Some(Self { terms: out });
        }
        // Long division from the top degree; a Laurent quotient exists iff the
        // ordinary polynomial quotient of the shifted numerators is exact.
        let (d_top, d_lead) = divisor.terms.iter().next_back().map(|(e, c)| (*e, c.clone()))?;
        let d_low = divisor.min_exponent()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(r_top) = rem.max_exponent() {
            let r_low = rem.min_exponent().unwrap();
            if r_top - r_low < d_top - d_low {
                return None;
            }
            let r_lead = rem.coeff(r_top);
            let (q, r) = r_lead.div_rem(&d_lead);
            if !r.is_zero() {
                return None;
            }
            let shift = r_top - d_top;
            quot.add_term(shift, q.clone());
            for (e, c) in &divisor.terms {
                rem.add_term(e + shift, -(c * &q));
            }
        }
        Some(quot)
    }

    /// Parses the `[[exponent, coefficient], ...]` JSON form.
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization cannot fail")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "{c}*t^{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Accepts the canonical `c*t^e + ...` form and the usual shorthands
    /// (`t`, `-t^2`, `3`, `2*t`, ` - ` as a separator).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed Laurent polynomial `{s}`"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        // Split into signed terms. A '-' directly after '^' belongs to an exponent.
        let mut pieces = Vec::new();
        let mut current = String::new();
        let mut prev: Option<char> = None;
        for ch in compact.chars() {
            if (ch == '+' || ch == '-') && !current.is_empty() && prev != Some('^') && prev != Some('+') {
                pieces.push(std::mem::take(&mut current));
                if ch == '-' {
                    current.push('-');
                }
            } else if ch == '+' && prev == Some('+') {
                return Err(bad());
            } else if !(ch == '+' && current.is_empty()) {
                current.push(ch);
            }
            prev = Some(ch);
        }
        if !current.is_empty() {
            pieces.push(current);
        }
        let mut p = Self::zero();
        for piece in pieces {
            let (neg, body) = match piece.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, piece.as_str()),
            };
            // "-" directly followed by a negative coefficient, e.g. "+ -3*t^2".
            let (neg, body) = match body.strip_prefix('-') {
                Some(rest) => (!neg, rest),
                None => (neg, body),
            };
            let (coef_str, mono) = match body.find('t') {
                Some(idx) => {
                    let coef = body[..idx].trim_end_matches('*');
                    (coef, Some(&body[idx..]))
                }
                None => (body, None),
            };
            let mut coef = if coef_str.is_empty() {
                if mono.is_none() {
                    return Err(bad());
                }
                BigInt::one()
            } else {
                BigInt::from_str(coef_str).map_err(|_| bad())?
            };
            if neg {
                coef = -coef;
            }
            let exp = match mono {
                None => 0,
                Some("t") => 1,
                Some(m) => m
                    .strip_prefix("t^")
                    .ok_or_else(bad)?
                    .trim_start_matches('(')
                    .trim_end_matches(')')
                    .parse::<i64>()
                    .map_err(|_| bad())?,
            };
            p.add_term(exp, coef);
        }
        Ok(p)
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            match c.to_i64() {
                Some(small) => seq.serialize_element(&(e, small))?,
                None => seq.serialize_element(&(e, c.to_string()))?,
            }
        }
        seq.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Small(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;
        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an array of [exponent, coefficient] pairs")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<LaurentPoly, A::Error> {
                let mut p = LaurentPoly::zero();
                while let Some((e, c)) = seq.next_element::<(i64, JsonCoeff)>()? {
                    let c = match c {
                        JsonCoeff::Small(v) => BigInt::from(v),
                        JsonCoeff::Big(s) => BigInt::from_str(&s).map_err(de::Error::custom)?,
                    };
                    p.add_term(e, c);
                }
                Ok(p)
            }
        }
        deserializer.deserialize_seq(PolyVisitor)
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self += &rhs;
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, rhs: LaurentPoly) -> LaurentPoly {
        self -= &rhs;
        self
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, -c);
        }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

/// Which of the nested subgroups `MIN ⊆ FULL ⊆ MAX` of Z[t, t^-1] is meant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamVariant {
    /// `{a - ε·bar(a)}`.
    Min,
    /// `Min`, enlarged by the constant 1 when n is 3 or 7.
    Full,
    /// `{a : a + ε·bar(a) = 0}`.
    Max,
}

/// A form parameter in Z[t, t^-1] for the sign `ε = (-1)^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormParameter {
    n: i64,
    variant: ParamVariant,
}

impl FormParameter {
    pub fn new(n: i64, variant: ParamVariant) -> Self {
        Self { n, variant }
    }

    pub fn min(n: i64) -> Self {
        Self::new(n, ParamVariant::Min)
    }

    pub fn full(n: i64) -> Self {
        Self::new(n, ParamVariant::Full)
    }

    pub fn max(n: i64) -> Self {
        Self::new(n, ParamVariant::Max)
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn variant(&self) -> ParamVariant {
        self.variant
    }

    /// `ε = (-1)^n`.
    pub fn epsilon(&self) -> i64 {
        epsilon(self.n)
    }

    pub fn n_is_3_or_7(&self) -> bool {
        self.n == 3 || self.n == 7
    }

    /// Whether the constant term is unconstrained (as opposed to lying in `(1-ε)Z`).
    fn free_constant(&self) -> bool {
        match self.variant {
            ParamVariant::Min => false,
            ParamVariant::Full => self.n_is_3_or_7(),
            // a + ε·bar(a) = 0 forces 2·u0 = 0 for ε = 1 and nothing for ε = -1.
            ParamVariant::Max => self.epsilon() == -1,
        }
    }

    /// Membership of `p = Σ u_a t^a`: `u_{-a} = -ε·u_a` for `a > 0`, and the
    /// constant term in `(1-ε)Z` (or unconstrained where the variant allows).
    pub fn contains(&self, p: &LaurentPoly) -> bool {
        let eps = BigInt::from(self.epsilon());
        for (e, c) in p.terms() {
            if e > 0 && p.coeff(-e) != -(&eps * c) {
                return false;
            }
            if e < 0 && p.coeff(-e).is_zero() {
                return false;
            }
        }
        let u0 = p.coeff(0);
        if self.free_constant() {
            return true;
        }
        let modulus = 1 - self.epsilon();
        if modulus == 0 {
            u0.is_zero()
        } else {
            u0.is_multiple_of(&BigInt::from(modulus))
        }
    }

    /// A canonical representative of the class of `p` in `Z[t, t^-1] / Λ`,
    /// supported on exponents `>= 0`.
    pub fn reduce(&self, p: &LaurentPoly) -> LaurentPoly {
        let eps = BigInt::from(self.epsilon());
        let mut out = LaurentPoly::zero();
        for (e, c) in p.terms() {
            if e > 0 {
                out.add_term(e, c.clone());
            } else if e < 0 {
                // t^{-a} ≡ ε·t^a, since t^a - ε·t^{-a} lies in Λ.
                out.add_term(-e, &eps * c);
            }
        }
        let u0 = p.coeff(0);
        let c0 = if self.free_constant() {
            BigInt::zero()
        } else {
            match 1 - self.epsilon() {
                0 => u0,
                m => u0.mod_floor(&BigInt::from(m)),
            }
        };
        out.add_term(0, c0);
        out
    }

    /// `a - ε·bar(a)`, the generic element of the minimal parameter.
    pub fn symmetrize(&self, a: &LaurentPoly) -> LaurentPoly {
        a - &a.bar().scale(&BigInt::from(self.epsilon()))
    }

    /// A Z-basis of the parameter truncated to exponents in `[-window, window]`.
    pub fn truncated_basis(&self, window: i64) -> Vec<LaurentPoly> {
        let eps = self.epsilon();
        let mut basis = Vec::new();
        if self.free_constant() {
            basis.push(LaurentPoly::one());
        } else if eps == -1 {
            basis.push(LaurentPoly::constant(2));
        }
        for a in 1..=window {
            basis.push(LaurentPoly::from_terms([(a, 1), (-a, -eps)]));
        }
        basis
    }
}

/// `(-1)^n`.
pub fn epsilon(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_poly(rng: &mut impl Rng, radius: i64, terms: usize) -> LaurentPoly {
        LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(-radius..=radius), rng.gen_range(-4i64..=4))))
    }

    #[test]
    fn bar_examples() {
        assert_eq!(LaurentPoly::zero().bar(), LaurentPoly::zero());
        let p: LaurentPoly = "t^2 + 3*t^-1".parse().unwrap();
        let expected = LaurentPoly::from_terms([(-2, 1), (1, 3)]);
        assert_eq!(p.bar(), expected);
        assert_eq!(p.bar().bar(), p);
    }

    #[test]
    fn bar_is_multiplicative_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let p = random_poly(&mut rng, 5, 4);
            let q = random_poly(&mut rng, 5, 4);
            // Direct expansion: (Σ p_i t^i)(Σ q_j t^j) has t^-(i+j) coefficient p_i q_j after bar.
            let mut expanded = LaurentPoly::zero();
            for (i, a) in p.terms() {
                for (j, b) in q.terms() {
                    expanded.add_term(-(i + j), a * b);
                }
            }
            assert_eq!((&p * &q).bar(), expanded);
            assert_eq!((&p * &q).bar(), &p.bar() * &q.bar());
        }
    }

    #[test]
    fn membership_examples() {
        let even = FormParameter::min(4);
        assert!(even.contains(&"t - t^-1".parse().unwrap()));
        assert!(!even.contains(&LaurentPoly::one()));
        let odd = FormParameter::min(5);
        assert!(odd.contains(&LaurentPoly::constant(2)));
        assert!(!odd.contains(&LaurentPoly::one()));
        assert!(FormParameter::full(3).contains(&LaurentPoly::one()));
        assert!(FormParameter::full(7).contains(&LaurentPoly::one()));
        assert!(!FormParameter::full(5).contains(&LaurentPoly::one()));
        assert!(FormParameter::max(5).contains(&LaurentPoly::one()));
        assert!(!FormParameter::max(4).contains(&LaurentPoly::one()));
    }

    #[test]
    fn constructed_elements_are_members() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 2..=8 {
            let param = FormParameter::min(n);
            for _ in 0..500 {
                let a = random_poly(&mut rng, 6, 5);
                assert!(param.contains(&param.symmetrize(&a)), "n={n} a={a}");
            }
        }
    }

    #[test]
    fn members_are_reconstructed_from_the_triangular_system() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 2..=7 {
            let param = FormParameter::min(n);
            let eps = epsilon(n);
            for _ in 0..300 {
                let p = random_poly(&mut rng, 3, 3);
                if !param.contains(&p) {
                    continue;
                }
                // a_a = u_a for a > 0, and the constant u0/2 (ε = -1) or 0 (ε = 1).
                let mut a = LaurentPoly::zero();
                for (e, c) in p.terms() {
                    if e > 0 {
                        a.add_term(e, c.clone());
                    }
                }
                if eps == -1 {
                    a.add_term(0, p.coeff(0) / BigInt::from(2));
                }
                assert_eq!(param.symmetrize(&a), p);
            }
        }
    }

    #[test]
    fn parameters_are_nested_and_reduce_consistently() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 2..=8 {
            let (min, full, max) = (FormParameter::min(n), FormParameter::full(n), FormParameter::max(n));
            for _ in 0..400 {
                let p = random_poly(&mut rng, 2, 3);
                if min.contains(&p) {
                    assert!(full.contains(&p));
                }
                if full.contains(&p) {
                    assert!(max.contains(&p));
                }
                for param in [min, full, max] {
                    assert_eq!(param.contains(&p), param.reduce(&p).is_zero(), "n={n} p={p}");
                    assert!(param.contains(&(&p - &param.reduce(&p))));
                }
            }
        }
    }

    #[test]
    fn min_is_closed_under_sums_and_unit_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for n in 2..=7 {
            let param = FormParameter::min(n);
            for _ in 0..200 {
                let x = param.symmetrize(&random_poly(&mut rng, 4, 3));
                let y = param.symmetrize(&random_poly(&mut rng, 4, 3));
                assert!(param.contains(&(&x + &y)));
                let u = LaurentPoly::monomial(if rng.gen() { 1 } else { -1 }, rng.gen_range(-3..=3));
                assert!(param.contains(&(&(&u * &x) * &u.bar())));
            }
        }
    }

    #[test]
    fn unit_decomposition() {
        assert_eq!(LaurentPoly::monomial(-1, 3).unit_decompose().unwrap(), (-1, 3));
        assert_eq!(LaurentPoly::monomial(1, 2).unit_decompose().unwrap(), (1, 2));
        let one_plus_t: LaurentPoly = "1 + t".parse().unwrap();
        assert!(matches!(one_plus_t.unit_decompose(), Err(Error::NotAUnit(_))));
        assert!(LaurentPoly::constant(2).unit_decompose().is_err());
        assert!(LaurentPoly::zero().unit_decompose().is_err());
    }

    #[test]
    fn one_plus_t_has_no_inverse_by_degree_count() {
        // A product of Laurent polynomials has span equal to the sum of spans,
        // so 1 + t (span 1) can never multiply to a monomial (span 0).
        let one_plus_t: LaurentPoly = "1 + t".parse().unwrap();
        assert!(LaurentPoly::one().div_exact(&one_plus_t).is_none());
    }

    #[test]
    fn exact_division() {
        let a: LaurentPoly = "1 + t".parse().unwrap();
        let b: LaurentPoly = "2*t^-3 - t^-1 + 5*t^4".parse().unwrap();
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&LaurentPoly::constant(2)).is_none());
    }

    #[test]
    fn text_form_round_trips() {
        let p = LaurentPoly::from_terms([(-1, 1), (2, -3), (0, 7)]);
        let s = p.to_string();
        assert_eq!(s, "1*t^-1 + 7*t^0 + -3*t^2");
        let back: LaurentPoly = s.parse().unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_string(), s);
        assert_eq!("0".parse::<LaurentPoly>().unwrap(), LaurentPoly::zero());
        assert_eq!("-t^2 - 2*t + 3".parse::<LaurentPoly>().unwrap(), LaurentPoly::from_terms([(2, -1), (1, -2), (0, 3)]));
        assert!("t^".parse::<LaurentPoly>().is_err());
        assert!("".parse::<LaurentPoly>().is_err());
    }

    #[test]
    fn json_form_round_trips() {
        let big = BigInt::from(i64::MAX) * 1000;
        let mut p = LaurentPoly::from_terms([(-2, 5), (3, -1)]);
        p.add_term(7, big);
        let json = p.to_json();
        assert!(json.starts_with("[[-2,5],[3,-1],[7,\""));
        let back = LaurentPoly::from_json(&json).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.to_json(), json);
        assert_eq!(LaurentPoly::from_json("[]").unwrap(), LaurentPoly::zero());
    }
}
