use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::variable::Variable;
use super::weight::{MultiWeight, Parity};
use super::AlgebraError;
use crate::par::{self, Execution};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn integer(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Product of variables in canonical order. Odd variables occur at most once.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(Variable, u32)>,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(v: &Variable) -> Self {
        Monomial {
            factors: vec![(v.clone(), 1)],
        }
    }

    pub fn factors(&self) -> &[(Variable, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: &Variable) -> u32 {
        self.factors
            .iter()
            .find(|(w, _)| w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn contains(&self, v: &Variable) -> bool {
        self.exponent(v) > 0
    }

    pub fn weight(&self) -> MultiWeight {
        self.factors.iter().fold(MultiWeight::zero(), |acc, (v, e)| {
            (0..*e).fold(acc, |a, _| &a + v.weight())
        })
    }

    pub fn parity(&self) -> Parity {
        Parity::from_bit(self.odd_count() as u64)
    }

    fn odd_count(&self) -> usize {
        self.factors.iter().filter(|(v, _)| v.is_odd()).count()
    }

    /// Canonical product; `None` when an odd variable repeats. The flag
    /// reports whether reordering produced a minus sign.
    pub fn mul(&self, other: &Monomial) -> Option<(Monomial, bool)> {
        let mut negative = false;
        for (b, _) in other.factors.iter().filter(|(v, _)| v.is_odd()) {
            for (a, _) in self.factors.iter().filter(|(v, _)| v.is_odd()) {
                match a.cmp(b) {
                    Ordering::Equal => return None,
                    Ordering::Greater => negative = !negative,
                    Ordering::Less => {}
                }
            }
        }
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (a, ea) = &self.factors[i];
            let (b, eb) = &other.factors[j];
            match a.cmp(b) {
                Ordering::Less => {
                    factors.push((a.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    factors.push((b.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    factors.push((a.clone(), ea + eb));
                    i += 1;
                    j += 1;
                }
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Some((Monomial { factors }, negative))
    }

    /// Left derivative: the variable is first moved to the front.
    fn partial_left(&self, v: &Variable) -> Option<(Monomial, Rational)> {
        let idx = self.factors.iter().position(|(w, _)| w == v)?;
        if v.is_odd() {
            let before = self.factors[..idx].iter().filter(|(w, _)| w.is_odd()).count();
            let mut factors = self.factors.clone();
            factors.remove(idx);
            let sign = if before % 2 == 0 { 1 } else { -1 };
            Some((Monomial { factors }, integer(sign)))
        } else {
            Some(self.lower_even(idx))
        }
    }

    /// Right derivative: the variable is first moved to the back.
    fn partial_right(&self, v: &Variable) -> Option<(Monomial, Rational)> {
        let idx = self.factors.iter().position(|(w, _)| w == v)?;
        if v.is_odd() {
            let after = self.factors[idx + 1..]
                .iter()
                .filter(|(w, _)| w.is_odd())
                .count();
            let mut factors = self.factors.clone();
            factors.remove(idx);
            let sign = if after % 2 == 0 { 1 } else { -1 };
            Some((Monomial { factors }, integer(sign)))
        } else {
            Some(self.lower_even(idx))
        }
    }

    fn lower_even(&self, idx: usize) -> (Monomial, Rational) {
        let mut factors = self.factors.clone();
        let e = factors[idx].1;
        if e == 1 {
            factors.remove(idx);
        } else {
            factors[idx].1 = e - 1;
        }
        (Monomial { factors }, integer(i64::from(e)))
    }

    pub fn render(&self) -> String {
        if self.factors.is_empty() {
            return "1".to_string();
        }
        self.factors
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.name().to_string()
                } else {
                    format!("{}^{}", v.name(), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Result of a homogeneity query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Homogeneity {
    /// The zero polynomial, homogeneous of every weight.
    Zero,
    Homogeneous(MultiWeight),
    Inhomogeneous,
}

impl Homogeneity {
    pub fn is(&self, w: &MultiWeight) -> bool {
        match self {
            Homogeneity::Zero => true,
            Homogeneity::Homogeneous(x) => x == w,
            Homogeneity::Inhomogeneous => false,
        }
    }
}

impl fmt::Display for Homogeneity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homogeneity::Zero => f.write_str("zero"),
            Homogeneity::Homogeneous(w) => write!(f, "{w}"),
            Homogeneity::Inhomogeneous => f.write_str("inhomogeneous"),
        }
    }
}

const PARALLEL_PRODUCT_THRESHOLD: usize = 4096;

/// Polynomial over ℚ in supercommuting variables, kept in canonical form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SuperPolynomial {
    terms: BTreeMap<Monomial, Rational>,
}

pub type Assignment = BTreeMap<Variable, SuperPolynomial>;

impl SuperPolynomial {
    pub fn zero() -> Self {
        SuperPolynomial::default()
    }

    pub fn one() -> Self {
        SuperPolynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        SuperPolynomial::term(Monomial::one(), c)
    }

    pub fn int(n: i64) -> Self {
        SuperPolynomial::constant(integer(n))
    }

    pub fn var(v: &Variable) -> Self {
        SuperPolynomial::term(Monomial::var(v), Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SuperPolynomial { terms }
    }

    /// Ordered product of the given variables with a coefficient.
    pub fn product_of(c: Rational, vars: &[&Variable]) -> Self {
        vars.iter()
            .fold(SuperPolynomial::constant(c), |acc, v| &acc * &SuperPolynomial::var(v))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    fn accumulate(terms: &mut BTreeMap<Monomial, Rational>, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SuperPolynomial::zero();
        }
        SuperPolynomial {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&integer(n))
    }

    pub fn mul_with(&self, other: &SuperPolynomial, exec: Execution) -> SuperPolynomial {
        let work = self.len() * other.len();
        if exec == Execution::Parallel && work >= PARALLEL_PRODUCT_THRESHOLD && self.len() > 1 {
            let lhs: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
            let chunk = lhs.len().div_ceil(16).max(1);
            let chunks: Vec<&[(&Monomial, &Rational)]> = lhs.chunks(chunk).collect();
            let partials = par::map(exec, &chunks, |chunk| {
                let mut acc = BTreeMap::new();
                for (ma, ca) in chunk.iter() {
                    Self::mul_term_into(&mut acc, ma, ca, other);
                }
                acc
            });
            let mut terms = BTreeMap::new();
            for part in partials {
                for (m, c) in part {
                    Self::accumulate(&mut terms, m, c);
                }
            }
            SuperPolynomial { terms }
        } else {
            let mut terms = BTreeMap::new();
            for (ma, ca) in &self.terms {
                Self::mul_term_into(&mut terms, ma, ca, other);
            }
            SuperPolynomial { terms }
        }
    }

    fn mul_term_into(
        acc: &mut BTreeMap<Monomial, Rational>,
        ma: &Monomial,
        ca: &Rational,
        other: &SuperPolynomial,
    ) {
        for (mb, cb) in &other.terms {
            if let Some((m, negative)) = ma.mul(mb) {
                let c = ca * cb;
                Self::accumulate(acc, m, if negative { -c } else { c });
            }
        }
    }

    pub fn pow(&self, n: u32) -> SuperPolynomial {
        (0..n).fold(SuperPolynomial::one(), |acc, _| &acc * self)
    }

    /// Left partial derivative.
    pub fn partial(&self, v: &Variable) -> SuperPolynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((dm, f)) = m.partial_left(v) {
                Self::accumulate(&mut terms, dm, c * f);
            }
        }
        SuperPolynomial { terms }
    }

    /// Right partial derivative.
    pub fn partial_right(&self, v: &Variable) -> SuperPolynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if let Some((dm, f)) = m.partial_right(v) {
                Self::accumulate(&mut terms, dm, c * f);
            }
        }
        SuperPolynomial { terms }
    }

    /// Algebra homomorphism determined by the images of variables. Variables
    /// without an image are left unchanged.
    pub fn substitute(&self, assignment: &Assignment) -> Result<SuperPolynomial, AlgebraError> {
        for (v, img) in assignment {
            if !img.is_parity_homogeneous(v.parity()) {
                return Err(AlgebraError::ParityMismatch {
                    variable: v.name().to_string(),
                    expected: v.parity(),
                });
            }
        }
        Ok(self.substitute_unchecked(assignment))
    }

    /// As [`substitute`](Self::substitute) without the parity check.
    pub fn substitute_unchecked(&self, assignment: &Assignment) -> SuperPolynomial {
        let mut powers: BTreeMap<(Variable, u32), SuperPolynomial> = BTreeMap::new();
        let mut out = SuperPolynomial::zero();
        for (m, c) in &self.terms {
            let mut acc = SuperPolynomial::constant(c.clone());
            for (v, e) in m.factors() {
                let Some(img) = assignment.get(v) else {
                    acc = &acc * &SuperPolynomial::term(
                        Monomial {
                            factors: vec![(v.clone(), *e)],
                        },
                        Rational::one(),
                    );
                    continue;
                };
                let key = (v.clone(), *e);
                if !powers.contains_key(&key) {
                    powers.insert(key.clone(), img.pow(*e));
                }
                acc = &acc * &powers[&key];
                if acc.is_zero() {
                    break;
                }
            }
            out += &acc;
        }
        out
    }

    /// Replaces variables by other variables, possibly of different parity,
    /// re-canonicalising each monomial.
    pub fn relabel(&self, map: &BTreeMap<Variable, Variable>) -> SuperPolynomial {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut acc = Some((Monomial::one(), false));
            for (v, e) in m.factors() {
                let target = map.get(v).unwrap_or(v);
                for _ in 0..*e {
                    acc = acc.and_then(|(mm, neg)| {
                        mm.mul(&Monomial::var(target)).map(|(r, n)| (r, neg ^ n))
                    });
                }
            }
            if let Some((mm, neg)) = acc {
                Self::accumulate(&mut terms, mm, if neg { -c.clone() } else { c.clone() });
            }
        }
        SuperPolynomial { terms }
    }

    pub fn weight_of(&self) -> Homogeneity {
        let mut weights = self.terms.keys().map(Monomial::weight);
        let Some(first) = weights.next() else {
            return Homogeneity::Zero;
        };
        if weights.all(|w| w == first) {
            Homogeneity::Homogeneous(first)
        } else {
            Homogeneity::Inhomogeneous
        }
    }

    /// Parity of a nonzero parity-homogeneous polynomial.
    pub fn parity(&self) -> Option<Parity> {
        let mut ps = self.terms.keys().map(Monomial::parity);
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    pub fn is_parity_homogeneous(&self, p: Parity) -> bool {
        self.terms.keys().all(|m| m.parity() == p)
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn contains_var(&self, v: &Variable) -> bool {
        self.terms.keys().any(|m| m.contains(v))
    }

    /// Keeps only the terms satisfying the predicate.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> SuperPolynomial {
        SuperPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Sets the given variables to zero.
    pub fn kill(&self, vars: &BTreeSet<Variable>) -> SuperPolynomial {
        self.filter_terms(|m| m.factors().iter().all(|(v, _)| !vars.contains(v)))
    }

    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let coeff = if abs.is_integer() {
                abs.numer().to_string()
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            if m.is_one() {
                out.push_str(&coeff);
            } else if abs.is_one() {
                out.push_str(&m.render());
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&m.render());
            }
        }
        out
    }
}

impl fmt::Display for SuperPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl AddAssign<&SuperPolynomial> for SuperPolynomial {
    fn add_assign(&mut self, rhs: &SuperPolynomial) {
        for (m, c) in &rhs.terms {
            Self::accumulate(&mut self.terms, m.clone(), c.clone());
        }
    }
}

impl SubAssign<&SuperPolynomial> for SuperPolynomial {
    fn sub_assign(&mut self, rhs: &SuperPolynomial) {
        for (m, c) in &rhs.terms {
            Self::accumulate(&mut self.terms, m.clone(), -c.clone());
        }
    }
}

impl Add<&SuperPolynomial> for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn add(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&SuperPolynomial> for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn sub(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&SuperPolynomial> for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn mul(self, rhs: &SuperPolynomial) -> SuperPolynomial {
        self.mul_with(rhs, Execution::default())
    }
}

impl Neg for &SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        SuperPolynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Neg for SuperPolynomial {
    type Output = SuperPolynomial;
    fn neg(self) -> SuperPolynomial {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<SuperPolynomial> for SuperPolynomial {
            type Output = SuperPolynomial;
            fn $m(self, rhs: SuperPolynomial) -> SuperPolynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&SuperPolynomial> for SuperPolynomial {
            type Output = SuperPolynomial;
            fn $m(self, rhs: &SuperPolynomial) -> SuperPolynomial {
                (&self).$m(rhs)
            }
        }
        impl $tr<SuperPolynomial> for &SuperPolynomial {
            type Output = SuperPolynomial;
            fn $m(self, rhs: SuperPolynomial) -> SuperPolynomial {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl From<&Variable> for SuperPolynomial {
    fn from(v: &Variable) -> Self {
        SuperPolynomial::var(v)
    }
}

impl From<Rational> for SuperPolynomial {
    fn from(c: Rational) -> Self {
        SuperPolynomial::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> (Variable, Variable, Variable, Variable) {
        (
            Variable::ranked(0, "x", 0, Parity::Even),
            Variable::ranked(1, "y", 1, Parity::Even),
            Variable::ranked(2, "xi", 1, Parity::Odd),
            Variable::ranked(3, "eta", 1, Parity::Odd),
        )
    }

    fn p(v: &Variable) -> SuperPolynomial {
        SuperPolynomial::var(v)
    }

    #[test]
    fn odd_variables_anticommute() {
        let (_, _, xi, eta) = vars();
        let a = &p(&xi) * &p(&eta);
        let b = &p(&eta) * &p(&xi);
        assert_eq!(b, -&a);
        assert!((&p(&xi) * &p(&xi)).is_zero());
        assert_eq!(a.render(), "xi*eta");
    }

    #[test]
    fn square_with_odd_pair() {
        // (x + ξη)² = x² + 2xξη; the (ξη)² term dies by nilpotence.
        let (x, _, xi, eta) = vars();
        let s = &p(&x) + &(&p(&xi) * &p(&eta));
        let expected = &p(&x).pow(2) + &SuperPolynomial::product_of(integer(2), &[&x, &xi, &eta]);
        assert_eq!(&s * &s, expected);
    }

    #[test]
    fn left_and_right_derivatives() {
        let (x, y, xi, eta) = vars();
        let xe = &p(&xi) * &p(&eta);
        assert_eq!(xe.partial(&xi), p(&eta));
        assert_eq!(xe.partial(&eta), -p(&xi));
        assert_eq!(xe.partial_right(&eta), p(&xi));
        assert_eq!(xe.partial_right(&xi), -p(&eta));
        let x2y = &p(&x).pow(2) * &p(&y);
        assert_eq!(x2y.partial(&x), SuperPolynomial::product_of(integer(2), &[&x, &y]));
    }

    #[test]
    fn substitution_examples() {
        let (x, y, xi, eta) = vars();
        let yp = Variable::ranked(0, "y'", 1, Parity::Even);
        let mut a = Assignment::new();
        a.insert(y.clone(), &p(&x) * &p(&yp));
        let out = p(&y).pow(2).substitute(&a).unwrap();
        assert_eq!(out, &p(&x).pow(2) * &p(&yp).pow(2));

        let mut swap = Assignment::new();
        swap.insert(xi.clone(), p(&eta));
        swap.insert(eta.clone(), p(&xi));
        let xe = &p(&xi) * &p(&eta);
        assert_eq!(xe.substitute(&swap).unwrap(), -&xe);

        let mut bad = Assignment::new();
        bad.insert(xi.clone(), p(&x));
        assert!(matches!(
            xe.substitute(&bad),
            Err(AlgebraError::ParityMismatch { .. })
        ));
    }

    #[test]
    fn weights() {
        let y2 = Variable::even("y2", 2);
        let y1 = Variable::even("y1", 1);
        let x = Variable::even("x", 0);
        assert_eq!(
            (&p(&y2) * &p(&y1)).weight_of(),
            Homogeneity::Homogeneous(MultiWeight::single(3))
        );
        assert_eq!((&p(&x) + &p(&y1)).weight_of(), Homogeneity::Inhomogeneous);
        assert_eq!(SuperPolynomial::zero().weight_of(), Homogeneity::Zero);
    }

    #[test]
    fn relabel_flips_parity_with_signs() {
        let a = Variable::ranked(0, "a", 0, Parity::Even);
        let b = Variable::ranked(1, "b", 0, Parity::Even);
        let q = &p(&b) * &p(&a);
        let mut map = BTreeMap::new();
        map.insert(a.clone(), a.with_parity(Parity::Odd));
        map.insert(b.clone(), b.with_parity(Parity::Odd));
        let r = q.relabel(&map);
        // The stored form is a·b, which reads as a·b after the flip.
        let expected = &p(&a.with_parity(Parity::Odd)) * &p(&b.with_parity(Parity::Odd));
        assert_eq!(r.relabel(&map.iter().map(|(k, v)| (v.clone(), k.clone())).collect()), q);
        assert_eq!(r, expected);
    }

    #[test]
    fn rendering() {
        let (x, y, _, _) = vars();
        let q = &(&p(&x).scale(&rational(-1, 2)) + &p(&y).pow(2)) - &SuperPolynomial::int(3);
        assert_eq!(q.render(), "-3 - 1/2*x + y^2");
    }
}
