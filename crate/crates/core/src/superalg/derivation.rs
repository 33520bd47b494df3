use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::poly::{Rational, SuperPolynomial};
use super::variable::Variable;
use super::weight::{Parity, WeightShift};
use crate::par::{self, Execution};

/// A graded vector field `Σ a^v ∂/∂v`, stored by its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    parity: Parity,
    shift: WeightShift,
    action: BTreeMap<Variable, SuperPolynomial>,
}

/// A coordinate whose coefficient breaks the declared weight or parity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneityFault {
    pub variable: Variable,
    pub coefficient: SuperPolynomial,
    pub reason: String,
}

impl Derivation {
    pub fn new(parity: Parity, shift: WeightShift) -> Self {
        Derivation {
            parity,
            shift,
            action: BTreeMap::new(),
        }
    }

    pub fn zero(parity: Parity, shift: WeightShift) -> Self {
        Derivation::new(parity, shift)
    }

    pub fn with(mut self, v: &Variable, coeff: SuperPolynomial) -> Self {
        self.set(v, coeff);
        self
    }

    pub fn set(&mut self, v: &Variable, coeff: SuperPolynomial) {
        if coeff.is_zero() {
            self.action.remove(v);
        } else {
            self.action.insert(v.clone(), coeff);
        }
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn weight_shift(&self) -> &WeightShift {
        &self.shift
    }

    pub fn action(&self) -> &BTreeMap<Variable, SuperPolynomial> {
        &self.action
    }

    pub fn coefficient(&self, v: &Variable) -> SuperPolynomial {
        self.action.get(v).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.action.is_empty()
    }

    /// `Σ_v a^v · ∂_v p` with left derivatives.
    pub fn apply(&self, p: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for v in p.variables() {
            if let Some(a) = self.action.get(&v) {
                out += &(a * &p.partial(&v));
            }
        }
        out
    }

    /// Graded commutator `D1∘D2 − (−1)^{|D1||D2|} D2∘D1` in coefficient form.
    pub fn commutator(&self, other: &Derivation) -> Derivation {
        self.commutator_with(other, Execution::default())
    }

    pub fn commutator_with(&self, other: &Derivation, exec: Execution) -> Derivation {
        let sign = Parity::koszul(self.parity, other.parity);
        let keys: Vec<Variable> = self
            .action
            .keys()
            .chain(other.action.keys())
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let coeffs = par::map(exec, &keys, |v| {
            let a = self.apply(&other.coefficient(v));
            let b = other.apply(&self.coefficient(v));
            if sign == 1 {
                &a - &b
            } else {
                &a + &b
            }
        });
        let mut out = Derivation::new(self.parity + other.parity, &self.shift + &other.shift);
        for (v, c) in keys.iter().zip(coeffs) {
            out.set(v, c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Derivation {
        let mut out = Derivation::new(self.parity, self.shift.clone());
        for (v, a) in &self.action {
            out.set(v, a.scale(c));
        }
        out
    }

    pub fn add(&self, other: &Derivation) -> Derivation {
        let mut out = self.clone();
        for (v, a) in &other.action {
            let c = &out.coefficient(v) + a;
            out.set(v, c);
        }
        out
    }

    pub fn sub(&self, other: &Derivation) -> Derivation {
        self.add(&other.scale(&super::poly::integer(-1)))
    }

    /// Restricts to the given coordinates.
    pub fn restrict(&self, vars: &BTreeSet<Variable>) -> Derivation {
        let mut out = Derivation::new(self.parity, self.shift.clone());
        for (v, a) in &self.action {
            if vars.contains(v) {
                out.set(v, a.clone());
            }
        }
        out
    }

    /// Every variable occurring in a coefficient or as a coordinate.
    pub fn variables(&self) -> BTreeSet<Variable> {
        let mut out: BTreeSet<Variable> = self.action.keys().cloned().collect();
        for a in self.action.values() {
            out.extend(a.variables());
        }
        out
    }

    /// Checks that every coefficient has weight `w(v) + shift` and parity
    /// `|v| + |D|`.
    pub fn homogeneity_faults(&self) -> Vec<HomogeneityFault> {
        let mut faults = Vec::new();
        for (v, a) in &self.action {
            match v.weight().shifted(&self.shift) {
                None => faults.push(HomogeneityFault {
                    variable: v.clone(),
                    coefficient: a.clone(),
                    reason: "target weight is negative".into(),
                }),
                Some(w) if !a.weight_of().is(&w) => faults.push(HomogeneityFault {
                    variable: v.clone(),
                    coefficient: a.clone(),
                    reason: format!("expected weight {}, found {}", w.render(3), a.weight_of()),
                }),
                _ => {}
            }
            if !a.is_parity_homogeneous(v.parity() + self.parity) {
                faults.push(HomogeneityFault {
                    variable: v.clone(),
                    coefficient: a.clone(),
                    reason: format!("expected parity {}", v.parity() + self.parity),
                });
            }
        }
        faults
    }

    pub fn render(&self) -> String {
        if self.action.is_empty() {
            return "0".to_string();
        }
        self.action
            .iter()
            .map(|(v, a)| format!("({a})*d/d{v}"))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::superalg::integer;

    fn p(v: &Variable) -> SuperPolynomial {
        SuperPolynomial::var(v)
    }

    #[test]
    fn de_rham_squares_to_zero() {
        let x = Variable::ranked(0, "x", 0, Parity::Even);
        let xi = Variable::ranked(1, "xi", [0, 1], Parity::Odd);
        let q = Derivation::new(Parity::Odd, WeightShift::from([0, 1])).with(&x, p(&xi));
        assert_eq!(q.apply(&p(&x).pow(2)), SuperPolynomial::product_of(integer(2), &[&x, &xi]));
        assert!(q.commutator(&q).is_zero());
        assert!(q.homogeneity_faults().is_empty());
    }

    #[test]
    fn classical_commutator() {
        let x = Variable::even("x", 0);
        let d = Derivation::new(Parity::Even, WeightShift::zero()).with(&x, SuperPolynomial::one());
        let e = Derivation::new(Parity::Even, WeightShift::zero()).with(&x, p(&x));
        assert_eq!(d.commutator(&e), d);
    }

    #[test]
    fn odd_square_is_twice_composition() {
        // D = x ∂_ξ: D(ξ) = x, D(x) = 0, so [D,D] = 2 D(x) ∂_ξ = 0.
        let x = Variable::ranked(0, "x", 0, Parity::Even);
        let xi = Variable::ranked(1, "xi", 0, Parity::Odd);
        let d = Derivation::new(Parity::Odd, WeightShift::zero()).with(&xi, p(&x));
        assert!(d.commutator(&d).is_zero());
        // D' = ξ ∂_x + x ∂_ξ: [D',D'](x) = 2D'(ξ) = 2x, [D',D'](ξ) = 2D'(x) = 2ξ.
        let d2 = d.clone().with(&x, p(&xi));
        let sq = d2.commutator(&d2);
        assert_eq!(sq.coefficient(&x), p(&x).scale_int(2));
        assert_eq!(sq.coefficient(&xi), p(&xi).scale_int(2));
    }

    #[test]
    fn weight_vector_field_counts_weight() {
        let y = Variable::even("y", 2);
        let delta = Derivation::new(Parity::Even, WeightShift::zero()).with(&y, p(&y).scale_int(2));
        assert_eq!(delta.apply(&p(&y)), p(&y).scale_int(2));
        assert!(delta.apply(&SuperPolynomial::int(5)).is_zero());
    }
}
