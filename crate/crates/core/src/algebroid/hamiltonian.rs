use super::{AlgebroidError, OddPhaseSpace};
use crate::superalg::{Derivation, Parity, SuperPolynomial, Variable, WeightShift};

/// Number of fiber (`θ`) factors, counted with multiplicity, if constant
/// across terms.
fn fiber_degree(p: &SuperPolynomial, space: &OddPhaseSpace) -> Option<u32> {
    let mut degrees = p.terms().map(|(m, _)| {
        m.factors()
            .iter()
            .filter(|(v, _)| space.fiber().contains(v))
            .map(|(_, e)| *e)
            .sum::<u32>()
    });
    let first = degrees.next()?;
    degrees.all(|d| d == first).then_some(first)
}

fn base_only(p: &SuperPolynomial, space: &OddPhaseSpace) -> bool {
    p.variables()
        .iter()
        .all(|v| space.base().contains(v) || space.fiber().contains(v))
}

fn shape_ok(p: &SuperPolynomial, space: &OddPhaseSpace, degree: u32) -> bool {
    p.is_zero() || (base_only(p, space) && fiber_degree(p, space) == Some(degree))
}

/// `P = Σ_x Q(x)·χ_x − Σ_θ Q(θ)·π_θ` for `Q = θP∂_x − ½θθP∂_θ`.
pub fn p_from_q(q: &Derivation, space: &OddPhaseSpace) -> Result<SuperPolynomial, AlgebroidError> {
    if q.parity() != Parity::Odd {
        return Err(AlgebroidError::MalformedQ("the field is even".into()));
    }
    let mut p = SuperPolynomial::zero();
    for (v, a) in q.action() {
        if space.base().contains(v) {
            if !shape_ok(a, space, 1) {
                return Err(AlgebroidError::MalformedQ(format!("Q({v}) = {a} is not linear in the fiber")));
            }
            p += &(a * &SuperPolynomial::var(space.chi(v)));
        } else if space.fiber().contains(v) {
            if !shape_ok(a, space, 2) {
                return Err(AlgebroidError::MalformedQ(format!("Q({v}) = {a} is not quadratic in the fiber")));
            }
            p -= &(a * &SuperPolynomial::var(space.pi(v)));
        } else {
            return Err(AlgebroidError::MalformedQ(format!("`{v}` is not a coordinate of ΠD")));
        }
    }
    Ok(p)
}

/// `Q(x) = ∂^R_{χ_x} P`, `Q(θ) = −∂^R_{π_θ} P`.
pub fn q_from_p(p: &SuperPolynomial, space: &OddPhaseSpace) -> Result<Derivation, AlgebroidError> {
    space.check(p)?;
    let momenta: Vec<Variable> = space
        .base()
        .iter()
        .map(|x| space.chi(x).clone())
        .chain(space.fiber().iter().map(|t| space.pi(t).clone()))
        .collect();
    for (m, _) in p.terms() {
        let count: u32 = m
            .factors()
            .iter()
            .filter(|(v, _)| momenta.contains(v))
            .map(|(_, e)| *e)
            .sum();
        if count != 1 {
            return Err(AlgebroidError::MalformedP(format!(
                "term {} is not linear in the momenta",
                m.render()
            )));
        }
    }
    let mut q = Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]));
    for x in space.base() {
        let a = p.partial_right(space.chi(x));
        if !shape_ok(&a, space, 1) {
            return Err(AlgebroidError::MalformedP(format!("anchor part of {x} is {a}")));
        }
        q.set(x, a);
    }
    for t in space.fiber() {
        let a = -p.partial_right(space.pi(t));
        if !shape_ok(&a, space, 2) {
            return Err(AlgebroidError::MalformedP(format!("bracket part of {t} is {a}")));
        }
        q.set(t, a);
    }
    Ok(q)
}

/// `P^α_I = ∂_{θ^I} Q(x^α)`.
pub fn anchor_coefficient(q: &Derivation, x: &Variable, theta: &Variable) -> SuperPolynomial {
    q.coefficient(x).partial(theta)
}

/// `P^K_{IJ} = −∂_{θ^I} ∂_{θ^J} Q(θ^K)`, antisymmetric in `I, J`.
pub fn bracket_coefficient(q: &Derivation, i: &Variable, j: &Variable, k: &Variable) -> SuperPolynomial {
    -q.coefficient(k).partial(j).partial(i)
}
