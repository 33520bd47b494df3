use super::{AlgebroidError, OddPhaseSpace};
use crate::superalg::{Homogeneity, MultiWeight, SuperPolynomial, Variable};

/// Overall sign relating the derived bracket `[[s₁,P],s₂]` to the algebroid
/// bracket whose anchor term enters with `+`: `derived = SIGN · bracket`.
pub const DERIVED_BRACKET_SIGN: i64 = -1;

/// A section of degree `r` of `D → B`, written `Σ_I f^I(x) π_I` on the phase
/// space; it has tri-weight `(r−1, 0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidSection {
    degree: u64,
    poly: SuperPolynomial,
}

impl AlgebroidSection {
    pub fn new(space: &OddPhaseSpace, poly: SuperPolynomial, degree: u64) -> Result<Self, AlgebroidError> {
        space.check(&poly)?;
        if degree == 0 {
            return Err(AlgebroidError::CoordinateMismatch("sections have degree at least 1".into()));
        }
        let momenta: Vec<&Variable> = space.fiber().iter().map(|t| space.pi(t)).collect();
        for (m, _) in poly.terms() {
            let mut count = 0;
            for (v, e) in m.factors() {
                if momenta.contains(&v) {
                    count += e;
                } else if !space.base().contains(v) {
                    return Err(AlgebroidError::CoordinateMismatch(format!(
                        "section term {} involves `{v}`",
                        m.render()
                    )));
                }
            }
            if count != 1 {
                return Err(AlgebroidError::CoordinateMismatch(format!(
                    "section term {} is not linear in the momenta",
                    m.render()
                )));
            }
        }
        let expected = MultiWeight::new(vec![degree as u32 - 1, 0, 1]);
        if !poly.weight_of().is(&expected) {
            return Err(AlgebroidError::CoordinateMismatch(format!(
                "section {poly} is not of tri-weight {}",
                expected.render(3)
            )));
        }
        Ok(AlgebroidSection { degree, poly })
    }

    /// Reads the degree off a nonzero homogeneous polynomial.
    pub fn from_poly(space: &OddPhaseSpace, poly: SuperPolynomial) -> Result<Self, AlgebroidError> {
        match poly.weight_of() {
            Homogeneity::Homogeneous(w) => {
                let r = w.component(0) as u64 + 1;
                AlgebroidSection::new(space, poly, r)
            }
            other => Err(AlgebroidError::CoordinateMismatch(format!(
                "cannot read a degree off weight {other}"
            ))),
        }
    }

    /// `Σ_I f^I π_I` from fiber coordinate and coefficient pairs.
    pub fn from_components(
        space: &OddPhaseSpace,
        components: &[(Variable, SuperPolynomial)],
        degree: u64,
    ) -> Result<Self, AlgebroidError> {
        let mut poly = SuperPolynomial::zero();
        for (theta, f) in components {
            if !space.fiber().contains(theta) {
                return Err(AlgebroidError::CoordinateMismatch(format!("`{theta}` is not a fiber coordinate")));
            }
            poly += &(f * &SuperPolynomial::var(space.pi(theta)));
        }
        AlgebroidSection::new(space, poly, degree)
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn poly(&self) -> &SuperPolynomial {
        &self.poly
    }

    /// Coefficient `f^I` of `π_I`.
    pub fn component(&self, space: &OddPhaseSpace, theta: &Variable) -> SuperPolynomial {
        self.poly.partial_right(space.pi(theta))
    }
}

/// Smallest representable section degree: `k − u_max` with `u_max` the
/// largest first weight of a fiber coordinate.
pub fn min_section_degree(space: &OddPhaseSpace) -> u64 {
    let top = space.fiber().iter().map(|t| t.weight().component(0) as u64).max().unwrap_or(0);
    space.degree() - top
}

/// `[[s₁, P], s₂]`, a section of degree `r₁ + r₂ − k`.
pub fn derived_bracket(
    space: &OddPhaseSpace,
    s1: &AlgebroidSection,
    s2: &AlgebroidSection,
    p: &SuperPolynomial,
) -> Result<AlgebroidSection, AlgebroidError> {
    let k = space.degree();
    let total = s1.degree + s2.degree;
    let min = min_section_degree(space);
    if total < k + min {
        return Err(AlgebroidError::DegreeUnderflow {
            degree: total as i64 - k as i64,
            minimum: min,
        });
    }
    let inner = space.schouten(&s1.poly, p)?;
    let out = space.schouten(&inner, &s2.poly)?;
    AlgebroidSection::new(space, out, total - k)
}

/// `ρ(s)(f) = Σ s^I P^α_I ∂_α f` for a base function `f`.
pub fn anchor_action(
    space: &OddPhaseSpace,
    q: &crate::superalg::Derivation,
    s: &AlgebroidSection,
    f: &SuperPolynomial,
) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero();
    for x in space.base() {
        let df = f.partial(x);
        if df.is_zero() {
            continue;
        }
        for t in space.fiber() {
            let coeff = super::anchor_coefficient(q, x, t);
            out += &(&(&s.component(space, t) * &coeff) * &df);
        }
    }
    out
}
