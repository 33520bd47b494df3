use std::collections::BTreeMap;

use super::AlgebroidError;
use crate::bundle::CoordinateSystem;
use crate::par::{self, Execution};
use crate::superalg::{MultiWeight, Parity, SuperPolynomial, Variable};

/// `Σ_(q,p) ∂^R_q F · ∂^L_p G − ∂^R_p F · ∂^L_q G` over Darboux pairs whose
/// members have opposite parity; `[q, p] = 1` for every pair.
pub fn schouten_pairs(pairs: &[(Variable, Variable)], f: &SuperPolynomial, g: &SuperPolynomial) -> SuperPolynomial {
    schouten_pairs_with(pairs, f, g, Execution::default())
}

pub fn schouten_pairs_with(
    pairs: &[(Variable, Variable)],
    f: &SuperPolynomial,
    g: &SuperPolynomial,
    exec: Execution,
) -> SuperPolynomial {
    let (fv, gv) = (f.variables(), g.variables());
    let active: Vec<&(Variable, Variable)> = pairs
        .iter()
        .filter(|(q, p)| (fv.contains(q) && gv.contains(p)) || (fv.contains(p) && gv.contains(q)))
        .collect();
    let parts = par::map(exec, &active, |(q, p)| {
        &(&f.partial_right(q) * &g.partial(p)) - &(&f.partial_right(p) * &g.partial(q))
    });
    parts.iter().fold(SuperPolynomial::zero(), |acc, t| &acc + t)
}

/// Phase space `ΠT*D*` built over a chart of `ΠD`: base coordinates `x` of
/// tri-weight `(u,0,0)`, odd fiber coordinates `θ` of `(u,1,0)`, momenta
/// `π_θ` of `(k−1−u,0,1)` and odd momenta `χ_x` of `(k−1−u,1,1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddPhaseSpace {
    degree: u64,
    chart: CoordinateSystem,
    base: Vec<Variable>,
    fiber: Vec<Variable>,
    chi: BTreeMap<Variable, Variable>,
    pi: BTreeMap<Variable, Variable>,
}

impl OddPhaseSpace {
    pub fn new(pd: &CoordinateSystem, k: u64) -> Result<Self, AlgebroidError> {
        if k == 0 {
            return Err(AlgebroidError::CoordinateMismatch("degree 0 carrier".into()));
        }
        let mut base = Vec::new();
        let mut fiber = Vec::new();
        for v in pd.variables() {
            let (w1, w2) = (v.weight().component(0) as u64, v.weight().component(1));
            let expected = Parity::from_bit(w2 as u64);
            if w2 > 1 || v.weight().arity() > 2 || v.parity() != expected || w1 + w2 as u64 > k {
                return Err(AlgebroidError::CoordinateMismatch(format!(
                    "`{v}` is not a coordinate of a parity-reversed GL-bundle of degree {k}"
                )));
            }
            if w2 == 0 {
                base.push(v.clone());
            } else {
                fiber.push(v.clone());
            }
        }
        let mut taken = pd.names();
        let mut rank = pd.next_rank();
        let mut vars = pd.variables().to_vec();
        let mut fresh = |prefix: &str, v: &Variable, weight: MultiWeight, parity: Parity| {
            let name = CoordinateSystem::fresh_name(&taken, prefix, v.name());
            taken.insert(name.clone());
            let out = Variable::ranked(rank, name, weight, parity);
            rank += 1;
            out
        };
        let mut pi = BTreeMap::new();
        for t in &fiber {
            let a = t.weight().component(0);
            let p = fresh("pi_", t, MultiWeight::new(vec![k as u32 - 1 - a, 0, 1]), Parity::Even);
            vars.push(p.clone());
            pi.insert(t.clone(), p);
        }
        let mut chi = BTreeMap::new();
        for x in &base {
            let w = x.weight().component(0);
            if w as u64 > k - 1 {
                return Err(AlgebroidError::CoordinateMismatch(format!("base coordinate `{x}` has weight {w} ≥ {k}")));
            }
            let c = fresh("chi_", x, MultiWeight::new(vec![k as u32 - 1 - w, 1, 1]), Parity::Odd);
            vars.push(c.clone());
            chi.insert(x.clone(), c);
        }
        let chart = CoordinateSystem::from_variables(pd.name(), 3, vars)
            .map_err(|e| AlgebroidError::CoordinateMismatch(e.to_string()))?;
        Ok(OddPhaseSpace {
            degree: k,
            chart,
            base,
            fiber,
            chi,
            pi,
        })
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn chart(&self) -> &CoordinateSystem {
        &self.chart
    }

    pub fn base(&self) -> &[Variable] {
        &self.base
    }

    pub fn fiber(&self) -> &[Variable] {
        &self.fiber
    }

    pub fn chi(&self, x: &Variable) -> &Variable {
        &self.chi[x]
    }

    pub fn pi(&self, theta: &Variable) -> &Variable {
        &self.pi[theta]
    }

    /// Darboux pairs `(x, χ_x)` and `(π_θ, θ)`.
    pub fn pairs(&self) -> Vec<(Variable, Variable)> {
        let mut out: Vec<(Variable, Variable)> = self.chi.iter().map(|(x, c)| (x.clone(), c.clone())).collect();
        out.extend(self.pi.iter().map(|(t, p)| (p.clone(), t.clone())));
        out
    }

    pub fn check(&self, f: &SuperPolynomial) -> Result<(), AlgebroidError> {
        match f.variables().into_iter().find(|v| !self.chart.contains(v)) {
            Some(v) => Err(AlgebroidError::CoordinateMismatch(format!(
                "`{v}` is not a coordinate of the phase space"
            ))),
            None => Ok(()),
        }
    }

    /// The canonical Schouten bracket, of tri-weight `(1−k, −1, −1)`.
    pub fn schouten(&self, f: &SuperPolynomial, g: &SuperPolynomial) -> Result<SuperPolynomial, AlgebroidError> {
        self.check(f)?;
        self.check(g)?;
        Ok(schouten_pairs(&self.pairs(), f, g))
    }
}
