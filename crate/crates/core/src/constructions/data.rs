use std::collections::BTreeMap;

use super::StructureConstants;
use crate::bundle::CoordinateSystem;
use crate::superalg::{rational, Derivation, Parity, SuperPolynomial, Variable, WeightShift};

/// A skew algebroid `E → M` in one chart: base coordinates `x^A`, a fiber
/// basis `e_a`, anchor `ρ(e_a) = P^A_a ∂_A` and bracket
/// `[e_a, e_b] = C^c_{ab} e_c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidData {
    base: CoordinateSystem,
    rank: usize,
    /// `(a, x^A) ↦ P^A_a`.
    anchor: BTreeMap<(usize, Variable), SuperPolynomial>,
    /// `(a, b, c) ↦ C^c_{ab}`.
    bracket: BTreeMap<(usize, usize, usize), SuperPolynomial>,
}

pub fn xi_name(a: usize) -> String {
    format!("xi_{}", a + 1)
}

impl AlgebroidData {
    /// Zero anchor and bracket over the given base chart, whose coordinates
    /// must all have weight 0.
    pub fn new(base: CoordinateSystem, rank: usize) -> Self {
        assert!(
            base.variables().iter().all(|v| v.weight().is_zero() && !v.is_odd()),
            "algebroid base coordinates are even of weight 0"
        );
        AlgebroidData {
            base,
            rank,
            anchor: BTreeMap::new(),
            bracket: BTreeMap::new(),
        }
    }

    /// A Lie algebra as an algebroid over a point.
    pub fn lie_algebra(c: &StructureConstants) -> Self {
        let mut out = AlgebroidData::new(CoordinateSystem::new("U", 2), c.dim());
        for a in 0..c.dim() {
            for b in 0..c.dim() {
                for k in 0..c.dim() {
                    out.set_bracket(a, b, k, SuperPolynomial::constant(c.get(a, b, k).clone()));
                }
            }
        }
        out
    }

    /// `TM` with the identity anchor and the bracket of coordinate fields.
    pub fn tangent(base: CoordinateSystem) -> Self {
        let n = base.len();
        let mut out = AlgebroidData::new(base, n);
        for (a, x) in out.base.variables().to_vec().iter().enumerate() {
            out.set_anchor(a, x, SuperPolynomial::one());
        }
        out
    }

    pub fn base(&self) -> &CoordinateSystem {
        &self.base
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn set_anchor(&mut self, a: usize, x: &Variable, p: SuperPolynomial) {
        if p.is_zero() {
            self.anchor.remove(&(a, x.clone()));
        } else {
            self.anchor.insert((a, x.clone()), p);
        }
    }

    pub fn anchor(&self, a: usize, x: &Variable) -> SuperPolynomial {
        self.anchor.get(&(a, x.clone())).cloned().unwrap_or_default()
    }

    /// Sets `C^c_{ab}` alone.
    pub fn set_bracket(&mut self, a: usize, b: usize, c: usize, p: SuperPolynomial) {
        if p.is_zero() {
            self.bracket.remove(&(a, b, c));
        } else {
            self.bracket.insert((a, b, c), p);
        }
    }

    pub fn bracket(&self, a: usize, b: usize, c: usize) -> SuperPolynomial {
        self.bracket.get(&(a, b, c)).cloned().unwrap_or_default()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.bracket
            .keys()
            .all(|&(a, b, c)| (&self.bracket(a, b, c) + &self.bracket(b, a, c)).is_zero())
    }

    /// Chart of `ΠE`: the base followed by odd `ξ^a` of bi-weight `(0,1)`.
    pub fn odd_chart(&self) -> CoordinateSystem {
        let mut chart = CoordinateSystem::new(self.base.name(), 2);
        for x in self.base.variables() {
            chart = chart.even(x.name(), [0, 0]);
        }
        for a in 0..self.rank {
            chart = chart.odd(&xi_name(a), [0, 1]);
        }
        chart
    }

    /// `Q = ξ^a P^A_a ∂_A − ½ C^c_{ab} ξ^a ξ^b ∂_{ξ^c}` on [`Self::odd_chart`].
    pub fn q(&self) -> Derivation {
        let chart = self.odd_chart();
        let xi: Vec<Variable> = (0..self.rank).map(|a| chart.var(&xi_name(a)).clone()).collect();
        let mut q = Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]));
        for ((a, x), p) in &self.anchor {
            let x = chart.var(x.name());
            let term = &SuperPolynomial::var(&xi[*a]) * &relabel_to(p, &chart);
            q.set(x, &q.coefficient(x) + &term);
        }
        for ((a, b, c), p) in &self.bracket {
            let term = (&(&SuperPolynomial::var(&xi[*a]) * &SuperPolynomial::var(&xi[*b])) * &relabel_to(p, &chart))
                .scale(&rational(-1, 2));
            q.set(&xi[*c], &q.coefficient(&xi[*c]) + &term);
        }
        q
    }

    pub fn is_lie(&self) -> bool {
        let q = self.q();
        q.commutator(&q).is_zero()
    }
}

/// Rewrites a polynomial in base coordinates into the same-named coordinates
/// of `chart`.
pub(crate) fn relabel_to(p: &SuperPolynomial, chart: &CoordinateSystem) -> SuperPolynomial {
    let map: BTreeMap<Variable, Variable> = p
        .variables()
        .into_iter()
        .map(|v| {
            let w = chart.var(v.name()).clone();
            (v, w)
        })
        .collect();
    p.relabel(&map)
}
