use std::collections::{BTreeMap, BTreeSet};

use super::{anchor_coefficient, bracket_coefficient, p_from_q, AlgebroidError, OddPhaseSpace};
use crate::bundle::CoordinateSystem;
use crate::linfun::{check_symmetric, is_fiber, parity_reverse, reconstruct, GLBundle, GradedMorphism};
use crate::report::Check;
use crate::superalg::{rational, Assignment, Derivation, MultiWeight, Parity, SuperPolynomial, Variable, WeightShift};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgebroidKind {
    General,
    Skew,
    Lie,
}

impl std::fmt::Display for AlgebroidKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AlgebroidKind::General => "general",
            AlgebroidKind::Skew => "skew",
            AlgebroidKind::Lie => "lie",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidDiagnostics {
    /// `None` when the field is not an odd field of bi-weight `(0,1)`.
    pub kind: Option<AlgebroidKind>,
    pub checks: Vec<Check>,
    /// `[Q, Q]`.
    pub square: Derivation,
}

/// Checks that `q` is an odd field of bi-weight `(0,1)` on the chart `pd`
/// of `ΠD` and classifies it by `[Q, Q]`.
pub fn check_weighted_algebroid(q: &Derivation, pd: &CoordinateSystem) -> AlgebroidDiagnostics {
    let mut checks = Vec::new();
    checks.push(Check::new("Q.odd", q.parity() == Parity::Odd, format!("parity {}", q.parity())));
    let expected = WeightShift::new(vec![0, 1]);
    checks.push(
        Check::new("Q.weight", q.weight_shift() == &expected, format!("shift {}", q.weight_shift().render(2)))
            .with_weight(expected.render(2)),
    );
    let faults = q.homogeneity_faults();
    checks.push(Check::new(
        "Q.homogeneous",
        faults.is_empty(),
        faults
            .iter()
            .map(|f| format!("{}: {}", f.variable, f.reason))
            .collect::<Vec<_>>()
            .join("; "),
    ));
    let foreign: Vec<String> = q
        .variables()
        .into_iter()
        .filter(|v| !pd.contains(v))
        .map(|v| v.name().to_string())
        .collect();
    checks.push(Check::new("Q.coordinates", foreign.is_empty(), foreign.join(", ")));
    let well_formed = checks.iter().all(|c| c.passed);
    let square = q.commutator(q);
    let residual = square
        .action()
        .iter()
        .fold(SuperPolynomial::zero(), |acc, (_, a)| &acc + a);
    let mut sq = Check::new("[Q,Q]", square.is_zero(), square.render());
    if !square.is_zero() {
        sq = sq.with_residual(residual);
    }
    checks.push(sq);
    let kind = well_formed.then(|| {
        if square.is_zero() {
            AlgebroidKind::Lie
        } else {
            AlgebroidKind::Skew
        }
    });
    AlgebroidDiagnostics { kind, checks, square }
}

/// Structure functions `P^α_I` and `P^K_{IJ}` with no symmetry imposed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFunctions {
    /// `(θ^I, x^α) ↦ P^α_I`.
    pub anchor: BTreeMap<(Variable, Variable), SuperPolynomial>,
    /// `(θ^I, θ^J, θ^K) ↦ P^K_{IJ}`.
    pub bracket: BTreeMap<(Variable, Variable, Variable), SuperPolynomial>,
}

impl StructureFunctions {
    pub fn from_q(q: &Derivation, space: &OddPhaseSpace) -> Self {
        let mut out = StructureFunctions::default();
        for x in space.base() {
            for t in space.fiber() {
                let c = anchor_coefficient(q, x, t);
                if !c.is_zero() {
                    out.anchor.insert((t.clone(), x.clone()), c);
                }
            }
        }
        for i in space.fiber() {
            for j in space.fiber() {
                for k in space.fiber() {
                    let c = bracket_coefficient(q, i, j, k);
                    if !c.is_zero() {
                        out.bracket.insert((i.clone(), j.clone(), k.clone()), c);
                    }
                }
            }
        }
        out
    }

    pub fn is_skew(&self) -> bool {
        let zero = SuperPolynomial::zero();
        self.bracket.iter().all(|((i, j, k), c)| {
            let swapped = self.bracket.get(&(j.clone(), i.clone(), k.clone())).unwrap_or(&zero);
            (c + swapped).is_zero()
        })
    }

    /// `Q = θ^I P^α_I ∂_α − ½ θ^J θ^I P^K_{IJ} ∂_K`; only the antisymmetric
    /// part of `P^K_{IJ}` survives.
    pub fn to_q(&self) -> Derivation {
        let mut q = Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]));
        for ((t, x), c) in &self.anchor {
            let term = &SuperPolynomial::var(t) * c;
            q.set(x, &q.coefficient(x) + &term);
        }
        let half = rational(-1, 2);
        for ((i, j, k), c) in &self.bracket {
            let term = (&(&SuperPolynomial::var(j) * &SuperPolynomial::var(i)) * c).scale(&half);
            q.set(k, &q.coefficient(k) + &term);
        }
        q
    }

    pub fn kind(&self, pd: &CoordinateSystem) -> Option<AlgebroidKind> {
        if !self.is_skew() {
            return Some(AlgebroidKind::General);
        }
        check_weighted_algebroid(&self.to_q(), pd).kind
    }
}

/// `(x, θ)` coordinates of `ΠA₁`: weight `(0,0)` and `(0,1)`.
fn a1_coordinates(pd: &CoordinateSystem) -> BTreeSet<Variable> {
    pd.variables()
        .iter()
        .filter(|v| v.weight().component(0) == 0 && v.weight().component(1) <= 1)
        .cloned()
        .collect()
}

/// The projection `d_ε` of `Q` to `ΠA₁`.
pub fn restrict_to_a1(q: &Derivation, pd: &CoordinateSystem) -> Result<Derivation, AlgebroidError> {
    let a1 = a1_coordinates(pd);
    for v in &a1 {
        let c = q.coefficient(v);
        if let Some(bad) = c.variables().into_iter().find(|u| !a1.contains(u)) {
            return Err(AlgebroidError::ProjectionObstruction {
                variable: v.name().to_string(),
                offending: bad.name().to_string(),
            });
        }
    }
    Ok(q.restrict(&a1))
}

/// `Q(αΦ) = d_ε(α)Φ + (−1)^{|α|} α Q(Φ)` for `α` on `ΠA₁`.
pub fn leibniz_check(
    q: &Derivation,
    pd: &CoordinateSystem,
    alpha: &SuperPolynomial,
    phi: &SuperPolynomial,
) -> Result<bool, AlgebroidError> {
    let a1 = a1_coordinates(pd);
    if let Some(v) = alpha.variables().into_iter().find(|v| !a1.contains(v)) {
        return Err(AlgebroidError::CoordinateMismatch(format!("`{v}` is not a coordinate of ΠA₁")));
    }
    let parity = alpha
        .parity()
        .ok_or_else(|| AlgebroidError::CoordinateMismatch("α is not parity homogeneous".into()))?;
    let d = restrict_to_a1(q, pd)?;
    let lhs = q.apply(&(alpha * phi));
    let mut rhs = &d.apply(alpha) * phi;
    let second = alpha * &q.apply(phi);
    if parity.is_odd() {
        rhs -= &second;
    } else {
        rhs += &second;
    }
    Ok(lhs == rhs)
}

/// The two families of `ε` pullbacks, written on `T*D`:
/// `δx^α∘ε = y^I P^α_I` and `δπ_J∘ε = P^α_J p_α + y^I P^K_{IJ} π_K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonComponents {
    pub chart: CoordinateSystem,
    pub delta_x: Vec<(Variable, SuperPolynomial)>,
    pub delta_pi: Vec<(Variable, SuperPolynomial)>,
}

/// A weighted skew or Lie algebroid on a GL-bundle, given by its odd field
/// on the first chart of `ΠD`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAlgebroid {
    carrier: GLBundle,
    pd: CoordinateSystem,
    q: Derivation,
    kind: AlgebroidKind,
}

impl WeightedAlgebroid {
    pub fn new(carrier: GLBundle, q: Derivation) -> Result<Self, AlgebroidError> {
        let pd = parity_reverse(&carrier)?.chart(0).clone();
        let diag = check_weighted_algebroid(&q, &pd);
        let kind = diag.kind.ok_or_else(|| {
            AlgebroidError::MalformedQ(
                diag.checks
                    .iter()
                    .filter(|c| !c.passed)
                    .map(|c| format!("{}: {}", c.id, c.detail))
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok(WeightedAlgebroid { carrier, pd, q, kind })
    }

    pub fn carrier(&self) -> &GLBundle {
        &self.carrier
    }

    /// First chart of `ΠD`.
    pub fn odd_chart(&self) -> &CoordinateSystem {
        &self.pd
    }

    pub fn q(&self) -> &Derivation {
        &self.q
    }

    pub fn kind(&self) -> AlgebroidKind {
        self.kind
    }

    pub fn degree(&self) -> u64 {
        self.carrier.degree()
    }

    pub fn diagnostics(&self) -> AlgebroidDiagnostics {
        check_weighted_algebroid(&self.q, &self.pd)
    }

    pub fn phase_space(&self) -> Result<OddPhaseSpace, AlgebroidError> {
        OddPhaseSpace::new(&self.pd, self.degree())
    }

    pub fn hamiltonian(&self) -> Result<(OddPhaseSpace, SuperPolynomial), AlgebroidError> {
        let space = self.phase_space()?;
        let p = p_from_q(&self.q, &space)?;
        Ok((space, p))
    }

    pub fn structure_functions(&self) -> Result<StructureFunctions, AlgebroidError> {
        Ok(StructureFunctions::from_q(&self.q, &self.phase_space()?))
    }

    /// Odd fiber coordinate → even one.
    fn unflip(&self) -> BTreeMap<Variable, Variable> {
        self.pd
            .variables()
            .iter()
            .filter(|v| is_fiber(v))
            .map(|v| (v.clone(), v.with_parity(v.parity().flip())))
            .collect()
    }

    /// `ρ: D → TB`, with `ρ*(δx) = Q(x)` read on the even fiber.
    pub fn anchor(&self) -> Result<GradedMorphism, AlgebroidError> {
        let source = self.carrier.chart(0).clone();
        let base: Vec<Variable> = source.variables().iter().filter(|v| !is_fiber(v)).cloned().collect();
        let mut taken = source.names();
        let mut rank = source.next_rank();
        let mut vars = base.clone();
        let mut components = Assignment::new();
        let unflip = self.unflip();
        for b in &base {
            components.insert(b.clone(), SuperPolynomial::var(b));
        }
        for b in &base {
            let name = CoordinateSystem::fresh_name(&taken, "δ", b.name());
            taken.insert(name.clone());
            let w = MultiWeight::new(vec![b.weight().component(0), 1]);
            let db = Variable::ranked(rank, name, w, b.parity());
            rank += 1;
            components.insert(db.clone(), self.q.coefficient(b).relabel(&unflip));
            vars.push(db);
        }
        let target = CoordinateSystem::from_variables(format!("T{}", source.name()), 2, vars)
            .map_err(|e| AlgebroidError::CoordinateMismatch(e.to_string()))?;
        Ok(GradedMorphism::new(source, target, components)?)
    }

    /// `ρ_j: D → T B_{j−1}` for `1 ≤ j ≤ k`.
    pub fn anchor_series(&self, j: u64) -> Result<GradedMorphism, AlgebroidError> {
        let rho = self.anchor()?;
        if j == 0 || j > self.degree() {
            return Err(AlgebroidError::CoordinateMismatch(format!("anchor index {j} outside 1..={}", self.degree())));
        }
        let target = rho.target().filtered(|v| v.weight().component(0) as u64 <= j - 1);
        let components = target
            .variables()
            .iter()
            .map(|v| (v.clone(), rho.component(v).clone()))
            .collect();
        Ok(GradedMorphism::new(rho.source().clone(), target, components)?)
    }

    /// `ρ̂_j = Tτ ∘ ρ ∘ ι: F → T F_{j−1}`, defined when the carrier is a
    /// linearisation.
    pub fn graded_anchor(&self, j: u64) -> Result<GradedMorphism, AlgebroidError> {
        let s = check_symmetric(&self.carrier).map_err(|e| AlgebroidError::NotALinearisation(e.to_string()))?;
        let f = reconstruct(&self.carrier).map_err(|e| AlgebroidError::NotALinearisation(e.to_string()))?;
        let holo = s.charts[0].holonomic();
        let rho = self.anchor_series(j)?;
        let components = rho
            .components()
            .iter()
            .map(|(v, c)| (v.clone(), c.substitute_unchecked(&holo)))
            .collect();
        Ok(GradedMorphism::new(f.chart(0).clone(), rho.target().clone(), components)?)
    }

    pub fn restrict_to_a1(&self) -> Result<Derivation, AlgebroidError> {
        restrict_to_a1(&self.q, &self.pd)
    }

    pub fn leibniz_check(&self, alpha: &SuperPolynomial, phi: &SuperPolynomial) -> Result<bool, AlgebroidError> {
        leibniz_check(&self.q, &self.pd, alpha, phi)
    }

    /// No coordinate of `D` has total weight zero.
    pub fn is_weighted_lie_algebra(&self) -> bool {
        self.carrier.chart(0).variables().iter().all(|v| v.weight().total() > 0)
    }

    pub fn epsilon_components(&self) -> Result<EpsilonComponents, AlgebroidError> {
        let k = self.degree() as u32;
        let sf = self.structure_functions()?;
        let d = self.carrier.chart(0);
        let mut taken = d.names();
        let mut rank = d.next_rank();
        let mut vars = d.variables().to_vec();
        let mut fresh = |prefix: &str, v: &Variable, weight: Vec<u32>| {
            let name = CoordinateSystem::fresh_name(&taken, prefix, v.name());
            taken.insert(name.clone());
            let out = Variable::ranked(rank, name, MultiWeight::new(weight), Parity::Even);
            rank += 1;
            out
        };
        let unflip = self.unflip();
        let mut p = BTreeMap::new();
        let mut pi = BTreeMap::new();
        for v in d.variables() {
            let w = v.weight().component(0);
            if is_fiber(v) {
                pi.insert(v.clone(), fresh("pi_", v, vec![k - 1 - w, 0, 1]));
            } else {
                p.insert(v.clone(), fresh("p_", v, vec![k - 1 - w, 1, 1]));
            }
        }
        vars.extend(p.values().cloned());
        vars.extend(pi.values().cloned());
        let chart = CoordinateSystem::from_variables(format!("T*{}", d.name()), 3, vars)
            .map_err(|e| AlgebroidError::CoordinateMismatch(e.to_string()))?;
        let even = |t: &Variable| unflip[t].clone();
        let mut delta_x = Vec::new();
        for x in p.keys() {
            let mut c = SuperPolynomial::zero();
            for ((t, xx), coeff) in &sf.anchor {
                if xx == x {
                    c += &(&SuperPolynomial::var(&even(t)) * coeff);
                }
            }
            delta_x.push((x.clone(), c));
        }
        let mut delta_pi = Vec::new();
        for (y, _) in &pi {
            let mut c = SuperPolynomial::zero();
            for ((t, x), coeff) in &sf.anchor {
                if &even(t) == y {
                    c += &(coeff * &SuperPolynomial::var(&p[x]));
                }
            }
            for ((i, j, kk), coeff) in &sf.bracket {
                if &even(j) == y {
                    c += &(&(&SuperPolynomial::var(&even(i)) * coeff) * &SuperPolynomial::var(&pi[&even(kk)]));
                }
            }
            delta_pi.push((y.clone(), c));
        }
        Ok(EpsilonComponents { chart, delta_x, delta_pi })
    }
}
