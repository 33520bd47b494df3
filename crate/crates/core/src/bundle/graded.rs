use std::collections::BTreeSet;

use super::chart::CoordinateSystem;
use super::BundleError;
use crate::par::{self, Execution};
use crate::report::{Check, ValidationReport};
use crate::superalg::{Assignment, Derivation, MultiWeight, Parity, SuperPolynomial, Variable, WeightShift};

/// Change of coordinates between two charts of an atlas.
///
/// `forward` expresses each target coordinate in source coordinates and
/// `inverse` each source coordinate in target coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMap {
    pub source: usize,
    pub target: usize,
    pub forward: Assignment,
    pub inverse: Option<Assignment>,
}

impl TransitionMap {
    pub fn new(source: usize, target: usize, forward: Assignment, inverse: Option<Assignment>) -> Self {
        TransitionMap {
            source,
            target,
            forward,
            inverse,
        }
    }
}

/// A graded (or n-tuple graded) bundle given by an atlas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBundle {
    arity: usize,
    charts: Vec<CoordinateSystem>,
    transitions: Vec<TransitionMap>,
}

/// An n-tuple graded bundle is a graded bundle of grading arity n ≥ 2.
pub type NTupleBundle = GradedBundle;

impl GradedBundle {
    pub fn new(arity: usize) -> Self {
        GradedBundle {
            arity,
            charts: Vec::new(),
            transitions: Vec::new(),
        }
    }

    pub fn from_chart(chart: CoordinateSystem) -> Self {
        let mut b = GradedBundle::new(chart.arity());
        b.charts.push(chart);
        b
    }

    pub fn from_parts(
        arity: usize,
        charts: Vec<CoordinateSystem>,
        transitions: Vec<TransitionMap>,
    ) -> Result<Self, BundleError> {
        let mut b = GradedBundle::new(arity);
        for c in charts {
            b.add_chart(c)?;
        }
        for t in transitions {
            b.add_transition(t)?;
        }
        Ok(b)
    }

    pub fn add_chart(&mut self, chart: CoordinateSystem) -> Result<usize, BundleError> {
        if chart.arity() != self.arity {
            return Err(BundleError::ArityMismatch {
                expected: self.arity,
                found: chart.arity(),
            });
        }
        self.charts.push(chart);
        Ok(self.charts.len() - 1)
    }

    pub fn add_transition(&mut self, t: TransitionMap) -> Result<(), BundleError> {
        if t.source >= self.charts.len() {
            return Err(BundleError::UnknownChart(t.source));
        }
        if t.target >= self.charts.len() {
            return Err(BundleError::UnknownChart(t.target));
        }
        self.transitions.push(t);
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn charts(&self) -> &[CoordinateSystem] {
        &self.charts
    }

    pub fn chart(&self, i: usize) -> &CoordinateSystem {
        &self.charts[i]
    }

    pub fn transitions(&self) -> &[TransitionMap] {
        &self.transitions
    }

    pub fn degree(&self) -> u64 {
        self.charts.iter().map(CoordinateSystem::degree).max().unwrap_or(0)
    }

    pub fn validate(&self) -> ValidationReport {
        self.validate_with(Execution::default())
    }

    /// Weight and parity homogeneity, coverage, round trips, the linear block
    /// of every non-base coordinate, and the cocycle condition.
    pub fn validate_with(&self, exec: Execution) -> ValidationReport {
        let mut checks = Vec::new();
        for c in &self.charts {
            for v in c.variables() {
                if v.weight().arity() > self.arity {
                    checks.push(Check::fail(
                        format!("chart[{}].{}.arity", c.name(), v),
                        format!("weight {} exceeds grading arity {}", v.weight(), self.arity),
                    ));
                }
            }
        }
        let per_transition = par::map(exec, &self.transitions, |t| self.transition_checks(t));
        checks.extend(per_transition.into_iter().flatten());
        checks.extend(self.cocycle_checks());
        ValidationReport { checks }
    }

    fn label(&self, t: &TransitionMap) -> String {
        format!("transition[{}->{}]", self.charts[t.source].name(), self.charts[t.target].name())
    }

    fn transition_checks(&self, t: &TransitionMap) -> Vec<Check> {
        let label = self.label(t);
        let src = &self.charts[t.source];
        let tgt = &self.charts[t.target];
        let mut checks = map_checks(&format!("{label}.forward"), &t.forward, tgt, src);
        match &t.inverse {
            None => checks.push(Check::fail(format!("{label}.inverse"), "no inverse declared")),
            Some(inv) => {
                checks.extend(map_checks(&format!("{label}.inverse"), inv, src, tgt));
                for v in tgt.variables() {
                    let img = t.forward.get(v).cloned().unwrap_or_default();
                    let back = img.substitute_unchecked(inv);
                    checks.push(Check::zero(
                        format!("{label}.roundtrip.{v}"),
                        &back - &SuperPolynomial::var(v),
                    ));
                }
                for u in src.variables() {
                    let img = inv.get(u).cloned().unwrap_or_default();
                    let back = img.substitute_unchecked(&t.forward);
                    checks.push(Check::zero(
                        format!("{label}.roundtrip.{u}"),
                        &back - &SuperPolynomial::var(u),
                    ));
                }
            }
        }
        for v in tgt.non_base() {
            let Some(img) = t.forward.get(&v) else { continue };
            let linear = img.terms().any(|(m, _)| {
                let fiber: Vec<_> = m.factors().iter().filter(|(u, _)| !u.weight().is_zero()).collect();
                fiber.len() == 1 && fiber[0].1 == 1 && fiber[0].0.weight() == v.weight()
            });
            checks.push(Check::new(
                format!("{label}.linear-block.{v}"),
                linear,
                if linear {
                    "image contains a term linear in same-weight coordinates"
                } else {
                    "image has no term linear in same-weight coordinates"
                },
            ));
        }
        checks
    }

    fn cocycle_checks(&self) -> Vec<Check> {
        let mut checks = Vec::new();
        for ab in &self.transitions {
            for bc in self.transitions.iter().filter(|t| t.source == ab.target) {
                for ac in self
                    .transitions
                    .iter()
                    .filter(|t| t.source == ab.source && t.target == bc.target && t.source != t.target)
                {
                    if ab.source == bc.target {
                        continue;
                    }
                    for v in self.charts[ac.target].variables() {
                        let via = bc.forward.get(v).cloned().unwrap_or_default().substitute_unchecked(&ab.forward);
                        let direct = ac.forward.get(v).cloned().unwrap_or_default();
                        checks.push(Check::zero(
                            format!(
                                "cocycle[{}->{}->{}].{v}",
                                self.charts[ab.source].name(),
                                self.charts[ab.target].name(),
                                self.charts[bc.target].name()
                            ),
                            &via - &direct,
                        ));
                    }
                }
            }
        }
        checks
    }

    /// Keeps the coordinates selected by `keep`, asserting that kept images
    /// involve only kept coordinates.
    pub fn project_where(&self, keep: impl Fn(&Variable) -> bool) -> Result<GradedBundle, BundleError> {
        let charts: Vec<CoordinateSystem> = self.charts.iter().map(|c| c.filtered(&keep)).collect();
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let forward = restrict_map(&t.forward, &charts[t.target], &charts[t.source])?;
            let inverse = match &t.inverse {
                Some(inv) => Some(restrict_map(inv, &charts[t.source], &charts[t.target])?),
                None => None,
            };
            transitions.push(TransitionMap::new(t.source, t.target, forward, inverse));
        }
        Ok(GradedBundle {
            arity: self.arity,
            charts,
            transitions,
        })
    }

    /// The level-`l` bundle of the tower: coordinates of total weight ≤ `l`.
    pub fn project_tower(&self, l: u64) -> Result<GradedBundle, BundleError> {
        self.project_where(|v| v.weight().total() <= l)
    }

    /// Keeps coordinates whose `component`-th weight is at most `l`.
    pub fn project_component(&self, component: usize, l: u32) -> Result<GradedBundle, BundleError> {
        self.project_where(|v| v.weight().component(component) <= l)
    }

    /// Sets to zero every coordinate of total weight in `1..=i`.
    pub fn core_submanifold(&self, i: u64) -> Result<GradedBundle, BundleError> {
        let killed = |v: &Variable| {
            let w = v.weight().total();
            w > 0 && w <= i
        };
        let charts: Vec<CoordinateSystem> = self.charts.iter().map(|c| c.filtered(|v| !killed(v))).collect();
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let src_killed: BTreeSet<Variable> =
                self.charts[t.source].variables().iter().filter(|v| killed(v)).cloned().collect();
            let tgt_killed: BTreeSet<Variable> =
                self.charts[t.target].variables().iter().filter(|v| killed(v)).cloned().collect();
            let forward = kill_map(&t.forward, &src_killed, &tgt_killed)?;
            let inverse = match &t.inverse {
                Some(inv) => Some(kill_map(inv, &tgt_killed, &src_killed)?),
                None => None,
            };
            transitions.push(TransitionMap::new(t.source, t.target, forward, inverse));
        }
        Ok(GradedBundle {
            arity: self.arity,
            charts,
            transitions,
        })
    }

    /// The sub-bundle cut out by coordinates whose weight is not ⪯ `m`
    /// (other than base coordinates).
    pub fn substructure(&self, m: &MultiWeight) -> Result<GradedBundle, BundleError> {
        let killed = |v: &Variable| !v.weight().is_zero() && v.weight().precedes(m);
        let charts: Vec<CoordinateSystem> = self.charts.iter().map(|c| c.filtered(|v| !killed(v))).collect();
        let mut transitions = Vec::new();
        for t in &self.transitions {
            let src_killed: BTreeSet<Variable> =
                self.charts[t.source].variables().iter().filter(|v| killed(v)).cloned().collect();
            let tgt_killed: BTreeSet<Variable> =
                self.charts[t.target].variables().iter().filter(|v| killed(v)).cloned().collect();
            let forward = kill_map(&t.forward, &src_killed, &tgt_killed)?;
            let inverse = match &t.inverse {
                Some(inv) => Some(kill_map(inv, &tgt_killed, &src_killed)?),
                None => None,
            };
            transitions.push(TransitionMap::new(t.source, t.target, forward, inverse));
        }
        Ok(GradedBundle {
            arity: self.arity,
            charts,
            transitions,
        })
    }
}

fn map_checks(label: &str, map: &Assignment, domain: &CoordinateSystem, codomain: &CoordinateSystem) -> Vec<Check> {
    let mut checks = Vec::new();
    let allowed = codomain.var_set();
    for v in domain.variables() {
        match map.get(v) {
            None => checks.push(Check::fail(format!("{label}.{v}.defined"), "no image declared")),
            Some(img) => {
                let stray: Vec<String> = img
                    .variables()
                    .into_iter()
                    .filter(|u| !allowed.contains(u))
                    .map(|u| u.name().to_string())
                    .collect();
                if !stray.is_empty() {
                    checks.push(Check::fail(
                        format!("{label}.{v}.variables"),
                        format!("image uses foreign coordinates {}", stray.join(", ")),
                    ));
                }
                let h = img.weight_of();
                let ok = h.is(v.weight());
                let mut c = Check::new(
                    format!("{label}.{v}.weight"),
                    ok,
                    if ok {
                        format!("homogeneous of weight {}", v.weight())
                    } else {
                        format!("expected weight {}, found {h}", v.weight())
                    },
                )
                .with_weight(v.weight().render(domain.arity()));
                if !ok {
                    c = c.with_residual(img.clone());
                }
                checks.push(c);
                let p_ok = img.is_parity_homogeneous(v.parity());
                checks.push(Check::new(
                    format!("{label}.{v}.parity"),
                    p_ok,
                    format!("expected {}", v.parity()),
                ));
            }
        }
    }
    for v in map.keys() {
        if !domain.contains(v) {
            checks.push(Check::fail(
                format!("{label}.{v}.defined"),
                "image given for a coordinate outside the chart",
            ));
        }
    }
    checks
}

fn restrict_map(
    map: &Assignment,
    domain: &CoordinateSystem,
    codomain: &CoordinateSystem,
) -> Result<Assignment, BundleError> {
    let allowed = codomain.var_set();
    let mut out = Assignment::new();
    for v in domain.variables() {
        if let Some(img) = map.get(v) {
            if let Some(bad) = img.variables().into_iter().find(|u| !allowed.contains(u)) {
                return Err(BundleError::IllDefinedProjection {
                    variable: v.name().to_string(),
                    offending: bad.name().to_string(),
                });
            }
            out.insert(v.clone(), img.clone());
        }
    }
    Ok(out)
}

fn kill_map(
    map: &Assignment,
    killed_src: &BTreeSet<Variable>,
    killed_dom: &BTreeSet<Variable>,
) -> Result<Assignment, BundleError> {
    let mut out = Assignment::new();
    for (v, img) in map {
        let restricted = img.kill(killed_src);
        if killed_dom.contains(v) {
            if !restricted.is_zero() {
                return Err(BundleError::InconsistentRestriction {
                    variable: v.name().to_string(),
                    residual: restricted.render(),
                });
            }
        } else {
            out.insert(v.clone(), restricted);
        }
    }
    Ok(out)
}

/// `Δ = Σ_v w_c(v) · v · ∂/∂v` for the chosen weight component.
pub fn weight_vector_field(chart: &CoordinateSystem, component: usize) -> Derivation {
    let mut d = Derivation::new(Parity::Even, WeightShift::zero());
    for v in chart.variables() {
        let w = v.weight().component(component);
        if w > 0 {
            d.set(v, SuperPolynomial::var(v).scale_int(i64::from(w)));
        }
    }
    d
}
