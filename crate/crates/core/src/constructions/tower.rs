use std::collections::BTreeMap;

use super::data::{relabel_to, xi_name};
use super::{AlgebroidData, ConstructionError, StructureConstants};
use crate::algebroid::{AlgebroidSection, OddPhaseSpace, WeightedAlgebroid};
use crate::bundle::{CoordinateSystem, GradedBundle};
use crate::linfun::GLBundle;
use crate::superalg::{rational, Derivation, Parity, SuperPolynomial, Variable, WeightShift};

/// Name of the weight-`r` coordinate `y^a_r`, with `a` from 0.
pub fn y_name(r: usize, a: usize) -> String {
    format!("y{r}_{}", a + 1)
}

/// Name of the fiber coordinate over `y^a_r`, of bi-weight `(r, 1)`.
pub fn dy_name(r: usize, a: usize) -> String {
    format!("dy{}_{}", r + 1, a + 1)
}

fn odd_field() -> Derivation {
    Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]))
}

fn carrier(chart: CoordinateSystem, k: usize) -> Result<GLBundle, ConstructionError> {
    Ok(GLBundle::new(GradedBundle::from_chart(chart))?.with_degree(k as u64)?)
}

/// `𝔤_k` over a point with `Q = Σ dy_{r+1} ∂_{y_r} − ½ c^c_{ab} ξ^a ξ^b ∂_{ξ^c}`.
pub fn lie_tower(c: &StructureConstants, k: usize) -> Result<WeightedAlgebroid, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidInput("tower degree must be at least 1".into()));
    }
    if !c.is_antisymmetric() {
        return Err(ConstructionError::InvalidInput("structure constants are not antisymmetric".into()));
    }
    let d = c.dim();
    let mut chart = CoordinateSystem::new("U", 2);
    for a in 0..d {
        chart = chart.even(&xi_name(a), [0, 1]);
    }
    for r in 1..k {
        for a in 0..d {
            chart = chart.even(&y_name(r, a), [r as u32, 0]);
        }
    }
    for r in 1..k {
        for a in 0..d {
            chart = chart.even(&dy_name(r, a), [r as u32, 1]);
        }
    }
    let carrier = carrier(chart, k)?;
    let pd = crate::linfun::parity_reverse(&carrier)?.chart(0).clone();
    let xi: Vec<SuperPolynomial> = (0..d).map(|a| SuperPolynomial::var(pd.var(&xi_name(a)))).collect();
    let mut q = odd_field();
    for (m, target) in (0..d).map(|m| (m, pd.var(&xi_name(m)))) {
        let mut coeff = SuperPolynomial::zero();
        for a in 0..d {
            for b in 0..d {
                let cab = c.get(a, b, m);
                if !num_traits::Zero::is_zero(cab) {
                    coeff += &(&xi[a] * &xi[b]).scale(&(cab * rational(-1, 2)));
                }
            }
        }
        q.set(target, coeff);
    }
    for r in 1..k {
        for a in 0..d {
            q.set(pd.var(&y_name(r, a)), SuperPolynomial::var(pd.var(&dy_name(r, a))));
        }
    }
    Ok(WeightedAlgebroid::new(carrier, q)?)
}

/// The prolongation of a skew algebroid `E` to degree `k` in one chart:
/// coordinates `x, ξ, y_r, dy_{r+1}` and
/// `Q = ξP∂_x − ½ξξC∂_ξ + Σ dy_{r+1} ∂_{y_r}`.
pub fn prolongation_algebroid(e: &AlgebroidData, k: usize) -> Result<WeightedAlgebroid, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidInput("prolongation degree must be at least 1".into()));
    }
    let n = e.rank();
    let mut chart = CoordinateSystem::new(e.base().name(), 2);
    for x in e.base().variables() {
        chart = chart.even(x.name(), [0, 0]);
    }
    for a in 0..n {
        chart = chart.even(&xi_name(a), [0, 1]);
    }
    for w in 1..k {
        for b in 0..n {
            chart = chart.even(&y_name(w, b), [w as u32, 0]);
        }
    }
    for w in 1..k {
        for b in 0..n {
            chart = chart.even(&dy_name(w, b), [w as u32, 1]);
        }
    }
    let carrier = carrier(chart, k)?;
    let pd = crate::linfun::parity_reverse(&carrier)?.chart(0).clone();
    let mut q = odd_field();
    for (v, coeff) in e.q().action() {
        q.set(pd.var(v.name()), relabel_to(coeff, &pd));
    }
    for w in 1..k {
        for b in 0..n {
            q.set(pd.var(&y_name(w, b)), SuperPolynomial::var(pd.var(&dy_name(w, b))));
        }
    }
    Ok(WeightedAlgebroid::new(carrier, q)?)
}

/// A section of `D(𝔤_k) → 𝔤_{k−1}` in reduced form: a `𝔤`-valued function
/// `Y` and a vector field `Z` on `𝔤_{k−1}`, both polynomial in the `y_r`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReducedSection {
    pub y: Vec<SuperPolynomial>,
    /// `y^a_r ↦ Z^a_r`.
    pub z: BTreeMap<Variable, SuperPolynomial>,
}

impl ReducedSection {
    /// `Z(p) = Σ Z^v ∂_v p`.
    pub fn act(&self, p: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for (v, zv) in &self.z {
            let d = p.partial(v);
            if !d.is_zero() {
                out += &(zv * &d);
            }
        }
        out
    }

    /// `Σ Y^a π_{ξ_a} + Σ Z^a_r π_{dy^a_{r+1}}` on the phase space of the
    /// tower's odd chart.
    pub fn to_section(&self, space: &OddPhaseSpace, degree: u64) -> Result<AlgebroidSection, ConstructionError> {
        let chart = space.chart();
        let mut components = Vec::new();
        for (a, ya) in self.y.iter().enumerate() {
            components.push((chart.var(&xi_name(a)).clone(), ya.clone()));
        }
        for (v, zv) in &self.z {
            let (r, a) = parse_y(v.name())
                .ok_or_else(|| ConstructionError::InvalidInput(format!("`{v}` is not a tower coordinate")))?;
            components.push((chart.var(&dy_name(r, a)).clone(), zv.clone()));
        }
        Ok(AlgebroidSection::from_components(space, &components, degree)?)
    }

    /// Reads a tower section back into reduced form.
    pub fn from_section(space: &OddPhaseSpace, dim: usize, s: &AlgebroidSection) -> Result<Self, ConstructionError> {
        let chart = space.chart();
        let mut out = ReducedSection::default();
        for a in 0..dim {
            out.y.push(s.component(space, chart.var(&xi_name(a))));
        }
        for t in space.fiber() {
            if let Some((r, a)) = parse_dy(t.name()) {
                let c = s.component(space, t);
                if !c.is_zero() {
                    out.z.insert(chart.var(&y_name(r, a)).clone(), c);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &crate::superalg::Rational) -> Self {
        ReducedSection {
            y: self.y.iter().map(|p| p.scale(c)).collect(),
            z: self
                .z
                .iter()
                .map(|(v, p)| (v.clone(), p.scale(c)))
                .filter(|(_, p)| !p.is_zero())
                .collect(),
        }
    }
}

fn parse_index(rest: &str) -> Option<(usize, usize)> {
    let (r, a) = rest.split_once('_')?;
    let (r, a): (usize, usize) = (r.parse().ok()?, a.parse().ok()?);
    (a >= 1).then_some((r, a - 1))
}

fn parse_y(name: &str) -> Option<(usize, usize)> {
    parse_index(name.strip_prefix('y')?)
}

fn parse_dy(name: &str) -> Option<(usize, usize)> {
    let (r, a) = parse_index(name.strip_prefix("dy")?)?;
    (r >= 2).then_some((r - 1, a))
}

/// `([Y₁,Y₂]_𝔤 + Z₁(Y₂) − Z₂(Y₁), [Z₁, Z₂])`.
pub fn reduced_bracket(c: &StructureConstants, s1: &ReducedSection, s2: &ReducedSection) -> ReducedSection {
    let d = c.dim();
    let pad = |y: &[SuperPolynomial]| {
        let mut y = y.to_vec();
        y.resize(d, SuperPolynomial::zero());
        y
    };
    let (y1, y2) = (pad(&s1.y), pad(&s2.y));
    let mut y = c.bracket(&y1, &y2);
    for (slot, (a, b)) in y.iter_mut().zip(y1.iter().zip(&y2)) {
        *slot += &s1.act(b);
        *slot -= &s2.act(a);
    }
    let mut z = BTreeMap::new();
    let keys: std::collections::BTreeSet<&Variable> = s1.z.keys().chain(s2.z.keys()).collect();
    for v in keys {
        let zero = SuperPolynomial::zero();
        let (a, b) = (s1.z.get(v).unwrap_or(&zero), s2.z.get(v).unwrap_or(&zero));
        let val = &s1.act(b) - &s2.act(a);
        if !val.is_zero() {
            z.insert(v.clone(), val);
        }
    }
    ReducedSection { y, z }
}
