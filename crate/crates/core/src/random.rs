//! Seeded generators for test corpora: graded bundles with invertible
//! triangular transitions, weight-preserving morphisms, structure constants
//! and sections.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebroid::{AlgebroidSection, OddPhaseSpace};
use crate::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use crate::constructions::{y_name, AlgebroidData, ReducedSection, StructureConstants};
use crate::linfun::GradedMorphism;
use crate::superalg::{integer, rational, Assignment, MultiWeight, Rational, SuperPolynomial, Variable};

const LETTERS: [&str; 5] = ["x", "y", "z", "w", "v"];

/// Exponent vectors of the monomials of exactly `weight` in `vars`, with at
/// most `base_degree` factors of weight zero.
fn monomials(vars: &[Variable], weight: &[u32], base_degree: u32) -> Vec<Vec<(Variable, u32)>> {
    fn go(
        vars: &[Variable],
        arity: usize,
        rest: Vec<u32>,
        base_left: u32,
        acc: &mut Vec<(Variable, u32)>,
        out: &mut Vec<Vec<(Variable, u32)>>,
    ) {
        let Some((v, tail)) = vars.split_first() else {
            if rest.iter().all(|&r| r == 0) {
                out.push(acc.clone());
            }
            return;
        };
        let w = v.weight().padded(arity);
        let zero = w.iter().all(|&c| c == 0);
        let cap = if v.is_odd() { 1 } else { u32::MAX };
        let mut e = 0u32;
        loop {
            let fits = w.iter().zip(&rest).all(|(a, r)| a * e <= *r);
            if !fits || e > cap || (zero && e > base_left) {
                break;
            }
            let next: Vec<u32> = w.iter().zip(&rest).map(|(a, r)| r - a * e).collect();
            if e > 0 {
                acc.push((v.clone(), e));
            }
            go(tail, arity, next, if zero { base_left - e } else { base_left }, acc, out);
            if e > 0 {
                acc.pop();
            }
            if zero && e == base_left {
                break;
            }
            e += 1;
        }
    }
    let mut out = Vec::new();
    go(vars, weight.len(), weight.to_vec(), base_degree, &mut Vec::new(), &mut out);
    out
}

fn monomial_poly(factors: &[(Variable, u32)]) -> SuperPolynomial {
    factors
        .iter()
        .fold(SuperPolynomial::one(), |acc, (v, e)| &acc * &SuperPolynomial::var(v).pow(*e))
}

/// A deterministic source of random test objects.
#[derive(Clone, Debug)]
pub struct Corpus {
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(seed: u64) -> Self {
        Corpus {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn coefficient(&mut self) -> Rational {
        let n = *[-3, -2, -1, 1, 2, 3].choose(&mut self.rng).expect("nonempty");
        let d = self.rng.gen_range(1..=3);
        rational(n, d)
    }

    /// A random polynomial of exactly `weight` in `vars` with at most
    /// `max_terms` terms; zero when no monomial has that weight.
    pub fn homogeneous(&mut self, vars: &[Variable], weight: &MultiWeight, max_terms: usize) -> SuperPolynomial {
        let arity = vars.iter().map(|v| v.weight().arity()).max().unwrap_or(1).max(weight.arity()).max(1);
        let mut all = monomials(vars, &weight.padded(arity), 2);
        all.shuffle(&mut self.rng);
        let n = self.rng.gen_range(1..=max_terms.max(1)).min(all.len());
        let mut out = SuperPolynomial::zero();
        for m in all.iter().take(n) {
            out += &monomial_poly(m).scale(&self.coefficient());
        }
        out
    }

    /// A chart with `1..=max_dim` coordinates `{letter}{tag}{i}` of each
    /// weight `0..=degree`.
    pub fn graded_chart(&mut self, name: &str, degree: usize, max_dim: usize, tag: &str) -> CoordinateSystem {
        let mut chart = CoordinateSystem::new(name, 1);
        for (w, letter) in LETTERS.iter().enumerate().take(degree + 1) {
            for i in 1..=self.rng.gen_range(1..=max_dim) {
                chart = chart.even(&format!("{letter}{tag}{i}"), w as u32);
            }
        }
        chart
    }

    /// A two-chart bundle whose transition sends each coordinate `u` to
    /// `a·u + p(earlier coordinates)`, with its polynomial inverse.
    pub fn bundle(&mut self, degree: usize, max_dim: usize) -> GradedBundle {
        self.atlas(degree, max_dim, 2)
    }

    /// Like [`Corpus::bundle`] with `charts − 1` independent transitions out
    /// of the first chart.
    pub fn atlas(&mut self, degree: usize, max_dim: usize, charts: usize) -> GradedBundle {
        let src = self.graded_chart("U", degree, max_dim, "");
        let mut all = vec![src.clone()];
        let mut transitions = Vec::new();
        for j in 1..charts.max(2) {
            let suffix = if j == 1 { String::new() } else { format!("_{j}") };
            let mut tgt = CoordinateSystem::new(&format!("V{suffix}"), 1);
            for v in src.variables() {
                tgt = tgt.even(&format!("{}{suffix}", v.name().to_uppercase()), v.weight().clone());
            }
            let (forward, inverse) = self.triangular(&src, &tgt);
            transitions.push(TransitionMap::new(0, j, forward, Some(inverse)));
            all.push(tgt);
        }
        GradedBundle::from_parts(1, all, transitions).expect("generated charts are well formed")
    }

    fn triangular(&mut self, src: &CoordinateSystem, tgt: &CoordinateSystem) -> (Assignment, Assignment) {
        let mut forward = Assignment::new();
        let mut inverse = Assignment::new();
        for (i, (u, big)) in src.variables().iter().zip(tgt.variables()).enumerate() {
            let a = self.coefficient();
            let earlier = &src.variables()[..i];
            let mut p = self.homogeneous(earlier, u.weight(), 3);
            if u.weight().is_zero() && self.rng.gen_bool(0.5) {
                p += &SuperPolynomial::constant(self.coefficient());
            }
            forward.insert(big.clone(), &SuperPolynomial::var(u).scale(&a) + &p);
            let back = &SuperPolynomial::var(big) - &p.substitute_unchecked(&inverse);
            inverse.insert(u.clone(), back.scale(&(Rational::from_integer(1.into()) / a)));
        }
        (forward, inverse)
    }

    /// A weight-preserving map between charts of weight-graded coordinates.
    pub fn morphism(&mut self, source: &CoordinateSystem, target: &CoordinateSystem) -> GradedMorphism {
        let components = target
            .variables()
            .iter()
            .map(|v| (v.clone(), self.homogeneous(source.variables(), v.weight(), 3)))
            .collect();
        GradedMorphism::new(source.clone(), target.clone(), components).expect("components use source coordinates")
    }

    /// Antisymmetric perturbation of `c` that breaks Jacobi, found by
    /// rejection against the Jacobi check. Every antisymmetric bracket in
    /// dimension at most 2 is Lie, so `c` must have dimension at least 3.
    pub fn perturbation(&mut self, c: &StructureConstants) -> StructureConstants {
        let d = c.dim();
        assert!(d >= 3, "brackets in dimension {d} always satisfy Jacobi");
        loop {
            let mut out = c.clone();
            for _ in 0..self.rng.gen_range(1..=3) {
                let i = self.rng.gen_range(0..d);
                let j = (i + self.rng.gen_range(1..d)) % d;
                let k = self.rng.gen_range(0..d);
                out = out.perturbed(i, j, k, integer(self.rng.gen_range(1..=2)));
            }
            if !out.is_jacobi() {
                return out;
            }
        }
    }

    /// Random antisymmetric integer structure constants.
    pub fn structure_constants(&mut self, dim: usize) -> StructureConstants {
        let mut c = StructureConstants::zero(dim);
        for i in 0..dim {
            for j in i + 1..dim {
                for k in 0..dim {
                    if self.rng.gen_bool(0.4) {
                        c.set_bracket(i, j, k, integer(self.rng.gen_range(-2..=2)));
                    }
                }
            }
        }
        c
    }

    /// Algebroid data over `dim` weight-0 coordinates with polynomial
    /// anchor and constant antisymmetric bracket.
    pub fn algebroid_data(&mut self, dim: usize, rank: usize) -> AlgebroidData {
        let mut base = CoordinateSystem::new("M", 2);
        for i in 1..=dim {
            base = base.even(&format!("x{i}"), [0, 0]);
        }
        let mut e = AlgebroidData::new(base.clone(), rank);
        for a in 0..rank {
            for x in base.variables() {
                if self.rng.gen_bool(0.5) {
                    let p = &self.homogeneous(base.variables(), &MultiWeight::zero(), 2)
                        + &SuperPolynomial::constant(self.coefficient());
                    e.set_anchor(a, x, p);
                }
            }
        }
        let c = self.structure_constants(rank);
        for a in 0..rank {
            for b in 0..rank {
                for k in 0..rank {
                    e.set_bracket(a, b, k, SuperPolynomial::constant(c.get(a, b, k).clone()));
                }
            }
        }
        e
    }

    /// A random section of the given degree, or `None` when every
    /// coefficient came out zero.
    pub fn section(&mut self, space: &OddPhaseSpace, degree: u64) -> Option<AlgebroidSection> {
        let k = space.degree() as i64;
        let mut parts = Vec::new();
        for t in space.fiber() {
            let w = degree as i64 - k + t.weight().component(0) as i64;
            if w < 0 || self.rng.gen_bool(0.3) {
                continue;
            }
            let f = self.homogeneous(space.base(), &MultiWeight::single(w as u32), 2);
            if !f.is_zero() {
                parts.push((t.clone(), f));
            }
        }
        if parts.is_empty() {
            return None;
        }
        AlgebroidSection::from_components(space, &parts, degree).ok()
    }

    /// A reduced section of weight `d` on the tower of dimension `dim` and
    /// degree `k`: `Y` of weight `d`, `Z` on `y_r` of weight `d + r`.
    pub fn reduced_section(&mut self, space: &OddPhaseSpace, dim: usize, k: usize, d: i64) -> ReducedSection {
        let base = space.base();
        let mut s = ReducedSection::default();
        for _ in 0..dim {
            let y = if d >= 0 {
                self.homogeneous(base, &MultiWeight::single(d as u32), 2)
            } else {
                SuperPolynomial::zero()
            };
            s.y.push(y);
        }
        for r in 1..k {
            for a in 0..dim {
                let w = d + r as i64;
                if w < 0 || self.rng.gen_bool(0.3) {
                    continue;
                }
                let z = self.homogeneous(base, &MultiWeight::single(w as u32), 2);
                if !z.is_zero() {
                    s.z.insert(space.chart().var(&y_name(r, a)).clone(), z);
                }
            }
        }
        s
    }
}
