use std::collections::BTreeMap;

use graded_core::algebroid::{derived_bracket, AlgebroidKind, DERIVED_BRACKET_SIGN};
use graded_core::bundle::{tangent_bundle, CoordinateSystem, GradedBundle, TransitionMap};
use graded_core::constructions::*;
use graded_core::linfun::{is_symmetric, linearise};
use graded_core::superalg::{integer, rational, Assignment, Derivation, SuperPolynomial, Variable};

fn v(x: &Variable) -> SuperPolynomial {
    SuperPolynomial::var(x)
}

/// Coefficient of `t^r` in `p`, read off as `∂_t^r p / r!` at `t = 0`.
fn taylor_coefficient(p: &SuperPolynomial, t: &Variable, r: u32) -> SuperPolynomial {
    let mut q = p.clone();
    for _ in 0..r {
        q = q.partial(t);
    }
    let mut zero = Assignment::new();
    zero.insert(t.clone(), SuperPolynomial::zero());
    let fact: i64 = (1..=r as i64).product();
    q.substitute_unchecked(&zero).scale(&rational(1, fact))
}

fn one_dim(forward: SuperPolynomial, src: &CoordinateSystem, tgt: &CoordinateSystem) -> PolynomialDiffeo {
    let mut fwd = Assignment::new();
    fwd.insert(tgt.var("x").clone(), forward);
    PolynomialDiffeo::new(src.clone(), tgt.clone(), fwd, None).unwrap()
}

#[test]
fn structure_constant_catalogue_satisfies_jacobi() {
    for c in [
        StructureConstants::so3(),
        StructureConstants::sl2(),
        StructureConstants::heisenberg(),
        StructureConstants::abelian(3),
    ] {
        assert!(c.is_antisymmetric());
        assert!(c.is_jacobi(), "{:?}", c.jacobi_residual());
    }
    assert!(!StructureConstants::so3().perturbed(0, 1, 0, integer(1)).is_jacobi());
}

#[test]
fn rescaling_one_so3_constant_keeps_jacobi() {
    // [e1,e2] = 2 e3 is still a Lie algebra; a perturbation must leave the
    // span of the existing constants to break Jacobi.
    let c = StructureConstants::so3().perturbed(0, 1, 2, integer(1));
    assert_eq!(c.get(0, 1, 2), &integer(2));
    assert!(c.is_jacobi());
}

#[test]
fn abelian_tower_is_the_shift_field() {
    let tower = lie_tower(&StructureConstants::abelian(2), 3).unwrap();
    assert_eq!(tower.kind(), AlgebroidKind::Lie);
    let pd = tower.odd_chart();
    let mut expected = Derivation::new(graded_core::superalg::Parity::Odd, graded_core::superalg::WeightShift::new(vec![0, 1]));
    for r in 1..3 {
        for a in 0..2 {
            expected.set(pd.var(&y_name(r, a)), v(pd.var(&dy_name(r, a))));
        }
    }
    assert_eq!(tower.q(), &expected);
    assert!(tower.is_weighted_lie_algebra());
}

#[test]
fn tower_kind_tracks_jacobi() {
    let so3 = StructureConstants::so3();
    assert_eq!(lie_tower(&so3, 2).unwrap().kind(), AlgebroidKind::Lie);
    let broken = so3.perturbed(0, 1, 0, integer(1));
    let tower = lie_tower(&broken, 2).unwrap();
    assert_eq!(tower.kind(), AlgebroidKind::Skew);
    assert!(!tower.diagnostics().square.is_zero());
}

#[test]
fn prolongation_over_a_point_is_the_tower() {
    for c in [StructureConstants::so3(), StructureConstants::sl2(), StructureConstants::heisenberg()] {
        for k in 1..=3 {
            let e = AlgebroidData::lie_algebra(&c);
            assert_eq!(prolongation_algebroid(&e, k).unwrap(), lie_tower(&c, k).unwrap());
        }
    }
}

#[test]
fn prolongation_restricts_to_the_original_algebroid() {
    let base = CoordinateSystem::new("M", 2).even("x", [0, 0]).even("z", [0, 0]);
    let e = AlgebroidData::tangent(base);
    let pro = prolongation_algebroid(&e, 3).unwrap();
    assert_eq!(pro.kind(), AlgebroidKind::Lie);
    assert_eq!(pro.restrict_to_a1().unwrap(), e.q());
    assert!(!pro.is_weighted_lie_algebra());

    let broken = AlgebroidData::lie_algebra(&StructureConstants::so3().perturbed(0, 1, 0, integer(1)));
    assert_eq!(prolongation_algebroid(&broken, 2).unwrap().kind(), AlgebroidKind::Skew);
}

#[test]
fn prolongation_of_tm_has_identity_anchor() {
    let base = CoordinateSystem::new("M", 2).even("x", [0, 0]);
    let pro = prolongation_algebroid(&AlgebroidData::tangent(base), 2).unwrap();
    let rho = pro.anchor_series(1).unwrap();
    let x = rho.source().var("x").clone();
    let dx = rho.target().var("δx").clone();
    assert_eq!(rho.component(&dx), &v(rho.source().var("xi_1")).relabel(&BTreeMap::new()));
    assert_eq!(rho.component(&x), &v(&x));
}

#[test]
fn higher_tangent_matches_taylor_oracle() {
    let src = CoordinateSystem::new("U", 1).even("x", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0);
    let x = src.var("x").clone();
    let phi = one_dim(&v(&x) + &v(&x).pow(2), &src, &tgt);
    let t2 = higher_tangent(&phi, 2).unwrap();
    let (a, b) = (t2.chart(0), t2.chart(1));
    let fwd = &t2.transitions()[0].forward;
    let (x, x1, x2) = (a.var("x"), a.var("x_1"), a.var("x_2"));
    // y' = y(1+2x), z' = z(1+2x) + y²
    let one_plus = &SuperPolynomial::one() + &v(x).scale_int(2);
    assert_eq!(fwd[b.var("x_1")], &v(x1) * &one_plus);
    assert_eq!(fwd[b.var("x_2")], &(&v(x2) * &one_plus) + &v(x1).pow(2));
    let failures: Vec<String> = t2.validate().failures().map(|c| c.id.clone()).collect();
    assert_eq!(failures, vec!["transition[U->V].inverse".to_string()]);
}

#[test]
fn higher_tangent_of_invertible_map_validates() {
    let src = CoordinateSystem::new("U", 1).even("x", 0).even("y", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0).even("y", 0);
    let (x, y) = (src.var("x").clone(), src.var("y").clone());
    let (xx, yy) = (tgt.var("x").clone(), tgt.var("y").clone());
    let mut fwd = Assignment::new();
    fwd.insert(xx.clone(), &v(&x) + &v(&y).pow(2));
    fwd.insert(yy.clone(), &v(&y).scale_int(3) + &SuperPolynomial::int(1));
    let mut inv = Assignment::new();
    let y_back = (&v(&yy) - &SuperPolynomial::int(1)).scale(&rational(1, 3));
    inv.insert(x.clone(), &v(&xx) - &y_back.pow(2));
    inv.insert(y.clone(), y_back);
    let phi = PolynomialDiffeo::new(src, tgt, fwd, Some(inv)).unwrap();
    assert_eq!(phi.round_trip(), Some(true));
    for k in 1..=3 {
        let tk = higher_tangent(&phi, k).unwrap();
        let report = tk.validate();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert!(is_symmetric(&linearise(&tk).unwrap()));
    }
}

#[test]
fn higher_tangent_agrees_with_series_substitution() {
    let src = CoordinateSystem::new("U", 1).even("x", 0).even("y", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0).even("y", 0);
    let (x, y) = (src.var("x").clone(), src.var("y").clone());
    let mut fwd = Assignment::new();
    fwd.insert(tgt.var("x").clone(), &(&v(&x) * &v(&y)) + &v(&y).pow(3));
    fwd.insert(tgt.var("y").clone(), &v(&x).scale_int(2) - &v(&y).pow(2));
    let phi = PolynomialDiffeo::new(src.clone(), tgt.clone(), fwd.clone(), None).unwrap();
    let k = 3;
    let tk = higher_tangent(&phi, k).unwrap();
    let a = tk.chart(0);
    let t = Variable::ranked(1000, "t", 0, graded_core::superalg::Parity::Even);
    let mut curve = Assignment::new();
    for name in ["x", "y"] {
        let mut c = v(a.var(name));
        for r in 1..=k {
            c += &(&v(a.var(&format!("{name}_{r}"))) * &v(&t).pow(r as u32));
        }
        curve.insert(src.var(name).clone(), c);
    }
    for name in ["x", "y"] {
        let image = fwd[tgt.var(name)].substitute_unchecked(&curve);
        for r in 1..=k {
            let target = tk.chart(1).var(&format!("{name}_{r}"));
            assert_eq!(tk.transitions()[0].forward[target], taylor_coefficient(&image, &t, r as u32), "{name}_{r}");
        }
    }
}

#[test]
fn linearised_second_tangent_is_tangent_of_tangent() {
    let src = CoordinateSystem::new("U", 1).even("x", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0);
    let x = src.var("x").clone();
    let phi = one_dim(&v(&x) + &v(&x).pow(2), &src, &tgt);
    let d = linearise(&higher_tangent(&phi, 2).unwrap()).unwrap();
    assert!(is_symmetric(&d));
    let ttm = tangent_bundle(&higher_tangent(&phi, 1).unwrap()).unwrap();
    let names = [("x", "x"), ("x_1", "x_1"), ("dx_1", "dx"), ("dx_2", "dx_1")];
    for chart in 0..2 {
        let (dc, tc) = (d.chart(chart), ttm.chart(chart));
        assert_eq!(dc.len(), names.len());
        let map: BTreeMap<Variable, Variable> = names
            .iter()
            .map(|(p, q)| {
                let (a, b) = (dc.var(p), tc.var(q));
                assert_eq!(a.weight(), b.weight());
                (a.clone(), b.clone())
            })
            .collect();
        if chart == 0 {
            let (df, tf) = (&d.bundle().transitions()[0].forward, &ttm.transitions()[0].forward);
            let dmap: BTreeMap<Variable, Variable> = names
                .iter()
                .map(|(p, q)| (d.chart(1).var(p).clone(), ttm.chart(1).var(q).clone()))
                .collect();
            for (key, img) in df {
                assert_eq!(&img.relabel(&map), &tf[&dmap[key]], "{key}");
            }
        }
    }
}

#[test]
fn second_tangent_identification_in_one_and_two_dimensions() {
    let src = CoordinateSystem::new("U", 1).even("x", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0);
    let x = src.var("x").clone();
    let phi = one_dim(&v(&x) + &v(&x).pow(2), &src, &tgt);
    let residuals = second_tangent_identification(&phi).unwrap();
    assert_eq!(residuals.len(), 4);
    assert!(residuals.iter().all(|(_, r)| r.is_zero()));

    let src = CoordinateSystem::new("U", 1).even("x", 0).even("y", 0);
    let tgt = CoordinateSystem::new("V", 1).even("x", 0).even("y", 0);
    let (x, y) = (src.var("x").clone(), src.var("y").clone());
    let mut fwd = Assignment::new();
    fwd.insert(tgt.var("x").clone(), &(&v(&x) * &v(&y)) + &v(&y).pow(3));
    fwd.insert(tgt.var("y").clone(), &v(&x).pow(2) + &v(&y).scale_int(2));
    let phi = PolynomialDiffeo::new(src, tgt, fwd, None).unwrap();
    let residuals = second_tangent_identification(&phi).unwrap();
    assert_eq!(residuals.len(), 8);
    for (id, r) in &residuals {
        assert!(r.is_zero(), "{id}: {r}");
    }
}

#[test]
fn identity_diffeo_gives_trivial_transitions() {
    let src = CoordinateSystem::new("U", 1).even("x", 0).even("y", 0);
    let phi = PolynomialDiffeo::identity(&src);
    assert_eq!(phi.round_trip(), Some(true));
    let t2 = higher_tangent(&phi, 2).unwrap();
    for (target, img) in &t2.transitions()[0].forward {
        assert_eq!(img, &v(t2.chart(0).var(target.name())));
    }
}

#[test]
fn complete_lift_of_de_rham_is_de_rham() {
    let chart = CoordinateSystem::new("U", 2).even("x", [0, 0]).odd("xi", [0, 1]);
    let q = Derivation::new(graded_core::superalg::Parity::Odd, graded_core::superalg::WeightShift::new(vec![0, 1]))
        .with(chart.var("x"), v(chart.var("xi")));
    let lift = complete_lift(&q, &chart, 2).unwrap();
    let c = &lift.jets.chart;
    let expected = Derivation::new(graded_core::superalg::Parity::Odd, graded_core::superalg::WeightShift::new(vec![0, 1]))
        .with(c.var("x"), v(c.var("xi")))
        .with(c.var("x_1"), v(c.var("xi_1")));
    assert_eq!(lift.q, expected);
}

#[test]
fn complete_lift_is_a_lie_morphism() {
    let lie = AlgebroidData::lie_algebra(&StructureConstants::so3());
    let broken = AlgebroidData::lie_algebra(&StructureConstants::so3().perturbed(0, 1, 0, integer(1)));
    let chart = lie.odd_chart();
    for k in 1..=3 {
        for (q1, q2) in [(lie.q(), broken.q()), (broken.q(), broken.q())] {
            let lhs = complete_lift(&q1.commutator(&q2), &chart, k).unwrap().q;
            let (l1, l2) = (complete_lift(&q1, &chart, k).unwrap().q, complete_lift(&q2, &chart, k).unwrap().q);
            assert_eq!(lhs, l1.commutator(&l2));
        }
    }
    let lifted = lifted_algebroid(&broken, 2).unwrap();
    assert_eq!(lifted.kind(), AlgebroidKind::Skew);
}

#[test]
fn lifted_algebroids_keep_their_kind() {
    let base = CoordinateSystem::new("M", 2).even("x", [0, 0]);
    let mut e = AlgebroidData::new(base.clone(), 1);
    e.set_anchor(0, base.var("x"), v(base.var("x")).pow(2));
    assert!(e.is_lie());
    for k in 1..=3 {
        assert_eq!(lifted_algebroid(&e, k).unwrap().kind(), AlgebroidKind::Lie);
        let so3 = AlgebroidData::lie_algebra(&StructureConstants::so3());
        assert_eq!(lifted_algebroid(&so3, k).unwrap().kind(), AlgebroidKind::Lie);
    }
}

fn degree_two() -> GradedBundle {
    let a = CoordinateSystem::new("U", 1).even("x", 0).even("y", 1).even("z", 2);
    let b = CoordinateSystem::new("V", 1).even("X", 0).even("Y", 1).even("Z", 2);
    let (x, y, z) = (a.var("x").clone(), a.var("y").clone(), a.var("z").clone());
    let (xx, yy, zz) = (b.var("X").clone(), b.var("Y").clone(), b.var("Z").clone());
    let mut fwd = Assignment::new();
    fwd.insert(xx.clone(), v(&x));
    fwd.insert(yy.clone(), v(&y).scale_int(2));
    fwd.insert(zz.clone(), &v(&z).scale_int(3) + &(&v(&y).pow(2) * &v(&x)).scale(&rational(1, 2)));
    let mut inv = Assignment::new();
    inv.insert(x, v(&xx));
    inv.insert(y, v(&yy).scale(&rational(1, 2)));
    inv.insert(z, &v(&zz).scale(&rational(1, 3)) - &(&v(&yy).pow(2) * &v(&xx)).scale(&rational(1, 24)));
    GradedBundle::from_parts(1, vec![a, b], vec![TransitionMap::new(0, 1, fwd, Some(inv))]).unwrap()
}

#[test]
fn tangent_algebroid_is_lie_with_identity_anchor() {
    let point = GradedBundle::from_chart(CoordinateSystem::new("U", 1).even("u", 1));
    let t = tangent_algebroid(&point).unwrap();
    assert_eq!(t.kind(), AlgebroidKind::Lie);
    assert_eq!(t.q().action().len(), 1);
    assert!(t.is_weighted_lie_algebra());

    let f = degree_two();
    let t = tangent_algebroid(&f).unwrap();
    assert_eq!(t.kind(), AlgebroidKind::Lie);
    assert_eq!(t.degree(), 3);
    assert!(!t.is_weighted_lie_algebra());
    let rho = t.anchor().unwrap();
    for name in ["x", "y", "z"] {
        let target = rho.target().var(&format!("δ{name}"));
        let source = rho.source().var(&format!("d{name}"));
        assert_eq!(rho.component(target), &v(source));
    }
}

/// `𝒫 = ½ c^k_{ij} μ_k p_i p_j` on `ΠT*𝔤*` with `μ` of weight 1.
fn lie_poisson(c: &StructureConstants) -> (GradedBundle, SuperPolynomial) {
    let mut chart = CoordinateSystem::new("G", 1);
    for a in 0..c.dim() {
        chart = chart.even(&format!("m{}", a + 1), 1);
    }
    let f = GradedBundle::from_chart(chart);
    let pd = cotangent_chart(&f).unwrap();
    let mut p = SuperPolynomial::zero();
    for i in 0..c.dim() {
        for j in 0..c.dim() {
            for k in 0..c.dim() {
                let term = &(&v(pd.var(&format!("m{}", k + 1))) * &v(pd.var(&format!("p_dm{}", i + 1))))
                    * &v(pd.var(&format!("p_dm{}", j + 1)));
                p += &term.scale(&(c.get(i, j, k) * rational(1, 2)));
            }
        }
    }
    (f, p)
}

#[test]
fn linear_poisson_cotangent_algebroid() {
    let (f, p) = lie_poisson(&StructureConstants::so3());
    let alg = cotangent_algebroid(&f, &p).unwrap();
    assert_eq!(alg.degree(), 2);
    assert_eq!(alg.kind(), AlgebroidKind::Lie);
    let d = alg.restrict_to_a1().unwrap();
    assert!(!d.is_zero());
    assert!(d.variables().iter().all(|v| v.name().starts_with("p_dm")));

    let (f, p) = lie_poisson(&StructureConstants::so3().perturbed(0, 1, 0, integer(1)));
    assert_eq!(cotangent_algebroid(&f, &p).unwrap().kind(), AlgebroidKind::Skew);

    let zero = cotangent_algebroid(&f, &SuperPolynomial::zero()).unwrap();
    assert!(zero.q().is_zero());
    assert_eq!(zero.kind(), AlgebroidKind::Lie);
}

fn so3_sections(space: &graded_core::algebroid::OddPhaseSpace) -> Vec<(ReducedSection, u64)> {
    let chart = space.chart();
    let y = |a: usize| v(chart.var(&y_name(1, a)));
    let yv = |a: usize| chart.var(&y_name(1, a)).clone();
    let mut out = Vec::new();
    // Degree 2: constant Y, linear Z.
    let mut s = ReducedSection { y: vec![SuperPolynomial::int(1), SuperPolynomial::zero(), SuperPolynomial::int(2)], ..Default::default() };
    s.z.insert(yv(0), y(1));
    s.z.insert(yv(2), &y(0) - &y(2).scale_int(3));
    out.push((s, 2));
    let mut s = ReducedSection { y: vec![SuperPolynomial::zero(), SuperPolynomial::int(-1), SuperPolynomial::zero()], ..Default::default() };
    s.z.insert(yv(1), y(1).scale_int(2));
    out.push((s, 2));
    // Degree 3: linear Y, quadratic Z.
    let mut s = ReducedSection { y: vec![y(2), &y(0) + &y(1), SuperPolynomial::zero()], ..Default::default() };
    s.z.insert(yv(0), &y(0) * &y(2));
    out.push((s, 3));
    // Degree 1: constant Z only.
    let mut s = ReducedSection { y: vec![SuperPolynomial::zero(); 3], ..Default::default() };
    s.z.insert(yv(2), SuperPolynomial::int(5));
    out.push((s, 1));
    out
}

#[test]
fn reduced_bracket_matches_derived_bracket() {
    let c = StructureConstants::so3();
    let tower = lie_tower(&c, 2).unwrap();
    let (space, p) = tower.hamiltonian().unwrap();
    let sign = integer(DERIVED_BRACKET_SIGN);
    let sections = so3_sections(&space);
    for (s1, r1) in &sections {
        for (s2, r2) in &sections {
            if r1 + r2 < 3 {
                continue;
            }
            let derived = derived_bracket(&space, &s1.to_section(&space, *r1).unwrap(), &s2.to_section(&space, *r2).unwrap(), &p)
                .unwrap();
            let reduced = reduced_bracket(&c, s1, s2).scale(&sign);
            assert_eq!(derived, reduced.to_section(&space, r1 + r2 - 2).unwrap());
            assert_eq!(ReducedSection::from_section(&space, 3, &derived).unwrap(), reduced);
        }
    }
}

#[test]
fn reduced_bracket_specialisations() {
    let c = StructureConstants::so3();
    let tower = lie_tower(&c, 2).unwrap();
    let space = tower.phase_space().unwrap();
    let chart = space.chart();
    let e = |a: usize| {
        let mut y = vec![SuperPolynomial::zero(); 3];
        y[a] = SuperPolynomial::one();
        ReducedSection { y, ..Default::default() }
    };
    let b = reduced_bracket(&c, &e(0), &e(1));
    assert_eq!(b.y, vec![SuperPolynomial::zero(), SuperPolynomial::zero(), SuperPolynomial::one()]);
    assert!(b.z.is_empty());

    let y0 = chart.var(&y_name(1, 0)).clone();
    let mut z1 = ReducedSection { y: vec![SuperPolynomial::zero(); 3], ..Default::default() };
    z1.z.insert(y0.clone(), v(&y0));
    let mut z2 = ReducedSection { y: vec![v(&y0), SuperPolynomial::zero(), SuperPolynomial::zero()], ..Default::default() };
    z2.z.insert(y0.clone(), v(&y0).pow(2));
    let b = reduced_bracket(&c, &z1, &z2);
    assert_eq!(b.y[0], v(&y0));
    assert_eq!(b.z[&y0], v(&y0).pow(2));
}
