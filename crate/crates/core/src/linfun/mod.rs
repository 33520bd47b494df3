//! The linearisation functor from graded bundles to GL-bundles, its image,
//! and the dual constructions built on it.

mod dual;
mod gl;
mod linearise;
mod morphism;
mod parity;
mod symmetric;

pub use dual::{dual_chart, dual_of_gl, linear_dual, mironian, mironian_check, pairing, pairing_invariance, DualChart};
pub use gl::{is_fiber, GLBundle};
pub use linearise::{
    embedding_compatibility, holonomic_embedding, linearise, linearise_chart, linearise_morphism, LinearisedChart,
};
pub use morphism::{tower_projection, GradedMorphism};
pub use parity::parity_reverse;
pub use symmetric::{check_symmetric, is_symmetric, reconstruct, ChartMatching, SymmetricStructure};

use crate::bundle::BundleError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinError {
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error("not a GL-bundle: {0}")]
    NotGL(String),
    #[error("law of `{variable}` is not linear in the fiber coordinates")]
    NonlinearFiber { variable: String },
    #[error("not a graded morphism: {0}")]
    WeightViolation(String),
    #[error("not symmetric: {reason}")]
    NotSymmetric { reason: String, residual: String },
    #[error("transition {transition} has no declared inverse")]
    MissingInverse { transition: String },
    #[error("degree 0 bundles have no linearisation")]
    DegreeZero,
    #[error("no component for target coordinate `{0}`")]
    MissingComponent(String),
    #[error("component `{component}` uses `{variable}` outside the source chart")]
    ForeignVariable { component: String, variable: String },
    #[error("charts of composed morphisms do not match")]
    ChartMismatch,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{tangent_bundle, CoordinateSystem, GradedBundle, TransitionMap};
    use crate::superalg::{rational, Assignment, MultiWeight, Parity, SuperPolynomial, Variable};

    fn v(p: &Variable) -> SuperPolynomial {
        SuperPolynomial::var(p)
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
    fn linearisation_is_symmetric_and_reconstructs() {
        let f = degree_two();
        let d = linearise(&f).unwrap();
        assert!(d.validate().passed());
        let names: Vec<&str> = d.chart(0).variables().iter().map(|v| v.name()).collect();
        assert_eq!(names, ["x", "y", "dy", "dz"]);
        let s = check_symmetric(&d).unwrap();
        assert_eq!(s.charts[0].top.len(), 1);
        assert_eq!(reconstruct(&d).unwrap(), f);
    }

    #[test]
    fn tangent_of_vector_bundle_is_not_symmetric() {
        let a = CoordinateSystem::new("U", 1).even("x1", 0).even("x2", 0).even("y1", 1).even("y2", 1);
        let b = CoordinateSystem::new("V", 1).even("X1", 0).even("X2", 0).even("Y1", 1).even("Y2", 1);
        let s = |n: &str| v(a.var(n));
        let t = |n: &str| v(b.var(n));
        let mut fwd = Assignment::new();
        fwd.insert(b.var("X1").clone(), s("x1"));
        fwd.insert(b.var("X2").clone(), s("x2"));
        fwd.insert(b.var("Y1").clone(), &s("y1") + &(&s("x1") * &s("y2")));
        fwd.insert(b.var("Y2").clone(), s("y2"));
        let mut inv = Assignment::new();
        inv.insert(a.var("x1").clone(), t("X1"));
        inv.insert(a.var("x2").clone(), t("X2"));
        inv.insert(a.var("y1").clone(), &t("Y1") - &(&t("X1") * &t("Y2")));
        inv.insert(a.var("y2").clone(), t("Y2"));
        let e = GradedBundle::from_parts(1, vec![a.clone(), b.clone()], vec![TransitionMap::new(0, 1, fwd, Some(inv))])
            .unwrap();
        assert!(e.validate().passed());
        let te = GLBundle::new(tangent_bundle(&e).unwrap()).unwrap();
        assert_eq!(te.degree(), 2);
        assert!(te.validate().passed());
        match check_symmetric(&te) {
            Err(LinError::NotSymmetric { residual, .. }) => assert!(!residual.is_empty()),
            other => panic!("expected a symmetry failure, got {other:?}"),
        }
    }

    #[test]
    fn non_exact_top_law_is_rejected() {
        let a = CoordinateSystem::new("U", 2)
            .even("x", [0, 0])
            .even("y1", [1, 0])
            .even("y2", [1, 0])
            .even("dy1", [0, 1])
            .even("dy2", [0, 1])
            .even("dz", [1, 1]);
        let b = a.renamed("V");
        let mut fwd: Assignment = a.variables().iter().map(|u| (u.clone(), v(u))).collect();
        fwd.insert(a.var("dz").clone(), &v(a.var("dz")) + &(&v(a.var("y1")) * &v(a.var("dy2"))));
        let g = GLBundle::new(GradedBundle::from_parts(2, vec![a, b], vec![TransitionMap::new(0, 1, fwd, None)]).unwrap())
            .unwrap();
        assert!(!is_symmetric(&g));
    }

    #[test]
    fn morphism_linearisation_commutes_with_embedding() {
        let a = CoordinateSystem::new("U", 1).even("x", 0).even("y", 1).even("z", 2);
        let b = a.renamed("V");
        let s = |n: &str| v(a.var(n));
        let mut comps = Assignment::new();
        comps.insert(b.var("x").clone(), s("x"));
        comps.insert(b.var("y").clone(), &s("y").scale_int(2) + &(&s("x") * &s("y")));
        comps.insert(b.var("z").clone(), &s("z") + &(&s("y").pow(2) * &s("x")));
        let phi = GradedMorphism::new(a.clone(), b, comps).unwrap();
        assert!(phi.weight_violations().is_empty());
        for (_, r) in embedding_compatibility(&phi).unwrap() {
            assert!(r.is_zero(), "{r}");
        }
        let d_phi = linearise_morphism(&phi).unwrap();
        let lin = linearise_chart(&a).unwrap();
        let dz = &lin.dots[a.var("z")];
        let dy = &lin.dots[a.var("y")];
        let expected = &v(dz) + &SuperPolynomial::product_of(rational(2, 1), &[a.var("x"), a.var("y"), dy]);
        assert_eq!(d_phi.component(dz), &expected);
        let id = GradedMorphism::identity(&a);
        assert_eq!(linearise_morphism(&id).unwrap(), GradedMorphism::identity(&lin.chart));
    }

    #[test]
    fn dual_pairing_is_invariant() {
        let f = degree_two();
        for c in pairing_invariance(&f).unwrap() {
            assert!(c.passed, "{c:?}");
        }
        let p = pairing(f.chart(0)).unwrap();
        assert!(p.weight_of().is(&MultiWeight::from([2, 1])));
        let m = mironian(&f).unwrap();
        let names: Vec<&str> = m.chart(0).variables().iter().map(|v| v.name()).collect();
        assert_eq!(names, ["x", "y", "p_dz"]);
        assert!(mironian_check(&m).iter().all(|c| c.passed));
        assert!(m.validate().passed());
    }

    #[test]
    fn missing_inverse_blocks_the_dual() {
        let a = CoordinateSystem::new("U", 1).even("x", 1);
        let b = CoordinateSystem::new("V", 1).even("X", 1);
        let mut fwd = Assignment::new();
        fwd.insert(b.var("X").clone(), v(a.var("x")).scale_int(2));
        let f = GradedBundle::from_parts(1, vec![a, b], vec![TransitionMap::new(0, 1, fwd, None)]).unwrap();
        assert!(matches!(linear_dual(&f), Err(LinError::MissingInverse { .. })));
    }

    #[test]
    fn parity_reversal_flips_fibers_only() {
        let d = linearise(&degree_two()).unwrap();
        let pd = parity_reverse(&d).unwrap();
        assert!(pd.validate().passed());
        for u in pd.chart(0).variables() {
            assert_eq!(u.parity() == Parity::Odd, is_fiber(u));
        }
        assert_eq!(parity_reverse(&pd).unwrap(), d);
    }
}
