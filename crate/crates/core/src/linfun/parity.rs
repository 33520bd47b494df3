use std::collections::BTreeMap;

use super::gl::is_fiber;
use super::{GLBundle, LinError};
use crate::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use crate::superalg::{Assignment, Variable};

fn relabel_map(map: &Assignment, flip: &BTreeMap<Variable, Variable>) -> Assignment {
    map.iter()
        .map(|(v, img)| (flip.get(v).unwrap_or(v).clone(), img.relabel(flip)))
        .collect()
}

/// `ΠG`: the fiber coordinates change parity, weights and laws are kept.
pub fn parity_reverse(g: &GLBundle) -> Result<GLBundle, LinError> {
    let mut flip = BTreeMap::new();
    let mut charts = Vec::new();
    for c in g.bundle().charts() {
        let vars: Vec<Variable> = c
            .variables()
            .iter()
            .map(|v| {
                if is_fiber(v) {
                    let w = v.with_parity(v.parity().flip());
                    flip.insert(v.clone(), w.clone());
                    w
                } else {
                    v.clone()
                }
            })
            .collect();
        charts.push(CoordinateSystem::from_variables(c.name(), 2, vars)?);
    }
    let transitions = g
        .bundle()
        .transitions()
        .iter()
        .map(|t| {
            TransitionMap::new(
                t.source,
                t.target,
                relabel_map(&t.forward, &flip),
                t.inverse.as_ref().map(|inv| relabel_map(inv, &flip)),
            )
        })
        .collect();
    GLBundle::new(GradedBundle::from_parts(2, charts, transitions)?)?.with_degree(g.degree())
}
