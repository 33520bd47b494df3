//! Command dispatch: builds core objects from a parsed document and collects
//! their checks into a [`Report`]. Malformed documents are `SpecError`s;
//! everything that goes wrong afterwards becomes a FAIL verdict.

use std::fmt::Display;

use graded_core::algebroid::{
    check_weighted_algebroid, derived_bracket, restrict_to_a1, AlgebroidKind, AlgebroidSection, OddPhaseSpace,
    WeightedAlgebroid, DERIVED_BRACKET_SIGN,
};
use graded_core::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use graded_core::constructions::{
    cotangent_algebroid, cotangent_chart, higher_tangent, lie_tower, prolongation_algebroid, reduced_bracket,
    second_tangent_identification, tangent_algebroid, AlgebroidData, PolynomialDiffeo, ReducedSection,
    StructureConstants,
};
use graded_core::linfun::{
    check_symmetric, embedding_compatibility, holonomic_embedding, linear_dual, linearise, linearise_morphism, mironian,
    mironian_check, pairing, pairing_invariance, parity_reverse, GLBundle, GradedMorphism,
};
use graded_core::report::Check;
use graded_core::superalg::{integer, Assignment, Derivation, MultiWeight, Parity, SuperPolynomial, Variable, WeightShift};

use crate::report::Report;
use crate::spec::{Document, Entry, Index, Pos, SectionKind, SpecError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Tangent,
    Cotangent,
    Tk,
    LieTower,
    Prolong,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Linearise,
    Dual,
    Mironian,
    Embed,
    CheckQ,
    Bracket,
    Construct(Construction),
}

impl Command {
    pub fn name(&self) -> String {
        match self {
            Command::Validate => "validate".into(),
            Command::Linearise => "linearise".into(),
            Command::Dual => "dual".into(),
            Command::Mironian => "mironian".into(),
            Command::Embed => "embed".into(),
            Command::CheckQ => "check-q".into(),
            Command::Bracket => "bracket".into(),
            Command::Construct(c) => format!(
                "construct {}",
                match c {
                    Construction::Tangent => "tangent",
                    Construction::Cotangent => "cotangent",
                    Construction::Tk => "tk",
                    Construction::LieTower => "lie-tower",
                    Construction::Prolong => "prolong",
                }
            ),
        }
    }
}

pub fn run(command: Command, doc: &Document) -> Result<Report, SpecError> {
    let mut report = Report::new(command.name());
    match command {
        Command::Validate => validate(doc, &mut report)?,
        Command::Linearise => linearise_cmd(doc, &mut report)?,
        Command::Dual => dual(doc, &mut report)?,
        Command::Mironian => mironian_cmd(doc, &mut report)?,
        Command::Embed => embed(doc, &mut report)?,
        Command::CheckQ => check_q(doc, &mut report)?,
        Command::Bracket => bracket(doc, &mut report)?,
        Command::Construct(c) => construct(c, doc, &mut report)?,
    }
    Ok(report)
}

fn syntax(pos: Pos, message: impl Into<String>) -> SpecError {
    SpecError::Syntax {
        pos,
        message: message.into(),
    }
}

/// Records a FAIL verdict for an error and returns `None`.
fn attempt<T, E: Display>(report: &mut Report, id: &str, r: Result<T, E>) -> Option<T> {
    match r {
        Ok(t) => Some(t),
        Err(e) => {
            report.check(Check::fail(id, e.to_string()));
            None
        }
    }
}

fn lookup(chart: &CoordinateSystem) -> impl Fn(&str) -> Option<Variable> + '_ {
    move |n| chart.get(n).cloned()
}

fn describe(chart: &CoordinateSystem) -> String {
    chart
        .variables()
        .iter()
        .map(|v| {
            let parity = if v.is_odd() { " odd" } else { "" };
            format!("{} {}{parity}", v.name(), v.weight().render(chart.arity()))
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> Vec<Check> {
    checks
        .into_iter()
        .map(|mut c| {
            c.id = format!("{prefix}{}", c.id);
            c
        })
        .collect()
}

fn emit_bundle(report: &mut Report, prefix: &str, b: &GradedBundle) {
    for c in b.charts() {
        report.output(format!("{prefix}chart[{}]", c.name()), describe(c));
    }
    for t in b.transitions() {
        let label = format!("{prefix}transition[{}->{}]", b.chart(t.source).name(), b.chart(t.target).name());
        for (v, img) in &t.forward {
            report.output(format!("{label}.{}", v.name()), img.render());
        }
    }
}

// ---- document → core objects ------------------------------------------------

fn charts(doc: &Document) -> Vec<(String, CoordinateSystem, Pos)> {
    let arity = doc.arity();
    doc.charts()
        .map(|s| {
            let SectionKind::Chart(name) = &s.kind else { unreachable!() };
            let mut chart = CoordinateSystem::new(name.clone(), arity);
            for e in &s.entries {
                if let crate::spec::Value::Coordinate { weight, parity } = &e.value {
                    chart = chart.with(&e.key.name, MultiWeight::new(weight.clone()), *parity);
                }
            }
            (name.clone(), chart, s.pos)
        })
        .collect()
}

fn assignment(entries: &[Entry], source: &CoordinateSystem, target: &CoordinateSystem, at: Pos) -> Result<Assignment, SpecError> {
    let mut out = Assignment::new();
    for e in entries {
        out.insert(target.var(&e.key.name).clone(), e.expr().eval(&lookup(source))?);
    }
    if let Some(v) = target.variables().iter().find(|v| !out.contains_key(*v)) {
        return Err(syntax(at, format!("no law given for `{}`", v.name())));
    }
    Ok(out)
}

/// The atlas declared by the chart, transition and inverse sections.
pub fn atlas(doc: &Document) -> Result<GradedBundle, SpecError> {
    let charts = charts(doc);
    if charts.is_empty() {
        return Err(syntax(Pos { line: 1, column: 1 }, "no [chart] section"));
    }
    let index = |n: &str| charts.iter().position(|(m, _, _)| m == n).expect("charts checked at parse time");
    let mut transitions = Vec::new();
    for s in &doc.sections {
        match &s.kind {
            SectionKind::Transition(a, b) => {
                let (i, j) = (index(a), index(b));
                let forward = assignment(&s.entries, &charts[i].1, &charts[j].1, s.pos)?;
                let inverse = match doc.find(&SectionKind::Inverse(b.clone(), a.clone())) {
                    Some(inv) => Some(assignment(&inv.entries, &charts[j].1, &charts[i].1, inv.pos)?),
                    None => None,
                };
                transitions.push(TransitionMap::new(i, j, forward, inverse));
            }
            SectionKind::Inverse(a, b) if doc.find(&SectionKind::Transition(b.clone(), a.clone())).is_none() => {
                return Err(syntax(s.pos, format!("inverse without a [transition {b} -> {a}]")));
            }
            _ => {}
        }
    }
    GradedBundle::from_parts(doc.arity(), charts.into_iter().map(|c| c.1).collect(), transitions)
        .map_err(|e| syntax(Pos { line: 1, column: 1 }, e.to_string()))
}

fn task_degree(doc: &Document) -> Option<(usize, Pos)> {
    let e = doc.find(&SectionKind::Task)?.entries.iter().find(|e| e.key.name == "degree")?;
    let n = e.expr().as_integer()?;
    Some((n.max(0) as usize, e.pos))
}

fn degree_or(doc: &Document, default: usize) -> Result<usize, SpecError> {
    match task_degree(doc) {
        Some((0, pos)) => Err(syntax(pos, "degree must be at least 1")),
        Some((k, _)) => Ok(k),
        None => Ok(default),
    }
}

fn constant(e: &Entry) -> Result<graded_core::superalg::Rational, SpecError> {
    let p = e.expr().eval(&|_| None)?;
    if p.is_constant() {
        Ok(p.constant_term())
    } else {
        Err(syntax(e.pos, "expected a constant"))
    }
}

fn index(e: &Entry, i: usize, bound: usize) -> Result<usize, SpecError> {
    match &e.key.indices[i] {
        Index::Int(n) if (*n as usize) <= bound => Ok(*n as usize - 1),
        other => Err(syntax(e.pos, format!("index {other} exceeds {bound}"))),
    }
}

fn structure_entries(doc: &Document) -> &[Entry] {
    doc.find(&SectionKind::Structure).map_or(&[], |s| &s.entries)
}

fn integer_key(doc: &Document, key: &str) -> Result<Option<usize>, SpecError> {
    let Some(e) = structure_entries(doc).iter().find(|e| e.key.name == key) else {
        return Ok(None);
    };
    match e.expr().as_integer() {
        Some(n) if n >= 1 => Ok(Some(n as usize)),
        _ => Err(syntax(e.pos, format!("`{key}` must be a positive integer"))),
    }
}

/// Structure constants from `dim` and `c[i, j, k]`, antisymmetrized.
pub fn structure_constants(doc: &Document) -> Result<Option<StructureConstants>, SpecError> {
    let Some(dim) = integer_key(doc, "dim")? else {
        return Ok(None);
    };
    let mut c = StructureConstants::zero(dim);
    for e in structure_entries(doc).iter().filter(|e| e.key.name == "c") {
        let (i, j, k) = (index(e, 0, dim)?, index(e, 1, dim)?, index(e, 2, dim)?);
        if i == j {
            return Err(syntax(e.pos, "c[i, i, k] vanishes by antisymmetry"));
        }
        c.set_bracket(i, j, k, constant(e)?);
    }
    Ok(Some(c))
}

/// Anchor and bracket data over the first chart (or a point) from `rank`,
/// `anchor[a, x]` and `bracket[a, b, c]`.
pub fn algebroid_data(doc: &Document) -> Result<Option<AlgebroidData>, SpecError> {
    let Some(rank) = integer_key(doc, "rank")? else {
        return Ok(None);
    };
    let mut base = CoordinateSystem::new("M", 2);
    if let Some(s) = doc.charts().next() {
        let SectionKind::Chart(name) = &s.kind else { unreachable!() };
        base = CoordinateSystem::new(name.clone(), 2);
        for e in &s.entries {
            match &e.value {
                crate::spec::Value::Coordinate { weight, parity: Parity::Even } if weight.iter().all(|w| *w == 0) => {
                    base = base.even(&e.key.name, [0, 0]);
                }
                _ => return Err(syntax(e.pos, "algebroid base coordinates must be even of weight 0")),
            }
        }
    }
    let mut data = AlgebroidData::new(base.clone(), rank);
    for e in structure_entries(doc) {
        match e.key.name.as_str() {
            "anchor" => {
                let a = index(e, 0, rank)?;
                let Index::Name(x) = &e.key.indices[1] else { unreachable!("checked at parse time") };
                let x = base.get(x).cloned().ok_or_else(|| SpecError::UnknownVariable {
                    pos: e.pos,
                    name: x.clone(),
                })?;
                data.set_anchor(a, &x, e.expr().eval(&lookup(&base))?);
            }
            "bracket" => {
                let (a, b, c) = (index(e, 0, rank)?, index(e, 1, rank)?, index(e, 2, rank)?);
                if a == b {
                    return Err(syntax(e.pos, "bracket[a, a, c] vanishes by antisymmetry"));
                }
                let p = e.expr().eval(&lookup(&base))?;
                data.set_bracket(a, b, c, p.clone());
                data.set_bracket(b, a, c, p.scale(&integer(-1)));
            }
            _ => {}
        }
    }
    Ok(Some(data))
}

fn require_structure<T>(found: Option<T>, what: &str) -> Result<T, SpecError> {
    found.ok_or_else(|| syntax(Pos { line: 1, column: 1 }, format!("missing [structure] {what}")))
}

// ---- commands --------------------------------------------------------------

fn validate(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let b = atlas(doc)?;
    report.output("degree", b.degree().to_string());
    report.checks(b.validate().checks);
    Ok(())
}

fn symmetric_check(g: &GLBundle) -> Check {
    match check_symmetric(g) {
        Ok(s) => Check::pass("symmetric", format!("degree {}", s.degree)),
        Err(e) => Check::fail("symmetric", e.to_string()),
    }
}

fn linearise_cmd(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let b = atlas(doc)?;
    report.checks(prefixed("F.", b.validate().checks));
    if let Some(g) = attempt(report, "linearise", linearise(&b)) {
        report.output("degree", g.degree().to_string());
        emit_bundle(report, "D.", g.bundle());
        report.checks(prefixed("D.", g.validate().checks));
        report.check(symmetric_check(&g));
    }
    Ok(())
}

fn dual(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let b = atlas(doc)?;
    let k = b.degree();
    if let Some(g) = attempt(report, "dual", linear_dual(&b)) {
        emit_bundle(report, "D*.", g.bundle());
        report.checks(prefixed("D*.", g.validate().checks));
    }
    for c in b.charts() {
        if let Some(p) = attempt(report, "pairing", pairing(c)) {
            report.output(format!("pairing[{}]", c.name()), p.render());
            let expected = MultiWeight::new(vec![k as u32, 1]);
            let found = p.weight_of();
            report.check(
                Check::new(format!("pairing[{}].weight", c.name()), found.is(&expected), format!("found {found}"))
                    .with_weight(expected.render(2)),
            );
        }
    }
    if let Some(checks) = attempt(report, "pairing", pairing_invariance(&b)) {
        report.checks(checks);
    }
    Ok(())
}

fn mironian_cmd(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let b = atlas(doc)?;
    if let Some(m) = attempt(report, "mironian", mironian(&b)) {
        emit_bundle(report, "Mi.", m.bundle());
        report.checks(prefixed("Mi.", m.validate().checks));
        report.checks(mironian_check(&m));
    }
    Ok(())
}

fn embed(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let b = atlas(doc)?;
    for t in b.transitions() {
        let (s, d) = (b.chart(t.source), b.chart(t.target));
        let label = format!("embed[{}->{}]", s.name(), d.name());
        let Some(phi) = attempt(report, &label, GradedMorphism::new(s.clone(), d.clone(), t.forward.clone())) else {
            continue;
        };
        let pulled = linearise_morphism(&phi).and_then(|dphi| holonomic_embedding(s)?.then(&dphi));
        if let Some(pulled) = attempt(report, &label, pulled) {
            for (v, img) in pulled.components() {
                report.output(format!("iota*{label}.{}", v.name()), img.render());
            }
        }
        if let Some(residuals) = attempt(report, &label, embedding_compatibility(&phi)) {
            for (v, r) in residuals {
                report.check(Check::zero(format!("{label}.{}", v.name()), r));
            }
        }
    }
    Ok(())
}

/// Outputs and verdicts shared by every algebroid: the kind, `Q`, `P`,
/// `[Q,Q] = 0` and `[P,P] = 0`, and their agreement.
fn algebroid_report(report: &mut Report, alg: &WeightedAlgebroid) -> bool {
    let diag = alg.diagnostics();
    report.output("degree", alg.degree().to_string());
    report.output("odd chart", describe(alg.odd_chart()));
    report.output("kind", alg.kind().to_string());
    report.output("Q", alg.q().render());
    report.checks(diag.checks);
    let Some((space, p)) = attempt(report, "hamiltonian", alg.hamiltonian()) else {
        return false;
    };
    report.output("P", p.render());
    let Some(pp) = attempt(report, "[P,P]", space.schouten(&p, &p)) else {
        return false;
    };
    let k = alg.degree() as u32;
    let expected = MultiWeight::new(vec![k - 1, 3, 1]);
    let pp_zero = pp.is_zero();
    let mut c = Check::zero("[P,P]", pp).with_weight(expected.render(3));
    if !pp_zero {
        c.detail = format!("nonzero, kind {}", alg.kind());
    }
    report.check(c);
    let q_zero = diag.square.is_zero();
    report.check(Check::new(
        "[Q,Q]=0 <=> [P,P]=0",
        q_zero == pp_zero,
        format!("[Q,Q] {}, [P,P] {}", zero_word(q_zero), zero_word(pp_zero)),
    ));
    q_zero
}

fn zero_word(b: bool) -> &'static str {
    if b {
        "zero"
    } else {
        "nonzero"
    }
}

fn jacobi_check(report: &mut Report, c: &StructureConstants, lie: bool) {
    let residual = c.jacobi_residual();
    let mut detail = format!("{} nonzero Jacobi components", residual.len());
    if let Some(((a, b, e, f), v)) = residual.first() {
        detail.push_str(&format!(", first at ({},{},{};{}) = {v}", a + 1, b + 1, e + 1, f + 1));
    }
    report.check(Check::new("jacobi", residual.is_empty(), detail));
    report.check(Check::new(
        "jacobi <=> [Q,Q]=0",
        residual.is_empty() == lie,
        format!("jacobi {}, homological {lie}", residual.is_empty()),
    ));
}

fn tower_report(report: &mut Report, c: &StructureConstants, k: usize) {
    if let Some(alg) = attempt(report, "lie-tower", lie_tower(c, k)) {
        let lie = algebroid_report(report, &alg);
        jacobi_check(report, c, lie);
    }
}

fn prolongation_report(report: &mut Report, e: &AlgebroidData, k: usize) {
    let Some(alg) = attempt(report, "prolong", prolongation_algebroid(e, k)) else {
        return;
    };
    let lie = algebroid_report(report, &alg);
    if let Some(q) = attempt(report, "restrict", restrict_to_a1(alg.q(), alg.odd_chart())) {
        let same = q == e.q();
        report.check(Check::new("restrict", same, format!("restriction {}", q.render())));
    }
    report.check(Check::new(
        "lie <=> input lie",
        lie == e.is_lie(),
        format!("prolongation homological {lie}, input homological {}", e.is_lie()),
    ));
    report.check(Check::new(
        "kind",
        (alg.kind() == AlgebroidKind::Lie) == lie,
        format!("kind {}", alg.kind()),
    ));
}

/// The carrier a `[field]` lives on: `D(F)` for a graded bundle, the
/// declared atlas for a double one.
fn field_carrier(doc: &Document, b: GradedBundle) -> Result<GLBundle, String> {
    let g = if b.arity() == 1 {
        linearise(&b).map_err(|e| e.to_string())?
    } else {
        GLBundle::new(b).map_err(|e| e.to_string())?
    };
    match task_degree(doc) {
        Some((k, _)) => g.with_degree(k as u64).map_err(|e| e.to_string()),
        None => Ok(g),
    }
}

fn field(doc: &Document, pd: &CoordinateSystem) -> Result<Derivation, SpecError> {
    let s = doc.find(&SectionKind::Field).expect("caller checked");
    let mut q = Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]));
    for e in &s.entries {
        let v = pd.get(&e.key.name).ok_or_else(|| SpecError::UnknownVariable {
            pos: e.pos,
            name: e.key.name.clone(),
        })?;
        q.set(v, e.expr().eval(&lookup(pd))?);
    }
    Ok(q)
}

enum Source {
    Field(WeightedAlgebroid),
    Tower(WeightedAlgebroid, StructureConstants),
    Prolongation(WeightedAlgebroid),
}

/// The algebroid a document describes, reporting how it was obtained.
fn source(doc: &Document, report: &mut Report) -> Result<Option<Source>, SpecError> {
    if doc.find(&SectionKind::Field).is_some() {
        let b = atlas(doc)?;
        let Some(carrier) = attempt(report, "carrier", field_carrier(doc, b)) else {
            return Ok(None);
        };
        let Some(pd) = attempt(report, "carrier", parity_reverse(&carrier)) else {
            return Ok(None);
        };
        let pd = pd.chart(0).clone();
        let q = field(doc, &pd)?;
        let diag = check_weighted_algebroid(&q, &pd);
        if diag.kind.is_none() {
            report.output("odd chart", describe(&pd));
            report.output("Q", q.render());
            report.checks(diag.checks);
            return Ok(None);
        }
        return Ok(attempt(report, "algebroid", WeightedAlgebroid::new(carrier, q)).map(Source::Field));
    }
    if let Some(c) = structure_constants(doc)? {
        let k = degree_or(doc, 2)?;
        return Ok(attempt(report, "lie-tower", lie_tower(&c, k)).map(|a| Source::Tower(a, c)));
    }
    if let Some(e) = algebroid_data(doc)? {
        let k = degree_or(doc, 2)?;
        return Ok(attempt(report, "prolong", prolongation_algebroid(&e, k)).map(Source::Prolongation));
    }
    Err(syntax(Pos { line: 1, column: 1 }, "need a [field] or [structure] section"))
}

fn check_q(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    if doc.find(&SectionKind::Field).is_none() {
        if let Some(c) = structure_constants(doc)? {
            tower_report(report, &c, degree_or(doc, 2)?);
            return Ok(());
        }
        if let Some(e) = algebroid_data(doc)? {
            prolongation_report(report, &e, degree_or(doc, 2)?);
            return Ok(());
        }
    }
    if let Some(Source::Field(alg)) = source(doc, report)? {
        algebroid_report(report, &alg);
    }
    Ok(())
}

fn section(
    space: &OddPhaseSpace,
    name: &str,
    entries: &[Entry],
) -> Result<Result<AlgebroidSection, String>, SpecError> {
    let base = |n: &str| space.base().iter().find(|v| v.name() == n).cloned();
    let mut poly = SuperPolynomial::zero();
    for e in entries {
        let theta = space
            .fiber()
            .iter()
            .find(|v| v.name() == e.key.name)
            .ok_or_else(|| SpecError::UnknownVariable {
                pos: e.pos,
                name: e.key.name.clone(),
            })?;
        poly += &(&e.expr().eval(&base)? * &SuperPolynomial::var(space.pi(theta)));
    }
    Ok(AlgebroidSection::from_poly(space, poly).map_err(|e| format!("section {name}: {e}")))
}

fn reduced_output(report: &mut Report, label: &str, s: &ReducedSection) {
    for (a, y) in s.y.iter().enumerate() {
        report.output(format!("{label}.Y[{}]", a + 1), y.render());
    }
    for (v, z) in &s.z {
        report.output(format!("{label}.Z[{}]", v.name()), z.render());
    }
}

fn bracket(doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    let named: Vec<(&str, &[Entry])> = doc.sections_named().map(|(n, s)| (n, s.entries.as_slice())).collect();
    if named.len() != 2 {
        return Err(syntax(
            Pos { line: 1, column: 1 },
            format!("bracket needs exactly two [section] blocks, found {}", named.len()),
        ));
    }
    let Some(src) = source(doc, report)? else {
        return Ok(());
    };
    let (alg, constants) = match src {
        Source::Field(a) | Source::Prolongation(a) => (a, None),
        Source::Tower(a, c) => (a, Some(c)),
    };
    report.output("kind", alg.kind().to_string());
    let Some((space, p)) = attempt(report, "hamiltonian", alg.hamiltonian()) else {
        return Ok(());
    };
    let mut sections = Vec::new();
    for (name, entries) in &named {
        let s = section(&space, name, entries)?;
        if let Some(s) = attempt(report, &format!("section[{name}]"), s) {
            report.output(name.to_string(), s.poly().render());
            report.output(format!("{name}.degree"), s.degree().to_string());
            sections.push(s);
        }
    }
    let [s1, s2] = sections.as_slice() else {
        return Ok(());
    };
    let k = space.degree();
    let Some(b) = attempt(report, "bracket", derived_bracket(&space, s1, s2, &p)) else {
        return Ok(());
    };
    report.output("bracket", b.poly().render());
    report.output("bracket.degree", b.degree().to_string());
    let r = s1.degree() + s2.degree() - k;
    let expected = MultiWeight::new(vec![(r - 1) as u32, 0, 1]);
    let weight_ok = b.poly().is_zero() || b.poly().weight_of().is(&expected);
    report.check(
        Check::new(
            "degree law",
            b.degree() == r && weight_ok,
            format!("{} + {} - {k} = {}", s1.degree(), s2.degree(), b.degree()),
        )
        .with_weight(expected.render(3)),
    );
    if let Some(c) = constants {
        let reduce = |s: &AlgebroidSection| ReducedSection::from_section(&space, c.dim(), s);
        let (Some(y1), Some(y2), Some(yb)) = (
            attempt(report, "reduce", reduce(s1)),
            attempt(report, "reduce", reduce(s2)),
            attempt(report, "reduce", reduce(&b)),
        ) else {
            return Ok(());
        };
        let formula = reduced_bracket(&c, &y1, &y2);
        reduced_output(report, "reduced", &formula);
        let signed = formula.scale(&integer(DERIVED_BRACKET_SIGN));
        report.check(Check::new(
            "reduced bracket = derived bracket",
            signed == yb,
            format!("sign {DERIVED_BRACKET_SIGN}"),
        ));
    }
    Ok(())
}

fn diffeo(doc: &Document) -> Result<PolynomialDiffeo, String> {
    let b = atlas(doc).map_err(|e| e.to_string())?;
    let [t] = b.transitions() else {
        return Err(format!("expected one transition, found {}", b.transitions().len()));
    };
    PolynomialDiffeo::new(
        b.chart(t.source).clone(),
        b.chart(t.target).clone(),
        t.forward.clone(),
        t.inverse.clone(),
    )
    .map_err(|e| e.to_string())
}

fn construct(c: Construction, doc: &Document, report: &mut Report) -> Result<(), SpecError> {
    match c {
        Construction::Tangent => {
            let b = atlas(doc)?;
            if let Some(alg) = attempt(report, "tangent", tangent_algebroid(&b)) {
                emit_bundle(report, "T.", alg.carrier().bundle());
                algebroid_report(report, &alg);
            }
        }
        Construction::Cotangent => {
            let b = atlas(doc)?;
            let Some(e) = structure_entries(doc).iter().find(|e| e.key.name == "bivector") else {
                return Err(syntax(Pos { line: 1, column: 1 }, "missing [structure] bivector"));
            };
            let Some(chart) = attempt(report, "cotangent", cotangent_chart(&b)) else {
                return Ok(());
            };
            let bivector = e.expr().eval(&lookup(&chart))?;
            report.output("bivector", bivector.render());
            if let Some(alg) = attempt(report, "cotangent", cotangent_algebroid(&b, &bivector)) {
                algebroid_report(report, &alg);
            }
        }
        Construction::LieTower => {
            let constants = require_structure(structure_constants(doc)?, "dim")?;
            tower_report(report, &constants, degree_or(doc, 2)?);
        }
        Construction::Prolong => {
            let data = require_structure(algebroid_data(doc)?, "rank")?;
            prolongation_report(report, &data, degree_or(doc, 2)?);
        }
        Construction::Tk => {
            let k = degree_or(doc, 2)?;
            atlas(doc)?;
            let Some(phi) = attempt(report, "diffeo", diffeo(doc)) else {
                return Ok(());
            };
            if let Some(t) = attempt(report, "tk", higher_tangent(&phi, k)) {
                let prefix = format!("T{k}.");
                emit_bundle(report, &prefix, &t);
                report.checks(prefixed(&prefix, t.validate().checks));
                if let Some(g) = attempt(report, "linearise", linearise(&t)) {
                    report.check(symmetric_check(&g));
                }
            }
            if k == 2 {
                if let Some(residuals) = attempt(report, "D(T2M)=T(TM)", second_tangent_identification(&phi)) {
                    for (label, r) in residuals {
                        report.check(Check::zero(format!("D(T2M)=T(TM) {label}"), r));
                    }
                }
            }
        }
    }
    Ok(())
}
