use std::path::PathBuf;

use graded_cli::run::{atlas, run, Command, Construction};
use graded_cli::spec::{parse, Pos, SpecError};
use graded_core::bundle::CoordinateSystem;
use graded_core::superalg::{rational, SuperPolynomial};

fn specs() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs");
    let mut out: Vec<(String, String)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "spec"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    out
}

fn spec(name: &str) -> String {
    specs().into_iter().find(|(n, _)| n == name).unwrap().1
}

#[test]
fn shipped_specs_round_trip() {
    let all = specs();
    assert_eq!(all.len(), 8);
    for (name, text) in all {
        let doc = parse(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let rendered = doc.render();
        let again = parse(&rendered).unwrap();
        assert_eq!(doc.without_positions(), again.without_positions(), "{name}");
        assert_eq!(again.render(), rendered, "{name}");
    }
}

#[test]
fn minimal_bundle_has_two_variables() {
    let doc = parse("[chart U]\nx = 0\ny = 1\n").unwrap();
    let b = atlas(&doc).unwrap();
    assert_eq!(b.chart(0).len(), 2);
    assert_eq!(b.degree(), 1);
}

#[test]
fn degree_two_spec_encodes_the_worked_example() {
    let b = atlas(&parse(&spec("degree-two.spec")).unwrap()).unwrap();
    let u = CoordinateSystem::new("U", 1).even("x", 0).even("y", 1).even("z", 2);
    assert_eq!(b.chart(0), &u);
    let t = &b.transitions()[0];
    let v = b.chart(1);
    let (x, y, z) = (
        SuperPolynomial::var(u.var("x")),
        SuperPolynomial::var(u.var("y")),
        SuperPolynomial::var(u.var("z")),
    );
    // z' = z T_z + 1/2! y y T_yy with T_z = 3, T_yy = x.
    let expected = &z.scale_int(3) + &(&y.pow(2) * &x).scale(&rational(1, 2));
    assert_eq!(t.forward[v.var("Z")], expected);
    assert!(b.validate().passed());
}

#[test]
fn unknown_variables_are_located() {
    let text = "[chart U]\nx = 0\ny = 1\n[chart V]\nX = 0\nY = 1\n[transition U -> V]\nX = x\nY = 2*y + x*q\n";
    assert_eq!(
        parse(text).unwrap_err(),
        SpecError::UnknownVariable {
            pos: Pos { line: 9, column: 13 },
            name: "q".into()
        }
    );
    let text = "[chart U]\nx = 0\ny = 1\n[field]\ndy = x*dq\n";
    let doc = parse(text).unwrap();
    assert_eq!(
        run(Command::CheckQ, &doc).unwrap_err(),
        SpecError::UnknownVariable {
            pos: Pos { line: 5, column: 8 },
            name: "dq".into()
        }
    );
}

#[test]
fn missing_laws_and_arity_mismatches_are_rejected() {
    let text = "[chart U]\nx = 0\n[chart V]\nX = 0\nY = 1\n[transition U -> V]\nX = x\n";
    let err = run(Command::Validate, &parse(text).unwrap()).unwrap_err();
    assert!(matches!(err, SpecError::Syntax { pos: Pos { line: 6, column: 1 }, .. }), "{err}");
    let err = parse("[chart U]\nx = (0, 0)\n[chart V]\nX = 1\n").unwrap_err();
    assert!(matches!(err, SpecError::WeightArityMismatch { expected: 2, found: 1, .. }));
}

#[test]
fn check_q_on_the_so3_tower_is_lie() {
    let report = run(Command::CheckQ, &parse(&spec("so3-tower.spec")).unwrap()).unwrap();
    assert!(report.passed());
    assert!(report.outputs.iter().any(|o| o.name == "kind" && o.value == "lie"));
}

#[test]
fn linearise_on_f3_emits_the_dotted_laws() {
    let report = run(Command::Linearise, &parse(&spec("degree-three.spec")).unwrap()).unwrap();
    assert!(report.passed());
    let law = |n: &str| {
        report
            .outputs
            .iter()
            .find(|o| o.name == format!("D.transition[U->V].{n}"))
            .unwrap()
            .value
            .clone()
    };
    assert_eq!(law("dY"), "2*dy");
    assert_eq!(law("dZ"), "3*dz + x*y*dy");
    assert_eq!(law("dW"), "5*dw + y*dz + z*dy + x*y*dz + x*z*dy + y^2*dy");
}

#[test]
fn a_skew_field_fails_check_q() {
    let text = "[structure]\ndim = 3\nc[1, 2, 3] = 2\nc[2, 3, 1] = 1\nc[3, 1, 2] = 1\nc[1, 2, 1] = 1\n";
    let report = run(Command::CheckQ, &parse(text).unwrap()).unwrap();
    assert!(!report.passed());
    let verdict = |id: &str| report.verdicts.iter().find(|v| v.check_id == id).unwrap().passed();
    assert!(!verdict("jacobi"));
    assert!(!verdict("[Q,Q]"));
    assert!(!verdict("[P,P]"));
    assert!(verdict("jacobi <=> [Q,Q]=0"));
    assert!(verdict("[Q,Q]=0 <=> [P,P]=0"));
}

#[test]
fn construction_errors_become_verdicts() {
    // A degree-0 chart has no linearisation.
    let report = run(Command::Linearise, &parse("[chart U]\nx = 0\n").unwrap()).unwrap();
    assert!(!report.passed());
    assert_eq!(report.verdicts.last().unwrap().check_id, "linearise");
    let report = run(
        Command::Construct(Construction::Tk),
        &parse("[chart U]\nx = 1\n[chart V]\nX = 1\n[transition U -> V]\nX = x\n").unwrap(),
    )
    .unwrap();
    assert!(!report.passed());
}
