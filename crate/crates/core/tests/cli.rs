use std::process::{Command, Output};

use isoptic::export::import_json;

fn isoptic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoptic")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const HYPERBOLIC_ELLIPSE: [&str; 10] = ["--geometry", "hyperbolic", "--conic", "ellipse", "--a", "0.7", "--f", "0.59", "--alpha", "0.5235988"];

#[test]
fn trace_writes_an_svg_scene() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ellipse.svg");
    let mut args = vec!["trace"];
    args.extend(HYPERBOLIC_ELLIPSE);
    args.extend(["--resolution", "256", "--out", path.to_str().unwrap()]);
    let o = isoptic(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("wrote "));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains(r#"viewBox="-1.05 -1.05 2.1 2.1""#));
    assert!(svg.contains("class=\"boundary\""));
    assert!(svg.contains("class=\"conic\" d=\"M"));
    assert!(svg.contains("class=\"isoptic\" d=\"M"));
    assert_eq!(svg.matches("class=\"focus\"").count(), 2);
}

#[test]
fn trace_csv_and_json_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("c.csv");
    let json = dir.path().join("c.json");
    for path in [&csv, &json] {
        let mut args = vec!["trace"];
        args.extend(HYPERBOLIC_ELLIPSE);
        args.extend(["--resolution", "128", "--out", path.to_str().unwrap()]);
        assert!(isoptic(&args).status.success());
    }
    let curve = import_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("branch,x,y,residual"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|v| v.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), curve.vertex_count());
    for (row, p) in rows.iter().zip(curve.points()) {
        assert_eq!((row[1], row[2]), (p.x, p.y));
        assert!(row[3].abs() < 1e-10);
    }
}

#[test]
fn trace_to_stdout_with_explicit_format() {
    let o = isoptic(&[
        "trace", "--geometry", "euclidean", "--conic", "parabola", "--p", "0.5", "--alpha", "60", "--deg", "--resolution", "64",
        "--viewport", "-3,3,-3,3", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("branch,x,y,residual\n"));
    assert!(text.lines().count() > 10);
}

#[test]
fn oracle_check_reports_a_small_deviation() {
    let mut args = vec!["oracle-check"];
    args.extend(HYPERBOLIC_ELLIPSE);
    args.extend(["--resolution", "256"]);
    let o = isoptic(&args);
    assert!(o.status.success());
    let text = stdout(&o);
    let worst: f64 = text.lines().last().unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!(worst < 1e-6, "{text}");
}

#[test]
fn exists_and_classify() {
    let o = isoptic(&["exists", "--geometry", "euclidean", "--conic", "hyperbola", "--a", "1", "--b", "2", "--alpha", "1.5707963"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("not exists; forbidden interval"));
    let o = isoptic(&["classify", "--geometry", "elliptic", "--a", "0.7", "--f", "0.8"]);
    assert_eq!(stdout(&o), "Ellipse\n");
    let o = isoptic(&["classify", "--geometry", "hyperbolic", "--a", "0.35", "--f", "0.55"]);
    assert_eq!(stdout(&o), "Hyperbola\n");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| isoptic(args).status.code().unwrap();
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["trace", "--bogus"]), 2);
    assert_eq!(code(&["classify", "--geometry", "hyperbolic", "--a", "0.7", "--f", "1.2"]), 2);
    assert_eq!(code(&["exists", "--geometry", "euclidean", "--conic", "hyperbola", "--a", "1", "--b", "2", "--alpha", "4"]), 2);
    assert_eq!(
        code(&["residual", "--geometry", "hyperbolic", "--conic", "parabola", "--p", "0.25", "--alpha", "1", "--point", "0.9,0.9"]),
        3
    );
    let missing = tempfile::tempdir().unwrap().path().join("no/such/dir/out.svg");
    let mut args = vec!["trace"];
    args.extend(HYPERBOLIC_ELLIPSE);
    args.extend(["--resolution", "32", "--out", missing.to_str().unwrap()]);
    assert_eq!(code(&args), 3);
}
