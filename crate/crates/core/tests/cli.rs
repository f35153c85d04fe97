mod common;

use common::{labeled, pvoigt, stdout};
use pvoigt::csvio::read_coefficients;

#[test]
fn eval_origin() {
    let out = pvoigt(&["eval", "--x", "0", "--y", "0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.lines().any(|l| l == "l_approx = 0"), "{text}");
    assert!(!text.contains("k_ref"));
}

#[test]
fn eval_with_reference() {
    let out = pvoigt(&["eval", "--x", "0", "--y", "0", "--with-ref"]);
    assert!(out.status.success());
    assert!((labeled(&stdout(&out), "k_ref") - 1.0).abs() < 1e-10);

    let out = pvoigt(&["eval", "--x", "1", "--y", "0", "--with-ref"]);
    let text = stdout(&out);
    assert!(labeled(&text, "delta_re") <= 0.038);
    assert!(labeled(&text, "delta_im") <= 0.037);
}

#[test]
fn eval_accepts_negative_x() {
    let pos = stdout(&pvoigt(&["eval", "--x", "1.5", "--y", "0.5"]));
    let neg = stdout(&pvoigt(&["eval", "--x", "-1.5", "--y", "0.5"]));
    assert_eq!(labeled(&pos, "k_approx"), labeled(&neg, "k_approx"));
    assert_eq!(labeled(&pos, "l_approx"), -labeled(&neg, "l_approx"));
}

#[test]
fn exit_codes() {
    assert_eq!(
        pvoigt(&["eval", "--x", "1", "--y", "-0.5"]).status.code(),
        Some(3)
    );
    assert_eq!(
        pvoigt(&["eval", "--x", "1", "--y", "0", "--gamma", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        pvoigt(&["eval", "--x", "abc", "--y", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        pvoigt(&["eval", "--x", "1", "--y", "0", "--nope"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(pvoigt(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pvoigt(&["scan", "--steps", "1"]).status.code(), Some(3));
    assert_eq!(pvoigt(&["scan", "--y", "0.5,0.1"]).status.code(), Some(3));
    assert_eq!(pvoigt(&["fit", "--n-terms", "0"]).status.code(), Some(3));
    assert_eq!(
        pvoigt(&["kernel", "--out", "/nonexistent-dir/k.csv"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn help_lists_flags_with_defaults() {
    let text = stdout(&pvoigt(&["scan", "--help"]));
    for flag in ["--x-min", "--x-max", "--steps", "--y", "--gamma", "--out"] {
        assert!(text.contains(flag), "missing {flag}:\n{text}");
    }
    assert!(text.contains("[default: 1001]"));
    assert!(text.contains("[default: 0,0.1,0.5,1]"));
    let text = stdout(&pvoigt(&["--help"]));
    for cmd in ["eval", "scan", "kernel", "fit", "maxerr"] {
        assert!(text.contains(cmd));
    }
}

#[test]
fn scan_row_count_and_header() {
    let out = pvoigt(&["scan", "--steps", "2", "--y", "0,0.5,1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "x,y,k_approx,l_approx,k_ref,l_ref,delta_re,delta_im"
    );
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("0,0,"));
    assert!(!text.contains('\r'));
}

#[test]
fn scan_file_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |p: &std::path::Path| {
        let out = pvoigt(&["scan", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
        stdout(&out)
    };
    let summary = run(&a);
    run(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let max_re = labeled(&summary, "max delta_re");
    assert!((0.035..=0.039).contains(&max_re), "{summary}");
    let global = summary
        .lines()
        .find(|l| l.starts_with("max delta_re"))
        .unwrap();
    assert!(global.ends_with("y = 0"), "{global}");

    let csv = std::fs::read_to_string(&a).unwrap();
    assert_eq!(csv.lines().count(), 1 + 1001 * 4);
    // every field reparses to a finite double
    for line in csv.lines().skip(1) {
        for f in line.split(',') {
            assert!(f.parse::<f64>().unwrap().is_finite());
        }
    }
}

#[test]
fn kernel_table() {
    let out = pvoigt(&["kernel"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,f0,f1,sum,exact,epsilon");
    assert_eq!(lines.len(), 1 + 100_001);
    assert_eq!(lines[1 + 50_000], "0,1,0,1,1,0");
    let fields = |i: usize| -> Vec<String> { lines[1 + i].split(',').map(str::to_owned).collect() };
    for i in [0, 1, 12_345, 49_999] {
        let (a, b) = (fields(i), fields(100_000 - i));
        assert_eq!(a[0].parse::<f64>().unwrap(), -b[0].parse::<f64>().unwrap());
        assert_eq!(a[1..5], b[1..5]);
    }
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(labeled(&summary, "max |epsilon|") < 0.05);
}

#[test]
fn fit_writes_loadable_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coef.csv");
    let out = pvoigt(&[
        "fit",
        "--n-terms",
        "2",
        "--objective",
        "linf",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(labeled(&text, "objective linf") <= labeled(&text, "standard coefficients linf"));
    let expansion = read_coefficients(std::fs::File::open(&path).unwrap()).unwrap();
    assert_eq!(expansion.terms().len(), 2);
    assert_eq!(expansion.terms()[0].alpha, 1.0);

    let out = pvoigt(&["fit", "--n-terms", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 2);
    let one = read_coefficients(text.as_bytes()).unwrap();
    assert_eq!(one.terms().len(), 1);
}

#[test]
fn maxerr_orders_levels() {
    let y0 = stdout(&pvoigt(&["maxerr", "--y", "0"]));
    let y1 = stdout(&pvoigt(&["maxerr", "--y", "1"]));
    assert!((0.035..=0.039).contains(&labeled(&y0, "max delta_re")));
    assert!((0.034..=0.038).contains(&labeled(&y0, "max delta_im")));
    assert!(labeled(&y1, "max delta_re") < labeled(&y0, "max delta_re"));
    assert!(labeled(&y1, "max delta_im") < labeled(&y0, "max delta_im"));
}
