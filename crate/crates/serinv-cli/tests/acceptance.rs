//! Acceptance check for the benchmark surface: `bench` on V = 4z^3 - 3z at
//! orders {8, 16, 32} emits well-formed CSV and every route produces
//! identical coefficients. Timings are recorded, never asserted.

use std::io::Write;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_serinv"))
}

fn t3_doc() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(
        f,
        r#"{{"kind":"univariate","coeffs":[[1,"-3"],[3,"4"]],"order":7}}"#
    )
    .unwrap();
    f
}

#[test]
fn criterion_10_bench_csv() {
    let doc = t3_doc();
    let csv_path = tempfile::NamedTempFile::new().unwrap();
    let status = bin()
        .args(["bench"])
        .arg(doc.path())
        .args(["--orders", "8,16,32"])
        .arg("--csv")
        .arg(csv_path.path())
        .status()
        .unwrap();
    assert!(status.success(), "bench run failed");

    let csv = std::fs::read_to_string(csv_path.path()).unwrap();
    let lines: Vec<&str> = csv.trim().lines().collect();
    assert_eq!(lines[0], "method,order,nanoseconds");
    assert_eq!(lines.len(), 13, "4 routes x 3 orders plus header");
    for (i, line) in lines.iter().enumerate().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 3, "line {i} malformed: {line}");
        let method = ["operator", "pwq", "matrix-op", "lagrange"][(i - 1) % 4];
        let order = [8usize, 16, 32][(i - 1) / 4];
        assert_eq!(fields[0], method, "line {i}");
        assert_eq!(fields[1], order.to_string(), "line {i}");
        fields[2].parse::<u128>().expect("timing is an integer");
    }

    // The bench harness aborts on any coefficient mismatch, so success above
    // already implies agreement; cross-check through `invert --method all`
    // at each order anyway.
    for order in ["8", "16", "32"] {
        let out = bin()
            .args(["invert"])
            .arg(doc.path())
            .args(["--method", "all", "--order", order])
            .output()
            .unwrap();
        assert!(out.status.success());
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["discrepancy"], "0", "routes differ at order {order}");
        assert_eq!(report["method_results"].as_object().unwrap().len(), 4);
    }

    println!("PASS criterion 10: bench CSV well-formed at orders 8/16/32, routes identical");
}
