use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use proptest::prelude::*;
use spa_witness::{maximally_mixed, CMatrix, Dims, HermitianOperator};
use spa_witness_cli::{load_operator, save_operator, OperatorFile};

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_spa-witness"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("SPA_WITNESS_THREADS", t),
        None => cmd.env_remove("SPA_WITNESS_THREADS"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn swap(d: Dims) -> HermitianOperator {
    let n = d.total();
    let m = CMatrix::from_fn(n, n, |r, s| {
        let (i, j) = d.split(r);
        let (k, l) = d.split(s);
        Complex64::new(if i == l && j == k { 1.0 } else { 0.0 }, 0.0)
    });
    HermitianOperator::new(m, d).unwrap()
}

#[test]
fn positive_operator_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tau.json");
    save_operator(maximally_mixed(Dims::new(2, 2).unwrap()).op(), None, &f).unwrap();
    let o = run(&["analyze", path_str(&f)], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a witness candidate"));
}

#[test]
fn malformed_input_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{\"schema_version\": 1,").unwrap();
    assert_eq!(run(&["analyze", path_str(&f)], None).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        run(&["analyze", path_str(&missing)], None).status.code(),
        Some(1)
    );
    assert_eq!(
        run(&["hakye", "--reference", "--scan", "theta=0:1"], None)
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn swap_operator_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("swap.json");
    save_operator(&swap(Dims::new(2, 2).unwrap()), None, &f).unwrap();
    let o = run(
        &[
            "analyze",
            path_str(&f),
            "--assert-onew",
            "--json",
            "--reproducible",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["condition_holds"], true);
    assert_eq!(v["npt_side"], "W^Gamma");
    assert_eq!(v["conclusion"], "CONSISTENT");
    assert!(v.get("generated_unix").is_none());
}

#[test]
fn saved_reference_reanalyzes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("hk.json");
    let o = run(
        &[
            "hakye",
            "--reference",
            "--assert-onew",
            "--format",
            "json",
            "--reproducible",
            "--save-operator",
            path_str(&f),
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(3));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let row = &rows[0];
    assert_eq!(row["verdict"], "VIOLATES");
    assert_eq!(row["oracle_check"], "ok");

    let a = run(
        &[
            "analyze",
            path_str(&f),
            "--assert-onew",
            "--json",
            "--reproducible",
        ],
        None,
    );
    assert_eq!(a.status.code(), Some(3));
    let rep: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(rep["lambda0_W"], row["lambda0_W"]);
    assert_eq!(rep["lambda0_WGamma"], row["lambda0_WGamma"]);
    assert_eq!(rep["gap"], row["gap"]);
    assert!(rep["labeling_note"].is_string());

    let b = run(
        &[
            "analyze",
            path_str(&f),
            "--assert-onew",
            "--json",
            "--reproducible",
        ],
        None,
    );
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn single_point_scan_equals_single_analysis() {
    let single = run(
        &["hakye", "--reference", "--format", "json", "--reproducible"],
        None,
    );
    let scan = run(
        &[
            "hakye",
            "--reference",
            "--scan",
            "theta=0.2617993877991494:1:1",
            "--format",
            "json",
            "--reproducible",
        ],
        None,
    );
    let a: serde_json::Value = serde_json::from_str(&stdout(&single)).unwrap();
    let b: serde_json::Value = serde_json::from_str(&stdout(&scan)).unwrap();
    assert_eq!(a.as_array().unwrap().len(), 1);
    assert_eq!(a, b);
    // Without the assertion flag the condition alone is not a violation.
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(a[0]["verdict"], "INCONCLUSIVE");
}

#[test]
fn cmax_of_maximally_mixed_two_qutrits() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("tau.json");
    save_operator(maximally_mixed(Dims::new(3, 3).unwrap()).op(), None, &f).unwrap();
    let o = run(&["cmax", path_str(&f), "--json", "--reproducible"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 1.0 / 9.0).abs() < 1e-10);
    assert_eq!(v["converged"], true);
}

#[test]
fn geometry_rows_are_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("hk.json");
    run(
        &["hakye", "--reference", "--save-operator", path_str(&w)],
        None,
    );
    let out = dir.path().join("geo.csv");
    let o = run(
        &[
            "geometry",
            path_str(&w),
            "--samples",
            "200",
            "--out",
            path_str(&out),
            "--reproducible",
        ],
        None,
    );
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut kinds = std::collections::HashMap::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let kind = rec[1].to_string();
        let value: f64 = rec[2].parse().unwrap();
        let class = &rec[5];
        let expected = if value < -1e-10 {
            "negative-side"
        } else if value > 1e-10 {
            "positive-side"
        } else {
            "on-plane"
        };
        assert_eq!(class, expected);
        match kind.as_str() {
            "separable" => assert!(value >= -1e-10),
            "witness-ground" => assert_eq!(class, "negative-side"),
            _ => {}
        }
        *kinds.entry(kind).or_insert(0usize) += 1;
    }
    assert_eq!(kinds["random"], 200);
    assert_eq!(kinds["separable"], 200);
    assert_eq!(kinds["witness-ground"], 1);
}

fn entry() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e3f64..1e3,
        Just(-0.0),
        Just(0.0),
        Just(f64::MIN_POSITIVE),
        Just(5e-324),
        Just(1e300),
        Just(-1e300),
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn operator_file_round_trip_is_bit_exact(
        raw in prop::collection::vec((entry(), entry()), 36)
    ) {
        let d = Dims::new(2, 3).unwrap();
        let mut m = CMatrix::zeros(6, 6);
        let mut it = raw.iter();
        for r in 0..6 {
            m[(r, r)] = Complex64::new(it.next().unwrap().0, 0.0);
            for s in r + 1..6 {
                let &(re, im) = it.next().unwrap();
                m[(r, s)] = Complex64::new(re, im);
                m[(s, r)] = Complex64::new(re, -im);
            }
        }
        let op = HermitianOperator::new(m, d).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let f = dir.path().join("op.json");
        save_operator(&op, None, &f).unwrap();
        let back = load_operator(&f).unwrap();
        for (x, y) in op.matrix().iter().zip(back.matrix().iter()) {
            prop_assert_eq!(x.re.to_bits(), y.re.to_bits());
            prop_assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
        let text = OperatorFile::from_operator(&op, None).to_json();
        prop_assert_eq!(OperatorFile::from_json(&text).unwrap().to_json(), text);
    }
}
