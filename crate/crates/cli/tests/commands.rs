mod common;

use common::*;

#[test]
fn perc_tables() {
    let base = ["--d", "2", "--p", "0.5", "--samples", "200", "--seed", "7"];
    let run = |sub: &str, extra: &[&str]| {
        let mut args = vec!["perc", sub];
        args.extend(base);
        args.extend(extra);
        ok(&args)
    };

    let (h, rows) = csv(&run("critical-ball", &["--cutoff", "8"]));
    assert_eq!(h, ["k", "mean", "stderr", "n"]);
    assert_eq!(rows.len(), 8);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r[0], (i + 1) as f64);
        assert!(r[1] >= 1.0 && r[3] == 200.0);
    }
    assert!(rows.windows(2).all(|w| w[0][1] <= w[1][1]));

    let (_, rows) = csv(&run("theta", &["--cutoff", "10"]));
    assert_eq!(rows.len(), 1);
    assert!((0.0..=1.0).contains(&rows[0][1]));

    let (_, rows) = csv(&run("chi", &["--cutoff", "5000"]));
    assert_eq!(rows[0][0], 5000.0);
    assert!(rows[0][1] >= 1.0);

    let (_, rows) = csv(&run("sample", &["--cutoff", "6"]));
    assert_eq!(rows[0][1], 1.0);
    assert!(rows.iter().all(|r| r[3] == 1.0));

    let v = json(&run("critical-ball", &["--cutoff", "4", "--out", "json"]));
    assert_eq!(v.as_array().unwrap().len(), 4);
    assert_valid("table.schema.json", &v);
}

#[test]
fn perc_sample_is_seeded() {
    let args = [
        "perc", "sample", "--d", "3", "--p", "0.25", "--cutoff", "20", "--seed", "11",
    ];
    assert_eq!(ok(&args), ok(&args));
    let other = [
        "perc", "sample", "--d", "3", "--p", "0.25", "--cutoff", "20", "--seed", "12",
    ];
    assert_ne!(ok(&args), ok(&other));
}

#[test]
fn thread_count_does_not_change_output() {
    let args = [
        "perc",
        "theta",
        "--d",
        "2",
        "--p",
        "0.5",
        "--cutoff",
        "16",
        "--samples",
        "2000",
        "--seed",
        "5",
    ];
    let one = graphdim_env(&args, "GRAPHDIM_THREADS", "1");
    let four = graphdim_env(&args, "GRAPHDIM_THREADS", "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn iic_commands() {
    let dir = tempfile::tempdir().unwrap();
    let adj = dir.path().join("tree.adj");
    ok(&[
        "iic",
        "sample",
        "--law",
        "binomial:2:0.5",
        "--depth",
        "30",
        "--seed",
        "9",
        "--out",
        path_str(&adj),
    ]);
    let text = std::fs::read_to_string(&adj).unwrap();
    assert!(text.starts_with("graphdim-adj v1 "));

    // The saved tree feeds the walk commands; depth 30 means radius 30.
    let (_, rows) = csv(&ok(&[
        "walk",
        "resistance",
        "--graph",
        path_str(&adj),
        "--r",
        "1,10,30",
    ]));
    assert_eq!(rows.len(), 3);
    assert!(rows[0][1] > 0.0 && rows[0][1] <= 1.0);
    assert!(rows.windows(2).all(|w| w[0][1] <= w[1][1]));

    let (h, rows) = csv(&ok(&[
        "iic",
        "tail",
        "--law",
        "binomial:2:0.5",
        "--k-grid",
        "1,10,100",
        "--samples",
        "5000",
        "--seed",
        "1",
    ]));
    assert_eq!(h, ["k", "mean", "stderr", "n"]);
    assert_eq!(rows[0][1], 1.0);
    assert!(rows[1][1] > rows[2][1]);

    let embedded = dir.path().join("embedded.adj");
    let (_, rows) = csv(&ok(&[
        "iic",
        "embed",
        "--depth",
        "64",
        "--ambient-d",
        "3",
        "--replicas",
        "3",
        "--seed",
        "4",
        "--n-max",
        "5",
        "--save",
        path_str(&embedded),
    ]));
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][1], 1.0);
    assert!(std::fs::read_to_string(&embedded)
        .unwrap()
        .starts_with("graphdim-adj v1 "));
}

#[test]
fn walk_return_on_the_line() {
    // P(S_2 = 0) = 1/2 and P(S_4 = 0) = 3/8 on Z.
    let (h, rows) = csv(&ok(&[
        "walk",
        "return",
        "--family",
        "lattice:1:20",
        "--exact",
        "--steps",
        "2",
    ]));
    assert_eq!(h, ["k", "value", "stderr"]);
    assert_eq!(rows, vec![vec![2.0, 0.5, 0.0], vec![4.0, 0.375, 0.0]]);

    let (_, mc) = csv(&ok(&[
        "walk",
        "return",
        "--family",
        "lattice:1:20",
        "--mc",
        "--steps",
        "2",
        "--samples",
        "20000",
        "--seed",
        "3",
    ]));
    for (m, e) in mc.iter().zip(&rows) {
        assert!((m[1] - e[1]).abs() < 4.0 * m[2], "{m:?} vs {e:?}");
    }
    let v = json(&ok(&[
        "walk", "return", "--family", "path:10", "--exact", "--steps", "3", "--out", "json",
    ]));
    assert_valid("table.schema.json", &v);
}

#[test]
fn walk_exit_on_the_path() {
    // Gambler's ruin: E tau = r^2 from the middle of a path of radius r.
    let (_, rows) = csv(&ok(&[
        "walk",
        "exit",
        "--family",
        "lattice:1:40",
        "--r",
        "4,16",
    ]));
    assert!(
        (rows[0][1] - 16.0).abs() < 1e-6 && (rows[1][1] - 256.0).abs() < 1e-6,
        "{rows:?}"
    );
    let (_, rows) = csv(&ok(&[
        "walk",
        "exit",
        "--family",
        "lattice:1:40",
        "--r",
        "4",
        "--mc",
        "--samples",
        "20000",
        "--seed",
        "2",
    ]));
    assert!((rows[0][1] - 16.0).abs() < 4.0 * rows[0][2], "{rows:?}");
    let (_, rows) = csv(&ok(&[
        "walk",
        "exit",
        "--family",
        "lattice:2:10",
        "--metric",
        "extrinsic",
        "--r",
        "3",
    ]));
    assert!(rows[0][1] > 0.0);
}

#[test]
fn fit_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let series = dir.path().join("return.csv");
    std::fs::write(
        &series,
        ok(&[
            "walk",
            "return",
            "--family",
            "lattice:1:1100",
            "--exact",
            "--steps",
            "1000",
        ]),
    )
    .unwrap();
    let v = json(&ok(&["fit", "--input", path_str(&series), "--kind", "ds"]));
    assert_valid("fit-report.schema.json", &v);
    assert!((v["slope"].as_f64().unwrap() - 1.0).abs() < 0.05, "{v}");
    assert_eq!(v["verdict"], "recurrent");

    let v = json(&ok(&[
        "fit",
        "--input",
        path_str(&series),
        "--kind",
        "ds",
        "--window",
        "100:1000",
    ]));
    assert_eq!(v["window"], serde_json::json!([100.0, 1000.0]));

    let balls = dir.path().join("ball.csv");
    std::fs::write(
        &balls,
        "k,mean,stderr,n\n1,1,0,1\n2,4,0,1\n3,9,0,1\n4,16,0,1\n",
    )
    .unwrap();
    let v = json(&ok(&[
        "fit",
        "--input",
        path_str(&balls),
        "--kind",
        "df",
        "--window",
        "1:4",
    ]));
    assert!((v["slope"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!(v.get("verdict").is_none());
    assert_valid("fit-report.schema.json", &v);
}

#[test]
fn bt_scan_reports_curves() {
    let line = config_path("line-z3.txt");
    let v = json(&ok(&[
        "bt",
        "scan",
        "--set",
        path_str(&line),
        "--kind",
        "hausdorff",
        "--alpha-grid",
        "0:0.25:2",
    ]));
    assert_valid("scan-report.schema.json", &v);
    assert_eq!(v["curves"].as_array().unwrap().len(), 9);
    assert_eq!(v["n_max"], 8);
    assert!(
        (v["estimate"].as_f64().unwrap() - 1.0).abs() < 0.25,
        "{}",
        v["estimate"]
    );

    let v = json(&ok(&[
        "bt",
        "scan",
        "--set",
        path_str(&line),
        "--kind",
        "packing",
        "--eps",
        "0.25",
        "--alpha-grid",
        "0:0.25:2",
    ]));
    assert_valid("scan-report.schema.json", &v);
    assert!(v.get("verdict").is_none());

    let text = ok(&[
        "bt",
        "scan",
        "--set",
        path_str(&line),
        "--kind",
        "hausdorff",
        "--alpha-grid",
        "0:1:1",
        "--out",
        "csv",
    ]);
    let (h, rows) = csv(&text);
    assert_eq!(h, ["alpha", "n", "value", "partial_sum"]);
    assert_eq!(rows.len(), 16);
}

#[test]
fn exit_codes() {
    // Bad flags and bad inputs are configuration errors.
    assert_eq!(
        fails(&["perc", "theta", "--d", "2", "--p", "0.5", "--seed", "1"]).0,
        2
    );
    assert_eq!(
        fails(&["perc", "theta", "--d", "2", "--p", "1.5", "--cutoff", "3", "--seed", "1"]).0,
        2
    );
    assert_eq!(
        fails(&["walk", "return", "--family", "path:5", "--mc", "--steps", "3"]).0,
        2
    );
    assert_eq!(
        fails(&["walk", "return", "--family", "wheel:5", "--exact", "--steps", "3"]).0,
        2
    );
    assert_eq!(
        fails(&["fit", "--input", "/nonexistent.csv", "--kind", "df"]).0,
        2
    );
    let line = config_path("line-z3.txt");
    assert_eq!(
        fails(&["bt", "scan", "--set", path_str(&line), "--kind", "packing"]).0,
        2
    );
    assert_eq!(
        fails(&["iic", "tail", "--law", "binomial:2:0.7", "--seed", "1"]).0,
        2
    );

    // A walk that leaks past the absorbing radius is a numeric failure.
    let (code, err) = fails(&[
        "walk",
        "return",
        "--family",
        "regular-tree:2:12",
        "--exact",
        "--steps",
        "40",
        "--absorbing",
        "3",
    ]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("numeric"), "{err}");
}
