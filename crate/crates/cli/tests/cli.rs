use std::process::{Command, Output};

use serde_json::Value;

fn ballspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballspec"))
        .args(args)
        .env_remove("BALLSPEC_THREADS")
        .output()
        .expect("binary runs")
}

fn with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ballspec"))
        .args(args)
        .env("BALLSPEC_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn ok_json(args: &[&str]) -> Value {
    let o = ballspec(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

/// Parses text spectrum lines `value multiplicity t=...`.
fn text_lines(s: &str) -> Vec<(f64, u128)> {
    s.lines()
        .map(|l| {
            let mut it = l.split(' ');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect()
}

fn assert_lines(got: &[(f64, u128)], want: &[(f64, u128)]) {
    assert_eq!(got.len(), want.len(), "{got:?}");
    for (g, w) in got.iter().zip(want) {
        assert!((g.0 - w.0).abs() <= 1e-13, "{got:?} vs {want:?}");
        assert_eq!(g.1, w.1);
    }
}

#[test]
fn spectrum_of_small_ball() {
    let o = ballspec(&["spectrum", "--n", "4", "--r", "1"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "-2 1 t=0\n0 3 t=1\n2 1 t=0\n");
}

#[test]
fn spectrum_json_schema() {
    let v = ok_json(&[
        "spectrum", "--n", "5", "--r1", "1", "--r2", "2", "--format", "json",
    ]);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["lines", "n", "r1", "r2", "total_dim"]);
    assert_eq!(
        (v["n"].as_u64(), v["r1"].as_u64(), v["r2"].as_u64()),
        (Some(5), Some(1), Some(2))
    );
    let lines = v["lines"].as_array().unwrap();
    let mut total = 0;
    for l in lines {
        assert!(l["value"].is_f64());
        assert!(l["t"].as_array().unwrap().iter().all(Value::is_u64));
        total += l["multiplicity"].as_u64().unwrap();
    }
    // |S(5,1)| + |S(5,2)| = 5 + 10.
    assert_eq!(total, 15);
    assert_eq!(v["total_dim"].as_u64(), Some(15));
    // The 15-vertex bipartite graph between the two spheres: singular
    // values √8 (once) and √3 (four times), five zeros.
    let got: Vec<(f64, u128)> = lines
        .iter()
        .map(|l| {
            (
                l["value"].as_f64().unwrap(),
                l["multiplicity"].as_u64().unwrap() as u128,
            )
        })
        .collect();
    let (a, b) = (8f64.sqrt(), 3f64.sqrt());
    assert_lines(&got, &[(-a, 1), (-b, 4), (0.0, 5), (b, 4), (a, 1)]);
}

#[test]
fn spectrum_csv() {
    let o = ballspec(&["spectrum", "--n", "4", "--r", "1", "--format", "csv"]);
    assert_eq!(stdout(&o), "value,multiplicity,t\n-2,1,0\n0,3,1\n2,1,0\n");
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["spectrum", "--n", "4", "--r", "3"][..],
        &["spectrum", "--n", "4"],
        &["spectrum", "--n", "4", "--r", "1", "--r2", "2"],
        &["spectrum", "--n", "x", "--r", "1"],
        &["nonsense"],
        &["krawtchouk", "--n", "4", "--k", "5", "--roots"],
        &["krawtchouk", "--n", "4", "--k", "2"],
        &["bounds", "--n", "100", "--log2s", "0.5"],
        &["bounds", "--n", "100", "--s", "-7"],
        &["verify", "--n", "8", "--r", "2", "--tol", "-1"],
        &[
            "eigenfunction",
            "--n",
            "4",
            "--r",
            "2",
            "--t",
            "1",
            "--y",
            "0011",
        ],
        &[
            "eigenfunction",
            "--n",
            "4",
            "--r",
            "2",
            "--t",
            "1",
            "--which",
            "9",
        ],
        &["incidence", "--n", "4", "--r", "0"],
    ] {
        let o = ballspec(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn zero_threads_is_a_usage_error() {
    let o = with_threads("0", &["verify", "--all", "--max-n", "2"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_passes_on_small_ball() {
    let o = ballspec(&["verify", "--n", "8", "--r", "2"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(
        s.contains("vertices=37") && s.contains("max_deviation=") && s.ends_with("PASS\n"),
        "{s}"
    );
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let o = ballspec(&["verify", "--n", "8", "--r", "2", "--tol", "1e-300"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().next().unwrap().ends_with(" FAIL"));
}

#[test]
fn verify_over_budget_exits_3() {
    let o = ballspec(&["verify", "--n", "20", "--r", "10"]);
    assert_eq!(code(&o), 3);
    let o = ballspec(&["verify", "--n", "8", "--r", "2", "--dense-limit", "36"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn verify_json_schema() {
    let v = ok_json(&[
        "verify", "--n", "6", "--r1", "1", "--r2", "3", "--format", "json",
    ]);
    assert_eq!(v["vertex_count"].as_u64(), Some(6 + 15 + 20));
    assert_eq!(v["pass"].as_bool(), Some(true));
    assert!(v["max_deviation"].as_f64().unwrap() <= 1e-8);
    assert!(v["multiplicity_mismatches"].as_array().unwrap().is_empty());
}

fn sweep_cases(max_n: u32) -> Vec<(u32, u32, u32)> {
    (0..=max_n)
        .flat_map(|n| (0..=n / 2).flat_map(move |r2| (0..=r2).map(move |r1| (n, r1, r2))))
        .collect()
}

#[test]
fn full_sweep_to_ten() {
    let o = with_threads("2", &["verify", "--all", "--max-n", "10"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    let mut lines = s.lines();
    assert_eq!(
        lines.next(),
        Some("n,r1,r2,vertex_count,lines,max_deviation,status")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    let cases = sweep_cases(10);
    assert_eq!(rows.len(), cases.len());
    for (row, (n, r1, r2)) in rows.iter().zip(cases) {
        assert_eq!(row[..3], [n.to_string(), r1.to_string(), r2.to_string()]);
        let size: u64 = (r1..=r2).map(|i| binomial(n as u64, i as u64)).sum();
        assert_eq!(row[3], size.to_string());
        assert!(row[5].parse::<f64>().unwrap() <= 1e-8);
        assert_eq!(row[6], "pass");
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

#[test]
fn sweep_reports_budget_cases() {
    let o = with_threads(
        "1",
        &["verify", "--all", "--max-n", "6", "--dense-limit", "30"],
    );
    assert_eq!(code(&o), 3);
    let s = stdout(&o);
    assert!(s.contains("6,0,3,,,,budget"), "{s}");
    assert!(s.contains("6,2,3,,,,budget"), "{s}");
    assert!(s.contains("6,3,3,20,"), "{s}");
}

#[test]
fn sweep_output_does_not_depend_on_thread_count() {
    let args = ["verify", "--all", "--max-n", "9", "--format", "json"];
    let one = with_threads("1", &args);
    let four = with_threads("4", &args);
    assert_eq!(code(&one), 0);
    assert_eq!(one.stdout, four.stdout);
    let rows: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), sweep_cases(9).len());
}

#[test]
fn krawtchouk_actions() {
    assert_eq!(
        stdout(&ballspec(&[
            "krawtchouk",
            "--n",
            "4",
            "--k",
            "2",
            "--roots"
        ])),
        "1 3\n"
    );
    // K_2^{(4)}(x) = C(4,2) - 4x + ... = 6 - 8x + 2x².
    assert_eq!(
        stdout(&ballspec(&[
            "krawtchouk",
            "--n",
            "4",
            "--k",
            "2",
            "--coeffs"
        ])),
        "6 -8 2\n"
    );
    assert_eq!(
        stdout(&ballspec(&[
            "krawtchouk",
            "--n",
            "4",
            "--k",
            "3",
            "--coeffs"
        ])),
        "4 -38/3 8 -4/3\n"
    );
    assert_eq!(
        stdout(&ballspec(&[
            "krawtchouk",
            "--n",
            "6",
            "--k",
            "1",
            "--first-root"
        ])),
        "3\n"
    );
    assert_eq!(
        code(&ballspec(&[
            "krawtchouk",
            "--n",
            "4",
            "--k",
            "0",
            "--roots"
        ])),
        2
    );
}

#[test]
fn krawtchouk_values_match_defining_sum() {
    for n in 0..=12i64 {
        for k in 0..=n {
            for x in -2..=n + 2 {
                let o = ballspec(&[
                    "krawtchouk",
                    "--n",
                    &n.to_string(),
                    "--k",
                    &k.to_string(),
                    "--eval",
                    &x.to_string(),
                ]);
                assert_eq!(code(&o), 0);
                let want = defining_sum(n, k, x);
                assert_eq!(stdout(&o), format!("{want}\n"), "n={n} k={k} x={x}");
            }
        }
    }
}

/// Σ_l (-1)^l C(x,l) C(n-x,k-l) with generalized binomials, valid for
/// any integer x.
fn defining_sum(n: i64, k: i64, x: i64) -> i128 {
    let gen_choose = |a: i64, l: i64| -> i128 {
        let mut num: i128 = 1;
        let mut den: i128 = 1;
        for j in 0..l {
            num *= (a - j) as i128;
            den *= (j + 1) as i128;
        }
        num / den
    };
    (0..=k)
        .map(|l| {
            let t = gen_choose(x, l) * gen_choose(n - x, k - l);
            if l % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum()
}

#[test]
fn krawtchouk_json() {
    let v = ok_json(&[
        "krawtchouk",
        "--n",
        "4",
        "--k",
        "2",
        "--roots",
        "--format",
        "json",
    ]);
    assert_eq!(v["roots"], serde_json::json!([1.0, 3.0]));
    let v = ok_json(&[
        "krawtchouk",
        "--n",
        "200",
        "--k",
        "3",
        "--roots",
        "--format",
        "json",
    ]);
    let roots: Vec<f64> = v["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert_eq!(roots.len(), 3);
    // K_3^{(N)} is odd about N/2.
    assert!((roots[0] + roots[2] - 200.0).abs() < 1e-9 && (roots[1] - 100.0).abs() < 1e-9);
}

#[test]
fn incidence_spectrum() {
    let o = ballspec(&["incidence", "--n", "4", "--r", "2", "--check"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (a, b) = (6f64.sqrt(), 2f64.sqrt());
    assert_lines(
        &text_lines(&stdout(&o)),
        &[(-a, 1), (-b, 3), (0.0, 2), (b, 3), (a, 1)],
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("PASS"));
}

#[test]
fn bounds_json_schema() {
    let v = ok_json(&["bounds", "--n", "100", "--log2s", "50"]);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "delta_upper",
            "lambda_lower",
            "log2_s",
            "log_lower",
            "modls_lower",
            "n",
            "r",
            "subcube_delta",
            "t"
        ]
    );
    assert_eq!(v["n"].as_u64(), Some(100));
    assert_eq!(v["t"].as_u64(), Some(11));
    let lam = v["lambda_lower"].as_f64().unwrap();
    let del = v["delta_upper"].as_f64().unwrap();
    assert!((lam + del - 100.0).abs() < 1e-12);
    assert!((v["log_lower"].as_f64().unwrap() - 50.0 * std::f64::consts::LN_2).abs() < 1e-12);
    assert!((v["modls_lower"].as_f64().unwrap() - 37.4151).abs() < 1e-4);
}

#[test]
fn bounds_size_spellings_agree() {
    let by_log = stdout(&ballspec(&[
        "bounds", "--n", "100", "--log2s", "50", "--format", "csv",
    ]));
    let by_s = stdout(&ballspec(&[
        "bounds",
        "--n",
        "100",
        "--s",
        "1125899906842624",
        "--format",
        "csv",
    ]));
    let by_codim = stdout(&ballspec(&[
        "bounds", "--n", "100", "--codim", "50", "--format", "csv",
    ]));
    assert_eq!(by_log, by_s);
    assert_eq!(by_log, by_codim);
    // 2^200 does not fit in 64 bits.
    let big = "1606938044258990275541962092341162602522202993782792835301376";
    let v = ok_json(&["bounds", "--n", "400", "--s", big]);
    assert_eq!(v["log2_s"].as_f64(), Some(200.0));
}

#[test]
fn bounds_sweep_over_dimensions() {
    let s = stdout(&ballspec(&[
        "bounds",
        "--n",
        "100,200,400",
        "--codim",
        "10",
        "--format",
        "csv",
    ]));
    let rows: Vec<&str> = s.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[1].starts_with("100,90,") && rows[3].starts_with("400,390,"));
}

#[test]
fn eigenfunction_json_schema() {
    let v = ok_json(&[
        "eigenfunction",
        "--n",
        "6",
        "--r",
        "3",
        "--t",
        "2",
        "--y",
        "000110",
        "--which",
        "1",
    ]);
    let obj = v.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(keys, ["lambda", "spheres", "t", "y"]);
    assert_eq!(v["t"].as_u64(), Some(2));
    assert_eq!(v["y"].as_str(), Some("000110"));
    let spheres = v["spheres"].as_array().unwrap();
    assert_eq!(spheres.len(), 2);
    for (k, s) in spheres.iter().enumerate() {
        assert_eq!(s["i"].as_u64(), Some(2 + k as u64));
        let classes = s["classes"].as_array().unwrap();
        assert_eq!(classes.len(), 3);
        for (c, cl) in classes.iter().enumerate() {
            assert_eq!(cl["c"].as_u64(), Some(c as u64));
            assert!(cl["value"].is_number());
        }
    }
    // M_2 for the ball B(6,3) is 2×2 with off-diagonal² = 1·(6-4) = 2.
    assert!((v["lambda"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-13);
    // The top-weight class (x ⊇ y) carries the normalized value 1 on S(6,2).
    assert_eq!(spheres[0]["classes"][2]["value"].as_f64(), Some(1.0));
}

#[test]
fn edges_of_small_ball() {
    let o = ballspec(&["edges", "--n", "3", "--r", "1"]);
    assert_eq!(stdout(&o), "0 1\n0 2\n0 3\n");
    let v = ok_json(&[
        "edges", "--n", "4", "--r1", "1", "--r2", "2", "--format", "json",
    ]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 10);
    // Each weight-2 vertex has two neighbours in S(4,1).
    assert_eq!(v["edges"].as_array().unwrap().len(), 12);
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        &["spectrum", "--n", "30", "--r", "15", "--format", "json"][..],
        &["verify", "--n", "9", "--r1", "2", "--r2", "4"],
        &[
            "bounds", "--n", "100,1000", "--codim", "7.5", "--format", "csv",
        ],
        &["krawtchouk", "--n", "64", "--k", "20", "--roots"],
        &[
            "eigenfunction",
            "--n",
            "10",
            "--r",
            "5",
            "--t",
            "3",
            "--which",
            "2",
        ],
    ] {
        let a = ballspec(args);
        let b = ballspec(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
