//! The golden-file command table shared by the golden and acceptance tests.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use super::Schema;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
    pub schema: Option<Schema>,
    pub env: &'static [(&'static str, &'static str)],
    pub stdin: Option<&'static str>,
}

const fn case(name: &'static str, args: &'static [&'static str], exit: i32, schema: Option<Schema>) -> Case {
    Case {
        name,
        args,
        exit,
        schema,
        env: &[],
        stdin: None,
    }
}

use Schema as S;

pub const CASES: &[Case] = &[
    case("validate_trig_quarter_turn", &["validate", "--family", "trig", "--n", "2", "--h", "1.5707963"], 1, Some(S::Validate)),
    case("validate_polynomial", &["validate", "--family", "polynomial", "--n", "5", "--h", "0.3"], 0, Some(S::Validate)),
    case("validate_trig_degree_four", &["validate", "--family", "trig", "--n", "4", "--h", "0.7853982"], 1, Some(S::Validate)),
    case("validate_interval_guard", &["validate", "--family", "trig", "--n", "2", "--h", "0", "--a", "0", "--b", "3.141592653589793"], 1, Some(S::Validate)),
    case("validate_weighted_interval", &["validate", "--family", "exp_weighted", "--inner", "trig_discrete", "--inner-d", "0.5", "--n", "3", "--h", "-0.2", "--a", "-1", "--b", "1"], 0, Some(S::Validate)),
    case("validate_unknown_family", &["validate", "--family", "spline", "--n", "2", "--h", "0.1"], 2, None),
    case("validate_missing_d", &["validate", "--family", "trig_discrete", "--n", "2", "--h", "0.1"], 2, None),
    case("validate_zero_degree", &["validate", "--n", "0", "--h", "0.1"], 2, None),
    case("basis_polynomial_csv", &["basis", "--family", "polynomial", "--n", "2", "--samples", "3"], 0, None),
    case("basis_trig_unity_csv", &["basis", "--family", "trig", "--n", "2", "--h", "0.1", "--a", "0", "--b", "1.2", "--samples", "6", "--unity"], 0, None),
    case("basis_hyperbolic_json", &["basis", "--family", "hyperbolic", "--n", "3", "--h", "-0.3", "--a", "-1", "--b", "1", "--samples", "5", "--format", "json"], 0, Some(S::Basis)),
    case("basis_unity_json", &["basis", "--family", "trig_discrete", "--d", "0.5", "--n", "2", "--h", "0.2", "--samples", "4", "--unity", "--format", "json"], 0, Some(S::Basis)),
    case("basis_svg", &["basis", "--family", "trig", "--n", "3", "--h", "0.2", "--a", "0", "--b", "1.5", "--format", "svg"], 0, None),
    case("basis_dependent", &["basis", "--family", "trig", "--n", "2", "--h", "1.5707963267948966"], 1, None),
    case("basis_degenerate_interval", &["basis", "--family", "trig", "--n", "2", "--a", "0", "--b", "3.141592653589793"], 1, None),
    case("basis_unity_unsupported", &["basis", "--family", "exp_weighted", "--inner", "trig", "--n", "2", "--unity"], 1, None),
    case("basis_too_few_samples", &["basis", "--n", "2", "--samples", "1"], 2, None),
    case("curve_eval_at_start", &["curve", "trig_cubic.json", "--eval", "0"], 0, Some(S::Eval)),
    case("curve_eval_csv", &["curve", "trig_cubic.json", "--eval", "0.7", "--format", "csv"], 0, None),
    case("curve_eval_svg", &["curve", "scalar_hyperbolic.json", "--eval", "1", "--format", "svg"], 0, None),
    case("curve_sample_json", &["curve", "scalar_hyperbolic.json", "--sample", "5"], 0, Some(S::Sample)),
    case("curve_sample_csv", &["curve", "trig_cubic.json", "--sample", "7", "--format", "csv"], 0, None),
    case("curve_sample_svg", &["curve", "trig_cubic.json", "--sample", "7", "--format", "svg"], 0, None),
    case("curve_subdivide_json", &["curve", "poly_quadratic.json", "--subdivide", "0.25"], 0, Some(S::Subdivide)),
    case("curve_subdivide_endpoint", &["curve", "poly_quadratic.json", "--subdivide", "1"], 0, Some(S::Subdivide)),
    case("curve_subdivide_csv", &["curve", "trig_cubic.json", "--subdivide", "0.5", "--format", "csv"], 0, None),
    case("curve_subdivide_svg", &["curve", "trig_cubic.json", "--subdivide", "0.5", "--format", "svg"], 0, None),
    case("curve_midpoint_json", &["curve", "poly_quadratic.json", "--midpoint", "2"], 0, Some(S::Midpoint)),
    case("curve_midpoint_csv", &["curve", "trig_cubic.json", "--midpoint", "4", "--format", "csv"], 0, None),
    case("curve_midpoint_svg", &["curve", "trig_cubic.json", "--midpoint", "3", "--format", "svg"], 0, None),
    case("curve_midpoint_too_deep", &["curve", "trig_cubic.json", "--midpoint", "21"], 2, None),
    case("curve_elevate_polynomial", &["curve", "poly_quadratic.json", "--elevate"], 0, Some(S::Curve)),
    case("curve_elevate_trig_h0", &["curve", "trig_h0.json", "--elevate", "--format", "csv"], 0, None),
    case("curve_elevate_svg", &["curve", "trig_h0.json", "--elevate", "--format", "svg"], 0, None),
    case("curve_elevate_trig_step", &["curve", "trig_cubic.json", "--elevate"], 1, None),
    case("curve_interpolate_json", &["curve", "interp_points.json", "--interpolate"], 0, Some(S::Curve)),
    case("curve_interpolate_csv", &["curve", "interp_points.json", "--interpolate", "--format", "csv"], 0, None),
    case("curve_interpolate_svg", &["curve", "interp_points.json", "--interpolate", "--format", "svg"], 0, None),
    case("curve_dependent_input", &["curve", "dependent.json", "--eval", "0.5"], 1, None),
    case("curve_malformed_input", &["curve", "malformed.json", "--eval", "0.5"], 2, None),
    case("curve_missing_input", &["curve", "no_such_file.json", "--eval", "0.5"], 2, None),
    case("curve_no_mode", &["curve", "trig_cubic.json"], 2, None),
    case("curve_two_modes", &["curve", "trig_cubic.json", "--eval", "0", "--elevate"], 2, None),
    Case {
        name: "curve_stdin",
        args: &["curve", "-", "--eval", "1.2"],
        exit: 0,
        schema: Some(S::Eval),
        env: &[],
        stdin: Some(r#"{"family":{"kind":"trig"},"n":3,"h":0.1,"interval":[0,1.2],"controls":[[0,0],[1,2],[2,-1],[3,1]]}"#),
    },
    Case {
        name: "curve_midpoint_zero_tolerance",
        args: &["curve", "trig_cubic.json", "--midpoint", "1"],
        exit: 0,
        schema: Some(S::Midpoint),
        env: &[("CURVECTL_TOL", "0,0")],
        stdin: None,
    },
    Case {
        name: "bad_tolerance_env",
        args: &["validate", "--n", "2", "--h", "0.1"],
        exit: 2,
        schema: None,
        env: &[("CURVECTL_TOL", "tight")],
        stdin: None,
    },
    case("verify_marsden_seed7", &["verify", "--suite", "marsden", "--seed", "7"], 0, None),
    case("verify_unity", &["verify", "--suite", "unity"], 0, None),
    case("verify_shift", &["verify", "--suite", "shift"], 0, None),
    case("verify_permutation", &["verify", "--suite", "permutation"], 0, None),
    case("verify_blossom_axioms", &["verify", "--suite", "blossom-axioms"], 0, None),
    case("verify_independence_trig", &["verify", "--suite", "independence-grid", "--family", "trig", "--n", "2"], 0, None),
    case("verify_independence_grid", &["verify", "--suite", "independence-grid"], 0, None),
    case("verify_all_json", &["verify", "--format", "json", "--n", "2"], 0, Some(S::Verify)),
    case("verify_unknown_suite", &["verify", "--suite", "everything"], 2, None),
    case("verify_degree_too_large", &["verify", "--suite", "permutation", "--n", "9"], 2, None),
];

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn run(case: &Case) -> (i32, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_curvectl"));
    cmd.args(case.args)
        .current_dir(fixtures())
        .env_remove("CURVECTL_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped());
    for (k, v) in case.env {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("spawn curvectl");
    {
        let mut stdin = child.stdin.take().expect("stdin");
        if let Some(input) = case.stdin {
            stdin.write_all(input.as_bytes()).expect("write stdin");
        }
    }
    let out = child.wait_with_output().expect("run curvectl");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).expect("utf8 stdout"),
        String::from_utf8(out.stderr).expect("utf8 stderr"),
    )
}

pub fn render(case: &Case, code: i32, stdout: &str, stderr: &str) -> String {
    let env: String = case.env.iter().map(|(k, v)| format!("{k}={v} ")).collect();
    format!(
        "$ {env}curvectl {}\nexit: {code}\n--- stdout\n{stdout}--- stderr\n{stderr}",
        case.args.join(" ")
    )
}


/// Runs `case` and compares against its golden file.
pub fn matches_golden(case: &Case) -> Result<(), String> {
    let (code, stdout, stderr) = run(case);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.exit));
    }
    let path = golden_dir().join(format!("{}.txt", case.name));
    let want = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if want != render(case, code, &stdout, &stderr) {
        return Err(format!("{} differs from {}", case.name, path.display()));
    }
    Ok(())
}
