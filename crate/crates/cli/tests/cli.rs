use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mrta_core::{build_travel_matrix, decode_makespan, load_scenario, Genotype};

fn mrta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrta"))
        .args(args)
        .output()
        .expect("failed to start mrta")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let file = dir.join(name);
    let mut all = vec!["generate"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path_str(&file)]);
    let out = mrta(&all);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    file
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn generate_prob_a_scale() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("probA.json");
    let out = mrta(&[
        "generate",
        "--layout",
        "rows",
        "--single",
        "90",
        "--coop",
        "0",
        "--robots",
        "3",
        "--seed",
        "1",
        "-o",
        path_str(&file),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("N^T=90 N^P=90 N^R=3"), "{}", stdout(&out));
    let s = load_scenario(&file).unwrap();
    assert_eq!((s.n_tasks(), s.n_subtasks(), s.n_robots()), (90, 90, 3));
}

#[test]
fn generate_prob_d_scale() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(
        dir.path(),
        "probD.json",
        &[
            "--layout", "islands", "--single", "90", "--coop", "5", "--robots", "3", "--seed", "1",
        ],
    );
    let s = load_scenario(&file).unwrap();
    assert_eq!((s.n_tasks(), s.n_subtasks(), s.n_cooperative()), (95, 100, 5));
}

#[test]
fn missing_flag_is_a_usage_error() {
    let out = mrta(&[
        "generate", "--layout", "rows", "--coop", "0", "--robots", "3", "--seed", "1",
    ]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("--single"));
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(code(&mrta(&["--help"])), 0);
    assert_eq!(code(&mrta(&[])), 1);
}

#[test]
fn solve_writes_result_and_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let scen = generate(
        dir.path(),
        "c.json",
        &[
            "--layout", "rows", "--single", "25", "--coop", "2", "--robots", "3", "--seed", "2",
        ],
    );
    let result = dir.path().join("r.json");
    let sched = dir.path().join("s.csv");
    let out = mrta(&[
        "solve",
        path_str(&scen),
        "--engine",
        "subpop",
        "--mutation",
        "inversion",
        "--gens",
        "40",
        "--seed",
        "3",
        "-o",
        path_str(&result),
        "--dump-schedule",
        path_str(&sched),
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc = json(&result);
    let trace: Vec<f64> = serde_json::from_value(doc["trace"].clone()).unwrap();
    assert_eq!(trace.len(), 41);
    assert!(trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(doc["best_J"].as_f64().unwrap(), *trace.last().unwrap());
    assert_eq!(doc["config"]["seed"], 3);
    assert_eq!(doc["evaluations"], 200 * 40);
    assert_eq!(doc["schedule"].as_array().unwrap().len(), 3);

    let csv = fs::read_to_string(&sched).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("robot,subtask,task,arrival,start,wait,depart"));
    assert_eq!(lines.count(), 29);

    // Same seed, same answer.
    let again = dir.path().join("r2.json");
    let out = mrta(&[
        "solve",
        path_str(&scen),
        "--gens",
        "40",
        "--seed",
        "3",
        "-o",
        path_str(&again),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&again)["best_J"], doc["best_J"]);
}

#[test]
fn solve_prints_json_without_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let scen = generate(
        dir.path(),
        "a.json",
        &[
            "--layout", "islands", "--single", "10", "--coop", "0", "--robots", "2", "--seed", "5", "--width", "30",
            "--height", "30",
        ],
    );
    let out = mrta(&["solve", path_str(&scen), "--engine", "classical", "--gens", "5"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["engine"], "classical");
    assert_eq!(doc["config"]["p_m"], 0.01);
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let scen = generate(
        dir.path(),
        "a.json",
        &[
            "--layout", "rows", "--single", "8", "--coop", "1", "--robots", "2", "--seed", "5", "--width", "30",
            "--height", "30",
        ],
    );
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"mutation": "GA5", "pop_siz": 40, "gen_num": 7, "p_a": 0.5}"#).unwrap();
    let out = mrta(&["solve", path_str(&scen), "--config", path_str(&cfg), "--gens", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["config"]["operator_set"], "swap+inversion");
    assert_eq!(doc["config"]["pop_siz"], 40);
    assert_eq!(doc["config"]["gen_num"], 3);
    assert_eq!(doc["config"]["p_a"], 0.5);

    fs::write(&cfg, r#"{"popsize": 40}"#).unwrap();
    let out = mrta(&["solve", path_str(&scen), "--config", path_str(&cfg)]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("popsize"));
}

#[test]
fn tiny_instance_reaches_the_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let scen = generate(
        dir.path(),
        "tiny.json",
        &[
            "--layout", "rows", "--single", "5", "--coop", "0", "--robots", "2", "--seed", "3", "--width", "20",
            "--height", "20",
        ],
    );
    let s = load_scenario(&scen).unwrap();
    let m = build_travel_matrix(&s).unwrap();
    let mut best = f64::INFINITY;
    let mut perm: Vec<usize> = (0..5).collect();
    permutations(&mut perm, 0, &mut |p| {
        for cut in 1..=5 {
            best = best.min(decode_makespan(&Genotype::new(p.to_vec(), vec![cut]), &s, &m).unwrap());
        }
    });
    let out = mrta(&["solve", path_str(&scen), "--engine", "subpop", "--gens", "200"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((doc["best_J"].as_f64().unwrap() - best).abs() < 1e-9);
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == p.len() {
        return f(p);
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

#[test]
fn invalid_operator_lists_valid_sets() {
    let out = mrta(&["solve", "x.json", "--mutation", "scramble"]);
    assert_eq!(code(&out), 1);
    let err = stderr(&out);
    assert!(err.contains("swap+inversion") && err.contains("displacement"), "{err}");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let scen = generate(
        dir.path(),
        "a.json",
        &[
            "--layout", "rows", "--single", "8", "--coop", "0", "--robots", "2", "--seed", "5", "--width", "30",
            "--height", "30",
        ],
    );
    let out = mrta(&["solve", path_str(&scen), "--pop-sub", "7"]);
    assert_eq!(code(&out), 1);
    let out = mrta(&["solve", path_str(&scen), "--p-m", "1.5"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_scenario_is_an_io_error() {
    let out = mrta(&["solve", "/nonexistent/scenario.json"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn malformed_scenario_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    fs::write(&file, r#"{"map": {"width": 5, "height": 5}, "robots": [], "taks": []}"#).unwrap();
    assert_eq!(code(&mrta(&["solve", path_str(&file)])), 3);
}

#[test]
fn infeasible_instances_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    // A cooperative task with a single robot: no second robot can take the partner.
    let lonely = dir.path().join("lonely.json");
    fs::write(
        &lonely,
        r#"{"map": {"width": 6, "height": 6},
            "robots": [{"id": 1, "home": [0, 0]}],
            "tasks": [{"id": 1, "kind": "coop", "subtasks": [{"id": 1, "pos": [2, 2]}, {"id": 2, "pos": [3, 3]}]}]}"#,
    )
    .unwrap();
    let out = mrta(&["solve", path_str(&lonely), "--gens", "1", "--pop-siz", "10"]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));

    // A task fenced off by a wall.
    let walled = dir.path().join("walled.json");
    fs::write(
        &walled,
        r#"{"map": {"width": 6, "height": 6, "blocked": [[3, 0], [3, 1], [3, 2], [3, 3], [3, 4], [3, 5]]},
            "robots": [{"id": 1, "home": [0, 0]}, {"id": 2, "home": [1, 0]}],
            "tasks": [{"id": 1, "kind": "single", "subtasks": [{"id": 1, "pos": [5, 5]}]}]}"#,
    )
    .unwrap();
    let out = mrta(&["solve", path_str(&walled)]);
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

fn write_spec(dir: &Path) -> PathBuf {
    let spec = dir.join("spec.json");
    fs::write(
        &spec,
        r#"{"scenario": {"generate": {"layout": "rows", "n_single": 12, "n_coop": 1, "n_robots": 2,
                                       "seed": 4, "width": 30, "height": 30}},
            "configs": [{"label": "GA1", "mutation": "swap"}, {"label": "GA3"}],
            "runs": 3, "base_seed": 10, "gen_num": 15}"#,
    )
    .unwrap();
    spec
}

#[test]
fn benchmark_writes_raw_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path());
    let out_dir = dir.path().join("out");
    let out = mrta(&["benchmark", path_str(&spec), "--out", path_str(&out_dir), "--traces"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let raw = fs::read_to_string(out_dir.join("raw.csv")).unwrap();
    let summary = fs::read_to_string(out_dir.join("summary.csv")).unwrap();
    assert_eq!(raw.lines().count(), 1 + 6);
    assert_eq!(summary.lines().count(), 1 + 2);
    assert!(raw.lines().nth(1).unwrap().starts_with("GA1,10,"));
    assert!(raw.lines().nth(4).unwrap().starts_with("GA3,10,"));
    assert_eq!(
        fs::read_to_string(out_dir.join("traces.csv")).unwrap().lines().count(),
        1 + 6 * 16
    );
}

#[test]
fn benchmark_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write_spec(dir.path());
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (d, jobs) in [(&a, "1"), (&b, "2")] {
        let out = mrta(&[
            "benchmark",
            path_str(&spec),
            "--out",
            path_str(d),
            "--no-timing",
            "--jobs",
            jobs,
        ]);
        assert_eq!(code(&out), 0, "{}", stderr(&out));
    }
    assert_eq!(
        fs::read(a.join("raw.csv")).unwrap(),
        fs::read(b.join("raw.csv")).unwrap()
    );
    assert_eq!(
        fs::read(a.join("summary.csv")).unwrap(),
        fs::read(b.join("summary.csv")).unwrap()
    );
}

#[test]
fn benchmark_rejects_bad_specs() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(
        &spec,
        r#"{"scenario": {"path": "x.json"}, "configs": [{"label": "a", "mutaton": "swap"}]}"#,
    )
    .unwrap();
    let out = mrta(&["benchmark", path_str(&spec), "--out", path_str(dir.path())]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("mutaton"));

    fs::write(
        &spec,
        r#"{"scenario": {"path": "x.json"}, "configs": [{"label": "a"}, {"label": "a"}]}"#,
    )
    .unwrap();
    let out = mrta(&["benchmark", path_str(&spec), "--out", path_str(dir.path())]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("duplicate"));
}

fn write_raw(dir: &Path, rows: &[(&str, f64)]) -> PathBuf {
    let file = dir.join("raw.csv");
    let mut text = String::from("label,seed,J,wallclock_s,generations,evaluations\n");
    for (i, (label, j)) in rows.iter().enumerate() {
        text += &format!("{label},{i},{j},0.1,10,2000\n");
    }
    fs::write(&file, text).unwrap();
    file
}

#[test]
fn compare_identical_groups_is_not_significant() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write_raw(
        dir.path(),
        &[
            ("A", 10.0),
            ("A", 12.0),
            ("A", 14.0),
            ("B", 10.0),
            ("B", 12.0),
            ("B", 14.0),
        ],
    );
    let out = mrta(&["compare", path_str(&raw), "--labels", "A,B"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("p = 1.0000e0"), "{text}");
    assert!(text.contains("not significant"));
}

#[test]
fn compare_separated_groups_is_significant() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write_raw(
        dir.path(),
        &[
            ("A", 1.0),
            ("A", 2.0),
            ("A", 3.0),
            ("A", 4.0),
            ("B", 5.0),
            ("B", 6.0),
            ("B", 7.0),
            ("B", 8.0),
        ],
    );
    let out = mrta(&["compare", path_str(&raw)]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("F(1, 6) = 19.2000"), "{text}");
    assert!(text.contains(": significant"));
}

#[test]
fn compare_unknown_label_lists_available() {
    let dir = tempfile::tempdir().unwrap();
    let raw = write_raw(dir.path(), &[("GA1", 1.0), ("GA1", 2.0), ("GA3", 1.0), ("GA3", 3.0)]);
    let out = mrta(&["compare", path_str(&raw), "--labels", "GA1,GA9"]);
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("available: GA1, GA3"));
}
