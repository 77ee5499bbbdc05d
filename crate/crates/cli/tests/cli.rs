use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hypernash"));
    c.env_remove("HYPERNASH_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("a.hrg");
    let f2 = dir.path().join("b.hrg");
    let a = run(&[
        "gen",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--seed",
        "7",
        "--out",
        f1.to_str().unwrap(),
    ]);
    let b = run(&[
        "gen",
        "--n",
        "3",
        "--alpha",
        "0.5",
        "--seed",
        "7",
        "--out",
        f2.to_str().unwrap(),
    ]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert!(stdout(&a).starts_with("sha256="));
    assert_eq!(stdout(&a), stdout(&b));
    let text = std::fs::read_to_string(&f1).unwrap();
    let cube = hypernash::format::parse_instance(&text).unwrap();
    let expected = hypernash::randgame::sample_marks(
        hypernash::Dimension::new(3).unwrap(),
        hypernash::TieParameter::new(0.5).unwrap(),
        7,
    );
    assert_eq!(cube, expected);
    let c = run(&["gen", "--n", "3", "--alpha", "0.5", "--seed", "8"]);
    assert_ne!(stdout(&c), text);
}

#[test]
fn gen_single_tie_edge() {
    let o = run(&["gen", "--n", "1", "--alpha", "1"]);
    assert_eq!(stdout(&o), "hrg 1\nn=1 alpha=1\n=\n");
    assert!(stderr(&o).starts_with("sha256="));
}

#[test]
fn gen_from_payoff_distribution() {
    let mut ties = 0usize;
    let mut total = 0usize;
    for seed in 0..200 {
        let o = run(&[
            "gen",
            "--n",
            "3",
            "--dist",
            "uniform:-1,1",
            "--seed",
            &seed.to_string(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        let text = stdout(&o);
        assert!(text.starts_with("hrg 1\nn=3 alpha=0.5\n"));
        for line in text.lines().skip(2) {
            ties += line.chars().filter(|&c| c == '=').count();
            total += line.len();
        }
    }
    let frac = ties as f64 / total as f64;
    assert!((frac - 0.5).abs() < 0.05, "{frac}");
}

#[test]
fn seed_precedence() {
    let with_env = |env: Option<&str>, args: &[&str]| {
        let mut c = bin();
        if let Some(e) = env {
            c.env("HYPERNASH_SEED", e);
        }
        stdout(
            &c.args(["gen", "--n", "4", "--alpha", "0.5"])
                .args(args)
                .output()
                .unwrap(),
        )
    };
    let default = with_env(None, &[]);
    assert_eq!(default, with_env(None, &["--seed", "0"]));
    let env5 = with_env(Some("5"), &[]);
    assert_eq!(env5, with_env(None, &["--seed", "5"]));
    assert_ne!(env5, default);
    assert_eq!(
        with_env(Some("5"), &["--seed", "9"]),
        with_env(None, &["--seed", "9"])
    );
}

#[test]
fn analyze_reports() {
    let dir = tempfile::tempdir().unwrap();
    let ties = write(dir.path(), "t.hrg", "hrg 1\nn=2 alpha=1\n==\n==\n");
    let o = stdout(&run(&["analyze", &ties]));
    assert!(o.contains("pne_count=4 spne_count=0"), "{o}");
    let one = write(dir.path(), "o.hrg", "hrg 1\nn=1 alpha=unknown\n>\n");
    let o = stdout(&run(&["analyze", &one]));
    assert!(o.contains("pne=[1]\n"), "{o}");

    let game = hypernash::randgame::marks_of(&hypernash::randgame::example_three_player_game());
    let g = write(
        dir.path(),
        "g.hrg",
        &hypernash::format::write_instance(&game),
    );
    let o = stdout(&run(&["analyze", &g]));
    assert!(
        o.contains("pne=[0,3]\n") && o.contains("pne_count=2 "),
        "{o}"
    );

    let j = run(&["analyze", &g, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["pne_count"], 2);
}

#[test]
fn analyze_rejects_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.hrg", "hrg 1\nn=2 alpha=1\n==\n=?\n");
    let o = run(&["analyze", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("line 4") && stderr(&o).contains("column 2"),
        "{}",
        stderr(&o)
    );
    let o = run(&["analyze", "/nonexistent/x.hrg"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn brd_traces() {
    let dir = tempfile::tempdir().unwrap();
    let one = write(dir.path(), "o.hrg", "hrg 1\nn=1 alpha=unknown\n>\n");
    assert_eq!(
        stdout(&run(&["brd", &one, "--start", "0"])),
        "path 0 1\nconverged steps=1 vertex=1\n"
    );
    assert!(stdout(&run(&["brd", &one, "--start", "1"])).contains("converged steps=0"));
    let ties = write(dir.path(), "t.hrg", "hrg 1\nn=2 alpha=1\n==\n==\n");
    for s in ["0", "1", "2", "3"] {
        assert!(stdout(&run(&["brd", &ties, "--start", s])).contains("converged steps=0"));
    }
    let o = run(&["brd", &ties, "--start", "4"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn access_and_perc() {
    let dir = tempfile::tempdir().unwrap();
    let ties = write(dir.path(), "t.hrg", "hrg 1\nn=2 alpha=1\n==\n==\n");
    let o = stdout(&run(&["access", &ties, "--start", "0"]));
    assert!(
        o.contains("accessible_count=1 ") && o.contains("unreachable_pne=[1,2,3]"),
        "{o}"
    );

    let bond = dir.path().join("b.hrp");
    let o = run(&[
        "perc",
        "--n",
        "6",
        "--p",
        "0",
        "--out",
        bond.to_str().unwrap(),
    ]);
    assert!(stdout(&o).contains("isolated_count=64"), "{}", stdout(&o));
    let o = stdout(&run(&["perc", "--bond", bond.to_str().unwrap()]));
    assert!(o.contains("open_edges=0 components=64"), "{o}");

    let g = dir.path().join("g.hrg");
    run(&[
        "gen",
        "--n",
        "6",
        "--alpha",
        "0.4",
        "--out",
        g.to_str().unwrap(),
    ]);
    let o = stdout(&run(&[
        "perc",
        "--couple",
        g.to_str().unwrap(),
        "--start",
        "5",
    ]));
    assert!(o.contains("coupling_holds=true"), "{o}");
    assert_eq!(run(&["perc"]).status.code(), Some(1));
}

#[test]
fn experiment_outputs_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("out/run");
    let cfg = write(
        dir.path(),
        "m.cfg",
        &format!(
            "experiment = mean-pne\nn = 2..6\nalpha = 0.5\ntrials = 50\noutput = {}\n",
            prefix.display()
        ),
    );
    let a = run(&["experiment", "mean-pne", "--config", &cfg, "--threads", "1"]);
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    let csv1 = std::fs::read(dir.path().join("out/run.csv")).unwrap();
    let json1 = std::fs::read(dir.path().join("out/run.json")).unwrap();
    let b = run(&["experiment", "mean-pne", "--config", &cfg, "--threads", "3"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(std::fs::read(dir.path().join("out/run.csv")).unwrap(), csv1);
    assert_eq!(
        std::fs::read(dir.path().join("out/run.json")).unwrap(),
        json1
    );
    let header = String::from_utf8(csv1).unwrap();
    assert!(header.starts_with("experiment,n,alpha,trial,seed,pne_count\n"));

    // an impossible threshold fails with exit code 2 and a per-check report
    let strict = write(
        dir.path(),
        "s.cfg",
        "n = 5\ntrials = 30\ncheck.max_abs_z = -1\n",
    );
    let o = run(&["experiment", "mean-pne", "--config", &strict]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("FAIL max_abs_z"), "{}", stderr(&o));

    let o = run(&["experiment", "fig4"]);
    assert_eq!(o.status.code(), Some(1));
    let bad = write(dir.path(), "b.cfg", "n = 5\nbogus = 1\n");
    let o = run(&["experiment", "mean-pne", "--config", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn config_seed_is_overridden_by_env_and_flag() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.cfg", "n = 4\ntrials = 5\nseed = 3\n");
    let seed_of = |o: &Output| {
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"]["master_seed"].as_u64().unwrap()
    };
    assert_eq!(
        seed_of(&run(&["experiment", "mean-pne", "--config", &cfg])),
        3
    );
    let env = bin()
        .env("HYPERNASH_SEED", "4")
        .args(["experiment", "mean-pne", "--config", &cfg])
        .output()
        .unwrap();
    assert_eq!(seed_of(&env), 4);
    let flag = bin()
        .env("HYPERNASH_SEED", "4")
        .args(["experiment", "mean-pne", "--config", &cfg, "--seed", "5"])
        .output()
        .unwrap();
    assert_eq!(seed_of(&flag), 5);
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(run(&["gen", "--n", "3"]).status.code(), Some(1));
    assert_eq!(
        run(&["gen", "--n", "3", "--alpha", "2"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
