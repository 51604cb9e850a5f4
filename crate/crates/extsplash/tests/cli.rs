use std::path::Path;
use std::process::{Command, Output};

use extsplash::report::{Document, VerifyReport};
use extsplash_core::projgeom::{self, ProjSubspace};
use extsplash_core::{FieldSpec, FieldTower, Level};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_extsplash")).args(args).output().expect("spawn extsplash")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn doc(args: &[&str]) -> Document {
    let o = run(args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn strip_wall(mut r: VerifyReport) -> VerifyReport {
    for e in &mut r.entries {
        e.wall_ms = 0;
    }
    r
}

/// At q=2 every three points of ℓ∞ form a subline, so C-5.2 has
/// counterexamples; all other checks pass.
#[test]
fn verify_all_at_q2() {
    let o = run(&["verify", "--q", "2", "--checks", "all"]);
    assert_eq!(code(&o), 1);
    let r = VerifyReport::from_json(&stdout(&o)).unwrap();
    assert_eq!(r.entries.len(), 24);
    let failed: Vec<&str> = r.entries.iter().filter(|e| e.verdict != "pass").map(|e| e.check.as_str()).collect();
    assert_eq!(failed, ["C-5.2"]);
    assert!(r.entries.iter().all(|e| e.q == 2 && e.schema_version == 1 && e.seed == 0));
}

#[test]
fn configuration_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["verify", "--q", "3", "--checks", "C-3.2"],
        &["verify", "--q", "3", "--checks", "C-9.9"],
        &["verify", "--q", "6"],
        &["verify", "--q", "7"],
        &["verify", "--field", "q=3;cubic=1,0,0;quad=2,0"],
        &["verify", "--field", "nonsense"],
        &["verify", "--q", "2", "--field", "q=3;cubic=2,1,0;quad=2,0"],
        &["construct", "--q", "2"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(code(&o), 2, "{:?}", args);
        assert!(o.stdout.is_empty(), "{:?}", args);
        assert!(!o.stderr.is_empty(), "{:?}", args);
    }
}

#[test]
fn selected_checks_pass() {
    let o = run(&["verify", "--q", "3", "--checks", "C-5.1,C-2.3,C-3.5"]);
    assert_eq!(code(&o), 0);
    let r = VerifyReport::from_json(&stdout(&o)).unwrap();
    let ids: Vec<&str> = r.entries.iter().map(|e| e.check.as_str()).collect();
    assert_eq!(ids, ["C-2.3", "C-3.5", "C-5.1"]);
    assert!(r.all_pass());
}

/// The dumped transversal is rechecked here from its text: it meets every
/// conic-cover plane, read over GF(q³), in exactly one point.
#[test]
fn dumped_conic_transversal_meets_every_conic_cover_plane() {
    let spec = "q=3;cubic=2,1,0;quad=2,0";
    let t = FieldTower::new(FieldSpec::parse(spec).unwrap()).unwrap();
    let (f, cf) = (t.field(Level::Base), t.field(Level::Cubic));
    let tr = doc(&["dump", "transversals", "--field", spec]);
    assert_eq!(tr.get("g_C", "in_conic_cover"), Some("true"));
    let g = projgeom::parse_subspace(cf, 5, tr.get("g_C", "line").unwrap()).unwrap();
    assert_eq!(g.rank(), 2);
    let covers = doc(&["dump", "covers", "--field", spec]);
    let planes = |group: &str| -> Vec<ProjSubspace> {
        covers
            .items
            .iter()
            .filter(|i| i.group == group && i.name.starts_with("plane"))
            .map(|i| projgeom::parse_subspace(f, 5, &i.value).unwrap().extend(cf.order()))
            .collect()
    };
    let conic = planes("conic_cover");
    assert_eq!(conic.len(), 13);
    for p in &conic {
        assert_eq!(g.meet(cf, p).unwrap().rank(), 1);
    }
    assert!(planes("tangent_cover").iter().any(|p| g.meet(cf, p).unwrap().rank() == 0));
}

#[test]
fn census_at_q2() {
    let d = doc(&["census", "--q", "2"]);
    assert_eq!(d.get("census", "planes_scanned"), Some("1395"));
    assert_eq!(d.get("census", "splashes"), Some("36"));
    assert_eq!(d.get("census", "max"), Some("6"));
    assert_eq!(d.get("census", "bound_2q_plus_2"), Some("6"));
}

#[test]
fn census_over_budget_exits_3() {
    let o = run(&["census", "--q", "4", "--budget", "1000"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn construct_recovers_the_canonical_pair() {
    let d = doc(&["construct", "--q", "3"]);
    assert_eq!(d.get("output", "distinct"), Some("true"));
    assert_eq!(d.get("output", "equals_canonical_pair"), Some("true"));
    assert_eq!(d.get("output", "pi1").unwrap().split(' ').count(), 13);
}

#[test]
fn verify_is_deterministic_and_formats_agree() {
    let args = ["verify", "--q", "3", "--checks", "C-2.3,C-3.3,C-4.1", "--seed", "11"];
    let a = VerifyReport::from_json(&stdout(&run(&args))).unwrap();
    let b = VerifyReport::from_json(&stdout(&run(&args))).unwrap();
    assert_eq!(strip_wall(a.clone()), strip_wall(b));
    let mut csv_args = args.to_vec();
    csv_args.extend(["--format", "csv"]);
    let c = VerifyReport::from_csv(&stdout(&run(&csv_args))).unwrap();
    assert_eq!(strip_wall(a), strip_wall(c));
}

#[test]
fn dump_formats_agree() {
    let j = doc(&["dump", "splash", "--q", "4"]);
    let o = run(&["dump", "splash", "--q", "4", "--format", "csv"]);
    assert_eq!(Document::from_csv(&stdout(&o)).unwrap(), j);
    let p = run(&["dump", "splash", "--q", "4", "--format", "pretty"]);
    assert_eq!(code(&p), 0);
    assert!(!p.stdout.is_empty());
}

#[test]
fn out_file_is_written_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("splash.json");
    let o = run(&["dump", "splash", "--q", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let d: Document = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(d.command, "dump splash");
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names, [Path::new("splash.json").as_os_str()]);
}
