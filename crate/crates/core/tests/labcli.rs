use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use froglab::labcli::{csv_line, format_real, ExperimentConfig, Suite};

fn froglab(args: &[&str], workers: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_froglab"));
    cmd.args(args);
    match workers {
        Some(w) => cmd.env("FROGLAB_WORKERS", w),
        None => cmd.env_remove("FROGLAB_WORKERS"),
    };
    cmd.output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run_to(config: &Path, out: &Path, workers: Option<&str>) -> Output {
    froglab(
        &["run", config.to_str().unwrap(), "--output", out.to_str().unwrap()],
        workers,
    )
}

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn sim_four_rows_deterministic() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "sim.cfg",
        "master_seed = 1\nkind = sim\nd = 2\n[sim]\nn = 8\nreplicas = 4\n",
    );
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert_eq!(run_to(&cfg, &a, Some("1")).status.code(), Some(0));
    assert_eq!(run_to(&cfg, &b, Some("4")).status.code(), Some(0));
    let text = read(&a, "samples.csv");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "task,replica,n,dx1,dx2,T,path_len,max_jump,frontier_radius"
    );
    assert_eq!(lines.len(), 5);
    for (i, l) in lines[1..].iter().enumerate() {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[1], i.to_string());
        assert_eq!(&f[2..5], &["8", "8", "0"]);
        let t: u64 = f[5].parse().unwrap();
        assert!(t >= 8 && t.is_multiple_of(2));
    }
    assert_eq!(text, read(&b, "samples.csv"));

    let m: serde_json::Value = serde_json::from_str(&read(&a, "manifest.json")).unwrap();
    assert_eq!(m["kind"], "sim");
    assert!(m["tasks"].as_array().is_some_and(|t| !t.is_empty()));
    assert!(m["started_unix"].as_f64() <= m["finished_unix"].as_f64());
    assert!(m["started_unix"].as_f64().is_some_and(|t| t > 1e9));
}

#[test]
fn scaling_contrast_and_resume() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "scaling.cfg",
        "master_seed = 3\nkind = scaling\nd = 1, 2\nblock = 8\n[scaling]\nn = 4, 8\nreplicas = 24\n",
    );
    let out = tmp.path().join("out");
    let first = run_to(&cfg, &out, None);
    assert_eq!(first.status.code(), Some(0));
    let table = read(&out, "scaling.csv");
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(
        lines[0],
        "d,n,replicas,mean,var,var_over_n,var_logn_over_n,kappa_hat,ci_mean,ci_var"
    );
    let dims: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(dims, ["1", "1", "2", "2"]);
    assert!(read(&out, "paths.csv").starts_with("d,n,count,min_l_over_n,"));

    // Drop two task caches; only those are recomputed and the bytes agree.
    let cache = out.join("cache");
    let mut tasks: Vec<PathBuf> = fs::read_dir(&cache)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    tasks.sort();
    let total = tasks.len();
    assert_eq!(total, 2 * 2 * 3);
    fs::remove_file(&tasks[0]).unwrap();
    fs::remove_file(&tasks[5]).unwrap();
    let second = run_to(&cfg, &out, None);
    let said = String::from_utf8(second.stdout).unwrap();
    assert!(said.contains(&format!("{total} tasks (2 computed")), "{said}");
    assert_eq!(read(&out, "scaling.csv"), table);

    let show = froglab(&["show", out.to_str().unwrap()], None);
    assert_eq!(show.status.code(), Some(0));
    assert!(String::from_utf8(show.stdout).unwrap().contains("kappa_hat"));
}

#[test]
fn changed_config_invalidates_cache() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let a = write_config(tmp.path(), "a.cfg", "master_seed = 1\nkind = sim\n[sim]\nn = 4\nreplicas = 3\n");
    let b = write_config(tmp.path(), "b.cfg", "master_seed = 2\nkind = sim\n[sim]\nn = 4\nreplicas = 3\n");
    run_to(&a, &out, None);
    let first = read(&out, "samples.csv");
    let again = run_to(&b, &out, None);
    assert!(String::from_utf8(again.stdout).unwrap().contains("(1 computed"));
    let fresh = tmp.path().join("fresh");
    run_to(&b, &fresh, None);
    assert_eq!(read(&out, "samples.csv"), read(&fresh, "samples.csv"));
    assert_ne!(first, read(&fresh, "samples.csv"));
}

#[test]
fn perc_run_has_no_violations() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "perc.cfg",
        "master_seed = 4\nkind = perc\nd = 2\n[perc]\nL = 5\nM = 1\np = 0.3\ninstances = 100\nfield = m_dependent\n",
    );
    let out = tmp.path().join("out");
    assert_eq!(run_to(&cfg, &out, None).status.code(), Some(0));
    let text = read(&out, "perc.csv");
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,L,M,p_or_qM,X_L,N_bound,tess_bound,violation");
    assert_eq!(lines.len(), 101);
    assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
}

#[test]
fn fmgap_run_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "fm.cfg",
        "master_seed = 5\nkind = fmgap\nd = 2\n[fmgap]\nx = 16, 0\nreplicas = 12\n",
    );
    let out = tmp.path().join("out");
    assert_eq!(run_to(&cfg, &out, None).status.code(), Some(0));
    let report = read(&out, "fmgap.csv");
    assert!(report.starts_with("d,dx1,dx2,m,terms,replicas,var_T,var_F,gap,"));
    assert_eq!(read(&out, "fm_samples.csv").lines().count(), 13);
}

#[test]
fn horizon_cap_exhaustion_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "cap.cfg",
        "master_seed = 1\nkind = sim\nhorizon_cap = 20\n[sim]\nn = 18\nreplicas = 6\n",
    );
    let out = tmp.path().join("out");
    let o = run_to(&cfg, &out, None);
    assert_eq!(o.status.code(), Some(3));
    assert!(read(&out, "samples.csv").contains("NA"));
    let m: serde_json::Value = serde_json::from_str(&read(&out, "manifest.json")).unwrap();
    assert_eq!(m["partial"], true);
    assert!(m["censored"].as_u64().unwrap() > 0);
}

#[test]
fn config_and_io_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = write_config(tmp.path(), "bad.cfg", "master_seed = 1\nbogus = 2\n");
    let o = froglab(&["run", bad.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 2"));
    let empty = write_config(tmp.path(), "empty.cfg", "master_seed = 1\n[verify]\nsuites =\n");
    assert_eq!(froglab(&["verify", empty.to_str().unwrap()], None).status.code(), Some(2));
    let missing = tmp.path().join("nope.cfg");
    assert_eq!(froglab(&["run", missing.to_str().unwrap()], None).status.code(), Some(4));
    // Output path blocked by a regular file.
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    let ok = write_config(tmp.path(), "ok.cfg", "master_seed = 1\nkind = sim\n[sim]\nn = 2\nreplicas = 2\n");
    assert_eq!(run_to(&ok, &blocker.join("sub"), None).status.code(), Some(4));
}

#[test]
fn corrupted_key_fails_verify_with_witness() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "fault.cfg",
        "master_seed = 1\n[verify]\nsuites = genealogy\ngenealogy = 20\nfault = corrupt_rng_key\n",
    );
    let out = tmp.path().join("out");
    let o = froglab(&["verify", cfg.to_str().unwrap(), "--output", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("violation: suite=genealogy"));
    assert!(err.contains("field_seed="));
    assert!(!read(&out, "witnesses.txt").is_empty());
}

#[test]
fn small_battery_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let body = "master_seed = 1\n[verify]\nengine_oracle = 10\ngenealogy = 50\nsubadditivity = 50\n\
                mask_locality = 20\nt2_reduction = 4\ncoupling = 20\npercolation = 20\nparity = 20\n";
    let cfg = write_config(tmp.path(), "v.cfg", body);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let oa = froglab(&["verify", cfg.to_str().unwrap(), "--output", a.to_str().unwrap()], Some("1"));
    let ob = froglab(&["verify", cfg.to_str().unwrap(), "--output", b.to_str().unwrap()], Some("3"));
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(ob.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    let table = read(&a, "verify.csv");
    assert_eq!(table, read(&b, "verify.csv"));
    assert_eq!(table.lines().count(), 1 + Suite::ALL.len());
    assert!(table.lines().skip(1).all(|l| l.ends_with(",0")));
}

#[test]
fn config_fingerprint_ignores_workers_and_output() {
    let a = ExperimentConfig::parse("master_seed = 1\nworkers = 2\noutput = x\n").unwrap();
    let b = ExperimentConfig::parse("master_seed = 1\nworkers = 7\noutput = y\n").unwrap();
    let c = ExperimentConfig::parse("master_seed = 2\n").unwrap();
    assert_eq!(a.fingerprint(), b.fingerprint());
    assert_ne!(a.fingerprint(), c.fingerprint());
}

#[test]
fn number_formatting() {
    assert_eq!(format_real(2.0), "2.00000000");
    assert_eq!(format_real(0.001), "0.00100000000");
    assert_eq!(format_real(123456.789), "123456.789");
    assert_eq!(format_real(0.000999), "9.99000000e-4");
    assert_eq!(format_real(1e9), "1.00000000e9");
    assert_eq!(csv_line(["a", "b"]), "a,b\n");
}
