//! Compiles a small C program against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "froglab.h"

int main(void) {
    FrogWalkField *f = NULL;
    if (froglab_walkfield_new(7, 0, 2, &f) != FROG_STATUS_OK) return 10;
    int32_t s[2] = {0, 0}, t[2] = {5, -2};
    FrogPassage p;
    FrogStatus st = froglab_passage_time(f, s, t, NULL, 0, 0, &p);
    if (st != FROG_STATUS_OK) return 11;
    printf("%llu %u\n", (unsigned long long)p.value, p.hops);
    froglab_walkfield_free(f);

    FrogSiteField *g = NULL;
    if (froglab_sitefield_independent(1, 2, 3, 1.0, &g) != FROG_STATUS_OK) return 12;
    uint32_t w = 0;
    if (froglab_max_path_weight(g, 3, &w) != FROG_STATUS_OK) return 13;
    printf("%u\n", w);
    froglab_sitefield_free(g);
    return 0;
}
"#;

fn artifact_dir() -> PathBuf {
    // target/<profile>/deps/<this test> -> target/<profile>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

fn have_cc() -> bool {
    Command::new("cc").arg("--version").output().is_ok()
}

#[test]
fn c_program_links_and_runs() {
    if !have_cc() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = artifact_dir().join("libfroglab_ffi.a");
    if !lib.exists() {
        // Test builds of the library do not emit the staticlib.
        let status = Command::new(env!("CARGO"))
            .args(["build", "-q", "-p", "froglab-ffi"])
            .current_dir(env!("CARGO_MANIFEST_DIR"))
            .status()
            .unwrap();
        assert!(status.success(), "cargo build of the static library failed");
    }
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile/link failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "smoke program exited with {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    let value: u64 = lines[0].split(' ').next().unwrap().parse().unwrap();
    assert!(value >= 7 && value % 2 == 1);
    assert_eq!(lines[1], "4");
}
