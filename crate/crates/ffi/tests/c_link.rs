//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

fn target_dir() -> PathBuf {
    // <target>/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libcmhk_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let out = std::env::temp_dir().join(format!("cmhk_smoke_{}", std::process::id()));
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(root.join("include"))
        .arg(root.join("tests/c/smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&out)
        .status()
        .expect("C compiler");
    assert!(status.success(), "compile failed");
    let run = Command::new(&out).output().unwrap();
    std::fs::remove_file(&out).ok();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}

#[test]
fn header_declares_entry_points() {
    let h = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/cmhk.h")).unwrap();
    for name in [
        "cmhk_last_error",
        "cmhk_hilbert",
        "cmhk_form_from_json",
        "cmhk_form_epsilon",
        "cmhk_tower_new",
        "cmhk_lt_verify",
        "cmhk_pipeline_json",
        "cmhk_run",
        "typedef struct CmhkForm CmhkForm",
    ] {
        assert!(h.contains(name), "{name}");
    }
}
