use std::path::{Path, PathBuf};
use std::process::Command;

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_generated_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib_dir = target_dir();
    let staticlib = lib_dir.join("libterp_ffi.a");
    assert!(staticlib.exists(), "missing {}", staticlib.display());
    let out_dir = std::env::temp_dir().join(format!("terp-ffi-c-{}", std::process::id()));
    std::fs::create_dir_all(&out_dir).unwrap();
    let exe = out_dir.join("smoke");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("a C compiler on PATH");
    assert!(status.success());
    let run = Command::new(&exe).arg(manifest.join("../core/fixtures/example3.json")).output().unwrap();
    assert!(run.status.success(), "exit {:?}: {}", run.status.code(), String::from_utf8_lossy(&run.stderr));
    assert_eq!(String::from_utf8(run.stdout).unwrap(), "-5/4\n0/1\n5/4\npure 1 signature 3 0\nphi -2.000\n");
    std::fs::remove_dir_all(&out_dir).ok();
}
