use std::env;
use std::path::{Path, PathBuf};
use std::process::Command;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn staticlib() -> Option<PathBuf> {
    let exe = env::current_exe().ok()?;
    let dir = exe.parent()?.parent()?;
    let lib = dir.join("libcubic_torsion_ffi.a");
    lib.exists().then_some(lib)
}

#[test]
fn header_declares_every_export() {
    let h = std::fs::read_to_string(header_dir().join("cubic_torsion.h")).unwrap();
    let src = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exported: Vec<&str> = src
        .lines()
        .filter_map(|l| {
            l.strip_prefix("pub extern \"C\" fn ").or_else(|| l.strip_prefix("pub unsafe extern \"C\" fn "))
        })
        .map(|l| l.split('(').next().unwrap())
        .collect();
    assert!(exported.len() > 15);
    for name in exported {
        assert!(h.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(h.contains("typedef struct CtForm CtForm;"));
}

#[test]
fn c_program_links_and_runs() {
    let Some(lib) = staticlib() else {
        panic!("static library not found next to the test binary");
    };
    let tmp = env::temp_dir().join(format!("ct_ffi_{}", std::process::id()));
    std::fs::create_dir_all(&tmp).unwrap();
    let src = tmp.join("main.c");
    std::fs::write(
        &src,
        r#"
#include <stdio.h>
#include "cubic_torsion.h"
int main(void) {
    CtForm *f = NULL;
    int64_t disc = 0;
    uint64_t n = 0;
    if (ct_form_new(1, 0, 0, 2, &f) != CT_STATUS_OK) return 1;
    if (ct_form_discriminant(f, &disc) != CT_STATUS_OK || disc != 4) return 2;
    ct_form_free(f);
    if (ct_cl3_count(-23, &n) != CT_STATUS_OK || n != 3) return 3;
    if (ct_form_discriminant(NULL, &disc) != CT_STATUS_NULL_POINTER) return 4;
    printf("%s\n", ct_last_error_message());
    return 0;
}
"#,
    )
    .unwrap();
    let bin = tmp.join("main");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .expect("cc");
    assert!(status.success());
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).contains("null"));
    let _ = std::fs::remove_dir_all(&tmp);
}
