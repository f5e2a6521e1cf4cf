//! Compiles and runs a small C program against the generated header and the
//! static library, so the ABI is exercised from actual C rather than through
//! Rust declarations of itself.

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <antidict.h>
#include <stdio.h>
#include <string.h>

int main(void) {
    AntidictWord *word = NULL;
    if (antidict_word_parse("aab", &word) != ANTIDICT_STATUS_OK) return 1;
    if (antidict_word_period_len(word) != 3) return 2;
    char *json = NULL;
    if (antidict_canonical_json(word, &json) != ANTIDICT_STATUS_OK) return 3;
    if (strcmp(json, "[\"bb\",\"aaa\",\"bab\"]") != 0) {
        fprintf(stderr, "unexpected canonical json: %s\n", json);
        return 4;
    }
    antidict_string_free(json);
    antidict_word_free(word);

    AntidictWord *bad = NULL;
    if (antidict_word_parse("abab", &bad) != ANTIDICT_STATUS_INVALID_WORD) return 5;
    if (strcmp(antidict_last_error_message(), "period is a proper power") != 0) return 6;

    const char *system[] = {"aaa", "bab", "bb"};
    if (antidict_defines_json(system, 3, &json) != ANTIDICT_STATUS_OK) return 7;
    if (strstr(json, "\"word\":\"aab\"") == NULL) {
        fprintf(stderr, "unexpected defines json: %s\n", json);
        return 8;
    }
    antidict_string_free(json);
    puts("ok");
    return 0;
}
"#;

#[test]
fn header_links_and_runs_from_c() {
    let crate_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include = crate_dir.join("include");
    assert!(include.join("antidict.h").is_file(), "header not generated");
    let lib_dir = match env::var_os("CARGO_TARGET_DIR") {
        Some(dir) => PathBuf::from(dir).join("debug"),
        None => crate_dir
            .parent()
            .unwrap()
            .parent()
            .unwrap()
            .join("target")
            .join("debug"),
    };
    assert!(
        lib_dir.join("libantidict_capi.a").is_file(),
        "static library not built at {}",
        lib_dir.display()
    );

    let work = env::temp_dir().join(format!("antidict-capi-{}", std::process::id()));
    fs::create_dir_all(&work).unwrap();
    let source = work.join("main.c");
    let binary = work.join("main");
    fs::write(&source, PROGRAM).unwrap();

    let compile = Command::new("cc")
        .arg("-std=c11")
        .arg("-Wall")
        .arg("-Werror")
        .arg(&source)
        .arg("-I")
        .arg(&include)
        .arg("-L")
        .arg(&lib_dir)
        .arg("-lantidict_capi")
        .arg("-lpthread")
        .arg("-ldl")
        .arg("-lm")
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().unwrap();
    assert!(
        run.status.success(),
        "C program exited with {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "ok");
    fs::remove_dir_all(&work).ok();
}
