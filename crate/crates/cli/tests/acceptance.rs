//! Runs every acceptance criterion at its stated tolerance and prints one
//! line per criterion.

use std::path::Path;
use std::process::Command;

use sha2::{Digest, Sha256};
use spreadlab::suite::{run_criterion, Profile, CRITERIA};

fn spreadlab(dir: &Path, args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPREADLAB_BUDGET_CANDIDATES")
        .env_remove("SPREADLAB_BUDGET_ENUMERATION")
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

fn digest(path: &Path) -> String {
    let bytes = std::fs::read(path).unwrap();
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Five seeded commands, each run twice into separate files.
fn determinism() -> (bool, String) {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(spreadlab(d, &["generate", "--family", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "5", "--output", "h.json"]), 0);
    let commands: [&[&str]; 5] = [
        &["generate", "--family", "random", "--n", "10", "--r", "3", "--m", "20", "--seed", "5"],
        &["certify", "--mode", "q", "--q", "1/3", "--samples", "500", "--seed", "9", "--input", "h.json"],
        &["fragment", "--input", "h.json", "--r-seq", "3,1", "--q", "1/10", "--C", "4", "--seed", "11", "--trials", "5", "--audit"],
        &["threshold", "--input", "h.json", "--sizes", "3..10", "--trials", "5000", "--seed", "13", "--exact", "--bounds", "C=8,q=1/10,rseq=3,1,alpha=1/2"],
        &["threshold", "--input", "h.json", "--sizes", "4,6,8", "--trials", "3000", "--seed", "17", "--format", "json"],
    ];
    let mut notes = Vec::new();
    let mut ok = true;
    for (i, cmd) in commands.iter().enumerate() {
        let mut hashes = Vec::new();
        let out = format!("out{i}");
        let mut args = cmd.to_vec();
        args.extend(["--output", &out]);
        for _ in 0..2 {
            let _ = std::fs::remove_file(d.join(&out));
            ok &= spreadlab(d, &args) <= 1;
            hashes.push(digest(&d.join(&out)));
        }
        ok &= hashes[0] == hashes[1];
        notes.push(format!("{} {}", cmd[0], &hashes[0][..12]));
    }
    (ok, format!("5 commands twice, hashes {}", notes.join(", ")))
}

#[test]
fn acceptance() {
    let mut all = true;
    for &(id, _) in CRITERIA {
        let r = run_criterion(id, Profile::Full).unwrap();
        println!(
            "criterion {:>2} {} {}{} ({} ms): {}",
            r.id,
            if r.passed { "PASS" } else { "FAIL" },
            r.title,
            if r.vacuous { " [vacuous]" } else { "" },
            r.elapsed_ms,
            r.detail
        );
        all &= r.passed;
    }
    let (ok, detail) = determinism();
    println!("criterion 10 {} byte-identical reruns: {detail}", if ok { "PASS" } else { "FAIL" });
    all &= ok;
    assert!(all, "some acceptance criteria failed");
}
