#![allow(dead_code)]

pub mod expr;

use std::path::Path;
use std::process::{Command, Output};

pub fn mtula(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtula"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawning the mtula binary")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

pub fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).expect("reading output"))
        .expect("parsing output")
}
