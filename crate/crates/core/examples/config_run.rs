//! Drive the command layer from code: check the bundled smoke scenario, run
//! it into a temporary directory, and read the results table back.
//!
//! `cargo run --release --example config_run`

use std::path::Path;

use social_learning::cli::{cmd_check, cmd_run, summary_path_for, RunOverrides};
use social_learning::results::read_results;

fn main() {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/smoke.toml");
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    let code = cmd_check(&config, &mut out, &mut err);
    println!("check exit code {code}\n");

    let dir = std::env::temp_dir().join(format!("social-learning-example-{}", std::process::id()));
    let results = dir.join("smoke.csv");
    let overrides = RunOverrides {
        seed: Some(42),
        out: Some(results.clone()),
        ..Default::default()
    };
    let code = cmd_run(&config, &overrides, &mut out, &mut err);
    println!("run exit code {code}");

    let records = read_results(std::fs::File::open(&results).unwrap()).unwrap();
    let last = records.last().unwrap();
    println!("{} records; last: {last:?}", records.len());
    let summary = std::fs::read_to_string(summary_path_for(&results)).unwrap();
    println!("summary is {} bytes of JSON", summary.len());
    std::fs::remove_dir_all(&dir).ok();
}
