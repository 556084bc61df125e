#![allow(dead_code)]

use std::path::PathBuf;

use ensbench::config::{parse_config_str, ExperimentConfig};
use ensbench::data::{load_dataset, Dataset};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn load(name: &str) -> Dataset {
    let dir = data_dir();
    load_dataset(dir.join(format!("{name}.csv")), dir.join(format!("{name}.schema"))).expect("bundled dataset loads")
}

pub fn config(datasets: &[&str], learners: &str, methods: &str, members: usize, runs: usize) -> ExperimentConfig {
    let mut text = format!("learners = {learners}\nmethods = {methods}\nmembers = {members}\ncv_runs = {runs}\n");
    for d in datasets {
        text.push_str(&format!("dataset = {d}, {d}.csv, {d}.schema\n"));
    }
    parse_config_str(&text, &data_dir()).expect("test config parses")
}
