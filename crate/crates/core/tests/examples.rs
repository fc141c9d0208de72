//! Runs every example end to end so they cannot rot.

#[path = "../examples/cli_pipeline.rs"]
mod cli_pipeline;
#[path = "../examples/per_track.rs"]
mod per_track;
#[path = "../examples/screen_r1.rs"]
mod screen_r1;
#[path = "../examples/selective_curves.rs"]
mod selective_curves;
#[path = "../examples/split_half.rs"]
mod split_half;
#[path = "../examples/synth_archetypes.rs"]
mod synth_archetypes;
#[path = "../examples/summary_criterion.rs"]
mod summary_criterion;

#[test]
fn screen_r1() {
    screen_r1::run().unwrap();
}

#[test]
fn selective_curves() {
    selective_curves::run().unwrap();
}

#[test]
fn summary_criterion() {
    summary_criterion::run(2_000).unwrap();
}

#[test]
fn synth_archetypes() {
    synth_archetypes::run(524).unwrap();
}

#[test]
fn per_track() {
    per_track::run().unwrap();
}

#[test]
fn split_half() {
    split_half::run(50).unwrap();
}

#[test]
fn cli_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    cli_pipeline::run(dir.path()).unwrap();
    assert!(dir.path().join("stats/criterion_tests.md").exists());
}
