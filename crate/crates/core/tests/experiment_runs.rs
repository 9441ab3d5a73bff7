use symlen_core::experiment::{run_experiment, ExperimentConfig};

fn run(kind: &str, p: u32, trials: usize, seed: u64) -> symlen_core::experiment::ExperimentReport {
    let cfg = ExperimentConfig::from_toml(&format!(
        "seed = {seed}\ntrials = {trials}\np = {p}\nscenario = \"{kind}\"\n"
    ))
    .unwrap();
    run_experiment(&cfg).unwrap()
}

fn assert_clean(r: &symlen_core::experiment::ExperimentReport) {
    let bad: Vec<_> = r
        .failures()
        .map(|f| (f.trial, f.error.clone(), f.instance.clone()))
        .collect();
    assert!(bad.is_empty(), "{bad:#?}");
    assert!(r.all_within_bound());
}

#[test]
fn cyclic_extension_runs_stay_within_three() {
    let r = run("split_by_cyclic_p", 2, 100, 7);
    assert_eq!(r.records.len(), 100);
    assert_clean(&r);
    assert!(r
        .records
        .iter()
        .all(|x| x.bound == Some(3) && x.achieved.unwrap() <= 3));
}

#[test]
fn symbol_runs_in_characteristic_three() {
    let r = run("symbols", 3, 50, 8);
    assert_eq!(r.records.len(), 50);
    assert_clean(&r);
}

#[test]
fn odd_characteristic_drivers() {
    for kind in ["split_by_cyclic_p", "cyclic_reduction", "cyclic_deg"] {
        let r = run(kind, 3, 12, 9);
        assert_clean(&r);
    }
}

#[test]
fn seeds_change_instances() {
    let a = run("symbols", 2, 5, 1);
    let b = run("symbols", 2, 5, 2);
    let inst = |r: &symlen_core::experiment::ExperimentReport| {
        r.records
            .iter()
            .map(|x| x.instance.clone())
            .collect::<Vec<_>>()
    };
    assert_ne!(inst(&a), inst(&b));
    assert_eq!(inst(&a), inst(&run("symbols", 2, 5, 1)));
}
