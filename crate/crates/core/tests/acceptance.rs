use autqm::verify::{run_criterion, DEFAULT_SEED};

#[test]
fn acceptance() {
    let reports: Vec<_> = (1..=13).map(|id| run_criterion(id, DEFAULT_SEED)).collect();
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
