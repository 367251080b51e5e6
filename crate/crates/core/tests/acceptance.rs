//! Acceptance gate: one PASS/FAIL line per criterion.

use oscillaprop::suite;

#[test]
fn acceptance() {
    let outcomes = suite::run_all();
    for o in &outcomes {
        println!("{}", o.line());
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!("{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
