//! One line of output per acceptance criterion; the test fails if any
//! criterion does. Run with `--nocapture` to see the lines on success.

use fano_walls_core::verify;

#[test]
fn acceptance_criteria() {
    let results = verify::run_all();
    assert_eq!(results.len(), 12);
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("{status} {:2}  {}: {}", r.id, r.name, r.detail);
        if !r.passed {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
