//! Release gate: runs every acceptance criterion and prints one line each.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use theta_core::acceptance;

#[test]
fn acceptance_suite() {
    let results = acceptance::run_all();
    let mut all_green = true;
    for r in &results {
        println!("{}", r.line());
        all_green &= r.passed;
    }
    assert!(all_green, "at least one acceptance criterion failed");
}
