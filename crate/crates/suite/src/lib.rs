//! Acceptance gate for the irreality crates. The criteria live in
//! `tests/acceptance.rs` and print one PASS/FAIL line each:
//!
//! ```text
//! cargo test -p irreality-suite --test acceptance
//! ```
