//! Acceptance suite for the workspace.
//!
//! The suite lives in `tests/acceptance.rs` and prints one `PASS` or `FAIL`
//! line per criterion:
//!
//! ```text
//! cargo test -p validation --test acceptance
//! ```
