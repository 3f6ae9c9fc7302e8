//! Holds the `acceptance` test target of the `wdmt` workspace. A separate
//! package makes `cargo test --workspace` run it after every other suite.
