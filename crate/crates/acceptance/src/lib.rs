//! Holds the `acceptance` test target. It lives in its own package so that
//! `cargo test --workspace` runs every `ballplate` target before it.
