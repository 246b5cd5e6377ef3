//! Holds the `acceptance` test target. It lives in its own package so that
//! the core crate's tests all run first under a plain `cargo test`.
