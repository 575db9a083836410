//! Acceptance checks for `prymcusp`; see `tests/acceptance.rs`.
