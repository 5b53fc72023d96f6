//! Process-wide limit on the number of raw elements a single coend may
//! enumerate.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 1_000_000;

static CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CAP);

pub fn element_cap() -> usize {
    CAP.load(Ordering::Relaxed)
}

pub fn set_element_cap(cap: usize) {
    CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Errors when `count` raw elements would exceed the cap.
pub fn check(what: &str, count: u128) -> Result<()> {
    let cap = element_cap();
    if count > cap as u128 {
        return Err(Error::CapExceeded { what: what.to_string(), count, cap });
    }
    Ok(())
}
