//! Allocation metering through a counting global allocator.
//!
//! A binary or test opts in with
//!
//! ```ignore
//! #[global_allocator]
//! static ALLOC: dynpred::harness::CountingAllocator = dynpred::harness::CountingAllocator;
//! ```
//!
//! Without it the meter reports itself as unavailable and memory columns
//! degrade to `NA`.

use std::alloc::{GlobalAlloc, Layout, System};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

static CURRENT: AtomicUsize = AtomicUsize::new(0);
static PEAK: AtomicUsize = AtomicUsize::new(0);
static ACTIVE: AtomicBool = AtomicBool::new(false);

/// The system allocator, counting live and peak bytes.
pub struct CountingAllocator;

#[inline]
fn grew(bytes: usize) {
    let now = CURRENT.fetch_add(bytes, Ordering::Relaxed) + bytes;
    PEAK.fetch_max(now, Ordering::Relaxed);
    if !ACTIVE.load(Ordering::Relaxed) {
        ACTIVE.store(true, Ordering::Relaxed);
    }
}

#[inline]
fn shrank(bytes: usize) {
    CURRENT.fetch_sub(bytes, Ordering::Relaxed);
}

unsafe impl GlobalAlloc for CountingAllocator {
    unsafe fn alloc(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc(layout);
        if !p.is_null() {
            grew(layout.size());
        }
        p
    }

    unsafe fn alloc_zeroed(&self, layout: Layout) -> *mut u8 {
        let p = System.alloc_zeroed(layout);
        if !p.is_null() {
            grew(layout.size());
        }
        p
    }

    unsafe fn dealloc(&self, ptr: *mut u8, layout: Layout) {
        System.dealloc(ptr, layout);
        shrank(layout.size());
    }

    unsafe fn realloc(&self, ptr: *mut u8, layout: Layout, new_size: usize) -> *mut u8 {
        let p = System.realloc(ptr, layout, new_size);
        if !p.is_null() {
            if new_size >= layout.size() {
                grew(new_size - layout.size());
            } else {
                shrank(layout.size() - new_size);
            }
        }
        p
    }
}

/// Whether allocations are being counted in this process.
pub fn available() -> bool {
    // Make sure at least one allocation has happened.
    drop(std::hint::black_box(Box::new(0u8)));
    ACTIVE.load(Ordering::Relaxed)
}

/// Bytes currently allocated through the counting allocator.
pub fn current_bytes() -> usize {
    CURRENT.load(Ordering::Relaxed)
}

/// Live and peak bytes relative to the moment the scope was opened. The
/// peak is process-wide, so scopes must not overlap with other allocating
/// threads for the peak to be attributable.
#[derive(Debug)]
pub struct MeterScope {
    baseline: usize,
}

impl MeterScope {
    /// Opens a scope, or `None` when the meter is unavailable.
    pub fn open() -> Option<MeterScope> {
        if !available() {
            return None;
        }
        let baseline = CURRENT.load(Ordering::Relaxed);
        PEAK.store(baseline, Ordering::Relaxed);
        Some(MeterScope { baseline })
    }

    pub fn live(&self) -> usize {
        CURRENT.load(Ordering::Relaxed).saturating_sub(self.baseline)
    }

    pub fn peak(&self) -> usize {
        PEAK.load(Ordering::Relaxed).saturating_sub(self.baseline)
    }
}
