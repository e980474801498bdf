//! Thread-local operation counters.
//!
//! Structures bump these as they work so benchmarks and tests can measure
//! cost in elementary steps instead of wall-clock time. Counters are per
//! thread, which keeps parallel test threads from interfering.

use std::cell::Cell;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    /// Search-tree nodes touched by queries.
    pub node_visits: u64,
    /// Nodes created while (re)building subtrees, across all levels.
    pub rebuild_nodes: u64,
    /// Individual store queries issued by the SOLE structures.
    pub store_queries: u64,
}

thread_local! {
    static NODE_VISITS: Cell<u64> = const { Cell::new(0) };
    static REBUILD_NODES: Cell<u64> = const { Cell::new(0) };
    static STORE_QUERIES: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub(crate) fn visit() {
    NODE_VISITS.with(|c| c.set(c.get() + 1));
}

#[inline]
pub(crate) fn rebuilt(nodes: u64) {
    REBUILD_NODES.with(|c| c.set(c.get() + nodes));
}

#[inline]
pub(crate) fn store_query() {
    STORE_QUERIES.with(|c| c.set(c.get() + 1));
}

pub fn reset() {
    NODE_VISITS.with(|c| c.set(0));
    REBUILD_NODES.with(|c| c.set(0));
    STORE_QUERIES.with(|c| c.set(0));
}

pub fn snapshot() -> Counters {
    Counters {
        node_visits: NODE_VISITS.with(Cell::get),
        rebuild_nodes: REBUILD_NODES.with(Cell::get),
        store_queries: STORE_QUERIES.with(Cell::get),
    }
}

/// Runs `f` and returns its result with the counter deltas it caused.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, Counters) {
    let before = snapshot();
    let out = f();
    let after = snapshot();
    (
        out,
        Counters {
            node_visits: after.node_visits - before.node_visits,
            rebuild_nodes: after.rebuild_nodes - before.rebuild_nodes,
            store_queries: after.store_queries - before.store_queries,
        },
    )
}
