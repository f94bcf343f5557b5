//! Fork-join execution with deterministic work/span accounting.
//!
//! Costs are semantic: algorithms call [`tick`] at the points they consider a
//! unit of work, and the combinators below compose the resulting counters the
//! same way regardless of thread count or scheduling. Sequential composition
//! adds spans; a parallel region of `t` tasks costs the maximum child span plus
//! `ceil(log2 t)` for the balanced combine tree.

use std::cell::RefCell;

use serde::Serialize;

use crate::arith::ceil_log2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Cost {
    pub work: u64,
    pub span: u64,
}

impl Cost {
    pub const UNIT: Cost = Cost { work: 1, span: 1 };

    /// Sequential composition.
    pub fn then(self, other: Cost) -> Cost {
        Cost {
            work: self.work + other.work,
            span: self.span + other.span,
        }
    }

    /// Parallel composition of independent tasks under a balanced combine tree.
    pub fn par(tasks: &[Cost]) -> Cost {
        if tasks.is_empty() {
            return Cost::default();
        }
        let work = tasks.iter().map(|c| c.work).sum();
        let span = tasks.iter().map(|c| c.span).max().unwrap_or(0) + ceil_log2(tasks.len() as u64);
        Cost { work, span }
    }
}

thread_local! {
    static FRAMES: RefCell<Vec<Cost>> = const { RefCell::new(Vec::new()) };
}

/// Record `units` of sequential work in the innermost open measurement.
pub fn tick(units: u64) {
    FRAMES.with(|f| {
        if let Some(top) = f.borrow_mut().last_mut() {
            *top = top.then(Cost { work: units, span: units });
        }
    });
}

fn absorb(c: Cost) {
    FRAMES.with(|f| {
        if let Some(top) = f.borrow_mut().last_mut() {
            *top = top.then(c);
        }
    });
}

/// Run `f` in a fresh measurement frame and return its cost. The cost is also
/// charged to any enclosing frame.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, Cost) {
    FRAMES.with(|fr| fr.borrow_mut().push(Cost::default()));
    let r = f();
    let c = FRAMES.with(|fr| fr.borrow_mut().pop()).unwrap_or_default();
    absorb(c);
    (r, c)
}

fn isolated<R>(f: impl FnOnce() -> R) -> (R, Cost) {
    FRAMES.with(|fr| fr.borrow_mut().push(Cost::default()));
    let r = f();
    let c = FRAMES.with(|fr| fr.borrow_mut().pop()).unwrap_or_default();
    // every task is charged at least one unit so that span <= work holds
    let c = if c.work == 0 { Cost::UNIT } else { c };
    (r, c)
}

/// Map `f` over `items` as one parallel region. Output order matches input order.
pub fn par_map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    let pairs: Vec<(R, Cost)> = run_tasks(items, &f);
    let costs: Vec<Cost> = pairs.iter().map(|p| p.1).collect();
    absorb(Cost::par(&costs));
    pairs.into_iter().map(|p| p.0).collect()
}

#[cfg(feature = "parallel")]
fn run_tasks<T, R, F>(items: &[T], f: &F) -> Vec<(R, Cost)>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if items.len() <= 1 {
        return items.iter().map(|x| isolated(|| f(x))).collect();
    }
    items.par_iter().map(|x| isolated(|| f(x))).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_tasks<T, R, F>(items: &[T], f: &F) -> Vec<(R, Cost)>
where
    F: Fn(&T) -> R,
{
    items.iter().map(|x| isolated(|| f(x))).collect()
}

/// `par_map` over `0..n`.
pub fn par_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    let idx: Vec<usize> = (0..n).collect();
    par_map(&idx, |&i| f(i))
}

/// Chunk width for [`par_find_first`]. Fixed so that the set of evaluated
/// tasks, and hence the recorded cost, does not depend on the worker count.
pub const SEARCH_CHUNK: usize = 32;

/// First `Some` result in input order. Items are evaluated in parallel chunks of
/// [`SEARCH_CHUNK`]; the search stops after the first chunk that contains a hit.
pub fn par_find_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    for chunk in items.chunks(SEARCH_CHUNK) {
        let results = par_map(chunk, &f);
        if let Some(r) = results.into_iter().flatten().next() {
            return Some(r);
        }
    }
    None
}

/// Run `f` with `workers` threads available to the parallel combinators.
#[cfg(feature = "parallel")]
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool");
    // carry the caller's frame across the pool boundary
    let (r, c) = pool.install(|| {
        FRAMES.with(|fr| fr.borrow_mut().push(Cost::default()));
        let r = f();
        let c = FRAMES.with(|fr| fr.borrow_mut().pop()).unwrap_or_default();
        (r, c)
    });
    absorb(c);
    r
}

#[cfg(not(feature = "parallel"))]
pub fn with_workers<R: Send>(_workers: usize, f: impl FnOnce() -> R + Send) -> R {
    f()
}
