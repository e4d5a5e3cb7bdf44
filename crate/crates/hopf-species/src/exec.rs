//! Work scans behind the law checkers.
//!
//! A scan evaluates every item (no early exit), sums per-item instance
//! counts, and keeps the witness from the lowest-indexed failing item, so
//! sequential and parallel runs report byte-identical results.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Aggregate of a scan: how many equation instances were checked, and the
/// first counterexample found in item order, if any.
#[derive(Clone, Debug)]
pub struct ScanOutcome<W> {
    pub instances: usize,
    pub witness: Option<W>,
}

/// Sequential scan. Always available; the `scan` entry point dispatches here
/// when the `parallel` feature is off.
pub fn scan_seq<T, W, E>(
    items: &[T],
    eval: impl Fn(&T) -> Result<(usize, Option<W>), E>,
) -> Result<ScanOutcome<W>, E> {
    let mut instances = 0usize;
    let mut witness: Option<W> = None;
    for item in items {
        let (count, w) = eval(item)?;
        instances += count;
        if witness.is_none() {
            witness = w;
        }
    }
    Ok(ScanOutcome { instances, witness })
}

/// Parallel scan over items; the reduction keeps the lowest item index among
/// witnesses, matching the sequential order exactly.
#[cfg(feature = "parallel")]
pub fn scan_par<T, W, E>(
    items: &[T],
    eval: impl Fn(&T) -> Result<(usize, Option<W>), E> + Sync,
) -> Result<ScanOutcome<W>, E>
where
    T: Sync,
    W: Send,
    E: Send,
{
    let folded = items
        .par_iter()
        .enumerate()
        .map(|(idx, item)| {
            let (count, w) = eval(item)?;
            Ok((count, w.map(|w| (idx, w))))
        })
        .try_reduce(
            || (0usize, None),
            |(c1, w1), (c2, w2)| {
                let witness = match (w1, w2) {
                    (Some(a), Some(b)) => Some(if a.0 <= b.0 { a } else { b }),
                    (a, b) => a.or(b),
                };
                Ok((c1 + c2, witness))
            },
        )?;
    Ok(ScanOutcome {
        instances: folded.0,
        witness: folded.1.map(|(_, w)| w),
    })
}

/// Scan dispatch: data-parallel when the `parallel` feature is enabled,
/// sequential otherwise.
#[cfg(feature = "parallel")]
pub fn scan<T, W, E>(
    items: &[T],
    eval: impl Fn(&T) -> Result<(usize, Option<W>), E> + Sync,
) -> Result<ScanOutcome<W>, E>
where
    T: Sync,
    W: Send,
    E: Send,
{
    scan_par(items, eval)
}

/// Scan dispatch: data-parallel when the `parallel` feature is enabled,
/// sequential otherwise.
#[cfg(not(feature = "parallel"))]
pub fn scan<T, W, E>(
    items: &[T],
    eval: impl Fn(&T) -> Result<(usize, Option<W>), E> + Sync,
) -> Result<ScanOutcome<W>, E>
where
    T: Sync,
    W: Send,
    E: Send,
{
    scan_seq(items, eval)
}
