//! Minimal deterministic fork-join helpers.
//!
//! Work is split into contiguous chunks, one per worker, and results are
//! reassembled in input order, so the output never depends on scheduling.

/// Applies `f` to every item, using up to `workers` threads, preserving order.
pub fn map_ordered<T, U, F>(items: &[T], workers: usize, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers <= 1 || items.len() <= 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(workers);
    let mut pieces: Vec<Vec<U>> = Vec::new();
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|slice| scope.spawn(|| slice.iter().map(&f).collect::<Vec<U>>()))
            .collect();
        pieces = handles.into_iter().map(|h| h.join().expect("worker panicked")).collect();
    });
    pieces.into_iter().flatten().collect()
}
