use rayon::prelude::*;

/// Returns the result for the smallest outer index `i < n` for which `f`
/// yields a witness. The outer range is split across the rayon pool; `f`
/// scans its inner indices in ascending order, so the overall witness is the
/// lexicographically smallest tuple regardless of the worker count.
pub(crate) fn first_witness<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    (0..n).into_par_iter().find_map_first(f)
}
