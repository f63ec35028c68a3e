//! Data-parallel helpers for parameter sweeps and worker partitions.
//!
//! With the `parallel` feature (default) these fan work out over rayon;
//! without it the same functions run sequentially. Results are returned in
//! input order either way, so outputs are identical across both modes and
//! any thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map a fallible function over a slice, in parallel when enabled,
/// preserving input order.
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

/// Sequential reference implementation of [`try_map`], kept callable with
/// the feature on so benchmarks can compare both code paths.
pub fn try_map_seq<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    F: Fn(&T) -> Result<U, E>,
{
    items.iter().map(f).collect()
}

/// Map an indexed worker function over `0..workers`, in parallel when
/// enabled, preserving worker order.
pub fn map_workers<U, F>(workers: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        (0..workers).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..workers).map(f).collect()
    }
}

/// Sequential reference implementation of [`map_workers`].
pub fn map_workers_seq<U, F>(workers: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..workers).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_maps_agree() {
        let xs: Vec<u64> = (0..100).collect();
        let f = |x: &u64| -> Result<u64, ()> { Ok(x * x) };
        assert_eq!(try_map(&xs, f).unwrap(), try_map_seq(&xs, f).unwrap());
        let g = |w: usize| w * 3 + 1;
        assert_eq!(map_workers(8, g), map_workers_seq(8, g));
    }

    #[test]
    fn errors_propagate() {
        let xs = [1u32, 2, 3];
        let out: Result<Vec<u32>, &str> =
            try_map(&xs, |&x| if x == 2 { Err("boom") } else { Ok(x) });
        assert_eq!(out, Err("boom"));
    }
}
