//! Execution strategy for data-parallel sweeps.
//!
//! Results are always returned in input order, so the parallel and the
//! sequential strategy produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Parallel when the `parallel` feature is on, sequential otherwise.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().map(f).collect(),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().map(f).collect(),
        }
    }

    /// Returns the first item (in input order) for which `f` yields `Some`.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        match self {
            Exec::Sequential => items.iter().find_map(f),
            #[cfg(feature = "parallel")]
            Exec::Parallel => items.par_iter().find_map_first(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<u32> = (0..1000).collect();
        let seq = Exec::Sequential.map(&items, |x| x * x);
        let def = Exec::default().map(&items, |x| x * x);
        assert_eq!(seq, def);
        let first = Exec::default().find_map_first(&items, |&x| (x > 10 && x % 7 == 0).then_some(x));
        assert_eq!(first, Some(14));
    }
}
