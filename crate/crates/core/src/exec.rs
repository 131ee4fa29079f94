//! Sequential or data-parallel execution of index-addressed work.
//!
//! Work items are always produced and combined in index order, so results do
//! not depend on the thread count.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the current rayon pool when the `parallel` feature is on; otherwise sequential.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Maps `f` over `range` with per-worker state from `init`, keeping index order.
    pub(crate) fn map_init<S, T, I, F>(self, range: std::ops::Range<usize>, init: I, f: F) -> Vec<T>
    where
        T: Send,
        I: Fn() -> S + Sync + Send,
        F: Fn(&mut S, usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return range.into_par_iter().map_init(init, |s, i| f(s, i)).collect();
        }
        let mut state = init();
        range.map(|i| f(&mut state, i)).collect()
    }
}
