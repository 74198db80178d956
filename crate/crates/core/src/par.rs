//! Corpus-level data parallelism. With the `parallel` feature (default) the
//! map runs on rayon; otherwise it runs sequentially. Output order is the
//! input order either way, so reports are identical across modes.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExecMode {
    Sequential,
    Parallel,
}

impl ExecMode {
    pub fn default_mode() -> Self {
        if cfg!(feature = "parallel") {
            ExecMode::Parallel
        } else {
            ExecMode::Sequential
        }
    }
}

#[cfg(feature = "parallel")]
pub fn ordered_map<T, U, F>(items: Vec<T>, mode: ExecMode, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Parallel => items.into_par_iter().map(f).collect(),
        ExecMode::Sequential => items.into_iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn ordered_map<T, U, F>(items: Vec<T>, _mode: ExecMode, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}
