//! Sequential or data-parallel evaluation of independent tasks.

/// How independent tasks are scheduled. Results always come back in input order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    Parallel,
}

impl Default for Mode {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Mode::Parallel
        } else {
            Mode::Sequential
        }
    }
}

/// `items.map(f)` in input order. Without the `parallel` feature this is always sequential.
pub fn par_map<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        Mode::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_kept() {
        let v: Vec<u64> = (0..100).collect();
        let a = par_map(Mode::Sequential, &v, |x| x * x);
        let b = par_map(Mode::Parallel, &v, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(a[7], 49);
    }
}
