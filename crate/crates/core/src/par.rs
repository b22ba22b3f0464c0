//! Deterministic max/min reductions, data-parallel when the `parallel`
//! feature is on.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// `max_i f(x_i)`, or the first error. NaN values are propagated.
pub(crate) fn max_over<T, E, F>(xs: &[T], f: F) -> Result<f64, E>
where
    T: Sync,
    E: Send,
    F: Fn(&T) -> Result<f64, E> + Sync + Send,
{
    let pick = |a: f64, b: f64| if a.is_nan() || b.is_nan() { f64::NAN } else { a.max(b) };
    #[cfg(feature = "parallel")]
    {
        xs.par_iter().map(&f).try_reduce(|| f64::NEG_INFINITY, |a, b| Ok(pick(a, b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        xs.iter().map(&f).try_fold(f64::NEG_INFINITY, |a, b| Ok(pick(a, b?)))
    }
}

/// `(min_i f(x_i), argmin)` with ties broken by lowest index.
pub(crate) fn argmin_over<T, E, F>(xs: &[T], f: F) -> Result<Option<(f64, usize)>, E>
where
    T: Sync,
    E: Send,
    F: Fn(&T) -> Result<f64, E> + Sync + Send,
{
    let better = |a: Option<(f64, usize)>, b: Option<(f64, usize)>| match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => {
            if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) || x.0.is_nan() {
                Some(y)
            } else {
                Some(x)
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        xs.par_iter()
            .enumerate()
            .map(|(i, x)| f(x).map(|v| Some((v, i))))
            .try_reduce(|| None, |a, b| Ok(better(a, b)))
    }
    #[cfg(not(feature = "parallel"))]
    {
        xs.iter()
            .enumerate()
            .try_fold(None, |acc, (i, x)| Ok(better(acc, Some((f(x)?, i)))))
    }
}
