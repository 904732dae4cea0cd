//! Row-parallel raster construction.
//!
//! Every filter in the crate writes one output row at a time from immutable
//! inputs. With the `parallel` feature rows are distributed over rayon;
//! without it they are filled in order on the calling thread. Pixel values
//! do not depend on which thread computes the row.

/// Fills a `width * height` row-major buffer by calling `fill_row(y, row)`
/// for every row.
pub(crate) fn build_rows<F>(width: usize, height: usize, fill_row: F) -> Vec<f64>
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    let mut data = vec![0.0; width * height];
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(y, row)| fill_row(y, row));
    }
    #[cfg(not(feature = "parallel"))]
    {
        data.chunks_mut(width).enumerate().for_each(|(y, row)| fill_row(y, row));
    }
    data
}

/// Maps `f` over `items`, in parallel when the feature is enabled. Output
/// order matches input order.
pub(crate) fn map_items<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
