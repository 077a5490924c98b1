use alloc::vec::Vec;

use num_traits::{One, Signed};

use crate::rational::Q;

/// `{ lo * x^i : i = 0..=ceil(log_x(hi / lo)) }`, in increasing order.
///
/// When `lo > hi` the exponent range is empty unless `lo < hi * x`, in which
/// case the set is `{lo}`. Panics unless `lo > 0` and `x > 1`.
pub fn geom(lo: &Q, hi: &Q, x: &Q) -> Vec<Q> {
    assert!(
        lo.is_positive() && *x > Q::one(),
        "geom needs lo > 0 and x > 1"
    );
    if lo > hi && *lo >= hi * x {
        return Vec::new();
    }
    let mut out = alloc::vec![lo.clone()];
    let mut v = lo.clone();
    while v < *hi {
        v = &v * x;
        out.push(v.clone());
    }
    out
}

/// Largest element of the sorted set `grid` that is at most `a`.
pub fn round_down<'a>(a: &Q, grid: &'a [Q]) -> Option<&'a Q> {
    let pos = grid.partition_point(|g| g <= a);
    pos.checked_sub(1).map(|p| &grid[p])
}

/// Smallest element of the sorted set `grid` that is at least `a`.
pub fn round_up<'a>(a: &Q, grid: &'a [Q]) -> Option<&'a Q> {
    let pos = grid.partition_point(|g| g < a);
    grid.get(pos)
}
