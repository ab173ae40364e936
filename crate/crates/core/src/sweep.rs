//! Budgeted parallel enumeration of F_{q^n}.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FqnElem};

/// Default cap on the number of enumerated items per sweep.
pub const DEFAULT_LIMIT: u128 = 1 << 30;

const CHUNK: u64 = 1 << 14;

/// How much enumeration a caller is willing to pay for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: u128,
    pub force: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { limit: DEFAULT_LIMIT, force: false }
    }
}

impl Budget {
    pub fn new(limit: u128) -> Self {
        Budget { limit, force: false }
    }

    pub fn forced() -> Self {
        Budget { limit: u128::MAX, force: true }
    }

    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.limit && !self.force {
            return Err(Error::BudgetExceeded { needed, budget: self.limit });
        }
        Ok(())
    }
}

fn chunks(ctx: &FieldCtx) -> (u64, u64) {
    let order = ctx.order() as u64;
    (order, order.div_ceil(CHUNK))
}

fn chunk_iter(ctx: &FieldCtx, k: u64, order: u64) -> impl Iterator<Item = FqnElem> + '_ {
    let start = k * CHUNK;
    let len = CHUNK.min(order - start);
    let first = ctx.elem(start).expect("chunk start in range");
    std::iter::successors(Some(first), move |&x| ctx.next_elem(x)).take(len as usize)
}

/// First `x` in encoding order for which `f` yields a value.
pub fn find_first<T, S, I, F>(ctx: &FieldCtx, init: I, f: F) -> Option<(FqnElem, T)>
where
    T: Send,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, FqnElem) -> Option<T> + Sync,
{
    let (order, nchunks) = chunks(ctx);
    (0..nchunks).into_par_iter().find_map_first(|k| {
        let mut state = init();
        chunk_iter(ctx, k, order).find_map(|x| f(&mut state, x).map(|v| (x, v)))
    })
}

/// Per-chunk fold over all elements, combined with `merge`.
pub fn fold<A, S, I, F, M>(ctx: &FieldCtx, init: I, zero: A, f: F, merge: M) -> A
where
    A: Send + Sync + Clone,
    I: Fn() -> S + Sync,
    F: Fn(&mut S, &mut A, FqnElem) + Sync,
    M: Fn(A, A) -> A + Sync + Send,
{
    let (order, nchunks) = chunks(ctx);
    (0..nchunks)
        .into_par_iter()
        .map(|k| {
            let mut state = init();
            let mut acc = zero.clone();
            for x in chunk_iter(ctx, k, order) {
                f(&mut state, &mut acc, x);
            }
            acc
        })
        .reduce(|| zero.clone(), &merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_visits_everything_once() {
        let ctx = FieldCtx::new(5, 1, 7, None).unwrap();
        let total = fold(&ctx, || (), 0u64, |_, a, x| *a += ctx.encode(x), |a, b| a + b);
        let n = 5u64.pow(7);
        assert_eq!(total, n * (n - 1) / 2);
    }

    #[test]
    fn find_first_is_canonical() {
        let ctx = FieldCtx::new(3, 1, 10, None).unwrap();
        let hit = find_first(&ctx, || (), |_, x| (ctx.encode(x) % 20000 == 19999).then_some(()));
        assert_eq!(ctx.encode(hit.unwrap().0), 19999);
    }

    #[test]
    fn budget_check() {
        assert!(Budget::new(10).check(11).is_err());
        assert!(Budget { limit: 10, force: true }.check(11).is_ok());
    }
}
