//! F_q-linear sets `L_f = {<(x, f(x))> : x != 0}` of rank n on PG(1, q^n).

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::field::{FieldCtx, FqnElem};
use crate::fp::SmallFp;
use crate::linpoly::LinPoly;
use crate::sweep::{self, Budget};

/// A point of PG(1, q^n): `<(1, m)>` or `<(0, 1)>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinePoint {
    Affine(FqnElem),
    Infinity,
}

/// Number of points of each positive weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightSpectrum {
    pub rank: usize,
    pub counts: BTreeMap<usize, u64>,
}

impl WeightSpectrum {
    pub fn size(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn max_weight(&self) -> usize {
        self.counts.keys().copied().max().unwrap_or(0)
    }

    /// `sum_w count_w (q^w - 1)`; equals `q^rank - 1` for any rank-`rank` linear set.
    pub fn mass(&self, q: u64) -> u128 {
        self.counts.iter().map(|(&w, &c)| c as u128 * ((q as u128).pow(w as u32) - 1)).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScatterVerdict {
    Scattered,
    NotScattered { witness: FqnElem, weight: usize },
}

impl ScatterVerdict {
    pub fn is_scattered(&self) -> bool {
        matches!(self, ScatterVerdict::Scattered)
    }
}

/// Precomputed images `f(t^i)` for fast kernel dimension of `f - m x`.
pub(crate) struct WeightKernel<'a> {
    ctx: &'a FieldCtx,
    images: Vec<FqnElem>,
    small: SmallFp,
}

pub(crate) struct WeightBuf {
    m: Vec<u8>,
}

impl<'a> WeightKernel<'a> {
    pub fn new(ctx: &'a FieldCtx, f: &LinPoly) -> Self {
        let images = f.compile(ctx).columns();
        WeightKernel { ctx, images, small: SmallFp::new(ctx.p()) }
    }

    pub fn buffer(&self) -> WeightBuf {
        let d = self.images.len();
        WeightBuf { m: vec![0u8; d * d] }
    }

    /// `dim_{F_q} ker(f - m x)`.
    #[inline]
    pub fn weight(&self, m: FqnElem, buf: &mut WeightBuf) -> usize {
        let ctx = self.ctx;
        let d = self.images.len();
        let mut y = m;
        for (i, &img) in self.images.iter().enumerate() {
            ctx.write_digits(ctx.sub(img, y), &mut buf.m[i * d..(i + 1) * d]);
            y = ctx.mul_by_t(y);
        }
        ctx.n() - self.small.rank(&mut buf.m, d, d) / ctx.h()
    }
}

pub fn point_weight(ctx: &FieldCtx, f: &LinPoly, pt: LinePoint) -> usize {
    match pt {
        LinePoint::Infinity => 0,
        LinePoint::Affine(m) => {
            let k = WeightKernel::new(ctx, f);
            let mut buf = k.buffer();
            k.weight(m, &mut buf)
        }
    }
}

pub fn weight_spectrum(ctx: &FieldCtx, f: &LinPoly, budget: &Budget) -> Result<WeightSpectrum> {
    budget.check(ctx.order())?;
    let k = WeightKernel::new(ctx, f);
    let n = ctx.n();
    let raw = sweep::fold(
        ctx,
        || k.buffer(),
        vec![0u64; n + 1],
        |buf, acc, m| acc[k.weight(m, buf)] += 1,
        |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect(),
    );
    let counts = raw.into_iter().enumerate().skip(1).filter(|&(_, c)| c > 0).collect();
    Ok(WeightSpectrum { rank: n, counts })
}

/// Scatteredness by the m-sweep, stopping at the first point of weight at least 2.
pub fn is_scattered(ctx: &FieldCtx, f: &LinPoly, budget: &Budget) -> Result<ScatterVerdict> {
    budget.check(ctx.order())?;
    let k = WeightKernel::new(ctx, f);
    let hit = sweep::find_first(ctx, || k.buffer(), |buf, m| {
        let w = k.weight(m, buf);
        (w >= 2).then_some(w)
    });
    Ok(match hit {
        None => ScatterVerdict::Scattered,
        Some((witness, weight)) => ScatterVerdict::NotScattered { witness, weight },
    })
}

/// Largest divisor `l` of n with `U_f` closed under F_{q^l} and all weights divisible by `l`.
pub fn max_field_of_linearity(ctx: &FieldCtx, f: &LinPoly, budget: &Budget) -> Result<usize> {
    let n = ctx.n();
    let ws = weight_spectrum(ctx, f, budget)?;
    let best = (1..=n)
        .rev()
        .filter(|l| n % l == 0)
        .find(|&l| {
            let closed = f.coeffs().iter().enumerate().all(|(i, c)| i % l == 0 || c.is_zero());
            closed && ws.counts.keys().all(|w| w % l == 0)
        })
        .unwrap_or(1);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Spectrum by enumerating x and grouping f(x)/x.
    fn spectrum_by_x(ctx: &FieldCtx, f: &LinPoly) -> BTreeMap<usize, u64> {
        let mut by_m: HashMap<FqnElem, u64> = HashMap::new();
        for x in ctx.elements().skip(1) {
            *by_m.entry(ctx.div(f.eval(ctx, x), x)).or_default() += 1;
        }
        let mut out = BTreeMap::new();
        for c in by_m.values() {
            let mut w = 0;
            let mut v = c + 1;
            while v > 1 {
                assert_eq!(v % ctx.q(), 0);
                v /= ctx.q();
                w += 1;
            }
            *out.entry(w).or_default() += 1;
        }
        out
    }

    #[test]
    fn spectra_match_x_enumeration() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let b = Budget::default();
        for enc in [[0u64, 1, 0, 1], [0, 0, 1, 0], [5, 7, 0, 11], [0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0]] {
            let f = LinPoly::from_encodings(&ctx, &enc).unwrap();
            let s = weight_spectrum(&ctx, &f, &b).unwrap();
            assert_eq!(s.counts, spectrum_by_x(&ctx, &f), "{enc:?}");
            assert_eq!(s.mass(3), 80);
        }
        let ctx2 = FieldCtx::new(2, 2, 3, None).unwrap();
        let f = LinPoly::from_encodings(&ctx2, &[3, 9, 17]).unwrap();
        assert_eq!(weight_spectrum(&ctx2, &f, &b).unwrap().counts, spectrum_by_x(&ctx2, &f));
    }

    #[test]
    fn trivial_cases() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let b = Budget::default();
        let zero = LinPoly::zero(&ctx);
        assert_eq!(point_weight(&ctx, &zero, LinePoint::Affine(FqnElem::ZERO)), 4);
        assert_eq!(point_weight(&ctx, &zero, LinePoint::Infinity), 0);
        assert_eq!(weight_spectrum(&ctx, &zero, &b).unwrap().counts, BTreeMap::from([(4, 1)]));
        let xq = LinPoly::monomial(&ctx, 1, FqnElem::ONE);
        assert_eq!(weight_spectrum(&ctx, &xq, &b).unwrap().counts, BTreeMap::from([(1, 40)]));
        assert!(is_scattered(&ctx, &xq, &b).unwrap().is_scattered());
        let id = LinPoly::identity(&ctx);
        assert_eq!(is_scattered(&ctx, &id, &b).unwrap(), ScatterVerdict::NotScattered { witness: FqnElem::ONE, weight: 4 });
        assert_eq!(max_field_of_linearity(&ctx, &xq, &b).unwrap(), 1);
        assert_eq!(max_field_of_linearity(&ctx, &id, &b).unwrap(), 4);
        assert_eq!(max_field_of_linearity(&ctx, &LinPoly::monomial(&ctx, 2, FqnElem::ONE), &b).unwrap(), 2);
    }

    #[test]
    fn budget_respected() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let f = LinPoly::identity(&ctx);
        assert!(is_scattered(&ctx, &f, &Budget::new(80)).is_err());
        assert!(is_scattered(&ctx, &f, &Budget { limit: 80, force: true }).is_ok());
    }

    #[test]
    fn adjoint_preserves_scatteredness_exhaustive_binomials() {
        let ctx = FieldCtx::new(3, 1, 4, None).unwrap();
        let b = Budget::default();
        for a in 0..4 {
            for c in 0..4 {
                if a == c {
                    continue;
                }
                for lam in ctx.elements().skip(1) {
                    let f = LinPoly::from_terms(&ctx, &[(a, FqnElem::ONE), (c, lam)]);
                    let s = is_scattered(&ctx, &f, &b).unwrap().is_scattered();
                    assert_eq!(s, is_scattered(&ctx, &f.adjoint(&ctx), &b).unwrap().is_scattered());
                    let ws = weight_spectrum(&ctx, &f, &b).unwrap();
                    assert_eq!(s, ws.size() == 40);
                    assert_eq!(s, ws.max_weight() <= 1);
                }
            }
        }
    }
}
