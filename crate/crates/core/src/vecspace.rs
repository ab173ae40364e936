//! Subspaces of F_{q^n}^m in reduced row echelon form.

use crate::field::{FieldCtx, FqnElem};

/// Reduces `rows` in place to reduced row echelon form, dropping zero rows.
/// Returns the pivot columns.
pub fn rref(ctx: &FieldCtx, rows: &mut Vec<Vec<FqnElem>>) -> Vec<usize> {
    let m = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(pr, r);
        let inv = ctx.inv(rows[r][c]);
        for v in rows[r].iter_mut().skip(c) {
            *v = ctx.mul(*v, inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c];
            for j in c..m {
                if !pivot_row[j].is_zero() {
                    row[j] = ctx.sub(row[j], ctx.mul(f, pivot_row[j]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(pivots.len());
    pivots
}

pub fn rank(ctx: &FieldCtx, rows: &[Vec<FqnElem>]) -> usize {
    let mut r = rows.to_vec();
    rref(ctx, &mut r).len()
}

/// Basis of `{x : sum_j a_ij x_j = 0 for all i}` in `m` unknowns.
pub fn kernel(ctx: &FieldCtx, a: &[Vec<FqnElem>], m: usize) -> Vec<Vec<FqnElem>> {
    let mut r = a.to_vec();
    let piv = rref(ctx, &mut r);
    let mut is_piv = vec![false; m];
    for &c in &piv {
        is_piv[c] = true;
    }
    let mut out = Vec::new();
    for f in (0..m).filter(|&c| !is_piv[c]) {
        let mut v = vec![FqnElem::ZERO; m];
        v[f] = FqnElem::ONE;
        for (i, &c) in piv.iter().enumerate() {
            v[c] = ctx.neg(r[i][f]);
        }
        out.push(v);
    }
    out
}

/// A solution of `A x = b`, if any.
pub fn solve(ctx: &FieldCtx, a: &[Vec<FqnElem>], b: &[FqnElem]) -> Option<Vec<FqnElem>> {
    let m = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<FqnElem>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut v = r.clone();
            v.push(bi);
            v
        })
        .collect();
    let piv = rref(ctx, &mut aug);
    if piv.last() == Some(&m) {
        return None;
    }
    let mut x = vec![FqnElem::ZERO; m];
    for (i, &c) in piv.iter().enumerate() {
        x[c] = aug[i][m];
    }
    Some(x)
}

pub fn dot(ctx: &FieldCtx, a: &[FqnElem], b: &[FqnElem]) -> FqnElem {
    let mut acc = FqnElem::ZERO;
    for (x, y) in a.iter().zip(b) {
        acc = ctx.add(acc, ctx.mul(*x, *y));
    }
    acc
}

/// A linear subspace of F_{q^n}^m stored as its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<FqnElem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(ctx: &FieldCtx, ambient: usize, rows: &[Vec<FqnElem>]) -> Self {
        let mut basis: Vec<Vec<FqnElem>> = rows.to_vec();
        assert!(basis.iter().all(|r| r.len() == ambient));
        let pivots = rref(ctx, &mut basis);
        Subspace { ambient, basis, pivots }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(ctx: &FieldCtx, ambient: usize) -> Self {
        let rows: Vec<Vec<FqnElem>> = (0..ambient).map(|i| unit(ambient, i)).collect();
        Self::span(ctx, ambient, &rows)
    }

    /// Common zero set of the given linear forms.
    pub fn from_equations(ctx: &FieldCtx, ambient: usize, eqs: &[Vec<FqnElem>]) -> Self {
        Self::span(ctx, ambient, &kernel(ctx, eqs, ambient))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<FqnElem>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// A basis of the linear forms vanishing on the subspace.
    pub fn annihilator(&self, ctx: &FieldCtx) -> Vec<Vec<FqnElem>> {
        kernel(ctx, &self.basis, self.ambient)
    }

    /// Residue of `v` after elimination against the basis.
    pub fn reduce(&self, ctx: &FieldCtx, v: &[FqnElem]) -> Vec<FqnElem> {
        let mut w = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = w[c];
            if f.is_zero() {
                continue;
            }
            for j in c..self.ambient {
                w[j] = ctx.sub(w[j], ctx.mul(f, row[j]));
            }
        }
        w
    }

    pub fn contains(&self, ctx: &FieldCtx, v: &[FqnElem]) -> bool {
        self.reduce(ctx, v).iter().all(|x| x.is_zero())
    }

    /// Coordinates of a member vector with respect to the echelon basis.
    pub fn coordinates(&self, v: &[FqnElem]) -> Vec<FqnElem> {
        self.pivots.iter().map(|&c| v[c]).collect()
    }

    pub fn intersect(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        let mut eqs = self.annihilator(ctx);
        eqs.extend(other.annihilator(ctx));
        Subspace::from_equations(ctx, self.ambient, &eqs)
    }

    pub fn join(&self, ctx: &FieldCtx, other: &Subspace) -> Subspace {
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(ctx, self.ambient, &rows)
    }

    pub fn is_subspace_of(&self, ctx: &FieldCtx, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(ctx, v))
    }

    /// Image under a vector map applied to each basis vector.
    pub fn map(&self, ctx: &FieldCtx, f: impl Fn(&[FqnElem]) -> Vec<FqnElem>) -> Subspace {
        let rows: Vec<Vec<FqnElem>> = self.basis.iter().map(|v| f(v)).collect();
        Subspace::span(ctx, self.ambient, &rows)
    }
}

pub fn unit(m: usize, i: usize) -> Vec<FqnElem> {
    let mut v = vec![FqnElem::ZERO; m];
    v[i] = FqnElem::ONE;
    v
}
