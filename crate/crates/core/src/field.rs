//! Arithmetic in F_{q^n} with q = p^h, realised as F_p[t]/(m(t)) of degree hn.
//!
//! Elements are packed base-p digit lanes inside a `u128`; lane `i` holds the
//! coefficient of `t^i`. Addition is lane-parallel. Multiplication uses
//! log/exp tables for small fields and schoolbook reduction otherwise.
//! Every F_p-linear map (Frobenius powers, multiplication by a constant,
//! compiled q-polynomials) is applied as one table lookup per digit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fp::{self, FpMat};

/// Fields up to this many elements get log/exp tables.
pub const DEFAULT_TABLE_LIMIT: u64 = 1 << 24;

/// Largest supported characteristic.
pub const MAX_P: u64 = 251;

/// An element of F_{q^n}. Only meaningful together with the context that made it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqnElem(pub(crate) u128);

impl FqnElem {
    pub const ZERO: FqnElem = FqnElem(0);
    pub const ONE: FqnElem = FqnElem(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Lane-parallel F_p vector arithmetic on packed words.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Lanes {
    pub p: u64,
    pub bits: u32,
    pub d: usize,
    pub mask: u128,
    ones: u128,
    splat_p: u128,
    bias: u128,
    pub full: u128,
}

impl Lanes {
    pub fn new(p: u64, d: usize) -> Self {
        let bits = (64 - (p - 1).leading_zeros()) + 1;
        let mask = (1u128 << bits) - 1;
        let mut ones = 0u128;
        for i in 0..d {
            ones |= 1u128 << (i as u32 * bits);
        }
        let full = if d as u32 * bits >= 128 { u128::MAX } else { (1u128 << (d as u32 * bits)) - 1 };
        let half = 1u128 << (bits - 1);
        Lanes {
            p,
            bits,
            d,
            mask,
            ones,
            splat_p: ones * p as u128,
            bias: ones * (half - p as u128),
            full,
        }
    }

    /// Number of lanes that fit in a u128.
    pub fn capacity(&self) -> usize {
        (128 / self.bits) as usize
    }

    #[inline(always)]
    pub fn digit(&self, x: u128, i: usize) -> u64 {
        ((x >> (i as u32 * self.bits)) & self.mask) as u64
    }

    #[inline(always)]
    fn reduce(&self, t: u128) -> u128 {
        let m = ((t + self.bias) >> (self.bits - 1)) & self.ones;
        t - m * self.p as u128
    }

    #[inline(always)]
    pub fn add(&self, x: u128, y: u128) -> u128 {
        self.reduce(x + y)
    }

    #[inline(always)]
    pub fn neg(&self, x: u128) -> u128 {
        self.reduce(self.splat_p - x)
    }

    #[inline(always)]
    pub fn sub(&self, x: u128, y: u128) -> u128 {
        self.add(x, self.neg(y))
    }

    pub fn scale(&self, x: u128, k: u64) -> u128 {
        let mut k = k % self.p;
        let mut acc = 0u128;
        let mut b = x;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, b);
            }
            b = self.add(b, b);
            k >>= 1;
        }
        acc
    }

    pub fn pack(&self, digits: &[u64]) -> u128 {
        let mut x = 0u128;
        for (i, &v) in digits.iter().enumerate().take(self.d) {
            x |= ((v % self.p) as u128) << (i as u32 * self.bits);
        }
        x
    }

    pub fn unpack(&self, x: u128) -> Vec<u64> {
        (0..self.d).map(|i| self.digit(x, i)).collect()
    }

    /// Rank over F_p of a set of packed vectors; the slice is clobbered.
    pub fn rank(&self, v: &mut [u128]) -> usize {
        let inv: Vec<u64> = (0..self.p).map(|a| if a == 0 { 0 } else { fp::inv_mod(a, self.p) }).collect();
        self.rank_with(v, &inv)
    }

    /// As [`Lanes::rank`] with a precomputed table of inverses mod p.
    #[inline]
    pub fn rank_with(&self, v: &mut [u128], inv: &[u64]) -> usize {
        let mut r = 0;
        for lane in 0..self.d {
            if r == v.len() {
                break;
            }
            let Some(i) = (r..v.len()).find(|&i| self.digit(v[i], lane) != 0) else {
                continue;
            };
            v.swap(i, r);
            let pivot = self.scale(v[r], inv[self.digit(v[r], lane) as usize]);
            for j in r + 1..v.len() {
                let e = self.digit(v[j], lane);
                if e != 0 {
                    v[j] = self.sub(v[j], self.scale(pivot, e));
                }
            }
            r += 1;
        }
        r
    }
}

/// An F_p-linear endomorphism of F_{p^D} applied by per-digit table lookup.
#[derive(Clone, Debug)]
pub struct FpLinearMap {
    lanes: Lanes,
    table: Vec<u128>,
}

impl FpLinearMap {
    /// Map sending `t^i` to `cols[i]`.
    pub fn from_columns(ctx: &FieldCtx, cols: &[FqnElem]) -> Self {
        let lanes = ctx.lanes;
        assert_eq!(cols.len(), lanes.d);
        let p = lanes.p as usize;
        let mut table = vec![0u128; lanes.d * p];
        for (i, c) in cols.iter().enumerate() {
            for v in 1..p {
                table[i * p + v] = lanes.add(table[i * p + v - 1], c.0);
            }
        }
        FpLinearMap { lanes, table }
    }

    #[inline]
    pub fn apply(&self, x: FqnElem) -> FqnElem {
        let l = &self.lanes;
        let p = l.p as usize;
        let mut acc = 0u128;
        let mut w = x.0;
        for i in 0..l.d {
            let v = (w & l.mask) as usize;
            w >>= l.bits;
            if v != 0 {
                acc = l.add(acc, self.table[i * p + v]);
            }
        }
        FqnElem(acc)
    }

    /// Image of `t^i`.
    pub fn column(&self, i: usize) -> FqnElem {
        FqnElem(self.table[i * self.lanes.p as usize + 1])
    }

    pub fn columns(&self) -> Vec<FqnElem> {
        (0..self.lanes.d).map(|i| self.column(i)).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, ctx: &FieldCtx, other: &FpLinearMap) -> FpLinearMap {
        let cols: Vec<FqnElem> = self.columns().into_iter().map(|c| other.apply(c)).collect();
        FpLinearMap::from_columns(ctx, &cols)
    }

    /// Rank over F_p.
    pub fn rank(&self) -> usize {
        let mut cols: Vec<u128> = (0..self.lanes.d).map(|i| self.column(i).0).collect();
        self.lanes.rank(&mut cols)
    }
}

struct Tables {
    exp: Vec<u128>,
    log: Vec<u32>,
}

/// Serializable field description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub p: u64,
    pub h: u32,
    pub n: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fq_basis: Option<Vec<u64>>,
}

/// Field context for F_{q^n}, q = p^h.
pub struct FieldCtx {
    p: u64,
    h: usize,
    n: usize,
    d: usize,
    q: u64,
    order: u128,
    modulus: Vec<u64>,
    pub(crate) lanes: Lanes,
    neg_mod: Vec<u64>,
    t_reduce: Vec<u128>,
    frob_p: Vec<FpLinearMap>,
    tables: Option<Tables>,
    subfield: Vec<FqnElem>,
    coord_inv: FpMat,
    abs_trace_t: Vec<u64>,
}

impl std::fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{{{}^{}}} (q={}, n={}, modulus={:?})", self.p, self.d, self.q, self.n, self.modulus)
    }
}

impl FieldCtx {
    /// Builds F_{q^n} with the given modulus (ascending coefficients, monic,
    /// degree hn) or the least irreducible one.
    pub fn new(p: u64, h: u32, n: u32, modulus: Option<&[u64]>) -> Result<Self> {
        Self::with_table_limit(p, h, n, modulus, DEFAULT_TABLE_LIMIT)
    }

    pub fn from_descriptor(d: &FieldDescriptor) -> Result<Self> {
        Self::new(d.p, d.h, d.n, d.modulus.as_deref())
    }

    pub fn with_table_limit(p: u64, h: u32, n: u32, modulus: Option<&[u64]>, table_limit: u64) -> Result<Self> {
        if !fp::is_prime(p) {
            return Err(Error::CompositeP(p));
        }
        if p > MAX_P {
            return Err(Error::FieldTooLarge(format!("characteristic {p} exceeds {MAX_P}")));
        }
        if h == 0 || n < 2 {
            return Err(Error::InvalidParameter(format!("need h >= 1 and n >= 2, got h={h}, n={n}")));
        }
        let d = (h * n) as usize;
        let mut order: u128 = 1;
        for _ in 0..d {
            order *= p as u128;
            if order > 1u128 << 64 {
                return Err(Error::FieldTooLarge(format!("{p}^{d} exceeds 2^64")));
            }
        }
        let q = p.pow(h);
        let modulus = match modulus {
            Some(m) => {
                if m.len() != d + 1 || m[d] % p != 1 {
                    return Err(Error::DegreeMismatch(format!(
                        "modulus must be monic of degree {d} ({} coefficients given)",
                        m.len()
                    )));
                }
                let m: Vec<u64> = m.iter().map(|c| c % p).collect();
                if !poly::is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None => default_modulus(p, d),
        };
        let lanes = Lanes::new(p, d);
        let neg_mod: Vec<u64> = modulus[..d].iter().map(|&c| (p - c) % p).collect();
        let t_reduce = (0..p).map(|c| lanes.pack(&modulus[..d].iter().map(|&m| m * c % p).collect::<Vec<_>>())).collect();
        let mut ctx = FieldCtx {
            p,
            h: h as usize,
            n: n as usize,
            d,
            q,
            order,
            modulus,
            lanes,
            neg_mod,
            t_reduce,
            frob_p: Vec::new(),
            tables: None,
            subfield: Vec::new(),
            coord_inv: FpMat::zeros(p, 0, 0),
            abs_trace_t: Vec::new(),
        };
        let id_cols: Vec<FqnElem> = (0..d).map(|i| ctx.t_pow(i)).collect();
        let frob1_cols: Vec<FqnElem> = id_cols.iter().map(|&x| ctx.pow(x, p as u128)).collect();
        let id = FpLinearMap::from_columns(&ctx, &id_cols);
        let f1 = FpLinearMap::from_columns(&ctx, &frob1_cols);
        let mut maps = vec![id];
        for j in 1..d {
            let next = maps[j - 1].then(&ctx, &f1);
            maps.push(next);
        }
        ctx.frob_p = maps;
        if order <= table_limit as u128 {
            ctx.tables = Some(ctx.build_tables());
        }
        ctx.subfield = ctx.compute_subfield();
        ctx.coord_inv = ctx.compute_coord_inverse();
        ctx.abs_trace_t = (0..d).map(|i| {
            let x = ctx.t_pow(i);
            let mut s = FqnElem::ZERO;
            for j in 0..d {
                s = ctx.add(s, ctx.frob_p(x, j));
            }
            lanes.digit(s.0, 0)
        }).collect();
        Ok(ctx)
    }

    fn build_tables(&self) -> Tables {
        let nm1 = (self.order - 1) as u64;
        let factors = fp::prime_factors(nm1);
        let mut g = FqnElem::ZERO;
        for enc in 2..self.order as u64 {
            let cand = self.decode_unchecked(enc);
            if factors.iter().all(|&r| self.pow_generic(cand, (nm1 / r) as u128) != FqnElem::ONE) {
                g = cand;
                break;
            }
        }
        if nm1 == 1 {
            g = FqnElem::ONE;
        }
        let mut exp = Vec::with_capacity(nm1 as usize);
        let mut log = vec![0u32; self.order as usize];
        let mut x = FqnElem::ONE;
        for i in 0..nm1 {
            exp.push(x.0);
            log[self.encode(x) as usize] = i as u32;
            x = self.mul_generic(x, g);
        }
        Tables { exp, log }
    }

    fn compute_subfield(&self) -> Vec<FqnElem> {
        let fq = &self.frob_p[self.h % self.d];
        let mut m = FpMat::zeros(self.p, self.d, self.d);
        for c in 0..self.d {
            let v = self.sub(fq.column(c), self.t_pow(c));
            for r in 0..self.d {
                m.set(r, c, self.lanes.digit(v.0, r));
            }
        }
        m.kernel().into_iter().map(|k| FqnElem(self.lanes.pack(&k))).collect()
    }

    fn compute_coord_inverse(&self) -> FpMat {
        let mut m = FpMat::zeros(self.p, self.d, self.d);
        for i in 0..self.n {
            for l in 0..self.h {
                let b = self.mul(self.subfield[l], self.t_pow(i));
                for r in 0..self.d {
                    m.set(r, i * self.h + l, self.lanes.digit(b.0, r));
                }
            }
        }
        m.inverse().expect("F_q-basis times F_p-basis of F_q spans F_{q^n}")
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn h(&self) -> usize {
        self.h
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn q(&self) -> u64 {
        self.q
    }
    /// Degree of F_{q^n} over F_p.
    pub fn degree(&self) -> usize {
        self.d
    }
    /// Number of elements, q^n.
    pub fn order(&self) -> u128 {
        self.order
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
    pub fn has_tables(&self) -> bool {
        self.tables.is_some()
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor {
            p: self.p,
            h: self.h as u32,
            n: self.n as u32,
            modulus: Some(self.modulus.clone()),
            fq_basis: Some(self.fq_basis().iter().map(|&b| self.encode(b)).collect()),
        }
    }

    pub fn zero(&self) -> FqnElem {
        FqnElem::ZERO
    }
    pub fn one(&self) -> FqnElem {
        FqnElem::ONE
    }
    /// The embedded image of `k mod p`.
    pub fn from_fp(&self, k: i64) -> FqnElem {
        FqnElem(k.rem_euclid(self.p as i64) as u128)
    }
    /// `t^i` for `i < D`.
    pub fn t_pow(&self, i: usize) -> FqnElem {
        assert!(i < self.d);
        FqnElem(1u128 << (i as u32 * self.lanes.bits))
    }

    /// Decodes the integer `sum digit_i p^i`.
    pub fn elem(&self, enc: u64) -> Result<FqnElem> {
        if enc as u128 >= self.order {
            return Err(Error::InvalidParameter(format!("element {enc} out of range (field has {} elements)", self.order)));
        }
        Ok(self.decode_unchecked(enc))
    }

    fn decode_unchecked(&self, mut enc: u64) -> FqnElem {
        let mut x = 0u128;
        for i in 0..self.d {
            x |= ((enc % self.p) as u128) << (i as u32 * self.lanes.bits);
            enc /= self.p;
        }
        FqnElem(x)
    }

    pub fn encode(&self, x: FqnElem) -> u64 {
        let mut acc = 0u64;
        for i in (0..self.d).rev() {
            acc = acc.wrapping_mul(self.p).wrapping_add(self.lanes.digit(x.0, i));
        }
        acc
    }

    pub fn digits(&self, x: FqnElem) -> Vec<u64> {
        self.lanes.unpack(x.0)
    }

    /// Writes the digits of `x` as bytes.
    #[inline]
    pub fn write_digits(&self, x: FqnElem, out: &mut [u8]) {
        let l = &self.lanes;
        let mut w = x.0;
        for o in out.iter_mut().take(self.d) {
            *o = (w & l.mask) as u8;
            w >>= l.bits;
        }
    }

    pub fn from_digits(&self, digits: &[u64]) -> FqnElem {
        FqnElem(self.lanes.pack(digits))
    }

    /// Successor in encoding order.
    pub fn next_elem(&self, x: FqnElem) -> Option<FqnElem> {
        let l = &self.lanes;
        let mut v = x.0;
        for i in 0..self.d {
            let dig = l.digit(v, i);
            let sh = i as u32 * l.bits;
            if dig + 1 < self.p {
                return Some(FqnElem(v + (1u128 << sh)));
            }
            v -= (dig as u128) << sh;
        }
        None
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FqnElem> + '_ {
        std::iter::successors(Some(FqnElem::ZERO), move |&x| self.next_elem(x))
    }

    #[inline]
    pub fn add(&self, x: FqnElem, y: FqnElem) -> FqnElem {
        FqnElem(self.lanes.add(x.0, y.0))
    }
    #[inline]
    pub fn sub(&self, x: FqnElem, y: FqnElem) -> FqnElem {
        FqnElem(self.lanes.sub(x.0, y.0))
    }
    #[inline]
    pub fn neg(&self, x: FqnElem) -> FqnElem {
        FqnElem(self.lanes.neg(x.0))
    }
    /// Multiplication by an integer scalar.
    pub fn scale(&self, x: FqnElem, k: i64) -> FqnElem {
        FqnElem(self.lanes.scale(x.0, k.rem_euclid(self.p as i64) as u64))
    }

    /// `x * t`.
    #[inline]
    pub fn mul_by_t(&self, x: FqnElem) -> FqnElem {
        let l = &self.lanes;
        let top = l.digit(x.0, self.d - 1);
        let shifted = (x.0 << l.bits) & l.full;
        FqnElem(l.sub(shifted, self.t_reduce[top as usize]))
    }

    #[inline]
    pub fn mul(&self, x: FqnElem, y: FqnElem) -> FqnElem {
        if let Some(t) = &self.tables {
            if x.0 == 0 || y.0 == 0 {
                return FqnElem::ZERO;
            }
            let m = t.exp.len();
            let i = t.log[self.encode(x) as usize] as usize + t.log[self.encode(y) as usize] as usize;
            return FqnElem(t.exp[if i >= m { i - m } else { i }]);
        }
        self.mul_generic(x, y)
    }

    fn mul_generic(&self, x: FqnElem, y: FqnElem) -> FqnElem {
        let d = self.d;
        let p = self.p;
        let l = &self.lanes;
        let mut a = [0u64; 64];
        let mut b = [0u64; 64];
        for i in 0..d {
            a[i] = l.digit(x.0, i);
            b[i] = l.digit(y.0, i);
        }
        let mut prod = [0u64; 128];
        for i in 0..d {
            if a[i] == 0 {
                continue;
            }
            for j in 0..d {
                prod[i + j] += a[i] * b[j];
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..d {
                prod[k - d + i] += c * self.neg_mod[i];
            }
        }
        let mut out = 0u128;
        for (i, v) in prod.iter().enumerate().take(d) {
            out |= ((v % p) as u128) << (i as u32 * l.bits);
        }
        FqnElem(out)
    }

    pub fn pow(&self, x: FqnElem, e: u128) -> FqnElem {
        if let Some(t) = &self.tables {
            if x.0 == 0 {
                return if e == 0 { FqnElem::ONE } else { FqnElem::ZERO };
            }
            let m = t.exp.len() as u128;
            let i = (t.log[self.encode(x) as usize] as u128 * (e % m)) % m;
            return FqnElem(t.exp[i as usize]);
        }
        self.pow_generic(x, e)
    }

    fn pow_generic(&self, x: FqnElem, mut e: u128) -> FqnElem {
        let mut r = FqnElem::ONE;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_generic(r, b);
            }
            b = self.mul_generic(b, b);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, x: FqnElem) -> FqnElem {
        assert!(!x.is_zero(), "inverse of zero");
        if let Some(t) = &self.tables {
            let m = t.exp.len();
            let l = t.log[self.encode(x) as usize] as usize;
            return FqnElem(t.exp[if l == 0 { 0 } else { m - l }]);
        }
        self.pow_generic(x, self.order - 2)
    }

    pub fn div(&self, x: FqnElem, y: FqnElem) -> FqnElem {
        self.mul(x, self.inv(y))
    }

    /// `x^{p^j}`.
    #[inline]
    pub fn frob_p(&self, x: FqnElem, j: usize) -> FqnElem {
        self.frob_p[j % self.d].apply(x)
    }

    /// `x^{q^s}`.
    #[inline]
    pub fn frob(&self, x: FqnElem, s: usize) -> FqnElem {
        self.frob_p[(s * self.h) % self.d].apply(x)
    }

    /// `x ↦ x^{q^s}` as an F_p-linear map.
    pub fn frob_map(&self, s: usize) -> &FpLinearMap {
        &self.frob_p[(s * self.h) % self.d]
    }

    pub fn frob_p_map(&self, j: usize) -> &FpLinearMap {
        &self.frob_p[j % self.d]
    }

    /// `x ↦ c x` as an F_p-linear map.
    pub fn mul_map(&self, c: FqnElem) -> FpLinearMap {
        let cols: Vec<FqnElem> = (0..self.d).map(|i| self.mul(c, self.t_pow(i))).collect();
        FpLinearMap::from_columns(self, &cols)
    }

    /// Norm to F_q.
    pub fn norm(&self, x: FqnElem) -> FqnElem {
        self.rel_norm(x, 1)
    }

    /// Norm from F_{q^n} to F_{q^m}; `m` must divide `n`.
    pub fn rel_norm(&self, x: FqnElem, m: usize) -> FqnElem {
        assert!(m > 0 && self.n % m == 0);
        let mut r = FqnElem::ONE;
        for k in 0..self.n / m {
            r = self.mul(r, self.frob(x, k * m));
        }
        r
    }

    /// Trace to F_q.
    pub fn trace(&self, x: FqnElem) -> FqnElem {
        let mut r = FqnElem::ZERO;
        for s in 0..self.n {
            r = self.add(r, self.frob(x, s));
        }
        r
    }

    /// Absolute trace to F_p.
    #[inline]
    pub fn abs_trace(&self, x: FqnElem) -> u64 {
        let mut acc = 0u64;
        for i in 0..self.d {
            acc += self.lanes.digit(x.0, i) * self.abs_trace_t[i];
        }
        acc % self.p
    }

    /// The F_q-basis `1, t, ..., t^{n-1}` of F_{q^n}.
    pub fn fq_basis(&self) -> Vec<FqnElem> {
        (0..self.n).map(|i| self.t_pow(i)).collect()
    }

    /// An F_p-basis of the subfield F_q.
    pub fn subfield_basis(&self) -> &[FqnElem] {
        &self.subfield
    }

    /// All elements of F_q.
    pub fn fq_elements(&self) -> Vec<FqnElem> {
        let mut out = Vec::with_capacity(self.q as usize);
        for mut c in 0..self.q {
            let mut x = FqnElem::ZERO;
            for g in &self.subfield {
                x = self.add(x, self.scale(*g, (c % self.p) as i64));
                c /= self.p;
            }
            out.push(x);
        }
        out
    }

    pub fn in_prime_field(&self, x: FqnElem) -> bool {
        x.0 >> self.lanes.bits == 0
    }

    pub fn in_subfield(&self, x: FqnElem) -> bool {
        self.frob(x, 1) == x
    }

    /// Coordinates in the F_q-basis `1, t, ..., t^{n-1}`.
    pub fn fq_coords(&self, x: FqnElem) -> Vec<FqnElem> {
        let c = self.coord_inv.mul_vec(&self.digits(x));
        (0..self.n)
            .map(|i| {
                let mut acc = FqnElem::ZERO;
                for l in 0..self.h {
                    acc = self.add(acc, self.scale(self.subfield[l], c[i * self.h + l] as i64));
                }
                acc
            })
            .collect()
    }

    /// F_p coordinates of an F_q element in the subfield basis.
    pub fn subfield_coords(&self, x: FqnElem) -> Vec<u64> {
        let c = self.coord_inv.mul_vec(&self.digits(x));
        c[..self.h].to_vec()
    }
}

fn default_modulus(p: u64, d: usize) -> Vec<u64> {
    let total = (p as u128).pow(d as u32);
    let mut c: u128 = 1;
    loop {
        let mut m = Vec::with_capacity(d + 1);
        let mut v = c;
        for _ in 0..d {
            m.push((v % p as u128) as u64);
            v /= p as u128;
        }
        m.push(1);
        if m[0] != 0 && poly::is_irreducible(&m, p) {
            return m;
        }
        c += 1;
        assert!(c < total, "an irreducible polynomial of every degree exists");
    }
}

/// Dense polynomials over F_p, ascending coefficients.
pub mod poly {
    use crate::fp::{inv_mod, prime_factors};

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
        trim(&mut r);
        let mut m = m.to_vec();
        trim(&mut m);
        let dm = m.len() - 1;
        let li = inv_mod(m[dm], p);
        while r.len() > dm {
            let k = r.len() - 1;
            let c = r[k] * li % p;
            for i in 0..=dm {
                r[k - dm + i] = (r[k - dm + i] + (p - c) * m[i]) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    pub fn powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = rem(&[1], m, p);
        let mut b = rem(a, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(&r, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        if let Some(&l) = x.last() {
            let li = inv_mod(l, p);
            for c in x.iter_mut() {
                *c = *c * li % p;
            }
        }
        x
    }

    fn sub_x(a: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        if r.len() < 2 {
            r.resize(2, 0);
        }
        r[1] = (r[1] + p - 1) % p;
        trim(&mut r);
        r
    }

    /// Rabin's irreducibility test for a monic polynomial.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let d = m.len() - 1;
        if d == 0 {
            return false;
        }
        if d == 1 {
            return true;
        }
        // x^{p^k} mod m for k = 1..d
        let mut pows = vec![vec![0u64, 1]];
        for _ in 0..d {
            let next = powmod(pows.last().unwrap(), p, m, p);
            pows.push(next);
        }
        if !sub_x(&pows[d], p).is_empty() {
            return false;
        }
        for r in prime_factors(d as u64) {
            let g = gcd(&sub_x(&pows[d / r as usize], p), m, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}
