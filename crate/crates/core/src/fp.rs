//! Dense linear algebra over a prime field F_p.

/// Inverse of `a` modulo the prime `p`. Panics on zero.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    let a = a % p;
    assert!(a != 0, "inverse of zero");
    let (mut r0, mut r1) = (p as i128, a as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    t0.rem_euclid(p as i128) as u64
}

/// `a^e mod p`.
pub fn pow_mod(a: u64, mut e: u64, p: u64) -> u64 {
    let m = p as u128;
    let mut r = 1u128 % m;
    let mut b = a as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Table-driven F_p arithmetic for small dense eliminations (p < 256).
#[derive(Clone, Debug)]
pub struct SmallFp {
    p: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
}

impl SmallFp {
    pub fn new(p: u64) -> Self {
        assert!(p < 256);
        let pu = p as usize;
        let mut mul = vec![0u8; pu * pu];
        for a in 0..pu {
            for b in 0..pu {
                mul[a * pu + b] = (a * b % pu) as u8;
            }
        }
        let inv = (0..p).map(|a| if a == 0 { 0 } else { inv_mod(a, p) as u8 }).collect();
        SmallFp { p: pu, mul, inv }
    }

    /// Rank of a row-major `rows x cols` byte matrix; the buffer is clobbered.
    #[inline]
    pub fn rank(&self, m: &mut [u8], rows: usize, cols: usize) -> usize {
        let p = self.p;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(pr) = (r..rows).find(|&i| m[i * cols + c] != 0) else {
                continue;
            };
            if pr != r {
                for j in c..cols {
                    m.swap(pr * cols + j, r * cols + j);
                }
            }
            let iv = self.inv[m[r * cols + c] as usize] as usize * p;
            for j in c + 1..cols {
                m[r * cols + j] = self.mul[iv + m[r * cols + j] as usize];
            }
            for i in r + 1..rows {
                let e = m[i * cols + c] as usize;
                if e == 0 {
                    continue;
                }
                let row = e * p;
                for j in c + 1..cols {
                    let b = self.mul[row + m[r * cols + j] as usize];
                    let a = m[i * cols + j];
                    m[i * cols + j] = if a >= b { a - b } else { (a as usize + p - b as usize) as u8 };
                }
            }
            r += 1;
        }
        r
    }
}

/// Row-major matrix over F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl FpMat {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(p: u64, cols: usize, rows: &[Vec<u64>]) -> Self {
        let mut m = FpMat::zeros(p, 0, cols);
        for r in rows {
            m.push_row(r);
        }
        m
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v % self.p;
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, row: &[u64]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend(row.iter().map(|&v| v % self.p));
        self.rows += 1;
    }

    pub fn transpose(&self) -> FpMat {
        let mut t = FpMat::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let p = self.p as u128;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u128;
                for (a, b) in self.row(r).iter().zip(v) {
                    acc += (*a as u128) * (*b as u128);
                    if acc >= 1 << 120 {
                        acc %= p;
                    }
                }
                (acc % p) as u64
            })
            .collect()
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let t = other.transpose();
        let mut out = FpMat::zeros(self.p, self.rows, other.cols);
        for r in 0..self.rows {
            let v = t.mul_vec(self.row(r));
            out.data[r * other.cols..(r + 1) * other.cols].copy_from_slice(&v);
        }
        out
    }

    /// Reduces in place to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for j in 0..cols {
                    self.data.swap(pr * cols + j, r * cols + j);
                }
            }
            let inv = inv_mod(self.get(r, c), p);
            for j in c..cols {
                let v = self.data[r * cols + j];
                self.data[r * cols + j] = v * inv % p;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.data[i * cols + c];
                if f == 0 {
                    continue;
                }
                let nf = p - f;
                for j in c..cols {
                    let v = self.data[r * cols + j];
                    if v != 0 {
                        let x = &mut self.data[i * cols + j];
                        *x = (*x + nf * v) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Row-space basis in reduced echelon form.
    pub fn row_basis(&self) -> FpMat {
        let mut m = self.clone();
        let piv = m.rref();
        m.data.truncate(piv.len() * m.cols);
        m.rows = piv.len();
        m
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of the right kernel `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let piv = m.rref();
        let p = self.p;
        let mut is_piv = vec![false; self.cols];
        for &c in &piv {
            is_piv[c] = true;
        }
        let mut out = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_piv[c]) {
            let mut v = vec![0u64; self.cols];
            v[f] = 1;
            for (r, &c) in piv.iter().enumerate() {
                let a = m.get(r, f);
                v[c] = (p - a) % p;
            }
            out.push(v);
        }
        out
    }

    /// Particular solution of `A x = b` with free variables zero.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zeros(self.p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.data[r * (self.cols + 1) + c] = self.get(r, c);
            }
            aug.data[r * (self.cols + 1) + self.cols] = b[r] % self.p;
        }
        let piv = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u64; self.cols];
        for (r, &c) in piv.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMat::zeros(self.p, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let piv = aug.rref();
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut out = FpMat::zeros(self.p, n, n);
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = aug.get(r, n + c);
            }
        }
        Some(out)
    }
}

/// Intersection of two row spaces, returned as a row basis.
pub fn intersect_rowspaces(a: &FpMat, b: &FpMat) -> FpMat {
    let p = a.p();
    let cols = a.ncols();
    // Solve sum x_i a_i - sum y_j b_j = 0 over the stacked transposed system.
    let mut sys = FpMat::zeros(p, cols, a.nrows() + b.nrows());
    for c in 0..cols {
        for i in 0..a.nrows() {
            sys.set(c, i, a.get(i, c));
        }
        for j in 0..b.nrows() {
            sys.set(c, a.nrows() + j, (p - b.get(j, c)) % p);
        }
    }
    let mut out = FpMat::zeros(p, 0, cols);
    for k in sys.kernel() {
        let mut v = vec![0u64; cols];
        for i in 0..a.nrows() {
            if k[i] != 0 {
                for c in 0..cols {
                    v[c] = (v[c] + k[i] * a.get(i, c)) % p;
                }
            }
        }
        out.push_row(&v);
    }
    out.row_basis()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_roundtrip() {
        let m = FpMat::from_rows(7, 3, &[vec![1, 2, 3], vec![0, 1, 4], vec![5, 6, 0]]);
        let inv = m.inverse().unwrap();
        let id = m.mul(&inv);
        for r in 0..3 {
            for c in 0..3 {
                assert_eq!(id.get(r, c), (r == c) as u64);
            }
        }
    }

    #[test]
    fn kernel_is_annihilated() {
        let m = FpMat::from_rows(5, 4, &[vec![1, 2, 3, 4], vec![2, 4, 1, 3]]);
        let k = m.kernel();
        assert_eq!(k.len(), 4 - m.rank());
        for v in k {
            assert!(m.mul_vec(&v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = FpMat::from_rows(3, 2, &[vec![1, 1], vec![2, 2]]);
        assert!(m.solve(&[1, 2]).is_some());
        assert!(m.solve(&[1, 1]).is_none());
    }

    #[test]
    fn intersection_dimension() {
        let a = FpMat::from_rows(3, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = FpMat::from_rows(3, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = intersect_rowspaces(&a, &b);
        assert_eq!(i.nrows(), 1);
        assert_eq!(i.row(0), &[0, 1, 0]);
    }

    #[test]
    fn small_rank_matches_dense() {
        let sf = SmallFp::new(7);
        for k in 0..300u64 {
            let rows: Vec<Vec<u64>> = (0..4).map(|i| (0..5).map(|j| (k * 31 + i * 17 + j * j * k + i * j) % 7 * ((k + i) % 3).min(1)).collect()).collect();
            let mut buf: Vec<u8> = rows.iter().flatten().map(|&v| v as u8).collect();
            assert_eq!(sf.rank(&mut buf, 4, 5), FpMat::from_rows(7, 5, &rows).rank());
        }
    }

    #[test]
    fn primes() {
        assert!(is_prime(13) && !is_prime(25) && !is_prime(1));
        assert_eq!(prime_factors(360), vec![2, 3, 5]);
        assert_eq!(inv_mod(3, 7), 5);
        assert_eq!(pow_mod(3, 6, 7), 1);
    }
}
