//! Dense matrices over `Z/N` and a Smith normal form with transforms.
//!
//! All row and column operations are unimodular over the integers, so the
//! diagonal describes the same quotient as an integer computation would,
//! reduced modulo `N`.

use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::gcd;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(rows: usize, cols: &[Vec<u64>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[u64], n: u64) -> Vec<u64> {
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if a != 0 && v[j] != 0 {
                        acc = (acc + a * v[j]) % n;
                    }
                }
                acc
            })
            .collect()
    }
}

/// Extended gcd on nonnegative integers: `(g, s, t)` with `s·a + t·b = g`.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, s, t) = ext_gcd(b, a % b);
        (g, t, s - (a / b) * t)
    }
}

#[inline]
fn md(x: i64, n: u64) -> u64 {
    x.rem_euclid(n as i64) as u64
}

/// `U · A · V = D` with `D` diagonal (entries `diag`), `U` and `V`
/// invertible over `Z/N`. `u_inv` is the inverse of `U`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub modulus: u64,
    pub diag: Vec<u64>,
    pub u: Matrix,
    pub u_inv: Matrix,
    pub v: Matrix,
}

struct Work {
    n: u64,
    a: Matrix,
    u: Matrix,
    u_inv: Matrix,
    v: Matrix,
}

impl Work {
    /// rows (p, q) <- [[a, b], [c, d]] (rows p, q), determinant one.
    fn row_op(&mut self, p: usize, q: usize, m: [i64; 4]) {
        let n = self.n;
        let [a, b, c, d] = m.map(|x| md(x, n));
        for mat in [&mut self.a, &mut self.u] {
            for j in 0..mat.cols {
                let (x, y) = (mat.get(p, j), mat.get(q, j));
                if x == 0 && y == 0 {
                    continue;
                }
                mat.set(p, j, (a * x + b * y) % n);
                mat.set(q, j, (c * x + d * y) % n);
            }
        }
        // u_inv <- u_inv · [[d, -b], [-c, a]] on columns p, q
        let (ib, ic) = ((n - b) % n, (n - c) % n);
        let ui = &mut self.u_inv;
        for i in 0..ui.rows {
            let (x, y) = (ui.get(i, p), ui.get(i, q));
            if x == 0 && y == 0 {
                continue;
            }
            ui.set(i, p, (x * d + y * ic) % n);
            ui.set(i, q, (x * ib + y * a) % n);
        }
    }

    /// cols (p, q) <- (col p, col q) · [[a, b], [c, d]], determinant one.
    fn col_op(&mut self, p: usize, q: usize, m: [i64; 4]) {
        let n = self.n;
        let [a, b, c, d] = m.map(|x| md(x, n));
        for mat in [&mut self.a, &mut self.v] {
            for i in 0..mat.rows {
                let (x, y) = (mat.get(i, p), mat.get(i, q));
                if x == 0 && y == 0 {
                    continue;
                }
                mat.set(i, p, (x * a + y * c) % n);
                mat.set(i, q, (x * b + y * d) % n);
            }
        }
    }

    fn swap_rows(&mut self, p: usize, q: usize) {
        if p != q {
            self.row_op(p, q, [0, 1, -1, 0]);
            // fix the sign on row q
            self.scale_row_neg(q);
        }
    }

    fn scale_row_neg(&mut self, q: usize) {
        let n = self.n;
        for mat in [&mut self.a, &mut self.u] {
            for j in 0..mat.cols {
                let x = mat.get(q, j);
                mat.set(q, j, (n - x) % n);
            }
        }
        let ui = &mut self.u_inv;
        for i in 0..ui.rows {
            let x = ui.get(i, q);
            ui.set(i, q, (n - x) % n);
        }
    }

    fn swap_cols(&mut self, p: usize, q: usize) {
        if p != q {
            for mat in [&mut self.a, &mut self.v] {
                for i in 0..mat.rows {
                    let (x, y) = (mat.get(i, p), mat.get(i, q));
                    mat.set(i, p, y);
                    mat.set(i, q, x);
                }
            }
        }
    }
}

pub fn smith(a: &Matrix, n: u64) -> Smith {
    assert!(n >= 1 && n < (1 << 31));
    let mut w = Work {
        n,
        a: Matrix { rows: a.rows, cols: a.cols, data: a.data.iter().map(|&x| x % n).collect() },
        u: Matrix::identity(a.rows),
        u_inv: Matrix::identity(a.rows),
        v: Matrix::identity(a.cols),
    };
    let r = a.rows.min(a.cols);
    let mut diag = vec![0u64; r];
    for t in 0..r {
        // smallest nonzero entry in the remaining block as pivot
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..w.a.rows {
            for j in t..w.a.cols {
                let x = w.a.get(i, j);
                if x != 0 && best.map_or(true, |(b, _, _)| x < b) {
                    best = Some((x, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut changed = false;
            for i in t + 1..w.a.rows {
                let y = w.a.get(i, t);
                if y == 0 {
                    continue;
                }
                changed = true;
                let x = w.a.get(t, t);
                if x != 0 && y % x == 0 {
                    w.row_op(t, i, [1, 0, -((y / x) as i64), 1]);
                } else {
                    let (g, s, tt) = ext_gcd(x as i64, y as i64);
                    w.row_op(t, i, [s, tt, -(y as i64) / g, x as i64 / g]);
                }
            }
            for j in t + 1..w.a.cols {
                let y = w.a.get(t, j);
                if y == 0 {
                    continue;
                }
                changed = true;
                let x = w.a.get(t, t);
                if x != 0 && y % x == 0 {
                    w.col_op(t, j, [1, -((y / x) as i64), 0, 1]);
                } else {
                    let (g, s, tt) = ext_gcd(x as i64, y as i64);
                    w.col_op(t, j, [s, -(y as i64) / g, tt, x as i64 / g]);
                }
            }
            if !changed {
                break;
            }
        }
        diag[t] = w.a.get(t, t);
    }
    Smith { modulus: n, diag, u: w.u, u_inv: w.u_inv, v: w.v }
}

/// Generators of `{x : A x = 0}` over `Z/N`.
pub fn kernel(a: &Matrix, n: u64) -> Vec<Vec<u64>> {
    let s = smith(a, n);
    let mut out = Vec::new();
    for j in 0..a.cols {
        let d = if j < s.diag.len() { s.diag[j] } else { 0 };
        let g = gcd(d, n);
        let scale = n / g;
        if scale == n {
            continue;
        }
        let col: Vec<u64> = (0..a.cols).map(|i| s.v.get(i, j) * scale % n).collect();
        if col.iter().any(|&x| x != 0) {
            out.push(col);
        }
    }
    out
}

fn inv_mod(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (g, s, _) = ext_gcd(a as i64, m as i64);
    debug_assert_eq!(g, 1);
    md(s, m)
}

impl Smith {
    /// A solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[u64]) -> Option<Vec<u64>> {
        let n = self.modulus;
        let ub = self.u.mul_vec(b, n);
        let cols = self.v.rows;
        let mut y = vec![0u64; cols];
        for (i, &c) in ub.iter().enumerate() {
            let d = if i < self.diag.len() { self.diag[i] } else { 0 };
            if i >= cols || d == 0 {
                if c != 0 {
                    return None;
                }
                continue;
            }
            let g = gcd(d, n);
            if c % g != 0 {
                return None;
            }
            let m = n / g;
            y[i] = (c / g) % m * inv_mod((d / g) % m, m) % m;
        }
        Some(self.v.mul_vec(&y, n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_mul(a: &Matrix, b: &Matrix, n: u64) -> Matrix {
        let mut c = Matrix::zeros(a.rows, b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = 0;
                for k in 0..a.cols {
                    acc = (acc + a.get(i, k) * b.get(k, j)) % n;
                }
                c.set(i, j, acc);
            }
        }
        c
    }

    #[test]
    fn smith_transforms_are_consistent() {
        let n = 12;
        let a = Matrix { rows: 3, cols: 4, data: vec![2, 4, 6, 8, 3, 9, 0, 1, 5, 7, 11, 2] };
        let s = smith(&a, n);
        let d = mat_mul(&mat_mul(&s.u, &a, n), &s.v, n);
        for i in 0..3 {
            for j in 0..4 {
                if i != j {
                    assert_eq!(d.get(i, j), 0);
                }
            }
        }
        assert_eq!(mat_mul(&s.u, &s.u_inv, n), Matrix::identity(3));
    }

    #[test]
    fn kernel_and_solve() {
        let n = 4;
        let a = Matrix { rows: 1, cols: 2, data: vec![2, 0] };
        let k = kernel(&a, n);
        for v in &k {
            assert_eq!(a.mul_vec(v, n), vec![0]);
        }
        // kernel is {x0 even} x Z/4: 2 * 4 = 8 elements
        let mut span = alloc::collections::BTreeSet::new();
        for c0 in 0..4u64 {
            for c1 in 0..4u64 {
                let x: Vec<u64> = (0..2)
                    .map(|i| (c0 * k.first().map_or(0, |v| v[i]) + c1 * k.get(1).map_or(0, |v| v[i])) % n)
                    .collect();
                span.insert(x);
            }
        }
        assert_eq!(span.len(), 8);
        let s = smith(&a, n);
        assert!(s.solve(&[1]).is_none());
        let x = s.solve(&[2]).unwrap();
        assert_eq!(a.mul_vec(&x, n), vec![2]);
    }
}
