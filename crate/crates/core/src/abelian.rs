use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("table has the wrong size")]
    Shape,
    #[error("no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("operation is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("operation is not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Invariant factors `d1 | d2 | ... ` of a direct sum of cyclic groups of the
/// given orders. Orders equal to 1 are dropped.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut prime_powers: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
    for &o in orders {
        let mut m = o;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                let mut q = 1;
                while m % p == 0 {
                    m /= p;
                    q *= p;
                }
                prime_powers.entry(p).or_default().push(q);
            }
            p += 1;
        }
    }
    let len = prime_powers.values().map(|v| v.len()).max().unwrap_or(0);
    let mut out = vec![1u64; len];
    for v in prime_powers.values_mut() {
        v.sort_unstable();
        let off = len - v.len();
        for (i, q) in v.iter().enumerate() {
            out[off + i] *= q;
        }
    }
    out
}

/// A finite abelian group given by its addition table, with a cyclic
/// decomposition computed from element orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    n: usize,
    add: Vec<u32>,
    zero: usize,
    neg: Vec<usize>,
    factors: Vec<u64>,
    basis: Vec<usize>,
    coords: Vec<Vec<u64>>,
    from_coords: BTreeMap<Vec<u64>, usize>,
}

impl FiniteAbelianGroup {
    pub fn from_table(n: usize, add: Vec<usize>) -> Result<Self, GroupError> {
        if add.len() != n * n || add.iter().any(|&x| x >= n) || n == 0 {
            return Err(GroupError::Shape);
        }
        let zero = (0..n).find(|&e| (0..n).all(|x| add[e * n + x] == x)).ok_or(GroupError::NoIdentity)?;
        let mut neg = vec![0; n];
        for x in 0..n {
            neg[x] = (0..n).find(|&y| add[x * n + y] == zero).ok_or(GroupError::NoInverse(x))?;
        }
        for x in 0..n {
            for y in 0..n {
                if add[x * n + y] != add[y * n + x] {
                    return Err(GroupError::NotCommutative(x, y));
                }
                for z in 0..n {
                    if add[add[x * n + y] * n + z] != add[x * n + add[y * n + z]] {
                        return Err(GroupError::NotAssociative(x, y, z));
                    }
                }
            }
        }
        let mut g = FiniteAbelianGroup {
            n,
            add: add.into_iter().map(|x| x as u32).collect(),
            zero,
            neg,
            factors: Vec::new(),
            basis: Vec::new(),
            coords: Vec::new(),
            from_coords: BTreeMap::new(),
        };
        g.decompose();
        Ok(g)
    }

    /// `⊕ Z/d_i` with elements listed in lexicographic coordinate order.
    pub fn product_of_cyclic(orders: &[u64]) -> Self {
        let n: usize = orders.iter().map(|&d| d as usize).product();
        let digits = |mut x: usize| {
            let mut d = vec![0usize; orders.len()];
            for i in (0..orders.len()).rev() {
                d[i] = x % orders[i] as usize;
                x /= orders[i] as usize;
            }
            d
        };
        let mut add = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (digits(a), digits(b));
                let mut x = 0;
                for i in 0..orders.len() {
                    x = x * orders[i] as usize + (da[i] + db[i]) % orders[i] as usize;
                }
                add[a * n + b] = x;
            }
        }
        Self::from_table(n, add).expect("cyclic product")
    }

    pub fn cyclic(d: u64) -> Self {
        Self::product_of_cyclic(&[d])
    }

    pub fn trivial() -> Self {
        Self::product_of_cyclic(&[])
    }

    fn decompose(&mut self) {
        let orders: Vec<u64> = (0..self.n).map(|x| self.element_order(x)).collect();
        // |G[p^k]| determines the multiplicity of each prime power.
        let mut cyclic = Vec::new();
        let mut m = self.n as u64;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                while m % p == 0 {
                    m /= p;
                }
                let mut prev_log = 0u32;
                let mut k = 1u32;
                let mut counts = Vec::new();
                loop {
                    let pk = p.pow(k);
                    let c = orders.iter().filter(|&&o| pk % o == 0 && is_power_of(o, p)).count() as u64;
                    let l = log_p(c, p);
                    if l == prev_log {
                        break;
                    }
                    counts.push(l - prev_log);
                    prev_log = l;
                    k += 1;
                }
                // counts[k-1] = number of cyclic factors of order >= p^k
                for (i, &c) in counts.iter().enumerate() {
                    let next = counts.get(i + 1).copied().unwrap_or(0);
                    for _ in 0..(c - next) {
                        cyclic.push(p.pow(i as u32 + 1));
                    }
                }
            }
            p += 1;
        }
        self.factors = invariant_factors(&cyclic);
        self.basis = self.find_basis(&orders);
        let mut coords = vec![Vec::new(); self.n];
        let mut from = BTreeMap::new();
        let r = self.factors.len();
        let mut c = vec![0u64; r];
        loop {
            let mut x = self.zero;
            for i in 0..r {
                x = self.add(x, self.mul(c[i], self.basis[i]));
            }
            coords[x] = c.clone();
            from.insert(c.clone(), x);
            let mut i = r;
            loop {
                if i == 0 {
                    self.coords = coords;
                    self.from_coords = from;
                    return;
                }
                i -= 1;
                c[i] += 1;
                if c[i] < self.factors[i] {
                    break;
                }
                c[i] = 0;
            }
        }
    }

    fn find_basis(&self, orders: &[u64]) -> Vec<usize> {
        let r = self.factors.len();
        let mut chosen: Vec<usize> = Vec::new();
        // Pick the largest factors first.
        let mut want: Vec<usize> = (0..r).rev().collect();
        want.truncate(r);
        let mut slots = vec![usize::MAX; r];
        fn span(g: &FiniteAbelianGroup, gens: &[usize]) -> usize {
            let mut seen = vec![false; g.n];
            seen[g.zero] = true;
            let mut stack = vec![g.zero];
            let mut count = 1;
            while let Some(x) = stack.pop() {
                for &s in gens {
                    let y = g.add(x, s);
                    if !seen[y] {
                        seen[y] = true;
                        count += 1;
                        stack.push(y);
                    }
                }
            }
            count
        }
        fn rec(
            g: &FiniteAbelianGroup,
            orders: &[u64],
            want: &[usize],
            depth: usize,
            chosen: &mut Vec<usize>,
            size: usize,
            slots: &mut Vec<usize>,
        ) -> bool {
            if depth == want.len() {
                return true;
            }
            let d = g.factors[want[depth]];
            for x in 0..g.n {
                if orders[x] != d {
                    continue;
                }
                chosen.push(x);
                let s = span(g, chosen);
                if s == size * d as usize {
                    slots[want[depth]] = x;
                    if rec(g, orders, want, depth + 1, chosen, s, slots) {
                        return true;
                    }
                }
                chosen.pop();
            }
            false
        }
        let ok = rec(self, orders, &want, 0, &mut chosen, 1, &mut slots);
        assert!(ok, "a basis always exists");
        slots
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    #[inline]
    pub fn add(&self, x: usize, y: usize) -> usize {
        self.add[x * self.n + y] as usize
    }

    #[inline]
    pub fn neg(&self, x: usize) -> usize {
        self.neg[x]
    }

    #[inline]
    pub fn sub(&self, x: usize, y: usize) -> usize {
        self.add(x, self.neg[y])
    }

    pub fn mul(&self, k: u64, x: usize) -> usize {
        let mut acc = self.zero;
        for _ in 0..k {
            acc = self.add(acc, x);
        }
        acc
    }

    /// Integer multiple for possibly negative `k`.
    pub fn zmul(&self, k: i64, x: usize) -> usize {
        let m = self.mul(k.unsigned_abs() % self.exponent().max(1), x);
        if k < 0 {
            self.neg(m)
        } else {
            m
        }
    }

    pub fn element_order(&self, x: usize) -> u64 {
        let mut k = 1;
        let mut y = x;
        while y != self.zero {
            y = self.add(y, x);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    /// Invariant factors `d1 | d2 | ...`, all greater than one.
    pub fn invariant_factors(&self) -> &[u64] {
        &self.factors
    }

    /// Basis elements of orders `invariant_factors()`.
    pub fn basis(&self) -> &[usize] {
        &self.basis
    }

    pub fn coords(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    /// Element with the given coordinates, reduced modulo the factors.
    pub fn from_coords(&self, c: &[u64]) -> usize {
        let key: Vec<u64> = c.iter().zip(&self.factors).map(|(&v, &d)| v % d).collect();
        self.from_coords[&key]
    }

    pub fn is_automorphism(&self, f: &[usize]) -> bool {
        if f.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &y in f {
            if y >= self.n || seen[y] {
                return false;
            }
            seen[y] = true;
        }
        (0..self.n).all(|x| (0..self.n).all(|y| f[self.add(x, y)] == self.add(f[x], f[y])))
    }
}

fn is_power_of(mut o: u64, p: u64) -> bool {
    while o % p == 0 {
        o /= p;
    }
    o == 1
}

fn log_p(mut c: u64, p: u64) -> u32 {
    let mut l = 0;
    while c > 1 {
        c /= p;
        l += 1;
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariant_factors_from_cyclic_orders() {
        assert_eq!(invariant_factors(&[2, 3]), vec![6]);
        assert_eq!(invariant_factors(&[2, 4, 2]), vec![2, 2, 4]);
        assert_eq!(invariant_factors(&[6, 4]), vec![2, 12]);
        assert_eq!(invariant_factors(&[1, 1]), Vec::<u64>::new());
    }

    #[test]
    fn decomposition_of_products() {
        for orders in [&[2u64, 2][..], &[4], &[2, 4], &[3, 3], &[6], &[2, 2, 2], &[]] {
            let g = FiniteAbelianGroup::product_of_cyclic(orders);
            assert_eq!(g.invariant_factors(), &invariant_factors(orders)[..]);
            for x in 0..g.order() {
                assert_eq!(g.from_coords(g.coords(x)), x);
            }
        }
    }

    #[test]
    fn rejects_nonabelian_table() {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let mut t = vec![0; 36];
        for a in 0..6 {
            for b in 0..6 {
                let (p, q) = (perms[a], perms[b]);
                let r = [q[p[0]], q[p[1]], q[p[2]]];
                t[a * 6 + b] = perms.iter().position(|x| *x == r).unwrap();
            }
        }
        assert!(matches!(FiniteAbelianGroup::from_table(6, t), Err(GroupError::NotCommutative(..))));
    }
}
