//! Brute-force ground truth: a census of product bundles by table filling,
//! and group cohomology from the normalized bar complex.
//!
//! Neither routine uses the cocycle machinery or the Smith normal form.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::extension::{extract_cocycle, Band, ExtensionContext, ExtensionGroupoid};
use crate::groupoid::{Arr, FiniteGroupoid, Obj};

/// Largest `|A¹|·|K¹|` the census accepts.
pub const CENSUS_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("instance size {size} exceeds the cap {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("modulus {0} is not a prime power")]
    NotPrimePower(u64),
    #[error("module data does not match the group")]
    ShapeMismatch,
    #[error("action is not a left module action")]
    NotAModule,
    #[error("census table failed validation: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug)]
pub struct CensusClass {
    pub band: Band,
    /// Indices into [`CensusResult::extensions`].
    pub members: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CensusResult {
    pub description: String,
    pub band_filter: Option<Band>,
    /// Every composition table found, in search order. Tables use the
    /// labeling with `(α, 1_x)·(1_{tα}, ξ) = (α, ξ)`.
    pub extensions: Vec<ExtensionGroupoid>,
    /// Partition by isomorphism over `K` fixing the fiber.
    pub classes: Vec<CensusClass>,
}

impl CensusResult {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn classes_with_band(&self, band: &Band) -> usize {
        self.classes.iter().filter(|c| c.band == *band).count()
    }
}

struct Census<'a> {
    a: &'a FiniteGroupoid,
    k: &'a FiniteGroupoid,
    nk1: usize,
    /// `(c, ξ)` for every object `c` of `A` and non-identity `ξ`.
    basics: Vec<(Obj, Arr)>,
    basic_of: Vec<usize>,
    /// A-object of the target of `(1_c, ξ)`, indexed `c·|K¹| + ξ`.
    t: Vec<Option<Obj>>,
    /// `rows[b][q]` is `(1_c, ξ)·q` for the `b`-th basic arrow.
    rows: Vec<Vec<Option<usize>>>,
}

impl<'a> Census<'a> {
    fn arrow(&self, al: Arr, xi: Arr) -> usize {
        al * self.nk1 + xi
    }

    fn split(&self, p: usize) -> (Arr, Arr) {
        (p / self.nk1, p % self.nk1)
    }

    fn t_of(&self, c: Obj, xi: Arr) -> Option<Obj> {
        if self.k.is_unit(xi) {
            Some(c)
        } else {
            self.t[c * self.nk1 + xi]
        }
    }

    fn src(&self, p: usize) -> (Obj, Obj) {
        let (al, xi) = self.split(p);
        (self.a.src(al), self.k.src(xi))
    }

    fn tgt(&self, p: usize) -> Option<(Obj, Obj)> {
        let (al, xi) = self.split(p);
        Some((self.t_of(self.a.tgt(al), xi)?, self.k.tgt(xi)))
    }

    /// `(α, 1)·(γ, ζ) = (αγ, ζ)`.
    fn left_kernel(&self, al: Arr, p: usize) -> usize {
        let (ga, ze) = self.split(p);
        self.arrow(self.a.mul(al, ga), ze)
    }

    fn product(&self, p: usize, q: usize) -> Option<usize> {
        let (al, xi) = self.split(p);
        if self.k.is_unit(xi) {
            return Some(self.left_kernel(al, q));
        }
        let b = self.basic_of[self.a.tgt(al) * self.nk1 + xi];
        let v = self.rows[b][q]?;
        Some(self.left_kernel(al, v))
    }

    /// Arrows with the given source whose target is known.
    fn from(&self, o: (Obj, Obj)) -> impl Iterator<Item = usize> + '_ {
        let (x, y) = o;
        self.a.arrows_from(x).iter().flat_map(move |&al| self.k.arrows_from(y).iter().map(move |&xi| self.arrow(al, xi)))
    }

    /// Targets of assigned entries agree with the targets of their right
    /// factors, where both are known.
    fn targets_ok(&self) -> bool {
        for (b, &(c, xi)) in self.basics.iter().enumerate() {
            let Some(tc) = self.t[c * self.nk1 + xi] else { continue };
            for q in self.from((tc, self.k.tgt(xi))) {
                if let Some(v) = self.rows[b][q] {
                    if let (Some(tv), Some(tq)) = (self.tgt(v), self.tgt(q)) {
                        if tv != tq {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `(b·x)·y = b·(x·y)` on every basic `b` where all four products are
    /// known. Together with the fixed left kernel multiplication this covers
    /// every triple.
    fn assoc_ok(&self) -> bool {
        for &(c, xi) in &self.basics {
            let b = self.arrow(self.a.unit(c), xi);
            let Some(tb) = self.tgt(b) else { continue };
            for x in self.from(tb) {
                let Some(tx) = self.tgt(x) else { continue };
                let bx = self.product(b, x);
                for y in self.from(tx) {
                    let (Some(bx), Some(xy)) = (bx, self.product(x, y)) else { continue };
                    if let (Some(l), Some(r)) = (self.product(bx, y), self.product(b, xy)) {
                        if l != r {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&mut self, b: usize, out: &mut Vec<(Vec<Option<Obj>>, Vec<Vec<Option<usize>>>)>, limit: usize) -> Result<(), OracleError> {
        if b == self.basics.len() {
            if out.len() >= limit {
                return Err(OracleError::CapExceeded { size: out.len() + 1, cap: limit });
            }
            out.push((self.t.clone(), self.rows.clone()));
            return Ok(());
        }
        let (c, xi) = self.basics[b];
        let size = self.a.arrows_from(c).len();
        for tc in 0..self.a.n_objects() {
            if self.a.arrows_from(tc).len() != size {
                continue;
            }
            self.t[c * self.nk1 + xi] = Some(tc);
            let own = self.arrow(self.a.unit(c), xi);
            let row_keys: Vec<usize> = self.from((tc, self.k.tgt(xi))).collect();
            // the unit entry is fixed
            let unit_q = self.arrow(self.a.unit(tc), self.k.unit(self.k.tgt(xi)));
            self.rows[b][unit_q] = Some(own);
            if self.targets_ok() && self.assoc_ok() {
                self.fill(b, &row_keys, 0, out, limit)?;
            }
            for &q in &row_keys {
                self.rows[b][q] = None;
            }
        }
        self.t[c * self.nk1 + xi] = None;
        Ok(())
    }

    fn fill(
        &mut self,
        b: usize,
        keys: &[usize],
        i: usize,
        out: &mut Vec<(Vec<Option<Obj>>, Vec<Vec<Option<usize>>>)>,
        limit: usize,
    ) -> Result<(), OracleError> {
        if i == keys.len() {
            return self.search(b + 1, out, limit);
        }
        let q = keys[i];
        if self.rows[b][q].is_some() {
            return self.fill(b, keys, i + 1, out, limit);
        }
        let (c, xi) = self.basics[b];
        let eta = self.split(q).1;
        let xe = self.k.mul(xi, eta);
        let cands: Vec<usize> = self.a.arrows_from(c).iter().map(|&g| self.arrow(g, xe)).collect();
        for v in cands {
            if keys[..i].iter().any(|&q2| self.rows[b][q2] == Some(v)) || keys.iter().any(|&q2| self.rows[b][q2] == Some(v)) {
                continue;
            }
            self.rows[b][q] = Some(v);
            if self.targets_ok() && self.assoc_ok() {
                self.fill(b, keys, i + 1, out, limit)?;
            }
            self.rows[b][q] = None;
        }
        Ok(())
    }
}

/// Every product bundle with fiber `A` over `K` (labels normalized as in
/// [`CensusResult::extensions`]), optionally restricted to one band, and
/// partitioned by isomorphism over `K` fixing the fiber.
pub fn census_extensions(ctx: &ExtensionContext, band: Option<&Band>, limit: usize) -> Result<CensusResult, OracleError> {
    let (a, k) = (&ctx.a, &ctx.k);
    let size = a.n_arrows() * k.n_arrows();
    if size > CENSUS_CAP {
        return Err(OracleError::CapExceeded { size, cap: CENSUS_CAP });
    }
    let nk1 = k.n_arrows();
    let mut basics = Vec::new();
    let mut basic_of = vec![usize::MAX; a.n_objects() * nk1];
    for xi in 0..nk1 {
        if k.is_unit(xi) {
            continue;
        }
        for c in 0..a.n_objects() {
            basic_of[c * nk1 + xi] = basics.len();
            basics.push((c, xi));
        }
    }
    let nb = basics.len();
    let mut st = Census {
        a,
        k,
        nk1,
        basics,
        basic_of,
        t: vec![None; a.n_objects() * nk1],
        rows: vec![vec![None; size]; nb],
    };
    let mut raw = Vec::new();
    st.search(0, &mut raw, limit)?;

    let mut extensions = Vec::new();
    let mut classes: Vec<CensusClass> = Vec::new();
    for (t, rows) in raw {
        st.t = t;
        st.rows = rows;
        let Some(g) = table_groupoid(&st)? else { continue };
        let ext = ExtensionGroupoid::from_identifiers(ctx, g).map_err(|e| OracleError::Invalid(format!("{e}")))?;
        let gc = extract_cocycle(ctx, &ext).map_err(|e| OracleError::Invalid(format!("{e}")))?;
        let b = Band::of_lifting(ctx, &gc.lambda);
        if band.is_some_and(|f| *f != b) {
            continue;
        }
        let idx = extensions.len();
        let hit = classes.iter().position(|cl| cl.band == b && fiber_isomorphic(a, k, &extensions[cl.members[0]], &ext));
        match hit {
            Some(i) => classes[i].members.push(idx),
            None => classes.push(CensusClass { band: b, members: vec![idx] }),
        }
        extensions.push(ext);
    }
    Ok(CensusResult {
        description: format!("fiber {} arrows, base {} arrows", a.n_arrows(), k.n_arrows()),
        band_filter: band.cloned(),
        extensions,
        classes,
    })
}

/// Assembles and validates a filled table; `None` when some arrow has no
/// inverse.
fn table_groupoid(st: &Census) -> Result<Option<FiniteGroupoid>, OracleError> {
    let (a, k) = (st.a, st.k);
    let nk0 = k.n_objects();
    let n = a.n_arrows() * st.nk1;
    let mut objects = Vec::new();
    for x in 0..a.n_objects() {
        for y in 0..nk0 {
            objects.push(format!("({},{})", a.object_id(x), k.object_id(y)));
        }
    }
    let oid = |o: (Obj, Obj)| o.0 * nk0 + o.1;
    let mut arrows = Vec::with_capacity(n);
    for p in 0..n {
        let (al, xi) = st.split(p);
        let tg = st.tgt(p).ok_or_else(|| OracleError::Invalid(String::from("unassigned target")))?;
        arrows.push((format!("({},{})", a.arrow_id(al), k.arrow_id(xi)), oid(st.src(p)), oid(tg)));
    }
    let units: Vec<usize> = (0..a.n_objects()).flat_map(|x| (0..nk0).map(move |y| (x, y))).map(|(x, y)| st.arrow(a.unit(x), k.unit(y))).collect();
    let mut inverses = Vec::with_capacity(n);
    for p in 0..n {
        let s = st.src(p);
        let u = st.arrow(a.unit(s.0), k.unit(s.1));
        let tp = st.tgt(p).unwrap();
        match st.from(tp).find(|&q| st.product(p, q) == Some(u)) {
            Some(q) => inverses.push(q),
            None => return Ok(None),
        }
    }
    let g = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| st.product(p, q).expect("complete table"));
    match g {
        Ok((g, _)) => Ok(Some(g)),
        Err(_) => Ok(None),
    }
}

/// Isomorphism over `K` fixing objects and fiber arrows, for normalized
/// labelings: the image of `(α, ξ)` is `(α, 1)·Φ(1_{tα}, ξ)`.
fn fiber_isomorphic(a: &FiniteGroupoid, k: &FiniteGroupoid, e1: &ExtensionGroupoid, e2: &ExtensionGroupoid) -> bool {
    let (g1, g2) = (&e1.groupoid, &e2.groupoid);
    let obj2 = |o: Obj| {
        let (x, y) = e1.object_pairs[o];
        e2.object(x, y)
    };
    let basics: Vec<(Obj, Arr)> = (0..k.n_arrows()).filter(|&xi| !k.is_unit(xi)).flat_map(|xi| (0..a.n_objects()).map(move |c| (c, xi))).collect();
    let nb = basics.len();
    let bidx = |c: Obj, xi: Arr| basics.iter().position(|&b| b == (c, xi)).unwrap();
    let image = |assign: &[Option<Arr>], p: Arr| -> Option<Arr> {
        let (al, xi) = e1.arrow_pairs[p];
        if k.is_unit(xi) {
            return Some(e2.arrow(al, xi));
        }
        let phi_b = assign[bidx(a.tgt(al), xi)]?;
        Some(g2.mul(e2.arrow(al, k.unit(k.src(xi))), phi_b))
    };
    fn rec(
        i: usize,
        nb: usize,
        assign: &mut Vec<Option<Arr>>,
        cands: &[Vec<Arr>],
        ok: &dyn Fn(&[Option<Arr>]) -> bool,
    ) -> bool {
        if i == nb {
            return true;
        }
        for &c in &cands[i] {
            assign[i] = Some(c);
            if ok(assign) && rec(i + 1, nb, assign, cands, ok) {
                return true;
            }
        }
        assign[i] = None;
        false
    }
    let cands: Vec<Vec<Arr>> = basics
        .iter()
        .map(|&(c, xi)| {
            let b = e1.arrow(a.unit(c), xi);
            g2.hom(obj2(g1.src(b)), obj2(g1.tgt(b))).filter(|&q| e2.arrow_pairs[q].1 == xi).collect()
        })
        .collect();
    let ok = |assign: &[Option<Arr>]| -> bool {
        for p in 0..g1.n_arrows() {
            let Some(fp) = image(assign, p) else { continue };
            if g2.src(fp) != obj2(g1.src(p)) || g2.tgt(fp) != obj2(g1.tgt(p)) {
                return false;
            }
            for &q in g1.arrows_from(g1.tgt(p)) {
                if let (Some(fq), Some(fpq)) = (image(assign, q), image(assign, g1.mul(p, q))) {
                    if g2.compose(fp, fq) != Some(fpq) {
                        return false;
                    }
                }
            }
        }
        true
    };
    let mut assign = vec![None; nb];
    rec(0, nb, &mut assign, &cands, &ok)
}

/// A finite group with a left module `(ℤ/p^k)^r`; `action[g]` is an `r×r`
/// matrix (row-major) and `ρ(g)ρ(h) = ρ(gh)`.
#[derive(Clone, Debug)]
pub struct GroupModule {
    pub order: usize,
    pub mul: Vec<usize>,
    pub identity: usize,
    pub modulus: u64,
    pub rank: usize,
    pub action: Vec<Vec<u64>>,
}

impl GroupModule {
    pub fn new(order: usize, mul: Vec<usize>, modulus: u64, rank: usize, action: Vec<Vec<u64>>) -> Result<Self, OracleError> {
        if mul.len() != order * order || action.len() != order || action.iter().any(|m| m.len() != rank * rank) {
            return Err(OracleError::ShapeMismatch);
        }
        prime_power(modulus)?;
        let identity = (0..order).find(|&e| (0..order).all(|x| mul[e * order + x] == x)).ok_or(OracleError::ShapeMismatch)?;
        let gm = GroupModule { order, mul, identity, modulus, rank, action };
        for g in 0..order {
            for h in 0..order {
                let lhs = gm.compose_mats(&gm.action[g], &gm.action[h]);
                if lhs != gm.action[gm.mul[g * order + h]] {
                    return Err(OracleError::NotAModule);
                }
            }
        }
        Ok(gm)
    }

    pub fn trivial(order: usize, mul: Vec<usize>, modulus: u64, rank: usize) -> Result<Self, OracleError> {
        let mut id = vec![0; rank * rank];
        for i in 0..rank {
            id[i * rank + i] = 1 % modulus;
        }
        Self::new(order, mul, modulus, rank, vec![id; order])
    }

    fn compose_mats(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        let r = self.rank;
        let n = self.modulus;
        let mut z = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                z[i * r + j] = (0..r).map(|t| x[i * r + t] * y[t * r + j]).sum::<u64>() % n;
            }
        }
        z
    }
}

fn prime_power(n: u64) -> Result<(u64, u32), OracleError> {
    if n < 2 {
        return Err(OracleError::NotPrimePower(n));
    }
    let p = (2..=n).find(|d| n % d == 0).unwrap();
    let mut m = n;
    let mut k = 0;
    while m % p == 0 {
        m /= p;
        k += 1;
    }
    if m != 1 {
        return Err(OracleError::NotPrimePower(n));
    }
    Ok((p, k))
}

/// Row echelon over the local ring `ℤ/p^k`; the span of the input equals
/// the span of the pivot rows, and for every column `j` the rows with zeros
/// in columns `< j` span the part of the span vanishing there.
struct Echelon {
    /// `(pivot column, valuation, row)`.
    pivots: Vec<(usize, u32, Vec<u64>)>,
    /// Rows left over after every column in `0..cols_done` was processed.
    rest: Vec<Vec<u64>>,
}

fn valuation(x: u64, p: u64, k: u32) -> u32 {
    if x == 0 {
        return k;
    }
    let mut v = 0;
    let mut y = x;
    while y % p == 0 {
        y /= p;
        v += 1;
    }
    v
}

fn inv_unit(u: u64, n: u64) -> u64 {
    (1..n).find(|&x| u * x % n == 1).expect("unit")
}

fn echelon(rows: Vec<Vec<u64>>, cols: usize, p: u64, k: u32) -> Echelon {
    let n = p.pow(k);
    let mut rest: Vec<Vec<u64>> = rows.into_iter().filter(|r| r.iter().any(|&x| x != 0)).collect();
    let mut pivots = Vec::new();
    for j in 0..cols {
        let best = rest.iter().enumerate().filter(|(_, r)| r[j] != 0).min_by_key(|(_, r)| valuation(r[j], p, k)).map(|(i, _)| i);
        let Some(bi) = best else { continue };
        let piv = rest.swap_remove(bi);
        let v = valuation(piv[j], p, k);
        let u_inv = inv_unit(piv[j] / p.pow(v), n);
        for r in rest.iter_mut() {
            if r[j] == 0 {
                continue;
            }
            // r[j] = p^v · w, subtract w·u⁻¹·piv
            let f = (r[j] / p.pow(v)) * u_inv % n;
            for t in 0..r.len() {
                r[t] = (r[t] + (n - f * piv[t] % n)) % n;
            }
        }
        if v > 0 {
            let extra: Vec<u64> = piv.iter().map(|&x| x * p.pow(k - v) % n).collect();
            if extra.iter().any(|&x| x != 0) {
                rest.push(extra);
            }
        }
        rest.retain(|r| r.iter().any(|&x| x != 0));
        pivots.push((j, v, piv));
    }
    Echelon { pivots, rest }
}

/// `log_p` of the order of the span.
fn span_log(rows: Vec<Vec<u64>>, cols: usize, p: u64, k: u32) -> u32 {
    echelon(rows, cols, p, k).pivots.iter().map(|&(_, v, _)| k - v).sum()
}

/// Invariant factors of `H^n(G; M)` from the normalized bar complex.
pub fn group_cohomology_oracle(m: &GroupModule, n: usize, max_positions: usize) -> Result<Vec<u64>, OracleError> {
    let (p, k) = prime_power(m.modulus)?;
    let nm = m.modulus;
    let r = m.rank;
    let g = m.order;
    let nonid: Vec<usize> = (0..g).filter(|&x| x != m.identity).collect();
    let tuples = |d: usize| -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for _ in 0..d {
            out = out.into_iter().flat_map(|t| nonid.iter().map(move |&x| {
                let mut t2 = t.clone();
                t2.push(x);
                t2
            })).collect();
        }
        out
    };
    let (tn, tn1, tprev) = (tuples(n), tuples(n + 1), if n > 0 { tuples(n - 1) } else { Vec::new() });
    if tn.len() * r > max_positions || tn1.len() * r > max_positions {
        return Err(OracleError::CapExceeded { size: tn1.len() * r, cap: max_positions });
    }
    let index = |ts: &Vec<Vec<usize>>, t: &[usize]| -> Option<usize> {
        if t.iter().any(|&x| x == m.identity) {
            None
        } else {
            ts.iter().position(|s| s.as_slice() == t)
        }
    };
    // image of the basis cochain (position i, coordinate j) under d, as a
    // vector over the degree d+1 positions
    let coboundary_of = |d: usize, src: &Vec<Vec<usize>>, dst: &Vec<Vec<usize>>, i: usize, j: usize| -> Vec<u64> {
        let mut out = vec![0u64; dst.len() * r];
        for (ti, t) in dst.iter().enumerate() {
            // g1 · f(g2..)
            if index(src, &t[1..]) == Some(i) {
                let a = &m.action[t[0]];
                for row in 0..r {
                    out[ti * r + row] = (out[ti * r + row] + a[row * r + j]) % nm;
                }
            }
            for s in 1..=d {
                let mut f = t[..s - 1].to_vec();
                f.push(m.mul[t[s - 1] * g + t[s]]);
                f.extend_from_slice(&t[s + 1..]);
                if index(src, &f) == Some(i) {
                    let sign = if s % 2 == 1 { nm - 1 } else { 1 };
                    out[ti * r + j] = (out[ti * r + j] + sign) % nm;
                }
            }
            if index(src, &t[..d]) == Some(i) {
                let sign = if (d + 1) % 2 == 1 { nm - 1 } else { 1 };
                out[ti * r + j] = (out[ti * r + j] + sign) % nm;
            }
        }
        out
    };
    let cols_n = tn.len() * r;
    let cols_n1 = tn1.len() * r;
    // cocycles: kernel of d_n via rows [d(e_i) | e_i]
    let mut aug = Vec::new();
    for i in 0..tn.len() {
        for j in 0..r {
            let mut row = coboundary_of(n, &tn, &tn1, i, j);
            let mut e = vec![0u64; cols_n];
            e[i * r + j] = 1;
            row.extend(e);
            aug.push(row);
        }
    }
    let ech = echelon(aug, cols_n1, p, k);
    let mut z: Vec<Vec<u64>> = ech.pivots.iter().filter(|(c, _, _)| *c >= cols_n1).map(|(_, _, row)| row[cols_n1..].to_vec()).collect();
    z.extend(ech.rest.iter().map(|row| row[cols_n1..].to_vec()));
    // coboundaries
    let b: Vec<Vec<u64>> = if n == 0 {
        Vec::new()
    } else {
        (0..tprev.len()).flat_map(|i| (0..r).map(move |j| (i, j))).map(|(i, j)| coboundary_of(n - 1, &tprev, &tn, i, j)).collect()
    };
    let log_b = span_log(b.clone(), cols_n, p, k);
    // |p^j H| for j = 0..k
    let mut sizes = Vec::new();
    for j in 0..=k {
        let pj = p.pow(j);
        let mut rows: Vec<Vec<u64>> = z.iter().map(|v| v.iter().map(|&x| x * pj % nm).collect()).collect();
        rows.extend(b.iter().cloned());
        sizes.push(span_log(rows, cols_n, p, k) - log_b);
    }
    // factors of order ≥ p^(j+1): sizes[j] − sizes[j+1]
    let mut factors = Vec::new();
    for j in 0..k as usize {
        let at_least = sizes[j] - sizes[j + 1];
        let at_least_next = if j + 1 < k as usize { sizes[j + 1] - sizes[j + 2] } else { 0 };
        for _ in 0..(at_least - at_least_next) {
            factors.push(p.pow(j as u32 + 1));
        }
    }
    factors.sort_unstable();
    Ok(factors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn cyclic_table(n: usize) -> Vec<usize> {
        (0..n * n).map(|i| (i / n + i % n) % n).collect()
    }

    #[test]
    fn bar_complex_small_cases() {
        let m = GroupModule::trivial(2, cyclic_table(2), 2, 1).unwrap();
        assert_eq!(group_cohomology_oracle(&m, 2, 1 << 12).unwrap(), vec![2]);
        assert_eq!(group_cohomology_oracle(&m, 3, 1 << 12).unwrap(), vec![2]);
        let m3 = GroupModule::trivial(3, cyclic_table(3), 3, 1).unwrap();
        assert_eq!(group_cohomology_oracle(&m3, 1, 1 << 12).unwrap(), vec![3]);
        assert_eq!(group_cohomology_oracle(&m3, 0, 1 << 12).unwrap(), vec![3]);
        // Z/4 acting on Z/4 by inversion: H^1 = {x : 2x = 0}... = Z/2
        let neg = GroupModule::new(2, cyclic_table(2), 4, 1, vec![vec![1], vec![3]]).unwrap();
        assert_eq!(group_cohomology_oracle(&neg, 1, 1 << 12).unwrap(), vec![2]);
        assert_eq!(group_cohomology_oracle(&neg, 2, 1 << 12).unwrap(), vec![2]);
        let z4 = GroupModule::trivial(4, cyclic_table(4), 4, 1).unwrap();
        assert_eq!(group_cohomology_oracle(&z4, 2, 1 << 12).unwrap(), vec![4]);
        assert_eq!(group_cohomology_oracle(&z4, 3, 1 << 12).unwrap(), vec![4]);
    }

    fn ctx(a: FiniteGroupoid, k: FiniteGroupoid) -> ExtensionContext {
        ExtensionContext::new(a, k, crate::autalg::MAX_AUTOMORPHISMS).unwrap()
    }

    #[test]
    fn census_small_instances() {
        let c = ctx(catalog::cyclic(2), catalog::cyclic(2));
        let r = census_extensions(&c, None, 1 << 16).unwrap();
        assert_eq!(r.class_count(), 2);
        let c = ctx(catalog::unit(1), catalog::cyclic(2));
        assert_eq!(census_extensions(&c, None, 1 << 16).unwrap().class_count(), 1);
        let c = ctx(catalog::cyclic(3), catalog::cyclic(3));
        let r = census_extensions(&c, Some(&Band::trivial(&c.k)), 1 << 16).unwrap();
        assert_eq!(r.class_count(), 3);
        let big = ctx(catalog::cyclic(3), catalog::cyclic(6));
        assert!(matches!(census_extensions(&big, None, 10), Err(OracleError::CapExceeded { .. })));
    }
}
