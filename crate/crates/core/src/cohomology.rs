//! Cochains on composable arrow tuples with values in a K-module, the
//! coboundary, and cohomology by two independent backends.
//!
//! Under the standard convention a module satisfies
//! `action(h)∘action(g) = action(gh)` and the coboundary uses
//! `action(g₁)⁻¹`. The flipped convention stores `action(g)⁻¹` instead, so
//! `action(g)∘action(h) = action(gh)` and the coboundary uses `action(g₁)`;
//! both describe the same complex.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::{gcd, invariant_factors, FiniteAbelianGroup};
use crate::autalg::AutData;
use crate::groupoid::{Arr, FiniteGroupoid};
use crate::zmod::{kernel, smith, Matrix, Smith};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CohomologyError {
    #[error("cochain degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("map sizes do not match the module")]
    ShapeMismatch,
    #[error("action of arrow {0} is not an automorphism of the coefficients")]
    NotAnAutomorphism(Arr),
    #[error("action law fails on the composable pair ({0}, {1})")]
    NotAModule(Arr, Arr),
    #[error("identity arrow {0} acts nontrivially")]
    UnitActsNontrivially(Arr),
    #[error("enumeration needs {needed} cochains, cap is {cap}")]
    CapExceeded { needed: u128, cap: u64 },
    #[error("cochain is not a cocycle")]
    NotACocycle,
    #[error("cochain does not vanish on degenerate tuples")]
    NotNormalized,
    #[error("lifting is not a band: coarse composition fails on ({0}, {1})")]
    NotABand(Arr, Arr),
    #[error("lifting is not the identity on identity arrow {0}")]
    LiftingNotNormalized(Arr),
    #[error("class belongs to a different computation")]
    Mismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum ActionConvention {
    #[default]
    Standard,
    Flipped,
}

impl ActionConvention {
    pub fn name(self) -> &'static str {
        match self {
            ActionConvention::Standard => "standard",
            ActionConvention::Flipped => "flipped",
        }
    }
}

/// An abelian group `E` with an action of the arrows of `K`.
#[derive(Clone, Debug)]
pub struct KModule {
    pub k: FiniteGroupoid,
    pub e: FiniteAbelianGroup,
    pub convention: ActionConvention,
    action: Vec<Vec<usize>>,
    /// Operator used in the coboundary at the first argument.
    op: Vec<Vec<usize>>,
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

impl KModule {
    pub fn new(
        k: FiniteGroupoid,
        e: FiniteAbelianGroup,
        action: Vec<Vec<usize>>,
        convention: ActionConvention,
    ) -> Result<Self, CohomologyError> {
        if action.len() != k.n_arrows() || action.iter().any(|f| f.len() != e.order()) {
            return Err(CohomologyError::ShapeMismatch);
        }
        for (g, f) in action.iter().enumerate() {
            if !e.is_automorphism(f) {
                return Err(CohomologyError::NotAnAutomorphism(g));
            }
        }
        for x in 0..k.n_objects() {
            let u = k.unit(x);
            if action[u].iter().enumerate().any(|(i, &y)| i != y) {
                return Err(CohomologyError::UnitActsNontrivially(u));
            }
        }
        for g in 0..k.n_arrows() {
            for &h in k.arrows_from(k.tgt(g)) {
                let gh = k.mul(g, h);
                let ok = (0..e.order()).all(|v| match convention {
                    ActionConvention::Standard => action[h][action[g][v]] == action[gh][v],
                    ActionConvention::Flipped => action[g][action[h][v]] == action[gh][v],
                });
                if !ok {
                    return Err(CohomologyError::NotAModule(g, h));
                }
            }
        }
        let op = match convention {
            ActionConvention::Standard => action.iter().map(|f| invert_perm(f)).collect(),
            ActionConvention::Flipped => action.clone(),
        };
        Ok(KModule { k, e, convention, action, op })
    }

    pub fn trivial(k: FiniteGroupoid, e: FiniteAbelianGroup) -> Self {
        let id: Vec<usize> = (0..e.order()).collect();
        let action = vec![id; k.n_arrows()];
        Self::new(k, e, action, ActionConvention::Standard).expect("trivial action")
    }

    pub fn action(&self, g: Arr) -> &[usize] {
        &self.action[g]
    }

    /// Same module data expressed in the other convention.
    pub fn with_convention(&self, convention: ActionConvention) -> Self {
        if convention == self.convention {
            return self.clone();
        }
        let action = self.action.iter().map(|f| invert_perm(f)).collect();
        Self::new(self.k.clone(), self.e.clone(), action, convention).expect("converted action")
    }
}

/// `K^[n]` in lexicographic order; for `n = 0` the tuples are `[x]` for
/// objects `x`.
#[derive(Clone, Debug)]
pub struct ComposableTuples {
    pub degree: usize,
    pub tuples: Vec<Vec<usize>>,
    index: BTreeMap<Vec<usize>, usize>,
}

impl ComposableTuples {
    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn index_of(&self, t: &[usize]) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Positions of tuples free of identity arrows.
    pub fn nondegenerate(&self, k: &FiniteGroupoid) -> Vec<usize> {
        if self.degree == 0 {
            return (0..self.len()).collect();
        }
        (0..self.len()).filter(|&p| self.tuples[p].iter().all(|&g| !k.is_unit(g))).collect()
    }
}

pub fn composable_tuples(k: &FiniteGroupoid, n: usize) -> ComposableTuples {
    let mut tuples: Vec<Vec<usize>> = if n == 0 {
        (0..k.n_objects()).map(|x| vec![x]).collect()
    } else {
        let mut ts: Vec<Vec<usize>> = (0..k.n_arrows()).map(|g| vec![g]).collect();
        for _ in 1..n {
            let mut next = Vec::new();
            for t in &ts {
                let last = *t.last().unwrap();
                for &h in k.arrows_from(k.tgt(last)) {
                    let mut u = t.clone();
                    u.push(h);
                    next.push(u);
                }
            }
            ts = next;
        }
        ts
    };
    tuples.sort();
    let index = tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
    ComposableTuples { degree: n, tuples, index }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cochain {
    pub degree: usize,
    /// Value (element of E) on each tuple of `K^[degree]`, canonical order.
    pub values: Vec<usize>,
}

impl Cochain {
    pub fn zero(m: &KModule, n: usize) -> Self {
        Cochain { degree: n, values: vec![m.e.zero(); composable_tuples(&m.k, n).len()] }
    }

    pub fn add(&self, other: &Cochain, m: &KModule) -> Cochain {
        Cochain {
            degree: self.degree,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| m.e.add(a, b)).collect(),
        }
    }

    pub fn neg(&self, m: &KModule) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().map(|&a| m.e.neg(a)).collect() }
    }

    pub fn scale(&self, k: u64, m: &KModule) -> Cochain {
        Cochain { degree: self.degree, values: self.values.iter().map(|&a| m.e.mul(k, a)).collect() }
    }

    pub fn is_zero(&self, m: &KModule) -> bool {
        self.values.iter().all(|&v| v == m.e.zero())
    }
}

/// Face data for `d: C^n → C^{n+1}`: for each tuple of degree `n+1`, its
/// first arrow and the indices of its `n+2` faces in `K^[n]`.
#[derive(Clone, Debug)]
struct Faces {
    first: Vec<Arr>,
    faces: Vec<Vec<usize>>,
}

fn faces(k: &FiniteGroupoid, lower: &ComposableTuples, upper: &ComposableTuples) -> Faces {
    let n = lower.degree;
    let mut first = Vec::with_capacity(upper.len());
    let mut fs = Vec::with_capacity(upper.len());
    for t in &upper.tuples {
        first.push(t[0]);
        let mut f = Vec::with_capacity(n + 2);
        if n == 0 {
            f.push(lower.index_of(&[k.tgt(t[0])]).unwrap());
            f.push(lower.index_of(&[k.src(t[0])]).unwrap());
        } else {
            f.push(lower.index_of(&t[1..]).unwrap());
            for i in 1..=n {
                let mut u = Vec::with_capacity(n);
                u.extend_from_slice(&t[..i - 1]);
                u.push(k.mul(t[i - 1], t[i]));
                u.extend_from_slice(&t[i + 1..]);
                f.push(lower.index_of(&u).unwrap());
            }
            f.push(lower.index_of(&t[..n]).unwrap());
        }
        fs.push(f);
    }
    Faces { first, faces: fs }
}

fn apply_d(m: &KModule, f: &Faces, c: &[usize]) -> Vec<usize> {
    let e = &m.e;
    f.faces
        .iter()
        .zip(&f.first)
        .map(|(fs, &g)| {
            let mut acc = m.op[g][c[fs[0]]];
            for (i, &p) in fs.iter().enumerate().skip(1) {
                acc = if i % 2 == 1 { e.sub(acc, c[p]) } else { e.add(acc, c[p]) };
            }
            acc
        })
        .collect()
}

pub fn coboundary(m: &KModule, c: &Cochain) -> Result<Cochain, CohomologyError> {
    let lower = composable_tuples(&m.k, c.degree);
    if c.values.len() != lower.len() {
        return Err(CohomologyError::ShapeMismatch);
    }
    let upper = composable_tuples(&m.k, c.degree + 1);
    let f = faces(&m.k, &lower, &upper);
    Ok(Cochain { degree: c.degree + 1, values: apply_d(m, &f, &c.values) })
}

/// Whether `c` vanishes on every tuple containing an identity arrow.
pub fn is_normalized(m: &KModule, c: &Cochain) -> bool {
    if c.degree == 0 {
        return true;
    }
    let t = composable_tuples(&m.k, c.degree);
    t.tuples
        .iter()
        .zip(&c.values)
        .all(|(tu, &v)| v == m.e.zero() || tu.iter().all(|&g| !m.k.is_unit(g)))
}

/// `action(ξ)(σ)(a) = Λ_ξ(σ(Λ_ξ⁻¹(a)))` on the center of `A`, where
/// `lambda[ξ]` indexes `data.saut`.
pub fn induced_action(
    a: &FiniteGroupoid,
    data: &AutData,
    k: &FiniteGroupoid,
    lambda: &[usize],
    convention: ActionConvention,
) -> Result<KModule, CohomologyError> {
    if lambda.len() != k.n_arrows() || lambda.iter().any(|&l| l >= data.saut.len()) {
        return Err(CohomologyError::ShapeMismatch);
    }
    for x in 0..k.n_objects() {
        let u = k.unit(x);
        if lambda[u] != 0 {
            return Err(CohomologyError::LiftingNotNormalized(u));
        }
    }
    let co = &data.coarse;
    for g in 0..k.n_arrows() {
        for &h in k.arrows_from(k.tgt(g)) {
            let lhs = co.coset_of[data.saut.compose(lambda[h], lambda[g])];
            if lhs != co.coset_of[lambda[k.mul(g, h)]] {
                return Err(CohomologyError::NotABand(g, h));
            }
        }
    }
    let center = &data.center;
    let mut action = Vec::with_capacity(k.n_arrows());
    for &l in lambda {
        let li = data.saut.inverse(l);
        let perm: Vec<usize> = (0..center.order())
            .map(|s| {
                let vals: Vec<Arr> =
                    (0..a.n_objects()).map(|x| data.saut.arr(l, center.value(s, data.saut.obj(li, x)))).collect();
                center.index_of(&vals).expect("image of a central section is central")
            })
            .collect();
        action.push(perm);
    }
    if convention == ActionConvention::Flipped {
        action = action.iter().map(|p| invert_perm(p)).collect();
    }
    KModule::new(k.clone(), center.group.clone(), action, convention)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    Exhaustive,
    Snf,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Exhaustive => "exhaustive",
            Backend::Snf => "snf",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyOptions {
    /// Restrict to cochains vanishing on degenerate tuples.
    pub normalized: bool,
    /// Largest number of cochains the exhaustive backend may enumerate.
    pub cap: u64,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        CohomologyOptions { normalized: false, cap: 1 << 18 }
    }
}

/// Class of a cocycle: coordinates on the generators, plus a cochain `c`
/// with `dc = z` when the class is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassOf {
    pub coords: Vec<u64>,
    pub witness: Option<Cochain>,
}

impl ClassOf {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug)]
enum Inner {
    Trivial,
    Snf(SnfData),
    Exhaustive(ExhaustiveData),
}

#[derive(Clone, Debug)]
struct Layout {
    degree: usize,
    n_tuples: usize,
    free: Vec<usize>,
    factors: Vec<u64>,
    modulus: u64,
}

impl Layout {
    fn new(m: &KModule, n: usize, normalized: bool) -> Layout {
        let t = composable_tuples(&m.k, n);
        let free = if normalized { t.nondegenerate(&m.k) } else { (0..t.len()).collect() };
        Layout {
            degree: n,
            n_tuples: t.len(),
            free,
            factors: m.e.invariant_factors().to_vec(),
            modulus: m.e.exponent(),
        }
    }

    fn dim(&self) -> usize {
        self.free.len() * self.factors.len()
    }

    fn to_vec(&self, m: &KModule, c: &Cochain) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.dim());
        for &p in &self.free {
            v.extend_from_slice(m.e.coords(c.values[p]));
        }
        v
    }

    fn from_vec(&self, m: &KModule, v: &[u64]) -> Cochain {
        let r = self.factors.len();
        let mut values = vec![m.e.zero(); self.n_tuples];
        for (i, &p) in self.free.iter().enumerate() {
            let c: Vec<u64> = (0..r).map(|j| v[i * r + j] % self.factors[j]).collect();
            values[p] = m.e.from_coords(&c);
        }
        Cochain { degree: self.degree, values }
    }
}

/// Integer matrix of `d: C^n → C^{n+1}` on lifted coordinates; rows cover
/// every tuple of degree `n+1`, columns the free positions of `lower`.
fn d_matrix(m: &KModule, lower: &Layout) -> Matrix {
    let n = lower.degree;
    let lt = composable_tuples(&m.k, n);
    let ut = composable_tuples(&m.k, n + 1);
    let f = faces(&m.k, &lt, &ut);
    let r = lower.factors.len();
    let nmod = lower.modulus;
    let basis = m.e.basis();
    let mut col_of = vec![usize::MAX; lt.len()];
    for (i, &p) in lower.free.iter().enumerate() {
        col_of[p] = i;
    }
    let mut mat = Matrix::zeros(ut.len() * r, lower.free.len() * r);
    for (q, fs) in f.faces.iter().enumerate() {
        let g = f.first[q];
        for (s, &p) in fs.iter().enumerate() {
            let c = col_of[p];
            if c == usize::MAX {
                continue;
            }
            for i in 0..r {
                let col = c * r + i;
                if s == 0 {
                    let img = m.e.coords(m.op[g][basis[i]]);
                    for j in 0..r {
                        let row = q * r + j;
                        mat.set(row, col, (mat.get(row, col) + img[j]) % nmod);
                    }
                } else {
                    let row = q * r + i;
                    let sign = if s % 2 == 1 { nmod - 1 } else { 1 };
                    mat.set(row, col, (mat.get(row, col) + sign) % nmod);
                }
            }
        }
    }
    mat
}

#[derive(Clone, Debug)]
struct SnfData {
    layout: Layout,
    lower: Layout,
    g_smith: Smith,
    /// Transform putting the relation module in diagonal form.
    u: Matrix,
    /// `[D_{n-1} | R]`, for coboundary witnesses.
    b_smith: Smith,
    b_cols_d: usize,
    /// Row of the diagonal form carrying each generator.
    rows: Vec<usize>,
}

#[derive(Clone, Debug)]
struct ExhaustiveData {
    layout: Layout,
    /// Free-position value vector of each cocycle -> coset index.
    coset: BTreeMap<Vec<usize>, usize>,
    group: FiniteAbelianGroup,
    /// Coboundary (free values) -> a preimage cochain of degree n−1.
    witness: BTreeMap<Vec<usize>, Cochain>,
}

#[derive(Clone, Debug)]
pub struct CohomologyGroup {
    pub degree: usize,
    pub normalized: bool,
    pub backend: Backend,
    /// Order of each generator.
    pub orders: Vec<u64>,
    /// Representative cocycle of each generator.
    pub generators: Vec<Cochain>,
    inner: Inner,
}

impl CohomologyGroup {
    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn invariant_factors(&self) -> Vec<u64> {
        invariant_factors(&self.orders)
    }

    /// All coordinate vectors, in lexicographic order.
    pub fn elements(&self) -> Vec<Vec<u64>> {
        let mut out = vec![Vec::new()];
        for &d in &self.orders {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for c in &out {
                for x in 0..d {
                    let mut c2 = c.clone();
                    c2.push(x);
                    next.push(c2);
                }
            }
            out = next;
        }
        out
    }

    /// `Σ coords_i · generator_i`.
    pub fn element(&self, m: &KModule, coords: &[u64]) -> Cochain {
        let mut c = Cochain::zero(m, self.degree);
        for (g, &k) in self.generators.iter().zip(coords) {
            c = c.add(&g.scale(k, m), m);
        }
        c
    }

    pub fn class_of(&self, m: &KModule, z: &Cochain) -> Result<ClassOf, CohomologyError> {
        if z.degree != self.degree {
            return Err(CohomologyError::DegreeMismatch { expected: self.degree, found: z.degree });
        }
        if self.normalized && !is_normalized(m, z) {
            return Err(CohomologyError::NotNormalized);
        }
        if !coboundary(m, z)?.is_zero(m) {
            return Err(CohomologyError::NotACocycle);
        }
        match &self.inner {
            Inner::Trivial => Ok(ClassOf { coords: Vec::new(), witness: Some(lower_zero(m, self.degree)) }),
            Inner::Snf(s) => {
                let x = s.layout.to_vec(m, z);
                let y = s.g_smith.solve(&x).ok_or(CohomologyError::Mismatch)?;
                let uy = s.u.mul_vec(&y, s.layout.modulus);
                let coords: Vec<u64> = self.orders.iter().enumerate().map(|(i, &d)| uy[s.rows[i]] % d).collect();
                let witness = if coords.iter().all(|&c| c == 0) {
                    let w = s.b_smith.solve(&x).ok_or(CohomologyError::Mismatch)?;
                    Some(if self.degree == 0 { lower_zero(m, 0) } else { s.lower.from_vec(m, &w[..s.b_cols_d]) })
                } else {
                    None
                };
                Ok(ClassOf { coords, witness })
            }
            Inner::Exhaustive(e) => {
                let key: Vec<usize> = e.layout.free.iter().map(|&p| z.values[p]).collect();
                let c = *e.coset.get(&key).ok_or(CohomologyError::Mismatch)?;
                let coords = e.group.coords(c).to_vec();
                let witness = if c == e.group.zero() {
                    Some(e.witness.get(&key).cloned().ok_or(CohomologyError::Mismatch)?)
                } else {
                    None
                };
                Ok(ClassOf { coords, witness })
            }
        }
    }
}

/// The zero cochain one degree below `n`; in degree 0 (nothing below) an
/// empty cochain of degree 0.
fn lower_zero(m: &KModule, n: usize) -> Cochain {
    if n == 0 {
        Cochain { degree: 0, values: Vec::new() }
    } else {
        Cochain::zero(m, n - 1)
    }
}

pub fn cohomology(
    m: &KModule,
    n: usize,
    backend: Backend,
    opts: CohomologyOptions,
) -> Result<CohomologyGroup, CohomologyError> {
    if m.e.order() == 1 {
        return Ok(CohomologyGroup {
            degree: n,
            normalized: opts.normalized,
            backend,
            orders: Vec::new(),
            generators: Vec::new(),
            inner: Inner::Trivial,
        });
    }
    match backend {
        Backend::Snf => snf_cohomology(m, n, opts),
        Backend::Exhaustive => exhaustive_cohomology(m, n, opts),
    }
}

fn snf_cohomology(m: &KModule, n: usize, opts: CohomologyOptions) -> Result<CohomologyGroup, CohomologyError> {
    let layout = Layout::new(m, n, opts.normalized);
    let nmod = layout.modulus;
    let r = layout.factors.len();
    let dn = d_matrix(m, &layout);
    // cocycle condition: D x ≡ 0 modulo each row's factor
    let mut scaled = dn.clone();
    for row in 0..scaled.rows {
        let w = nmod / layout.factors[row % r];
        for col in 0..scaled.cols {
            let v = scaled.get(row, col);
            scaled.set(row, col, v * w % nmod);
        }
    }
    let zgens = kernel(&scaled, nmod);
    let dim = layout.dim();
    let g = Matrix::from_columns(dim, &zgens);
    // relations: im D_{n-1} + R
    let (lower, d_prev) = if n == 0 {
        (Layout { degree: 0, n_tuples: 0, free: Vec::new(), factors: layout.factors.clone(), modulus: nmod }, Matrix::zeros(dim, 0))
    } else {
        let lower = Layout::new(m, n - 1, opts.normalized);
        let d = d_matrix(m, &lower);
        // keep only rows of free positions
        let mut dm = Matrix::zeros(dim, d.cols);
        for (i, &p) in layout.free.iter().enumerate() {
            for j in 0..r {
                for c in 0..d.cols {
                    dm.set(i * r + j, c, d.get(p * r + j, c));
                }
            }
        }
        (lower, dm)
    };
    let mut rcols: Vec<Vec<u64>> = Vec::new();
    for i in 0..dim {
        let d = layout.factors[i % r];
        if d % nmod != 0 {
            let mut v = vec![0; dim];
            v[i] = d % nmod;
            rcols.push(v);
        }
    }
    let mut bcols: Vec<Vec<u64>> = (0..d_prev.cols).map(|c| d_prev.column(c)).collect();
    let b_cols_d = bcols.len();
    bcols.extend(rcols);
    let bmat = Matrix::from_columns(dim, &bcols);
    // P = {y : G y ∈ B}
    let kg = g.cols;
    let mut all_cols: Vec<Vec<u64>> = (0..kg).map(|c| g.column(c)).collect();
    all_cols.extend(bcols.iter().cloned());
    let big = Matrix::from_columns(dim, &all_cols);
    let pk = kernel(&big, nmod);
    let pcols: Vec<Vec<u64>> = pk.iter().map(|v| v[..kg].to_vec()).collect();
    let pmat = Matrix::from_columns(kg, &pcols);
    let ps = smith(&pmat, nmod);
    let mut orders = Vec::new();
    let mut rows = Vec::new();
    let mut generators = Vec::new();
    for i in 0..kg {
        let s = if i < ps.diag.len() { ps.diag[i] } else { 0 };
        let d = gcd(s, nmod);
        if d > 1 {
            orders.push(d);
            rows.push(i);
            let y = ps.u_inv.column(i);
            let x = g.mul_vec(&y, nmod);
            generators.push(layout.from_vec(m, &x));
        }
    }
    let data = SnfData {
        g_smith: smith(&g, nmod),
        b_smith: smith(&bmat, nmod),
        b_cols_d,
        u: ps.u,
        layout,
        lower,
        rows,
    };
    Ok(CohomologyGroup { degree: n, normalized: opts.normalized, backend: Backend::Snf, orders, generators, inner: Inner::Snf(data) })
}

fn exhaustive_cohomology(m: &KModule, n: usize, opts: CohomologyOptions) -> Result<CohomologyGroup, CohomologyError> {
    let layout = Layout::new(m, n, opts.normalized);
    let e = &m.e;
    let q = e.order() as u128;
    let nf = layout.free.len();
    let needed = q.checked_pow(nf as u32).unwrap_or(u128::MAX);
    if needed > opts.cap as u128 {
        return Err(CohomologyError::CapExceeded { needed, cap: opts.cap });
    }
    let lt = composable_tuples(&m.k, n);
    let ut = composable_tuples(&m.k, n + 1);
    let f = faces(&m.k, &lt, &ut);
    let zero = e.zero();
    let mut cocycles: Vec<Vec<usize>> = Vec::new();
    let mut vals = vec![zero; lt.len()];
    let mut counter = vec![0usize; nf];
    loop {
        for (i, &p) in layout.free.iter().enumerate() {
            vals[p] = counter[i];
        }
        if apply_d(m, &f, &vals).iter().all(|&v| v == zero) {
            cocycles.push(counter.clone());
        }
        let mut i = nf;
        let mut done = true;
        while i > 0 {
            i -= 1;
            counter[i] += 1;
            if counter[i] < e.order() {
                done = false;
                break;
            }
            counter[i] = 0;
        }
        if done {
            break;
        }
    }
    // coboundaries: closure of the images of basic (n−1)-cochains
    let zero_key = vec![zero; nf];
    let mut witness: BTreeMap<Vec<usize>, Cochain> = BTreeMap::new();
    witness.insert(zero_key.clone(), lower_zero(m, n));
    if n > 0 {
        let low = Layout::new(m, n - 1, opts.normalized);
        let llt = composable_tuples(&m.k, n - 1);
        let lf = faces(&m.k, &llt, &lt);
        let mut gens: Vec<(Vec<usize>, Cochain)> = Vec::new();
        for &p in &low.free {
            for &b in e.basis() {
                let mut c = vec![zero; llt.len()];
                c[p] = b;
                let dc = apply_d(m, &lf, &c);
                let key: Vec<usize> = layout.free.iter().map(|&p| dc[p]).collect();
                gens.push((key, Cochain { degree: n - 1, values: c }));
            }
        }
        let mut frontier = vec![zero_key.clone()];
        while let Some(b) = frontier.pop() {
            let wb = witness[&b].clone();
            for (gk, gc) in &gens {
                let s: Vec<usize> = b.iter().zip(gk).map(|(&x, &y)| e.add(x, y)).collect();
                if !witness.contains_key(&s) {
                    let w = Cochain {
                        degree: n - 1,
                        values: wb.values.iter().zip(&gc.values).map(|(&x, &y)| e.add(x, y)).collect(),
                    };
                    witness.insert(s.clone(), w);
                    frontier.push(s);
                }
            }
        }
    }
    let bset: Vec<Vec<usize>> = witness.keys().cloned().collect();
    let zset: BTreeSet<Vec<usize>> = cocycles.iter().cloned().collect();
    if bset.iter().any(|b| !zset.contains(b)) {
        return Err(CohomologyError::NotACocycle);
    }
    let mut coset: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for z in &cocycles {
        if coset.contains_key(z) {
            continue;
        }
        let c = reps.len();
        reps.push(z.clone());
        for b in &bset {
            let s: Vec<usize> = z.iter().zip(b).map(|(&x, &y)| e.add(x, y)).collect();
            coset.insert(s, c);
        }
    }
    let h = reps.len();
    let mut add = vec![0; h * h];
    for i in 0..h {
        for j in 0..h {
            let s: Vec<usize> = reps[i].iter().zip(&reps[j]).map(|(&x, &y)| e.add(x, y)).collect();
            add[i * h + j] = coset[&s];
        }
    }
    let group = FiniteAbelianGroup::from_table(h, add).expect("quotient of abelian groups");
    let orders = group.invariant_factors().to_vec();
    let to_cochain = |key: &[usize]| {
        let mut values = vec![zero; lt.len()];
        for (i, &p) in layout.free.iter().enumerate() {
            values[p] = key[i];
        }
        Cochain { degree: n, values }
    };
    let generators = group.basis().iter().map(|&c| to_cochain(&reps[c])).collect();
    let data = ExhaustiveData { layout, coset, group, witness };
    Ok(CohomologyGroup {
        degree: n,
        normalized: opts.normalized,
        backend: Backend::Exhaustive,
        orders,
        generators,
        inner: Inner::Exhaustive(data),
    })
}

/// Coordinates of `coords` in `a` expressed in `b`: checks that the two
/// computations give the same group and mutually consistent classes.
pub fn backends_agree(m: &KModule, a: &CohomologyGroup, b: &CohomologyGroup) -> Result<bool, CohomologyError> {
    if a.invariant_factors() != b.invariant_factors() {
        return Ok(false);
    }
    // the map a-coords -> b-coords must be a bijective homomorphism
    let mut images = BTreeSet::new();
    let gens_b: Vec<Vec<u64>> =
        a.generators.iter().map(|g| b.class_of(m, g).map(|c| c.coords)).collect::<Result<_, _>>()?;
    for coords in a.elements() {
        let z = a.element(m, &coords);
        let cb = b.class_of(m, &z)?.coords;
        let mut expect = vec![0u64; b.orders.len()];
        for (gi, &k) in gens_b.iter().zip(&coords) {
            for (i, &x) in gi.iter().enumerate() {
                expect[i] = (expect[i] + k * x) % b.orders[i];
            }
        }
        if cb != expect || a.class_of(m, &z)?.coords != coords {
            return Ok(false);
        }
        images.insert(cb);
    }
    Ok(images.len() as u64 == b.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn both(m: &KModule, n: usize, normalized: bool) -> (CohomologyGroup, CohomologyGroup) {
        let o = CohomologyOptions { normalized, cap: 1 << 16 };
        (cohomology(m, n, Backend::Snf, o).unwrap(), cohomology(m, n, Backend::Exhaustive, o).unwrap())
    }

    #[test]
    fn tuple_counts() {
        assert_eq!(composable_tuples(&catalog::cyclic(2), 2).len(), 4);
        assert_eq!(composable_tuples(&catalog::unit(2), 2).len(), 2);
        assert_eq!(composable_tuples(&catalog::pair(2), 2).len(), 8);
        assert_eq!(composable_tuples(&catalog::pair(2), 0).len(), 2);
    }

    #[test]
    fn degree_one_coboundary_by_hand() {
        let k = catalog::cyclic(2);
        let m = KModule::trivial(k, FiniteAbelianGroup::cyclic(2));
        // c(e) = 0, c(g) = 1; dc(g1, g2) = c(g2) - c(g1 g2) + c(g1)
        let c = Cochain { degree: 1, values: vec![0, 1] };
        let dc = coboundary(&m, &c).unwrap();
        let t = composable_tuples(&m.k, 2);
        for (i, tu) in t.tuples.iter().enumerate() {
            let (a, b) = (tu[0], tu[1]);
            let expect = (c.values[b] + 2 - c.values[(a + b) % 2] + c.values[a]) % 2;
            assert_eq!(dc.values[i], expect);
        }
        assert_eq!(dc.values, vec![0, 0, 0, 0]);
        let d0 = coboundary(&m, &Cochain { degree: 0, values: vec![1] }).unwrap();
        assert!(d0.is_zero(&m));
    }

    #[test]
    fn classical_degree_two() {
        for p in [2u64, 3] {
            let m = KModule::trivial(catalog::cyclic(p as usize), FiniteAbelianGroup::cyclic(p));
            for normalized in [false, true] {
                let (s, e) = both(&m, 2, normalized);
                assert_eq!(s.invariant_factors(), vec![p]);
                assert!(backends_agree(&m, &s, &e).unwrap());
                assert!(backends_agree(&m, &e, &s).unwrap());
            }
        }
    }

    #[test]
    fn unit_groupoid_cohomology() {
        let m = KModule::trivial(catalog::unit(2), FiniteAbelianGroup::cyclic(3));
        for n in 0..4 {
            let (s, e) = both(&m, n, false);
            let expect: Vec<u64> = if n == 0 { vec![3, 3] } else { vec![] };
            assert_eq!(s.invariant_factors(), expect);
            assert_eq!(e.invariant_factors(), expect);
        }
    }

    #[test]
    fn factor_set_of_z4_is_nontrivial() {
        let m = KModule::trivial(catalog::cyclic(2), FiniteAbelianGroup::cyclic(2));
        // carry cocycle: f(g, g) = 1
        let t = composable_tuples(&m.k, 2);
        let values = t.tuples.iter().map(|tu| usize::from(tu == &vec![1, 1])).collect();
        let z = Cochain { degree: 2, values };
        let (s, e) = both(&m, 2, true);
        assert!(!s.class_of(&m, &z).unwrap().is_zero());
        assert!(!e.class_of(&m, &z).unwrap().is_zero());
        let dz = coboundary(&m, &Cochain { degree: 1, values: vec![0, 1] }).unwrap();
        let c = s.class_of(&m, &dz).unwrap();
        assert!(c.is_zero());
        assert_eq!(coboundary(&m, &c.witness.unwrap()).unwrap(), dz);
    }

    #[test]
    fn induced_action_of_inversion_is_negation() {
        let a = catalog::cyclic(4);
        let k = catalog::cyclic(2);
        let data = AutData::compute(&a, 12).unwrap();
        let neg = data.saut.autos.iter().position(|f| !f.is_identity()).unwrap();
        let m = induced_action(&a, &data, &k, &[0, neg], ActionConvention::Standard).unwrap();
        let e = &m.e;
        for s in 0..e.order() {
            assert_eq!(m.action(1)[s], e.neg(s));
        }
        let flipped = induced_action(&a, &data, &k, &[0, neg], ActionConvention::Flipped).unwrap();
        for n in 0..4 {
            let o = CohomologyOptions::default();
            let x = cohomology(&m, n, Backend::Snf, o).unwrap().invariant_factors();
            let y = cohomology(&flipped, n, Backend::Snf, o).unwrap().invariant_factors();
            assert_eq!(x, y);
        }
    }
}
