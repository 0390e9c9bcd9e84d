//! Generalized cocycles `(Λ, Ω)` over a base `K` with fiber `A`, the
//! extension groupoids they build, and their classification.
//!
//! Automorphisms of `A` are referred to by their index in
//! [`SAutGroupoid`](crate::autalg::SAutGroupoid); `Λ_ξ` for an arrow `ξ` of
//! `K` is `lambda[ξ]`. `Ω(ξ, η, ·)` is stored per composable pair (in the
//! order of [`composable_tuples`]) as a component vector over `A⁰`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::autalg::{AutData, AutError};
use crate::cohomology::{
    cohomology, composable_tuples, induced_action, ActionConvention, Backend, Cochain, CohomologyError,
    CohomologyGroup, CohomologyOptions, ComposableTuples, KModule,
};
use crate::groupoid::{Arr, FiniteGroupoid, Obj};
use crate::morphism::StrictMorphism;
use crate::refine::{common_refinement, refine, refinement_map, CoverError, OpenCover};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error("band values do not match the base groupoid")]
    BandShape,
    #[error("band composition fails on ({0}, {1})")]
    NotABand(Arr, Arr),
    #[error("lifting does not match the base groupoid or the band")]
    LiftingShape,
    #[error("no natural transformation for the pair ({0}, {1})")]
    NoNaturalTransformation(Arr, Arr),
    #[error("cocycle data is malformed: {0}")]
    Malformed(String),
    #[error("cocycle condition fails at ({xi}, {eta}, {zeta}) on object {a}")]
    CocycleViolation { xi: Arr, eta: Arr, zeta: Arr, a: Obj },
    #[error("not a product bundle: {0}")]
    NotAProductBundle(String),
    #[error("pre-action of arrow {0} is not a strict automorphism")]
    PreActionNotAutomorphism(Arr),
    #[error("obstruction value at tuple {tuple} and object {a} is not central")]
    NotCentral { tuple: usize, a: Obj },
    #[error("obstruction value at tuple {tuple} is not invariant")]
    NotInvariant { tuple: usize },
    #[error("obstruction class is nonzero: {0:?}")]
    ObstructionNonzero(Vec<u64>),
    #[error("cocycles have different bands")]
    BandMismatch,
    #[error("extensions have different shapes")]
    ShapeMismatch,
    #[error("search exceeded its cap of {0}")]
    CapExceeded(usize),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

/// Fiber `A`, base `K`, automorphism data of `A`, and the composable tuples
/// of `K` used for indexing.
#[derive(Clone, Debug)]
pub struct ExtensionContext {
    pub a: FiniteGroupoid,
    pub k: FiniteGroupoid,
    pub data: Arc<AutData>,
    pub convention: ActionConvention,
    pub pairs: ComposableTuples,
    pub triples: ComposableTuples,
    pair_index: Vec<usize>,
}

impl ExtensionContext {
    pub fn new(a: FiniteGroupoid, k: FiniteGroupoid, saut_cap: usize) -> Result<Self, ExtensionError> {
        let data = Arc::new(AutData::compute(&a, saut_cap)?);
        Ok(Self::with_data(a, k, data))
    }

    pub fn with_data(a: FiniteGroupoid, k: FiniteGroupoid, data: Arc<AutData>) -> Self {
        let pairs = composable_tuples(&k, 2);
        let triples = composable_tuples(&k, 3);
        let nk = k.n_arrows();
        let mut pair_index = vec![usize::MAX; nk * nk];
        for (i, t) in pairs.tuples.iter().enumerate() {
            pair_index[t[0] * nk + t[1]] = i;
        }
        ExtensionContext { a, k, data, convention: ActionConvention::Standard, pairs, triples, pair_index }
    }

    /// Same fiber over a different base.
    pub fn with_base(&self, k: FiniteGroupoid) -> Self {
        let mut c = Self::with_data(self.a.clone(), k, self.data.clone());
        c.convention = self.convention;
        c
    }

    pub fn with_convention(mut self, convention: ActionConvention) -> Self {
        self.convention = convention;
        self
    }

    #[inline]
    pub fn pair(&self, xi: Arr, eta: Arr) -> usize {
        let p = self.pair_index[xi * self.k.n_arrows() + eta];
        debug_assert!(p != usize::MAX);
        p
    }

    /// `Λ_{ξη}⁻¹ ∘ Λ_η ∘ Λ_ξ`.
    #[inline]
    pub fn defect(&self, lambda: &[usize], xi: Arr, eta: Arr) -> usize {
        let s = &self.data.saut;
        s.compose(s.inverse(lambda[self.k.mul(xi, eta)]), s.compose(lambda[eta], lambda[xi]))
    }

    fn units(&self) -> Vec<Arr> {
        (0..self.a.n_objects()).map(|x| self.a.unit(x)).collect()
    }
}

/// Coarse class of each arrow of `K`, read in the context's convention.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Band {
    pub values: Vec<usize>,
}

impl Band {
    pub fn trivial(k: &FiniteGroupoid) -> Band {
        Band { values: vec![0; k.n_arrows()] }
    }

    /// The band of a lifting.
    pub fn of_lifting(ctx: &ExtensionContext, lambda: &[usize]) -> Band {
        let co = &ctx.data.coarse;
        let values = lambda
            .iter()
            .map(|&l| {
                let c = co.coset_of[l];
                match ctx.convention {
                    ActionConvention::Standard => c,
                    ActionConvention::Flipped => co.inverse(c),
                }
            })
            .collect();
        Band { values }
    }

    /// Classes of `Λ_ξ` themselves (standard reading).
    fn standard(&self, ctx: &ExtensionContext) -> Vec<usize> {
        match ctx.convention {
            ActionConvention::Standard => self.values.clone(),
            ActionConvention::Flipped => self.values.iter().map(|&c| ctx.data.coarse.inverse(c)).collect(),
        }
    }
}

/// Violating composable pairs (empty when the band is valid). Identity
/// arrows violating the unit law are reported as `(u, u)`.
pub fn check_band(ctx: &ExtensionContext, band: &Band) -> Result<Vec<(Arr, Arr)>, ExtensionError> {
    let k = &ctx.k;
    let co = &ctx.data.coarse;
    if band.values.len() != k.n_arrows() || band.values.iter().any(|&v| v >= co.order()) {
        return Err(ExtensionError::BandShape);
    }
    let v = &band.values;
    let mut bad = Vec::new();
    for x in 0..k.n_objects() {
        let u = k.unit(x);
        if v[u] != co.identity() {
            bad.push((u, u));
        }
    }
    for g in 0..k.n_arrows() {
        for &h in k.arrows_from(k.tgt(g)) {
            let lhs = match ctx.convention {
                ActionConvention::Standard => co.mult(v[h], v[g]),
                ActionConvention::Flipped => co.mult(v[g], v[h]),
            };
            if lhs != v[k.mul(g, h)] {
                bad.push((g, h));
            }
        }
    }
    Ok(bad)
}

/// Every band, in lexicographic order.
pub fn enumerate_bands(ctx: &ExtensionContext) -> Vec<Band> {
    let k = &ctx.k;
    let co = &ctx.data.coarse;
    let n = k.n_arrows();
    let mut out = Vec::new();
    let mut v = vec![usize::MAX; n];
    for x in 0..k.n_objects() {
        v[k.unit(x)] = co.identity();
    }
    let free: Vec<Arr> = (0..n).filter(|&g| !k.is_unit(g)).collect();
    let ok_pair = |v: &[usize], g: Arr, h: Arr| -> bool {
        let gh = k.mul(g, h);
        if v[g] == usize::MAX || v[h] == usize::MAX || v[gh] == usize::MAX {
            return true;
        }
        let lhs = match ctx.convention {
            ActionConvention::Standard => co.mult(v[h], v[g]),
            ActionConvention::Flipped => co.mult(v[g], v[h]),
        };
        lhs == v[gh]
    };
    fn rec(
        i: usize,
        free: &[Arr],
        v: &mut Vec<usize>,
        order: usize,
        k: &FiniteGroupoid,
        ok_pair: &dyn Fn(&[usize], Arr, Arr) -> bool,
        out: &mut Vec<Band>,
    ) {
        if i == free.len() {
            out.push(Band { values: v.clone() });
            return;
        }
        let g = free[i];
        for c in 0..order {
            v[g] = c;
            let ok = (0..k.n_arrows()).all(|h| {
                (k.tgt(g) != k.src(h) || ok_pair(v, g, h))
                    && (k.tgt(h) != k.src(g) || ok_pair(v, h, g))
                    && k.arrows_from(k.tgt(h)).iter().all(|&j| k.mul(h, j) != g || ok_pair(v, h, j))
            });
            if ok {
                rec(i + 1, free, v, order, k, ok_pair, out);
            }
        }
        v[g] = usize::MAX;
    }
    rec(0, &free, &mut v, co.order(), k, &ok_pair, &mut out);
    out
}

/// The canonical lifting: least automorphism in each class, identity on
/// identity arrows.
pub fn lift_band(ctx: &ExtensionContext, band: &Band) -> Result<Vec<usize>, ExtensionError> {
    if !check_band(ctx, band)?.is_empty() {
        let (g, h) = check_band(ctx, band)?[0];
        return Err(ExtensionError::NotABand(g, h));
    }
    let co = &ctx.data.coarse;
    Ok(band.standard(ctx).iter().map(|&c| co.reps[c]).collect())
}

/// Every lifting of a band, in lexicographic order; at most `limit`.
pub fn all_liftings(ctx: &ExtensionContext, band: &Band, limit: usize) -> Result<Vec<Vec<usize>>, ExtensionError> {
    let base = lift_band(ctx, band)?;
    let co = &ctx.data.coarse;
    let cls = band.standard(ctx);
    let k = &ctx.k;
    let mut out = vec![base.clone()];
    for g in 0..k.n_arrows() {
        if k.is_unit(g) {
            continue;
        }
        let members: Vec<usize> = (0..co.coset_of.len()).filter(|&f| co.coset_of[f] == cls[g]).collect();
        let mut next = Vec::new();
        for l in &out {
            for &f in &members {
                let mut l2 = l.clone();
                l2[g] = f;
                next.push(l2);
                if next.len() > limit {
                    return Err(ExtensionError::CapExceeded(limit));
                }
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// For each composable pair, the natural transformations
/// `id ⇒ Λ_{ξη}⁻¹Λ_ηΛ_ξ` allowed for `Ω`; pairs involving an identity arrow
/// only allow the unit section.
pub fn omega_candidates(ctx: &ExtensionContext, lambda: &[usize]) -> Result<Vec<Vec<Vec<Arr>>>, ExtensionError> {
    let k = &ctx.k;
    let units = ctx.units();
    let mut out = Vec::with_capacity(ctx.pairs.len());
    for t in &ctx.pairs.tuples {
        let (xi, eta) = (t[0], t[1]);
        if k.is_unit(xi) || k.is_unit(eta) {
            out.push(vec![units.clone()]);
            continue;
        }
        let cells = ctx.data.saut.transformations(0, ctx.defect(lambda, xi, eta));
        if cells.is_empty() {
            return Err(ExtensionError::NoNaturalTransformation(xi, eta));
        }
        out.push(cells.to_vec());
    }
    Ok(out)
}

/// A lifting `Λ` together with a cofactor `Ω`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GeneralizedCocycle {
    pub lambda: Vec<usize>,
    /// `omega[p][a] = Ω(ξ, η, a)` for the `p`-th composable pair `(ξ, η)`.
    pub omega: Vec<Vec<Arr>>,
}

impl GeneralizedCocycle {
    #[inline]
    pub fn om(&self, ctx: &ExtensionContext, xi: Arr, eta: Arr, a: Obj) -> Arr {
        self.omega[ctx.pair(xi, eta)][a]
    }

    /// Canonical lifting of the band with the least transformation per pair.
    pub fn canonical(ctx: &ExtensionContext, band: &Band) -> Result<Self, ExtensionError> {
        let lambda = lift_band(ctx, band)?;
        let omega = omega_candidates(ctx, &lambda)?.into_iter().map(|mut c| c.swap_remove(0)).collect();
        Ok(GeneralizedCocycle { lambda, omega })
    }

    /// Trivial lifting and unit cofactor.
    pub fn trivial(ctx: &ExtensionContext) -> Self {
        GeneralizedCocycle { lambda: vec![0; ctx.k.n_arrows()], omega: vec![ctx.units(); ctx.pairs.len()] }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleReport {
    /// Problems with shape, normalization or naturality.
    pub structural: Vec<String>,
    /// `(ξ, η, ζ, a)` where the cocycle condition fails.
    pub violations: Vec<(Arr, Arr, Arr, Obj)>,
    /// `(ξ, a)` where `Ω(ξ,ξ⁻¹,a) = Λ_ξ⁻¹(Ω(ξ⁻¹,ξ,Λ_ξ a))` fails.
    pub inverse_pair_violations: Vec<(Arr, Obj)>,
}

impl CocycleReport {
    pub fn is_ok(&self) -> bool {
        self.structural.is_empty() && self.violations.is_empty() && self.inverse_pair_violations.is_empty()
    }
}

fn structural_check(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Vec<String> {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let mut out = Vec::new();
    if gc.lambda.len() != k.n_arrows() || gc.lambda.iter().any(|&l| l >= s.len()) {
        out.push(String::from("lifting has the wrong shape"));
        return out;
    }
    if gc.omega.len() != ctx.pairs.len()
        || gc.omega.iter().any(|w| w.len() != a.n_objects() || w.iter().any(|&g| g >= a.n_arrows()))
    {
        out.push(String::from("cofactor has the wrong shape"));
        return out;
    }
    for x in 0..k.n_objects() {
        if gc.lambda[k.unit(x)] != 0 {
            out.push(format!("lifting of {} is not the identity", k.arrow_id(k.unit(x))));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let id = &s.autos[0];
    for (p, t) in ctx.pairs.tuples.iter().enumerate() {
        let (xi, eta) = (t[0], t[1]);
        let m = &s.autos[ctx.defect(&gc.lambda, xi, eta)];
        if crate::morphism::is_natural(a, a, id, m, &gc.omega[p]).is_err() {
            out.push(format!("cofactor at ({}, {}) is not natural", k.arrow_id(xi), k.arrow_id(eta)));
        }
        if (k.is_unit(xi) || k.is_unit(eta)) && (0..a.n_objects()).any(|x| gc.omega[p][x] != a.unit(x)) {
            out.push(format!("cofactor at ({}, {}) is not normalized", k.arrow_id(xi), k.arrow_id(eta)));
        }
    }
    out
}

pub fn check_generalized_cocycle(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> CocycleReport {
    let structural = structural_check(ctx, gc);
    if !structural.is_empty() {
        return CocycleReport { structural, ..Default::default() };
    }
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l = &gc.lambda;
    let mut violations = Vec::new();
    for t in &ctx.triples.tuples {
        let (xi, eta, zeta) = (t[0], t[1], t[2]);
        for x in 0..a.n_objects() {
            if !cocycle_holds_at(ctx, gc, xi, eta, zeta, x) {
                violations.push((xi, eta, zeta, x));
            }
        }
    }
    let mut inverse_pair_violations = Vec::new();
    for xi in 0..k.n_arrows() {
        let xv = k.inv(xi);
        let li = s.inverse(l[xi]);
        for x in 0..a.n_objects() {
            let lhs = gc.om(ctx, xi, xv, x);
            let rhs = s.arr(li, gc.om(ctx, xv, xi, s.obj(l[xi], x)));
            if lhs != rhs {
                inverse_pair_violations.push((xi, x));
            }
        }
    }
    CocycleReport { structural, violations, inverse_pair_violations }
}

/// `Ω(ξ,η,a)·Ω(ξη,ζ,a₄) = Λ_ξ⁻¹(Ω(η,ζ,a₁))·Ω(ξ,ηζ,a₅)`.
fn cocycle_holds_at(ctx: &ExtensionContext, gc: &GeneralizedCocycle, xi: Arr, eta: Arr, zeta: Arr, x: Obj) -> bool {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l = &gc.lambda;
    let (xe, ez) = (k.mul(xi, eta), k.mul(eta, zeta));
    let li = s.inverse(l[xi]);
    let a1 = s.obj(l[xi], x);
    let a4 = s.obj(ctx.defect(l, xi, eta), x);
    // a5 = Λ_ξ⁻¹ Λ_{ηζ}⁻¹ Λ_ζ Λ_η Λ_ξ (a)
    let a5 = s.obj(li, s.obj(s.inverse(l[ez]), s.obj(l[zeta], s.obj(l[eta], a1))));
    let lhs = a.mul(gc.om(ctx, xi, eta, x), gc.om(ctx, xe, zeta, a4));
    let rhs = a.mul(s.arr(li, gc.om(ctx, eta, zeta, a1)), gc.om(ctx, xi, ez, a5));
    lhs == rhs
}

/// An extension groupoid with objects labeled by `A⁰ × K⁰` and arrows by
/// `A¹ × K¹`.
#[derive(Clone, Debug)]
pub struct ExtensionGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Projection to the base.
    pub projection: StrictMorphism,
    /// Canonical arrow -> `(α, ξ)`.
    pub arrow_pairs: Vec<(Arr, Arr)>,
    /// Canonical object -> `(a, x)`.
    pub object_pairs: Vec<(Obj, Obj)>,
    arrow_of: Vec<Arr>,
    object_of: Vec<Obj>,
    nk1: usize,
    nk0: usize,
    pub provenance: Option<GeneralizedCocycle>,
}

impl ExtensionGroupoid {
    #[inline]
    pub fn arrow(&self, alpha: Arr, xi: Arr) -> Arr {
        self.arrow_of[alpha * self.nk1 + xi]
    }

    #[inline]
    pub fn object(&self, a: Obj, x: Obj) -> Obj {
        self.object_of[a * self.nk0 + x]
    }

    /// Wraps a groupoid with a pair labeling and checks the product-bundle
    /// axioms: bijective labeling, `s = s_A × s_K`, `u = u_A × u_K`,
    /// `t(α, 1_x) = (t α, x)`, the projection is a functor, and the fiber over
    /// each identity multiplies like `A`.
    pub fn from_labeling(
        ctx: &ExtensionContext,
        g: FiniteGroupoid,
        object_pairs: Vec<(Obj, Obj)>,
        arrow_pairs: Vec<(Arr, Arr)>,
    ) -> Result<Self, ExtensionError> {
        let (a, k) = (&ctx.a, &ctx.k);
        let bad = |m: &str| Err(ExtensionError::NotAProductBundle(String::from(m)));
        let (nk0, nk1) = (k.n_objects(), k.n_arrows());
        if object_pairs.len() != g.n_objects()
            || arrow_pairs.len() != g.n_arrows()
            || g.n_objects() != a.n_objects() * nk0
            || g.n_arrows() != a.n_arrows() * nk1
        {
            return bad("sizes differ from the product");
        }
        let mut object_of = vec![usize::MAX; g.n_objects()];
        for (o, &(x, y)) in object_pairs.iter().enumerate() {
            if x >= a.n_objects() || y >= nk0 || object_of[x * nk0 + y] != usize::MAX {
                return bad("object labeling is not a bijection");
            }
            object_of[x * nk0 + y] = o;
        }
        let mut arrow_of = vec![usize::MAX; g.n_arrows()];
        for (p, &(al, xi)) in arrow_pairs.iter().enumerate() {
            if al >= a.n_arrows() || xi >= nk1 || arrow_of[al * nk1 + xi] != usize::MAX {
                return bad("arrow labeling is not a bijection");
            }
            arrow_of[al * nk1 + xi] = p;
        }
        for (p, &(al, xi)) in arrow_pairs.iter().enumerate() {
            if object_pairs[g.src(p)] != (a.src(al), k.src(xi)) {
                return bad("source is not the product source");
            }
            if object_pairs[g.tgt(p)].1 != k.tgt(xi) {
                return bad("target does not cover the base target");
            }
            if k.is_unit(xi) && object_pairs[g.tgt(p)] != (a.tgt(al), k.tgt(xi)) {
                return bad("target over an identity is not the product target");
            }
        }
        for o in 0..g.n_objects() {
            let (x, y) = object_pairs[o];
            if arrow_pairs[g.unit(o)] != (a.unit(x), k.unit(y)) {
                return bad("unit is not the product unit");
            }
        }
        let f0 = object_pairs.iter().map(|&(_, y)| y).collect();
        let f1 = arrow_pairs.iter().map(|&(_, xi)| xi).collect();
        let projection = StrictMorphism::new(&g, k, f0, f1).map_err(|_| ExtensionError::NotAProductBundle(String::from("projection is not a functor")))?;
        for y in 0..nk0 {
            let u = k.unit(y);
            for al in 0..a.n_arrows() {
                for &be in a.arrows_from(a.tgt(al)) {
                    let p = g.mul(arrow_of[al * nk1 + u], arrow_of[be * nk1 + u]);
                    if arrow_pairs[p] != (a.mul(al, be), u) {
                        return bad("fiber multiplication differs from the fiber groupoid");
                    }
                }
            }
        }
        Ok(ExtensionGroupoid { groupoid: g, projection, arrow_pairs, object_pairs, arrow_of, object_of, nk1, nk0, provenance: None })
    }

    /// Reads the labeling from identifiers of the form `(x,y)`.
    pub fn from_identifiers(ctx: &ExtensionContext, g: FiniteGroupoid) -> Result<Self, ExtensionError> {
        let (a, k) = (&ctx.a, &ctx.k);
        let split = |id: &str, left: &dyn Fn(&str) -> Option<usize>, right: &dyn Fn(&str) -> Option<usize>| {
            let inner = id.strip_prefix('(')?.strip_suffix(')')?;
            let mut found = None;
            for (i, c) in inner.char_indices() {
                if c == ',' {
                    if let (Some(x), Some(y)) = (left(&inner[..i]), right(&inner[i + 1..])) {
                        if found.is_some() {
                            return None;
                        }
                        found = Some((x, y));
                    }
                }
            }
            found
        };
        let mut ops = Vec::new();
        for o in 0..g.n_objects() {
            ops.push(
                split(g.object_id(o), &|s| a.object_index(s), &|s| k.object_index(s))
                    .ok_or_else(|| ExtensionError::NotAProductBundle(format!("object {} is not a pair", g.object_id(o))))?,
            );
        }
        let mut aps = Vec::new();
        for p in 0..g.n_arrows() {
            aps.push(
                split(g.arrow_id(p), &|s| a.arrow_index(s), &|s| k.arrow_index(s))
                    .ok_or_else(|| ExtensionError::NotAProductBundle(format!("arrow {} is not a pair", g.arrow_id(p))))?,
            );
        }
        Self::from_labeling(ctx, g, ops, aps)
    }
}

/// The groupoid `A ⋊_{Λ,Ω} K`.
pub fn build_extension(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Result<ExtensionGroupoid, ExtensionError> {
    let rep = check_generalized_cocycle(ctx, gc);
    if !rep.structural.is_empty() {
        return Err(ExtensionError::Malformed(rep.structural.join("; ")));
    }
    if let Some(&(xi, eta, zeta, a)) = rep.violations.first() {
        return Err(ExtensionError::CocycleViolation { xi, eta, zeta, a });
    }
    build_unchecked(ctx, gc)
}

fn build_unchecked(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Result<ExtensionGroupoid, ExtensionError> {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l = &gc.lambda;
    let (na0, na1, nk0, nk1) = (a.n_objects(), a.n_arrows(), k.n_objects(), k.n_arrows());
    let mut objects = Vec::with_capacity(na0 * nk0);
    for x in 0..na0 {
        for y in 0..nk0 {
            objects.push(format!("({},{})", a.object_id(x), k.object_id(y)));
        }
    }
    let mut arrows = Vec::with_capacity(na1 * nk1);
    let mut inverses = Vec::with_capacity(na1 * nk1);
    for al in 0..na1 {
        for xi in 0..nk1 {
            arrows.push((
                format!("({},{})", a.arrow_id(al), k.arrow_id(xi)),
                a.src(al) * nk0 + k.src(xi),
                s.obj(l[xi], a.tgt(al)) * nk0 + k.tgt(xi),
            ));
            // (Λ_ξ(α⁻¹) · Λ_{ξ⁻¹}⁻¹[Ω(ξ,ξ⁻¹,sα)⁻¹], ξ⁻¹)
            let xv = k.inv(xi);
            let w = a.inv(gc.om(ctx, xi, xv, a.src(al)));
            let g = a.mul(s.arr(l[xi], a.inv(al)), s.arr(s.inverse(l[xv]), w));
            inverses.push(g * nk1 + xv);
        }
    }
    let units = (0..na0).flat_map(|x| (0..nk0).map(move |y| (x, y))).map(|(x, y)| a.unit(x) * nk1 + k.unit(y)).collect();
    // cached Λ_{ξη}⁻¹Λ_ηΛ_ξ and Λ_{ξη}⁻¹Λ_η per pair
    let m_of: Vec<(usize, usize)> = ctx
        .pairs
        .tuples
        .iter()
        .map(|t| {
            let inv_xe = s.inverse(l[k.mul(t[0], t[1])]);
            (ctx.defect(l, t[0], t[1]), s.compose(inv_xe, l[t[1]]))
        })
        .collect();
    let (g, re) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| {
        let (al, xi) = (p / nk1, p % nk1);
        let (be, eta) = (q / nk1, q % nk1);
        let pi = ctx.pair(xi, eta);
        let (m, n) = m_of[pi];
        let first = a.mul_all(&[gc.omega[pi][a.src(al)], s.arr(m, al), s.arr(n, be)]);
        first * nk1 + k.mul(xi, eta)
    })
    .map_err(|e| ExtensionError::Internal(format!("built structure is not a groupoid: {e}")))?;
    let mut object_pairs = vec![(0, 0); na0 * nk0];
    for (old, &new) in re.objects.iter().enumerate() {
        object_pairs[new] = (old / nk0, old % nk0);
    }
    let mut arrow_pairs = vec![(0, 0); na1 * nk1];
    for (old, &new) in re.arrows.iter().enumerate() {
        arrow_pairs[new] = (old / nk1, old % nk1);
    }
    let mut ext = ExtensionGroupoid::from_labeling(ctx, g, object_pairs, arrow_pairs)?;
    ext.provenance = Some(gc.clone());
    Ok(ext)
}

/// Reads `(Λ, Ω)` off a product bundle.
pub fn extract_cocycle(ctx: &ExtensionContext, ext: &ExtensionGroupoid) -> Result<GeneralizedCocycle, ExtensionError> {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let g = &ext.groupoid;
    let first = |p: Arr| ext.arrow_pairs[p].0;
    let mut lambda = Vec::with_capacity(k.n_arrows());
    for xi in 0..k.n_arrows() {
        let x = k.src(xi);
        let f0: Vec<Obj> = (0..a.n_objects()).map(|c| ext.object_pairs[g.tgt(ext.arrow(a.unit(c), xi))].0).collect();
        let f1: Vec<Arr> = (0..a.n_arrows())
            .map(|al| {
                let left = g.inv(ext.arrow(a.unit(a.src(al)), xi));
                let mid = ext.arrow(al, k.unit(x));
                let right = ext.arrow(a.unit(a.tgt(al)), xi);
                first(g.mul_all(&[left, mid, right]))
            })
            .collect();
        let f = StrictMorphism::new(a, a, f0, f1).map_err(|_| ExtensionError::PreActionNotAutomorphism(xi))?;
        let idx = s.index_of(&f).ok_or(ExtensionError::PreActionNotAutomorphism(xi))?;
        lambda.push(idx);
    }
    let mut omega = Vec::with_capacity(ctx.pairs.len());
    for t in &ctx.pairs.tuples {
        let (xi, eta) = (t[0], t[1]);
        let xe = k.mul(xi, eta);
        let w = (0..a.n_objects())
            .map(|x| {
                let a1 = s.obj(lambda[xi], x);
                let a4 = s.obj(ctx.defect(&lambda, xi, eta), x);
                let p = g.mul_all(&[
                    ext.arrow(a.unit(x), xi),
                    ext.arrow(a.unit(a1), eta),
                    g.inv(ext.arrow(a.unit(a4), xe)),
                ]);
                first(p)
            })
            .collect();
        omega.push(w);
    }
    Ok(GeneralizedCocycle { lambda, omega })
}

/// The isomorphism `G → A ⋊_{Λ,Ω} K` for the extracted cocycle, checked to
/// be a groupoid isomorphism over `K` that fixes the fiber.
pub fn extension_round_trip(
    ctx: &ExtensionContext,
    ext: &ExtensionGroupoid,
) -> Result<(GeneralizedCocycle, ExtensionGroupoid, StrictMorphism), ExtensionError> {
    let gc = extract_cocycle(ctx, ext)?;
    let built = build_extension(ctx, &gc)?;
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let g = &ext.groupoid;
    let f0: Vec<Obj> = (0..g.n_objects()).map(|o| built.object(ext.object_pairs[o].0, ext.object_pairs[o].1)).collect();
    let f1: Vec<Arr> = (0..g.n_arrows())
        .map(|p| {
            let xi = ext.arrow_pairs[p].1;
            let b = ext.object_pairs[g.tgt(p)].0;
            let c = s.obj(s.inverse(gc.lambda[xi]), b);
            let q = g.mul(p, g.inv(ext.arrow(a.unit(c), xi)));
            built.arrow(ext.arrow_pairs[q].0, xi)
        })
        .collect();
    let phi = StrictMorphism::new(g, &built.groupoid, f0, f1)
        .map_err(|e| ExtensionError::Internal(format!("round-trip map is not a functor: {e}")))?;
    if !phi.is_bijective(&built.groupoid) {
        return Err(ExtensionError::Internal(String::from("round-trip map is not bijective")));
    }
    for p in 0..g.n_arrows() {
        let (al, xi) = ext.arrow_pairs[p];
        let q = phi.f1[p];
        if built.arrow_pairs[q].1 != xi || (k.is_unit(xi) && built.arrow_pairs[q].0 != al) {
            return Err(ExtensionError::Internal(String::from("round-trip map does not cover the base or fix the fiber")));
        }
    }
    Ok((gc, built, phi))
}

/// Raw obstruction values `Ξ(ξ,η,ζ)(a)` (loops of `A`) per triple.
pub fn obstruction_values(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Vec<Vec<Arr>> {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l = &gc.lambda;
    ctx.triples
        .tuples
        .iter()
        .map(|t| {
            let (xi, eta, zeta) = (t[0], t[1], t[2]);
            let (xe, ez) = (k.mul(xi, eta), k.mul(eta, zeta));
            let li = s.inverse(l[xi]);
            (0..a.n_objects())
                .map(|x| {
                    let a1 = s.obj(l[xi], x);
                    let a4 = s.obj(ctx.defect(l, xi, eta), x);
                    let a5 = s.obj(li, s.obj(s.inverse(l[ez]), s.obj(l[zeta], s.obj(l[eta], a1))));
                    a.mul_all(&[
                        gc.om(ctx, xi, eta, x),
                        gc.om(ctx, xe, zeta, a4),
                        a.inv(gc.om(ctx, xi, ez, a5)),
                        s.arr(li, a.inv(gc.om(ctx, eta, zeta, a1))),
                    ])
                })
                .collect()
        })
        .collect()
}

/// The three cyclically rotated forms of the obstruction, per triple.
pub fn obstruction_variants(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> [Vec<Vec<Arr>>; 3] {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l = &gc.lambda;
    let inv = |f: usize| s.inverse(f);
    // applies automorphisms right to left, as written
    let ap = |fs: &[usize], x: Obj| fs.iter().rev().fold(x, |y, &f| s.obj(f, y));
    let om = |xi: Arr, eta: Arr, x: Obj| gc.om(ctx, xi, eta, x);
    let mut out: [Vec<Vec<Arr>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for t in &ctx.triples.tuples {
        let (xi, eta, zeta) = (t[0], t[1], t[2]);
        let (xe, ez, xez) = (k.mul(xi, eta), k.mul(eta, zeta), k.mul(k.mul(xi, eta), zeta));
        let (lx, le, lz, lxe, lez, lxez) = (l[xi], l[eta], l[zeta], l[xe], l[ez], l[xez]);
        let mut v1 = Vec::new();
        let mut v2 = Vec::new();
        let mut v3 = Vec::new();
        for x in 0..a.n_objects() {
            let b1 = ap(&[inv(lx), inv(lez), lz, lxe], x);
            let b2 = ap(&[inv(le), lxe], x);
            let b3 = ap(&[inv(lx), inv(le), lxe], x);
            v1.push(a.mul_all(&[om(xe, zeta, x), a.inv(om(xi, ez, b1)), s.arr(inv(lx), a.inv(om(eta, zeta, b2))), om(xi, eta, b3)]));
            let c1 = ap(&[inv(lx), inv(lez), lxez], x);
            let c2 = ap(&[inv(le), inv(lz), lxez], x);
            let c3 = ap(&[inv(lx), inv(le), inv(lz), lxez], x);
            let c4 = ap(&[inv(lxe), inv(lz), lxez], x);
            v2.push(a.mul_all(&[a.inv(om(xi, ez, c1)), s.arr(inv(lx), a.inv(om(eta, zeta, c2))), om(xi, eta, c3), om(xe, zeta, c4)]));
            let d1 = ap(&[inv(le), inv(lz), lez, lx], x);
            let d2 = ap(&[inv(lx), inv(le), inv(lz), lez, lx], x);
            let d3 = ap(&[inv(lxe), inv(lz), lez, lx], x);
            v3.push(a.mul_all(&[s.arr(inv(lx), a.inv(om(eta, zeta, d1))), om(xi, eta, d2), om(xe, zeta, d3), a.inv(om(xi, ez, x))]));
        }
        out[0].push(v1);
        out[1].push(v2);
        out[2].push(v3);
    }
    out
}

/// The induced module on the center for a lifting.
pub fn center_module(ctx: &ExtensionContext, lambda: &[usize]) -> Result<KModule, ExtensionError> {
    Ok(induced_action(&ctx.a, &ctx.data, &ctx.k, lambda, ctx.convention)?)
}

/// `Ξ` as a 3-cochain with values in the center. Fails if some value is not
/// a central section.
pub fn obstruction(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Result<Cochain, ExtensionError> {
    let structural = structural_check(ctx, gc);
    if !structural.is_empty() {
        return Err(ExtensionError::Malformed(structural.join("; ")));
    }
    let a = &ctx.a;
    let center = &ctx.data.center;
    let vals = obstruction_values(ctx, gc);
    let mut values = Vec::with_capacity(vals.len());
    for (ti, v) in vals.iter().enumerate() {
        for x in 0..a.n_objects() {
            let g = v[x];
            if a.src(g) != x || a.tgt(g) != x || a.loops(x).iter().any(|&h| a.mul(g, h) != a.mul(h, g)) {
                return Err(ExtensionError::NotCentral { tuple: ti, a: x });
            }
        }
        values.push(center.index_of(v).ok_or(ExtensionError::NotInvariant { tuple: ti })?);
    }
    Ok(Cochain { degree: 3, values })
}

/// Pointwise product `c(ξ,η)(a) · Ω(ξ,η,a)` for a 2-cochain `c` in the center.
pub fn twist(ctx: &ExtensionContext, gc: &GeneralizedCocycle, c: &Cochain) -> GeneralizedCocycle {
    let a = &ctx.a;
    let center = &ctx.data.center;
    let omega = gc
        .omega
        .iter()
        .enumerate()
        .map(|(p, w)| (0..a.n_objects()).map(|x| a.mul(center.value(c.values[p], x), w[x])).collect())
        .collect();
    GeneralizedCocycle { lambda: gc.lambda.clone(), omega }
}

/// Trivializes the obstruction: returns `c` with `dc = Ξ` and the cocycle
/// `c⁻¹·Ω`, or the class of `Ξ` when it is nonzero.
pub fn trivialize_obstruction(
    ctx: &ExtensionContext,
    gc: &GeneralizedCocycle,
    h3: &CohomologyGroup,
    m: &KModule,
) -> Result<(Cochain, GeneralizedCocycle), ExtensionError> {
    let xi = obstruction(ctx, gc)?;
    let class = h3.class_of(m, &xi)?;
    if !class.is_zero() {
        return Err(ExtensionError::ObstructionNonzero(class.coords));
    }
    let c = class.witness.ok_or_else(|| ExtensionError::Internal(String::from("missing witness")))?;
    let fixed = twist(ctx, gc, &c.neg(m));
    let rep = check_generalized_cocycle(ctx, &fixed);
    if !rep.is_ok() {
        return Err(ExtensionError::Internal(String::from("trivialized cofactor fails the cocycle condition")));
    }
    Ok((c, fixed))
}

/// Searches `ρ(ξ): Λ_ξ ⇒ Λ'_ξ` with `ρ(1_x)` the unit and
/// `Ω'(ξ,η) = Ω(ξ,η) ⊙ [ρ(ξη)^{⊛,−1} ⊛ ρ(η) ⊛ ρ(ξ)]`.
pub fn cocycle_equivalent(
    ctx: &ExtensionContext,
    gc1: &GeneralizedCocycle,
    gc2: &GeneralizedCocycle,
) -> Result<Option<Vec<Vec<Arr>>>, ExtensionError> {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let co = &ctx.data.coarse;
    let (l1, l2) = (&gc1.lambda, &gc2.lambda);
    if l1.len() != k.n_arrows() || l2.len() != k.n_arrows() {
        return Err(ExtensionError::LiftingShape);
    }
    if (0..k.n_arrows()).any(|g| co.coset_of[l1[g]] != co.coset_of[l2[g]]) {
        return Err(ExtensionError::BandMismatch);
    }
    let n = k.n_arrows();
    let units = ctx.units();
    let mut rho: Vec<Option<Vec<Arr>>> = vec![None; n];
    for x in 0..k.n_objects() {
        rho[k.unit(x)] = Some(units.clone());
    }
    let vars: Vec<Arr> = (0..n).filter(|&g| !k.is_unit(g)).collect();
    let mut pos = vec![usize::MAX; n];
    for (i, &g) in vars.iter().enumerate() {
        pos[g] = i;
    }
    let mut checks: Vec<Vec<(Arr, Arr)>> = vec![Vec::new(); vars.len()];
    let mut always = Vec::new();
    for t in &ctx.pairs.tuples {
        let (xi, eta) = (t[0], t[1]);
        let last = [xi, eta, k.mul(xi, eta)].iter().filter(|&&g| pos[g] != usize::MAX).map(|&g| pos[g]).max();
        match last {
            Some(i) => checks[i].push((xi, eta)),
            None => always.push((xi, eta)),
        }
    }
    let holds = |rho: &[Option<Vec<Arr>>], xi: Arr, eta: Arr| -> bool {
        let xe = k.mul(xi, eta);
        let (rx, re, rxe) = (rho[xi].as_ref().unwrap(), rho[eta].as_ref().unwrap(), rho[xe].as_ref().unwrap());
        let l1xe_inv = s.inverse(l1[xe]);
        let l2xe_inv = s.inverse(l2[xe]);
        let p = ctx.pair(xi, eta);
        (0..a.n_objects()).all(|x| {
            // X = ρ(η) ⊛ ρ(ξ): Λ_ηΛ_ξ ⇒ Λ'_ηΛ'_ξ
            let xv = |y: Obj| a.mul(s.arr(l1[eta], rx[y]), re[s.obj(l2[xi], y)]);
            // Y = ρ(ξη)^{⊛,−1}: Λ_{ξη}⁻¹ ⇒ Λ'_{ξη}⁻¹
            let yv = |y: Obj| a.inv(s.arr(l1xe_inv, rxe[s.obj(l2xe_inv, y)]));
            // Z = Y ⊛ X
            let z = a.mul(s.arr(l1xe_inv, xv(x)), yv(s.obj(l2[eta], s.obj(l2[xi], x))));
            a.mul(gc1.omega[p][x], z) == gc2.omega[p][x]
        })
    };
    if !always.iter().all(|&(x, y)| holds(&rho, x, y)) {
        return Ok(None);
    }
    fn rec(
        i: usize,
        vars: &[Arr],
        rho: &mut Vec<Option<Vec<Arr>>>,
        domains: &[&[Vec<Arr>]],
        checks: &[Vec<(Arr, Arr)>],
        holds: &dyn Fn(&[Option<Vec<Arr>>], Arr, Arr) -> bool,
    ) -> bool {
        if i == vars.len() {
            return true;
        }
        for cand in domains[i] {
            rho[vars[i]] = Some(cand.clone());
            if checks[i].iter().all(|&(x, y)| holds(rho, x, y)) && rec(i + 1, vars, rho, domains, checks, holds) {
                return true;
            }
        }
        rho[vars[i]] = None;
        false
    }
    let domains: Vec<&[Vec<Arr>]> = vars.iter().map(|&g| s.transformations(l1[g], l2[g])).collect();
    if rec(0, &vars, &mut rho, &domains, &checks, &holds) {
        Ok(Some(rho.into_iter().map(|r| r.unwrap()).collect()))
    } else {
        Ok(None)
    }
}

/// Modifies `gc` by a family `ρ(ξ): Λ_ξ ⇒ Λ'_ξ`, giving the equivalent
/// cocycle with lifting `Λ'` (the targets of `ρ`).
pub fn transport_cocycle(
    ctx: &ExtensionContext,
    gc: &GeneralizedCocycle,
    lambda2: &[usize],
    rho: &[Vec<Arr>],
) -> GeneralizedCocycle {
    let (a, k, s) = (&ctx.a, &ctx.k, &ctx.data.saut);
    let l1 = &gc.lambda;
    let omega = ctx
        .pairs
        .tuples
        .iter()
        .enumerate()
        .map(|(p, t)| {
            let (xi, eta) = (t[0], t[1]);
            let xe = k.mul(xi, eta);
            let l1xe_inv = s.inverse(l1[xe]);
            let l2xe_inv = s.inverse(lambda2[xe]);
            (0..a.n_objects())
                .map(|x| {
                    let xv = |y: Obj| a.mul(s.arr(l1[eta], rho[xi][y]), rho[eta][s.obj(lambda2[xi], y)]);
                    let yv = |y: Obj| a.inv(s.arr(l1xe_inv, rho[xe][s.obj(l2xe_inv, y)]));
                    let z = a.mul(s.arr(l1xe_inv, xv(x)), yv(s.obj(lambda2[eta], s.obj(lambda2[xi], x))));
                    a.mul(gc.omega[p][x], z)
                })
                .collect()
        })
        .collect();
    GeneralizedCocycle { lambda: lambda2.to_vec(), omega }
}

/// Searches an isomorphism `G₁ → G₂` covering the identity of `K` and
/// fixing every fiber arrow `(α, 1_x)`.
pub fn extensions_isomorphic(
    ctx: &ExtensionContext,
    e1: &ExtensionGroupoid,
    e2: &ExtensionGroupoid,
) -> Result<Option<StrictMorphism>, ExtensionError> {
    let (a, k) = (&ctx.a, &ctx.k);
    let (g1, g2) = (&e1.groupoid, &e2.groupoid);
    if g1.n_arrows() != g2.n_arrows() || g1.n_objects() != g2.n_objects() || e1.nk1 != k.n_arrows() || e2.nk1 != k.n_arrows() {
        return Err(ExtensionError::ShapeMismatch);
    }
    // objects are fixed
    let f0: Vec<Obj> = (0..g1.n_objects()).map(|o| e2.object(e1.object_pairs[o].0, e1.object_pairs[o].1)).collect();
    // variable (c, ξ) for every object c of A and non-identity ξ
    let nonid: Vec<Arr> = (0..k.n_arrows()).filter(|&g| !k.is_unit(g)).collect();
    let na0 = a.n_objects();
    let nvars = na0 * nonid.len();
    let mut var_of_xi = vec![usize::MAX; k.n_arrows()];
    for (i, &g) in nonid.iter().enumerate() {
        var_of_xi[g] = i;
    }
    let var = |c: Obj, xi: Arr| var_of_xi[xi] * na0 + c;
    // decomposition of each arrow: p = kernel · (1_c, ξ)
    let decomp: Vec<Option<(Arr, usize)>> = (0..g1.n_arrows())
        .map(|p| {
            let (al, xi) = e1.arrow_pairs[p];
            if k.is_unit(xi) {
                return None;
            }
            let b = g1.tgt(p);
            let c = (0..na0).find(|&c| g1.tgt(e1.arrow(a.unit(c), xi)) == b).expect("pre-action is bijective");
            let kern = g1.mul(p, g1.inv(e1.arrow(a.unit(c), xi)));
            let _ = al;
            Some((e1.arrow_pairs[kern].0, var(c, xi)))
        })
        .collect();
    let image = |assign: &[usize], p: Arr| -> Option<Arr> {
        match decomp[p] {
            None => {
                let (al, xi) = e1.arrow_pairs[p];
                Some(e2.arrow(al, xi))
            }
            Some((kal, v)) => {
                if assign[v] == usize::MAX {
                    return None;
                }
                let (_, xi) = e1.arrow_pairs[p];
                let ku = k.unit(k.src(xi));
                Some(g2.mul(e2.arrow(kal, ku), assign[v]))
            }
        }
    };
    let domains: Vec<Vec<Arr>> = (0..nvars)
        .map(|v| {
            let (xi, c) = (nonid[v / na0], v % na0);
            let gen = e1.arrow(a.unit(c), xi);
            let (src, tgt) = (f0[g1.src(gen)], f0[g1.tgt(gen)]);
            g2.hom(src, tgt).filter(|&q| e2.arrow_pairs[q].1 == xi).collect()
        })
        .collect();
    let var_of_arrow = |p: Arr| decomp[p].map(|(_, v)| v);
    let mut checks: Vec<Vec<(Arr, Arr)>> = vec![Vec::new(); nvars];
    let mut always = Vec::new();
    for p in 0..g1.n_arrows() {
        for &q in g1.arrows_from(g1.tgt(p)) {
            let pq = g1.mul(p, q);
            let last = [p, q, pq].iter().filter_map(|&x| var_of_arrow(x)).max();
            match last {
                Some(v) => checks[v].push((p, q)),
                None => always.push((p, q)),
            }
        }
    }
    let holds = |assign: &[usize], p: Arr, q: Arr| -> bool {
        match (image(assign, p), image(assign, q), image(assign, g1.mul(p, q))) {
            (Some(x), Some(y), Some(z)) => g2.compose(x, y) == Some(z),
            _ => true,
        }
    };
    let mut assign = vec![usize::MAX; nvars];
    if !always.iter().all(|&(p, q)| holds(&assign, p, q)) {
        return Ok(None);
    }
    fn rec(
        v: usize,
        assign: &mut Vec<usize>,
        domains: &[Vec<Arr>],
        checks: &[Vec<(Arr, Arr)>],
        holds: &dyn Fn(&[usize], Arr, Arr) -> bool,
    ) -> bool {
        if v == domains.len() {
            return true;
        }
        for &c in &domains[v] {
            assign[v] = c;
            if checks[v].iter().all(|&(p, q)| holds(assign, p, q)) && rec(v + 1, assign, domains, checks, holds) {
                return true;
            }
        }
        assign[v] = usize::MAX;
        false
    }
    if !rec(0, &mut assign, &domains, &checks, &holds) {
        return Ok(None);
    }
    let f1: Vec<Arr> = (0..g1.n_arrows()).map(|p| image(&assign, p).unwrap()).collect();
    let phi = StrictMorphism::new(g1, g2, f0, f1).map_err(|e| ExtensionError::Internal(format!("{e}")))?;
    if !phi.is_bijective(g2) {
        return Err(ExtensionError::Internal(String::from("fiber-preserving functor is not bijective")));
    }
    Ok(Some(phi))
}

/// Every generalized cocycle with lifting `lambda`, in lexicographic order of
/// the cofactor; fails beyond `limit` solutions.
pub fn enumerate_cocycles(
    ctx: &ExtensionContext,
    lambda: &[usize],
    limit: usize,
) -> Result<Vec<GeneralizedCocycle>, ExtensionError> {
    let k = &ctx.k;
    let cands = omega_candidates(ctx, lambda)?;
    let np = ctx.pairs.len();
    let vars: Vec<usize> = (0..np).filter(|&p| cands[p].len() > 1 || !ctx.pairs.tuples[p].iter().any(|&g| k.is_unit(g))).collect();
    let mut pos = vec![usize::MAX; np];
    for (i, &p) in vars.iter().enumerate() {
        pos[p] = i;
    }
    let mut checks: Vec<Vec<(Arr, Arr, Arr)>> = vec![Vec::new(); vars.len()];
    let mut always = Vec::new();
    for t in &ctx.triples.tuples {
        let (xi, eta, zeta) = (t[0], t[1], t[2]);
        let (xe, ez) = (k.mul(xi, eta), k.mul(eta, zeta));
        let involved = [ctx.pair(xi, eta), ctx.pair(xe, zeta), ctx.pair(eta, zeta), ctx.pair(xi, ez)];
        match involved.iter().filter(|&&p| pos[p] != usize::MAX).map(|&p| pos[p]).max() {
            Some(i) => checks[i].push((xi, eta, zeta)),
            None => always.push((xi, eta, zeta)),
        }
    }
    let mut gc = GeneralizedCocycle { lambda: lambda.to_vec(), omega: cands.iter().map(|c| c[0].clone()).collect() };
    let na0 = ctx.a.n_objects();
    let ok = |gc: &GeneralizedCocycle, t: &(Arr, Arr, Arr)| (0..na0).all(|x| cocycle_holds_at(ctx, gc, t.0, t.1, t.2, x));
    if !always.iter().all(|t| ok(&gc, t)) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    struct S<'a> {
        vars: &'a [usize],
        cands: &'a [Vec<Vec<Arr>>],
        checks: &'a [Vec<(Arr, Arr, Arr)>],
        limit: usize,
    }
    fn rec(
        i: usize,
        st: &S,
        gc: &mut GeneralizedCocycle,
        ok: &dyn Fn(&GeneralizedCocycle, &(Arr, Arr, Arr)) -> bool,
        out: &mut Vec<GeneralizedCocycle>,
    ) -> bool {
        if i == st.vars.len() {
            out.push(gc.clone());
            return out.len() <= st.limit;
        }
        let p = st.vars[i];
        for c in &st.cands[p] {
            gc.omega[p] = c.clone();
            if st.checks[i].iter().all(|t| ok(gc, t)) && !rec(i + 1, st, gc, ok, out) {
                return false;
            }
        }
        true
    }
    let st = S { vars: &vars, cands: &cands, checks: &checks, limit };
    if !rec(0, &st, &mut gc, &ok, &mut out) {
        return Err(ExtensionError::CapExceeded(limit));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct ExtensionClass {
    /// Coordinates in the degree-two cohomology of the base.
    pub coords: Vec<u64>,
    pub cocycle: GeneralizedCocycle,
    pub extension: ExtensionGroupoid,
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub band: Band,
    pub module: KModule,
    /// Cocycle obtained from the canonical lifting after trivializing the
    /// obstruction.
    pub reference: GeneralizedCocycle,
    pub h2: CohomologyGroup,
    pub classes: Vec<ExtensionClass>,
}

#[derive(Clone, Debug)]
pub enum ClassifyOutcome {
    Classified(Classification),
    /// The obstruction class is nonzero; carries its coordinates and the
    /// obstruction cocycle of the canonical lifting.
    Obstructed { coords: Vec<u64>, xi: Cochain, h3: CohomologyGroup },
}

pub fn classify(ctx: &ExtensionContext, band: &Band, opts: CohomologyOptions) -> Result<ClassifyOutcome, ExtensionError> {
    let opts = CohomologyOptions { normalized: true, ..opts };
    let gc0 = GeneralizedCocycle::canonical(ctx, band)?;
    let m = center_module(ctx, &gc0.lambda)?;
    let h3 = cohomology(&m, 3, Backend::Snf, opts)?;
    let xi = obstruction(ctx, &gc0)?;
    let class = h3.class_of(&m, &xi)?;
    if !class.is_zero() {
        return Ok(ClassifyOutcome::Obstructed { coords: class.coords, xi, h3 });
    }
    let (_, reference) = trivialize_obstruction(ctx, &gc0, &h3, &m)?;
    let h2 = cohomology(&m, 2, Backend::Snf, opts)?;
    let mut classes = Vec::new();
    for coords in h2.elements() {
        let z = h2.element(&m, &coords);
        let cocycle = twist(ctx, &reference, &z);
        let extension = build_extension(ctx, &cocycle)?;
        classes.push(ExtensionClass { coords, cocycle, extension });
    }
    Ok(ClassifyOutcome::Classified(Classification { band: band.clone(), module: m, reference, h2, classes }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationCheck {
    pub pairwise_distinct: bool,
    /// Cocycles found by exhaustive search over every lifting.
    pub searched: usize,
    /// Each searched cocycle is equivalent to exactly one class.
    pub each_matches_one: bool,
    /// Fiber-isomorphism agrees with cocycle equivalence on class pairs.
    pub isomorphism_agrees: bool,
}

impl ClassificationCheck {
    pub fn all(&self) -> bool {
        self.pairwise_distinct && self.each_matches_one && self.isomorphism_agrees
    }
}

pub fn verify_classification(
    ctx: &ExtensionContext,
    cls: &Classification,
    lifting_limit: usize,
    cocycle_limit: usize,
) -> Result<ClassificationCheck, ExtensionError> {
    let n = cls.classes.len();
    let mut pairwise_distinct = true;
    let mut isomorphism_agrees = true;
    for i in 0..n {
        for j in 0..n {
            let eq = cocycle_equivalent(ctx, &cls.classes[i].cocycle, &cls.classes[j].cocycle)?.is_some();
            if (i == j) != eq {
                pairwise_distinct = false;
            }
            let iso = extensions_isomorphic(ctx, &cls.classes[i].extension, &cls.classes[j].extension)?.is_some();
            if iso != eq {
                isomorphism_agrees = false;
            }
        }
    }
    let mut searched = 0;
    let mut each_matches_one = true;
    for lambda in all_liftings(ctx, &cls.band, lifting_limit)? {
        for gc in enumerate_cocycles(ctx, &lambda, cocycle_limit)? {
            searched += 1;
            let mut hits = 0;
            for c in &cls.classes {
                if cocycle_equivalent(ctx, &c.cocycle, &gc)?.is_some() {
                    hits += 1;
                }
            }
            if hits != 1 {
                each_matches_one = false;
            }
        }
    }
    Ok(ClassificationCheck { pairwise_distinct, searched, each_matches_one, isomorphism_agrees })
}

/// Pullback along a functor `f: K' → K` (with `ctx2` having base `K'`):
/// `Λ' = Λ∘f`, `Ω'(ξ,η) = Ω(f ξ, f η)`.
pub fn pullback_along(
    ctx: &ExtensionContext,
    ctx2: &ExtensionContext,
    f: &StrictMorphism,
    gc: &GeneralizedCocycle,
) -> GeneralizedCocycle {
    let lambda = f.f1.iter().map(|&g| gc.lambda[g]).collect();
    let omega = ctx2.pairs.tuples.iter().map(|t| gc.omega[ctx.pair(f.f1[t[0]], f.f1[t[1]])].clone()).collect();
    GeneralizedCocycle { lambda, omega }
}

/// The cocycle over the refinement `K[U]`, with the context over it.
pub fn pullback_cocycle(
    ctx: &ExtensionContext,
    gc: &GeneralizedCocycle,
    u: &OpenCover,
) -> Result<(ExtensionContext, GeneralizedCocycle), ExtensionError> {
    let r = refine(&ctx.k, u)?;
    let ctx2 = ctx.with_base(r.groupoid.clone());
    let gc2 = pullback_along(ctx, &ctx2, &r.projection, gc);
    Ok((ctx2, gc2))
}

/// The fiber product of `ext → K ← K'` along `f`, labeled as a product
/// bundle over `K'`.
pub fn pullback_extension(
    ctx: &ExtensionContext,
    ctx2: &ExtensionContext,
    f: &StrictMorphism,
    ext: &ExtensionGroupoid,
) -> Result<ExtensionGroupoid, ExtensionError> {
    let g = &ext.groupoid;
    let k2 = &ctx2.k;
    let phi = &ext.projection;
    let mut objs = Vec::new();
    for o in 0..g.n_objects() {
        for p in 0..k2.n_objects() {
            if phi.f0[o] == f.f0[p] {
                objs.push((o, p));
            }
        }
    }
    let oidx: BTreeMap<(Obj, Obj), usize> = objs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut arrs = Vec::new();
    for q in 0..g.n_arrows() {
        for h in 0..k2.n_arrows() {
            if phi.f1[q] == f.f1[h] {
                arrs.push((q, h));
            }
        }
    }
    let aidx: BTreeMap<(Arr, Arr), usize> = arrs.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let objects: Vec<String> = objs
        .iter()
        .map(|&(o, p)| format!("({},{})", ctx.a.object_id(ext.object_pairs[o].0), k2.object_id(p)))
        .collect();
    let arrows: Vec<(String, Obj, Obj)> = arrs
        .iter()
        .map(|&(q, h)| {
            (
                format!("({},{})", ctx.a.arrow_id(ext.arrow_pairs[q].0), k2.arrow_id(h)),
                oidx[&(g.src(q), k2.src(h))],
                oidx[&(g.tgt(q), k2.tgt(h))],
            )
        })
        .collect();
    let units = objs.iter().map(|&(o, p)| aidx[&(g.unit(o), k2.unit(p))]).collect();
    let inverses = arrs.iter().map(|&(q, h)| aidx[&(g.inv(q), k2.inv(h))]).collect();
    let (pg, _) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |i, j| {
        let (q1, h1) = arrs[i];
        let (q2, h2) = arrs[j];
        aidx[&(g.mul(q1, q2), k2.mul(h1, h2))]
    })
    .map_err(|e| ExtensionError::Internal(format!("fiber product: {e}")))?;
    ExtensionGroupoid::from_identifiers(ctx2, pg)
}

/// Compares cocycles given over refinements `K[U]` and `K[V]` by pulling
/// both back to the common refinement `K[W]`.
pub fn equivalent_over_refinements(
    ctx: &ExtensionContext,
    u: &OpenCover,
    gc_u: &GeneralizedCocycle,
    v: &OpenCover,
    gc_v: &GeneralizedCocycle,
) -> Result<Option<Vec<Vec<Arr>>>, ExtensionError> {
    let k = &ctx.k;
    let (w, to_u, to_v) = common_refinement(k, u, v)?;
    let (ku, kv, kw) = (refine(k, u)?, refine(k, v)?, refine(k, &w)?);
    let iu = refinement_map(&w, &kw, u, &ku, &to_u)?;
    let iv = refinement_map(&w, &kw, v, &kv, &to_v)?;
    let (cu, cv, cw) = (ctx.with_base(ku.groupoid.clone()), ctx.with_base(kv.groupoid.clone()), ctx.with_base(kw.groupoid.clone()));
    let pu = pullback_along(&cu, &cw, &iu, gc_u);
    let pv = pullback_along(&cv, &cw, &iv, gc_v);
    match cocycle_equivalent(&cw, &pu, &pv) {
        Err(ExtensionError::BandMismatch) => Ok(None),
        r => r,
    }
}

/// Any groupoid isomorphism between the total spaces, ignoring the bundle
/// structure. Diagnostic only; classification uses
/// [`extensions_isomorphic`].
pub fn abstract_isomorphism(e1: &ExtensionGroupoid, e2: &ExtensionGroupoid) -> Option<StrictMorphism> {
    crate::iso::find_isomorphism(&e1.groupoid, &e2.groupoid)
}

#[derive(Clone, Debug)]
pub struct ObstructionFinding {
    pub fiber: String,
    pub base: String,
    pub band: Band,
    pub coords: Vec<u64>,
    /// Whether exhaustive search over every lifting found no cocycle;
    /// `None` when the search exceeded its caps.
    pub no_cocycle_exists: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct ObstructionSearch {
    /// Bands whose obstruction class was computed.
    pub examined: usize,
    /// Bands over fibers with trivial center, where the class vanishes.
    pub trivially_zero: usize,
    /// Fibers skipped because their automorphisms exceed the cap.
    pub skipped_fibers: Vec<String>,
    pub findings: Vec<ObstructionFinding>,
}

/// Computes the obstruction class of every band of every base into every
/// fiber. Findings are reported, not assumed to exist.
pub fn search_obstructions(
    fibers: &[(String, FiniteGroupoid)],
    bases: &[(String, FiniteGroupoid)],
    saut_cap: usize,
    lifting_limit: usize,
    cocycle_limit: usize,
) -> Result<ObstructionSearch, ExtensionError> {
    let mut out = ObstructionSearch::default();
    let opts = CohomologyOptions { normalized: true, ..Default::default() };
    for (an, a) in fibers {
        let data = match AutData::compute(a, saut_cap) {
            Ok(d) => Arc::new(d),
            Err(AutError::SizeCapExceeded { .. }) | Err(AutError::TooManyAutomorphisms(_)) => {
                out.skipped_fibers.push(an.clone());
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        for (kn, k) in bases {
            let ctx = ExtensionContext::with_data(a.clone(), k.clone(), data.clone());
            for band in enumerate_bands(&ctx) {
                if data.center.order() == 1 {
                    out.trivially_zero += 1;
                    continue;
                }
                out.examined += 1;
                let gc = GeneralizedCocycle::canonical(&ctx, &band)?;
                let m = center_module(&ctx, &gc.lambda)?;
                let h3 = cohomology(&m, 3, Backend::Snf, opts)?;
                let class = h3.class_of(&m, &obstruction(&ctx, &gc)?)?;
                if class.is_zero() {
                    continue;
                }
                let mut none = Some(true);
                match all_liftings(&ctx, &band, lifting_limit) {
                    Ok(lifts) => {
                        for l in lifts {
                            match enumerate_cocycles(&ctx, &l, cocycle_limit) {
                                Ok(v) if !v.is_empty() => none = Some(false),
                                Ok(_) => {}
                                Err(ExtensionError::CapExceeded(_)) if none == Some(true) => none = None,
                                Err(ExtensionError::CapExceeded(_)) => {}
                                Err(e) => return Err(e),
                            }
                        }
                    }
                    Err(ExtensionError::CapExceeded(_)) => none = None,
                    Err(e) => return Err(e),
                }
                out.findings.push(ObstructionFinding {
                    fiber: an.clone(),
                    base: kn.clone(),
                    band,
                    coords: class.coords,
                    no_cocycle_exists: none,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::cohomology::coboundary;
    use crate::iso::find_isomorphism;

    fn ctx(a: FiniteGroupoid, k: FiniteGroupoid) -> ExtensionContext {
        ExtensionContext::new(a, k, crate::autalg::MAX_AUTOMORPHISMS).unwrap()
    }

    fn classified(c: &ExtensionContext, band: &Band) -> Classification {
        match classify(c, band, CohomologyOptions::default()).unwrap() {
            ClassifyOutcome::Classified(cls) => cls,
            ClassifyOutcome::Obstructed { coords, .. } => panic!("obstructed: {coords:?}"),
        }
    }

    #[test]
    fn trivial_cocycle_gives_the_product() {
        let c = ctx(catalog::cyclic(3), catalog::cyclic(2));
        let gc = GeneralizedCocycle::trivial(&c);
        assert!(check_generalized_cocycle(&c, &gc).is_ok());
        let e = build_extension(&c, &gc).unwrap();
        let (p, _, _) = catalog::product(&c.a, &c.k);
        assert!(find_isomorphism(&e.groupoid, &p).is_some());
        let (back, _, _) = extension_round_trip(&c, &e).unwrap();
        assert_eq!(back, gc);
    }

    #[test]
    fn z2_by_z2_has_two_classes() {
        let c = ctx(catalog::cyclic(2), catalog::cyclic(2));
        let bands = enumerate_bands(&c);
        assert_eq!(bands.len(), 1);
        let cls = classified(&c, &bands[0]);
        assert_eq!(cls.h2.invariant_factors(), vec![2]);
        let groups: Vec<FiniteGroupoid> = cls.classes.iter().map(|x| x.extension.groupoid.clone()).collect();
        let z4 = catalog::cyclic(4);
        let v4 = catalog::klein();
        assert_eq!(groups.iter().filter(|g| find_isomorphism(g, &z4).is_some()).count(), 1);
        assert_eq!(groups.iter().filter(|g| find_isomorphism(g, &v4).is_some()).count(), 1);
        let check = verify_classification(&c, &cls, 1 << 12, 1 << 16).unwrap();
        assert!(check.all(), "{check:?}");
        assert!(check.searched >= 2);
    }

    #[test]
    fn nonabelian_extensions_of_z3_by_z2() {
        // the nontrivial band gives S3 only
        let c = ctx(catalog::cyclic(3), catalog::cyclic(2));
        let bands = enumerate_bands(&c);
        assert_eq!(bands.len(), 2);
        let s3 = catalog::symmetric3();
        let z6 = catalog::cyclic(6);
        let mut seen = Vec::new();
        for b in &bands {
            let cls = classified(&c, b);
            assert_eq!(cls.classes.len(), 1);
            let g = &cls.classes[0].extension.groupoid;
            seen.push((find_isomorphism(g, &s3).is_some(), find_isomorphism(g, &z6).is_some()));
            assert!(verify_classification(&c, &cls, 1 << 12, 1 << 16).unwrap().all());
        }
        seen.sort();
        assert_eq!(seen, vec![(false, true), (true, false)]);
    }

    #[test]
    fn obstruction_is_a_normalized_cocycle() {
        let c = ctx(catalog::klein(), catalog::cyclic(2));
        for band in enumerate_bands(&c) {
            for lambda in all_liftings(&c, &band, 64).unwrap() {
                let cands = omega_candidates(&c, &lambda).unwrap();
                // every choice of cofactor, cycling through candidates
                for shift in 0..4 {
                    let omega = cands.iter().enumerate().map(|(i, v)| v[(i + shift) % v.len()].clone()).collect();
                    let gc = GeneralizedCocycle { lambda: lambda.clone(), omega };
                    let m = center_module(&c, &lambda).unwrap();
                    let xi = obstruction(&c, &gc).unwrap();
                    assert!(coboundary(&m, &xi).unwrap().is_zero(&m));
                    assert!(crate::cohomology::is_normalized(&m, &xi));
                    let raw = obstruction_values(&c, &gc);
                    for v in obstruction_variants(&c, &gc) {
                        assert_eq!(v, raw);
                    }
                    let ok = check_generalized_cocycle(&c, &gc).violations.is_empty();
                    assert_eq!(ok, xi.is_zero(&m));
                }
            }
        }
    }

    #[test]
    fn trivialized_cofactor_satisfies_the_cocycle_condition() {
        let c = ctx(catalog::cyclic(4), catalog::cyclic(2));
        for band in enumerate_bands(&c) {
            let mut gc = GeneralizedCocycle::canonical(&c, &band).unwrap();
            // perturb the cofactor on the nondegenerate pair
            let p = c.pair(1, 1);
            let cands = omega_candidates(&c, &gc.lambda).unwrap();
            gc.omega[p] = cands[p].last().unwrap().clone();
            let m = center_module(&c, &gc.lambda).unwrap();
            let h3 = cohomology(&m, 3, Backend::Snf, CohomologyOptions { normalized: true, ..Default::default() }).unwrap();
            let (_, fixed) = trivialize_obstruction(&c, &gc, &h3, &m).unwrap();
            assert!(check_generalized_cocycle(&c, &fixed).is_ok());
        }
    }

    #[test]
    fn equivalence_matches_isomorphism_across_liftings() {
        let c = ctx(catalog::pair(2), catalog::cyclic(2));
        let band = Band::trivial(&c.k);
        let mut all = Vec::new();
        for lambda in all_liftings(&c, &band, 64).unwrap() {
            all.extend(enumerate_cocycles(&c, &lambda, 1 << 12).unwrap());
        }
        assert!(all.len() > 1);
        let exts: Vec<ExtensionGroupoid> = all.iter().map(|g| build_extension(&c, g).unwrap()).collect();
        for i in 0..all.len() {
            for j in 0..all.len() {
                let eq = cocycle_equivalent(&c, &all[i], &all[j]).unwrap();
                let iso = extensions_isomorphic(&c, &exts[i], &exts[j]).unwrap();
                assert_eq!(eq.is_some(), iso.is_some());
                if let Some(rho) = eq {
                    assert_eq!(transport_cocycle(&c, &all[i], &all[j].lambda, &rho), all[j]);
                }
            }
        }
    }

    #[test]
    fn refinement_pullback_matches_fiber_product() {
        let c = ctx(catalog::cyclic(2), catalog::disjoint_union(&[catalog::cyclic(2), catalog::unit(1)]));
        let cls = classified(&c, &Band::trivial(&c.k));
        let u = OpenCover::new(&c.k, vec![vec![0], vec![0, 1], vec![1]]).unwrap();
        let r = refine(&c.k, &u).unwrap();
        for class in &cls.classes {
            let (c2, gc2) = pullback_cocycle(&c, &class.cocycle, &u).unwrap();
            assert!(check_generalized_cocycle(&c2, &gc2).is_ok());
            let built = build_extension(&c2, &gc2).unwrap();
            let fp = pullback_extension(&c, &c2, &r.projection, &class.extension).unwrap();
            assert!(extensions_isomorphic(&c2, &built, &fp).unwrap().is_some());
        }
        let v = OpenCover::trivial(&c.k);
        let a = &cls.classes[0].cocycle;
        let b = &cls.classes[1].cocycle;
        let (_, a_u) = pullback_cocycle(&c, a, &u).unwrap();
        let (_, a_v) = pullback_cocycle(&c, a, &v).unwrap();
        let (_, b_v) = pullback_cocycle(&c, b, &v).unwrap();
        assert!(equivalent_over_refinements(&c, &u, &a_u, &v, &a_v).unwrap().is_some());
        assert!(equivalent_over_refinements(&c, &u, &a_u, &v, &b_v).unwrap().is_none());
    }

    #[test]
    fn flipped_convention_reads_bands_inversely() {
        let c = ctx(catalog::cyclic(3), catalog::cyclic(3));
        let f = c.clone().with_convention(ActionConvention::Flipped);
        let bs = enumerate_bands(&c);
        let bf = enumerate_bands(&f);
        assert_eq!(bs.len(), bf.len());
        for b in &bf {
            let l = lift_band(&f, b).unwrap();
            assert_eq!(Band::of_lifting(&f, &l), *b);
            assert!(check_band(&c, &Band::of_lifting(&c, &l)).unwrap().is_empty());
        }
    }
}
