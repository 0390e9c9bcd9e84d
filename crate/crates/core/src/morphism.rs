use alloc::vec::Vec;

use crate::groupoid::{Arr, FiniteGroupoid, Obj};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MorphismError {
    #[error("codomain of the first functor is not the domain of the second")]
    DomainMismatch,
    #[error("map sizes do not match the groupoids")]
    ShapeMismatch,
    #[error("arrow {arrow} is not sent to an arrow between the images of its endpoints")]
    Endpoints { arrow: Arr },
    #[error("functoriality fails on the pair ({g}, {h})")]
    NotFunctorial { g: Arr, h: Arr },
    #[error("unit of object {object} is not preserved")]
    UnitNotPreserved { object: Obj },
    #[error("source and target functors do not line up")]
    CompositionMismatch,
    #[error("component at object {object} has wrong endpoints")]
    ComponentEndpoints { object: Obj },
    #[error("naturality square fails at arrow {arrow}")]
    NotNatural { arrow: Arr },
    #[error("functor is not invertible")]
    NotInvertible,
}

/// A strict functor, stored as object and arrow maps. `dom` and `cod` hold the
/// fingerprints of the groupoids it was checked against.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrictMorphism {
    pub f0: Vec<Obj>,
    pub f1: Vec<Arr>,
    pub dom: u64,
    pub cod: u64,
}

impl StrictMorphism {
    pub fn new(dom: &FiniteGroupoid, cod: &FiniteGroupoid, f0: Vec<Obj>, f1: Vec<Arr>) -> Result<Self, MorphismError> {
        let m = StrictMorphism { f0, f1, dom: dom.fingerprint(), cod: cod.fingerprint() };
        m.verify(dom, cod)?;
        Ok(m)
    }

    /// Trusted constructor for maps that are functorial by construction.
    pub fn from_maps(dom: &FiniteGroupoid, cod: &FiniteGroupoid, f0: Vec<Obj>, f1: Vec<Arr>) -> Self {
        let m = StrictMorphism { f0, f1, dom: dom.fingerprint(), cod: cod.fingerprint() };
        debug_assert!(m.verify(dom, cod).is_ok());
        m
    }

    pub fn identity(a: &FiniteGroupoid) -> Self {
        StrictMorphism {
            f0: (0..a.n_objects()).collect(),
            f1: (0..a.n_arrows()).collect(),
            dom: a.fingerprint(),
            cod: a.fingerprint(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.f0.iter().enumerate().all(|(i, &x)| i == x) && self.f1.iter().enumerate().all(|(i, &g)| i == g)
    }

    pub fn verify(&self, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> Result<(), MorphismError> {
        if self.f0.len() != dom.n_objects()
            || self.f1.len() != dom.n_arrows()
            || self.f0.iter().any(|&x| x >= cod.n_objects())
            || self.f1.iter().any(|&g| g >= cod.n_arrows())
        {
            return Err(MorphismError::ShapeMismatch);
        }
        for g in 0..dom.n_arrows() {
            let fg = self.f1[g];
            if cod.src(fg) != self.f0[dom.src(g)] || cod.tgt(fg) != self.f0[dom.tgt(g)] {
                return Err(MorphismError::Endpoints { arrow: g });
            }
        }
        for x in 0..dom.n_objects() {
            if self.f1[dom.unit(x)] != cod.unit(self.f0[x]) {
                return Err(MorphismError::UnitNotPreserved { object: x });
            }
        }
        for g in 0..dom.n_arrows() {
            for &h in dom.arrows_from(dom.tgt(g)) {
                if self.f1[dom.mul(g, h)] != cod.mul(self.f1[g], self.f1[h]) {
                    return Err(MorphismError::NotFunctorial { g, h });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn obj(&self, x: Obj) -> Obj {
        self.f0[x]
    }

    #[inline]
    pub fn arr(&self, g: Arr) -> Arr {
        self.f1[g]
    }

    pub fn is_bijective(&self, cod: &FiniteGroupoid) -> bool {
        is_permutation(&self.f0, cod.n_objects()) && is_permutation(&self.f1, cod.n_arrows())
    }

    /// Inverse of a bijective functor.
    pub fn inverse(&self, cod: &FiniteGroupoid) -> Result<Self, MorphismError> {
        if !self.is_bijective(cod) {
            return Err(MorphismError::NotInvertible);
        }
        let mut f0 = alloc::vec![0; self.f0.len()];
        for (x, &y) in self.f0.iter().enumerate() {
            f0[y] = x;
        }
        let mut f1 = alloc::vec![0; self.f1.len()];
        for (g, &h) in self.f1.iter().enumerate() {
            f1[h] = g;
        }
        Ok(StrictMorphism { f0, f1, dom: self.cod, cod: self.dom })
    }
}

fn is_permutation(v: &[usize], n: usize) -> bool {
    if v.len() != n {
        return false;
    }
    let mut seen = alloc::vec![false; n];
    for &x in v {
        if x >= n || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

/// The composite `g ∘ f` (apply `f` first).
pub fn compose_morphisms(f: &StrictMorphism, g: &StrictMorphism) -> Result<StrictMorphism, MorphismError> {
    if f.cod != g.dom || f.f0.iter().any(|&x| x >= g.f0.len()) || f.f1.iter().any(|&a| a >= g.f1.len()) {
        return Err(MorphismError::DomainMismatch);
    }
    Ok(StrictMorphism {
        f0: f.f0.iter().map(|&x| g.f0[x]).collect(),
        f1: f.f1.iter().map(|&a| g.f1[a]).collect(),
        dom: f.dom,
        cod: g.cod,
    })
}

/// A natural transformation `source ⇒ target`; `sigma[x]: source(x) → target(x)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaturalTransformation {
    pub source: StrictMorphism,
    pub target: StrictMorphism,
    pub sigma: Vec<Arr>,
}

impl NaturalTransformation {
    pub fn new(
        source: StrictMorphism,
        target: StrictMorphism,
        sigma: Vec<Arr>,
        dom: &FiniteGroupoid,
        cod: &FiniteGroupoid,
    ) -> Result<Self, MorphismError> {
        if source.dom != target.dom || source.cod != target.cod {
            return Err(MorphismError::CompositionMismatch);
        }
        let t = NaturalTransformation { source, target, sigma };
        t.verify(dom, cod)?;
        Ok(t)
    }

    pub fn identity(f: &StrictMorphism, cod: &FiniteGroupoid) -> Self {
        NaturalTransformation {
            source: f.clone(),
            target: f.clone(),
            sigma: f.f0.iter().map(|&y| cod.unit(y)).collect(),
        }
    }

    pub fn verify(&self, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> Result<(), MorphismError> {
        if self.sigma.len() != dom.n_objects() || self.sigma.iter().any(|&g| g >= cod.n_arrows()) {
            return Err(MorphismError::ShapeMismatch);
        }
        is_natural(dom, cod, &self.source, &self.target, &self.sigma)
    }

    pub fn vertical_inverse(&self, cod: &FiniteGroupoid) -> Self {
        NaturalTransformation {
            source: self.target.clone(),
            target: self.source.clone(),
            sigma: self.sigma.iter().map(|&g| cod.inv(g)).collect(),
        }
    }
}

/// Checks components and naturality squares `f(g)·σ(y) = σ(x)·h(g)`.
pub fn is_natural(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    f: &StrictMorphism,
    h: &StrictMorphism,
    sigma: &[Arr],
) -> Result<(), MorphismError> {
    for x in 0..dom.n_objects() {
        let s = sigma[x];
        if cod.src(s) != f.f0[x] || cod.tgt(s) != h.f0[x] {
            return Err(MorphismError::ComponentEndpoints { object: x });
        }
    }
    for g in 0..dom.n_arrows() {
        let left = cod.mul(f.f1[g], sigma[dom.tgt(g)]);
        let right = cod.mul(sigma[dom.src(g)], h.f1[g]);
        if left != right {
            return Err(MorphismError::NotNatural { arrow: g });
        }
    }
    Ok(())
}

/// `(r1 ⊙ r2)(a) = r1(a)·r2(a)`, for `r1: f ⇒ g`, `r2: g ⇒ h`.
pub fn vertical_compose(
    r1: &NaturalTransformation,
    r2: &NaturalTransformation,
    cod: &FiniteGroupoid,
) -> Result<NaturalTransformation, MorphismError> {
    if r1.target != r2.source {
        return Err(MorphismError::CompositionMismatch);
    }
    Ok(NaturalTransformation {
        source: r1.source.clone(),
        target: r2.target.clone(),
        sigma: r1.sigma.iter().zip(&r2.sigma).map(|(&a, &b)| cod.mul(a, b)).collect(),
    })
}

/// `(r3 ⊛ r1)(a) = k(r1(a))·r3(g(a))` for `r1: f ⇒ g` (A → B) and
/// `r3: k ⇒ j` (B → C); the result is `k∘f ⇒ j∘g`.
pub fn horizontal_compose(
    r3: &NaturalTransformation,
    r1: &NaturalTransformation,
    c: &FiniteGroupoid,
) -> Result<NaturalTransformation, MorphismError> {
    if r1.source.cod != r3.source.dom || r1.target.cod != r3.target.dom {
        return Err(MorphismError::CompositionMismatch);
    }
    let k = &r3.source;
    let g = &r1.target;
    let sigma = (0..r1.sigma.len())
        .map(|a| c.mul(k.f1[r1.sigma[a]], r3.sigma[g.f0[a]]))
        .collect();
    Ok(NaturalTransformation {
        source: compose_morphisms(&r1.source, k)?,
        target: compose_morphisms(g, &r3.target)?,
        sigma,
    })
}

/// For `ρ: Λ1 ⇒ Λ2` between automorphisms of `a`, the 2-cell
/// `Λ1⁻¹ ⇒ Λ2⁻¹` given by `a ↦ (Λ1⁻¹(ρ(Λ2⁻¹(a))))⁻¹`.
pub fn horizontal_inverse(r: &NaturalTransformation, a: &FiniteGroupoid) -> Result<NaturalTransformation, MorphismError> {
    let l1i = r.source.inverse(a)?;
    let l2i = r.target.inverse(a)?;
    let sigma = (0..a.n_objects())
        .map(|x| a.inv(l1i.f1[r.sigma[l2i.f0[x]]]))
        .collect();
    Ok(NaturalTransformation { source: l1i, target: l2i, sigma })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EquivalenceCheck {
    pub full: bool,
    pub faithful: bool,
    pub essentially_surjective: bool,
}

impl EquivalenceCheck {
    pub fn is_equivalence(&self) -> bool {
        self.full && self.faithful && self.essentially_surjective
    }
}

/// Full, faithful and essentially surjective tests for a functor.
pub fn equivalence_check(f: &StrictMorphism, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> EquivalenceCheck {
    let mut full = true;
    let mut faithful = true;
    for x in 0..dom.n_objects() {
        for y in 0..dom.n_objects() {
            let mut images: Vec<Arr> = dom.hom(x, y).map(|g| f.f1[g]).collect();
            let n = images.len();
            images.sort_unstable();
            images.dedup();
            if images.len() != n {
                faithful = false;
            }
            if images.len() != cod.hom(f.f0[x], f.f0[y]).count() {
                full = false;
            }
        }
    }
    let comp = cod.components();
    let mut hit = alloc::vec![false; cod.n_objects()];
    for &y in &f.f0 {
        hit[comp[y]] = true;
    }
    let essentially_surjective = (0..cod.n_objects()).all(|y| hit[comp[y]]);
    EquivalenceCheck { full, faithful, essentially_surjective }
}
