//! Isotropy, centers, strict automorphisms and the group of sections `N_A`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::abelian::FiniteAbelianGroup;
use crate::groupoid::{Arr, FiniteGroupoid, Obj};
use crate::iso::{isomorphisms, natural_transformations};
use crate::morphism::{compose_morphisms, StrictMorphism};

/// Automorphism enumeration gives up beyond this many automorphisms.
pub const MAX_AUTOMORPHISMS: usize = 5040;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error("unknown object {0}")]
    UnknownObject(Obj),
    #[error("groupoid has {arrows} arrows, cap is {cap}")]
    SizeCapExceeded { arrows: usize, cap: usize },
    #[error("more than {0} automorphisms")]
    TooManyAutomorphisms(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyGroup {
    pub base: Obj,
    pub elements: Vec<Arr>,
}

pub fn isotropy(a: &FiniteGroupoid, x: Obj) -> Result<IsotropyGroup, AutError> {
    if x >= a.n_objects() {
        return Err(AutError::UnknownObject(x));
    }
    Ok(IsotropyGroup { base: x, elements: a.loops(x) })
}

/// Loops at `x` commuting with every loop at `x`.
pub fn central_loops(a: &FiniteGroupoid, x: Obj) -> Vec<Arr> {
    let loops = a.loops(x);
    loops
        .iter()
        .copied()
        .filter(|&g| loops.iter().all(|&h| a.mul(g, h) == a.mul(h, g)))
        .collect()
}

/// The action groupoid of `A` on pairs `(a, g)` with `g` central at `a`;
/// `h: a → b` sends `(a, g)` to `(b, h⁻¹gh)`.
#[derive(Clone, Debug)]
pub struct CenterGroupoid {
    pub groupoid: FiniteGroupoid,
    /// Canonical object index -> (object of A, central loop).
    pub points: Vec<(Obj, Arr)>,
}

pub fn center_object_space(a: &FiniteGroupoid) -> CenterGroupoid {
    let mut pts = Vec::new();
    for x in 0..a.n_objects() {
        for g in central_loops(a, x) {
            pts.push((x, g));
        }
    }
    let pidx: BTreeMap<(Obj, Arr), usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let objects: Vec<String> = pts.iter().map(|&(x, g)| format!("({},{})", a.object_id(x), a.arrow_id(g))).collect();
    let mut arrows = Vec::new();
    let mut raw = Vec::new();
    let mut aidx = BTreeMap::new();
    for (p, &(x, g)) in pts.iter().enumerate() {
        for &h in a.arrows_from(x) {
            let q = pidx[&(a.tgt(h), a.mul_all(&[a.inv(h), g, h]))];
            aidx.insert((h, p), arrows.len());
            arrows.push((format!("({},{})", a.arrow_id(h), objects[p]), p, q));
            raw.push((h, p, q));
        }
    }
    let units = pts.iter().enumerate().map(|(p, &(x, _))| aidx[&(a.unit(x), p)]).collect();
    let inverses = raw.iter().map(|&(h, _, q)| aidx[&(a.inv(h), q)]).collect();
    let (groupoid, re) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |i, j| {
        let (h, p, _) = raw[i];
        let (k, _, _) = raw[j];
        aidx[&(a.mul(h, k), p)]
    })
    .expect("center action groupoid");
    let mut points = vec![(0, 0); pts.len()];
    for (old, &new) in re.objects.iter().enumerate() {
        points[new] = pts[old];
    }
    CenterGroupoid { groupoid, points }
}

/// A section `a ↦ σ(a)` with `σ(a)` central at `a` and `h⁻¹σ(a)h = σ(b)`
/// for every `h: a → b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CentralSection {
    pub values: Vec<Arr>,
}

impl CentralSection {
    pub fn is_valid(&self, a: &FiniteGroupoid) -> bool {
        self.values.len() == a.n_objects()
            && (0..a.n_objects()).all(|x| {
                let s = self.values[x];
                a.src(s) == x && a.tgt(s) == x && a.loops(x).iter().all(|&h| a.mul(s, h) == a.mul(h, s))
            })
            && (0..a.n_arrows()).all(|h| a.mul_all(&[a.inv(h), self.values[a.src(h)], h]) == self.values[a.tgt(h)])
    }
}

/// The center `Z_A`: all central sections, sorted, with pointwise
/// multiplication as an abstract abelian group (element `i` is
/// `sections[i]`).
#[derive(Clone, Debug)]
pub struct Center {
    pub sections: Vec<CentralSection>,
    pub group: FiniteAbelianGroup,
    index: BTreeMap<Vec<Arr>, usize>,
}

impl Center {
    pub fn compute(a: &FiniteGroupoid) -> Center {
        let comp = a.components();
        let span = a.spanning_arrows();
        let n_comp = comp.iter().copied().max().map_or(0, |m| m + 1);
        let mut per_comp: Vec<(Vec<Obj>, Vec<Vec<Arr>>)> = Vec::new();
        for c in 0..n_comp {
            let members: Vec<Obj> = (0..a.n_objects()).filter(|&x| comp[x] == c).collect();
            let root = members[0];
            let mut opts = Vec::new();
            for g in central_loops(a, root) {
                let vals: Vec<Arr> = members.iter().map(|&y| a.mul_all(&[a.inv(span[y]), g, span[y]])).collect();
                let ok = members.iter().enumerate().all(|(i, &x)| {
                    members.iter().enumerate().all(|(j, &y)| {
                        a.hom(x, y).all(|h| a.mul_all(&[a.inv(h), vals[i], h]) == vals[j])
                    })
                });
                if ok {
                    opts.push(vals);
                }
            }
            per_comp.push((members, opts));
        }
        let mut sections = vec![vec![0usize; a.n_objects()]];
        for (members, opts) in &per_comp {
            let mut next = Vec::with_capacity(sections.len() * opts.len());
            for s in &sections {
                for o in opts {
                    let mut t = s.clone();
                    for (i, &x) in members.iter().enumerate() {
                        t[x] = o[i];
                    }
                    next.push(t);
                }
            }
            sections = next;
        }
        sections.sort();
        let index: BTreeMap<Vec<Arr>, usize> = sections.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let n = sections.len();
        let mut add = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let p: Vec<Arr> = (0..a.n_objects()).map(|x| a.mul(sections[i][x], sections[j][x])).collect();
                add[i * n + j] = index[&p];
            }
        }
        let group = FiniteAbelianGroup::from_table(n, add).expect("center is an abelian group");
        let sections = sections.into_iter().map(|values| CentralSection { values }).collect();
        Center { sections, group, index }
    }

    pub fn index_of(&self, values: &[Arr]) -> Option<usize> {
        self.index.get(values).copied()
    }

    pub fn order(&self) -> usize {
        self.sections.len()
    }

    pub fn value(&self, i: usize, x: Obj) -> Arr {
        self.sections[i].values[x]
    }
}

/// `SAut(A)`: strict automorphisms (identity first) and every natural
/// transformation between each ordered pair.
#[derive(Clone, Debug)]
pub struct SAutGroupoid {
    pub autos: Vec<StrictMorphism>,
    inverses: Vec<usize>,
    table: Vec<usize>,
    cells: Vec<Vec<Vec<Arr>>>,
    index: BTreeMap<Vec<Arr>, usize>,
}

pub fn enumerate_saut(a: &FiniteGroupoid, size_cap: usize) -> Result<SAutGroupoid, AutError> {
    if a.n_arrows() > size_cap {
        return Err(AutError::SizeCapExceeded { arrows: a.n_arrows(), cap: size_cap });
    }
    let autos = isomorphisms(a, a, MAX_AUTOMORPHISMS + 1);
    if autos.len() > MAX_AUTOMORPHISMS {
        return Err(AutError::TooManyAutomorphisms(MAX_AUTOMORPHISMS));
    }
    let n = autos.len();
    let index: BTreeMap<Vec<Arr>, usize> = autos.iter().enumerate().map(|(i, f)| (f.f1.clone(), i)).collect();
    let mut table = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let c = compose_morphisms(&autos[j], &autos[i]).expect("same groupoid");
            table[i * n + j] = index[&c.f1];
        }
    }
    let inverses = autos.iter().map(|f| index[&f.inverse(a).expect("bijective").f1]).collect();
    let mut cells = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            cells.push(natural_transformations(a, a, &autos[i], &autos[j]));
        }
    }
    Ok(SAutGroupoid { autos, inverses, table, cells, index })
}

impl SAutGroupoid {
    pub fn len(&self) -> usize {
        self.autos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.autos.is_empty()
    }

    /// Index of `autos[i] ∘ autos[j]` (apply `j` first).
    #[inline]
    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i * self.autos.len() + j]
    }

    #[inline]
    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn index_of(&self, f: &StrictMorphism) -> Option<usize> {
        self.index.get(&f.f1).copied()
    }

    /// All natural transformations `autos[i] ⇒ autos[j]`, sorted.
    pub fn transformations(&self, i: usize, j: usize) -> &[Vec<Arr>] {
        &self.cells[i * self.autos.len() + j]
    }

    /// Object map of `autos[i]`.
    #[inline]
    pub fn obj(&self, i: usize, x: Obj) -> Obj {
        self.autos[i].f0[x]
    }

    #[inline]
    pub fn arr(&self, i: usize, g: Arr) -> Arr {
        self.autos[i].f1[g]
    }

    /// The groupoid with automorphisms as objects and 2-cells as arrows,
    /// under vertical composition. Also returns `(i, j, k)` for each
    /// canonical arrow: the `k`-th cell `autos[i] ⇒ autos[j]`.
    pub fn to_groupoid(&self, a: &FiniteGroupoid) -> (FiniteGroupoid, Vec<(usize, usize, usize)>) {
        let n = self.autos.len();
        let w = format!("{}", n.saturating_sub(1)).len();
        let objects = (0..n).map(|i| format!("f{:0w$}", i, w = w)).collect::<Vec<_>>();
        let mut arrows = Vec::new();
        let mut raw = Vec::new();
        let mut idx = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                let cs = self.transformations(i, j);
                let cw = format!("{}", cs.len().saturating_sub(1)).len();
                for k in 0..cs.len() {
                    idx.insert((i, j, k), arrows.len());
                    arrows.push((format!("{}>{}#{:0cw$}", objects[i], objects[j], k, cw = cw), i, j));
                    raw.push((i, j, k));
                }
            }
        }
        let cell_pos = |i: usize, j: usize, s: &[Arr]| -> usize {
            let k = self.transformations(i, j).binary_search_by(|c| c.as_slice().cmp(s)).expect("cell");
            idx[&(i, j, k)]
        };
        let units = (0..n).map(|i| cell_pos(i, i, &a_units(a, &self.autos[i]))).collect();
        let inverses = raw
            .iter()
            .map(|&(i, j, k)| {
                let s: Vec<Arr> = self.transformations(i, j)[k].iter().map(|&g| a.inv(g)).collect();
                cell_pos(j, i, &s)
            })
            .collect();
        let (g, re) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| {
            let (i, j, k) = raw[p];
            let (_, l, m) = raw[q];
            let s: Vec<Arr> = self.transformations(i, j)[k]
                .iter()
                .zip(&self.transformations(j, l)[m])
                .map(|(&x, &y)| a.mul(x, y))
                .collect();
            cell_pos(i, l, &s)
        })
        .expect("SAut groupoid");
        let mut triples = vec![(0, 0, 0); raw.len()];
        for (old, &new) in re.arrows.iter().enumerate() {
            triples[new] = raw[old];
        }
        (g, triples)
    }
}

fn a_units(a: &FiniteGroupoid, f: &StrictMorphism) -> Vec<Arr> {
    f.f0.iter().map(|&y| a.unit(y)).collect()
}

/// `N_A`: sections `σ` with `s∘σ = id` and `t∘σ` bijective, under
/// `(γ ⊛ σ)(x) = σ(x)·γ(t(σ(x)))`.
#[derive(Clone, Debug)]
pub struct NAGroup {
    pub elements: Vec<Vec<Arr>>,
    pub identity: usize,
    table: Vec<usize>,
    inverses: Vec<usize>,
    /// Index in `SAut⁰` of the automorphism induced by each element.
    pub t_image: Vec<usize>,
    index: BTreeMap<Vec<Arr>, usize>,
}

impl NAGroup {
    pub fn compute(a: &FiniteGroupoid, saut: &SAutGroupoid) -> NAGroup {
        let no = a.n_objects();
        let mut elements: Vec<Vec<Arr>> = vec![Vec::new()];
        for x in 0..no {
            let mut next = Vec::new();
            for s in &elements {
                for &g in a.arrows_from(x) {
                    if s.iter().any(|&h| a.tgt(h) == a.tgt(g)) {
                        continue;
                    }
                    let mut t = s.clone();
                    t.push(g);
                    next.push(t);
                }
            }
            elements = next;
        }
        elements.sort();
        let index: BTreeMap<Vec<Arr>, usize> = elements.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let n = elements.len();
        let mut table = vec![0; n * n];
        for gi in 0..n {
            for si in 0..n {
                let (g, s) = (&elements[gi], &elements[si]);
                let p: Vec<Arr> = (0..no).map(|x| a.mul(s[x], g[a.tgt(s[x])])).collect();
                table[gi * n + si] = index[&p];
            }
        }
        let inverses = elements
            .iter()
            .map(|s| {
                let mut tinv = vec![0; no];
                for x in 0..no {
                    tinv[a.tgt(s[x])] = x;
                }
                let v: Vec<Arr> = (0..no).map(|x| a.inv(s[tinv[x]])).collect();
                index[&v]
            })
            .collect();
        let t_image = elements.iter().map(|s| saut.index_of(&t_saut(a, s)).expect("automorphism")).collect();
        let identity = index[&(0..no).map(|x| a.unit(x)).collect::<Vec<_>>()];
        NAGroup { elements, identity, table, inverses, t_image, index }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of `elements[g] ⊛ elements[s]`.
    #[inline]
    pub fn star(&self, g: usize, s: usize) -> usize {
        self.table[g * self.elements.len() + s]
    }

    #[inline]
    pub fn inverse(&self, s: usize) -> usize {
        self.inverses[s]
    }

    pub fn index_of(&self, s: &[Arr]) -> Option<usize> {
        self.index.get(s).copied()
    }
}

/// The automorphism `f⁰ = t∘σ`, `f¹(g) = σ(src g)⁻¹·g·σ(tgt g)`.
pub fn t_saut(a: &FiniteGroupoid, sigma: &[Arr]) -> StrictMorphism {
    let f0 = sigma.iter().map(|&s| a.tgt(s)).collect();
    let f1 = (0..a.n_arrows())
        .map(|g| a.mul_all(&[a.inv(sigma[a.src(g)]), g, sigma[a.tgt(g)]]))
        .collect();
    StrictMorphism::from_maps(a, a, f0, f1)
}

/// `SAut⁰ / Im t` with canonical coset representatives (least index).
#[derive(Clone, Debug)]
pub struct CoarseSAut {
    /// Coset index of each automorphism.
    pub coset_of: Vec<usize>,
    /// Least automorphism in each coset, increasing.
    pub reps: Vec<usize>,
    table: Vec<usize>,
}

impl CoarseSAut {
    pub fn compute(saut: &SAutGroupoid, n: &NAGroup) -> CoarseSAut {
        let mut image: Vec<usize> = n.t_image.clone();
        image.sort_unstable();
        image.dedup();
        let m = saut.len();
        let mut coset_of = vec![usize::MAX; m];
        let mut reps = Vec::new();
        for f in 0..m {
            if coset_of[f] != usize::MAX {
                continue;
            }
            let c = reps.len();
            reps.push(f);
            for &i in &image {
                coset_of[saut.compose(i, f)] = c;
            }
        }
        let k = reps.len();
        let mut table = vec![0; k * k];
        for x in 0..k {
            for y in 0..k {
                table[x * k + y] = coset_of[saut.compose(reps[x], reps[y])];
            }
        }
        CoarseSAut { coset_of, reps, table }
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    /// Product of classes, composing as functions (apply `y` first).
    #[inline]
    pub fn mult(&self, x: usize, y: usize) -> usize {
        self.table[x * self.reps.len() + y]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn inverse(&self, x: usize) -> usize {
        (0..self.order()).find(|&y| self.mult(x, y) == 0).expect("group")
    }
}

/// Checks around `1 → Z_A → N_A → SAut⁰ → coarse → 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    pub center_injective: bool,
    pub kernel_is_center: bool,
    pub kernel_of_projection_is_image: bool,
    pub projection_surjective: bool,
    pub stabilizers_agree: bool,
    pub image_normal: bool,
    pub t_is_homomorphism: bool,
    /// Two automorphisms are joined by a 2-cell iff they share a coset.
    pub cells_match_cosets: bool,
}

impl ExactnessReport {
    pub fn all(&self) -> bool {
        self.center_injective
            && self.kernel_is_center
            && self.kernel_of_projection_is_image
            && self.projection_surjective
            && self.stabilizers_agree
            && self.image_normal
            && self.t_is_homomorphism
            && self.cells_match_cosets
    }
}

/// Everything about `A` needed downstream.
#[derive(Clone, Debug)]
pub struct AutData {
    pub center: Center,
    pub saut: SAutGroupoid,
    pub n: NAGroup,
    pub coarse: CoarseSAut,
    /// Index in `N_A` of each central section.
    pub center_in_n: Vec<usize>,
}

impl AutData {
    pub fn compute(a: &FiniteGroupoid, size_cap: usize) -> Result<AutData, AutError> {
        let saut = enumerate_saut(a, size_cap)?;
        let center = Center::compute(a);
        let n = NAGroup::compute(a, &saut);
        let coarse = CoarseSAut::compute(&saut, &n);
        let center_in_n = center.sections.iter().map(|s| n.index_of(&s.values).expect("section")).collect();
        Ok(AutData { center, saut, n, coarse, center_in_n })
    }

    pub fn exactness(&self) -> ExactnessReport {
        let (saut, n, coarse) = (&self.saut, &self.n, &self.coarse);
        let mut inj = self.center_in_n.clone();
        inj.sort_unstable();
        inj.dedup();
        let center_injective = inj.len() == self.center_in_n.len();
        let mut kernel: Vec<usize> = (0..n.len()).filter(|&s| n.t_image[s] == 0).collect();
        kernel.sort_unstable();
        let kernel_is_center = kernel == inj;
        let mut image = n.t_image.clone();
        image.sort_unstable();
        image.dedup();
        let ker_pi: Vec<usize> = (0..saut.len()).filter(|&f| coarse.coset_of[f] == 0).collect();
        let kernel_of_projection_is_image = ker_pi == image;
        let projection_surjective = (0..coarse.order()).all(|c| coarse.coset_of.contains(&c));
        // stabilizer of f under α·f = t(α)∘f
        let stab = |f: usize| -> Vec<usize> { (0..n.len()).filter(|&s| saut.compose(n.t_image[s], f) == f).collect() };
        let s0 = stab(0);
        let stabilizers_agree = (0..saut.len()).all(|f| stab(f) == s0);
        let image_normal = (0..saut.len())
            .all(|f| image.iter().all(|&i| image.binary_search(&saut.compose(saut.compose(f, i), saut.inverse(f))).is_ok()));
        let t_is_homomorphism = (0..n.len())
            .all(|g| (0..n.len()).all(|s| n.t_image[n.star(g, s)] == saut.compose(n.t_image[g], n.t_image[s])));
        let cells_match_cosets = (0..saut.len()).all(|i| {
            (0..saut.len()).all(|j| saut.transformations(i, j).is_empty() == (coarse.coset_of[i] != coarse.coset_of[j]))
        });
        ExactnessReport {
            center_injective,
            kernel_is_center,
            kernel_of_projection_is_image,
            projection_surjective,
            stabilizers_agree,
            image_normal,
            t_is_homomorphism,
            cells_match_cosets,
        }
    }
}

/// Builds `SAut⁰ ⋉ N_A` (arrows `(g, α): g → t(α)∘g`) and checks that
/// `ρ ↦ (f, x ↦ ρ(f⁻¹x))` and `(g, α) ↦ (x ↦ α(g(x)))` are mutually inverse
/// functors between it and `SAut(A)`.
pub fn semidirect_check(a: &FiniteGroupoid, data: &AutData) -> bool {
    let (saut, n) = (&data.saut, &data.n);
    let m = saut.len();
    let (sg, triples) = saut.to_groupoid(a);
    // action groupoid
    let wf = format!("{}", m.saturating_sub(1)).len();
    let wn = format!("{}", n.len().saturating_sub(1)).len();
    let objects: Vec<String> = (0..m).map(|i| format!("f{:0w$}", i, w = wf)).collect();
    let mut arrows = Vec::new();
    for g in 0..m {
        for al in 0..n.len() {
            arrows.push((format!("{}*n{:0w$}", objects[g], al, w = wn), g, saut.compose(n.t_image[al], g)));
        }
    }
    let nn = n.len();
    let units = (0..m).map(|g| g * nn + n.identity).collect();
    let inverses = (0..m * nn)
        .map(|p| {
            let (g, al) = (p / nn, p % nn);
            saut.compose(n.t_image[al], g) * nn + n.inverse(al)
        })
        .collect();
    let Ok((ag, re)) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| {
        let (g, al) = (p / nn, p % nn);
        let be = q % nn;
        g * nn + n.star(be, al)
    }) else {
        return false;
    };
    let obj_of = |i: usize| sg.object_index(&format!("f{:0w$}", i, w = wf)).unwrap();
    let aobj_of = |i: usize| re.objects[i];
    // φ: SAut → action groupoid
    let mut phi1 = vec![0; sg.n_arrows()];
    for (c, &(i, j, k)) in triples.iter().enumerate() {
        let rho = &saut.transformations(i, j)[k];
        let finv = saut.inverse(i);
        let sigma: Vec<Arr> = (0..a.n_objects()).map(|x| rho[saut.obj(finv, x)]).collect();
        let Some(al) = n.index_of(&sigma) else { return false };
        phi1[c] = re.arrows[i * nn + al];
    }
    let phi0: Vec<Obj> = (0..m).map(|i| aobj_of(aut_of_object(&sg, i))).collect();
    let Ok(phi) = StrictMorphism::new(&sg, &ag, phi0, phi1) else { return false };
    // ψ: action groupoid → SAut
    let mut psi1 = vec![0; ag.n_arrows()];
    for p in 0..m * nn {
        let (g, al) = (p / nn, p % nn);
        let j = saut.compose(n.t_image[al], g);
        let sigma: Vec<Arr> = (0..a.n_objects()).map(|x| n.elements[al][saut.obj(g, x)]).collect();
        let Ok(k) = saut.transformations(g, j).binary_search(&sigma) else { return false };
        let Some(c) = triples.iter().position(|&t| t == (g, j, k)) else { return false };
        psi1[re.arrows[p]] = c;
    }
    let psi0: Vec<Obj> = (0..m).map(|i| obj_of(aut_of_object(&ag, i))).collect();
    let Ok(psi) = StrictMorphism::new(&ag, &sg, psi0, psi1) else { return false };
    let (Ok(pp), Ok(qq)) = (compose_morphisms(&phi, &psi), compose_morphisms(&psi, &phi)) else { return false };
    pp.is_identity() && qq.is_identity()
}

/// Automorphism index named by object `i` (ids are `f<index>`).
fn aut_of_object(g: &FiniteGroupoid, i: usize) -> usize {
    g.object_id(i)[1..].parse().expect("object id")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn isotropy_examples() {
        assert_eq!(isotropy(&catalog::cyclic(3), 0).unwrap().elements.len(), 3);
        assert_eq!(isotropy(&catalog::pair(3), 1).unwrap().elements.len(), 1);
        assert!(isotropy(&catalog::pair(2), 5).is_err());
    }

    #[test]
    fn center_object_spaces() {
        assert_eq!(center_object_space(&catalog::symmetric3()).points.len(), 1);
        assert_eq!(center_object_space(&catalog::cyclic(4)).points.len(), 4);
        let z = center_object_space(&catalog::unit(3));
        assert_eq!((z.groupoid.n_objects(), z.groupoid.n_arrows()), (3, 3));
    }

    #[test]
    fn centers() {
        assert_eq!(Center::compute(&catalog::symmetric3()).order(), 1);
        assert_eq!(Center::compute(&catalog::cyclic(4)).group.invariant_factors(), &[4]);
        let u = catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(2)]);
        assert_eq!(Center::compute(&u).group.invariant_factors(), &[2, 2]);
        assert_eq!(Center::compute(&catalog::pair(3)).order(), 1);
    }

    #[test]
    fn saut_of_bz3() {
        let a = catalog::cyclic(3);
        let s = enumerate_saut(&a, 12).unwrap();
        assert_eq!(s.len(), 2);
        for i in 0..2 {
            assert_eq!(s.transformations(i, i).len(), 3);
        }
        assert!(s.transformations(0, 1).is_empty());
        assert!(matches!(enumerate_saut(&catalog::symmetric3(), 4), Err(AutError::SizeCapExceeded { .. })));
    }

    #[test]
    fn coarse_groups() {
        let cases: [(FiniteGroupoid, usize, usize); 4] = [
            (catalog::cyclic(3), 3, 2),
            (catalog::symmetric3(), 6, 1),
            (catalog::klein(), 4, 6),
            (catalog::pair(2), 2, 1),
        ];
        for (a, n_order, coarse_order) in cases {
            let d = AutData::compute(&a, 12).unwrap();
            assert_eq!(d.n.len(), n_order);
            assert_eq!(d.coarse.order(), coarse_order);
            assert!(d.exactness().all());
            assert!(semidirect_check(&a, &d));
        }
    }
}
