use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::groupoid::{Arr, FiniteGroupoid, Obj};
use crate::morphism::StrictMorphism;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum CoverError {
    #[error("subset {0} is empty")]
    EmptySubset(usize),
    #[error("subset {subset} names an unknown object")]
    UnknownObject { subset: usize },
    #[error("subset {subset} lists an object twice")]
    RepeatedObject { subset: usize },
    #[error("object {0} is not covered")]
    Uncovered(Obj),
    #[error("labels do not match the subsets")]
    Labels,
    #[error("subset {subset} is not contained in subset {target} of the coarser cover")]
    NotARefinement { subset: usize, target: usize },
    #[error("covers live on different groupoids")]
    DifferentBase,
}

/// A cover of the object set by nonempty subsets. Subsets keep their
/// objects sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenCover {
    pub subsets: Vec<Vec<Obj>>,
    pub labels: Vec<String>,
    base: u64,
}

fn pad(i: usize, n: usize) -> String {
    let w = format!("{}", n.saturating_sub(1)).len();
    format!("{:0w$}", i, w = w)
}

impl OpenCover {
    pub fn new(k: &FiniteGroupoid, subsets: Vec<Vec<Obj>>) -> Result<Self, CoverError> {
        let n = subsets.len();
        let labels = (0..n).map(|i| format!("U{}", pad(i, n))).collect();
        Self::with_labels(k, subsets, labels)
    }

    pub fn with_labels(k: &FiniteGroupoid, mut subsets: Vec<Vec<Obj>>, labels: Vec<String>) -> Result<Self, CoverError> {
        if labels.len() != subsets.len() {
            return Err(CoverError::Labels);
        }
        let mut covered = vec![false; k.n_objects()];
        for (i, s) in subsets.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(CoverError::EmptySubset(i));
            }
            if s.iter().any(|&x| x >= k.n_objects()) {
                return Err(CoverError::UnknownObject { subset: i });
            }
            s.sort_unstable();
            let len = s.len();
            s.dedup();
            if s.len() != len {
                return Err(CoverError::RepeatedObject { subset: i });
            }
            for &x in s.iter() {
                covered[x] = true;
            }
        }
        if let Some(x) = covered.iter().position(|c| !c) {
            return Err(CoverError::Uncovered(x));
        }
        Ok(OpenCover { subsets, labels, base: k.fingerprint() })
    }

    /// The cover by the whole object set.
    pub fn trivial(k: &FiniteGroupoid) -> Self {
        if k.is_empty() {
            return OpenCover { subsets: Vec::new(), labels: Vec::new(), base: k.fingerprint() };
        }
        Self::new(k, vec![(0..k.n_objects()).collect()]).expect("whole set covers")
    }

    /// Pulls a cover of `cod` back along a functor `dom → cod`.
    pub fn pullback(f: &StrictMorphism, dom: &FiniteGroupoid, u: &OpenCover) -> Result<Self, CoverError> {
        let subsets = u
            .subsets
            .iter()
            .map(|s| (0..dom.n_objects()).filter(|&x| s.binary_search(&f.f0[x]).is_ok()).collect())
            .collect();
        Self::with_labels(dom, subsets, u.labels.clone())
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn base(&self) -> u64 {
        self.base
    }
}

/// The refinement groupoid `K[U]` together with its projection to `K`.
#[derive(Clone, Debug)]
pub struct Refinement {
    pub groupoid: FiniteGroupoid,
    pub projection: StrictMorphism,
    /// Canonical object index -> (subset index, object of K).
    pub points: Vec<(usize, Obj)>,
    /// Canonical arrow index -> (source point, arrow of K, target point).
    pub triples: Vec<(Obj, Arr, Obj)>,
    point_index: BTreeMap<(usize, Obj), Obj>,
}

impl Refinement {
    pub fn point(&self, subset: usize, x: Obj) -> Option<Obj> {
        self.point_index.get(&(subset, x)).copied()
    }

    /// The arrow `(p, g, q)` of the refinement.
    pub fn arrow(&self, p: Obj, g: Arr, q: Obj) -> Option<Arr> {
        self.groupoid.hom(p, q).find(|&a| self.triples[a].1 == g)
    }
}

pub fn refine(k: &FiniteGroupoid, u: &OpenCover) -> Result<Refinement, CoverError> {
    if u.base != k.fingerprint() {
        return Err(CoverError::DifferentBase);
    }
    let mut pts: Vec<(usize, Obj)> = Vec::new();
    for (i, s) in u.subsets.iter().enumerate() {
        for &x in s {
            pts.push((i, x));
        }
    }
    let objects: Vec<String> = pts.iter().map(|&(i, x)| format!("{}/{}", u.labels[i], k.object_id(x))).collect();
    let np = pts.len();
    let mut arrows = Vec::new();
    let mut raw_triples = Vec::new();
    let mut index = BTreeMap::new();
    for p in 0..np {
        for q in 0..np {
            for g in k.hom(pts[p].1, pts[q].1) {
                index.insert((p, g, q), arrows.len());
                arrows.push((format!("{}|{}|{}", objects[p], k.arrow_id(g), objects[q]), p, q));
                raw_triples.push((p, g, q));
            }
        }
    }
    let units = (0..np).map(|p| index[&(p, k.unit(pts[p].1), p)]).collect();
    let inverses = raw_triples.iter().map(|&(p, g, q)| index[&(q, k.inv(g), p)]).collect();
    let (groupoid, re) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |a, b| {
        let (p, g, _) = raw_triples[a];
        let (_, h, r) = raw_triples[b];
        index[&(p, k.mul(g, h), r)]
    })
    .expect("refinement groupoid");
    let mut points = vec![(0, 0); np];
    let mut point_index = BTreeMap::new();
    for (old, &new) in re.objects.iter().enumerate() {
        points[new] = pts[old];
        point_index.insert(pts[old], new);
    }
    let mut triples = vec![(0, 0, 0); raw_triples.len()];
    for (old, &new) in re.arrows.iter().enumerate() {
        let (p, g, q) = raw_triples[old];
        triples[new] = (re.objects[p], g, re.objects[q]);
    }
    let f0 = points.iter().map(|&(_, x)| x).collect();
    let f1 = triples.iter().map(|&(_, g, _)| g).collect();
    let projection = StrictMorphism::from_maps(&groupoid, k, f0, f1);
    Ok(Refinement { groupoid, projection, points, triples, point_index })
}

/// Nonempty pairwise intersections `U_i ∩ V_j` in lexicographic order of
/// `(i, j)`, with the index maps to both covers.
pub fn common_refinement(
    k: &FiniteGroupoid,
    u: &OpenCover,
    v: &OpenCover,
) -> Result<(OpenCover, Vec<usize>, Vec<usize>), CoverError> {
    if u.base != v.base || u.base != k.fingerprint() {
        return Err(CoverError::DifferentBase);
    }
    let mut subsets = Vec::new();
    let mut labels = Vec::new();
    let mut to_u = Vec::new();
    let mut to_v = Vec::new();
    for (i, a) in u.subsets.iter().enumerate() {
        for (j, b) in v.subsets.iter().enumerate() {
            let meet: Vec<Obj> = a.iter().copied().filter(|x| b.binary_search(x).is_ok()).collect();
            if !meet.is_empty() {
                subsets.push(meet);
                labels.push(format!("{}&{}", u.labels[i], v.labels[j]));
                to_u.push(i);
                to_v.push(j);
            }
        }
    }
    let w = OpenCover::with_labels(k, subsets, labels)?;
    Ok((w, to_u, to_v))
}

/// The functor `K[W] → K[U]` induced by `W_b ⊆ U_{map[b]}`.
pub fn refinement_map(
    w: &OpenCover,
    kw: &Refinement,
    u: &OpenCover,
    ku: &Refinement,
    map: &[usize],
) -> Result<StrictMorphism, CoverError> {
    if map.len() != w.len() {
        return Err(CoverError::Labels);
    }
    for (b, s) in w.subsets.iter().enumerate() {
        let target = map[b];
        if target >= u.len() || s.iter().any(|x| u.subsets[target].binary_search(x).is_err()) {
            return Err(CoverError::NotARefinement { subset: b, target });
        }
    }
    let f0: Vec<Obj> = kw.points.iter().map(|&(b, x)| ku.point(map[b], x).unwrap()).collect();
    let f1 = kw
        .triples
        .iter()
        .map(|&(p, g, q)| ku.arrow(f0[p], g, f0[q]).unwrap())
        .collect();
    Ok(StrictMorphism::from_maps(&kw.groupoid, &ku.groupoid, f0, f1))
}
