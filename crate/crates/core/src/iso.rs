//! Backtracking search for strict isomorphisms and enumeration of natural
//! transformations.

use alloc::vec;
use alloc::vec::Vec;

use crate::groupoid::{Arr, FiniteGroupoid, Obj};
use crate::morphism::StrictMorphism;

const FREE: usize = usize::MAX;

fn object_profile(g: &FiniteGroupoid, x: Obj) -> (usize, usize) {
    (g.loops(x).len(), g.arrows_from(x).len())
}

/// Order of each loop in its isotropy group; 0 for non-loops.
fn arrow_orders(g: &FiniteGroupoid) -> Vec<usize> {
    (0..g.n_arrows())
        .map(|a| {
            if g.src(a) != g.tgt(a) {
                return 0;
            }
            let u = g.unit(g.src(a));
            let mut k = 1;
            let mut p = a;
            while p != u {
                p = g.mul(p, a);
                k += 1;
            }
            k
        })
        .collect()
}

struct Search<'a> {
    a: &'a FiniteGroupoid,
    b: &'a FiniteGroupoid,
    a_prof: Vec<(usize, usize)>,
    b_prof: Vec<(usize, usize)>,
    a_ord: Vec<usize>,
    b_ord: Vec<usize>,
    limit: usize,
    found: Vec<StrictMorphism>,
}

#[derive(Clone)]
struct State {
    f0: Vec<Obj>,
    f1: Vec<Arr>,
    used0: Vec<bool>,
    used1: Vec<bool>,
}

impl<'a> Search<'a> {
    fn set_obj(&self, st: &mut State, x: Obj, y: Obj) -> bool {
        if st.f0[x] == y {
            return true;
        }
        if st.f0[x] != FREE || st.used0[y] || self.a_prof[x] != self.b_prof[y] {
            return false;
        }
        st.f0[x] = y;
        st.used0[y] = true;
        true
    }

    /// Assigns `g ↦ h` and closes under products, inverses and units.
    fn assign(&self, st: &mut State, g: Arr, h: Arr) -> bool {
        let mut work = vec![(g, h)];
        while let Some((g, h)) = work.pop() {
            if st.f1[g] == h {
                continue;
            }
            if st.f1[g] != FREE || st.used1[h] || self.a_ord[g] != self.b_ord[h] {
                return false;
            }
            if !self.set_obj(st, self.a.src(g), self.b.src(h)) || !self.set_obj(st, self.a.tgt(g), self.b.tgt(h)) {
                return false;
            }
            st.f1[g] = h;
            st.used1[h] = true;
            work.push((self.a.inv(g), self.b.inv(h)));
            let (s, t) = (self.a.src(g), self.a.tgt(g));
            work.push((self.a.unit(s), self.b.unit(st.f0[s])));
            work.push((self.a.unit(t), self.b.unit(st.f0[t])));
            for &k in self.a.arrows_from(t) {
                let fk = st.f1[k];
                if fk != FREE {
                    work.push((self.a.mul(g, k), self.b.mul(h, fk)));
                }
            }
            for k in 0..self.a.n_arrows() {
                if self.a.tgt(k) == s {
                    let fk = st.f1[k];
                    if fk != FREE {
                        work.push((self.a.mul(k, g), self.b.mul(fk, h)));
                    }
                }
            }
        }
        true
    }

    fn run(&mut self, st: State) {
        if self.found.len() >= self.limit {
            return;
        }
        let next = (0..self.a.n_arrows()).find(|&g| st.f1[g] == FREE);
        let Some(g) = next else {
            self.found.push(StrictMorphism::from_maps(self.a, self.b, st.f0, st.f1));
            return;
        };
        let (s, t) = (self.a.src(g), self.a.tgt(g));
        for h in 0..self.b.n_arrows() {
            if st.used1[h] || self.a_ord[g] != self.b_ord[h] {
                continue;
            }
            if st.f0[s] != FREE && st.f0[s] != self.b.src(h) {
                continue;
            }
            if st.f0[t] != FREE && st.f0[t] != self.b.tgt(h) {
                continue;
            }
            let mut st2 = st.clone();
            if self.assign(&mut st2, g, h) {
                self.run(st2);
                if self.found.len() >= self.limit {
                    return;
                }
            }
        }
    }
}

/// All strict isomorphisms `a → b` (at most `limit`), sorted by `(f0, f1)`.
pub fn isomorphisms(a: &FiniteGroupoid, b: &FiniteGroupoid, limit: usize) -> Vec<StrictMorphism> {
    if a.n_objects() != b.n_objects() || a.n_arrows() != b.n_arrows() {
        return Vec::new();
    }
    let a_prof: Vec<_> = (0..a.n_objects()).map(|x| object_profile(a, x)).collect();
    let b_prof: Vec<_> = (0..b.n_objects()).map(|x| object_profile(b, x)).collect();
    let mut pa = a_prof.clone();
    let mut pb = b_prof.clone();
    pa.sort_unstable();
    pb.sort_unstable();
    let a_ord = arrow_orders(a);
    let b_ord = arrow_orders(b);
    let mut oa = a_ord.clone();
    let mut ob = b_ord.clone();
    oa.sort_unstable();
    ob.sort_unstable();
    if pa != pb || oa != ob {
        return Vec::new();
    }
    let mut s = Search { a, b, a_prof, b_prof, a_ord, b_ord, limit, found: Vec::new() };
    let st = State {
        f0: vec![FREE; a.n_objects()],
        f1: vec![FREE; a.n_arrows()],
        used0: vec![false; b.n_objects()],
        used1: vec![false; b.n_arrows()],
    };
    s.run(st);
    let mut found = s.found;
    found.sort();
    found
}

pub fn find_isomorphism(a: &FiniteGroupoid, b: &FiniteGroupoid) -> Option<StrictMorphism> {
    isomorphisms(a, b, 1).into_iter().next()
}

/// Every strict automorphism, identity first.
pub fn automorphisms(a: &FiniteGroupoid) -> Vec<StrictMorphism> {
    isomorphisms(a, a, usize::MAX)
}

/// All natural transformations `f ⇒ g` between functors `dom → cod`, as
/// component vectors in lexicographic order.
pub fn natural_transformations(
    dom: &FiniteGroupoid,
    cod: &FiniteGroupoid,
    f: &StrictMorphism,
    g: &StrictMorphism,
) -> Vec<Vec<Arr>> {
    let comp = dom.components();
    let span = dom.spanning_arrows();
    let n_comp = comp.iter().copied().max().map_or(0, |m| m + 1);
    let mut roots = vec![FREE; n_comp];
    for x in 0..dom.n_objects() {
        if roots[comp[x]] == FREE {
            roots[comp[x]] = x;
        }
    }
    // Per component, all consistent component families.
    let mut per_comp: Vec<Vec<Vec<Arr>>> = Vec::with_capacity(n_comp);
    for (c, &r) in roots.iter().enumerate() {
        let members: Vec<Obj> = (0..dom.n_objects()).filter(|&x| comp[x] == c).collect();
        let mut options = Vec::new();
        for s in cod.hom(f.f0[r], g.f0[r]) {
            let vals: Vec<Arr> = members
                .iter()
                .map(|&y| {
                    let h = span[y];
                    cod.mul_all(&[cod.inv(f.f1[h]), s, g.f1[h]])
                })
                .collect();
            let ok = members.iter().enumerate().all(|(i, &x)| {
                members.iter().enumerate().all(|(j, &y)| {
                    dom.hom(x, y).all(|h| cod.mul(f.f1[h], vals[j]) == cod.mul(vals[i], g.f1[h]))
                })
            });
            if ok {
                options.push(vals);
            }
        }
        per_comp.push(options);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; n_comp];
    if per_comp.iter().any(|o| o.is_empty()) {
        return out;
    }
    loop {
        let mut sigma = vec![0; dom.n_objects()];
        for c in 0..n_comp {
            let vals = &per_comp[c][idx[c]];
            let mut i = 0;
            for x in 0..dom.n_objects() {
                if comp[x] == c {
                    sigma[x] = vals[i];
                    i += 1;
                }
            }
        }
        out.push(sigma);
        let mut c = n_comp;
        loop {
            if c == 0 {
                out.sort();
                return out;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < per_comp[c].len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::morphism::is_natural;

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&catalog::cyclic(3)).len(), 2);
        assert_eq!(automorphisms(&catalog::cyclic(4)).len(), 2);
        assert_eq!(automorphisms(&catalog::klein()).len(), 6);
        assert_eq!(automorphisms(&catalog::symmetric3()).len(), 6);
        assert_eq!(automorphisms(&catalog::pair(2)).len(), 2);
        assert_eq!(automorphisms(&catalog::unit(3)).len(), 6);
        assert_eq!(automorphisms(&catalog::abelian(&[2, 4])).len(), 8);
        let u = catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(2)]);
        assert_eq!(automorphisms(&u).len(), 2);
        assert!(automorphisms(&catalog::klein())[0].is_identity());
    }

    #[test]
    fn isomorphism_between_presentations() {
        let a = catalog::abelian(&[2, 3]);
        let b = catalog::cyclic(6);
        assert!(find_isomorphism(&a, &b).is_some());
        assert!(find_isomorphism(&catalog::cyclic(4), &catalog::klein()).is_none());
    }

    #[test]
    fn transformations_in_a_group() {
        let a = catalog::symmetric3();
        let id = StrictMorphism::identity(&a);
        let nts = natural_transformations(&a, &a, &id, &id);
        assert_eq!(nts.len(), 1);
        let auts = automorphisms(&a);
        let total: usize = auts.iter().map(|f| natural_transformations(&a, &a, &id, f).len()).sum();
        assert_eq!(total, 6);
        for f in &auts {
            for s in natural_transformations(&a, &a, &id, f) {
                is_natural(&a, &a, &id, f, &s).unwrap();
            }
        }
    }

    #[test]
    fn transformations_on_disconnected_groupoid() {
        let u = catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(3)]);
        let id = StrictMorphism::identity(&u);
        assert_eq!(natural_transformations(&u, &u, &id, &id).len(), 6);
    }
}
