//! Standard small groupoids.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::groupoid::{Arr, FiniteGroupoid, Obj};

fn width(n: usize) -> usize {
    let mut w = 1;
    let mut m = 10;
    while n > m {
        w += 1;
        m *= 10;
    }
    w
}

fn pad(i: usize, n: usize) -> String {
    format!("{:0w$}", i, w = width(n))
}

/// One-object groupoid of a group given by its multiplication table.
/// Element `i` becomes arrow `g{i}`.
pub fn group<F: Fn(usize, usize) -> usize>(order: usize, mul: F) -> FiniteGroupoid {
    let e = (0..order).find(|&e| (0..order).all(|x| mul(e, x) == x)).expect("identity element");
    let inverses = (0..order)
        .map(|x| (0..order).find(|&y| mul(x, y) == e).expect("inverse element"))
        .collect();
    let arrows = (0..order).map(|i| (format!("g{}", pad(i, order)), 0, 0)).collect();
    let (g, _) = FiniteGroupoid::from_parts(alloc::vec![String::from("*")], arrows, alloc::vec![e], inverses, mul)
        .expect("group table defines a groupoid");
    g
}

pub fn cyclic(n: usize) -> FiniteGroupoid {
    group(n, |a, b| (a + b) % n)
}

/// Direct product of cyclic groups; element index is mixed radix with the
/// last factor varying fastest.
pub fn abelian(orders: &[usize]) -> FiniteGroupoid {
    let n: usize = orders.iter().product();
    let digits = |mut x: usize| {
        let mut d = alloc::vec![0; orders.len()];
        for i in (0..orders.len()).rev() {
            d[i] = x % orders[i];
            x /= orders[i];
        }
        d
    };
    group(n, |a, b| {
        let (da, db) = (digits(a), digits(b));
        let mut x = 0;
        for i in 0..orders.len() {
            x = x * orders[i] + (da[i] + db[i]) % orders[i];
        }
        x
    })
}

pub fn klein() -> FiniteGroupoid {
    abelian(&[2, 2])
}

/// Permutations of {0,1,2} in lexicographic order, composed left to right:
/// `(p·q)(i) = q(p(i))`.
pub fn symmetric3() -> FiniteGroupoid {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    group(6, |a, b| {
        let p = perms[a];
        let q = perms[b];
        let r = [q[p[0]], q[p[1]], q[p[2]]];
        perms.iter().position(|x| *x == r).unwrap()
    })
}

/// Dihedral group of order `2n`; element `i + n·j` is `r^i s^j`.
pub fn dihedral(n: usize) -> FiniteGroupoid {
    group(2 * n, |a, b| {
        let (i1, j1) = (a % n, a / n);
        let (i2, j2) = (b % n, b / n);
        let i = if j1 == 0 { (i1 + i2) % n } else { (i1 + n - i2) % n };
        i + n * ((j1 + j2) % 2)
    })
}

/// Quaternion group; element `4·s + u` is `(−1)^s` times `1, i, j, k`.
pub fn quaternion() -> FiniteGroupoid {
    // units[u][v] = (sign, unit) of u·v
    const T: [[(usize, usize); 4]; 4] = [
        [(0, 0), (0, 1), (0, 2), (0, 3)],
        [(0, 1), (1, 0), (0, 3), (1, 2)],
        [(0, 2), (1, 3), (1, 0), (0, 1)],
        [(0, 3), (0, 2), (1, 1), (1, 0)],
    ];
    group(8, |a, b| {
        let (s, u) = T[a % 4][b % 4];
        ((a / 4 + b / 4 + s) % 2) * 4 + u
    })
}

/// Every group of order at most `max` (at most 8), up to isomorphism.
pub fn groups_up_to(max: usize) -> Vec<(String, FiniteGroupoid)> {
    let all: Vec<(&str, usize)> = alloc::vec![
        ("Z1", 1), ("Z2", 2), ("Z3", 3), ("Z4", 4), ("Z2xZ2", 4), ("Z5", 5), ("Z6", 6), ("S3", 6),
        ("Z7", 7), ("Z8", 8), ("Z2xZ4", 8), ("Z2xZ2xZ2", 8), ("D4", 8), ("Q8", 8),
    ];
    assert!(max <= 8, "group list is complete only up to order 8");
    all.into_iter()
        .filter(|&(_, n)| n <= max)
        .map(|(name, n)| {
            let g = match name {
                "Z2xZ2" => klein(),
                "S3" => symmetric3(),
                "Z2xZ4" => abelian(&[2, 4]),
                "Z2xZ2xZ2" => abelian(&[2, 2, 2]),
                "D4" => dihedral(4),
                "Q8" => quaternion(),
                _ => cyclic(n),
            };
            (String::from(name), g)
        })
        .collect()
}

/// Every groupoid with at most `max` arrows (at most 8), up to
/// isomorphism, as disjoint unions of `pair(n) × B(G)`.
pub fn groupoids_up_to(max: usize) -> Vec<(String, FiniteGroupoid)> {
    let mut atoms: Vec<(String, FiniteGroupoid)> = Vec::new();
    for n in 1..=max {
        for (gn, g) in groups_up_to(max.min(8)) {
            if n * n * g.n_arrows() > max {
                continue;
            }
            if n == 1 {
                atoms.push((format!("B{gn}"), g));
            } else {
                let (p, _, _) = product(&pair(n), &g);
                atoms.push((format!("pair{n}xB{gn}"), p));
            }
        }
    }
    fn rec(atoms: &[(String, FiniteGroupoid)], start: usize, budget: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if !chosen.is_empty() {
            out.push(chosen.clone());
        }
        for i in start..atoms.len() {
            if atoms[i].1.n_arrows() <= budget {
                chosen.push(i);
                rec(atoms, i, budget - atoms[i].1.n_arrows(), chosen, out);
                chosen.pop();
            }
        }
    }
    let mut combos = Vec::new();
    rec(&atoms, 0, max, &mut Vec::new(), &mut combos);
    let mut out: Vec<(String, FiniteGroupoid)> = combos
        .into_iter()
        .map(|c| {
            let name = c.iter().map(|&i| atoms[i].0.as_str()).collect::<Vec<_>>().join("+");
            let g = if c.len() == 1 {
                atoms[c[0]].1.clone()
            } else {
                let parts: Vec<FiniteGroupoid> = c.iter().map(|&i| atoms[i].1.clone()).collect();
                disjoint_union(&parts)
            };
            (name, g)
        })
        .collect();
    out.sort_by_key(|(_, g)| (g.n_arrows(), g.n_objects()));
    out
}

/// Pair groupoid: one arrow between every ordered pair of objects.
pub fn pair(n: usize) -> FiniteGroupoid {
    let objects = (0..n).map(|i| format!("o{}", pad(i, n))).collect();
    let mut arrows = Vec::new();
    for i in 0..n {
        for j in 0..n {
            arrows.push((format!("p{}_{}", pad(i, n), pad(j, n)), i, j));
        }
    }
    let (g, _) = FiniteGroupoid::from_parts(
        objects,
        arrows,
        (0..n).map(|i| i * n + i).collect(),
        (0..n * n).map(|k| (k % n) * n + k / n).collect(),
        |a, b| (a / n) * n + b % n,
    )
    .expect("pair groupoid");
    g
}

/// Discrete groupoid: only identity arrows.
pub fn unit(n: usize) -> FiniteGroupoid {
    let objects = (0..n).map(|i| format!("o{}", pad(i, n))).collect();
    let arrows = (0..n).map(|i| (format!("u{}", pad(i, n)), i, i)).collect();
    let (g, _) = FiniteGroupoid::from_parts(objects, arrows, (0..n).collect(), (0..n).collect(), |a, _| a)
        .expect("unit groupoid");
    g
}

/// Disjoint union; identifiers are prefixed by the component index.
pub fn disjoint_union(parts: &[FiniteGroupoid]) -> FiniteGroupoid {
    let mut objects = Vec::new();
    let mut arrows = Vec::new();
    let mut units = Vec::new();
    let mut inverses = Vec::new();
    let mut obj_off = Vec::new();
    let mut arr_off = Vec::new();
    for (k, p) in parts.iter().enumerate() {
        let pre = pad(k, parts.len());
        let (o0, a0) = (objects.len(), arrows.len());
        obj_off.push(o0);
        arr_off.push(a0);
        for x in p.objects() {
            objects.push(format!("c{pre}.{x}"));
        }
        for (g, a) in p.arrows().iter().enumerate() {
            arrows.push((format!("c{pre}.{}", a.id), a.src + o0, a.tgt + o0));
            inverses.push(p.inv(g) + a0);
        }
        for x in 0..p.n_objects() {
            units.push(p.unit(x) + a0);
        }
    }
    let owner: Vec<usize> = (0..parts.len()).flat_map(|k| core::iter::repeat(k).take(parts[k].n_arrows())).collect();
    let (g, _) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |a, b| {
        let k = owner[a];
        parts[k].mul(a - arr_off[k], b - arr_off[k]) + arr_off[k]
    })
    .expect("disjoint union");
    g
}

/// Direct product groupoid with objects `(a,x)` and arrows `(α,ξ)`.
/// Returns the groupoid and the index maps from pairs.
pub fn product(a: &FiniteGroupoid, k: &FiniteGroupoid) -> (FiniteGroupoid, Vec<Obj>, Vec<Arr>) {
    let (na0, na1, nk0, nk1) = (a.n_objects(), a.n_arrows(), k.n_objects(), k.n_arrows());
    let mut objects = Vec::new();
    for x in 0..na0 {
        for y in 0..nk0 {
            objects.push(format!("({},{})", a.object_id(x), k.object_id(y)));
        }
    }
    let mut arrows = Vec::new();
    let mut inverses = Vec::new();
    for g in 0..na1 {
        for h in 0..nk1 {
            arrows.push((
                format!("({},{})", a.arrow_id(g), k.arrow_id(h)),
                a.src(g) * nk0 + k.src(h),
                a.tgt(g) * nk0 + k.tgt(h),
            ));
            inverses.push(a.inv(g) * nk1 + k.inv(h));
        }
    }
    let mut units = Vec::new();
    for x in 0..na0 {
        for y in 0..nk0 {
            units.push(a.unit(x) * nk1 + k.unit(y));
        }
    }
    let (g, re) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| {
        a.mul(p / nk1, q / nk1) * nk1 + k.mul(p % nk1, q % nk1)
    })
    .expect("product groupoid");
    (g, re.objects, re.arrows)
}

/// Action groupoid of a group acting on points: arrows `(g, x): x → g·x`,
/// composed `(g, x)·(h, g·x) = (h∘g, x)`.
pub fn action<M, A>(order: usize, mul: M, points: usize, act: A) -> FiniteGroupoid
where
    M: Fn(usize, usize) -> usize,
    A: Fn(usize, usize) -> usize,
{
    let e = (0..order).find(|&e| (0..order).all(|x| mul(e, x) == x)).expect("identity element");
    let objects = (0..points).map(|i| format!("x{}", pad(i, points))).collect();
    let mut arrows = Vec::new();
    let mut inverses = Vec::new();
    for g in 0..order {
        let gi = (0..order).find(|&y| mul(g, y) == e).unwrap();
        for x in 0..points {
            arrows.push((format!("a{}_{}", pad(g, order), pad(x, points)), x, act(g, x)));
            inverses.push(gi * points + act(g, x));
        }
    }
    let units = (0..points).map(|x| e * points + x).collect();
    let (g, _) = FiniteGroupoid::from_parts(objects, arrows, units, inverses, |p, q| {
        let (g, x) = (p / points, p % points);
        let h = q / points;
        mul(h, g) * points + x
    })
    .expect("action groupoid");
    g
}

/// Every groupoid with at most four arrows, up to isomorphism.
pub fn small_groupoids(max_arrows: usize) -> Vec<(String, FiniteGroupoid)> {
    let mut out: Vec<(String, FiniteGroupoid)> = Vec::new();
    let atoms: [(&str, usize); 6] = [("pt", 1), ("BZ2", 2), ("BZ3", 3), ("BZ4", 4), ("BZ2xZ2", 4), ("pair2", 4)];
    let build = |name: &str| match name {
        "pt" => unit(1),
        "BZ2" => cyclic(2),
        "BZ3" => cyclic(3),
        "BZ4" => cyclic(4),
        "BZ2xZ2" => klein(),
        _ => pair(2),
    };
    fn rec(
        atoms: &[(&str, usize)],
        start: usize,
        budget: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if !chosen.is_empty() {
            out.push(chosen.clone());
        }
        for i in start..atoms.len() {
            if atoms[i].1 <= budget {
                chosen.push(i);
                rec(atoms, i, budget - atoms[i].1, chosen, out);
                chosen.pop();
            }
        }
    }
    let mut combos = Vec::new();
    rec(&atoms, 0, max_arrows.min(4), &mut Vec::new(), &mut combos);
    for c in combos {
        let names: Vec<&str> = c.iter().map(|&i| atoms[i].0).collect();
        let name = names.join("+");
        let g = if c.len() == 1 {
            build(names[0])
        } else if names.iter().all(|&n| n == "pt") {
            unit(c.len())
        } else {
            let parts: Vec<FiniteGroupoid> = names.iter().map(|n| build(n)).collect();
            disjoint_union(&parts)
        };
        out.push((name, g));
    }
    out.sort_by_key(|(_, g)| (g.n_arrows(), g.n_objects()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_sizes() {
        assert_eq!(cyclic(4).n_arrows(), 4);
        assert_eq!(symmetric3().n_arrows(), 6);
        assert_eq!(pair(3).n_arrows(), 9);
        assert_eq!(unit(3).n_objects(), 3);
        let u = disjoint_union(&[cyclic(2), cyclic(2)]);
        assert_eq!((u.n_objects(), u.n_arrows()), (2, 4));
        let (p, _, _) = product(&cyclic(2), &cyclic(3));
        assert_eq!(p.n_arrows(), 6);
    }

    #[test]
    fn symmetric3_is_nonabelian() {
        let s = symmetric3();
        let comm = (0..6).all(|a| (0..6).all(|b| s.mul(a, b) == s.mul(b, a)));
        assert!(!comm);
    }

    #[test]
    fn order_eight_groups_are_distinct() {
        let gs = groups_up_to(8);
        let eight: Vec<&FiniteGroupoid> = gs.iter().filter(|(_, g)| g.n_arrows() == 8).map(|(_, g)| g).collect();
        assert_eq!(eight.len(), 5);
        for i in 0..eight.len() {
            for j in 0..i {
                assert!(crate::iso::find_isomorphism(eight[i], eight[j]).is_none());
            }
        }
        let q = quaternion();
        assert_eq!((0..8).filter(|&x| q.mul(x, x) == q.unit(0)).count(), 2);
    }

    #[test]
    fn groupoid_list_counts() {
        // agrees with the hand-written list
        let list = groupoids_up_to(4);
        assert_eq!(list.len(), small_groupoids(4).len());
    }

    #[test]
    fn small_groupoid_list() {
        let list = small_groupoids(4);
        assert_eq!(list.len(), 13);
        assert!(list.iter().all(|(_, g)| g.n_arrows() <= 4));
    }

    #[test]
    fn swap_action_has_trivial_isotropy() {
        let g = action(2, |a, b| (a + b) % 2, 2, |g, x| (g + x) % 2);
        assert_eq!(g.n_arrows(), 4);
        for x in 0..2 {
            assert_eq!(g.loops(x).len(), 1);
        }
    }
}
