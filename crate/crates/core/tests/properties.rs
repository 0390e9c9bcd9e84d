use gext_core::autalg::{AutData, MAX_AUTOMORPHISMS};
use gext_core::catalog;
use gext_core::cohomology::{coboundary, cohomology, composable_tuples, Backend, Cochain, CohomologyOptions, KModule};
use gext_core::extension::{
    all_liftings, build_extension, center_module, check_band, check_generalized_cocycle, cocycle_equivalent,
    enumerate_bands, enumerate_cocycles, extension_round_trip, extensions_isomorphic, twist, Band, ExtensionContext,
};
use gext_core::morphism::{horizontal_compose, horizontal_inverse, vertical_compose, NaturalTransformation};
use gext_core::zmod::{smith, Matrix};
use gext_core::{FiniteAbelianGroup, FiniteGroupoid};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fibers() -> Vec<FiniteGroupoid> {
    vec![
        catalog::cyclic(2),
        catalog::cyclic(3),
        catalog::cyclic(4),
        catalog::klein(),
        catalog::symmetric3(),
        catalog::pair(2),
        catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(2)]),
    ]
}

fn bases() -> Vec<FiniteGroupoid> {
    vec![
        catalog::cyclic(2),
        catalog::cyclic(3),
        catalog::cyclic(4),
        catalog::klein(),
        catalog::pair(2),
        catalog::disjoint_union(&[catalog::cyclic(2), catalog::unit(1)]),
    ]
}

fn module(i: usize, j: usize, b: usize) -> KModule {
    let fs = fibers();
    let ks = bases();
    let a = &fs[i % fs.len()];
    let k = &ks[j % ks.len()];
    let c = ExtensionContext::new(a.clone(), k.clone(), MAX_AUTOMORPHISMS).unwrap();
    let bands = enumerate_bands(&c);
    let band = &bands[b % bands.len()];
    let lambda = gext_core::extension::lift_band(&c, band).unwrap();
    let m = center_module(&c, &lambda).unwrap();
    if m.e.order() == 1 {
        KModule::trivial(k.clone(), FiniteAbelianGroup::product_of_cyclic(&[2, 2]))
    } else {
        m
    }
}

fn random_cochain(m: &KModule, n: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let len = composable_tuples(&m.k, n).len();
    Cochain { degree: n, values: (0..len).map(|_| rng.gen_range(0..m.e.order())).collect() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn coboundary_squares_to_zero(i in 0usize..8, j in 0usize..8, b in 0usize..8, n in 0usize..3, seed: u64) {
        let m = module(i, j, b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_cochain(&m, n, &mut rng);
        let dd = coboundary(&m, &coboundary(&m, &c).unwrap()).unwrap();
        prop_assert!(dd.is_zero(&m));
    }

    #[test]
    fn class_of_is_additive(i in 0usize..8, j in 0usize..8, b in 0usize..8, seed: u64) {
        let m = module(i, j, b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = cohomology(&m, 2, Backend::Snf, CohomologyOptions::default()).unwrap();
        let els = h.elements();
        let x = &els[rng.gen_range(0..els.len())];
        let y = &els[rng.gen_range(0..els.len())];
        // add a random coboundary to one representative
        let c1 = random_cochain(&m, 1, &mut rng);
        let zx = h.element(&m, x).add(&coboundary(&m, &c1).unwrap(), &m);
        let zy = h.element(&m, y);
        let s = h.class_of(&m, &zx.add(&zy, &m)).unwrap();
        let expect: Vec<u64> = x.iter().zip(y).zip(&h.orders).map(|((a, b), o)| (a + b) % o).collect();
        prop_assert_eq!(s.coords, expect);
    }

    #[test]
    fn normalized_and_full_complexes_agree(i in 0usize..8, j in 0usize..8, b in 0usize..8, n in 0usize..4) {
        let m = module(i, j, b);
        let full = cohomology(&m, n, Backend::Snf, CohomologyOptions { normalized: false, ..Default::default() }).unwrap();
        let norm = cohomology(&m, n, Backend::Snf, CohomologyOptions { normalized: true, ..Default::default() }).unwrap();
        prop_assert_eq!(full.invariant_factors(), norm.invariant_factors());
        // a normalized cocycle has the same class in both
        for coords in norm.elements() {
            let z = norm.element(&m, &coords);
            prop_assert_eq!(full.class_of(&m, &z).unwrap().is_zero(), coords.iter().all(|&c| c == 0));
        }
    }

    #[test]
    fn smith_form_is_diagonal(rows in 1usize..6, cols in 1usize..6, n in 2u64..13, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = Matrix { rows, cols, data: (0..rows * cols).map(|_| rng.gen_range(0..n)).collect() };
        let s = smith(&a, n);
        for i in 0..rows {
            for j in 0..cols {
                let mut acc = 0;
                for p in 0..rows {
                    for q in 0..cols {
                        acc = (acc + s.u.get(i, p) * a.get(p, q) % n * s.v.get(q, j)) % n;
                    }
                }
                let d = if i == j { s.diag[i] % n } else { 0 };
                prop_assert_eq!(acc, d);
            }
        }
        let x: Vec<u64> = (0..cols).map(|_| rng.gen_range(0..n)).collect();
        let b = a.mul_vec(&x, n);
        let y = s.solve(&b).expect("consistent system");
        prop_assert_eq!(a.mul_vec(&y, n), b);
    }

    #[test]
    fn interchange_law_on_automorphism_cells(i in 0usize..7, seed: u64) {
        let a = &fibers()[i];
        let d = AutData::compute(a, MAX_AUTOMORPHISMS).unwrap();
        let s = &d.saut;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pick = |rng: &mut ChaCha8Rng| rng.gen_range(0..s.len());
        // choose f ⇒ g ⇒ h and k ⇒ j ⇒ l inside cosets that admit cells
        let chain = |rng: &mut ChaCha8Rng| -> Option<[usize; 3]> {
            let f = pick(rng);
            let g = s.compose(d.n.t_image[rng.gen_range(0..d.n.t_image.len())], f);
            let h = s.compose(d.n.t_image[rng.gen_range(0..d.n.t_image.len())], g);
            (!s.transformations(f, g).is_empty() && !s.transformations(g, h).is_empty()).then_some([f, g, h])
        };
        let (Some([f, g, h]), Some([k, j, l])) = (chain(&mut rng), chain(&mut rng)) else { return Ok(()) };
        let cell = |x: usize, y: usize, rng: &mut ChaCha8Rng| {
            let cs = s.transformations(x, y);
            NaturalTransformation { source: s.autos[x].clone(), target: s.autos[y].clone(), sigma: cs[rng.gen_range(0..cs.len())].clone() }
        };
        let (a1, a2) = (cell(f, g, &mut rng), cell(g, h, &mut rng));
        let (b1, b2) = (cell(k, j, &mut rng), cell(j, l, &mut rng));
        let lhs = horizontal_compose(&vertical_compose(&b1, &b2, a).unwrap(), &vertical_compose(&a1, &a2, a).unwrap(), a).unwrap();
        let rhs = vertical_compose(&horizontal_compose(&b1, &a1, a).unwrap(), &horizontal_compose(&b2, &a2, a).unwrap(), a).unwrap();
        prop_assert_eq!(lhs.sigma, rhs.sigma);
        // a cell composed with its horizontal inverse is the unit cell
        let inv = horizontal_inverse(&a1, a).unwrap();
        let unit = horizontal_compose(&inv, &a1, a).unwrap();
        prop_assert!((0..a.n_objects()).all(|x| unit.sigma[x] == a.unit(x)));
    }

    #[test]
    fn cocycles_build_and_round_trip(i in 0usize..7, j in 0usize..6, b in 0usize..8, pick in 0usize..1000) {
        let a = &fibers()[i];
        let k = &bases()[j];
        let c = ExtensionContext::new(a.clone(), k.clone(), MAX_AUTOMORPHISMS).unwrap();
        let bands = enumerate_bands(&c);
        let band = &bands[b % bands.len()];
        prop_assert!(check_band(&c, band).unwrap().is_empty());
        let lifts = all_liftings(&c, band, 1 << 12).unwrap();
        let lambda = &lifts[pick % lifts.len()];
        prop_assert_eq!(&Band::of_lifting(&c, lambda), band);
        let all = enumerate_cocycles(&c, lambda, 1 << 16).unwrap();
        if all.is_empty() { return Ok(()); }
        let gc = &all[pick % all.len()];
        let e = build_extension(&c, gc).unwrap();
        let (back, built, _) = extension_round_trip(&c, &e).unwrap();
        prop_assert_eq!(&back, gc);
        prop_assert!(extensions_isomorphic(&c, &e, &built).unwrap().is_some());
    }

    #[test]
    fn twisting_by_a_coboundary_is_an_equivalence(i in 0usize..7, j in 0usize..6, b in 0usize..8, seed: u64) {
        let a = &fibers()[i];
        let k = &bases()[j];
        let c = ExtensionContext::new(a.clone(), k.clone(), MAX_AUTOMORPHISMS).unwrap();
        let bands = enumerate_bands(&c);
        let band = &bands[b % bands.len()];
        let lambda = gext_core::extension::lift_band(&c, band).unwrap();
        let all = enumerate_cocycles(&c, &lambda, 1 << 16).unwrap();
        if all.is_empty() { return Ok(()); }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gc = &all[rng.gen_range(0..all.len())];
        let m = center_module(&c, &lambda).unwrap();
        let mut c1 = random_cochain(&m, 1, &mut rng);
        for x in 0..k.n_objects() {
            let p = composable_tuples(k, 1).index_of(&[k.unit(x)]).unwrap();
            c1.values[p] = m.e.zero();
        }
        let z = coboundary(&m, &c1).unwrap();
        let twisted = twist(&c, gc, &z);
        prop_assert!(check_generalized_cocycle(&c, &twisted).is_ok());
        prop_assert!(cocycle_equivalent(&c, gc, &twisted).unwrap().is_some());
    }
}
