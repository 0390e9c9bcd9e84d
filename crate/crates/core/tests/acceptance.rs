//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Set `GEXT_SEED` to change the seed of the randomized criteria.

use std::time::Instant;

use gext_core::autalg::{semidirect_check, AutData, MAX_AUTOMORPHISMS};
use gext_core::catalog;
use gext_core::cohomology::{
    backends_agree, coboundary, cohomology, composable_tuples, Backend, Cochain, CohomologyError, CohomologyOptions,
    KModule,
};
use gext_core::extension::{
    all_liftings, build_extension, center_module, check_generalized_cocycle, classify, cocycle_equivalent,
    enumerate_bands, enumerate_cocycles, equivalent_over_refinements, extensions_isomorphic, extract_cocycle,
    extension_round_trip, obstruction, obstruction_values, obstruction_variants, omega_candidates, pullback_cocycle,
    Band, ClassifyOutcome, ExtensionContext, GeneralizedCocycle,
};
use gext_core::oracle::{census_extensions, group_cohomology_oracle, GroupModule, CENSUS_CAP};
use gext_core::refine::OpenCover;
use gext_core::FiniteGroupoid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn seed() -> u64 {
    std::env::var("GEXT_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(20240607)
}

fn ctx(a: &FiniteGroupoid, k: &FiniteGroupoid) -> ExtensionContext {
    ExtensionContext::new(a.clone(), k.clone(), MAX_AUTOMORPHISMS).expect("automorphisms within cap")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn small() -> Vec<(String, FiniteGroupoid)> {
    catalog::small_groupoids(4)
}

/// Criteria 1, 2 and 8 share one sweep.
struct Sweep {
    instances: usize,
    bands: usize,
    liftings: usize,
    cocycles: usize,
}

fn sweep(check_build: bool, check_round_trip: bool, check_actions: bool) -> Result<Sweep, String> {
    let mut s = Sweep { instances: 0, bands: 0, liftings: 0, cocycles: 0 };
    for (an, a) in small() {
        let data = std::sync::Arc::new(AutData::compute(&a, MAX_AUTOMORPHISMS).map_err(|e| e.to_string())?);
        for (kn, k) in small() {
            let c = ExtensionContext::with_data(a.clone(), k.clone(), data.clone());
            s.instances += 1;
            for band in enumerate_bands(&c) {
                s.bands += 1;
                let lifts = all_liftings(&c, &band, 1 << 12).map_err(|e| format!("{an} by {kn}: {e}"))?;
                let mut first_action: Option<KModule> = None;
                for lambda in lifts {
                    s.liftings += 1;
                    if check_actions {
                        let m = center_module(&c, &lambda).map_err(|e| format!("{an} by {kn}: {e}"))?;
                        if let Some(m0) = &first_action {
                            for g in 0..k.n_arrows() {
                                ensure(m0.action(g) == m.action(g), || {
                                    format!("{an} by {kn}: induced actions differ at arrow {g} for {lambda:?}")
                                })?;
                            }
                        } else {
                            first_action = Some(m);
                        }
                    }
                    if !(check_build || check_round_trip) {
                        continue;
                    }
                    let all = enumerate_cocycles(&c, &lambda, 1 << 16).map_err(|e| format!("{an} by {kn}: {e}"))?;
                    for gc in all {
                        s.cocycles += 1;
                        let e = build_extension(&c, &gc).map_err(|e| format!("{an} by {kn}: build failed: {e}"))?;
                        if check_round_trip {
                            let back = extract_cocycle(&c, &e).map_err(|e| format!("{an} by {kn}: {e}"))?;
                            ensure(back == gc, || format!("{an} by {kn}: extraction differs for {gc:?}"))?;
                            extension_round_trip(&c, &e).map_err(|e| format!("{an} by {kn}: round trip: {e}"))?;
                        }
                    }
                }
            }
        }
    }
    Ok(s)
}

fn criterion_1() -> Outcome {
    let s = sweep(true, false, false)?;
    ensure(s.cocycles > 0, || String::from("no cocycles found"))?;
    Ok(format!(
        "{} instances, {} bands, {} liftings, {} cocycles built and validated",
        s.instances, s.bands, s.liftings, s.cocycles
    ))
}

fn criterion_2() -> Outcome {
    let s = sweep(false, true, false)?;
    Ok(format!("{} cocycles recovered exactly with verified isomorphisms", s.cocycles))
}

fn random_cocycle_data(c: &ExtensionContext, band: &Band, rng: &mut ChaCha8Rng) -> Result<GeneralizedCocycle, String> {
    let lifts = all_liftings(c, band, 1 << 12).map_err(|e| e.to_string())?;
    let lambda = lifts[rng.gen_range(0..lifts.len())].clone();
    let cands = omega_candidates(c, &lambda).map_err(|e| e.to_string())?;
    let omega = cands.iter().map(|v| v[rng.gen_range(0..v.len())].clone()).collect();
    Ok(GeneralizedCocycle { lambda, omega })
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed());
    let fibers = [
        catalog::cyclic(2),
        catalog::cyclic(4),
        catalog::klein(),
        catalog::symmetric3(),
        catalog::pair(2),
        catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(2)]),
        catalog::abelian(&[2, 4]),
    ];
    let bases: Vec<FiniteGroupoid> = small().into_iter().map(|(_, g)| g).filter(|g| g.n_arrows() >= 2).collect();
    let opts = CohomologyOptions { normalized: true, ..Default::default() };
    let mut samples = 0;
    let mut zero = 0;
    while samples < 240 {
        let a = &fibers[rng.gen_range(0..fibers.len())];
        let k = &bases[rng.gen_range(0..bases.len())];
        let c = ctx(a, k);
        let bands = enumerate_bands(&c);
        let band = &bands[rng.gen_range(0..bands.len())];
        let gc = random_cocycle_data(&c, band, &mut rng)?;
        let other = random_cocycle_data(&c, band, &mut rng)?;
        let m = center_module(&c, &gc.lambda).map_err(|e| e.to_string())?;
        let xi = obstruction(&c, &gc).map_err(|e| format!("not central or invariant: {e}"))?;
        let xi2 = obstruction(&c, &other).map_err(|e| format!("not central or invariant: {e}"))?;
        let dxi = coboundary(&m, &xi).map_err(|e| e.to_string())?;
        ensure(dxi.is_zero(&m), || format!("dΞ ≠ 0 for {gc:?}"))?;
        let raw = obstruction_values(&c, &gc);
        for (i, v) in obstruction_variants(&c, &gc).iter().enumerate() {
            ensure(*v == raw, || format!("cyclic variant {} differs for {gc:?}", i + 1))?;
        }
        let holds = check_generalized_cocycle(&c, &gc).violations.is_empty();
        ensure(holds == xi.is_zero(&m), || format!("Ξ trivial {} but cocycle condition {}", xi.is_zero(&m), holds))?;
        if holds {
            zero += 1;
        }
        let h3 = cohomology(&m, 3, Backend::Snf, opts).map_err(|e| e.to_string())?;
        let k1 = h3.class_of(&m, &xi).map_err(|e| e.to_string())?;
        let k2 = h3.class_of(&m, &xi2).map_err(|e| e.to_string())?;
        ensure(k1.coords == k2.coords, || format!("class differs across liftings: {:?} vs {:?}", k1.coords, k2.coords))?;
        samples += 1;
    }
    Ok(format!("{samples} random pairs, {zero} satisfying the cocycle condition"))
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let opts = CohomologyOptions::default();
    let expect = |a: FiniteGroupoid, k: FiniteGroupoid, n: usize| -> Result<Vec<FiniteGroupoid>, String> {
        let c = ctx(&a, &k);
        let band = Band::trivial(&c.k);
        match classify(&c, &band, opts).map_err(|e| e.to_string())? {
            ClassifyOutcome::Classified(cls) => {
                ensure(cls.classes.len() == n, || format!("expected {n} classes, got {}", cls.classes.len()))?;
                Ok(cls.classes.into_iter().map(|x| x.extension.groupoid).collect())
            }
            ClassifyOutcome::Obstructed { coords, .. } => Err(format!("unexpected obstruction {coords:?}")),
        }
    };
    let gs = expect(catalog::cyclic(2), catalog::cyclic(2), 2)?;
    let z4 = catalog::cyclic(4);
    let v4 = catalog::klein();
    let has = |t: &FiniteGroupoid| gs.iter().filter(|g| gext_core::iso::find_isomorphism(g, t).is_some()).count();
    ensure(has(&z4) == 1 && has(&v4) == 1, || String::from("classes are not Z/4 and Z/2 x Z/2"))?;
    let gs3 = expect(catalog::cyclic(3), catalog::cyclic(3), 3)?;
    let z9 = catalog::cyclic(9);
    let n9 = gs3.iter().filter(|g| gext_core::iso::find_isomorphism(g, &z9).is_some()).count();
    ensure(n9 == 2, || format!("expected Z/9 twice among the classes, found {n9}"))?;

    let mut instances = 0;
    let mut obstructed = 0;
    for (an, a) in small() {
        for (kn, k) in small() {
            if a.n_arrows() * k.n_arrows() > CENSUS_CAP {
                continue;
            }
            let c = ctx(&a, &k);
            let census = census_extensions(&c, None, 1 << 20).map_err(|e| format!("{an} by {kn}: {e}"))?;
            for band in enumerate_bands(&c) {
                instances += 1;
                let found = census.classes_with_band(&band);
                match classify(&c, &band, opts).map_err(|e| format!("{an} by {kn}: {e}"))? {
                    ClassifyOutcome::Classified(cls) => {
                        ensure(found as u64 == cls.h2.order(), || {
                            format!("{an} by {kn}, band {:?}: census {found}, |H²| {}", band.values, cls.h2.order())
                        })?;
                        ensure(cls.classes.len() as u64 == cls.h2.order(), || String::from("class count"))?;
                    }
                    ClassifyOutcome::Obstructed { .. } => {
                        obstructed += 1;
                        ensure(found == 0, || format!("{an} by {kn}: obstructed band has {found} census classes"))?;
                    }
                }
            }
        }
    }
    Ok(format!(
        "2 and 3 classes as expected; census matches |H²| on {instances} instances ({obstructed} obstructed) in {:.1}s",
        started.elapsed().as_secs_f64()
    ))
}

/// Modules used by the cohomology criteria: trivial coefficients over every
/// small base and the centers with their induced actions.
fn modules() -> Vec<(String, KModule)> {
    let mut out = Vec::new();
    let coeffs = [vec![2u64], vec![3], vec![4], vec![2, 2]];
    for (kn, k) in small() {
        for e in &coeffs {
            out.push((format!("{kn} with trivial {e:?}"), KModule::trivial(k.clone(), gext_core::FiniteAbelianGroup::product_of_cyclic(e))));
        }
    }
    let fibers = [catalog::cyclic(3), catalog::cyclic(4), catalog::klein(), catalog::abelian(&[2, 4])];
    let bases = [catalog::cyclic(2), catalog::cyclic(3), catalog::cyclic(4), catalog::klein(), catalog::pair(2)];
    for a in &fibers {
        for k in &bases {
            let c = ctx(a, k);
            for band in enumerate_bands(&c) {
                let lambda = gext_core::extension::lift_band(&c, &band).unwrap();
                let m = center_module(&c, &lambda).unwrap();
                out.push((format!("center of {} arrows over {} arrows, band {:?}", a.n_arrows(), k.n_arrows(), band.values), m));
            }
        }
    }
    out
}

fn random_cochain(m: &KModule, n: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let len = composable_tuples(&m.k, n).len();
    Cochain { degree: n, values: (0..len).map(|_| rng.gen_range(0..m.e.order())).collect() }
}

fn oracle_module(m: &KModule) -> Option<GroupModule> {
    let k = &m.k;
    if k.n_objects() != 1 {
        return None;
    }
    let e = &m.e;
    let f = e.invariant_factors();
    if f.is_empty() || f.iter().any(|&x| x != f[0]) {
        return None;
    }
    let n = k.n_arrows();
    let mul = (0..n * n).map(|i| k.mul(i / n, i % n)).collect();
    let r = f.len();
    let basis = e.basis();
    let action = (0..n)
        .map(|g| {
            let act = m.action(g);
            // left action is the inverse permutation
            let mut inv = vec![0; act.len()];
            for (x, &y) in act.iter().enumerate() {
                inv[y] = x;
            }
            let mut mat = vec![0u64; r * r];
            for (j, &b) in basis.iter().enumerate() {
                let c = e.coords(inv[b]);
                for i in 0..r {
                    mat[i * r + j] = c[i];
                }
            }
            mat
        })
        .collect();
    GroupModule::new(n, mul, f[0], r, action).ok()
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 5);
    let mods = modules();
    let mut dd = 0;
    for n in 0..=3 {
        for i in 0..100 {
            let (_, m) = &mods[(i * 7 + n) % mods.len()];
            let c = random_cochain(m, n, &mut rng);
            let d2 = coboundary(m, &coboundary(m, &c).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            ensure(d2.is_zero(m), || format!("dd ≠ 0 in degree {n}"))?;
            dd += 1;
        }
    }
    let mut agree = 0;
    let mut skipped = 0;
    let mut oracle = 0;
    for (name, m) in &mods {
        for normalized in [false, true] {
            let opts = CohomologyOptions { normalized, cap: 1 << 16 };
            for n in 0..=3 {
                let s = cohomology(m, n, Backend::Snf, opts).map_err(|e| format!("{name}: {e}"))?;
                match cohomology(m, n, Backend::Exhaustive, opts) {
                    Ok(x) => {
                        let ok = backends_agree(m, &s, &x).map_err(|e| e.to_string())?;
                        ensure(ok, || format!("{name}, degree {n}: backends disagree"))?;
                        agree += 1;
                    }
                    Err(CohomologyError::CapExceeded { .. }) => skipped += 1,
                    Err(e) => return Err(format!("{name}: {e}")),
                }
                if let Some(gm) = oracle_module(m) {
                    let o = group_cohomology_oracle(&gm, n, 1 << 12).map_err(|e| format!("{name}: {e}"))?;
                    ensure(o == s.invariant_factors(), || {
                        format!("{name}, degree {n}: oracle {o:?}, engine {:?}", s.invariant_factors())
                    })?;
                    oracle += 1;
                }
            }
        }
    }
    Ok(format!("dd=0 on {dd} cochains; backends agree on {agree} (skipped {skipped} over cap); oracle matches on {oracle}"))
}

fn criterion_6() -> Outcome {
    let cases = [
        ("BZ3", catalog::cyclic(3)),
        ("BZ4", catalog::cyclic(4)),
        ("BS3", catalog::symmetric3()),
        ("pair2", catalog::pair(2)),
        ("BZ2+BZ2", catalog::disjoint_union(&[catalog::cyclic(2), catalog::cyclic(2)])),
    ];
    let mut out = Vec::new();
    for (name, a) in cases {
        let d = AutData::compute(&a, MAX_AUTOMORPHISMS).map_err(|e| e.to_string())?;
        let r = d.exactness();
        ensure(r.all(), || format!("{name}: {r:?}"))?;
        ensure(semidirect_check(&a, &d), || format!("{name}: semidirect decomposition fails"))?;
        out.push(format!("{name} ({} autos, coarse order {})", d.saut.len(), d.coarse.order()));
    }
    Ok(out.join(", "))
}

fn random_cover(k: &FiniteGroupoid, rng: &mut ChaCha8Rng) -> OpenCover {
    let n = k.n_objects();
    loop {
        let count = rng.gen_range(1..=3);
        let subsets: Vec<Vec<usize>> = (0..count).map(|_| (0..n).filter(|_| rng.gen_bool(0.6)).collect()).filter(|s: &Vec<usize>| !s.is_empty()).collect();
        if let Ok(u) = OpenCover::new(k, subsets) {
            return u;
        }
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed() ^ 7);
    let instances = [
        (catalog::cyclic(2), catalog::cyclic(2)),
        (catalog::cyclic(3), catalog::cyclic(3)),
        (catalog::cyclic(2), catalog::disjoint_union(&[catalog::cyclic(2), catalog::unit(1)])),
    ];
    let mut pairs = 0;
    let mut checks = 0;
    while pairs < 24 {
        let (a, k) = &instances[pairs % instances.len()];
        let c = ctx(a, k);
        let cls = match classify(&c, &Band::trivial(&c.k), CohomologyOptions::default()).map_err(|e| e.to_string())? {
            ClassifyOutcome::Classified(cls) => cls,
            ClassifyOutcome::Obstructed { .. } => return Err(String::from("unexpected obstruction")),
        };
        let u = random_cover(k, &mut rng);
        let v = random_cover(k, &mut rng);
        for x in &cls.classes {
            for y in &cls.classes {
                let (cu, xu) = pullback_cocycle(&c, &x.cocycle, &u).map_err(|e| e.to_string())?;
                let (cv, yv) = pullback_cocycle(&c, &y.cocycle, &v).map_err(|e| e.to_string())?;
                ensure(check_generalized_cocycle(&cu, &xu).is_ok(), || String::from("pullback is not a cocycle"))?;
                ensure(check_generalized_cocycle(&cv, &yv).is_ok(), || String::from("pullback is not a cocycle"))?;
                let base = cocycle_equivalent(&c, &x.cocycle, &y.cocycle).map_err(|e| e.to_string())?.is_some();
                let refined = equivalent_over_refinements(&c, &u, &xu, &v, &yv).map_err(|e| e.to_string())?.is_some();
                ensure(base == refined, || format!("verdict changed under refinement: {base} vs {refined}"))?;
                let bu = build_extension(&cu, &xu).map_err(|e| e.to_string())?;
                ensure(extensions_isomorphic(&cu, &bu, &bu).map_err(|e| e.to_string())?.is_some(), || String::from("self-isomorphism"))?;
                checks += 1;
            }
        }
        pairs += 1;
    }
    Ok(format!("{pairs} cover pairs, {checks} verdicts stable"))
}

fn criterion_8() -> Outcome {
    let s = sweep(false, false, true)?;
    Ok(format!("{} liftings over {} bands give identical induced actions", s.liftings, s.bands))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("extension builder soundness", criterion_1),
        ("round trip", criterion_2),
        ("obstruction theory", criterion_3),
        ("classification", criterion_4),
        ("cohomology engine", criterion_5),
        ("automorphism algebra", criterion_6),
        ("refinement coherence", criterion_7),
        ("induced action well-defined", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("criterion {} ({name}): PASS [{secs:.1}s] {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{secs:.1}s] {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
