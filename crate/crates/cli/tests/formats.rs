use std::path::{Path, PathBuf};

use gext::io::{parse_json, read_json, to_pretty, BandJson, CocycleJson, CoverJson, GroupoidJson, InputError, MorphismJson};
use gext_core::autalg::MAX_AUTOMORPHISMS;
use gext_core::extension::{build_extension, ExtensionContext};
use gext_core::refine::refine;
use gext_core::{catalog, FiniteGroupoid};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn groupoid(name: &str) -> FiniteGroupoid {
    gext::io::load_groupoid(&fixture(name)).unwrap()
}

const GROUPOIDS: [&str; 4] = ["bz2.json", "bz3.json", "pair2.json", "z4_extension.json"];

#[test]
fn groupoid_files_round_trip() {
    for name in GROUPOIDS {
        let g = groupoid(name);
        let text = to_pretty(&GroupoidJson::from_groupoid(&g));
        let again = parse_json::<GroupoidJson>(name, &text).unwrap().validate(name).unwrap();
        assert_eq!(again.to_raw(), g.to_raw(), "{name}");
        assert_eq!(to_pretty(&GroupoidJson::from_groupoid(&again)), text, "{name}");
    }
}

#[test]
fn fixture_groupoids_match_the_catalog() {
    assert!(gext_core::iso::find_isomorphism(&groupoid("bz2.json"), &catalog::cyclic(2)).is_some());
    assert!(gext_core::iso::find_isomorphism(&groupoid("bz3.json"), &catalog::cyclic(3)).is_some());
    assert!(gext_core::iso::find_isomorphism(&groupoid("pair2.json"), &catalog::pair(2)).is_some());
    assert!(gext_core::iso::find_isomorphism(&groupoid("z4_extension.json"), &catalog::cyclic(4)).is_some());
}

fn ctx(fiber: &str, base: &str) -> ExtensionContext {
    ExtensionContext::new(groupoid(fiber), groupoid(base), MAX_AUTOMORPHISMS).unwrap()
}

#[test]
fn cocycle_files_round_trip() {
    for (file, fiber, base) in [
        ("cocycle_trivial_bz2.json", "bz2.json", "bz2.json"),
        ("cocycle_z4.json", "bz2.json", "bz2.json"),
        ("cofactor_skew_bz2_over_bz3.json", "bz2.json", "bz3.json"),
        ("cocycle_trivial_bz2_over_pair2.json", "bz2.json", "pair2.json"),
    ] {
        let c = ctx(fiber, base);
        let gc = read_json::<CocycleJson>(&fixture(file)).unwrap().resolve(file, &c).unwrap();
        let text = to_pretty(&CocycleJson::from_cocycle(&c, &gc));
        let back = parse_json::<CocycleJson>(file, &text).unwrap().resolve(file, &c).unwrap();
        assert_eq!(back, gc, "{file}");
        assert_eq!(to_pretty(&CocycleJson::from_cocycle(&c, &back)), text, "{file}");
    }
}

#[test]
fn band_cover_and_morphism_files_round_trip() {
    let c = ctx("bz2.json", "bz2.json");
    let b = read_json::<BandJson>(&fixture("band_trivial_bz2.json")).unwrap().resolve("band", &c).unwrap();
    let text = to_pretty(&BandJson::from_band(&c.k, &b));
    assert_eq!(parse_json::<BandJson>("band", &text).unwrap().resolve("band", &c).unwrap(), b);

    let k = groupoid("pair2.json");
    for name in ["cover_points.json", "cover_whole.json"] {
        let u = read_json::<CoverJson>(&fixture(name)).unwrap().resolve(name, &k).unwrap();
        let text = to_pretty(&CoverJson::from_cover(&k, &u));
        let back = parse_json::<CoverJson>(name, &text).unwrap().resolve(name, &k).unwrap();
        assert_eq!(back.subsets, u.subsets);
        assert_eq!(back.labels, u.labels);

        let r = refine(&k, &u).unwrap();
        let m = MorphismJson::from_morphism(&r.groupoid, &k, &r.projection);
        let back = parse_json::<MorphismJson>("m", &to_pretty(&m)).unwrap().resolve("m", &r.groupoid, &k).unwrap();
        assert_eq!(back.f0, r.projection.f0);
        assert_eq!(back.f1, r.projection.f1);
    }
}

#[test]
fn built_extension_matches_the_fixture() {
    let c = ctx("bz2.json", "bz2.json");
    let gc = read_json::<CocycleJson>(&fixture("cocycle_z4.json")).unwrap().resolve("z4", &c).unwrap();
    let e = build_extension(&c, &gc).unwrap();
    assert_eq!(e.groupoid.to_raw(), groupoid("z4_extension.json").to_raw());
}

#[test]
fn parse_errors_carry_a_locus() {
    let e = read_json::<GroupoidJson>(&fixture("bz2_truncated.json")).unwrap_err();
    assert!(e.locus.contains("line 5") && e.locus.contains("arrows[1]"), "{e}");

    let e = parse_json::<GroupoidJson>("inline", "{\"objects\": [\"*\"],\n \"arrows\": 3}").unwrap_err();
    assert!(e.locus.contains("line 2") && e.locus.contains("arrows"), "{e}");

    let e = parse_json::<GroupoidJson>("inline", "{\"objects\": [], \"colour\": 1}").unwrap_err();
    assert!(e.message.contains("colour"), "{e}");
}

#[test]
fn repeated_keys_are_rejected() {
    let text = r#"{"objects": ["*"], "arrows": [{"id": "e", "src": "*", "tgt": "*"}],
        "unit": {"*": "e", "*": "e"}, "inverse": {"e": "e"}, "compose": [["e", "e", "e"]]}"#;
    let j = parse_json::<GroupoidJson>("dup", text).unwrap();
    let InputError::Groupoid(g) = j.validate("dup").unwrap_err() else { panic!("expected axiom violations") };
    assert!(g.violations.iter().any(|(k, _)| k == "DuplicateEntry"));

    let c = ctx("bz2.json", "bz2.json");
    let text = r#"{"lambda": {"e": 0, "g": 0, "g": 0}, "omega": []}"#;
    let e = parse_json::<CocycleJson>("dup", text).unwrap().resolve("dup", &c).unwrap_err();
    assert_eq!(e.locus, "lambda.g");
}

#[test]
fn incomplete_cocycles_name_the_missing_entry() {
    let c = ctx("bz2.json", "bz2.json");
    let text = r#"{"lambda": {"e": 0, "g": 0}, "omega": [["e","e","*","e"], ["e","g","*","e"], ["g","e","*","e"]]}"#;
    let e = parse_json::<CocycleJson>("short", text).unwrap().resolve("short", &c).unwrap_err();
    assert!(e.message.contains("(g, g, *)"), "{e}");

    let text = r#"{"lambda": {"e": 0, "g": 7}, "omega": []}"#;
    let e = parse_json::<CocycleJson>("range", text).unwrap().resolve("range", &c).unwrap_err();
    assert_eq!(e.locus, "lambda.g");
}
