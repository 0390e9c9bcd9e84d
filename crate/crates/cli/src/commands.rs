//! Subcommand implementations. Each returns a verdict, a JSON result and
//! named witness files; the dispatcher wraps them into a report.

use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand};
use gext_core::abelian::FiniteAbelianGroup;
use gext_core::autalg::AutData;
use gext_core::cohomology::{backends_agree, cohomology, composable_tuples, Backend, CohomologyGroup, CohomologyOptions, KModule};
use gext_core::extension::{
    all_liftings, build_extension, center_module, check_band, check_generalized_cocycle, classify, cocycle_equivalent,
    enumerate_bands, equivalent_over_refinements, extension_round_trip, extensions_isomorphic, lift_band, obstruction,
    pullback_cocycle, pullback_extension, trivialize_obstruction, verify_classification, Band, ClassifyOutcome,
    ExtensionContext, ExtensionError, ExtensionGroupoid, GeneralizedCocycle,
};
use gext_core::groupoid::Arr;
use gext_core::oracle::census_extensions;
use gext_core::refine::refine;
use gext_core::{Cochain, FiniteGroupoid};
use serde_json::{json, Value};

use crate::config::{BackendChoice, RunConfig};
use crate::io::{
    cochain_json, load_groupoid, read_json, section_json, to_pretty, BandJson, CocycleJson, CoverJson, GroupoidJson,
    InputError, MorphismJson,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub verdict: Verdict,
    pub result: Value,
    /// Witness files, written next to the report when an output directory
    /// is configured.
    pub files: Vec<(String, String)>,
}

impl Outcome {
    fn positive(result: Value) -> Self {
        Outcome { verdict: Verdict::Positive, result, files: Vec::new() }
    }

    fn negative(result: Value) -> Self {
        Outcome { verdict: Verdict::Negative, result, files: Vec::new() }
    }

    fn with_file(mut self, name: impl Into<String>, contents: String) -> Self {
        self.files.push((name.into(), contents));
        self
    }
}

#[derive(Clone, Debug)]
pub enum CliError {
    Input(InputError),
    /// Well-formed input the library rejects (caps, shapes, bands).
    Rejected { kind: &'static str, message: String },
    Io(String),
}

impl From<InputError> for CliError {
    fn from(e: InputError) -> Self {
        CliError::Input(e)
    }
}

impl From<crate::io::ParseError> for CliError {
    fn from(e: crate::io::ParseError) -> Self {
        CliError::Input(InputError::Parse(e))
    }
}

impl From<ExtensionError> for CliError {
    fn from(e: ExtensionError) -> Self {
        let kind = match &e {
            ExtensionError::Aut(_) => "AutomorphismError",
            ExtensionError::Cohomology(_) => "CohomologyError",
            ExtensionError::Cover(_) => "CoverError",
            ExtensionError::CapExceeded(_) => "CapExceeded",
            _ => "ExtensionError",
        };
        CliError::Rejected { kind, message: e.to_string() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(e) => e.fmt(f),
            CliError::Rejected { kind, message } => write!(f, "{kind}: {message}"),
            CliError::Io(m) => write!(f, "io: {m}"),
        }
    }
}

fn rejected(kind: &'static str, e: impl fmt::Display) -> CliError {
    CliError::Rejected { kind, message: e.to_string() }
}

#[derive(Clone, Debug, Args)]
pub struct PairArgs {
    /// Fiber groupoid.
    #[arg(long, visible_alias = "groupoid")]
    pub fiber: PathBuf,
    /// Base groupoid.
    #[arg(long)]
    pub base: PathBuf,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Check the groupoid axioms and print the canonical form.
    Validate {
        #[arg(long)]
        groupoid: PathBuf,
    },
    /// Central sections of a groupoid.
    Center {
        #[arg(long)]
        groupoid: PathBuf,
    },
    /// Strict automorphisms and the exactness checks around them.
    Aut {
        #[arg(long)]
        groupoid: PathBuf,
    },
    /// Automorphisms modulo those induced by sections.
    CoarseAut {
        #[arg(long)]
        groupoid: PathBuf,
    },
    /// Cohomology of the base with trivial coefficients `Z/d1 x Z/d2 ...`,
    /// or with coefficients in the center of a fiber under a band.
    Cohomology {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        coefficients: Vec<u64>,
        #[arg(long)]
        fiber: Option<PathBuf>,
        #[arg(long, requires = "fiber")]
        band: Option<PathBuf>,
    },
    /// Check a band, or list every band when none is given.
    BandCheck {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        band: Option<PathBuf>,
    },
    /// Lift a band to automorphisms, with a candidate cofactor.
    Lift {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        band: PathBuf,
    },
    /// Check the cocycle condition.
    CheckCocycle {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Build the extension groupoid of a cocycle.
    Build {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Read a cocycle off an extension labeled by pairs `(x,y)`.
    Extract {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        extension: PathBuf,
    },
    /// Class of the obstruction of a lifting and cofactor.
    Obstruction {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Correct a cofactor so that it satisfies the cocycle condition.
    Trivialize {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Decide whether two cocycles are equivalent.
    Equivalent {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        other: PathBuf,
    },
    /// All extensions with a given band (the trivial band by default).
    Classify {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        band: Option<PathBuf>,
        /// Cross-check against an exhaustive search over cocycles.
        #[arg(long)]
        verify: bool,
    },
    /// Refinement groupoid of a cover.
    Refine {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        cover: PathBuf,
    },
    /// Pull a cocycle back to the refinement of a cover, optionally
    /// comparing with a second cocycle over a second cover.
    RefinePullback {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        cocycle: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long, requires = "other_cover")]
        other: Option<PathBuf>,
        #[arg(long, requires = "other")]
        other_cover: Option<PathBuf>,
    },
    /// Every product bundle by brute force, up to isomorphism.
    Census {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        band: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Center { .. } => "center",
            Command::Aut { .. } => "aut",
            Command::CoarseAut { .. } => "coarse-aut",
            Command::Cohomology { .. } => "cohomology",
            Command::BandCheck { .. } => "band-check",
            Command::Lift { .. } => "lift",
            Command::CheckCocycle { .. } => "check-cocycle",
            Command::Build { .. } => "build",
            Command::Extract { .. } => "extract",
            Command::Obstruction { .. } => "obstruction",
            Command::Trivialize { .. } => "trivialize",
            Command::Equivalent { .. } => "equivalent",
            Command::Classify { .. } => "classify",
            Command::Refine { .. } => "refine",
            Command::RefinePullback { .. } => "refine-pullback",
            Command::Census { .. } => "census",
        }
    }
}

fn file_name(p: &Path) -> String {
    p.display().to_string()
}

fn context(pair: &PairArgs, cfg: &RunConfig) -> Result<ExtensionContext, CliError> {
    let a = load_groupoid(&pair.fiber)?;
    let k = load_groupoid(&pair.base)?;
    cfg.log("computing automorphisms of the fiber");
    let ctx = ExtensionContext::new(a, k, cfg.cap_saut as usize)?;
    Ok(ctx.with_convention(cfg.action_convention()))
}

fn load_cocycle(ctx: &ExtensionContext, path: &Path) -> Result<GeneralizedCocycle, CliError> {
    let j: CocycleJson = read_json(path)?;
    Ok(j.resolve(&file_name(path), ctx)?)
}

fn load_band(ctx: &ExtensionContext, path: &Path) -> Result<Band, CliError> {
    let j: BandJson = read_json(path)?;
    Ok(j.resolve(&file_name(path), ctx)?)
}

fn cocycle_value(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Value {
    serde_json::to_value(CocycleJson::from_cocycle(ctx, gc)).expect("serializable")
}

fn band_value(k: &FiniteGroupoid, b: &Band) -> Value {
    serde_json::to_value(BandJson::from_band(k, b)).expect("serializable")
}

fn groupoid_value(g: &FiniteGroupoid) -> Value {
    serde_json::to_value(GroupoidJson::from_groupoid(g)).expect("serializable")
}

/// Values of a center-valued cochain, shown as central sections.
fn center_cochain(ctx: &ExtensionContext, c: &Cochain) -> Value {
    let t = composable_tuples(&ctx.k, c.degree);
    cochain_json(&ctx.k, &t.tuples, c, &|v| section_json(&ctx.a, &ctx.data.center.sections[v].values))
}

fn transformations_value(ctx: &ExtensionContext, rho: &[Vec<Arr>]) -> Value {
    let m: serde_json::Map<String, Value> =
        rho.iter().enumerate().map(|(xi, s)| (ctx.k.arrow_id(xi).to_string(), section_json(&ctx.a, s))).collect();
    Value::Object(m)
}

/// Least generating set found greedily in index order.
fn generators(n: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut inside = vec![false; n];
    let mut gens = Vec::new();
    for g in 0..n {
        if inside[g] {
            continue;
        }
        gens.push(g);
        // closure of the generators found so far, starting from the identity
        let e = (0..n).find(|&e| mul(e, g) == g).unwrap_or(0);
        let mut seen = vec![false; n];
        seen[e] = true;
        let mut stack = vec![e];
        while let Some(x) = stack.pop() {
            for &s in &gens {
                let y = mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        inside = seen;
    }
    gens
}

/// Invariant factors when the group is abelian and small enough to check.
fn decomposition(n: usize, mul: impl Fn(usize, usize) -> usize) -> Value {
    const LIMIT: usize = 256;
    if n > LIMIT {
        return Value::Null;
    }
    let table: Vec<usize> = (0..n * n).map(|i| mul(i / n, i % n)).collect();
    match FiniteAbelianGroup::from_table(n, table) {
        Ok(g) => json!(g.invariant_factors()),
        Err(_) => Value::Null,
    }
}

struct Computed {
    group: CohomologyGroup,
    /// Factors from the other backend and whether they agree, for `both`.
    check: Value,
    agree: bool,
}

fn compute_cohomology(m: &KModule, n: usize, cfg: &RunConfig, normalized: bool) -> Result<Computed, CliError> {
    let opts = CohomologyOptions { normalized, cap: cfg.cap_cohomology };
    let run = |b: Backend| cohomology(m, n, b, opts).map_err(|e| rejected("CohomologyError", e));
    match cfg.backend {
        BackendChoice::Snf => Ok(Computed { group: run(Backend::Snf)?, check: Value::Null, agree: true }),
        BackendChoice::Exhaustive => Ok(Computed { group: run(Backend::Exhaustive)?, check: Value::Null, agree: true }),
        BackendChoice::Both => {
            let s = run(Backend::Snf)?;
            let x = run(Backend::Exhaustive)?;
            let agree = backends_agree(m, &s, &x).map_err(|e| rejected("CohomologyError", e))?;
            let check = json!({ "exhaustive_invariant_factors": x.invariant_factors(), "agree": agree });
            Ok(Computed { group: s, check, agree })
        }
    }
}

pub fn run(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cmd {
        Command::Validate { groupoid } => validate(groupoid),
        Command::Center { groupoid } => center(groupoid),
        Command::Aut { groupoid } => aut(groupoid, cfg),
        Command::CoarseAut { groupoid } => coarse_aut(groupoid, cfg),
        Command::Cohomology { base, degree, coefficients, fiber, band } => {
            cohomology_cmd(base, *degree, coefficients, fiber.as_deref(), band.as_deref(), cfg)
        }
        Command::BandCheck { pair, band } => band_check(pair, band.as_deref(), cfg),
        Command::Lift { pair, band } => lift(pair, band, cfg),
        Command::CheckCocycle { pair, cocycle } => check_cocycle(pair, cocycle, cfg),
        Command::Build { pair, cocycle } => build(pair, cocycle, cfg),
        Command::Extract { pair, extension } => extract(pair, extension, cfg),
        Command::Obstruction { pair, cocycle } => obstruction_cmd(pair, cocycle, cfg),
        Command::Trivialize { pair, cocycle } => trivialize(pair, cocycle, cfg),
        Command::Equivalent { pair, cocycle, other } => equivalent(pair, cocycle, other, cfg),
        Command::Classify { pair, band, verify } => classify_cmd(pair, band.as_deref(), *verify, cfg),
        Command::Refine { base, cover } => refine_cmd(base, cover),
        Command::RefinePullback { pair, cocycle, cover, other, other_cover } => {
            refine_pullback(pair, cocycle, cover, other.as_deref().zip(other_cover.as_deref()), cfg)
        }
        Command::Census { pair, band } => census(pair, band.as_deref(), cfg),
    }
}

fn validate(path: &Path) -> Result<Outcome, CliError> {
    let g = load_groupoid(path)?;
    let comps = g.components();
    let n_comp = comps.iter().copied().max().map_or(0, |c| c + 1);
    Ok(Outcome::positive(json!({
        "objects": g.n_objects(),
        "arrows": g.n_arrows(),
        "components": n_comp,
    }))
    .with_file("groupoid.json", to_pretty(&GroupoidJson::from_groupoid(&g))))
}

fn center(path: &Path) -> Result<Outcome, CliError> {
    let a = load_groupoid(path)?;
    let c = gext_core::Center::compute(&a);
    let gens: Vec<Value> = c.group.basis().iter().map(|&i| section_json(&a, &c.sections[i].values)).collect();
    let elements: Vec<Value> = c.sections.iter().map(|s| section_json(&a, &s.values)).collect();
    Ok(Outcome::positive(json!({
        "group_order": c.order(),
        "decomposition": c.group.invariant_factors(),
        "generators": gens,
        "elements": elements,
    })))
}

fn automorphism_value(a: &FiniteGroupoid, i: usize, f: &gext_core::StrictMorphism) -> Value {
    json!({ "index": i, "map": serde_json::to_value(MorphismJson::from_morphism(a, a, f)).expect("serializable") })
}

fn aut(path: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = load_groupoid(path)?;
    let d = AutData::compute(&a, cfg.cap_saut as usize).map_err(|e| rejected("AutomorphismError", e))?;
    let s = &d.saut;
    let ex = d.exactness();
    let autos: Vec<Value> = s.autos.iter().enumerate().map(|(i, f)| automorphism_value(&a, i, f)).collect();
    let result = json!({
        "group_order": s.len(),
        "generators": generators(s.len(), |i, j| s.compose(i, j)),
        "decomposition": decomposition(s.len(), |i, j| s.compose(i, j)),
        "automorphisms": autos,
        "section_group_order": d.n.len(),
        "exactness": {
            "center_injective": ex.center_injective,
            "kernel_is_center": ex.kernel_is_center,
            "kernel_of_projection_is_image": ex.kernel_of_projection_is_image,
            "projection_surjective": ex.projection_surjective,
            "stabilizers_agree": ex.stabilizers_agree,
            "image_normal": ex.image_normal,
            "t_is_homomorphism": ex.t_is_homomorphism,
            "cells_match_cosets": ex.cells_match_cosets,
        },
    });
    Ok(if ex.all() { Outcome::positive(result) } else { Outcome::negative(result) })
}

fn coarse_aut(path: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let a = load_groupoid(path)?;
    let d = AutData::compute(&a, cfg.cap_saut as usize).map_err(|e| rejected("AutomorphismError", e))?;
    let co = &d.coarse;
    let classes: Vec<Value> = (0..co.order())
        .map(|c| {
            let members: Vec<usize> = (0..d.saut.len()).filter(|&i| co.coset_of[i] == c).collect();
            json!({ "class": c, "representative": co.reps[c], "members": members })
        })
        .collect();
    Ok(Outcome::positive(json!({
        "group_order": co.order(),
        "generators": generators(co.order(), |x, y| co.mult(x, y)),
        "decomposition": decomposition(co.order(), |x, y| co.mult(x, y)),
        "classes": classes,
    })))
}

fn cohomology_cmd(
    base: &Path,
    degree: usize,
    coefficients: &[u64],
    fiber: Option<&Path>,
    band: Option<&Path>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let (m, render): (KModule, Box<dyn Fn(usize) -> Value>) = match fiber {
        Some(f) => {
            let ctx = context(&PairArgs { fiber: f.to_path_buf(), base: base.to_path_buf() }, cfg)?;
            let b = match band {
                Some(p) => load_band(&ctx, p)?,
                None => Band::trivial(&ctx.k),
            };
            let lambda = lift_band(&ctx, &b)?;
            let m = center_module(&ctx, &lambda)?;
            let sections: Vec<Value> = ctx.data.center.sections.iter().map(|s| section_json(&ctx.a, &s.values)).collect();
            (m, Box::new(move |v| sections[v].clone()))
        }
        None => {
            let k = load_groupoid(base)?;
            if coefficients.iter().any(|&d| d < 1) {
                return Err(rejected("InvalidCoefficients", "coefficient orders must be positive"));
            }
            let e = FiniteAbelianGroup::product_of_cyclic(coefficients);
            let coords: Vec<Vec<u64>> = (0..e.order()).map(|v| e.coords(v).to_vec()).collect();
            (KModule::trivial(k, e).with_convention(cfg.action_convention()), Box::new(move |v| json!(coords[v])))
        }
    };
    cfg.log("computing cohomology");
    let c = compute_cohomology(&m, degree, cfg, cfg.normalized)?;
    let tuples = composable_tuples(&m.k, degree);
    let mut out = Outcome::positive(Value::Null);
    let mut names = Vec::new();
    for (i, g) in c.group.generators.iter().enumerate() {
        let name = format!("generator-{i}.json");
        out = out.with_file(name.clone(), to_pretty(&cochain_json(&m.k, &tuples.tuples, g, &*render)));
        names.push(name);
    }
    out.result = json!({
        "degree": degree,
        "normalized": cfg.normalized,
        "order": c.group.order(),
        "invariant_factors": c.group.invariant_factors(),
        "generator_orders": c.group.orders,
        "generator_files": names,
        "cross_check": c.check,
    });
    if !c.agree {
        out.verdict = Verdict::Negative;
    }
    Ok(out)
}

fn band_check(pair: &PairArgs, band: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let k = &ctx.k;
    let Some(p) = band else {
        let bands: Vec<Value> = enumerate_bands(&ctx).iter().map(|b| band_value(k, b)).collect();
        return Ok(Outcome::positive(json!({ "band_count": bands.len(), "bands": bands })));
    };
    let b = load_band(&ctx, p)?;
    let bad = check_band(&ctx, &b)?;
    if bad.is_empty() {
        let lambda = lift_band(&ctx, &b)?;
        let lifting: serde_json::Map<String, Value> = lambda.iter().enumerate().map(|(g, &l)| (k.arrow_id(g).to_string(), json!(l))).collect();
        Ok(Outcome::positive(json!({ "band": true, "lifting": lifting })))
    } else {
        let pairs: Vec<[&str; 2]> = bad.iter().map(|&(x, y)| [k.arrow_id(x), k.arrow_id(y)]).collect();
        Ok(Outcome::negative(json!({ "band": false, "violating_pairs": pairs })))
    }
}

fn lift(pair: &PairArgs, band: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let b = load_band(&ctx, band)?;
    match GeneralizedCocycle::canonical(&ctx, &b) {
        Ok(gc) => {
            let n = all_liftings(&ctx, &b, cfg.cap_census as usize).map(|l| json!(l.len())).unwrap_or(Value::Null);
            let v = cocycle_value(&ctx, &gc);
            Ok(Outcome::positive(json!({ "lifting": v["lambda"], "lifting_count": n, "candidate": v })).with_file("candidate.json", to_pretty(&v)))
        }
        Err(ExtensionError::NotABand(x, y)) => {
            Ok(Outcome::negative(json!({ "band": false, "violating_pair": [ctx.k.arrow_id(x), ctx.k.arrow_id(y)] })))
        }
        Err(e) => Err(e.into()),
    }
}

/// Report of the cocycle condition; `None` when it holds.
fn cocycle_failure(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Option<Value> {
    let r = check_generalized_cocycle(ctx, gc);
    if r.is_ok() {
        return None;
    }
    let (a, k) = (&ctx.a, &ctx.k);
    let minimal = r
        .violations
        .iter()
        .min()
        .map(|&(x, y, z, o)| json!([k.arrow_id(x), k.arrow_id(y), k.arrow_id(z), a.object_id(o)]));
    let inverse: Vec<Value> = r.inverse_pair_violations.iter().map(|&(x, o)| json!([k.arrow_id(x), a.object_id(o)])).collect();
    Some(json!({
        "structural": r.structural,
        "violation_count": r.violations.len(),
        "minimal_violation": minimal,
        "inverse_pair_violations": inverse,
    }))
}

fn check_cocycle(pair: &PairArgs, cocycle: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let gc = load_cocycle(&ctx, cocycle)?;
    let band = band_value(&ctx.k, &Band::of_lifting(&ctx, &gc.lambda));
    Ok(match cocycle_failure(&ctx, &gc) {
        None => Outcome::positive(json!({ "cocycle": true, "band": band })),
        Some(f) => Outcome::negative(json!({ "cocycle": false, "band": band, "failure": f })),
    })
}

fn extension_files(out: Outcome, prefix: &str, ctx: &ExtensionContext, e: &ExtensionGroupoid) -> Outcome {
    out.with_file(format!("{prefix}.json"), to_pretty(&GroupoidJson::from_groupoid(&e.groupoid))).with_file(
        format!("{prefix}-projection.json"),
        to_pretty(&MorphismJson::from_morphism(&e.groupoid, &ctx.k, &e.projection)),
    )
}

fn build(pair: &PairArgs, cocycle: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let gc = load_cocycle(&ctx, cocycle)?;
    if let Some(f) = cocycle_failure(&ctx, &gc) {
        return Ok(Outcome::negative(json!({ "cocycle": false, "failure": f })));
    }
    let e = build_extension(&ctx, &gc)?;
    let out = Outcome::positive(json!({
        "objects": e.groupoid.n_objects(),
        "arrows": e.groupoid.n_arrows(),
        "extension": groupoid_value(&e.groupoid),
    }));
    Ok(extension_files(out, "extension", &ctx, &e))
}

fn extract(pair: &PairArgs, extension: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let g = load_groupoid(extension)?;
    let e = match ExtensionGroupoid::from_identifiers(&ctx, g) {
        Ok(e) => e,
        Err(ExtensionError::NotAProductBundle(why)) => {
            return Ok(Outcome::negative(json!({ "product_bundle": false, "reason": why })));
        }
        Err(e) => return Err(e.into()),
    };
    let (gc, built, phi) = extension_round_trip(&ctx, &e)?;
    let v = cocycle_value(&ctx, &gc);
    let iso = serde_json::to_value(MorphismJson::from_morphism(&e.groupoid, &built.groupoid, &phi)).expect("serializable");
    Ok(Outcome::positive(json!({ "product_bundle": true, "cocycle": v, "isomorphism": iso }))
        .with_file("cocycle.json", to_pretty(&v))
        .with_file("isomorphism.json", to_pretty(&iso)))
}

fn obstruction_cmd(pair: &PairArgs, cocycle: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let gc = load_cocycle(&ctx, cocycle)?;
    let m = center_module(&ctx, &gc.lambda)?;
    let xi = obstruction(&ctx, &gc)?;
    let h3 = compute_cohomology(&m, 3, cfg, true)?;
    let class = h3.group.class_of(&m, &xi).map_err(|e| rejected("CohomologyError", e))?;
    let xi_v = center_cochain(&ctx, &xi);
    let mut result = json!({
        "class": class.coords,
        "zero": class.is_zero(),
        "h3_invariant_factors": h3.group.invariant_factors(),
        "obstruction": xi_v,
        "cross_check": h3.check,
    });
    let zero = class.is_zero();
    match class.witness.filter(|_| zero) {
        Some(c) => {
            let w = center_cochain(&ctx, &c);
            result["witness"] = w.clone();
            let out = if h3.agree { Outcome::positive(result) } else { Outcome::negative(result) };
            Ok(out.with_file("witness.json", to_pretty(&w)))
        }
        None => Ok(Outcome::negative(result).with_file("obstruction.json", to_pretty(&xi_v))),
    }
}

fn trivialize(pair: &PairArgs, cocycle: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let gc = load_cocycle(&ctx, cocycle)?;
    let m = center_module(&ctx, &gc.lambda)?;
    let h3 = compute_cohomology(&m, 3, cfg, true)?;
    match trivialize_obstruction(&ctx, &gc, &h3.group, &m) {
        Ok((c, fixed)) => {
            let v = cocycle_value(&ctx, &fixed);
            Ok(Outcome::positive(json!({ "witness": center_cochain(&ctx, &c), "cocycle": v })).with_file("cocycle.json", to_pretty(&v)))
        }
        Err(ExtensionError::ObstructionNonzero(coords)) => {
            let xi = obstruction(&ctx, &gc)?;
            Ok(Outcome::negative(json!({ "class": coords, "obstruction": center_cochain(&ctx, &xi) })))
        }
        Err(e) => Err(e.into()),
    }
}

fn require_cocycle(ctx: &ExtensionContext, gc: &GeneralizedCocycle, path: &Path) -> Result<(), CliError> {
    match cocycle_failure(ctx, gc) {
        None => Ok(()),
        Some(f) => Err(CliError::Rejected { kind: "NotACocycle", message: format!("{}: {}", file_name(path), f) }),
    }
}

fn equivalent(pair: &PairArgs, cocycle: &Path, other: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let g1 = load_cocycle(&ctx, cocycle)?;
    let g2 = load_cocycle(&ctx, other)?;
    require_cocycle(&ctx, &g1, cocycle)?;
    require_cocycle(&ctx, &g2, other)?;
    let (b1, b2) = (Band::of_lifting(&ctx, &g1.lambda), Band::of_lifting(&ctx, &g2.lambda));
    if b1 != b2 {
        let differ: Vec<&str> = (0..ctx.k.n_arrows()).filter(|&g| b1.values[g] != b2.values[g]).map(|g| ctx.k.arrow_id(g)).collect();
        return Ok(Outcome::negative(json!({ "equivalent": false, "reason": "bands differ", "arrows": differ })));
    }
    match cocycle_equivalent(&ctx, &g1, &g2) {
        Ok(Some(rho)) => {
            let w = transformations_value(&ctx, &rho);
            Ok(Outcome::positive(json!({ "equivalent": true, "transformations": w })).with_file("witness.json", to_pretty(&w)))
        }
        Ok(None) | Err(ExtensionError::BandMismatch) => Ok(Outcome::negative(json!({
            "equivalent": false,
            "reason": "no family of transformations relates the cofactors",
            "band": band_value(&ctx.k, &b1),
        }))),
        Err(e) => Err(e.into()),
    }
}

fn classify_cmd(pair: &PairArgs, band: Option<&Path>, verify: bool, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let b = match band {
        Some(p) => load_band(&ctx, p)?,
        None => Band::trivial(&ctx.k),
    };
    let bad = check_band(&ctx, &b)?;
    if !bad.is_empty() {
        let pairs: Vec<[&str; 2]> = bad.iter().map(|&(x, y)| [ctx.k.arrow_id(x), ctx.k.arrow_id(y)]).collect();
        return Ok(Outcome::negative(json!({ "band": false, "violating_pairs": pairs })));
    }
    cfg.log("classifying");
    let opts = CohomologyOptions { normalized: true, cap: cfg.cap_cohomology };
    match classify(&ctx, &b, opts)? {
        ClassifyOutcome::Obstructed { coords, xi, .. } => Ok(Outcome::negative(json!({
            "band": band_value(&ctx.k, &b),
            "obstructed": true,
            "class": coords,
            "obstruction": center_cochain(&ctx, &xi),
        }))),
        ClassifyOutcome::Classified(cls) => {
            let mut out = Outcome::positive(Value::Null);
            let mut classes = Vec::new();
            for (i, c) in cls.classes.iter().enumerate() {
                let v = cocycle_value(&ctx, &c.cocycle);
                out = out.with_file(format!("class-{i}-cocycle.json"), to_pretty(&v));
                out = extension_files(out, &format!("class-{i}"), &ctx, &c.extension);
                classes.push(json!({
                    "coords": c.coords,
                    "cocycle": v,
                    "extension_file": format!("class-{i}.json"),
                    "objects": c.extension.groupoid.n_objects(),
                    "arrows": c.extension.groupoid.n_arrows(),
                }));
            }
            let mut result = json!({
                "band": band_value(&ctx.k, &b),
                "obstructed": false,
                "h2_invariant_factors": cls.h2.invariant_factors(),
                "class_count": classes.len(),
                "classes": classes,
            });
            if verify {
                let limit = cfg.cap_census as usize;
                let chk = verify_classification(&ctx, &cls, limit, limit)?;
                result["verification"] = json!({
                    "pairwise_distinct": chk.pairwise_distinct,
                    "searched": chk.searched,
                    "each_matches_one": chk.each_matches_one,
                    "isomorphism_agrees": chk.isomorphism_agrees,
                });
                if !chk.all() {
                    out.verdict = Verdict::Negative;
                }
            }
            out.result = result;
            Ok(out)
        }
    }
}

fn load_cover(k: &FiniteGroupoid, path: &Path) -> Result<gext_core::OpenCover, CliError> {
    let j: CoverJson = read_json(path)?;
    Ok(j.resolve(&file_name(path), k)?)
}

fn refine_cmd(base: &Path, cover: &Path) -> Result<Outcome, CliError> {
    let k = load_groupoid(base)?;
    let u = load_cover(&k, cover)?;
    let r = refine(&k, &u).map_err(|e| rejected("CoverError", e))?;
    let proj = serde_json::to_value(MorphismJson::from_morphism(&r.groupoid, &k, &r.projection)).expect("serializable");
    Ok(Outcome::positive(json!({
        "objects": r.groupoid.n_objects(),
        "arrows": r.groupoid.n_arrows(),
        "refinement": groupoid_value(&r.groupoid),
        "projection": proj,
    }))
    .with_file("refinement.json", to_pretty(&GroupoidJson::from_groupoid(&r.groupoid)))
    .with_file("projection.json", to_pretty(&proj)))
}

fn refine_pullback(
    pair: &PairArgs,
    cocycle: &Path,
    cover: &Path,
    other: Option<(&Path, &Path)>,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let gc = load_cocycle(&ctx, cocycle)?;
    require_cocycle(&ctx, &gc, cocycle)?;
    let u = load_cover(&ctx.k, cover)?;
    let (ctx_u, gc_u) = pullback_cocycle(&ctx, &gc, &u)?;
    let cocycle_ok = check_generalized_cocycle(&ctx_u, &gc_u).is_ok();
    // the extension of the pulled-back cocycle against the fiber product
    let r = refine(&ctx.k, &u).map_err(|e| rejected("CoverError", e))?;
    let fibered = pullback_extension(&ctx, &ctx_u, &r.projection, &build_extension(&ctx, &gc)?)?;
    let built = build_extension(&ctx_u, &gc_u)?;
    let agrees = extensions_isomorphic(&ctx_u, &fibered, &built)?.is_some();
    let v = cocycle_value(&ctx_u, &gc_u);
    let mut result = json!({
        "refinement": groupoid_value(&ctx_u.k),
        "cocycle": v,
        "pulled_back_is_cocycle": cocycle_ok,
        "matches_fiber_product": agrees,
    });
    let mut positive = cocycle_ok && agrees;
    if let Some((o, oc)) = other {
        let g2 = load_cocycle(&ctx, o)?;
        require_cocycle(&ctx, &g2, o)?;
        let v2 = load_cover(&ctx.k, oc)?;
        let (_, g2_v) = pullback_cocycle(&ctx, &g2, &v2)?;
        let eq = equivalent_over_refinements(&ctx, &u, &gc_u, &v2, &g2_v)?;
        result["equivalent_on_common_refinement"] = json!(eq.is_some());
        positive &= eq.is_some();
    }
    let out = if positive { Outcome::positive(result) } else { Outcome::negative(result) };
    Ok(out
        .with_file("refinement.json", to_pretty(&GroupoidJson::from_groupoid(&ctx_u.k)))
        .with_file("cocycle.json", to_pretty(&v)))
}

fn census(pair: &PairArgs, band: Option<&Path>, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let ctx = context(pair, cfg)?;
    let b = band.map(|p| load_band(&ctx, p)).transpose()?;
    cfg.log("filling composition tables");
    let r = census_extensions(&ctx, b.as_ref(), cfg.cap_census as usize).map_err(|e| rejected("CensusError", e))?;
    let mut out = Outcome::positive(Value::Null);
    let mut classes = Vec::new();
    for (i, c) in r.classes.iter().enumerate() {
        let rep = &r.extensions[c.members[0]];
        out = out.with_file(format!("class-{i}.json"), to_pretty(&GroupoidJson::from_groupoid(&rep.groupoid)));
        classes.push(json!({ "band": band_value(&ctx.k, &c.band), "members": c.members.len(), "representative_file": format!("class-{i}.json") }));
    }
    out.result = json!({
        "description": r.description,
        "tables": r.extensions.len(),
        "class_count": r.class_count(),
        "classes": classes,
    });
    Ok(out)
}
