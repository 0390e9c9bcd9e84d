//! JSON file formats and their resolution against loaded groupoids.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::path::Path;

use gext_core::cohomology::Cochain;
use gext_core::extension::{Band, ExtensionContext};
use gext_core::groupoid::{validate_groupoid, Arr, Obj, RawArrow, RawGroupoid};
use gext_core::{FiniteGroupoid, GeneralizedCocycle, OpenCover, StrictMorphism};
use serde::de::{DeserializeOwned, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

/// A problem with an input file, located by line/column or by field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub file: String,
    pub locus: String,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.file, self.locus, self.message)
    }
}

impl ParseError {
    pub fn new(file: &str, locus: impl Into<String>, message: impl Into<String>) -> Self {
        ParseError { file: file.to_string(), locus: locus.into(), message: message.into() }
    }
}

/// Input that parsed but failed the groupoid axioms.
#[derive(Clone, Debug)]
pub struct InvalidGroupoid {
    pub file: String,
    pub violations: Vec<(String, String)>,
}

#[derive(Clone, Debug)]
pub enum InputError {
    Parse(ParseError),
    Groupoid(InvalidGroupoid),
}

impl From<ParseError> for InputError {
    fn from(e: ParseError) -> Self {
        InputError::Parse(e)
    }
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(e) => e.fmt(f),
            InputError::Groupoid(g) => write!(f, "{}: not a groupoid ({} violations)", g.file, g.violations.len()),
        }
    }
}

/// A JSON object read as an ordered list of entries, so repeated keys are
/// kept and can be reported instead of silently overwritten.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Entries<V>(pub Vec<(String, V)>);

impl<V: Serialize> Serialize for Entries<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<'de, V: Deserialize<'de>> Deserialize<'de> for Entries<V> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V2<V>(PhantomData<V>);
        impl<'de, V: Deserialize<'de>> Visitor<'de> for V2<V> {
            type Value = Entries<V>;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object")
            }
            fn visit_map<M: MapAccess<'de>>(self, mut m: M) -> Result<Self::Value, M::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry()? {
                    out.push((k, v));
                }
                Ok(Entries(out))
            }
        }
        d.deserialize_map(V2(PhantomData))
    }
}

impl<V> Entries<V> {
    /// Resolves keys to indices `0..n`; every index must appear exactly once.
    fn resolve_keys(
        &self,
        file: &str,
        field: &str,
        n: usize,
        index: impl Fn(&str) -> Option<usize>,
    ) -> Result<Vec<&V>, ParseError> {
        let mut out: Vec<Option<&V>> = vec![None; n];
        for (k, v) in &self.0 {
            let i = index(k).ok_or_else(|| ParseError::new(file, format!("{field}.{k}"), "unknown identifier"))?;
            if out[i].is_some() {
                return Err(ParseError::new(file, format!("{field}.{k}"), "entry given twice"));
            }
            out[i] = Some(v);
        }
        out.into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| ParseError::new(file, field, format!("missing entry number {i}"))))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowJson {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub objects: Vec<String>,
    pub arrows: Vec<ArrowJson>,
    pub unit: Entries<String>,
    pub inverse: Entries<String>,
    pub compose: Vec<[String; 3]>,
}

impl GroupoidJson {
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let raw = g.to_raw();
        GroupoidJson {
            objects: raw.objects,
            arrows: raw.arrows.into_iter().map(|a| ArrowJson { id: a.id, src: a.src, tgt: a.tgt }).collect(),
            unit: Entries(raw.unit),
            inverse: Entries(raw.inverse),
            compose: raw.compose.into_iter().map(|(g, h, gh)| [g, h, gh]).collect(),
        }
    }

    pub fn to_raw(&self) -> RawGroupoid {
        RawGroupoid {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| RawArrow { id: a.id.clone(), src: a.src.clone(), tgt: a.tgt.clone() })
                .collect(),
            unit: self.unit.0.clone(),
            inverse: self.inverse.0.clone(),
            compose: self.compose.iter().map(|[g, h, gh]| (g.clone(), h.clone(), gh.clone())).collect(),
        }
    }

    pub fn validate(&self, file: &str) -> Result<FiniteGroupoid, InputError> {
        validate_groupoid(&self.to_raw()).map_err(|r| {
            InputError::Groupoid(InvalidGroupoid {
                file: file.to_string(),
                violations: r.violations.iter().map(|v| (v.kind().to_string(), v.to_string())).collect(),
            })
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismJson {
    pub f0: Entries<String>,
    pub f1: Entries<String>,
}

impl MorphismJson {
    pub fn from_morphism(dom: &FiniteGroupoid, cod: &FiniteGroupoid, f: &StrictMorphism) -> Self {
        MorphismJson {
            f0: Entries((0..dom.n_objects()).map(|x| (dom.object_id(x).to_string(), cod.object_id(f.obj(x)).to_string())).collect()),
            f1: Entries((0..dom.n_arrows()).map(|g| (dom.arrow_id(g).to_string(), cod.arrow_id(f.arr(g)).to_string())).collect()),
        }
    }

    pub fn resolve(&self, file: &str, dom: &FiniteGroupoid, cod: &FiniteGroupoid) -> Result<StrictMorphism, ParseError> {
        let f0 = self
            .f0
            .resolve_keys(file, "f0", dom.n_objects(), |s| dom.object_index(s))?
            .into_iter()
            .map(|y| cod.object_index(y).ok_or_else(|| ParseError::new(file, "f0", format!("unknown object {y}"))))
            .collect::<Result<Vec<Obj>, _>>()?;
        let f1 = self
            .f1
            .resolve_keys(file, "f1", dom.n_arrows(), |s| dom.arrow_index(s))?
            .into_iter()
            .map(|y| cod.arrow_index(y).ok_or_else(|| ParseError::new(file, "f1", format!("unknown arrow {y}"))))
            .collect::<Result<Vec<Arr>, _>>()?;
        StrictMorphism::new(dom, cod, f0, f1).map_err(|e| ParseError::new(file, "f1", e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub subsets: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CoverJson {
    pub fn from_cover(k: &FiniteGroupoid, u: &OpenCover) -> Self {
        CoverJson {
            subsets: u.subsets.iter().map(|s| s.iter().map(|&x| k.object_id(x).to_string()).collect()).collect(),
            labels: Some(u.labels.clone()),
        }
    }

    pub fn resolve(&self, file: &str, k: &FiniteGroupoid) -> Result<OpenCover, ParseError> {
        let mut subsets = Vec::new();
        for (i, s) in self.subsets.iter().enumerate() {
            let mut v = Vec::new();
            for (j, id) in s.iter().enumerate() {
                v.push(
                    k.object_index(id)
                        .ok_or_else(|| ParseError::new(file, format!("subsets[{i}][{j}]"), format!("unknown object {id}")))?,
                );
            }
            subsets.push(v);
        }
        let r = match &self.labels {
            Some(l) => OpenCover::with_labels(k, subsets, l.clone()),
            None => OpenCover::new(k, subsets),
        };
        r.map_err(|e| ParseError::new(file, "subsets", e.to_string()))
    }
}

/// Band: coarse class index (as listed by `coarse-aut`) of every base arrow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandJson {
    pub values: Entries<usize>,
}

impl BandJson {
    pub fn from_band(k: &FiniteGroupoid, b: &Band) -> Self {
        BandJson { values: Entries((0..k.n_arrows()).map(|g| (k.arrow_id(g).to_string(), b.values[g])).collect()) }
    }

    pub fn resolve(&self, file: &str, ctx: &ExtensionContext) -> Result<Band, ParseError> {
        let k = &ctx.k;
        let order = ctx.data.coarse.order();
        let values: Vec<usize> = self.values.resolve_keys(file, "values", k.n_arrows(), |s| k.arrow_index(s))?.into_iter().copied().collect();
        if let Some(g) = values.iter().position(|&v| v >= order) {
            return Err(ParseError::new(
                file,
                format!("values.{}", k.arrow_id(g)),
                format!("class {} out of range, there are {order} classes", values[g]),
            ));
        }
        Ok(Band { values })
    }
}

/// `{"lambda": {arrow: automorphism index}, "omega": [[ξ, η, a, arrow], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleJson {
    pub lambda: Entries<usize>,
    pub omega: Vec<[String; 4]>,
}

impl CocycleJson {
    pub fn from_cocycle(ctx: &ExtensionContext, gc: &GeneralizedCocycle) -> Self {
        let (a, k) = (&ctx.a, &ctx.k);
        let lambda = Entries((0..k.n_arrows()).map(|g| (k.arrow_id(g).to_string(), gc.lambda[g])).collect());
        let mut omega = Vec::new();
        for (p, t) in ctx.pairs.tuples.iter().enumerate() {
            for x in 0..a.n_objects() {
                omega.push([
                    k.arrow_id(t[0]).to_string(),
                    k.arrow_id(t[1]).to_string(),
                    a.object_id(x).to_string(),
                    a.arrow_id(gc.omega[p][x]).to_string(),
                ]);
            }
        }
        CocycleJson { lambda, omega }
    }

    pub fn resolve(&self, file: &str, ctx: &ExtensionContext) -> Result<GeneralizedCocycle, ParseError> {
        let (a, k) = (&ctx.a, &ctx.k);
        let n = ctx.data.saut.len();
        let lambda: Vec<usize> =
            self.lambda.resolve_keys(file, "lambda", k.n_arrows(), |s| k.arrow_index(s))?.into_iter().copied().collect();
        if let Some(g) = lambda.iter().position(|&l| l >= n) {
            return Err(ParseError::new(
                file,
                format!("lambda.{}", k.arrow_id(g)),
                format!("automorphism {} out of range, there are {n}", lambda[g]),
            ));
        }
        let mut omega: Vec<Vec<Option<Arr>>> = vec![vec![None; a.n_objects()]; ctx.pairs.len()];
        for (i, [xi, eta, x, v]) in self.omega.iter().enumerate() {
            let locus = format!("omega[{i}]");
            let arrow = |s: &str, g: &FiniteGroupoid| g.arrow_index(s).ok_or_else(|| ParseError::new(file, &locus, format!("unknown arrow {s}")));
            let (xi, eta, v) = (arrow(xi, k)?, arrow(eta, k)?, arrow(v, a)?);
            let x = a.object_index(x).ok_or_else(|| ParseError::new(file, &locus, format!("unknown object {x}")))?;
            let p = ctx
                .pairs
                .index_of(&[xi, eta])
                .ok_or_else(|| ParseError::new(file, &locus, "arrows are not composable"))?;
            if omega[p][x].replace(v).is_some() {
                return Err(ParseError::new(file, &locus, "entry given twice"));
            }
        }
        let mut out = Vec::with_capacity(omega.len());
        for (p, row) in omega.into_iter().enumerate() {
            let t = &ctx.pairs.tuples[p];
            let mut r = Vec::with_capacity(row.len());
            for (x, v) in row.into_iter().enumerate() {
                r.push(v.ok_or_else(|| {
                    ParseError::new(
                        file,
                        "omega",
                        format!("missing entry for ({}, {}, {})", k.arrow_id(t[0]), k.arrow_id(t[1]), a.object_id(x)),
                    )
                })?);
            }
            out.push(r);
        }
        Ok(GeneralizedCocycle { lambda, omega: out })
    }
}

/// Reads and deserializes a JSON file, locating failures by line, column
/// and field path.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, ParseError> {
    let file = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| ParseError::new(&file, "file", e.to_string()))?;
    parse_json(&file, &text)
}

pub fn parse_json<T: DeserializeOwned>(file: &str, text: &str) -> Result<T, ParseError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let v = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let mut locus = format!("line {}, column {}", inner.line(), inner.column());
        if path != "." {
            locus = format!("{locus}, field {path}");
        }
        ParseError::new(file, locus, inner.to_string())
    })?;
    de.end().map_err(|e| ParseError::new(file, format!("line {}, column {}", e.line(), e.column()), e.to_string()))?;
    Ok(v)
}

pub fn load_groupoid(path: &Path) -> Result<FiniteGroupoid, InputError> {
    let j: GroupoidJson = read_json(path)?;
    j.validate(&path.display().to_string())
}

pub fn to_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn section_json(a: &FiniteGroupoid, values: &[Arr]) -> Value {
    let m: BTreeMap<String, String> =
        values.iter().enumerate().map(|(x, &v)| (a.object_id(x).to_string(), a.arrow_id(v).to_string())).collect();
    json!(m)
}

/// Cochain as a list of `{tuple, value}` entries, values rendered by `render`.
pub fn cochain_json(k: &FiniteGroupoid, tuples: &[Vec<usize>], c: &Cochain, render: &dyn Fn(usize) -> Value) -> Value {
    let values: Vec<Value> = tuples
        .iter()
        .zip(&c.values)
        .map(|(t, &v)| {
            let ids: Vec<&str> = if c.degree == 0 {
                t.iter().map(|&x| k.object_id(x)).collect()
            } else {
                t.iter().map(|&g| k.arrow_id(g)).collect()
            };
            json!({ "tuple": ids, "value": render(v) })
        })
        .collect();
    json!({ "degree": c.degree, "values": values })
}
