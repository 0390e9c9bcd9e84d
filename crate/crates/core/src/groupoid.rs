use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

pub type Obj = usize;
pub type Arr = usize;

const UNDEFINED: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArrowRecord {
    pub id: String,
    pub src: Obj,
    pub tgt: Obj,
}

/// Groupoid data as it arrives from outside: everything named by identifier.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawGroupoid {
    pub objects: Vec<String>,
    pub arrows: Vec<RawArrow>,
    pub unit: Vec<(String, String)>,
    pub inverse: Vec<(String, String)>,
    pub compose: Vec<(String, String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawArrow {
    pub id: String,
    pub src: String,
    pub tgt: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateObject(String),
    DuplicateArrow(String),
    UnknownObject { context: String, id: String },
    UnknownArrow { context: String, id: String },
    MissingUnit(String),
    DuplicateUnit(String),
    MissingInverse(String),
    DuplicateInverse(String),
    DuplicateComposition { g: String, h: String },
    /// `g·h` is listed although `tgt(g) != src(h)`.
    ComposedNotComposable { g: String, h: String },
    /// `tgt(g) == src(h)` but no product is given.
    MissingComposition { g: String, h: String },
    /// The product has the wrong source or target.
    CompositionEndpoints { g: String, h: String, gh: String },
    Associativity { g: String, h: String, k: String },
    UnitEndpoints { object: String, unit: String },
    UnitLaw { unit: String, arrow: String },
    InverseEndpoints { arrow: String, inverse: String },
    InverseLaw { arrow: String, inverse: String },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DuplicateObject(_)
            | Violation::DuplicateArrow(_)
            | Violation::DuplicateUnit(_)
            | Violation::DuplicateInverse(_)
            | Violation::DuplicateComposition { .. } => "DuplicateEntry",
            Violation::UnknownObject { .. } | Violation::UnknownArrow { .. } => "UnknownIdentifier",
            Violation::MissingUnit(_) | Violation::MissingInverse(_) => "MissingEntry",
            Violation::ComposedNotComposable { .. }
            | Violation::MissingComposition { .. }
            | Violation::CompositionEndpoints { .. } => "CompositionDomainError",
            Violation::Associativity { .. } => "AssociativityViolation",
            Violation::UnitEndpoints { .. } | Violation::UnitLaw { .. } => "UnitViolation",
            Violation::InverseEndpoints { .. } | Violation::InverseLaw { .. } => "InverseViolation",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateObject(x) => write!(f, "duplicate object {x}"),
            Violation::DuplicateArrow(g) => write!(f, "duplicate arrow {g}"),
            Violation::UnknownObject { context, id } => write!(f, "unknown object {id} in {context}"),
            Violation::UnknownArrow { context, id } => write!(f, "unknown arrow {id} in {context}"),
            Violation::MissingUnit(x) => write!(f, "no unit given for object {x}"),
            Violation::DuplicateUnit(x) => write!(f, "unit of {x} given twice"),
            Violation::MissingInverse(g) => write!(f, "no inverse given for arrow {g}"),
            Violation::DuplicateInverse(g) => write!(f, "inverse of {g} given twice"),
            Violation::DuplicateComposition { g, h } => write!(f, "product {g}·{h} given twice"),
            Violation::ComposedNotComposable { g, h } => {
                write!(f, "product {g}·{h} given but tgt({g}) != src({h})")
            }
            Violation::MissingComposition { g, h } => write!(f, "composable pair {g}·{h} has no product"),
            Violation::CompositionEndpoints { g, h, gh } => {
                write!(f, "{g}·{h} = {gh} has wrong source or target")
            }
            Violation::Associativity { g, h, k } => write!(f, "({g}·{h})·{k} != {g}·({h}·{k})"),
            Violation::UnitEndpoints { object, unit } => write!(f, "unit {unit} of {object} is not a loop at {object}"),
            Violation::UnitLaw { unit, arrow } => write!(f, "unit {unit} does not act trivially on {arrow}"),
            Violation::InverseEndpoints { arrow, inverse } => {
                write!(f, "inverse {inverse} of {arrow} has wrong source or target")
            }
            Violation::InverseLaw { arrow, inverse } => write!(f, "{arrow}·{inverse} or {inverse}·{arrow} is not a unit"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("groupoid validation failed with {} violation(s)", violations.len())]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn has_kind(&self, kind: &str) -> bool {
        self.violations.iter().any(|v| v.kind() == kind)
    }
}

/// Permutations taking caller indices to canonical indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relabel {
    pub objects: Vec<Obj>,
    pub arrows: Vec<Arr>,
}

/// A validated finite groupoid with a dense composition table.
///
/// Objects and arrows are kept sorted by identifier.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    objects: Vec<String>,
    arrows: Vec<ArrowRecord>,
    table: Vec<u32>,
    units: Vec<Arr>,
    inverses: Vec<Arr>,
    outgoing: Vec<Vec<Arr>>,
    object_index: BTreeMap<String, Obj>,
    arrow_index: BTreeMap<String, Arr>,
    fingerprint: u64,
}

fn fnv(mut h: u64, bytes: &[u8]) -> u64 {
    for b in bytes {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl FiniteGroupoid {
    pub fn empty() -> Self {
        let (g, _) = Self::from_parts(Vec::new(), Vec::new(), Vec::new(), Vec::new(), |_, _| 0)
            .expect("empty groupoid is valid");
        g
    }

    /// Builds a groupoid from indexed data. `compose` is only called on
    /// composable pairs. The result is sorted canonically and checked against
    /// every groupoid axiom.
    pub fn from_parts<F>(
        objects: Vec<String>,
        arrows: Vec<(String, Obj, Obj)>,
        units: Vec<Arr>,
        inverses: Vec<Arr>,
        mut compose: F,
    ) -> Result<(Self, Relabel), ViolationReport>
    where
        F: FnMut(Arr, Arr) -> Arr,
    {
        let mut violations = Vec::new();
        let n0 = objects.len();
        let n1 = arrows.len();
        let mut seen = BTreeMap::new();
        for x in &objects {
            if seen.insert(x.clone(), ()).is_some() {
                violations.push(Violation::DuplicateObject(x.clone()));
            }
        }
        let mut seen = BTreeMap::new();
        for (id, s, t) in &arrows {
            if seen.insert(id.clone(), ()).is_some() {
                violations.push(Violation::DuplicateArrow(id.clone()));
            }
            if *s >= n0 || *t >= n0 {
                violations.push(Violation::UnknownObject { context: "arrow endpoints".into(), id: id.clone() });
            }
        }
        if units.len() != n0 || units.iter().any(|&u| u >= n1) {
            violations.push(Violation::MissingUnit("<units>".into()));
        }
        if inverses.len() != n1 || inverses.iter().any(|&u| u >= n1) {
            violations.push(Violation::MissingInverse("<inverses>".into()));
        }
        if !violations.is_empty() {
            return Err(ViolationReport { violations });
        }

        let mut obj_order: Vec<usize> = (0..n0).collect();
        obj_order.sort_by(|&a, &b| objects[a].cmp(&objects[b]));
        let mut arr_order: Vec<usize> = (0..n1).collect();
        arr_order.sort_by(|&a, &b| arrows[a].0.cmp(&arrows[b].0));
        let mut obj_new = vec![0; n0];
        for (new, &old) in obj_order.iter().enumerate() {
            obj_new[old] = new;
        }
        let mut arr_new = vec![0; n1];
        for (new, &old) in arr_order.iter().enumerate() {
            arr_new[old] = new;
        }

        let objects_c: Vec<String> = obj_order.iter().map(|&o| objects[o].clone()).collect();
        let arrows_c: Vec<ArrowRecord> = arr_order
            .iter()
            .map(|&g| ArrowRecord { id: arrows[g].0.clone(), src: obj_new[arrows[g].1], tgt: obj_new[arrows[g].2] })
            .collect();
        let units_c: Vec<Arr> = obj_order.iter().map(|&o| arr_new[units[o]]).collect();
        let inverses_c: Vec<Arr> = arr_order.iter().map(|&g| arr_new[inverses[g]]).collect();
        let mut table = vec![UNDEFINED; n1 * n1];
        for g in 0..n1 {
            for h in 0..n1 {
                if arrows[g].2 == arrows[h].1 {
                    let gh = compose(g, h);
                    if gh >= n1 {
                        violations.push(Violation::MissingComposition {
                            g: arrows[g].0.clone(),
                            h: arrows[h].0.clone(),
                        });
                        continue;
                    }
                    table[arr_new[g] * n1 + arr_new[h]] = arr_new[gh] as u32;
                }
            }
        }
        if !violations.is_empty() {
            return Err(ViolationReport { violations });
        }
        let g = Self::assemble(objects_c, arrows_c, table, units_c, inverses_c)?;
        Ok((g, Relabel { objects: obj_new, arrows: arr_new }))
    }

    fn assemble(
        objects: Vec<String>,
        arrows: Vec<ArrowRecord>,
        table: Vec<u32>,
        units: Vec<Arr>,
        inverses: Vec<Arr>,
    ) -> Result<Self, ViolationReport> {
        let mut outgoing = vec![Vec::new(); objects.len()];
        for (g, a) in arrows.iter().enumerate() {
            outgoing[a.src].push(g);
        }
        let object_index = objects.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        let arrow_index = arrows.iter().enumerate().map(|(i, a)| (a.id.clone(), i)).collect();
        let mut h = 0xcbf29ce484222325u64;
        for x in &objects {
            h = fnv(h, x.as_bytes());
            h = fnv(h, &[0xff]);
        }
        for a in &arrows {
            h = fnv(h, a.id.as_bytes());
            h = fnv(h, &(a.src as u64).to_le_bytes());
            h = fnv(h, &(a.tgt as u64).to_le_bytes());
        }
        for v in &table {
            h = fnv(h, &v.to_le_bytes());
        }
        let g = FiniteGroupoid {
            objects,
            arrows,
            table,
            units,
            inverses,
            outgoing,
            object_index,
            arrow_index,
            fingerprint: h,
        };
        let violations = g.axiom_violations();
        if violations.is_empty() {
            Ok(g)
        } else {
            Err(ViolationReport { violations })
        }
    }

    fn axiom_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n1 = self.arrows.len();
        let id = |g: Arr| self.arrows[g].id.clone();
        let mut endpoints_ok = true;
        for g in 0..n1 {
            for h in 0..n1 {
                let v = self.table[g * n1 + h];
                let composable = self.arrows[g].tgt == self.arrows[h].src;
                if composable && v == UNDEFINED {
                    out.push(Violation::MissingComposition { g: id(g), h: id(h) });
                    endpoints_ok = false;
                } else if !composable && v != UNDEFINED {
                    out.push(Violation::ComposedNotComposable { g: id(g), h: id(h) });
                    endpoints_ok = false;
                } else if composable {
                    let gh = v as usize;
                    if self.arrows[gh].src != self.arrows[g].src || self.arrows[gh].tgt != self.arrows[h].tgt {
                        out.push(Violation::CompositionEndpoints { g: id(g), h: id(h), gh: id(gh) });
                        endpoints_ok = false;
                    }
                }
            }
        }
        for (x, &u) in self.units.iter().enumerate() {
            if self.arrows[u].src != x || self.arrows[u].tgt != x {
                out.push(Violation::UnitEndpoints { object: self.objects[x].clone(), unit: id(u) });
                endpoints_ok = false;
            }
        }
        for g in 0..n1 {
            let gi = self.inverses[g];
            if self.arrows[gi].src != self.arrows[g].tgt || self.arrows[gi].tgt != self.arrows[g].src {
                out.push(Violation::InverseEndpoints { arrow: id(g), inverse: id(gi) });
                endpoints_ok = false;
            }
        }
        if !endpoints_ok {
            return out;
        }
        for g in 0..n1 {
            let a = &self.arrows[g];
            let us = self.units[a.src];
            let ut = self.units[a.tgt];
            if self.mul(us, g) != g {
                out.push(Violation::UnitLaw { unit: id(us), arrow: id(g) });
            }
            if self.mul(g, ut) != g {
                out.push(Violation::UnitLaw { unit: id(ut), arrow: id(g) });
            }
            let gi = self.inverses[g];
            if self.mul(g, gi) != us || self.mul(gi, g) != ut {
                out.push(Violation::InverseLaw { arrow: id(g), inverse: id(gi) });
            }
        }
        for g in 0..n1 {
            for &h in &self.outgoing[self.arrows[g].tgt] {
                let gh = self.mul(g, h);
                for &k in &self.outgoing[self.arrows[h].tgt] {
                    if self.mul(gh, k) != self.mul(g, self.mul(h, k)) {
                        out.push(Violation::Associativity { g: id(g), h: id(h), k: id(k) });
                    }
                }
            }
        }
        out
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[ArrowRecord] {
        &self.arrows
    }

    pub fn object_id(&self, x: Obj) -> &str {
        &self.objects[x]
    }

    pub fn arrow_id(&self, g: Arr) -> &str {
        &self.arrows[g].id
    }

    pub fn object_index(&self, id: &str) -> Option<Obj> {
        self.object_index.get(id).copied()
    }

    pub fn arrow_index(&self, id: &str) -> Option<Arr> {
        self.arrow_index.get(id).copied()
    }

    /// Hash of the full structure; used to detect mismatched domains.
    pub fn fingerprint(&self) -> u64 {
        self.fingerprint
    }

    #[inline]
    pub fn src(&self, g: Arr) -> Obj {
        self.arrows[g].src
    }

    #[inline]
    pub fn tgt(&self, g: Arr) -> Obj {
        self.arrows[g].tgt
    }

    #[inline]
    pub fn unit(&self, x: Obj) -> Arr {
        self.units[x]
    }

    #[inline]
    pub fn inv(&self, g: Arr) -> Arr {
        self.inverses[g]
    }

    #[inline]
    pub fn is_unit(&self, g: Arr) -> bool {
        self.units[self.arrows[g].src] == g
    }

    #[inline]
    pub fn compose(&self, g: Arr, h: Arr) -> Option<Arr> {
        let v = self.table[g * self.arrows.len() + h];
        if v == UNDEFINED {
            None
        } else {
            Some(v as usize)
        }
    }

    /// Product of a composable pair. Panics if `tgt(g) != src(h)`.
    #[inline]
    pub fn mul(&self, g: Arr, h: Arr) -> Arr {
        let v = self.table[g * self.arrows.len() + h];
        assert!(v != UNDEFINED, "arrows {} and {} are not composable", self.arrows[g].id, self.arrows[h].id);
        v as usize
    }

    /// Product of a sequence of composable arrows.
    pub fn mul_all(&self, gs: &[Arr]) -> Arr {
        let mut acc = gs[0];
        for &g in &gs[1..] {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn arrows_from(&self, x: Obj) -> &[Arr] {
        &self.outgoing[x]
    }

    pub fn hom(&self, x: Obj, y: Obj) -> impl Iterator<Item = Arr> + '_ {
        self.outgoing[x].iter().copied().filter(move |&g| self.arrows[g].tgt == y)
    }

    pub fn loops(&self, x: Obj) -> Vec<Arr> {
        self.hom(x, x).collect()
    }

    /// Connected component index of each object, numbered by first object.
    pub fn components(&self) -> Vec<usize> {
        let n = self.objects.len();
        let mut comp = vec![usize::MAX; n];
        let mut next = 0;
        for x in 0..n {
            if comp[x] != usize::MAX {
                continue;
            }
            for &g in &self.outgoing[x] {
                comp[self.arrows[g].tgt] = next;
            }
            next += 1;
        }
        comp
    }

    /// For each object, an arrow from the least object of its component.
    pub fn spanning_arrows(&self) -> Vec<Arr> {
        let n = self.objects.len();
        let mut out = vec![usize::MAX; n];
        for x in 0..n {
            if out[x] != usize::MAX {
                continue;
            }
            for &g in &self.outgoing[x] {
                let y = self.arrows[g].tgt;
                if out[y] == usize::MAX {
                    out[y] = g;
                }
            }
            out[x] = self.units[x];
        }
        out
    }

    pub fn to_raw(&self) -> RawGroupoid {
        let n1 = self.arrows.len();
        let mut compose = Vec::new();
        for g in 0..n1 {
            for &h in &self.outgoing[self.arrows[g].tgt] {
                compose.push((self.arrows[g].id.clone(), self.arrows[h].id.clone(), self.arrows[self.mul(g, h)].id.clone()));
            }
        }
        RawGroupoid {
            objects: self.objects.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| RawArrow {
                    id: a.id.clone(),
                    src: self.objects[a.src].clone(),
                    tgt: self.objects[a.tgt].clone(),
                })
                .collect(),
            unit: self
                .objects
                .iter()
                .enumerate()
                .map(|(x, id)| (id.clone(), self.arrows[self.units[x]].id.clone()))
                .collect(),
            inverse: (0..n1)
                .map(|g| (self.arrows[g].id.clone(), self.arrows[self.inverses[g]].id.clone()))
                .collect(),
            compose,
        }
    }
}

/// Resolves identifiers and checks every groupoid axiom.
pub fn validate_groupoid(raw: &RawGroupoid) -> Result<FiniteGroupoid, ViolationReport> {
    let mut violations = Vec::new();
    let mut objects: Vec<String> = raw.objects.clone();
    objects.sort();
    for w in objects.windows(2) {
        if w[0] == w[1] {
            violations.push(Violation::DuplicateObject(w[0].clone()));
        }
    }
    objects.dedup();
    let obj_ix: BTreeMap<&str, usize> = objects.iter().enumerate().map(|(i, x)| (x.as_str(), i)).collect();

    let mut recs: Vec<&RawArrow> = raw.arrows.iter().collect();
    recs.sort_by(|a, b| a.id.cmp(&b.id));
    for w in recs.windows(2) {
        if w[0].id == w[1].id {
            violations.push(Violation::DuplicateArrow(w[0].id.clone()));
        }
    }
    recs.dedup_by(|a, b| a.id == b.id);
    let mut arrows = Vec::with_capacity(recs.len());
    for a in &recs {
        let s = obj_ix.get(a.src.as_str());
        let t = obj_ix.get(a.tgt.as_str());
        if s.is_none() {
            violations.push(Violation::UnknownObject { context: alloc::format!("source of {}", a.id), id: a.src.clone() });
        }
        if t.is_none() {
            violations.push(Violation::UnknownObject { context: alloc::format!("target of {}", a.id), id: a.tgt.clone() });
        }
        arrows.push(ArrowRecord { id: a.id.clone(), src: s.copied().unwrap_or(0), tgt: t.copied().unwrap_or(0) });
    }
    let arr_ix: BTreeMap<&str, usize> = arrows.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
    let n1 = arrows.len();

    let mut units = vec![usize::MAX; objects.len()];
    for (x, u) in &raw.unit {
        match (obj_ix.get(x.as_str()), arr_ix.get(u.as_str())) {
            (Some(&xi), Some(&ui)) => {
                if units[xi] != usize::MAX {
                    violations.push(Violation::DuplicateUnit(x.clone()));
                }
                units[xi] = ui;
            }
            (None, _) => violations.push(Violation::UnknownObject { context: "unit".into(), id: x.clone() }),
            (_, None) => violations.push(Violation::UnknownArrow { context: "unit".into(), id: u.clone() }),
        }
    }
    for (x, &u) in units.iter().enumerate() {
        if u == usize::MAX {
            violations.push(Violation::MissingUnit(objects[x].clone()));
        }
    }
    let mut inverses = vec![usize::MAX; n1];
    for (g, gi) in &raw.inverse {
        match (arr_ix.get(g.as_str()), arr_ix.get(gi.as_str())) {
            (Some(&a), Some(&b)) => {
                if inverses[a] != usize::MAX {
                    violations.push(Violation::DuplicateInverse(g.clone()));
                }
                inverses[a] = b;
            }
            (None, _) => violations.push(Violation::UnknownArrow { context: "inverse".into(), id: g.clone() }),
            (_, None) => violations.push(Violation::UnknownArrow { context: "inverse".into(), id: gi.clone() }),
        }
    }
    for (g, &i) in inverses.iter().enumerate() {
        if i == usize::MAX {
            violations.push(Violation::MissingInverse(arrows[g].id.clone()));
        }
    }
    let mut table = vec![UNDEFINED; n1 * n1];
    for (g, h, gh) in &raw.compose {
        let ids = (arr_ix.get(g.as_str()), arr_ix.get(h.as_str()), arr_ix.get(gh.as_str()));
        match ids {
            (Some(&a), Some(&b), Some(&c)) => {
                if table[a * n1 + b] != UNDEFINED {
                    violations.push(Violation::DuplicateComposition { g: g.clone(), h: h.clone() });
                }
                table[a * n1 + b] = c as u32;
            }
            _ => {
                for id in [g, h, gh] {
                    if !arr_ix.contains_key(id.as_str()) {
                        violations.push(Violation::UnknownArrow { context: "compose".into(), id: id.clone() });
                    }
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(ViolationReport { violations });
    }
    FiniteGroupoid::assemble(objects, arrows, table, units, inverses)
}
