//! The input document: one JSON object defining named groupoids,
//! homomorphisms and sheaves. Constructors:
//!
//! ```json
//! {
//!   "groupoids": {
//!     "g":  {"cayley_table": [[0,1],[1,0]]},
//!     "p3": {"pair": 3},
//!     "t":  {"action": {"set": 2, "group": "g", "table": [[0,1],[1,0]]}},
//!     "l":  {"loops_of": "g"},
//!     "fp": {"fibered": ["phi", "psi"]},
//!     "x":  {"explicit": {"objects": 1, "arrows": [{"src":0,"tgt":0}],
//!             "compose": [[0,0,0]], "unit": [0], "inverse": [0]}}
//!   },
//!   "homs": {
//!     "phi": {"dom": "g", "cod": "p3", "object_map": [0], "arrow_map": [0, 0]}
//!   },
//!   "sheaves": {
//!     "s": {"base": "g", "constant": {"rank": 1}},
//!     "f": {"base": "g", "free": {"ranks": [1]}},
//!     "e": {"base": "g", "explicit": {"stalks": [1], "actions": [[[1]], [[-1]]]}}
//!   }
//! }
//! ```
//!
//! References resolve in any order; cycles are reported as unknown
//! references.

use ghom_core::groupoid::{
    fibered_product, loop_groupoid, translation_groupoid, FiniteGroupoid, GroupoidHom,
};
use ghom_core::linalg::{Coefficients, IntMatrix};
use ghom_core::sheaf::GSheaf;
use serde_json::Value;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

#[derive(Debug)]
pub enum InputError {
    Parse(String),
    UnknownReference(String),
    Invalid(String),
}

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InputError::Parse(m) => write!(f, "parse error: {m}"),
            InputError::UnknownReference(m) => write!(f, "unknown reference: {m}"),
            InputError::Invalid(m) => write!(f, "invalid input: {m}"),
        }
    }
}

impl std::error::Error for InputError {}

pub struct Document {
    pub groupoids: BTreeMap<String, Arc<FiniteGroupoid>>,
    pub homs: BTreeMap<String, GroupoidHom>,
    /// raw sheaf specs, instantiated per requested coefficients
    sheaf_specs: BTreeMap<String, Value>,
    pub raw: Value,
}

pub fn parse_document(text: &str) -> Result<Document, InputError> {
    let raw: Value = serde_json::from_str(text)
        .map_err(|e| InputError::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    let obj = raw
        .as_object()
        .ok_or_else(|| InputError::Parse("top level must be an object".into()))?;

    let gspecs: BTreeMap<String, Value> = match obj.get("groupoids") {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| InputError::Parse(format!("groupoids: {e}")))?,
        None => BTreeMap::new(),
    };
    let hspecs: BTreeMap<String, Value> = match obj.get("homs") {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| InputError::Parse(format!("homs: {e}")))?,
        None => BTreeMap::new(),
    };
    let sheaf_specs: BTreeMap<String, Value> = match obj.get("sheaves") {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| InputError::Parse(format!("sheaves: {e}")))?,
        None => BTreeMap::new(),
    };

    let mut groupoids: BTreeMap<String, Arc<FiniteGroupoid>> = BTreeMap::new();
    let mut homs: BTreeMap<String, GroupoidHom> = BTreeMap::new();

    // fixpoint resolution: groupoids and homs may reference each other
    let mut pending_g: Vec<(String, Value)> = gspecs.into_iter().collect();
    let mut pending_h: Vec<(String, Value)> = hspecs.into_iter().collect();
    loop {
        let before = pending_g.len() + pending_h.len();
        let mut next_g = Vec::new();
        for (name, spec) in pending_g {
            match build_groupoid(&spec, &groupoids, &homs) {
                Ok(Some(g)) => {
                    groupoids.insert(name, Arc::new(g));
                }
                Ok(None) => next_g.push((name, spec)),
                Err(e) => return Err(prefix(e, &format!("groupoid '{name}'"))),
            }
        }
        pending_g = next_g;
        let mut next_h = Vec::new();
        for (name, spec) in pending_h {
            match build_hom(&spec, &groupoids) {
                Ok(Some(h)) => {
                    homs.insert(name, h);
                }
                Ok(None) => next_h.push((name, spec)),
                Err(e) => return Err(prefix(e, &format!("hom '{name}'"))),
            }
        }
        pending_h = next_h;
        let after = pending_g.len() + pending_h.len();
        if after == 0 {
            break;
        }
        if after == before {
            let names: Vec<String> = pending_g
                .iter()
                .map(|(n, _)| n.clone())
                .chain(pending_h.iter().map(|(n, _)| n.clone()))
                .collect();
            return Err(InputError::UnknownReference(format!(
                "unresolvable definitions (missing or cyclic): {}",
                names.join(", ")
            )));
        }
    }

    Ok(Document {
        groupoids,
        homs,
        sheaf_specs,
        raw,
    })
}

fn prefix(e: InputError, ctx: &str) -> InputError {
    match e {
        InputError::Parse(m) => InputError::Parse(format!("{ctx}: {m}")),
        InputError::UnknownReference(m) => InputError::UnknownReference(format!("{ctx}: {m}")),
        InputError::Invalid(m) => InputError::Invalid(format!("{ctx}: {m}")),
    }
}

/// `Ok(None)` when a reference is not resolved yet.
fn build_groupoid(
    spec: &Value,
    groupoids: &BTreeMap<String, Arc<FiniteGroupoid>>,
    homs: &BTreeMap<String, GroupoidHom>,
) -> Result<Option<FiniteGroupoid>, InputError> {
    let obj = spec
        .as_object()
        .ok_or_else(|| InputError::Parse("constructor must be an object".into()))?;
    if let Some(v) = obj.get("pair") {
        let n = as_usize(v, "pair")?;
        return Ok(Some(FiniteGroupoid::pair(n)));
    }
    if let Some(v) = obj.get("cayley_table") {
        let table: Vec<Vec<usize>> = serde_json::from_value(v.clone())
            .map_err(|e| InputError::Parse(format!("cayley_table: {e}")))?;
        return FiniteGroupoid::group_from_table(&table)
            .map(Some)
            .map_err(|e| InputError::Invalid(e.to_string()));
    }
    if let Some(v) = obj.get("loops_of") {
        let name = as_str(v, "loops_of")?;
        return match groupoids.get(name) {
            Some(g) => Ok(Some(loop_groupoid(g).0)),
            None => Ok(None),
        };
    }
    if let Some(v) = obj.get("action") {
        let a = v
            .as_object()
            .ok_or_else(|| InputError::Parse("action must be an object".into()))?;
        let set = as_usize(
            a.get("set")
                .ok_or_else(|| InputError::Parse("action.set missing".into()))?,
            "action.set",
        )?;
        let group_name = as_str(
            a.get("group")
                .ok_or_else(|| InputError::Parse("action.group missing".into()))?,
            "action.group",
        )?;
        let table: Vec<Vec<usize>> = serde_json::from_value(
            a.get("table")
                .cloned()
                .ok_or_else(|| InputError::Parse("action.table missing".into()))?,
        )
        .map_err(|e| InputError::Parse(format!("action.table: {e}")))?;
        return match groupoids.get(group_name) {
            Some(g) => translation_groupoid(set, g, &table)
                .map(Some)
                .map_err(|e| InputError::Invalid(e.to_string())),
            None => Ok(None),
        };
    }
    if let Some(v) = obj.get("fibered") {
        let names: Vec<String> = serde_json::from_value(v.clone())
            .map_err(|e| InputError::Parse(format!("fibered: {e}")))?;
        if names.len() != 2 {
            return Err(InputError::Parse("fibered needs two hom names".into()));
        }
        return match (homs.get(&names[0]), homs.get(&names[1])) {
            (Some(phi), Some(psi)) => {
                if phi.cod.as_ref() != psi.cod.as_ref() {
                    return Err(InputError::Invalid(
                        "fibered product needs a common codomain".into(),
                    ));
                }
                Ok(Some(
                    Arc::try_unwrap(fibered_product(phi, psi).groupoid)
                        .unwrap_or_else(|a| (*a).clone()),
                ))
            }
            _ => Ok(None),
        };
    }
    if let Some(v) = obj.get("explicit") {
        let e = v
            .as_object()
            .ok_or_else(|| InputError::Parse("explicit must be an object".into()))?;
        let n_objects = as_usize(
            e.get("objects")
                .ok_or_else(|| InputError::Parse("explicit.objects missing".into()))?,
            "objects",
        )?;
        #[derive(serde::Deserialize)]
        struct ArrowSpec {
            src: usize,
            tgt: usize,
        }
        let arrows: Vec<ArrowSpec> = serde_json::from_value(
            e.get("arrows")
                .cloned()
                .ok_or_else(|| InputError::Parse("explicit.arrows missing".into()))?,
        )
        .map_err(|er| InputError::Parse(format!("explicit.arrows: {er}")))?;
        let triples: Vec<[usize; 3]> = serde_json::from_value(
            e.get("compose")
                .cloned()
                .ok_or_else(|| InputError::Parse("explicit.compose missing".into()))?,
        )
        .map_err(|er| InputError::Parse(format!("explicit.compose: {er}")))?;
        let unit: Vec<usize> = serde_json::from_value(
            e.get("unit")
                .cloned()
                .ok_or_else(|| InputError::Parse("explicit.unit missing".into()))?,
        )
        .map_err(|er| InputError::Parse(format!("explicit.unit: {er}")))?;
        let inverse: Vec<usize> = serde_json::from_value(
            e.get("inverse")
                .cloned()
                .ok_or_else(|| InputError::Parse("explicit.inverse missing".into()))?,
        )
        .map_err(|er| InputError::Parse(format!("explicit.inverse: {er}")))?;
        let mut compose = HashMap::new();
        for [g, h, k] in triples {
            compose.insert((g as u32, h as u32), k as u32);
        }
        return FiniteGroupoid::new(
            n_objects,
            arrows.iter().map(|a| a.src).collect(),
            arrows.iter().map(|a| a.tgt).collect(),
            compose,
            unit,
            inverse,
        )
        .map(Some)
        .map_err(|e| InputError::Invalid(e.to_string()));
    }
    Err(InputError::Parse(
        "unknown groupoid constructor (expected one of pair, cayley_table, loops_of, action, fibered, explicit)"
            .into(),
    ))
}

fn build_hom(
    spec: &Value,
    groupoids: &BTreeMap<String, Arc<FiniteGroupoid>>,
) -> Result<Option<GroupoidHom>, InputError> {
    let obj = spec
        .as_object()
        .ok_or_else(|| InputError::Parse("hom must be an object".into()))?;
    let dom = as_str(
        obj.get("dom")
            .ok_or_else(|| InputError::Parse("hom.dom missing".into()))?,
        "dom",
    )?;
    let cod = as_str(
        obj.get("cod")
            .ok_or_else(|| InputError::Parse("hom.cod missing".into()))?,
        "cod",
    )?;
    let (Some(dg), Some(cg)) = (groupoids.get(dom), groupoids.get(cod)) else {
        return Ok(None);
    };
    let object_map: Vec<usize> = serde_json::from_value(
        obj.get("object_map")
            .cloned()
            .ok_or_else(|| InputError::Parse("hom.object_map missing".into()))?,
    )
    .map_err(|e| InputError::Parse(format!("object_map: {e}")))?;
    let arrow_map: Vec<usize> = serde_json::from_value(
        obj.get("arrow_map")
            .cloned()
            .ok_or_else(|| InputError::Parse("hom.arrow_map missing".into()))?,
    )
    .map_err(|e| InputError::Parse(format!("arrow_map: {e}")))?;
    GroupoidHom::new(dg.clone(), cg.clone(), object_map, arrow_map)
        .map(Some)
        .map_err(|e| InputError::Invalid(e.to_string()))
}

impl Document {
    /// Instantiate a named sheaf over the given coefficients, or the default
    /// constant rank-1 sheaf when `name` is `None`.
    pub fn sheaf(
        &self,
        name: Option<&str>,
        base: &Arc<FiniteGroupoid>,
        coeff: Coefficients,
    ) -> Result<GSheaf, InputError> {
        let Some(name) = name else {
            return Ok(GSheaf::constant(base.clone(), coeff, 1));
        };
        let spec = self
            .sheaf_specs
            .get(name)
            .ok_or_else(|| InputError::UnknownReference(format!("sheaf '{name}'")))?;
        let obj = spec
            .as_object()
            .ok_or_else(|| InputError::Parse("sheaf must be an object".into()))?;
        let base_name = as_str(
            obj.get("base")
                .ok_or_else(|| InputError::Parse("sheaf.base missing".into()))?,
            "base",
        )?;
        let declared = self
            .groupoids
            .get(base_name)
            .ok_or_else(|| InputError::UnknownReference(format!("groupoid '{base_name}'")))?;
        if declared.as_ref() != base.as_ref() {
            return Err(InputError::Invalid(format!(
                "sheaf '{name}' lives over '{base_name}', not over the requested groupoid"
            )));
        }
        if let Some(c) = obj.get("constant") {
            let rank = as_usize(
                c.get("rank")
                    .ok_or_else(|| InputError::Parse("constant.rank missing".into()))?,
                "rank",
            )?;
            return Ok(GSheaf::constant(base.clone(), coeff, rank));
        }
        if let Some(f) = obj.get("free") {
            let ranks: Vec<usize> = serde_json::from_value(
                f.get("ranks")
                    .cloned()
                    .ok_or_else(|| InputError::Parse("free.ranks missing".into()))?,
            )
            .map_err(|e| InputError::Parse(format!("free.ranks: {e}")))?;
            return GSheaf::free(base.clone(), coeff, &ranks)
                .map_err(|e| InputError::Invalid(e.to_string()));
        }
        if let Some(e) = obj.get("explicit") {
            let stalks: Vec<usize> = serde_json::from_value(
                e.get("stalks")
                    .cloned()
                    .ok_or_else(|| InputError::Parse("explicit.stalks missing".into()))?,
            )
            .map_err(|er| InputError::Parse(format!("stalks: {er}")))?;
            let actions: Vec<Vec<Vec<i64>>> = serde_json::from_value(
                e.get("actions")
                    .cloned()
                    .ok_or_else(|| InputError::Parse("explicit.actions missing".into()))?,
            )
            .map_err(|er| InputError::Parse(format!("actions: {er}")))?;
            let act: Vec<IntMatrix> = actions.iter().map(|m| IntMatrix::from_rows(m)).collect();
            return GSheaf::new(base.clone(), coeff, stalks, act)
                .map_err(|er| InputError::Invalid(er.to_string()));
        }
        Err(InputError::Parse(
            "unknown sheaf constructor (expected constant, free or explicit)".into(),
        ))
    }

    pub fn the_groupoid(&self, name: Option<&str>) -> Result<(&str, &Arc<FiniteGroupoid>), InputError> {
        match name {
            Some(n) => self
                .groupoids
                .get_key_value(n)
                .map(|(k, v)| (k.as_str(), v))
                .ok_or_else(|| InputError::UnknownReference(format!("groupoid '{n}'"))),
            None => {
                if self.groupoids.len() == 1 {
                    let (k, v) = self.groupoids.iter().next().unwrap();
                    Ok((k.as_str(), v))
                } else {
                    Err(InputError::Invalid(
                        "several groupoids defined; pass --groupoid".into(),
                    ))
                }
            }
        }
    }

    pub fn the_hom(&self, name: &str) -> Result<&GroupoidHom, InputError> {
        self.homs
            .get(name)
            .ok_or_else(|| InputError::UnknownReference(format!("hom '{name}'")))
    }
}

/// Serialize a groupoid to its explicit description; reparsing yields the
/// identical structure, which is the round-trip property the fixtures rely
/// on.
pub fn to_explicit_json(g: &FiniteGroupoid) -> Value {
    let arrows: Vec<Value> = (0..g.n_arrows())
        .map(|a| serde_json::json!({"src": g.source(a), "tgt": g.target(a)}))
        .collect();
    let mut compose = Vec::new();
    for i in 0..g.n_arrows() {
        for j in 0..g.n_arrows() {
            if let Some(k) = g.try_compose(i, j) {
                compose.push(serde_json::json!([i, j, k]));
            }
        }
    }
    let unit: Vec<usize> = (0..g.n_objects()).map(|x| g.unit_of(x)).collect();
    let inverse: Vec<usize> = (0..g.n_arrows()).map(|a| g.inverse_of(a)).collect();
    serde_json::json!({
        "explicit": {
            "objects": g.n_objects(),
            "arrows": arrows,
            "compose": compose,
            "unit": unit,
            "inverse": inverse,
        }
    })
}

pub fn parse_coefficients(s: &str) -> Result<Coefficients, InputError> {
    match s {
        "Z" => Ok(Coefficients::Integers),
        "Q" => Ok(Coefficients::Rationals),
        _ => {
            if let Some(p) = s.strip_prefix('F') {
                let p: u64 = p
                    .parse()
                    .map_err(|_| InputError::Parse(format!("bad coefficient field '{s}'")))?;
                Coefficients::prime_field(p)
                    .map_err(|e| InputError::Invalid(e.to_string()))
            } else {
                Err(InputError::Parse(format!(
                    "bad coefficients '{s}' (expected Z, Q or F<p>)"
                )))
            }
        }
    }
}

fn as_usize(v: &Value, ctx: &str) -> Result<usize, InputError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| InputError::Parse(format!("{ctx}: expected a nonnegative integer")))
}

fn as_str<'a>(v: &'a Value, ctx: &str) -> Result<&'a str, InputError> {
    v.as_str()
        .ok_or_else(|| InputError::Parse(format!("{ctx}: expected a string")))
}
