//! The registry of typed functions available to evolved programs.
//!
//! Each entry pairs a closed type scheme with a total native
//! implementation over runtime values. Entries are tagged with the ground
//! types their scheme mentions; an entry is polymorphic exactly when its
//! scheme quantifies at least one variable. The registry is built once
//! and shared read-only.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::interp::{Interp, RuntimeFault, Value};
use crate::typesys::{Ground, Scheme};

mod builtins;

pub type NativeImpl =
    Arc<dyn Fn(&mut Interp<'_>, Vec<Value>) -> Result<Value, RuntimeFault> + Send + Sync>;

#[derive(Clone)]
pub struct FunctionEntry {
    name: &'static str,
    scheme: Scheme,
    tags: BTreeSet<Ground>,
    description: &'static str,
    implementation: NativeImpl,
}

impl FunctionEntry {
    pub fn name(&self) -> &str {
        self.name
    }

    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }

    /// Ground types mentioned by the scheme; empty for purely
    /// polymorphic entries like `map-vector`.
    pub fn ground_type_tags(&self) -> &BTreeSet<Ground> {
        &self.tags
    }

    pub fn description(&self) -> &str {
        self.description
    }

    pub fn is_polymorphic(&self) -> bool {
        self.scheme.is_polymorphic()
    }

    pub fn arity(&self) -> usize {
        self.scheme
            .body()
            .as_function()
            .map(|(params, _)| params.len())
            .expect("registry entries are functions")
    }

    pub fn invoke(&self, interp: &mut Interp<'_>, args: Vec<Value>) -> Result<Value, RuntimeFault> {
        (self.implementation)(interp, args)
    }
}

impl std::fmt::Debug for FunctionEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FunctionEntry")
            .field("name", &self.name)
            .field("scheme", &self.scheme.to_string())
            .finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("unknown function '{0}'")]
pub struct UnknownFunction(pub String);

#[derive(Debug)]
pub struct FunctionRegistry {
    entries: Vec<FunctionEntry>,
    index: HashMap<&'static str, usize>,
}

impl FunctionRegistry {
    fn build() -> FunctionRegistry {
        let mut builder = Builder {
            entries: Vec::new(),
        };
        builtins::install(&mut builder);
        let mut entries = builder.entries;
        entries.sort_by(|a, b| a.name.cmp(b.name));
        let mut index = HashMap::new();
        for (i, e) in entries.iter().enumerate() {
            assert!(e.scheme.is_closed(), "open scheme on {}", e.name);
            assert!(
                index.insert(e.name, i).is_none(),
                "duplicate registry name {}",
                e.name
            );
        }
        FunctionRegistry { entries, index }
    }

    pub fn lookup(&self, name: &str) -> Result<&FunctionEntry, UnknownFunction> {
        self.index
            .get(name)
            .map(|i| &self.entries[*i])
            .ok_or_else(|| UnknownFunction(name.to_string()))
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in name order.
    pub fn entries(&self) -> impl Iterator<Item = &FunctionEntry> {
        self.entries.iter()
    }

    /// Stable sorted catalog of (name, scheme, tags).
    pub fn catalog(&self) -> Vec<(String, Scheme, BTreeSet<Ground>)> {
        self.entries
            .iter()
            .map(|e| (e.name.to_string(), e.scheme.clone(), e.tags.clone()))
            .collect()
    }

    /// Markdown catalog committed to `docs/stdlib_catalog.md`; a test
    /// fails when the committed file drifts from this output.
    pub fn catalog_markdown(&self) -> String {
        let poly = self.entries.iter().filter(|e| e.is_polymorphic()).count();
        let mut out = String::new();
        out.push_str("# Function catalog\n\n");
        out.push_str(&format!(
            "{} functions, {} polymorphic. Tags list the ground types a \
             signature mentions; monomorphic functions join a problem's \
             genetic source when a tag matches one of the problem's ground \
             types, polymorphic functions are always included.\n\n",
            self.entries.len(),
            poly
        ));
        out.push_str("| Name | Type | Tags | Description |\n");
        out.push_str("|------|------|------|-------------|\n");
        for e in &self.entries {
            let tags: Vec<&str> = e.tags.iter().map(|g| g.name()).collect();
            let tags = if tags.is_empty() {
                "-".to_string()
            } else {
                tags.join(", ")
            };
            out.push_str(&format!(
                "| `{}` | `{}` | {} | {} |\n",
                e.name, e.scheme, tags, e.description
            ));
        }
        out
    }
}

struct Builder {
    entries: Vec<FunctionEntry>,
}

impl Builder {
    fn add<F>(&mut self, name: &'static str, scheme: Scheme, description: &'static str, f: F)
    where
        F: Fn(&mut Interp<'_>, Vec<Value>) -> Result<Value, RuntimeFault> + Send + Sync + 'static,
    {
        let tags = scheme.ground_mentions();
        self.entries.push(FunctionEntry {
            name,
            scheme,
            tags,
            description,
            implementation: Arc::new(f),
        });
    }
}

/// The shared function registry.
pub fn registry() -> &'static FunctionRegistry {
    static REGISTRY: OnceLock<FunctionRegistry> = OnceLock::new();
    REGISTRY.get_or_init(FunctionRegistry::build)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{cmp_values, EvalLimits};
    use crate::sampling::{random_instantiation, random_value_of};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn call(name: &str, args: Vec<Value>) -> Result<Value, RuntimeFault> {
        let reg = registry();
        let entry = reg.lookup(name).unwrap();
        let mut interp = Interp::new(reg, EvalLimits::default());
        entry.invoke(&mut interp, args)
    }

    #[test]
    fn lookup_identity_scheme_anchor() {
        // The paper's canonical examples: `identity` itself is not
        // registered, but `map-get` carries the forall a,b (Map[a,b],a)->b
        // scheme.
        let entry = registry().lookup("map-get").unwrap();
        assert_eq!(entry.scheme().to_string(), "forall v0,v1. (Map[v0,v1],v0)->v1");
        assert!(registry().lookup("identity").is_err());
        assert!(registry().lookup("no-such-fn").is_err());
    }

    #[test]
    fn catalog_is_deterministic_and_closed() {
        let reg = registry();
        let c1 = reg.catalog();
        let c2 = reg.catalog();
        assert_eq!(c1.len(), c2.len());
        for ((n1, s1, t1), (n2, s2, t2)) in c1.iter().zip(c2.iter()) {
            assert_eq!(n1, n2);
            assert_eq!(s1, s2);
            assert_eq!(t1, t2);
        }
        let mut names: Vec<&String> = c1.iter().map(|(n, _, _)| n).collect();
        let sorted = names.clone();
        names.sort();
        assert_eq!(names, sorted);
        for (_, scheme, _) in &c1 {
            assert!(scheme.is_closed());
        }
    }

    #[test]
    fn tag_coverage_matches_category_table() {
        let reg = registry();
        let count = |g: Ground| {
            reg.entries()
                .filter(|e| !e.is_polymorphic() && e.ground_type_tags().contains(&g))
                .count()
        };
        assert!(count(Ground::Int) >= 20, "Int tag count {}", count(Ground::Int));
        assert!(count(Ground::Float) >= 12, "Float {}", count(Ground::Float));
        assert!(count(Ground::Boolean) >= 12, "Boolean {}", count(Ground::Boolean));
        assert!(count(Ground::Char) >= 15, "Char {}", count(Ground::Char));
        assert!(count(Ground::String) >= 25, "String {}", count(Ground::String));
    }

    #[test]
    fn polymorphic_ratio_at_least_60_percent() {
        let reg = registry();
        let poly = reg.entries().filter(|e| e.is_polymorphic()).count();
        let ratio = poly as f64 / reg.len() as f64;
        assert!(ratio >= 0.60, "polymorphic ratio {ratio:.3} ({poly}/{})", reg.len());
    }

    #[test]
    fn polymorphic_flag_matches_scheme() {
        for e in registry().entries() {
            assert_eq!(e.is_polymorphic(), !e.scheme().bound_vars().is_empty());
        }
    }

    #[test]
    fn spot_check_arithmetic_and_faults() {
        assert_eq!(call("int-add", vec![Value::Int(2), Value::Int(3)]).unwrap(), Value::Int(5));
        assert!(call("int-div", vec![Value::Int(1), Value::Int(0)]).is_err());
        assert!(call("int-add", vec![Value::Int(i64::MAX), Value::Int(1)]).is_err());
        assert_eq!(
            call("int-mod", vec![Value::Int(-7), Value::Int(3)]).unwrap(),
            Value::Int(2)
        );
    }

    #[test]
    fn map_get_missing_key_faults() {
        let m = Value::map_from(vec![(Value::Str("k".into()), Value::Int(1))]);
        assert_eq!(
            call("map-get", vec![m.clone(), Value::Str("k".into())]).unwrap(),
            Value::Int(1)
        );
        let fault = call("map-get", vec![m, Value::Str("absent".into())]).unwrap_err();
        assert_eq!(fault.kind, crate::interp::FaultKind::PartialFunction);
    }

    #[test]
    fn index_of_absent_returns_sentinel() {
        let v = Value::Vector(vec![Value::Int(1), Value::Int(2)]);
        assert_eq!(call("index-of", vec![v.clone(), Value::Int(2)]).unwrap(), Value::Int(1));
        assert_eq!(call("index-of", vec![v, Value::Int(9)]).unwrap(), Value::Int(-1));
    }

    #[test]
    fn reduce_empty_faults_fold_returns_init() {
        let empty = Value::Vector(vec![]);
        let f = Value::Native {
            name: "int-add".into(),
        };
        assert!(call("reduce-vector", vec![f.clone(), empty.clone()]).is_err());
        assert_eq!(
            call("fold-vector", vec![f, Value::Int(7), empty]).unwrap(),
            Value::Int(7)
        );
    }

    #[test]
    fn comp_law() {
        // eval(comp(f,g))(x) == g(f(x)) over compatible unary entries.
        let reg = registry();
        let unary: Vec<&FunctionEntry> = reg
            .entries()
            .filter(|e| e.arity() == 1 && !e.is_polymorphic())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        for f in &unary {
            for g in &unary {
                let (fp, fr) = f.scheme().body().as_function().unwrap();
                let (gp, _) = g.scheme().body().as_function().unwrap();
                if fr != &gp[0] {
                    continue;
                }
                let x = random_value_of(&fp[0], &mut rng);
                let composed = Value::Composed {
                    first: Box::new(Value::Native { name: f.name().into() }),
                    second: Box::new(Value::Native { name: g.name().into() }),
                };
                let mut i1 = Interp::new(reg, EvalLimits::default());
                let via_comp = i1.call(&composed, vec![x.clone()]);
                let mut i2 = Interp::new(reg, EvalLimits::default());
                let direct = i2
                    .call(&Value::Native { name: f.name().into() }, vec![x])
                    .and_then(|mid| i2.call(&Value::Native { name: g.name().into() }, vec![mid]));
                assert_eq!(via_comp, direct, "comp law failed for {} . {}", f.name(), g.name());
                checked += 1;
            }
        }
        assert!(checked > 20, "too few comp pairs checked: {checked}");
    }

    #[test]
    fn partial_law() {
        // eval(partial1-of-2(f,a))(b) == f(a,b) over binary entries.
        let reg = registry();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut checked = 0;
        for f in reg.entries().filter(|e| e.arity() == 2) {
            let inst = random_instantiation(f.scheme(), &mut rng);
            let (params, _) = inst.as_function().unwrap();
            let a = random_value_of(&params[0], &mut rng);
            let b = random_value_of(&params[1], &mut rng);
            let partial = call(
                "partial1-of-2",
                vec![Value::Native { name: f.name().into() }, a.clone()],
            )
            .unwrap();
            let mut i1 = Interp::new(reg, EvalLimits::default());
            let via_partial = i1.call(&partial, vec![b.clone()]);
            let mut i2 = Interp::new(reg, EvalLimits::default());
            let direct = i2.call(&Value::Native { name: f.name().into() }, vec![a, b]);
            assert_eq!(via_partial, direct, "partial law failed for {}", f.name());
            checked += 1;
        }
        assert!(checked > 30);
    }

    #[test]
    fn scheme_conformance_random_instantiations() {
        // Every entry: random monomorphic instantiations with random
        // well-typed arguments either return a value of the instantiated
        // return type or fault. Nothing may panic.
        let reg = registry();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for entry in reg.entries() {
            for _ in 0..1000 {
                let inst = random_instantiation(entry.scheme(), &mut rng);
                let (params, ret) = inst.as_function().unwrap();
                let args: Vec<Value> =
                    params.iter().map(|t| random_value_of(t, &mut rng)).collect();
                let mut interp = Interp::new(reg, EvalLimits::default());
                match entry.invoke(&mut interp, args) {
                    Ok(v) => assert!(
                        crate::interp::value_conforms(&v, ret),
                        "{}: result {v} does not conform to {ret}",
                        entry.name()
                    ),
                    Err(_) => {} // faults are legal outcomes
                }
            }
        }
    }

    #[test]
    fn polymorphic_comparison_orders_all_types() {
        let lt = |a: Value, b: Value| call("lt?", vec![a, b]).unwrap();
        assert_eq!(lt(Value::Int(1), Value::Int(2)), Value::Bool(true));
        assert_eq!(
            lt(Value::Str("a".into()), Value::Str("b".into())),
            Value::Bool(true)
        );
        assert_eq!(lt(Value::Char('b'), Value::Char('a')), Value::Bool(false));
        // Consistency with the shared value order.
        let a = Value::Vector(vec![Value::Int(1)]);
        let b = Value::Vector(vec![Value::Int(2)]);
        assert_eq!(
            lt(a.clone(), b.clone()),
            Value::Bool(cmp_values(&a, &b) == std::cmp::Ordering::Less)
        );
    }

    #[test]
    fn committed_catalog_is_current() {
        let expected = registry().catalog_markdown();
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/docs/stdlib_catalog.md");
        let committed = std::fs::read_to_string(path)
            .expect("docs/stdlib_catalog.md missing; run `cbgp catalog`");
        assert_eq!(
            committed, expected,
            "docs/stdlib_catalog.md is stale; regenerate with `cbgp catalog`"
        );
    }

    #[test]
    fn range_is_size_limited() {
        let reg = registry();
        let entry = reg.lookup("range").unwrap();
        let mut interp = Interp::new(
            reg,
            EvalLimits {
                max_steps: 10_000_000,
                max_collection_size: 100_000,
            },
        );
        let fault = entry
            .invoke(&mut interp, vec![Value::Int(1_000_000_000)])
            .unwrap_err();
        assert_eq!(fault.kind, crate::interp::FaultKind::SizeLimit);
    }

    #[test]
    fn group_by_and_sort_by_shapes() {
        let pairs = Value::Vector(vec![
            Value::tuple(Value::Str("a".into()), Value::Int(1)),
            Value::tuple(Value::Str("b".into()), Value::Int(2)),
            Value::tuple(Value::Str("a".into()), Value::Int(3)),
        ]);
        let grouped = call(
            "group-by",
            vec![Value::Native { name: "tuple-first".into() }, pairs],
        )
        .unwrap();
        match &grouped {
            Value::Map(entries) => {
                assert_eq!(entries.len(), 2);
                let a_group = &entries[0];
                assert_eq!(a_group.0, Value::Str("a".into()));
                match &a_group.1 {
                    Value::Vector(items) => assert_eq!(items.len(), 2),
                    other => panic!("expected vector group, got {other}"),
                }
            }
            other => panic!("expected map, got {other}"),
        }

        let v = Value::Vector(vec![Value::Int(-3), Value::Int(1), Value::Int(-2)]);
        let sorted = call(
            "sort-by",
            vec![Value::Native { name: "int-abs".into() }, v],
        )
        .unwrap();
        assert_eq!(
            sorted,
            Value::Vector(vec![Value::Int(1), Value::Int(-2), Value::Int(-3)])
        );
    }
}
