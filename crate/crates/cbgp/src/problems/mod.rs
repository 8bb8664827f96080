//! The 17 benchmark problems: typed signatures, seeded case generators,
//! error metrics, constant pools and reference solutions.
//!
//! Expected outputs always come from a hand-written oracle implemented
//! directly in Rust, never from the reference genome; the two are
//! independent routes to the same answers.

use std::collections::BTreeSet;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::genome::{parse_genome, ErcSampler, Genome};
use crate::interp::{cmp_values, Value};
use crate::typesys::{Ground, Type};

mod defs;
mod input_fns;

pub use defs::{all_problems, problem_by_name};
pub use input_fns::{oracle_apply, FnDescriptor, InputFn};

/// Documented generator bounds shared by the case generators.
pub mod bounds {
    /// Outer collection sizes (sets, maps, vectors of data).
    pub const COLLECTION_SIZE: (usize, usize) = (1, 10);
    /// Inner vectors of nested structures may be empty.
    pub const INNER_VECTOR_SIZE: (usize, usize) = (0, 8);
    /// Integer payload values.
    pub const INT_PAYLOAD: (i64, i64) = (-100, 100);
    /// Float coordinates in quarter units, i.e. [-100.0, 100.0] on a grid
    /// where sums and products stay exact in 64-bit floats.
    pub const FLOAT_QUARTER_UNITS: (i64, i64) = (-400, 400);
    /// Lowercase key strings.
    pub const KEY_LENGTH: (usize, usize) = (1, 8);
    /// max-applied-fn requires 0 < X < 50.
    pub const MAX_APPLIED_X: (i64, i64) = (1, 49);
    /// Centimeter lengths.
    pub const CENTIMETERS: (i64, i64) = (0, 9999);
}

/// Error values are clamped to stay finite no matter what an evolved
/// program outputs.
pub const MAX_ERROR: f64 = 1e18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ErrorMetric {
    /// Absolute difference for Int/Float outputs.
    AbsDiff,
    /// Levenshtein edit distance for String outputs.
    LevenshteinStr,
    /// Jaccard distance for Set outputs.
    JaccardSet,
    /// Sum of per-component absolute differences for Tuple outputs.
    TupleComponentAbsDiff,
    /// 0 when equal, 1 otherwise; used for polymorphic outputs.
    ExactMatch01,
    /// Sequence edit distance with unit indel cost and unit substitution
    /// cost for unequal elements; used for Vector outputs.
    VectorEdit,
}

/// One training or test case. `fn_inputs` carries the serializable
/// descriptor for every function-valued input, parallel to `inputs`.
#[derive(Clone, Debug, PartialEq)]
pub struct Case {
    pub inputs: Vec<Value>,
    pub expected: Value,
    pub fn_inputs: Vec<Option<FnDescriptor>>,
}

impl Case {
    pub fn data(inputs: Vec<Value>, expected: Value) -> Case {
        let fn_inputs = vec![None; inputs.len()];
        Case {
            inputs,
            expected,
            fn_inputs,
        }
    }
}

#[derive(Clone)]
pub struct ProblemSpec {
    pub name: &'static str,
    pub input_types: Vec<Type>,
    pub output_type: Type,
    pub ground_types: BTreeSet<Ground>,
    pub constants: Vec<(Value, Type)>,
    pub erc_overrides: Vec<ErcSampler>,
    pub metric: ErrorMetric,
    pub reference_genome_text: &'static str,
    generator: fn(&mut ChaCha8Rng) -> Case,
}

impl ProblemSpec {
    /// ERC generators for the source: per-problem overrides when present,
    /// otherwise the defaults for each of the problem's ground types.
    pub fn erc_samplers(&self) -> Vec<ErcSampler> {
        if !self.erc_overrides.is_empty() {
            return self.erc_overrides.clone();
        }
        self.ground_types
            .iter()
            .map(|g| ErcSampler::default_for(*g))
            .collect()
    }

    pub fn reference_genome(&self) -> Genome {
        parse_genome(self.reference_genome_text).expect("reference genome parses")
    }

    /// i.i.d. cases within the documented bounds; expected outputs come
    /// from the problem's Rust oracle.
    pub fn generate_cases(&self, n: usize, rng: &mut ChaCha8Rng) -> Vec<Case> {
        (0..n).map(|_| (self.generator)(rng)).collect()
    }

    pub fn is_polymorphic(&self) -> bool {
        self.input_types.iter().any(|t| !t.is_monomorphic())
            || !self.output_type.is_monomorphic()
    }
}

impl std::fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProblemSpec").field("name", &self.name).finish()
    }
}

fn abs_diff_int(a: i64, b: i64) -> f64 {
    ((a as i128) - (b as i128)).unsigned_abs() as f64
}

fn clamp_error(x: f64) -> f64 {
    if x.is_finite() {
        x.min(MAX_ERROR)
    } else {
        MAX_ERROR
    }
}

/// Levenshtein distance over arbitrary equatable items.
fn edit_distance<T, F: Fn(&T, &T) -> bool>(a: &[T], b: &[T], eq: F) -> usize {
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, x) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let subst = prev[j] + usize::from(!eq(x, y));
            cur[j + 1] = subst.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

pub fn levenshtein(a: &str, b: &str) -> usize {
    let av: Vec<char> = a.chars().collect();
    let bv: Vec<char> = b.chars().collect();
    edit_distance(&av, &bv, |x, y| x == y)
}

/// Metric-specific distance between an actual and an expected output.
/// Total: mismatched shapes (impossible for type-checked programs) score
/// the maximum error.
pub fn score(metric: ErrorMetric, actual: &Value, expected: &Value) -> f64 {
    let out = match (metric, actual, expected) {
        (ErrorMetric::AbsDiff, Value::Int(a), Value::Int(b)) => abs_diff_int(*a, *b),
        (ErrorMetric::AbsDiff, Value::Float(a), Value::Float(b)) => (a - b).abs(),
        (ErrorMetric::LevenshteinStr, Value::Str(a), Value::Str(b)) => {
            levenshtein(a, b) as f64
        }
        (ErrorMetric::JaccardSet, Value::Set(a), Value::Set(b)) => {
            if a.is_empty() && b.is_empty() {
                0.0
            } else {
                let inter = a.iter().filter(|v| b.contains(v)).count();
                let union = a.len() + b.len() - inter;
                1.0 - inter as f64 / union as f64
            }
        }
        (ErrorMetric::TupleComponentAbsDiff, Value::Tuple(a), Value::Tuple(b)) => {
            let component = |x: &Value, y: &Value| match (x, y) {
                (Value::Int(p), Value::Int(q)) => abs_diff_int(*p, *q),
                (Value::Float(p), Value::Float(q)) => (p - q).abs(),
                _ => {
                    if x == y {
                        0.0
                    } else {
                        MAX_ERROR
                    }
                }
            };
            component(&a.0, &b.0) + component(&a.1, &b.1)
        }
        (ErrorMetric::ExactMatch01, a, b) => {
            if a == b {
                0.0
            } else {
                1.0
            }
        }
        (ErrorMetric::VectorEdit, Value::Vector(a), Value::Vector(b)) => {
            edit_distance(a, b, |x, y| x == y) as f64
        }
        (_, a, b) => {
            if a == b {
                0.0
            } else {
                MAX_ERROR
            }
        }
    };
    clamp_error(out)
}

/// Typed JSON encoding of a data value, used by the case files.
pub fn value_to_json(v: &Value) -> serde_json::Value {
    use serde_json::json;
    match v {
        Value::Bool(x) => json!({"t": "Bool", "v": x}),
        Value::Int(x) => json!({"t": "Int", "v": x}),
        Value::Float(x) => json!({"t": "Float", "v": x}),
        Value::Char(x) => json!({"t": "Char", "v": x.to_string()}),
        Value::Str(x) => json!({"t": "Str", "v": x}),
        Value::Vector(items) => {
            json!({"t": "Vector", "v": items.iter().map(value_to_json).collect::<Vec<_>>()})
        }
        Value::Set(items) => {
            json!({"t": "Set", "v": items.iter().map(value_to_json).collect::<Vec<_>>()})
        }
        Value::Map(entries) => json!({
            "t": "Map",
            "v": entries
                .iter()
                .map(|(k, val)| vec![value_to_json(k), value_to_json(val)])
                .collect::<Vec<_>>()
        }),
        Value::Tuple(t) => json!({"t": "Tuple", "v": [value_to_json(&t.0), value_to_json(&t.1)]}),
        other => json!({"t": "Fn", "v": other.to_string()}),
    }
}

/// One JSON line per case; function inputs serialize as family name plus
/// parameters.
pub fn case_to_json(case: &Case) -> serde_json::Value {
    use serde_json::json;
    let inputs: Vec<serde_json::Value> = case
        .inputs
        .iter()
        .zip(&case.fn_inputs)
        .map(|(v, desc)| match desc {
            Some(d) => json!({
                "t": "Fn",
                "family": d.family,
                "params": d.params.iter().map(value_to_json).collect::<Vec<_>>()
            }),
            None => value_to_json(v),
        })
        .collect();
    json!({"inputs": inputs, "expected": value_to_json(&case.expected)})
}

/// Convenience used by generators: ordering consistent with the runtime
/// comparison functions.
pub(crate) fn value_le(a: &Value, b: &Value) -> bool {
    cmp_values(a, b) != std::cmp::Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set_of(items: &[i64]) -> Value {
        Value::set_from(items.iter().map(|i| Value::Int(*i)))
    }

    #[test]
    fn abs_diff_examples() {
        assert_eq!(score(ErrorMetric::AbsDiff, &Value::Int(7), &Value::Int(10)), 3.0);
        assert_eq!(
            score(ErrorMetric::AbsDiff, &Value::Float(1.5), &Value::Float(1.5)),
            0.0
        );
        assert_eq!(
            score(ErrorMetric::AbsDiff, &Value::Int(i64::MIN), &Value::Int(i64::MAX)),
            (u64::MAX as f64).min(MAX_ERROR)
        );
    }

    #[test]
    fn levenshtein_examples() {
        // Frozen from the textbook DP recurrence (verified below against
        // an independent recursive oracle).
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("abc", "abc"), 0);
    }

    /// Independent exponential-recursion oracle for small inputs.
    fn lev_oracle(a: &[char], b: &[char]) -> usize {
        match (a, b) {
            ([], _) => b.len(),
            (_, []) => a.len(),
            _ => {
                let del = lev_oracle(&a[1..], b) + 1;
                let ins = lev_oracle(a, &b[1..]) + 1;
                let sub = lev_oracle(&a[1..], &b[1..]) + usize::from(a[0] != b[0]);
                del.min(ins).min(sub)
            }
        }
    }

    #[test]
    fn levenshtein_matches_recursive_oracle() {
        let words = ["", "a", "ab", "abc", "cab", "bca", "acbc"];
        for x in words {
            for y in words {
                let xv: Vec<char> = x.chars().collect();
                let yv: Vec<char> = y.chars().collect();
                assert_eq!(levenshtein(x, y), lev_oracle(&xv, &yv), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn jaccard_examples() {
        let a = set_of(&[1, 2]);
        let b = set_of(&[2, 3]);
        let d = score(ErrorMetric::JaccardSet, &a, &b);
        assert!((d - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(score(ErrorMetric::JaccardSet, &set_of(&[]), &set_of(&[])), 0.0);
        assert_eq!(score(ErrorMetric::JaccardSet, &set_of(&[1]), &set_of(&[2])), 1.0);
    }

    #[test]
    fn tuple_metric_sums_components() {
        // ((1,5),(4,5)) scores 3 + 0: frozen from summing per-component
        // absolute differences by hand.
        let a = Value::tuple(Value::Int(1), Value::Int(5));
        let b = Value::tuple(Value::Int(4), Value::Int(5));
        assert_eq!(score(ErrorMetric::TupleComponentAbsDiff, &a, &b), 3.0);
    }

    #[test]
    fn exact_match_is_binary() {
        assert_eq!(
            score(ErrorMetric::ExactMatch01, &Value::Str("k".into()), &Value::Str("k".into())),
            0.0
        );
        assert_eq!(
            score(ErrorMetric::ExactMatch01, &Value::Int(1), &Value::Int(2)),
            1.0
        );
    }

    #[test]
    fn vector_edit_counts_indels_and_substitutions() {
        let a = Value::Vector(vec![Value::Int(1), Value::Int(2), Value::Int(3)]);
        let b = Value::Vector(vec![Value::Int(1), Value::Int(9)]);
        // One substitution (2->9) plus one deletion (3).
        assert_eq!(score(ErrorMetric::VectorEdit, &a, &b), 2.0);
    }

    #[test]
    fn non_finite_floats_clamp() {
        let d = score(
            ErrorMetric::AbsDiff,
            &Value::Float(f64::INFINITY),
            &Value::Float(0.0),
        );
        assert_eq!(d, MAX_ERROR);
    }

    proptest! {
        #[test]
        fn prop_identity_of_indiscernibles_int(x in -1000i64..1000) {
            prop_assert_eq!(score(ErrorMetric::AbsDiff, &Value::Int(x), &Value::Int(x)), 0.0);
        }

        #[test]
        fn prop_symmetric_metrics(a in -50i64..50, b in -50i64..50) {
            let (va, vb) = (Value::Int(a), Value::Int(b));
            prop_assert_eq!(
                score(ErrorMetric::AbsDiff, &va, &vb),
                score(ErrorMetric::AbsDiff, &vb, &va)
            );
        }

        #[test]
        fn prop_levenshtein_symmetric(a in "[abc]{0,6}", b in "[abc]{0,6}") {
            prop_assert_eq!(levenshtein(&a, &b), levenshtein(&b, &a));
        }

        #[test]
        fn prop_jaccard_bounds(a in proptest::collection::btree_set(-5i64..5, 0..6),
                               b in proptest::collection::btree_set(-5i64..5, 0..6)) {
            let va = Value::set_from(a.iter().map(|i| Value::Int(*i)));
            let vb = Value::set_from(b.iter().map(|i| Value::Int(*i)));
            let d = score(ErrorMetric::JaccardSet, &va, &vb);
            prop_assert!((0.0..=1.0).contains(&d));
            let disjoint = a.is_disjoint(&b);
            if !a.is_empty() || !b.is_empty() {
                prop_assert_eq!(d == 1.0, disjoint);
            }
            if a == b {
                prop_assert_eq!(d, 0.0);
            }
        }
    }
}
