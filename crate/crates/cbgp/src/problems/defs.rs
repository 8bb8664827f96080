//! Definitions of the 17 benchmark problems.
//!
//! Every case generator draws inputs inside the bounds documented in
//! [`super::bounds`] and computes the expected output with a direct Rust
//! oracle. Polymorphic problems instantiate their element type per case,
//! drawing from Int, String and Char.

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::input_fns::{encryption_fn, objective_fn, oracle_apply, predicate_for};
use super::{bounds, value_le, Case, ErrorMetric, ProblemSpec};
use crate::interp::Value;
use crate::typesys::{Ground, Type};

pub fn all_problems() -> Vec<ProblemSpec> {
    vec![
        area_of_rectangle(),
        centimeters_to_meters(),
        count_true(),
        filter_bounds(),
        first_index_of_true(),
        get_vals_of_key(),
        max_applied_fn(),
        min_key(),
        set_cartesian_product(),
        set_symmetric_difference(),
        sets_with_element(),
        simple_encryption(),
        sum_2_vals(),
        sum_2_vals_polymorphic(),
        sum_2d(),
        sum_vector_vals(),
        time_sheet(),
    ]
}

pub fn problem_by_name(name: &str) -> Option<ProblemSpec> {
    all_problems().into_iter().find(|p| p.name == name)
}

fn grounds(list: &[Ground]) -> BTreeSet<Ground> {
    list.iter().copied().collect()
}

fn size(rng: &mut ChaCha8Rng, range: (usize, usize)) -> usize {
    rng.random_range(range.0..=range.1)
}

fn payload_int(rng: &mut ChaCha8Rng) -> i64 {
    rng.random_range(bounds::INT_PAYLOAD.0..=bounds::INT_PAYLOAD.1)
}

fn quarter_float(rng: &mut ChaCha8Rng, lo_units: i64, hi_units: i64) -> f64 {
    rng.random_range(lo_units..=hi_units) as f64 / 4.0
}

fn key_string(rng: &mut ChaCha8Rng) -> String {
    let len = size(rng, bounds::KEY_LENGTH);
    (0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect()
}

fn printable_char(rng: &mut ChaCha8Rng) -> char {
    rng.random_range(0x20u8..=0x7e) as char
}

/// Element types used to instantiate polymorphic problems.
fn poly_element_type(rng: &mut ChaCha8Rng) -> Type {
    match rng.random_range(0..3) {
        0 => Type::INT,
        1 => Type::STRING,
        _ => Type::CHAR,
    }
}

fn element_value(ty: &Type, rng: &mut ChaCha8Rng) -> Value {
    match ty {
        Type::Ground(Ground::Int) => Value::Int(payload_int(rng)),
        Type::Ground(Ground::String) => Value::Str(key_string(rng)),
        Type::Ground(Ground::Char) => Value::Char(printable_char(rng)),
        other => unreachable!("unsupported element type {other}"),
    }
}

fn area_of_rectangle() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        // Lower-left on the quarter grid; width/height strictly positive
        // so the upper-right corner strictly dominates it.
        let llx = quarter_float(rng, bounds::FLOAT_QUARTER_UNITS.0, 200);
        let lly = quarter_float(rng, bounds::FLOAT_QUARTER_UNITS.0, 200);
        let w = quarter_float(rng, 1, 200);
        let h = quarter_float(rng, 1, 200);
        let ur = Value::tuple(Value::Float(llx + w), Value::Float(lly + h));
        let ll = Value::tuple(Value::Float(llx), Value::Float(lly));
        let expected = Value::Float(w * h);
        Case::data(vec![ur, ll], expected)
    }
    ProblemSpec {
        name: "area-of-rectangle",
        input_types: vec![
            Type::tuple(Type::FLOAT, Type::FLOAT),
            Type::tuple(Type::FLOAT, Type::FLOAT),
        ],
        output_type: Type::FLOAT,
        ground_types: grounds(&[Ground::Float]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 0
FN tuple-first
APPLY
IN 1
FN tuple-first
APPLY
FN float-sub
APPLY
IN 0
FN tuple-second
APPLY
IN 1
FN tuple-second
APPLY
FN float-sub
APPLY
FN float-mult
APPLY
",
        generator: generate,
    }
}

fn centimeters_to_meters() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let cm = rng.random_range(bounds::CENTIMETERS.0..=bounds::CENTIMETERS.1);
        let expected = Value::tuple(Value::Int(cm / 100), Value::Int(cm % 100));
        Case::data(vec![Value::Int(cm)], expected)
    }
    ProblemSpec {
        name: "centimeters-to-meters",
        input_types: vec![Type::INT],
        output_type: Type::tuple(Type::INT, Type::INT),
        ground_types: grounds(&[Ground::Int]),
        constants: vec![(Value::Int(100), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::TupleComponentAbsDiff,
        reference_genome_text: "\
IN 0
LIT Int 100
FN int-div
APPLY
IN 0
LIT Int 100
FN int-mod
APPLY
FN tuple
APPLY
",
        generator: generate,
    }
}

fn count_true() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let elem = poly_element_type(rng);
        let items: Vec<Value> = (0..size(rng, bounds::COLLECTION_SIZE))
            .map(|_| element_value(&elem, rng))
            .collect();
        let pred = predicate_for(&elem, &items, rng);
        let count = items
            .iter()
            .filter(|v| oracle_apply(&pred.descriptor, v) == Value::Bool(true))
            .count();
        Case {
            inputs: vec![Value::Vector(items), pred.value],
            expected: Value::Int(count as i64),
            fn_inputs: vec![None, Some(pred.descriptor)],
        }
    }
    ProblemSpec {
        name: "count-true",
        input_types: vec![
            Type::vector(Type::var(0)),
            Type::func(vec![Type::var(0)], Type::BOOLEAN),
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::Int, Ground::Boolean]),
        constants: vec![
            (Value::Bool(true), Type::BOOLEAN),
            (Value::Int(0), Type::INT),
            (Value::Int(1), Type::INT),
        ],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 1
IN 0
FN filter-vector
APPLY
FN vector-length
APPLY
",
        generator: generate,
    }
}

fn filter_bounds() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let elem = poly_element_type(rng);
        let items: Vec<Value> = (0..size(rng, bounds::COLLECTION_SIZE))
            .map(|_| element_value(&elem, rng))
            .collect();
        // Bounds are fresh draws or existing members, so the inclusive
        // boundary actually gets exercised.
        let draw_bound = |rng: &mut ChaCha8Rng| {
            if rng.random() {
                items[rng.random_range(0..items.len())].clone()
            } else {
                element_value(&elem, rng)
            }
        };
        let b1 = draw_bound(rng);
        let b2 = draw_bound(rng);
        let (lo, hi) = if value_le(&b1, &b2) { (b1, b2) } else { (b2, b1) };
        let set = Value::set_from(items);
        let kept = match &set {
            Value::Set(members) => members
                .iter()
                .filter(|m| value_le(&lo, m) && value_le(m, &hi))
                .cloned()
                .collect::<Vec<_>>(),
            _ => unreachable!(),
        };
        Case::data(vec![set, lo, hi], Value::set_from(kept))
    }
    ProblemSpec {
        name: "filter-bounds",
        input_types: vec![Type::set(Type::var(0)), Type::var(0), Type::var(0)],
        output_type: Type::set(Type::var(0)),
        ground_types: BTreeSet::new(),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::JaccardSet,
        reference_genome_text: "\
FN-ABS 1
VAR 0
IN 1
FN ge?
APPLY
LET
FN ge?
IN 2
FN partial1-of-2
APPLY
IN 0
FN filter-set
APPLY
VAR 0
FN filter-set
APPLY
",
        generator: generate,
    }
}

fn first_index_of_true() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        // Regenerate until some element satisfies the predicate, keeping
        // the expected index well-defined.
        loop {
            let elem = poly_element_type(rng);
            let items: Vec<Value> = (0..size(rng, bounds::COLLECTION_SIZE))
                .map(|_| element_value(&elem, rng))
                .collect();
            let pred = predicate_for(&elem, &items, rng);
            let index = items
                .iter()
                .position(|v| oracle_apply(&pred.descriptor, v) == Value::Bool(true));
            if let Some(index) = index {
                return Case {
                    inputs: vec![Value::Vector(items), pred.value],
                    expected: Value::Int(index as i64),
                    fn_inputs: vec![None, Some(pred.descriptor)],
                };
            }
        }
    }
    ProblemSpec {
        name: "first-index-of-true",
        input_types: vec![
            Type::vector(Type::var(0)),
            Type::func(vec![Type::var(0)], Type::BOOLEAN),
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::Int, Ground::Boolean]),
        constants: vec![
            (Value::Bool(true), Type::BOOLEAN),
            (Value::Int(0), Type::INT),
            (Value::Int(1), Type::INT),
        ],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 1
IN 0
FN map-vector
APPLY
LIT Boolean true
FN index-of
APPLY
",
        generator: generate,
    }
}

fn get_vals_of_key() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let key = key_string(rng);
        let n = size(rng, bounds::COLLECTION_SIZE);
        let mut maps = Vec::with_capacity(n);
        let mut expected = Vec::with_capacity(n);
        for _ in 0..n {
            let mut entries: Vec<(Value, Value)> = (0..rng.random_range(0..=4))
                .map(|_| (Value::Str(key_string(rng)), Value::Int(payload_int(rng))))
                .collect();
            let v = payload_int(rng);
            // The shared key goes last so it survives deduplication.
            entries.push((Value::Str(key.clone()), Value::Int(v)));
            maps.push(Value::map_from(entries));
            expected.push(Value::Int(v));
        }
        Case::data(
            vec![Value::Vector(maps), Value::Str(key)],
            Value::Vector(expected),
        )
    }
    ProblemSpec {
        name: "get-vals-of-key",
        input_types: vec![
            Type::vector(Type::map(Type::STRING, Type::INT)),
            Type::STRING,
        ],
        output_type: Type::vector(Type::INT),
        ground_types: grounds(&[Ground::String, Ground::Int]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::VectorEdit,
        reference_genome_text: "\
FN map-get
FN flip
APPLY
IN 1
FN partial1-of-2
APPLY
IN 0
FN map-vector
APPLY
",
        generator: generate,
    }
}

fn max_applied_fn() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let x = rng.random_range(bounds::MAX_APPLIED_X.0..=bounds::MAX_APPLIED_X.1);
        let f = objective_fn(rng);
        let best = (0..x)
            .max_by_key(|i| match oracle_apply(&f.descriptor, &Value::Int(*i)) {
                Value::Int(y) => y,
                _ => unreachable!(),
            })
            .expect("x is positive");
        Case {
            inputs: vec![Value::Int(x), f.value],
            expected: Value::Int(best),
            fn_inputs: vec![None, Some(f.descriptor)],
        }
    }
    ProblemSpec {
        name: "max-applied-fn",
        input_types: vec![Type::INT, Type::func(vec![Type::INT], Type::INT)],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT), (Value::Int(1), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 0
FN range
APPLY
IN 1
FN sort-by
APPLY
FN vector-last
APPLY
",
        generator: generate,
    }
}

fn min_key() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        // Regenerate maps whose minimum value is tied so the expected key
        // is unique.
        loop {
            let elem = poly_element_type(rng);
            let entries: Vec<(Value, Value)> = (0..size(rng, bounds::COLLECTION_SIZE))
                .map(|_| (element_value(&elem, rng), Value::Int(payload_int(rng))))
                .collect();
            let map = Value::map_from(entries);
            let actual = match &map {
                Value::Map(e) => e.clone(),
                _ => unreachable!(),
            };
            let min = actual
                .iter()
                .map(|(_, v)| match v {
                    Value::Int(i) => *i,
                    _ => unreachable!(),
                })
                .min()
                .expect("map non-empty");
            let holders: Vec<&(Value, Value)> = actual
                .iter()
                .filter(|(_, v)| v == &Value::Int(min))
                .collect();
            if holders.len() == 1 {
                return Case::data(vec![map], holders[0].0.clone());
            }
        }
    }
    ProblemSpec {
        name: "min-key",
        input_types: vec![Type::map(Type::var(0), Type::INT)],
        output_type: Type::var(0),
        ground_types: grounds(&[Ground::Int]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::ExactMatch01,
        reference_genome_text: "\
FN-ABS 2
VAR 0
FN tuple-second
APPLY
VAR 1
FN tuple-second
APPLY
FN lt?
APPLY
VAR 0
VAR 1
FN if
APPLY
LET
IN 0
FN map-to-vector
APPLY
VAR 0
FN reduce-vector
APPLY
FN tuple-first
APPLY
",
        generator: generate,
    }
}

fn set_cartesian_product() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let draw = |rng: &mut ChaCha8Rng| {
            Value::set_from(
                (0..size(rng, bounds::COLLECTION_SIZE)).map(|_| Value::Int(payload_int(rng))),
            )
        };
        let a = draw(rng);
        let b = draw(rng);
        let (xs, ys) = match (&a, &b) {
            (Value::Set(xs), Value::Set(ys)) => (xs.clone(), ys.clone()),
            _ => unreachable!(),
        };
        let mut pairs = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                pairs.push(Value::tuple(x.clone(), y.clone()));
            }
        }
        Case::data(vec![a, b], Value::set_from(pairs))
    }
    ProblemSpec {
        name: "set-cartesian-product",
        input_types: vec![Type::set(Type::INT), Type::set(Type::INT)],
        output_type: Type::set(Type::tuple(Type::INT, Type::INT)),
        ground_types: grounds(&[Ground::Int]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::JaccardSet,
        reference_genome_text: "\
FN-ABS 1
FN tuple
VAR 0
FN partial1-of-2
APPLY
IN 1
FN set-to-vector
APPLY
FN map-vector
APPLY
LET
IN 0
FN set-to-vector
APPLY
VAR 0
FN mapcat
APPLY
FN vector-to-set
APPLY
",
        generator: generate,
    }
}

fn set_symmetric_difference() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let draw = |rng: &mut ChaCha8Rng| {
            Value::set_from(
                (0..size(rng, bounds::COLLECTION_SIZE)).map(|_| Value::Int(payload_int(rng))),
            )
        };
        let a = draw(rng);
        let b = draw(rng);
        let (xs, ys) = match (&a, &b) {
            (Value::Set(xs), Value::Set(ys)) => (xs.clone(), ys.clone()),
            _ => unreachable!(),
        };
        let mut out: Vec<Value> = xs.iter().filter(|x| !ys.contains(x)).cloned().collect();
        out.extend(ys.iter().filter(|y| !xs.contains(y)).cloned());
        Case::data(vec![a, b], Value::set_from(out))
    }
    ProblemSpec {
        name: "set-symmetric-difference",
        input_types: vec![Type::set(Type::INT), Type::set(Type::INT)],
        output_type: Type::set(Type::INT),
        ground_types: grounds(&[Ground::Int]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::JaccardSet,
        reference_genome_text: "\
IN 0
IN 1
FN set-difference
APPLY
IN 1
IN 0
FN set-difference
APPLY
FN set-union
APPLY
",
        generator: generate,
    }
}

fn sets_with_element() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let target = payload_int(rng);
        let n = rng.random_range(1..=8);
        let mut inners = Vec::with_capacity(n);
        for _ in 0..n {
            let mut members: Vec<Value> =
                (0..rng.random_range(0..=6)).map(|_| Value::Int(payload_int(rng))).collect();
            // Half the inner sets are guaranteed hits so both branches of
            // the filter carry signal.
            if rng.random() {
                members.push(Value::Int(target));
            }
            inners.push(Value::set_from(members));
        }
        let outer = Value::set_from(inners);
        let kept = match &outer {
            Value::Set(sets) => sets
                .iter()
                .filter(|s| match s {
                    Value::Set(members) => members.contains(&Value::Int(target)),
                    _ => unreachable!(),
                })
                .cloned()
                .collect::<Vec<_>>(),
            _ => unreachable!(),
        };
        Case::data(
            vec![outer, Value::Int(target)],
            Value::set_from(kept),
        )
    }
    ProblemSpec {
        name: "sets-with-element",
        input_types: vec![Type::set(Type::set(Type::INT)), Type::INT],
        output_type: Type::set(Type::set(Type::INT)),
        ground_types: grounds(&[Ground::Int]),
        constants: vec![],
        erc_overrides: vec![],
        metric: ErrorMetric::JaccardSet,
        reference_genome_text: "\
FN set-contains?
FN flip
APPLY
IN 1
FN partial1-of-2
APPLY
IN 0
FN filter-set
APPLY
",
        generator: generate,
    }
}

fn simple_encryption() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let len = size(rng, bounds::COLLECTION_SIZE);
        let plain: String = (0..len).map(|_| printable_char(rng)).collect();
        let f = encryption_fn(rng);
        let encrypted: String = plain
            .chars()
            .map(|c| match oracle_apply(&f.descriptor, &Value::Char(c)) {
                Value::Char(e) => e,
                _ => unreachable!(),
            })
            .collect();
        Case {
            inputs: vec![Value::Str(plain), f.value],
            expected: Value::Str(encrypted),
            fn_inputs: vec![None, Some(f.descriptor)],
        }
    }
    ProblemSpec {
        name: "simple-encryption",
        input_types: vec![Type::STRING, Type::func(vec![Type::CHAR], Type::CHAR)],
        output_type: Type::STRING,
        ground_types: grounds(&[Ground::String, Ground::Char]),
        constants: vec![(Value::Str(String::new()), Type::STRING)],
        erc_overrides: vec![],
        metric: ErrorMetric::LevenshteinStr,
        reference_genome_text: "\
IN 1
IN 0
FN string-to-chars
APPLY
FN map-vector
APPLY
FN chars-to-string
APPLY
",
        generator: generate,
    }
}

fn sum_2_vals_case(key_type: &Type, rng: &mut ChaCha8Rng) -> Case {
    let entries: Vec<(Value, Value)> = (0..size(rng, bounds::COLLECTION_SIZE))
        .map(|_| (element_value(key_type, rng), Value::Int(payload_int(rng))))
        .collect();
    let map = Value::map_from(entries);
    let actual = match &map {
        Value::Map(e) => e.clone(),
        _ => unreachable!(),
    };
    let pick = |rng: &mut ChaCha8Rng| actual[rng.random_range(0..actual.len())].clone();
    let (k1, v1) = pick(rng);
    let (k2, v2) = pick(rng);
    let (v1, v2) = match (v1, v2) {
        (Value::Int(a), Value::Int(b)) => (a, b),
        _ => unreachable!(),
    };
    Case::data(vec![map, k1, k2], Value::Int(v1 + v2))
}

const SUM_2_VALS_GENOME: &str = "\
IN 0
IN 1
FN map-get
APPLY
IN 0
IN 2
FN map-get
APPLY
FN int-add
APPLY
";

fn sum_2_vals() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        sum_2_vals_case(&Type::STRING, rng)
    }
    ProblemSpec {
        name: "sum-2-vals",
        input_types: vec![
            Type::map(Type::STRING, Type::INT),
            Type::STRING,
            Type::STRING,
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::String, Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: SUM_2_VALS_GENOME,
        generator: generate,
    }
}

fn sum_2_vals_polymorphic() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let elem = poly_element_type(rng);
        sum_2_vals_case(&elem, rng)
    }
    ProblemSpec {
        name: "sum-2-vals-polymorphic",
        input_types: vec![
            Type::map(Type::var(0), Type::INT),
            Type::var(0),
            Type::var(0),
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: SUM_2_VALS_GENOME,
        generator: generate,
    }
}

fn sum_2d() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        // At least one element overall: a reduce-based summation is a
        // legitimate solution shape and reduce is partial on empty.
        loop {
            let rows = size(rng, bounds::COLLECTION_SIZE);
            let mut total = 0i64;
            let mut elements = 0usize;
            let mut outer = Vec::with_capacity(rows);
            for _ in 0..rows {
                let inner: Vec<i64> = (0..size(rng, bounds::INNER_VECTOR_SIZE))
                    .map(|_| payload_int(rng))
                    .collect();
                elements += inner.len();
                total += inner.iter().sum::<i64>();
                outer.push(Value::Vector(inner.into_iter().map(Value::Int).collect()));
            }
            if elements > 0 {
                return Case::data(vec![Value::Vector(outer)], Value::Int(total));
            }
        }
    }
    ProblemSpec {
        name: "sum-2D",
        input_types: vec![Type::vector(Type::vector(Type::INT))],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT), (Value::Int(1), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 0
FN vector-reverse
FN mapcat
APPLY
FN int-add
FN reduce-vector
APPLY
",
        generator: generate,
    }
}

fn sum_vector_vals() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let entries: Vec<(Value, Value)> = (0..size(rng, bounds::COLLECTION_SIZE))
            .map(|_| (Value::Str(key_string(rng)), Value::Int(payload_int(rng))))
            .collect();
        let map = Value::map_from(entries);
        let actual = match &map {
            Value::Map(e) => e.clone(),
            _ => unreachable!(),
        };
        let picks = size(rng, bounds::COLLECTION_SIZE);
        let mut keys = Vec::with_capacity(picks);
        let mut total = 0i64;
        for _ in 0..picks {
            let (k, v) = &actual[rng.random_range(0..actual.len())];
            keys.push(k.clone());
            total += match v {
                Value::Int(i) => *i,
                _ => unreachable!(),
            };
        }
        Case::data(vec![map, Value::Vector(keys)], Value::Int(total))
    }
    ProblemSpec {
        name: "sum-vector-vals",
        input_types: vec![
            Type::map(Type::STRING, Type::INT),
            Type::vector(Type::STRING),
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::String, Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
FN map-get
IN 0
FN partial1-of-2
APPLY
IN 1
FN map-vector
APPLY
FN int-add
LIT Int 0
FN fold-vector
APPLY
",
        generator: generate,
    }
}

fn time_sheet() -> ProblemSpec {
    fn generate(rng: &mut ChaCha8Rng) -> Case {
        let pool: Vec<String> = (0..rng.random_range(2..=5)).map(|_| key_string(rng)).collect();
        let rows = size(rng, bounds::COLLECTION_SIZE);
        let mut tuples = Vec::with_capacity(rows);
        for _ in 0..rows {
            let name = pool[rng.random_range(0..pool.len())].clone();
            let hours = rng.random_range(0..=40i64);
            tuples.push((name, hours));
        }
        // The queried name is taken from an existing row.
        let target = tuples[rng.random_range(0..tuples.len())].0.clone();
        let total: i64 = tuples
            .iter()
            .filter(|(n, _)| n == &target)
            .map(|(_, h)| h)
            .sum();
        let rows = tuples
            .into_iter()
            .map(|(n, h)| Value::tuple(Value::Str(n), Value::Int(h)))
            .collect();
        Case::data(
            vec![Value::Vector(rows), Value::Str(target)],
            Value::Int(total),
        )
    }
    ProblemSpec {
        name: "time-sheet",
        input_types: vec![
            Type::vector(Type::tuple(Type::STRING, Type::INT)),
            Type::STRING,
        ],
        output_type: Type::INT,
        ground_types: grounds(&[Ground::String, Ground::Int]),
        constants: vec![(Value::Int(0), Type::INT)],
        erc_overrides: vec![],
        metric: ErrorMetric::AbsDiff,
        reference_genome_text: "\
IN 0
FN tuple-first
FN group-by
APPLY
IN 1
FN map-get
APPLY
FN tuple-second
FN map-vector
APPLY
FN int-add
FN reduce-vector
APPLY
",
        generator: generate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{compile, typecheck, TypeEnv};
    use crate::interp::{eval, EvalLimits};
    use crate::problems::score;
    use crate::stdlib::registry;
    use crate::typesys::unify_with_rigids;
    use rand::SeedableRng;

    #[test]
    fn seventeen_problems_with_unique_names() {
        let problems = all_problems();
        assert_eq!(problems.len(), 17);
        let names: std::collections::BTreeSet<&str> =
            problems.iter().map(|p| p.name).collect();
        assert_eq!(names.len(), 17);
    }

    /// Reference genomes compile, type-check at the declared signature,
    /// and score zero. The full 10k-case gate runs in the acceptance
    /// suite; this is a fast per-problem version.
    #[test]
    fn reference_solutions_score_zero() {
        let reg = registry();
        for p in all_problems() {
            let genome = p.reference_genome();
            let ast = compile(&genome, &p.input_types, &p.output_type, reg)
                .unwrap_or_else(|| panic!("{}: reference genome does not compile", p.name));
            let env = TypeEnv::new(reg, &p.input_types, &p.output_type);
            let inferred = typecheck(&ast, &env)
                .unwrap_or_else(|e| panic!("{}: reference fails typecheck: {e}", p.name));
            unify_with_rigids(&inferred, &p.output_type, env.rigid_vars())
                .unwrap_or_else(|e| panic!("{}: inferred {inferred}: {e}", p.name));

            let mut rng = ChaCha8Rng::seed_from_u64(1000);
            for case in p.generate_cases(200, &mut rng) {
                let out = eval(&ast, &case.inputs, reg, EvalLimits::default())
                    .unwrap_or_else(|f| panic!("{}: reference faulted: {f}", p.name));
                let err = score(p.metric, &out, &case.expected);
                assert_eq!(
                    err, 0.0,
                    "{}: reference scored {err} (got {out}, expected {})",
                    p.name, case.expected
                );
            }
        }
    }

    #[test]
    fn max_applied_fn_bounds() {
        let p = problem_by_name("max-applied-fn").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for case in p.generate_cases(500, &mut rng) {
            match &case.inputs[0] {
                Value::Int(x) => assert!(*x > 0 && *x < 50, "X = {x}"),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn sum_2_vals_keys_present() {
        let p = problem_by_name("sum-2-vals").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for case in p.generate_cases(500, &mut rng) {
            let entries = match &case.inputs[0] {
                Value::Map(e) => e,
                _ => unreachable!(),
            };
            for key in [&case.inputs[1], &case.inputs[2]] {
                assert!(entries.iter().any(|(k, _)| k == key), "missing key {key}");
            }
        }
    }

    #[test]
    fn min_key_minimum_is_unique() {
        let p = problem_by_name("min-key").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for case in p.generate_cases(500, &mut rng) {
            let entries = match &case.inputs[0] {
                Value::Map(e) => e,
                _ => unreachable!(),
            };
            let min = entries
                .iter()
                .map(|(_, v)| match v {
                    Value::Int(i) => *i,
                    _ => unreachable!(),
                })
                .min()
                .unwrap();
            let holders: Vec<_> = entries
                .iter()
                .filter(|(_, v)| v == &Value::Int(min))
                .collect();
            assert_eq!(holders.len(), 1);
            assert_eq!(&holders[0].0, &case.expected);
        }
    }

    #[test]
    fn polymorphic_problems_hit_three_instantiations() {
        for name in [
            "count-true",
            "filter-bounds",
            "first-index-of-true",
            "min-key",
            "sum-2-vals-polymorphic",
        ] {
            let p = problem_by_name(name).unwrap();
            assert!(p.is_polymorphic());
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            let mut ranks = std::collections::BTreeSet::new();
            for case in p.generate_cases(200, &mut rng) {
                // The element type shows up in the shape of some input.
                let probe = match (name, &case.inputs[0]) {
                    (_, Value::Vector(items)) if !items.is_empty() => items[0].clone(),
                    (_, Value::Set(items)) if !items.is_empty() => items[0].clone(),
                    (_, Value::Map(entries)) if !entries.is_empty() => entries[0].0.clone(),
                    _ => case.inputs[1].clone(),
                };
                ranks.insert(match probe {
                    Value::Int(_) => "Int",
                    Value::Str(_) => "String",
                    Value::Char(_) => "Char",
                    _ => "other",
                });
            }
            assert!(ranks.len() >= 3, "{name}: only {} instantiations", ranks.len());
        }
    }

    #[test]
    fn generators_are_seed_stable() {
        for p in all_problems() {
            let mut r1 = ChaCha8Rng::seed_from_u64(6);
            let mut r2 = ChaCha8Rng::seed_from_u64(6);
            assert_eq!(p.generate_cases(20, &mut r1), p.generate_cases(20, &mut r2));
        }
    }

    #[test]
    fn case_sizes_respect_bounds() {
        let p = problem_by_name("sum-2D").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for case in p.generate_cases(300, &mut rng) {
            match &case.inputs[0] {
                Value::Vector(rows) => {
                    assert!((1..=10).contains(&rows.len()));
                    for row in rows {
                        match row {
                            Value::Vector(inner) => assert!(inner.len() <= 8),
                            _ => unreachable!(),
                        }
                    }
                }
                _ => unreachable!(),
            }
        }
    }
}
