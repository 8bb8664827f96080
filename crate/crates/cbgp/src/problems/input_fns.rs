//! Function-valued problem inputs.
//!
//! Four problems take a function as an argument. Each input function is
//! drawn from a documented finite family and carries a serializable
//! descriptor (family name plus parameters). The runnable value is a
//! closure over registry calls; [`oracle_apply`] reimplements the same
//! semantics directly in Rust so expected outputs never depend on the
//! interpreter under test.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::compiler::Ast;
use crate::interp::{Env, Value};
use crate::typesys::Type;

#[derive(Clone, Debug, PartialEq)]
pub struct FnDescriptor {
    pub family: &'static str,
    pub params: Vec<Value>,
}

#[derive(Clone, Debug)]
pub struct InputFn {
    pub descriptor: FnDescriptor,
    pub value: Value,
}

fn var(name: &str, ty: Type) -> Ast {
    Ast::Var {
        name: name.into(),
        ty,
    }
}

fn lit(value: Value, ty: Type) -> Ast {
    Ast::Lit { value, ty }
}

fn call(fn_name: &str, fn_ty: Type, args: Vec<Ast>) -> Ast {
    let (_, ret) = fn_ty.as_function().expect("function type");
    let ty = ret.clone();
    Ast::Apply {
        func: Box::new(var(fn_name, fn_ty)),
        args,
        ty,
    }
}

fn closure1(param_ty: Type, body: Ast) -> Value {
    Value::Closure {
        params: vec![("p0".into(), param_ty)],
        body: std::sync::Arc::new(body),
        env: Env::empty(),
    }
}

fn p0(ty: &Type) -> Ast {
    var("p0", ty.clone())
}

fn int_lit(i: i64) -> Ast {
    lit(Value::Int(i), Type::INT)
}

fn ii_i() -> Type {
    Type::func(vec![Type::INT, Type::INT], Type::INT)
}

fn i_i() -> Type {
    Type::func(vec![Type::INT], Type::INT)
}

fn make(descriptor: FnDescriptor, value: Value) -> InputFn {
    InputFn { descriptor, value }
}

/// A predicate over the given element type, for count-true and
/// first-index-of-true. `pool` supplies parameter values that are known
/// to occur in the generated collection so equality predicates stay
/// satisfiable.
pub fn predicate_for(elem: &Type, pool: &[Value], rng: &mut ChaCha8Rng) -> InputFn {
    let to_bool = |name: &str, param: Type, args: Vec<Ast>| -> Ast {
        call(name, Type::func(vec![param], Type::BOOLEAN), args)
    };
    match elem {
        Type::Ground(crate::typesys::Ground::Int) => match rng.random_range(0..4) {
            0 => make(
                FnDescriptor { family: "is-positive", params: vec![] },
                closure1(
                    Type::INT,
                    call(
                        "int-gt?",
                        Type::func(vec![Type::INT, Type::INT], Type::BOOLEAN),
                        vec![p0(&Type::INT), int_lit(0)],
                    ),
                ),
            ),
            1 => make(
                FnDescriptor { family: "is-even", params: vec![] },
                closure1(Type::INT, to_bool("int-even?", Type::INT, vec![p0(&Type::INT)])),
            ),
            2 => {
                let k = pool_value(pool, rng);
                make(
                    FnDescriptor { family: "equals-k", params: vec![k.clone()] },
                    equals_k(&Type::INT, k),
                )
            }
            _ => {
                let k = rng.random_range(-50..=50);
                make(
                    FnDescriptor { family: "greater-than-k", params: vec![Value::Int(k)] },
                    closure1(
                        Type::INT,
                        call(
                            "int-gt?",
                            Type::func(vec![Type::INT, Type::INT], Type::BOOLEAN),
                            vec![p0(&Type::INT), int_lit(k)],
                        ),
                    ),
                )
            }
        },
        Type::Ground(crate::typesys::Ground::String) => match rng.random_range(0..3) {
            0 => {
                let k = rng.random_range(0..=6);
                make(
                    FnDescriptor {
                        family: "length-greater-than-k",
                        params: vec![Value::Int(k)],
                    },
                    closure1(
                        Type::STRING,
                        call(
                            "int-gt?",
                            Type::func(vec![Type::INT, Type::INT], Type::BOOLEAN),
                            vec![
                                call(
                                    "string-length",
                                    Type::func(vec![Type::STRING], Type::INT),
                                    vec![p0(&Type::STRING)],
                                ),
                                int_lit(k),
                            ],
                        ),
                    ),
                )
            }
            1 => {
                let c = rng.random_range(b'a'..=b'z') as char;
                make(
                    FnDescriptor { family: "contains-letter", params: vec![Value::Char(c)] },
                    closure1(
                        Type::STRING,
                        call(
                            "char-in?",
                            Type::func(vec![Type::CHAR, Type::STRING], Type::BOOLEAN),
                            vec![lit(Value::Char(c), Type::CHAR), p0(&Type::STRING)],
                        ),
                    ),
                )
            }
            _ => {
                let k = pool_value(pool, rng);
                make(
                    FnDescriptor { family: "equals-k", params: vec![k.clone()] },
                    equals_k(&Type::STRING, k),
                )
            }
        },
        _ => match rng.random_range(0..4) {
            0 => make(
                FnDescriptor { family: "is-letter", params: vec![] },
                closure1(Type::CHAR, to_bool("char-alpha?", Type::CHAR, vec![p0(&Type::CHAR)])),
            ),
            1 => make(
                FnDescriptor { family: "is-digit", params: vec![] },
                closure1(Type::CHAR, to_bool("digit?", Type::CHAR, vec![p0(&Type::CHAR)])),
            ),
            2 => make(
                FnDescriptor { family: "is-upper", params: vec![] },
                closure1(Type::CHAR, to_bool("char-upper?", Type::CHAR, vec![p0(&Type::CHAR)])),
            ),
            _ => {
                let k = pool_value(pool, rng);
                make(
                    FnDescriptor { family: "equals-k", params: vec![k.clone()] },
                    equals_k(&Type::CHAR, k),
                )
            }
        },
    }
}

fn pool_value(pool: &[Value], rng: &mut ChaCha8Rng) -> Value {
    pool[rng.random_range(0..pool.len())].clone()
}

fn equals_k(ty: &Type, k: Value) -> Value {
    closure1(
        ty.clone(),
        call(
            "eq?",
            Type::func(vec![ty.clone(), ty.clone()], Type::BOOLEAN),
            vec![p0(ty), lit(k, ty.clone())],
        ),
    )
}

/// An Int -> Int objective for max-applied-fn: downward quadratics
/// a(x-b)^2 + c with a < 0, or negated distance to a point. Both have a
/// unique argmax on any integer interval.
pub fn objective_fn(rng: &mut ChaCha8Rng) -> InputFn {
    if rng.random() {
        let a = -rng.random_range(1..=3i64);
        let b = rng.random_range(0..=49i64);
        let c = rng.random_range(-50..=50i64);
        let x_minus_b = call("int-sub", ii_i(), vec![p0(&Type::INT), int_lit(b)]);
        let squared = call("int-square", i_i(), vec![x_minus_b]);
        let scaled = call("int-mult", ii_i(), vec![int_lit(a), squared]);
        let body = call("int-add", ii_i(), vec![scaled, int_lit(c)]);
        make(
            FnDescriptor {
                family: "neg-quadratic",
                params: vec![Value::Int(a), Value::Int(b), Value::Int(c)],
            },
            closure1(Type::INT, body),
        )
    } else {
        let k = rng.random_range(0..=49i64);
        let x_minus_k = call("int-sub", ii_i(), vec![p0(&Type::INT), int_lit(k)]);
        let dist = call("int-abs", i_i(), vec![x_minus_k]);
        let body = call("int-neg", i_i(), vec![dist]);
        make(
            FnDescriptor { family: "neg-distance", params: vec![Value::Int(k)] },
            closure1(Type::INT, body),
        )
    }
}

/// A Char -> Char encryption function: a bijection over printable ASCII.
pub fn encryption_fn(rng: &mut ChaCha8Rng) -> InputFn {
    let c_c = Type::func(vec![Type::CHAR], Type::CHAR);
    let c_i = Type::func(vec![Type::CHAR], Type::INT);
    let i_c = Type::func(vec![Type::INT], Type::CHAR);
    match rng.random_range(0..3) {
        0 => {
            let k = rng.random_range(1..=94i64);
            // ((code - 32 + k) mod 95) + 32 rotates the printable range.
            let code = call("char-to-int", c_i.clone(), vec![p0(&Type::CHAR)]);
            let shifted = call("int-add", ii_i(), vec![code, int_lit(k - 32)]);
            let wrapped = call("int-mod", ii_i(), vec![shifted, int_lit(95)]);
            let back = call("int-add", ii_i(), vec![wrapped, int_lit(32)]);
            let body = call("int-to-char", i_c, vec![back]);
            make(
                FnDescriptor { family: "shift-k", params: vec![Value::Int(k)] },
                closure1(Type::CHAR, body),
            )
        }
        1 => make(
            FnDescriptor { family: "swap-case", params: vec![] },
            closure1(Type::CHAR, call("char-swap-case", c_c, vec![p0(&Type::CHAR)])),
        ),
        _ => {
            // code 32+126-c mirrors the printable range.
            let code = call("char-to-int", c_i, vec![p0(&Type::CHAR)]);
            let mirrored = call("int-sub", ii_i(), vec![int_lit(158), code]);
            let body = call("int-to-char", i_c, vec![mirrored]);
            make(
                FnDescriptor { family: "mirror-printable", params: vec![] },
                closure1(Type::CHAR, body),
            )
        }
    }
}

/// Rust-side semantics of every family, used by the case oracles.
pub fn oracle_apply(desc: &FnDescriptor, arg: &Value) -> Value {
    match (desc.family, arg) {
        ("is-positive", Value::Int(x)) => Value::Bool(*x > 0),
        ("is-even", Value::Int(x)) => Value::Bool(x % 2 == 0),
        ("greater-than-k", Value::Int(x)) => match &desc.params[0] {
            Value::Int(k) => Value::Bool(x > k),
            _ => unreachable!("greater-than-k takes an Int"),
        },
        ("equals-k", x) => Value::Bool(*x == desc.params[0]),
        ("length-greater-than-k", Value::Str(s)) => match &desc.params[0] {
            Value::Int(k) => Value::Bool(s.chars().count() as i64 > *k),
            _ => unreachable!("length-greater-than-k takes an Int"),
        },
        ("contains-letter", Value::Str(s)) => match &desc.params[0] {
            Value::Char(c) => Value::Bool(s.contains(*c)),
            _ => unreachable!("contains-letter takes a Char"),
        },
        ("is-letter", Value::Char(c)) => Value::Bool(c.is_ascii_alphabetic()),
        ("is-digit", Value::Char(c)) => Value::Bool(c.is_ascii_digit()),
        ("is-upper", Value::Char(c)) => Value::Bool(c.is_ascii_uppercase()),
        ("neg-quadratic", Value::Int(x)) => {
            let (a, b, c) = match (&desc.params[0], &desc.params[1], &desc.params[2]) {
                (Value::Int(a), Value::Int(b), Value::Int(c)) => (*a, *b, *c),
                _ => unreachable!("neg-quadratic takes three Ints"),
            };
            Value::Int(a * (x - b) * (x - b) + c)
        }
        ("neg-distance", Value::Int(x)) => match &desc.params[0] {
            Value::Int(k) => Value::Int(-(x - k).abs()),
            _ => unreachable!("neg-distance takes an Int"),
        },
        ("shift-k", Value::Char(c)) => match &desc.params[0] {
            Value::Int(k) => {
                let code = *c as i64;
                Value::Char(((code - 32 + k).rem_euclid(95) + 32) as u8 as char)
            }
            _ => unreachable!("shift-k takes an Int"),
        },
        ("swap-case", Value::Char(c)) => Value::Char(if c.is_ascii_uppercase() {
            c.to_ascii_lowercase()
        } else if c.is_ascii_lowercase() {
            c.to_ascii_uppercase()
        } else {
            *c
        }),
        ("mirror-printable", Value::Char(c)) => Value::Char((158 - *c as i64) as u8 as char),
        (family, arg) => unreachable!("family {family} applied to {arg}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{EvalLimits, Interp};
    use crate::stdlib::registry;
    use rand::SeedableRng;

    /// The runnable closure and the Rust oracle agree on every family.
    #[test]
    fn closures_agree_with_oracle() {
        let reg = registry();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let int_pool: Vec<Value> = (-5..5).map(Value::Int).collect();
        let str_pool: Vec<Value> = vec![Value::Str("ab".into()), Value::Str("xyz".into())];
        let char_pool: Vec<Value> = vec![Value::Char('a'), Value::Char('Q'), Value::Char('7')];

        for _ in 0..100 {
            let f = predicate_for(&Type::INT, &int_pool, &mut rng);
            for x in [-3i64, 0, 4, 50] {
                let arg = Value::Int(x);
                let mut it = Interp::new(reg, EvalLimits::default());
                let got = it.call(&f.value, vec![arg.clone()]).unwrap();
                assert_eq!(got, oracle_apply(&f.descriptor, &arg), "{:?}", f.descriptor);
            }

            let f = predicate_for(&Type::STRING, &str_pool, &mut rng);
            for s in ["", "ab", "hello"] {
                let arg = Value::Str(s.into());
                let mut it = Interp::new(reg, EvalLimits::default());
                let got = it.call(&f.value, vec![arg.clone()]).unwrap();
                assert_eq!(got, oracle_apply(&f.descriptor, &arg));
            }

            let f = predicate_for(&Type::CHAR, &char_pool, &mut rng);
            for c in ['a', 'Z', '9', ' '] {
                let arg = Value::Char(c);
                let mut it = Interp::new(reg, EvalLimits::default());
                let got = it.call(&f.value, vec![arg.clone()]).unwrap();
                assert_eq!(got, oracle_apply(&f.descriptor, &arg));
            }

            let f = objective_fn(&mut rng);
            for x in 0..10i64 {
                let arg = Value::Int(x);
                let mut it = Interp::new(reg, EvalLimits::default());
                let got = it.call(&f.value, vec![arg.clone()]).unwrap();
                assert_eq!(got, oracle_apply(&f.descriptor, &arg));
            }

            let f = encryption_fn(&mut rng);
            for c in [' ', 'a', 'Z', '~', '0'] {
                let arg = Value::Char(c);
                let mut it = Interp::new(reg, EvalLimits::default());
                let got = it.call(&f.value, vec![arg.clone()]).unwrap();
                assert_eq!(got, oracle_apply(&f.descriptor, &arg));
            }
        }
    }

    #[test]
    fn encryption_fns_are_printable_bijections() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let f = encryption_fn(&mut rng);
            let mut seen = std::collections::BTreeSet::new();
            for code in 0x20u8..=0x7e {
                let out = oracle_apply(&f.descriptor, &Value::Char(code as char));
                match out {
                    Value::Char(c) => {
                        assert!((' '..='~').contains(&c), "{c:?} not printable");
                        assert!(seen.insert(c), "collision in {:?}", f.descriptor);
                    }
                    _ => unreachable!(),
                }
            }
            assert_eq!(seen.len(), 95);
        }
    }

    #[test]
    fn objective_has_unique_argmax() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..200 {
            let f = objective_fn(&mut rng);
            let x_max = 50;
            let values: Vec<i64> = (0..x_max)
                .map(|x| match oracle_apply(&f.descriptor, &Value::Int(x)) {
                    Value::Int(y) => y,
                    _ => unreachable!(),
                })
                .collect();
            let best = values.iter().max().unwrap();
            assert_eq!(
                values.iter().filter(|v| v == &best).count(),
                1,
                "tied argmax for {:?}",
                f.descriptor
            );
        }
    }
}
