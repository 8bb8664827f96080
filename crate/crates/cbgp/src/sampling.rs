//! Random monomorphic types and random well-typed values, used by the
//! scheme-conformance tests and the problem case generators.

use rand::Rng;

use crate::compiler::Ast;
use crate::interp::{Env, Value};
use crate::typesys::{Ground, Scheme, Subst, Type};

/// A random monomorphic type with nesting bounded by `depth`.
pub fn random_mono_type<R: Rng>(rng: &mut R, depth: usize) -> Type {
    let grounds = Ground::ALL;
    if depth == 0 || rng.random_range(0..3) == 0 {
        return Type::Ground(grounds[rng.random_range(0..grounds.len())]);
    }
    match rng.random_range(0..6) {
        0 => Type::vector(random_mono_type(rng, depth - 1)),
        1 => Type::set(random_mono_type(rng, depth - 1)),
        2 => Type::map(
            random_mono_type(rng, depth - 1),
            random_mono_type(rng, depth - 1),
        ),
        3 => Type::tuple(
            random_mono_type(rng, depth - 1),
            random_mono_type(rng, depth - 1),
        ),
        4 => Type::func(
            vec![random_mono_type(rng, depth - 1)],
            random_mono_type(rng, depth - 1),
        ),
        _ => Type::Ground(grounds[rng.random_range(0..grounds.len())]),
    }
}

/// Binds every quantified variable of a scheme to a random monomorphic
/// type, yielding a monomorphic instance.
pub fn random_instantiation<R: Rng>(scheme: &Scheme, rng: &mut R) -> Type {
    let mut subst = Subst::empty();
    for v in scheme.bound_vars() {
        let t = random_mono_type(rng, 1);
        subst = subst.compose(&Subst::singleton(*v, t).expect("mono binding"));
    }
    subst.apply(scheme.body())
}

/// A random value of a monomorphic type. Function types produce a
/// constant closure returning a random value of the return type.
pub fn random_value_of<R: Rng>(ty: &Type, rng: &mut R) -> Value {
    use crate::typesys::TypeCtor;
    match ty {
        Type::Ground(Ground::Boolean) => Value::Bool(rng.random()),
        Type::Ground(Ground::Int) => Value::Int(rng.random_range(-100..=100)),
        Type::Ground(Ground::Float) => {
            // Quarter-integer grid keeps float arithmetic on generated
            // values exact.
            Value::Float(rng.random_range(-400..=400i32) as f64 / 4.0)
        }
        Type::Ground(Ground::Char) => Value::Char(rng.random_range(0x20u8..=0x7e) as char),
        Type::Ground(Ground::String) => {
            let len = rng.random_range(0..=8);
            Value::Str((0..len).map(|_| rng.random_range(b'a'..=b'z') as char).collect())
        }
        // Unbound variables only appear in adversarial tests; any value
        // satisfies them.
        Type::Var(_) => Value::Int(rng.random_range(-100..=100)),
        Type::Constructed(ctor, args) => match ctor {
            TypeCtor::Vector => {
                let n = rng.random_range(0..=4);
                Value::Vector((0..n).map(|_| random_value_of(&args[0], rng)).collect())
            }
            TypeCtor::Set => {
                let n = rng.random_range(0..=4);
                Value::set_from((0..n).map(|_| random_value_of(&args[0], rng)))
            }
            TypeCtor::Map => {
                let n = rng.random_range(0..=4);
                Value::map_from((0..n).map(|_| {
                    (
                        random_value_of(&args[0], rng),
                        random_value_of(&args[1], rng),
                    )
                }))
            }
            TypeCtor::Tuple => Value::tuple(
                random_value_of(&args[0], rng),
                random_value_of(&args[1], rng),
            ),
            TypeCtor::Fn1 | TypeCtor::Fn2 | TypeCtor::Fn3 => {
                let (params, ret) = ty.as_function().expect("function type");
                let ret_value = random_value_of(ret, rng);
                constant_closure(params, ret, ret_value)
            }
        },
    }
}

/// A closure of the given signature that ignores its arguments and
/// returns a fixed value.
pub fn constant_closure(params: &[Type], ret: &Type, value: Value) -> Value {
    Value::Closure {
        params: params
            .iter()
            .enumerate()
            .map(|(i, t)| (format!("p{i}"), t.clone()))
            .collect(),
        body: std::sync::Arc::new(Ast::Lit {
            value,
            ty: ret.clone(),
        }),
        env: Env::empty(),
    }
}
