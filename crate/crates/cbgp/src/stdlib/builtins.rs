//! The builtin function table.
//!
//! Implementations are total: every partial operation (missing map keys,
//! empty-collection heads, division by zero, integer overflow) reports a
//! `RuntimeFault` instead of raising. `index-of` and friends return a -1
//! sentinel rather than faulting so that searches stay useful to
//! evolution. Collection producers charge their output size against the
//! evaluation limits. There is deliberately no `identity` entry.

use std::cmp::Ordering;

use super::Builder;
use crate::interp::{cmp_values, RuntimeFault, Value};
use crate::typesys::{Scheme, Type};

type R = Result<Value, RuntimeFault>;

fn a() -> Type {
    Type::var(0)
}

fn b() -> Type {
    Type::var(1)
}

fn c() -> Type {
    Type::var(2)
}

fn d() -> Type {
    Type::var(3)
}

fn f1(p: Type, r: Type) -> Type {
    Type::func(vec![p], r)
}

fn f2(p1: Type, p2: Type, r: Type) -> Type {
    Type::func(vec![p1, p2], r)
}

fn f3(p1: Type, p2: Type, p3: Type, r: Type) -> Type {
    Type::func(vec![p1, p2, p3], r)
}

fn sch(params: Vec<Type>, ret: Type) -> Scheme {
    Scheme::close(Type::func(params, ret))
}

fn shape(expected: &str, got: &Value) -> RuntimeFault {
    RuntimeFault::partial(format!("expected {expected}, got {got}"))
}

fn int(v: &Value) -> Result<i64, RuntimeFault> {
    match v {
        Value::Int(i) => Ok(*i),
        other => Err(shape("Int", other)),
    }
}

fn float(v: &Value) -> Result<f64, RuntimeFault> {
    match v {
        Value::Float(x) => Ok(*x),
        other => Err(shape("Float", other)),
    }
}

fn boolean(v: &Value) -> Result<bool, RuntimeFault> {
    match v {
        Value::Bool(x) => Ok(*x),
        other => Err(shape("Boolean", other)),
    }
}

fn chr(v: &Value) -> Result<char, RuntimeFault> {
    match v {
        Value::Char(x) => Ok(*x),
        other => Err(shape("Char", other)),
    }
}

fn string(v: &Value) -> Result<String, RuntimeFault> {
    match v {
        Value::Str(s) => Ok(s.clone()),
        other => Err(shape("String", other)),
    }
}

fn vector(v: &Value) -> Result<Vec<Value>, RuntimeFault> {
    match v {
        Value::Vector(items) => Ok(items.clone()),
        other => Err(shape("Vector", other)),
    }
}

fn set(v: &Value) -> Result<Vec<Value>, RuntimeFault> {
    match v {
        Value::Set(items) => Ok(items.clone()),
        other => Err(shape("Set", other)),
    }
}

fn map_entries(v: &Value) -> Result<Vec<(Value, Value)>, RuntimeFault> {
    match v {
        Value::Map(entries) => Ok(entries.clone()),
        other => Err(shape("Map", other)),
    }
}

fn tuple2(v: &Value) -> Result<(Value, Value), RuntimeFault> {
    match v {
        Value::Tuple(t) => Ok((t.0.clone(), t.1.clone())),
        other => Err(shape("Tuple", other)),
    }
}

fn func(v: &Value) -> Result<Value, RuntimeFault> {
    if v.is_function() {
        Ok(v.clone())
    } else {
        Err(shape("function", v))
    }
}

fn checked(result: Option<i64>, what: &str) -> R {
    result
        .map(Value::Int)
        .ok_or_else(|| RuntimeFault::arithmetic(format!("{what} overflow")))
}

/// Guards float results against NaN (e.g. inf - inf); infinities pass.
fn fin(x: f64, what: &str) -> R {
    if x.is_nan() {
        Err(RuntimeFault::arithmetic(format!("{what} is undefined")))
    } else {
        Ok(Value::Float(x))
    }
}

fn chars_of(s: &str) -> Vec<char> {
    s.chars().collect()
}

fn clamp_index(i: i64, len: usize) -> usize {
    i.clamp(0, len as i64) as usize
}

pub(super) fn install(reg: &mut Builder) {
    install_generic(reg);
    install_vector(reg);
    install_set(reg);
    install_map(reg);
    install_tuple(reg);
    install_int(reg);
    install_float(reg);
    install_boolean(reg);
    install_char(reg);
    install_string(reg);
}

fn install_generic(reg: &mut Builder) {
    reg.add(
        "if",
        sch(vec![Type::BOOLEAN, a(), a()], a()),
        "selects the second or third argument by the condition (both evaluated)",
        |_, args| Ok(if boolean(&args[0])? { args[1].clone() } else { args[2].clone() }),
    );
    reg.add("eq?", sch(vec![a(), a()], Type::BOOLEAN), "structural equality", |_, args| {
        Ok(Value::Bool(args[0] == args[1]))
    });
    reg.add("neq?", sch(vec![a(), a()], Type::BOOLEAN), "structural inequality", |_, args| {
        Ok(Value::Bool(args[0] != args[1]))
    });
    reg.add("lt?", sch(vec![a(), a()], Type::BOOLEAN), "less-than in the value order", |_, args| {
        Ok(Value::Bool(cmp_values(&args[0], &args[1]) == Ordering::Less))
    });
    reg.add("gt?", sch(vec![a(), a()], Type::BOOLEAN), "greater-than in the value order", |_, args| {
        Ok(Value::Bool(cmp_values(&args[0], &args[1]) == Ordering::Greater))
    });
    reg.add("le?", sch(vec![a(), a()], Type::BOOLEAN), "at-most in the value order", |_, args| {
        Ok(Value::Bool(cmp_values(&args[0], &args[1]) != Ordering::Greater))
    });
    reg.add("ge?", sch(vec![a(), a()], Type::BOOLEAN), "at-least in the value order", |_, args| {
        Ok(Value::Bool(cmp_values(&args[0], &args[1]) != Ordering::Less))
    });
    reg.add("max", sch(vec![a(), a()], a()), "larger of two values", |_, args| {
        Ok(if cmp_values(&args[0], &args[1]) == Ordering::Less {
            args[1].clone()
        } else {
            args[0].clone()
        })
    });
    reg.add("min", sch(vec![a(), a()], a()), "smaller of two values", |_, args| {
        Ok(if cmp_values(&args[0], &args[1]) == Ordering::Greater {
            args[1].clone()
        } else {
            args[0].clone()
        })
    });
    reg.add(
        "comp",
        sch(vec![f1(a(), b()), f1(b(), c())], f1(a(), c())),
        "function composition: applies the first function, then the second",
        |_, args| {
            Ok(Value::Composed {
                first: Box::new(func(&args[0])?),
                second: Box::new(func(&args[1])?),
            })
        },
    );
    reg.add(
        "comp3",
        sch(
            vec![f1(a(), b()), f1(b(), c()), f1(c(), d())],
            f1(a(), d()),
        ),
        "three-way composition, applied left to right",
        |_, args| {
            let inner = Value::Composed {
                first: Box::new(func(&args[0])?),
                second: Box::new(func(&args[1])?),
            };
            Ok(Value::Composed {
                first: Box::new(inner),
                second: Box::new(func(&args[2])?),
            })
        },
    );
    reg.add(
        "partial1-of-2",
        sch(vec![f2(a(), b(), c()), a()], f1(b(), c())),
        "binds the first argument of a binary function",
        |_, args| {
            Ok(Value::Partial {
                func: Box::new(func(&args[0])?),
                bound: vec![args[1].clone()],
            })
        },
    );
    reg.add(
        "partial1-of-3",
        sch(vec![f3(a(), b(), c(), d()), a()], f2(b(), c(), d())),
        "binds the first argument of a ternary function",
        |_, args| {
            Ok(Value::Partial {
                func: Box::new(func(&args[0])?),
                bound: vec![args[1].clone()],
            })
        },
    );
    reg.add(
        "partial2-of-3",
        sch(vec![f3(a(), b(), c(), d()), a(), b()], f1(c(), d())),
        "binds the first two arguments of a ternary function",
        |_, args| {
            Ok(Value::Partial {
                func: Box::new(func(&args[0])?),
                bound: vec![args[1].clone(), args[2].clone()],
            })
        },
    );
    reg.add(
        "flip",
        sch(vec![f2(a(), b(), c())], f2(b(), a(), c())),
        "swaps the arguments of a binary function",
        |_, args| {
            Ok(Value::Flipped {
                func: Box::new(func(&args[0])?),
            })
        },
    );
    reg.add(
        "call",
        sch(vec![f1(a(), b()), a()], b()),
        "applies a unary function to an argument",
        |it, args| {
            let f = func(&args[0])?;
            it.call(&f, vec![args[1].clone()])
        },
    );
    reg.add("first-arg", sch(vec![a(), b()], a()), "returns its first argument", |_, args| {
        Ok(args[0].clone())
    });
    reg.add("second-arg", sch(vec![a(), b()], b()), "returns its second argument", |_, args| {
        Ok(args[1].clone())
    });
    reg.add(
        "constantly",
        sch(vec![a()], f1(b(), a())),
        "builds a function that ignores its argument and returns the given value",
        |_, args| {
            Ok(Value::Partial {
                func: Box::new(Value::Native { name: "first-arg".into() }),
                bound: vec![args[0].clone()],
            })
        },
    );
}

fn install_vector(reg: &mut Builder) {
    reg.add(
        "map-vector",
        sch(vec![f1(a(), b()), Type::vector(a())], Type::vector(b())),
        "applies a function to every element",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::with_capacity(items.len());
            for v in items {
                out.push(it.call(&f, vec![v])?);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "filter-vector",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::vector(a())),
        "keeps the elements satisfying a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::new();
            for v in items {
                if boolean(&it.call(&f, vec![v.clone()])?)? {
                    out.push(v);
                }
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "reduce-vector",
        sch(vec![f2(a(), a(), a()), Type::vector(a())], a()),
        "left fold using the first element as the seed; faults on empty",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            let mut iter = items.into_iter();
            let mut acc = iter
                .next()
                .ok_or_else(|| RuntimeFault::partial("reduce of empty vector"))?;
            for v in iter {
                acc = it.call(&f, vec![acc, v])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "fold-vector",
        sch(vec![f2(b(), a(), b()), b(), Type::vector(a())], b()),
        "left fold from an initial accumulator",
        |it, args| {
            let f = func(&args[0])?;
            let mut acc = args[1].clone();
            for v in vector(&args[2])? {
                acc = it.call(&f, vec![acc, v])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "mapcat",
        sch(vec![f1(a(), Type::vector(b())), Type::vector(a())], Type::vector(b())),
        "maps a vector-producing function and concatenates the results",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            let mut out = Vec::new();
            for v in items {
                let piece = vector(&it.call(&f, vec![v])?)?;
                it.charge_collection(piece.len())?;
                if out.len() + piece.len() > 100_000_000 {
                    return Err(RuntimeFault::partial("mapcat result too large"));
                }
                out.extend(piece);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add("vector-length", sch(vec![Type::vector(a())], Type::INT), "element count", |_, args| {
        Ok(Value::Int(vector(&args[0])?.len() as i64))
    });
    reg.add(
        "vector-empty?",
        sch(vec![Type::vector(a())], Type::BOOLEAN),
        "true when the vector has no elements",
        |_, args| Ok(Value::Bool(vector(&args[0])?.is_empty())),
    );
    reg.add("vector-first", sch(vec![Type::vector(a())], a()), "first element; faults on empty", |_, args| {
        vector(&args[0])?
            .first()
            .cloned()
            .ok_or_else(|| RuntimeFault::partial("first of empty vector"))
    });
    reg.add("vector-last", sch(vec![Type::vector(a())], a()), "last element; faults on empty", |_, args| {
        vector(&args[0])?
            .last()
            .cloned()
            .ok_or_else(|| RuntimeFault::partial("last of empty vector"))
    });
    reg.add(
        "vector-rest",
        sch(vec![Type::vector(a())], Type::vector(a())),
        "everything after the first element; empty stays empty",
        |_, args| {
            let items = vector(&args[0])?;
            Ok(Value::Vector(items.into_iter().skip(1).collect()))
        },
    );
    reg.add(
        "vector-butlast",
        sch(vec![Type::vector(a())], Type::vector(a())),
        "everything before the last element; empty stays empty",
        |_, args| {
            let mut items = vector(&args[0])?;
            items.pop();
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "vector-nth",
        sch(vec![Type::vector(a()), Type::INT], a()),
        "element at an index; faults when out of range",
        |_, args| {
            let items = vector(&args[0])?;
            let i = int(&args[1])?;
            usize::try_from(i)
                .ok()
                .and_then(|i| items.get(i).cloned())
                .ok_or_else(|| RuntimeFault::partial(format!("index {i} out of range")))
        },
    );
    reg.add(
        "index-of",
        sch(vec![Type::vector(a()), a()], Type::INT),
        "index of the first occurrence, or -1 when absent",
        |_, args| {
            let items = vector(&args[0])?;
            Ok(Value::Int(
                items
                    .iter()
                    .position(|v| v == &args[1])
                    .map(|i| i as i64)
                    .unwrap_or(-1),
            ))
        },
    );
    reg.add(
        "vector-contains?",
        sch(vec![Type::vector(a()), a()], Type::BOOLEAN),
        "membership test",
        |_, args| Ok(Value::Bool(vector(&args[0])?.contains(&args[1]))),
    );
    reg.add(
        "vector-reverse",
        sch(vec![Type::vector(a())], Type::vector(a())),
        "elements in reverse order",
        |it, args| {
            let mut items = vector(&args[0])?;
            it.charge_collection(items.len())?;
            items.reverse();
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "vector-sort",
        sch(vec![Type::vector(a())], Type::vector(a())),
        "ascending sort in the value order",
        |it, args| {
            let mut items = vector(&args[0])?;
            it.charge_collection(items.len())?;
            items.sort_by(cmp_values);
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "sort-by",
        sch(vec![f1(a(), b()), Type::vector(a())], Type::vector(a())),
        "stable ascending sort by a key function",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut keyed = Vec::with_capacity(items.len());
            for v in items {
                let key = it.call(&f, vec![v.clone()])?;
                keyed.push((key, v));
            }
            keyed.sort_by(|x, y| cmp_values(&x.0, &y.0));
            Ok(Value::Vector(keyed.into_iter().map(|(_, v)| v).collect()))
        },
    );
    reg.add(
        "vector-concat",
        sch(vec![Type::vector(a()), Type::vector(a())], Type::vector(a())),
        "concatenation",
        |it, args| {
            let mut x = vector(&args[0])?;
            let y = vector(&args[1])?;
            it.charge_collection(x.len() + y.len())?;
            x.extend(y);
            Ok(Value::Vector(x))
        },
    );
    reg.add(
        "vector-append",
        sch(vec![Type::vector(a()), a()], Type::vector(a())),
        "adds an element at the end",
        |_, args| {
            let mut items = vector(&args[0])?;
            items.push(args[1].clone());
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "vector-prepend",
        sch(vec![a(), Type::vector(a())], Type::vector(a())),
        "adds an element at the front",
        |_, args| {
            let mut items = vec![args[0].clone()];
            items.extend(vector(&args[1])?);
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "vector-take",
        sch(vec![Type::INT, Type::vector(a())], Type::vector(a())),
        "first n elements (clamped)",
        |_, args| {
            let n = int(&args[0])?;
            let items = vector(&args[1])?;
            let n = clamp_index(n, items.len());
            Ok(Value::Vector(items.into_iter().take(n).collect()))
        },
    );
    reg.add(
        "vector-drop",
        sch(vec![Type::INT, Type::vector(a())], Type::vector(a())),
        "everything after the first n elements (clamped)",
        |_, args| {
            let n = int(&args[0])?;
            let items = vector(&args[1])?;
            let n = clamp_index(n, items.len());
            Ok(Value::Vector(items.into_iter().skip(n).collect()))
        },
    );
    reg.add(
        "vector-distinct",
        sch(vec![Type::vector(a())], Type::vector(a())),
        "removes duplicates, keeping first occurrences",
        |it, args| {
            let items = vector(&args[0])?;
            it.charge_collection(items.len())?;
            let mut out: Vec<Value> = Vec::new();
            for v in items {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add("vector-of-1", sch(vec![a()], Type::vector(a())), "one-element vector", |_, args| {
        Ok(Value::Vector(vec![args[0].clone()]))
    });
    reg.add(
        "vector-of-2",
        sch(vec![a(), a()], Type::vector(a())),
        "two-element vector",
        |_, args| Ok(Value::Vector(vec![args[0].clone(), args[1].clone()])),
    );
    reg.add(
        "vector-repeat",
        sch(vec![Type::INT, a()], Type::vector(a())),
        "n copies of a value",
        |it, args| {
            let n = int(&args[0])?.max(0) as usize;
            it.charge_collection(n)?;
            Ok(Value::Vector(vec![args[1].clone(); n]))
        },
    );
    reg.add(
        "zip",
        sch(
            vec![Type::vector(a()), Type::vector(b())],
            Type::vector(Type::tuple(a(), b())),
        ),
        "pairs elements positionally, stopping at the shorter vector",
        |it, args| {
            let x = vector(&args[0])?;
            let y = vector(&args[1])?;
            it.charge_collection(x.len().min(y.len()))?;
            Ok(Value::Vector(
                x.into_iter()
                    .zip(y)
                    .map(|(p, q)| Value::tuple(p, q))
                    .collect(),
            ))
        },
    );
    reg.add("vector-max", sch(vec![Type::vector(a())], a()), "largest element; faults on empty", |_, args| {
        vector(&args[0])?
            .into_iter()
            .max_by(|x, y| cmp_values(x, y))
            .ok_or_else(|| RuntimeFault::partial("max of empty vector"))
    });
    reg.add("vector-min", sch(vec![Type::vector(a())], a()), "smallest element; faults on empty", |_, args| {
        vector(&args[0])?
            .into_iter()
            .min_by(|x, y| cmp_values(x, y))
            .ok_or_else(|| RuntimeFault::partial("min of empty vector"))
    });
    reg.add(
        "vector-set-nth",
        sch(vec![Type::vector(a()), Type::INT, a()], Type::vector(a())),
        "replaces the element at an index; faults when out of range",
        |_, args| {
            let mut items = vector(&args[0])?;
            let i = int(&args[1])?;
            let idx = usize::try_from(i)
                .ok()
                .filter(|i| *i < items.len())
                .ok_or_else(|| RuntimeFault::partial(format!("index {i} out of range")))?;
            items[idx] = args[2].clone();
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "take-while",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::vector(a())),
        "longest prefix satisfying a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::new();
            for v in items {
                if !boolean(&it.call(&f, vec![v.clone()])?)? {
                    break;
                }
                out.push(v);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "drop-while",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::vector(a())),
        "everything after the longest satisfying prefix",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut keep = false;
            let mut out = Vec::new();
            for v in items {
                if !keep && !boolean(&it.call(&f, vec![v.clone()])?)? {
                    keep = true;
                }
                if keep {
                    out.push(v);
                }
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "vector-any?",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::BOOLEAN),
        "true when some element satisfies the predicate",
        |it, args| {
            let f = func(&args[0])?;
            for v in vector(&args[1])? {
                if boolean(&it.call(&f, vec![v])?)? {
                    return Ok(Value::Bool(true));
                }
            }
            Ok(Value::Bool(false))
        },
    );
    reg.add(
        "vector-all?",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::BOOLEAN),
        "true when every element satisfies the predicate",
        |it, args| {
            let f = func(&args[0])?;
            for v in vector(&args[1])? {
                if !boolean(&it.call(&f, vec![v])?)? {
                    return Ok(Value::Bool(false));
                }
            }
            Ok(Value::Bool(true))
        },
    );
    reg.add(
        "remove-vector",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], Type::vector(a())),
        "drops the elements satisfying a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::new();
            for v in items {
                if !boolean(&it.call(&f, vec![v.clone()])?)? {
                    out.push(v);
                }
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "vector-find-first",
        sch(vec![f1(a(), Type::BOOLEAN), Type::vector(a())], a()),
        "first element satisfying a predicate; faults when none does",
        |it, args| {
            let f = func(&args[0])?;
            for v in vector(&args[1])? {
                if boolean(&it.call(&f, vec![v.clone()])?)? {
                    return Ok(v);
                }
            }
            Err(RuntimeFault::partial("no element satisfies the predicate"))
        },
    );
    reg.add(
        "vector-interleave",
        sch(vec![Type::vector(a()), Type::vector(a())], Type::vector(a())),
        "alternates elements, stopping at the shorter vector",
        |it, args| {
            let x = vector(&args[0])?;
            let y = vector(&args[1])?;
            let n = x.len().min(y.len());
            it.charge_collection(n * 2)?;
            let mut out = Vec::with_capacity(n * 2);
            for (p, q) in x.into_iter().zip(y) {
                out.push(p);
                out.push(q);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "map2",
        sch(
            vec![f2(a(), b(), c()), Type::vector(a()), Type::vector(b())],
            Type::vector(c()),
        ),
        "applies a binary function positionally, stopping at the shorter vector",
        |it, args| {
            let f = func(&args[0])?;
            let x = vector(&args[1])?;
            let y = vector(&args[2])?;
            it.charge_collection(x.len().min(y.len()))?;
            let mut out = Vec::with_capacity(x.len().min(y.len()));
            for (p, q) in x.into_iter().zip(y) {
                out.push(it.call(&f, vec![p, q])?);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "vector-rotate",
        sch(vec![Type::INT, Type::vector(a())], Type::vector(a())),
        "rotates left by n (wrapping); empty stays empty",
        |_, args| {
            let n = int(&args[0])?;
            let mut items = vector(&args[1])?;
            if !items.is_empty() {
                let k = n.rem_euclid(items.len() as i64) as usize;
                items.rotate_left(k);
            }
            Ok(Value::Vector(items))
        },
    );
}

fn install_set(reg: &mut Builder) {
    reg.add(
        "map-set",
        sch(vec![f1(a(), b()), Type::set(a())], Type::set(b())),
        "applies a function to every member",
        |it, args| {
            let f = func(&args[0])?;
            let items = set(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::with_capacity(items.len());
            for v in items {
                out.push(it.call(&f, vec![v])?);
            }
            Ok(Value::set_from(out))
        },
    );
    reg.add(
        "filter-set",
        sch(vec![f1(a(), Type::BOOLEAN), Type::set(a())], Type::set(a())),
        "keeps the members satisfying a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let items = set(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::new();
            for v in items {
                if boolean(&it.call(&f, vec![v.clone()])?)? {
                    out.push(v);
                }
            }
            Ok(Value::Set(out))
        },
    );
    reg.add(
        "reduce-set",
        sch(vec![f2(a(), a(), a()), Type::set(a())], a()),
        "fold over members in the value order; faults on empty",
        |it, args| {
            let f = func(&args[0])?;
            let mut iter = set(&args[1])?.into_iter();
            let mut acc = iter
                .next()
                .ok_or_else(|| RuntimeFault::partial("reduce of empty set"))?;
            for v in iter {
                acc = it.call(&f, vec![acc, v])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "fold-set",
        sch(vec![f2(b(), a(), b()), b(), Type::set(a())], b()),
        "fold over members in the value order from an initial accumulator",
        |it, args| {
            let f = func(&args[0])?;
            let mut acc = args[1].clone();
            for v in set(&args[2])? {
                acc = it.call(&f, vec![acc, v])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "set-union",
        sch(vec![Type::set(a()), Type::set(a())], Type::set(a())),
        "members of either set",
        |it, args| {
            let mut x = set(&args[0])?;
            let y = set(&args[1])?;
            it.charge_collection(x.len() + y.len())?;
            x.extend(y);
            Ok(Value::set_from(x))
        },
    );
    reg.add(
        "set-intersection",
        sch(vec![Type::set(a()), Type::set(a())], Type::set(a())),
        "members of both sets",
        |it, args| {
            let x = set(&args[0])?;
            let y = set(&args[1])?;
            it.charge_collection(x.len())?;
            Ok(Value::Set(x.into_iter().filter(|v| y.contains(v)).collect()))
        },
    );
    reg.add(
        "set-difference",
        sch(vec![Type::set(a()), Type::set(a())], Type::set(a())),
        "members of the first set absent from the second",
        |it, args| {
            let x = set(&args[0])?;
            let y = set(&args[1])?;
            it.charge_collection(x.len())?;
            Ok(Value::Set(x.into_iter().filter(|v| !y.contains(v)).collect()))
        },
    );
    reg.add(
        "set-contains?",
        sch(vec![Type::set(a()), a()], Type::BOOLEAN),
        "membership test",
        |_, args| Ok(Value::Bool(set(&args[0])?.contains(&args[1]))),
    );
    reg.add("set-insert", sch(vec![Type::set(a()), a()], Type::set(a())), "adds a member", |_, args| {
        let mut items = set(&args[0])?;
        items.push(args[1].clone());
        Ok(Value::set_from(items))
    });
    reg.add("set-remove", sch(vec![Type::set(a()), a()], Type::set(a())), "removes a member", |_, args| {
        let items = set(&args[0])?;
        Ok(Value::Set(items.into_iter().filter(|v| v != &args[1]).collect()))
    });
    reg.add("set-size", sch(vec![Type::set(a())], Type::INT), "member count", |_, args| {
        Ok(Value::Int(set(&args[0])?.len() as i64))
    });
    reg.add(
        "set-empty?",
        sch(vec![Type::set(a())], Type::BOOLEAN),
        "true when the set has no members",
        |_, args| Ok(Value::Bool(set(&args[0])?.is_empty())),
    );
    reg.add(
        "set-subset?",
        sch(vec![Type::set(a()), Type::set(a())], Type::BOOLEAN),
        "true when every member of the first set is in the second",
        |_, args| {
            let x = set(&args[0])?;
            let y = set(&args[1])?;
            Ok(Value::Bool(x.iter().all(|v| y.contains(v))))
        },
    );
    reg.add(
        "set-to-vector",
        sch(vec![Type::set(a())], Type::vector(a())),
        "members as a vector in the value order",
        |it, args| {
            let items = set(&args[0])?;
            it.charge_collection(items.len())?;
            Ok(Value::Vector(items))
        },
    );
    reg.add(
        "vector-to-set",
        sch(vec![Type::vector(a())], Type::set(a())),
        "vector elements as a set",
        |it, args| {
            let items = vector(&args[0])?;
            it.charge_collection(items.len())?;
            Ok(Value::set_from(items))
        },
    );
    reg.add("set-of-1", sch(vec![a()], Type::set(a())), "one-member set", |_, args| {
        Ok(Value::set_from(vec![args[0].clone()]))
    });
    reg.add(
        "remove-set",
        sch(vec![f1(a(), Type::BOOLEAN), Type::set(a())], Type::set(a())),
        "drops the members satisfying a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let items = set(&args[1])?;
            it.charge_collection(items.len())?;
            let mut out = Vec::new();
            for v in items {
                if !boolean(&it.call(&f, vec![v.clone()])?)? {
                    out.push(v);
                }
            }
            Ok(Value::Set(out))
        },
    );
    reg.add(
        "set-disjoint?",
        sch(vec![Type::set(a()), Type::set(a())], Type::BOOLEAN),
        "true when the sets share no members",
        |_, args| {
            let x = set(&args[0])?;
            let y = set(&args[1])?;
            Ok(Value::Bool(x.iter().all(|v| !y.contains(v))))
        },
    );
}

fn install_map(reg: &mut Builder) {
    reg.add(
        "map-get",
        sch(vec![Type::map(a(), b()), a()], b()),
        "value under a key; faults when the key is absent",
        |_, args| {
            let entries = map_entries(&args[0])?;
            entries
                .into_iter()
                .find(|(k, _)| k == &args[1])
                .map(|(_, v)| v)
                .ok_or_else(|| RuntimeFault::partial(format!("key {} absent", args[1])))
        },
    );
    reg.add(
        "map-get-or-default",
        sch(vec![Type::map(a(), b()), a(), b()], b()),
        "value under a key, or the default when absent",
        |_, args| {
            let entries = map_entries(&args[0])?;
            Ok(entries
                .into_iter()
                .find(|(k, _)| k == &args[1])
                .map(|(_, v)| v)
                .unwrap_or_else(|| args[2].clone()))
        },
    );
    reg.add(
        "map-contains-key?",
        sch(vec![Type::map(a(), b()), a()], Type::BOOLEAN),
        "key membership test",
        |_, args| {
            let entries = map_entries(&args[0])?;
            Ok(Value::Bool(entries.iter().any(|(k, _)| k == &args[1])))
        },
    );
    reg.add(
        "map-contains-val?",
        sch(vec![Type::map(a(), b()), b()], Type::BOOLEAN),
        "value membership test",
        |_, args| {
            let entries = map_entries(&args[0])?;
            Ok(Value::Bool(entries.iter().any(|(_, v)| v == &args[1])))
        },
    );
    reg.add(
        "map-keys",
        sch(vec![Type::map(a(), b())], Type::vector(a())),
        "keys in the value order",
        |it, args| {
            let entries = map_entries(&args[0])?;
            it.charge_collection(entries.len())?;
            Ok(Value::Vector(entries.into_iter().map(|(k, _)| k).collect()))
        },
    );
    reg.add(
        "map-vals",
        sch(vec![Type::map(a(), b())], Type::vector(b())),
        "values in key order",
        |it, args| {
            let entries = map_entries(&args[0])?;
            it.charge_collection(entries.len())?;
            Ok(Value::Vector(entries.into_iter().map(|(_, v)| v).collect()))
        },
    );
    reg.add(
        "map-assoc",
        sch(vec![Type::map(a(), b()), a(), b()], Type::map(a(), b())),
        "adds or replaces an entry",
        |_, args| {
            let mut entries = map_entries(&args[0])?;
            entries.push((args[1].clone(), args[2].clone()));
            Ok(Value::map_from(entries))
        },
    );
    reg.add(
        "map-dissoc",
        sch(vec![Type::map(a(), b()), a()], Type::map(a(), b())),
        "removes an entry by key",
        |_, args| {
            let entries = map_entries(&args[0])?;
            Ok(Value::Map(
                entries.into_iter().filter(|(k, _)| k != &args[1]).collect(),
            ))
        },
    );
    reg.add("map-size", sch(vec![Type::map(a(), b())], Type::INT), "entry count", |_, args| {
        Ok(Value::Int(map_entries(&args[0])?.len() as i64))
    });
    reg.add(
        "map-empty?",
        sch(vec![Type::map(a(), b())], Type::BOOLEAN),
        "true when the map has no entries",
        |_, args| Ok(Value::Bool(map_entries(&args[0])?.is_empty())),
    );
    reg.add(
        "map-to-vector",
        sch(vec![Type::map(a(), b())], Type::vector(Type::tuple(a(), b()))),
        "entries as key-value tuples in key order",
        |it, args| {
            let entries = map_entries(&args[0])?;
            it.charge_collection(entries.len())?;
            Ok(Value::Vector(
                entries.into_iter().map(|(k, v)| Value::tuple(k, v)).collect(),
            ))
        },
    );
    reg.add(
        "vector-to-map",
        sch(vec![Type::vector(Type::tuple(a(), b()))], Type::map(a(), b())),
        "key-value tuples as a map; later duplicates win",
        |it, args| {
            let items = vector(&args[0])?;
            it.charge_collection(items.len())?;
            let mut entries = Vec::with_capacity(items.len());
            for item in items {
                let (k, v) = tuple2(&item)?;
                entries.push((k, v));
            }
            Ok(Value::map_from(entries))
        },
    );
    reg.add(
        "group-by",
        sch(
            vec![f1(a(), b()), Type::vector(a())],
            Type::map(b(), Type::vector(a())),
        ),
        "groups elements by a key function, preserving element order",
        |it, args| {
            let f = func(&args[0])?;
            let items = vector(&args[1])?;
            it.charge_collection(items.len())?;
            let mut groups: Vec<(Value, Vec<Value>)> = Vec::new();
            for v in items {
                let key = it.call(&f, vec![v.clone()])?;
                match groups.iter_mut().find(|(k, _)| k == &key) {
                    Some((_, members)) => members.push(v),
                    None => groups.push((key, vec![v])),
                }
            }
            Ok(Value::map_from(
                groups.into_iter().map(|(k, vs)| (k, Value::Vector(vs))),
            ))
        },
    );
    reg.add(
        "zipmap",
        sch(vec![Type::vector(a()), Type::vector(b())], Type::map(a(), b())),
        "map from positional key and value vectors; later duplicates win",
        |it, args| {
            let keys = vector(&args[0])?;
            let vals = vector(&args[1])?;
            it.charge_collection(keys.len().min(vals.len()))?;
            Ok(Value::map_from(keys.into_iter().zip(vals)))
        },
    );
    reg.add(
        "map-merge",
        sch(
            vec![Type::map(a(), b()), Type::map(a(), b())],
            Type::map(a(), b()),
        ),
        "merges two maps; entries of the second win",
        |it, args| {
            let mut entries = map_entries(&args[0])?;
            let other = map_entries(&args[1])?;
            it.charge_collection(entries.len() + other.len())?;
            entries.extend(other);
            Ok(Value::map_from(entries))
        },
    );
    reg.add(
        "map-invert",
        sch(vec![Type::map(a(), b())], Type::map(b(), a())),
        "swaps keys and values; duplicate values collapse",
        |it, args| {
            let entries = map_entries(&args[0])?;
            it.charge_collection(entries.len())?;
            Ok(Value::map_from(entries.into_iter().map(|(k, v)| (v, k))))
        },
    );
    reg.add(
        "map-update",
        sch(
            vec![Type::map(a(), b()), a(), f1(b(), b())],
            Type::map(a(), b()),
        ),
        "applies a function to the value under a key; faults when absent",
        |it, args| {
            let entries = map_entries(&args[0])?;
            let f = func(&args[2])?;
            let mut out = Vec::with_capacity(entries.len());
            let mut found = false;
            for (k, v) in entries {
                if k == args[1] {
                    found = true;
                    let updated = it.call(&f, vec![v])?;
                    out.push((k, updated));
                } else {
                    out.push((k, v));
                }
            }
            if !found {
                return Err(RuntimeFault::partial(format!("key {} absent", args[1])));
            }
            Ok(Value::map_from(out))
        },
    );
    reg.add(
        "map-map",
        sch(
            vec![f1(Type::tuple(a(), b()), c()), Type::map(a(), b())],
            Type::vector(c()),
        ),
        "applies a function to every entry tuple, yielding a vector",
        |it, args| {
            let f = func(&args[0])?;
            let entries = map_entries(&args[1])?;
            it.charge_collection(entries.len())?;
            let mut out = Vec::with_capacity(entries.len());
            for (k, v) in entries {
                out.push(it.call(&f, vec![Value::tuple(k, v)])?);
            }
            Ok(Value::Vector(out))
        },
    );
    reg.add(
        "filter-map",
        sch(
            vec![f1(Type::tuple(a(), b()), Type::BOOLEAN), Type::map(a(), b())],
            Type::map(a(), b()),
        ),
        "keeps the entries whose tuple satisfies a predicate",
        |it, args| {
            let f = func(&args[0])?;
            let entries = map_entries(&args[1])?;
            it.charge_collection(entries.len())?;
            let mut out = Vec::new();
            for (k, v) in entries {
                if boolean(&it.call(&f, vec![Value::tuple(k.clone(), v.clone())])?)? {
                    out.push((k, v));
                }
            }
            Ok(Value::Map(out))
        },
    );
    reg.add(
        "reduce-map",
        sch(
            vec![
                f2(
                    Type::tuple(a(), b()),
                    Type::tuple(a(), b()),
                    Type::tuple(a(), b()),
                ),
                Type::map(a(), b()),
            ],
            Type::tuple(a(), b()),
        ),
        "fold over entry tuples in key order; faults on empty",
        |it, args| {
            let f = func(&args[0])?;
            let mut iter = map_entries(&args[1])?.into_iter();
            let mut acc = iter
                .next()
                .map(|(k, v)| Value::tuple(k, v))
                .ok_or_else(|| RuntimeFault::partial("reduce of empty map"))?;
            for (k, v) in iter {
                acc = it.call(&f, vec![acc, Value::tuple(k, v)])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "fold-map",
        sch(
            vec![f2(c(), Type::tuple(a(), b()), c()), c(), Type::map(a(), b())],
            c(),
        ),
        "fold over entry tuples in key order from an initial accumulator",
        |it, args| {
            let f = func(&args[0])?;
            let mut acc = args[1].clone();
            for (k, v) in map_entries(&args[2])? {
                acc = it.call(&f, vec![acc, Value::tuple(k, v)])?;
            }
            Ok(acc)
        },
    );
    reg.add(
        "map-keys-set",
        sch(vec![Type::map(a(), b())], Type::set(a())),
        "keys as a set",
        |it, args| {
            let entries = map_entries(&args[0])?;
            it.charge_collection(entries.len())?;
            Ok(Value::Set(entries.into_iter().map(|(k, _)| k).collect()))
        },
    );
}

fn install_tuple(reg: &mut Builder) {
    reg.add("tuple", sch(vec![a(), b()], Type::tuple(a(), b())), "pairs two values", |_, args| {
        Ok(Value::tuple(args[0].clone(), args[1].clone()))
    });
    reg.add("tuple-first", sch(vec![Type::tuple(a(), b())], a()), "first component", |_, args| {
        Ok(tuple2(&args[0])?.0)
    });
    reg.add("tuple-second", sch(vec![Type::tuple(a(), b())], b()), "second component", |_, args| {
        Ok(tuple2(&args[0])?.1)
    });
    reg.add(
        "tuple-swap",
        sch(vec![Type::tuple(a(), b())], Type::tuple(b(), a())),
        "swaps the components",
        |_, args| {
            let (x, y) = tuple2(&args[0])?;
            Ok(Value::tuple(y, x))
        },
    );
    reg.add(
        "tuple-map-first",
        sch(vec![f1(a(), c()), Type::tuple(a(), b())], Type::tuple(c(), b())),
        "applies a function to the first component",
        |it, args| {
            let f = func(&args[0])?;
            let (x, y) = tuple2(&args[1])?;
            Ok(Value::tuple(it.call(&f, vec![x])?, y))
        },
    );
    reg.add(
        "tuple-map-second",
        sch(vec![f1(b(), c()), Type::tuple(a(), b())], Type::tuple(a(), c())),
        "applies a function to the second component",
        |it, args| {
            let f = func(&args[0])?;
            let (x, y) = tuple2(&args[1])?;
            Ok(Value::tuple(x, it.call(&f, vec![y])?))
        },
    );
    reg.add("tuple-dup", sch(vec![a()], Type::tuple(a(), a())), "pairs a value with itself", |_, args| {
        Ok(Value::tuple(args[0].clone(), args[0].clone()))
    });
}

fn install_int(reg: &mut Builder) {
    let ii_i = || sch(vec![Type::INT, Type::INT], Type::INT);
    let ii_b = || sch(vec![Type::INT, Type::INT], Type::BOOLEAN);
    reg.add("int-add", ii_i(), "addition; overflow faults", |_, args| {
        checked(int(&args[0])?.checked_add(int(&args[1])?), "int-add")
    });
    reg.add("int-sub", ii_i(), "subtraction; overflow faults", |_, args| {
        checked(int(&args[0])?.checked_sub(int(&args[1])?), "int-sub")
    });
    reg.add("int-mult", ii_i(), "multiplication; overflow faults", |_, args| {
        checked(int(&args[0])?.checked_mul(int(&args[1])?), "int-mult")
    });
    reg.add("int-div", ii_i(), "truncating division; zero divisor faults", |_, args| {
        let y = int(&args[1])?;
        if y == 0 {
            return Err(RuntimeFault::arithmetic("division by zero"));
        }
        checked(int(&args[0])?.checked_div(y), "int-div")
    });
    reg.add("int-mod", ii_i(), "floored modulus; zero divisor faults", |_, args| {
        let y = int(&args[1])?;
        if y == 0 {
            return Err(RuntimeFault::arithmetic("modulo by zero"));
        }
        checked(int(&args[0])?.checked_rem_euclid(y), "int-mod")
    });
    reg.add("int-inc", sch(vec![Type::INT], Type::INT), "adds one", |_, args| {
        checked(int(&args[0])?.checked_add(1), "int-inc")
    });
    reg.add("int-dec", sch(vec![Type::INT], Type::INT), "subtracts one", |_, args| {
        checked(int(&args[0])?.checked_sub(1), "int-dec")
    });
    reg.add("int-neg", sch(vec![Type::INT], Type::INT), "negation", |_, args| {
        checked(int(&args[0])?.checked_neg(), "int-neg")
    });
    reg.add("int-abs", sch(vec![Type::INT], Type::INT), "absolute value", |_, args| {
        checked(int(&args[0])?.checked_abs(), "int-abs")
    });
    reg.add("int-max", ii_i(), "larger of two integers", |_, args| {
        Ok(Value::Int(int(&args[0])?.max(int(&args[1])?)))
    });
    reg.add("int-lt?", ii_b(), "less-than", |_, args| {
        Ok(Value::Bool(int(&args[0])? < int(&args[1])?))
    });
    reg.add("int-gt?", ii_b(), "greater-than", |_, args| {
        Ok(Value::Bool(int(&args[0])? > int(&args[1])?))
    });
    reg.add("zero-int?", sch(vec![Type::INT], Type::BOOLEAN), "equal to zero", |_, args| {
        Ok(Value::Bool(int(&args[0])? == 0))
    });
    reg.add("int-even?", sch(vec![Type::INT], Type::BOOLEAN), "divisible by two", |_, args| {
        Ok(Value::Bool(int(&args[0])? % 2 == 0))
    });
    reg.add("int-square", sch(vec![Type::INT], Type::INT), "self-multiplication; overflow faults", |_, args| {
        let x = int(&args[0])?;
        checked(x.checked_mul(x), "int-square")
    });
    reg.add(
        "range",
        sch(vec![Type::INT], Type::vector(Type::INT)),
        "integers from 0 below n; size-limited",
        |it, args| {
            let n = int(&args[0])?.max(0);
            let n = usize::try_from(n).unwrap_or(usize::MAX);
            it.charge_collection(n)?;
            Ok(Value::Vector((0..n as i64).map(Value::Int).collect()))
        },
    );
    reg.add("int-to-float", sch(vec![Type::INT], Type::FLOAT), "exact conversion", |_, args| {
        Ok(Value::Float(int(&args[0])? as f64))
    });
    reg.add(
        "float-to-int",
        sch(vec![Type::FLOAT], Type::INT),
        "truncation toward zero; non-finite or out-of-range faults",
        |_, args| {
            let x = float(&args[0])?;
            if !x.is_finite() || x < i64::MIN as f64 || x > i64::MAX as f64 {
                return Err(RuntimeFault::arithmetic("float out of int range"));
            }
            Ok(Value::Int(x.trunc() as i64))
        },
    );
    reg.add("int-to-string", sch(vec![Type::INT], Type::STRING), "decimal rendering", |_, args| {
        Ok(Value::Str(int(&args[0])?.to_string()))
    });
    reg.add(
        "int-to-char",
        sch(vec![Type::INT], Type::CHAR),
        "code point to character; invalid code points fault",
        |_, args| {
            let i = int(&args[0])?;
            u32::try_from(i)
                .ok()
                .and_then(char::from_u32)
                .map(Value::Char)
                .ok_or_else(|| RuntimeFault::partial(format!("{i} is not a code point")))
        },
    );
    reg.add("char-to-int", sch(vec![Type::CHAR], Type::INT), "character code point", |_, args| {
        Ok(Value::Int(chr(&args[0])? as i64))
    });
}

fn install_float(reg: &mut Builder) {
    let ff_f = || sch(vec![Type::FLOAT, Type::FLOAT], Type::FLOAT);
    let ff_b = || sch(vec![Type::FLOAT, Type::FLOAT], Type::BOOLEAN);
    reg.add("float-add", ff_f(), "addition", |_, args| {
        fin(float(&args[0])? + float(&args[1])?, "float-add")
    });
    reg.add("float-sub", ff_f(), "subtraction", |_, args| {
        fin(float(&args[0])? - float(&args[1])?, "float-sub")
    });
    reg.add("float-mult", ff_f(), "multiplication", |_, args| {
        fin(float(&args[0])? * float(&args[1])?, "float-mult")
    });
    reg.add("float-div", ff_f(), "division; zero divisor faults", |_, args| {
        let y = float(&args[1])?;
        if y == 0.0 {
            return Err(RuntimeFault::arithmetic("division by zero"));
        }
        fin(float(&args[0])? / y, "float-div")
    });
    reg.add("float-neg", sch(vec![Type::FLOAT], Type::FLOAT), "negation", |_, args| {
        Ok(Value::Float(-float(&args[0])?))
    });
    reg.add("float-abs", sch(vec![Type::FLOAT], Type::FLOAT), "absolute value", |_, args| {
        Ok(Value::Float(float(&args[0])?.abs()))
    });
    reg.add("float-max", ff_f(), "larger of two floats", |_, args| {
        Ok(Value::Float(float(&args[0])?.max(float(&args[1])?)))
    });
    reg.add("float-lt?", ff_b(), "less-than", |_, args| {
        Ok(Value::Bool(float(&args[0])? < float(&args[1])?))
    });
    reg.add("float-gt?", ff_b(), "greater-than", |_, args| {
        Ok(Value::Bool(float(&args[0])? > float(&args[1])?))
    });
    reg.add("zero-float?", sch(vec![Type::FLOAT], Type::BOOLEAN), "equal to zero", |_, args| {
        Ok(Value::Bool(float(&args[0])? == 0.0))
    });
    reg.add("float-sqrt", sch(vec![Type::FLOAT], Type::FLOAT), "square root; negative faults", |_, args| {
        let x = float(&args[0])?;
        if x < 0.0 {
            return Err(RuntimeFault::arithmetic("sqrt of negative"));
        }
        Ok(Value::Float(x.sqrt()))
    });
    reg.add("sin", sch(vec![Type::FLOAT], Type::FLOAT), "sine; non-finite input faults", |_, args| {
        fin(float(&args[0])?.sin(), "sin")
    });
    reg.add("cos", sch(vec![Type::FLOAT], Type::FLOAT), "cosine; non-finite input faults", |_, args| {
        fin(float(&args[0])?.cos(), "cos")
    });
    reg.add("float-floor", sch(vec![Type::FLOAT], Type::FLOAT), "rounds toward negative infinity", |_, args| {
        Ok(Value::Float(float(&args[0])?.floor()))
    });
    reg.add("float-to-string", sch(vec![Type::FLOAT], Type::STRING), "decimal rendering", |_, args| {
        Ok(Value::Str(format!("{:?}", float(&args[0])?)))
    });
}

fn install_boolean(reg: &mut Builder) {
    let bb_b = || sch(vec![Type::BOOLEAN, Type::BOOLEAN], Type::BOOLEAN);
    reg.add("and", bb_b(), "logical conjunction", |_, args| {
        Ok(Value::Bool(boolean(&args[0])? && boolean(&args[1])?))
    });
    reg.add("or", bb_b(), "logical disjunction", |_, args| {
        Ok(Value::Bool(boolean(&args[0])? || boolean(&args[1])?))
    });
    reg.add("not", sch(vec![Type::BOOLEAN], Type::BOOLEAN), "logical negation", |_, args| {
        Ok(Value::Bool(!boolean(&args[0])?))
    });
    reg.add("xor", bb_b(), "exclusive disjunction", |_, args| {
        Ok(Value::Bool(boolean(&args[0])? != boolean(&args[1])?))
    });
    reg.add("bool-to-string", sch(vec![Type::BOOLEAN], Type::STRING), "\"true\" or \"false\"", |_, args| {
        Ok(Value::Str(boolean(&args[0])?.to_string()))
    });
}

fn install_char(reg: &mut Builder) {
    reg.add("char-upcase", sch(vec![Type::CHAR], Type::CHAR), "ASCII uppercase", |_, args| {
        Ok(Value::Char(chr(&args[0])?.to_ascii_uppercase()))
    });
    reg.add("char-downcase", sch(vec![Type::CHAR], Type::CHAR), "ASCII lowercase", |_, args| {
        Ok(Value::Char(chr(&args[0])?.to_ascii_lowercase()))
    });
    reg.add("char-swap-case", sch(vec![Type::CHAR], Type::CHAR), "swaps ASCII case", |_, args| {
        let ch = chr(&args[0])?;
        Ok(Value::Char(if ch.is_ascii_uppercase() {
            ch.to_ascii_lowercase()
        } else if ch.is_ascii_lowercase() {
            ch.to_ascii_uppercase()
        } else {
            ch
        }))
    });
    reg.add("digit?", sch(vec![Type::CHAR], Type::BOOLEAN), "ASCII digit test", |_, args| {
        Ok(Value::Bool(chr(&args[0])?.is_ascii_digit()))
    });
    reg.add("char-alpha?", sch(vec![Type::CHAR], Type::BOOLEAN), "ASCII letter test", |_, args| {
        Ok(Value::Bool(chr(&args[0])?.is_ascii_alphabetic()))
    });
    reg.add("char-upper?", sch(vec![Type::CHAR], Type::BOOLEAN), "ASCII uppercase test", |_, args| {
        Ok(Value::Bool(chr(&args[0])?.is_ascii_uppercase()))
    });
    reg.add("char-to-string", sch(vec![Type::CHAR], Type::STRING), "one-character string", |_, args| {
        Ok(Value::Str(chr(&args[0])?.to_string()))
    });
    reg.add("char-in?", sch(vec![Type::CHAR, Type::STRING], Type::BOOLEAN), "character occurs in string", |_, args| {
        let ch = chr(&args[0])?;
        Ok(Value::Bool(string(&args[1])?.contains(ch)))
    });
}

fn install_string(reg: &mut Builder) {
    reg.add("string-concat", sch(vec![Type::STRING, Type::STRING], Type::STRING), "concatenation", |_, args| {
        Ok(Value::Str(string(&args[0])? + &string(&args[1])?))
    });
    reg.add(
        "string-join",
        sch(vec![Type::vector(Type::STRING), Type::STRING], Type::STRING),
        "joins strings with a separator",
        |_, args| {
            let items = vector(&args[0])?;
            let sep = string(&args[1])?;
            let mut parts = Vec::with_capacity(items.len());
            for item in &items {
                parts.push(string(item)?);
            }
            Ok(Value::Str(parts.join(&sep)))
        },
    );
    reg.add("string-length", sch(vec![Type::STRING], Type::INT), "character count", |_, args| {
        Ok(Value::Int(string(&args[0])?.chars().count() as i64))
    });
    reg.add(
        "substring",
        sch(vec![Type::STRING, Type::INT, Type::INT], Type::STRING),
        "characters from start below end, indices clamped",
        |_, args| {
            let chars = chars_of(&string(&args[0])?);
            let lo = clamp_index(int(&args[1])?, chars.len());
            let hi = clamp_index(int(&args[2])?, chars.len()).max(lo);
            Ok(Value::Str(chars[lo..hi].iter().collect()))
        },
    );
    reg.add(
        "string-take",
        sch(vec![Type::INT, Type::STRING], Type::STRING),
        "first n characters (clamped)",
        |_, args| {
            let n = int(&args[0])?;
            let chars = chars_of(&string(&args[1])?);
            let n = clamp_index(n, chars.len());
            Ok(Value::Str(chars[..n].iter().collect()))
        },
    );
    reg.add(
        "string-drop",
        sch(vec![Type::INT, Type::STRING], Type::STRING),
        "everything after the first n characters (clamped)",
        |_, args| {
            let n = int(&args[0])?;
            let chars = chars_of(&string(&args[1])?);
            let n = clamp_index(n, chars.len());
            Ok(Value::Str(chars[n..].iter().collect()))
        },
    );
    reg.add("string-reverse", sch(vec![Type::STRING], Type::STRING), "characters in reverse order", |_, args| {
        Ok(Value::Str(string(&args[0])?.chars().rev().collect()))
    });
    reg.add("string-upcase", sch(vec![Type::STRING], Type::STRING), "ASCII uppercase", |_, args| {
        Ok(Value::Str(string(&args[0])?.to_ascii_uppercase()))
    });
    reg.add("string-downcase", sch(vec![Type::STRING], Type::STRING), "ASCII lowercase", |_, args| {
        Ok(Value::Str(string(&args[0])?.to_ascii_lowercase()))
    });
    reg.add(
        "string-contains?",
        sch(vec![Type::STRING, Type::STRING], Type::BOOLEAN),
        "substring test",
        |_, args| Ok(Value::Bool(string(&args[0])?.contains(&string(&args[1])?))),
    );
    reg.add(
        "string-index-of",
        sch(vec![Type::STRING, Type::STRING], Type::INT),
        "character index of the first occurrence, or -1",
        |_, args| {
            let s = string(&args[0])?;
            let needle = string(&args[1])?;
            Ok(Value::Int(match s.find(&needle) {
                Some(byte_idx) => s[..byte_idx].chars().count() as i64,
                None => -1,
            }))
        },
    );
    reg.add(
        "index-of-char",
        sch(vec![Type::STRING, Type::CHAR], Type::INT),
        "character index of the first occurrence, or -1",
        |_, args| {
            let s = string(&args[0])?;
            let ch = chr(&args[1])?;
            Ok(Value::Int(
                s.chars()
                    .position(|c| c == ch)
                    .map(|i| i as i64)
                    .unwrap_or(-1),
            ))
        },
    );
    reg.add(
        "count-char",
        sch(vec![Type::STRING, Type::CHAR], Type::INT),
        "occurrences of a character",
        |_, args| {
            let s = string(&args[0])?;
            let ch = chr(&args[1])?;
            Ok(Value::Int(s.chars().filter(|c| *c == ch).count() as i64))
        },
    );
    reg.add(
        "string-replace",
        sch(vec![Type::STRING, Type::STRING, Type::STRING], Type::STRING),
        "replaces every occurrence; empty pattern faults",
        |_, args| {
            let pat = string(&args[1])?;
            if pat.is_empty() {
                return Err(RuntimeFault::partial("replace with empty pattern"));
            }
            Ok(Value::Str(string(&args[0])?.replace(&pat, &string(&args[2])?)))
        },
    );
    reg.add("empty-str?", sch(vec![Type::STRING], Type::BOOLEAN), "true for the empty string", |_, args| {
        Ok(Value::Bool(string(&args[0])?.is_empty()))
    });
    reg.add(
        "string-append-char",
        sch(vec![Type::STRING, Type::CHAR], Type::STRING),
        "appends one character",
        |_, args| {
            let mut s = string(&args[0])?;
            s.push(chr(&args[1])?);
            Ok(Value::Str(s))
        },
    );
    reg.add("first-str", sch(vec![Type::STRING], Type::CHAR), "first character; faults on empty", |_, args| {
        string(&args[0])?
            .chars()
            .next()
            .map(Value::Char)
            .ok_or_else(|| RuntimeFault::partial("first of empty string"))
    });
    reg.add("last-str", sch(vec![Type::STRING], Type::CHAR), "last character; faults on empty", |_, args| {
        string(&args[0])?
            .chars()
            .last()
            .map(Value::Char)
            .ok_or_else(|| RuntimeFault::partial("last of empty string"))
    });
    reg.add(
        "string-to-chars",
        sch(vec![Type::STRING], Type::vector(Type::CHAR)),
        "characters as a vector",
        |it, args| {
            let chars = chars_of(&string(&args[0])?);
            it.charge_collection(chars.len())?;
            Ok(Value::Vector(chars.into_iter().map(Value::Char).collect()))
        },
    );
    reg.add(
        "chars-to-string",
        sch(vec![Type::vector(Type::CHAR)], Type::STRING),
        "builds a string from characters",
        |_, args| {
            let items = vector(&args[0])?;
            let mut s = String::with_capacity(items.len());
            for item in &items {
                s.push(chr(item)?);
            }
            Ok(Value::Str(s))
        },
    );
}
