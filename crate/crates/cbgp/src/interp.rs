//! Runtime values and the AST evaluator.
//!
//! Evaluation is call-by-value with lexical closures. Faults are data:
//! every error an evolved program can trigger at runtime is reported as a
//! [`RuntimeFault`], never as a host panic. Step and collection-size
//! limits bound the cost of evaluating one case.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::compiler::{render_ast, Ast};
use crate::stdlib::FunctionRegistry;
use crate::typesys::{Ground, Type};

#[derive(Clone, Debug)]
pub enum Value {
    Bool(bool),
    Int(i64),
    Float(f64),
    Char(char),
    Str(String),
    /// Ordered, possibly repeating items.
    Vector(Vec<Value>),
    /// Items kept sorted by the total value order and duplicate-free.
    Set(Vec<Value>),
    /// Entries kept sorted by key, keys duplicate-free.
    Map(Vec<(Value, Value)>),
    Tuple(Box<(Value, Value)>),
    /// A function created by evaluating an abstraction node.
    Closure {
        params: Vec<(String, Type)>,
        body: Arc<Ast>,
        env: Env,
    },
    /// A registry function used as a value.
    Native { name: String },
    /// A function with its leading arguments already bound.
    Partial { func: Box<Value>, bound: Vec<Value> },
    /// Apply `first`, then `second` on the result.
    Composed { first: Box<Value>, second: Box<Value> },
    /// A binary function with its arguments swapped.
    Flipped { func: Box<Value> },
}

impl Value {
    pub fn tuple(a: Value, b: Value) -> Value {
        Value::Tuple(Box::new((a, b)))
    }

    /// Builds a set: sorts and removes duplicates under the value order.
    pub fn set_from(items: impl IntoIterator<Item = Value>) -> Value {
        let mut items: Vec<Value> = items.into_iter().collect();
        items.sort_by(cmp_values);
        items.dedup_by(|a, b| cmp_values(a, b) == Ordering::Equal);
        Value::Set(items)
    }

    /// Builds a map from entries; on duplicate keys the later entry wins.
    pub fn map_from(entries: impl IntoIterator<Item = (Value, Value)>) -> Value {
        let mut entries: Vec<(Value, Value)> = entries.into_iter().collect();
        entries.reverse();
        entries.sort_by(|a, b| cmp_values(&a.0, &b.0));
        entries.dedup_by(|a, b| cmp_values(&a.0, &b.0) == Ordering::Equal);
        Value::Map(entries)
    }

    pub fn is_function(&self) -> bool {
        matches!(
            self,
            Value::Closure { .. }
                | Value::Native { .. }
                | Value::Partial { .. }
                | Value::Composed { .. }
                | Value::Flipped { .. }
        )
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Bool(_) => 0,
            Value::Int(_) => 1,
            Value::Float(_) => 2,
            Value::Char(_) => 3,
            Value::Str(_) => 4,
            Value::Vector(_) => 5,
            Value::Set(_) => 6,
            Value::Map(_) => 7,
            Value::Tuple(_) => 8,
            Value::Native { .. } => 9,
            Value::Closure { .. } => 10,
            Value::Partial { .. } => 11,
            Value::Composed { .. } => 12,
            Value::Flipped { .. } => 13,
        }
    }
}

/// Float normalization used for equality and ordering: negative zero
/// becomes positive zero and every NaN collapses to one canonical NaN.
fn normalize_float(x: f64) -> f64 {
    if x.is_nan() {
        f64::NAN
    } else if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Total, deterministic order over all values. Numeric for floats (with
/// NaN sorting last), lexicographic for collections. Functions are
/// ordered by their rendered text, which keeps set/map operations total
/// even for function elements.
pub fn cmp_values(a: &Value, b: &Value) -> Ordering {
    match (a, b) {
        (Value::Bool(x), Value::Bool(y)) => x.cmp(y),
        (Value::Int(x), Value::Int(y)) => x.cmp(y),
        (Value::Float(x), Value::Float(y)) => normalize_float(*x).total_cmp(&normalize_float(*y)),
        (Value::Char(x), Value::Char(y)) => x.cmp(y),
        (Value::Str(x), Value::Str(y)) => x.cmp(y),
        (Value::Vector(x), Value::Vector(y)) | (Value::Set(x), Value::Set(y)) => {
            cmp_slices(x, y)
        }
        (Value::Map(x), Value::Map(y)) => {
            for ((ka, va), (kb, vb)) in x.iter().zip(y.iter()) {
                let c = cmp_values(ka, kb).then_with(|| cmp_values(va, vb));
                if c != Ordering::Equal {
                    return c;
                }
            }
            x.len().cmp(&y.len())
        }
        (Value::Tuple(x), Value::Tuple(y)) => {
            cmp_values(&x.0, &y.0).then_with(|| cmp_values(&x.1, &y.1))
        }
        _ if a.rank() != b.rank() => a.rank().cmp(&b.rank()),
        // Same function-ish rank: fall back to rendered text.
        _ => a.to_string().cmp(&b.to_string()),
    }
}

fn cmp_slices(x: &[Value], y: &[Value]) -> Ordering {
    for (a, b) in x.iter().zip(y.iter()) {
        let c = cmp_values(a, b);
        if c != Ordering::Equal {
            return c;
        }
    }
    x.len().cmp(&y.len())
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        cmp_values(self, other) == Ordering::Equal
    }
}

impl Eq for Value {}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Float(x) => write!(f, "{x:?}"),
            Value::Char(c) => write!(f, "'{}'", escape_char(*c)),
            Value::Str(s) => write!(f, "\"{}\"", escape_str(s)),
            Value::Vector(items) => {
                f.write_str("[")?;
                write_spaced(f, items)?;
                f.write_str("]")
            }
            Value::Set(items) => {
                f.write_str("#{")?;
                write_spaced(f, items)?;
                f.write_str("}")
            }
            Value::Map(entries) => {
                f.write_str("{")?;
                for (i, (k, v)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{k} {v}")?;
                }
                f.write_str("}")
            }
            Value::Tuple(t) => write!(f, "({} {})", t.0, t.1),
            Value::Closure { params, body, .. } => {
                f.write_str("(fn [")?;
                for (i, (name, _)) in params.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(name)?;
                }
                write!(f, "] {})", render_ast(body))
            }
            Value::Native { name } => f.write_str(name),
            Value::Partial { func, bound } => {
                write!(f, "(partial {func}")?;
                for v in bound {
                    write!(f, " {v}")?;
                }
                f.write_str(")")
            }
            Value::Composed { first, second } => write!(f, "(comp {first} {second})"),
            Value::Flipped { func } => write!(f, "(flip {func})"),
        }
    }
}

fn write_spaced(f: &mut fmt::Formatter<'_>, items: &[Value]) -> fmt::Result {
    for (i, v) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{v}")?;
    }
    Ok(())
}

fn escape_char(c: char) -> String {
    match c {
        '\\' => "\\\\".to_string(),
        '\'' => "\\'".to_string(),
        '\n' => "\\n".to_string(),
        '\t' => "\\t".to_string(),
        '\r' => "\\r".to_string(),
        _ => c.to_string(),
    }
}

fn escape_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '"' => out.push_str("\\\""),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            _ => out.push(c),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("value syntax error at byte {pos}: {msg}")]
pub struct ValueParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parses the literal syntax emitted by `Display` for data values.
/// Function values are render-only and rejected here.
pub fn parse_value(input: &str) -> Result<Value, ValueParseError> {
    let mut p = ValueParser {
        src: input.as_bytes(),
        text: input,
        pos: 0,
    };
    let v = p.parse()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

struct ValueParser<'a> {
    src: &'a [u8],
    text: &'a str,
    pos: usize,
}

impl<'a> ValueParser<'a> {
    fn err(&self, msg: &str) -> ValueParseError {
        ValueParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_whitespace() || self.src[self.pos] == b',')
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse(&mut self) -> Result<Value, ValueParseError> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'[') => {
                self.pos += 1;
                let items = self.parse_until(b']')?;
                Ok(Value::Vector(items))
            }
            Some(b'#') => {
                self.pos += 1;
                if self.src.get(self.pos) != Some(&b'{') {
                    return Err(self.err("expected '{' after '#'"));
                }
                self.pos += 1;
                let items = self.parse_until(b'}')?;
                Ok(Value::set_from(items))
            }
            Some(b'{') => {
                self.pos += 1;
                let items = self.parse_until(b'}')?;
                if items.len() % 2 != 0 {
                    return Err(self.err("map literal needs an even number of forms"));
                }
                let mut entries = Vec::with_capacity(items.len() / 2);
                let mut it = items.into_iter();
                while let (Some(k), Some(v)) = (it.next(), it.next()) {
                    entries.push((k, v));
                }
                Ok(Value::map_from(entries))
            }
            Some(b'(') => {
                self.pos += 1;
                let items = self.parse_until(b')')?;
                if items.len() != 2 {
                    return Err(self.err("tuple literal needs exactly two forms"));
                }
                let mut it = items.into_iter();
                Ok(Value::tuple(it.next().unwrap(), it.next().unwrap()))
            }
            Some(b'"') => self.parse_string(),
            Some(b'\'') => self.parse_char(),
            Some(b't') | Some(b'f') => self.parse_bool(),
            Some(c) if c == b'-' || c.is_ascii_digit() => self.parse_number(),
            Some(c) => Err(self.err(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn parse_until(&mut self, close: u8) -> Result<Vec<Value>, ValueParseError> {
        let mut items = Vec::new();
        loop {
            match self.peek() {
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(items);
                }
                Some(_) => items.push(self.parse()?),
                None => return Err(self.err("unterminated collection literal")),
            }
        }
    }

    fn parse_bool(&mut self) -> Result<Value, ValueParseError> {
        let rest = &self.text[self.pos..];
        if let Some(r) = rest.strip_prefix("true") {
            if r.chars().next().is_none_or(|c| !c.is_ascii_alphanumeric()) {
                self.pos += 4;
                return Ok(Value::Bool(true));
            }
        }
        if let Some(r) = rest.strip_prefix("false") {
            if r.chars().next().is_none_or(|c| !c.is_ascii_alphanumeric()) {
                self.pos += 5;
                return Ok(Value::Bool(false));
            }
        }
        Err(self.err("expected 'true' or 'false'"))
    }

    fn parse_number(&mut self) -> Result<Value, ValueParseError> {
        let start = self.pos;
        if self.src[self.pos] == b'-' {
            self.pos += 1;
        }
        let mut is_float = false;
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'0'..=b'9' => self.pos += 1,
                b'.' | b'e' | b'E' | b'+' => {
                    is_float = true;
                    self.pos += 1;
                }
                b'-' if is_float => self.pos += 1,
                _ => break,
            }
        }
        let text = &self.text[start..self.pos];
        // Display may emit NaN or inf for floats; they never appear in
        // genome literals but keep the parser symmetric anyway.
        if is_float {
            text.parse::<f64>()
                .map(Value::Float)
                .map_err(|_| self.err("bad float literal"))
        } else {
            text.parse::<i64>()
                .map(Value::Int)
                .map_err(|_| self.err("bad int literal"))
        }
    }

    fn parse_string(&mut self) -> Result<Value, ValueParseError> {
        self.pos += 1; // opening quote
        let mut out = String::new();
        loop {
            match self.src.get(self.pos) {
                None => return Err(self.err("unterminated string literal")),
                Some(b'"') => {
                    self.pos += 1;
                    return Ok(Value::Str(out));
                }
                Some(b'\\') => {
                    self.pos += 1;
                    out.push(self.unescape()?);
                }
                Some(_) => {
                    let c = self.text[self.pos..].chars().next().unwrap();
                    out.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
    }

    fn parse_char(&mut self) -> Result<Value, ValueParseError> {
        self.pos += 1; // opening quote
        let c = match self.src.get(self.pos) {
            None => return Err(self.err("unterminated char literal")),
            Some(b'\\') => {
                self.pos += 1;
                self.unescape()?
            }
            Some(_) => {
                let c = self.text[self.pos..].chars().next().unwrap();
                self.pos += c.len_utf8();
                c
            }
        };
        if self.src.get(self.pos) != Some(&b'\'') {
            return Err(self.err("unterminated char literal"));
        }
        self.pos += 1;
        Ok(Value::Char(c))
    }

    fn unescape(&mut self) -> Result<char, ValueParseError> {
        let c = match self.src.get(self.pos) {
            Some(b'n') => '\n',
            Some(b't') => '\t',
            Some(b'r') => '\r',
            Some(b'\\') => '\\',
            Some(b'\'') => '\'',
            Some(b'"') => '"',
            _ => return Err(self.err("bad escape")),
        };
        self.pos += 1;
        Ok(c)
    }
}

/// Shape conformance between a runtime value and a static type. Type
/// variables match anything; function types only check that the value is
/// a function (arity lives in the registry/closure, not the value shape).
pub fn value_conforms(value: &Value, ty: &Type) -> bool {
    match ty {
        Type::Var(_) => true,
        Type::Ground(g) => matches!(
            (g, value),
            (Ground::Boolean, Value::Bool(_))
                | (Ground::Int, Value::Int(_))
                | (Ground::Float, Value::Float(_))
                | (Ground::Char, Value::Char(_))
                | (Ground::String, Value::Str(_))
        ),
        Type::Constructed(ctor, args) => {
            use crate::typesys::TypeCtor;
            match (ctor, value) {
                (TypeCtor::Vector, Value::Vector(items)) | (TypeCtor::Set, Value::Set(items)) => {
                    items.iter().all(|v| value_conforms(v, &args[0]))
                }
                (TypeCtor::Map, Value::Map(entries)) => entries
                    .iter()
                    .all(|(k, v)| value_conforms(k, &args[0]) && value_conforms(v, &args[1])),
                (TypeCtor::Tuple, Value::Tuple(t)) => {
                    value_conforms(&t.0, &args[0]) && value_conforms(&t.1, &args[1])
                }
                (TypeCtor::Fn1 | TypeCtor::Fn2 | TypeCtor::Fn3, v) => v.is_function(),
                _ => false,
            }
        }
    }
}

/// Infers the (monomorphic) type of a literal data value, when one
/// exists. Empty collections and function values have no inferred type.
pub fn infer_literal_type(value: &Value) -> Option<Type> {
    match value {
        Value::Bool(_) => Some(Type::BOOLEAN),
        Value::Int(_) => Some(Type::INT),
        Value::Float(_) => Some(Type::FLOAT),
        Value::Char(_) => Some(Type::CHAR),
        Value::Str(_) => Some(Type::STRING),
        Value::Vector(items) => Some(Type::vector(infer_literal_type(items.first()?)?)),
        Value::Set(items) => Some(Type::set(infer_literal_type(items.first()?)?)),
        Value::Map(entries) => {
            let (k, v) = entries.first()?;
            Some(Type::map(infer_literal_type(k)?, infer_literal_type(v)?))
        }
        Value::Tuple(t) => Some(Type::tuple(
            infer_literal_type(&t.0)?,
            infer_literal_type(&t.1)?,
        )),
        _ => None,
    }
}

/// Lexically scoped environment as a persistent linked list, so closures
/// capture their creation-site environment by reference.
#[derive(Clone, Debug, Default)]
pub struct Env(Option<Arc<EnvNode>>);

#[derive(Debug)]
struct EnvNode {
    name: String,
    value: Value,
    parent: Env,
}

impl Env {
    pub fn empty() -> Env {
        Env(None)
    }

    pub fn bind(&self, name: impl Into<String>, value: Value) -> Env {
        Env(Some(Arc::new(EnvNode {
            name: name.into(),
            value,
            parent: self.clone(),
        })))
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        let mut cur = self;
        while let Some(node) = &cur.0 {
            if node.name == name {
                return Some(&node.value);
            }
            cur = &node.parent;
        }
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalLimits {
    /// Upper bound on evaluation steps for one case.
    pub max_steps: u64,
    /// Upper bound on the size of any single collection produced.
    pub max_collection_size: usize,
}

impl Default for EvalLimits {
    fn default() -> Self {
        EvalLimits {
            max_steps: 500_000,
            max_collection_size: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FaultKind {
    StepLimit,
    SizeLimit,
    PartialFunction,
    ArithmeticFault,
}

/// A runtime failure of an evolved program. Faults are ordinary data and
/// become penalty errors during fitness evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{kind:?}: {detail}")]
pub struct RuntimeFault {
    pub kind: FaultKind,
    pub detail: String,
}

impl RuntimeFault {
    pub fn partial(detail: impl Into<String>) -> RuntimeFault {
        RuntimeFault {
            kind: FaultKind::PartialFunction,
            detail: detail.into(),
        }
    }

    pub fn arithmetic(detail: impl Into<String>) -> RuntimeFault {
        RuntimeFault {
            kind: FaultKind::ArithmeticFault,
            detail: detail.into(),
        }
    }

    fn step_limit(max: u64) -> RuntimeFault {
        RuntimeFault {
            kind: FaultKind::StepLimit,
            detail: format!("exceeded {max} steps"),
        }
    }

    fn size_limit(size: usize, max: usize) -> RuntimeFault {
        RuntimeFault {
            kind: FaultKind::SizeLimit,
            detail: format!("collection of {size} exceeds limit {max}"),
        }
    }
}

/// One evaluation context: registry access plus step accounting. Confined
/// to a single `eval` call.
pub struct Interp<'a> {
    registry: &'a FunctionRegistry,
    limits: EvalLimits,
    steps: u64,
}

impl<'a> Interp<'a> {
    pub fn new(registry: &'a FunctionRegistry, limits: EvalLimits) -> Interp<'a> {
        Interp {
            registry,
            limits,
            steps: 0,
        }
    }

    pub fn registry(&self) -> &FunctionRegistry {
        self.registry
    }

    pub fn steps_used(&self) -> u64 {
        self.steps
    }

    /// Consumes `n` steps, faulting past the limit.
    pub fn tick(&mut self, n: u64) -> Result<(), RuntimeFault> {
        self.steps = self.steps.saturating_add(n);
        if self.steps > self.limits.max_steps {
            Err(RuntimeFault::step_limit(self.limits.max_steps))
        } else {
            Ok(())
        }
    }

    /// Checks a collection about to be produced and charges one step per
    /// element.
    pub fn charge_collection(&mut self, size: usize) -> Result<(), RuntimeFault> {
        if size > self.limits.max_collection_size {
            return Err(RuntimeFault::size_limit(size, self.limits.max_collection_size));
        }
        self.tick(size as u64)
    }

    pub fn eval(&mut self, ast: &Ast, env: &Env) -> Result<Value, RuntimeFault> {
        self.tick(1)?;
        match ast {
            Ast::Lit { value, .. } => Ok(value.clone()),
            Ast::Var { name, .. } => match env.lookup(name) {
                Some(v) => Ok(v.clone()),
                None => {
                    if self.registry.contains(name) {
                        Ok(Value::Native { name: name.clone() })
                    } else {
                        debug_assert!(false, "unbound variable {name}");
                        Err(RuntimeFault::partial(format!("unbound variable {name}")))
                    }
                }
            },
            Ast::Apply { func, args, .. } => {
                let f = self.eval(func, env)?;
                let mut arg_values = Vec::with_capacity(args.len());
                for arg in args {
                    let v = self.eval(arg, env)?;
                    #[cfg(debug_assertions)]
                    {
                        if let Some((params, _)) = func.ty().as_function() {
                            let idx = arg_values.len();
                            debug_assert!(
                                value_conforms(&v, &params[idx]),
                                "argument {idx} of {} does not conform to {}",
                                render_ast(func),
                                params[idx],
                            );
                        }
                    }
                    arg_values.push(v);
                }
                self.call(&f, arg_values)
            }
            Ast::Abs { params, body, .. } => Ok(Value::Closure {
                params: params.clone(),
                body: Arc::new((**body).clone()),
                env: env.clone(),
            }),
            Ast::Let { name, bound, body, .. } => {
                let v = self.eval(bound, env)?;
                let inner = env.bind(name.clone(), v);
                self.eval(body, &inner)
            }
        }
    }

    /// Applies a function value to fully supplied arguments.
    pub fn call(&mut self, f: &Value, args: Vec<Value>) -> Result<Value, RuntimeFault> {
        self.tick(1)?;
        match f {
            Value::Closure { params, body, env } => {
                debug_assert_eq!(params.len(), args.len(), "closure arity mismatch");
                if params.len() != args.len() {
                    return Err(RuntimeFault::partial("closure arity mismatch"));
                }
                let mut inner = env.clone();
                for ((name, _), value) in params.iter().zip(args) {
                    inner = inner.bind(name.clone(), value);
                }
                self.eval(body, &inner)
            }
            Value::Native { name } => {
                let entry = self
                    .registry
                    .lookup(name)
                    .map_err(|e| RuntimeFault::partial(e.to_string()))?;
                debug_assert_eq!(entry.arity(), args.len(), "native arity mismatch: {name}");
                if entry.arity() != args.len() {
                    return Err(RuntimeFault::partial(format!("arity mismatch calling {name}")));
                }
                entry.invoke(self, args)
            }
            Value::Partial { func, bound } => {
                let mut full = bound.clone();
                full.extend(args);
                self.call(func, full)
            }
            Value::Composed { first, second } => {
                let mid = self.call(first, args)?;
                self.call(second, vec![mid])
            }
            Value::Flipped { func } => {
                debug_assert_eq!(args.len(), 2, "flip applies to binary functions");
                if args.len() != 2 {
                    return Err(RuntimeFault::partial("flipped call needs two arguments"));
                }
                let mut args = args;
                args.swap(0, 1);
                self.call(func, args)
            }
            other => {
                debug_assert!(false, "calling a non-function value {other}");
                Err(RuntimeFault::partial("value is not a function"))
            }
        }
    }
}

/// Evaluates a compiled program on concrete inputs. Inputs are bound as
/// `input0`, `input1`, ... in left-to-right order.
pub fn eval(
    ast: &Ast,
    inputs: &[Value],
    registry: &FunctionRegistry,
    limits: EvalLimits,
) -> Result<Value, RuntimeFault> {
    let mut env = Env::empty();
    for (i, v) in inputs.iter().enumerate() {
        env = env.bind(format!("input{i}"), v.clone());
    }
    Interp::new(registry, limits).eval(ast, &env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_from_sorts_and_dedups() {
        let s = Value::set_from(vec![Value::Int(3), Value::Int(1), Value::Int(3)]);
        assert_eq!(s, Value::Set(vec![Value::Int(1), Value::Int(3)]));
    }

    #[test]
    fn map_from_later_key_wins() {
        let m = Value::map_from(vec![
            (Value::Str("k".into()), Value::Int(1)),
            (Value::Str("k".into()), Value::Int(2)),
        ]);
        assert_eq!(
            m,
            Value::Map(vec![(Value::Str("k".into()), Value::Int(2))])
        );
    }

    #[test]
    fn float_keys_normalize_zero_and_nan() {
        let s = Value::set_from(vec![
            Value::Float(0.0),
            Value::Float(-0.0),
            Value::Float(f64::NAN),
            Value::Float(f64::NAN),
        ]);
        match s {
            Value::Set(items) => assert_eq!(items.len(), 2),
            _ => unreachable!(),
        }
    }

    #[test]
    fn display_map_and_set_literals() {
        let m = Value::map_from(vec![(Value::Str("k".into()), Value::Int(1))]);
        assert_eq!(m.to_string(), "{\"k\" 1}");
        let s = Value::set_from(vec![Value::Int(2), Value::Int(1)]);
        assert_eq!(s.to_string(), "#{1 2}");
        let t = Value::tuple(Value::Int(1), Value::Char('a'));
        assert_eq!(t.to_string(), "(1 'a')");
    }

    #[test]
    fn parse_round_trips_data_values() {
        for text in [
            "5",
            "-12",
            "2.5",
            "true",
            "'a'",
            "\"hi there\"",
            "[1 2 3]",
            "#{1 2}",
            "{\"k\" 1 \"j\" 2}",
            "(1 'a')",
            "[[1 2] []]",
        ] {
            let v = parse_value(text).unwrap();
            assert_eq!(parse_value(&v.to_string()).unwrap(), v);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_value("(1 2 3)").is_err());
        assert!(parse_value("{1}").is_err());
        assert!(parse_value("xyz").is_err());
        assert!(parse_value("5 5").is_err());
    }

    #[test]
    fn conformance_checks_shapes() {
        assert!(value_conforms(&Value::Int(1), &Type::INT));
        assert!(!value_conforms(&Value::Int(1), &Type::BOOLEAN));
        assert!(value_conforms(
            &Value::Vector(vec![Value::Int(1)]),
            &Type::vector(Type::INT)
        ));
        assert!(value_conforms(&Value::Vector(vec![]), &Type::vector(Type::INT)));
        assert!(!value_conforms(
            &Value::Vector(vec![Value::Bool(true)]),
            &Type::vector(Type::INT)
        ));
        // Vars match anything.
        assert!(value_conforms(&Value::Str("x".into()), &Type::var(0)));
    }

    #[test]
    fn env_shadows_inner_binding() {
        let env = Env::empty().bind("x", Value::Int(1)).bind("x", Value::Int(2));
        assert_eq!(env.lookup("x"), Some(&Value::Int(2)));
    }
}
