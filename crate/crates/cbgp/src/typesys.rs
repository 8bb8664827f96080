//! Types, type schemes, substitution and unification.
//!
//! The type language has five ground types, integer-identified type
//! variables, and seven constructors: `Vector[_]`, `Set[_]`, `Map[_,_]`,
//! `Tuple[_,_]` and function constructors of arity one to three. Types are
//! small immutable trees; unification composes substitutions eagerly
//! rather than going through a union-find structure.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five ground types.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Ground {
    Boolean,
    Int,
    Float,
    Char,
    String,
}

impl Ground {
    pub const ALL: [Ground; 5] = [
        Ground::Boolean,
        Ground::Int,
        Ground::Float,
        Ground::Char,
        Ground::String,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Ground::Boolean => "Boolean",
            Ground::Int => "Int",
            Ground::Float => "Float",
            Ground::Char => "Char",
            Ground::String => "String",
        }
    }
}

/// An integer-identified type variable. Freshness is managed by
/// [`VarSupply`]; rendered as `v{id}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct TypeVar(pub u32);

impl fmt::Display for TypeVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

/// Type constructors. Function constructors carry their argument count;
/// the final type argument of `Fn*` is the return type.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum TypeCtor {
    Vector,
    Set,
    Map,
    Tuple,
    Fn1,
    Fn2,
    Fn3,
}

impl TypeCtor {
    pub fn arity(self) -> usize {
        match self {
            TypeCtor::Vector | TypeCtor::Set => 1,
            TypeCtor::Map | TypeCtor::Tuple | TypeCtor::Fn1 => 2,
            TypeCtor::Fn2 => 3,
            TypeCtor::Fn3 => 4,
        }
    }

    pub fn is_function(self) -> bool {
        matches!(self, TypeCtor::Fn1 | TypeCtor::Fn2 | TypeCtor::Fn3)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Type {
    Ground(Ground),
    Var(TypeVar),
    Constructed(TypeCtor, Vec<Type>),
}

impl Type {
    pub const BOOLEAN: Type = Type::Ground(Ground::Boolean);
    pub const INT: Type = Type::Ground(Ground::Int);
    pub const FLOAT: Type = Type::Ground(Ground::Float);
    pub const CHAR: Type = Type::Ground(Ground::Char);
    pub const STRING: Type = Type::Ground(Ground::String);

    pub fn var(id: u32) -> Type {
        Type::Var(TypeVar(id))
    }

    pub fn vector(item: Type) -> Type {
        Type::Constructed(TypeCtor::Vector, vec![item])
    }

    pub fn set(item: Type) -> Type {
        Type::Constructed(TypeCtor::Set, vec![item])
    }

    pub fn map(key: Type, val: Type) -> Type {
        Type::Constructed(TypeCtor::Map, vec![key, val])
    }

    pub fn tuple(a: Type, b: Type) -> Type {
        Type::Constructed(TypeCtor::Tuple, vec![a, b])
    }

    /// Function type of arity 1..=3.
    pub fn func(mut params: Vec<Type>, ret: Type) -> Type {
        let ctor = match params.len() {
            1 => TypeCtor::Fn1,
            2 => TypeCtor::Fn2,
            3 => TypeCtor::Fn3,
            n => panic!("function arity {n} unsupported"),
        };
        params.push(ret);
        Type::Constructed(ctor, params)
    }

    /// Splits a function type into parameter types and return type.
    pub fn as_function(&self) -> Option<(&[Type], &Type)> {
        match self {
            Type::Constructed(ctor, args) if ctor.is_function() => {
                let (ret, params) = args.split_last().expect("function ctor has args");
                Some((params, ret))
            }
            _ => None,
        }
    }

    pub fn contains_var(&self, v: TypeVar) -> bool {
        match self {
            Type::Ground(_) => false,
            Type::Var(w) => *w == v,
            Type::Constructed(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Free variables in left-to-right first-occurrence order.
    pub fn vars(&self) -> Vec<TypeVar> {
        let mut seen = Vec::new();
        self.collect_vars(&mut seen);
        seen
    }

    fn collect_vars(&self, out: &mut Vec<TypeVar>) {
        match self {
            Type::Ground(_) => {}
            Type::Var(v) => {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
            Type::Constructed(_, args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn is_monomorphic(&self) -> bool {
        match self {
            Type::Ground(_) => true,
            Type::Var(_) => false,
            Type::Constructed(_, args) => args.iter().all(Type::is_monomorphic),
        }
    }

    /// Ground types mentioned anywhere in this type.
    pub fn ground_mentions(&self) -> BTreeSet<Ground> {
        let mut out = BTreeSet::new();
        self.collect_grounds(&mut out);
        out
    }

    fn collect_grounds(&self, out: &mut BTreeSet<Ground>) {
        match self {
            Type::Ground(g) => {
                out.insert(*g);
            }
            Type::Var(_) => {}
            Type::Constructed(_, args) => {
                for a in args {
                    a.collect_grounds(out);
                }
            }
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Ground(g) => f.write_str(g.name()),
            Type::Var(v) => write!(f, "{v}"),
            Type::Constructed(ctor, args) => match ctor {
                TypeCtor::Vector => write!(f, "Vector[{}]", args[0]),
                TypeCtor::Set => write!(f, "Set[{}]", args[0]),
                TypeCtor::Map => write!(f, "Map[{},{}]", args[0], args[1]),
                TypeCtor::Tuple => write!(f, "Tuple[{},{}]", args[0], args[1]),
                TypeCtor::Fn1 | TypeCtor::Fn2 | TypeCtor::Fn3 => {
                    let (params, ret) = self.as_function().expect("function type");
                    f.write_str("(")?;
                    for (i, p) in params.iter().enumerate() {
                        if i > 0 {
                            f.write_str(",")?;
                        }
                        write!(f, "{p}")?;
                    }
                    write!(f, ")->{ret}")
                }
            },
        }
    }
}

/// A universally quantified type. Bound variables are kept in
/// first-occurrence order of the body; vacuous quantification is dropped
/// at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Scheme {
    vars: Vec<TypeVar>,
    body: Type,
}

impl Scheme {
    pub fn new(vars: Vec<TypeVar>, body: Type) -> Scheme {
        let occurring = body.vars();
        let vars: Vec<TypeVar> = occurring
            .iter()
            .copied()
            .filter(|v| vars.contains(v))
            .collect();
        Scheme { vars, body }
    }

    /// A monomorphic scheme (no quantified variables).
    pub fn mono(body: Type) -> Scheme {
        Scheme::new(Vec::new(), body)
    }

    /// Quantifies every free variable of the body.
    pub fn close(body: Type) -> Scheme {
        let vars = body.vars();
        Scheme { vars, body }
    }

    pub fn bound_vars(&self) -> &[TypeVar] {
        &self.vars
    }

    pub fn body(&self) -> &Type {
        &self.body
    }

    pub fn is_polymorphic(&self) -> bool {
        !self.vars.is_empty()
    }

    /// A scheme is closed when every variable of the body is quantified.
    pub fn is_closed(&self) -> bool {
        self.body.vars().iter().all(|v| self.vars.contains(v))
    }

    pub fn ground_mentions(&self) -> BTreeSet<Ground> {
        self.body.ground_mentions()
    }

    /// Replaces every bound variable with a fresh one. Two instantiations
    /// of the same scheme never share variables.
    pub fn instantiate(&self, supply: &mut VarSupply) -> Type {
        let mapping: HashMap<TypeVar, Type> = self
            .vars
            .iter()
            .map(|v| (*v, Type::Var(supply.fresh())))
            .collect();
        rename(&self.body, &mapping)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.vars.is_empty() {
            f.write_str("forall ")?;
            for (i, v) in self.vars.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str(". ")?;
        }
        write!(f, "{}", self.body)
    }
}

/// Structural variable replacement; unlike substitution application this
/// puts no occurs-check constraints on the mapping.
pub fn rename_vars(t: &Type, mapping: &HashMap<TypeVar, Type>) -> Type {
    rename(t, mapping)
}

fn rename(t: &Type, mapping: &HashMap<TypeVar, Type>) -> Type {
    match t {
        Type::Ground(_) => t.clone(),
        Type::Var(v) => mapping.get(v).cloned().unwrap_or_else(|| t.clone()),
        Type::Constructed(ctor, args) => {
            Type::Constructed(*ctor, args.iter().map(|a| rename(a, mapping)).collect())
        }
    }
}

/// Monotone counter handing out unused type variables. One supply is
/// confined to a single compilation.
#[derive(Clone, Debug, Default)]
pub struct VarSupply {
    next: u32,
}

impl VarSupply {
    pub fn new() -> VarSupply {
        VarSupply { next: 0 }
    }

    pub fn starting_at(next: u32) -> VarSupply {
        VarSupply { next }
    }

    pub fn fresh(&mut self) -> TypeVar {
        let v = TypeVar(self.next);
        self.next += 1;
        v
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum UnifyError {
    #[error("cannot unify {0} with {1}")]
    Mismatch(Type, Type),
    #[error("occurs check: {0} occurs in {1}")]
    Occurs(TypeVar, Type),
}

/// A mapping from type variables to types. Substitutions produced by
/// [`unify`] are idempotent: no variable in the domain occurs in any
/// range type.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Subst {
    map: HashMap<TypeVar, Type>,
}

impl Subst {
    pub fn empty() -> Subst {
        Subst::default()
    }

    /// Single binding; rejects `v -> t` when `v` occurs in `t`.
    pub fn singleton(v: TypeVar, t: Type) -> Result<Subst, UnifyError> {
        if t.contains_var(v) {
            return Err(UnifyError::Occurs(v, t));
        }
        let mut map = HashMap::new();
        map.insert(v, t);
        Ok(Subst { map })
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn get(&self, v: TypeVar) -> Option<&Type> {
        self.map.get(&v)
    }

    pub fn iter(&self) -> impl Iterator<Item = (TypeVar, &Type)> {
        self.map.iter().map(|(v, t)| (*v, t))
    }

    pub fn apply(&self, t: &Type) -> Type {
        match t {
            Type::Ground(_) => t.clone(),
            Type::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Type::Constructed(ctor, args) => {
                Type::Constructed(*ctor, args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// Composition: `compose(s1, s2)` behaves as applying `s2` first and
    /// `s1` second, i.e. `compose(s1,s2).apply(t) == s1.apply(&s2.apply(t))`.
    pub fn compose(&self, inner: &Subst) -> Subst {
        let mut map: HashMap<TypeVar, Type> = inner
            .map
            .iter()
            .map(|(v, t)| (*v, self.apply(t)))
            .collect();
        for (v, t) in &self.map {
            map.entry(*v).or_insert_with(|| t.clone());
        }
        Subst { map }
    }
}

/// Most general unifier of two types with no rigid variables.
pub fn unify(t1: &Type, t2: &Type) -> Result<Subst, UnifyError> {
    unify_with_rigids(t1, t2, &HashSet::new())
}

/// Most general unifier where the variables in `rigid` act as opaque
/// constants: they unify with themselves and may be bound *to* by
/// flexible variables, but are never substituted away.
pub fn unify_with_rigids(
    t1: &Type,
    t2: &Type,
    rigid: &HashSet<TypeVar>,
) -> Result<Subst, UnifyError> {
    match (t1, t2) {
        (Type::Ground(a), Type::Ground(b)) if a == b => Ok(Subst::empty()),
        (Type::Var(a), Type::Var(b)) if a == b => Ok(Subst::empty()),
        (Type::Var(v), t) if !rigid.contains(v) => Subst::singleton(*v, t.clone()),
        (t, Type::Var(v)) if !rigid.contains(v) => Subst::singleton(*v, t.clone()),
        (Type::Constructed(c1, args1), Type::Constructed(c2, args2)) if c1 == c2 => {
            debug_assert_eq!(args1.len(), args2.len());
            let mut subst = Subst::empty();
            for (a, b) in args1.iter().zip(args2) {
                let step = unify_with_rigids(&subst.apply(a), &subst.apply(b), rigid)?;
                subst = step.compose(&subst);
            }
            Ok(subst)
        }
        _ => Err(UnifyError::Mismatch(t1.clone(), t2.clone())),
    }
}

/// Renames variables to `v0, v1, ...` in first-occurrence order of a
/// left-to-right traversal. Types equal up to variable renaming
/// canonicalize identically.
pub fn canonicalize(t: &Type) -> Type {
    let order = t.vars();
    let mapping: HashMap<TypeVar, Type> = order
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, Type::var(i as u32)))
        .collect();
    rename(t, &mapping)
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("type syntax error at byte {pos}: {msg}")]
pub struct TypeParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parses the textual rendering produced by `Display`:
/// `Int`, `v3`, `Vector[Int]`, `Map[v0,Int]`, `(Int,Int)->Boolean`.
pub fn parse_type(input: &str) -> Result<Type, TypeParseError> {
    let mut p = TypeParser {
        src: input.as_bytes(),
        pos: 0,
    };
    let t = p.parse()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct TypeParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> TypeParser<'a> {
    fn err(&self, msg: &str) -> TypeParseError {
        TypeParseError {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, b: u8) -> Result<(), TypeParseError> {
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == b {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", b as char)))
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn ident(&mut self) -> Result<String, TypeParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
    }

    fn parse(&mut self) -> Result<Type, TypeParseError> {
        match self.peek() {
            Some(b'(') => self.parse_function(),
            _ => self.parse_named(),
        }
    }

    fn parse_function(&mut self) -> Result<Type, TypeParseError> {
        self.eat(b'(')?;
        let mut params = vec![self.parse()?];
        while self.peek() == Some(b',') {
            self.eat(b',')?;
            params.push(self.parse()?);
        }
        self.eat(b')')?;
        self.eat(b'-')?;
        self.eat(b'>')?;
        let ret = self.parse()?;
        if params.len() > 3 {
            return Err(self.err("function arity above 3"));
        }
        Ok(Type::func(params, ret))
    }

    fn parse_named(&mut self) -> Result<Type, TypeParseError> {
        let name = self.ident()?;
        match name.as_str() {
            "Boolean" => Ok(Type::BOOLEAN),
            "Int" => Ok(Type::INT),
            "Float" => Ok(Type::FLOAT),
            "Char" => Ok(Type::CHAR),
            "String" => Ok(Type::STRING),
            "Vector" | "Set" => {
                self.eat(b'[')?;
                let item = self.parse()?;
                self.eat(b']')?;
                Ok(if name == "Vector" {
                    Type::vector(item)
                } else {
                    Type::set(item)
                })
            }
            "Map" | "Tuple" => {
                self.eat(b'[')?;
                let a = self.parse()?;
                self.eat(b',')?;
                let b = self.parse()?;
                self.eat(b']')?;
                Ok(if name == "Map" {
                    Type::map(a, b)
                } else {
                    Type::tuple(a, b)
                })
            }
            other => {
                if let Some(num) = other.strip_prefix('v') {
                    if let Ok(id) = num.parse::<u32>() {
                        return Ok(Type::var(id));
                    }
                }
                Err(self.err(&format!("unknown type name '{other}'")))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn a() -> Type {
        Type::var(0)
    }

    fn b() -> Type {
        Type::var(1)
    }

    #[test]
    fn unify_binds_single_variable() {
        let s = unify(&a(), &Type::INT).unwrap();
        assert_eq!(s.apply(&a()), Type::INT);
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn unify_descends_structurally() {
        let s = unify(&Type::vector(a()), &Type::vector(Type::INT)).unwrap();
        assert_eq!(s.apply(&a()), Type::INT);
    }

    #[test]
    fn unify_transitive_binding() {
        // Map[a,b] ~ Map[String,a] forces a=String, b=String.
        let t1 = Type::map(a(), b());
        let t2 = Type::map(Type::STRING, a());
        let s = unify(&t1, &t2).unwrap();
        assert_eq!(s.apply(&a()), Type::STRING);
        assert_eq!(s.apply(&b()), Type::STRING);
    }

    #[test]
    fn unify_occurs_check_fails() {
        let err = unify(&a(), &Type::vector(a())).unwrap_err();
        assert!(matches!(err, UnifyError::Occurs(..)));
    }

    #[test]
    fn unify_ground_mismatch_fails() {
        let err = unify(&Type::INT, &Type::STRING).unwrap_err();
        assert!(matches!(err, UnifyError::Mismatch(..)));
    }

    #[test]
    fn unify_ctor_mismatch_fails() {
        let err = unify(&Type::vector(Type::INT), &Type::set(Type::INT)).unwrap_err();
        assert!(matches!(err, UnifyError::Mismatch(..)));
    }

    #[test]
    fn rigid_variables_do_not_bind() {
        let rigid: HashSet<TypeVar> = [TypeVar(0)].into_iter().collect();
        assert!(unify_with_rigids(&a(), &Type::INT, &rigid).is_err());
        assert!(unify_with_rigids(&a(), &a(), &rigid).is_ok());
        // A flexible variable may bind to a rigid one.
        let s = unify_with_rigids(&b(), &a(), &rigid).unwrap();
        assert_eq!(s.apply(&b()), a());
    }

    #[test]
    fn apply_substitutes_variables() {
        let s = Subst::singleton(TypeVar(0), Type::INT).unwrap();
        let t = Type::func(vec![a()], a());
        assert_eq!(s.apply(&t), Type::func(vec![Type::INT], Type::INT));
    }

    #[test]
    fn apply_empty_is_identity() {
        let t = Type::set(b());
        assert_eq!(Subst::empty().apply(&t), t);
    }

    #[test]
    fn apply_leaves_outside_variables() {
        let s = Subst::singleton(TypeVar(0), Type::vector(b())).unwrap();
        let t = Type::tuple(a(), b());
        assert_eq!(s.apply(&t), Type::tuple(Type::vector(b()), b()));
    }

    #[test]
    fn compose_matches_sequential_application() {
        // compose({b->Int}, {a->b}) applied to a gives Int.
        let s1 = Subst::singleton(TypeVar(1), Type::INT).unwrap();
        let s2 = Subst::singleton(TypeVar(0), b()).unwrap();
        let c = s1.compose(&s2);
        assert_eq!(c.apply(&a()), Type::INT);
    }

    #[test]
    fn compose_identity_laws() {
        let s = Subst::singleton(TypeVar(0), Type::INT).unwrap();
        assert_eq!(Subst::empty().compose(&s), s);
        assert_eq!(s.compose(&Subst::empty()), s);
    }

    #[test]
    fn compose_maps_through_outer() {
        // compose({a->Int}, {b->Vector[a]}) applied to b gives Vector[Int].
        let s1 = Subst::singleton(TypeVar(0), Type::INT).unwrap();
        let s2 = Subst::singleton(TypeVar(1), Type::vector(a())).unwrap();
        let c = s1.compose(&s2);
        assert_eq!(c.apply(&b()), Type::vector(Type::INT));
    }

    #[test]
    fn instantiate_identity_scheme() {
        // forall a. a -> a instantiates to t -> t for a fresh t.
        let scheme = Scheme::close(Type::func(vec![a()], a()));
        let mut supply = VarSupply::starting_at(7);
        let t = scheme.instantiate(&mut supply);
        assert_eq!(t, Type::func(vec![Type::var(7)], Type::var(7)));
    }

    #[test]
    fn instantiate_get_scheme() {
        // forall a,b. (Map[a,b],a) -> b
        let scheme = Scheme::close(Type::func(vec![Type::map(a(), b()), a()], b()));
        let mut supply = VarSupply::starting_at(1);
        let t = scheme.instantiate(&mut supply);
        let v1 = Type::var(1);
        let v2 = Type::var(2);
        assert_eq!(t, Type::func(vec![Type::map(v1.clone(), v2.clone()), v1], v2));
    }

    #[test]
    fn instantiate_monomorphic_scheme() {
        let scheme = Scheme::mono(Type::INT);
        let mut supply = VarSupply::new();
        assert_eq!(scheme.instantiate(&mut supply), Type::INT);
    }

    #[test]
    fn instantiations_share_no_variables() {
        let scheme = Scheme::close(Type::func(vec![Type::map(a(), b()), a()], b()));
        let mut supply = VarSupply::new();
        let t1 = scheme.instantiate(&mut supply);
        let t2 = scheme.instantiate(&mut supply);
        let vars1: HashSet<_> = t1.vars().into_iter().collect();
        let vars2: HashSet<_> = t2.vars().into_iter().collect();
        assert!(vars1.is_disjoint(&vars2));
    }

    #[test]
    fn canonicalize_alpha_equivalence() {
        let t1 = Type::func(vec![b()], b());
        let t2 = Type::func(vec![Type::var(9)], Type::var(9));
        let expect = Type::func(vec![a()], a());
        assert_eq!(canonicalize(&t1), expect);
        assert_eq!(canonicalize(&t2), expect);
    }

    #[test]
    fn canonicalize_first_occurrence_order() {
        let t = Type::map(Type::var(3), Type::var(0));
        assert_eq!(canonicalize(&t), Type::map(a(), b()));
    }

    #[test]
    fn canonicalize_no_variables() {
        assert_eq!(canonicalize(&Type::INT), Type::INT);
    }

    #[test]
    fn render_formats() {
        assert_eq!(Type::INT.to_string(), "Int");
        assert_eq!(Type::vector(Type::INT).to_string(), "Vector[Int]");
        assert_eq!(Type::map(a(), Type::INT).to_string(), "Map[v0,Int]");
        assert_eq!(
            Type::func(vec![Type::INT, Type::INT], Type::BOOLEAN).to_string(),
            "(Int,Int)->Boolean"
        );
    }

    #[test]
    fn parse_round_trips_rendering() {
        for text in [
            "Int",
            "Vector[Int]",
            "Map[v0,Int]",
            "(Int,Int)->Boolean",
            "((Int)->Int,Vector[Int])->Vector[Int]",
            "Tuple[Char,Set[Float]]",
        ] {
            let t = parse_type(text).unwrap();
            assert_eq!(t.to_string(), text);
        }
    }

    #[test]
    fn scheme_drops_vacuous_quantifiers() {
        let s = Scheme::new(vec![TypeVar(0), TypeVar(5)], Type::func(vec![a()], a()));
        assert_eq!(s.bound_vars(), &[TypeVar(0)]);
    }

    // Property tests over a small random type language.

    fn arb_type() -> impl Strategy<Value = Type> {
        let leaf = prop_oneof![
            (0u32..4).prop_map(Type::var),
            prop_oneof![
                Just(Type::BOOLEAN),
                Just(Type::INT),
                Just(Type::FLOAT),
                Just(Type::CHAR),
                Just(Type::STRING),
            ],
        ];
        leaf.prop_recursive(3, 24, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(Type::vector),
                inner.clone().prop_map(Type::set),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::map(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::tuple(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Type::func(vec![a], b)),
            ]
        })
    }

    /// Substitution built so no domain variable occurs in any range.
    fn arb_renaming_subst() -> impl Strategy<Value = Subst> {
        proptest::collection::vec((0u32..4, 10u32..14), 0..4).prop_map(|pairs| {
            let mut s = Subst::empty();
            for (from, to) in pairs {
                if let Ok(one) = Subst::singleton(TypeVar(from), Type::var(to)) {
                    s = s.compose(&one);
                }
            }
            s
        })
    }

    proptest! {
        #[test]
        fn prop_unify_soundness(t1 in arb_type(), t2 in arb_type()) {
            if let Ok(s) = unify(&t1, &t2) {
                prop_assert_eq!(s.apply(&t1), s.apply(&t2));
            }
        }

        #[test]
        fn prop_unify_most_general(t in arb_type(), s in arb_renaming_subst()) {
            // unify(t, s(t)) must succeed whenever s is acyclic on t.
            let image = s.apply(&t);
            prop_assert!(unify(&t, &image).is_ok());
        }

        #[test]
        fn prop_unifier_occurs_free(t1 in arb_type(), t2 in arb_type()) {
            if let Ok(s) = unify(&t1, &t2) {
                for (v, bound) in s.iter() {
                    prop_assert!(!bound.contains_var(v));
                }
            }
        }

        #[test]
        fn prop_unifier_idempotent(t1 in arb_type(), t2 in arb_type()) {
            if let Ok(s) = unify(&t1, &t2) {
                let once = s.apply(&t1);
                prop_assert_eq!(s.apply(&once), once);
            }
        }

        #[test]
        fn prop_canonicalize_idempotent(t in arb_type()) {
            let c = canonicalize(&t);
            prop_assert_eq!(canonicalize(&c), c);
        }

        #[test]
        fn prop_canonicalize_rename_invariant(t in arb_type(), s in arb_renaming_subst()) {
            // Injective renamings leave the canonical form unchanged.
            let mut targets: Vec<u32> = s.iter().filter_map(|(_, t)| match t {
                Type::Var(w) => Some(w.0),
                _ => None,
            }).collect();
            targets.sort_unstable();
            targets.dedup();
            prop_assume!(targets.len() == s.len());
            prop_assert_eq!(canonicalize(&s.apply(&t)), canonicalize(&t));
        }

        #[test]
        fn prop_parse_round_trip(t in arb_type()) {
            prop_assert_eq!(parse_type(&t.to_string()).unwrap(), t);
        }
    }
}
