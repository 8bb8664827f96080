//! Stack-based compilation of genomes into typed ASTs, plus an
//! independent Hindley-Milner inference pass used as a verification
//! oracle.
//!
//! Compilation is total: any gene whose stack or type constraints cannot
//! be satisfied at its position NOOPs and the state is left exactly as it
//! was. A genome that never produces an AST compatible with the requested
//! output type compiles to nothing, which is an ordinary outcome rather
//! than an error.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::genome::{Gene, Genome};
use crate::interp::{infer_literal_type, value_conforms, Value};
use crate::stdlib::FunctionRegistry;
use crate::typesys::{unify_with_rigids, Scheme, Subst, Type, TypeVar, UnifyError, VarSupply};

/// A typed program tree. Every node carries its inferred type; the types
/// of an AST returned by [`compile`] have the final substitution applied.
#[derive(Clone, Debug, PartialEq)]
pub enum Ast {
    Lit {
        value: Value,
        ty: Type,
    },
    Var {
        name: String,
        ty: Type,
    },
    Apply {
        func: Box<Ast>,
        args: Vec<Ast>,
        ty: Type,
    },
    Abs {
        params: Vec<(String, Type)>,
        body: Box<Ast>,
        ty: Type,
    },
    Let {
        name: String,
        bound: Box<Ast>,
        body: Box<Ast>,
        ty: Type,
    },
}

impl Ast {
    pub fn ty(&self) -> &Type {
        match self {
            Ast::Lit { ty, .. }
            | Ast::Var { ty, .. }
            | Ast::Apply { ty, .. }
            | Ast::Abs { ty, .. }
            | Ast::Let { ty, .. } => ty,
        }
    }

    /// Applies a substitution to every type annotation in the tree.
    pub fn apply_subst(&self, s: &Subst) -> Ast {
        match self {
            Ast::Lit { value, ty } => Ast::Lit {
                value: value.clone(),
                ty: s.apply(ty),
            },
            Ast::Var { name, ty } => Ast::Var {
                name: name.clone(),
                ty: s.apply(ty),
            },
            Ast::Apply { func, args, ty } => Ast::Apply {
                func: Box::new(func.apply_subst(s)),
                args: args.iter().map(|a| a.apply_subst(s)).collect(),
                ty: s.apply(ty),
            },
            Ast::Abs { params, body, ty } => Ast::Abs {
                params: params
                    .iter()
                    .map(|(n, t)| (n.clone(), s.apply(t)))
                    .collect(),
                body: Box::new(body.apply_subst(s)),
                ty: s.apply(ty),
            },
            Ast::Let {
                name,
                bound,
                body,
                ty,
            } => Ast::Let {
                name: name.clone(),
                bound: Box::new(bound.apply_subst(s)),
                body: Box::new(body.apply_subst(s)),
                ty: s.apply(ty),
            },
        }
    }

    /// Preorder visit of every node.
    pub fn visit(&self, f: &mut impl FnMut(&Ast)) {
        f(self);
        match self {
            Ast::Lit { .. } | Ast::Var { .. } => {}
            Ast::Apply { func, args, .. } => {
                func.visit(f);
                for a in args {
                    a.visit(f);
                }
            }
            Ast::Abs { body, .. } => body.visit(f),
            Ast::Let { bound, body, .. } => {
                bound.visit(f);
                body.visit(f);
            }
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    /// Names of `Var` nodes not bound by an enclosing abstraction or let.
    pub fn free_var_names(&self) -> HashSet<String> {
        fn walk(ast: &Ast, bound: &mut Vec<String>, out: &mut HashSet<String>) {
            match ast {
                Ast::Lit { .. } => {}
                Ast::Var { name, .. } => {
                    if !bound.iter().any(|b| b == name) {
                        out.insert(name.clone());
                    }
                }
                Ast::Apply { func, args, .. } => {
                    walk(func, bound, out);
                    for a in args {
                        walk(a, bound, out);
                    }
                }
                Ast::Abs { params, body, .. } => {
                    let depth = bound.len();
                    bound.extend(params.iter().map(|(n, _)| n.clone()));
                    walk(body, bound, out);
                    bound.truncate(depth);
                }
                Ast::Let {
                    name, bound: b, body, ..
                } => {
                    walk(b, bound, out);
                    bound.push(name.clone());
                    walk(body, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = HashSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }
}

/// Renders an AST in parenthesized functional syntax:
/// `(reduce-vector int-add (mapcat vector-reverse input0))`.
pub fn render_ast(ast: &Ast) -> String {
    let mut out = String::new();
    render_into(ast, &mut out);
    out
}

fn render_into(ast: &Ast, out: &mut String) {
    match ast {
        Ast::Lit { value, .. } => out.push_str(&value.to_string()),
        Ast::Var { name, .. } => out.push_str(name),
        Ast::Apply { func, args, .. } => {
            out.push('(');
            render_into(func, out);
            for a in args {
                out.push(' ');
                render_into(a, out);
            }
            out.push(')');
        }
        Ast::Abs { params, body, .. } => {
            out.push_str("(fn [");
            for (i, (name, _)) in params.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(name);
            }
            out.push_str("] ");
            render_into(body, out);
            out.push(')');
        }
        Ast::Let {
            name, bound, body, ..
        } => {
            out.push_str("(let [");
            out.push_str(name);
            out.push(' ');
            render_into(bound, out);
            out.push_str("] ");
            render_into(body, out);
            out.push(')');
        }
    }
}

enum FrameKind {
    Root,
    Abs { params: Vec<(String, Type)> },
    Let { name: String, bound: Ast },
}

struct Frame {
    kind: FrameKind,
    stack: Vec<Ast>,
}

impl Frame {
    fn bindings(&self) -> Vec<(String, Type)> {
        match &self.kind {
            FrameKind::Root => Vec::new(),
            FrameKind::Abs { params } => params.clone(),
            FrameKind::Let { name, bound } => vec![(name.clone(), bound.ty().clone())],
        }
    }
}

struct CompileState<'a> {
    frames: Vec<Frame>,
    subst: Subst,
    supply: VarSupply,
    rigid: HashSet<TypeVar>,
    registry: &'a FunctionRegistry,
    input_types: Vec<Type>,
    abs_counter: u32,
    let_counter: u32,
}

impl<'a> CompileState<'a> {
    fn current(&mut self) -> &mut Frame {
        self.frames.last_mut().expect("root frame always present")
    }

    /// Closes the active abstraction/let frame, if any, pushing its
    /// result onto the parent stack. An abstraction whose frame produced
    /// no AST vanishes; a let whose frame produced no body restores the
    /// bound expression to the parent.
    fn close_child_frame(&mut self) {
        if self.frames.len() == 1 {
            return;
        }
        let mut frame = self.frames.pop().expect("child frame");
        let body = frame.stack.pop();
        let parent = self.current();
        match frame.kind {
            FrameKind::Root => unreachable!("root frame is never popped"),
            FrameKind::Abs { params } => {
                if let Some(body) = body {
                    let param_types: Vec<Type> = params.iter().map(|(_, t)| t.clone()).collect();
                    let ty = Type::func(param_types, body.ty().clone());
                    parent.stack.push(Ast::Abs {
                        params,
                        body: Box::new(body),
                        ty,
                    });
                }
            }
            FrameKind::Let { name, bound } => match body {
                Some(body) => {
                    let ty = body.ty().clone();
                    parent.stack.push(Ast::Let {
                        name,
                        bound: Box::new(bound),
                        body: Box::new(body),
                        ty,
                    });
                }
                None => parent.stack.push(bound),
            },
        }
    }

    /// In-scope local variables, innermost frame first, declaration order
    /// within a frame. Problem inputs are not local variables.
    fn scope(&self) -> Vec<(String, Type)> {
        let mut out = Vec::new();
        for frame in self.frames.iter().rev() {
            out.extend(frame.bindings());
        }
        out
    }

    fn process(&mut self, gene: &Gene) {
        match gene {
            Gene::Lit { value, ty } => {
                debug_assert!(ty.is_monomorphic(), "literal types are monomorphic");
                self.current().stack.push(Ast::Lit {
                    value: value.clone(),
                    ty: ty.clone(),
                });
            }
            Gene::Input(i) => {
                if let Some(ty) = self.input_types.get(*i).cloned() {
                    self.current().stack.push(Ast::Var {
                        name: format!("input{i}"),
                        ty,
                    });
                }
                // Out-of-range input references NOOP.
            }
            Gene::Fn(name) => {
                if let Ok(entry) = self.registry.lookup(name) {
                    let ty = entry.scheme().instantiate(&mut self.supply);
                    self.current().stack.push(Ast::Var {
                        name: name.clone(),
                        ty,
                    });
                }
                // Unknown names NOOP; the genetic source never emits them.
            }
            Gene::Var(k) => {
                let scope = self.scope();
                if scope.is_empty() {
                    return;
                }
                let (name, ty) = scope[k % scope.len()].clone();
                self.current().stack.push(Ast::Var { name, ty });
            }
            Gene::Apply => self.try_apply(),
            Gene::Abs(arity) => {
                self.close_child_frame();
                let params: Vec<(String, Type)> = (0..*arity)
                    .map(|_| {
                        let name = format!("a{}", self.abs_counter);
                        self.abs_counter += 1;
                        (name, Type::Var(self.supply.fresh()))
                    })
                    .collect();
                self.frames.push(Frame {
                    kind: FrameKind::Abs { params },
                    stack: Vec::new(),
                });
            }
            Gene::Let => {
                self.close_child_frame();
                if let Some(bound) = self.current().stack.pop() {
                    let name = format!("x{}", self.let_counter);
                    self.let_counter += 1;
                    self.frames.push(Frame {
                        kind: FrameKind::Let { name, bound },
                        stack: Vec::new(),
                    });
                }
                // Empty stack: the let NOOPs entirely.
            }
        }
    }

    /// Function application against the current frame's stack.
    ///
    /// Pops the topmost function-typed AST, then fills parameters in pop
    /// order — the last parameter takes the topmost unifying AST — so a
    /// genome that pushes arguments left to right applies them in
    /// positional order. If any parameter cannot be filled the stack is
    /// restored untouched.
    fn try_apply(&mut self) {
        let subst = self.subst.clone();
        let rigid = self.rigid.clone();
        let frame = self.current();

        let fn_idx = match frame
            .stack
            .iter()
            .rposition(|ast| subst.apply(ast.ty()).as_function().is_some())
        {
            Some(i) => i,
            None => return,
        };
        let func = frame.stack.remove(fn_idx);
        let fn_ty = subst.apply(func.ty());
        let (params, ret) = {
            let (p, r) = fn_ty.as_function().expect("function type");
            (p.to_vec(), r.clone())
        };

        let mut working = subst;
        let mut taken: Vec<Option<(usize, Ast)>> = vec![None; params.len()];
        let mut used: Vec<usize> = Vec::new();
        let mut ok = true;

        for pi in (0..params.len()).rev() {
            let want = working.apply(&params[pi]);
            let mut found = None;
            for idx in (0..frame.stack.len()).rev() {
                if used.contains(&idx) {
                    continue;
                }
                let have = working.apply(frame.stack[idx].ty());
                if let Ok(step) = unify_with_rigids(&have, &want, &rigid) {
                    working = step.compose(&working);
                    found = Some(idx);
                    break;
                }
            }
            match found {
                Some(idx) => {
                    used.push(idx);
                    taken[pi] = Some((idx, frame.stack[idx].clone()));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }

        if !ok {
            frame.stack.insert(fn_idx, func);
            return;
        }

        // Remove consumed ASTs (descending index order keeps positions valid).
        used.sort_unstable_by(|a, b| b.cmp(a));
        for idx in used {
            frame.stack.remove(idx);
        }
        let args: Vec<Ast> = taken
            .into_iter()
            .map(|slot| slot.expect("all parameters filled").1)
            .collect();
        frame.stack.push(Ast::Apply {
            func: Box::new(func),
            args,
            ty: ret,
        });
        self.subst = working;
    }
}

/// Compiles a genome against a problem signature. Signature type
/// variables are renamed fresh and treated as rigid: an evolved program
/// may not specialize a polymorphic input or output type.
///
/// Returns the topmost stacked AST whose type unifies with the output
/// type, with the final substitution applied throughout, or `None` when
/// no stacked AST is compatible.
pub fn compile(
    genome: &Genome,
    input_types: &[Type],
    output_type: &Type,
    registry: &FunctionRegistry,
) -> Option<Ast> {
    let mut supply = VarSupply::new();

    // Rename signature variables to fresh rigid variables so they cannot
    // collide with or be captured by compilation-local variables.
    let mut sig_vars: Vec<TypeVar> = Vec::new();
    for t in input_types.iter().chain(std::iter::once(output_type)) {
        for v in t.vars() {
            if !sig_vars.contains(&v) {
                sig_vars.push(v);
            }
        }
    }
    let renaming: HashMap<TypeVar, Type> = sig_vars
        .iter()
        .map(|v| (*v, Type::Var(supply.fresh())))
        .collect();
    let rigid: HashSet<TypeVar> = renaming
        .values()
        .map(|t| match t {
            Type::Var(v) => *v,
            _ => unreachable!(),
        })
        .collect();
    let renamed_inputs: Vec<Type> = input_types
        .iter()
        .map(|t| crate::typesys::rename_vars(t, &renaming))
        .collect();
    let renamed_output = crate::typesys::rename_vars(output_type, &renaming);

    let mut state = CompileState {
        frames: vec![Frame {
            kind: FrameKind::Root,
            stack: Vec::new(),
        }],
        subst: Subst::empty(),
        supply,
        rigid,
        registry,
        input_types: renamed_inputs,
        abs_counter: 0,
        let_counter: 0,
    };

    for gene in &genome.genes {
        state.process(gene);
    }
    while state.frames.len() > 1 {
        state.close_child_frame();
    }

    let root = state.frames.pop().expect("root frame");
    let subst = state.subst;
    for candidate in root.stack.iter().rev() {
        let have = subst.apply(candidate.ty());
        let want = subst.apply(&renamed_output);
        if let Ok(step) = unify_with_rigids(&have, &want, &state.rigid) {
            let final_subst = step.compose(&subst);
            return Some(candidate.apply_subst(&final_subst));
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TypeCheckError {
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("literal {0} does not conform to its annotation {1}")]
    BadLiteral(String, Type),
    #[error(transparent)]
    Unify(#[from] UnifyError),
}

/// Typing environment for the verification oracle: schemes for stdlib
/// functions and problem inputs, plus the signature variables that must
/// stay rigid.
pub struct TypeEnv {
    schemes: HashMap<String, Scheme>,
    rigid: HashSet<TypeVar>,
    supply_start: u32,
}

impl TypeEnv {
    pub fn new(registry: &FunctionRegistry, input_types: &[Type], output_type: &Type) -> TypeEnv {
        let mut schemes: HashMap<String, Scheme> = registry
            .entries()
            .map(|e| (e.name().to_string(), e.scheme().clone()))
            .collect();
        let mut rigid = HashSet::new();
        let mut max_var = 0u32;
        for (i, t) in input_types.iter().enumerate() {
            for v in t.vars() {
                rigid.insert(v);
                max_var = max_var.max(v.0 + 1);
            }
            schemes.insert(format!("input{i}"), Scheme::mono(t.clone()));
        }
        for v in output_type.vars() {
            rigid.insert(v);
            max_var = max_var.max(v.0 + 1);
        }
        TypeEnv {
            schemes,
            rigid,
            supply_start: max_var,
        }
    }

    pub fn rigid_vars(&self) -> &HashSet<TypeVar> {
        &self.rigid
    }
}

struct InferCtx<'a> {
    env: &'a TypeEnv,
    supply: VarSupply,
    subst: Subst,
    locals: Vec<(String, Type)>,
}

impl<'a> InferCtx<'a> {
    fn unify(&mut self, t1: &Type, t2: &Type) -> Result<(), TypeCheckError> {
        let step = unify_with_rigids(&self.subst.apply(t1), &self.subst.apply(t2), &self.env.rigid)?;
        self.subst = step.compose(&self.subst);
        Ok(())
    }

    fn infer(&mut self, ast: &Ast) -> Result<Type, TypeCheckError> {
        match ast {
            Ast::Lit { value, ty } => {
                if !ty.is_monomorphic() || !value_conforms(value, ty) {
                    return Err(TypeCheckError::BadLiteral(value.to_string(), ty.clone()));
                }
                // Shape conformance does not pin empty-collection element
                // types, so also check the inferable part agrees.
                if let Some(inferred) = infer_literal_type(value) {
                    self.unify(&inferred, ty)?;
                }
                Ok(ty.clone())
            }
            Ast::Var { name, .. } => {
                if let Some((_, t)) = self.locals.iter().rev().find(|(n, _)| n == name) {
                    return Ok(t.clone());
                }
                match self.env.schemes.get(name) {
                    Some(scheme) => Ok(scheme.instantiate(&mut self.supply)),
                    None => Err(TypeCheckError::Unbound(name.clone())),
                }
            }
            Ast::Apply { func, args, .. } => {
                let fn_ty = self.infer(func)?;
                let mut arg_tys = Vec::with_capacity(args.len());
                for a in args {
                    arg_tys.push(self.infer(a)?);
                }
                let ret = Type::Var(self.supply.fresh());
                let expected = Type::func(arg_tys, ret.clone());
                self.unify(&fn_ty, &expected)?;
                Ok(ret)
            }
            Ast::Abs { params, body, .. } => {
                let depth = self.locals.len();
                let mut param_tys = Vec::with_capacity(params.len());
                for (name, _) in params {
                    let t = Type::Var(self.supply.fresh());
                    self.locals.push((name.clone(), t.clone()));
                    param_tys.push(t);
                }
                let body_ty = self.infer(body)?;
                self.locals.truncate(depth);
                Ok(Type::func(param_tys, body_ty))
            }
            Ast::Let {
                name, bound, body, ..
            } => {
                // Monomorphic binding: the bound type is not generalized.
                let bound_ty = self.infer(bound)?;
                self.locals.push((name.clone(), bound_ty));
                let body_ty = self.infer(body);
                self.locals.pop();
                body_ty
            }
        }
    }
}

/// Independent bottom-up inference of an AST's most general type. Node
/// annotations are ignored except for literal leaves, whose declared
/// monomorphic type is data. Used to verify `compile`, never during it.
pub fn typecheck(ast: &Ast, env: &TypeEnv) -> Result<Type, TypeCheckError> {
    let mut ctx = InferCtx {
        env,
        supply: VarSupply::starting_at(env.supply_start),
        subst: Subst::empty(),
        locals: Vec::new(),
    };
    let ty = ctx.infer(ast)?;
    Ok(ctx.subst.apply(&ty))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::parse_genome;
    use crate::stdlib::registry;
    use crate::typesys::canonicalize;

    fn compile_text(genes: &str, inputs: &[Type], output: &Type) -> Option<Ast> {
        let genome = parse_genome(genes).unwrap();
        compile(&genome, inputs, output, registry())
    }

    #[test]
    fn single_literal_compiles() {
        let ast = compile_text("LIT Int 5", &[], &Type::INT).unwrap();
        assert_eq!(render_ast(&ast), "5");
        assert_eq!(ast.ty(), &Type::INT);
    }

    #[test]
    fn exact_arity_application() {
        let ast = compile_text(
            "IN 0\nIN 1\nFN int-add\nAPPLY",
            &[Type::INT, Type::INT],
            &Type::INT,
        )
        .unwrap();
        assert_eq!(render_ast(&ast), "(int-add input0 input1)");
    }

    #[test]
    fn unsatisfied_apply_noops() {
        let ast = compile_text("LIT Int 5\nFN int-add\nAPPLY", &[], &Type::INT).unwrap();
        assert_eq!(render_ast(&ast), "5");
    }

    #[test]
    fn figure_sum_2d_shape() {
        let inputs = [Type::vector(Type::vector(Type::INT))];
        let ast = compile_text(
            "IN 0\nFN vector-reverse\nFN mapcat\nAPPLY\nFN int-add\nFN reduce-vector\nAPPLY",
            &inputs,
            &Type::INT,
        )
        .unwrap();
        assert_eq!(
            render_ast(&ast),
            "(reduce-vector int-add (mapcat vector-reverse input0))"
        );
    }

    #[test]
    fn output_incompatible_genome_compiles_to_nothing() {
        assert!(compile_text("LIT Int 5", &[], &Type::STRING).is_none());
        assert!(compile_text("", &[], &Type::INT).is_none());
    }

    #[test]
    fn out_of_range_input_noops() {
        let ast = compile_text("IN 3\nLIT Int 1", &[Type::INT], &Type::INT).unwrap();
        assert_eq!(render_ast(&ast), "1");
    }

    #[test]
    fn local_var_noops_without_scope() {
        let ast = compile_text("VAR 0\nLIT Int 2", &[], &Type::INT).unwrap();
        assert_eq!(render_ast(&ast), "2");
    }

    #[test]
    fn abstraction_body_via_let() {
        // (let [x0 (fn [a0] (int-inc a0))] (map-vector x0 input0))
        let inputs = [Type::vector(Type::INT)];
        let ast = compile_text(
            "FN-ABS 1\nVAR 0\nFN int-inc\nAPPLY\nLET\nVAR 0\nIN 0\nFN map-vector\nAPPLY",
            &inputs,
            &Type::vector(Type::INT),
        )
        .unwrap();
        assert_eq!(
            render_ast(&ast),
            "(let [x0 (fn [a0] (int-inc a0))] (map-vector x0 input0))"
        );
    }

    #[test]
    fn empty_let_frame_restores_bound() {
        // The let consumes the literal and its frame never produces a
        // body, so the bound expression is restored at genome end.
        let ast = compile_text("LIT Int 7\nLET", &[], &Type::INT).unwrap();
        assert_eq!(render_ast(&ast), "7");
    }

    #[test]
    fn typecheck_agrees_with_compile() {
        let inputs = [Type::INT, Type::INT];
        let ast = compile_text("IN 0\nIN 1\nFN int-add\nAPPLY", &inputs, &Type::INT).unwrap();
        let env = TypeEnv::new(registry(), &inputs, &Type::INT);
        assert_eq!(typecheck(&ast, &env).unwrap(), Type::INT);
    }

    #[test]
    fn typecheck_application_of_polymorphic_get() {
        // (map-get m "k") where m: Map[String,Int] comes out Int.
        let m = Type::map(Type::STRING, Type::INT);
        let ast = Ast::Apply {
            func: Box::new(Ast::Var {
                name: "map-get".into(),
                ty: Type::INT, // annotations are ignored by the oracle
            }),
            args: vec![
                Ast::Var {
                    name: "input0".into(),
                    ty: Type::INT,
                },
                Ast::Lit {
                    value: Value::Str("k".into()),
                    ty: Type::STRING,
                },
            ],
            ty: Type::INT,
        };
        let env = TypeEnv::new(registry(), &[m], &Type::INT);
        assert_eq!(typecheck(&ast, &env).unwrap(), Type::INT);
    }

    #[test]
    fn typecheck_lambda_is_most_general() {
        let ast = Ast::Abs {
            params: vec![("a0".into(), Type::INT)],
            body: Box::new(Ast::Var {
                name: "a0".into(),
                ty: Type::INT,
            }),
            ty: Type::INT,
        };
        let env = TypeEnv::new(registry(), &[], &Type::var(0));
        let ty = typecheck(&ast, &env).unwrap();
        assert_eq!(
            canonicalize(&ty),
            Type::func(vec![Type::var(0)], Type::var(0))
        );
    }

    #[test]
    fn rigid_output_rejects_specialized_program() {
        // Problem: forall a. a -> a. A constant Int program must not
        // satisfy the rigid polymorphic output.
        let ast = compile_text("LIT Int 5", &[Type::var(0)], &Type::var(0));
        assert!(ast.is_none());
        // The input itself does satisfy it.
        let ast = compile_text("IN 0", &[Type::var(0)], &Type::var(0)).unwrap();
        assert_eq!(render_ast(&ast), "input0");
    }

    #[test]
    fn compile_is_deterministic() {
        let genes = "IN 0\nFN vector-reverse\nFN mapcat\nAPPLY\nFN int-add\nFN reduce-vector\nAPPLY";
        let inputs = [Type::vector(Type::vector(Type::INT))];
        let a = compile_text(genes, &inputs, &Type::INT).unwrap();
        let b = compile_text(genes, &inputs, &Type::INT).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noop_insertion_preserves_behavior() {
        // An APPLY in an empty-stack prefix NOOPs and the result is
        // unchanged.
        let inputs = [Type::INT, Type::INT];
        let plain = compile_text("IN 0\nIN 1\nFN int-add\nAPPLY", &inputs, &Type::INT).unwrap();
        let noisy =
            compile_text("APPLY\nIN 0\nIN 1\nFN int-add\nAPPLY", &inputs, &Type::INT).unwrap();
        assert_eq!(plain, noisy);
    }

    #[test]
    fn scope_safety_no_free_locals() {
        let inputs = [Type::vector(Type::INT)];
        let ast = compile_text(
            "FN-ABS 1\nVAR 0\nFN int-inc\nAPPLY\nLET\nVAR 0\nIN 0\nFN map-vector\nAPPLY",
            &inputs,
            &Type::vector(Type::INT),
        )
        .unwrap();
        for name in ast.free_var_names() {
            assert!(
                name.starts_with("input") || registry().contains(&name),
                "unexpected free variable {name}"
            );
        }
    }
}
