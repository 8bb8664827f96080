//! Genes, genomes, and the weighted genetic source they are sampled from.
//!
//! A genome is a flat sequence of AST-building instructions. Any gene
//! sequence is a valid genome; the compiler tolerates everything. The
//! genetic source holds gene templates with positive weights; ephemeral
//! random constants sample a fresh value each time they are drawn.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interp::{parse_value, Value};
use crate::problems::ProblemSpec;
use crate::stdlib::FunctionRegistry;
use crate::typesys::{parse_type, Ground, Type};

#[derive(Clone, Debug, PartialEq)]
pub enum Gene {
    /// A monomorphic literal value.
    Lit { value: Value, ty: Type },
    /// Reference to a problem input by argument position.
    Input(usize),
    /// Reference to a registry function by name.
    Fn(String),
    /// Function application against the AST stack.
    Apply,
    /// Opens a function abstraction with the given parameter count (1-3).
    Abs(usize),
    /// Binds the top of the stack as a local variable.
    Let,
    /// Reference to an in-scope local variable.
    Var(usize),
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Genome {
    pub genes: Vec<Gene>,
}

impl Genome {
    pub fn new(genes: Vec<Gene>) -> Genome {
        Genome { genes }
    }

    pub fn len(&self) -> usize {
        self.genes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.genes.is_empty()
    }
}

impl fmt::Display for Gene {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gene::Lit { value, ty } => write!(f, "LIT {ty} {value}"),
            Gene::Input(i) => write!(f, "IN {i}"),
            Gene::Fn(name) => write!(f, "FN {name}"),
            Gene::Apply => f.write_str("APPLY"),
            Gene::Abs(arity) => write!(f, "FN-ABS {arity}"),
            Gene::Let => f.write_str("LET"),
            Gene::Var(i) => write!(f, "VAR {i}"),
        }
    }
}

/// One gene per line.
pub fn render_genome(genome: &Genome) -> String {
    let mut out = String::new();
    for gene in &genome.genes {
        out.push_str(&gene.to_string());
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("genome line {line}: {msg}")]
pub struct GenomeParseError {
    pub line: usize,
    pub msg: String,
}

/// Parses the line format produced by [`render_genome`]. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_genome(text: &str) -> Result<Genome, GenomeParseError> {
    let mut genes = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| GenomeParseError {
            line: idx + 1,
            msg: msg.to_string(),
        };
        let (head, rest) = match line.split_once(' ') {
            Some((h, r)) => (h, r.trim()),
            None => (line, ""),
        };
        let gene = match head {
            "LIT" => {
                let (ty_text, value_text) = rest
                    .split_once(' ')
                    .ok_or_else(|| err("LIT needs a type and a value"))?;
                let ty = parse_type(ty_text).map_err(|e| err(&e.to_string()))?;
                let value = parse_value(value_text.trim()).map_err(|e| err(&e.to_string()))?;
                Gene::Lit { value, ty }
            }
            "IN" => Gene::Input(rest.parse().map_err(|_| err("bad input index"))?),
            "FN" => {
                if rest.is_empty() {
                    return Err(err("FN needs a name"));
                }
                Gene::Fn(rest.to_string())
            }
            "APPLY" => Gene::Apply,
            "FN-ABS" => {
                let arity: usize = rest.parse().map_err(|_| err("bad abstraction arity"))?;
                if !(1..=3).contains(&arity) {
                    return Err(err("abstraction arity must be 1-3"));
                }
                Gene::Abs(arity)
            }
            "LET" => Gene::Let,
            "VAR" => Gene::Var(rest.parse().map_err(|_| err("bad variable index"))?),
            other => return Err(err(&format!("unknown gene '{other}'"))),
        };
        genes.push(gene);
    }
    Ok(Genome::new(genes))
}

/// Distribution description for an ephemeral random constant generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum ErcKind {
    IntUniform { lo: i64, hi: i64 },
    FloatUniform { lo: f64, hi: f64 },
    PrintableChar,
    LowercaseString { p: f64, max_len: usize },
    BoolCoin,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErcSampler {
    pub ty: Type,
    pub kind: ErcKind,
}

impl ErcSampler {
    /// Default generator for a ground type.
    pub fn default_for(ground: Ground) -> ErcSampler {
        let (ty, kind) = match ground {
            Ground::Int => (Type::INT, ErcKind::IntUniform { lo: -100, hi: 100 }),
            Ground::Float => (
                Type::FLOAT,
                ErcKind::FloatUniform {
                    lo: -100.0,
                    hi: 100.0,
                },
            ),
            Ground::Char => (Type::CHAR, ErcKind::PrintableChar),
            Ground::String => (
                Type::STRING,
                ErcKind::LowercaseString {
                    p: 0.25,
                    max_len: 12,
                },
            ),
            Ground::Boolean => (Type::BOOLEAN, ErcKind::BoolCoin),
        };
        ErcSampler { ty, kind }
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Value {
        match &self.kind {
            ErcKind::IntUniform { lo, hi } => Value::Int(rng.random_range(*lo..=*hi)),
            ErcKind::FloatUniform { lo, hi } => Value::Float(rng.random_range(*lo..=*hi)),
            ErcKind::PrintableChar => Value::Char(rng.random_range(0x20u8..=0x7e) as char),
            ErcKind::LowercaseString { p, max_len } => {
                let mut s = String::new();
                while s.len() < *max_len {
                    s.push(rng.random_range(b'a'..=b'z') as char);
                    if rng.random::<f64>() < *p {
                        break;
                    }
                }
                Value::Str(s)
            }
            ErcKind::BoolCoin => Value::Bool(rng.random()),
        }
    }
}

/// A gene template in the genetic source. Fixed templates always emit the
/// same gene; the others sample per occurrence.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneTemplate {
    Fixed(Gene),
    Erc(ErcSampler),
    /// Abstraction with arity drawn uniformly from 1..=3.
    AbsRandomArity,
    /// Local variable reference with index drawn uniformly below `max`.
    VarRandomIndex { max: usize },
}

impl GeneTemplate {
    fn realize<R: Rng>(&self, rng: &mut R) -> Gene {
        match self {
            GeneTemplate::Fixed(gene) => gene.clone(),
            GeneTemplate::Erc(sampler) => Gene::Lit {
                value: sampler.sample(rng),
                ty: sampler.ty.clone(),
            },
            GeneTemplate::AbsRandomArity => Gene::Abs(rng.random_range(1..=3)),
            GeneTemplate::VarRandomIndex { max } => Gene::Var(rng.random_range(0..*max)),
        }
    }
}

/// Per-entry weights by template kind. The default weights every entry —
/// structural genes included — the same as one function entry.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SourceWeights {
    pub function: f64,
    pub input: f64,
    pub constant: f64,
    pub erc: f64,
    pub apply: f64,
    pub abstraction: f64,
    pub let_binding: f64,
    pub local_var: f64,
}

impl Default for SourceWeights {
    fn default() -> Self {
        SourceWeights {
            function: 1.0,
            input: 1.0,
            constant: 1.0,
            erc: 1.0,
            apply: 1.0,
            abstraction: 1.0,
            let_binding: 1.0,
            local_var: 1.0,
        }
    }
}

impl SourceWeights {
    /// Application-heavy profile used by evolution runs: roughly 40% of
    /// draws are function references, a quarter are applications, and the
    /// rest split between inputs, literals and scope genes.
    pub fn evolution_profile(function_entries: usize, input_count: usize) -> SourceWeights {
        let n = function_entries.max(1) as f64;
        let inputs = input_count.max(1) as f64;
        SourceWeights {
            function: 1.0,
            input: n * 0.40 / inputs,
            constant: n * 0.05,
            erc: n * 0.10,
            apply: n * 0.65,
            abstraction: n * 0.04,
            let_binding: n * 0.04,
            local_var: n * 0.08,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GeneticSource {
    entries: Vec<(GeneTemplate, f64)>,
    dist: WeightedIndex<f64>,
}

impl GeneticSource {
    pub fn new(entries: Vec<(GeneTemplate, f64)>) -> GeneticSource {
        assert!(!entries.is_empty(), "genetic source must not be empty");
        assert!(
            entries.iter().all(|(_, w)| *w > 0.0 && w.is_finite()),
            "weights must be strictly positive"
        );
        let dist = WeightedIndex::new(entries.iter().map(|(_, w)| *w))
            .expect("valid weight distribution");
        GeneticSource { entries, dist }
    }

    pub fn entries(&self) -> &[(GeneTemplate, f64)] {
        &self.entries
    }

    pub fn sample_gene<R: Rng>(&self, rng: &mut R) -> Gene {
        let idx = self.dist.sample(rng);
        self.entries[idx].0.realize(rng)
    }

    /// True when some fixed entry references the given function name.
    pub fn contains_function(&self, name: &str) -> bool {
        self.entries.iter().any(|(t, _)| match t {
            GeneTemplate::Fixed(Gene::Fn(n)) => n == name,
            _ => false,
        })
    }
}

/// Assembles the genetic source for a problem: every polymorphic registry
/// function, every monomorphic function mentioning at least one of the
/// problem's ground types, one input gene per argument, the problem's
/// constants and ERC generators, and the four structural genes.
pub fn build_genetic_source(
    problem: &ProblemSpec,
    registry: &FunctionRegistry,
    weights: &SourceWeights,
) -> GeneticSource {
    let mut entries: Vec<(GeneTemplate, f64)> = Vec::new();
    for entry in registry.entries() {
        let include = entry.is_polymorphic()
            || entry
                .ground_type_tags()
                .iter()
                .any(|g| problem.ground_types.contains(g));
        if include {
            entries.push((
                GeneTemplate::Fixed(Gene::Fn(entry.name().to_string())),
                weights.function,
            ));
        }
    }
    for i in 0..problem.input_types.len() {
        entries.push((GeneTemplate::Fixed(Gene::Input(i)), weights.input));
    }
    for (value, ty) in &problem.constants {
        entries.push((
            GeneTemplate::Fixed(Gene::Lit {
                value: value.clone(),
                ty: ty.clone(),
            }),
            weights.constant,
        ));
    }
    for sampler in problem.erc_samplers() {
        entries.push((GeneTemplate::Erc(sampler), weights.erc));
    }
    entries.push((GeneTemplate::Fixed(Gene::Apply), weights.apply));
    entries.push((GeneTemplate::AbsRandomArity, weights.abstraction));
    entries.push((GeneTemplate::Fixed(Gene::Let), weights.let_binding));
    entries.push((GeneTemplate::VarRandomIndex { max: 4 }, weights.local_var));
    GeneticSource::new(entries)
}

/// Draws a genome whose length is uniform in `[min, max]`, sampling each
/// gene independently from the source.
pub fn random_genome<R: Rng>(
    source: &GeneticSource,
    size_range: (usize, usize),
    rng: &mut R,
) -> Genome {
    let (min, max) = size_range;
    assert!(min >= 1 && max >= min, "invalid genome size range");
    let len = rng.random_range(min..=max);
    Genome::new((0..len).map(|_| source.sample_gene(rng)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::all_problems;
    use crate::stdlib::registry;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn problem(name: &str) -> ProblemSpec {
        all_problems()
            .into_iter()
            .find(|p| p.name == name)
            .unwrap_or_else(|| panic!("no problem {name}"))
    }

    fn tiny_source() -> GeneticSource {
        GeneticSource::new(vec![
            (GeneTemplate::Fixed(Gene::Apply), 1.0),
            (
                GeneTemplate::Fixed(Gene::Lit {
                    value: Value::Int(1),
                    ty: Type::INT,
                }),
                1.0,
            ),
        ])
    }

    #[test]
    fn genome_text_round_trip() {
        let text = "LIT Int 5\nIN 0\nFN map-vector\nAPPLY\nFN-ABS 1\nLET\nVAR 0\n";
        let genome = parse_genome(text).unwrap();
        assert_eq!(render_genome(&genome), text);
        assert_eq!(genome.len(), 7);
    }

    #[test]
    fn genome_text_composite_literal() {
        let text = "LIT Vector[Int] [1 2 3]\nLIT Map[String,Int] {\"k\" 1}\n";
        let genome = parse_genome(text).unwrap();
        assert_eq!(render_genome(&genome), text);
    }

    #[test]
    fn genome_text_rejects_unknown_gene() {
        assert!(parse_genome("BOGUS 1").is_err());
        assert!(parse_genome("FN-ABS 4").is_err());
    }

    #[test]
    fn source_filters_monomorphic_functions_by_ground_type() {
        // sum-2D mentions only Int: char/string-only functions are
        // excluded, int functions and every polymorphic function are in.
        let reg = registry();
        let src = build_genetic_source(&problem("sum-2D"), reg, &SourceWeights::default());
        assert!(src.contains_function("int-add"));
        assert!(!src.contains_function("char-in?"));
        for entry in reg.entries().filter(|e| e.is_polymorphic()) {
            assert!(
                src.contains_function(entry.name()),
                "polymorphic {} missing",
                entry.name()
            );
        }
    }

    #[test]
    fn source_for_empty_ground_set_is_polymorphic_only() {
        // filter-bounds declares no ground types.
        let reg = registry();
        let p = problem("filter-bounds");
        assert!(p.ground_types.is_empty());
        let src = build_genetic_source(&p, reg, &SourceWeights::default());
        for (template, _) in src.entries() {
            if let GeneTemplate::Fixed(Gene::Fn(name)) = template {
                assert!(
                    reg.lookup(name).unwrap().is_polymorphic(),
                    "{name} is monomorphic"
                );
            }
        }
    }

    #[test]
    fn source_union_of_ground_tags() {
        // sum-2-vals uses Map[String,Int]: both String- and Int-tagged
        // functions are present. The expected set is derived by
        // enumerating the registry tags directly.
        let reg = registry();
        let src = build_genetic_source(&problem("sum-2-vals"), reg, &SourceWeights::default());
        for entry in reg.entries() {
            let expected = entry.is_polymorphic()
                || entry.ground_type_tags().contains(&Ground::String)
                || entry.ground_type_tags().contains(&Ground::Int);
            assert_eq!(
                src.contains_function(entry.name()),
                expected,
                "inclusion mismatch for {}",
                entry.name()
            );
        }
        assert!(src.contains_function("string-concat"));
        assert!(src.contains_function("int-add"));
    }

    #[test]
    fn random_genome_fixed_size() {
        let src = tiny_source();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = random_genome(&src, (1, 1), &mut rng);
        assert_eq!(g.len(), 1);
    }

    #[test]
    fn random_genome_mean_length() {
        let src = tiny_source();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let total: usize = (0..10_000)
            .map(|_| random_genome(&src, (50, 250), &mut rng).len())
            .sum();
        let mean = total as f64 / 10_000.0;
        assert!((145.0..=155.0).contains(&mean), "mean length {mean}");
    }

    #[test]
    fn random_genome_deterministic() {
        let reg = registry();
        let src = build_genetic_source(&problem("sum-2D"), reg, &SourceWeights::default());
        let a = random_genome(&src, (50, 250), &mut ChaCha8Rng::seed_from_u64(42));
        let b = random_genome(&src, (50, 250), &mut ChaCha8Rng::seed_from_u64(42));
        assert_eq!(a, b);
    }

    #[test]
    fn weighted_sampling_ratio() {
        let src = GeneticSource::new(vec![
            (GeneTemplate::Fixed(Gene::Apply), 9.0),
            (GeneTemplate::Fixed(Gene::Let), 1.0),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut apply = 0u32;
        let mut lets = 0u32;
        for _ in 0..100_000 {
            match src.sample_gene(&mut rng) {
                Gene::Apply => apply += 1,
                Gene::Let => lets += 1,
                _ => unreachable!(),
            }
        }
        let ratio = apply as f64 / lets as f64;
        assert!((ratio - 9.0).abs() <= 0.45, "ratio {ratio}");
    }

    #[test]
    fn erc_samples_fresh_values() {
        let sampler = ErcSampler::default_for(Ground::Int);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let values: Vec<Value> = (0..50).map(|_| sampler.sample(&mut rng)).collect();
        assert!(values.iter().any(|v| v != &values[0]));
        for v in &values {
            match v {
                Value::Int(i) => assert!((-100..=100).contains(i)),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn erc_string_respects_cap() {
        let sampler = ErcSampler::default_for(Ground::String);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            match sampler.sample(&mut rng) {
                Value::Str(s) => {
                    assert!(!s.is_empty() && s.len() <= 12);
                    assert!(s.bytes().all(|b| b.is_ascii_lowercase()));
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn sampled_genes_stay_in_grammar() {
        let reg = registry();
        let src = build_genetic_source(&problem("sum-2-vals"), reg, &SourceWeights::default());
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5_000 {
            match src.sample_gene(&mut rng) {
                Gene::Lit { value, ty } => {
                    assert!(ty.is_monomorphic());
                    assert!(crate::interp::value_conforms(&value, &ty));
                }
                Gene::Input(i) => assert!(i < 3),
                Gene::Fn(name) => assert!(reg.contains(&name)),
                Gene::Abs(a) => assert!((1..=3).contains(&a)),
                Gene::Var(i) => assert!(i < 4),
                Gene::Apply | Gene::Let => {}
            }
        }
    }
}
