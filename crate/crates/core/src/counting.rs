//! Counting polynomials for quantifier-free definable sets in one object
//! variable, and their partition by parameter configuration.
//!
//! `t1` stands for the size of the universe and `t2` for the degree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{solve_center, CenterResult, ConfigError, DistanceConfig, PairDistance};
use crate::formula::{Atom, Dnf, Formula, LiteralConjunction};
use crate::poly::Poly2;

/// Largest number of disjuncts (or negated atoms in one conjunction)
/// expanded by inclusion–exclusion.
pub const EXPANSION_LIMIT: usize = 20;
pub const PARTITION_PARAM_LIMIT: u32 = 4;
pub const PARTITION_CONSTANT_LIMIT: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("parameter a{param} is not covered by a configuration of {n} parameters")]
    MissingParam { param: u32, n: usize },
    #[error("{count} {what} exceed the inclusion-exclusion limit of {limit}")]
    TooLarge { what: &'static str, count: usize, limit: usize },
    #[error("partition tables support at most {limit} parameters, schema uses {got}")]
    TooManyParams { got: u32, limit: u32 },
    #[error("partition tables support constants up to {limit}, schema uses {got}")]
    ConstantTooLarge { got: u32, limit: u32 },
}

/// Count of `∧ D_{k_i}(x, a_i)` over all parameters of `cfg`.
pub fn count_positive(cfg: &DistanceConfig, ks: &[u32]) -> Result<Poly2, CountError> {
    Ok(match solve_center(cfg, ks)? {
        CenterResult::Empty => Poly2::zero(),
        CenterResult::Nonempty { level: 0, .. } => Poly2::one(),
        CenterResult::Nonempty { level, hull_degree, .. } => {
            let t2 = Poly2::t2();
            &(&t2 - &Poly2::constant(hull_degree)) * &(&t2 - &Poly2::one()).pow(level - 1)
        }
    })
}

/// Count of a conjunction of positive atoms; the empty conjunction is the
/// whole universe.
fn count_atoms(cfg: &DistanceConfig, atoms: &BTreeSet<Atom>) -> Result<Poly2, CountError> {
    if atoms.is_empty() {
        return Ok(Poly2::t1());
    }
    let mut ks: BTreeMap<u32, u32> = BTreeMap::new();
    for a in atoms {
        if a.param as usize > cfg.n() {
            return Err(CountError::MissingParam { param: a.param, n: cfg.n() });
        }
        if *ks.entry(a.param).or_insert(a.k) != a.k {
            return Ok(Poly2::zero());
        }
    }
    let members: Vec<usize> = ks.keys().map(|&p| p as usize - 1).collect();
    let sub = cfg.restrict(&members);
    // A far pair forces emptiness; checking it first also keeps configs
    // whose far entries only stand for "beyond the relevant radius" valid.
    for i in 0..sub.n() {
        for j in i + 1..sub.n() {
            if sub.get(i, j) == PairDistance::Far {
                return Ok(Poly2::zero());
            }
        }
    }
    let ks: Vec<u32> = ks.into_values().collect();
    count_positive(&sub, &ks)
}

struct Counter<'a> {
    cfg: &'a DistanceConfig,
    memo: HashMap<BTreeSet<Atom>, Poly2>,
}

impl Counter<'_> {
    fn atoms(&mut self, atoms: &BTreeSet<Atom>) -> Result<Poly2, CountError> {
        if let Some(p) = self.memo.get(atoms) {
            return Ok(p.clone());
        }
        let p = count_atoms(self.cfg, atoms)?;
        self.memo.insert(atoms.clone(), p.clone());
        Ok(p)
    }

    fn conjunction(&mut self, conj: &LiteralConjunction) -> Result<Poly2, CountError> {
        let negatives: Vec<Atom> = conj.negatives.iter().copied().collect();
        if negatives.len() > EXPANSION_LIMIT {
            return Err(CountError::TooLarge { what: "negated atoms", count: negatives.len(), limit: EXPANSION_LIMIT });
        }
        let mut total = Poly2::zero();
        let mut chosen = conj.positives.clone();
        self.negation_terms(&negatives, 0, &mut chosen, true, &mut total)?;
        Ok(total)
    }

    /// Adds `(−1)^|S| · count(positives ∪ S)` for every subset `S` of
    /// `negatives[from..]` extending the current choice. Subsets putting
    /// two constants on one parameter are empty, as are all their
    /// supersets, so they are pruned.
    fn negation_terms(
        &mut self,
        negatives: &[Atom],
        from: usize,
        chosen: &mut BTreeSet<Atom>,
        positive: bool,
        total: &mut Poly2,
    ) -> Result<(), CountError> {
        let term = self.atoms(chosen)?;
        *total = if positive { &*total + &term } else { &*total - &term };
        for (i, &a) in negatives.iter().enumerate().skip(from) {
            if chosen.iter().any(|c| c.param == a.param && c.k != a.k) {
                continue;
            }
            chosen.insert(a);
            self.negation_terms(negatives, i + 1, chosen, !positive, total)?;
            chosen.remove(&a);
        }
        Ok(())
    }

    fn disjunction_terms(
        &mut self,
        disjuncts: &[LiteralConjunction],
        from: usize,
        current: &LiteralConjunction,
        positive: bool,
        total: &mut Poly2,
    ) -> Result<(), CountError> {
        for (i, d) in disjuncts.iter().enumerate().skip(from) {
            let Some(merged) = current.merge(d) else { continue };
            let term = self.conjunction(&merged)?;
            *total = if positive { &*total + &term } else { &*total - &term };
            self.disjunction_terms(disjuncts, i + 1, &merged, !positive, total)?;
        }
        Ok(())
    }
}

/// Count of a literal conjunction by inclusion–exclusion over its negated
/// atoms. `cfg` must cover every parameter mentioned.
pub fn count_conjunction(cfg: &DistanceConfig, conj: &LiteralConjunction) -> Result<Poly2, CountError> {
    Counter { cfg, memo: HashMap::new() }.conjunction(conj)
}

/// Count of a DNF by inclusion–exclusion over its (possibly overlapping)
/// disjuncts.
pub fn count_formula(cfg: &DistanceConfig, dnf: &Dnf) -> Result<Poly2, CountError> {
    if dnf.disjuncts.len() > EXPANSION_LIMIT {
        return Err(CountError::TooLarge { what: "disjuncts", count: dnf.disjuncts.len(), limit: EXPANSION_LIMIT });
    }
    let mut counter = Counter { cfg, memo: HashMap::new() };
    let mut total = Poly2::zero();
    counter.disjunction_terms(&dnf.disjuncts, 0, &LiteralConjunction::default(), true, &mut total)?;
    Ok(total)
}

/// Shorthand for `count_formula(cfg, &f.to_dnf())`.
pub fn count(cfg: &DistanceConfig, f: &Formula) -> Result<Poly2, CountError> {
    count_formula(cfg, &f.to_dnf())
}

/// One class of parameter configurations: each pair distance is either an
/// exact value up to the table bound or [`PairDistance::Far`], meaning
/// "greater than the bound".
pub type ConfigClass = Vec<PairDistance>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionRow {
    pub classes: Vec<ConfigClass>,
    pub poly: Poly2,
}

/// The counting polynomial of a schema as a function of the parameter
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTable {
    pub schema: Formula,
    pub n: usize,
    /// Pair distances above this bound are indistinguishable.
    pub bound: u32,
    pub rows: Vec<PartitionRow>,
}

impl PartitionTable {
    /// The class of a concrete configuration: upper-triangle pair values
    /// with everything above the bound reported as far.
    pub fn classify(&self, cfg: &DistanceConfig) -> ConfigClass {
        assert_eq!(cfg.n(), self.n, "configuration has the wrong number of parameters");
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                out.push(match cfg.get(i, j) {
                    PairDistance::Finite(d) if d <= self.bound => PairDistance::Finite(d),
                    _ => PairDistance::Far,
                });
            }
        }
        out
    }

    /// Indices of rows whose classes contain the class of `cfg`.
    pub fn matching_rows(&self, cfg: &DistanceConfig) -> Vec<usize> {
        let class = self.classify(cfg);
        (0..self.rows.len()).filter(|&r| self.rows[r].classes.contains(&class)).collect()
    }

    pub fn lookup(&self, cfg: &DistanceConfig) -> Option<&Poly2> {
        let class = self.classify(cfg);
        self.rows.iter().find(|r| r.classes.contains(&class)).map(|r| &r.poly)
    }

    pub fn class_count(&self) -> usize {
        self.rows.iter().map(|r| r.classes.len()).sum()
    }

    /// One line per class, `pattern<TAB>polynomial`, with classes sharing a
    /// polynomial listed together.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            for class in &row.classes {
                out.push_str(&self.pattern(class));
                out.push('\t');
                out.push_str(&row.poly.to_string());
                out.push('\n');
            }
        }
        out
    }

    pub fn pattern(&self, class: &ConfigClass) -> String {
        if self.n < 2 {
            return "true".to_string();
        }
        let mut parts = Vec::new();
        let mut it = class.iter();
        for i in 1..=self.n {
            for j in i + 1..=self.n {
                let value = match it.next().unwrap() {
                    PairDistance::Finite(d) => d.to_string(),
                    PairDistance::Far => format!(">{}", self.bound),
                };
                parts.push(format!("d{i}{j}={value}"));
            }
        }
        parts.join(",")
    }
}

/// Every configuration class realizable by `n` vertices of a forest, with
/// pair values capped at `cap` (values above `cap - 1` collapse to `cap`).
///
/// The convex hull of at most four forest vertices is a (possibly
/// degenerate) quartet tree, so it suffices to enumerate quartet shapes
/// with integer edge lengths in `0..=cap`: shortening an edge longer than
/// `cap` keeps every distance through it above `cap - 1`, and vertices in
/// different trees behave like vertices joined by an edge of length `cap`.
fn realizable_classes(n: usize, cap: u32) -> BTreeSet<Vec<u32>> {
    let mut out = BTreeSet::new();
    let clamp = |d: u32| d.min(cap);
    match n {
        0 | 1 => {
            out.insert(Vec::new());
        }
        2 => {
            for l in 0..=cap {
                out.insert(vec![l]);
            }
        }
        3 => {
            for a in 0..=cap {
                for b in 0..=cap {
                    for c in 0..=cap {
                        out.insert(vec![clamp(a + b), clamp(a + c), clamp(b + c)]);
                    }
                }
            }
        }
        4 => {
            let lens = 0..=cap;
            for p in lens.clone() {
                for q in lens.clone() {
                    for r in lens.clone() {
                        for s in lens.clone() {
                            for m in lens.clone() {
                                // leaves are split {x, y} | {z, w} by the middle edge
                                for [x, y, z, w] in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
                                    let mut pend = [0; 4];
                                    pend[x] = p;
                                    pend[y] = q;
                                    pend[z] = r;
                                    pend[w] = s;
                                    let side = |v: usize| v == x || v == y;
                                    let mut class = Vec::with_capacity(6);
                                    for i in 0..4 {
                                        for j in i + 1..4 {
                                            let mid = if side(i) == side(j) { 0 } else { m };
                                            class.push(clamp(pend[i] + pend[j] + mid));
                                        }
                                    }
                                    out.insert(class);
                                }
                            }
                        }
                    }
                }
            }
        }
        _ => unreachable!("guarded by the caller"),
    }
    out
}

/// The partition of parameter configurations induced by the counting
/// polynomial of `schema`.
///
/// With `c_i` the largest constant on parameter `i` and `B` the maximum of
/// `c_i + c_j` over pairs, any pair at distance above `B` has a negative
/// `ℓ_ij` for every positive combination of its atoms, so every subset term
/// containing both parameters vanishes. All distances above `B` therefore
/// give the same polynomial and form one class.
pub fn partition_table(schema: &Formula) -> Result<PartitionTable, CountError> {
    let n = schema.param_count();
    if n > PARTITION_PARAM_LIMIT {
        return Err(CountError::TooManyParams { got: n, limit: PARTITION_PARAM_LIMIT });
    }
    let constants = schema.max_constants();
    if let Some(&c) = constants.values().max().filter(|&&c| c > PARTITION_CONSTANT_LIMIT) {
        return Err(CountError::ConstantTooLarge { got: c, limit: PARTITION_CONSTANT_LIMIT });
    }
    let n = n as usize;
    let c = |i: usize| constants.get(&(i as u32 + 1)).copied().unwrap_or(0);
    let bound = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| c(i) + c(j)).max().unwrap_or(0);

    let dnf = schema.to_dnf();
    let classes: Vec<ConfigClass> = realizable_classes(n, bound + 1)
        .into_iter()
        .map(|capped| {
            capped.into_iter().map(|d| if d > bound { PairDistance::Far } else { PairDistance::Finite(d) }).collect()
        })
        .collect();
    let polys: Vec<Poly2> = classes
        .par_iter()
        .map(|class| count_formula(&DistanceConfig::from_upper(n, class), &dnf))
        .collect::<Result<_, _>>()?;

    let mut rows: Vec<PartitionRow> = Vec::new();
    for (class, poly) in classes.into_iter().zip(polys) {
        match rows.iter_mut().find(|r| r.poly == poly) {
            Some(row) => row.classes.push(class),
            None => rows.push(PartitionRow { classes: vec![class], poly }),
        }
    }
    Ok(PartitionTable { schema: schema.clone(), n, bound, rows })
}
