//! Ground truth by direct evaluation on finite graphs, the girth guard
//! under which symbolic counts are exact, and seeded verification runs.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::DistanceConfig;
use crate::counting::{count_formula, CountError};
use crate::formula::{Atom, Dnf, Formula};
use crate::graph::{Girth, Graph};
use crate::poly::Poly2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("parameter a{param} is not assigned (only {assigned} given)")]
    Unassigned { param: u32, assigned: usize },
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("graph is not regular")]
    NotRegular,
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error(transparent)]
    Count(#[from] CountError),
}

/// Number of vertices `x` satisfying `f` when parameter `a_i` is
/// `params[i - 1]`.
pub fn brute_count(g: &Graph, f: &Formula, params: &[usize]) -> Result<u64, OracleError> {
    let maxk = f.max_constants();
    check_params(g, &maxk, params)?;
    // distances from each parameter, explored only as far as its largest
    // constant; vertices outside every ball see all atoms false
    let mut dist: HashMap<usize, Vec<Option<u32>>> = HashMap::new();
    let slots: Vec<u32> = maxk.keys().copied().collect();
    for (slot, (&p, &k)) in maxk.iter().enumerate() {
        for (v, d) in g.ball(&[params[p as usize - 1]], k as usize) {
            dist.entry(v).or_insert_with(|| vec![None; slots.len()])[slot] = Some(d as u32);
        }
    }
    let slot_of: BTreeMap<u32, usize> = slots.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut total = 0u64;
    for ds in dist.values() {
        if f.eval(&|a: Atom| ds[slot_of[&a.param]] == Some(a.k)) {
            total += 1;
        }
    }
    if f.eval(&|_| false) {
        total += (g.n() - dist.len()) as u64;
    }
    Ok(total)
}

fn check_params(g: &Graph, maxk: &BTreeMap<u32, u32>, params: &[usize]) -> Result<(), OracleError> {
    if let Some(&p) = maxk.keys().find(|&&p| p as usize > params.len()) {
        return Err(OracleError::Unassigned { param: p, assigned: params.len() });
    }
    if let Some(&v) = params.iter().find(|&&v| v >= g.n()) {
        return Err(OracleError::OutOfRange { vertex: v, n: g.n() });
    }
    Ok(())
}

/// Girth bound `2R` with `R` the interaction radius of `f`.
pub fn girth_requirement(f: &Formula) -> usize {
    2 * f.interaction_radius() as usize
}

/// Regular and of girth above `2R`: the symbolic count of `f` is then exact
/// on `g` for every parameter tuple.
pub fn admissible(g: &Graph, f: &Formula) -> bool {
    let need = girth_requirement(f);
    g.regular_degree().is_some() && g.girth(Some(need)).exceeds(need)
}

/// Largest pair distance that can matter for the symbolic count:
/// `max (c_i + c_j)` over parameter pairs, `c_i` the largest constant on
/// `a_i`. Farther pairs behave exactly like pairs in different components.
pub fn relevant_bound(f: &Formula) -> u32 {
    let c = f.max_constants();
    let cs: Vec<u32> = c.values().copied().collect();
    let mut best = 0;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            best = best.max(cs[i] + cs[j]);
        }
    }
    best
}

/// Both sides of the counting identity for one parameter tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleCheck {
    pub params: Vec<usize>,
    pub brute: u64,
    pub poly: Poly2,
    pub value: BigInt,
}

impl TupleCheck {
    pub fn holds(&self) -> bool {
        self.value == BigInt::from(self.brute)
    }
}

/// Precomputed data for checking one formula on one regular graph.
pub struct Checker<'a> {
    pub graph: &'a Graph,
    pub formula: &'a Formula,
    pub degree: usize,
    dnf: Dnf,
    bound: u32,
    n_params: usize,
}

impl<'a> Checker<'a> {
    pub fn new(graph: &'a Graph, formula: &'a Formula) -> Result<Self, OracleError> {
        if graph.n() == 0 {
            return Err(OracleError::EmptyGraph);
        }
        let degree = graph.regular_degree().ok_or(OracleError::NotRegular)?;
        Ok(Checker {
            graph,
            formula,
            degree,
            dnf: formula.to_dnf(),
            bound: relevant_bound(formula),
            n_params: formula.param_count() as usize,
        })
    }

    pub fn param_count(&self) -> usize {
        self.n_params
    }

    pub fn check(&self, params: &[usize]) -> Result<TupleCheck, OracleError> {
        let brute = brute_count(self.graph, self.formula, params)?;
        let cfg = DistanceConfig::from_graph_bounded(self.graph, &params[..self.n_params], self.bound as usize);
        let poly = count_formula(&cfg, &self.dnf)?;
        let value = poly.eval_u64(self.graph.n() as u64, self.degree as u64);
        Ok(TupleCheck { params: params.to_vec(), brute, poly, value })
    }

    /// Checks every parameter tuple, returning the first failure.
    pub fn exhaustive(&self) -> Result<Option<TupleCheck>, OracleError> {
        let n = self.graph.n();
        let k = self.n_params;
        let total = n.pow(k as u32);
        let failures: Vec<Option<TupleCheck>> = (0..total)
            .into_par_iter()
            .map(|mut code| {
                let mut params = vec![0; k];
                for slot in params.iter_mut() {
                    *slot = code % n;
                    code /= n;
                }
                self.check(&params).map(|c| (!c.holds()).then_some(c))
            })
            .collect::<Result<_, _>>()?;
        Ok(failures.into_iter().flatten().next())
    }
}

/// How parameter tuples are drawn in [`verify`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// Every parameter uniform over the vertices, independently.
    Uniform,
    /// `a1` uniform; the other parameters uniform over the ball of the given
    /// radius around `a1`, so that parameters interact.
    Local { radius: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub check: TupleCheck,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub vertices: usize,
    pub degree: usize,
    pub girth: Girth,
    pub girth_needed: usize,
    pub formula: String,
    pub sampling: Sampling,
    pub attempted: usize,
    pub admissible: usize,
    pub passed: usize,
    pub counterexample: Option<Counterexample>,
    pub seed: u64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.passed == self.admissible
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RESULT {}", if self.passed() { "pass" } else { "fail" })?;
        writeln!(f, "graph vertices={} degree={} girth={}", self.vertices, self.degree, self.girth)?;
        writeln!(f, "formula {}", self.formula)?;
        writeln!(f, "girth_needed {}", self.girth_needed)?;
        match self.sampling {
            Sampling::Uniform => writeln!(f, "sampling uniform")?,
            Sampling::Local { radius } => writeln!(f, "sampling local radius={radius}")?,
        }
        writeln!(f, "attempted {}", self.attempted)?;
        writeln!(f, "admissible {}", self.admissible)?;
        writeln!(f, "passed {}", self.passed)?;
        writeln!(f, "seed {}", self.seed)?;
        if let Some(cx) = &self.counterexample {
            let params: Vec<String> =
                cx.check.params.iter().enumerate().map(|(i, v)| format!("a{}={}", i + 1, v)).collect();
            writeln!(
                f,
                "COUNTEREXAMPLE trial={} params={} brute={} poly={} value={}",
                cx.trial,
                params.join(","),
                cx.check.brute,
                cx.check.poly,
                cx.check.value
            )?;
        }
        Ok(())
    }
}

/// Draws `trials` parameter tuples from a seeded generator and compares
/// brute counts with evaluated polynomials. Trials run in parallel; the
/// report only depends on the inputs and the seed.
pub fn verify(
    g: &Graph,
    schema: &Formula,
    trials: usize,
    seed: u64,
    sampling: Sampling,
) -> Result<VerifyReport, OracleError> {
    let checker = Checker::new(g, schema)?;
    let need = girth_requirement(schema);
    let girth = g.girth(Some(need));
    let ok = girth.exceeds(need);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = checker.param_count();
    let tuples: Vec<Vec<usize>> = (0..trials).map(|_| draw(g, k, sampling, &mut rng)).collect();

    let mut report = VerifyReport {
        vertices: g.n(),
        degree: checker.degree,
        girth,
        girth_needed: need,
        formula: schema.to_string(),
        sampling,
        attempted: trials,
        admissible: 0,
        passed: 0,
        counterexample: None,
        seed,
    };
    if !ok {
        return Ok(report);
    }
    let results: Vec<TupleCheck> = tuples.par_iter().map(|t| checker.check(t)).collect::<Result<_, _>>()?;
    report.admissible = results.len();
    for (trial, check) in results.into_iter().enumerate() {
        if check.holds() {
            report.passed += 1;
        } else if report.counterexample.is_none() {
            report.counterexample = Some(Counterexample { trial, check });
        }
    }
    Ok(report)
}

fn draw(g: &Graph, k: usize, sampling: Sampling, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = g.n();
    match sampling {
        Sampling::Uniform => (0..k).map(|_| rng.random_range(0..n)).collect(),
        Sampling::Local { radius } => {
            if k == 0 {
                return Vec::new();
            }
            let first = rng.random_range(0..n);
            let ball: Vec<usize> = g.ball(&[first], radius).into_iter().map(|(v, _)| v).collect();
            let mut out = vec![first];
            out.extend((1..k).map(|_| ball[rng.random_range(0..ball.len())]));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treegen::{complete_graph, named_graph};

    fn f(s: &str) -> Formula {
        Formula::parse(s).unwrap()
    }

    #[test]
    fn brute_examples() {
        let pet = named_graph("petersen").unwrap();
        assert_eq!(brute_count(&pet, &f("D1(x,a1)"), &[0]).unwrap(), 3);
        assert_eq!(brute_count(&pet, &f("D2(x,a1)"), &[0]).unwrap(), 6);
        assert_eq!(brute_count(&pet, &f("D0(x,a1)"), &[4]).unwrap(), 1);
        assert_eq!(brute_count(&pet, &f("!D1(x,a1)"), &[0]).unwrap(), 7);
        assert_eq!(brute_count(&pet, &f("!D0(x,a1) & !D1(x,a1) & !D2(x,a1)"), &[0]).unwrap(), 0);
        assert!(matches!(
            brute_count(&pet, &f("D1(x,a2)"), &[0]),
            Err(OracleError::Unassigned { param: 2, .. })
        ));
        assert!(brute_count(&pet, &f("D1(x,a1)"), &[10]).is_err());
    }

    #[test]
    fn admissibility_examples() {
        let pet = named_graph("petersen").unwrap();
        assert!(admissible(&pet, &f("D1(x,a1)")));
        assert!(!admissible(&pet, &f("D2(x,a1)")));
        let hea = named_graph("heawood").unwrap();
        assert!(!admissible(&hea, &f("D2(x,a1)")));
        assert!(admissible(&hea, &f("D1(x,a1)")));
    }

    #[test]
    fn verify_examples() {
        let hea = named_graph("heawood").unwrap();
        let report = verify(&hea, &f("D0(x,a1) | D0(x,a2)"), 200, 7, Sampling::Uniform).unwrap();
        assert_eq!(report.admissible, 200);
        assert!(report.passed());
        assert!(report.to_string().starts_with("RESULT pass\n"));

        let k4 = complete_graph(4);
        let report = verify(&k4, &f("D2(x,a1)"), 50, 1, Sampling::Uniform).unwrap();
        assert_eq!((report.attempted, report.admissible, report.passed), (50, 0, 0));
        assert!(report.counterexample.is_none());

        let path = crate::treegen::path_graph(3);
        assert_eq!(verify(&path, &f("D1(x,a1)"), 1, 0, Sampling::Uniform), Err(OracleError::NotRegular));
    }

    #[test]
    fn verify_is_deterministic() {
        let hea = named_graph("heawood").unwrap();
        let schema = f("D1(x,a1) & !D0(x,a2)");
        let a = verify(&hea, &schema, 100, 42, Sampling::Local { radius: 2 }).unwrap();
        let b = verify(&hea, &schema, 100, 42, Sampling::Local { radius: 2 }).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn counterexample_reported_when_inexact() {
        // on K4 the guard fails; checking a tuple anyway exposes the gap
        let k4 = complete_graph(4);
        let schema = f("D1(x,a1) & D1(x,a2)");
        let check = Checker::new(&k4, &schema).unwrap().check(&[0, 1]).unwrap();
        assert_eq!(check.brute, 2);
        assert!(!check.holds());
    }
}
