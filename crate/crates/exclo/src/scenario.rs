//! Cycle measurement scenarios and the box behaviours on them.
//!
//! A cycle scenario has `n >= 4` dichotomic measurements `0..n` and `n`
//! contexts `{i, i+1 mod n}`; context `i` is kept as the ordered pair
//! `(i, i+1 mod n)`, and a joint outcome lists the outcome of the context's
//! own index first. A PR box assigns probability 1/2 to the two correlated
//! (or, on a chosen odd-cardinality set of contexts, anti-correlated) joint
//! outcomes of every context.

use crate::rat::{rat, rat_from_str, rat_to_string, Rat};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("degenerate scenario: need at least 4 measurements, got {0}")]
    DegenerateScenario(usize),
    #[error("context {ctx} out of range for a scenario with {n} contexts")]
    ContextRange { ctx: usize, n: usize },
    #[error("parity violation: {count} anti-correlated contexts, an odd number is required")]
    ParityViolation { count: usize },
    #[error("correlation needs one table per context: expected {expected}, got {got}")]
    TableCount { expected: usize, got: usize },
    #[error("context {ctx}: negative probability {p} for outcome {outcome}")]
    NegativeProbability { ctx: usize, outcome: JointOutcome, p: String },
    #[error("context {ctx}: probabilities sum to {sum}, expected 1")]
    BadNormalization { ctx: usize, sum: String },
    #[error("correlation json: {0}")]
    Json(String),
}

/// The two outcomes of a dichotomic measurement; `Plus` sorts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn flip(self) -> Outcome {
        match self {
            Outcome::Plus => Outcome::Minus,
            Outcome::Minus => Outcome::Plus,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Outcome> {
        match c {
            '+' => Some(Outcome::Plus),
            '-' => Some(Outcome::Minus),
            _ => None,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Joint outcome of one context, first slot = the context's own measurement.
/// The canonical order is `++ < +- < -+ < --`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JointOutcome {
    pub first: Outcome,
    pub second: Outcome,
}

pub const PP: JointOutcome = JointOutcome { first: Outcome::Plus, second: Outcome::Plus };
pub const PM: JointOutcome = JointOutcome { first: Outcome::Plus, second: Outcome::Minus };
pub const MP: JointOutcome = JointOutcome { first: Outcome::Minus, second: Outcome::Plus };
pub const MM: JointOutcome = JointOutcome { first: Outcome::Minus, second: Outcome::Minus };

impl JointOutcome {
    pub const ALL: [JointOutcome; 4] = [PP, PM, MP, MM];

    /// Position in canonical order, `0..4`.
    pub fn index(self) -> usize {
        let f = matches!(self.first, Outcome::Minus) as usize;
        let s = matches!(self.second, Outcome::Minus) as usize;
        f * 2 + s
    }

    pub fn from_index(i: usize) -> JointOutcome {
        Self::ALL[i]
    }

    pub fn parse(s: &str) -> Option<JointOutcome> {
        let mut it = s.chars();
        let first = Outcome::from_char(it.next()?)?;
        let second = Outcome::from_char(it.next()?)?;
        if it.next().is_some() {
            return None;
        }
        Some(JointOutcome { first, second })
    }
}

impl fmt::Display for JointOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.first, self.second)
    }
}

/// The `n`-cycle measurement scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CycleScenario {
    n: usize,
}

impl CycleScenario {
    pub fn new(n: usize) -> Result<CycleScenario, ScenarioError> {
        if n < 4 {
            return Err(ScenarioError::DegenerateScenario(n));
        }
        Ok(CycleScenario { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ordered measurement pair of context `c`.
    pub fn context(&self, c: usize) -> (usize, usize) {
        (c, (c + 1) % self.n)
    }

    pub fn contexts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).map(|c| self.context(c))
    }

    /// The two contexts containing measurement `m`: the one where it sits in
    /// the first slot, and the one where it sits in the second.
    pub fn contexts_of_measurement(&self, m: usize) -> (usize, usize) {
        (m, (m + self.n - 1) % self.n)
    }
}

/// A behaviour on a cycle scenario: one exact probability table per context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correlation {
    scenario: CycleScenario,
    tables: Vec<[Rat; 4]>,
}

impl Correlation {
    /// Validates non-negativity and per-context normalization.
    pub fn new(scenario: CycleScenario, tables: Vec<[Rat; 4]>) -> Result<Correlation, ScenarioError> {
        if tables.len() != scenario.n() {
            return Err(ScenarioError::TableCount { expected: scenario.n(), got: tables.len() });
        }
        for (ctx, table) in tables.iter().enumerate() {
            let mut sum = Rat::zero();
            for (i, p) in table.iter().enumerate() {
                if *p < Rat::zero() {
                    return Err(ScenarioError::NegativeProbability {
                        ctx,
                        outcome: JointOutcome::from_index(i),
                        p: rat_to_string(p),
                    });
                }
                sum += *p;
            }
            if !sum.is_one() {
                return Err(ScenarioError::BadNormalization { ctx, sum: rat_to_string(&sum) });
            }
        }
        Ok(Correlation { scenario, tables })
    }

    /// The maximally mixed behaviour: every joint outcome at 1/4.
    pub fn uniform(scenario: CycleScenario) -> Correlation {
        let tables = vec![[rat(1, 4); 4]; scenario.n()];
        Correlation { scenario, tables }
    }

    pub fn scenario(&self) -> &CycleScenario {
        &self.scenario
    }

    pub fn n(&self) -> usize {
        self.scenario.n()
    }

    pub fn prob(&self, ctx: usize, outcome: JointOutcome) -> Rat {
        self.tables[ctx][outcome.index()]
    }

    /// Joint outcomes of context `ctx` with positive probability, in
    /// canonical order.
    pub fn support(&self, ctx: usize) -> Vec<JointOutcome> {
        JointOutcome::ALL
            .into_iter()
            .filter(|o| self.tables[ctx][o.index()] > Rat::zero())
            .collect()
    }

    /// Probability that measurement `m` yields `+` according to context
    /// `ctx`, which must contain `m`.
    pub fn marginal_plus(&self, ctx: usize, m: usize) -> Rat {
        let (a, b) = self.scenario.context(ctx);
        assert!(m == a || m == b, "measurement {m} not in context {ctx}");
        JointOutcome::ALL
            .into_iter()
            .filter(|o| {
                let slot = if m == a { o.first } else { o.second };
                slot == Outcome::Plus
            })
            .map(|o| self.tables[ctx][o.index()])
            .sum()
    }
}

/// Defining data of an n-cycle PR box: the set of anti-correlated contexts,
/// which must have odd cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrBoxSpec {
    pub n: usize,
    pub anti_contexts: BTreeSet<usize>,
}

impl PrBoxSpec {
    pub fn new(n: usize, anti_contexts: impl IntoIterator<Item = usize>) -> PrBoxSpec {
        PrBoxSpec { n, anti_contexts: anti_contexts.into_iter().collect() }
    }

    /// The canonical representative: a single anti-correlated context, the
    /// wrap-around one.
    pub fn canonical(n: usize) -> PrBoxSpec {
        PrBoxSpec::new(n, [n.saturating_sub(1)])
    }
}

/// Builds the PR box behaviour for `spec`: every correlated context supports
/// `++`/`--` at 1/2 each, every anti-correlated context `+-`/`-+`.
pub fn make_pr_box(spec: &PrBoxSpec) -> Result<Correlation, ScenarioError> {
    let scenario = CycleScenario::new(spec.n)?;
    for &c in &spec.anti_contexts {
        if c >= spec.n {
            return Err(ScenarioError::ContextRange { ctx: c, n: spec.n });
        }
    }
    if spec.anti_contexts.len() % 2 == 0 {
        return Err(ScenarioError::ParityViolation { count: spec.anti_contexts.len() });
    }
    let half = rat(1, 2);
    let zero = Rat::zero();
    let tables = (0..spec.n)
        .map(|c| {
            if spec.anti_contexts.contains(&c) {
                [zero, half, half, zero]
            } else {
                [half, zero, zero, half]
            }
        })
        .collect();
    Correlation::new(scenario, tables)
}

/// Checks that every measurement has the same marginal in both contexts it
/// belongs to.
pub fn check_no_disturbance(corr: &Correlation) -> bool {
    let s = *corr.scenario();
    (0..s.n()).all(|m| {
        let (first_ctx, second_ctx) = s.contexts_of_measurement(m);
        corr.marginal_plus(first_ctx, m) == corr.marginal_plus(second_ctx, m)
    })
}

/// All `2^(n-1)` PR boxes of the n-cycle scenario, one per odd-cardinality
/// subset of contexts, ordered by ascending subset bitmask.
pub fn enumerate_pr_boxes(n: usize) -> Result<Vec<Correlation>, ScenarioError> {
    CycleScenario::new(n)?;
    assert!(n < usize::BITS as usize, "subset mask must fit a machine word");
    let mut out = Vec::with_capacity(1 << (n - 1));
    for mask in 0usize..(1 << n) {
        if mask.count_ones() % 2 != 1 {
            continue;
        }
        let anti = (0..n).filter(|c| mask >> c & 1 == 1);
        out.push(make_pr_box(&PrBoxSpec::new(n, anti))?);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct TableDoc {
    context: [usize; 2],
    probs: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct CorrelationDoc {
    n: usize,
    tables: Vec<TableDoc>,
}

impl Correlation {
    /// Serializes with one table per context in cyclic order; probabilities
    /// are `"p/q"` strings keyed by outcome (`"++"`, `"+-"`, ...).
    pub fn to_json(&self) -> String {
        let tables = (0..self.n())
            .map(|c| {
                let (a, b) = self.scenario.context(c);
                let probs = JointOutcome::ALL
                    .into_iter()
                    .map(|o| (o.to_string(), rat_to_string(&self.prob(c, o))))
                    .collect();
                TableDoc { context: [a, b], probs }
            })
            .collect();
        let doc = CorrelationDoc { n: self.n(), tables };
        serde_json::to_string_pretty(&doc).expect("correlation serialization cannot fail")
    }

    /// Parses the format written by [`Correlation::to_json`]. Tables may
    /// come in any order; missing outcome keys count as probability 0.
    pub fn from_json(input: &str) -> Result<Correlation, ScenarioError> {
        let doc: CorrelationDoc =
            serde_json::from_str(input).map_err(|e| ScenarioError::Json(e.to_string()))?;
        let scenario = CycleScenario::new(doc.n)?;
        if doc.tables.len() != doc.n {
            return Err(ScenarioError::TableCount { expected: doc.n, got: doc.tables.len() });
        }
        let mut tables = vec![None; doc.n];
        for t in &doc.tables {
            let c = t.context[0];
            if c >= doc.n {
                return Err(ScenarioError::ContextRange { ctx: c, n: doc.n });
            }
            if t.context != [c, (c + 1) % doc.n] {
                return Err(ScenarioError::Json(format!(
                    "context pair {:?} is not consecutive in the cycle",
                    t.context
                )));
            }
            if tables[c].is_some() {
                return Err(ScenarioError::Json(format!("duplicate table for context {c}")));
            }
            let mut row = [Rat::zero(); 4];
            for (key, val) in &t.probs {
                let outcome = JointOutcome::parse(key)
                    .ok_or_else(|| ScenarioError::Json(format!("bad outcome key {key:?}")))?;
                row[outcome.index()] = rat_from_str(val).map_err(ScenarioError::Json)?;
            }
            tables[c] = Some(row);
        }
        let tables = tables
            .into_iter()
            .enumerate()
            .map(|(c, t)| t.ok_or(ScenarioError::Json(format!("missing table for context {c}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Correlation::new(scenario, tables)
    }
}
