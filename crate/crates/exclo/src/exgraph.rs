//! Exclusivity graphs of cycle-scenario behaviours.
//!
//! Vertices are the positive-probability events `(context, joint outcome)`;
//! two events are exclusive — joined by an edge — when their contexts share
//! a measurement to which they assign different outcomes. Each vertex is
//! weighted by its event's probability.

use crate::graph::{Graph, WeightedGraph};
use crate::rat::{rat_to_string, Rat};
use crate::scenario::{Correlation, CycleScenario, JointOutcome, Outcome};
use serde::{Deserialize, Serialize};
use std::fmt;

/// One event: a context index plus a joint outcome for that context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub context: usize,
    pub outcome: JointOutcome,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}|{}]", self.outcome, self.context)
    }
}

impl Event {
    /// Outcome this event assigns to measurement `m`, if `m` lies in the
    /// event's context.
    pub fn outcome_of(&self, scenario: &CycleScenario, m: usize) -> Option<Outcome> {
        let (a, b) = scenario.context(self.context);
        if m == a {
            Some(self.outcome.first)
        } else if m == b {
            Some(self.outcome.second)
        } else {
            None
        }
    }
}

/// True iff the two events assign different outcomes to some shared
/// measurement. Events of the same context are exclusive exactly when their
/// joint outcomes differ; events of non-adjacent contexts never are.
pub fn are_exclusive(scenario: &CycleScenario, a: Event, b: Event) -> bool {
    (0..scenario.n()).any(|m| {
        matches!(
            (a.outcome_of(scenario, m), b.outcome_of(scenario, m)),
            (Some(x), Some(y)) if x != y
        )
    })
}

/// The weighted exclusivity graph of a single behaviour. Vertices sit in
/// canonical order: by context, then by joint outcome (`++ < +- < -+ < --`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExclusivityGraph {
    scenario: CycleScenario,
    events: Vec<Event>,
    host: WeightedGraph,
}

/// Builds the exclusivity graph of `corr` over its positive-probability
/// events.
pub fn build_exclusivity_graph(corr: &Correlation) -> ExclusivityGraph {
    let scenario = *corr.scenario();
    let mut events = Vec::new();
    let mut weights = Vec::new();
    for ctx in 0..scenario.n() {
        for outcome in corr.support(ctx) {
            events.push(Event { context: ctx, outcome });
            weights.push(corr.prob(ctx, outcome));
        }
    }
    let mut graph = Graph::empty(events.len());
    for i in 0..events.len() {
        for j in i + 1..events.len() {
            if are_exclusive(&scenario, events[i], events[j]) {
                graph.add_edge(i, j).unwrap();
            }
        }
    }
    ExclusivityGraph { scenario, events, host: WeightedGraph { graph, weights } }
}

impl ExclusivityGraph {
    pub fn scenario(&self) -> &CycleScenario {
        &self.scenario
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, v: usize) -> Event {
        self.events[v]
    }

    pub fn event_index(&self, e: &Event) -> Option<usize> {
        self.events.iter().position(|x| x == e)
    }

    pub fn graph(&self) -> &Graph {
        &self.host.graph
    }

    pub fn weights(&self) -> &[Rat] {
        &self.host.weights
    }

    pub fn host(&self) -> &WeightedGraph {
        &self.host
    }

    pub fn vertex_count(&self) -> usize {
        self.events.len()
    }

    /// JSON export: vertex records `(context, outcome, weight)` plus an edge
    /// list of index pairs.
    pub fn to_json(&self) -> String {
        let doc = ExclusivityGraphDoc {
            n: self.scenario.n(),
            vertices: self
                .events
                .iter()
                .zip(&self.host.weights)
                .map(|(e, w)| VertexDoc {
                    context: e.context,
                    outcome: e.outcome.to_string(),
                    weight: rat_to_string(w),
                })
                .collect(),
            edges: self.host.graph.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        };
        serde_json::to_string_pretty(&doc).expect("graph serialization cannot fail")
    }
}

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    context: usize,
    outcome: String,
    weight: String,
}

#[derive(Serialize, Deserialize)]
struct ExclusivityGraphDoc {
    n: usize,
    vertices: Vec<VertexDoc>,
    edges: Vec<[usize; 2]>,
}
