//! Violation certificates as portable JSON documents.
//!
//! A certificate names its host — one box spec per factor — and spells every
//! clique vertex out as a tuple of factor events, so a checker needs nothing
//! but the document: it rebuilds the boxes, re-derives every weight, and
//! re-tests exclusivity pairwise straight from the definition, without
//! materializing the product graph.

use crate::clique::ViolationCertificate;
use crate::exgraph::{are_exclusive, build_exclusivity_graph, Event, ExclusivityGraph};
use crate::rat::Rat;
use crate::scenario::{make_pr_box, JointOutcome, PrBoxSpec, ScenarioError};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("certificate needs at least one factor")]
    NoFactors,
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("vertex {v} out of range for a product on {capacity} vertices")]
    VertexRange { v: usize, capacity: usize },
    #[error("vertex {vertex} lists {got} events for {expected} factors")]
    TupleShape { vertex: usize, expected: usize, got: usize },
    #[error("unreadable outcome {text:?} on vertex {vertex}")]
    BadOutcome { vertex: usize, text: String },
    #[error("vertex {vertex}: factor {factor} has no event {event} with positive probability")]
    UnknownEvent { vertex: usize, factor: usize, event: String },
    #[error("vertices {i} and {j} are the same event tuple")]
    DuplicateVertex { i: usize, j: usize },
    #[error("vertices {i} and {j} are not exclusive in any factor")]
    NotExclusive { i: usize, j: usize },
    #[error("stated weight sum {stated} does not match the recomputed {computed}")]
    WeightMismatch { stated: Rat, computed: Rat },
    #[error("stated excess {stated} does not match weight sum minus one ({computed})")]
    ExcessMismatch { stated: Rat, computed: Rat },
    #[error("weight sum {weight_sum} does not exceed 1")]
    NoExcess { weight_sum: Rat },
}

/// One factor of the host product: an `n`-cycle box named by its
/// anti-correlated contexts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub n: usize,
    pub anti_contexts: Vec<usize>,
}

/// One factor event of a clique vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDoc {
    pub context: usize,
    pub outcome: String,
}

/// The portable certificate: host factors, clique vertices as event tuples,
/// and the claimed totals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub factors: Vec<FactorDoc>,
    pub vertices: Vec<Vec<EventDoc>>,
    #[serde(with = "crate::rat::pq")]
    pub weight_sum: Rat,
    #[serde(with = "crate::rat::pq")]
    pub excess: Rat,
}

/// What a successful verification established.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateSummary {
    pub factors: usize,
    pub size: usize,
    #[serde(with = "crate::rat::pq")]
    pub weight_sum: Rat,
    #[serde(with = "crate::rat::pq")]
    pub excess: Rat,
}

fn factor_graphs(specs: &[PrBoxSpec]) -> Result<Vec<ExclusivityGraph>, CertificateError> {
    if specs.is_empty() {
        return Err(CertificateError::NoFactors);
    }
    specs
        .iter()
        .map(|s| Ok(build_exclusivity_graph(&make_pr_box(s)?)))
        .collect()
}

/// Renders a violation certificate over the product of the given boxes as a
/// portable document. Vertices of `cert` are flat product indices in
/// lexicographic component order, first factor most significant.
pub fn export_certificate(
    specs: &[PrBoxSpec],
    cert: &ViolationCertificate,
) -> Result<CertificateDoc, CertificateError> {
    let factors = factor_graphs(specs)?;
    let capacity: usize = factors.iter().map(|f| f.vertex_count()).product();
    let mut vertices = Vec::with_capacity(cert.clique.len());
    for &v in cert.clique.vertices() {
        if v >= capacity {
            return Err(CertificateError::VertexRange { v, capacity });
        }
        let mut rest = v;
        let mut tuple = vec![EventDoc { context: 0, outcome: String::new() }; factors.len()];
        for (i, f) in factors.iter().enumerate().rev() {
            let event = f.event(rest % f.vertex_count());
            rest /= f.vertex_count();
            tuple[i] = EventDoc { context: event.context, outcome: event.outcome.to_string() };
        }
        vertices.push(tuple);
    }
    Ok(CertificateDoc {
        factors: specs
            .iter()
            .map(|s| FactorDoc { n: s.n, anti_contexts: s.anti_contexts.iter().copied().collect() })
            .collect(),
        vertices,
        weight_sum: cert.clique.weight_sum(),
        excess: cert.excess,
    })
}

/// Revalidates a certificate from nothing but the document: rebuilds every
/// factor box, resolves each event against its positive-probability support,
/// re-tests pairwise exclusivity from the definition, and recomputes the
/// weight sum and excess exactly.
pub fn verify_certificate(doc: &CertificateDoc) -> Result<CertificateSummary, CertificateError> {
    let specs: Vec<PrBoxSpec> = doc
        .factors
        .iter()
        .map(|f| PrBoxSpec::new(f.n, f.anti_contexts.iter().copied()))
        .collect();
    let factors = factor_graphs(&specs)?;
    let k = factors.len();

    let mut tuples: Vec<Vec<Event>> = Vec::with_capacity(doc.vertices.len());
    let mut computed = Rat::new(0, 1);
    for (vi, tuple) in doc.vertices.iter().enumerate() {
        if tuple.len() != k {
            return Err(CertificateError::TupleShape {
                vertex: vi,
                expected: k,
                got: tuple.len(),
            });
        }
        let mut events = Vec::with_capacity(k);
        let mut weight = Rat::one();
        for (fi, (e, f)) in tuple.iter().zip(&factors).enumerate() {
            let outcome = JointOutcome::parse(&e.outcome).ok_or_else(|| {
                CertificateError::BadOutcome { vertex: vi, text: e.outcome.clone() }
            })?;
            let event = Event { context: e.context, outcome };
            let idx = f.event_index(&event).ok_or_else(|| CertificateError::UnknownEvent {
                vertex: vi,
                factor: fi,
                event: event.to_string(),
            })?;
            weight *= f.weights()[idx];
            events.push(event);
        }
        tuples.push(events);
        computed += weight;
    }

    for i in 0..tuples.len() {
        for j in i + 1..tuples.len() {
            if tuples[i] == tuples[j] {
                return Err(CertificateError::DuplicateVertex { i, j });
            }
            let exclusive = (0..k)
                .any(|f| are_exclusive(factors[f].scenario(), tuples[i][f], tuples[j][f]));
            if !exclusive {
                return Err(CertificateError::NotExclusive { i, j });
            }
        }
    }

    if computed != doc.weight_sum {
        return Err(CertificateError::WeightMismatch {
            stated: doc.weight_sum,
            computed,
        });
    }
    let excess = computed - Rat::one();
    if excess != doc.excess {
        return Err(CertificateError::ExcessMismatch { stated: doc.excess, computed: excess });
    }
    if excess <= Rat::new(0, 1) {
        return Err(CertificateError::NoExcess { weight_sum: computed });
    }
    Ok(CertificateSummary {
        factors: k,
        size: tuples.len(),
        weight_sum: computed,
        excess,
    })
}
