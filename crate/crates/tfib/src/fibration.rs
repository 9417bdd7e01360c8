//! The discriminant-graph model for well-behaved T^3-fibrations with
//! semistable fibers: validation, dualization, Euler characteristic,
//! simple-connectivity criterion, critical-surface statistics.
//!
//! Edge monodromies are stored in a single declared global gauge. Vertex
//! loop words carry explicit order and exponents; the dissident relation is
//! checked verbatim in that order.

use crate::lattice::{transpose_inverse, trivial_invariants_all_n, IntMatrix};
use crate::monodromy::{classify_edge_3d, vertex_profile, FiberKind, MonodromyError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, thiserror::Error)]
pub enum FibrationError {
    #[error("graph failed validation:\n{0}")]
    Invalid(ValidationReport),
    #[error("unknown edge id {0}")]
    UnknownEdge(u32),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Base {
    Sphere3,
    Ball3,
}

/// An edge endpoint: a vertex of the graph or a Borel-Moore leg.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum End {
    Vertex(u32),
    Leg,
}

impl Serialize for End {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            End::Vertex(v) => ser.serialize_u32(*v),
            End::Leg => ser.serialize_str("leg"),
        }
    }
}

impl<'de> Deserialize<'de> for End {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Id(u32),
            Tag(String),
        }
        match Raw::deserialize(de)? {
            Raw::Id(v) => Ok(End::Vertex(v)),
            Raw::Tag(s) if s == "leg" => Ok(End::Leg),
            Raw::Tag(s) => Err(serde::de::Error::custom(format!(
                "expected vertex id or \"leg\", found {s:?}"
            ))),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeData {
    pub id: u32,
    pub ends: [End; 2],
    pub monodromy: IntMatrix,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexData {
    pub id: u32,
    /// Ordered loop word: (edge id, exponent +-1).
    pub loops: Vec<(u32, i8)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FibrationGraph {
    pub base: Base,
    pub vertices: Vec<VertexData>,
    pub edges: Vec<EdgeData>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum Violation {
    BadValency { vertex: u32, valency: usize },
    EdgeNotT22 { edge: u32, kind: FiberKind },
    RelationViolated { vertex: u32 },
    ProfileRejected { vertex: u32, reason: String },
    LoopWordMismatch { vertex: u32 },
    DanglingEdge { edge: u32 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::BadValency { vertex, valency } => {
                write!(f, "vertex {vertex}: valency {valency} not in {{3, 4}}")
            }
            Violation::EdgeNotT22 { edge, kind } => {
                write!(f, "edge {edge}: monodromy classifies as {kind:?}, not T22")
            }
            Violation::RelationViolated { vertex } => {
                write!(f, "vertex {vertex}: ordered loop product is not the identity")
            }
            Violation::ProfileRejected { vertex, reason } => {
                write!(f, "vertex {vertex}: {reason}")
            }
            Violation::LoopWordMismatch { vertex } => {
                write!(f, "vertex {vertex}: loop word disagrees with incident edges")
            }
            Violation::DanglingEdge { edge } => {
                write!(f, "edge {edge}: refers to a missing vertex")
            }
        }
    }
}

/// Validation outcome; `pass()` is true iff no violation was recorded.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Fiber kind per vertex, for graphs that pass.
    pub vertex_kinds: BTreeMap<u32, FiberKind>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass() {
            write!(f, "valid")
        } else {
            for v in &self.violations {
                writeln!(f, "- {v}")?;
            }
            Ok(())
        }
    }
}

/// Census of vertex fiber kinds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberCensus {
    pub counts: BTreeMap<FiberKind, usize>,
    pub profiles: Vec<(u32, FiberKind)>,
}

impl FiberCensus {
    pub fn count(&self, kind: FiberKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }
}

impl FibrationGraph {
    pub fn edge(&self, id: u32) -> Option<&EdgeData> {
        self.edges.iter().find(|e| e.id == id)
    }

    pub fn vertex(&self, id: u32) -> Option<&VertexData> {
        self.vertices.iter().find(|v| v.id == id)
    }

    fn incidence_map(&self) -> BTreeMap<u32, Vec<u32>> {
        let mut map: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
        for e in &self.edges {
            for end in &e.ends {
                if let End::Vertex(v) = end {
                    map.entry(*v).or_default().push(e.id);
                }
            }
        }
        map
    }

    /// Validate the model: valency 3 or 4, all edge monodromies of T22
    /// class, all ordered vertex relations in the dissident normal-form
    /// list. The report enumerates every violation with its vertex/edge id.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let vertex_ids: BTreeSet<u32> = self.vertices.iter().map(|v| v.id).collect();
        for e in &self.edges {
            for end in &e.ends {
                if let End::Vertex(v) = end {
                    if !vertex_ids.contains(v) {
                        report.violations.push(Violation::DanglingEdge { edge: e.id });
                    }
                }
            }
            match classify_edge_3d(&e.monodromy) {
                Ok(t) if t.kind == FiberKind::T22 => {}
                Ok(t) => report.violations.push(Violation::EdgeNotT22 {
                    edge: e.id,
                    kind: t.kind,
                }),
                Err(err) => report.violations.push(Violation::ProfileRejected {
                    vertex: u32::MAX,
                    reason: format!("edge {}: {err}", e.id),
                }),
            }
        }
        let incidence = self.incidence_map();
        for v in &self.vertices {
            let valency = v.loops.len();
            if valency != 3 && valency != 4 {
                report.violations.push(Violation::BadValency {
                    vertex: v.id,
                    valency,
                });
                continue;
            }
            let mut incident = incidence.get(&v.id).cloned().unwrap_or_default();
            incident.sort_unstable();
            let mut word_edges: Vec<u32> = v.loops.iter().map(|(e, _)| *e).collect();
            word_edges.sort_unstable();
            if incident != word_edges {
                report
                    .violations
                    .push(Violation::LoopWordMismatch { vertex: v.id });
                continue;
            }
            let tuple = match self.loop_word_matrices(v) {
                Ok(t) => t,
                Err(_) => continue, // dangling edge already recorded
            };
            match vertex_profile(&tuple) {
                Ok(profile) => {
                    report.vertex_kinds.insert(v.id, profile.fiber.kind);
                }
                Err(MonodromyError::RelationViolated) => {
                    report
                        .violations
                        .push(Violation::RelationViolated { vertex: v.id });
                }
                Err(err) => {
                    report.violations.push(Violation::ProfileRejected {
                        vertex: v.id,
                        reason: err.to_string(),
                    });
                }
            }
        }
        report
    }

    fn loop_word_matrices(&self, v: &VertexData) -> Result<Vec<IntMatrix>, FibrationError> {
        v.loops
            .iter()
            .map(|(eid, exp)| {
                let e = self.edge(*eid).ok_or(FibrationError::UnknownEdge(*eid))?;
                if *exp >= 0 {
                    Ok(e.monodromy.clone())
                } else {
                    Ok(e.monodromy
                        .inverse_unimodular()
                        .map_err(MonodromyError::from)?)
                }
            })
            .collect()
    }

    /// The SYZ dual: same combinatorics, transpose-inverse monodromy.
    pub fn dualize(&self) -> Result<FibrationGraph, FibrationError> {
        let report = self.validate();
        if !report.pass() {
            return Err(FibrationError::Invalid(report));
        }
        Ok(self.dualize_unchecked())
    }

    pub fn dualize_unchecked(&self) -> FibrationGraph {
        FibrationGraph {
            base: self.base,
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeData {
                    id: e.id,
                    ends: e.ends,
                    monodromy: transpose_inverse(&e.monodromy)
                        .expect("validated edges are unimodular"),
                })
                .collect(),
        }
    }

    /// Census of the vertex fiber kinds (requires a valid graph).
    pub fn census(&self) -> Result<FiberCensus, FibrationError> {
        let report = self.validate();
        if !report.pass() {
            return Err(FibrationError::Invalid(report));
        }
        let mut census = FiberCensus::default();
        for (vid, kind) in &report.vertex_kinds {
            *census.counts.entry(*kind).or_insert(0) += 1;
            census.profiles.push((*vid, *kind));
        }
        Ok(census)
    }

    /// Stratified Euler characteristic: chi = #T12 - #T21; T22 and T11
    /// points and all edges contribute zero.
    pub fn euler_characteristic(&self) -> Result<i64, FibrationError> {
        let census = self.census()?;
        Ok(census.count(FiberKind::T12) as i64 - census.count(FiberKind::T21) as i64)
    }

    /// H^0(B, R^1 f_* Z/nZ) = 0 for all n, via the elementary divisors of
    /// the stacked (T - I).
    pub fn is_simply_connected(&self) -> Result<bool, FibrationError> {
        let mats: Vec<IntMatrix> = self.edges.iter().map(|e| e.monodromy.clone()).collect();
        if mats.is_empty() {
            // empty discriminant: a T^3-bundle, never simply connected
            return Ok(false);
        }
        Ok(trivial_invariants_all_n(&mats).map_err(MonodromyError::from)?)
    }

    /// Per connected component of same-kind trivalent vertices: genus
    /// (cycle rank of the component subgraph) and punctures (half-edges
    /// leaving the component, legs included).
    pub fn critical_surface_stats(
        &self,
    ) -> Result<Vec<(FiberKind, usize, usize)>, FibrationError> {
        let census = self.census()?;
        let kind_of: BTreeMap<u32, FiberKind> = census.profiles.iter().copied().collect();
        let incidence = self.incidence_map();
        let mut seen: BTreeSet<u32> = BTreeSet::new();
        let mut out = Vec::new();
        for v in &self.vertices {
            let kind = kind_of[&v.id];
            if kind != FiberKind::T12 && kind != FiberKind::T21 {
                continue;
            }
            if seen.contains(&v.id) {
                continue;
            }
            let mut comp: BTreeSet<u32> = BTreeSet::new();
            let mut queue = vec![v.id];
            while let Some(x) = queue.pop() {
                if !comp.insert(x) {
                    continue;
                }
                for eid in incidence.get(&x).into_iter().flatten() {
                    let e = self.edge(*eid).unwrap();
                    for end in &e.ends {
                        if let End::Vertex(w) = end {
                            if *w != x && kind_of.get(w) == Some(&kind) && !comp.contains(w) {
                                queue.push(*w);
                            }
                        }
                    }
                }
            }
            seen.extend(comp.iter().copied());
            let mut internal = 0usize;
            let mut punctures = 0usize;
            let mut counted: BTreeSet<u32> = BTreeSet::new();
            for x in &comp {
                for eid in incidence.get(x).into_iter().flatten() {
                    if !counted.insert(*eid) {
                        continue;
                    }
                    let e = self.edge(*eid).unwrap();
                    let inside = |end: &End| match end {
                        End::Vertex(w) => comp.contains(w),
                        End::Leg => false,
                    };
                    match (inside(&e.ends[0]), inside(&e.ends[1])) {
                        (true, true) => internal += 1,
                        _ => punctures += 1,
                    }
                }
            }
            let genus = internal + 1 - comp.len();
            out.push((kind, genus, punctures));
        }
        out.sort();
        Ok(out)
    }

    /// Graphviz DOT export; vertex labels carry the fiber type when the
    /// graph validates.
    pub fn to_dot(&self) -> String {
        let kinds = self.validate().vertex_kinds;
        let mut s = String::from("graph fibration {\n");
        for v in &self.vertices {
            let label = match kinds.get(&v.id) {
                Some(k) => format!("{}\\n{:?}", v.id, k),
                None => format!("{}", v.id),
            };
            s.push_str(&format!("  v{} [label=\"{}\"];\n", v.id, label));
        }
        let mut leg = 0usize;
        for e in &self.edges {
            let mut node = |end: &End, s: &mut String| -> String {
                match end {
                    End::Vertex(v) => format!("v{v}"),
                    End::Leg => {
                        leg += 1;
                        let name = format!("leg{leg}");
                        s.push_str(&format!("  {name} [shape=point, label=\"\"];\n"));
                        name
                    }
                }
            };
            let a = node(&e.ends[0], &mut s);
            let b = node(&e.ends[1], &mut s);
            s.push_str(&format!("  {a} -- {b} [label=\"e{}\"];\n", e.id));
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monodromy::{normal_form_t11, normal_form_t12, normal_form_t21};

    /// Ball model with a single dissident vertex built from a normal-form
    /// tuple; every edge is a leg.
    fn single_vertex_graph(tuple: &[IntMatrix]) -> FibrationGraph {
        FibrationGraph {
            base: Base::Ball3,
            vertices: vec![VertexData {
                id: 0,
                loops: (0..tuple.len() as u32).map(|e| (e, 1)).collect(),
            }],
            edges: tuple
                .iter()
                .enumerate()
                .map(|(i, t)| EdgeData {
                    id: i as u32,
                    ends: [End::Vertex(0), End::Leg],
                    monodromy: t.clone(),
                })
                .collect(),
        }
    }

    #[test]
    fn single_t12_vertex_validates() {
        let g = single_vertex_graph(&normal_form_t12());
        let r = g.validate();
        assert!(r.pass(), "{r}");
        assert_eq!(r.vertex_kinds[&0], FiberKind::T12);
        assert_eq!(g.euler_characteristic().unwrap(), 1);
    }

    #[test]
    fn squared_matrix_breaks_relation() {
        let mut tuple = normal_form_t12();
        tuple[0] = tuple[0].mul(&tuple[0]);
        let g = single_vertex_graph(&tuple);
        assert!(!g.validate().pass());
    }

    #[test]
    fn dualize_swaps_t12_t21() {
        let g = single_vertex_graph(&normal_form_t12());
        let d = g.dualize().unwrap();
        let r = d.validate();
        assert!(r.pass(), "{r}");
        assert_eq!(r.vertex_kinds[&0], FiberKind::T21);
        let dd = d.dualize().unwrap();
        for (a, b) in g.edges.iter().zip(&dd.edges) {
            assert_eq!(a.monodromy, b.monodromy);
        }
        assert_eq!(
            g.euler_characteristic().unwrap(),
            -d.euler_characteristic().unwrap()
        );
    }

    #[test]
    fn t11_vertex_ball_model() {
        let g = single_vertex_graph(&normal_form_t11(0));
        let r = g.validate();
        assert!(r.pass(), "{r}");
        assert_eq!(r.vertex_kinds[&0], FiberKind::T11);
        assert_eq!(g.euler_characteristic().unwrap(), 0);
        let d = g.dualize().unwrap();
        assert_eq!(d.validate().vertex_kinds[&0], FiberKind::T11);
    }

    #[test]
    fn pair_of_pants_stats() {
        let g = single_vertex_graph(&normal_form_t21());
        let stats = g.critical_surface_stats().unwrap();
        assert_eq!(stats, vec![(FiberKind::T21, 0, 3)]);
    }

    #[test]
    fn theta_graph_stats() {
        // two T21 vertices joined by three parallel edges: genus 2, no punctures
        let t = normal_form_t21();
        let g = FibrationGraph {
            base: Base::Sphere3,
            vertices: vec![
                VertexData {
                    id: 0,
                    loops: vec![(0, 1), (1, 1), (2, 1)],
                },
                VertexData {
                    id: 1,
                    // reversed order with inverted exponents keeps the product I
                    loops: vec![(2, -1), (1, -1), (0, -1)],
                },
            ],
            edges: (0..3)
                .map(|i| EdgeData {
                    id: i as u32,
                    ends: [End::Vertex(0), End::Vertex(1)],
                    monodromy: t[i].clone(),
                })
                .collect(),
        };
        let r = g.validate();
        assert!(r.pass(), "{r}");
        let stats = g.critical_surface_stats().unwrap();
        assert_eq!(stats, vec![(FiberKind::T21, 2, 0)]);
    }

    #[test]
    fn common_invariant_vector_not_simply_connected() {
        // all three edge monodromies of the T12 model fix e1 and e2
        let g = single_vertex_graph(&normal_form_t12());
        assert!(!g.is_simply_connected().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let g = single_vertex_graph(&normal_form_t12());
        let s = g.to_json();
        let g2 = FibrationGraph::from_json(&s).unwrap();
        assert!(g2.validate().pass());
        assert_eq!(g.to_json(), g2.to_json());
    }
}
