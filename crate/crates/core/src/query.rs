//! Construction protocols read off the table, and their stabilizer replay.
//!
//! Protocol steps name qubits by their label in the initial graph; labels
//! are never renumbered, so a fused pair simply disappears.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fusion::{fuse, FusionError, FusionKind};
use crate::graph::{
    is_caterpillar_forest, isomorphic, read_graph6, spine_leaf_counts, write_graph6, Graph,
    GraphError, VertexMap, VertexSet,
};
use crate::orbit::{lc_path, OrbitError};
use crate::stabilizer::{emit_caterpillar, local_complement_gates, LocalCliffordFrame, StabilizerError, Tableau};
use crate::tablebase::Tablebase;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    /// Local complementation at a vertex.
    Lc(usize),
    /// Default-kind fusion of two qubits. `correction` is applied after the
    /// fused qubits are removed; `expect` is the resulting graph on the
    /// surviving qubits in increasing label order.
    Fuse {
        a: usize,
        b: usize,
        correction: Option<LocalCliffordFrame>,
        expect: Option<Graph>,
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Lc(v) => write!(f, "LC({v})"),
            Step::Fuse { a, b, .. } => write!(f, "fuse {a}&{b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionProtocol {
    /// A caterpillar forest one emitter can produce.
    pub initial: Graph,
    pub steps: Vec<Step>,
    /// Surviving initial labels to target labels.
    pub final_map: VertexMap,
    pub depth: u32,
}

impl fmt::Display for ConstructionProtocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self.steps.iter().map(Step::to_string).collect();
        write!(f, "{}", steps.join(", "))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum QueryError {
    #[error("target graph is not in the table")]
    NotInTable,
    #[error("table has no caterpillar seed for orbit {0}")]
    MissingSeed(u32),
    #[error(transparent)]
    Orbit(#[from] OrbitError),
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed protocol: {0}")]
    Format(String),
}

/// Where a replay first went wrong.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplayStage {
    Emission,
    Step(usize),
    Final,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("replay diverged at {stage:?}: {reason}")]
pub struct ReplayFailure {
    pub stage: ReplayStage,
    pub reason: String,
}

/// Assembles a minimum-fusion construction of `target`: walks parent links
/// back to a depth-0 orbit and joins consecutive links with LC paths.
pub fn construct(tb: &Tablebase, target: &Graph) -> Result<ConstructionProtocol, QueryError> {
    let found = tb.lookup(target).ok_or(QueryError::NotInTable)?;
    let mut chain = Vec::new();
    let mut root = found.orbit;
    while let Some(link) = tb.parent(root) {
        chain.push(link);
        root = link.parent_orbit;
    }
    chain.reverse();
    let initial = tb
        .members(root)
        .find(is_caterpillar_forest)
        .ok_or(QueryError::MissingSeed(root.0))?;

    // `alive[i]` is the initial label of the current graph's vertex `i`.
    let mut alive: Vec<usize> = (0..initial.n()).collect();
    let mut cur = initial;
    let mut steps = Vec::new();
    let walk = |cur: &mut Graph, to: &Graph, alive: &[usize], steps: &mut Vec<Step>| -> Result<VertexMap, QueryError> {
        let (path, map) = lc_path(cur, to)?;
        for v in path {
            cur.local_complement_in_place(v);
            steps.push(Step::Lc(alive[v]));
        }
        Ok(map)
    };
    for link in &chain {
        let parent = tb.member(link.parent_orbit, link.parent_member);
        let map = walk(&mut cur, &parent, &alive, &mut steps)?;
        let back = map.inverse(parent.n());
        let (a, b) = (link.pair.0 as usize, link.pair.1 as usize);
        let (a, b) = (
            back.get(a).expect("map is a bijection"),
            back.get(b).expect("map is a bijection"),
        );
        let r = fuse(&cur, a, b, FusionKind::XzZx)?;
        let (la, lb) = (alive[a], alive[b]);
        steps.push(Step::Fuse {
            a: la,
            b: lb,
            correction: (!r.frame.is_pauli()).then(|| r.frame.inverse()),
            expect: Some(r.graph),
        });
        alive.retain(|&l| l != la && l != lb);
        cur = r.graph;
    }
    let map = walk(&mut cur, target, &alive, &mut steps)?;
    let mut final_map = vec![None; initial.n()];
    for (i, &l) in alive.iter().enumerate() {
        final_map[l] = map.get(i);
    }
    Ok(ConstructionProtocol {
        initial,
        steps,
        final_map: VertexMap::from_images(final_map),
        depth: chain.len() as u32,
    })
}

/// Stabilizer state of a caterpillar forest produced by emission: each
/// component is emitted from its own spin and the qubits are then permuted
/// onto the forest's labels.
pub fn emit_caterpillar_forest(g: &Graph) -> Result<Tableau, ReplayFailure> {
    let fail = |reason: String| ReplayFailure {
        stage: ReplayStage::Emission,
        reason,
    };
    let mut t: Option<Tableau> = None;
    let mut order = Vec::with_capacity(g.n());
    for comp in g.components() {
        let sub = g.induced_subgraph(comp).map_err(|e| fail(e.to_string()))?;
        let counts = spine_leaf_counts(&sub).ok_or_else(|| fail(format!("component {comp:?} is not a caterpillar")))?;
        let spin = emit_caterpillar(&counts).map_err(|e| fail(e.to_string()))?;
        // Emission order labels the photons; the frame is the identity.
        let (emitted, _) = spin.to_graph();
        let map = isomorphic(&emitted, &sub).ok_or_else(|| fail("emitted caterpillar does not match".into()))?;
        let part = spin.permute_qubits(&map).map_err(|e| fail(e.to_string()))?;
        t = Some(match t {
            None => part,
            Some(acc) => acc.tensor(&part).map_err(|e| fail(e.to_string()))?,
        });
        order.extend(comp.iter());
    }
    let Some(t) = t else {
        return Err(fail("empty initial graph".into()));
    };
    let perm = VertexMap::from_permutation(&order);
    t.permute_qubits(&perm).map_err(|e| fail(e.to_string()))
}

fn stab_err(stage: ReplayStage) -> impl Fn(StabilizerError) -> ReplayFailure {
    move |e| ReplayFailure {
        stage: stage.clone(),
        reason: e.to_string(),
    }
}

/// Replays `p` in the stabilizer simulator: emission, LC unitaries, parity
/// measurements with qubit removal, recorded corrections. Succeeds when the
/// final state, relabeled by `final_map`, is the graph state of `target` up
/// to stabilizer signs.
pub fn replay(p: &ConstructionProtocol, target: &Graph) -> Result<(), ReplayFailure> {
    let mut t = emit_caterpillar_forest(&p.initial)?;
    if !t.same_state(&Tableau::from_graph(&p.initial)) {
        return Err(ReplayFailure {
            stage: ReplayStage::Emission,
            reason: "emitted state differs from the initial graph state".into(),
        });
    }
    let mut alive: Vec<usize> = (0..p.initial.n()).collect();
    let mut fusions = 0;
    for (i, step) in p.steps.iter().enumerate() {
        let stage = ReplayStage::Step(i);
        let fail = |reason: String| ReplayFailure {
            stage: ReplayStage::Step(i),
            reason,
        };
        let pos = |l: usize| alive.iter().position(|&x| x == l).ok_or_else(|| fail(format!("qubit {l} is not present")));
        match step {
            Step::Lc(v) => {
                let q = pos(*v)?;
                let (g, frame) = t.to_graph();
                if !frame.is_pauli() {
                    return Err(fail("state is not a graph state up to Paulis".into()));
                }
                t.apply_all(&local_complement_gates(&g, q)).map_err(stab_err(stage))?;
            }
            Step::Fuse { a, b, correction, expect } => {
                let (qa, qb) = (pos(*a)?, pos(*b)?);
                if qa == qb {
                    return Err(fail("fusion of a qubit with itself".into()));
                }
                for op in FusionKind::XzZx.operators(qa, qb) {
                    t.measure_pauli(&op, None).map_err(stab_err(stage.clone()))?;
                }
                t = t
                    .delete_qubits(VertexSet::from_vertices([qa, qb]))
                    .map_err(stab_err(stage.clone()))?;
                if let Some(c) = correction {
                    t.apply_frame(c).map_err(stab_err(stage.clone()))?;
                }
                alive.retain(|&l| l != *a && l != *b);
                if let Some(g) = expect {
                    if !t.same_group_up_to_signs(&Tableau::from_graph(g)) {
                        return Err(fail("state after fusion differs from the recorded graph".into()));
                    }
                }
                fusions += 1;
            }
        }
    }
    let fail = |reason: String| ReplayFailure {
        stage: ReplayStage::Final,
        reason,
    };
    if fusions != p.depth {
        return Err(fail(format!("{fusions} fusions but depth {}", p.depth)));
    }
    if alive.len() != target.n() {
        return Err(fail(format!("{} qubits left for a {}-vertex target", alive.len(), target.n())));
    }
    let images: Option<Vec<usize>> = alive.iter().map(|&l| p.final_map.get(l)).collect();
    let images = images.ok_or_else(|| fail("final map misses a surviving qubit".into()))?;
    let t = t
        .permute_qubits(&VertexMap::from_permutation(&images))
        .map_err(|e| fail(e.to_string()))?;
    if !t.same_group_up_to_signs(&Tableau::from_graph(target)) {
        return Err(fail("final state is not the target graph state".into()));
    }
    Ok(())
}

pub fn replay_verify(p: &ConstructionProtocol, target: &Graph) -> bool {
    replay(p, target).is_ok()
}

/// Parses `LC(1), fuse 0&5, LC(2)` style step lists.
pub fn parse_steps(s: &str) -> Result<Vec<Step>, QueryError> {
    let bad = |t: &str| QueryError::Format(format!("cannot parse step {t:?}"));
    let num = |t: &str, tok: &str| t.trim().parse::<usize>().map_err(|_| bad(tok));
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|tok| {
            if let Some(inner) = tok.strip_prefix("LC(").and_then(|r| r.strip_suffix(')')) {
                Ok(Step::Lc(num(inner, tok)?))
            } else if let Some(pair) = tok.strip_prefix("fuse") {
                let (a, b) = pair.split_once('&').ok_or_else(|| bad(tok))?;
                Ok(Step::Fuse {
                    a: num(a, tok)?,
                    b: num(b, tok)?,
                    correction: None,
                    expect: None,
                })
            } else {
                Err(bad(tok))
            }
        })
        .collect()
}

/// Runs `steps` on `initial` at the graph level, starting from its graph
/// state: LC by graph rewriting, fusions through the tableau. Returns the
/// resulting graph (surviving labels in increasing order) with the
/// corrections and checkpoints filled in, so the protocol replays exactly.
pub fn complete_steps(initial: &Graph, steps: &[Step]) -> Result<(Graph, Vec<Step>), QueryError> {
    let mut alive: Vec<usize> = (0..initial.n()).collect();
    let mut cur = *initial;
    let mut out = Vec::with_capacity(steps.len());
    for step in steps {
        let pos = |l: usize| {
            alive
                .iter()
                .position(|&x| x == l)
                .ok_or_else(|| QueryError::Format(format!("qubit {l} is not present at {step}")))
        };
        match *step {
            Step::Lc(v) => {
                cur.local_complement_in_place(pos(v)?);
                out.push(Step::Lc(v));
            }
            Step::Fuse { a, b, .. } => {
                let r = fuse(&cur, pos(a)?, pos(b)?, FusionKind::XzZx)?;
                out.push(Step::Fuse {
                    a,
                    b,
                    correction: (!r.frame.is_pauli()).then(|| r.frame.inverse()),
                    expect: Some(r.graph),
                });
                alive.retain(|&l| l != a && l != b);
                cur = r.graph;
            }
        }
    }
    Ok((cur, out))
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "op")]
enum StepJson {
    #[serde(rename = "LC")]
    Lc { v: usize },
    #[serde(rename = "FUSE")]
    Fuse {
        a: usize,
        b: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        correction: Option<LocalCliffordFrame>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
}

#[derive(Serialize, Deserialize)]
struct ProtocolJson {
    initial: String,
    steps: Vec<StepJson>,
    map: Vec<Option<usize>>,
    depth: u32,
}

impl ConstructionProtocol {
    pub fn fusion_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s, Step::Fuse { .. })).count()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = ProtocolJson {
            initial: write_graph6(&self.initial),
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Lc(v) => StepJson::Lc { v: *v },
                    Step::Fuse { a, b, correction, expect } => StepJson::Fuse {
                        a: *a,
                        b: *b,
                        correction: correction.clone(),
                        expect: expect.as_ref().map(write_graph6),
                    },
                })
                .collect(),
            map: self.final_map.images().collect(),
            depth: self.depth,
        };
        serde_json::to_value(doc).expect("protocol serializes")
    }

    /// JSON document: `{initial, steps: [{op: "LC", v} | {op: "FUSE", a, b}], map, depth}`.
    pub fn to_json(&self) -> String {
        self.to_json_value().to_string()
    }

    pub fn from_json(s: &str) -> Result<ConstructionProtocol, QueryError> {
        let doc: ProtocolJson = serde_json::from_str(s).map_err(|e| QueryError::Format(e.to_string()))?;
        let steps = doc
            .steps
            .into_iter()
            .map(|s| {
                Ok(match s {
                    StepJson::Lc { v } => Step::Lc(v),
                    StepJson::Fuse { a, b, correction, expect } => Step::Fuse {
                        a,
                        b,
                        correction,
                        expect: expect.map(|g| read_graph6(g.as_bytes())).transpose()?,
                    },
                })
            })
            .collect::<Result<Vec<_>, QueryError>>()?;
        Ok(ConstructionProtocol {
            initial: read_graph6(doc.initial.as_bytes())?,
            steps,
            final_map: VertexMap::from_images(doc.map),
            depth: doc.depth,
        })
    }
}

/// Protocol JSON as bytes.
pub fn export_protocol(p: &ConstructionProtocol) -> Vec<u8> {
    p.to_json().into_bytes()
}
