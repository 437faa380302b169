//! Loss-tolerant graph codes built from progenitor graphs.
//!
//! The progenitor carries an encoding vertex `δ`; the code lives on the
//! remaining qubits. Loss is heralded erasure: a logical Pauli survives a
//! loss pattern when some representative `logical · S` avoids every lost
//! qubit.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Float;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexSet};
use crate::stabilizer::PauliString;
use crate::orbit::OrbitId;
use crate::tablebase::Tablebase;

/// Largest code handled by exact loss-pattern enumeration.
pub const MAX_CODE_QUBITS: usize = 16;

/// Bisection tolerance for thresholds.
pub const THRESHOLD_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("vertex {0} is not in the progenitor graph")]
    NoSuchVertex(usize),
    #[error("encoding vertex {0} has no neighbors")]
    IsolatedEncoding(usize),
    #[error("vertex {i_star} is not a neighbor of the encoding vertex {delta}")]
    NotAnInput { delta: usize, i_star: usize },
    #[error("{0} physical qubits exceed the enumeration limit of {MAX_CODE_QUBITS}")]
    TooLarge(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Logical {
    X,
    Y,
    Z,
}

impl Logical {
    pub const ALL: [Logical; 3] = [Logical::X, Logical::Y, Logical::Z];
}

impl fmt::Display for Logical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logical::X => "X",
            Logical::Y => "Y",
            Logical::Z => "Z",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphCode {
    pub progenitor: Graph,
    pub delta: usize,
    pub i_star: usize,
    /// Neighbors of `δ`, in progenitor labels.
    pub input: VertexSet,
    /// Progenitor label of each physical qubit; code qubit `q` is `physical[q]`.
    pub physical: Vec<usize>,
    /// Graph on the physical qubits.
    pub code_graph: Graph,
    pub logical_x: PauliString,
    pub logical_z: PauliString,
    pub generators: Vec<PauliString>,
}

fn graph_generator(g: &Graph, v: usize) -> PauliString {
    PauliString::hermitian(1 << v, g.neighbor_mask(v), crate::stabilizer::Sign::Plus)
}

pub fn make_code(progenitor: &Graph, delta: usize, i_star: usize) -> Result<GraphCode, CodeError> {
    let n = progenitor.n();
    if delta >= n {
        return Err(CodeError::NoSuchVertex(delta));
    }
    if i_star >= n {
        return Err(CodeError::NoSuchVertex(i_star));
    }
    let input = progenitor.neighbors(delta);
    if input.is_empty() {
        return Err(CodeError::IsolatedEncoding(delta));
    }
    if !input.contains(i_star) {
        return Err(CodeError::NotAnInput { delta, i_star });
    }
    let code_graph = progenitor.remove_vertex(delta);
    let physical: Vec<usize> = (0..n).filter(|&v| v != delta).collect();
    let to_code = |v: usize| if v > delta { v - 1 } else { v };
    let input_code = VertexSet(input.iter().map(|v| 1u32 << to_code(v)).fold(0, |a, b| a | b));
    let star = to_code(i_star);

    let logical_x = PauliString::z_on(input_code.0);
    let logical_z = graph_generator(&code_graph, star);
    let generators: Vec<PauliString> = (0..code_graph.n())
        .filter(|&q| q != star)
        .map(|q| {
            let s = graph_generator(&code_graph, q);
            if input_code.contains(q) {
                s.mul(&logical_z)
            } else {
                s
            }
        })
        .collect();

    assert!(!logical_x.commutes_with(&logical_z));
    for s in &generators {
        assert!(s.commutes_with(&logical_x) && s.commutes_with(&logical_z));
    }
    Ok(GraphCode {
        progenitor: progenitor.clone(),
        delta,
        i_star,
        input,
        physical,
        code_graph,
        logical_x,
        logical_z,
        generators,
    })
}

impl GraphCode {
    pub fn qubits(&self) -> usize {
        self.physical.len()
    }

    pub fn logical(&self, l: Logical) -> PauliString {
        match l {
            Logical::X => self.logical_x,
            Logical::Z => self.logical_z,
            Logical::Y => self.logical_x.mul(&self.logical_z),
        }
    }

    /// `ok[lost]` for every loss pattern over the physical qubits.
    ///
    /// Marks the complement of each representative's support, then closes
    /// downward: a pattern is fine iff it avoids some representative.
    pub fn recoverable_patterns(&self, l: Logical) -> Result<Vec<bool>, CodeError> {
        let m = self.qubits();
        if m > MAX_CODE_QUBITS {
            return Err(CodeError::TooLarge(m));
        }
        let full = ((1u64 << m) - 1) as u32;
        let mut ok = vec![false; 1 << m];
        let base = self.logical(l);
        let (mut x, mut z) = (base.x, base.z);
        ok[(full & !(x | z)) as usize] = true;
        // Gray-code walk over the stabilizer group.
        for i in 1u64..1 << self.generators.len() {
            let g = &self.generators[i.trailing_zeros() as usize];
            x ^= g.x;
            z ^= g.z;
            ok[(full & !(x | z)) as usize] = true;
        }
        for b in 0..m {
            let bit = 1usize << b;
            for s in 0..ok.len() {
                if s & bit != 0 && ok[s] {
                    ok[s ^ bit] = true;
                }
            }
        }
        Ok(ok)
    }

    /// Whether the logical survives losing `lost` (code-qubit indices).
    pub fn pattern_recoverable(&self, l: Logical, lost: VertexSet) -> bool {
        // Direct rank test: the logical restricted to the lost qubits must lie
        // in the span of the restricted generators.
        let m = self.qubits();
        let mask = lost.0 & (((1u64 << m) - 1) as u32);
        let pack = |p: &PauliString| ((p.x & mask) as u64) | (((p.z & mask) as u64) << 32);
        let rows: Vec<u64> = self.generators.iter().map(pack).collect();
        let target = pack(&self.logical(l));
        let r = crate::stabilizer::gf2_rank(rows.clone());
        let mut with = rows;
        with.push(target);
        crate::stabilizer::gf2_rank(with) == r
    }

    pub fn loss_curve(&self, l: Logical) -> Result<LossCurve, CodeError> {
        let ok = self.recoverable_patterns(l)?;
        let m = self.qubits();
        let mut coefficients = vec![0u64; m + 1];
        for (s, &fine) in ok.iter().enumerate() {
            if !fine {
                coefficients[s.count_ones() as usize] += 1;
            }
        }
        Ok(LossCurve { qubits: m, coefficients })
    }

    pub fn evaluate(&self) -> Result<CodeLoss, CodeError> {
        let x = self.loss_curve(Logical::X)?;
        let y = self.loss_curve(Logical::Y)?;
        let z = self.loss_curve(Logical::Z)?;
        let thresholds = [x.threshold(), y.threshold(), z.threshold()];
        Ok(CodeLoss {
            curves: [x, y, z],
            thresholds,
        })
    }
}

/// `c_k` = number of `k`-qubit loss patterns that destroy the logical.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LossCurve {
    pub qubits: usize,
    pub coefficients: Vec<u64>,
}

impl LossCurve {
    /// Logical loss rate `L(ε) = Σ c_k ε^k (1-ε)^(n-k)`.
    pub fn eval<F: Float>(&self, eps: F) -> F {
        let keep = F::one() - eps;
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                F::from(c).expect("count fits a float") * eps.powi(k as i32) * keep.powi((self.qubits - k) as i32)
            })
            .fold(F::zero(), |a, b| a + b)
    }

    /// Smallest `ε > 0` with `L(ε) = ε`, i.e. where encoding stops helping.
    /// Zero when `L(ε) ≥ ε` from the start, one when it never catches up.
    pub fn threshold(&self) -> f64 {
        const GRID: usize = 256;
        let f = |e: f64| self.eval(e) - e;
        let mut lo = 0.0;
        for i in 1..=GRID {
            let e = i as f64 / GRID as f64;
            if f(e) >= 0.0 {
                if i == 1 {
                    return 0.0;
                }
                let mut hi = e;
                while hi - lo > THRESHOLD_TOL {
                    let mid = 0.5 * (lo + hi);
                    if f(mid) < 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return 0.5 * (lo + hi);
            }
            lo = e;
        }
        1.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeLoss {
    /// Curves for X, Y, Z.
    pub curves: [LossCurve; 3],
    pub thresholds: [f64; 3],
}

impl CodeLoss {
    /// The code is only as good as its weakest logical measurement.
    pub fn threshold(&self) -> f64 {
        self.thresholds.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn worst(&self) -> Logical {
        let t = self.threshold();
        Logical::ALL[self.thresholds.iter().position(|&x| x == t).unwrap_or(0)]
    }
}

/// Best threshold over `i* ∈ N(δ)`. Every choice of `i*` gives the same
/// logical cosets, so all candidates tie; the loop guards that claim.
pub fn best_code(progenitor: &Graph, delta: usize) -> Result<(GraphCode, CodeLoss), CodeError> {
    let input = progenitor.neighbors(delta);
    let mut best: Option<(GraphCode, CodeLoss)> = None;
    for i_star in input.iter() {
        let code = make_code(progenitor, delta, i_star)?;
        let loss = code.evaluate()?;
        if best.as_ref().is_none_or(|(_, b)| loss.threshold() > b.threshold()) {
            best = Some((code, loss));
        }
    }
    best.ok_or(CodeError::IsolatedEncoding(delta))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeCandidate {
    pub orbit: u32,
    pub member: u32,
    pub depth: u32,
    pub nodes: usize,
    pub delta: usize,
    pub progenitor: String,
    pub thresholds: [f64; 3],
    pub threshold: f64,
}

impl CodeCandidate {
    fn rank(&self, other: &Self) -> Ordering {
        other
            .threshold
            .total_cmp(&self.threshold)
            .then(self.nodes.cmp(&other.nodes))
            .then(self.orbit.cmp(&other.orbit))
            .then(self.member.cmp(&other.member))
            .then(self.delta.cmp(&other.delta))
    }
}

fn orbit_candidates(tb: &Tablebase, id: OrbitId) -> Vec<CodeCandidate> {
    let depth = tb.depth(id);
    tb.members(id)
        .enumerate()
        .filter(|(_, g)| g.is_connected())
        .flat_map(|(k, g)| {
            let g6 = crate::graph::write_graph6(&g);
            (0..g.n())
                .map(|delta| {
                    // i* does not change the cosets, so the smallest input will do.
                    let i_star = g.neighbors(delta).iter().next().expect("connected");
                    let loss = make_code(&g, delta, i_star)
                        .and_then(|c| c.evaluate())
                        .expect("size checked by the orbit filter");
                    CodeCandidate {
                        orbit: id.0,
                        member: k as u32,
                        depth,
                        nodes: g.n(),
                        delta,
                        progenitor: g6.clone(),
                        thresholds: loss.thresholds,
                        threshold: loss.threshold(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

fn eligible(tb: &Tablebase, max_nodes: usize, budget: u32) -> Vec<OrbitId> {
    tb.orbit_ids()
        .filter(|&id| {
            let info = tb.info(id);
            info.depth <= budget && info.vertices >= 2 && info.vertices <= max_nodes.min(MAX_CODE_QUBITS + 1)
        })
        .collect()
}

/// Ranks every connected table graph with at most `max_nodes` vertices and
/// depth at most `budget` as a progenitor, over all encoding vertices.
/// Returns the best `limit` candidates.
pub fn search_codes(tb: &Tablebase, max_nodes: usize, budget: u32, limit: usize) -> Vec<CodeCandidate> {
    let mut all: Vec<CodeCandidate> = eligible(tb, max_nodes, budget)
        .par_iter()
        .flat_map_iter(|&id| orbit_candidates(tb, id))
        .collect();
    all.sort_by(|a, b| a.rank(b));
    all.truncate(limit);
    all
}

/// Top-ranked candidate at each exact depth `0..=budget`, in one pass.
pub fn best_per_depth(tb: &Tablebase, max_nodes: usize, budget: u32) -> Vec<Option<CodeCandidate>> {
    let slots = budget as usize + 1;
    let better = |a: Option<CodeCandidate>, b: Option<CodeCandidate>| match (a, b) {
        (Some(a), Some(b)) => Some(if b.rank(&a) == Ordering::Less { b } else { a }),
        (a, b) => a.or(b),
    };
    eligible(tb, max_nodes, budget)
        .par_iter()
        .map(|&id| {
            let mut out = vec![None; slots];
            let d = tb.depth(id) as usize;
            out[d] = orbit_candidates(tb, id).into_iter().min_by(|a, b| a.rank(b));
            out
        })
        .reduce(
            || vec![None; slots],
            |a, b| a.into_iter().zip(b).map(|(x, y)| better(x, y)).collect(),
        )
}
