use rand::Rng;
use serde::{Deserialize, Serialize};

use super::clifford::{LocalClifford, LocalCliffordFrame};
use super::pauli::{PauliString, Sign};
use super::StabilizerError;
use crate::graph::{Graph, VertexMap, VertexSet, MAX_VERTICES};

/// Clifford gate with its target qubits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    /// Phase gate `diag(1, i)`.
    R(usize),
    X(usize),
    Z(usize),
    Cz(usize, usize),
    /// `Cnot(control, target)`.
    Cnot(usize, usize),
}

impl Gate {
    fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::R(q) | Gate::X(q) | Gate::Z(q) => (q, None),
            Gate::Cz(a, b) | Gate::Cnot(a, b) => (a, Some(b)),
        }
    }

    /// Conjugates `p` by the gate.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        let mut p = *p;
        let bit = |m: u32, q: usize| (m >> q) & 1;
        match *self {
            Gate::H(q) => {
                let (x, z) = (bit(p.x, q), bit(p.z, q));
                if x & z == 1 {
                    p.phase = (p.phase + 2) & 3;
                }
                p.x = (p.x & !(1 << q)) | (z << q);
                p.z = (p.z & !(1 << q)) | (x << q);
            }
            Gate::R(q) => {
                if bit(p.x, q) == 1 {
                    p.phase = (p.phase + 1) & 3;
                    p.z ^= 1 << q;
                }
            }
            Gate::Z(q) => {
                if bit(p.x, q) == 1 {
                    p.phase = (p.phase + 2) & 3;
                }
            }
            Gate::X(q) => {
                if bit(p.z, q) == 1 {
                    p.phase = (p.phase + 2) & 3;
                }
            }
            Gate::Cz(a, b) => {
                let (xa, xb) = (bit(p.x, a), bit(p.x, b));
                if xa & xb == 1 {
                    p.phase = (p.phase + 2) & 3;
                }
                p.z ^= (xb << a) | (xa << b);
            }
            Gate::Cnot(c, t) => {
                p.x ^= bit(p.x, c) << t;
                p.z ^= bit(p.z, t) << c;
            }
        }
        p
    }
}

/// Result of a Pauli measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Measurement {
    pub outcome: Sign,
    /// True when the outcome was fixed by the state.
    pub deterministic: bool,
}

/// Stabilizer tableau on at most [`MAX_VERTICES`] qubits.
///
/// Destabilizer `d_i` anticommutes with stabilizer `s_i` and commutes with
/// every other stabilizer and destabilizer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tableau {
    n: usize,
    stabilizers: Vec<PauliString>,
    destabilizers: Vec<PauliString>,
}

fn symplectic(a: &PauliString, b: &PauliString) -> bool {
    !a.commutes_with(b)
}

impl Tableau {
    /// `|0…0⟩`.
    pub fn zero_state(n: usize) -> Result<Self, StabilizerError> {
        if n > MAX_VERTICES {
            return Err(StabilizerError::TooManyQubits(n));
        }
        Ok(Tableau {
            n,
            stabilizers: (0..n).map(|q| PauliString::z_on(1 << q)).collect(),
            destabilizers: (0..n).map(|q| PauliString::x_on(1 << q)).collect(),
        })
    }

    /// `|+…+⟩`.
    pub fn plus_state(n: usize) -> Result<Self, StabilizerError> {
        let mut t = Self::zero_state(n)?;
        std::mem::swap(&mut t.stabilizers, &mut t.destabilizers);
        Ok(t)
    }

    /// Graph state: stabilizer `i` is `X_i Z_{N(i)}` with sign `+`.
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        Tableau {
            n,
            stabilizers: (0..n)
                .map(|i| PauliString::hermitian(1 << i, g.neighbor_mask(i), Sign::Plus))
                .collect(),
            destabilizers: (0..n).map(|i| PauliString::z_on(1 << i)).collect(),
        }
    }

    /// Builds a tableau from `n` independent, commuting Hermitian generators,
    /// choosing destabilizers by GF(2) elimination.
    pub fn from_stabilizers(n: usize, stabs: &[PauliString]) -> Result<Self, StabilizerError> {
        if n > MAX_VERTICES {
            return Err(StabilizerError::TooManyQubits(n));
        }
        if stabs.len() != n {
            return Err(StabilizerError::InvalidStabilizers(format!(
                "expected {n} generators, got {}",
                stabs.len()
            )));
        }
        let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for (i, s) in stabs.iter().enumerate() {
            if (s.x | s.z) & !full != 0 {
                return Err(StabilizerError::InvalidStabilizers(format!("generator {i} acts outside {n} qubits")));
            }
            if !s.is_hermitian() {
                return Err(StabilizerError::InvalidStabilizers(format!("generator {i} is not Hermitian")));
            }
            for (j, t) in stabs[..i].iter().enumerate() {
                if !s.commutes_with(t) {
                    return Err(StabilizerError::InvalidStabilizers(format!(
                        "generators {j} and {i} anticommute"
                    )));
                }
            }
        }
        // Solve <d, s_j> = [i == j] for every i at once. Unknown d is the
        // 2n-bit vector (d.x | d.z << n); <d, s_j> = d.x·s_j.z + d.z·s_j.x.
        let mut rows: Vec<(u64, u32)> = stabs
            .iter()
            .enumerate()
            .map(|(j, s)| (s.z as u64 | (s.x as u64) << n, 1u32 << j))
            .collect();
        let mut pivots = Vec::with_capacity(n);
        let mut r = 0;
        for col in 0..2 * n {
            let Some(p) = (r..n).find(|&k| rows[k].0 >> col & 1 == 1) else {
                continue;
            };
            rows.swap(r, p);
            for k in 0..n {
                if k != r && rows[k].0 >> col & 1 == 1 {
                    rows[k].0 ^= rows[r].0;
                    rows[k].1 ^= rows[r].1;
                }
            }
            pivots.push(col);
            r += 1;
        }
        if r < n {
            return Err(StabilizerError::InvalidStabilizers("generators are dependent".into()));
        }
        let mut destabs: Vec<PauliString> = (0..n)
            .map(|i| {
                let mut v = 0u64;
                for (k, &col) in pivots.iter().enumerate() {
                    if rows[k].1 >> i & 1 == 1 {
                        v |= 1 << col;
                    }
                }
                PauliString::hermitian((v & full as u64) as u32, (v >> n) as u32, Sign::Plus)
            })
            .collect();
        for j in 0..n {
            for i in 0..j {
                if symplectic(&destabs[i], &destabs[j]) {
                    let fixed = destabs[j].mul(&stabs[i]);
                    destabs[j] = fixed.with_sign(Sign::Plus);
                }
            }
        }
        let t = Tableau {
            n,
            stabilizers: stabs.to_vec(),
            destabilizers: destabs,
        };
        debug_assert!(t.is_valid());
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stabilizers(&self) -> &[PauliString] {
        &self.stabilizers
    }

    pub fn destabilizers(&self) -> &[PauliString] {
        &self.destabilizers
    }

    /// Checks commutation relations and Hermiticity.
    pub fn is_valid(&self) -> bool {
        let n = self.n;
        if self.stabilizers.len() != n || self.destabilizers.len() != n {
            return false;
        }
        for i in 0..n {
            let (si, di) = (&self.stabilizers[i], &self.destabilizers[i]);
            if !si.is_hermitian() || !di.is_hermitian() {
                return false;
            }
            for j in 0..n {
                let sj = &self.stabilizers[j];
                let dj = &self.destabilizers[j];
                if symplectic(si, sj) || symplectic(di, dj) || symplectic(di, sj) != (i == j) {
                    return false;
                }
            }
        }
        true
    }

    fn check_qubit(&self, q: usize) -> Result<(), StabilizerError> {
        if q >= self.n {
            Err(StabilizerError::QubitOutOfRange { qubit: q, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn apply(&mut self, gate: Gate) -> Result<(), StabilizerError> {
        let (a, b) = gate.qubits();
        self.check_qubit(a)?;
        if let Some(b) = b {
            self.check_qubit(b)?;
            if a == b {
                return Err(StabilizerError::RepeatedQubit(a));
            }
        }
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            *p = gate.conjugate(p);
        }
        Ok(())
    }

    pub fn apply_all(&mut self, gates: &[Gate]) -> Result<(), StabilizerError> {
        gates.iter().try_for_each(|&g| self.apply(g))
    }

    pub fn apply_local(&mut self, q: usize, c: &LocalClifford) -> Result<(), StabilizerError> {
        self.check_qubit(q)?;
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            *p = c.conjugate(p, q);
        }
        Ok(())
    }

    pub fn apply_frame(&mut self, frame: &LocalCliffordFrame) -> Result<(), StabilizerError> {
        if frame.len() != self.n {
            return Err(StabilizerError::SizeMismatch {
                expected: self.n,
                found: frame.len(),
            });
        }
        for p in self.stabilizers.iter_mut().chain(self.destabilizers.iter_mut()) {
            *p = frame.conjugate(p);
        }
        Ok(())
    }

    fn check_pauli(&self, p: &PauliString) -> Result<(), StabilizerError> {
        let full = (1u64 << self.n) - 1;
        if (p.support() as u64) & !full != 0 {
            let q = 31 - p.support().leading_zeros() as usize;
            return Err(StabilizerError::QubitOutOfRange { qubit: q, n: self.n });
        }
        if !p.is_hermitian() || p.support() == 0 {
            return Err(StabilizerError::InvalidMeasurement);
        }
        Ok(())
    }

    /// Outcome of measuring `p` if the state fixes it.
    pub fn expectation(&self, p: &PauliString) -> Option<Sign> {
        if self.stabilizers.iter().any(|s| !s.commutes_with(p)) {
            return None;
        }
        let prod = self
            .destabilizers
            .iter()
            .zip(&self.stabilizers)
            .filter(|(d, _)| !d.commutes_with(p))
            .fold(PauliString::IDENTITY, |acc, (_, s)| acc.mul(s));
        debug_assert!(prod.same_up_to_phase(p));
        Some(if prod.phase == p.phase { Sign::Plus } else { Sign::Minus })
    }

    /// Measures Hermitian Pauli `p`. A random outcome is replaced by `force`
    /// when given, and by `+1` otherwise.
    pub fn measure_pauli(&mut self, p: &PauliString, force: Option<Sign>) -> Result<Measurement, StabilizerError> {
        self.measure_with(p, force, || Sign::Plus)
    }

    /// Measures `p`, drawing a random outcome from `rng` when it is not fixed.
    pub fn measure_pauli_random<R: Rng + ?Sized>(
        &mut self,
        p: &PauliString,
        rng: &mut R,
    ) -> Result<Measurement, StabilizerError> {
        self.measure_with(p, None, || if rng.gen::<bool>() { Sign::Plus } else { Sign::Minus })
    }

    fn measure_with(
        &mut self,
        p: &PauliString,
        force: Option<Sign>,
        coin: impl FnOnce() -> Sign,
    ) -> Result<Measurement, StabilizerError> {
        self.check_pauli(p)?;
        let Some(k) = self.stabilizers.iter().position(|s| !s.commutes_with(p)) else {
            let outcome = self.expectation(p).expect("commutes with the group");
            if let Some(f) = force {
                if f != outcome {
                    return Err(StabilizerError::ForcedOutcomeContradiction { forced: f, actual: outcome });
                }
            }
            return Ok(Measurement {
                outcome,
                deterministic: true,
            });
        };
        let sk = self.stabilizers[k];
        for j in 0..self.n {
            if j != k && !self.stabilizers[j].commutes_with(p) {
                self.stabilizers[j] = self.stabilizers[j].mul(&sk);
            }
            if j != k && !self.destabilizers[j].commutes_with(p) {
                self.destabilizers[j] = self.destabilizers[j].mul(&sk);
            }
        }
        let outcome = force.unwrap_or_else(coin);
        self.destabilizers[k] = sk;
        self.stabilizers[k] = p.with_sign(if outcome.is_plus() { p.sign() } else { p.sign().flip() });
        Ok(Measurement {
            outcome,
            deterministic: false,
        })
    }

    /// Removes `qubits`, which must be unentangled from the rest (the state
    /// factors as `ψ_Q ⊗ ψ_rest`). Remaining qubits are relabeled densely in
    /// increasing order.
    pub fn delete_qubits(&self, qubits: VertexSet) -> Result<Tableau, StabilizerError> {
        for q in qubits {
            self.check_qubit(q)?;
        }
        let n = self.n;
        let rest = VertexSet::full(n).difference(qubits).0;
        let q_mask = qubits.0;
        // Eliminate over the rest-columns; rows that clear out are supported on Q.
        let mut rows = self.stabilizers.clone();
        let mut r = 0;
        for col in 0..2 * n {
            let (q, use_x) = (col % n, col < n);
            if rest >> q & 1 == 0 {
                continue;
            }
            let has = |p: &PauliString| if use_x { p.x >> q & 1 == 1 } else { p.z >> q & 1 == 1 };
            let Some(piv) = (r..n).find(|&k| has(&rows[k])) else {
                continue;
            };
            rows.swap(r, piv);
            let pr = rows[r];
            for k in 0..n {
                if k != r && has(&rows[k]) {
                    rows[k] = rows[k].mul(&pr);
                }
            }
            r += 1;
        }
        let local: Vec<PauliString> = rows[r..].to_vec();
        if local.len() != qubits.len() {
            return Err(StabilizerError::Entangled(qubits));
        }
        // Echelon basis of the Q-local subgroup, then clear Q-parts of the others.
        let mut basis: Vec<(usize, PauliString)> = Vec::new();
        let mut local = local;
        for col in 0..2 * n {
            let (q, use_x) = (col % n, col < n);
            if q_mask >> q & 1 == 0 {
                continue;
            }
            let has = |p: &PauliString| if use_x { p.x >> q & 1 == 1 } else { p.z >> q & 1 == 1 };
            let Some(piv) = local.iter().position(has) else {
                continue;
            };
            let pr = local.swap_remove(piv);
            for l in local.iter_mut() {
                if has(l) {
                    *l = l.mul(&pr);
                }
            }
            basis.push((col, pr));
        }
        let mut kept = Vec::with_capacity(n - qubits.len());
        for mut row in rows.into_iter().take(r) {
            for &(col, b) in &basis {
                let (q, use_x) = (col % n, col < n);
                let set = if use_x { row.x >> q & 1 == 1 } else { row.z >> q & 1 == 1 };
                if set {
                    row = row.mul(&b);
                }
            }
            if row.support() & q_mask != 0 {
                return Err(StabilizerError::Entangled(qubits));
            }
            for q in qubits.iter().collect::<Vec<_>>().into_iter().rev() {
                row = row.remove_qubit(q);
            }
            kept.push(row);
        }
        Tableau::from_stabilizers(n - qubits.len(), &kept)
    }

    /// `self ⊗ other`; qubits of `other` follow those of `self`.
    pub fn tensor(&self, other: &Tableau) -> Result<Tableau, StabilizerError> {
        let n = self.n + other.n;
        if n > MAX_VERTICES {
            return Err(StabilizerError::TooManyQubits(n));
        }
        let shift = |p: &PauliString| PauliString {
            x: p.x << self.n,
            z: p.z << self.n,
            phase: p.phase,
        };
        let mut t = self.clone();
        t.n = n;
        t.stabilizers.extend(other.stabilizers.iter().map(shift));
        t.destabilizers.extend(other.destabilizers.iter().map(shift));
        Ok(t)
    }

    /// Relabels qubit `q` as `perm[q]`.
    pub fn permute_qubits(&self, perm: &VertexMap) -> Result<Tableau, StabilizerError> {
        if perm.len() != self.n || !perm.is_injective() || perm.images().any(|i| i.map_or(true, |v| v >= self.n)) {
            return Err(StabilizerError::InvalidPermutation);
        }
        let map = |p: &PauliString| {
            let mut out = PauliString {
                x: 0,
                z: 0,
                phase: p.phase,
            };
            for q in 0..self.n {
                let to = perm.get(q).expect("checked permutation");
                out.x |= (p.x >> q & 1) << to;
                out.z |= (p.z >> q & 1) << to;
            }
            out
        };
        Ok(Tableau {
            n: self.n,
            stabilizers: self.stabilizers.iter().map(map).collect(),
            destabilizers: self.destabilizers.iter().map(map).collect(),
        })
    }

    /// Appends a photon in `|0⟩`, applies `CNOT(spin → photon)`, then `H` on
    /// the photon (`LeafPhoton`) or on the spin (`LeafSpin`). Returns the new
    /// qubit's index.
    pub fn emit_photon(&mut self, spin: usize, mode: EmitMode) -> Result<usize, StabilizerError> {
        self.check_qubit(spin)?;
        if self.n >= MAX_VERTICES {
            return Err(StabilizerError::TooManyQubits(self.n + 1));
        }
        let p = self.n;
        self.n += 1;
        self.stabilizers.push(PauliString::z_on(1 << p));
        self.destabilizers.push(PauliString::x_on(1 << p));
        self.apply(Gate::Cnot(spin, p))?;
        match mode {
            EmitMode::LeafPhoton => self.apply(Gate::H(p))?,
            EmitMode::LeafSpin => self.apply(Gate::H(spin))?,
        }
        Ok(p)
    }

    /// Entanglement entropy in bits of the bipartition `part | rest`.
    pub fn entanglement_entropy(&self, part: VertexSet) -> usize {
        // S(A) = rank of the generators restricted to A, minus |A|.
        let proj: Vec<u64> = self
            .stabilizers
            .iter()
            .map(|s| (s.x & part.0) as u64 | ((s.z & part.0) as u64) << 32)
            .collect();
        gf2_rank(proj) - part.len()
    }

    /// Same state up to stabilizer signs.
    pub fn same_group_up_to_signs(&self, other: &Tableau) -> bool {
        if self.n != other.n {
            return false;
        }
        let key = |s: &PauliString| s.x as u64 | (s.z as u64) << 32;
        let a: Vec<u64> = self.stabilizers.iter().map(key).collect();
        let mut both = a.clone();
        both.extend(other.stabilizers.iter().map(key));
        gf2_rank(a) == gf2_rank(both)
    }

    /// Same state, signs included.
    pub fn same_state(&self, other: &Tableau) -> bool {
        self.n == other.n
            && other
                .stabilizers
                .iter()
                .all(|s| self.expectation(s) == Some(Sign::Plus))
    }

    /// Converts to a local-Clifford-equivalent graph state: applying the
    /// returned frame to the graph state reproduces this tableau exactly.
    pub fn to_graph(&self) -> (Graph, LocalCliffordFrame) {
        let n = self.n;
        let mut rows = self.stabilizers.clone();
        let mut applied = LocalCliffordFrame::identity(n);
        let push = |rows: &mut Vec<PauliString>, applied: &mut LocalCliffordFrame, q: usize, c: LocalClifford| {
            for p in rows.iter_mut() {
                *p = c.conjugate(p, q);
            }
            applied.0[q] = applied.0[q].then(&c);
        };

        // Row-reduce the X block with lowest-index pivots.
        let mut r = 0;
        let mut pivot_cols = 0u32;
        for q in 0..n {
            if let Some(p) = (r..n).find(|&k| rows[k].x >> q & 1 == 1) {
                rows.swap(r, p);
                let pr = rows[r];
                for k in 0..n {
                    if k != r && rows[k].x >> q & 1 == 1 {
                        rows[k] = rows[k].mul(&pr);
                    }
                }
                pivot_cols |= 1 << q;
                r += 1;
            }
        }
        for q in 0..n {
            if pivot_cols >> q & 1 == 0 {
                push(&mut rows, &mut applied, q, LocalClifford::H);
            }
        }
        // Now the X block has full rank; bring it to the identity.
        for q in 0..n {
            let p = (q..n)
                .find(|&k| rows[k].x >> q & 1 == 1)
                .expect("X block has full rank after Hadamards");
            rows.swap(q, p);
            let pr = rows[q];
            for k in 0..n {
                if k != q && rows[k].x >> q & 1 == 1 {
                    rows[k] = rows[k].mul(&pr);
                }
            }
        }
        for q in 0..n {
            if rows[q].z >> q & 1 == 1 {
                // R maps Y to -X; the sign is repaired below.
                push(&mut rows, &mut applied, q, LocalClifford::R);
            }
        }
        for q in 0..n {
            if !rows[q].sign().is_plus() {
                push(&mut rows, &mut applied, q, LocalClifford::PAULI_Z);
            }
        }
        let adj: Vec<u32> = rows.iter().map(|s| s.z).collect();
        let g = Graph::from_rows(&adj).expect("stabilizer rows form a symmetric adjacency matrix");
        (g, applied.inverse())
    }
}

/// Which qubit ends up as the new leaf after emission.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmitMode {
    LeafPhoton,
    LeafSpin,
}

pub(crate) fn gf2_rank(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    while let Some(i) = rows.iter().position(|&r| r != 0) {
        let pivot = rows.swap_remove(i);
        let low = pivot & pivot.wrapping_neg();
        for r in rows.iter_mut() {
            if *r & low != 0 {
                *r ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}
