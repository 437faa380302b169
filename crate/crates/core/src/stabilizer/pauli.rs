use std::fmt;

/// `±1` eigenvalue of a Hermitian Pauli.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_int(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Single-qubit Pauli label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli1 {
    I,
    X,
    Y,
    Z,
}

impl Pauli1 {
    /// `(x, z)` bits of the operator.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli1::I => (false, false),
            Pauli1::X => (true, false),
            Pauli1::Y => (true, true),
            Pauli1::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Pauli1 {
        match (x, z) {
            (false, false) => Pauli1::I,
            (true, false) => Pauli1::X,
            (true, true) => Pauli1::Y,
            (false, true) => Pauli1::Z,
        }
    }
}

/// Multi-qubit Pauli operator `i^phase · ∏_q X_q^{x_q} Z_q^{z_q}`.
///
/// Bit `q` of `x`/`z` refers to qubit `q`. With this ordering convention
/// `Y = i·X·Z`, so a Hermitian operator has `phase ≡ |x ∧ z| (mod 2)` and its
/// sign is `(-1)^{(phase - |x ∧ z|)/2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliString {
    pub x: u32,
    pub z: u32,
    /// Power of `i`, modulo 4.
    pub phase: u8,
}

impl PauliString {
    pub const IDENTITY: PauliString = PauliString { x: 0, z: 0, phase: 0 };

    /// Hermitian Pauli with the given sign.
    pub fn hermitian(x: u32, z: u32, sign: Sign) -> Self {
        let base = ((x & z).count_ones() & 3) as u8;
        let phase = match sign {
            Sign::Plus => base,
            Sign::Minus => (base + 2) & 3,
        };
        PauliString { x, z, phase }
    }

    pub fn x_on(mask: u32) -> Self {
        Self::hermitian(mask, 0, Sign::Plus)
    }

    pub fn z_on(mask: u32) -> Self {
        Self::hermitian(0, mask, Sign::Plus)
    }

    pub fn single(q: usize, p: Pauli1) -> Self {
        let (x, z) = p.bits();
        Self::hermitian((x as u32) << q, (z as u32) << q, Sign::Plus)
    }

    /// Builds a Hermitian operator from per-qubit labels, e.g. `[(0, X), (1, Z)]`.
    pub fn from_paulis(ops: &[(usize, Pauli1)], sign: Sign) -> Self {
        let mut x = 0;
        let mut z = 0;
        for &(q, p) in ops {
            let (px, pz) = p.bits();
            x |= (px as u32) << q;
            z |= (pz as u32) << q;
        }
        Self::hermitian(x, z, sign)
    }

    /// Parses strings like `"+XZI"` or `"-YY"`; character `k` is qubit `k`.
    pub fn parse(s: &str) -> Option<Self> {
        let (sign, body) = match s.as_bytes().first()? {
            b'+' => (Sign::Plus, &s[1..]),
            b'-' => (Sign::Minus, &s[1..]),
            _ => (Sign::Plus, s),
        };
        let mut ops = Vec::new();
        for (q, c) in body.chars().enumerate() {
            let p = match c {
                'I' | '.' | '_' => Pauli1::I,
                'X' => Pauli1::X,
                'Y' => Pauli1::Y,
                'Z' => Pauli1::Z,
                _ => return None,
            };
            ops.push((q, p));
        }
        Some(Self::from_paulis(&ops, sign))
    }

    #[inline]
    pub fn support(&self) -> u32 {
        self.x | self.z
    }

    pub fn weight(&self) -> usize {
        self.support().count_ones() as usize
    }

    pub fn get(&self, q: usize) -> Pauli1 {
        Pauli1::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x & self.z).count_ones()) % 2 == 0
    }

    /// Sign of a Hermitian operator.
    pub fn sign(&self) -> Sign {
        debug_assert!(self.is_hermitian());
        let base = ((self.x & self.z).count_ones() & 3) as u8;
        if (self.phase + 4 - base) & 3 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn with_sign(self, sign: Sign) -> Self {
        Self::hermitian(self.x, self.z, sign)
    }

    pub fn negated(self) -> Self {
        PauliString {
            phase: (self.phase + 2) & 3,
            ..self
        }
    }

    #[inline]
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z) ^ (self.z & other.x)).count_ones() % 2 == 0
    }

    /// Operator product `self · other`.
    #[inline]
    pub fn mul(&self, other: &PauliString) -> PauliString {
        // Z^a X^b = (-1)^{a·b} X^b Z^a per qubit.
        let swap = ((self.z & other.x).count_ones() & 1) as u8;
        PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * swap) & 3,
        }
    }

    /// True if both act identically up to sign/phase.
    pub fn same_up_to_phase(&self, other: &PauliString) -> bool {
        self.x == other.x && self.z == other.z
    }

    /// Removes qubit `q`, shifting higher qubits down by one.
    pub(crate) fn remove_qubit(&self, q: usize) -> PauliString {
        let low = (1u32 << q) - 1;
        let squeeze = |m: u32| (m & low) | ((m >> 1) & !low);
        let removed_y = (self.x & self.z) >> q & 1;
        // Dropping a Y factor drops its implicit i.
        PauliString {
            x: squeeze(self.x),
            z: squeeze(self.z),
            phase: (self.phase + 4 - removed_y as u8) & 3,
        }
    }

    pub fn to_string_n(&self, n: usize) -> String {
        let mut s = String::with_capacity(n + 1);
        if self.is_hermitian() {
            s.push(if self.sign().is_plus() { '+' } else { '-' });
        } else {
            s.push_str(if self.sign_imag_plus() { "+i" } else { "-i" });
        }
        for q in 0..n {
            s.push(match self.get(q) {
                Pauli1::I => 'I',
                Pauli1::X => 'X',
                Pauli1::Y => 'Y',
                Pauli1::Z => 'Z',
            });
        }
        s
    }

    fn sign_imag_plus(&self) -> bool {
        let base = ((self.x & self.z).count_ones() & 3) as u8;
        (self.phase + 4 - base) & 3 == 1
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = 32 - (self.x | self.z).leading_zeros() as usize;
        write!(f, "{}", self.to_string_n(n.max(1)))
    }
}
