use std::fmt;

use serde::{Deserialize, Serialize};

use super::pauli::{Pauli1, PauliString, Sign};

/// Named single-qubit generators used in gate words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate1 {
    H,
    /// Phase gate `diag(1, i)`.
    R,
    X,
    Z,
}

impl Gate1 {
    pub fn name(self) -> &'static str {
        match self {
            Gate1::H => "H",
            Gate1::R => "R",
            Gate1::X => "X",
            Gate1::Z => "Z",
        }
    }

    pub fn clifford(self) -> LocalClifford {
        match self {
            Gate1::H => LocalClifford::H,
            Gate1::R => LocalClifford::R,
            Gate1::X => LocalClifford::PAULI_X,
            Gate1::Z => LocalClifford::PAULI_Z,
        }
    }
}

/// A single-qubit Clifford modulo global phase, stored as the signed images
/// of `X` and `Z` under conjugation `P ↦ U P U†`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct LocalClifford {
    x_img: (Pauli1, Sign),
    z_img: (Pauli1, Sign),
}

const NON_IDENTITY: [Pauli1; 3] = [Pauli1::X, Pauli1::Y, Pauli1::Z];

impl LocalClifford {
    pub const IDENTITY: LocalClifford = LocalClifford {
        x_img: (Pauli1::X, Sign::Plus),
        z_img: (Pauli1::Z, Sign::Plus),
    };
    pub const H: LocalClifford = LocalClifford {
        x_img: (Pauli1::Z, Sign::Plus),
        z_img: (Pauli1::X, Sign::Plus),
    };
    pub const R: LocalClifford = LocalClifford {
        x_img: (Pauli1::Y, Sign::Plus),
        z_img: (Pauli1::Z, Sign::Plus),
    };
    pub const PAULI_X: LocalClifford = LocalClifford {
        x_img: (Pauli1::X, Sign::Plus),
        z_img: (Pauli1::Z, Sign::Minus),
    };
    pub const PAULI_Z: LocalClifford = LocalClifford {
        x_img: (Pauli1::X, Sign::Minus),
        z_img: (Pauli1::Z, Sign::Plus),
    };

    /// Builds an element from images; `None` unless they anticommute.
    pub fn from_images(x_img: (Pauli1, Sign), z_img: (Pauli1, Sign)) -> Option<Self> {
        if x_img.0 == Pauli1::I || z_img.0 == Pauli1::I || x_img.0 == z_img.0 {
            return None;
        }
        Some(LocalClifford { x_img, z_img })
    }

    pub fn x_image(&self) -> (Pauli1, Sign) {
        self.x_img
    }

    pub fn z_image(&self) -> (Pauli1, Sign) {
        self.z_img
    }

    /// All 24 elements; index order matches [`LocalClifford::index`].
    pub fn all() -> impl Iterator<Item = LocalClifford> {
        (0..24).map(|i| Self::from_index(i).expect("index in range"))
    }

    pub fn from_index(i: u8) -> Option<Self> {
        if i >= 24 {
            return None;
        }
        let xs = if i & 1 == 1 { Sign::Minus } else { Sign::Plus };
        let zs = if i & 2 == 2 { Sign::Minus } else { Sign::Plus };
        let pair = i / 4;
        let xp = NON_IDENTITY[(pair / 2) as usize];
        let others: Vec<Pauli1> = NON_IDENTITY.iter().copied().filter(|&p| p != xp).collect();
        let zp = others[(pair % 2) as usize];
        Some(LocalClifford {
            x_img: (xp, xs),
            z_img: (zp, zs),
        })
    }

    pub fn index(&self) -> u8 {
        let xpos = NON_IDENTITY.iter().position(|&p| p == self.x_img.0).expect("non-identity") as u8;
        let others: Vec<Pauli1> = NON_IDENTITY.iter().copied().filter(|&p| p != self.x_img.0).collect();
        let zpos = others.iter().position(|&p| p == self.z_img.0).expect("distinct image") as u8;
        (xpos * 2 + zpos) * 4 + (!self.x_img.1.is_plus()) as u8 + 2 * (!self.z_img.1.is_plus()) as u8
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// True for `I, X, Y, Z`: elements that only flip signs.
    pub fn is_pauli(&self) -> bool {
        self.x_img.0 == Pauli1::X && self.z_img.0 == Pauli1::Z
    }

    fn image_string(img: (Pauli1, Sign), q: usize) -> PauliString {
        PauliString::single(q, img.0).with_sign(img.1)
    }

    /// Conjugates the factor of `p` acting on qubit `q`.
    pub fn conjugate(&self, p: &PauliString, q: usize) -> PauliString {
        let bit = 1u32 << q;
        let a = p.x & bit != 0;
        let b = p.z & bit != 0;
        let img = match (a, b) {
            (false, false) => return *p,
            (true, false) => Self::image_string(self.x_img, q),
            (false, true) => Self::image_string(self.z_img, q),
            (true, true) => Self::image_string(self.x_img, q).mul(&Self::image_string(self.z_img, q)),
        };
        PauliString {
            x: (p.x & !bit) | img.x,
            z: (p.z & !bit) | img.z,
            phase: (p.phase + img.phase) & 3,
        }
    }

    /// `other ∘ self`: apply `self` first, then `other`.
    pub fn then(&self, other: &LocalClifford) -> LocalClifford {
        let map = |img: (Pauli1, Sign)| {
            let p = other.conjugate(&Self::image_string(img, 0), 0);
            (p.get(0), p.sign())
        };
        LocalClifford {
            x_img: map(self.x_img),
            z_img: map(self.z_img),
        }
    }

    pub fn inverse(&self) -> LocalClifford {
        Self::all()
            .find(|c| self.then(c).is_identity())
            .expect("group element has an inverse")
    }

    /// Shortest gate sequence (applied left to right) realizing this element
    /// up to global phase.
    pub fn gate_word(&self) -> Vec<Gate1> {
        words()[self.index() as usize].clone()
    }
}

fn words() -> &'static [Vec<Gate1>; 24] {
    use std::sync::OnceLock;
    static WORDS: OnceLock<[Vec<Gate1>; 24]> = OnceLock::new();
    WORDS.get_or_init(|| {
        let mut out: [Option<Vec<Gate1>>; 24] = Default::default();
        out[LocalClifford::IDENTITY.index() as usize] = Some(Vec::new());
        let mut frontier = vec![(LocalClifford::IDENTITY, Vec::new())];
        let gens = [Gate1::H, Gate1::R, Gate1::X, Gate1::Z];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for (c, w) in frontier {
                for g in gens {
                    let d = c.then(&g.clifford());
                    if out[d.index() as usize].is_none() {
                        let mut w2: Vec<Gate1> = w.clone();
                        w2.push(g);
                        out[d.index() as usize] = Some(w2.clone());
                        next.push((d, w2));
                    }
                }
            }
            frontier = next;
        }
        out.map(|w| w.expect("generators reach the whole group"))
    })
}

impl fmt::Debug for LocalClifford {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.gate_word();
        if word.is_empty() {
            return write!(f, "I");
        }
        for g in word {
            write!(f, "{}", g.name())?;
        }
        Ok(())
    }
}

impl Serialize for LocalClifford {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let word: String = self.gate_word().iter().map(|g| g.name()).collect();
        s.serialize_str(if word.is_empty() { "I" } else { &word })
    }
}

impl<'de> Deserialize<'de> for LocalClifford {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut c = LocalClifford::IDENTITY;
        for ch in s.chars() {
            let g = match ch {
                'I' => continue,
                'H' => Gate1::H,
                'R' => Gate1::R,
                'X' => Gate1::X,
                'Z' => Gate1::Z,
                _ => return Err(serde::de::Error::custom(format!("unknown gate {ch:?}"))),
            };
            c = c.then(&g.clifford());
        }
        Ok(c)
    }
}

/// Per-qubit single-qubit Clifford correction.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct LocalCliffordFrame(pub Vec<LocalClifford>);

impl LocalCliffordFrame {
    pub fn identity(n: usize) -> Self {
        LocalCliffordFrame(vec![LocalClifford::IDENTITY; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(LocalClifford::is_identity)
    }

    pub fn is_pauli(&self) -> bool {
        self.0.iter().all(LocalClifford::is_pauli)
    }

    pub fn get(&self, q: usize) -> LocalClifford {
        self.0[q]
    }

    /// Apply `self` first, then `other`, qubit by qubit.
    pub fn then(&self, other: &LocalCliffordFrame) -> LocalCliffordFrame {
        assert_eq!(self.len(), other.len(), "frame width mismatch");
        LocalCliffordFrame(self.0.iter().zip(&other.0).map(|(a, b)| a.then(b)).collect())
    }

    pub fn inverse(&self) -> LocalCliffordFrame {
        LocalCliffordFrame(self.0.iter().map(LocalClifford::inverse).collect())
    }

    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        self.0.iter().enumerate().fold(*p, |acc, (q, c)| c.conjugate(&acc, q))
    }
}
