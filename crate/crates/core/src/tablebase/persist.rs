//! Little-endian binary table format.
//!
//! ```text
//! header   magic "FTBL" | version u32 | max_qubits u32 | complete u8
//!          | created u64 | build_millis u64 | orbits u64 | words u64 | crc u32
//! orbits   per orbit: n u8 | depth u32 | len u32 | has_parent u8
//!          [| parent_orbit u32 | parent_member u32 | a u8 | b u8 | child_member u32]
//!          then crc u32
//! members  words × u64, then crc u32
//! ```
//!
//! Member offsets and the hash index are rebuilt on load.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::store::{words_for, GraphIndex, Loc};
use super::{OrbitRecord, TableMeta, Tablebase, MAX_INITIAL_QUBITS};
use crate::fusion::{fuse, FusionKind};
use crate::graph::{is_caterpillar_forest, is_isomorphic, GraphHash};
use crate::orbit::{FusionLink, OrbitId};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"FTBL";

/// How much validation `load` performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CheckMode {
    /// Tree shape, depth consistency, and bounds.
    #[default]
    Fast,
    /// Also replays every link, checks depth-0 seeds, and rejects
    /// duplicate members.
    Deep,
}

#[derive(Debug, thiserror::Error)]
pub enum TableError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("not a table file")]
    BadMagic,
    #[error("unsupported format version {found} (expected {FORMAT_VERSION})")]
    VersionMismatch { found: u32 },
    #[error("checksum mismatch or truncation in {section} section")]
    Checksum { section: &'static str },
    #[error("invalid table: {0}")]
    Invalid(String),
}

struct CrcWriter<W> {
    inner: W,
    crc: crc32fast::Hasher,
}

impl<W: Write> CrcWriter<W> {
    fn put(&mut self, bytes: &[u8]) -> io::Result<()> {
        self.crc.update(bytes);
        self.inner.write_all(bytes)
    }

    fn seal(&mut self) -> io::Result<()> {
        let crc = std::mem::take(&mut self.crc).finalize();
        self.inner.write_all(&crc.to_le_bytes())
    }
}

struct CrcReader<R> {
    inner: R,
    crc: crc32fast::Hasher,
    section: &'static str,
}

impl<R: Read> CrcReader<R> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], TableError> {
        let mut buf = [0u8; N];
        self.fill(&mut buf)?;
        self.crc.update(&buf);
        Ok(buf)
    }

    fn fill(&mut self, buf: &mut [u8]) -> Result<(), TableError> {
        self.inner.read_exact(buf).map_err(|e| match e.kind() {
            io::ErrorKind::UnexpectedEof => TableError::Checksum { section: self.section },
            _ => TableError::Io(e),
        })
    }

    fn u8(&mut self) -> Result<u8, TableError> {
        Ok(self.take::<1>()?[0])
    }

    fn u32(&mut self) -> Result<u32, TableError> {
        Ok(u32::from_le_bytes(self.take()?))
    }

    fn u64(&mut self) -> Result<u64, TableError> {
        Ok(u64::from_le_bytes(self.take()?))
    }

    /// Verifies the stored CRC and starts the next section.
    fn check(&mut self, next: &'static str) -> Result<(), TableError> {
        let mut stored = [0u8; 4];
        self.fill(&mut stored)?;
        if std::mem::take(&mut self.crc).finalize() != u32::from_le_bytes(stored) {
            return Err(TableError::Checksum { section: self.section });
        }
        self.section = next;
        Ok(())
    }
}

impl Tablebase {
    pub fn write_to<W: Write>(&self, w: W) -> io::Result<()> {
        let mut w = CrcWriter {
            inner: w,
            crc: crc32fast::Hasher::new(),
        };
        w.put(MAGIC)?;
        w.put(&FORMAT_VERSION.to_le_bytes())?;
        w.put(&(self.max_initial_qubits as u32).to_le_bytes())?;
        w.put(&[self.meta.complete as u8])?;
        w.put(&self.meta.created_unix_secs.to_le_bytes())?;
        w.put(&self.meta.build_millis.to_le_bytes())?;
        w.put(&(self.orbits.len() as u64).to_le_bytes())?;
        w.put(&(self.words.len() as u64).to_le_bytes())?;
        w.seal()?;

        for r in &self.orbits {
            w.put(&[r.n])?;
            w.put(&r.depth.to_le_bytes())?;
            w.put(&r.len.to_le_bytes())?;
            match r.parent {
                None => w.put(&[0])?,
                Some(l) => {
                    w.put(&[1])?;
                    w.put(&l.parent_orbit.0.to_le_bytes())?;
                    w.put(&l.parent_member.to_le_bytes())?;
                    w.put(&[l.pair.0, l.pair.1])?;
                    w.put(&l.child_member.to_le_bytes())?;
                }
            }
        }
        w.seal()?;

        for word in &self.words {
            w.put(&word.to_le_bytes())?;
        }
        w.seal()?;
        w.inner.flush()
    }

    pub fn read_from<R: Read>(r: R, mode: CheckMode) -> Result<Tablebase, TableError> {
        let mut r = CrcReader {
            inner: r,
            crc: crc32fast::Hasher::new(),
            section: "header",
        };
        if &r.take::<4>()? != MAGIC {
            return Err(TableError::BadMagic);
        }
        let version = r.u32()?;
        if version != FORMAT_VERSION {
            return Err(TableError::VersionMismatch { found: version });
        }
        let max = r.u32()? as usize;
        let complete = r.u8()? != 0;
        let created_unix_secs = r.u64()?;
        let build_millis = r.u64()?;
        let orbit_count = r.u64()?;
        let word_count = r.u64()?;
        r.check("orbits")?;
        if max == 0 || max > MAX_INITIAL_QUBITS {
            return Err(TableError::Invalid(format!("max initial qubits {max}")));
        }

        let mut orbits = Vec::with_capacity(orbit_count.min(1 << 24) as usize);
        let mut offset = 0u64;
        for _ in 0..orbit_count {
            let n = r.u8()?;
            let depth = r.u32()?;
            let len = r.u32()?;
            let parent = match r.u8()? {
                0 => None,
                1 => {
                    let parent_orbit = OrbitId(r.u32()?);
                    let parent_member = r.u32()?;
                    let pair = (r.u8()?, r.u8()?);
                    let child_member = r.u32()?;
                    Some(FusionLink {
                        parent_orbit,
                        parent_member,
                        pair,
                        child_member,
                    })
                }
                t => return Err(TableError::Invalid(format!("parent tag {t}"))),
            };
            orbits.push(OrbitRecord {
                n,
                depth,
                offset,
                len,
                parent,
            });
            offset += len as u64 * words_for(n as usize) as u64;
        }
        r.check("members")?;
        if offset != word_count {
            return Err(TableError::Invalid(format!(
                "orbit lengths need {offset} words, header says {word_count}"
            )));
        }

        let mut words = Vec::with_capacity(word_count.min(1 << 32) as usize);
        let mut buf = vec![0u8; 8 * 8192];
        let mut left = word_count as usize;
        while left > 0 {
            let k = left.min(8192);
            r.fill(&mut buf[..8 * k])?;
            r.crc.update(&buf[..8 * k]);
            words.extend(buf[..8 * k].chunks_exact(8).map(|c| u64::from_le_bytes(c.try_into().expect("8 bytes"))));
            left -= k;
        }
        r.check("end")?;

        let mut tb = Tablebase {
            max_initial_qubits: max,
            orbits,
            words,
            index: GraphIndex::default(),
            meta: TableMeta {
                format_version: version,
                created_unix_secs,
                build_millis,
                complete,
            },
        };
        tb.check_structure()?;
        tb.rebuild_index(mode == CheckMode::Deep)?;
        if mode == CheckMode::Deep {
            tb.check_deep()?;
        }
        Ok(tb)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), TableError> {
        let f = File::create(path)?;
        self.write_to(BufWriter::with_capacity(1 << 20, f))?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>, mode: CheckMode) -> Result<Tablebase, TableError> {
        let f = File::open(path)?;
        Tablebase::read_from(BufReader::with_capacity(1 << 20, f), mode)
    }

    fn rebuild_index(&mut self, reject_duplicates: bool) -> Result<(), TableError> {
        let total = self.graph_count() as usize;
        self.index = GraphIndex::with_capacity(total);
        for id in 0..self.orbits.len() as u32 {
            for m in 0..self.orbits[id as usize].len {
                let g = self.member(OrbitId(id), m);
                let h = GraphHash::of(&g);
                if reject_duplicates {
                    if let Some(prev) = self.lookup_hashed(&g, h) {
                        return Err(TableError::Invalid(format!(
                            "orbit {id} member {m} duplicates orbit {} member {}",
                            prev.orbit.0, prev.member
                        )));
                    }
                }
                self.index.insert(h, Loc::new(id, m));
            }
        }
        Ok(())
    }

    /// Tree shape and depth layering.
    pub fn check_structure(&self) -> Result<(), TableError> {
        let bad = |msg: String| Err(TableError::Invalid(msg));
        let mut prev_depth = 0;
        for (i, r) in self.orbits.iter().enumerate() {
            if r.len == 0 || r.n as usize > MAX_INITIAL_QUBITS {
                return bad(format!("orbit {i}: {} members on {} vertices", r.len, r.n));
            }
            if r.depth < prev_depth {
                return bad(format!("orbit {i}: depths not layered"));
            }
            prev_depth = r.depth;
            match (r.depth, r.parent) {
                (0, None) => {}
                (0, Some(_)) => return bad(format!("orbit {i}: depth-0 orbit has a parent")),
                (_, None) => return bad(format!("orbit {i}: missing parent link")),
                (d, Some(l)) => {
                    let Some(p) = self.orbits.get(l.parent_orbit.0 as usize) else {
                        return bad(format!("orbit {i}: parent out of range"));
                    };
                    if l.parent_orbit.0 as usize >= i || p.depth + 1 != d {
                        return bad(format!("orbit {i}: parent depth {} for depth {d}", p.depth));
                    }
                    let (a, b) = l.pair;
                    if a == b || a >= p.n || b >= p.n || p.n != r.n + 2 {
                        return bad(format!("orbit {i}: bad fused pair {:?}", l.pair));
                    }
                    if l.parent_member >= p.len || l.child_member >= r.len {
                        return bad(format!("orbit {i}: link member out of range"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Replays every link and checks that depth-0 orbits hold a caterpillar set.
    pub fn check_deep(&self) -> Result<(), TableError> {
        for id in self.orbit_ids() {
            match self.parent(id) {
                None => {
                    if !self.members(id).any(|g| is_caterpillar_forest(&g)) {
                        return Err(TableError::Invalid(format!("orbit {}: no caterpillar seed", id.0)));
                    }
                }
                Some(l) => {
                    let p = self.member(l.parent_orbit, l.parent_member);
                    let r = fuse(&p, l.pair.0 as usize, l.pair.1 as usize, FusionKind::XzZx)
                        .map_err(|e| TableError::Invalid(format!("orbit {}: link replay failed: {e}", id.0)))?;
                    if !is_isomorphic(&r.graph, &self.member(id, l.child_member)) {
                        return Err(TableError::Invalid(format!("orbit {}: link replays to a different graph", id.0)));
                    }
                }
            }
        }
        Ok(())
    }
}
