//! Versioned binary persistence for Q-tables.
//!
//! Layout: magic `RFQT`, format version (u32 LE), discretizer spec,
//! action count, hyperparameters, row-major q-values as little-endian
//! f64, then a CRC32 of everything preceding it.

use std::io::{Read, Write};

use crate::{DimSpec, Discretizer, QTable, TabularError};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"RFQT";

struct Cursor<'a> {
    buf: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], TabularError> {
        if self.at + n > self.buf.len() {
            return Err(TabularError::Corrupted("unexpected end of payload"));
        }
        let s = &self.buf[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, TabularError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, TabularError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn f64(&mut self) -> Result<f64, TabularError> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn string(&mut self) -> Result<String, TabularError> {
        let len = self.u32()? as usize;
        if len > 4096 {
            return Err(TabularError::Corrupted("string length absurd"));
        }
        let bytes = self.take(len)?;
        String::from_utf8(bytes.to_vec()).map_err(|_| TabularError::Corrupted("bad utf8"))
    }
}

impl QTable {
    /// Serializes the table; `load(save(qt))` is bit-exact.
    pub fn save<W: Write>(&self, out: &mut W) -> Result<(), TabularError> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        let dims = self.discretizer().dims();
        buf.extend_from_slice(&(dims.len() as u32).to_le_bytes());
        for d in dims {
            buf.extend_from_slice(&(d.name.len() as u32).to_le_bytes());
            buf.extend_from_slice(d.name.as_bytes());
            buf.extend_from_slice(&d.lo.to_le_bytes());
            buf.extend_from_slice(&d.hi.to_le_bytes());
            buf.extend_from_slice(&d.bins.to_le_bytes());
        }
        buf.extend_from_slice(&(self.action_count() as u32).to_le_bytes());
        buf.extend_from_slice(&self.alpha.to_le_bytes());
        buf.extend_from_slice(&self.gamma.to_le_bytes());
        buf.extend_from_slice(&self.epsilon.to_le_bytes());
        buf.extend_from_slice(&(self.values().len() as u64).to_le_bytes());
        for v in self.values() {
            buf.extend_from_slice(&v.to_le_bytes());
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn load<R: Read>(input: &mut R) -> Result<Self, TabularError> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, TabularError> {
        if buf.len() < MAGIC.len() + 8 {
            return Err(TabularError::Corrupted("file too short"));
        }
        if &buf[..4] != MAGIC {
            return Err(TabularError::BadMagic);
        }
        let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(TabularError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let (payload, tail) = buf.split_at(buf.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        if crc32fast::hash(payload) != stored {
            return Err(TabularError::ChecksumMismatch);
        }
        let mut c = Cursor {
            buf: payload,
            at: 8,
        };
        let n_dims = c.u32()? as usize;
        if n_dims > 64 {
            return Err(TabularError::Corrupted("dimension count absurd"));
        }
        let mut dims = Vec::with_capacity(n_dims);
        for _ in 0..n_dims {
            let name = c.string()?;
            let lo = c.f64()?;
            let hi = c.f64()?;
            let bins = c.u32()?;
            dims.push(DimSpec::new(name, lo, hi, bins));
        }
        let disc = Discretizer::new(dims)?;
        let n_actions = c.u32()? as usize;
        let alpha = c.f64()?;
        let gamma = c.f64()?;
        let epsilon = c.f64()?;
        let q_len = c.u64()? as usize;
        if q_len != disc.state_count() * n_actions {
            return Err(TabularError::Corrupted("q-value count inconsistent"));
        }
        let mut qt = QTable::zeros(disc, n_actions, alpha, gamma, epsilon)?;
        let raw = c.take(q_len * 8)?;
        for (i, chunk) in raw.chunks_exact(8).enumerate() {
            qt.q[i] = f64::from_le_bytes(chunk.try_into().unwrap());
        }
        if c.at != payload.len() {
            return Err(TabularError::Corrupted("trailing bytes"));
        }
        Ok(qt)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn sample_table() -> QTable {
        let disc = Discretizer::new(vec![
            DimSpec::new("d", 0.0, 50.0, 25),
            DimSpec::new("v_ego", 0.0, 40.0, 20),
        ])
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut qt = QTable::zeros(disc, 3, 0.1, 0.95, 0.1).unwrap();
        for v in &mut qt.q {
            *v = rng.random_range(-50.0..50.0);
        }
        qt
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let qt = sample_table();
        let mut bytes = Vec::new();
        qt.save(&mut bytes).unwrap();
        let loaded = QTable::from_bytes(&bytes).unwrap();
        assert_eq!(qt, loaded);
    }

    #[test]
    fn truncation_breaks_the_checksum() {
        let qt = sample_table();
        let mut bytes = Vec::new();
        qt.save(&mut bytes).unwrap();
        bytes.truncate(bytes.len() - 9);
        assert_eq!(
            QTable::from_bytes(&bytes).unwrap_err(),
            TabularError::ChecksumMismatch
        );
    }

    #[test]
    fn flipped_bit_breaks_the_checksum() {
        let qt = sample_table();
        let mut bytes = Vec::new();
        qt.save(&mut bytes).unwrap();
        let mid = bytes.len() / 2;
        bytes[mid] ^= 0x40;
        assert_eq!(
            QTable::from_bytes(&bytes).unwrap_err(),
            TabularError::ChecksumMismatch
        );
    }

    #[test]
    fn bumped_version_is_rejected() {
        let qt = sample_table();
        let mut bytes = Vec::new();
        qt.save(&mut bytes).unwrap();
        // rewrite the version field and restore a valid checksum
        bytes[4..8].copy_from_slice(&2u32.to_le_bytes());
        let len = bytes.len();
        let crc = crc32fast::hash(&bytes[..len - 4]);
        bytes[len - 4..].copy_from_slice(&crc.to_le_bytes());
        assert_eq!(
            QTable::from_bytes(&bytes).unwrap_err(),
            TabularError::VersionMismatch {
                found: 2,
                expected: 1
            }
        );
    }

    #[test]
    fn wrong_magic_is_rejected() {
        assert_eq!(
            QTable::from_bytes(b"NOPE00000000").unwrap_err(),
            TabularError::BadMagic
        );
    }
}
