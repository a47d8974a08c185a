//! Versioned binary persistence for network weights.
//!
//! Layout: magic `RFNN`, format version (u32 LE), layer spec, activation
//! tag, learning rate, init seed, flat parameters as little-endian f64,
//! then a CRC32 of everything preceding it. `load(save(x))` is bit-exact.

use std::io::{Read, Write};

use crate::mlp::{Activation, Mlp};
use crate::NeuralError;

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"RFNN";

impl Mlp {
    pub fn save<W: Write>(&self, out: &mut W) -> Result<(), NeuralError> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.sizes().len() as u32).to_le_bytes());
        for s in self.sizes() {
            buf.extend_from_slice(&(*s as u32).to_le_bytes());
        }
        buf.push(match self.activation() {
            Activation::Relu => 0,
            Activation::Tanh => 1,
        });
        buf.extend_from_slice(&self.learning_rate.to_le_bytes());
        buf.extend_from_slice(&self.seed().to_le_bytes());
        for p in self.params() {
            buf.extend_from_slice(&p.to_le_bytes());
        }
        let crc = crc32fast::hash(&buf);
        buf.extend_from_slice(&crc.to_le_bytes());
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn load<R: Read>(input: &mut R) -> Result<Self, NeuralError> {
        let mut buf = Vec::new();
        input.read_to_end(&mut buf)?;
        Self::from_bytes(&buf)
    }

    pub fn from_bytes(buf: &[u8]) -> Result<Self, NeuralError> {
        if buf.len() < 12 {
            return Err(NeuralError::Corrupted("file too short"));
        }
        if &buf[..4] != MAGIC {
            return Err(NeuralError::BadMagic);
        }
        let version = u32::from_le_bytes(buf[4..8].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(NeuralError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        let (payload, tail) = buf.split_at(buf.len() - 4);
        let stored = u32::from_le_bytes(tail.try_into().unwrap());
        if crc32fast::hash(payload) != stored {
            return Err(NeuralError::ChecksumMismatch);
        }
        let mut at = 8usize;
        let take = |at: &mut usize, n: usize| -> Result<&[u8], NeuralError> {
            if *at + n > payload.len() {
                return Err(NeuralError::Corrupted("unexpected end of payload"));
            }
            let s = &payload[*at..*at + n];
            *at += n;
            Ok(s)
        };
        let n_sizes = u32::from_le_bytes(take(&mut at, 4)?.try_into().unwrap()) as usize;
        if n_sizes < 2 || n_sizes > 64 {
            return Err(NeuralError::Corrupted("layer count absurd"));
        }
        let mut sizes = Vec::with_capacity(n_sizes);
        for _ in 0..n_sizes {
            sizes.push(u32::from_le_bytes(take(&mut at, 4)?.try_into().unwrap()) as usize);
        }
        let activation = match take(&mut at, 1)?[0] {
            0 => Activation::Relu,
            1 => Activation::Tanh,
            _ => return Err(NeuralError::Corrupted("unknown activation tag")),
        };
        let learning_rate = f64::from_le_bytes(take(&mut at, 8)?.try_into().unwrap());
        let seed = u64::from_le_bytes(take(&mut at, 8)?.try_into().unwrap());
        let mut net = Mlp::new(&sizes, activation, learning_rate, seed)?;
        let mut params = Vec::with_capacity(net.param_count());
        for _ in 0..net.param_count() {
            params.push(f64::from_le_bytes(take(&mut at, 8)?.try_into().unwrap()));
        }
        if at != payload.len() {
            return Err(NeuralError::Corrupted("trailing bytes"));
        }
        net.set_params(&params)?;
        Ok(net)
    }
}
