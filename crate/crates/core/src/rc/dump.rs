//! Versioned binary dump of an [`RcSample`], all integers little-endian:
//!
//! ```text
//! magic   b"RCSAMPLE"
//! version u32 (= 1)
//! n       u64
//! h       u64
//! seed    u64      master seed
//! count   u64      number of sets
//! count x { target u32, target_leaning f64, len u32, members [u32; len] }
//! ```

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::Instance;
use crate::rc::{RcSample, RcSet};

const MAGIC: &[u8; 8] = b"RCSAMPLE";
const VERSION: u32 = 1;

impl RcSample {
    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let io = |e| Error::io("writing RC sample", e);
        w.write_all(MAGIC).map_err(io)?;
        w.write_all(&VERSION.to_le_bytes()).map_err(io)?;
        for x in [self.node_count() as u64, self.item_count() as u64, self.master_seed(), self.len() as u64] {
            w.write_all(&x.to_le_bytes()).map_err(io)?;
        }
        for j in 0..self.len() {
            let members = self.members(j);
            w.write_all(&self.targets()[j].to_le_bytes()).map_err(io)?;
            w.write_all(&self.target_leanings()[j].to_le_bytes()).map_err(io)?;
            w.write_all(&(members.len() as u32).to_le_bytes()).map_err(io)?;
            for &m in members {
                w.write_all(&m.to_le_bytes()).map_err(io)?;
            }
        }
        w.flush().map_err(io)
    }

    /// Reads a dump produced for `inst`; dimensions must match.
    pub fn read_from(mut r: impl Read, inst: &Instance) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic)?;
        if &magic != MAGIC {
            return Err(Error::Invalid("not an RC sample dump".into()));
        }
        let version = read_u32(&mut r)?;
        if version != VERSION {
            return Err(Error::Invalid(format!("unsupported RC sample version {version}")));
        }
        let n = read_u64(&mut r)? as usize;
        let h = read_u64(&mut r)? as usize;
        let seed = read_u64(&mut r)?;
        let count = read_u64(&mut r)?;
        if n != inst.node_count() || h != inst.item_count() {
            return Err(Error::Invalid(format!(
                "dump is for {n} nodes x {h} items, instance has {} x {}",
                inst.node_count(),
                inst.item_count()
            )));
        }
        let mut sample = RcSample::new(inst, seed);
        let limit = (n * h) as u32;
        for _ in 0..count {
            let target = read_u32(&mut r)?;
            let mut buf = [0u8; 8];
            read_exact(&mut r, &mut buf)?;
            let target_leaning = f64::from_le_bytes(buf);
            let len = read_u32(&mut r)? as usize;
            let mut members = Vec::with_capacity(len.min(1 << 20));
            for _ in 0..len {
                members.push(read_u32(&mut r)?);
            }
            if target as usize >= n
                || members.iter().any(|&m| m >= limit)
                || members.windows(2).any(|w| w[0] >= w[1])
            {
                return Err(Error::Invalid("corrupt RC set in dump".into()));
            }
            sample.push(RcSet {
                target,
                target_leaning,
                members,
            })?;
        }
        Ok(sample)
    }
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| Error::io("reading RC sample", e))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::model::{ItemCatalog, PropagationModel, SocialGraph};

    #[test]
    fn dump_round_trip() {
        let g = SocialGraph::new(&[(0, 1), (1, 2), (2, 0), (3, 1)], vec![-0.5, 0.0, 0.5, 1.0]).unwrap();
        let inst = Instance::new(g, ItemCatalog::even_spread(3).unwrap(), PropagationModel::Linear { beta: 0.6 }).unwrap();
        let mut s = RcSample::new(&inst, 42);
        s.grow_to(&inst, 300, Execution::Sequential).unwrap();
        let mut buf = Vec::new();
        s.write_to(&mut buf).unwrap();
        let back = RcSample::read_from(buf.as_slice(), &inst).unwrap();
        assert_eq!(back.len(), s.len());
        assert_eq!(back.master_seed(), 42);
        for j in 0..s.len() {
            assert_eq!(back.set(j), s.set(j));
        }
        assert!(RcSample::read_from(&buf[..buf.len() - 3], &inst).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(RcSample::read_from(bad.as_slice(), &inst).is_err());
    }
}
