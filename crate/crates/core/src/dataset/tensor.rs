//! `FBT1` tensor files.
//!
//! Layout, all integers little-endian:
//!
//! | offset | size      | field                          |
//! |--------|-----------|--------------------------------|
//! | 0      | 4         | magic `b"FBT1"`                |
//! | 4      | 4 (u32)   | dtype, `1` = f32               |
//! | 8      | 4 (u32)   | rank, 1..=4                    |
//! | 12     | 8 × rank  | dims (u64 each), outermost first |
//! | …      | 4 × ∏dims | row-major f32 values           |
//!
//! Nothing may follow the data.

use std::fs;
use std::io;
use std::path::Path;

use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"FBT1";
pub const DTYPE_F32: u32 = 1;
pub const MAX_RANK: usize = 4;

#[derive(Debug, Error)]
pub enum TensorError {
    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),
    #[error("unsupported dtype code {0}")]
    UnsupportedDtype(u32),
    #[error("unsupported rank {0}")]
    BadRank(u32),
    #[error("truncated: need {needed} bytes, have {have}")]
    Truncated { needed: usize, have: usize },
    #[error("{0} trailing bytes after tensor data")]
    TrailingBytes(usize),
    #[error("dims {dims:?} do not match {len} values")]
    Shape { dims: Vec<usize>, len: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tensor {
    pub dims: Vec<usize>,
    pub data: Vec<f32>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>, data: Vec<f32>) -> Result<Self, TensorError> {
        if dims.is_empty() || dims.len() > MAX_RANK {
            return Err(TensorError::BadRank(dims.len() as u32));
        }
        if dims.iter().product::<usize>() != data.len() {
            return Err(TensorError::Shape { dims, len: data.len() });
        }
        Ok(Self { dims, data })
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(12 + 8 * self.dims.len() + 4 * self.data.len());
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&DTYPE_F32.to_le_bytes());
        out.extend_from_slice(&(self.dims.len() as u32).to_le_bytes());
        for &d in &self.dims {
            out.extend_from_slice(&(d as u64).to_le_bytes());
        }
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, TensorError> {
        let need = |needed: usize| {
            if bytes.len() < needed {
                Err(TensorError::Truncated {
                    needed,
                    have: bytes.len(),
                })
            } else {
                Ok(())
            }
        };
        need(4)?;
        let magic: [u8; 4] = bytes[..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(TensorError::BadMagic(magic));
        }
        need(12)?;
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let dtype = u32_at(4);
        if dtype != DTYPE_F32 {
            return Err(TensorError::UnsupportedDtype(dtype));
        }
        let rank = u32_at(8);
        if rank == 0 || rank as usize > MAX_RANK {
            return Err(TensorError::BadRank(rank));
        }
        let header = 12 + 8 * rank as usize;
        need(header)?;
        let mut dims = Vec::with_capacity(rank as usize);
        let mut count: usize = 1;
        for k in 0..rank as usize {
            let o = 12 + 8 * k;
            let d = u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
            let d = usize::try_from(d).map_err(|_| TensorError::Truncated {
                needed: usize::MAX,
                have: bytes.len(),
            })?;
            count = count.checked_mul(d).ok_or(TensorError::Truncated {
                needed: usize::MAX,
                have: bytes.len(),
            })?;
            dims.push(d);
        }
        let body = count.checked_mul(4).and_then(|b| b.checked_add(header)).ok_or(TensorError::Truncated {
            needed: usize::MAX,
            have: bytes.len(),
        })?;
        need(body)?;
        if bytes.len() > body {
            return Err(TensorError::TrailingBytes(bytes.len() - body));
        }
        let data = bytes[header..body]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self { dims, data })
    }
}

pub fn write_tensor(path: impl AsRef<Path>, tensor: &Tensor) -> io::Result<()> {
    fs::write(path, tensor.encode())
}

pub fn read_tensor(path: impl AsRef<Path>) -> Result<Tensor, TensorError> {
    Tensor::decode(&fs::read(path)?)
}
