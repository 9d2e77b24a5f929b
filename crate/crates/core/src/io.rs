//! Binary tensor files.
//!
//! Layout: the magic bytes `TNS3`, then `n1`, `n2`, `n3` as little-endian
//! `u64`, then `n1 * n2 * n3` little-endian `f64` entries in the frontal-slice
//! order documented on [`Tensor3`].

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::tensor::{Tensor3, TensorDims};

pub const MAGIC: &[u8; 4] = b"TNS3";
const HEADER_LEN: usize = 4 + 3 * 8;

pub fn write_tensor<W: Write>(mut w: W, t: &Tensor3) -> Result<()> {
    let d = t.dims();
    w.write_all(MAGIC)?;
    for n in [d.n1, d.n2, d.n3] {
        w.write_all(&(n as u64).to_le_bytes())?;
    }
    for v in t.as_slice() {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn encode_tensor(t: &Tensor3) -> Vec<u8> {
    let mut buf = Vec::with_capacity(HEADER_LEN + 8 * t.dims().len());
    write_tensor(&mut buf, t).expect("writing to a Vec cannot fail");
    buf
}

pub fn decode_tensor(bytes: &[u8]) -> Result<Tensor3> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "tensor file truncated: {} bytes, header needs {HEADER_LEN}",
            bytes.len()
        )));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic, expected TNS3".into()));
    }
    let mut extents = [0usize; 3];
    for (n, chunk) in extents.iter_mut().zip(bytes[4..HEADER_LEN].chunks_exact(8)) {
        let v = u64::from_le_bytes(chunk.try_into().expect("8-byte chunk"));
        *n = usize::try_from(v).map_err(|_| Error::Format(format!("extent {v} too large")))?;
    }
    let dims = TensorDims::new(extents[0], extents[1], extents[2])?;
    let payload = &bytes[HEADER_LEN..];
    if payload.len() != 8 * dims.len() {
        return Err(Error::Format(format!(
            "payload is {} bytes, a {dims} tensor needs {}",
            payload.len(),
            8 * dims.len()
        )));
    }
    let data = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8-byte chunk")))
        .collect();
    Tensor3::from_vec(dims, data)
}

pub fn read_tensor<R: Read>(mut r: R) -> Result<Tensor3> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    decode_tensor(&bytes)
}

pub fn load_tensor(path: impl AsRef<Path>) -> Result<Tensor3> {
    decode_tensor(&fs::read(path)?)
}

pub fn save_tensor(path: impl AsRef<Path>, t: &Tensor3) -> Result<()> {
    fs::write(path, encode_tensor(t))?;
    Ok(())
}
