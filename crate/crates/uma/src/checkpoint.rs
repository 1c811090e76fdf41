//! Flat binary snapshot dumps.
//!
//! Layout, little-endian:
//!
//! | offset | size | field                                      |
//! |--------|------|--------------------------------------------|
//! | 0      | 4    | magic `UMAS`                               |
//! | 4      | 1    | kind: 0 = qualitative, 1 = real            |
//! | 5      | 1    | entry width in bytes (4 or 8)              |
//! | 6      | 2    | reserved, zero                             |
//! | 8      | 4    | `|Σ|`, the number of literals              |
//! | 12     | ...  | `|Σ|²` entries, row-major                  |
//!
//! Qualitative entries are `u32` with `u32::MAX` for infinity; an
//! uninitialized snapshot is written as all-infinite. Real entries are IEEE
//! floats of the stated width.

use num_traits::Float;

use crate::error::{Error, Result};
use crate::pcs::Sigma;
use crate::qual::{QualSnapshot, Rank};
use crate::real::{RealSnapshot, Schedule};

pub const MAGIC: &[u8; 4] = b"UMAS";
const HEADER: usize = 12;

/// A decoded checkpoint.
#[derive(Clone, Debug)]
pub enum Checkpoint {
    Qual(QualSnapshot),
    /// Real weights widened to `f64`, with the empirical schedule and the
    /// supplied threshold.
    Real(RealSnapshot<f64>),
}

fn header(kind: u8, width: u8, n: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + n * n * width as usize);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&[kind, width, 0, 0]);
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out
}

/// Encodes a qualitative snapshot.
pub fn encode_qual(s: &QualSnapshot) -> Vec<u8> {
    let n = s.sigma().len();
    let mut out = header(0, 4, n);
    for a in 0..n {
        for b in 0..n {
            out.extend_from_slice(&s.get(a, b).to_bits().to_le_bytes());
        }
    }
    out
}

/// Encodes a real snapshot at the scalar's native width.
pub fn encode_real<F: Float>(s: &RealSnapshot<F>) -> Vec<u8> {
    let n = s.sigma().len();
    let width = std::mem::size_of::<F>() as u8;
    let mut out = header(1, width, n);
    for x in s.matrix() {
        let v = x.to_f64().unwrap_or(f64::NAN);
        if width == 4 {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        } else {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Decodes a checkpoint. `sigma` supplies query names and must match `|Σ|`
/// when given; `tau` is the threshold attached to real snapshots.
pub fn decode(bytes: &[u8], sigma: Option<Sigma>, tau: f64) -> Result<Checkpoint> {
    let err = |m: String| Error::Checkpoint(m);
    if bytes.len() < HEADER {
        return Err(err(format!("truncated header at offset {}", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(err("bad magic at offset 0".into()));
    }
    let (kind, width) = (bytes[4], bytes[5]);
    let n = u32::from_le_bytes(bytes[8..12].try_into().expect("four bytes")) as usize;
    if n < 2 || n % 2 != 0 {
        return Err(err(format!("invalid literal count {n} at offset 8")));
    }
    let sigma = match sigma {
        Some(s) if s.len() != n => return Err(err(format!("alphabet has {} literals, file has {n}", s.len()))),
        Some(s) => s,
        None => Sigma::new(n / 2 - 1),
    };
    let w = width as usize;
    if !(kind == 0 && w == 4 || kind == 1 && (w == 4 || w == 8)) {
        return Err(err(format!("unsupported kind {kind} / width {w} at offset 4")));
    }
    let need = HEADER + n * n * w;
    if bytes.len() < need {
        return Err(err(format!("truncated body at offset {} (expected {need} bytes)", bytes.len())));
    }
    if bytes.len() > need {
        return Err(err(format!("trailing data at offset {need}")));
    }
    let body = &bytes[HEADER..];
    if kind == 0 {
        let m: Vec<Rank> = body
            .chunks_exact(4)
            .map(|c| Rank::from_bits(u32::from_le_bytes(c.try_into().expect("four bytes"))))
            .collect();
        if m.iter().all(|r| !r.is_finite()) {
            return Ok(Checkpoint::Qual(QualSnapshot::new(sigma)));
        }
        return Ok(Checkpoint::Qual(QualSnapshot::from_matrix(sigma, m)?));
    }
    let m: Vec<f64> = if w == 4 {
        body.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().expect("four bytes")) as f64).collect()
    } else {
        body.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("eight bytes"))).collect()
    };
    Ok(Checkpoint::Real(RealSnapshot::from_matrix(sigma, m, Schedule::Empirical, tau)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcs::TRUE;

    #[test]
    fn round_trips() {
        let s = Sigma::new(2);
        let u = s.set([TRUE, s.pos(0), s.neg(1)]);
        let q = QualSnapshot::point_mass(&s, &u, Rank::fin(2));
        match decode(&encode_qual(&q), Some(s.clone()), 0.1).unwrap() {
            Checkpoint::Qual(d) => assert_eq!(d, q),
            _ => panic!("wrong kind"),
        }
        let r = RealSnapshot::point_mass(&s, &u, 1.5f64, Schedule::Empirical, 0.1).unwrap();
        match decode(&encode_real(&r), None, 0.1).unwrap() {
            Checkpoint::Real(d) => assert_eq!(d.matrix(), r.matrix()),
            _ => panic!("wrong kind"),
        }
        let fresh = QualSnapshot::new(s.clone());
        match decode(&encode_qual(&fresh), None, 0.1).unwrap() {
            Checkpoint::Qual(d) => assert!(!d.is_initialized()),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn truncation_reports_offset() {
        let s = Sigma::new(1);
        let bytes = encode_qual(&QualSnapshot::new(s));
        let e = decode(&bytes[..20], None, 0.1).unwrap_err();
        assert!(e.to_string().contains("offset 20"), "{e}");
        assert!(decode(&bytes[..5], None, 0.1).is_err());
        assert!(decode(b"XXXXXXXXXXXX", None, 0.1).is_err());
    }
}
