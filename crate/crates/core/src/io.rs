//! Mask file formats.
//!
//! * 2D masks: PGM, ASCII (`P2`) or binary (`P5`), `maxval <= 65535`, gray
//!   value = class label. Binary samples are one byte when `maxval < 256`,
//!   otherwise two bytes big-endian.
//! * 2D/3D masks: a raw volume pair, `<name>.json` sidecar
//!   `{"shape":[z,y,x],"dtype":"u8"|"u16","order":"row-major"}` plus
//!   `<name>.raw` holding exactly `product(shape) * bytes` little-endian labels.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mask::LabelMask;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawDtype {
    U8,
    U16,
}

impl RawDtype {
    pub fn bytes(&self) -> usize {
        match self {
            Self::U8 => 1,
            Self::U16 => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub shape: Vec<usize>,
    pub dtype: RawDtype,
    pub order: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmEncoding {
    Ascii,
    Binary,
}

fn read(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

/// Loads a mask, choosing the format from the file's magic bytes or its
/// `.json` / `.raw` extension.
pub fn load_mask(path: impl AsRef<Path>) -> Result<LabelMask> {
    let path = path.as_ref();
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase());
    match ext.as_deref() {
        Some("json") => return load_raw(path),
        Some("raw") => return load_raw(&path.with_extension("json")),
        _ => {}
    }
    let bytes = read(path)?;
    match bytes.get(..2) {
        Some(b"P2") | Some(b"P5") => parse_pgm(&bytes),
        Some(b"P1") | Some(b"P3") | Some(b"P4") | Some(b"P6") | Some(b"P7") => {
            Err(Error::FormatUnsupported(format!(
                "{}: only grayscale PGM (P2/P5) is supported",
                path.display()
            )))
        }
        _ => Err(Error::FormatUnsupported(format!(
            "{}: not a PGM file or raw volume sidecar",
            path.display()
        ))),
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::HeaderCorrupt(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::HeaderCorrupt(format!("{what} out of range")))
    }
}

/// Parses PGM bytes (P2 or P5).
pub fn parse_pgm(bytes: &[u8]) -> Result<LabelMask> {
    let binary = match bytes.get(..2) {
        Some(b"P2") => false,
        Some(b"P5") => true,
        _ => return Err(Error::FormatUnsupported("missing P2/P5 magic".into())),
    };
    let mut cur = HeaderCursor { bytes, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::HeaderCorrupt(format!(
            "zero image extent {width}x{height}"
        )));
    }
    if !(1..=65535).contains(&maxval) {
        return Err(Error::HeaderCorrupt(format!(
            "maxval {maxval} outside 1..=65535"
        )));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::HeaderCorrupt("image too large".into()))?;
    let data: Vec<u16> = if binary {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(Error::HeaderCorrupt("missing raster separator".into())),
        }
        let raster = &bytes[cur.pos..];
        let width_bytes = if maxval < 256 { 1 } else { 2 };
        let expected = n * width_bytes;
        if raster.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                actual: raster.len(),
            });
        }
        if width_bytes == 1 {
            raster.iter().map(|&b| b as u16).collect()
        } else {
            raster
                .chunks_exact(2)
                .map(|c| u16::from_be_bytes([c[0], c[1]]))
                .collect()
        }
    } else {
        let mut data = Vec::with_capacity(n);
        for _ in 0..n {
            let v = cur.number("pixel value")?;
            data.push(
                u16::try_from(v)
                    .map_err(|_| Error::HeaderCorrupt(format!("pixel value {v} exceeds 65535")))?,
            );
        }
        cur.skip_space_and_comments();
        if cur.pos != bytes.len() {
            return Err(Error::HeaderCorrupt("trailing data after raster".into()));
        }
        data
    };
    if let Some(&v) = data.iter().find(|&&v| v as u64 > maxval) {
        return Err(Error::HeaderCorrupt(format!(
            "pixel value {v} exceeds maxval {maxval}"
        )));
    }
    LabelMask::new(&[height, width], data)
}

/// Encodes a 2D mask as PGM with `maxval` equal to its largest label
/// (at least 1).
pub fn encode_pgm(mask: &LabelMask, encoding: PgmEncoding) -> Result<Vec<u8>> {
    let &[height, width] = mask.shape() else {
        return Err(Error::FormatUnsupported(format!(
            "PGM holds 2D masks only, got shape {:?}",
            mask.shape()
        )));
    };
    let maxval = mask.data().iter().copied().max().unwrap_or(0).max(1);
    let mut out = format!(
        "{}\n{width} {height}\n{maxval}\n",
        match encoding {
            PgmEncoding::Ascii => "P2",
            PgmEncoding::Binary => "P5",
        }
    )
    .into_bytes();
    match encoding {
        PgmEncoding::Ascii => {
            for row in mask.data().chunks(width) {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                out.extend_from_slice(line.join(" ").as_bytes());
                out.push(b'\n');
            }
        }
        PgmEncoding::Binary if maxval < 256 => {
            out.extend(mask.data().iter().map(|&v| v as u8));
        }
        PgmEncoding::Binary => {
            for &v in mask.data() {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
    }
    Ok(out)
}

pub fn save_pgm(mask: &LabelMask, path: impl AsRef<Path>, encoding: PgmEncoding) -> Result<()> {
    fs::write(path, encode_pgm(mask, encoding)?)?;
    Ok(())
}

fn load_raw(sidecar_path: &Path) -> Result<LabelMask> {
    let text = read(sidecar_path)?;
    let sidecar: RawSidecar = serde_json::from_slice(&text)
        .map_err(|e| Error::HeaderCorrupt(format!("{}: {e}", sidecar_path.display())))?;
    if sidecar.order != "row-major" {
        return Err(Error::FormatUnsupported(format!(
            "raw order `{}` (only row-major is supported)",
            sidecar.order
        )));
    }
    let raw_path = sidecar_path.with_extension("raw");
    let payload = read(&raw_path)?;
    decode_raw(&sidecar, &payload)
}

/// Decodes a raw little-endian payload described by `sidecar`.
pub fn decode_raw(sidecar: &RawSidecar, payload: &[u8]) -> Result<LabelMask> {
    let n = sidecar
        .shape
        .iter()
        .try_fold(1usize, |acc, &e| acc.checked_mul(e))
        .ok_or_else(|| Error::HeaderCorrupt(format!("shape {:?} too large", sidecar.shape)))?;
    let expected = n * sidecar.dtype.bytes();
    if payload.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            actual: payload.len(),
        });
    }
    let data = match sidecar.dtype {
        RawDtype::U8 => payload.iter().map(|&b| b as u16).collect(),
        RawDtype::U16 => payload
            .chunks_exact(2)
            .map(|c| u16::from_le_bytes([c[0], c[1]]))
            .collect(),
    };
    LabelMask::new(&sidecar.shape, data)
}

/// Writes `<stem>.json` and `<stem>.raw`. The dtype is `u8` when every label
/// fits in a byte. Returns the sidecar path.
pub fn save_raw(mask: &LabelMask, path: impl AsRef<Path>) -> Result<PathBuf> {
    let sidecar_path = path.as_ref().with_extension("json");
    let dtype = if mask.data().iter().all(|&v| v <= u8::MAX as u16) {
        RawDtype::U8
    } else {
        RawDtype::U16
    };
    let sidecar = RawSidecar {
        shape: mask.shape().to_vec(),
        dtype,
        order: "row-major".into(),
    };
    let payload: Vec<u8> = match dtype {
        RawDtype::U8 => mask.data().iter().map(|&v| v as u8).collect(),
        RawDtype::U16 => mask.data().iter().flat_map(|v| v.to_le_bytes()).collect(),
    };
    let json = serde_json::to_vec(&sidecar).map_err(std::io::Error::other)?;
    fs::write(&sidecar_path, json)?;
    fs::write(sidecar_path.with_extension("raw"), payload)?;
    Ok(sidecar_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_pgm() {
        let m = parse_pgm(b"P2\n# comment\n2 2\n1\n0 1\n1 0\n").unwrap();
        assert_eq!(m.shape(), &[2, 2]);
        assert_eq!(m.data(), &[0, 1, 1, 0]);
    }

    #[test]
    fn binary_pgm_one_and_two_bytes() {
        let mut bytes = b"P5 3 1 255\n".to_vec();
        bytes.extend([0u8, 7, 255]);
        assert_eq!(parse_pgm(&bytes).unwrap().data(), &[0, 7, 255]);

        let mut bytes = b"P5\n2 1\n65535\n".to_vec();
        bytes.extend([0x01, 0x00, 0xff, 0xff]);
        let m = parse_pgm(&bytes).unwrap();
        assert_eq!(m.shape(), &[1, 2]);
        assert_eq!(m.data(), &[256, 65535]);
    }

    #[test]
    fn pgm_errors() {
        assert!(matches!(
            parse_pgm(b"P2\n2 x\n1\n"),
            Err(Error::HeaderCorrupt(_))
        ));
        assert!(matches!(
            parse_pgm(b"P2\n2 2\n70000\n0 0 0 0"),
            Err(Error::HeaderCorrupt(_))
        ));
        assert!(matches!(
            parse_pgm(b"P2\n2 2\n1\n0 0 2 0"),
            Err(Error::HeaderCorrupt(_))
        ));
        assert!(matches!(
            parse_pgm(b"P2\n2 2\n1\n0 0 1"),
            Err(Error::HeaderCorrupt(_))
        ));
        let mut short = b"P5 2 2 255\n".to_vec();
        short.extend([0u8, 1, 1]);
        assert!(matches!(
            parse_pgm(&short),
            Err(Error::SizeMismatch {
                expected: 4,
                actual: 3
            })
        ));
    }

    #[test]
    fn raw_decoding() {
        let sidecar = RawSidecar {
            shape: vec![2, 2, 2],
            dtype: RawDtype::U8,
            order: "row-major".into(),
        };
        let m = decode_raw(&sidecar, &[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert_eq!(m.rank(), 3);
        assert!(matches!(
            decode_raw(&sidecar, &[0; 7]),
            Err(Error::SizeMismatch {
                expected: 8,
                actual: 7
            })
        ));
        let wide = RawSidecar {
            dtype: RawDtype::U16,
            ..sidecar
        };
        let m = decode_raw(&wide, &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]).unwrap();
        assert_eq!(&m.data()[..2], &[1, 256]);
    }

    #[test]
    fn sidecar_json_shape() {
        let s: RawSidecar =
            serde_json::from_str(r#"{"shape":[2,3,4],"dtype":"u16","order":"row-major"}"#).unwrap();
        assert_eq!(s.dtype, RawDtype::U16);
        assert!(serde_json::from_str::<RawSidecar>(
            r#"{"shape":[2,3],"dtype":"f32","order":"row-major"}"#
        )
        .is_err());
    }
}
