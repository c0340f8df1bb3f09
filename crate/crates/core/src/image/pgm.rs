//! Netpbm graymap (PGM) reading and writing.
//!
//! Both the ASCII (`P2`) and binary (`P5`) variants are supported for
//! `maxval <= 255`. Header comments (`#` to end of line) are skipped. Values
//! are rescaled from `0..=maxval` to `0..=255` on read.
//!
//! Written files always use `maxval = 255`. Pixels are clamped to `[0, 255]`
//! and rounded half away from zero.

use std::fmt::Write as _;

use thiserror::Error;

use super::GrayImage;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("not a netpbm file (bad magic number)")]
    BadMagic,
    #[error("unsupported netpbm variant {0}; only P2 and P5 graymaps are read")]
    Unsupported(String),
    #[error("malformed header: {0}")]
    Header(String),
    #[error("image has a zero dimension ({cols}x{rows})")]
    ZeroDimension { cols: usize, rows: usize },
    #[error("maxval {0} exceeds 255")]
    MaxvalTooLarge(u64),
    #[error("truncated pixel data: expected {expected} samples, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("malformed pixel token at sample {0}")]
    BadSample(usize),
    #[error("sample {index} has value {value} above maxval {maxval}")]
    SampleOutOfRange { index: usize, value: u64, maxval: u64 },
}

/// Output encoding for [`write_pgm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmMode {
    /// `P2`
    Ascii,
    /// `P5`
    Binary,
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
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

    /// Next whitespace-delimited token, or `None` at end of input.
    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn header_number(&mut self, what: &str) -> Result<u64, PgmError> {
        let tok = self
            .token()
            .ok_or_else(|| PgmError::Header(format!("missing {what}")))?;
        parse_uint(tok).ok_or_else(|| {
            PgmError::Header(format!("{what} `{}` is not a number", String::from_utf8_lossy(tok)))
        })
    }
}

fn parse_uint(tok: &[u8]) -> Option<u64> {
    if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(tok).ok()?.parse().ok()
}

/// Parses a `P2` or `P5` graymap.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    if bytes.len() < 2 || bytes[0] != b'P' || !bytes[1].is_ascii_digit() {
        return Err(PgmError::BadMagic);
    }
    let binary = match bytes[1] {
        b'2' => false,
        b'5' => true,
        b'1' | b'3' | b'4' | b'6' | b'7' => {
            return Err(PgmError::Unsupported(format!("P{}", bytes[1] as char)))
        }
        _ => return Err(PgmError::BadMagic),
    };
    // the magic must be followed by whitespace
    match bytes.get(2) {
        Some(b) if b.is_ascii_whitespace() || *b == b'#' => {}
        _ => return Err(PgmError::BadMagic),
    }

    let mut cur = Cursor { data: bytes, pos: 2 };
    let cols = cur.header_number("width")?;
    let rows = cur.header_number("height")?;
    let maxval = cur.header_number("maxval")?;
    let (cols, rows) = (cols as usize, rows as usize);
    if cols == 0 || rows == 0 {
        return Err(PgmError::ZeroDimension { cols, rows });
    }
    if maxval == 0 {
        return Err(PgmError::Header("maxval must be at least 1".into()));
    }
    if maxval > 255 {
        return Err(PgmError::MaxvalTooLarge(maxval));
    }
    let count = cols
        .checked_mul(rows)
        .ok_or_else(|| PgmError::Header("image dimensions overflow".into()))?;

    let mut raw = Vec::with_capacity(count.min(1 << 24));
    if binary {
        // exactly one whitespace byte separates maxval from the raster
        match bytes.get(cur.pos) {
            Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
            _ => return Err(PgmError::Truncated { expected: count, found: 0 }),
        }
        let payload = &bytes[cur.pos..];
        if payload.len() < count {
            return Err(PgmError::Truncated {
                expected: count,
                found: payload.len(),
            });
        }
        raw.extend(payload[..count].iter().map(|&b| b as u64));
    } else {
        for i in 0..count {
            let tok = cur.token().ok_or(PgmError::Truncated {
                expected: count,
                found: i,
            })?;
            raw.push(parse_uint(tok).ok_or(PgmError::BadSample(i))?);
        }
    }

    let scale = 255.0 / maxval as f64;
    let mut pixels = Vec::with_capacity(count);
    for (index, &value) in raw.iter().enumerate() {
        if value > maxval {
            return Err(PgmError::SampleOutOfRange { index, value, maxval });
        }
        pixels.push(if maxval == 255 { value as f64 } else { value as f64 * scale });
    }
    Ok(GrayImage::from_parts(rows, cols, pixels))
}

/// Clamps to `[0, 255]` and rounds half away from zero.
pub fn quantize(v: f64) -> u8 {
    v.clamp(0.0, 255.0).round() as u8
}

/// Serializes an image with `maxval = 255`.
pub fn write_pgm(img: &GrayImage, mode: PgmMode) -> Vec<u8> {
    let (rows, cols) = (img.rows(), img.cols());
    let magic = match mode {
        PgmMode::Ascii => "P2",
        PgmMode::Binary => "P5",
    };
    let mut out = format!("{magic}\n{cols} {rows}\n255\n").into_bytes();
    match mode {
        PgmMode::Binary => out.extend(img.pixels().iter().map(|&v| quantize(v))),
        PgmMode::Ascii => {
            let mut text = String::with_capacity(rows * cols * 4);
            for r in 0..rows {
                let mut line_len = 0;
                for (c, &v) in img.row(r).iter().enumerate() {
                    let q = quantize(v);
                    let width = if q >= 100 { 3 } else if q >= 10 { 2 } else { 1 };
                    // keep lines within 70 characters
                    if c > 0 {
                        if line_len + 1 + width > 70 {
                            text.push('\n');
                            line_len = 0;
                        } else {
                            text.push(' ');
                            line_len += 1;
                        }
                    }
                    let _ = write!(text, "{q}");
                    line_len += width;
                }
                text.push('\n');
            }
            out.extend_from_slice(text.as_bytes());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_minimal_ascii() {
        let img = read_pgm(b"P2\n1 1\n255\n128\n").unwrap();
        assert_eq!((img.rows(), img.cols()), (1, 1));
        assert_eq!(img.pixels(), &[128.0]);
    }

    #[test]
    fn reads_binary_with_comments() {
        let mut data = b"P5\n# a comment\n3 2 # trailing\n255\n".to_vec();
        data.extend([0u8, 10, 20, 30, 40, 255]);
        let img = read_pgm(&data).unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 3));
        assert_eq!(img.row(1), &[30.0, 40.0, 255.0]);
    }

    #[test]
    fn rescales_small_maxval() {
        let img = read_pgm(b"P2 2 1 1 0 1").unwrap();
        assert_eq!(img.pixels(), &[0.0, 255.0]);
        let img = read_pgm(b"P2 1 1 15 5").unwrap();
        assert_eq!(img.pixels(), &[85.0]);
    }

    #[test]
    fn error_cases() {
        let truncated = b"P5\n4 4\n255\n\x00\x01\x02";
        assert!(matches!(
            read_pgm(truncated),
            Err(PgmError::Truncated { expected: 16, found: 3 })
        ));
        assert!(matches!(read_pgm(b"P3\n1 1\n255\n0 0 0\n"), Err(PgmError::Unsupported(m)) if m == "P3"));
        assert!(matches!(read_pgm(b"GIF89a"), Err(PgmError::BadMagic)));
        assert!(matches!(read_pgm(b"P"), Err(PgmError::BadMagic)));
        assert!(matches!(read_pgm(b"P2\n1 1\n65535\n0\n"), Err(PgmError::MaxvalTooLarge(65535))));
        assert!(matches!(read_pgm(b"P2\n1 x\n255\n0\n"), Err(PgmError::Header(_))));
        assert!(matches!(read_pgm(b"P2\n0 1\n255\n"), Err(PgmError::ZeroDimension { .. })));
        assert!(matches!(read_pgm(b"P2\n2 1\n255\n3\n"), Err(PgmError::Truncated { expected: 2, found: 1 })));
        assert!(matches!(read_pgm(b"P2\n1 1\n100\n101\n"), Err(PgmError::SampleOutOfRange { .. })));
        assert!(matches!(read_pgm(b"P2\n1 1\n255\n-4\n"), Err(PgmError::BadSample(0))));
        assert!(matches!(read_pgm(b"P2\n1 1\n0\n0\n"), Err(PgmError::Header(_))));
    }

    #[test]
    fn quantization_contract() {
        assert_eq!(quantize(-3.2), 0);
        assert_eq!(quantize(260.7), 255);
        assert_eq!(quantize(127.5), 128);
        assert_eq!(quantize(127.49), 127);
    }

    #[test]
    fn writer_layout() {
        let img = GrayImage::new(2, 2, vec![0.0, 255.0, 127.5, 3.0]).unwrap();
        assert_eq!(write_pgm(&img, PgmMode::Ascii), b"P2\n2 2\n255\n0 255\n128 3\n");
        assert_eq!(write_pgm(&img, PgmMode::Binary), b"P5\n2 2\n255\n\x00\xff\x80\x03");
    }

    #[test]
    fn ascii_lines_stay_short() {
        let img = GrayImage::new(1, 64, vec![200.0; 64]).unwrap();
        let bytes = write_pgm(&img, PgmMode::Ascii);
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.lines().all(|l| l.len() <= 70));
        assert_eq!(read_pgm(text.as_bytes()).unwrap(), img);
    }
}
