//! PGM (P2/P5), label-map and raw real-valued dump formats.
//!
//! Label maps are plain text: a `labels <width> <height>` line followed by
//! `height` lines of `width` space-separated integers.
//!
//! Raw dumps keep full `f64` precision so that pipeline stages chained through
//! files agree bit for bit with an in-memory run: a `raw <width> <height>` line
//! followed by one row of space-separated samples per line. Samples are written
//! with Rust's shortest round-trip float formatting.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::{GrayImage, LabelMap};

/// Quantize a sample the way `write_pgm` stores it: round half up, then clip.
pub fn quantize(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    let bytes = fs::read(path)?;
    decode_pgm(&bytes)
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(img))?;
    Ok(())
}

/// Encode as binary P5 with maxval 255.
pub fn encode_pgm(img: &GrayImage) -> Vec<u8> {
    let header = format!("P5\n{} {}\n255\n", img.width(), img.height());
    let mut out = Vec::with_capacity(header.len() + img.as_slice().len());
    out.extend_from_slice(header.as_bytes());
    out.extend(img.as_slice().iter().map(|&v| quantize(v)));
    out
}

struct HeaderReader<'a> {
    bytes: &'a [u8],
    pos: usize,
    line: usize,
}

impl<'a> HeaderReader<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b'\n' => {
                    self.line += 1;
                    self.pos += 1;
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => return,
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(self.line, "unexpected end of data"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .map_err(|_| Error::parse(self.line, "non-ASCII token"))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let line = self.line;
        let tok = self.token()?;
        tok.parse()
            .map_err(|_| Error::parse(line, format!("invalid {what} {tok:?}")))
    }
}

pub fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut r = HeaderReader {
        bytes,
        pos: 0,
        line: 1,
    };
    let magic = r.token()?;
    let binary = match magic {
        "P5" => true,
        "P2" => false,
        other => return Err(Error::parse(1, format!("unsupported magic {other:?}"))),
    };
    let width = r.number("width")?;
    let height = r.number("height")?;
    let maxval = r.number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::validation(r.line, format!("unsupported maxval {maxval}")));
    }
    let n = width * height;
    let mut data = Vec::with_capacity(n);
    if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = r.pos + 1;
        let raster = bytes.get(start..start + n).ok_or_else(|| {
            Error::parse(r.line, format!("truncated raster: expected {n} bytes"))
        })?;
        data.extend(raster.iter().map(|&b| b as f64));
    } else {
        for _ in 0..n {
            let line = r.line;
            let v = r
                .number("sample")
                .map_err(|_| Error::parse(line, "truncated or invalid sample data"))?;
            if v > maxval {
                return Err(Error::validation(line, format!("sample {v} exceeds maxval")));
            }
            data.push(v as f64);
        }
    }
    GrayImage::from_vec(width, height, data)
}

pub fn write_labelmap(map: &LabelMap, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "labels {} {}", map.width(), map.height())?;
    for row in map.as_slice().chunks(map.width().max(1)) {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_labelmap(path: impl AsRef<Path>) -> Result<LabelMap> {
    let text = fs::read_to_string(path)?;
    parse_labelmap(&text)
}

pub fn parse_labelmap(text: &str) -> Result<LabelMap> {
    let (width, height, body) = parse_dims_header(text, "labels")?;
    let mut labels = Vec::with_capacity(width * height);
    for (idx, line) in body {
        for tok in line.split_whitespace() {
            let v = tok
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("invalid label {tok:?}")))?;
            labels.push(v);
        }
    }
    if labels.len() != width * height {
        return Err(Error::Dimension(format!(
            "header declares {}x{} but {} labels present",
            width,
            height,
            labels.len()
        )));
    }
    LabelMap::from_vec(width, height, labels)
}

pub fn write_raw(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "raw {} {}", img.width(), img.height())?;
    for row in img.as_slice().chunks(img.width().max(1)) {
        let line: Vec<String> = row.iter().map(f64::to_string).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_raw(path: impl AsRef<Path>) -> Result<GrayImage> {
    let text = fs::read_to_string(path)?;
    parse_raw(&text)
}

pub fn parse_raw(text: &str) -> Result<GrayImage> {
    let (width, height, body) = parse_dims_header(text, "raw")?;
    let mut data = Vec::with_capacity(width * height);
    for (idx, line) in body {
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| Error::parse(idx + 1, format!("invalid sample {tok:?}")))?;
            if !(0.0..=255.0).contains(&v) {
                return Err(Error::validation(idx + 1, format!("sample {v} outside [0, 255]")));
            }
            data.push(v);
        }
    }
    if data.len() != width * height {
        return Err(Error::Dimension(format!(
            "header declares {}x{} but {} samples present",
            width,
            height,
            data.len()
        )));
    }
    GrayImage::from_vec(width, height, data)
}

/// Read either a PGM or a raw dump, dispatching on the leading magic.
pub fn read_image(path: impl AsRef<Path>) -> Result<GrayImage> {
    let bytes = fs::read(path)?;
    if bytes.starts_with(b"raw") {
        let text =
            std::str::from_utf8(&bytes).map_err(|_| Error::parse(1, "raw dump is not UTF-8"))?;
        parse_raw(text)
    } else {
        decode_pgm(&bytes)
    }
}

/// Write a raw dump when `raw` is set, otherwise a P5 PGM.
pub fn write_image(img: &GrayImage, path: impl AsRef<Path>, raw: bool) -> Result<()> {
    if raw {
        write_raw(img, path)
    } else {
        write_pgm(img, path)
    }
}

type Body<'a> = Box<dyn Iterator<Item = (usize, &'a str)> + 'a>;

fn parse_dims_header<'a>(text: &'a str, keyword: &str) -> Result<(usize, usize, Body<'a>)> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let (idx, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, format!("missing `{keyword}` header")))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != keyword {
        return Err(Error::parse(
            idx + 1,
            format!("expected `{keyword} <width> <height>`"),
        ));
    }
    let dim = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| Error::parse(idx + 1, format!("invalid dimension {s:?}")))
    };
    Ok((dim(fields[1])?, dim(fields[2])?, Box::new(lines)))
}
