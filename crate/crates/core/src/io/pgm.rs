//! Grayscale PGM images (P2 ASCII, P5 binary) flattened into curves.
//!
//! Each image becomes one curve in row-major pixel order; the grid is the
//! pixel index after subsampling. Adjacent grid points, and so the pairs used
//! by the shape variation, follow that scan order.

use std::fs;
use std::path::{Path, PathBuf};

use crate::data::{FunctionalDataset, Grid};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    /// Row-major samples.
    pub pixels: Vec<f64>,
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a str> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        (self.pos > start)
            .then(|| std::str::from_utf8(&self.bytes[start..self.pos]).ok())
            .flatten()
    }

    fn number(&mut self, what: &str, source: &str) -> Result<usize> {
        let tok = self.token().ok_or_else(|| bad(source, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| bad(source, format!("{what} is not a nonnegative integer: {tok:?}")))
    }
}

fn bad(source: &str, message: String) -> Error {
    Error::Parse {
        location: source.to_string(),
        message,
    }
}

/// Parses a P2 or P5 image; `source` names it in error messages.
pub fn parse_pgm(bytes: &[u8], source: &str) -> Result<GrayImage> {
    let mut h = Header { bytes, pos: 0 };
    let magic = h.token().ok_or_else(|| bad(source, "empty file".into()))?;
    let binary = match magic {
        "P5" => true,
        "P2" => false,
        other => return Err(bad(source, format!("not a PGM image (magic {other:?})"))),
    };
    let width = h.number("width", source)?;
    let height = h.number("height", source)?;
    let maxval = h.number("maxval", source)?;
    if width == 0 || height == 0 {
        return Err(bad(source, "image has no pixels".into()));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(bad(source, format!("maxval {maxval} outside 1..=65535")));
    }
    let count = width * height;
    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = h.pos + 1;
        let bytes_per = if maxval < 256 { 1 } else { 2 };
        let raster = bytes
            .get(start..start + count * bytes_per)
            .ok_or_else(|| bad(source, format!("raster truncated; expected {count} samples")))?;
        if bytes_per == 1 {
            raster.iter().map(|&b| f64::from(b)).collect()
        } else {
            raster
                .chunks_exact(2)
                .map(|c| f64::from(u16::from_be_bytes([c[0], c[1]])))
                .collect()
        }
    } else {
        let mut px = Vec::with_capacity(count);
        for k in 0..count {
            let v = h.number("sample", source).map_err(|_| {
                bad(source, format!("sample {k} missing or malformed; expected {count}"))
            })?;
            px.push(v as f64);
        }
        px
    };
    Ok(GrayImage {
        width,
        height,
        maxval: maxval as u16,
        pixels,
    })
}

pub fn read_pgm(path: &Path) -> Result<GrayImage> {
    let bytes = fs::read(path).map_err(|e| Error::file(path, e))?;
    parse_pgm(&bytes, &path.display().to_string())
}

/// `.pgm` files of a directory in lexicographic filename order.
pub fn list_pgm_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::file(dir, e))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            p.is_file()
                && p.extension()
                    .and_then(|e| e.to_str())
                    .is_some_and(|e| e.eq_ignore_ascii_case("pgm"))
        })
        .collect();
    files.sort();
    Ok(files)
}

/// One curve per image, every `stride`-th pixel kept.
pub fn read_pgm_dir(dir: &Path, stride: usize) -> Result<FunctionalDataset> {
    let stride = stride.max(1);
    let files = list_pgm_files(dir)?;
    if files.is_empty() {
        return Err(Error::NoInput(dir.to_path_buf()));
    }
    let mut dims = None;
    let mut values = Vec::new();
    for path in &files {
        let img = read_pgm(path)?;
        match dims {
            None => dims = Some((img.width, img.height)),
            Some(d) if d != (img.width, img.height) => {
                return Err(Error::InvalidData(format!(
                    "{} is {}x{}, expected {}x{}",
                    path.display(),
                    img.width,
                    img.height,
                    d.0,
                    d.1
                )))
            }
            Some(_) => {}
        }
        values.extend(img.pixels.into_iter().step_by(stride));
    }
    let (w, h) = dims.expect("at least one image");
    let grid = Grid::indices(w * h)?.subsample(stride)?;
    FunctionalDataset::new(grid, values, files.len())
}

pub fn write_pgm_ascii(img: &GrayImage) -> String {
    let mut s = format!("P2\n{} {}\n{}\n", img.width, img.height, img.maxval);
    for row in img.pixels.chunks(img.width) {
        let line: Vec<String> = row.iter().map(|v| (*v as u32).to_string()).collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}
