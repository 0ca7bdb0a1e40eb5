//! Two-region 6×6 pixel masks.
//!
//! A mask splits a 6×6 block into region 0 and region 1. The built-in set
//! holds a triangular and a rectangular base mask, each at four clockwise
//! quarter turns, in the order `tri-0, tri-90, tri-180, tri-270, rect-0,
//! rect-90, rect-180, rect-270`. Region 0 is the 15-cell region and region 1
//! the 21-cell region for every built-in.
//!
//! Text format, one or more masks separated by blank lines:
//!
//! ```text
//! # comment
//! mask tri-0 triangular 0
//! 111111
//! 011111
//! 001111
//! 000111
//! 000011
//! 000001
//! ```

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::BLOCK;

pub const CELLS: usize = BLOCK * BLOCK;

/// Region bits of a 6×6 block, row-major.
pub type Cells = [[u8; BLOCK]; BLOCK];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShapeKind {
    Triangular,
    Rectangular,
    Custom,
}

impl ShapeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ShapeKind::Triangular => "triangular",
            ShapeKind::Rectangular => "rectangular",
            ShapeKind::Custom => "custom",
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ShapeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "triangular" => Ok(ShapeKind::Triangular),
            "rectangular" => Ok(ShapeKind::Rectangular),
            "custom" => Ok(ShapeKind::Custom),
            other => Err(format!("unknown shape kind {other:?}")),
        }
    }
}

/// A validated two-region partition of a 6×6 block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    id: String,
    shape: ShapeKind,
    orientation: u16,
    cells: Cells,
}

impl Mask {
    /// Validates that both regions are nonempty and `orientation` is a quarter turn.
    pub fn new(
        id: impl Into<String>,
        shape: ShapeKind,
        orientation: u16,
        cells: Cells,
    ) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(Error::validation(0, format!("invalid mask id {id:?}")));
        }
        if !matches!(orientation, 0 | 90 | 180 | 270) {
            return Err(Error::validation(
                0,
                format!("orientation {orientation} is not one of 0, 90, 180, 270"),
            ));
        }
        if cells.iter().flatten().any(|&b| b > 1) {
            return Err(Error::validation(0, "cells must be 0 or 1"));
        }
        let ones = count_ones(&cells);
        if ones == 0 || ones == CELLS {
            return Err(Error::validation(0, "empty region"));
        }
        Ok(Self {
            id,
            shape,
            orientation,
            cells,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn shape(&self) -> ShapeKind {
        self.shape
    }

    pub fn orientation(&self) -> u16 {
        self.orientation
    }

    pub fn cells(&self) -> &Cells {
        &self.cells
    }

    #[inline]
    pub fn region(&self, row: usize, col: usize) -> u8 {
        self.cells[row][col]
    }

    /// `[|region 0|, |region 1|]`.
    pub fn region_sizes(&self) -> [usize; 2] {
        let ones = count_ones(&self.cells);
        [CELLS - ones, ones]
    }

    /// True when each region is a single 4-connected component.
    pub fn regions_connected(&self) -> bool {
        (0..2).all(|bit| components(&self.cells, bit) == 1)
    }

    /// Rotate a quarter turn clockwise: cell `(r, c)` moves to `(c, 5 - r)`.
    pub fn rotate90(&self) -> Mask {
        let mut cells = [[0u8; BLOCK]; BLOCK];
        for (r, row) in self.cells.iter().enumerate() {
            for (c, &bit) in row.iter().enumerate() {
                cells[c][BLOCK - 1 - r] = bit;
            }
        }
        let orientation = (self.orientation + 90) % 360;
        let stem = self
            .id
            .strip_suffix(&format!("-{}", self.orientation))
            .unwrap_or(&self.id);
        Mask {
            id: format!("{stem}-{orientation}"),
            shape: self.shape,
            orientation,
            cells,
        }
    }
}

fn count_ones(cells: &Cells) -> usize {
    cells.iter().flatten().filter(|&&b| b == 1).count()
}

fn components(cells: &Cells, bit: u8) -> usize {
    let mut seen = [[false; BLOCK]; BLOCK];
    let mut count = 0;
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            if cells[r][c] != bit || seen[r][c] {
                continue;
            }
            count += 1;
            let mut stack = vec![(r, c)];
            seen[r][c] = true;
            while let Some((y, x)) = stack.pop() {
                let neighbours = [
                    (y.wrapping_sub(1), x),
                    (y + 1, x),
                    (y, x.wrapping_sub(1)),
                    (y, x + 1),
                ];
                for (ny, nx) in neighbours {
                    if ny < BLOCK && nx < BLOCK && !seen[ny][nx] && cells[ny][nx] == bit {
                        seen[ny][nx] = true;
                        stack.push((ny, nx));
                    }
                }
            }
        }
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Builtin,
    File,
}

/// Ordered collection of masks. Indices into a set are stable and are what
/// scan results record per block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskSet {
    masks: Vec<Mask>,
    provenance: Provenance,
}

impl MaskSet {
    pub fn new(masks: Vec<Mask>, provenance: Provenance) -> Result<Self> {
        if masks.is_empty() {
            return Err(Error::validation(0, "mask set is empty"));
        }
        Ok(Self { masks, provenance })
    }

    pub fn masks(&self) -> &[Mask] {
        &self.masks
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&Mask> {
        self.masks.get(index)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.masks.iter().position(|m| m.id == id)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Mask> {
        self.masks.iter()
    }
}

impl<'a> IntoIterator for &'a MaskSet {
    type Item = &'a Mask;
    type IntoIter = std::slice::Iter<'a, Mask>;

    fn into_iter(self) -> Self::IntoIter {
        self.masks.iter()
    }
}

/// Triangular base: region 0 is the strict lower-left triangle `c < r`.
pub fn triangular_base() -> Mask {
    let mut cells = [[1u8; BLOCK]; BLOCK];
    for (r, row) in cells.iter_mut().enumerate() {
        for cell in row.iter_mut().take(r) {
            *cell = 0;
        }
    }
    Mask::new("tri-0", ShapeKind::Triangular, 0, cells).expect("valid built-in")
}

/// Rectangular base: region 0 is rows 0-1 plus the first three cells of row 2.
pub fn rectangular_base() -> Mask {
    let mut cells = [[1u8; BLOCK]; BLOCK];
    cells[0] = [0; BLOCK];
    cells[1] = [0; BLOCK];
    cells[2][..3].copy_from_slice(&[0, 0, 0]);
    Mask::new("rect-0", ShapeKind::Rectangular, 0, cells).expect("valid built-in")
}

/// The eight built-in masks.
pub fn builtin_masks() -> MaskSet {
    let mut masks = Vec::with_capacity(8);
    for base in [triangular_base(), rectangular_base()] {
        let mut m = base;
        for _ in 0..4 {
            let next = m.rotate90();
            masks.push(m);
            m = next;
        }
    }
    MaskSet {
        masks,
        provenance: Provenance::Builtin,
    }
}

pub fn format_masks(set: &MaskSet) -> String {
    let mut out = String::new();
    for (i, m) in set.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        out.push_str(&format!("mask {} {} {}\n", m.id, m.shape, m.orientation));
        for row in &m.cells {
            out.extend(row.iter().map(|&b| if b == 1 { '1' } else { '0' }));
            out.push('\n');
        }
    }
    out
}

pub fn save_masks(set: &MaskSet, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_masks(set))?;
    Ok(())
}

pub fn load_masks(path: impl AsRef<Path>) -> Result<MaskSet> {
    parse_masks(&fs::read_to_string(path)?)
}

pub fn parse_masks(text: &str) -> Result<MaskSet> {
    let mut masks = Vec::new();
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.starts_with('#'))
        .peekable();

    loop {
        while matches!(lines.peek(), Some((_, l)) if l.is_empty()) {
            lines.next();
        }
        let Some((header_line, header)) = lines.next() else {
            break;
        };
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "mask" {
            return Err(Error::parse(
                header_line,
                "expected `mask <id> <shape_kind> <orientation>`",
            ));
        }
        let shape: ShapeKind = fields[2]
            .parse()
            .map_err(|e: String| Error::parse(header_line, e))?;
        let orientation: u16 = fields[3].parse().map_err(|_| {
            Error::parse(header_line, format!("invalid orientation {:?}", fields[3]))
        })?;

        let mut cells = [[0u8; BLOCK]; BLOCK];
        for (r, row) in cells.iter_mut().enumerate() {
            let (line_no, line) = match lines.next() {
                Some((n, l)) if !l.is_empty() => (n, l),
                Some((n, _)) => {
                    return Err(Error::parse(n, format!("mask has {r} rows, expected {BLOCK}")))
                }
                None => {
                    return Err(Error::parse(
                        header_line + r + 1,
                        format!("mask has {r} rows, expected {BLOCK}"),
                    ))
                }
            };
            if line.chars().count() != BLOCK {
                return Err(Error::validation(
                    line_no,
                    format!("row has {} cells, expected {BLOCK}", line.chars().count()),
                ));
            }
            for (c, ch) in line.chars().enumerate() {
                row[c] = match ch {
                    '0' => 0,
                    '1' => 1,
                    other => {
                        return Err(Error::parse(line_no, format!("invalid cell {other:?}")))
                    }
                };
            }
        }
        if let Some((n, l)) = lines.peek() {
            if !l.is_empty() && !l.starts_with("mask") {
                return Err(Error::validation(*n, format!("mask has more than {BLOCK} rows")));
            }
        }
        let mask = Mask::new(fields[1], shape, orientation, cells).map_err(|e| match e {
            Error::Validation { msg, .. } => Error::validation(header_line, msg),
            other => other,
        })?;
        masks.push(mask);
    }
    if masks.is_empty() {
        return Err(Error::validation(1, "file contains no masks"));
    }
    MaskSet::new(masks, Provenance::File)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_set_has_eight_masks_with_15_21_split() {
        let set = builtin_masks();
        assert_eq!(set.len(), 8);
        for m in &set {
            assert_eq!(m.region_sizes(), [15, 21], "{}", m.id());
        }
        let ids: Vec<&str> = set.iter().map(Mask::id).collect();
        assert_eq!(
            ids,
            ["tri-0", "tri-90", "tri-180", "tri-270", "rect-0", "rect-90", "rect-180", "rect-270"]
        );
    }

    #[test]
    fn strict_lower_triangle_count() {
        assert_eq!(1 + 2 + 3 + 4 + 5, 15);
        assert_eq!(triangular_base().region_sizes()[0], 15);
    }

    #[test]
    fn rotate_index_map_matches_enumeration() {
        // place a single marker cell at each position and find where it lands
        for r in 0..BLOCK {
            for c in 0..BLOCK {
                let mut cells = [[1u8; BLOCK]; BLOCK];
                cells[r][c] = 0;
                let m = Mask::new("probe", ShapeKind::Custom, 0, cells).unwrap();
                let rotated = m.rotate90();
                let mut found = None;
                for rr in 0..BLOCK {
                    for cc in 0..BLOCK {
                        if rotated.region(rr, cc) == 0 {
                            found = Some((rr, cc));
                        }
                    }
                }
                assert_eq!(found, Some((c, BLOCK - 1 - r)));
            }
        }
        let mut cells = [[1u8; BLOCK]; BLOCK];
        cells[0][5] = 0;
        let m = Mask::new("probe", ShapeKind::Custom, 0, cells).unwrap();
        assert_eq!(m.rotate90().region(5, 5), 0);
    }

    #[test]
    fn rotation_advances_tag_and_id() {
        let m = triangular_base().rotate90();
        assert_eq!(m.id(), "tri-90");
        assert_eq!(m.orientation(), 90);
        assert_eq!(m.region_sizes(), [15, 21]);
        let back = m.rotate90().rotate90().rotate90();
        assert_eq!(back, triangular_base());
    }

    #[test]
    fn rejects_single_region() {
        let err = Mask::new("z", ShapeKind::Custom, 0, [[0; BLOCK]; BLOCK]).unwrap_err();
        assert!(err.to_string().contains("empty region"));
        assert!(Mask::new("z", ShapeKind::Custom, 45, triangular_base().cells).is_err());
    }

    #[test]
    fn parse_reports_line_numbers() {
        let text = "# header\nmask bad custom 0\n000000\n000000\n000000\n000000\n000000\n000000\n";
        match parse_masks(text) {
            Err(Error::Validation { line, msg }) => {
                assert_eq!(line, 2);
                assert!(msg.contains("empty region"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let text = "mask m custom 0\n000111\n0001x1\n";
        assert!(matches!(parse_masks(text), Err(Error::Parse { line: 3, .. })));

        let text = "mask m custom 0\n000111\n00011\n";
        assert!(matches!(parse_masks(text), Err(Error::Validation { line: 3, .. })));

        let text = "mask m custom 0\n000111\n000111\n";
        assert!(matches!(parse_masks(text), Err(Error::Parse { .. })));
    }

    #[test]
    fn triangular_grid_file_parses() {
        let text = "mask tri-0 triangular 0\n111111\n011111\n001111\n000111\n000011\n000001\n";
        let set = parse_masks(text).unwrap();
        assert_eq!(set.len(), 1);
        assert_eq!(set.masks()[0].region_sizes(), [15, 21]);
        assert_eq!(set.masks()[0], triangular_base());
    }

    #[test]
    fn formatted_tri0_has_fifteen_zeros() {
        let set = MaskSet::new(vec![triangular_base()], Provenance::Builtin).unwrap();
        let text = format_masks(&set);
        let body: String = text.lines().skip(1).collect();
        assert_eq!(body.chars().filter(|&c| c == '0').count(), 15);
    }
}
