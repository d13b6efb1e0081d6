//! Image files: float CSV (the source of truth) and 8-bit binary PGM
//! (a lossy preview).

use std::fs;
use std::path::Path;

use serde::Serialize;
use sik_core::harness::report::fmt_float;
use sik_core::simulation::ImageGrid;

use crate::error::{CliError, CliResult};

/// Linear map applied when writing a PGM: `min` becomes 0, `max` 255.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PgmScaling {
    pub min: f64,
    pub max: f64,
}

pub fn image_to_csv(image: &ImageGrid) -> String {
    let mut out = String::with_capacity(image.len() * 20);
    for r in 0..image.height() {
        let row: Vec<String> = image.row(r).iter().map(|&v| fmt_float(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn parse_error(path: &Path, line: usize, column: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// Parses a float CSV. Line and column in errors are 1-based; the column
/// is the byte offset of the offending field.
pub fn parse_csv(path: &Path, text: &str) -> CliResult<ImageGrid> {
    let mut pixels = Vec::new();
    let mut width = None;
    let mut height = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() {
            continue;
        }
        let mut offset = 0;
        let mut count = 0;
        for field in line.split(',') {
            let value: f64 = field
                .trim()
                .parse()
                .map_err(|_| parse_error(path, line_no, offset + 1, format!("not a number: {field:?}")))?;
            if !value.is_finite() {
                return Err(parse_error(path, line_no, offset + 1, format!("non-finite value {field:?}")));
            }
            pixels.push(value);
            offset += field.len() + 1;
            count += 1;
        }
        match width {
            None => width = Some(count),
            Some(w) if w != count => {
                return Err(parse_error(
                    path,
                    line_no,
                    1,
                    format!("row has {count} values, expected {w}"),
                ))
            }
            _ => {}
        }
        height += 1;
    }
    let width = width.ok_or_else(|| parse_error(path, 1, 1, "empty image"))?;
    ImageGrid::new(height, width, pixels).map_err(CliError::from)
}

/// Parses a binary P5 PGM. Samples are mapped to `[0, 1]` by `maxval`.
pub fn parse_pgm(path: &Path, bytes: &[u8]) -> CliResult<ImageGrid> {
    let mut pos = 0;
    let mut line = 1;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
                continue;
            }
            if bytes[pos] == b'\n' {
                line += 1;
            }
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(parse_error(path, line, start + 1, "truncated PGM header"));
        }
        tokens.push((String::from_utf8_lossy(&bytes[start..pos]).into_owned(), line, start + 1));
    }
    let (magic, l, c) = &tokens[0];
    if magic != "P5" {
        return Err(parse_error(path, *l, *c, format!("expected P5, found {magic:?}")));
    }
    let mut nums = [0usize; 3];
    for (slot, (tok, l, c)) in nums.iter_mut().zip(&tokens[1..]) {
        *slot = tok
            .parse()
            .map_err(|_| parse_error(path, *l, *c, format!("bad header value {tok:?}")))?;
    }
    let [width, height, maxval] = nums;
    if maxval == 0 || maxval > 255 {
        let (_, l, c) = &tokens[3];
        return Err(parse_error(path, *l, *c, format!("unsupported maxval {maxval}")));
    }
    // single whitespace byte separates the header from the raster
    pos += 1;
    let data = bytes.get(pos..).unwrap_or_default();
    let expected = width * height;
    if data.len() != expected {
        return Err(parse_error(
            path,
            line,
            pos + 1,
            format!("raster has {} bytes, expected {expected}", data.len()),
        ));
    }
    let pixels = data.iter().map(|&b| b as f64 / maxval as f64).collect();
    ImageGrid::new(height, width, pixels).map_err(CliError::from)
}

/// Reads a PGM if the file starts with the P5 magic, a float CSV otherwise.
pub fn read_image(path: &Path) -> CliResult<ImageGrid> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    if bytes.starts_with(b"P5") {
        return parse_pgm(path, &bytes);
    }
    let text = std::str::from_utf8(&bytes).map_err(|e| {
        let before = &bytes[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        parse_error(path, line, column, "invalid UTF-8")
    })?;
    parse_csv(path, text)
}

pub fn image_to_pgm(image: &ImageGrid) -> (Vec<u8>, PgmScaling) {
    let (min, max) = image.value_range();
    let span = max - min;
    let mut out = format!("P5\n{} {}\n255\n", image.width(), image.height()).into_bytes();
    out.extend(image.pixels().iter().map(|&v| {
        if span > 0.0 {
            ((v - min) / span * 255.0).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    }));
    (out, PgmScaling { min, max })
}

pub fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CliResult<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> &'static Path {
        Path::new("img.csv")
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let values = vec![0.1, -1e-300, 1.0 / 3.0, 12345.678, 5e20, 0.0, -0.0, 2.5e-5];
        let image = ImageGrid::new(2, 4, values.clone()).unwrap();
        let back = parse_csv(p(), &image_to_csv(&image)).unwrap();
        assert_eq!(back.height(), 2);
        assert_eq!(back.width(), 4);
        for (a, b) in back.pixels().iter().zip(&values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn csv_errors_carry_position() {
        match parse_csv(p(), "1,2,3\n4,x,6\n") {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        match parse_csv(p(), "1,2,3\n4,5\n") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_csv(p(), "\n\n"), Err(CliError::Parse { .. })));
        assert!(matches!(parse_csv(p(), "1,NaN\n"), Err(CliError::Parse { .. })));
    }

    #[test]
    fn pgm_scaling_and_round_trip() {
        let image = ImageGrid::new(2, 2, vec![-1.0, 0.0, 1.0, 0.5]).unwrap();
        let (bytes, scaling) = image_to_pgm(&image);
        assert_eq!(scaling, PgmScaling { min: -1.0, max: 1.0 });
        assert!(bytes.starts_with(b"P5\n2 2\n255\n"));
        assert_eq!(&bytes[bytes.len() - 4..], &[0, 128, 255, 191]);
        let back = parse_pgm(Path::new("x.pgm"), &bytes).unwrap();
        assert_eq!(back.pixels(), &[0.0, 128.0 / 255.0, 1.0, 191.0 / 255.0]);
    }

    #[test]
    fn pgm_with_comments_and_constant_image() {
        let bytes = b"P5\n# made by hand\n3 1\n255\n\x00\x7f\xff";
        let image = parse_pgm(Path::new("x.pgm"), bytes).unwrap();
        assert_eq!(image.width(), 3);
        let (out, _) = image_to_pgm(&ImageGrid::filled(1, 2, 4.0).unwrap());
        assert_eq!(&out[out.len() - 2..], &[0, 0]);
        assert!(matches!(
            parse_pgm(Path::new("x.pgm"), b"P5\n3 1\n255\n\x00"),
            Err(CliError::Parse { .. })
        ));
    }
}
