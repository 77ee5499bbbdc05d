//! Text formats for instances (`hrg 1`) and bond configurations (`hrp 1`).
//!
//! ```text
//! hrg 1
//! n=<int> alpha=<decimal|unknown>
//! <player 0: 2^(n-1) chars>
//! ...
//! <player n-1>
//! ```
//!
//! Character `j` of the line for player `i` describes the edge whose base is
//! `expand(j, i)`: `>` toward the endpoint with bit `i` set, `<` toward the
//! base, `=` tie. Bond files use header `hrp 1`, `p=<decimal|derived>` and the
//! characters `o` (open) / `x` (closed). Every line ends with `\n`.

use std::path::Path;

use crate::hypercube::{expand, Dimension};
use crate::percolation::BondConfig;
use crate::randgame::{EdgeMark, MarkSource, OrientedCube, TieParameter};
use crate::{Error, Result};

pub const INSTANCE_MAGIC: &str = "hrg 1";
pub const BOND_MAGIC: &str = "hrp 1";

fn mark_char(m: EdgeMark) -> char {
    match m {
        EdgeMark::TowardOne => '>',
        EdgeMark::TowardZero => '<',
        EdgeMark::Tie => '=',
    }
}

fn write_rows(out: &mut String, dim: Dimension, mut cell: impl FnMut(usize) -> char) {
    let per = dim.edges_per_player();
    for i in dim.players() {
        for j in 0..per {
            // expand(j, i) is the base of edge index i * per + j
            debug_assert_eq!(dim.edge_index(expand(j as u32, i), i), i as usize * per + j);
            out.push(cell(i as usize * per + j));
        }
        out.push('\n');
    }
}

pub fn write_instance<S: MarkSource + ?Sized>(cube: &S) -> String {
    let dim = cube.dim();
    let alpha = cube
        .tie_parameter()
        .map_or_else(|| "unknown".to_string(), |a| a.to_string());
    let mut out = format!("{INSTANCE_MAGIC}\nn={dim} alpha={alpha}\n");
    out.reserve(dim.edge_count() + dim.get() as usize);
    write_rows(&mut out, dim, |e| mark_char(cube.mark(e)));
    out
}

pub fn write_bond(bond: &BondConfig) -> String {
    let dim = bond.dim();
    let p = bond
        .p()
        .map_or_else(|| "derived".to_string(), |p| p.to_string());
    let mut out = format!("{BOND_MAGIC}\nn={dim} p={p}\n");
    write_rows(&mut out, dim, |e| if bond.is_open(e) { 'o' } else { 'x' });
    out
}

struct Header<'a> {
    dim: Dimension,
    param: &'a str,
    rows: Vec<&'a str>,
}

fn parse_header<'a>(text: &'a str, magic: &str, param_key: &str) -> Result<Header<'a>> {
    if !text.ends_with('\n') {
        let line = text.lines().count().max(1);
        let column = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
        return Err(Error::parse(line, column, "missing trailing newline"));
    }
    let lines: Vec<&str> = text[..text.len() - 1].split('\n').collect();
    if lines[0] != magic {
        return Err(Error::parse(
            1,
            1,
            format!("expected header `{magic}`, found `{}`", lines[0]),
        ));
    }
    let second = lines
        .get(1)
        .ok_or_else(|| Error::parse(2, 1, "missing parameter line"))?;
    let mut fields = second.split(' ');
    let n_field = fields.next().unwrap_or("");
    let n_text = n_field
        .strip_prefix("n=")
        .ok_or_else(|| Error::parse(2, 1, "expected `n=<int>`"))?;
    let n: u32 = n_text
        .parse()
        .map_err(|_| Error::parse(2, 3, format!("bad player count `{n_text}`")))?;
    let dim = Dimension::new(n).map_err(|e| Error::parse(2, 3, e.to_string()))?;
    let col = n_field.len() + 2;
    let p_field = fields
        .next()
        .ok_or_else(|| Error::parse(2, col, format!("expected `{param_key}=...`")))?;
    let param = p_field
        .strip_prefix(param_key)
        .and_then(|s| s.strip_prefix('='))
        .ok_or_else(|| Error::parse(2, col, format!("expected `{param_key}=...`")))?;
    if fields.next().is_some() {
        return Err(Error::parse(
            2,
            col + p_field.len() + 1,
            "unexpected trailing field",
        ));
    }
    let rows = lines[2..].to_vec();
    if rows.len() != n as usize {
        return Err(Error::parse(
            3 + rows.len().min(n as usize),
            1,
            format!("expected {n} edge lines, found {}", rows.len()),
        ));
    }
    let per = dim.edges_per_player();
    for (i, row) in rows.iter().enumerate() {
        let len = row.chars().count();
        if len != per {
            return Err(Error::parse(
                3 + i,
                len.min(per) + 1,
                format!("expected {per} characters, found {len}"),
            ));
        }
    }
    Ok(Header { dim, param, rows })
}

fn parse_cells<T>(
    header: &Header<'_>,
    decode: impl Fn(char) -> Option<T>,
    allowed: &str,
) -> Result<Vec<T>> {
    let mut cells = Vec::with_capacity(header.dim.edge_count());
    for (i, row) in header.rows.iter().enumerate() {
        for (j, ch) in row.chars().enumerate() {
            cells.push(decode(ch).ok_or_else(|| {
                Error::parse(
                    3 + i,
                    j + 1,
                    format!("unexpected character `{ch}` (allowed: {allowed})"),
                )
            })?);
        }
    }
    Ok(cells)
}

pub fn parse_instance(text: &str) -> Result<OrientedCube> {
    let header = parse_header(text, INSTANCE_MAGIC, "alpha")?;
    let alpha = match header.param {
        "unknown" => None,
        s => {
            let a: f64 = s
                .parse()
                .map_err(|_| Error::parse(2, 1, format!("bad alpha `{s}`")))?;
            Some(TieParameter::new(a).map_err(|e| Error::parse(2, 1, e.to_string()))?)
        }
    };
    let marks = parse_cells(
        &header,
        |c| match c {
            '>' => Some(EdgeMark::TowardOne),
            '<' => Some(EdgeMark::TowardZero),
            '=' => Some(EdgeMark::Tie),
            _ => None,
        },
        "`>`, `<`, `=`",
    )?;
    OrientedCube::from_marks(header.dim, marks, alpha)
}

pub fn parse_bond(text: &str) -> Result<BondConfig> {
    let header = parse_header(text, BOND_MAGIC, "p")?;
    let p = match header.param {
        "derived" => None,
        s => Some(
            s.parse::<f64>()
                .map_err(|_| Error::parse(2, 1, format!("bad probability `{s}`")))?,
        ),
    };
    let flags = parse_cells(
        &header,
        |c| match c {
            'o' => Some(true),
            'x' => Some(false),
            _ => None,
        },
        "`o`, `x`",
    )?;
    BondConfig::from_flags(header.dim, flags, p)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<OrientedCube> {
    parse_instance(&read(path.as_ref())?)
}

pub fn write_instance_file<S: MarkSource + ?Sized>(path: impl AsRef<Path>, cube: &S) -> Result<()> {
    write(path.as_ref(), &write_instance(cube))
}

pub fn read_bond(path: impl AsRef<Path>) -> Result<BondConfig> {
    parse_bond(&read(path.as_ref())?)
}

pub fn write_bond_file(path: impl AsRef<Path>, bond: &BondConfig) -> Result<()> {
    write(path.as_ref(), &write_bond(bond))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randgame::{example_three_player_game, marks_of, sample_marks};

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn single_edge_files() {
        let c = OrientedCube::all_tie(dim(1));
        assert_eq!(write_instance(&c), "hrg 1\nn=1 alpha=1\n=\n");
        let c = OrientedCube::uniform(dim(1), EdgeMark::TowardOne);
        assert_eq!(write_instance(&c), "hrg 1\nn=1 alpha=unknown\n>\n");
        assert_eq!(parse_instance("hrg 1\nn=1 alpha=unknown\n>\n").unwrap(), c);
    }

    #[test]
    fn example_game_layout() {
        let text = write_instance(&marks_of(&example_three_player_game()));
        // player 0 edges have bases 0, 2, 4, 6
        // (0,0,0)<-(1,0,0), (0,1,0)->(1,1,0), (0,0,1)<-(1,0,1), (0,1,1)->(1,1,1)
        assert_eq!(text, "hrg 1\nn=3 alpha=unknown\n<><>\n<><<\n<><<\n");
    }

    #[test]
    fn instance_round_trip() {
        for seed in 0..5 {
            let c = sample_marks(dim(7), TieParameter::new(0.35).unwrap(), seed);
            assert_eq!(parse_instance(&write_instance(&c)).unwrap(), c);
        }
    }

    #[test]
    fn bond_round_trip() {
        let b = crate::percolation::sample_bond(dim(5), 0.25, 3).unwrap();
        let text = write_bond(&b);
        assert!(text.starts_with("hrp 1\nn=5 p=0.25\n"));
        assert_eq!(parse_bond(&text).unwrap(), b);
        let d = crate::percolation::orientation_subgraph(&OrientedCube::all_tie(dim(2)));
        assert_eq!(write_bond(&d), "hrp 1\nn=2 p=derived\nxx\nxx\n");
    }

    fn parse_err(text: &str) -> (usize, usize) {
        match parse_instance(text) {
            Err(Error::Parse { line, column, .. }) => (line, column),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_instances_name_the_position() {
        assert_eq!(parse_err("hrg 2\nn=1 alpha=1\n=\n"), (1, 1));
        assert_eq!(parse_err("hrg 1\nn=1 alpha=1\n="), (3, 2));
        assert_eq!(parse_err("hrg 1\nm=1 alpha=1\n=\n"), (2, 1));
        assert_eq!(parse_err("hrg 1\nn=x alpha=1\n=\n"), (2, 3));
        assert_eq!(parse_err("hrg 1\nn=2 beta=1\n==\n==\n"), (2, 5));
        assert_eq!(parse_err("hrg 1\nn=2 alpha=1\n==\n=?\n"), (4, 2));
        assert_eq!(parse_err("hrg 1\nn=2 alpha=1\n==\n=\n"), (4, 2));
        assert_eq!(parse_err("hrg 1\nn=2 alpha=1\n==\n"), (4, 1));
        assert_eq!(parse_err("hrg 1\nn=1 alpha=7\n=\n"), (2, 1));
        assert!(parse_bond("hrp 1\nn=1 p=0.5\n?\n").is_err());
    }
}
