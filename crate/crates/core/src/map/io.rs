use std::io::{BufRead, Write};

use crate::error::{Error, Result};

use super::{Dart, MapKind, Triangulation};

/// Writes `map` in the `TRI1` text format: a header
/// `TRI1 <ndarts> <root> <S|B> [<perimeter> <outer>]` followed by one line
/// `<dart> <twin> <fnext>` per dart.
pub fn write_map<W: Write>(map: &Triangulation, mut out: W) -> Result<()> {
    let mut w = std::io::BufWriter::new(&mut out);
    match map.kind() {
        MapKind::Sphere => writeln!(w, "TRI1 {} {} S", map.num_darts(), map.root())?,
        MapKind::Boundary { perimeter, outer } => writeln!(
            w,
            "TRI1 {} {} B {} {}",
            map.num_darts(),
            map.root(),
            perimeter,
            outer
        )?,
    }
    for d in 0..map.num_darts() as Dart {
        writeln!(w, "{} {} {}", d, map.twin(d), map.fnext(d))?;
    }
    w.flush()?;
    Ok(())
}

fn parse<T: std::str::FromStr>(tok: Option<&str>, what: &str, line: usize) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::Malformed(format!("line {line}: missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::Malformed(format!("line {line}: bad {what} `{tok}`")))
}

/// Reads a map in the `TRI1` format and checks every invariant.
pub fn read_map<R: BufRead>(input: R) -> Result<Triangulation> {
    let mut lines = input.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() => None,
        other => Some((i + 1, other)),
    });
    let (ln, header) = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty input".into()))?;
    let header = header?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("TRI1") {
        return Err(Error::Malformed(format!("line {ln}: expected TRI1 header")));
    }
    let n: usize = parse(toks.next(), "dart count", ln)?;
    let root: Dart = parse(toks.next(), "root", ln)?;
    let kind = match toks.next() {
        Some("S") => MapKind::Sphere,
        Some("B") => MapKind::Boundary {
            perimeter: parse(toks.next(), "perimeter", ln)?,
            outer: parse(toks.next(), "outer dart", ln)?,
        },
        _ => return Err(Error::Malformed(format!("line {ln}: kind must be S or B"))),
    };
    if toks.next().is_some() {
        return Err(Error::Malformed(format!("line {ln}: trailing tokens")));
    }
    if n > Dart::MAX as usize / 2 {
        return Err(Error::Malformed(format!("line {ln}: too many darts")));
    }
    let mut twin = vec![None; n];
    let mut fnext = vec![0; n];
    for _ in 0..n {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| Error::Malformed("fewer dart lines than declared".into()))?;
        let line = line?;
        let mut toks = line.split_whitespace();
        let d: usize = parse(toks.next(), "dart", ln)?;
        let t: Dart = parse(toks.next(), "twin", ln)?;
        let f: Dart = parse(toks.next(), "fnext", ln)?;
        if toks.next().is_some() {
            return Err(Error::Malformed(format!("line {ln}: trailing tokens")));
        }
        if d >= n {
            return Err(Error::Malformed(format!("line {ln}: dart {d} out of range")));
        }
        if twin[d].is_some() {
            return Err(Error::Malformed(format!("line {ln}: dart {d} listed twice")));
        }
        twin[d] = Some(t);
        fnext[d] = f;
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Malformed(format!("line {ln}: unexpected extra line")));
    }
    let twin: Vec<Dart> = twin.into_iter().map(|t| t.unwrap()).collect();
    Ok(Triangulation::from_tables(twin, fnext, root, kind)?)
}
