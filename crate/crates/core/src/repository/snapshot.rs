//! Plain-text repository snapshots.
//!
//! ```text
//! HOPREPO v1
//! entry 3
//! importance 0.75
//! generation 12
//! ascension 7            # or `-`
//! failures 0
//! fitness {...}          # one-line JSON
//! history [...]          # one-line JSON
//! polytope 24 5
//! <24 rows in the polytope text format>
//! end
//! ```

use std::fmt::Write as _;

use super::RepositoryEntry;
use crate::error::{Error, Result};
use crate::polytope::{format_rational, Polytope};

pub const SNAPSHOT_HEADER: &str = "HOPREPO v1";

pub fn write_snapshot(entries: &[RepositoryEntry]) -> String {
    let mut out = format!("{SNAPSHOT_HEADER}\n");
    for e in entries {
        let p = &e.polytope;
        let _ = writeln!(out, "entry {}", e.id);
        let _ = writeln!(out, "importance {:?}", e.importance);
        let _ = writeln!(out, "generation {}", e.generation);
        match e.ascension_generation {
            Some(g) => {
                let _ = writeln!(out, "ascension {g}");
            }
            None => out.push_str("ascension -\n"),
        }
        let _ = writeln!(out, "failures {}", e.failures);
        let _ = writeln!(out, "fitness {}", serde_json::to_string(&e.fitness).expect("serializable"));
        let _ = writeln!(out, "history {}", serde_json::to_string(&e.history).expect("serializable"));
        let _ = writeln!(out, "polytope {} {}", p.len(), p.dim());
        for row in p.rows() {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            let _ = writeln!(out, "{}", cells.join(" "));
        }
        out.push_str("end\n");
    }
    out
}

fn field<'a>(line: Option<(usize, &'a str)>, key: &str) -> Result<(usize, &'a str)> {
    let (no, line) = line.ok_or_else(|| Error::Parse(format!("snapshot ends before `{key}`")))?;
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' '))
        .ok_or_else(|| Error::Parse(format!("line {}: expected `{key} ...`", no + 1)))?;
    Ok((no, rest))
}

fn number<T: std::str::FromStr>(no: usize, s: &str) -> Result<T> {
    s.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad number `{s}`", no + 1)))
}

pub fn parse_snapshot(text: &str) -> Result<Vec<RepositoryEntry>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, h)) if h.trim() == SNAPSHOT_HEADER => {}
        _ => return Err(Error::Parse(format!("snapshot must start with `{SNAPSHOT_HEADER}`"))),
    }
    let mut out = Vec::new();
    while let Some(first) = lines.next() {
        let (no, id) = field(Some(first), "entry")?;
        let id: u64 = number(no, id)?;
        let (no, imp) = field(lines.next(), "importance")?;
        let importance: f64 = number(no, imp)?;
        let (no, gen) = field(lines.next(), "generation")?;
        let generation: u64 = number(no, gen)?;
        let (no, asc) = field(lines.next(), "ascension")?;
        let ascension_generation = if asc.trim() == "-" { None } else { Some(number(no, asc)?) };
        let (no, fail) = field(lines.next(), "failures")?;
        let failures: u32 = number(no, fail)?;
        let (no, fit) = field(lines.next(), "fitness")?;
        let fitness = serde_json::from_str(fit).map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        let (no, hist) = field(lines.next(), "history")?;
        let history = serde_json::from_str(hist).map_err(|e| Error::Parse(format!("line {}: {e}", no + 1)))?;
        let (no, shape) = field(lines.next(), "polytope")?;
        let mut block = format!("{shape}\n");
        let n: usize = number(no, shape.split_whitespace().next().unwrap_or(""))?;
        if n > crate::MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        for _ in 0..n {
            let (_, row) = lines.next().ok_or_else(|| Error::Parse("snapshot ends inside a polytope".into()))?;
            block.push_str(row);
            block.push('\n');
        }
        let polytope: Polytope = block.parse()?;
        match lines.next() {
            Some((_, l)) if l.trim() == "end" => {}
            Some((no, _)) => return Err(Error::Parse(format!("line {}: expected `end`", no + 1))),
            None => return Err(Error::Parse("snapshot ends before `end`".into())),
        }
        out.push(RepositoryEntry {
            id,
            polytope,
            fitness,
            importance,
            generation,
            history,
            failures,
            ascension_generation,
            signature: Vec::new(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hull::facets_exact;
    use crate::objectives::{evaluate, Objective};
    use crate::shapes;

    fn entries() -> Vec<RepositoryEntry> {
        let p = shapes::triangular_prism().map_rows(|r| {
            let mut r = r.to_vec();
            r[2] = r[2].clone() * crate::num::Rational::from_integer(2.into()) - crate::num::Rational::from_integer(1.into());
            r
        });
        let obj = &Objective::hirsch_family(2)[0];
        let f = evaluate(&p, obj).unwrap();
        let sig = facets_exact(&p).unwrap().incidence.facets;
        let mut a = RepositoryEntry::seed(p.clone(), f.clone(), sig.clone());
        a.id = 4;
        a.importance = 0.125;
        let mut b = a.child(p.map_rows(|r| r.iter().map(|x| x / crate::num::Rational::from_integer(3.into())).collect()), f, sig, true);
        b.id = 9;
        b.failures = 2;
        vec![a, b]
    }

    #[test]
    fn round_trip() {
        let es = entries();
        let text = write_snapshot(&es);
        assert!(text.starts_with("HOPREPO v1\n"));
        let back = parse_snapshot(&text).unwrap();
        assert_eq!(back.len(), 2);
        for (a, b) in es.iter().zip(&back) {
            assert_eq!(a.polytope, b.polytope);
            assert_eq!((a.id, a.generation, a.failures, a.ascension_generation), (b.id, b.generation, b.failures, b.ascension_generation));
            assert_eq!(a.fitness, b.fitness);
            assert_eq!(a.history, b.history);
            assert_eq!(a.importance, b.importance);
        }
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_snapshot("").is_err());
        assert!(parse_snapshot("HOPREPO v2\n").is_err());
        let text = write_snapshot(&entries());
        assert!(parse_snapshot(&text.replace("end\n", "")).is_err());
        assert!(parse_snapshot(&text.replace("generation 0", "generation x")).is_err());
        assert_eq!(parse_snapshot("HOPREPO v1\n").unwrap().len(), 0);
    }
}
