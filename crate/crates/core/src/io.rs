//! Line-oriented text formats for q-matroids and representation matrices.
//!
//! A q-matroid file is
//!
//! ```text
//! qmatroid q=2 n=3
//! 0 0 -
//! 1 1 001
//! ...
//! ```
//!
//! with one line per subspace in canonical lattice order (`rank dim rows`),
//! rows as base-q digit strings joined by commas and `-` for the zero space.
//! The reader validates the canonical order and re-checks the rank axioms.

use crate::error::{Error, Result};
use crate::gf::{factor_prime_power, FieldSpec};
use crate::lattice::{enumerate_lattice, Subspace};
use crate::matroid::QMatroid;
use crate::repr::RepMatrix;
use std::sync::Arc;

pub fn write_qmatroid(m: &QMatroid) -> String {
    let l = m.lattice();
    let f = l.field();
    let mut out = format!("qmatroid q={} n={}\n", f.order(), l.ambient_dim());
    for (i, s) in l.spaces().iter().enumerate() {
        out.push_str(&format!(
            "{} {} {}\n",
            m.rank_table()[i],
            s.dim(),
            s.text(f)
        ));
    }
    out
}

pub fn read_qmatroid(text: &str) -> Result<QMatroid> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let (q, n) = parse_header(header, "qmatroid")?;
    let (p, m) = factor_prime_power(q)?;
    let field = FieldSpec::new(p, m, None)?;
    let lattice = enumerate_lattice(field.clone(), n)?;

    let mut rank = Vec::with_capacity(lattice.len());
    let mut idx = 0usize;
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if idx >= lattice.len() {
            return Err(Error::Parse("more lines than subspaces".into()));
        }
        let mut parts = line.split_whitespace();
        let r: u16 = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad rank on line {}", idx + 2)))?;
        let d: usize = parts
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad dim on line {}", idx + 2)))?;
        let rows = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("missing rows on line {}", idx + 2)))?;
        let s = Subspace::parse(&field, n, rows)?;
        let expected = &lattice.spaces()[idx];
        if s != *expected || d != expected.dim() {
            return Err(Error::Parse(format!(
                "line {}: subspace out of canonical order (got {rows})",
                idx + 2
            )));
        }
        rank.push(r);
        idx += 1;
    }
    if idx != lattice.len() {
        return Err(Error::Parse(format!(
            "expected {} subspace lines, got {idx}",
            lattice.len()
        )));
    }
    QMatroid::from_rank_table(lattice, rank)
}

/// `repmatrix q=<q> m=<m> k=<k> n=<n>` then k rows of extension-field digit
/// strings separated by spaces.
pub fn write_repmatrix(rep: &RepMatrix) -> String {
    let mut out = format!(
        "repmatrix q={} m={} k={} n={}\n",
        rep.base().order(),
        rep.ext().degree() / rep.base().degree(),
        rep.k(),
        rep.n()
    );
    for row in rep.rows() {
        let cells: Vec<String> = row.iter().map(|&e| rep.ext().format_elem(e)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_repmatrix(text: &str) -> Result<RepMatrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty file".into()))?;
    let fields = parse_kv_header(header, "repmatrix", &["q", "m", "k", "n"])?;
    let (q, m, k, n) = (fields[0], fields[1], fields[2], fields[3]);
    let (p, base_deg) = factor_prime_power(q)?;
    if base_deg != 1 {
        return Err(Error::Parse("repmatrix base field must be prime".into()));
    }
    let base = FieldSpec::new(p, 1, None)?;
    let ext = FieldSpec::new(p, m, None)?;
    let mut rows = Vec::with_capacity(k as usize);
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<u32> = line
            .split_whitespace()
            .map(|cell| ext.parse_elem(cell))
            .collect::<Result<_>>()?;
        if row.len() != n as usize {
            return Err(Error::Parse(format!(
                "expected {n} entries per row, got {}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != k as usize {
        return Err(Error::Parse(format!("expected {k} rows, got {}", rows.len())));
    }
    RepMatrix::new(base, ext, rows)
}

fn parse_header(line: &str, tag: &str) -> Result<(u32, usize)> {
    let v = parse_kv_header(line, tag, &["q", "n"])?;
    Ok((v[0], v[1] as usize))
}

fn parse_kv_header(line: &str, tag: &str, keys: &[&str]) -> Result<Vec<u32>> {
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(Error::Parse(format!("expected `{tag}` header")));
    }
    let mut out = Vec::with_capacity(keys.len());
    for key in keys {
        let tok = parts
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {key}= in header")))?;
        let val = tok
            .strip_prefix(&format!("{key}="))
            .and_then(|v| v.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse(format!("bad {key}= in header")))?;
        out.push(val);
    }
    if parts.next().is_some() {
        return Err(Error::Parse("trailing tokens in header".into()));
    }
    Ok(out)
}

/// Field literal used in report files, `GF(p)` or `GF(p^m)`.
pub fn field_literal(field: &Arc<FieldSpec>) -> String {
    field.literal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::uniform;
    use proptest::prelude::*;

    fn f2() -> Arc<FieldSpec> {
        FieldSpec::new(2, 1, None).unwrap()
    }

    #[test]
    fn qmatroid_round_trip_is_byte_identical() {
        let m = uniform(1, 2, f2()).unwrap();
        let text = write_qmatroid(&m);
        let back = read_qmatroid(&text).unwrap();
        assert_eq!(write_qmatroid(&back), text);
        assert_eq!(back.rank_table(), m.rank_table());
    }

    #[test]
    fn reader_rejects_out_of_order_lines() {
        let m = uniform(1, 2, f2()).unwrap();
        let text = write_qmatroid(&m);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.swap(1, 2);
        let bad = lines.join("\n");
        assert!(matches!(read_qmatroid(&bad), Err(Error::Parse(_))));
    }

    #[test]
    fn reader_rejects_axiom_violations() {
        let m = uniform(1, 2, f2()).unwrap();
        let text = write_qmatroid(&m);
        // corrupt the zero-space rank
        let bad = text.replacen("0 0 -", "1 0 -", 1);
        assert!(matches!(read_qmatroid(&bad), Err(Error::AxiomsFailed(_))));
    }

    #[test]
    fn repmatrix_round_trip() {
        let base = f2();
        let ext = FieldSpec::new(2, 3, None).unwrap();
        let rep = RepMatrix::new(
            base,
            ext,
            vec![vec![1, 2, 0, 0], vec![0, 0, 1, 7]],
        )
        .unwrap();
        let text = write_repmatrix(&rep);
        assert!(text.starts_with("repmatrix q=2 m=3 k=2 n=4\n"));
        assert!(text.contains("001 010 000 000"));
        let back = read_repmatrix(&text).unwrap();
        assert_eq!(back.rows(), rep.rows());
        assert_eq!(write_repmatrix(&back), text);
    }

    proptest! {
        #[test]
        fn random_valid_tables_round_trip(seed in 0u64..500) {
            use rand::SeedableRng;
            let lattice = enumerate_lattice(f2(), 3).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let table = crate::matroid::random_rank_table(&lattice, &mut rng);
            let m = QMatroid::from_rank_table(lattice, table).unwrap();
            let text = write_qmatroid(&m);
            let back = read_qmatroid(&text).unwrap();
            prop_assert_eq!(back.rank_table(), m.rank_table());
            prop_assert_eq!(write_qmatroid(&back), text);
        }
    }
}
