//! Pencil serialization: a lossless JSON format and the SDPA sparse format
//! consumed by semidefinite-programming solvers, plus the linear-forms text
//! file read by the derivative-cone command.
//!
//! Output is canonical: matrices ordered by variable, entries ordered by
//! (row, col) over the upper triangle, and struct fields serialized in a
//! fixed order, so identical inputs produce identical bytes.

use std::str::FromStr;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pencil::{LinearFormsSystem, Pencil, Provenance, SymIntMatrix};
use crate::util::{ones, parse_rational, to_decimal_string};
use crate::{Int, Rat};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct PencilFile {
    pub schema_version: u32,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub provenance: ProvenanceFile,
    pub matrices: Vec<MatrixFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct ProvenanceFile {
    pub kind: String,
    pub base_n: usize,
    pub deleted_vertex: String,
    pub vertex_order: Vec<String>,
    /// Determinant constant as exact numerator/denominator strings.
    pub constant_num: String,
    pub constant_den: String,
    pub scale: String,
}

#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct MatrixFile {
    /// 1-based variable index `j` of `B_j`.
    pub var_index: usize,
    /// Upper-triangle entries `[row, col, value]`, 1-based, `row <= col`.
    pub entries: Vec<(usize, usize, i64)>,
}

fn int_to_i64(v: &Int, what: &'static str) -> Result<i64> {
    v.to_i64().ok_or(Error::IntOverflow(what))
}

impl PencilFile {
    pub fn from_pencil(p: &Pencil) -> Result<Self> {
        let prov = p.provenance();
        let mut matrices = Vec::with_capacity(p.n());
        for (j, b) in p.matrices().iter().enumerate() {
            let mut entries = Vec::new();
            for (&(r, c), v) in b.entries() {
                entries.push((r + 1, c + 1, int_to_i64(v, "serializing a pencil entry")?));
            }
            matrices.push(MatrixFile {
                var_index: j + 1,
                entries,
            });
        }
        Ok(PencilFile {
            schema_version: SCHEMA_VERSION,
            n: p.n(),
            k: p.k(),
            m: p.m(),
            provenance: ProvenanceFile {
                kind: prov.kind.clone(),
                base_n: prov.base_n,
                deleted_vertex: prov.deleted_vertex.clone(),
                vertex_order: prov.vertex_order.clone(),
                constant_num: prov.constant.numer().to_string(),
                constant_den: prov.constant.denom().to_string(),
                scale: prov.scale.to_string(),
            },
            matrices,
        })
    }

    pub fn into_pencil(self) -> Result<Pencil> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let parse_int = |s: &str| -> Result<Int> {
            Int::from_str(s).map_err(|_| Error::Parse(format!("bad integer {s:?}")))
        };
        let constant = Rat::new(
            parse_int(&self.provenance.constant_num)?,
            parse_int(&self.provenance.constant_den)?,
        );
        let provenance = Provenance {
            kind: self.provenance.kind,
            base_n: self.provenance.base_n,
            deleted_vertex: self.provenance.deleted_vertex,
            vertex_order: self.provenance.vertex_order,
            constant,
            scale: parse_int(&self.provenance.scale)?,
        };
        let mut matrices = vec![SymIntMatrix::zeros(self.m); self.n];
        let mut seen = vec![false; self.n];
        for mf in self.matrices {
            if mf.var_index < 1 || mf.var_index > self.n {
                return Err(Error::Parse(format!(
                    "var_index {} out of range 1..={}",
                    mf.var_index, self.n
                )));
            }
            if seen[mf.var_index - 1] {
                return Err(Error::Parse(format!(
                    "duplicate var_index {}",
                    mf.var_index
                )));
            }
            seen[mf.var_index - 1] = true;
            let b = &mut matrices[mf.var_index - 1];
            for (r, c, v) in mf.entries {
                if r < 1 || c < 1 || r > self.m || c > self.m || r > c {
                    return Err(Error::Parse(format!(
                        "entry ({r},{c}) out of range for m={}",
                        self.m
                    )));
                }
                b.add(r - 1, c - 1, &Int::from(v));
            }
        }
        if !seen.iter().all(|&s| s) {
            return Err(Error::Parse("missing matrices for some variables".into()));
        }
        Pencil::from_parts(self.n, self.k, self.m, matrices, provenance)
    }
}

/// Canonical pretty-printed JSON for a pencil.
pub fn write_json(p: &Pencil) -> Result<String> {
    let file = PencilFile::from_pencil(p)?;
    let mut s = serde_json::to_string_pretty(&file)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn read_json(text: &str) -> Result<Pencil> {
    let file: PencilFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad pencil JSON: {e}")))?;
    file.into_pencil()
}

/// SDPA sparse format: one block of size `m`, variables `x_1..x_n`, entries
/// `j 1 r c v` for matrix `F_j` (the all-zero `F_0` is omitted so the
/// feasible set is the cone through the origin). Entries are integers, and
/// the objective must have a finite decimal rendering.
pub fn write_sdpa(p: &Pencil, objective: Option<&[Rat]>) -> Result<String> {
    let default_obj;
    let obj = match objective {
        Some(o) => {
            if o.len() != p.n() {
                return Err(Error::DimensionMismatch {
                    expected: p.n(),
                    got: o.len(),
                });
            }
            o
        }
        None => {
            default_obj = ones(p.n());
            &default_obj
        }
    };
    let prov = p.provenance();
    let mut out = String::new();
    out.push_str(&format!(
        "* esp-spectra pencil: n={} k={} m={} kind={}\n",
        p.n(),
        p.k(),
        p.m(),
        prov.kind
    ));
    out.push_str(&format!(
        "* det(sum_j x_j B_j) = ({}/{}) * factor product; scale={}\n",
        prov.constant.numer(),
        prov.constant.denom(),
        prov.scale
    ));
    out.push_str(&format!("{}\n", p.n()));
    out.push_str("1\n");
    out.push_str(&format!("{}\n", p.m()));
    let obj_strings: Vec<String> = obj.iter().map(to_decimal_string).collect::<Result<_>>()?;
    out.push_str(&obj_strings.join(" "));
    out.push('\n');
    for (j, b) in p.matrices().iter().enumerate() {
        for (&(r, c), v) in b.entries() {
            out.push_str(&format!("{} 1 {} {} {}\n", j + 1, r + 1, c + 1, v));
        }
    }
    Ok(out)
}

/// Parses the linear-forms text file: first line `d n`, then `d` rows of
/// `n` rationals, then the base point `e` (n rationals). Blank lines and
/// lines starting with `#` are ignored.
pub fn parse_forms_text(text: &str) -> Result<LinearFormsSystem> {
    let mut tokens = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .flat_map(str::split_whitespace);
    let mut next = |what: &str| -> Result<&str> {
        tokens
            .next()
            .ok_or_else(|| Error::Parse(format!("forms file ended while reading {what}")))
    };
    let d: usize = next("d")?
        .parse()
        .map_err(|_| Error::Parse("bad form count".into()))?;
    let n: usize = next("n")?
        .parse()
        .map_err(|_| Error::Parse("bad dimension".into()))?;
    if d == 0 || n == 0 {
        return Err(Error::Parse("forms file needs d >= 1 and n >= 1".into()));
    }
    let mut rows = Vec::with_capacity(d);
    for j in 0..d {
        let mut row = Vec::with_capacity(n);
        for i in 0..n {
            row.push(parse_rational(next(&format!("form {j} entry {i}"))?)?);
        }
        rows.push(row);
    }
    let mut base = Vec::with_capacity(n);
    for i in 0..n {
        base.push(parse_rational(next(&format!("base point entry {i}"))?)?);
    }
    if tokens.next().is_some() {
        return Err(Error::Parse("trailing data in forms file".into()));
    }
    LinearFormsSystem::new(rows, base)
}

/// Renders a forms system back to the text format (for round-trips and
/// generated examples).
pub fn forms_to_text(sys: &LinearFormsSystem) -> String {
    let mut out = format!("{} {}\n", sys.d(), sys.n());
    let fmt_rat = |v: &Rat| {
        if v.denom().is_one() {
            v.numer().to_string()
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    };
    for row in sys.rows() {
        let cells: Vec<String> = row.iter().map(fmt_rat).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    let cells: Vec<String> = sys.base().iter().map(fmt_rat).collect();
    out.push_str(&cells.join(" "));
    out.push('\n');
    out
}

/// Parses a comma-separated list of exact rationals (integers, `p/q`, or
/// finite decimals), the CLI point syntax.
pub fn parse_point(text: &str) -> Result<Vec<Rat>> {
    text.split(',')
        .map(|c| parse_rational(c.trim()))
        .collect()
}

/// A minimal SDPA sparse reader used to validate emitted files; parses the
/// structural header and entry lines.
pub struct SdpaSummary {
    pub num_vars: usize,
    pub num_blocks: usize,
    pub block_size: usize,
    pub objective: Vec<String>,
    /// `(matno, blkno, row, col, value)` per entry line.
    pub entries: Vec<(usize, usize, usize, usize, i64)>,
}

pub fn parse_sdpa(text: &str) -> Result<SdpaSummary> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with(['*', '"']));
    let mut next = |what: &str| -> Result<&str> {
        lines
            .next()
            .ok_or_else(|| Error::Parse(format!("sdpa file ended before {what}")))
    };
    let num_vars: usize = next("mDIM")?
        .trim()
        .parse()
        .map_err(|_| Error::Parse("bad mDIM".into()))?;
    let num_blocks: usize = next("nBLOCK")?
        .trim()
        .parse()
        .map_err(|_| Error::Parse("bad nBLOCK".into()))?;
    let block_size: usize = next("block sizes")?
        .trim()
        .parse()
        .map_err(|_| Error::Parse("bad block size".into()))?;
    let objective: Vec<String> = next("objective")?
        .split_whitespace()
        .map(str::to_string)
        .collect();
    let mut entries = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 5 {
            return Err(Error::Parse(format!("bad sdpa entry line: {line:?}")));
        }
        let parse = |s: &str| -> Result<i64> {
            s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
        };
        entries.push((
            parse(fields[0])? as usize,
            parse(fields[1])? as usize,
            parse(fields[2])? as usize,
            parse(fields[3])? as usize,
            parse(fields[4])?,
        ));
    }
    Ok(SdpaSummary {
        num_vars,
        num_blocks,
        block_size,
        objective,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rat_vec;
    use num_traits::Zero;

    #[test]
    fn json_round_trip_is_exact() {
        for (n, k) in [(3usize, 1usize), (4, 2)] {
            let p = Pencil::elementary(n, k).unwrap();
            let text = write_json(&p).unwrap();
            let back = read_json(&text).unwrap();
            assert_eq!(back, p, "({n},{k})");
            // and byte-for-byte stable
            assert_eq!(write_json(&back).unwrap(), text);
        }
    }

    #[test]
    fn json_round_trip_preserves_derivative_provenance() {
        let sys = LinearFormsSystem::new(
            vec![
                rat_vec(&[1, 0]),
                rat_vec(&[0, 1]),
                vec![Rat::new(1.into(), 2.into()), Rat::new(1.into(), 3.into())],
            ],
            rat_vec(&[1, 1]),
        )
        .unwrap();
        let p = Pencil::derivative_cone(&sys, 1).unwrap();
        let text = write_json(&p).unwrap();
        let back = read_json(&text).unwrap();
        assert_eq!(back, p);
        assert_eq!(back.provenance().kind, "derivative-cone");
        assert_eq!(back.provenance().scale, Int::from(6));
    }

    #[test]
    fn malformed_json_rejected() {
        assert!(read_json("{}").is_err());
        let p = Pencil::elementary(2, 1).unwrap();
        let mut file = PencilFile::from_pencil(&p).unwrap();
        file.schema_version = 99;
        let text = serde_json::to_string(&file).unwrap();
        assert!(read_json(&text).is_err());
        let mut file = PencilFile::from_pencil(&p).unwrap();
        file.matrices[0].entries.push((3, 1, 1)); // row > col and out of range
        let text = serde_json::to_string(&file).unwrap();
        assert!(read_json(&text).is_err());
    }

    #[test]
    fn sdpa_structure() {
        let p = Pencil::elementary(3, 1).unwrap();
        let text = write_sdpa(&p, None).unwrap();
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(parsed.num_vars, 3);
        assert_eq!(parsed.num_blocks, 1);
        assert_eq!(parsed.block_size, 4);
        assert_eq!(parsed.objective, vec!["1", "1", "1"]);
        // no F0 lines, all blocks are 1, upper triangle only
        for &(matno, blkno, r, c, _) in &parsed.entries {
            assert!(matno >= 1 && matno <= 3);
            assert_eq!(blkno, 1);
            assert!(r <= c && c <= 4 && r >= 1);
        }
        // entries reproduce the matrices
        for &(matno, _, r, c, v) in &parsed.entries {
            assert_eq!(
                p.matrices()[matno - 1].get(r - 1, c - 1),
                Int::from(v),
                "entry ({matno},{r},{c})"
            );
        }
    }

    #[test]
    fn sdpa_objective_rendering() {
        let p = Pencil::elementary(2, 1).unwrap();
        let obj = vec![Rat::new(1.into(), 4.into()), Rat::new((-3).into(), 2.into())];
        let text = write_sdpa(&p, Some(&obj)).unwrap();
        let parsed = parse_sdpa(&text).unwrap();
        assert_eq!(parsed.objective, vec!["0.25", "-1.5"]);
        // non-decimal objectives are rejected
        let bad = vec![Rat::new(1.into(), 3.into()), Rat::zero()];
        assert!(write_sdpa(&p, Some(&bad)).is_err());
    }

    #[test]
    fn forms_file_round_trip() {
        let text = "# three forms on R^2\n3 2\n1 0\n0 1\n1 1\n1 1\n";
        let sys = parse_forms_text(text).unwrap();
        assert_eq!(sys.d(), 3);
        assert_eq!(sys.n(), 2);
        let back = forms_to_text(&sys);
        let sys2 = parse_forms_text(&back).unwrap();
        assert_eq!(sys, sys2);
        // inadmissible base point
        let bad = "1 2\n1 -1\n1 1\n";
        assert!(matches!(
            parse_forms_text(bad),
            Err(Error::InadmissibleBasePoint { .. })
        ));
        assert!(parse_forms_text("2 2\n1 0\n").is_err());
    }

    #[test]
    fn point_parsing() {
        let p = parse_point("1, -2/5, 0.25").unwrap();
        assert_eq!(p[0], rat_vec(&[1])[0]);
        assert_eq!(p[1], Rat::new((-2).into(), 5.into()));
        assert_eq!(p[2], Rat::new(1.into(), 4.into()));
        assert!(parse_point("1,,2").is_err());
    }
}
