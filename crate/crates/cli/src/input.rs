//! Parsing of command-line values into core types.

use flagcx_core::gtangent::{BlockKind, GcsBlock};
use flagcx_core::rootsys::{parse_theta, Family, FlagSpec, LieType};
use flagcx_core::scalar::{parse_q, Q};

use crate::fail::CliError;

/// Accepts `--type D --rank 4` as well as `--type D4`.
pub fn lie_type(ty: &str, rank: Option<usize>) -> Result<LieType, CliError> {
    let ty = ty.trim();
    let split = ty.find(|c: char| c.is_ascii_digit()).unwrap_or(ty.len());
    let (fam, digits) = ty.split_at(split);
    let family: Family = fam.parse().map_err(CliError::from)?;
    let rank = match (rank, digits) {
        (Some(r), "") => r,
        (None, "") => return Err(CliError::Usage(format!("type {ty:?} needs --rank"))),
        (r, d) => {
            let parsed: usize = d
                .parse()
                .map_err(|_| CliError::Usage(format!("1:{}: bad rank in {ty:?}", split + 1)))?;
            if let Some(r) = r.filter(|&r| r != parsed) {
                return Err(CliError::Usage(format!("--type {ty} disagrees with --rank {r}")));
            }
            parsed
        }
    };
    LieType::new(family, rank).map_err(CliError::from)
}

pub fn flag(ty: &str, rank: Option<usize>, theta: &str) -> Result<FlagSpec, CliError> {
    let lt = lie_type(ty, rank)?;
    let full = FlagSpec::from_type(lt, &[])?;
    let idx = parse_theta(full.root_system(), theta).map_err(|e| CliError::Usage(format!("theta {e}")))?;
    if idx.is_empty() {
        return Ok(full);
    }
    Ok(FlagSpec::new(full.root_system_arc(), &idx)?)
}

fn comma_pieces(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut col = 1;
    for piece in s.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        out.push((col + lead, piece.trim()));
        col += piece.chars().count() + 1;
    }
    out
}

/// Comma-separated `c`, `nc` or `g`, one per class.
pub fn combination(s: &str) -> Result<Vec<BlockKind>, CliError> {
    comma_pieces(s)
        .into_iter()
        .map(|(col, p)| {
            BlockKind::parse(p).ok_or_else(|| {
                CliError::Usage(format!("combination 1:{col}: expected c, nc or g, found {p:?}"))
            })
        })
        .collect()
}

fn rational(col: usize, s: &str) -> Result<Q, CliError> {
    parse_q(s).ok_or_else(|| CliError::Usage(format!("blocks 1:{col}: {s:?} is not an exact rational")))
}

/// Blocks `nc:a:x[:y]` and `c:b:c`, one per class. Values are exact
/// rationals such as `-3/2`.
pub fn blocks(s: &str) -> Result<Vec<GcsBlock>, CliError> {
    let mut out = Vec::new();
    for (col, piece) in comma_pieces(s) {
        let fields: Vec<&str> = piece.split(':').collect();
        let mut vals = Vec::new();
        let mut c = col + fields[0].chars().count() + 1;
        for f in &fields[1..] {
            vals.push(rational(c, f)?);
            c += f.chars().count() + 1;
        }
        let blk = match (fields[0].trim(), vals.as_slice()) {
            ("c", [b, cc]) => GcsBlock::complex(b.clone(), cc.clone())?,
            ("nc", [a, x]) => GcsBlock::noncomplex(a.clone(), x.clone())?,
            ("nc", [a, x, y]) => {
                let blk = GcsBlock::NonComplexType { a: a.clone(), x: x.clone(), y: y.clone() };
                blk.validate()?;
                blk
            }
            _ => {
                return Err(CliError::Usage(format!(
                    "blocks 1:{col}: expected nc:a:x[:y] or c:b:c, found {piece:?}"
                )))
            }
        };
        out.push(blk);
    }
    Ok(out)
}
