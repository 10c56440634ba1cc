//! JSON rendering. Rationals are `"p/q"` strings and Gaussian rationals are
//! `{"re", "im"}` objects so that nothing is rounded on the way out.

use flagcx_core::btransform::BField;
use flagcx_core::courant::{Witness, WitnessKind, WitnessValue};
use flagcx_core::gtangent::{GVector, GcsBlock};
use flagcx_core::linalg::QMatrix;
use flagcx_core::rootsys::{FlagSpec, Root};
use flagcx_core::scalar::{fmt_q, GQ, Q};
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

pub struct Report {
    pub command: &'static str,
    pub flag: Value,
    pub payload: Value,
    pub seed: Option<u64>,
}

impl Report {
    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "flag": self.flag,
            "seed": self.seed,
            "payload": self.payload,
        })
    }
}

pub fn rational(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn gaussian(x: &GQ) -> Value {
    json!({ "re": fmt_q(&x.re), "im": fmt_q(&x.im) })
}

pub fn matrix(m: &QMatrix) -> Value {
    (0..m.rows()).map(|i| m.row(i).iter().map(rational).collect::<Value>()).collect()
}

pub fn root(fs: &FlagSpec, r: &Root) -> Value {
    Value::String(fs.root_system().notation(r))
}

pub fn roots(fs: &FlagSpec, rs: &[Root]) -> Value {
    rs.iter().map(|r| root(fs, r)).collect()
}

pub fn flag(fs: &FlagSpec) -> Value {
    let lt = fs.lie_type();
    json!({
        "type": lt.to_string(),
        "family": lt.family.to_string(),
        "rank": lt.rank,
        "theta": fs.theta().iter().map(|i| i + 1).collect::<Vec<_>>(),
        "theta_roots": roots(fs, &fs.theta_roots()),
        "complement": roots(fs, fs.complement_roots()),
        "dim": fs.dim(),
    })
}

/// Name of coordinate `k` of `𝔫⁻ ⊕ (𝔫⁻)*`.
pub fn slot(fs: &FlagSpec, k: usize) -> String {
    let n = fs.dim();
    let r = fs.root_system().notation(&fs.complement_roots()[k % n]);
    if k < n {
        format!("X_{{{r}}}")
    } else {
        format!("X*_{{{r}}}")
    }
}

pub fn vector(fs: &FlagSpec, v: &GVector) -> Value {
    v.nonzero().map(|(k, c)| json!({ "slot": slot(fs, k), "coeff": gaussian(c) })).collect()
}

pub fn block(blk: &GcsBlock) -> Value {
    match blk {
        GcsBlock::ComplexType { b, c } => json!({ "kind": "c", "b": rational(b), "c": rational(c) }),
        GcsBlock::NonComplexType { a, x, y } => {
            json!({ "kind": "nc", "a": rational(a), "x": rational(x), "y": rational(y) })
        }
        GcsBlock::GeneralBlock { matrix: m } => json!({ "kind": "g", "matrix": matrix(m) }),
    }
}

pub fn bfield(fs: &FlagSpec, b: &BField) -> Value {
    b.coeffs()
        .iter()
        .map(|(&(i, j), r)| {
            let cr = fs.complement_roots();
            json!({ "pair": [root(fs, &cr[i]), root(fs, &cr[j])], "coeff": rational(r) })
        })
        .collect()
}

pub fn witness(fs: &FlagSpec, w: &Witness) -> Value {
    let kind = match w.kind {
        WitnessKind::PairNotInL => "pair_not_in_L",
        WitnessKind::NijNonzero => "nij_nonzero",
    };
    let value = match &w.value {
        WitnessValue::Scalar(x) => json!({ "scalar": gaussian(x) }),
        WitnessValue::Residual(r) => json!({ "residual": vector(fs, r) }),
    };
    json!({
        "kind": kind,
        "indices": w.indices,
        "elements": w.elements.iter().map(|e| vector(fs, e)).collect::<Vec<_>>(),
        "value": value,
    })
}
