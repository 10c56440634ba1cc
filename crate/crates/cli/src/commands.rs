use flagcx_core::btransform::{
    canonical_form, hermitian_pair, metric_moduli, metric_normal_form, moduli_coordinates, pure_spinor,
    random_hermitian_partner, annihilator_dim, HermitianVerdict, InvalidReason, ModuliCoordinate,
};
use flagcx_core::chevalley::build_structure_constants;
use flagcx_core::courant::{CourantAlgebra, Verdict, Witness};
use flagcx_core::gtangent::{
    all_combinations, assemble, random_combination, random_gacs, BlockKind, GcsBlock, InvariantGacs,
};
use flagcx_core::mclass::{compute_classes, decide_existence};
use flagcx_core::rootsys::{Family, FlagSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::fail::CliError;
use crate::report;

pub fn classify(fs: &FlagSpec) -> Value {
    let r = decide_existence(fs);
    let classes: Vec<Value> = r
        .classes
        .iter()
        .map(|c| {
            json!({
                "representative": report::root(fs, &c.representative),
                "members": report::roots(fs, &c.members),
                "size": c.len(),
                "even": c.len() % 2 == 0,
            })
        })
        .collect();
    json!({
        "class_count": classes.len(),
        "class_sizes": r.classes.iter().map(|c| c.len()).collect::<Vec<_>>(),
        "classes": classes,
        "admits_gacs": r.admits_gacs,
        "gm2": r.gm2,
    })
}

pub enum Selection {
    Fixed(Vec<BlockKind>),
    All,
    Random,
}

/// Outcome of a sweep; `contradiction` is set when the theorem applies and a
/// sample came out integrable.
pub struct Certification {
    pub payload: Value,
    pub contradiction: bool,
}

/// C₄ and D₄ fall outside the theorem and are only explored.
fn exploratory(fs: &FlagSpec, gm2: bool) -> bool {
    let lt = fs.lie_type();
    !gm2 || (lt.rank == 4 && matches!(lt.family, Family::C | Family::D))
}

fn checked(ca: &CourantAlgebra, j: &InvariantGacs, w: &Witness) -> Result<(), CliError> {
    if w.reverify(ca, j)? {
        Ok(())
    } else {
        Err(CliError::Invariant("witness failed re-verification".into()))
    }
}

pub fn certify(
    fs: &FlagSpec,
    selection: Selection,
    samples: usize,
    seed: u64,
    pool: &rayon::ThreadPool,
) -> Result<Certification, CliError> {
    if !fs.is_maximal() {
        return Err(CliError::Usage("certify needs the maximal flag (empty theta)".into()));
    }
    let ex = decide_existence(fs);
    if !ex.admits_gacs {
        return Err(CliError::Usage(format!("{} admits no invariant structure (odd class)", fs.lie_type())));
    }
    let explore = exploratory(fs, ex.gm2);
    let classes = compute_classes(fs);
    let combos: Vec<Option<Vec<BlockKind>>> = match selection {
        Selection::Fixed(c) => {
            if c.len() != classes.len() {
                return Err(CliError::Usage(format!(
                    "combination has {} entries but there are {} classes",
                    c.len(),
                    classes.len()
                )));
            }
            vec![Some(c)]
        }
        Selection::All => all_combinations(&classes).into_iter().map(Some).collect(),
        Selection::Random => vec![None],
    };
    let jobs: Vec<(usize, usize)> = (0..combos.len()).flat_map(|c| (0..samples).map(move |s| (c, s))).collect();
    let sc = build_structure_constants(fs.root_system_arc())?;
    let ca = CourantAlgebra::new(&sc, fs)?;
    let results: Vec<Result<(Value, bool), CliError>> = pool.install(|| {
        jobs.par_iter()
            .enumerate()
            .map(|(stream, &(ci, s))| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(stream as u64);
                let combo = match &combos[ci] {
                    Some(c) => c.clone(),
                    None => random_combination(&classes, &mut rng),
                };
                let j = random_gacs(fs, &combo, &mut rng)?;
                let verdict = ca.check_integrability(&j)?;
                let tags: Vec<&str> = combo.iter().map(|k| k.tag()).collect();
                let structure: Vec<Value> = j.blocks().iter().map(report::block).collect();
                let entry = match &verdict {
                    Verdict::Integrable => json!({
                        "combination": tags,
                        "sample": s,
                        "structure": structure,
                        "verdict": "integrable",
                    }),
                    Verdict::NotIntegrable { witness, nij_witness } => {
                        checked(&ca, &j, witness)?;
                        if let Some(w) = nij_witness {
                            checked(&ca, &j, w)?;
                        }
                        json!({
                            "combination": tags,
                            "sample": s,
                            "structure": structure,
                            "verdict": "not_integrable",
                            "witness": report::witness(fs, witness),
                            "nij_witness": nij_witness.as_ref().map(|w| report::witness(fs, w)),
                        })
                    }
                };
                Ok((entry, verdict.is_integrable()))
            })
            .collect()
    });
    let mut verdicts = Vec::with_capacity(results.len());
    let mut integrable = 0;
    for r in results {
        let (v, int) = r?;
        integrable += int as usize;
        verdicts.push(v);
    }
    let total = verdicts.len();
    let payload = json!({
        "exploratory": explore,
        "theorem_applies": !explore,
        "combinations": combos.len(),
        "samples_per_combination": samples,
        "summary": { "total": total, "not_integrable": total - integrable, "integrable": integrable },
        "verdicts": verdicts,
    });
    Ok(Certification { payload, contradiction: !explore && integrable > 0 })
}

/// Structure from explicit blocks, or a seeded random one of a combination.
pub fn structure(
    fs: &FlagSpec,
    blocks: Option<Vec<GcsBlock>>,
    combination: Option<Vec<BlockKind>>,
    seed: u64,
) -> Result<InvariantGacs, CliError> {
    match (blocks, combination) {
        (Some(b), None) => Ok(assemble(fs, b)?),
        (None, Some(c)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_gacs(fs, &c, &mut rng)?)
        }
        _ => Err(CliError::Usage("give exactly one of --blocks and --combination".into())),
    }
}

fn class_members(j: &InvariantGacs, k: usize) -> Value {
    report::roots(j.flag(), &j.classes()[k].members)
}

pub fn moduli(j: &InvariantGacs) -> Result<Value, CliError> {
    let fs = j.flag();
    let coords = moduli_coordinates(j)?;
    let (j0, b) = canonical_form(j)?;
    let coordinates: Vec<Value> = coords
        .iter()
        .enumerate()
        .map(|(k, c)| match c {
            ModuliCoordinate::Symplectic { x } => {
                json!({ "class": class_members(j, k), "kind": "symplectic", "x": report::rational(x) })
            }
            ModuliCoordinate::Complex { c, b } => json!({
                "class": class_members(j, k),
                "kind": "complex",
                "c": report::rational(c),
                "b": report::rational(b),
            }),
        })
        .collect();
    Ok(json!({
        "structure": j.blocks().iter().map(report::block).collect::<Vec<_>>(),
        "coordinates": coordinates,
        "canonical": {
            "structure": j0.blocks().iter().map(report::block).collect::<Vec<_>>(),
            "b_field": report::bfield(fs, &b),
        },
    }))
}

pub fn spinor(j: &InvariantGacs) -> Result<Value, CliError> {
    let fs = j.flag();
    let s = pure_spinor(j)?;
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(&bits, c)| {
            let forms: Vec<String> = (0..fs.dim()).filter(|k| bits >> k & 1 == 1).map(|k| report::slot(fs, k + fs.dim())).collect();
            json!({ "forms": forms, "coeff": report::gaussian(c) })
        })
        .collect();
    Ok(json!({
        "structure": j.blocks().iter().map(report::block).collect::<Vec<_>>(),
        "degree": s.degree(),
        "degrees": s.degrees(),
        "term_count": terms.len(),
        "terms": terms,
        "annihilator_dim": annihilator_dim(fs, &s)?,
    }))
}

pub fn hermitian_partner(j: &InvariantGacs, seed: u64) -> Result<InvariantGacs, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_hermitian_partner(j, &mut rng)?)
}

pub fn hermitian(j: &InvariantGacs, j2: &InvariantGacs) -> Result<Value, CliError> {
    let fs = j.flag();
    let mut failing = Vec::new();
    let per_class: Vec<Value> = j
        .blocks()
        .iter()
        .zip(j2.blocks())
        .enumerate()
        .map(|(k, pair)| {
            let cx = match pair {
                (GcsBlock::ComplexType { c, .. }, GcsBlock::NonComplexType { x, .. })
                | (GcsBlock::NonComplexType { x, .. }, GcsBlock::ComplexType { c, .. }) => Some((c, x)),
                _ => None,
            };
            let mut v = json!({ "class": class_members(j, k), "kinds": [pair.0.kind().tag(), pair.1.kind().tag()] });
            if let Some((c, x)) = cx {
                let pos = (c * x) > flagcx_core::scalar::q(0);
                if !pos {
                    failing.push(k);
                }
                v["c"] = report::rational(c);
                v["x"] = report::rational(x);
                v["cx_positive"] = json!(pos);
            }
            v
        })
        .collect();
    let verdict = hermitian_pair(j, j2)?;
    let mut out = json!({
        "structure": j.blocks().iter().map(report::block).collect::<Vec<_>>(),
        "partner": j2.blocks().iter().map(report::block).collect::<Vec<_>>(),
        "classes": per_class,
        "valid": verdict.is_valid(),
    });
    match verdict {
        HermitianVerdict::Invalid { reason } => {
            let code = match reason {
                InvalidReason::NotCommuting => "not_commuting",
                InvalidReason::NotPositive => "not_positive",
            };
            let mut r = json!({ "code": code, "message": reason.to_string() });
            if !failing.is_empty() {
                r["condition"] = json!("cx>0");
                r["failing_classes"] = json!(failing);
            }
            out["reason"] = r;
        }
        HermitianVerdict::Valid { metric } => {
            let nf = metric_normal_form(&metric)?;
            out["metric"] = json!({
                "matrix": report::matrix(metric.matrix()),
                "riemannian": report::matrix(&nf.riemannian),
                "b_field": report::bfield(fs, &nf.b),
            });
            if let Ok(m) = metric_moduli(fs) {
                out["metric_moduli"] = json!({ "factors": m.factors(), "space": m.to_string() });
            }
        }
    }
    Ok(out)
}
