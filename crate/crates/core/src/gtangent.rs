//! The complexified generalized tangent space 𝔫⁻ ⊕ (𝔫⁻)* at the origin of a
//! flag, and invariant generalized almost complex structures on it.
//!
//! Coordinates: index `i < n` is `X_{r_i}`, index `n + i` is `X*_{r_i}`,
//! where `r` is the ordered complement list of the flag.

use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{split_form, GMatrix, QMatrix};
use crate::mclass::{compute_classes, MClass};
use crate::rootsys::FlagSpec;
use crate::scalar::{q, qf, GQ, Q};

#[derive(Clone, PartialEq, Eq)]
pub struct GVector {
    flag: u64,
    coeffs: Vec<GQ>,
}

impl GVector {
    pub fn zero(fs: &FlagSpec) -> Self {
        GVector { flag: fs.key(), coeffs: vec![GQ::zero(); 2 * fs.dim()] }
    }

    pub fn from_coeffs(fs: &FlagSpec, coeffs: Vec<GQ>) -> Result<Self> {
        if coeffs.len() != 2 * fs.dim() {
            return Err(Error::DimensionMismatch { expected: 2 * fs.dim(), got: coeffs.len() });
        }
        Ok(GVector { flag: fs.key(), coeffs })
    }

    /// Basis vector: `X_{r_k}` for `k < n`, `X*_{r_{k-n}}` otherwise.
    pub fn basis(fs: &FlagSpec, k: usize) -> Self {
        let mut v = GVector::zero(fs);
        v.coeffs[k] = GQ::one();
        v
    }

    pub fn tangent(fs: &FlagSpec, i: usize) -> Self {
        GVector::basis(fs, i)
    }

    pub fn cotangent(fs: &FlagSpec, i: usize) -> Self {
        GVector::basis(fs, fs.dim() + i)
    }

    pub fn flag_key(&self) -> u64 {
        self.flag
    }

    /// dim 𝔫⁻.
    pub fn n(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn coeffs(&self) -> &[GQ] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<GQ> {
        self.coeffs
    }

    pub fn get(&self, k: usize) -> &GQ {
        &self.coeffs[k]
    }

    pub fn set(&mut self, k: usize, x: GQ) {
        self.coeffs[k] = x;
    }

    pub fn add_at(&mut self, k: usize, x: &GQ) {
        self.coeffs[k] += x;
    }

    pub fn tangent_part(&self) -> &[GQ] {
        &self.coeffs[..self.n()]
    }

    pub fn cotangent_part(&self) -> &[GQ] {
        &self.coeffs[self.n()..]
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &GQ)> {
        self.coeffs.iter().enumerate().filter(|(_, x)| !x.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn same_flag(&self, o: &GVector) -> Result<()> {
        if self.flag != o.flag || self.coeffs.len() != o.coeffs.len() {
            return Err(Error::FlagMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &GVector) -> Result<GVector> {
        self.same_flag(o)?;
        Ok(GVector { flag: self.flag, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, o: &GVector) -> Result<GVector> {
        self.same_flag(o)?;
        Ok(GVector { flag: self.flag, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, s: &GQ) -> GVector {
        GVector { flag: self.flag, coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn conj(&self) -> GVector {
        GVector { flag: self.flag, coeffs: self.coeffs.iter().map(GQ::conj).collect() }
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(GQ::is_real)
    }
}

impl fmt::Debug for GVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let terms: Vec<String> = self
            .nonzero()
            .map(|(k, c)| if k < n { format!("({c})X{k}") } else { format!("({c})X*{}", k - n) })
            .collect();
        write!(f, "[{}]", terms.join(" + "))
    }
}

/// The split pairing `⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))`.
pub fn pairing_q(u: &GVector, v: &GVector) -> Result<GQ> {
    u.same_flag(v)?;
    let n = u.n();
    let mut s = GQ::zero();
    for (k, a) in u.nonzero() {
        let other = if k < n { k + n } else { k - n };
        let b = &v.coeffs[other];
        if !b.is_zero() {
            s += &(a * b);
        }
    }
    Ok(s.scale(&qf(1, 2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BlockKind {
    Complex,
    NonComplex,
    General,
}

impl BlockKind {
    pub fn tag(self) -> &'static str {
        match self {
            BlockKind::Complex => "c",
            BlockKind::NonComplex => "nc",
            BlockKind::General => "g",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "c" => Some(BlockKind::Complex),
            "nc" => Some(BlockKind::NonComplex),
            "g" => Some(BlockKind::General),
            _ => None,
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Structure on one class space `V ⊕ V*`, in the basis
/// `(X_{m_1}, …, X_{m_k}, X*_{m_1}, …, X*_{m_k})` of the class members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GcsBlock {
    ComplexType { b: Q, c: Q },
    NonComplexType { a: Q, x: Q, y: Q },
    GeneralBlock { matrix: QMatrix },
}

impl GcsBlock {
    pub fn complex(b: Q, c: Q) -> Result<Self> {
        let blk = GcsBlock::ComplexType { b, c };
        blk.validate()?;
        Ok(blk)
    }

    /// Noncomplex block with `y = (a² + 1)/x`.
    pub fn noncomplex(a: Q, x: Q) -> Result<Self> {
        if x.is_zero() {
            return Err(Error::InvariantViolation("x ≠ 0".into()));
        }
        let y = (&a * &a + q(1)) / &x;
        Ok(GcsBlock::NonComplexType { a, x, y })
    }

    /// The symplectic block `J_ω`, ω = (1/x) X*_α∧X*_β.
    pub fn symplectic(x: Q) -> Result<Self> {
        GcsBlock::noncomplex(q(0), x)
    }

    pub fn kind(&self) -> BlockKind {
        match self {
            GcsBlock::ComplexType { .. } => BlockKind::Complex,
            GcsBlock::NonComplexType { .. } => BlockKind::NonComplex,
            GcsBlock::GeneralBlock { .. } => BlockKind::General,
        }
    }

    /// Dimension of the class space `V`.
    pub fn dim_v(&self) -> usize {
        match self {
            GcsBlock::GeneralBlock { matrix } => matrix.rows() / 2,
            _ => 2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GcsBlock::ComplexType { c, .. } => {
                if c.is_zero() {
                    return Err(Error::InvariantViolation("c ≠ 0".into()));
                }
            }
            GcsBlock::NonComplexType { a, x, y } => {
                if x.is_zero() {
                    return Err(Error::InvariantViolation("x ≠ 0".into()));
                }
                if a * a != x * y - q(1) {
                    return Err(Error::InvariantViolation(format!("a² = xy − 1 fails for a={a}, x={x}, y={y}")));
                }
            }
            GcsBlock::GeneralBlock { matrix } => {
                if !matrix.is_square() || matrix.rows() % 2 != 0 {
                    return Err(Error::InvariantViolation("block matrix must be 2k×2k".into()));
                }
            }
        }
        let m = self.matrix();
        if !m.mul(&m).neg().is_identity() {
            return Err(Error::InvariantViolation("J² = −I fails".into()));
        }
        // with J² = −I, orthogonality is the same as QJ being antisymmetric
        if !split_antisymmetric(&m) {
            return Err(Error::InvariantViolation("JᵀQJ = Q fails".into()));
        }
        Ok(())
    }

    pub fn matrix(&self) -> QMatrix {
        let z = q(0);
        match self {
            GcsBlock::ComplexType { b, c } => {
                let t = -(q(1) + b * b) / c;
                QMatrix::from_rows(vec![
                    vec![b.clone(), t.clone(), z.clone(), z.clone()],
                    vec![c.clone(), -b.clone(), z.clone(), z.clone()],
                    vec![z.clone(), z.clone(), -b.clone(), -c.clone()],
                    vec![z.clone(), z.clone(), -t, b.clone()],
                ])
            }
            GcsBlock::NonComplexType { a, x, y } => QMatrix::from_rows(vec![
                vec![a.clone(), z.clone(), z.clone(), -x.clone()],
                vec![z.clone(), a.clone(), x.clone(), z.clone()],
                vec![z.clone(), -y.clone(), -a.clone(), z.clone()],
                vec![y.clone(), z.clone(), z.clone(), -a.clone()],
            ]),
            GcsBlock::GeneralBlock { matrix } => matrix.clone(),
        }
    }

    /// Recognizes the two structured 4×4 shapes; anything else is general.
    pub fn from_matrix(m: QMatrix) -> GcsBlock {
        if m.rows() == 4 && m.cols() == 4 {
            let b = m[(0, 0)].clone();
            let c = m[(1, 0)].clone();
            if !c.is_zero() {
                let cand = GcsBlock::ComplexType { b, c };
                if cand.matrix() == m {
                    return cand;
                }
            }
            let a = m[(0, 0)].clone();
            let x = m[(1, 2)].clone();
            let y = m[(3, 0)].clone();
            if !x.is_zero() {
                let cand = GcsBlock::NonComplexType { a, x, y };
                if cand.matrix() == m {
                    return cand;
                }
            }
        }
        GcsBlock::GeneralBlock { matrix: m }
    }

    /// Basis of the +i eigenspace in local class coordinates.
    pub fn plus_i_vectors(&self) -> Vec<Vec<GQ>> {
        let r = |x: &Q| GQ::real(x.clone());
        let zero = GQ::zero;
        match self {
            GcsBlock::ComplexType { b, c } => {
                let bi = GQ::new(b.clone(), q(1));
                vec![
                    vec![bi.clone(), r(c), zero(), zero()],
                    vec![zero(), zero(), r(&-c.clone()), bi],
                ]
            }
            GcsBlock::NonComplexType { a, x, .. } => {
                let ai = GQ::new(a.clone(), q(-1));
                vec![
                    vec![r(x), zero(), zero(), ai.clone()],
                    vec![zero(), r(&-x.clone()), ai, zero()],
                ]
            }
            GcsBlock::GeneralBlock { matrix } => general_plus_i(matrix),
        }
    }
}

/// Since `J² = −I`, the columns `J e_m + i e_m` lie in `L`. The first `k` of
/// them are independent whenever the cotangent-tangent block of `J` is
/// invertible; otherwise fall back to the null space of `J − iI`.
fn general_plus_i(j: &QMatrix) -> Vec<Vec<GQ>> {
    let k = j.rows() / 2;
    if j.submatrix(k, 0, k, k).rank() == k {
        return (0..k)
            .map(|m| {
                (0..2 * k)
                    .map(|r| {
                        let im = if r == m { q(1) } else { q(0) };
                        GQ::new(j[(r, m)].clone(), im)
                    })
                    .collect()
            })
            .collect();
    }
    let shifted = j.to_gaussian().sub(&GMatrix::identity(2 * k).scale(&GQ::i()));
    shifted.nullspace()
}

/// An invariant structure: one block per M-class of the flag.
#[derive(Debug, Clone)]
pub struct InvariantGacs {
    flag: FlagSpec,
    classes: Vec<MClass>,
    members: Vec<Vec<usize>>,
    blocks: Vec<GcsBlock>,
}

impl PartialEq for InvariantGacs {
    fn eq(&self, o: &Self) -> bool {
        self.flag == o.flag && self.blocks == o.blocks
    }
}

/// Builds and validates the block sum; `blocks` follows `compute_classes` order.
pub fn assemble(flag: &FlagSpec, blocks: Vec<GcsBlock>) -> Result<InvariantGacs> {
    let classes = compute_classes(flag);
    if blocks.len() != classes.len() {
        return Err(Error::MissingClass { expected: classes.len(), got: blocks.len() });
    }
    for (k, (cls, blk)) in classes.iter().zip(&blocks).enumerate() {
        if cls.len() % 2 != 0 {
            return Err(Error::OddClass { class: k, size: cls.len() });
        }
        if blk.dim_v() != cls.len() {
            return Err(Error::InvariantViolation(format!(
                "block {k} acts on dimension {} but the class has {} roots",
                blk.dim_v(),
                cls.len()
            )));
        }
        blk.validate()?;
    }
    let members = classes
        .iter()
        .map(|c| c.members.iter().map(|r| flag.complement_index(r).unwrap()).collect())
        .collect();
    Ok(InvariantGacs { flag: flag.clone(), classes, members, blocks })
}

impl InvariantGacs {
    pub fn flag(&self) -> &FlagSpec {
        &self.flag
    }

    pub fn classes(&self) -> &[MClass] {
        &self.classes
    }

    pub fn blocks(&self) -> &[GcsBlock] {
        &self.blocks
    }

    /// Complement indices of each class's members.
    pub fn class_indices(&self) -> &[Vec<usize>] {
        &self.members
    }

    pub fn kinds(&self) -> Vec<BlockKind> {
        self.blocks.iter().map(GcsBlock::kind).collect()
    }

    /// Global coordinate positions of a class: tangent slots then cotangent slots.
    pub fn class_slots(&self, k: usize) -> Vec<usize> {
        let n = self.flag.dim();
        let m = &self.members[k];
        m.iter().copied().chain(m.iter().map(|i| i + n)).collect()
    }

    /// The full `2n × 2n` matrix.
    pub fn matrix(&self) -> QMatrix {
        let n = self.flag.dim();
        let mut j = QMatrix::zeros(2 * n, 2 * n);
        for (k, blk) in self.blocks.iter().enumerate() {
            let slots = self.class_slots(k);
            let m = blk.matrix();
            for (a, &ga) in slots.iter().enumerate() {
                for (b, &gb) in slots.iter().enumerate() {
                    j[(ga, gb)] = m[(a, b)].clone();
                }
            }
        }
        j
    }

    /// Restricts the full matrix to each class space and re-reads the blocks.
    pub fn decompose(&self) -> Vec<GcsBlock> {
        decompose_matrix(&self.matrix(), self)
    }

    /// `J v`, extended complex-linearly.
    pub fn apply(&self, v: &GVector) -> Result<GVector> {
        if v.flag_key() != self.flag.key() {
            return Err(Error::FlagMismatch);
        }
        let mut out = GVector::zero(&self.flag);
        for (k, blk) in self.blocks.iter().enumerate() {
            let slots = self.class_slots(k);
            if slots.iter().all(|&s| v.get(s).is_zero()) {
                continue;
            }
            let m = blk.matrix();
            for (a, &ga) in slots.iter().enumerate() {
                let mut s = GQ::zero();
                for (b, &gb) in slots.iter().enumerate() {
                    let x = &m[(a, b)];
                    let y = v.get(gb);
                    if !x.is_zero() && !y.is_zero() {
                        s += &y.scale(x);
                    }
                }
                out.set(ga, s);
            }
        }
        Ok(out)
    }

    pub fn with_blocks(&self, blocks: Vec<GcsBlock>) -> Result<InvariantGacs> {
        assemble(&self.flag, blocks)
    }
}

pub(crate) fn decompose_matrix(full: &QMatrix, j: &InvariantGacs) -> Vec<GcsBlock> {
    (0..j.blocks.len())
        .map(|k| {
            let slots = j.class_slots(k);
            let mut m = QMatrix::zeros(slots.len(), slots.len());
            for (a, &ga) in slots.iter().enumerate() {
                for (b, &gb) in slots.iter().enumerate() {
                    m[(a, b)] = full[(ga, gb)].clone();
                }
            }
            GcsBlock::from_matrix(m)
        })
        .collect()
}

/// Basis of `L`, the +i eigenspace, ordered by class.
pub fn plus_i_eigenspace(j: &InvariantGacs) -> Vec<GVector> {
    let fs = j.flag();
    let mut out = Vec::new();
    for (k, blk) in j.blocks().iter().enumerate() {
        let slots = j.class_slots(k);
        for local in blk.plus_i_vectors() {
            let mut v = GVector::zero(fs);
            for (x, &s) in local.into_iter().zip(&slots) {
                v.set(s, x);
            }
            out.push(v);
        }
    }
    out
}

/// dim of the annihilator of π₁(L), by exact rank.
pub fn structure_type(j: &InvariantGacs) -> usize {
    let n = j.flag().dim();
    let l = plus_i_eigenspace(j);
    let cols: Vec<Vec<GQ>> = l.iter().map(|v| v.tangent_part().to_vec()).collect();
    if cols.is_empty() {
        return n;
    }
    n - GMatrix::from_cols(&cols).rank()
}

/// Numerators in `[-4, 4]`, denominators in `[1, 3]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    qf(rng.gen_range(-4..=4), rng.gen_range(1..=3))
}

pub fn random_nonzero_rational<R: Rng + ?Sized>(rng: &mut R) -> Q {
    loop {
        let x = random_rational(rng);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Random structured block of the given kind on a class of size `k`.
pub fn random_block<R: Rng + ?Sized>(kind: BlockKind, k: usize, rng: &mut R) -> Result<GcsBlock> {
    match kind {
        BlockKind::Complex if k == 2 => GcsBlock::complex(random_rational(rng), random_nonzero_rational(rng)),
        BlockKind::NonComplex if k == 2 => GcsBlock::noncomplex(random_rational(rng), random_nonzero_rational(rng)),
        BlockKind::General => random_orthogonal_gacs_block(k, rng),
        _ => Err(Error::Unsupported(format!("{kind} block on a {k}-dimensional class"))),
    }
}

/// `J₀` on `V ⊕ V*` for `dim V = k` even: the symplectic structure of
/// `ω = Σ X*_{2p} ∧ X*_{2p+1}`.
pub fn standard_block(k: usize) -> QMatrix {
    let mut om = QMatrix::zeros(k, k);
    for p in 0..k / 2 {
        om[(2 * p + 1, 2 * p)] = q(1);
        om[(2 * p, 2 * p + 1)] = q(-1);
    }
    let mut j = QMatrix::zeros(2 * k, 2 * k);
    j.set_block(0, k, &om);
    j.set_block(k, 0, &om);
    j
}

const CAYLEY_RETRIES: usize = 64;

/// `S J₀ S⁻¹` with `S = (I − A)(I + A)⁻¹` the Cayley transform of a random
/// element `A` of the split orthogonal Lie algebra.
pub fn random_orthogonal_gacs_block<R: Rng + ?Sized>(dim_v: usize, rng: &mut R) -> Result<GcsBlock> {
    if dim_v < 2 || dim_v % 2 != 0 {
        return Err(Error::Unsupported(format!("general block needs even dim ≥ 2, got {dim_v}")));
    }
    let k = dim_v;
    let entry = |rng: &mut R| -> Q {
        if rng.gen_bool(0.5) {
            q(0)
        } else {
            qf(rng.gen_range(-2..=2), rng.gen_range(1..=2))
        }
    };
    for _ in 0..CAYLEY_RETRIES {
        let mut a = QMatrix::zeros(2 * k, 2 * k);
        for i in 0..k {
            for j in 0..k {
                let p = entry(rng);
                a[(i, j)] = p.clone();
                a[(k + j, k + i)] = -p;
            }
            for j in i + 1..k {
                let r = entry(rng);
                a[(i, k + j)] = r.clone();
                a[(j, k + i)] = -r;
                let t = entry(rng);
                a[(k + i, j)] = t.clone();
                a[(k + j, i)] = -t;
            }
        }
        match cayley_conjugate(&a, k) {
            Some(blk) => return Ok(blk),
            None => continue,
        }
    }
    Err(Error::RetriesExhausted(CAYLEY_RETRIES))
}

/// Conjugates the standard block by the Cayley transform of `a`.
pub fn cayley_conjugate(a: &QMatrix, k: usize) -> Option<GcsBlock> {
    let id = QMatrix::identity(2 * k);
    let inv = id.add(a).inverse()?;
    let s = id.sub(a).mul(&inv);
    // S preserves the split form Q, and Q² = I, so S⁻¹ = Q Sᵀ Q
    let qm = split_form(k);
    let s_inv = qm.mul(&s.transpose()).mul(&qm);
    let j = s.mul(&standard_block(k)).mul(&s_inv);
    Some(GcsBlock::GeneralBlock { matrix: j })
}

/// A random structure of the given combination (one kind per class).
pub fn random_gacs<R: Rng + ?Sized>(fs: &FlagSpec, combination: &[BlockKind], rng: &mut R) -> Result<InvariantGacs> {
    let classes = compute_classes(fs);
    if combination.len() != classes.len() {
        return Err(Error::MissingClass { expected: classes.len(), got: combination.len() });
    }
    let blocks = classes
        .iter()
        .zip(combination)
        .map(|(c, &kind)| random_block(kind, c.len(), rng))
        .collect::<Result<Vec<_>>>()?;
    assemble(fs, blocks)
}

/// All combinations: `c`/`nc` on 2-element classes, `g` on larger ones.
pub fn all_combinations(classes: &[MClass]) -> Vec<Vec<BlockKind>> {
    let small: Vec<usize> = (0..classes.len()).filter(|&k| classes[k].len() == 2).collect();
    assert!(small.len() < 32, "too many classes to enumerate");
    (0u64..1 << small.len())
        .map(|mask| {
            let mut combo = vec![BlockKind::General; classes.len()];
            for (bit, &k) in small.iter().enumerate() {
                combo[k] = if mask >> bit & 1 == 1 { BlockKind::NonComplex } else { BlockKind::Complex };
            }
            combo
        })
        .collect()
}

/// A uniformly random combination in the sense of [`all_combinations`].
pub fn random_combination<R: Rng + ?Sized>(classes: &[MClass], rng: &mut R) -> Vec<BlockKind> {
    classes
        .iter()
        .map(|c| {
            if c.len() != 2 {
                BlockKind::General
            } else if rng.gen_bool(0.5) {
                BlockKind::NonComplex
            } else {
                BlockKind::Complex
            }
        })
        .collect()
}

/// Sign of a rational as -1, 0 or 1.
pub fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

/// Does the vector lie in `span L`? Decided by an exact solve against the basis.
pub fn in_span(basis: &[GVector], w: &GVector) -> bool {
    if basis.is_empty() {
        return w.is_zero();
    }
    let cols: Vec<Vec<GQ>> = basis.iter().map(|v| v.coeffs().to_vec()).collect();
    GMatrix::from_cols(&cols).solve(w.coeffs()).is_some()
}

fn split_antisymmetric(m: &QMatrix) -> bool {
    let n = m.rows();
    let k = n / 2;
    let qj = |r: usize, c: usize| &m[((r + k) % n, c)];
    (0..n).all(|r| (r..n).all(|c| *qj(r, c) == -qj(c, r)))
}
