//! B-transformations, normal forms, pure spinors and generalized metrics.
//!
//! A 2-form `r X*_i∧X*_j` acts on tangent vectors by `X ↦ ι_X B`, so its
//! matrix has `B[j][i] = r` and `B[i][j] = −r`. `e^B = [[I,0],[B,I]]` and a
//! structure transforms as `e^{−B} J e^{B}`; its `+i` eigenspace becomes
//! `e^{−B} L` and the pure spinor line becomes `e^{B} ∧ φ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::gtangent::{random_nonzero_rational, GVector, GcsBlock, InvariantGacs};
use crate::linalg::{split_form, GMatrix, QMatrix};
use crate::mclass::compute_classes;
use crate::rootsys::{FlagSpec, Root};
use crate::scalar::{q, GQ, Q};

/// A real 2-form on `𝔫⁻`, keyed by index pairs `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BField {
    flag_key: u64,
    n: usize,
    coeffs: BTreeMap<(usize, usize), Q>,
}

impl BField {
    pub fn zero(fs: &FlagSpec) -> Self {
        BField { flag_key: fs.key(), n: fs.dim(), coeffs: BTreeMap::new() }
    }

    /// Sets the coefficient of `X*_i∧X*_j`; swapped indices flip the sign.
    pub fn set(&mut self, i: usize, j: usize, r: Q) {
        assert!(i != j && i < self.n && j < self.n);
        let (key, r) = if i < j { ((i, j), r) } else { ((j, i), -r) };
        if r.is_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, r);
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Q {
        if i == j {
            return Q::zero();
        }
        let (key, s) = if i < j { ((i, j), q(1)) } else { ((j, i), q(-1)) };
        self.coeffs.get(&key).map(|r| r * s).unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, usize), Q> {
        &self.coeffs
    }

    pub fn flag_key(&self) -> u64 {
        self.flag_key
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, o: &BField) -> Result<BField> {
        if self.flag_key != o.flag_key {
            return Err(Error::FlagMismatch);
        }
        let mut out = self.clone();
        for (&(i, j), r) in &o.coeffs {
            let v = out.get(i, j) + r;
            out.set(i, j, v);
        }
        Ok(out)
    }

    pub fn neg(&self) -> BField {
        let mut out = self.clone();
        for r in out.coeffs.values_mut() {
            *r = -r.clone();
        }
        out
    }

    /// The `n × n` block mapping tangent to cotangent coordinates.
    pub fn matrix(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.n, self.n);
        for (&(i, j), r) in &self.coeffs {
            m[(j, i)] = r.clone();
            m[(i, j)] = -r.clone();
        }
        m
    }

    pub fn from_matrix(fs: &FlagSpec, m: &QMatrix) -> Result<BField> {
        let n = fs.dim();
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, got: m.rows() });
        }
        if m.transpose() != m.neg() {
            return Err(Error::InvariantViolation("2-form matrix is not antisymmetric".into()));
        }
        let mut b = BField::zero(fs);
        for i in 0..n {
            for j in i + 1..n {
                b.set(i, j, m[(j, i)].clone());
            }
        }
        Ok(b)
    }

    /// `e^{B}` as an `2n × 2n` matrix.
    pub fn exp_matrix(&self) -> QMatrix {
        let mut e = QMatrix::identity(2 * self.n);
        e.set_block(self.n, 0, &self.matrix());
        e
    }

    /// Errors unless every term pairs two roots of the same M-class.
    pub fn check_invariant(&self, j: &InvariantGacs) -> Result<()> {
        if self.flag_key != j.flag().key() {
            return Err(Error::FlagMismatch);
        }
        let owner = class_owner(j);
        for &(a, b) in self.coeffs.keys() {
            if owner[a] != owner[b] {
                return Err(Error::NonInvariantB(a, b));
            }
        }
        Ok(())
    }

    /// Restriction to one class, in the class's member order.
    fn local(&self, members: &[usize]) -> QMatrix {
        let m = members.len();
        let mut out = QMatrix::zeros(m, m);
        for (p, &i) in members.iter().enumerate() {
            for (s, &k) in members.iter().enumerate() {
                // ι_{X_k} B has X*_i component get(k, i)
                out[(p, s)] = self.get(k, i);
            }
        }
        out
    }
}

fn class_owner(j: &InvariantGacs) -> Vec<usize> {
    let mut owner = vec![usize::MAX; j.flag().dim()];
    for (k, members) in j.class_indices().iter().enumerate() {
        for &i in members {
            owner[i] = k;
        }
    }
    owner
}

/// A random invariant 2-form: every within-class pair gets an independent coefficient.
pub fn random_invariant_b<R: Rng + ?Sized>(j: &InvariantGacs, rng: &mut R) -> BField {
    let mut b = BField::zero(j.flag());
    for members in j.class_indices() {
        for (p, &i) in members.iter().enumerate() {
            for &k in &members[p + 1..] {
                b.set(i, k, crate::gtangent::random_rational(rng));
            }
        }
    }
    b
}

/// `e^{−B} J e^{B}`.
pub fn apply_b(j: &InvariantGacs, b: &BField) -> Result<InvariantGacs> {
    b.check_invariant(j)?;
    let mut blocks = Vec::with_capacity(j.blocks().len());
    for (k, blk) in j.blocks().iter().enumerate() {
        let members = &j.class_indices()[k];
        let bl = b.local(members);
        if bl.is_zero() {
            blocks.push(blk.clone());
            continue;
        }
        let m = members.len();
        let mut ep = QMatrix::identity(2 * m);
        ep.set_block(m, 0, &bl);
        let mut em = QMatrix::identity(2 * m);
        em.set_block(m, 0, &bl.neg());
        blocks.push(GcsBlock::from_matrix(em.mul(&blk.matrix()).mul(&ep)));
    }
    j.with_blocks(blocks)
}

fn require_gm2(j: &InvariantGacs) -> Result<()> {
    if j.classes().iter().any(|c| c.len() != 2) {
        return Err(Error::Unsupported("every M-class must have two elements".into()));
    }
    Ok(())
}

/// `(J₀, B)` with `apply_b(J₀, B) = J` and every noncomplex block of `J₀` symplectic.
pub fn canonical_form(j: &InvariantGacs) -> Result<(InvariantGacs, BField)> {
    require_gm2(j)?;
    let mut b = BField::zero(j.flag());
    let mut blocks = Vec::with_capacity(j.blocks().len());
    for (k, blk) in j.blocks().iter().enumerate() {
        match blk {
            GcsBlock::ComplexType { .. } => blocks.push(blk.clone()),
            GcsBlock::NonComplexType { a, x, .. } => {
                let m = &j.class_indices()[k];
                // conjugating J_ω by r X*_α∧X*_β shifts a by −r x
                b.set(m[0], m[1], -(a / x));
                blocks.push(GcsBlock::symplectic(x.clone())?);
            }
            GcsBlock::GeneralBlock { .. } => {
                return Err(Error::Unsupported(format!("block {k} is neither complex nor noncomplex type")));
            }
        }
    }
    Ok((j.with_blocks(blocks)?, b))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModuliCoordinate {
    Symplectic { x: Q },
    Complex { c: Q, b: Q },
}

impl fmt::Display for ModuliCoordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuliCoordinate::Symplectic { x } => write!(f, "symplectic(x={x})"),
            ModuliCoordinate::Complex { c, b } => write!(f, "complex(c={c}, b={b})"),
        }
    }
}

/// Per-class coordinates of the B-orbit.
pub fn moduli_coordinates(j: &InvariantGacs) -> Result<Vec<ModuliCoordinate>> {
    let (j0, _) = canonical_form(j)?;
    Ok(j0
        .blocks()
        .iter()
        .map(|blk| match blk {
            GcsBlock::ComplexType { b, c } => ModuliCoordinate::Complex { c: c.clone(), b: b.clone() },
            GcsBlock::NonComplexType { x, .. } => ModuliCoordinate::Symplectic { x: x.clone() },
            GcsBlock::GeneralBlock { .. } => unreachable!(),
        })
        .collect())
}

/// A mixed-degree complex form on `𝔫⁻`; bit `k` of a key stands for `X*_k`.
#[derive(Clone, PartialEq, Eq)]
pub struct Spinor {
    flag_key: u64,
    n: usize,
    terms: BTreeMap<u64, GQ>,
}

fn swaps(s: u64, t: u64) -> u32 {
    // pairs (a ∈ s, b ∈ t) with a > b
    let mut count = 0;
    let mut t = t;
    while t != 0 {
        let b = t.trailing_zeros();
        count += (s >> b >> 1).count_ones();
        t &= t - 1;
    }
    count
}

impl Spinor {
    pub fn zero(fs: &FlagSpec) -> Self {
        assert!(fs.dim() <= 64, "spinors need dim 𝔫⁻ ≤ 64");
        Spinor { flag_key: fs.key(), n: fs.dim(), terms: BTreeMap::new() }
    }

    pub fn one(fs: &FlagSpec) -> Self {
        Spinor::monomial(fs, &[], GQ::one())
    }

    /// `c X*_{i1}∧…∧X*_{ik}` in the given order.
    pub fn monomial(fs: &FlagSpec, idx: &[usize], c: GQ) -> Self {
        let mut s = Spinor::one_unchecked(fs);
        for &i in idx {
            s = s.wedge(&Spinor::one_form(fs, &one_hot(fs.dim(), i))).unwrap();
        }
        s.scale(&c)
    }

    fn one_unchecked(fs: &FlagSpec) -> Self {
        let mut s = Spinor::zero(fs);
        s.terms.insert(0, GQ::one());
        s
    }

    pub fn one_form(fs: &FlagSpec, coeffs: &[GQ]) -> Self {
        let mut s = Spinor::zero(fs);
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                s.terms.insert(1 << k, c.clone());
            }
        }
        s
    }

    /// `exp(Σ c_{ij} X*_i∧X*_j)`, a product of `1 + c e_{ij}` factors.
    pub fn exp_two_form(fs: &FlagSpec, terms: &[((usize, usize), GQ)]) -> Self {
        let mut s = Spinor::one_unchecked(fs);
        for ((i, k), c) in terms {
            let mut f = Spinor::one_unchecked(fs);
            f = f.add(&Spinor::monomial(fs, &[*i, *k], c.clone())).unwrap();
            s = s.wedge(&f).unwrap();
        }
        s
    }

    /// `e^{B}` for a real 2-form.
    pub fn exp_b(fs: &FlagSpec, b: &BField) -> Result<Self> {
        if b.flag_key() != fs.key() {
            return Err(Error::FlagMismatch);
        }
        let terms: Vec<_> = b.coeffs().iter().map(|(&p, r)| (p, GQ::real(r.clone()))).collect();
        Ok(Spinor::exp_two_form(fs, &terms))
    }

    pub fn terms(&self) -> &BTreeMap<u64, GQ> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(|m| m.count_ones() as usize).max().unwrap_or(0)
    }

    /// Degrees of the nonzero homogeneous parts.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|m| m.count_ones() as usize).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    fn same(&self, o: &Spinor) -> Result<()> {
        if self.flag_key != o.flag_key {
            return Err(Error::FlagMismatch);
        }
        Ok(())
    }

    fn push(&mut self, key: u64, c: GQ) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(GQ::zero);
        *e += &c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, o: &Spinor) -> Result<Spinor> {
        self.same(o)?;
        let mut out = self.clone();
        for (&k, c) in &o.terms {
            out.push(k, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Spinor) -> Result<Spinor> {
        self.add(&o.scale(&GQ::from_int(-1)))
    }

    pub fn scale(&self, c: &GQ) -> Spinor {
        let mut out = Spinor { flag_key: self.flag_key, n: self.n, terms: BTreeMap::new() };
        if c.is_zero() {
            return out;
        }
        for (&k, x) in &self.terms {
            out.terms.insert(k, x * c);
        }
        out
    }

    pub fn wedge(&self, o: &Spinor) -> Result<Spinor> {
        self.same(o)?;
        let mut out = Spinor { flag_key: self.flag_key, n: self.n, terms: BTreeMap::new() };
        for (&s, x) in &self.terms {
            for (&t, y) in &o.terms {
                if s & t != 0 {
                    continue;
                }
                let v = x * y;
                out.push(s | t, if swaps(s, t) % 2 == 0 { v } else { -v });
            }
        }
        Ok(out)
    }

    /// `ι_{X_k}`.
    pub fn contract(&self, k: usize) -> Spinor {
        let bit = 1u64 << k;
        let mut out = Spinor { flag_key: self.flag_key, n: self.n, terms: BTreeMap::new() };
        for (&s, x) in &self.terms {
            if s & bit == 0 {
                continue;
            }
            let below = (s & (bit - 1)).count_ones();
            out.push(s & !bit, if below % 2 == 0 { x.clone() } else { -x });
        }
        out
    }

    /// `λ` with `o = λ·self`, when it exists and is nonzero.
    pub fn ratio_to(&self, o: &Spinor) -> Option<GQ> {
        if self.flag_key != o.flag_key || self.terms.len() != o.terms.len() || self.is_zero() {
            return None;
        }
        let (k0, x0) = self.terms.iter().next()?;
        let lam = o.terms.get(k0)? / x0;
        (self.scale(&lam) == *o).then_some(lam)
    }

    pub fn coefficient_vector(&self, keys: &[u64]) -> Vec<GQ> {
        keys.iter().map(|k| self.terms.get(k).cloned().unwrap_or_else(GQ::zero)).collect()
    }
}

fn one_hot(n: usize, i: usize) -> Vec<GQ> {
    let mut v = vec![GQ::zero(); n];
    v[i] = GQ::one();
    v
}

impl fmt::Debug for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&m, c)| {
                let idx: Vec<String> = (0..self.n).filter(|k| m >> k & 1 == 1).map(|k| k.to_string()).collect();
                format!("({c})e[{}]", idx.join(","))
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// `(X + ξ)·φ = ι_X φ + ξ∧φ`.
pub fn clifford_act(v: &GVector, s: &Spinor) -> Result<Spinor> {
    if v.flag_key() != s.flag_key || v.n() != s.n {
        return Err(Error::FlagMismatch);
    }
    let n = s.n;
    let mut out = Spinor { flag_key: s.flag_key, n, terms: BTreeMap::new() };
    for (k, c) in v.nonzero() {
        if k < n {
            for (m, x) in s.contract(k).terms {
                out.push(m, &x * c);
            }
        } else {
            let bit = 1u64 << (k - n);
            for (&m, x) in &s.terms {
                if m & bit != 0 {
                    continue;
                }
                let v = x * c;
                let below = (m & (bit - 1)).count_ones();
                out.push(m | bit, if below % 2 == 0 { v } else { -v });
            }
        }
    }
    Ok(out)
}

/// Complex dimension of `{v : v·φ = 0}`.
pub fn annihilator_dim(fs: &FlagSpec, s: &Spinor) -> Result<usize> {
    let n = fs.dim();
    let images: Vec<Spinor> = (0..2 * n)
        .map(|k| clifford_act(&GVector::basis(fs, k), s))
        .collect::<Result<_>>()?;
    let mut keys: Vec<u64> = images.iter().flat_map(|x| x.terms.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    if keys.is_empty() {
        return Ok(2 * n);
    }
    let cols: Vec<Vec<GQ>> = images.iter().map(|x| x.coefficient_vector(&keys)).collect();
    Ok(2 * n - GMatrix::from_cols(&cols).rank())
}

/// Generator of the invariant pure spinor line:
/// `exp(Σ (B_α + iω_α)) ∧ ⋀ Ω_α` over noncomplex and complex classes.
pub fn pure_spinor(j: &InvariantGacs) -> Result<Spinor> {
    require_gm2(j)?;
    let fs = j.flag();
    let n = fs.dim();
    let mut two = Vec::new();
    let mut ones = Vec::new();
    for (k, blk) in j.blocks().iter().enumerate() {
        let m = &j.class_indices()[k];
        match blk {
            GcsBlock::NonComplexType { a, x, .. } => {
                // B + iω = ((−a + i)/x) X*_α∧X*_β
                let z = GQ::new(-a.clone(), q(1)).scale(&x.recip());
                two.push(((m[0], m[1]), z));
            }
            GcsBlock::ComplexType { b, c } => {
                // Ω = X*_α − ((b + i)/c) X*_β kills (b + i) X_α + c X_β
                let mut w = vec![GQ::zero(); n];
                w[m[0]] = GQ::one();
                w[m[1]] = -GQ::new(b.clone(), q(1)).scale(&c.recip());
                ones.push(Spinor::one_form(fs, &w));
            }
            GcsBlock::GeneralBlock { .. } => {
                return Err(Error::Unsupported(format!("block {k} is neither complex nor noncomplex type")));
            }
        }
    }
    let mut phi = Spinor::exp_two_form(fs, &two);
    for o in &ones {
        phi = phi.wedge(o)?;
    }
    Ok(phi)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedMetric {
    flag: FlagSpec,
    matrix: QMatrix,
}

impl GeneralizedMetric {
    pub fn new(flag: &FlagSpec, matrix: QMatrix) -> Result<Self> {
        let n2 = 2 * flag.dim();
        if matrix.rows() != n2 || matrix.cols() != n2 {
            return Err(Error::DimensionMismatch { expected: n2, got: matrix.rows() });
        }
        Ok(GeneralizedMetric { flag: flag.clone(), matrix })
    }

    pub fn flag(&self) -> &FlagSpec {
        &self.flag
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    /// The bilinear form `Q(G·, ·)` as a symmetric matrix.
    pub fn form(&self) -> QMatrix {
        split_form(self.flag.dim()).mul(&self.matrix)
    }

    pub fn is_positive_definite(&self) -> bool {
        self.form().is_positive_definite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvalidReason {
    NotCommuting,
    NotPositive,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::NotCommuting => write!(f, "J and J' do not commute"),
            InvalidReason::NotPositive => write!(f, "G = -JJ' is not positive definite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HermitianVerdict {
    Valid { metric: GeneralizedMetric },
    Invalid { reason: InvalidReason },
}

impl HermitianVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, HermitianVerdict::Valid { .. })
    }
}

pub fn hermitian_pair(j: &InvariantGacs, j2: &InvariantGacs) -> Result<HermitianVerdict> {
    if j.flag() != j2.flag() {
        return Err(Error::FlagMismatch);
    }
    let a = j.matrix();
    let b = j2.matrix();
    let ab = a.mul(&b);
    if ab != b.mul(&a) {
        return Ok(HermitianVerdict::Invalid { reason: InvalidReason::NotCommuting });
    }
    let metric = GeneralizedMetric::new(j.flag(), ab.neg())?;
    if !metric.is_positive_definite() {
        return Ok(HermitianVerdict::Invalid { reason: InvalidReason::NotPositive });
    }
    Ok(HermitianVerdict::Valid { metric })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricNormalForm {
    pub riemannian: QMatrix,
    pub b: BField,
}

/// Splits `G = e^{B}[[0, g⁻¹], [g, 0]]e^{−B}`.
pub fn metric_normal_form(g: &GeneralizedMetric) -> Result<MetricNormalForm> {
    let n = g.flag.dim();
    let m = &g.matrix;
    let g11 = m.submatrix(0, 0, n, n);
    let g12 = m.submatrix(0, n, n, n);
    let riemannian = g12
        .inverse()
        .ok_or_else(|| Error::InvariantViolation("G has a singular off-diagonal block".into()))?;
    if !riemannian.is_positive_definite() {
        return Err(Error::InvariantViolation("the Riemannian part is not positive definite".into()));
    }
    let bm = riemannian.mul(&g11).neg();
    let b = BField::from_matrix(&g.flag, &bm)?;
    let mut tilde = QMatrix::zeros(2 * n, 2 * n);
    tilde.set_block(0, n, &g12);
    tilde.set_block(n, 0, &riemannian);
    let back = b.exp_matrix().mul(&tilde).mul(&b.neg().exp_matrix());
    if &back != m {
        return Err(Error::InvariantViolation("G is not of generalized metric shape".into()));
    }
    Ok(MetricNormalForm { riemannian, b })
}

/// Per-class chart `{(c, x, b) : cx > 0}` of invariant generalized metrics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricModuli {
    pub classes: Vec<Vec<Root>>,
}

impl MetricModuli {
    pub fn factors(&self) -> usize {
        self.classes.len()
    }
}

impl fmt::Display for MetricModuli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = "(((R+)^2 x R) u ((R-)^2 x R))";
        let parts = vec![one; self.classes.len()];
        write!(f, "{}", parts.join(" x "))
    }
}

pub fn metric_moduli(fs: &FlagSpec) -> Result<MetricModuli> {
    let classes = compute_classes(fs);
    if classes.iter().any(|c| c.len() != 2) {
        return Err(Error::Unsupported("every M-class must have two elements".into()));
    }
    Ok(MetricModuli { classes: classes.into_iter().map(|c| c.members).collect() })
}

/// A random valid noncomplex partner for each complex block, with matching sign.
pub fn random_hermitian_partner<R: Rng + ?Sized>(j: &InvariantGacs, rng: &mut R) -> Result<InvariantGacs> {
    let mut blocks = Vec::new();
    for blk in j.blocks() {
        let GcsBlock::ComplexType { c, .. } = blk else {
            return Err(Error::Unsupported("partner needs complex-type blocks".into()));
        };
        let x = random_nonzero_rational(rng);
        let x = if (&x * c) < Q::zero() { -x } else { x };
        blocks.push(GcsBlock::symplectic(x)?);
    }
    j.with_blocks(blocks)
}
