//! Root systems of the split simple types A, B, C, D and G₂, and the
//! parabolic data attached to a subset Θ of simple roots.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::scalar::{q, Q};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

impl Family {
    pub fn is_classical(self) -> bool {
        self != Family::G
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::A => "A",
            Family::B => "B",
            Family::C => "C",
            Family::D => "D",
            Family::G => "G",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Family::A),
            "B" => Ok(Family::B),
            "C" => Ok(Family::C),
            "D" => Ok(Family::D),
            "G" => Ok(Family::G),
            other => Err(Error::InvalidType(format!("unknown family {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LieType {
    pub family: Family,
    pub rank: usize,
}

impl LieType {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 3,
            Family::G => rank == 2,
        };
        if !ok {
            return Err(Error::InvalidType(format!("{family}{rank}")));
        }
        Ok(LieType { family, rank })
    }

    /// Number of positive roots, from the classification.
    pub fn positive_root_count(self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 1) / 2,
            Family::B | Family::C => l * l,
            Family::D => l * (l - 1),
            Family::G => 6,
        }
    }

    /// Gram matrix of the simple roots, short roots of squared length 2.
    fn gram(self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let mut g = vec![vec![0i64; l]; l];
        match self.family {
            Family::A => {
                for i in 0..l {
                    g[i][i] = 2;
                    if i + 1 < l {
                        g[i][i + 1] = -1;
                        g[i + 1][i] = -1;
                    }
                }
            }
            Family::B => {
                for i in 0..l {
                    g[i][i] = 4;
                    if i + 1 < l {
                        g[i][i + 1] = -2;
                        g[i + 1][i] = -2;
                    }
                }
                g[l - 1][l - 1] = 2;
            }
            Family::C => {
                for i in 0..l {
                    g[i][i] = 2;
                    if i + 1 < l {
                        g[i][i + 1] = -1;
                        g[i + 1][i] = -1;
                    }
                }
                g[l - 1][l - 1] = 4;
                g[l - 2][l - 1] = -2;
                g[l - 1][l - 2] = -2;
            }
            Family::D => {
                for i in 0..l {
                    g[i][i] = 2;
                }
                for i in 0..l - 2 {
                    g[i][i + 1] = -1;
                    g[i + 1][i] = -1;
                }
                g[l - 3][l - 1] = -1;
                g[l - 1][l - 3] = -1;
            }
            Family::G => {
                // index 0 is the long root α, index 1 the short root β
                g = vec![vec![6, -3], vec![-3, 2]];
            }
        }
        g
    }

    /// Simple roots in the λ-model of the classical types.
    fn lambda_simple(self) -> Option<Vec<Vec<i64>>> {
        let l = self.rank;
        let dim = self.lambda_dim()?;
        let e = |i: usize| {
            let mut v = vec![0i64; dim];
            v[i] = 1;
            v
        };
        let diff = |i: usize, j: usize, s: i64| {
            let mut v = e(i);
            v[j] += s;
            v
        };
        let mut out: Vec<Vec<i64>> = (0..l.min(dim - 1)).map(|i| diff(i, i + 1, -1)).collect();
        match self.family {
            Family::A => {}
            Family::B => {
                out.truncate(l - 1);
                out.push(e(l - 1));
            }
            Family::C => {
                out.truncate(l - 1);
                let mut v = e(l - 1);
                v[l - 1] = 2;
                out.push(v);
            }
            Family::D => {
                out.truncate(l - 1);
                out.push(diff(l - 2, l - 1, 1));
            }
            Family::G => return None,
        }
        Some(out)
    }

    fn lambda_dim(self) -> Option<usize> {
        match self.family {
            Family::A => Some(self.rank + 1),
            Family::G => None,
            _ => Some(self.rank),
        }
    }
}

impl fmt::Display for LieType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)
    }
}

/// A root in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    pub coeffs: Vec<i32>,
}

impl Root {
    pub fn new(coeffs: Vec<i32>) -> Self {
        Root { coeffs }
    }

    pub fn simple(rank: usize, i: usize) -> Self {
        let mut c = vec![0; rank];
        c[i] = 1;
        Root { coeffs: c }
    }

    pub fn height(&self) -> i32 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0) && self.coeffs.iter().any(|&c| c > 0)
    }

    pub fn is_negative(&self) -> bool {
        self.coeffs.iter().all(|&c| c <= 0) && self.coeffs.iter().any(|&c| c < 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, o: &Root) -> Root {
        Root { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Root) -> Root {
        Root { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Root {
        Root { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn scaled(&self, k: i32) -> Root {
        Root { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub lie_type: LieType,
    positive: Vec<Root>,
    gram: Vec<Vec<i64>>,
    index: HashMap<Root, usize>,
}

pub fn build_root_system(lie_type: LieType) -> Result<RootSystem> {
    let lie_type = LieType::new(lie_type.family, lie_type.rank)?;
    Ok(RootSystem::new(lie_type))
}

impl RootSystem {
    fn new(lie_type: LieType) -> Self {
        let l = lie_type.rank;
        let gram = lie_type.gram();
        let pair = |a: &[i32], b: &[i32]| -> i64 {
            let mut s = 0;
            for i in 0..l {
                for j in 0..l {
                    s += a[i] as i64 * gram[i][j] * b[j] as i64;
                }
            }
            s
        };
        let mut layers: Vec<Vec<Root>> = vec![(0..l).map(|i| Root::simple(l, i)).collect()];
        let mut known: std::collections::HashSet<Root> = layers[0].iter().cloned().collect();
        loop {
            let mut next = Vec::new();
            for beta in layers.last().unwrap() {
                for i in 0..l {
                    let ai = Root::simple(l, i);
                    let mut p = 0;
                    let mut down = beta.sub(&ai);
                    while known.contains(&down) {
                        p += 1;
                        down = down.sub(&ai);
                    }
                    let cr = 2 * pair(&beta.coeffs, &ai.coeffs) / gram[i][i];
                    let qn = p - cr;
                    let up = beta.add(&ai);
                    if qn > 0 && !known.contains(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            known.extend(next.iter().cloned());
            layers.push(next);
        }
        let mut positive: Vec<Root> = layers.into_iter().flatten().collect();
        positive.sort_by(root_order);
        let n = positive.len();
        let mut index = HashMap::with_capacity(2 * n);
        for (i, r) in positive.iter().enumerate() {
            index.insert(r.clone(), i);
            index.insert(r.neg(), n + i);
        }
        RootSystem { lie_type, positive, gram, index }
    }

    pub fn rank(&self) -> usize {
        self.lie_type.rank
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn num_positive(&self) -> usize {
        self.positive.len()
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive.len()
    }

    /// Root by global index: positives first, then their negatives.
    pub fn root(&self, i: usize) -> Root {
        let n = self.positive.len();
        if i < n {
            self.positive[i].clone()
        } else {
            self.positive[i - n].neg()
        }
    }

    pub fn all_roots(&self) -> Vec<Root> {
        (0..self.num_roots()).map(|i| self.root(i)).collect()
    }

    pub fn negative_roots(&self) -> Vec<Root> {
        self.positive.iter().map(Root::neg).collect()
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank()).map(|i| Root::simple(self.rank(), i)).collect()
    }

    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.index.get(r).copied()
    }

    pub fn is_root(&self, r: &Root) -> bool {
        self.index.contains_key(r)
    }

    pub fn symmetrized_cartan(&self) -> QMatrix {
        QMatrix::from_rows(self.gram.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    /// Cartan matrix `a_ij = 2⟨α_i, α_j⟩ / ⟨α_i, α_i⟩`.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        let l = self.rank();
        (0..l).map(|i| (0..l).map(|j| 2 * self.gram[i][j] / self.gram[i][i]).collect()).collect()
    }

    /// Integer-valued form on coordinate vectors (no root check).
    pub fn form(&self, a: &[i32], b: &[i32]) -> i64 {
        let l = self.rank();
        let mut s = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                s += a[i] as i64 * self.gram[i][j] * b[j] as i64;
            }
        }
        s
    }

    pub fn pairing(&self, alpha: &Root, beta: &Root) -> Result<Q> {
        for r in [alpha, beta] {
            if r.rank() != self.rank() {
                return Err(Error::DimensionMismatch { expected: self.rank(), got: r.rank() });
            }
        }
        Ok(q(self.form(&alpha.coeffs, &beta.coeffs)))
    }

    /// The integer `2⟨γ, α⟩ / ⟨γ, γ⟩` for a root `γ`.
    pub fn coroot_pairing(&self, gamma: &Root, alpha: &Root) -> i64 {
        let gg = self.form(&gamma.coeffs, &gamma.coeffs);
        let ga = self.form(&gamma.coeffs, &alpha.coeffs);
        debug_assert_eq!((2 * ga) % gg, 0);
        2 * ga / gg
    }

    /// λ-coordinates of a root, for the classical types.
    pub fn to_lambda(&self, r: &Root) -> Option<Vec<i64>> {
        let simple = self.lie_type.lambda_simple()?;
        let dim = self.lie_type.lambda_dim()?;
        let mut v = vec![0i64; dim];
        for (c, s) in r.coeffs.iter().zip(&simple) {
            for k in 0..dim {
                v[k] += *c as i64 * s[k];
            }
        }
        Some(v)
    }

    /// Inverse of [`RootSystem::to_lambda`]; `None` unless the vector is a root.
    pub fn from_lambda(&self, v: &[i64]) -> Option<Root> {
        let simple = self.lie_type.lambda_simple()?;
        let dim = self.lie_type.lambda_dim()?;
        if v.len() != dim {
            return None;
        }
        let cols: Vec<Vec<Q>> = simple.iter().map(|s| s.iter().map(|&x| q(x)).collect()).collect();
        let m = QMatrix::from_cols(&cols);
        let rhs: Vec<Q> = v.iter().map(|&x| q(x)).collect();
        let sol = m.solve(&rhs)?;
        if m.mul_vec(&sol) != rhs {
            return None;
        }
        let mut coeffs = Vec::with_capacity(sol.len());
        for x in sol {
            if !x.is_integer() {
                return None;
            }
            coeffs.push(i32::try_from(x.to_integer()).ok()?);
        }
        let r = Root::new(coeffs);
        self.is_root(&r).then_some(r)
    }

    /// λ-notation for classical types, Σ-notation (α long, β short) for G₂.
    pub fn notation(&self, r: &Root) -> String {
        match self.to_lambda(r) {
            Some(v) => {
                let terms: Vec<(i64, String)> = v
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (c, format!("λ{}", i + 1)))
                    .collect();
                format_terms(terms)
            }
            None => {
                let names = ["α", "β"];
                let terms = r
                    .coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, &c)| c != 0)
                    .map(|(i, &c)| (c as i64, names[i].to_string()))
                    .collect();
                format_terms(terms)
            }
        }
    }

    /// Parses a single root in the notation produced by [`RootSystem::notation`].
    /// ASCII `l`/`L` may stand for `λ`, and `a`/`b` for `α`/`β`.
    pub fn parse_root(&self, s: &str) -> std::result::Result<Root, NotationError> {
        let terms = parse_terms(s, self.lie_type.family == Family::G)?;
        let root = if self.lie_type.family == Family::G {
            let mut c = vec![0i32; 2];
            for (k, idx, _) in &terms {
                if *idx >= 2 {
                    return Err(NotationError::new(1, 1, format!("unknown symbol in {s:?}")));
                }
                c[*idx] += *k as i32;
            }
            let r = Root::new(c);
            self.is_root(&r).then_some(r)
        } else {
            let dim = self.lie_type.lambda_dim().unwrap();
            let mut v = vec![0i64; dim];
            for (k, idx, col) in &terms {
                if *idx >= dim {
                    return Err(NotationError::new(1, *col, format!("λ{} out of range", idx + 1)));
                }
                v[*idx] += k;
            }
            self.from_lambda(&v)
        };
        root.ok_or_else(|| NotationError::new(1, 1, format!("{s:?} is not a root of {}", self.lie_type)))
    }
}

fn format_terms(terms: Vec<(i64, String)>) -> String {
    let mut pos: Vec<_> = terms.iter().filter(|t| t.0 > 0).collect();
    let neg: Vec<_> = terms.iter().filter(|t| t.0 < 0).collect();
    pos.extend(neg);
    let mut out = String::new();
    for (k, (c, name)) in pos.into_iter().enumerate() {
        let mag = c.abs();
        if *c < 0 {
            out.push('-');
        } else if k > 0 {
            out.push('+');
        }
        if mag != 1 {
            out.push_str(&mag.to_string());
        }
        out.push_str(name);
    }
    out
}

/// Parse failure with a 1-based position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotationError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl NotationError {
    fn new(line: usize, column: usize, message: String) -> Self {
        NotationError { line, column, message }
    }
}

impl fmt::Display for NotationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for NotationError {}

/// Splits `2λ5-λ3` style input into (coefficient, index, column) triples.
fn parse_terms(s: &str, sigma: bool) -> std::result::Result<Vec<(i64, usize, usize)>, NotationError> {
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip_ws(&mut i);
    if i == chars.len() {
        return Err(NotationError::new(1, 1, "empty root".into()));
    }
    while i < chars.len() {
        let start = i + 1;
        let mut sign = 1;
        if chars[i] == '+' || chars[i] == '-' || chars[i] == '−' {
            if chars[i] != '+' {
                sign = -1;
            }
            i += 1;
            skip_ws(&mut i);
        } else if !out.is_empty() {
            return Err(NotationError::new(1, start, format!("expected '+' or '-', found {:?}", chars[i])));
        }
        let ds = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coef: i64 = if ds == i {
            1
        } else {
            chars[ds..i].iter().collect::<String>().parse().unwrap()
        };
        if i >= chars.len() {
            return Err(NotationError::new(1, i + 1, "expected a root symbol".into()));
        }
        let idx = if sigma {
            let idx = match chars[i] {
                'α' | 'a' => 0,
                'β' | 'b' => 1,
                c => return Err(NotationError::new(1, i + 1, format!("expected α or β, found {c:?}"))),
            };
            i += 1;
            idx
        } else {
            if !matches!(chars[i], 'λ' | 'l' | 'L') {
                return Err(NotationError::new(1, i + 1, format!("expected λ, found {:?}", chars[i])));
            }
            i += 1;
            let ns = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if ns == i {
                return Err(NotationError::new(1, i + 1, "expected an index after λ".into()));
            }
            let n: usize = chars[ns..i].iter().collect::<String>().parse().unwrap();
            if n == 0 {
                return Err(NotationError::new(1, ns + 1, "λ indices start at 1".into()));
            }
            n - 1
        };
        out.push((sign * coef, idx, start));
        skip_ws(&mut i);
    }
    Ok(out)
}

/// Height-major order; within a height, larger leading coefficients first.
fn root_order(a: &Root, b: &Root) -> std::cmp::Ordering {
    a.height().cmp(&b.height()).then_with(|| b.coeffs.cmp(&a.coeffs))
}

/// Key used to order any roots: by `|height|`, then the positive order.
pub fn order_key(r: &Root) -> (i32, Vec<i32>) {
    let p = if r.is_negative() { r.neg() } else { r.clone() };
    (p.height(), p.coeffs.iter().map(|c| -c).collect())
}

/// A real flag manifold, given by Θ ⊆ Σ (as simple-root indices).
#[derive(Debug, Clone)]
pub struct FlagSpec {
    inner: Arc<FlagInner>,
}

#[derive(Debug)]
struct FlagInner {
    rs: Arc<RootSystem>,
    theta: Vec<usize>,
    complement: Vec<Root>,
    comp_index: HashMap<Root, usize>,
    key: u64,
}

impl PartialEq for FlagSpec {
    fn eq(&self, o: &Self) -> bool {
        self.inner.key == o.inner.key
    }
}

impl Eq for FlagSpec {}

impl Hash for FlagSpec {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.inner.key.hash(h)
    }
}

impl FlagSpec {
    pub fn new(rs: Arc<RootSystem>, theta: &[usize]) -> Result<Self> {
        let l = rs.rank();
        let mut theta: Vec<usize> = theta.to_vec();
        theta.sort_unstable();
        theta.dedup();
        if let Some(&bad) = theta.iter().find(|&&i| i >= l) {
            return Err(Error::InvalidType(format!("simple root index {} out of range for rank {l}", bad + 1)));
        }
        let in_theta = |r: &Root| r.coeffs.iter().enumerate().all(|(i, &c)| c == 0 || theta.contains(&i));
        let mut complement: Vec<Root> = rs.negative_roots().into_iter().filter(|r| !in_theta(r)).collect();
        complement.sort_by_key(order_key);
        let comp_index = complement.iter().enumerate().map(|(i, r)| (r.clone(), i)).collect();
        let mut key = (rs.lie_type.family as u64) << 56 | (l as u64) << 48;
        for &t in &theta {
            key |= 1 << t;
        }
        Ok(FlagSpec { inner: Arc::new(FlagInner { rs, theta, complement, comp_index, key }) })
    }

    pub fn maximal(rs: Arc<RootSystem>) -> Self {
        FlagSpec::new(rs, &[]).expect("empty Θ is valid")
    }

    pub fn from_type(lie_type: LieType, theta: &[usize]) -> Result<Self> {
        FlagSpec::new(Arc::new(build_root_system(lie_type)?), theta)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.inner.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.inner.rs.clone()
    }

    pub fn lie_type(&self) -> LieType {
        self.inner.rs.lie_type
    }

    pub fn theta(&self) -> &[usize] {
        &self.inner.theta
    }

    pub fn theta_roots(&self) -> Vec<Root> {
        let l = self.inner.rs.rank();
        self.inner.theta.iter().map(|&i| Root::simple(l, i)).collect()
    }

    pub fn is_maximal(&self) -> bool {
        self.inner.theta.is_empty()
    }

    /// Π⁻ \ ⟨Θ⟩⁻, ordered like the positive roots.
    pub fn complement_roots(&self) -> &[Root] {
        &self.inner.complement
    }

    /// dim 𝔫_Θ⁻.
    pub fn dim(&self) -> usize {
        self.inner.complement.len()
    }

    pub fn complement_index(&self, r: &Root) -> Option<usize> {
        self.inner.comp_index.get(r).copied()
    }

    /// Identifier shared by all clones and equal specs.
    pub fn key(&self) -> u64 {
        self.inner.key
    }
}

pub fn complement_roots(fs: &FlagSpec) -> Vec<Root> {
    fs.complement_roots().to_vec()
}

/// Parses Θ as `all`, empty, 1-based simple indices (`1,3`) or root notation.
pub fn parse_theta(rs: &RootSystem, s: &str) -> std::result::Result<Vec<usize>, NotationError> {
    let t = s.trim();
    if t.is_empty() || t == "∅" || t.eq_ignore_ascii_case("none") {
        return Ok(vec![]);
    }
    if t.eq_ignore_ascii_case("all") {
        return Ok((0..rs.rank()).collect());
    }
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in s.split(',') {
        let col = offset + piece.len() - piece.trim_start().len() + 1;
        offset += piece.chars().count() + 1;
        let p = piece.trim();
        let idx = if !p.is_empty() && p.chars().all(|c| c.is_ascii_digit()) {
            let i: usize = p.parse().unwrap();
            if i == 0 || i > rs.rank() {
                return Err(NotationError::new(1, col, format!("simple root index {i} out of range 1..={}", rs.rank())));
            }
            i - 1
        } else {
            let r = rs.parse_root(p).map_err(|e| NotationError::new(1, col + e.column - 1, e.message))?;
            match (0..rs.rank()).find(|&i| Root::simple(rs.rank(), i) == r) {
                Some(i) => i,
                None => return Err(NotationError::new(1, col, format!("{p:?} is not a simple root"))),
            }
        };
        if !out.contains(&idx) {
            out.push(idx);
        }
    }
    out.sort_unstable();
    Ok(out)
}
