//! Chevalley structure constants.
//!
//! Signs follow the extraspecial-pair convention: for every non-simple
//! positive root ξ the pair (α₀, β₀) with α₀ minimal in the root order gets
//! `N = +(p+1)`, and the rest is forced by the standard relations among
//! Chevalley constants. The basis satisfies `[E_α, E_{-α}] = H_α` and
//! `N_{-α,-β} = -N_{α,β}`.

use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rootsys::{Root, RootSystem};
use crate::scalar::{q, qf, Q};

#[derive(Debug, Clone)]
pub struct StructureConstants {
    rs: Arc<RootSystem>,
    nroots: usize,
    n: Vec<i64>,
    sum: Vec<Option<u32>>,
}

pub fn build_structure_constants(rs: Arc<RootSystem>) -> Result<StructureConstants> {
    StructureConstants::new(rs)
}

struct Builder<'a> {
    rs: &'a RootSystem,
    pos: HashMap<(usize, usize), i64>,
}

impl Builder<'_> {
    fn len2(&self, r: &Root) -> i64 {
        self.rs.form(&r.coeffs, &r.coeffs)
    }

    /// `N_{x,y}` from the positive table, or 0 when `x+y` is not a root.
    fn n(&self, x: &Root, y: &Root) -> i64 {
        let s = x.add(y);
        if !self.rs.is_root(&s) {
            return 0;
        }
        match (x.is_positive(), y.is_positive()) {
            (true, true) => {
                let (i, j) = (self.rs.index_of(x).unwrap(), self.rs.index_of(y).unwrap());
                if i < j {
                    *self.pos.get(&(i, j)).expect("constant requested before it was fixed")
                } else {
                    -*self.pos.get(&(j, i)).expect("constant requested before it was fixed")
                }
            }
            (false, false) => -self.n(&x.neg(), &y.neg()),
            _ => {
                // x + y + z = 0, and N_{x,y}/(z,z) = N_{y,z}/(x,x) = N_{z,x}/(y,y)
                let z = s.neg();
                let (zz, xx, yy) = (self.len2(&z), self.len2(x), self.len2(y));
                let v = if z.is_positive() == x.is_positive() {
                    zz * self.n(&z, x)
                } else {
                    zz * self.n(y, &z)
                };
                let d = if z.is_positive() == x.is_positive() { yy } else { xx };
                debug_assert_eq!(v % d, 0);
                v / d
            }
        }
    }
}

impl StructureConstants {
    pub fn new(rs: Arc<RootSystem>) -> Result<Self> {
        let pos = Self::positive_table(&rs)?;
        let b = Builder { rs: &rs, pos };
        let nroots = rs.num_roots();
        let roots = rs.all_roots();
        let mut n = vec![0i64; nroots * nroots];
        let mut sum = vec![None; nroots * nroots];
        for (i, x) in roots.iter().enumerate() {
            for (j, y) in roots.iter().enumerate() {
                if let Some(k) = rs.index_of(&x.add(y)) {
                    n[i * nroots + j] = b.n(x, y);
                    sum[i * nroots + j] = Some(k as u32);
                }
            }
        }
        let sc = StructureConstants { rs, nroots, n, sum };
        sc.check_axioms()?;
        sc.check_jacobi()?;
        Ok(sc)
    }

    fn positive_table(rs: &RootSystem) -> Result<HashMap<(usize, usize), i64>> {
        let pos = rs.positive_roots();
        let mut by_sum: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
        for i in 0..pos.len() {
            for j in i + 1..pos.len() {
                if let Some(k) = rs.index_of(&pos[i].add(&pos[j])) {
                    by_sum.entry(k).or_default().push((i, j));
                }
            }
        }
        let mut b = Builder { rs, pos: HashMap::new() };
        for k in 0..pos.len() {
            let Some(pairs) = by_sum.get(&k) else { continue };
            let xi = &pos[k];
            let (a0, b0) = *pairs.iter().min().unwrap();
            let (ra0, rb0) = (&pos[a0], &pos[b0]);
            let n0 = p_of(rs, ra0, rb0) + 1;
            b.pos.insert((a0, b0), n0);
            let xx = b.len2(xi);
            for &(a, bb) in pairs {
                if (a, bb) == (a0, b0) {
                    continue;
                }
                let (ra, rb) = (&pos[a], &pos[bb]);
                let na0 = ra0.neg();
                let nb0 = rb0.neg();
                let mut t = Q::from_integer(0.into());
                let bma = rb.sub(ra0);
                if rs.is_root(&bma) {
                    t += qf(b.n(rb, &na0) * b.n(ra, &nb0), b.len2(&bma));
                }
                let ama = ra.sub(ra0);
                if rs.is_root(&ama) {
                    t += qf(b.n(&na0, ra) * b.n(rb, &nb0), b.len2(&ama));
                }
                let v = t * q(xx) / q(n0);
                if !v.is_integer() {
                    return Err(Error::Jacobi(format!("non-integral constant for {ra} + {rb}")));
                }
                let v: i64 = v.to_integer().try_into().expect("small constant");
                b.pos.insert((a, bb), v);
            }
        }
        Ok(b.pos)
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn root_system_arc(&self) -> Arc<RootSystem> {
        self.rs.clone()
    }

    /// Chevalley constant by global root indices (0 if the sum is not a root).
    pub fn n_idx(&self, i: usize, j: usize) -> i64 {
        self.n[i * self.nroots + j]
    }

    pub fn sum_idx(&self, i: usize, j: usize) -> Option<usize> {
        self.sum[i * self.nroots + j].map(|k| k as usize)
    }

    /// `m_{α,β}` when `α+β` is a root.
    pub fn constant(&self, alpha: &Root, beta: &Root) -> Option<Q> {
        let (i, j) = (self.rs.index_of(alpha)?, self.rs.index_of(beta)?);
        self.sum_idx(i, j).map(|_| q(self.n_idx(i, j)))
    }

    /// `(m_{α,β}, α+β)` if `α+β` is a root, `None` otherwise.
    pub fn bracket(&self, alpha: &Root, beta: &Root) -> Result<Option<(Q, Root)>> {
        let i = self.rs.index_of(alpha).ok_or_else(|| Error::NotARoot(alpha.to_string()))?;
        let j = self.rs.index_of(beta).ok_or_else(|| Error::NotARoot(beta.to_string()))?;
        Ok(self.sum_idx(i, j).map(|k| (q(self.n_idx(i, j)), self.rs.root(k))))
    }

    /// Constant for the rescaled basis `X_γ = E_γ` (γ < 0), `X_γ = ⟨γ,γ⟩/2 · E_γ`
    /// (γ > 0), which pairs `X_γ` with `X_{-γ}` to 1 under the invariant form.
    pub fn killing_constant(&self, alpha: &Root, beta: &Root) -> Option<Q> {
        let (i, j) = (self.rs.index_of(alpha)?, self.rs.index_of(beta)?);
        self.killing_constant_idx(i, j)
    }

    pub fn killing_constant_idx(&self, i: usize, j: usize) -> Option<Q> {
        let k = self.sum_idx(i, j)?;
        let c = |idx: usize| -> Q {
            if idx < self.rs.num_positive() {
                let r = self.rs.root(idx);
                qf(self.rs.form(&r.coeffs, &r.coeffs), 2)
            } else {
                q(1)
            }
        };
        Some(q(self.n_idx(i, j)) * c(i) * c(j) / c(k))
    }

    /// For `[X_γ, X_α] = 0`, Jacobi gives `m_{α,β} m_{γ,α+β} = m_{γ,β} m_{α,β+γ}`.
    /// Returns both sides; absent brackets count as 0.
    pub fn jacobi_products(&self, alpha: &Root, beta: &Root, gamma: &Root) -> Result<(Q, Q)> {
        for r in [alpha, beta, gamma] {
            if !self.rs.is_root(r) {
                return Err(Error::NotARoot(r.to_string()));
            }
        }
        let ga = gamma.add(alpha);
        if ga.is_zero() || self.rs.is_root(&ga) {
            return Err(Error::InvariantViolation(format!("[X_{gamma}, X_{alpha}] is not zero")));
        }
        let m = |a: &Root, b: &Root| self.constant(a, b).unwrap_or_else(Q::zero);
        let lhs = if self.rs.is_root(&alpha.add(beta)) { m(alpha, beta) * m(gamma, &alpha.add(beta)) } else { Q::zero() };
        let rhs = if self.rs.is_root(&beta.add(gamma)) { m(gamma, beta) * m(alpha, &beta.add(gamma)) } else { Q::zero() };
        Ok((lhs, rhs))
    }

    /// Dimension of the algebra: rank plus number of roots.
    pub fn algebra_dim(&self) -> usize {
        self.rs.rank() + self.nroots
    }

    /// Bracket of two basis elements of 𝔤. Indices `0..l` are the simple
    /// coroots `H_i`, the rest are `E_α` by global root index.
    pub fn basis_bracket(&self, a: usize, b: usize) -> Vec<(usize, i64)> {
        let l = self.rs.rank();
        match (a < l, b < l) {
            (true, true) => vec![],
            (true, false) => self.cartan_action(a, b - l),
            (false, true) => self.cartan_action(b, a - l).into_iter().map(|(k, c)| (k, -c)).collect(),
            (false, false) => {
                let (i, j) = (a - l, b - l);
                let np = self.rs.num_positive();
                if (i + np) % self.nroots == j && i != j {
                    // [E_α, E_{-α}] = H_α, and [E_{-α}, E_α] = -H_α
                    let (pos, sign) = if i < np { (i, 1) } else { (j, -1) };
                    return self.coroot(pos).into_iter().map(|(k, c)| (k, sign * c)).collect();
                }
                match self.sum_idx(i, j) {
                    Some(k) => vec![(k + l, self.n_idx(i, j))],
                    None => vec![],
                }
            }
        }
    }

    fn cartan_action(&self, h: usize, r: usize) -> Vec<(usize, i64)> {
        let root = self.rs.root(r);
        let simple = Root::simple(self.rs.rank(), h);
        let c = self.rs.coroot_pairing(&simple, &root);
        if c == 0 {
            vec![]
        } else {
            vec![(r + self.rs.rank(), c)]
        }
    }

    /// `H_α` in terms of the simple coroots, for a positive root index.
    fn coroot(&self, pos: usize) -> Vec<(usize, i64)> {
        let r = self.rs.root(pos);
        let rr = self.rs.form(&r.coeffs, &r.coeffs);
        let mut out = Vec::new();
        for (i, &c) in r.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let s = Root::simple(self.rs.rank(), i);
            let ss = self.rs.form(&s.coeffs, &s.coeffs);
            debug_assert_eq!((c as i64 * ss) % rr, 0);
            out.push((i, c as i64 * ss / rr));
        }
        out
    }

    fn check_axioms(&self) -> Result<()> {
        let rs = &self.rs;
        let np = rs.num_positive();
        let neg = |i: usize| (i + np) % self.nroots;
        for i in 0..self.nroots {
            for j in 0..self.nroots {
                let Some(_) = self.sum_idx(i, j) else { continue };
                let v = self.n_idx(i, j);
                if v != -self.n_idx(j, i) || v != -self.n_idx(neg(i), neg(j)) {
                    return Err(Error::Jacobi(format!("symmetry fails at ({}, {})", rs.root(i), rs.root(j))));
                }
                if v.abs() != p_of(rs, &rs.root(i), &rs.root(j)) + 1 {
                    return Err(Error::Jacobi(format!("|N| ≠ p+1 at ({}, {})", rs.root(i), rs.root(j))));
                }
            }
        }
        Ok(())
    }

    /// Exhaustive Jacobi identity over all basis triples of 𝔤, including
    /// the Cartan part.
    pub fn check_jacobi(&self) -> Result<()> {
        let dim = self.algebra_dim();
        let mut acc = vec![0i64; dim];
        let mut touched = Vec::new();
        for a in 0..dim {
            for b in a + 1..dim {
                let ab = self.basis_bracket(a, b);
                for c in b + 1..dim {
                    let bc = self.basis_bracket(b, c);
                    let ca = self.basis_bracket(c, a);
                    for (terms, last) in [(&ab, c), (&bc, a), (&ca, b)] {
                        for &(k, x) in terms {
                            for (m, y) in self.basis_bracket(k, last) {
                                if acc[m] == 0 {
                                    touched.push(m);
                                }
                                acc[m] += x * y;
                            }
                        }
                    }
                    for &m in &touched {
                        if acc[m] != 0 {
                            return Err(Error::Jacobi(format!("basis triple ({a}, {b}, {c})")));
                        }
                    }
                    for m in touched.drain(..) {
                        acc[m] = 0;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Largest `p` with `β - pα` a root.
pub fn p_of(rs: &RootSystem, alpha: &Root, beta: &Root) -> i64 {
    let mut p = 0;
    let mut r = beta.sub(alpha);
    while rs.is_root(&r) {
        p += 1;
        r = r.sub(alpha);
    }
    p
}
