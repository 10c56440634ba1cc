//! Courant bracket and Nijenhuis operator on 𝔫⁻ ⊕ (𝔫⁻)* at the origin.
//!
//! On basis elements:
//! `[X_α, X_β] = m_{α,β} X_{α+β}`, `[X_α, X*_β] = m_{α,-β} X*_{β-α}` and
//! `[X*_α, X*_β] = 0`, with terms dropped when the target root leaves the
//! complement set. Here `m` are the constants of the rescaled basis that
//! pairs `X_γ` with `X_{-γ}` to 1, so `[X_α, X*_β]` is the coadjoint action.

use num_traits::Zero;

use crate::chevalley::StructureConstants;
use crate::error::{Error, Result};
use crate::gtangent::{plus_i_eigenspace, GVector, InvariantGacs};
use crate::rootsys::FlagSpec;
use crate::scalar::{qf, GQ, Q};

#[derive(Debug, Clone)]
pub struct CourantAlgebra {
    flag: FlagSpec,
    n: usize,
    /// `[X_i, X_j] = c X_k`
    tt: Vec<Option<(usize, Q)>>,
    /// `[X_i, X*_j] = c X*_k`
    tc: Vec<Option<(usize, Q)>>,
}

impl CourantAlgebra {
    pub fn new(sc: &StructureConstants, fs: &FlagSpec) -> Result<Self> {
        let rs = sc.root_system();
        if rs.lie_type != fs.lie_type() {
            return Err(Error::FlagMismatch);
        }
        let roots = fs.complement_roots();
        let n = roots.len();
        let gidx: Vec<usize> = roots.iter().map(|r| rs.index_of(r).unwrap()).collect();
        let mut tt = vec![None; n * n];
        let mut tc = vec![None; n * n];
        for i in 0..n {
            for j in 0..n {
                if let Some(k) = fs.complement_index(&roots[i].add(&roots[j])) {
                    let c = sc.killing_constant_idx(gidx[i], gidx[j]).unwrap();
                    tt[i * n + j] = Some((k, c));
                }
                if let Some(k) = fs.complement_index(&roots[j].sub(&roots[i])) {
                    let minus_j = rs.index_of(&roots[j].neg()).unwrap();
                    let c = sc.killing_constant_idx(gidx[i], minus_j).unwrap();
                    tc[i * n + j] = Some((k, c));
                }
            }
        }
        Ok(CourantAlgebra { flag: fs.clone(), n, tt, tc })
    }

    pub fn flag(&self) -> &FlagSpec {
        &self.flag
    }

    /// `[X_i, X_j]` by complement indices.
    pub fn tangent_bracket(&self, i: usize, j: usize) -> Option<(usize, &Q)> {
        self.tt[i * self.n + j].as_ref().map(|(k, c)| (*k, c))
    }

    /// `[X_i, X*_j]` by complement indices.
    pub fn mixed_bracket(&self, i: usize, j: usize) -> Option<(usize, &Q)> {
        self.tc[i * self.n + j].as_ref().map(|(k, c)| (*k, c))
    }

    fn check(&self, v: &GVector) -> Result<()> {
        if v.flag_key() != self.flag.key() || v.n() != self.n {
            return Err(Error::FlagMismatch);
        }
        Ok(())
    }

    pub fn courant_bracket(&self, u: &GVector, v: &GVector) -> Result<GVector> {
        self.check(u)?;
        self.check(v)?;
        let n = self.n;
        let mut out = GVector::zero(&self.flag);
        for (a, x) in u.nonzero() {
            for (b, y) in v.nonzero() {
                let term = match (a < n, b < n) {
                    (true, true) => self.tangent_bracket(a, b),
                    (true, false) => self.mixed_bracket(a, b - n).map(|(k, c)| (k + n, c)),
                    (false, true) => self.mixed_bracket(b, a - n).map(|(k, c)| (k + n, c)),
                    (false, false) => None,
                };
                if let Some((k, c)) = term {
                    let mut t = (x * y).scale(c);
                    if a >= n && b < n {
                        t = -t;
                    }
                    out.add_at(k, &t);
                }
            }
        }
        Ok(out)
    }

    /// Lie bracket of the tangent parts.
    fn lie(&self, u: &GVector, v: &GVector) -> Vec<GQ> {
        let n = self.n;
        let mut out = vec![GQ::zero(); n];
        for (a, x) in u.nonzero().filter(|(a, _)| *a < n) {
            for (b, y) in v.nonzero().filter(|(b, _)| *b < n) {
                if let Some((k, c)) = self.tangent_bracket(a, b) {
                    out[k] += &(x * y).scale(c);
                }
            }
        }
        out
    }

    fn dual(&self, xi: &GVector, y: &[GQ]) -> GQ {
        let mut s = GQ::zero();
        for (k, c) in xi.cotangent_part().iter().enumerate() {
            if !c.is_zero() && !y[k].is_zero() {
                s += &(c * &y[k]);
            }
        }
        s
    }

    /// `Nij(A,B,C) = ½(A*([B,C]) + B*([C,A]) + C*([A,B]))` on tangent parts.
    pub fn nijenhuis_operator(&self, a: &GVector, b: &GVector, c: &GVector) -> Result<GQ> {
        for v in [a, b, c] {
            self.check(v)?;
        }
        let s = &(&self.dual(a, &self.lie(b, c)) + &self.dual(b, &self.lie(c, a))) + &self.dual(c, &self.lie(a, b));
        Ok(s.scale(&qf(1, 2)))
    }

    /// `N_J(A,B) = [JA,JB] − [A,B] − J[A,JB] − J[JA,B]`.
    pub fn nijenhuis_tensor(&self, j: &InvariantGacs, a: &GVector, b: &GVector) -> Result<GVector> {
        let ja = j.apply(a)?;
        let jb = j.apply(b)?;
        let t1 = self.courant_bracket(&ja, &jb)?;
        let t2 = self.courant_bracket(a, b)?;
        let t3 = j.apply(&self.courant_bracket(a, &jb)?)?;
        let t4 = j.apply(&self.courant_bracket(&ja, b)?)?;
        t1.sub(&t2)?.sub(&t3)?.sub(&t4)
    }

    /// `(J − i) w`, which vanishes exactly when `w ∈ L`.
    pub fn l_residual(&self, j: &InvariantGacs, w: &GVector) -> Result<GVector> {
        j.apply(w)?.sub(&w.scale(&GQ::i()))
    }

    /// Tests `[u,v] ∈ L` for all pairs of an `L` basis.
    pub fn check_integrability(&self, j: &InvariantGacs) -> Result<Verdict> {
        if j.flag() != &self.flag {
            return Err(Error::FlagMismatch);
        }
        let l = plus_i_eigenspace(j);
        for p in 0..l.len() {
            for q in p + 1..l.len() {
                let w = self.courant_bracket(&l[p], &l[q])?;
                let r = self.l_residual(j, &w)?;
                if r.is_zero() {
                    continue;
                }
                let witness = Witness {
                    kind: WitnessKind::PairNotInL,
                    indices: vec![p, q],
                    elements: vec![l[p].clone(), l[q].clone()],
                    value: WitnessValue::Residual(r),
                };
                let mut nij_witness = None;
                for (s, w) in l.iter().enumerate() {
                    let val = self.nijenhuis_operator(&l[p], &l[q], w)?;
                    if !val.is_zero() {
                        nij_witness = Some(Witness {
                            kind: WitnessKind::NijNonzero,
                            indices: vec![p, q, s],
                            elements: vec![l[p].clone(), l[q].clone(), w.clone()],
                            value: WitnessValue::Scalar(val),
                        });
                        break;
                    }
                }
                return Ok(Verdict::NotIntegrable { witness, nij_witness });
            }
        }
        Ok(Verdict::Integrable)
    }

    /// Scans all triples of an `L` basis for a nonzero Nij value.
    pub fn nij_on_l(&self, j: &InvariantGacs) -> Result<Option<Witness>> {
        let l = plus_i_eigenspace(j);
        for p in 0..l.len() {
            for q in p + 1..l.len() {
                for s in q + 1..l.len() {
                    let val = self.nijenhuis_operator(&l[p], &l[q], &l[s])?;
                    if !val.is_zero() {
                        return Ok(Some(Witness {
                            kind: WitnessKind::NijNonzero,
                            indices: vec![p, q, s],
                            elements: vec![l[p].clone(), l[q].clone(), l[s].clone()],
                            value: WitnessValue::Scalar(val),
                        }));
                    }
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    PairNotInL,
    NijNonzero,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessValue {
    Scalar(GQ),
    Residual(GVector),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub kind: WitnessKind,
    /// Positions of the elements in the `L` basis.
    pub indices: Vec<usize>,
    pub elements: Vec<GVector>,
    pub value: WitnessValue,
}

impl Witness {
    /// Recomputes the witness from its elements: they must lie in `L` and
    /// reproduce the stored nonzero value exactly.
    pub fn reverify(&self, ca: &CourantAlgebra, j: &InvariantGacs) -> Result<bool> {
        for e in &self.elements {
            if !ca.l_residual(j, e)?.is_zero() {
                return Ok(false);
            }
        }
        match (&self.kind, &self.value, self.elements.as_slice()) {
            (WitnessKind::PairNotInL, WitnessValue::Residual(r), [u, v]) => {
                let w = ca.courant_bracket(u, v)?;
                let again = ca.l_residual(j, &w)?;
                Ok(!again.is_zero() && &again == r)
            }
            (WitnessKind::NijNonzero, WitnessValue::Scalar(x), [a, b, c]) => {
                let again = ca.nijenhuis_operator(a, b, c)?;
                Ok(!again.is_zero() && &again == x)
            }
            _ => Ok(false),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Integrable,
    NotIntegrable { witness: Witness, nij_witness: Option<Witness> },
}

impl Verdict {
    pub fn is_integrable(&self) -> bool {
        matches!(self, Verdict::Integrable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chevalley::build_structure_constants;
    use crate::gtangent::{assemble, in_span, pairing_q, random_gacs, BlockKind, GcsBlock};
    use crate::mclass::compute_classes;
    use crate::rootsys::{Family, LieType};
    use crate::scalar::q;
    use num_traits::One;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(f: Family, l: usize, theta: &[usize]) -> (CourantAlgebra, FlagSpec) {
        let fs = FlagSpec::from_type(LieType::new(f, l).unwrap(), theta).unwrap();
        let sc = build_structure_constants(fs.root_system_arc()).unwrap();
        (CourantAlgebra::new(&sc, &fs).unwrap(), fs)
    }

    fn real(fs: &FlagSpec, k: usize) -> GVector {
        GVector::basis(fs, k)
    }

    #[test]
    fn basic_brackets() {
        let (ca, fs) = setup(Family::B, 2, &[]);
        let n = fs.dim();
        let rs = fs.root_system();
        for i in 0..n {
            assert!(ca.courant_bracket(&real(&fs, n + i), &real(&fs, n + (i + 1) % n)).unwrap().is_zero());
            assert!(ca.courant_bracket(&real(&fs, i), &real(&fs, i)).unwrap().is_zero());
        }
        let a = fs.complement_index(&rs.parse_root("λ2-λ1").unwrap()).unwrap();
        let b = fs.complement_index(&rs.parse_root("-λ2").unwrap()).unwrap();
        let c = fs.complement_index(&rs.parse_root("-λ1").unwrap()).unwrap();
        let w = ca.courant_bracket(&real(&fs, a), &real(&fs, b)).unwrap();
        assert!(!w.get(c).is_zero());
        assert_eq!(w.nonzero().count(), 1);
    }

    #[test]
    fn bracket_is_antisymmetric_and_matches_coadjoint() {
        let (ca, fs) = setup(Family::G, 2, &[]);
        let n = fs.dim();
        for a in 0..2 * n {
            for b in 0..2 * n {
                let x = ca.courant_bracket(&real(&fs, a), &real(&fs, b)).unwrap();
                let y = ca.courant_bracket(&real(&fs, b), &real(&fs, a)).unwrap();
                assert_eq!(x, y.scale(&GQ::from_int(-1)));
            }
        }
        // (ad*_X ξ)(Y) = −ξ([X, Y])
        for i in 0..n {
            for j in 0..n {
                let lhs = ca.courant_bracket(&real(&fs, i), &real(&fs, n + j)).unwrap();
                for y in 0..n {
                    let xy = ca.courant_bracket(&real(&fs, i), &real(&fs, y)).unwrap();
                    assert_eq!(lhs.get(n + y), &-xy.get(j).clone());
                }
            }
        }
    }

    #[test]
    fn nij_corollary_pattern() {
        let (ca, fs) = setup(Family::B, 2, &[]);
        let n = fs.dim();
        for i in 0..n {
            for j in 0..n {
                if let Some((k, m)) = ca.tangent_bracket(i, j) {
                    let half = GQ::real(m * qf(1, 2));
                    let v = ca.nijenhuis_operator(&real(&fs, i), &real(&fs, j), &real(&fs, n + k)).unwrap();
                    assert_eq!(v, half);
                    let w = ca.nijenhuis_operator(&real(&fs, i), &real(&fs, n + k), &real(&fs, j)).unwrap();
                    assert_eq!(w, -&half);
                    let cyc = ca.nijenhuis_operator(&real(&fs, n + k), &real(&fs, i), &real(&fs, j)).unwrap();
                    assert_eq!(cyc, half);
                }
                assert!(ca.nijenhuis_operator(&real(&fs, i), &real(&fs, j), &real(&fs, (i + j) % n)).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn nij_equals_pairing_form() {
        // ⅓(⟨[A,B],C⟩ + cyclic) with the ½-pairing agrees with the direct formula.
        let (ca, fs) = setup(Family::A, 3, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        use rand::Rng;
        for _ in 0..20 {
            let mut rv = || {
                let c = (0..2 * fs.dim()).map(|_| GQ::new(q(rng.gen_range(-3..=3)), q(rng.gen_range(-3..=3)))).collect();
                GVector::from_coeffs(&fs, c).unwrap()
            };
            let (a, b, c) = (rv(), rv(), rv());
            let t = |x: &GVector, y: &GVector, z: &GVector| pairing_q(&ca.courant_bracket(x, y).unwrap(), z).unwrap();
            let s = &(&t(&a, &b, &c) + &t(&b, &c, &a)) + &t(&c, &a, &b);
            assert_eq!(s.scale(&qf(1, 3)), ca.nijenhuis_operator(&a, &b, &c).unwrap());
        }
    }

    #[test]
    fn b2_all_complex_witness() {
        let (ca, fs) = setup(Family::B, 2, &[]);
        let j = assemble(&fs, vec![GcsBlock::complex(q(2), q(3)).unwrap(), GcsBlock::complex(q(-1), q(5)).unwrap()]).unwrap();
        let Verdict::NotIntegrable { witness, nij_witness } = ca.check_integrability(&j).unwrap() else {
            panic!("expected a witness")
        };
        assert!(witness.reverify(&ca, &j).unwrap());
        let nw = nij_witness.unwrap();
        assert!(nw.reverify(&ca, &j).unwrap());
        let [u, v] = &witness.elements[..] else { unreachable!() };
        assert!(!in_span(&crate::gtangent::plus_i_eigenspace(&j), &ca.courant_bracket(u, v).unwrap()));
    }

    #[test]
    fn abelian_flag_is_integrable() {
        // Θ = {α1, α3} in A3: 𝔫_Θ⁻ is abelian and all brackets vanish.
        let (ca, fs) = setup(Family::A, 3, &[0, 2]);
        let classes = compute_classes(&fs);
        assert_eq!(classes.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for combo in crate::gtangent::all_combinations(&classes) {
            let j = random_gacs(&fs, &combo, &mut rng).unwrap();
            assert!(ca.check_integrability(&j).unwrap().is_integrable());
            assert!(ca.nij_on_l(&j).unwrap().is_none());
        }
    }

    #[test]
    fn g2_all_noncomplex_not_integrable() {
        let (ca, fs) = setup(Family::G, 2, &[]);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..10 {
            let j = random_gacs(&fs, &[BlockKind::NonComplex; 3], &mut rng).unwrap();
            let v = ca.check_integrability(&j).unwrap();
            assert!(!v.is_integrable());
            assert!(ca.nij_on_l(&j).unwrap().is_some());
        }
    }

    #[test]
    fn nijenhuis_tensor_examples() {
        let (ca, fs) = setup(Family::B, 2, &[]);
        let sym = GcsBlock::symplectic(q(1)).unwrap();
        let j = assemble(&fs, vec![sym.clone(), sym]).unwrap();
        let rs = fs.root_system();
        let a = fs.complement_index(&rs.parse_root("λ2-λ1").unwrap()).unwrap();
        let b = fs.complement_index(&rs.parse_root("-λ2").unwrap()).unwrap();
        assert!(!ca.nijenhuis_tensor(&j, &real(&fs, a), &real(&fs, b)).unwrap().is_zero());
        assert!(ca.nijenhuis_tensor(&j, &real(&fs, a), &real(&fs, a)).unwrap().is_zero());
    }

    #[test]
    fn c_family_noncomplex_tensor() {
        // N_J(X_α, X_β) = (a²−1)m X_{α+β} − 2am J X_{α+β} for a noncomplex block on {α, β}
        let (ca, fs) = setup(Family::C, 2, &[]);
        let rs = fs.root_system();
        let a_i = fs.complement_index(&rs.parse_root("λ2-λ1").unwrap()).unwrap();
        let b_i = fs.complement_index(&rs.parse_root("-λ1-λ2").unwrap()).unwrap();
        let (g_i, m) = ca.tangent_bracket(a_i, b_i).map(|(k, m)| (k, m.clone())).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let j = random_gacs(&fs, &[BlockKind::NonComplex; 2], &mut rng).unwrap();
            let k = j.classes().iter().position(|c| c.members.contains(&rs.root(rs.index_of(&fs.complement_roots()[a_i]).unwrap()))).unwrap();
            let GcsBlock::NonComplexType { a, .. } = &j.blocks()[k] else { panic!() };
            let a = GQ::real(a.clone());
            let m = GQ::real(m.clone());
            let xg = real(&fs, g_i);
            let lhs = ca.nijenhuis_tensor(&j, &real(&fs, a_i), &real(&fs, b_i)).unwrap();
            let rhs = xg
                .scale(&(&(&(&a * &a) - &GQ::one()) * &m))
                .sub(&j.apply(&xg).unwrap().scale(&(&(&a * &m) * &GQ::from_int(2))))
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn mismatched_flags_rejected() {
        let (ca, fs) = setup(Family::B, 2, &[]);
        let (_, other) = setup(Family::G, 2, &[]);
        assert_eq!(ca.courant_bracket(&real(&fs, 0), &real(&other, 0)), Err(Error::FlagMismatch));
    }

    mod props {
        use super::*;
        use proptest::collection::vec;
        use proptest::prelude::*;

        fn gvec(fs: &FlagSpec, raw: &[(i64, i64)]) -> GVector {
            GVector::from_coeffs(fs, raw.iter().map(|&(a, b)| GQ::new(q(a), q(b))).collect()).unwrap()
        }

        fn entries() -> impl Strategy<Value = Vec<(i64, i64)>> {
            vec((-3i64..=3, -3i64..=3), 12)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn bracket_antisymmetric(u in entries(), v in entries()) {
                let (ca, fs) = setup(Family::G, 2, &[]);
                let (u, v) = (gvec(&fs, &u), gvec(&fs, &v));
                let uv = ca.courant_bracket(&u, &v).unwrap();
                let vu = ca.courant_bracket(&v, &u).unwrap();
                prop_assert_eq!(uv, vu.scale(&GQ::from_int(-1)));
            }

            #[test]
            fn nij_totally_skew(a in entries(), b in entries(), c in entries()) {
                let (ca, fs) = setup(Family::G, 2, &[]);
                let (a, b, c) = (gvec(&fs, &a), gvec(&fs, &b), gvec(&fs, &c));
                let abc = ca.nijenhuis_operator(&a, &b, &c).unwrap();
                prop_assert_eq!(&abc, &ca.nijenhuis_operator(&b, &c, &a).unwrap());
                prop_assert_eq!(&abc, &-ca.nijenhuis_operator(&b, &a, &c).unwrap());
            }

            #[test]
            fn nij_trilinear(a in entries(), b in entries(), c in entries(), k in -4i64..=4) {
                let (ca, fs) = setup(Family::G, 2, &[]);
                let (a, b, c) = (gvec(&fs, &a), gvec(&fs, &b), gvec(&fs, &c));
                let s = GQ::new(q(k), q(1));
                let lhs = ca.nijenhuis_operator(&a.scale(&s).add(&b).unwrap(), &b, &c).unwrap();
                let rhs = &(&ca.nijenhuis_operator(&a, &b, &c).unwrap() * &s) + &ca.nijenhuis_operator(&b, &b, &c).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn random_structures_never_integrable(seed in any::<u64>()) {
                let (ca, fs) = setup(Family::B, 2, &[]);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let combo = crate::gtangent::random_combination(&compute_classes(&fs), &mut rng);
                let j = random_gacs(&fs, &combo, &mut rng).unwrap();
                match ca.check_integrability(&j).unwrap() {
                    Verdict::Integrable => prop_assert!(false, "integrable structure {:?}", j.blocks()),
                    Verdict::NotIntegrable { witness, .. } => prop_assert!(witness.reverify(&ca, &j).unwrap()),
                }
            }
        }
    }
}
