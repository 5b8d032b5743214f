//! Rational apartment points, affine roots, the Frobenius action on them,
//! and the per-point filtration profile (depths `m_alpha`, fractional parts
//! `eps_alpha`, jumps, and the partition of the roots by jump).

use crate::error::{Error, Result};
use crate::root_datum::{Rat, RootDatum, WeylElement};
use num::{One, Zero};
use serde::Serialize;

/// A rational point of the apartment, stored as the offset `v = x - x_0`
/// in cocharacter coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApartmentPoint {
    pub offset: Vec<Rat>,
}

impl ApartmentPoint {
    pub fn origin(dim: usize) -> Self {
        ApartmentPoint {
            offset: vec![Rat::zero(); dim],
        }
    }

    pub fn new(offset: Vec<Rat>) -> Self {
        ApartmentPoint { offset }
    }
}

/// Affine root `(alpha, m)`, the function `x -> <alpha, x - x_0> + m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AffineRoot {
    pub root: usize,
    pub level: i64,
}

impl AffineRoot {
    pub fn eval(&self, datum: &RootDatum, x: &ApartmentPoint) -> Rat {
        datum.pair_rat(&datum.roots[self.root], &x.offset) + Rat::from_integer(self.level)
    }
}

/// Per-root record of the filtration profile.
#[derive(Clone, Debug, Serialize)]
pub struct RootRecord {
    pub root: usize,
    pub m: i64,
    #[serde(with = "crate::report::rat_string")]
    pub eps: Rat,
    pub reductive: bool,
}

/// The filtration profile of an apartment point: exact `m_alpha`,
/// `eps_alpha`, reductive flags, the ordered jumps, and the partition of
/// the roots by jump value.
#[derive(Clone, Debug)]
pub struct FiltrationProfile {
    pub records: Vec<RootRecord>,
    /// `eps_1 < ... < eps_s < eps_{s+1} = 1`; 1 is a jump by definition.
    pub jumps: Vec<Rat>,
    /// `phi[i]` lists the roots of `Phi_{i+1}` (0-based storage): for
    /// `i < s` the roots with `eps = jumps[i]`, and `phi[s]` the reductive
    /// roots.
    pub phi: Vec<Vec<usize>>,
}

impl FiltrationProfile {
    pub fn m(&self, alpha: usize) -> i64 {
        self.records[alpha].m
    }

    pub fn eps(&self, alpha: usize) -> Rat {
        self.records[alpha].eps
    }

    pub fn reductive(&self, alpha: usize) -> bool {
        self.records[alpha].reductive
    }

    /// Number of strict jumps `s` (so `jumps.len() == s + 1`).
    pub fn s(&self) -> usize {
        self.jumps.len() - 1
    }

    /// 1-based jump index of a root: `s+1` for reductive roots, otherwise
    /// the `i` with `eps_alpha = eps_i`.
    pub fn jump_index(&self, alpha: usize) -> usize {
        if self.reductive(alpha) {
            self.s() + 1
        } else {
            1 + self
                .jumps
                .iter()
                .position(|&j| j == self.eps(alpha))
                .expect("eps of a non-reductive root is a jump")
        }
    }

    pub fn any_nonreductive(&self) -> bool {
        self.records.iter().any(|r| !r.reductive)
    }
}

/// Compute the filtration profile of `x`.
pub fn profile(datum: &RootDatum, x: &ApartmentPoint) -> FiltrationProfile {
    let mut records = Vec::with_capacity(datum.n_roots());
    for (idx, root) in datum.roots.iter().enumerate() {
        let val = datum.pair_rat(root, &x.offset);
        let m = -val.floor().to_integer();
        let eps = val + Rat::from_integer(m);
        records.push(RootRecord {
            root: idx,
            m,
            eps,
            reductive: eps.is_zero(),
        });
    }
    let mut jumps: Vec<Rat> = records
        .iter()
        .filter(|r| !r.reductive)
        .map(|r| r.eps)
        .collect();
    jumps.sort();
    jumps.dedup();
    jumps.push(Rat::one());
    let s = jumps.len() - 1;
    let mut phi = vec![Vec::new(); s + 1];
    for r in &records {
        if r.reductive {
            phi[s].push(r.root);
        } else {
            let i = jumps.iter().position(|&j| j == r.eps).unwrap();
            phi[i].push(r.root);
        }
    }
    FiltrationProfile { records, jumps, phi }
}

/// A twisted Frobenius acting on the apartment: a lattice automorphism
/// permuting the roots, a basepoint shift `sigma(x_0) - x_0`, the residue
/// cardinality `q`, and an optional inner-twist tag for group-level models.
#[derive(Clone, Debug)]
pub struct TwistedFrobenius {
    pub q: u32,
    /// Action on the character lattice.
    pub mat_star: Vec<Vec<i64>>,
    /// Action on the cocharacter lattice.
    pub mat_costar: Vec<Vec<i64>>,
    /// Induced permutation of root indices.
    pub perm: Vec<usize>,
    pub shift: Vec<Rat>,
    pub inner_twist: Option<String>,
}

impl TwistedFrobenius {
    /// Split Frobenius: trivial on the lattice, no shift.
    pub fn split(datum: &RootDatum, q: u32) -> Self {
        let w = datum.weyl_identity();
        TwistedFrobenius {
            q,
            mat_star: w.mat_star,
            mat_costar: w.mat_costar,
            perm: w.perm,
            shift: vec![Rat::zero(); datum.dim],
            inner_twist: None,
        }
    }

    /// Frobenius acting through a Weyl element, with an optional shift.
    pub fn from_weyl(datum: &RootDatum, q: u32, w: &WeylElement, shift: Vec<Rat>) -> Result<Self> {
        let tf = TwistedFrobenius {
            q,
            mat_star: w.mat_star.clone(),
            mat_costar: w.mat_costar.clone(),
            perm: w.perm.clone(),
            shift,
            inner_twist: None,
        };
        tf.check(datum)?;
        Ok(tf)
    }

    /// Arbitrary lattice automorphism (e.g. a permutation not stabilizing the
    /// standard alcove), with shift.
    pub fn from_lattice_action(
        datum: &RootDatum,
        q: u32,
        mat_star: Vec<Vec<i64>>,
        mat_costar: Vec<Vec<i64>>,
        shift: Vec<Rat>,
        inner_twist: Option<String>,
    ) -> Result<Self> {
        let perm = datum
            .roots
            .iter()
            .map(|r| {
                let img: Vec<i64> = (0..datum.dim)
                    .map(|i| (0..datum.dim).map(|j| mat_star[i][j] * r[j]).sum())
                    .collect();
                datum
                    .root_index(&img)
                    .ok_or_else(|| Error::Config("lattice action does not permute the roots".into()))
            })
            .collect::<Result<Vec<usize>>>()?;
        let tf = TwistedFrobenius {
            q,
            mat_star,
            mat_costar,
            perm,
            shift,
            inner_twist,
        };
        tf.check(datum)?;
        Ok(tf)
    }

    fn check(&self, datum: &RootDatum) -> Result<()> {
        // pairing consistency <alpha, lam> = <sigma(alpha), sigma(lam)>
        for i in 0..datum.dim {
            let mut e = vec![0i64; datum.dim];
            e[i] = 1;
            let se: Vec<i64> = (0..datum.dim)
                .map(|r| (0..datum.dim).map(|c| self.mat_star[r][c] * e[c]).sum())
                .collect();
            for j in 0..datum.dim {
                let mut f = vec![0i64; datum.dim];
                f[j] = 1;
                let sf: Vec<i64> = (0..datum.dim)
                    .map(|r| (0..datum.dim).map(|c| self.mat_costar[r][c] * f[c]).sum())
                    .collect();
                if datum.pair(&e, &f) != datum.pair(&se, &sf) {
                    return Err(Error::Config(
                        "lattice action does not preserve the pairing".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `<alpha, sigma(x_0) - x_0>`; must be an integer for the affine action
    /// to be defined.
    pub fn shift_pairing(&self, datum: &RootDatum, alpha: usize) -> Result<i64> {
        let v = datum.pair_rat(&datum.roots[alpha], &self.shift);
        if !v.is_integer() {
            return Err(Error::Config(format!(
                "<alpha, shift> = {v} is not integral for root {alpha}"
            )));
        }
        Ok(v.to_integer())
    }

    /// Whether `x` is fixed by the affine action (sigma-stable point).
    pub fn stabilizes(&self, datum: &RootDatum, x: &ApartmentPoint) -> bool {
        // sigma(x_0 + v) = x_0 + shift + sigma_*(v)
        let img: Vec<Rat> = (0..datum.dim)
            .map(|i| {
                let mut acc = self.shift[i];
                for j in 0..datum.dim {
                    acc += Rat::from_integer(self.mat_costar[i][j]) * x.offset[j];
                }
                acc
            })
            .collect();
        // Compare through root pairings: only those are observable.
        datum
            .roots
            .iter()
            .all(|r| datum.pair_rat(r, &img) == datum.pair_rat(r, &x.offset))
    }
}

/// The Frobenius action on affine roots:
/// `sigma(alpha, m) = (sigma(alpha), m - <alpha, sigma(x_0) - x_0>)`.
pub fn affine_frobenius(
    datum: &RootDatum,
    sigma: &TwistedFrobenius,
    psi: &AffineRoot,
) -> Result<AffineRoot> {
    let pairing = sigma.shift_pairing(datum, psi.root)?;
    Ok(AffineRoot {
        root: sigma.perm[psi.root],
        level: psi.level - pairing,
    })
}

/// Valuation index of the affine root group presenting `U_{alpha,r}^a`:
/// `m_alpha + a` for reductive roots, `m_alpha + a - 1` otherwise (`a >= 1`);
/// `a = 0` gives `m_alpha`, `a = r` the vanishing threshold.
pub fn affine_index(profile: &FiltrationProfile, alpha: usize, a: i64, r: i64) -> Result<i64> {
    if r < 1 || a < 0 || a > r {
        return Err(Error::Domain(format!("affine_index out of range: a={a}, r={r}")));
    }
    let m = profile.m(alpha);
    if a == 0 || profile.reductive(alpha) {
        Ok(m + a)
    } else {
        Ok(m + a - 1)
    }
}

/// Witness of a failed depth-additivity identity.
#[derive(Clone, Debug, Serialize)]
pub struct EpsMsViolation {
    pub alpha: usize,
    pub beta: usize,
    pub p: i64,
    pub q: i64,
    pub gamma: usize,
    pub lhs: i64,
    pub rhs: i64,
}

/// Check `p m_alpha + q m_beta - m_{p alpha + q beta} =
/// floor(p eps_alpha + q eps_beta)` for every root-string pair; returns the
/// violations (empty means certified).
pub fn check_eps_ms(datum: &RootDatum, profile: &FiltrationProfile) -> Vec<EpsMsViolation> {
    let mut out = Vec::new();
    for alpha in 0..datum.n_roots() {
        for beta in 0..datum.n_roots() {
            if datum.negate_index(alpha) == beta {
                continue;
            }
            let pairs = crate::root_datum::root_string_pairs(datum, alpha, beta)
                .expect("non-opposite roots");
            for (p, q, gamma) in pairs {
                let lhs = p * profile.m(alpha) + q * profile.m(beta) - profile.m(gamma);
                let fl = (Rat::from_integer(p) * profile.eps(alpha)
                    + Rat::from_integer(q) * profile.eps(beta))
                .floor()
                .to_integer();
                let diff = Rat::from_integer(p) * profile.eps(alpha)
                    + Rat::from_integer(q) * profile.eps(beta)
                    - profile.eps(gamma);
                if lhs != fl || !diff.is_integer() || diff.to_integer() != lhs || lhs < 0 {
                    out.push(EpsMsViolation {
                        alpha,
                        beta,
                        p,
                        q,
                        gamma,
                        lhs,
                        rhs: fl,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_root_datum, weyl_elements, Family};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn hyperspecial_profile() {
        let d = build_root_datum(Family::C, 2).unwrap();
        let p = profile(&d, &ApartmentPoint::origin(2));
        assert!(p.records.iter().all(|r| r.reductive && r.m == 0));
        assert_eq!(p.jumps, vec![Rat::one()]);
        assert_eq!(p.s(), 0);
        assert_eq!(p.phi[0].len(), 8);
    }

    #[test]
    fn a1_iwahori_midpoint() {
        let d = build_root_datum(Family::A, 1).unwrap();
        // v = (1/4) alpha^vee so that <alpha, v> = 1/2
        let a = d.positive[0];
        let v: Vec<Rat> = d.coroots[a].iter().map(|&c| rat(c, 4)).collect();
        let p = profile(&d, &ApartmentPoint::new(v));
        let na = d.negate_index(a);
        assert_eq!(p.m(a), 0);
        assert_eq!(p.eps(a), rat(1, 2));
        assert_eq!(p.m(na), 1);
        assert_eq!(p.eps(na), rat(1, 2));
        assert_eq!(p.jumps, vec![rat(1, 2), Rat::one()]);
        assert_eq!(p.s(), 1);
    }

    #[test]
    fn gl3_third_point_profile() {
        // <e_i - e_j, v> = (j - i)/3: all six roots non-reductive, s = 2
        let d = build_root_datum(Family::GL, 3).unwrap();
        let v = vec![rat(2, 3), rat(1, 3), rat(0, 1)];
        let p = profile(&d, &ApartmentPoint::new(v));
        assert!(p.records.iter().all(|r| !r.reductive));
        assert_eq!(p.jumps, vec![rat(1, 3), rat(2, 3), Rat::one()]);
        assert_eq!(p.s(), 2);
        for r in &p.records {
            assert!(r.eps == rat(1, 3) || r.eps == rat(2, 3));
        }
        // m_alpha + m_{-alpha} = 1 for non-reductive roots
        for i in 0..d.n_roots() {
            assert_eq!(p.m(i) + p.m(d.negate_index(i)), 1);
        }
    }

    #[test]
    fn jump_symmetry() {
        // eps_i = 1 - eps_{s+1-i} for every profile over a denominator sweep
        for (fam, n) in [(Family::A, 2), (Family::C, 2), (Family::G, 2)] {
            let d = build_root_datum(fam, n).unwrap();
            for denom in 1..=4i64 {
                for a in 0..=denom {
                    for b in 0..=denom {
                        let v = vec![rat(a, denom), rat(b, denom)];
                        let v = if d.dim == 2 {
                            v
                        } else {
                            vec![rat(a, denom), rat(b, denom), Rat::zero()]
                        };
                        let p = profile(&d, &ApartmentPoint::new(v));
                        let s = p.s();
                        for i in 1..=s {
                            assert_eq!(p.jumps[i - 1], Rat::one() - p.jumps[s - i]);
                        }
                        for rec in &p.records {
                            let neg = d.negate_index(rec.root);
                            if rec.reductive {
                                assert!(p.eps(neg).is_zero());
                                assert_eq!(rec.m + p.m(neg), 0);
                            } else {
                                assert_eq!(rec.eps + p.eps(neg), Rat::one());
                                assert_eq!(rec.m + p.m(neg), 1);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn affine_frobenius_trivial_and_shifted() {
        let d = build_root_datum(Family::A, 2).unwrap();
        let sigma = TwistedFrobenius::split(&d, 3);
        let psi = AffineRoot { root: 0, level: 2 };
        assert_eq!(affine_frobenius(&d, &sigma, &psi).unwrap(), psi);

        // sigma(alpha) = beta with <alpha, shift> = 1: (alpha, m) -> (beta, m-1)
        let ws = weyl_elements(&d);
        let w = ws
            .iter()
            .find(|w| w.perm.iter().enumerate().all(|(i, &j)| {
                // order-3 rotation: no root fixed
                i != j
            }) && {
                // pick an actual 3-cycle on the e-basis
                let mut v = vec![0i64; d.dim];
                v[0] = 1;
                let img: Vec<i64> = (0..d.dim)
                    .map(|r| (0..d.dim).map(|c| w.mat_star[r][c] * v[c]).sum())
                    .collect();
                img.iter().filter(|&&x| x == 1).count() == 1 && img[0] == 0
            })
            .expect("3-cycle exists in W(A2)");
        let alpha = 0usize;
        // choose shift with <alpha, shift> = 1 by scaling the coroot
        let co = &d.coroots[alpha];
        let shift: Vec<Rat> = co.iter().map(|&c| Rat::new(c, 2)).collect();
        let sigma = TwistedFrobenius::from_weyl(&d, 3, w, shift).unwrap();
        let psi = AffineRoot { root: alpha, level: 5 };
        let img = affine_frobenius(&d, &sigma, &psi).unwrap();
        assert_eq!(img.root, w.perm[alpha]);
        assert_eq!(img.level, 4);
    }

    #[test]
    fn division_algebra_twist_orbit() {
        // 3-cycle on the e-basis of GL_3 with shift pairings in {-1, 0, 1}:
        // the orbit of (e_1 - e_2, 0) has size 3 and returns to itself.
        let d = build_root_datum(Family::GL, 3).unwrap();
        // cyclic lattice action e_1 -> e_2 -> e_3 -> e_1
        let mat = vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]];
        let shift = vec![rat(2, 3), rat(-1, 3), rat(-1, 3)];
        let sigma =
            TwistedFrobenius::from_lattice_action(&d, 2, mat.clone(), mat, shift, Some("b".into()))
                .unwrap();
        let e12 = d.root_index(&[1, -1, 0]).unwrap();
        let psi0 = AffineRoot { root: e12, level: 0 };
        let psi1 = affine_frobenius(&d, &sigma, &psi0).unwrap();
        let psi2 = affine_frobenius(&d, &sigma, &psi1).unwrap();
        let psi3 = affine_frobenius(&d, &sigma, &psi2).unwrap();
        assert_ne!(psi1, psi0);
        assert_ne!(psi2, psi0);
        assert_eq!(psi3, psi0);
    }

    #[test]
    fn affine_frobenius_commutes_with_evaluation() {
        // sigma(psi) evaluated at sigma-stable x equals psi at x
        let d = build_root_datum(Family::A, 2).unwrap();
        let sigma = TwistedFrobenius::split(&d, 2);
        let x = ApartmentPoint::new(vec![rat(1, 3), rat(0, 1), rat(-1, 3)]);
        assert!(sigma.stabilizes(&d, &x));
        for root in 0..d.n_roots() {
            for level in -2..=2 {
                let psi = AffineRoot { root, level };
                let img = affine_frobenius(&d, &sigma, &psi).unwrap();
                assert_eq!(psi.eval(&d, &x), img.eval(&d, &x));
            }
        }
    }

    #[test]
    fn non_integral_shift_rejected() {
        let d = build_root_datum(Family::A, 1).unwrap();
        let a = d.positive[0];
        let shift: Vec<Rat> = d.coroots[a].iter().map(|&c| Rat::new(c, 3)).collect();
        let sigma = TwistedFrobenius {
            q: 2,
            mat_star: d.weyl_identity().mat_star,
            mat_costar: d.weyl_identity().mat_costar,
            perm: d.weyl_identity().perm,
            shift,
            inner_twist: None,
        };
        let psi = AffineRoot { root: a, level: 0 };
        assert!(affine_frobenius(&d, &sigma, &psi).is_err());
    }

    #[test]
    fn affine_index_table() {
        let d = build_root_datum(Family::A, 1).unwrap();
        let a = d.positive[0];
        let na = d.negate_index(a);
        // Iwahori midpoint: both roots non-reductive
        let v: Vec<Rat> = d.coroots[a].iter().map(|&c| rat(c, 4)).collect();
        let p = profile(&d, &ApartmentPoint::new(v));
        assert_eq!(affine_index(&p, a, 1, 2).unwrap(), p.m(a));
        assert_eq!(affine_index(&p, a, 0, 2).unwrap(), p.m(a));
        assert_eq!(affine_index(&p, na, 2, 2).unwrap(), p.m(na) + 1);
        // hyperspecial: reductive
        let ph = profile(&d, &ApartmentPoint::origin(d.dim));
        assert_eq!(affine_index(&ph, a, 1, 2).unwrap(), 1);
        assert_eq!(affine_index(&ph, a, 2, 2).unwrap(), 2);
        assert!(affine_index(&ph, a, 3, 2).is_err());
    }

    #[test]
    fn eps_ms_certified_at_small_denominators() {
        for (fam, n) in [
            (Family::A, 1),
            (Family::A, 2),
            (Family::C, 2),
            (Family::G, 2),
        ] {
            let d = build_root_datum(fam, n).unwrap();
            for denom in 1..=6i64 {
                for a in 0..=denom {
                    for b in 0..=denom {
                        let mut v = vec![rat(a, denom), rat(b, denom)];
                        v.resize(d.dim, Rat::zero());
                        let p = profile(&d, &ApartmentPoint::new(v));
                        let viol = check_eps_ms(&d, &p);
                        assert!(viol.is_empty(), "{fam:?} {a}/{denom} {b}/{denom}: {viol:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn eps_ms_floor_one_case_in_c2() {
        // v with <e1-e2, v> = 1/2, <2e2, v> = 0: some pair attains floor = 1
        let d = build_root_datum(Family::C, 2).unwrap();
        let v = vec![rat(1, 2), Rat::zero()];
        let p = profile(&d, &ApartmentPoint::new(v));
        assert!(check_eps_ms(&d, &p).is_empty());
        let mut saw_floor_one = false;
        for alpha in 0..d.n_roots() {
            for beta in 0..d.n_roots() {
                if d.negate_index(alpha) == beta {
                    continue;
                }
                for (pp, qq, gamma) in
                    crate::root_datum::root_string_pairs(&d, alpha, beta).unwrap()
                {
                    let lhs = pp * p.m(alpha) + qq * p.m(beta) - p.m(gamma);
                    if lhs == 1 {
                        saw_floor_one = true;
                    }
                }
            }
        }
        assert!(saw_floor_one);
    }
}
