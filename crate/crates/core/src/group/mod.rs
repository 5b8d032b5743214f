//! Explicit finite models of the filtration quotients `G_r(F_{q^n})` as
//! matrices of truncated polynomial series in a canonical coset form.
//!
//! Matrix entries are stored scaled: position `(i,j)` holds the coefficients
//! of `t^{lo(i,j)}, ..., t^{lo(i,j)+window-1}` of the actual entry, where
//! `lo(i,j) = m_alpha` for the root carried by the position and the window is
//! the canonical coset precision (`r` on reductive positions and the
//! diagonal, `r-1` on non-reductive ones). Every group operation lands back
//! in this window exactly; the triangle inequality between the depth offsets
//! (asserted at construction) is what makes entrywise truncation a two-sided
//! coset normal form.

pub mod bruhat;
mod descriptor;
mod element;
mod laurent;
mod strata;

pub use bruhat::{
    bruhat_component, bruhat_factorize, iwahori_decompose, level_quotient, project, wx_elements,
    BruhatCells, BruhatFactorization,
};
pub use descriptor::{sigma_descriptor, SubgroupDescriptor};
pub use element::{det, preserves_form, slot as element_slot};
pub use strata::{coordinate_depth, lambda_eval, stratum, unipotent_coordinates, Stratum};

use crate::apartment::{profile, ApartmentPoint, FiltrationProfile};
use crate::error::{Error, Result};
use crate::field::{field, Fq};
use crate::root_datum::{build_root_datum, Family, RootDatum};
use serde::Serialize;

/// Supported matrix families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupFamily {
    GL(usize),
    SL(usize),
    Sp4,
}

impl GroupFamily {
    pub fn matrix_size(&self) -> usize {
        match self {
            GroupFamily::GL(n) | GroupFamily::SL(n) => *n,
            GroupFamily::Sp4 => 4,
        }
    }

    /// Number of independent diagonal torus coordinates.
    pub fn torus_rank(&self) -> usize {
        match self {
            GroupFamily::GL(n) | GroupFamily::SL(n) => *n,
            GroupFamily::Sp4 => 2,
        }
    }
}

/// An inner twist `Ad(b)` composed with the coefficient Frobenius. The
/// matrix `b` is given entrywise as `(lo, coefficients)` over `F_q`.
#[derive(Clone, Debug)]
pub struct InnerTwist {
    pub label: String,
    /// `b[i][j] = (lo, coeffs)`: the entry `sum coeffs[k] t^{lo+k}`.
    pub mat: Vec<Vec<(i64, Vec<u16>)>>,
}

/// A fixed finite model `G_r` attached to `(family, q, r, x)`.
#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub family: GroupFamily,
    pub n: usize,
    pub p: u32,
    /// `q = p^base_deg`.
    pub base_deg: u32,
    pub q: u32,
    pub r: i64,
    pub datum: RootDatum,
    pub x: ApartmentPoint,
    pub profile: FiltrationProfile,
    /// Weight of each basis vector of the standard representation.
    pub weights: Vec<Vec<i64>>,
    /// Root index carried by each off-diagonal position.
    pub pos_root: Vec<Vec<Option<usize>>>,
    /// Valuation offset of each position.
    pub lo: Vec<Vec<i64>>,
    /// Canonical window length of each position.
    pub win: Vec<Vec<usize>>,
    /// Start of each position's slots in the element data vector.
    pub slot_off: Vec<Vec<usize>>,
    pub data_len: usize,
    /// Antidiagonal symplectic form signs for `Sp4` (`J[i] = sign of the
    /// entry at `(i, n-1-i)`), empty otherwise.
    pub symplectic_signs: Vec<i64>,
    pub twist: Option<InnerTwist>,
}

/// An element of `G_r(F_{p^{field_deg}})` in canonical coset form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    /// Absolute degree of the coefficient field over the prime field.
    pub field_deg: u32,
    pub data: Vec<u16>,
}

impl std::fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupElement(deg {}, {:?})", self.field_deg, self.data)
    }
}

impl GroupSpec {
    pub fn new(family: GroupFamily, q: u32, r: i64, x: ApartmentPoint) -> Result<GroupSpec> {
        Self::with_twist(family, q, r, x, None)
    }

    pub fn with_twist(
        family: GroupFamily,
        q: u32,
        r: i64,
        x: ApartmentPoint,
        twist: Option<InnerTwist>,
    ) -> Result<GroupSpec> {
        if r < 1 {
            return Err(Error::Config("level r must be at least 1".into()));
        }
        let (p, base_deg) = split_prime_power(q)
            .ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
        let n = family.matrix_size();
        let datum = match family {
            GroupFamily::GL(m) | GroupFamily::SL(m) => build_root_datum(Family::GL, m)?,
            GroupFamily::Sp4 => build_root_datum(Family::Sp, 4)?,
        };
        if x.offset.len() != datum.dim {
            return Err(Error::Config(format!(
                "apartment point has dimension {}, expected {}",
                x.offset.len(),
                datum.dim
            )));
        }
        let prof = profile(&datum, &x);
        let weights: Vec<Vec<i64>> = match family {
            GroupFamily::GL(m) | GroupFamily::SL(m) => (0..m)
                .map(|i| {
                    let mut w = vec![0i64; m];
                    w[i] = 1;
                    w
                })
                .collect(),
            GroupFamily::Sp4 => vec![vec![1, 0], vec![0, 1], vec![0, -1], vec![-1, 0]],
        };
        let mut pos_root = vec![vec![None; n]; n];
        let mut lo = vec![vec![0i64; n]; n];
        let mut win = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    win[i][j] = r as usize;
                    continue;
                }
                let diff: Vec<i64> = weights[i]
                    .iter()
                    .zip(&weights[j])
                    .map(|(&a, &b)| a - b)
                    .collect();
                let root = datum.root_index(&diff).ok_or_else(|| {
                    Error::Internal("standard representation position without a root".into())
                })?;
                pos_root[i][j] = Some(root);
                lo[i][j] = prof.m(root);
                win[i][j] = (r - i64::from(!prof.reductive(root))) as usize;
            }
        }
        let mut slot_off = vec![vec![0usize; n]; n];
        let mut acc = 0usize;
        for i in 0..n {
            for j in 0..n {
                slot_off[i][j] = acc;
                acc += win[i][j];
            }
        }
        let symplectic_signs = match family {
            GroupFamily::Sp4 => vec![1, 1, -1, -1],
            _ => Vec::new(),
        };
        let spec = GroupSpec {
            family,
            n,
            p,
            base_deg,
            q,
            r,
            datum,
            x,
            profile: prof,
            weights,
            pos_root,
            lo,
            win,
            slot_off,
            data_len: acc,
            symplectic_signs,
            twist,
        };
        spec.check_layout()?;
        if spec.twist.is_some() {
            spec.check_twist()?;
        }
        Ok(spec)
    }

    /// The triangle inequalities making entrywise truncation a two-sided
    /// canonical coset form, and the precision-closure inequalities making
    /// window-truncated multiplication exact.
    fn check_layout(&self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    let s = self.lo[i][l] + self.lo[l][j] - self.lo[i][j];
                    if s < 0 {
                        return Err(Error::Internal(format!(
                            "depth offsets not superadditive at ({i},{l},{j})"
                        )));
                    }
                    // kernel pattern stability (right and left cosets)
                    let prec = |a: usize, b: usize| self.lo[a][b] + self.win[a][b] as i64;
                    if self.lo[i][l] + prec(l, j) < prec(i, j)
                        || prec(i, l) + self.lo[l][j] < prec(i, j)
                    {
                        return Err(Error::Internal(format!(
                            "canonical window not multiplication-stable at ({i},{l},{j})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_twist(&self) -> Result<()> {
        // The twist must normalize the pattern: conjugating each elementary
        // pattern generator stays inside the pattern.
        let fq = self.field(1);
        let gens = descriptor::generators(self, &SubgroupDescriptor::Group { a: 0 }, fq.deg)?;
        for g in gens {
            let image = element::apply_frobenius(self, &g)?;
            if !descriptor::member(self, &image, &SubgroupDescriptor::Group { a: 0 }) {
                return Err(Error::Config(
                    "inner twist does not normalize the parahoric pattern".into(),
                ));
            }
        }
        Ok(())
    }

    /// Coefficient field at extension level `n` over `F_q`.
    pub fn field(&self, level: u32) -> &'static Fq {
        field(self.p, self.base_deg * level)
    }

    pub fn root_of(&self, i: usize, j: usize) -> Option<usize> {
        self.pos_root[i][j]
    }

    /// Shift consumed when accumulating `(i,l)*(l,j)` into `(i,j)`.
    #[inline]
    pub fn shift(&self, i: usize, l: usize, j: usize) -> i64 {
        self.lo[i][l] + self.lo[l][j] - self.lo[i][j]
    }
}

fn split_prime_power(q: u32) -> Option<(u32, u32)> {
    for p in 2..=q {
        if q % p == 0 {
            // p is the smallest divisor, hence prime
            let mut d = 0;
            let mut v = q;
            while v % p == 0 {
                v /= p;
                d += 1;
            }
            return if v == 1 { Some((p, d)) } else { None };
        }
    }
    None
}

pub use descriptor::{closure_elements, enumerate, generators, member, pattern_elements};
pub use element::{
    apply_frobenius, coroot_element, identity, invert, lift_to, multiply, residual_matrix,
    root_element, root_element_scaled, serialize_element, torus_element, weyl_lift,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Rat;
    use num::Zero;

    pub(crate) fn hyperspecial(family: GroupFamily, q: u32, r: i64) -> GroupSpec {
        let dim = match family {
            GroupFamily::GL(n) | GroupFamily::SL(n) => n,
            GroupFamily::Sp4 => 2,
        };
        GroupSpec::new(family, q, r, ApartmentPoint::origin(dim)).unwrap()
    }

    pub(crate) fn iwahori_sl2(q: u32, r: i64) -> GroupSpec {
        // <alpha, v> = 1/2 for the positive root alpha = e_1 - e_2
        let x = ApartmentPoint::new(vec![Rat::new(1, 4), Rat::new(-1, 4)]);
        GroupSpec::new(GroupFamily::SL(2), q, r, x).unwrap()
    }

    #[test]
    fn layout_windows() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        assert_eq!(s.data_len, 8);
        assert!(s.win.iter().flatten().all(|&w| w == 2));
        let s = iwahori_sl2(3, 2);
        // diag windows 2, off-diagonal non-reductive windows 1
        assert_eq!(s.win[0][0], 2);
        assert_eq!(s.win[0][1], 1);
        assert_eq!(s.win[1][0], 1);
        assert_eq!(s.lo[1][0], 1);
        assert_eq!(s.lo[0][1], 0);
    }

    #[test]
    fn sp4_vertex_layout_has_negative_offset() {
        // x with <2e_1, v> = 1: the (1,4) position carries depth -1
        let x = ApartmentPoint::new(vec![Rat::new(1, 2), Rat::zero()]);
        let s = GroupSpec::new(GroupFamily::Sp4, 2, 1, x).unwrap();
        assert_eq!(s.lo[0][3], -1);
        assert_eq!(s.lo[3][0], 1);
        // long roots reductive (window 1), short roots non-reductive (window 0)
        assert_eq!(s.win[0][3], 1);
        assert_eq!(s.win[0][1], 0);
    }

    #[test]
    fn unsupported_configs_rejected() {
        assert!(GroupSpec::new(GroupFamily::GL(2), 6, 2, ApartmentPoint::origin(2)).is_err());
        assert!(GroupSpec::new(GroupFamily::GL(2), 3, 0, ApartmentPoint::origin(2)).is_err());
        assert!(GroupSpec::new(GroupFamily::GL(4), 2, 1, ApartmentPoint::origin(4)).is_err());
    }
}
