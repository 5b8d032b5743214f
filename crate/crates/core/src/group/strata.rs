//! Ordered root-coordinate factorization of unipotent elements, the
//! stratification data `(a_z, I_z)`, and the torus-element-producing
//! commutator map `lambda_z`.

use super::descriptor::{member, SubgroupDescriptor};
use super::element::{
    coroot_element, identity, invert, multiply, root_element_scaled, root_slots, slot,
};
use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::field::field;
use crate::root_datum::height;
use crate::series::TruncatedSeries;

/// Factor a unipotent canonical form as an ordered product of root
/// unipotents `prod_beta u_beta(c_beta)` over the given root order, by
/// successive depth correction. Returns the scaled coefficient vector of
/// each coordinate, aligned with `order`.
pub fn unipotent_coordinates(
    spec: &GroupSpec,
    z: &GroupElement,
    order: &[usize],
) -> Result<Vec<Vec<u16>>> {
    let fq = field(spec.p, z.field_deg);
    let win_of = |root: usize| {
        let (i, j, _) = root_slots(spec, root)[0];
        spec.win[i][j]
    };
    let mut coords: Vec<Vec<u16>> = order.iter().map(|&b| vec![0u16; win_of(b)]).collect();
    // Depth layers above 0 are abelian, so each stabilizes in one pass; the
    // residual layer stabilizes by increasing height. The bound below covers
    // both with room to spare.
    let rounds = (spec.r as usize + 2) * (order.len() + 2);
    for _round in 0..rounds {
        let mut prod = identity(spec, z.field_deg);
        for (k, &b) in order.iter().enumerate() {
            prod = multiply(spec, &prod, &root_element_scaled(spec, z.field_deg, b, &coords[k]));
        }
        let delta = multiply(spec, &invert(spec, &prod)?, z);
        if delta == identity(spec, z.field_deg) {
            return Ok(coords);
        }
        // diagonal must stay exactly 1 for unipotent inputs
        for i in 0..spec.n {
            let s = slot(spec, &delta, i, i);
            for (k, &c) in s.iter().enumerate() {
                if c != u16::from(k == 0) {
                    return Err(Error::Membership(
                        "element is not in the unipotent pattern of the given order".into(),
                    ));
                }
            }
        }
        // shallowest deviation depth
        let mut depth = i64::MAX;
        for (k, &b) in order.iter().enumerate() {
            let _ = k;
            let (i, j, _) = root_slots(spec, b)[0];
            let s = slot(spec, &delta, i, j);
            for (kk, &c) in s.iter().enumerate() {
                if c != 0 {
                    let a = kk as i64 + i64::from(!spec.profile.reductive(b));
                    depth = depth.min(a);
                    break;
                }
            }
        }
        if depth == i64::MAX {
            // deviation lives outside the given coordinate lines
            return Err(Error::Membership(
                "element has coordinates outside the given root order".into(),
            ));
        }
        // additive correction at this depth
        for (k, &b) in order.iter().enumerate() {
            let kk = depth - i64::from(!spec.profile.reductive(b));
            if kk < 0 || kk as usize >= coords[k].len() {
                continue;
            }
            let (i, j, sign) = root_slots(spec, b)[0];
            let _ = sign;
            let c = slot(spec, &delta, i, j)[kk as usize];
            if c != 0 {
                coords[k][kk as usize] = fq.add(coords[k][kk as usize], c);
            }
        }
    }
    Err(Error::Internal("coordinate correction did not converge".into()))
}

/// Depth `a(beta, z)` of a scaled coordinate vector (`None` when zero).
pub fn coordinate_depth(spec: &GroupSpec, root: usize, coeffs: &[u16]) -> Option<i64> {
    coeffs
        .iter()
        .position(|&c| c != 0)
        .map(|k| k as i64 + i64::from(!spec.profile.reductive(root)))
}

/// Stratification datum of a depth-one element: the depth `a_z`, the jump
/// block (at depth one), the coordinate support `A_z` at that depth, and the
/// maximal-height subset `I_z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub a: i64,
    /// Jump block index of `z` when `a = 1` (`s+1` for the reductive block).
    pub jump: Option<usize>,
    /// Coordinates achieving the depth (restricted to the jump block at
    /// depth one).
    pub a_set: Vec<usize>,
    /// The maximal-height non-reductive subset of `a_set` when one exists,
    /// otherwise the maximal-height subset.
    pub i_set: Vec<usize>,
}

/// Compute the stratum of `z != 1` inside the unipotent subgroup with the
/// given positive system, factoring over `order`.
pub fn stratum(
    spec: &GroupSpec,
    z: &GroupElement,
    positive: &[usize],
    order: &[usize],
) -> Result<Stratum> {
    if *z == identity(spec, z.field_deg) {
        return Err(Error::Domain("the identity has no stratum".into()));
    }
    let coords = unipotent_coordinates(spec, z, order)?;
    let depths: Vec<Option<i64>> = order
        .iter()
        .zip(&coords)
        .map(|(&b, c)| coordinate_depth(spec, b, c))
        .collect();
    let a_z = depths
        .iter()
        .flatten()
        .copied()
        .min()
        .ok_or_else(|| Error::Domain("zero coordinates".into()))?;
    let mut a_set: Vec<usize> = order
        .iter()
        .zip(&depths)
        .filter(|(_, d)| **d == Some(a_z))
        .map(|(&b, _)| b)
        .collect();
    a_set.sort_unstable();
    let mut jump = None;
    if a_z == 1 {
        // jump block of z: the least block among depth-one coordinates
        let i_z = a_set
            .iter()
            .map(|&b| spec.profile.jump_index(b))
            .min()
            .unwrap();
        jump = Some(i_z);
        a_set.retain(|&b| spec.profile.jump_index(b) == i_z);
    }
    let hts: Vec<i64> = a_set
        .iter()
        .map(|&b| height(&spec.datum, b, positive))
        .collect::<Result<_>>()?;
    let any_nonred = a_set.iter().any(|&b| !spec.profile.reductive(b));
    let candidates: Vec<(usize, i64)> = a_set
        .iter()
        .zip(&hts)
        .filter(|(&b, _)| !any_nonred || !spec.profile.reductive(b))
        .map(|(&b, &h)| (b, h))
        .collect();
    let max_ht = candidates.iter().map(|&(_, h)| h).max().unwrap();
    let mut i_set: Vec<usize> = candidates
        .iter()
        .filter(|&&(_, h)| h == max_ht)
        .map(|&(b, _)| b)
        .collect();
    i_set.sort_unstable();
    Ok(Stratum {
        a: a_z,
        jump,
        a_set,
        i_set,
    })
}

/// Evaluate the commutator map against a stratum: `[xi, z]` must lie in
/// the coroot line of `alpha` times the deep opposite unipotent part; the
/// coroot component is returned. `negative` is the opposite system of the
/// stratification's positive one.
pub fn lambda_eval(
    spec: &GroupSpec,
    z: &GroupElement,
    xi: &GroupElement,
    alpha: usize,
    negative: &[usize],
) -> Result<GroupElement> {
    let fq = field(spec.p, z.field_deg);
    let comm = multiply(
        spec,
        &multiply(spec, &invert(spec, xi)?, &invert(spec, z)?),
        &multiply(spec, xi, z),
    );
    // read the coroot parameter from a diagonal entry with exponent +-1
    let co = &spec.datum.coroots[alpha];
    let i = (0..spec.n)
        .find(|&i| spec.datum.pair(&spec.weights[i], co).abs() == 1)
        .ok_or_else(|| Error::Internal("coroot with no unit-exponent diagonal entry".into()))?;
    let e = spec.datum.pair(&spec.weights[i], co);
    let mut u = TruncatedSeries::from_coeffs(fq, slot(spec, &comm, i, i).to_vec());
    if e < 0 {
        u = u.inv().map_err(|_| {
            Error::Membership("commutator diagonal is not a unit".into())
        })?;
    }
    // u must be 1 + c t^{r-1}
    for (k, &c) in u.coeffs.iter().enumerate() {
        if (k as i64) < spec.r - 1 && c != u16::from(k == 0) {
            return Err(Error::Membership(format!(
                "commutator torus part is not in the top filtration layer: {u:?}"
            )));
        }
    }
    let tau = coroot_element(spec, z.field_deg, alpha, &u)?;
    let rest = multiply(spec, &invert(spec, &tau)?, &comm);
    let ok = member(
        spec,
        &rest,
        &SubgroupDescriptor::Unipotent {
            positive: negative.to_vec(),
            a: spec.r - 1,
        },
    );
    if !ok {
        return Err(Error::Membership(
            "commutator does not lie in the coroot line times the deep opposite part".into(),
        ));
    }
    Ok(tau)
}

#[cfg(test)]
mod tests {
    use super::super::descriptor::pattern_elements;
    use super::super::tests::iwahori_sl2;
    use super::*;
    use crate::apartment::affine_index;

    #[test]
    fn single_root_stratum() {
        // z = u_beta(t^{affine_index(beta,1,r)}) in SL_2 Iwahori: a_z = 1,
        // I_z = {beta}
        let s = iwahori_sl2(3, 2);
        let beta = s.datum.root_index(&[1, -1]).unwrap();
        let k = affine_index(&s.profile, beta, 1, 2).unwrap() - s.profile.m(beta);
        let mut coeffs = vec![0u16; s.win[0][1]];
        coeffs[k as usize] = 1;
        let z = root_element_scaled(&s, 1, beta, &coeffs);
        let st = stratum(&s, &z, &[beta], &[beta]).unwrap();
        assert_eq!(st.a, 1);
        assert_eq!(st.i_set, vec![beta]);
        assert!(stratum(&s, &identity(&s, 1), &[beta], &[beta]).is_err());
    }

    #[test]
    fn coordinates_round_trip_multi_root() {
        // GL_3 hyperspecial at r = 2: three positive roots, coordinates must
        // reproduce the element in every order.
        let s = super::super::tests::hyperspecial(crate::group::GroupFamily::GL(3), 2, 2);
        let pos = s.datum.positive.clone();
        let els = pattern_elements(
            &s,
            &SubgroupDescriptor::Unipotent {
                positive: pos.clone(),
                a: 0,
            },
            1,
            1 << 22,
        )
        .unwrap();
        let orders = [
            pos.clone(),
            pos.iter().rev().copied().collect::<Vec<_>>(),
            {
                let mut o = pos.clone();
                o.swap(0, 1);
                o
            },
        ];
        for z in &els {
            for order in &orders {
                let coords = unipotent_coordinates(&s, z, order).unwrap();
                let mut prod = identity(&s, 1);
                for (k, &b) in order.iter().enumerate() {
                    prod = multiply(&s, &prod, &root_element_scaled(&s, 1, b, &coords[k]));
                }
                assert_eq!(&prod, z);
            }
        }
    }

    #[test]
    fn lambda_on_sl2_iwahori() {
        // z = u_{-alpha}(c) at depth 1, xi = u_alpha(y): the commutator is
        // alpha^vee(1 + yc) modulo deeper terms.
        let s = iwahori_sl2(3, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let nalpha = s.datum.negate_index(alpha);
        let z = root_element_scaled(&s, 1, nalpha, &[1]);
        let xi = root_element_scaled(&s, 1, alpha, &[2]);
        let tau = lambda_eval(&s, &z, &xi, alpha, &[alpha]).unwrap();
        // y c = 2 * 1 * t^{m_alpha + m_{-alpha}} = 2 t
        let fq = s.field(1);
        let expect = coroot_element(
            &s,
            1,
            alpha,
            &TruncatedSeries::from_coeffs(fq, vec![1, 2]),
        )
        .unwrap();
        assert_eq!(tau, expect);
        // xi = identity maps to the identity
        let e = identity(&s, 1);
        let tau0 = lambda_eval(&s, &z, &e, alpha, &[alpha]).unwrap();
        assert_eq!(tau0, e);
    }
}
