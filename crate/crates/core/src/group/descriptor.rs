//! Subgroup descriptors: symbolic tags resolving to a membership predicate
//! and a generator list, with enumeration by valuation pattern and by
//! generator closure. The two routes must produce the same set; `enumerate`
//! checks this on every call.

use super::element::{det, identity, multiply, preserves_form, root_element_scaled, slot};
use super::{GroupElement, GroupFamily, GroupSpec};
use crate::apartment::affine_index;
use crate::error::{Error, Result};
use crate::field::field;
use crate::series::TruncatedSeries;
use std::collections::HashSet;

/// Symbolic subgroup tags. Depth parameters `a` count from 0 (`a = 0` is the
/// whole group / full unipotent radical).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupDescriptor {
    /// `G_r^a`.
    Group { a: i64 },
    /// `G_r^{a,i}` (graded refinement at jump `i`, 1-based).
    GroupGraded { a: i64, i: usize },
    /// `T_r^a`.
    Torus { a: i64 },
    /// `T_r^{alpha,a}`; the top quotient `a = r-1` is the coroot line.
    CorootTorus { alpha: usize, a: i64 },
    /// `U_{alpha,r}^a`.
    RootGroup { alpha: usize, a: i64 },
    /// Unipotent radical w.r.t. a set of positive roots, depth `a`.
    Unipotent { positive: Vec<usize>, a: i64 },
    /// `N_r^{1,i}`: depth-one part graded at jump `i`.
    UnipotentGraded { positive: Vec<usize>, i: usize },
    /// `K_r^1`: the given closed root subset at depth one.
    BruhatK { roots: Vec<usize> },
    /// `B_r = T_r U_r` w.r.t. a positive system.
    Borel { positive: Vec<usize> },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum DiagCond {
    /// No condition beyond the pattern (value in the ring of integers).
    Free,
    /// Every diagonal entry a unit.
    Units,
    /// Congruent to 1 modulo `t^a`.
    One(i64),
    /// Exactly 1 in the canonical window.
    Exact1,
}

struct Bounds {
    /// Minimal valuation index per position; `i64::MAX/4` means "vanishes".
    min_index: Vec<Vec<i64>>,
    diag: DiagCond,
    /// Require the determinant to be a unit (level-0 style sets).
    det_unit: bool,
}

const VANISH: i64 = i64::MAX / 4;

fn bounds(spec: &GroupSpec, d: &SubgroupDescriptor) -> Bounds {
    let n = spec.n;
    let mut min_index = vec![vec![VANISH; n]; n];
    let prof = &spec.profile;
    let idx = |alpha: usize, a: i64| affine_index(prof, alpha, a, spec.r).expect("depth in range");
    let mut diag = DiagCond::Exact1;
    let mut det_unit = false;
    let set_root = |mi: &mut Vec<Vec<i64>>, alpha: usize, bound: i64| {
        for i in 0..n {
            for j in 0..n {
                if spec.pos_root[i][j] == Some(alpha) {
                    mi[i][j] = bound;
                }
            }
        }
    };
    match d {
        SubgroupDescriptor::Group { a } => {
            for alpha in 0..spec.datum.n_roots() {
                set_root(&mut min_index, alpha, idx(alpha, *a));
            }
            diag = if *a == 0 {
                det_unit = true;
                DiagCond::Free
            } else {
                DiagCond::One(*a)
            };
        }
        SubgroupDescriptor::GroupGraded { a, i } => {
            for alpha in 0..spec.datum.n_roots() {
                let bound = if prof.reductive(alpha) {
                    idx(alpha, *a)
                } else if prof.jump_index(alpha) >= *i {
                    idx(alpha, *a)
                } else {
                    prof.m(alpha) + *a
                };
                set_root(&mut min_index, alpha, bound);
            }
            diag = if *a == 0 {
                det_unit = true;
                DiagCond::Free
            } else {
                DiagCond::One(*a)
            };
        }
        SubgroupDescriptor::Torus { a } => {
            diag = if *a == 0 { DiagCond::Units } else { DiagCond::One(*a) };
        }
        SubgroupDescriptor::CorootTorus { a, .. } => {
            diag = DiagCond::One((*a).max(0));
        }
        SubgroupDescriptor::RootGroup { alpha, a } => {
            set_root(&mut min_index, *alpha, idx(*alpha, *a));
        }
        SubgroupDescriptor::Unipotent { positive, a } => {
            for &alpha in positive {
                set_root(&mut min_index, alpha, idx(alpha, *a));
            }
        }
        SubgroupDescriptor::UnipotentGraded { positive, i } => {
            for &alpha in positive {
                let bound = if prof.reductive(alpha) || prof.jump_index(alpha) >= *i {
                    idx(alpha, 1)
                } else {
                    prof.m(alpha) + 1
                };
                set_root(&mut min_index, alpha, bound);
            }
        }
        SubgroupDescriptor::BruhatK { roots } => {
            for &alpha in roots {
                set_root(&mut min_index, alpha, idx(alpha, 1));
            }
        }
        SubgroupDescriptor::Borel { positive } => {
            for &alpha in positive {
                set_root(&mut min_index, alpha, idx(alpha, 0));
            }
            diag = DiagCond::Units;
            det_unit = true;
        }
    }
    Bounds {
        min_index,
        diag,
        det_unit,
    }
}

fn family_conditions(spec: &GroupSpec, g: &GroupElement) -> bool {
    match spec.family {
        GroupFamily::GL(_) => true,
        GroupFamily::SL(_) => {
            // determinant congruent to 1 within the canonical precision
            let d = det(spec, g);
            let mut one = d.clone();
            one.c = vec![0; one.c.len()];
            let fq = field(spec.p, g.field_deg);
            for (k, slot) in one.c.iter_mut().enumerate() {
                let e = one.lo + k as i64;
                let mut v = d.coeff(e);
                if e == 0 {
                    v = fq.sub(v, 1);
                }
                *slot = v;
            }
            one.is_zero_to_precision()
        }
        GroupFamily::Sp4 => preserves_form(spec, g),
    }
}

/// Membership of a canonical form in the set described by `d`.
pub fn member(spec: &GroupSpec, g: &GroupElement, d: &SubgroupDescriptor) -> bool {
    let b = bounds(spec, d);
    for i in 0..spec.n {
        for j in 0..spec.n {
            if i == j {
                continue;
            }
            let s = slot(spec, g, i, j);
            let lo = spec.lo[i][j];
            for (k, &c) in s.iter().enumerate() {
                if c != 0 && lo + (k as i64) < b.min_index[i][j] {
                    return false;
                }
            }
        }
    }
    for i in 0..spec.n {
        let s = slot(spec, g, i, i);
        match b.diag {
            DiagCond::Free => {}
            DiagCond::Units => {
                if s.first().copied().unwrap_or(0) == 0 {
                    return false;
                }
            }
            DiagCond::One(a) => {
                for (k, &c) in s.iter().enumerate() {
                    let expect = u16::from(k == 0);
                    if (k as i64) < a && c != expect {
                        return false;
                    }
                }
            }
            DiagCond::Exact1 => {
                for (k, &c) in s.iter().enumerate() {
                    if c != u16::from(k == 0) {
                        return false;
                    }
                }
            }
        }
    }
    if b.det_unit {
        let dv = det(spec, g);
        if dv.val() != 0 {
            return false;
        }
    }
    if !family_conditions(spec, g) {
        return false;
    }
    if let SubgroupDescriptor::CorootTorus { alpha, a } = d {
        return coroot_torus_member(spec, g, *alpha, *a);
    }
    true
}

fn coroot_torus_member(spec: &GroupSpec, g: &GroupElement, alpha: usize, a: i64) -> bool {
    // extract the unit from a diagonal position with coroot exponent +-1
    let co = &spec.datum.coroots[alpha];
    let pos = (0..spec.n).find(|&i| spec.datum.pair(&spec.weights[i], co).abs() == 1);
    let Some(i) = pos else { return false };
    let e = spec.datum.pair(&spec.weights[i], co);
    let fq = field(spec.p, g.field_deg);
    let u = TruncatedSeries::from_coeffs(fq, slot(spec, g, i, i).to_vec());
    if u.coeffs[0] == 0 {
        return false;
    }
    let u = if e < 0 {
        match u.inv() {
            Ok(v) => v,
            Err(_) => return false,
        }
    } else {
        u
    };
    // congruence u = 1 mod t^a
    for (k, &c) in u.coeffs.iter().enumerate() {
        if (k as i64) < a && c != u16::from(k == 0) {
            return false;
        }
    }
    match super::element::coroot_element(spec, g.field_deg, alpha, &u) {
        Ok(expect) => expect == *g,
        Err(_) => false,
    }
}

/// Generator list: every torus element of the required depth plus all root
/// elements of each active coordinate line.
pub fn generators(
    spec: &GroupSpec,
    d: &SubgroupDescriptor,
    field_deg: u32,
) -> Result<Vec<GroupElement>> {
    let b = bounds(spec, d);
    let fq = field(spec.p, field_deg);
    let mut gens: Vec<GroupElement> = Vec::new();
    // torus part
    match b.diag {
        DiagCond::Exact1 => {}
        DiagCond::Free | DiagCond::Units => {
            gens.extend(pattern_elements(spec, &SubgroupDescriptor::Torus { a: 0 }, field_deg, 1 << 24)?);
        }
        DiagCond::One(a) => {
            gens.extend(pattern_elements(spec, &SubgroupDescriptor::Torus { a }, field_deg, 1 << 24)?);
        }
    }
    if let SubgroupDescriptor::CorootTorus { alpha, a } = d {
        // coroot-line units congruent to 1 mod t^a
        let r = spec.r as usize;
        let mut stack = vec![vec![0u16; 0]];
        let mut units = Vec::new();
        while let Some(cur) = stack.pop() {
            if cur.len() == r {
                let mut coeffs = cur.clone();
                coeffs[0] = 1;
                units.push(TruncatedSeries::from_coeffs(fq, coeffs));
                continue;
            }
            let k = cur.len() as i64;
            let range: Vec<u16> = if k < *a && k > 0 {
                vec![0]
            } else {
                (0..fq.size as u16).collect()
            };
            for v in range {
                let mut next = cur.clone();
                next.push(if k == 0 { 1 } else { v });
                if k == 0 {
                    stack.push(next);
                    break;
                }
                stack.push(next);
            }
        }
        let mut out = Vec::new();
        for u in units {
            out.push(super::element::coroot_element(spec, field_deg, *alpha, &u)?);
        }
        return Ok(out);
    }
    // root parts
    for alpha in 0..spec.datum.n_roots() {
        let slots = super::element::root_slots(spec, alpha);
        let (i0, j0, _) = slots[0];
        let bound = b.min_index[i0][j0];
        if bound >= VANISH {
            continue;
        }
        let lo = spec.lo[i0][j0];
        let w = spec.win[i0][j0];
        for k in (bound - lo).max(0)..(w as i64) {
            for c in 1..fq.size as u16 {
                let mut coeffs = vec![0u16; w];
                coeffs[k as usize] = c;
                gens.push(root_element_scaled(spec, field_deg, alpha, &coeffs));
            }
        }
    }
    Ok(gens)
}

/// Enumerate the descriptor's set by scanning the valuation pattern.
pub fn pattern_elements(
    spec: &GroupSpec,
    d: &SubgroupDescriptor,
    field_deg: u32,
    budget: u64,
) -> Result<Vec<GroupElement>> {
    let b = bounds(spec, d);
    let fq = field(spec.p, field_deg);
    // free slot list: (data index, unit_required)
    let mut slots: Vec<(usize, bool)> = Vec::new();
    for i in 0..spec.n {
        for j in 0..spec.n {
            let off = spec.slot_off[i][j];
            let w = spec.win[i][j];
            if i == j {
                match b.diag {
                    DiagCond::Free => {
                        for k in 0..w {
                            slots.push((off + k, false));
                        }
                    }
                    DiagCond::Units => {
                        for k in 0..w {
                            slots.push((off + k, k == 0));
                        }
                    }
                    DiagCond::One(a) => {
                        for k in 0..w {
                            if (k as i64) >= a {
                                slots.push((off + k, false));
                            }
                        }
                    }
                    DiagCond::Exact1 => {}
                }
            } else {
                let lo = spec.lo[i][j];
                for k in 0..w {
                    if lo + (k as i64) >= b.min_index[i][j] {
                        slots.push((off + k, false));
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = identity(spec, field_deg);
    // zero out diagonal when it is free/units so the odometer covers it
    if matches!(b.diag, DiagCond::Free | DiagCond::Units) {
        for i in 0..spec.n {
            if spec.win[i][i] > 0 {
                cur.data[spec.slot_off[i][i]] = 0;
            }
        }
    }
    let mut values = vec![0u16; slots.len()];
    let mut scanned = 0u64;
    loop {
        scanned += 1;
        if scanned > budget {
            return Err(Error::Resource {
                what: format!("pattern enumeration of {d:?}"),
                budget,
                partial: out.len() as u64,
            });
        }
        // write values
        let mut valid = true;
        for ((idx, unit), &v) in slots.iter().zip(&values) {
            if *unit && v == 0 {
                valid = false;
                break;
            }
            cur.data[*idx] = v;
        }
        if valid && member(spec, &cur, d) {
            out.push(cur.clone());
        }
        // odometer
        let mut pos = 0;
        loop {
            if pos == slots.len() {
                out.sort();
                return Ok(out);
            }
            values[pos] += 1;
            if values[pos] < fq.size as u16 {
                break;
            }
            values[pos] = 0;
            pos += 1;
        }
    }
}

/// Enumerate by closure of a generator list.
pub fn closure_elements(
    spec: &GroupSpec,
    gens: &[GroupElement],
    budget: u64,
) -> Result<Vec<GroupElement>> {
    let field_deg = gens
        .first()
        .map(|g| g.field_deg)
        .unwrap_or(spec.base_deg);
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let e = identity(spec, field_deg);
    seen.insert(e.clone());
    let mut frontier = vec![e];
    while let Some(g) = frontier.pop() {
        for gen in gens {
            let next = multiply(spec, &g, gen);
            if seen.len() as u64 > budget {
                return Err(Error::Resource {
                    what: "generator closure".into(),
                    budget,
                    partial: seen.len() as u64,
                });
            }
            if seen.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    let mut out: Vec<GroupElement> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Full enumeration: pattern scan and generator closure, checked equal.
pub fn enumerate(
    spec: &GroupSpec,
    d: &SubgroupDescriptor,
    field_deg: u32,
    budget: u64,
) -> Result<Vec<GroupElement>> {
    let by_pattern = pattern_elements(spec, d, field_deg, budget)?;
    let gens = generators(spec, d, field_deg)?;
    let by_closure = closure_elements(spec, &gens, budget)?;
    if by_pattern != by_closure {
        return Err(Error::Internal(format!(
            "pattern enumeration ({}) and generator closure ({}) disagree for {d:?}",
            by_pattern.len(),
            by_closure.len()
        )));
    }
    Ok(by_pattern)
}

/// Image of a descriptor under the Frobenius root permutation.
pub fn sigma_descriptor(
    perm: &[usize],
    d: &SubgroupDescriptor,
) -> SubgroupDescriptor {
    let map = |v: &Vec<usize>| v.iter().map(|&a| perm[a]).collect::<Vec<_>>();
    match d {
        SubgroupDescriptor::Group { a } => SubgroupDescriptor::Group { a: *a },
        SubgroupDescriptor::GroupGraded { a, i } => SubgroupDescriptor::GroupGraded { a: *a, i: *i },
        SubgroupDescriptor::Torus { a } => SubgroupDescriptor::Torus { a: *a },
        SubgroupDescriptor::CorootTorus { alpha, a } => SubgroupDescriptor::CorootTorus {
            alpha: perm[*alpha],
            a: *a,
        },
        SubgroupDescriptor::RootGroup { alpha, a } => SubgroupDescriptor::RootGroup {
            alpha: perm[*alpha],
            a: *a,
        },
        SubgroupDescriptor::Unipotent { positive, a } => SubgroupDescriptor::Unipotent {
            positive: map(positive),
            a: *a,
        },
        SubgroupDescriptor::UnipotentGraded { positive, i } => SubgroupDescriptor::UnipotentGraded {
            positive: map(positive),
            i: *i,
        },
        SubgroupDescriptor::BruhatK { roots } => SubgroupDescriptor::BruhatK { roots: map(roots) },
        SubgroupDescriptor::Borel { positive } => SubgroupDescriptor::Borel {
            positive: map(positive),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{hyperspecial, iwahori_sl2};
    use super::*;
    use crate::apartment::ApartmentPoint;
    use crate::group::element::apply_frobenius;
    use crate::root_datum::Rat;
    use num::Zero;

    #[test]
    fn identity_in_every_descriptor() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let e = identity(&s, 1);
        let pos = s.datum.positive.clone();
        let descriptors = vec![
            SubgroupDescriptor::Group { a: 0 },
            SubgroupDescriptor::Group { a: 1 },
            SubgroupDescriptor::Torus { a: 0 },
            SubgroupDescriptor::Torus { a: 1 },
            SubgroupDescriptor::RootGroup { alpha: 0, a: 0 },
            SubgroupDescriptor::Unipotent { positive: pos.clone(), a: 0 },
            SubgroupDescriptor::Borel { positive: pos.clone() },
            SubgroupDescriptor::CorootTorus { alpha: pos[0], a: 1 },
        ];
        for d in descriptors {
            assert!(member(&s, &e, &d), "{d:?}");
        }
    }

    #[test]
    fn gl2_group_order() {
        // |G_2(F_q)| = q^4 |GL_2(F_q)|: 3888 for q = 3, 96 for q = 2
        for (q, expect) in [(3u32, 3888usize), (2, 96)] {
            let s = hyperspecial(GroupFamily::GL(2), q, 2);
            let els = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 26).unwrap();
            assert_eq!(els.len(), expect, "q={q}");
        }
    }

    #[test]
    fn split_torus_order() {
        // T_r split in GL_2, r = 2: order (q(q-1))^2
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let els = enumerate(&s, &SubgroupDescriptor::Torus { a: 0 }, 1, 1 << 22).unwrap();
        assert_eq!(els.len(), 36);
        // top filtration quotient: order q^rank
        let top = enumerate(&s, &SubgroupDescriptor::Torus { a: 1 }, 1, 1 << 22).unwrap();
        assert_eq!(top.len(), 9);
    }

    #[test]
    fn root_group_levels() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        // u_alpha(t^{affine_index(alpha,a,r)}) in U^a but not U^{a+1}
        for a in 0..2i64 {
            let k = affine_index(&s.profile, alpha, a, 2).unwrap() - s.profile.m(alpha);
            let mut coeffs = vec![0u16; 2];
            coeffs[k as usize] = 1;
            let g = root_element_scaled(&s, 1, alpha, &coeffs);
            assert!(member(&s, &g, &SubgroupDescriptor::RootGroup { alpha, a }));
            if a + 1 <= 2 {
                assert!(!member(
                    &s,
                    &g,
                    &SubgroupDescriptor::RootGroup { alpha, a: a + 1 }
                ));
            }
        }
    }

    #[test]
    fn gl3_division_algebra_pattern_shape() {
        // Iwahori-type point of GL_3 with pairings (j-i)/3: the level-2
        // pattern has diagonal units mod t^2, above-diagonal mod t,
        // below-diagonal t*F_q.
        let x = ApartmentPoint::new(vec![Rat::new(2, 3), Rat::new(1, 3), Rat::zero()]);
        let s = GroupSpec::new(GroupFamily::GL(3), 2, 2, x).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    assert_eq!(s.win[i][j], 2);
                } else {
                    assert_eq!(s.win[i][j], 1, "window at ({i},{j})");
                    assert_eq!(s.lo[i][j], i64::from(i > j), "depth at ({i},{j})");
                }
            }
        }
        let els = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 24).unwrap();
        // diag: units mod t^2 each (q(q-1))^3; above-diag q^3; below t q^3
        let expect = (2usize * 1).pow(3) * 2usize.pow(6);
        assert_eq!(els.len(), expect);
    }

    #[test]
    fn sl2_iwahori_orders() {
        let s = iwahori_sl2(2, 2);
        let g = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 22).unwrap();
        // diag units with det = 1 mod t^2: |units| = q(q-1); times upper q, lower q
        assert_eq!(g.len(), 2 * 2 * 2);
        let g1 = enumerate(&s, &SubgroupDescriptor::Group { a: 1 }, 1, 1 << 22).unwrap();
        assert_eq!(g1.len(), 2 * 2 * 2); // Iwahori: G = G^1 ... diag 1+at gives q
    }

    #[test]
    fn sp4_hyperspecial_r1_order() {
        let s = hyperspecial(GroupFamily::Sp4, 2, 1);
        let els = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 22).unwrap();
        assert_eq!(els.len(), 720); // |Sp_4(F_2)| = 2^4 (2^2-1)(2^4-1)
    }

    #[test]
    fn sp4_vertex_r1_order() {
        let x = ApartmentPoint::new(vec![Rat::new(1, 2), Rat::zero()]);
        let s = GroupSpec::new(GroupFamily::Sp4, 2, 1, x).unwrap();
        let els = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 22).unwrap();
        assert_eq!(els.len(), 36); // SL_2(F_2)^2
    }

    #[test]
    fn frobenius_descriptor_compatibility() {
        let s = hyperspecial(GroupFamily::GL(2), 2, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let els = pattern_elements(&s, &SubgroupDescriptor::Group { a: 0 }, 2, 1 << 26).unwrap();
        let d = SubgroupDescriptor::RootGroup { alpha, a: 1 };
        // split sigma: the descriptor is its own image
        for g in els.iter().take(500) {
            let fg = apply_frobenius(&s, g).unwrap();
            assert_eq!(member(&s, g, &d), member(&s, &fg, &d));
        }
    }

    #[test]
    fn division_algebra_inner_twist() {
        // GL_3 at the cyclic third-point with the twist b = cyclic shift
        // carrying one t: the composite Frobenius normalizes the pattern,
        // is a homomorphism, permutes the root-group patterns cyclically,
        // and cubes to the plain coefficient Frobenius.
        use crate::group::{apply_frobenius, sigma_descriptor, InnerTwist};
        let x = ApartmentPoint::new(vec![Rat::new(2, 3), Rat::new(1, 3), Rat::zero()]);
        let b = InnerTwist {
            label: "cyclic uniformizer".into(),
            mat: vec![
                vec![(0, vec![0]), (0, vec![1]), (0, vec![0])],
                vec![(0, vec![0]), (0, vec![0]), (0, vec![1])],
                vec![(1, vec![1]), (0, vec![0]), (0, vec![0])],
            ],
        };
        let s = GroupSpec::with_twist(GroupFamily::GL(3), 2, 2, x, Some(b)).unwrap();
        // root permutation e_i - e_j -> e_{i-1} - e_{j-1} (indices mod 3)
        let perm: Vec<usize> = (0..s.datum.n_roots())
            .map(|idx| {
                let r = &s.datum.roots[idx];
                let img: Vec<i64> = (0..3).map(|i| r[(i + 1) % 3]).collect();
                s.datum.root_index(&img).unwrap()
            })
            .collect();
        let f8 = s.field(3);
        let all = pattern_elements(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 26).unwrap();
        for g in all.iter().take(64) {
            for h in all.iter().take(8) {
                let lhs = apply_frobenius(&s, &multiply(&s, g, h)).unwrap();
                let rhs = multiply(
                    &s,
                    &apply_frobenius(&s, g).unwrap(),
                    &apply_frobenius(&s, h).unwrap(),
                );
                assert_eq!(lhs, rhs);
            }
            // b^3 = t is central, so the cube is the plain coefficient
            // Frobenius; on F_q coefficients that is the identity
            let mut cube = g.clone();
            for _ in 0..3 {
                cube = apply_frobenius(&s, &cube).unwrap();
            }
            assert_eq!(&cube, g);
        }
        // root-group patterns map along the permutation, u_alpha -> u_{sigma alpha}
        for alpha in 0..s.datum.n_roots() {
            let d = SubgroupDescriptor::RootGroup { alpha, a: 0 };
            let image_d = sigma_descriptor(&perm, &d);
            for c in 1..f8.size as u16 {
                let g = root_element_scaled(&s, 3, alpha, &[c]);
                let fg = apply_frobenius(&s, &g).unwrap();
                assert!(member(&s, &fg, &image_d), "alpha={alpha} c={c}");
            }
        }
    }

    #[test]
    fn frobenius_fixed_points_are_rational_points() {
        let s = hyperspecial(GroupFamily::GL(2), 2, 2);
        let over_f4 = pattern_elements(&s, &SubgroupDescriptor::Group { a: 0 }, 2, 1 << 26).unwrap();
        let fixed: Vec<_> = over_f4
            .iter()
            .filter(|g| apply_frobenius(&s, g).unwrap() == **g)
            .collect();
        let over_f2 = pattern_elements(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 26).unwrap();
        assert_eq!(fixed.len(), over_f2.len());
    }
}
