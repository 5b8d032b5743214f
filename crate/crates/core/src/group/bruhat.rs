//! Bruhat cells in the reductive quotient, explicit cell factorization for
//! rank-one matrix groups, and the Iwahori decomposition of depth subgroups
//! by valuation-pivot elimination.

use super::descriptor::{member, pattern_elements, SubgroupDescriptor};
use super::element::{
    identity, invert, laurent_entry, multiply, residual_matrix, root_element_scaled, slot,
    torus_element, weyl_lift,
};
use super::laurent::Laur;
use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::field::field;
use crate::root_datum::WeylElement;
use crate::series::TruncatedSeries;
use std::collections::HashMap;

/// Weyl group of the special fiber: generated by reflections in the
/// reductive roots.
pub fn wx_elements(spec: &GroupSpec) -> Vec<WeylElement> {
    let gens: Vec<usize> = spec
        .datum
        .positive
        .iter()
        .copied()
        .filter(|&a| spec.profile.reductive(a))
        .collect();
    spec.datum.weyl_generate(&gens)
}

/// The same group model at a shallower level `r'`.
pub fn level_quotient(spec: &GroupSpec, r_new: i64) -> Result<GroupSpec> {
    GroupSpec::with_twist(
        spec.family,
        spec.q,
        r_new,
        spec.x.clone(),
        spec.twist.clone(),
    )
}

/// Project a canonical form to a shallower level.
pub fn project(spec: &GroupSpec, spec_low: &GroupSpec, g: &GroupElement) -> GroupElement {
    let mut data = vec![0u16; spec_low.data_len];
    for i in 0..spec.n {
        for j in 0..spec.n {
            let src = slot(spec, g, i, j);
            let off = spec_low.slot_off[i][j];
            for k in 0..spec_low.win[i][j] {
                data[off + k] = src.get(k).copied().unwrap_or(0);
            }
        }
    }
    GroupElement {
        field_deg: g.field_deg,
        data,
    }
}

/// The Bruhat decomposition of the reductive quotient at a fixed field
/// level, stored as a lookup from level-one canonical forms to cell index.
/// Construction checks the cells are disjoint and exhaustive.
pub struct BruhatCells {
    pub spec1: GroupSpec,
    pub ws: Vec<WeylElement>,
    pub lifts: Vec<GroupElement>,
    map: HashMap<GroupElement, usize>,
}

impl BruhatCells {
    pub fn new(spec: &GroupSpec, field_deg: u32) -> Result<BruhatCells> {
        let spec1 = level_quotient(spec, 1)?;
        let ws = wx_elements(spec);
        let mut lifts = Vec::new();
        let mut map = HashMap::new();
        let pos = spec1.datum.positive.clone();
        let u_els = pattern_elements(
            &spec1,
            &SubgroupDescriptor::Unipotent {
                positive: pos.clone(),
                a: 0,
            },
            field_deg,
            1 << 30,
        )?;
        let t_els = pattern_elements(&spec1, &SubgroupDescriptor::Torus { a: 0 }, field_deg, 1 << 30)?;
        for (wi, w) in ws.iter().enumerate() {
            let lift = weyl_lift(&spec1, field_deg, w)?;
            for u in &u_els {
                let uw = multiply(&spec1, u, &lift);
                for t in &t_els {
                    let uwt = multiply(&spec1, &uw, t);
                    for u2 in &u_els {
                        let el = multiply(&spec1, &uwt, u2);
                        if let Some(&prev) = map.get(&el) {
                            if prev != wi {
                                return Err(Error::Internal(
                                    "Bruhat cells overlap across Weyl elements".into(),
                                ));
                            }
                        } else {
                            map.insert(el, wi);
                        }
                    }
                }
            }
            lifts.push(lift);
        }
        Ok(BruhatCells {
            spec1,
            ws,
            lifts,
            map,
        })
    }

    /// Number of level-one points per cell.
    pub fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.ws.len()];
        for &wi in self.map.values() {
            sizes[wi] += 1;
        }
        sizes
    }

    pub fn total(&self) -> usize {
        self.map.len()
    }

    /// Cell of a level-one canonical form.
    pub fn component1(&self, g1: &GroupElement) -> Result<usize> {
        self.map
            .get(g1)
            .copied()
            .ok_or_else(|| Error::Internal("element outside the Bruhat partition".into()))
    }
}

/// The Weyl component of `g`: the cell of its reductive-quotient image.
pub fn bruhat_component(
    spec: &GroupSpec,
    cells: &BruhatCells,
    g: &GroupElement,
) -> Result<usize> {
    let g1 = project(spec, &cells.spec1, g);
    cells.component1(&g1)
}

/// Explicit cell factorization `g = u z wdot tau u'` for the rank-one matrix
/// families (`GL_2`, `SL_2`), with `U' = U` the standard upper system and
/// `z` in the depth-one opposite-intersection subgroup.
pub struct BruhatFactorization {
    pub u: GroupElement,
    pub z: GroupElement,
    pub w: usize,
    pub tau: GroupElement,
    pub u_prime: GroupElement,
}

fn laur_div(a: &Laur, b: &Laur, fq: &'static crate::field::Fq) -> Result<Laur> {
    Ok(a.mul(&b.inv(fq)?, fq))
}

fn series_from_laur(_spec: &GroupSpec, l: &Laur, lo: i64, w: usize) -> Result<Vec<u16>> {
    if l.val() < lo {
        return Err(Error::Membership(format!(
            "coordinate valuation {} below bound {lo}",
            l.val()
        )));
    }
    if l.prec < lo + w as i64 {
        return Err(Error::Internal("insufficient precision for coordinate".into()));
    }
    Ok((0..w).map(|k| l.coeff(lo + k as i64)).collect())
}

/// Factor `g` through its Bruhat cell; 2x2 families only.
pub fn bruhat_factorize(
    spec: &GroupSpec,
    cells: &BruhatCells,
    g: &GroupElement,
) -> Result<BruhatFactorization> {
    if spec.n != 2 {
        return Err(Error::Domain(
            "explicit cell factorization implemented for 2x2 families".into(),
        ));
    }
    let wi = bruhat_component(spec, cells, g)?;
    let fq = field(spec.p, g.field_deg);
    let alpha = spec.pos_root[0][1].unwrap();
    let nalpha = spec.pos_root[1][0].unwrap();
    let id = identity(spec, g.field_deg);
    let trivial_cell = cells.ws[wi].perm == spec.datum.weyl_identity().perm;
    let (u, z, tau, u_prime, wlift) = if trivial_cell {
        // g = 1 * u_{-alpha}(c/a) * tau * u_alpha(b/a)
        let a_ent = laurent_entry(spec, g, 0, 0);
        let b_ent = laurent_entry(spec, g, 0, 1);
        let c_ent = laurent_entry(spec, g, 1, 0);
        let y = laur_div(&c_ent, &a_ent, fq)?;
        let z = root_element_scaled(
            spec,
            g.field_deg,
            nalpha,
            &series_from_laur(spec, &y, spec.lo[1][0], spec.win[1][0])?,
        );
        // depth-one membership of z
        if !member(spec, &z, &SubgroupDescriptor::BruhatK { roots: vec![nalpha] }) {
            return Err(Error::Internal("cell coordinate not in the depth-one part".into()));
        }
        let rest = multiply(spec, &invert(spec, &z)?, g);
        let d1 = TruncatedSeries::from_coeffs(fq, slot(spec, &rest, 0, 0).to_vec());
        let d2 = TruncatedSeries::from_coeffs(fq, slot(spec, &rest, 1, 1).to_vec());
        let tau = torus_element(spec, g.field_deg, &[d1, d2])?;
        let u_prime_coord = laur_div(&b_ent, &a_ent, fq)?;
        let u_prime = root_element_scaled(
            spec,
            g.field_deg,
            alpha,
            &series_from_laur(spec, &u_prime_coord, spec.lo[0][1], spec.win[0][1])?,
        );
        (id.clone(), z, tau, u_prime, identity(spec, g.field_deg))
    } else {
        // g = u * wdot * tau * u' with z = 1
        let wlift = {
            // lift at full level
            weyl_lift(spec, g.field_deg, &cells.ws[wi])?
        };
        let h = multiply(spec, &invert(spec, &wlift)?, g);
        let h11 = laurent_entry(spec, &h, 0, 0);
        let h21 = laurent_entry(spec, &h, 1, 0);
        let v = laur_div(&h21, &h11, fq)?.neg(fq);
        let l = root_element_scaled(
            spec,
            g.field_deg,
            nalpha,
            &series_from_laur(spec, &v, spec.lo[1][0], spec.win[1][0])?,
        );
        let rest = multiply(spec, &l, &h);
        let d1 = TruncatedSeries::from_coeffs(fq, slot(spec, &rest, 0, 0).to_vec());
        let d2 = TruncatedSeries::from_coeffs(fq, slot(spec, &rest, 1, 1).to_vec());
        let tau = torus_element(spec, g.field_deg, &[d1, d2])?;
        let u_prime = multiply(spec, &invert(spec, &tau)?, &rest);
        if !member(
            spec,
            &u_prime,
            &SubgroupDescriptor::Unipotent {
                positive: vec![alpha],
                a: 0,
            },
        ) {
            return Err(Error::Internal("upper factor escaped the unipotent radical".into()));
        }
        let u = multiply(
            spec,
            &multiply(spec, &wlift, &invert(spec, &l)?),
            &invert(spec, &wlift)?,
        );
        if !member(
            spec,
            &u,
            &SubgroupDescriptor::Unipotent {
                positive: vec![alpha],
                a: 0,
            },
        ) {
            return Err(Error::Internal("conjugated factor escaped the unipotent radical".into()));
        }
        (u, id.clone(), tau, u_prime, wlift)
    };
    let wl = if trivial_cell { id.clone() } else { wlift };
    // recomposition check
    let recomposed = multiply(
        spec,
        &multiply(spec, &multiply(spec, &u, &z), &wl),
        &multiply(spec, &tau, &u_prime),
    );
    if &recomposed != g {
        return Err(Error::Internal("cell factorization does not recompose".into()));
    }
    Ok(BruhatFactorization {
        u,
        z,
        w: wi,
        tau,
        u_prime,
    })
}

/// Iwahori decomposition of `g` in the depth-`a` subgroup: `g = h- h0 h+`
/// by successive valuation-pivot elimination of the below-diagonal entries.
pub fn iwahori_decompose(
    spec: &GroupSpec,
    g: &GroupElement,
    a: i64,
) -> Result<(GroupElement, GroupElement, GroupElement)> {
    if !member(spec, g, &SubgroupDescriptor::Group { a }) {
        return Err(Error::Membership(format!("element not in the depth-{a} subgroup")));
    }
    let fq = field(spec.p, g.field_deg);
    let mut work = g.clone();
    let mut h_minus = identity(spec, g.field_deg);
    for j in 0..spec.n {
        for i in (j + 1)..spec.n {
            let piv = laurent_entry(spec, &work, j, j);
            let ent = laurent_entry(spec, &work, i, j);
            let c = laur_div(&ent, &piv, fq)?;
            if c.is_zero_to_precision() {
                continue;
            }
            let root = spec.pos_root[i][j].unwrap();
            let coeffs = series_from_laur(spec, &c, spec.lo[i][j], spec.win[i][j])?;
            let ele = root_element_scaled(spec, g.field_deg, root, &coeffs);
            h_minus = multiply(spec, &h_minus, &ele);
            work = multiply(spec, &invert(spec, &ele)?, &work);
        }
    }
    let diag: Vec<TruncatedSeries> = (0..spec.family.torus_rank())
        .map(|i| TruncatedSeries::from_coeffs(fq, slot(spec, &work, i, i).to_vec()))
        .collect();
    let h0 = torus_element(spec, g.field_deg, &diag)?;
    let h_plus = multiply(spec, &invert(spec, &h0)?, &work);
    // memberships per the statement
    let negatives: Vec<usize> = spec
        .datum
        .positive
        .iter()
        .map(|&p| spec.datum.negate_index(p))
        .collect();
    let positives = spec.datum.positive.clone();
    if !member(spec, &h_minus, &SubgroupDescriptor::Unipotent { positive: negatives, a })
        || !member(spec, &h0, &SubgroupDescriptor::Torus { a })
        || !member(spec, &h_plus, &SubgroupDescriptor::Unipotent { positive: positives, a })
    {
        return Err(Error::Internal(
            "Iwahori decomposition factors escaped their subgroups".into(),
        ));
    }
    let back = multiply(spec, &multiply(spec, &h_minus, &h0), &h_plus);
    if &back != g {
        return Err(Error::Internal("Iwahori decomposition does not recompose".into()));
    }
    Ok((h_minus, h0, h_plus))
}

/// Residual matrix as a displayable grid (used by reports).
pub fn residual_of(spec: &GroupSpec, g: &GroupElement) -> Vec<Vec<u16>> {
    residual_matrix(spec, g)
}

#[cfg(test)]
mod tests {
    use super::super::descriptor::enumerate;
    use super::super::tests::{hyperspecial, iwahori_sl2};
    use super::*;
    use crate::group::GroupFamily;
    use rand::{Rng, SeedableRng};

    #[test]
    fn wx_orders() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        assert_eq!(wx_elements(&s).len(), 2);
        let s = iwahori_sl2(3, 2);
        assert_eq!(wx_elements(&s).len(), 1);
        // Sp4 at the A1xA1 vertex: order 4
        let x = crate::apartment::ApartmentPoint::new(vec![
            crate::root_datum::Rat::new(1, 2),
            crate::root_datum::Rat::new(0, 1),
        ]);
        let s = GroupSpec::new(GroupFamily::Sp4, 2, 1, x).unwrap();
        assert_eq!(wx_elements(&s).len(), 4);
    }

    #[test]
    fn bruhat_partition_gl2() {
        for q in [2u32, 3] {
            let s = hyperspecial(GroupFamily::GL(2), q, 2);
            let cells = BruhatCells::new(&s, 1).unwrap();
            let all = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 26).unwrap();
            let mut counts = vec![0usize; cells.ws.len()];
            for g in &all {
                counts[bruhat_component(&s, &cells, g).unwrap()] += 1;
            }
            assert_eq!(counts.iter().sum::<usize>(), all.len());
            // cell sizes lift the level-one cells by the kernel order
            let kernel = all.len() / cells.total();
            for (wi, c) in counts.iter().enumerate() {
                assert_eq!(*c, cells.cell_sizes()[wi] * kernel, "q={q} w={wi}");
            }
            // identity lands in the trivial cell; the antidiagonal in the other
            let id = identity(&s, 1);
            let wid = bruhat_component(&s, &cells, &id).unwrap();
            assert_eq!(cells.ws[wid].perm, s.datum.weyl_identity().perm);
            let anti = weyl_lift(&s, 1, cells.ws.iter().find(|w| w.perm != s.datum.weyl_identity().perm).unwrap()).unwrap();
            let wa = bruhat_component(&s, &cells, &anti).unwrap();
            assert_ne!(wid, wa);
        }
    }

    #[test]
    fn factorization_covers_cells() {
        for q in [2u32, 3] {
            let s = hyperspecial(GroupFamily::SL(2), q, 2);
            let cells = BruhatCells::new(&s, 1).unwrap();
            let all = enumerate(&s, &SubgroupDescriptor::Group { a: 0 }, 1, 1 << 26).unwrap();
            for g in &all {
                let f = bruhat_factorize(&s, &cells, g).unwrap();
                assert_eq!(f.w, bruhat_component(&s, &cells, g).unwrap());
            }
        }
    }

    #[test]
    fn iwahori_decompose_round_trip() {
        let s = iwahori_sl2(3, 3);
        let all = enumerate(&s, &SubgroupDescriptor::Group { a: 1 }, 1, 1 << 26).unwrap();
        for g in &all {
            let (hm, h0, hp) = iwahori_decompose(&s, g, 1).unwrap();
            let back = multiply(&s, &multiply(&s, &hm, &h0), &hp);
            assert_eq!(&back, g);
        }
    }

    #[test]
    fn iwahori_decompose_randomized_hyperspecial() {
        // random sample: recomposition multiplies back (seeded)
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut done = 0;
        while done < 2000 {
            let mut g = identity(&s, 1);
            for v in g.data.iter_mut() {
                *v = rng.gen_range(0..3);
            }
            if !member(&s, &g, &SubgroupDescriptor::Group { a: 1 }) {
                // force depth-1 membership: reset diagonal to 1 + t *
                for i in 0..2 {
                    g.data[s.slot_off[i][i]] = 1;
                }
                if !member(&s, &g, &SubgroupDescriptor::Group { a: 1 }) {
                    continue;
                }
            }
            let (hm, h0, hp) = iwahori_decompose(&s, &g, 1).unwrap();
            assert_eq!(multiply(&s, &multiply(&s, &hm, &h0), &hp), g);
            done += 1;
        }
    }
}
