//! Group element arithmetic: canonical-form multiplication, inversion via
//! exact Laurent adjugates, Frobenius, and the element constructors
//! (root unipotents, torus elements, Weyl lifts).

use super::laurent::{Laur, EXACT};
use super::{GroupElement, GroupSpec};
use crate::error::{Error, Result};
use crate::field::{embedding, field, Fq};
use crate::root_datum::WeylElement;
use crate::series::TruncatedSeries;
use serde::Serialize;

pub fn identity(spec: &GroupSpec, field_deg: u32) -> GroupElement {
    let mut data = vec![0u16; spec.data_len];
    for i in 0..spec.n {
        // diagonal lo = 0, constant coefficient 1
        if spec.win[i][i] > 0 {
            data[spec.slot_off[i][i]] = 1;
        }
    }
    GroupElement { field_deg, data }
}

#[inline]
pub fn slot<'a>(spec: &GroupSpec, g: &'a GroupElement, i: usize, j: usize) -> &'a [u16] {
    let off = spec.slot_off[i][j];
    &g.data[off..off + spec.win[i][j]]
}

/// Multiply two canonical forms (same coefficient field), landing exactly in
/// canonical form.
pub fn multiply(spec: &GroupSpec, a: &GroupElement, b: &GroupElement) -> GroupElement {
    assert_eq!(a.field_deg, b.field_deg, "field levels must agree");
    let fq = field(spec.p, a.field_deg);
    let mut data = vec![0u16; spec.data_len];
    for i in 0..spec.n {
        for j in 0..spec.n {
            let wout = spec.win[i][j];
            if wout == 0 {
                continue;
            }
            let out = spec.slot_off[i][j];
            for l in 0..spec.n {
                let s = spec.shift(i, l, j);
                if s >= wout as i64 {
                    continue;
                }
                let sa = slot(spec, a, i, l);
                let sb = slot(spec, b, l, j);
                for (k1, &ca) in sa.iter().enumerate() {
                    if ca == 0 {
                        continue;
                    }
                    let base = s + k1 as i64;
                    if base >= wout as i64 {
                        break;
                    }
                    for (k2, &cb) in sb.iter().enumerate() {
                        let k = base + k2 as i64;
                        if k >= wout as i64 {
                            break;
                        }
                        if cb != 0 {
                            let idx = out + k as usize;
                            data[idx] = fq.add(data[idx], fq.mul(ca, cb));
                        }
                    }
                }
            }
        }
    }
    GroupElement {
        field_deg: a.field_deg,
        data,
    }
}

/// The entry at `(i,j)` as a Laurent series with its canonical precision.
pub fn laurent_entry(spec: &GroupSpec, g: &GroupElement, i: usize, j: usize) -> Laur {
    let lo = spec.lo[i][j];
    let w = spec.win[i][j] as i64;
    Laur::from_coeffs(lo, lo + w, slot(spec, g, i, j).to_vec())
}

pub fn laurent_matrix(spec: &GroupSpec, g: &GroupElement) -> Vec<Vec<Laur>> {
    (0..spec.n)
        .map(|i| (0..spec.n).map(|j| laurent_entry(spec, g, i, j)).collect())
        .collect()
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    fn heap(k: usize, perm: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, i64)>) {
        if k == 1 {
            let sign = perm_sign(perm);
            out.push((perm.clone(), sign));
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, out);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    fn perm_sign(p: &[usize]) -> i64 {
        let mut sign = 1i64;
        for i in 0..p.len() {
            for j in (i + 1)..p.len() {
                if p[i] > p[j] {
                    sign = -sign;
                }
            }
        }
        sign
    }
    heap(n, &mut perm, &mut out);
    out
}

pub fn lmat_det(mat: &[Vec<Laur>], fq: &Fq) -> Laur {
    let n = mat.len();
    let mut acc = Laur::zero(EXACT);
    for (perm, sign) in permutations(n) {
        let mut term = Laur::exact_const(1);
        for (i, &j) in perm.iter().enumerate() {
            term = term.mul(&mat[i][j], fq);
        }
        if sign < 0 {
            term = term.neg(fq);
        }
        acc = acc.add(&term, fq);
    }
    acc
}

fn lmat_minor_det(mat: &[Vec<Laur>], skip_row: usize, skip_col: usize, fq: &Fq) -> Laur {
    let n = mat.len();
    let sub: Vec<Vec<Laur>> = (0..n)
        .filter(|&i| i != skip_row)
        .map(|i| {
            (0..n)
                .filter(|&j| j != skip_col)
                .map(|j| mat[i][j].clone())
                .collect()
        })
        .collect();
    if sub.is_empty() {
        return Laur::exact_const(1);
    }
    lmat_det(&sub, fq)
}

/// Inverse of a Laurent matrix via the adjugate; requires the determinant to
/// have visible valuation.
pub fn lmat_inv(mat: &[Vec<Laur>], fq: &Fq) -> Result<Vec<Vec<Laur>>> {
    let n = mat.len();
    let det = lmat_det(mat, fq);
    let det_inv = det.inv(fq)?;
    let mut out = vec![Vec::with_capacity(n); n];
    for (i, row) in out.iter_mut().enumerate() {
        for j in 0..n {
            // adj(i,j) = (-1)^{i+j} minor(j,i)
            let mut m = lmat_minor_det(mat, j, i, fq);
            if (i + j) % 2 == 1 {
                m = m.neg(fq);
            }
            row.push(m.mul(&det_inv, fq));
        }
    }
    Ok(out)
}

/// Truncate a Laurent matrix into a canonical form. Fails if an entry has
/// visible coefficients below its depth bound, or if precision does not
/// reach the canonical window.
pub fn write_back(spec: &GroupSpec, field_deg: u32, mat: &[Vec<Laur>]) -> Result<GroupElement> {
    let mut data = vec![0u16; spec.data_len];
    for i in 0..spec.n {
        for j in 0..spec.n {
            let lo = spec.lo[i][j];
            let w = spec.win[i][j];
            let ent = &mat[i][j];
            if ent.prec < lo + w as i64 {
                return Err(Error::Internal(format!(
                    "insufficient precision at ({i},{j}): prec {} < {}",
                    ent.prec,
                    lo + w as i64
                )));
            }
            if ent.val() < lo {
                return Err(Error::Membership(format!(
                    "entry at ({i},{j}) has valuation {} below the pattern bound {lo}",
                    ent.val()
                )));
            }
            for k in 0..w {
                data[spec.slot_off[i][j] + k] = ent.coeff(lo + k as i64);
            }
        }
    }
    Ok(GroupElement { field_deg, data })
}

/// Group inverse of a canonical form.
pub fn invert(spec: &GroupSpec, g: &GroupElement) -> Result<GroupElement> {
    let fq = field(spec.p, g.field_deg);
    let inv = lmat_inv(&laurent_matrix(spec, g), fq)?;
    let out = write_back(spec, g.field_deg, &inv)?;
    debug_assert_eq!(
        multiply(spec, g, &out),
        identity(spec, g.field_deg),
        "inverse round trip"
    );
    Ok(out)
}

/// Determinant of the represented matrix as a Laurent series.
pub fn det(spec: &GroupSpec, g: &GroupElement) -> Laur {
    let fq = field(spec.p, g.field_deg);
    lmat_det(&laurent_matrix(spec, g), fq)
}

/// Whether the represented coset preserves the symplectic form, to the
/// precision determined by the canonical windows.
pub fn preserves_form(spec: &GroupSpec, g: &GroupElement) -> bool {
    if spec.symplectic_signs.is_empty() {
        return true;
    }
    let fq = field(spec.p, g.field_deg);
    let n = spec.n;
    let a = laurent_matrix(spec, g);
    for i in 0..n {
        for j in 0..n {
            // (g^T J g)(i,j) = sum_l g(l,i) J(l, n-1-l) g(n-1-l, j)
            let mut acc = Laur::zero(EXACT);
            for l in 0..n {
                let sign = spec.symplectic_signs[l];
                let mut term = a[l][i].mul(&a[n - 1 - l][j], fq);
                if sign < 0 {
                    term = term.neg(fq);
                }
                acc = acc.add(&term, fq);
            }
            // subtract J(i,j)
            if j == n - 1 - i {
                let jv = if spec.symplectic_signs[i] < 0 {
                    Laur::exact_const(fq.neg(1))
                } else {
                    Laur::exact_const(1)
                };
                acc = acc.add(&jv.neg(fq), fq);
            }
            if !acc.is_zero_to_precision() {
                return false;
            }
        }
    }
    true
}

/// Lift an element into a larger coefficient field (degree must be a
/// multiple of the current one).
pub fn lift_to(spec: &GroupSpec, g: &GroupElement, field_deg: u32) -> Result<GroupElement> {
    if g.field_deg == field_deg {
        return Ok(g.clone());
    }
    let src = field(spec.p, g.field_deg);
    let dst = field(spec.p, field_deg);
    let table = embedding(src, dst)?;
    Ok(GroupElement {
        field_deg,
        data: g.data.iter().map(|&v| table[v as usize]).collect(),
    })
}

/// Coefficientwise `x -> x^q`, composed with the inner twist when present.
pub fn apply_frobenius(spec: &GroupSpec, g: &GroupElement) -> Result<GroupElement> {
    let fq = field(spec.p, g.field_deg);
    let frobbed = GroupElement {
        field_deg: g.field_deg,
        data: g
            .data
            .iter()
            .map(|&v| fq.frobenius_p(v, spec.base_deg))
            .collect(),
    };
    match &spec.twist {
        None => Ok(frobbed),
        Some(tw) => {
            let b: Vec<Vec<Laur>> = tw
                .mat
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(lo, c)| {
                            let mut l = Laur::exact(*lo, c.clone());
                            // lift F_q coefficients into the element's field
                            if g.field_deg != spec.base_deg {
                                let src = field(spec.p, spec.base_deg);
                                let dst = fq;
                                let t = embedding(src, dst).expect("tower embedding");
                                l.c = l.c.iter().map(|&v| t[v as usize]).collect();
                            }
                            l
                        })
                        .collect()
                })
                .collect();
            let binv = lmat_inv(&b, fq)?;
            let a = laurent_matrix(spec, &frobbed);
            let ba = lmat_mul(&b, &a, fq);
            let bab = lmat_mul(&ba, &binv, fq);
            write_back(spec, g.field_deg, &bab).map_err(|e| match e {
                Error::Membership(msg) => {
                    Error::Config(format!("twist does not normalize the pattern: {msg}"))
                }
                other => other,
            })
        }
    }
}

pub fn lmat_mul(a: &[Vec<Laur>], b: &[Vec<Laur>], fq: &Fq) -> Vec<Vec<Laur>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = Laur::zero(EXACT);
                    for (l, bl) in b.iter().enumerate() {
                        acc = acc.add(&a[i][l].mul(&bl[j], fq), fq);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Positions written by the root unipotent `u_alpha`, with relative signs.
/// The primary slot comes first.
pub fn root_slots(spec: &GroupSpec, alpha: usize) -> Vec<(usize, usize, i64)> {
    let mut slots = Vec::new();
    for i in 0..spec.n {
        for j in 0..spec.n {
            if spec.pos_root[i][j] == Some(alpha) {
                slots.push((i, j, 1i64));
            }
        }
    }
    if slots.len() == 2 && !spec.symplectic_signs.is_empty() {
        // Solve the relative sign from X^T J + J X = 0 over the integers.
        let (i1, j1, _) = slots[0];
        let (i2, j2, _) = slots[1];
        for c in [1i64, -1] {
            let mut ok = true;
            let n = spec.n;
            for a in 0..n {
                for b in 0..n {
                    // (X^T J)(a,b) + (J X)(a,b) with X = E_{i1 j1} + c E_{i2 j2}
                    let xt = |r: usize, s: usize| -> i64 {
                        i64::from((r, s) == (j1, i1)) + c * i64::from((r, s) == (j2, i2))
                    };
                    let x = |r: usize, s: usize| -> i64 {
                        i64::from((r, s) == (i1, j1)) + c * i64::from((r, s) == (i2, j2))
                    };
                    let jmat = |r: usize, s: usize| -> i64 {
                        if s == n - 1 - r {
                            spec.symplectic_signs[r]
                        } else {
                            0
                        }
                    };
                    let mut v = 0i64;
                    for l in 0..n {
                        v += xt(a, l) * jmat(l, b) + jmat(a, l) * x(l, b);
                    }
                    if v != 0 {
                        ok = false;
                    }
                }
            }
            if ok {
                slots[1].2 = c;
                return slots;
            }
        }
        panic!("no symplectic sign balances the paired slots");
    }
    slots
}

/// Root unipotent `u_alpha(y)` where `coeffs[k]` is the coefficient of
/// `t^{m_alpha + k}`; accepts any length, truncating to the window.
pub fn root_element_scaled(
    spec: &GroupSpec,
    field_deg: u32,
    alpha: usize,
    coeffs: &[u16],
) -> GroupElement {
    let mut g = identity(spec, field_deg);
    let fq = field(spec.p, field_deg);
    for (i, j, sign) in root_slots(spec, alpha) {
        let off = spec.slot_off[i][j];
        for k in 0..spec.win[i][j] {
            let c = coeffs.get(k).copied().unwrap_or(0);
            g.data[off + k] = if sign < 0 { fq.neg(c) } else { c };
        }
    }
    g
}

/// Root unipotent from a plain series; requires `v(y) >= m_alpha`.
pub fn root_element(
    spec: &GroupSpec,
    field_deg: u32,
    alpha: usize,
    y: &TruncatedSeries,
) -> Result<GroupElement> {
    let m = spec.profile.m(alpha);
    if (y.valuation() as i64) < m {
        return Err(Error::Membership(format!(
            "valuation {} below the depth bound m = {m}",
            y.valuation()
        )));
    }
    let w = {
        // window of the primary slot
        let (i, j, _) = root_slots(spec, alpha)[0];
        spec.win[i][j]
    };
    let mut coeffs = vec![0u16; w];
    for (k, slot) in coeffs.iter_mut().enumerate() {
        let e = m + k as i64;
        if e >= 0 && (e as usize) < y.coeffs.len() {
            *slot = y.coeffs[e as usize];
        }
    }
    Ok(root_element_scaled(spec, field_deg, alpha, &coeffs))
}

/// Diagonal torus element from independent unit coordinates (length =
/// torus rank). For `Sp4` the coordinates are `(a, b)` giving
/// `diag(a, b, b^{-1}, a^{-1})`; for `SL_n` the product of the coordinates
/// must be 1 modulo `t^r`.
pub fn torus_element(
    spec: &GroupSpec,
    field_deg: u32,
    coords: &[TruncatedSeries],
) -> Result<GroupElement> {
    let rank = spec.family.torus_rank();
    if coords.len() != rank {
        return Err(Error::Domain(format!(
            "expected {rank} torus coordinates, got {}",
            coords.len()
        )));
    }
    let r = spec.r as usize;
    let fq = field(spec.p, field_deg);
    let mut diag: Vec<TruncatedSeries> = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let mut acc = TruncatedSeries::one(fq, r);
        for (k, coord) in coords.iter().enumerate() {
            // exponent of coordinate k in diagonal entry i
            let mut basis = vec![0i64; spec.datum.dim];
            basis[k] = 1;
            let e = spec.datum.pair(&spec.weights[i], &basis);
            let c = coord.with_order(r);
            match e.cmp(&0) {
                std::cmp::Ordering::Equal => {}
                std::cmp::Ordering::Greater => {
                    for _ in 0..e {
                        acc = acc.mul(&c);
                    }
                }
                std::cmp::Ordering::Less => {
                    let inv = c.inv()?;
                    for _ in 0..(-e) {
                        acc = acc.mul(&inv);
                    }
                }
            }
        }
        diag.push(acc);
    }
    if matches!(spec.family, GroupFamily::SL(_)) {
        let mut prod = TruncatedSeries::one(fq, r);
        for d in &diag {
            prod = prod.mul(d);
        }
        if prod != TruncatedSeries::one(fq, r) {
            return Err(Error::Membership("determinant not 1 for SL torus".into()));
        }
    }
    let mut g = identity(spec, field_deg);
    for i in 0..spec.n {
        if diag[i].coeffs[0] == 0 {
            return Err(Error::Membership("torus coordinate is not a unit".into()));
        }
        let off = spec.slot_off[i][i];
        for k in 0..spec.win[i][i] {
            g.data[off + k] = diag[i].coeffs[k];
        }
    }
    Ok(g)
}

use super::GroupFamily;

/// Image of the coroot of `alpha` at the unit `u`.
pub fn coroot_element(
    spec: &GroupSpec,
    field_deg: u32,
    alpha: usize,
    u: &TruncatedSeries,
) -> Result<GroupElement> {
    let r = spec.r as usize;
    let fq = field(spec.p, field_deg);
    let u = u.with_order(r);
    if u.coeffs[0] == 0 {
        return Err(Error::Membership("coroot parameter must be a unit".into()));
    }
    let uinv = u.inv()?;
    let co = &spec.datum.coroots[alpha];
    let mut g = identity(spec, field_deg);
    for i in 0..spec.n {
        let e = spec.datum.pair(&spec.weights[i], co);
        let mut acc = TruncatedSeries::one(fq, r);
        let base = if e >= 0 { &u } else { &uinv };
        for _ in 0..e.abs() {
            acc = acc.mul(base);
        }
        let off = spec.slot_off[i][i];
        for k in 0..spec.win[i][i] {
            g.data[off + k] = acc.coeffs[k];
        }
    }
    Ok(g)
}

/// Chevalley lift `n_alpha = u_alpha(y) u_{-alpha}(-1/y) u_alpha(y)` with
/// `y = t^{m_alpha}`, an element of the parahoric for reductive `alpha`.
pub fn reflection_lift(spec: &GroupSpec, field_deg: u32, alpha: usize) -> Result<GroupElement> {
    if !spec.profile.reductive(alpha) {
        return Err(Error::Domain(
            "reflection lifts exist only for reductive roots".into(),
        ));
    }
    let fq = field(spec.p, field_deg);
    let neg = spec.datum.negate_index(alpha);
    let w = spec.win[root_slots(spec, alpha)[0].0][root_slots(spec, alpha)[0].1];
    let mut ya = vec![0u16; w.max(1)];
    ya[0] = 1; // t^{m_alpha}
    let a1 = root_element_scaled(spec, field_deg, alpha, &ya);
    let wn = {
        let (i, j, _) = root_slots(spec, neg)[0];
        spec.win[i][j]
    };
    let mut yn = vec![0u16; wn.max(1)];
    yn[0] = fq.neg(1); // -t^{m_{-alpha}} = -t^{-m_alpha}
    let a2 = root_element_scaled(spec, field_deg, neg, &yn);
    Ok(multiply(spec, &multiply(spec, &a1, &a2), &a1))
}

/// Lift a Weyl element of the special-fiber Weyl group into `G_r` as a
/// product of reflection lifts found by breadth-first search.
pub fn weyl_lift(spec: &GroupSpec, field_deg: u32, w: &WeylElement) -> Result<GroupElement> {
    let datum = &spec.datum;
    let refl_roots: Vec<usize> = datum
        .positive
        .iter()
        .copied()
        .filter(|&i| spec.profile.reductive(i))
        .collect();
    let id = datum.weyl_identity();
    if w.mat_costar == id.mat_costar {
        return Ok(identity(spec, field_deg));
    }
    let mut seen: Vec<(WeylElement, GroupElement)> = vec![(id, identity(spec, field_deg))];
    let mut cursor = 0;
    while cursor < seen.len() {
        let (cur_w, cur_g) = seen[cursor].clone();
        cursor += 1;
        for &root in &refl_roots {
            let s = datum.reflection(root);
            let next_w = datum.weyl_compose(&cur_w, &s);
            if seen.iter().any(|(x, _)| x.mat_costar == next_w.mat_costar) {
                continue;
            }
            let lift = reflection_lift(spec, field_deg, root)?;
            let next_g = multiply(spec, &cur_g, &lift);
            if next_w.mat_costar == w.mat_costar {
                return Ok(next_g);
            }
            seen.push((next_w, next_g));
        }
    }
    Err(Error::Domain(
        "Weyl element is not generated by reductive reflections at this point".into(),
    ))
}

/// Constant-layer image in the reductive quotient: slot-0 coefficients on
/// the diagonal and on reductive positions, zero elsewhere.
pub fn residual_matrix(spec: &GroupSpec, g: &GroupElement) -> Vec<Vec<u16>> {
    let mut out = vec![vec![0u16; spec.n]; spec.n];
    for i in 0..spec.n {
        for j in 0..spec.n {
            let reductive = match spec.pos_root[i][j] {
                None => true,
                Some(a) => spec.profile.reductive(a),
            };
            if reductive && spec.win[i][j] > 0 {
                out[i][j] = g.data[spec.slot_off[i][j]];
            }
        }
    }
    out
}

#[derive(Serialize)]
struct EntryRepr {
    lo: i64,
    coeffs: Vec<u16>,
}

/// JSON value for an element: matrix of series with their depth offsets.
pub fn serialize_element(spec: &GroupSpec, g: &GroupElement) -> serde_json::Value {
    let mat: Vec<Vec<EntryRepr>> = (0..spec.n)
        .map(|i| {
            (0..spec.n)
                .map(|j| EntryRepr {
                    lo: spec.lo[i][j],
                    coeffs: slot(spec, g, i, j).to_vec(),
                })
                .collect()
        })
        .collect();
    serde_json::json!({
        "field_deg": g.field_deg,
        "matrix": mat,
    })
}

#[cfg(test)]
mod tests {
    use super::super::tests::{hyperspecial, iwahori_sl2};
    use super::*;
    use crate::group::GroupFamily;

    fn f_one(spec: &GroupSpec, deg: u32) -> TruncatedSeries {
        TruncatedSeries::one(field(spec.p, deg), spec.r as usize)
    }

    #[test]
    fn identity_and_multiply() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let e = identity(&s, 1);
        assert_eq!(multiply(&s, &e, &e), e);
        // u_alpha(t) has upper-right entry t
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let fq = s.field(1);
        let y = TruncatedSeries::monomial(fq, 2, 1, 1);
        let g = root_element(&s, 1, alpha, &y).unwrap();
        assert_eq!(slot(&s, &g, 0, 1), &[0, 1]);
        assert_eq!(slot(&s, &g, 0, 0), &[1, 0]);
        // y = 0 gives the identity
        let z = root_element(&s, 1, alpha, &TruncatedSeries::zero(fq, 2)).unwrap();
        assert_eq!(z, e);
    }

    #[test]
    fn group_axioms_small() {
        let s = hyperspecial(GroupFamily::GL(2), 2, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let beta = s.datum.negate_index(alpha);
        let fq = s.field(1);
        let mut elems = vec![identity(&s, 1)];
        for c in 1..fq.size as u16 {
            for k in 0..2usize {
                elems.push(root_element_scaled(&s, 1, alpha, &{
                    let mut v = vec![0u16; 2];
                    v[k] = c;
                    v
                }));
                elems.push(root_element_scaled(&s, 1, beta, &{
                    let mut v = vec![0u16; 2];
                    v[k] = c;
                    v
                }));
            }
        }
        for a in &elems {
            let ai = invert(&s, a).unwrap();
            assert_eq!(multiply(&s, a, &ai), identity(&s, 1));
            assert_eq!(multiply(&s, &ai, a), identity(&s, 1));
            for b in &elems {
                for c in &elems {
                    let ab_c = multiply(&s, &multiply(&s, a, b), c);
                    let a_bc = multiply(&s, a, &multiply(&s, b, c));
                    assert_eq!(ab_c, a_bc);
                }
            }
        }
    }

    #[test]
    fn sl2_iwahori_root_element_bounds() {
        let s = iwahori_sl2(3, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let nalpha = s.datum.negate_index(alpha);
        assert_eq!(s.profile.m(nalpha), 1);
        let fq = s.field(1);
        // u_{-alpha}(1) rejected (valuation 0 < 1), u_{-alpha}(t) accepted
        let one = TruncatedSeries::one(fq, 2);
        assert!(root_element(&s, 1, nalpha, &one).is_err());
        let t = TruncatedSeries::monomial(fq, 2, 1, 1);
        let g = root_element(&s, 1, nalpha, &t).unwrap();
        assert_eq!(slot(&s, &g, 1, 0), &[1]); // scaled: coefficient of t^1
    }

    #[test]
    fn torus_and_coroot_elements() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let fq = s.field(1);
        let u = TruncatedSeries::from_coeffs(fq, vec![2, 1]);
        let t = torus_element(&s, 1, &[u.clone(), f_one(&s, 1)]).unwrap();
        assert_eq!(slot(&s, &t, 0, 0), &[2, 1]);
        let c = coroot_element(&s, 1, s.datum.root_index(&[1, -1]).unwrap(), &u).unwrap();
        assert_eq!(slot(&s, &c, 0, 0), &[2, 1]);
        let uinv = u.inv().unwrap();
        assert_eq!(slot(&s, &c, 1, 1), &uinv.coeffs[..]);
        // SL: determinant condition enforced
        let s = hyperspecial(GroupFamily::SL(2), 3, 2);
        assert!(torus_element(&s, 1, &[u.clone(), u.clone()]).is_err());
        let ui = u.inv().unwrap();
        assert!(torus_element(&s, 1, &[u, ui]).is_ok());
    }

    #[test]
    fn commutator_of_opposite_root_elements_in_sl2() {
        // [u_alpha(y), u_{-alpha}(z)] lies in the coroot torus times deeper
        // terms; check the explicit 2x2 value at r = 2 hyperspecial.
        let s = hyperspecial(GroupFamily::SL(2), 3, 2);
        let fq = s.field(1);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let nalpha = s.datum.negate_index(alpha);
        let y = TruncatedSeries::monomial(fq, 2, 1, 1); // t
        let z = TruncatedSeries::monomial(fq, 2, 1, 1); // t
        let a = root_element(&s, 1, alpha, &y).unwrap();
        let b = root_element(&s, 1, nalpha, &z).unwrap();
        let comm = multiply(
            &s,
            &multiply(&s, &invert(&s, &a).unwrap(), &invert(&s, &b).unwrap()),
            &multiply(&s, &a, &b),
        );
        // [u(t), u_-(t)] = 1 + t^2(...) = identity at r = 2
        assert_eq!(comm, identity(&s, 1));
    }

    #[test]
    fn frobenius_fixed_points_and_homomorphism() {
        let s = hyperspecial(GroupFamily::GL(2), 2, 2);
        let alpha = s.datum.root_index(&[1, -1]).unwrap();
        let f4 = s.field(2);
        let g = root_element_scaled(&s, 2, alpha, &[f4.generator, 1]);
        let fr = apply_frobenius(&s, &g).unwrap();
        assert_ne!(fr, g);
        let fr2 = apply_frobenius(&s, &fr).unwrap();
        assert_eq!(fr2, g);
        // homomorphism
        let h = root_element_scaled(&s, 2, s.datum.negate_index(alpha), &[3, 2]);
        let lhs = apply_frobenius(&s, &multiply(&s, &g, &h)).unwrap();
        let rhs = multiply(
            &s,
            &apply_frobenius(&s, &g).unwrap(),
            &apply_frobenius(&s, &h).unwrap(),
        );
        assert_eq!(lhs, rhs);
        // elements over F_q are fixed
        let e = root_element_scaled(&s, 1, alpha, &[1, 1]);
        assert_eq!(apply_frobenius(&s, &e).unwrap(), e);
    }

    #[test]
    fn sp4_symplectic_generators() {
        let s = hyperspecial(GroupFamily::Sp4, 2, 1);
        for alpha in 0..s.datum.n_roots() {
            let g = root_element_scaled(&s, 1, alpha, &[1]);
            assert!(preserves_form(&s, &g), "root {alpha}");
            let gi = invert(&s, &g).unwrap();
            assert_eq!(multiply(&s, &g, &gi), identity(&s, 1));
        }
        let fq = s.field(1);
        let a = TruncatedSeries::one(fq, 1);
        let t = torus_element(&s, 1, &[a.clone(), a]).unwrap();
        assert!(preserves_form(&s, &t));
    }

    #[test]
    fn weyl_lift_normalizes_torus() {
        let s = hyperspecial(GroupFamily::GL(2), 3, 2);
        let ws = crate::root_datum::weyl_elements(&s.datum);
        let w = ws.iter().find(|w| w.perm != (0..2).collect::<Vec<_>>()).unwrap();
        let lift = weyl_lift(&s, 1, w).unwrap();
        // conjugating a torus element permutes the diagonal
        let fq = s.field(1);
        let u = TruncatedSeries::from_coeffs(fq, vec![2, 0]);
        let t = torus_element(&s, 1, &[u.clone(), f_one(&s, 1)]).unwrap();
        let conj = multiply(
            &s,
            &multiply(&s, &lift, &t),
            &invert(&s, &lift).unwrap(),
        );
        let expect = torus_element(&s, 1, &[f_one(&s, 1), u]).unwrap();
        assert_eq!(conj, expect);
    }
}
