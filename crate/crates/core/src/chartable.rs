//! Full character tables of small finite groups by the class-algebra
//! eigenvector method: conjugacy classes by brute-force fusion, class
//! multiplication coefficients, simultaneous eigenvectors over a large
//! prime field, and an exact cyclotomic lift through the power maps.

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::group::{generators, identity, invert, multiply, GroupElement, GroupSpec, SubgroupDescriptor};
use serde::Serialize;
use std::collections::HashMap;

#[derive(Clone, Debug)]
pub struct ConjClass {
    pub rep: GroupElement,
    pub members: Vec<GroupElement>,
}

/// A full character table with exact cyclotomic entries.
pub struct CharacterTable {
    pub classes: Vec<ConjClass>,
    pub class_of: HashMap<GroupElement, usize>,
    /// `irreducibles[i][j]` is the value of character `i` on class `j`.
    pub irreducibles: Vec<Vec<Cyc>>,
    pub degrees: Vec<i64>,
    pub exponent: u64,
    pub order: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TableSummary {
    pub order: u64,
    pub classes: usize,
    pub degrees: Vec<i64>,
    pub exponent: u64,
}

fn element_order(spec: &GroupSpec, g: &GroupElement) -> u64 {
    let e = identity(spec, g.field_deg);
    let mut cur = g.clone();
    let mut k = 1u64;
    while cur != e {
        cur = multiply(spec, &cur, g);
        k += 1;
    }
    k
}

/// Conjugacy classes by orbit closure under conjugation by a generator set.
fn conjugacy_classes(spec: &GroupSpec, elements: &[GroupElement]) -> Result<Vec<ConjClass>> {
    let deg = elements
        .first()
        .map(|g| g.field_deg)
        .ok_or_else(|| Error::Domain("empty group".into()))?;
    let gens = generators(spec, &SubgroupDescriptor::Group { a: 0 }, deg)?;
    let gen_invs: Vec<GroupElement> = gens
        .iter()
        .map(|g| invert(spec, g))
        .collect::<Result<_>>()?;
    let mut assigned: HashMap<GroupElement, usize> = HashMap::new();
    let mut classes = Vec::new();
    for e in elements {
        if assigned.contains_key(e) {
            continue;
        }
        let id = classes.len();
        let mut members = vec![e.clone()];
        assigned.insert(e.clone(), id);
        let mut frontier = vec![e.clone()];
        while let Some(x) = frontier.pop() {
            for (g, gi) in gens.iter().zip(&gen_invs) {
                let y = multiply(spec, &multiply(spec, g, &x), gi);
                if !assigned.contains_key(&y) {
                    assigned.insert(y.clone(), id);
                    members.push(y.clone());
                    frontier.push(y);
                }
            }
        }
        members.sort();
        classes.push(ConjClass {
            rep: members[0].clone(),
            members,
        });
    }
    Ok(classes)
}

// --- small dense linear algebra over F_ell ---

fn madd(a: u64, b: u64, m: u64) -> u64 {
    (a + b) % m
}

fn mmul(a: u64, b: u64, m: u64) -> u64 {
    a * b % m
}

fn mpow(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mmul(acc, a, m);
        }
        a = mmul(a, a, m);
        e >>= 1;
    }
    acc
}

fn minv(a: u64, m: u64) -> u64 {
    mpow(a, m - 2, m)
}

/// Reduced row echelon form; returns pivot columns.
fn rref(mat: &mut Vec<Vec<u64>>, m: u64) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r >= rows {
            break;
        }
        if let Some(pr) = (r..rows).find(|&i| mat[i][c] != 0) {
            mat.swap(r, pr);
            let inv = minv(mat[r][c], m);
            for j in 0..cols {
                mat[r][j] = mmul(mat[r][j], inv, m);
            }
            for i in 0..rows {
                if i != r && mat[i][c] != 0 {
                    let f = mat[i][c];
                    for j in 0..cols {
                        let sub = mmul(f, mat[r][j], m);
                        mat[i][j] = (mat[i][j] + m - sub) % m;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
    }
    pivots
}

/// Nullspace basis (as rows) of a square matrix.
fn nullspace(mat: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = mat.len();
    let mut work = mat.to_vec();
    let pivots = rref(&mut work, m);
    let mut basis = Vec::new();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    for &f in &free {
        let mut v = vec![0u64; n];
        v[f] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            v[pc] = (m - work[ri][f] % m) % m;
        }
        basis.push(v);
    }
    basis
}

fn det_mod(mat: &[Vec<u64>], m: u64) -> u64 {
    let n = mat.len();
    let mut work = mat.to_vec();
    let mut det = 1u64;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| work[i][c] != 0) else {
            return 0;
        };
        if pr != c {
            work.swap(c, pr);
            det = (m - det) % m;
        }
        det = mmul(det, work[c][c], m);
        let inv = minv(work[c][c], m);
        for i in (c + 1)..n {
            if work[i][c] != 0 {
                let f = mmul(work[i][c], inv, m);
                for j in c..n {
                    let sub = mmul(f, work[c][j], m);
                    work[i][j] = (work[i][j] + m - sub) % m;
                }
            }
        }
    }
    det
}

/// Characteristic polynomial by interpolation (coefficients low-to-high).
fn char_poly(mat: &[Vec<u64>], m: u64) -> Vec<u64> {
    let n = mat.len();
    // evaluate det(M - x I) at x = 0..n
    let mut xs = Vec::with_capacity(n + 1);
    let mut ys = Vec::with_capacity(n + 1);
    for x in 0..=(n as u64) {
        let mut w = mat.to_vec();
        for (i, row) in w.iter_mut().enumerate() {
            row[i] = (row[i] + m - x % m) % m;
        }
        xs.push(x % m);
        ys.push(det_mod(&w, m));
    }
    // Lagrange interpolation
    let mut coeffs = vec![0u64; n + 1];
    for i in 0..=n {
        // basis polynomial through xs[i]
        let mut num = vec![1u64]; // poly coefficients
        let mut denom = 1u64;
        for j in 0..=n {
            if i == j {
                continue;
            }
            // num *= (x - xs[j])
            let mut next = vec![0u64; num.len() + 1];
            for (k, &c) in num.iter().enumerate() {
                next[k + 1] = madd(next[k + 1], c, m);
                next[k] = (next[k] + m - mmul(c, xs[j], m) % m) % m;
            }
            num = next;
            denom = mmul(denom, (xs[i] + m - xs[j]) % m, m);
        }
        let f = mmul(ys[i], minv(denom, m), m);
        for (k, &c) in num.iter().enumerate() {
            coeffs[k] = madd(coeffs[k], mmul(c, f, m), m);
        }
    }
    coeffs
}

fn poly_eval(coeffs: &[u64], x: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    for &c in coeffs.iter().rev() {
        acc = madd(mmul(acc, x, m), c, m);
    }
    acc
}

fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], m: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let cols = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![0u64; cols]; n];
    for i in 0..n {
        for k in 0..inner {
            if a[i][k] != 0 {
                for j in 0..cols {
                    out[i][j] = madd(out[i][j], mmul(a[i][k], b[k][j], m), m);
                }
            }
        }
    }
    out
}

/// Solve `basis^T x = v` where the subspace basis rows are linearly
/// independent; returns the coordinates of `v` in the basis.
fn coords_in_basis(basis: &[Vec<u64>], v: &[u64], m: u64) -> Option<Vec<u64>> {
    let k = basis.len();
    let n = v.len();
    let mut aug: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            let mut row: Vec<u64> = basis.iter().map(|b| b[i]).collect();
            row.push(v[i]);
            row
        })
        .collect();
    let pivots = rref(&mut aug, m);
    let mut x = vec![0u64; k];
    for (ri, &pc) in pivots.iter().enumerate() {
        if pc == k {
            return None; // inconsistent
        }
        x[pc] = aug[ri][k];
    }
    // verify
    for i in 0..n {
        let mut acc = 0u64;
        for (j, b) in basis.iter().enumerate() {
            acc = madd(acc, mmul(x[j], b[i], m), m);
        }
        if acc != v[i] % m {
            return None;
        }
    }
    Some(x)
}

fn primitive_root(m: u64) -> u64 {
    let phi = m - 1;
    let mut fs = Vec::new();
    let mut n = phi;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            fs.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    'outer: for g in 2..m {
        for &f in &fs {
            if mpow(g, phi / f, m) == 1 {
                continue 'outer;
            }
        }
        return g;
    }
    unreachable!("prime fields have primitive roots")
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Compute the full character table of the finite group given by its
/// element list (a subgroup of the model closed under multiplication).
pub fn character_table(
    spec: &GroupSpec,
    elements: &[GroupElement],
    budget: u64,
) -> Result<CharacterTable> {
    let order = elements.len() as u64;
    if order > budget {
        return Err(Error::Resource {
            what: "character table".into(),
            budget,
            partial: order,
        });
    }
    let classes = conjugacy_classes(spec, elements)?;
    let k = classes.len();
    let mut class_of = HashMap::new();
    for (i, c) in classes.iter().enumerate() {
        for g in &c.members {
            class_of.insert(g.clone(), i);
        }
    }
    // exponent
    let orders: Vec<u64> = classes
        .iter()
        .map(|c| element_order(spec, &c.rep))
        .collect();
    let exponent = orders.iter().fold(1u64, |a, &b| num::integer::lcm(a, b));
    // inverse classes and power maps
    let mut power_class = vec![vec![0usize; exponent as usize]; k];
    for (i, c) in classes.iter().enumerate() {
        let mut cur = identity(spec, c.rep.field_deg);
        for t in 0..exponent as usize {
            power_class[i][t] = *class_of.get(&cur).ok_or_else(|| {
                Error::Domain("element set is not closed under multiplication".into())
            })?;
            cur = multiply(spec, &cur, &c.rep);
        }
    }
    let inv_class: Vec<usize> = (0..k)
        .map(|i| power_class[i][(orders[i] - 1) as usize])
        .collect();
    // class multiplication coefficients a[i][j][k2]
    let mut cmc = vec![vec![vec![0u64; k]; k]; k];
    for i in 0..k {
        for (k2, ck) in classes.iter().enumerate() {
            for x in &classes[i].members {
                let y = multiply(spec, &invert(spec, x)?, &ck.rep);
                let j = class_of[&y];
                cmc[i][j][k2] += 1;
            }
        }
    }
    // Dixon prime: ell = 1 mod exponent, ell > |G|
    let mut ell = ((order / exponent) + 1) * exponent + 1;
    let is_prime = |n: u64| -> bool {
        if n < 2 {
            return false;
        }
        let mut d = 2;
        while d * d <= n {
            if n % d == 0 {
                return false;
            }
            d += 1;
        }
        true
    };
    while !is_prime(ell) {
        ell += exponent;
    }
    let z = mpow(primitive_root(ell), (ell - 1) / exponent, ell);
    // class matrices (M_i)[k2][j] = a[i][j][k2]
    let mats: Vec<Vec<Vec<u64>>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|k2| (0..k).map(|j| cmc[i][j][k2] % ell).collect())
                .collect()
        })
        .collect();
    // split the space into common eigenlines
    let mut subspaces: Vec<Vec<Vec<u64>>> = vec![(0..k)
        .map(|i| {
            let mut v = vec![0u64; k];
            v[i] = 1;
            v
        })
        .collect()];
    for mat in &mats {
        let mut next = Vec::new();
        for sub in subspaces.drain(..) {
            if sub.len() == 1 {
                next.push(sub);
                continue;
            }
            // restrict mat to the subspace
            let d = sub.len();
            let images: Vec<Vec<u64>> = sub
                .iter()
                .map(|v| {
                    let col: Vec<Vec<u64>> = v.iter().map(|&x| vec![x]).collect();
                    mat_mul(mat, &col, ell).into_iter().map(|r| r[0]).collect()
                })
                .collect();
            let restricted: Vec<Vec<u64>> = images
                .iter()
                .map(|im| {
                    coords_in_basis(&sub, im, ell)
                        .expect("class matrices stabilize the subspaces")
                })
                .collect();
            // restricted[c][r]: image of basis c has coordinates restricted[c]
            let mut rmat = vec![vec![0u64; d]; d];
            for (c, co) in restricted.iter().enumerate() {
                for (r, &v) in co.iter().enumerate() {
                    rmat[r][c] = v;
                }
            }
            let cp = char_poly(&rmat, ell);
            let mut split = Vec::new();
            for lam in 0..ell {
                if poly_eval(&cp, lam, ell) == 0 {
                    let mut shifted = rmat.clone();
                    for (i, row) in shifted.iter_mut().enumerate() {
                        row[i] = (row[i] + ell - lam) % ell;
                    }
                    let ns = nullspace(&shifted, ell);
                    if !ns.is_empty() {
                        // map back to ambient coordinates
                        let amb: Vec<Vec<u64>> = ns
                            .iter()
                            .map(|coefs| {
                                let mut v = vec![0u64; k];
                                for (ci, &co) in coefs.iter().enumerate() {
                                    for (x, slot) in v.iter_mut().enumerate() {
                                        *slot = madd(*slot, mmul(co, sub[ci][x], ell), ell);
                                    }
                                }
                                v
                            })
                            .collect();
                        split.push(amb);
                    }
                }
            }
            let total: usize = split.iter().map(|s| s.len()).sum();
            if total != d {
                return Err(Error::Internal(
                    "class matrix eigenspaces do not fill the subspace".into(),
                ));
            }
            next.extend(split);
        }
        subspaces = next;
        if subspaces.iter().all(|s| s.len() == 1) {
            break;
        }
    }
    if !subspaces.iter().all(|s| s.len() == 1) {
        return Err(Error::Internal(
            "class matrices failed to separate the characters".into(),
        ));
    }
    // eigenvalue tuples -> characters mod ell -> exact lift
    let id_class = class_of[&identity(spec, elements[0].field_deg)];
    let mut irreducibles = Vec::new();
    let mut degrees = Vec::new();
    for sub in &subspaces {
        let v = &sub[0];
        // normalize so that the identity-class coordinate is 1
        let vid = v[id_class];
        if vid == 0 {
            return Err(Error::Internal("eigenvector vanishes at the identity class".into()));
        }
        let vinv = minv(vid, ell);
        let v: Vec<u64> = v.iter().map(|&x| mmul(x, vinv, ell)).collect();
        // omega_i = v_i (normalized eigenvalue of M_i), since M_i v = omega_i v
        // and the identity coordinate of M_i v is a_{i,j,id} v_j = |C_i| v_{i*}
        // ... recover omega directly by applying the matrices
        let mut omega = vec![0u64; k];
        for i in 0..k {
            let col: Vec<Vec<u64>> = v.iter().map(|&x| vec![x]).collect();
            let mv = mat_mul(&mats[i], &col, ell);
            // find a nonzero coordinate of v
            let j = v.iter().position(|&x| x != 0).unwrap();
            omega[i] = mmul(mv[j][0], minv(v[j], ell), ell);
        }
        // 1/chi(1)^2 = (1/|G|) sum_i omega_i omega_{i*} / |C_i|
        let mut acc = 0u64;
        for i in 0..k {
            let term = mmul(
                mmul(omega[i], omega[inv_class[i]], ell),
                minv(classes[i].members.len() as u64 % ell, ell),
                ell,
            );
            acc = madd(acc, term, ell);
        }
        acc = mmul(acc, minv(order % ell, ell), ell);
        let deg_sq = minv(acc, ell); // chi(1)^2 mod ell, but < ell and exact
        let degree = isqrt(deg_sq);
        if degree * degree != deg_sq || degree == 0 {
            return Err(Error::Internal(format!(
                "character degree recovery failed: {deg_sq} is not a small square"
            )));
        }
        // chi(C_i) mod ell
        let chi_mod: Vec<u64> = (0..k)
            .map(|i| {
                mmul(
                    mmul(omega[i], degree % ell, ell),
                    minv(classes[i].members.len() as u64 % ell, ell),
                    ell,
                )
            })
            .collect();
        // exact lift through the power map
        let n = exponent;
        let ninv = minv(n % ell, ell);
        let mut values = Vec::with_capacity(k);
        for i in 0..k {
            let mut val = Cyc::from_int(0);
            for mexp in 0..n {
                let mut a = 0u64;
                for t in 0..n {
                    let cls = power_class[i][t as usize];
                    let zexp = (n - (mexp * t) % n) % n;
                    a = madd(a, mmul(chi_mod[cls], mpow(z, zexp, ell), ell), ell);
                }
                a = mmul(a, ninv, ell);
                if a != 0 {
                    if a > order {
                        return Err(Error::Internal(
                            "eigenvalue multiplicity lift out of range".into(),
                        ));
                    }
                    val = val.add(&Cyc::root_of_unity(n as u32, mexp as i64).scale(a as i64));
                }
            }
            values.push(val);
        }
        if !values[id_class].eq(&Cyc::from_int(degree as i64)) {
            return Err(Error::Internal("lifted degree mismatch".into()));
        }
        irreducibles.push(values);
        degrees.push(degree as i64);
    }
    // deterministic order: by degree, then by serialized values
    let mut idx: Vec<usize> = (0..irreducibles.len()).collect();
    idx.sort_by_key(|&i| {
        (
            degrees[i],
            irreducibles[i]
                .iter()
                .map(|c| (c.n, c.coeffs.clone()))
                .collect::<Vec<_>>(),
        )
    });
    let irreducibles: Vec<Vec<Cyc>> = idx.iter().map(|&i| irreducibles[i].clone()).collect();
    let degrees: Vec<i64> = idx.iter().map(|&i| degrees[i]).collect();
    let table = CharacterTable {
        classes,
        class_of,
        irreducibles,
        degrees,
        exponent,
        order,
    };
    verify_table(&table)?;
    Ok(table)
}

/// Row orthogonality and the degree sum, in exact cyclotomic arithmetic.
fn verify_table(table: &CharacterTable) -> Result<()> {
    let k = table.classes.len();
    if table.irreducibles.len() != k {
        return Err(Error::Internal(format!(
            "expected {k} irreducibles, found {}",
            table.irreducibles.len()
        )));
    }
    let sum_sq: i64 = table.degrees.iter().map(|d| d * d).sum();
    if sum_sq != table.order as i64 {
        return Err(Error::Internal(format!(
            "degree squares sum to {sum_sq}, group order is {}",
            table.order
        )));
    }
    for (a, chi) in table.irreducibles.iter().enumerate() {
        for (b, psi) in table.irreducibles.iter().enumerate() {
            let mut acc = Cyc::from_int(0);
            for (j, cls) in table.classes.iter().enumerate() {
                let term = chi[j]
                    .mul(&psi[j].conj())
                    .scale(cls.members.len() as i64);
                acc = acc.add(&term);
            }
            let expect = if a == b {
                Cyc::from_int(table.order as i64)
            } else {
                Cyc::from_int(0)
            };
            if !acc.eq(&expect) {
                return Err(Error::Internal(format!(
                    "row orthogonality fails at ({a},{b})"
                )));
            }
        }
    }
    Ok(())
}

impl CharacterTable {
    pub fn summary(&self) -> TableSummary {
        TableSummary {
            order: self.order,
            classes: self.classes.len(),
            degrees: self.degrees.clone(),
            exponent: self.exponent,
        }
    }
}

/// Find all signed irreducibles agreeing with a prediction function on the
/// given classes: pairs `(index, sign)` with `sign * chi(C) = value(C)`.
pub fn match_irreducible(
    table: &CharacterTable,
    predictions: &[(usize, Cyc)],
) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for (i, chi) in table.irreducibles.iter().enumerate() {
        for sign in [1i64, -1] {
            let ok = predictions
                .iter()
                .all(|(cls, v)| chi[*cls].scale(sign).eq(v));
            if ok {
                out.push((i, sign));
            }
        }
    }
    out
}
