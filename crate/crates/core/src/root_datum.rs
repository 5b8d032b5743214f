//! Exact root-datum combinatorics: roots, coroots, heights, Weyl group,
//! root strings.

use crate::error::{Error, Result};
use num::rational::Ratio;
use num::Zero;
use serde::Serialize;

/// Exact rational scalar used throughout the combinatorial layer.
pub type Rat = Ratio<i64>;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, PartialOrd, Ord, Hash)]
pub enum Family {
    /// `GL_n` with the full rank-`n` character lattice.
    GL,
    /// `SL_n` with the rank `n-1` lattices.
    SL,
    /// `Sp_4` on its standard 4-dimensional representation.
    Sp,
    /// Abstract type `A_n` in the `e`-basis of rank `n+1`.
    A,
    /// Abstract type `C_2` in the `e`-basis.
    C,
    /// Abstract type `G_2` in the simple-root basis.
    G,
}

/// Root datum with exact integer lattices and pairing.
#[derive(Clone, Debug, Serialize)]
pub struct RootDatum {
    pub family: Family,
    pub rank_label: usize,
    /// Dimension of the coordinate lattices.
    pub dim: usize,
    /// Roots as vectors in the character lattice; lexicographic order.
    pub roots: Vec<Vec<i64>>,
    /// Coroots, aligned with `roots`.
    pub coroots: Vec<Vec<i64>>,
    /// Indices of the simple roots of the standard positive system.
    pub simple: Vec<usize>,
    /// Indices of the standard positive roots.
    pub positive: Vec<usize>,
    /// Gram matrix of the pairing on basis vectors: `<chi, lam> = chi^T P lam`.
    pub pairing_matrix: Vec<Vec<i64>>,
}

/// Element of the Weyl group, acting on both lattices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on the character lattice.
    pub mat_star: Vec<Vec<i64>>,
    /// Action on the cocharacter lattice.
    pub mat_costar: Vec<Vec<i64>>,
    /// Induced permutation of root indices.
    pub perm: Vec<usize>,
}

fn mat_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(&a, &b)| a * b).sum())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] != 0 {
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
    }
    out
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

impl RootDatum {
    /// `<chi, lam>` for integer vectors.
    pub fn pair(&self, chi: &[i64], lam: &[i64]) -> i64 {
        let mut acc = 0i64;
        for (i, &c) in chi.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &l) in lam.iter().enumerate() {
                acc += c * self.pairing_matrix[i][j] * l;
            }
        }
        acc
    }

    /// `<chi, v>` against a rational cocharacter vector.
    pub fn pair_rat(&self, chi: &[i64], v: &[Rat]) -> Rat {
        let mut acc = Rat::zero();
        for (i, &c) in chi.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                acc += Rat::from_integer(c * self.pairing_matrix[i][j]) * *vj;
            }
        }
        acc
    }

    pub fn root_index(&self, v: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == v)
    }

    pub fn negate_index(&self, idx: usize) -> usize {
        let neg: Vec<i64> = self.roots[idx].iter().map(|&c| -c).collect();
        self.root_index(&neg).expect("root system is symmetric")
    }

    pub fn is_positive(&self, idx: usize) -> bool {
        self.positive.contains(&idx)
    }

    /// Reflection in the root with index `idx`.
    pub fn reflection(&self, idx: usize) -> WeylElement {
        let alpha = &self.roots[idx];
        let coalpha = &self.coroots[idx];
        let n = self.dim;
        let mut mat_star = identity_matrix(n);
        let mut mat_costar = identity_matrix(n);
        // s(chi) = chi - <chi, alpha^vee> alpha ; columns are images of basis vectors
        for j in 0..n {
            let mut e = vec![0i64; n];
            e[j] = 1;
            let c = self.pair(&e, coalpha);
            for i in 0..n {
                mat_star[i][j] = i64::from(i == j) - c * alpha[i];
            }
            let c2 = self.pair(alpha, &e);
            for i in 0..n {
                mat_costar[i][j] = i64::from(i == j) - c2 * coalpha[i];
            }
        }
        let perm = self.permutation_of(&mat_star);
        WeylElement {
            mat_star,
            mat_costar,
            perm,
        }
    }

    fn permutation_of(&self, mat_star: &[Vec<i64>]) -> Vec<usize> {
        self.roots
            .iter()
            .map(|r| {
                let img = mat_vec(mat_star, r);
                self.root_index(&img).expect("Weyl element permutes roots")
            })
            .collect()
    }

    pub fn weyl_identity(&self) -> WeylElement {
        WeylElement {
            mat_star: identity_matrix(self.dim),
            mat_costar: identity_matrix(self.dim),
            perm: (0..self.roots.len()).collect(),
        }
    }

    pub fn weyl_compose(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        // (a b)(x) = a(b(x))
        let mat_star = mat_mul(&a.mat_star, &b.mat_star);
        let mat_costar = mat_mul(&a.mat_costar, &b.mat_costar);
        let perm = b.perm.iter().map(|&i| a.perm[i]).collect();
        WeylElement {
            mat_star,
            mat_costar,
            perm,
        }
    }

    /// Subgroup generated by the given reflections, deterministic order.
    pub fn weyl_generate(&self, generator_roots: &[usize]) -> Vec<WeylElement> {
        let gens: Vec<WeylElement> = generator_roots.iter().map(|&i| self.reflection(i)).collect();
        let mut seen: Vec<WeylElement> = vec![self.weyl_identity()];
        let mut frontier = vec![0usize];
        while let Some(idx) = frontier.pop() {
            let cur = seen[idx].clone();
            for g in &gens {
                let next = self.weyl_compose(&cur, g);
                if !seen.iter().any(|w| w.mat_costar == next.mat_costar) {
                    seen.push(next);
                    frontier.push(seen.len() - 1);
                }
            }
            frontier.sort_unstable();
            frontier.dedup();
        }
        // Deterministic final order: by root permutation.
        seen.sort_by(|a, b| a.perm.cmp(&b.perm));
        seen
    }

    pub fn n_roots(&self) -> usize {
        self.roots.len()
    }
}

/// Full Weyl group, generated from simple reflections.
pub fn weyl_elements(datum: &RootDatum) -> Vec<WeylElement> {
    datum.weyl_generate(&datum.simple.clone())
}

/// Largest `m` such that `alpha` is a sum of `m` positive roots of the given
/// system, i.e. the sum of its simple-root coefficients.
pub fn height(datum: &RootDatum, alpha: usize, positive_system: &[usize]) -> Result<i64> {
    if !positive_system.contains(&alpha) {
        return Err(Error::Domain("height requires a positive root".into()));
    }
    let simples = simples_of(datum, positive_system);
    let coeffs = express_in_simples(datum, alpha, &simples)?;
    Ok(coeffs.iter().sum())
}

/// Simple roots of a positive system: positives not a sum of two positives.
pub fn simples_of(datum: &RootDatum, positive_system: &[usize]) -> Vec<usize> {
    positive_system
        .iter()
        .copied()
        .filter(|&a| {
            !positive_system.iter().any(|&b| {
                positive_system.iter().any(|&c| {
                    let sum: Vec<i64> = datum.roots[b]
                        .iter()
                        .zip(&datum.roots[c])
                        .map(|(&x, &y)| x + y)
                        .collect();
                    sum == datum.roots[a]
                })
            })
        })
        .collect()
}

fn express_in_simples(datum: &RootDatum, alpha: usize, simples: &[usize]) -> Result<Vec<i64>> {
    // Solve sum_j c_j simple_j = alpha exactly by rational elimination.
    let rows = datum.dim;
    let cols = simples.len();
    let mut aug: Vec<Vec<Rat>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rat> = simples
                .iter()
                .map(|&s| Rat::from_integer(datum.roots[s][i]))
                .collect();
            row.push(Rat::from_integer(datum.roots[alpha][i]));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if let Some(pr) = (r..rows).find(|&i| !aug[i][c].is_zero()) {
            aug.swap(r, pr);
            let pv = aug[r][c];
            for entry in aug[r].iter_mut() {
                *entry /= pv;
            }
            for i in 0..rows {
                if i != r && !aug[i][c].is_zero() {
                    let factor = aug[i][c];
                    for j in 0..=cols {
                        let sub = factor * aug[r][j];
                        aug[i][j] -= sub;
                    }
                }
            }
            pivot_cols.push(c);
            r += 1;
        }
    }
    for row in aug.iter().skip(r) {
        if !row[cols].is_zero() {
            return Err(Error::Internal("root not in span of simples".into()));
        }
    }
    let mut coeffs = vec![0i64; cols];
    for (ri, &c) in pivot_cols.iter().enumerate() {
        let v = aug[ri][cols];
        if !v.is_integer() {
            return Err(Error::Internal("non-integral simple-root coefficient".into()));
        }
        coeffs[c] = v.to_integer();
    }
    Ok(coeffs)
}

/// All pairs `(p, q)` with `p, q >= 1` and `p alpha + q beta` a root,
/// together with the resulting root index.
pub fn root_string_pairs(
    datum: &RootDatum,
    alpha: usize,
    beta: usize,
) -> Result<Vec<(i64, i64, usize)>> {
    if datum.negate_index(alpha) == beta {
        return Err(Error::Domain(
            "root strings of opposite roots handled by the torus case".into(),
        ));
    }
    let mut out = Vec::new();
    for p in 1..=6i64 {
        for q in 1..=6i64 {
            let v: Vec<i64> = datum.roots[alpha]
                .iter()
                .zip(&datum.roots[beta])
                .map(|(&a, &b)| p * a + q * b)
                .collect();
            if let Some(idx) = datum.root_index(&v) {
                out.push((p, q, idx));
            }
        }
    }
    Ok(out)
}

/// Build a supported root datum. Roots are listed in a fixed lexicographic
/// order so every downstream enumeration is deterministic.
pub fn build_root_datum(family: Family, n: usize) -> Result<RootDatum> {
    let (dim, mut roots, mut coroots, label) = match (family, n) {
        (Family::GL, 2) | (Family::GL, 3) => gl_data(n),
        (Family::SL, 2) | (Family::SL, 3) => sl_data(n),
        (Family::Sp, 4) => c2_data(Family::Sp),
        (Family::A, 1) | (Family::A, 2) | (Family::A, 3) => a_data(n),
        (Family::C, 2) => c2_data(Family::C),
        (Family::G, 2) => g2_data(),
        _ => {
            return Err(Error::Config(format!(
                "unsupported family/rank combination {family:?}/{n}"
            )))
        }
    };
    let _ = label;
    // lexicographic order on root coordinates, coroots aligned
    let mut paired: Vec<(Vec<i64>, Vec<i64>)> = roots.drain(..).zip(coroots.drain(..)).collect();
    paired.sort();
    let roots: Vec<Vec<i64>> = paired.iter().map(|(r, _)| r.clone()).collect();
    let coroots: Vec<Vec<i64>> = paired.iter().map(|(_, c)| c.clone()).collect();
    let pairing_matrix = match family {
        Family::G => vec![vec![2, -1], vec![-3, 2]],
        _ => identity_matrix(dim),
    };
    let positive: Vec<usize> = (0..roots.len())
        .filter(|&i| {
            roots[i]
                .iter()
                .find(|&&c| c != 0)
                .map(|&c| c > 0)
                .unwrap_or(false)
        })
        .collect();
    let mut datum = RootDatum {
        family,
        rank_label: n,
        dim,
        roots,
        coroots,
        simple: Vec::new(),
        positive,
        pairing_matrix,
    };
    datum.simple = simples_of(&datum, &datum.positive.clone());
    validate(&datum)?;
    Ok(datum)
}

fn validate(datum: &RootDatum) -> Result<()> {
    for i in 0..datum.n_roots() {
        if datum.pair(&datum.roots[i], &datum.coroots[i]) != 2 {
            return Err(Error::Internal(format!(
                "<alpha, alpha^vee> != 2 at root {i}"
            )));
        }
        datum.negate_index(i);
    }
    for &s in &datum.simple {
        let w = datum.reflection(s);
        let _ = w; // construction already asserts the permutation exists
    }
    Ok(())
}

fn gl_data(n: usize) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>, &'static str) {
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let mut r = vec![0i64; n];
                r[i] = 1;
                r[j] = -1;
                roots.push(r.clone());
                coroots.push(r);
            }
        }
    }
    (n, roots, coroots, "GL")
}

fn a_data(n: usize) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>, &'static str) {
    let (d, r, c, _) = gl_data(n + 1);
    (d, r, c, "A")
}

fn sl_data(n: usize) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>, &'static str) {
    // X^* = Z^n / Z(1..1) with basis images of e_1..e_{n-1};
    // X_* = {sum zero} with basis u_i = f_i - f_n. The pairing is then standard.
    let d = n - 1;
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    let reduce_char = |i: usize, j: usize| -> Vec<i64> {
        // e_i - e_j in the quotient basis
        let mut v = vec![0i64; d];
        if i < d {
            v[i] += 1;
        } else {
            for x in v.iter_mut() {
                *x -= 1;
            }
        }
        if j < d {
            v[j] -= 1;
        } else {
            for x in v.iter_mut() {
                *x += 1;
            }
        }
        v
    };
    let reduce_cochar = |i: usize, j: usize| -> Vec<i64> {
        // f_i - f_j in the u-basis
        let mut v = vec![0i64; d];
        if i < d {
            v[i] += 1;
        }
        if j < d {
            v[j] -= 1;
        }
        v
    };
    for i in 0..n {
        for j in 0..n {
            if i != j {
                roots.push(reduce_char(i, j));
                coroots.push(reduce_cochar(i, j));
            }
        }
    }
    (d, roots, coroots, "SL")
}

fn c2_data(_family: Family) -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>, &'static str) {
    let roots = vec![
        vec![1, -1],
        vec![1, 1],
        vec![2, 0],
        vec![0, 2],
        vec![-1, 1],
        vec![-1, -1],
        vec![-2, 0],
        vec![0, -2],
    ];
    let coroots = vec![
        vec![1, -1],
        vec![1, 1],
        vec![1, 0],
        vec![0, 1],
        vec![-1, 1],
        vec![-1, -1],
        vec![-1, 0],
        vec![0, -1],
    ];
    (2, roots, coroots, "C")
}

fn g2_data() -> (usize, Vec<Vec<i64>>, Vec<Vec<i64>>, &'static str) {
    // simple-root basis (alpha_1 short, alpha_2 long)
    let pos = vec![
        (vec![1, 0], vec![1, 0]),
        (vec![0, 1], vec![0, 1]),
        (vec![1, 1], vec![1, 3]),
        (vec![2, 1], vec![2, 3]),
        (vec![3, 1], vec![1, 1]),
        (vec![3, 2], vec![1, 2]),
    ];
    let mut roots = Vec::new();
    let mut coroots = Vec::new();
    for (r, c) in pos {
        roots.push(r.clone());
        coroots.push(c.clone());
        roots.push(r.iter().map(|&x| -x).collect());
        coroots.push(c.iter().map(|&x| -x).collect());
    }
    (2, roots, coroots, "G")
}
