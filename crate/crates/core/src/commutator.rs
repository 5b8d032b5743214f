//! Symbolic certification of the floor inequalities behind the commutator
//! containments, independent of any group model.
//!
//! Every check reduces a commutator of affine root subgroups to its support
//! levels `p*idx_1 + q*idx_2` on the root string, then verifies the exact
//! integer inequality that makes the containment hold in the level-`r`
//! quotient. Reports carry instance counts and per-branch counters so
//! vacuous passes are detectable.

use crate::apartment::{affine_index, FiltrationProfile};
use crate::error::{Error, Result};
use crate::root_datum::{height, root_string_pairs, Rat, RootDatum};
use num::One;
use serde::Serialize;
use std::collections::BTreeMap;

/// Valuation level of an affine root subgroup image in `G_r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineLevel {
    pub root: usize,
    pub index: i64,
}

/// Witness of a failed inequality.
#[derive(Clone, Debug, Serialize)]
pub struct Violation {
    pub check: String,
    pub alpha: usize,
    pub beta: Option<usize>,
    pub gamma: Option<usize>,
    pub p: i64,
    pub q: i64,
    pub a: i64,
    pub jump: Option<usize>,
    pub r: i64,
    pub level: i64,
    pub required: i64,
}

/// Result of a certification sweep over a finite domain.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ContainmentReport {
    pub instances: u64,
    pub branches: BTreeMap<String, u64>,
    pub violations: Vec<Violation>,
    /// Set on sweeps of conjectural statements; their violations are
    /// reported, not treated as failures.
    pub experimental: bool,
}

impl ContainmentReport {
    pub fn certified(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn bump(&mut self, key: &str) {
        self.instances += 1;
        *self.branches.entry(key.to_string()).or_insert(0) += 1;
    }

    pub fn merge(&mut self, other: ContainmentReport) {
        self.instances += other.instances;
        for (k, v) in other.branches {
            *self.branches.entry(k).or_insert(0) += v;
        }
        self.violations.extend(other.violations);
        self.experimental |= other.experimental;
    }
}

/// Support of `[U_{alpha, i1}, U_{beta, i2}]` on the root string:
/// `{(p alpha + q beta, p i1 + q i2) : p alpha + q beta a root}`.
pub fn commutator_support(
    datum: &RootDatum,
    l1: AffineLevel,
    l2: AffineLevel,
) -> Result<Vec<AffineLevel>> {
    if datum.negate_index(l1.root) == l2.root {
        return Err(Error::Domain(
            "opposite roots commutate into the torus, not a root string".into(),
        ));
    }
    Ok(root_string_pairs(datum, l1.root, l2.root)?
        .into_iter()
        .map(|(p, q, gamma)| AffineLevel {
            root: gamma,
            index: p * l1.index + q * l2.index,
        })
        .collect())
}

/// Torus-against-root-group commutator level: `[T^r, U_{alpha,m}]` lands at
/// index `m + r`.
pub fn torus_commutator_level(m: i64, r: i64) -> i64 {
    m + r
}

struct Cert<'a> {
    profile: &'a FiltrationProfile,
    r: i64,
    report: ContainmentReport,
}

impl<'a> Cert<'a> {
    fn new(profile: &'a FiltrationProfile, r: i64) -> Self {
        Cert {
            profile,
            r,
            report: ContainmentReport::default(),
        }
    }

    /// Vanishing threshold of the root coordinate in `G_r`.
    fn vanish(&self, gamma: usize) -> i64 {
        affine_index(self.profile, gamma, self.r, self.r).expect("a = r is valid")
    }

    fn idx(&self, alpha: usize, a: i64) -> i64 {
        affine_index(self.profile, alpha, a, self.r).expect("index in range")
    }

    #[allow(clippy::too_many_arguments)]
    fn require(
        &mut self,
        key: &str,
        level: i64,
        required: i64,
        alpha: usize,
        beta: Option<usize>,
        gamma: Option<usize>,
        p: i64,
        q: i64,
        a: i64,
        jump: Option<usize>,
    ) {
        self.report.bump(key);
        if level < required {
            self.report.violations.push(Violation {
                check: key.to_string(),
                alpha,
                beta,
                gamma,
                p,
                q,
                a,
                jump,
                r: self.r,
                level,
                required,
            });
        }
    }
}

/// Certify vanishing of commutators between complementary-depth subgroups
/// in `G_r`: for non-reductive `alpha`, `[G_r^{a+1}, U_{alpha,r}^{r-a}] = 1`;
/// for reductive `alpha`, `[G_r^a, U_{alpha,r}^{r-a}] = 1`. Follows the
/// generator-level case split (torus, opposite root, root strings).
pub fn certify_lemma_comm(
    datum: &RootDatum,
    profile: &FiltrationProfile,
    r: i64,
) -> ContainmentReport {
    assert!(r >= 2);
    let mut c = Cert::new(profile, r);
    for alpha in 0..datum.n_roots() {
        let red = profile.reductive(alpha);
        let neg_alpha = datum.negate_index(alpha);
        for a in 1..=(r - 1) {
            let idx_xi = c.idx(alpha, r - a);
            let part = if red { "b" } else { "a" };
            // depth of the group side: a+1 non-reductive, a reductive
            let group_depth = if red { a } else { a + 1 };
            let t_level = torus_commutator_level(idx_xi, group_depth);
            let v = c.vanish(alpha);
            c.require(
                &format!("comm_{part}_torus"),
                t_level,
                v,
                alpha,
                None,
                None,
                1,
                1,
                a,
                None,
            );
            // opposite root: torus-valued commutator, vanishes at T^r
            let idx_opp = c.idx(neg_alpha, group_depth);
            c.require(
                &format!("comm_{part}_opposite"),
                idx_xi + idx_opp,
                r,
                alpha,
                Some(neg_alpha),
                None,
                1,
                1,
                a,
                None,
            );
            for beta in 0..datum.n_roots() {
                if beta == neg_alpha || beta == alpha {
                    continue;
                }
                let idx_x = c.idx(beta, group_depth);
                for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                    let level = p * idx_xi + q * idx_x;
                    let key = match (profile.reductive(beta), profile.reductive(gamma)) {
                        (true, _) => format!("comm_{part}_beta_red"),
                        (false, true) => format!("comm_{part}_beta_nonred_gamma_red"),
                        (false, false) => format!("comm_{part}_beta_nonred_gamma_nonred"),
                    };
                    let req = c.vanish(gamma);
                    c.require(&key, level, req, alpha, Some(beta), Some(gamma), p, q, a, None);
                }
            }
        }
    }
    c.report
}

/// Certify the jump refinement: depth quotients `G^a/G^{a+1}` are abelian
/// for `a >= 2`, and at depth one each graded piece `H(eps_i)` is normal in
/// the depth-one subgroup with abelian successive quotients.
pub fn certify_jump_filtration(
    datum: &RootDatum,
    profile: &FiltrationProfile,
    r: i64,
) -> ContainmentReport {
    assert!(r >= 2);
    let mut report = ContainmentReport::default();
    let s = profile.s();

    // Depth a >= 2: abelian quotient, certified inside the level-(a+1) model.
    for a in 2..=(r - 1) {
        let mut inner = Cert::new(profile, a + 1);
        for alpha in 0..datum.n_roots() {
            let idx_a = inner.idx(alpha, a);
            let v = inner.vanish(alpha);
            inner.require(
                "jump_i_torus_root",
                torus_commutator_level(idx_a, a),
                v,
                alpha,
                None,
                None,
                1,
                1,
                a,
                None,
            );
            let neg = datum.negate_index(alpha);
            let idx_neg = inner.idx(neg, a);
            inner.require(
                "jump_i_opposite",
                idx_a + idx_neg,
                a + 1,
                alpha,
                Some(neg),
                None,
                1,
                1,
                a,
                None,
            );
            for beta in 0..datum.n_roots() {
                if beta == alpha || beta == neg {
                    continue;
                }
                let idx_b = inner.idx(beta, a);
                for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                    let req = inner.vanish(gamma);
                    inner.require(
                        "jump_i_root_root",
                        p * idx_a + q * idx_b,
                        req,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        a,
                        None,
                    );
                }
            }
        }
        report.merge(inner.report);
    }

    // Depth one, inside the level-2 model.
    let mut g2 = Cert::new(profile, 2);
    for alpha in 0..datum.n_roots() {
        if !profile.reductive(alpha) {
            continue;
        }
        let v = g2.vanish(alpha);
        g2.require(
            "jump_h1_torus",
            torus_commutator_level(profile.m(alpha) + 1, 1),
            v,
            alpha,
            None,
            None,
            1,
            1,
            1,
            None,
        );
        let neg = datum.negate_index(alpha);
        g2.require(
            "jump_h1_opposite",
            (profile.m(alpha) + 1) + (profile.m(neg) + 1),
            2,
            alpha,
            Some(neg),
            None,
            1,
            1,
            1,
            None,
        );
        for beta in 0..datum.n_roots() {
            if beta == alpha || beta == neg {
                continue;
            }
            for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                if profile.reductive(beta) {
                    // abelianness of the reductive layer
                    let level = p * (profile.m(alpha) + 1) + q * (profile.m(beta) + 1);
                    let req = g2.vanish(gamma);
                    g2.require(
                        "jump_h1_abelian",
                        level,
                        req,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        1,
                        None,
                    );
                } else {
                    // containment of [reductive layer, depth-one coord] in the
                    // reductive layer
                    let level = p * (profile.m(alpha) + 1) + q * profile.m(beta);
                    g2.require(
                        "jump_h1_contain",
                        level,
                        profile.m(gamma) + 1,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        1,
                        None,
                    );
                }
            }
        }
    }
    // Normality of each graded piece and abelianness of successive quotients.
    for i in 1..=s {
        let eps_i = profile.jumps[i - 1];
        for alpha in 0..datum.n_roots() {
            if profile.reductive(alpha) || profile.eps(alpha) < eps_i {
                continue;
            }
            let neg = datum.negate_index(alpha);
            for beta in 0..datum.n_roots() {
                if profile.reductive(beta) || beta == alpha {
                    continue;
                }
                if beta == neg {
                    g2.require(
                        "jump_norm_opposite",
                        profile.m(alpha) + profile.m(beta),
                        1,
                        alpha,
                        Some(beta),
                        None,
                        1,
                        1,
                        1,
                        Some(i),
                    );
                    continue;
                }
                for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                    let level = p * profile.m(alpha) + q * profile.m(beta);
                    let (key, req) = if profile.reductive(gamma) {
                        // p eps_alpha + q eps_beta is forced to be >= 1
                        ("jump_norm_gamma_red", profile.m(gamma) + 1)
                    } else if profile.eps(gamma) >= eps_i {
                        ("jump_norm_in_h", profile.m(gamma))
                    } else {
                        // contradiction branch: the floor must be >= 1
                        ("jump_norm_contradiction", profile.m(gamma) + 1)
                    };
                    g2.require(key, level, req, alpha, Some(beta), Some(gamma), p, q, 1, Some(i));
                }
                if profile.eps(alpha) == eps_i && profile.eps(beta) == eps_i {
                    let eps_next = profile.jumps[i];
                    for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                        let level = p * profile.m(alpha) + q * profile.m(beta);
                        let (key, req) = if profile.reductive(gamma) {
                            ("jump_quot_gamma_red", profile.m(gamma) + 1)
                        } else if profile.eps(gamma) >= eps_next {
                            ("jump_quot_in_next", profile.m(gamma))
                        } else {
                            ("jump_quot_contradiction", profile.m(gamma) + 1)
                        };
                        g2.require(key, level, req, alpha, Some(beta), Some(gamma), p, q, 1, Some(i));
                    }
                }
            }
        }
    }
    report.merge(g2.report);
    report
}

/// Certify the commutator pairings between complementary filtration blocks
/// and the torus-element-producing estimates that use the height hypothesis
/// `ht(beta) <= ht(-alpha)`.
pub fn certify_pairings(
    datum: &RootDatum,
    profile: &FiltrationProfile,
    r: i64,
) -> ContainmentReport {
    assert!(r >= 2);
    let mut c = Cert::new(profile, r);
    let pos = datum.positive.clone();
    let s = profile.s();

    for alpha in 0..datum.n_roots() {
        if profile.reductive(alpha) {
            continue;
        }
        let neg_alpha = datum.negate_index(alpha);

        // Pairing U^{r-a}/U^{r-a+1} x N^a/N^{a+1} -> G^{r-1} for a >= 2.
        for a in 2..=(r - 1) {
            let idx_xi = c.idx(alpha, r - a);
            let idx_xi_next = c.idx(alpha, r - a + 1);
            let tgt_alpha = c.idx(alpha, r - 1);
            c.require(
                "pair_i_torus",
                torus_commutator_level(idx_xi, a),
                tgt_alpha,
                alpha,
                None,
                None,
                1,
                1,
                a,
                None,
            );
            for &beta in &pos {
                if beta == alpha {
                    continue;
                }
                if beta == neg_alpha {
                    let idx_b = c.idx(beta, a);
                    c.require(
                        "pair_i_opposite",
                        idx_xi + idx_b,
                        r - 1,
                        alpha,
                        Some(beta),
                        None,
                        1,
                        1,
                        a,
                        None,
                    );
                    continue;
                }
                for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                    let kill_right = p * idx_xi + q * c.idx(beta, a + 1);
                    let v = c.vanish(gamma);
                    c.require(
                        "pair_i_kill_right",
                        kill_right,
                        v,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        a,
                        None,
                    );
                    let kill_left = p * idx_xi_next + q * c.idx(beta, a);
                    c.require(
                        "pair_i_kill_left",
                        kill_left,
                        v,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        a,
                        None,
                    );
                    let target = p * idx_xi + q * c.idx(beta, a);
                    let req = c.idx(gamma, r - 1);
                    c.require(
                        "pair_i_target",
                        target,
                        req,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        a,
                        None,
                    );
                }
            }
        }

        // Depth-one block: alpha with eps_{-alpha} = eps_i against N^{1,i}
        // and N^{1,i+1}.
        let i = profile.jump_index(neg_alpha);
        let idx_xi = c.idx(alpha, r - 1);
        for &beta in &pos {
            if beta == alpha {
                continue;
            }
            if beta == neg_alpha {
                c.require(
                    "pair_ii_opposite",
                    idx_xi + profile.m(beta),
                    r - 1,
                    alpha,
                    Some(beta),
                    None,
                    1,
                    1,
                    1,
                    Some(i),
                );
                continue;
            }
            let in_ni = profile.reductive(beta) || profile.eps(beta) >= profile.jumps[i - 1];
            let in_ni1 =
                profile.reductive(beta) || (i < s + 1 && profile.eps(beta) >= profile.jumps[i]);
            let idx_b1 = if profile.reductive(beta) {
                profile.m(beta) + 1
            } else {
                profile.m(beta)
            };
            for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                if in_ni {
                    let key = if profile.reductive(beta) {
                        "pair_ii_claim1_beta_red"
                    } else {
                        "pair_ii_claim1_beta_nonred"
                    };
                    c.require(
                        key,
                        p * idx_xi + q * idx_b1,
                        profile.m(gamma) + r - 1,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        1,
                        Some(i),
                    );
                }
                if in_ni1 {
                    let key = if profile.reductive(gamma) {
                        "pair_ii_claim2_gamma_red"
                    } else {
                        "pair_ii_claim2_gamma_nonred"
                    };
                    let v = c.vanish(gamma);
                    c.require(
                        key,
                        p * idx_xi + q * idx_b1,
                        v,
                        alpha,
                        Some(beta),
                        Some(gamma),
                        p,
                        q,
                        1,
                        Some(i),
                    );
                }
            }
        }
    }

    // Torus-element-producing estimates for pairs (-alpha, beta) of positive
    // roots with ht(beta) <= ht(-alpha), both non-reductive or both reductive.
    for &neg_alpha in &pos {
        let alpha = datum.negate_index(neg_alpha);
        let ht_na = height(datum, neg_alpha, &pos).unwrap();
        for &beta in &pos {
            if beta == neg_alpha {
                continue;
            }
            let ht_b = height(datum, beta, &pos).unwrap();
            if ht_b > ht_na {
                continue;
            }
            let both_nonred = !profile.reductive(alpha) && !profile.reductive(beta);
            let both_red = profile.reductive(alpha) && profile.reductive(beta);
            if !(both_nonred || both_red) {
                continue;
            }
            for a in 1..=(r - 1) {
                if both_nonred && a == 1 && profile.eps(beta) != profile.eps(neg_alpha) {
                    // depth-one strata only pair roots in the same jump block
                    continue;
                }
                let idx_xi = if both_nonred {
                    c.idx(alpha, r - a)
                } else {
                    if r - a - 1 < 0 {
                        continue;
                    }
                    c.idx(alpha, r - a - 1)
                };
                // base case against the opposite coordinate: exact torus level r-1
                let idx_x_na = c.idx(neg_alpha, a);
                c.report.bump("pair39_base_level");
                if idx_xi + idx_x_na != r - 1 {
                    c.report.violations.push(Violation {
                        check: "pair39_base_level".into(),
                        alpha,
                        beta: Some(neg_alpha),
                        gamma: None,
                        p: 1,
                        q: 1,
                        a,
                        jump: None,
                        r,
                        level: idx_xi + idx_x_na,
                        required: r - 1,
                    });
                }
                let idx_xb = c.idx(beta, a);
                for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                    let level = p * idx_xi + q * idx_xb;
                    if p >= q {
                        // height discard: p alpha + q beta cannot be positive
                        c.report.bump("pair39_ht_discard");
                        if datum.is_positive(gamma) {
                            c.report.violations.push(Violation {
                                check: "pair39_ht_discard".into(),
                                alpha,
                                beta: Some(beta),
                                gamma: Some(gamma),
                                p,
                                q,
                                a,
                                jump: None,
                                r,
                                level,
                                required: -1,
                            });
                        }
                        // the negative-side factor still sits at depth r-1
                        let req = c.idx(gamma, r - 1);
                        c.require(
                            "pair39_pgeq_depth",
                            level,
                            req,
                            alpha,
                            Some(beta),
                            Some(gamma),
                            p,
                            q,
                            a,
                            None,
                        );
                    } else {
                        let key = if (p, q) == (1, 2) && datum.is_positive(gamma) {
                            "pair39_qgtp_remark_pq12"
                        } else if profile.reductive(gamma) {
                            "pair39_qgtp_gamma_red"
                        } else {
                            "pair39_qgtp_gamma_nonred"
                        };
                        let v = c.vanish(gamma);
                        c.require(
                            key,
                            level,
                            v,
                            alpha,
                            Some(beta),
                            Some(gamma),
                            p,
                            q,
                            a,
                            None,
                        );
                    }
                }
            }
        }
    }
    c.report
}

/// Experimental sweep of the conjectural generalized duality pairing
/// between blocks `(r-a, s+1-i)` and `(a, i)`; violations are reported,
/// never fatal.
pub fn certify_duality_remark(
    datum: &RootDatum,
    profile: &FiltrationProfile,
    r: i64,
) -> ContainmentReport {
    assert!(r >= 2);
    let mut c = Cert::new(profile, r);
    c.report.experimental = true;
    let s = profile.s();
    for a in 1..=(r - 1) {
        for i in 1..=s {
            let (a2, i2) = (r - a, s + 1 - i);
            for alpha in 0..datum.n_roots() {
                let idx1 = block_index(profile, alpha, a2, i2, r);
                let neg = datum.negate_index(alpha);
                let idx_neg = block_index(profile, neg, a, i, r);
                c.require(
                    "duality_opposite",
                    idx1 + idx_neg,
                    r - 1,
                    alpha,
                    Some(neg),
                    None,
                    1,
                    1,
                    a,
                    Some(i),
                );
                for beta in 0..datum.n_roots() {
                    if beta == alpha || beta == neg {
                        continue;
                    }
                    let idx2 = block_index(profile, beta, a, i, r);
                    for (p, q, gamma) in root_string_pairs(datum, alpha, beta).unwrap() {
                        c.require(
                            "duality_root_root",
                            p * idx1 + q * idx2,
                            profile.m(gamma) + r - 1,
                            alpha,
                            Some(beta),
                            Some(gamma),
                            p,
                            q,
                            a,
                            Some(i),
                        );
                    }
                }
            }
        }
    }
    c.report
}

/// Lowest level of the root coordinate inside the graded block `(a, i)`.
fn block_index(profile: &FiltrationProfile, root: usize, a: i64, i: usize, r: i64) -> i64 {
    if profile.reductive(root) {
        profile.m(root) + a
    } else if profile.jump_index(root) >= i {
        affine_index(profile, root, a, r).expect("in range")
    } else {
        affine_index(profile, root, a + 1, r.max(a + 1)).expect("in range")
    }
}

/// Enumerate all rational points with denominator at most `max_denom` inside
/// the closed fundamental alcove (non-negative on the simple roots, at most
/// one on every root). Deterministic order.
pub fn alcove_points(datum: &RootDatum, max_denom: i64) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let dim = datum.dim;
    for denom in 1..=max_denom {
        let mut stack: Vec<Vec<i64>> = vec![Vec::new()];
        while let Some(partial) = stack.pop() {
            if partial.len() == dim {
                let v: Vec<Rat> = partial.iter().map(|&n| Rat::new(n, denom)).collect();
                let ok = datum.roots.iter().all(|root| {
                    let val = datum.pair_rat(root, &v);
                    val <= Rat::one() && val >= -Rat::one()
                }) && datum
                    .simple
                    .iter()
                    .all(|&sidx| datum.pair_rat(&datum.roots[sidx], &v) >= Rat::new(0, 1));
                if ok && !out.contains(&v) {
                    out.push(v);
                }
                continue;
            }
            for n in -denom..=denom {
                let mut next = partial.clone();
                next.push(n);
                stack.push(next);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apartment::{profile, ApartmentPoint};
    use crate::root_datum::{build_root_datum, Family};

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn support_examples() {
        let d = build_root_datum(Family::A, 2).unwrap();
        let a = d.root_index(&[1, -1, 0]).unwrap();
        let b = d.root_index(&[0, 1, -1]).unwrap();
        let sup = commutator_support(
            &d,
            AffineLevel { root: a, index: 0 },
            AffineLevel { root: b, index: 0 },
        )
        .unwrap();
        let ab = d.root_index(&[1, 0, -1]).unwrap();
        assert_eq!(sup, vec![AffineLevel { root: ab, index: 0 }]);

        let d = build_root_datum(Family::C, 2).unwrap();
        let a = d.root_index(&[1, -1]).unwrap();
        let b = d.root_index(&[0, 2]).unwrap();
        let sup = commutator_support(
            &d,
            AffineLevel { root: a, index: 1 },
            AffineLevel { root: b, index: 2 },
        )
        .unwrap();
        let apb = d.root_index(&[1, 1]).unwrap();
        let a2pb = d.root_index(&[2, 0]).unwrap();
        assert!(sup.contains(&AffineLevel { root: apb, index: 3 }));
        assert!(sup.contains(&AffineLevel { root: a2pb, index: 4 }));
        assert_eq!(sup.len(), 2);

        assert!(commutator_support(
            &d,
            AffineLevel { root: a, index: 0 },
            AffineLevel {
                root: d.negate_index(a),
                index: 0
            },
        )
        .is_err());
        assert_eq!(torus_commutator_level(1, 2), 3);
    }

    #[test]
    fn hyperspecial_certifications() {
        let d = build_root_datum(Family::C, 2).unwrap();
        let p = profile(&d, &ApartmentPoint::origin(2));
        for r in 2..=5 {
            let rep = certify_lemma_comm(&d, &p, r);
            assert!(rep.certified(), "r={r}: {:?}", rep.violations);
            assert!(rep.branches.contains_key("comm_b_beta_red"));
            assert!(!rep.branches.contains_key("comm_a_torus"));
            assert!(certify_jump_filtration(&d, &p, r).certified());
            let rep = certify_pairings(&d, &p, r);
            assert!(rep.certified(), "r={r}: {:?}", rep.violations);
        }
    }

    #[test]
    fn a1_iwahori_certifications() {
        let d = build_root_datum(Family::A, 1).unwrap();
        let a = d.positive[0];
        let v: Vec<Rat> = d.coroots[a].iter().map(|&c| rat(c, 4)).collect();
        let p = profile(&d, &ApartmentPoint::new(v));
        for r in 2..=3 {
            assert!(certify_lemma_comm(&d, &p, r).certified());
            assert!(certify_jump_filtration(&d, &p, r).certified());
            let rep = certify_pairings(&d, &p, r);
            assert!(rep.certified(), "r={r}: {:?}", rep.violations);
        }
    }

    #[test]
    fn gl3_iwahori_exercises_contradiction_branch() {
        let d = build_root_datum(Family::GL, 3).unwrap();
        let v = vec![rat(2, 3), rat(1, 3), rat(0, 1)];
        let p = profile(&d, &ApartmentPoint::new(v));
        let rep = certify_jump_filtration(&d, &p, 2);
        assert!(rep.certified(), "{:?}", rep.violations);
        assert!(
            rep.branches.get("jump_norm_contradiction").copied().unwrap_or(0) > 0,
            "branches: {:?}",
            rep.branches
        );
    }

    #[test]
    fn c2_remark_branch_fires() {
        // eps(2e1) = eps(e1+e2) = 1/2: the (p,q) = (1,2) string with a
        // positive result root must fire and succeed.
        let d = build_root_datum(Family::C, 2).unwrap();
        let v = vec![rat(1, 4), rat(1, 4)];
        let p = profile(&d, &ApartmentPoint::new(v));
        for r in 2..=4 {
            let rep = certify_pairings(&d, &p, r);
            assert!(rep.certified(), "r={r}: {:?}", rep.violations);
            assert!(
                rep.branches.get("pair39_qgtp_remark_pq12").copied().unwrap_or(0) > 0,
                "r={r} branches: {:?}",
                rep.branches
            );
        }
    }

    #[test]
    fn c2_sweep_small_denominators() {
        let d = build_root_datum(Family::C, 2).unwrap();
        for pt in alcove_points(&d, 4) {
            let p = profile(&d, &ApartmentPoint::new(pt.clone()));
            for r in 2..=4 {
                let rep = certify_lemma_comm(&d, &p, r);
                assert!(rep.certified(), "comm at {pt:?} r={r}: {:?}", rep.violations);
                let rep = certify_jump_filtration(&d, &p, r);
                assert!(rep.certified(), "jump at {pt:?} r={r}: {:?}", rep.violations);
                let rep = certify_pairings(&d, &p, r);
                assert!(rep.certified(), "pair at {pt:?} r={r}: {:?}", rep.violations);
            }
        }
    }

    #[test]
    fn alcove_points_respect_bounds() {
        let d = build_root_datum(Family::A, 1).unwrap();
        let pts = alcove_points(&d, 2);
        assert!(!pts.is_empty());
        for v in &pts {
            let val = d.pair_rat(&d.roots[d.positive[0]], v);
            assert!(val >= rat(0, 1) && val <= rat(1, 1));
        }
    }
}
