//! Shared report structures and serde helpers. All reports are deterministic
//! byte-for-byte for a fixed configuration: ordered containers only, and
//! rationals rendered as exact `a/b` strings.

use crate::apartment::FiltrationProfile;
use crate::root_datum::{Rat, RootDatum};
use serde::Serialize;

/// Serialize a rational as `"a/b"` (or `"a"` when integral).
pub mod rat_string {
    use super::Rat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&render(v))
    }

    pub fn render(v: &Rat) -> String {
        if v.is_integer() {
            format!("{}", v.numer())
        } else {
            format!("{}/{}", v.numer(), v.denom())
        }
    }
}

/// Parse `"a/b"` or `"a"` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        if d == 0 {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        s.parse::<i64>().ok().map(Rat::from_integer)
    }
}

/// One row of the profile table emitted by the CLI.
#[derive(Clone, Debug, Serialize)]
pub struct ProfileRow {
    pub root: Vec<i64>,
    pub m: i64,
    pub eps: String,
    pub reductive: bool,
    pub jump_index: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProfileReport {
    pub family: String,
    pub rank: usize,
    pub point: Vec<String>,
    pub rows: Vec<ProfileRow>,
    pub jumps: Vec<String>,
}

pub fn profile_report(
    datum: &RootDatum,
    point: &[Rat],
    profile: &FiltrationProfile,
) -> ProfileReport {
    ProfileReport {
        family: format!("{:?}", datum.family),
        rank: datum.rank_label,
        point: point.iter().map(|r| rat_string::render(r)).collect(),
        rows: profile
            .records
            .iter()
            .map(|r| ProfileRow {
                root: datum.roots[r.root].clone(),
                m: r.m,
                eps: rat_string::render(&r.eps),
                reductive: r.reductive,
                jump_index: profile.jump_index(r.root),
            })
            .collect(),
        jumps: profile.jumps.iter().map(|j| rat_string::render(j)).collect(),
    }
}
