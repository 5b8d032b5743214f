//! Finite field towers `F_{p^d}` for `p^d <= 4096`, with exact table-driven
//! arithmetic.
//!
//! Elements are packed base-`p` digit vectors (an integer in `[0, p^d)`),
//! which is also the canonical textual encoding used in reports. Each field
//! carries exp/log tables over a fixed primitive element, so multiplication,
//! inversion and Frobenius are O(1). The defining polynomials are shipped as
//! constants so element encodings are reproducible across runs.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Smallest-packed-value monic irreducible polynomial of degree `d` over
/// `F_p`, encoded as `sum c_i p^i` over the non-leading coefficients of
/// `x^d + c_{d-1} x^{d-1} + ... + c_0`. Degree-1 entries are placeholders
/// (prime fields need no modulus).
const MODULI: &[(u32, u32, u32)] = &[
    (2, 1, 0),
    (2, 2, 3),
    (2, 3, 3),
    (2, 4, 3),
    (2, 5, 5),
    (2, 6, 3),
    (2, 7, 3),
    (2, 8, 27),
    (2, 9, 3),
    (2, 10, 9),
    (2, 11, 5),
    (2, 12, 9),
    (3, 1, 0),
    (3, 2, 1),
    (3, 3, 7),
    (3, 4, 5),
    (3, 5, 7),
    (3, 6, 5),
    (3, 7, 11),
    (5, 1, 0),
    (5, 2, 2),
    (5, 3, 6),
    (5, 4, 2),
    (5, 5, 21),
    (7, 1, 0),
    (7, 2, 1),
    (7, 3, 2),
    (7, 4, 8),
    (11, 1, 0),
    (11, 2, 1),
    (11, 3, 15),
    (13, 1, 0),
    (13, 2, 2),
    (13, 3, 2),
    (17, 1, 0),
    (17, 2, 3),
    (19, 1, 0),
    (19, 2, 1),
    (23, 1, 0),
    (23, 2, 1),
    (29, 1, 0),
    (29, 2, 2),
    (31, 1, 0),
    (31, 2, 1),
    (37, 1, 0),
    (37, 2, 2),
    (41, 1, 0),
    (41, 2, 3),
    (43, 1, 0),
    (43, 2, 1),
    (47, 1, 0),
    (47, 2, 1),
    (53, 1, 0),
    (53, 2, 2),
    (59, 1, 0),
    (59, 2, 1),
    (61, 1, 0),
    (61, 2, 2),
];

/// A finite field `F_{p^deg}` with table-driven arithmetic.
pub struct Fq {
    pub p: u32,
    pub deg: u32,
    /// Number of elements, `p^deg`.
    pub size: u32,
    /// Non-leading coefficients of the defining polynomial, packed base `p`.
    pub modulus: u32,
    /// Fixed primitive element (smallest packed value of maximal order).
    pub generator: u16,
    exp: Vec<u16>,
    log: Vec<u32>,
    frob: Vec<u16>,
    add_tbl: Option<Vec<u16>>,
}

impl std::fmt::Debug for Fq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{{{}^{}}}", self.p, self.deg)
    }
}


fn digits(mut v: u32, p: u32, d: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(d as usize);
    for _ in 0..d {
        out.push(v % p);
        v /= p;
    }
    out
}

fn pack(ds: &[u32], p: u32) -> u32 {
    let mut v = 0u32;
    for &c in ds.iter().rev() {
        v = v * p + c;
    }
    v
}

/// Digit-wise addition of packed values.
fn add_packed(a: u32, b: u32, p: u32, d: u32) -> u32 {
    let da = digits(a, p, d);
    let db = digits(b, p, d);
    let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
    pack(&sum, p)
}

/// Schoolbook multiply of packed digit polynomials modulo the defining poly.
fn mul_packed(a: u32, b: u32, p: u32, d: u32, modulus: u32) -> u32 {
    let da = digits(a, p, d);
    let db = digits(b, p, d);
    let mut prod = vec![0u64; 2 * d as usize];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + (x as u64) * (y as u64)) % p as u64;
        }
    }
    let f = digits(modulus, p, d);
    for k in (d as usize..2 * d as usize).rev() {
        let c = prod[k];
        if c != 0 {
            prod[k] = 0;
            for (i, &fi) in f.iter().enumerate() {
                let idx = k - d as usize + i;
                prod[idx] = (prod[idx] + (p as u64 - fi as u64) * c) % p as u64;
            }
        }
    }
    let low: Vec<u32> = prod[..d as usize].iter().map(|&x| x as u32).collect();
    pack(&low, p)
}

fn pow_packed(mut base: u32, mut e: u64, p: u32, d: u32, modulus: u32) -> u32 {
    let mut acc = 1u32;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_packed(acc, base, p, d, modulus);
        }
        base = mul_packed(base, base, p, d, modulus);
        e >>= 1;
    }
    acc
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut fs = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n % q == 0 {
            fs.push(q);
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        fs.push(n);
    }
    fs
}

impl Fq {
    fn build(p: u32, deg: u32) -> Result<Fq> {
        let modulus = MODULI
            .iter()
            .find(|&&(mp, md, _)| mp == p && md == deg)
            .map(|&(_, _, m)| m)
            .ok_or_else(|| Error::Config(format!("no shipped modulus for F_{{{p}^{deg}}}")))?;
        let size = p.checked_pow(deg).filter(|&s| s <= 4096).ok_or_else(|| {
            Error::Config(format!("field F_{{{p}^{deg}}} exceeds supported size"))
        })?;
        // Irreducibility check: x^{p^deg} = x and x^{p^{deg/l}} != x for prime l | deg.
        if deg > 1 {
            let x = p; // packed value of the class of x
            let target = pow_packed(x, (size as u64).pow(1), p, deg, modulus);
            // x^{p^deg} computed as iterated p-powers to keep exponents in u64
            let mut cur = x;
            for _ in 0..deg {
                cur = pow_packed(cur, p as u64, p, deg, modulus);
            }
            let _ = target;
            if cur != x {
                return Err(Error::Internal(format!(
                    "shipped modulus for F_{{{p}^{deg}}} is not irreducible"
                )));
            }
            for l in prime_factors(deg as u64) {
                let mut cur = x;
                for _ in 0..(deg as u64 / l) {
                    cur = pow_packed(cur, p as u64, p, deg, modulus);
                }
                if cur == x {
                    return Err(Error::Internal(format!(
                        "shipped modulus for F_{{{p}^{deg}}} has a proper subfield factor"
                    )));
                }
            }
        }
        // Find the smallest primitive element.
        let order = (size - 1) as u64;
        let crit = prime_factors(order);
        let mut generator = 0u32;
        'outer: for cand in 1..size {
            for &l in &crit {
                if pow_packed(cand, order / l, p, deg, modulus) == 1 {
                    continue 'outer;
                }
            }
            generator = cand;
            break;
        }
        if generator == 0 && size > 2 {
            return Err(Error::Internal("no primitive element found".into()));
        }
        if size == 2 {
            generator = 1;
        }
        let mut exp = vec![0u16; (size - 1) as usize];
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = 1u32;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = cur as u16;
            log[cur as usize] = k as u32;
            cur = mul_packed(cur, generator, p, deg, modulus);
        }
        if cur != 1 {
            return Err(Error::Internal("generator order mismatch".into()));
        }
        let mut frob = vec![0u16; size as usize];
        for a in 0..size {
            frob[a as usize] = pow_packed(a, p as u64, p, deg, modulus) as u16;
        }
        let add_tbl = if size <= 256 {
            let mut t = vec![0u16; (size * size) as usize];
            for a in 0..size {
                for b in 0..size {
                    t[(a * size + b) as usize] = add_packed(a, b, p, deg) as u16;
                }
            }
            Some(t)
        } else {
            None
        };
        Ok(Fq {
            p,
            deg,
            size,
            modulus,
            generator: generator as u16,
            exp,
            log,
            frob,
            add_tbl,
        })
    }

    #[inline]
    pub fn zero(&self) -> u16 {
        0
    }

    #[inline]
    pub fn one(&self) -> u16 {
        1
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        match &self.add_tbl {
            Some(t) => t[a as usize * self.size as usize + b as usize],
            None => add_packed(a as u32, b as u32, self.p, self.deg) as u16,
        }
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if a == 0 {
            return 0;
        }
        let ds = digits(a as u32, self.p, self.deg);
        let nd: Vec<u32> = ds.iter().map(|&c| (self.p - c) % self.p).collect();
        pack(&nd, self.p) as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(k % (self.size as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::Arithmetic("inverse of zero".into()));
        }
        let k = self.log[a as usize] as u64;
        let n = self.size as u64 - 1;
        Ok(self.exp[((n - k % n) % n) as usize])
    }

    pub fn pow(&self, a: u16, e: i64) -> u16 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.size as i64 - 1;
        let k = self.log[a as usize] as i64;
        let r = ((k * (e % n)) % n + n) % n;
        self.exp[r as usize]
    }

    /// `x -> x^{p^k}`.
    #[inline]
    pub fn frobenius_p(&self, a: u16, k: u32) -> u16 {
        let mut cur = a;
        for _ in 0..(k % self.deg.max(1)) {
            cur = self.frob[cur as usize];
        }
        cur
    }

    /// Multiplicative order of an element (0 has no order; returns 0).
    pub fn mult_order(&self, a: u16) -> u32 {
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        let k = self.log[a as usize] as u64;
        let g = gcd(n, k);
        (n / g) as u32
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.size as u16
    }

    /// Digits of the packed representation, little-endian in the polynomial
    /// basis; this is the canonical textual encoding.
    pub fn to_digits(&self, a: u16) -> Vec<u32> {
        digits(a as u32, self.p, self.deg)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

struct Registry {
    fields: HashMap<(u32, u32), &'static Fq>,
    embeddings: HashMap<(u32, u32, u32), &'static Vec<u16>>,
}

fn registry() -> &'static Mutex<Registry> {
    static REG: OnceLock<Mutex<Registry>> = OnceLock::new();
    REG.get_or_init(|| {
        Mutex::new(Registry {
            fields: HashMap::new(),
            embeddings: HashMap::new(),
        })
    })
}

/// Global field registry: builds (once) and returns `F_{p^deg}`.
///
/// Panics on unsupported parameters; use [`try_field`] when the caller must
/// surface the error.
pub fn field(p: u32, deg: u32) -> &'static Fq {
    try_field(p, deg).expect("supported field parameters")
}

pub fn try_field(p: u32, deg: u32) -> Result<&'static Fq> {
    let mut reg = registry().lock().unwrap();
    if let Some(f) = reg.fields.get(&(p, deg)) {
        return Ok(f);
    }
    let f: &'static Fq = Box::leak(Box::new(Fq::build(p, deg)?));
    reg.fields.insert((p, deg), f);
    Ok(f)
}

/// The fixed embedding `F_{p^d1} -> F_{p^d2}` (requires `d1 | d2`), as a full
/// lookup table. The image of the polynomial generator is the smallest root
/// of the source modulus in the target field, so the choice is deterministic.
pub fn embedding(src: &'static Fq, dst: &'static Fq) -> Result<&'static Vec<u16>> {
    if src.p != dst.p || dst.deg % src.deg != 0 {
        return Err(Error::Config(format!(
            "no embedding F_{{{}^{}}} -> F_{{{}^{}}}",
            src.p, src.deg, dst.p, dst.deg
        )));
    }
    {
        let reg = registry().lock().unwrap();
        if let Some(t) = reg.embeddings.get(&(src.p, src.deg, dst.deg)) {
            return Ok(t);
        }
    }
    let table = build_embedding(src, dst)?;
    let mut reg = registry().lock().unwrap();
    let t: &'static Vec<u16> = Box::leak(Box::new(table));
    reg.embeddings.insert((src.p, src.deg, dst.deg), t);
    Ok(t)
}

fn build_embedding(src: &Fq, dst: &Fq) -> Result<Vec<u16>> {
    if src.deg == 1 {
        // Prime field embeds as constants.
        let mut t = vec![0u16; src.size as usize];
        for (a, slot) in t.iter_mut().enumerate() {
            *slot = a as u16; // constants pack identically
        }
        return Ok(t);
    }
    let f = digits(src.modulus, src.p, src.deg);
    let mut root = None;
    for h in dst.elements() {
        // evaluate x^deg + f(x) at h in dst
        let mut val = dst.pow(h, src.deg as i64);
        let mut hp = dst.one();
        for &c in &f {
            if c != 0 {
                val = dst.add(val, dst.mul(c as u16, hp));
            }
            hp = dst.mul(hp, h);
        }
        if val == 0 {
            root = Some(h);
            break;
        }
    }
    let h = root.ok_or_else(|| Error::Internal("modulus has no root in extension".into()))?;
    let mut t = vec![0u16; src.size as usize];
    for a in src.elements() {
        let ds = src.to_digits(a);
        let mut val = dst.zero();
        let mut hp = dst.one();
        for &c in &ds {
            if c != 0 {
                val = dst.add(val, dst.mul(c as u16, hp));
            }
            hp = dst.mul(hp, h);
        }
        t[a as usize] = val;
    }
    Ok(t)
}
