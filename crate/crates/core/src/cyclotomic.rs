//! Exact arithmetic in cyclotomic integer rings `Z[zeta_N]`.
//!
//! Values are integer vectors on the power basis `1, zeta, ..., zeta^{phi(N)-1}`
//! with reduction modulo the `N`-th cyclotomic polynomial. Character values,
//! traces and inner products all live here; equality of predictions is exact.
//! Mixed-conductor operations lift both sides to the lcm via
//! `zeta_n -> zeta_m^{m/n}`.

use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

fn cyclotomic_poly_registry() -> &'static Mutex<HashMap<u32, &'static Vec<i64>>> {
    static REG: OnceLock<Mutex<HashMap<u32, &'static Vec<i64>>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (little-endian, monic) of the `n`-th cyclotomic polynomial.
pub fn cyclotomic_poly(n: u32) -> &'static Vec<i64> {
    {
        let reg = cyclotomic_poly_registry().lock().unwrap();
        if let Some(p) = reg.get(&n) {
            return p;
        }
    }
    let poly = compute_cyclotomic(n);
    let mut reg = cyclotomic_poly_registry().lock().unwrap();
    let leaked: &'static Vec<i64> = Box::leak(Box::new(poly));
    reg.entry(n).or_insert(leaked)
}

fn compute_cyclotomic(n: u32) -> Vec<i64> {
    // x^n - 1 divided by the product of Phi_d over proper divisors d | n.
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_poly(d).clone();
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem: Vec<i128> = num.iter().map(|&c| c as i128).collect();
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let nd = rem.len() - 1;
    let mut quot = vec![0i128; nd - dd + 1];
    for k in (dd..=nd).rev() {
        let c = rem[k];
        if c != 0 {
            quot[k - dd] = c;
            for (i, &di) in den.iter().enumerate() {
                rem[k - dd + i] -= c * di as i128;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "non-exact polynomial division");
    quot.iter().map(|&c| i64::try_from(c).expect("coefficient overflow")).collect()
}

/// An element of `Z[zeta_n]` on the power basis.
#[derive(Clone, Debug)]
pub struct Cyc {
    pub n: u32,
    /// Length `phi(n)` coefficient vector.
    pub coeffs: Vec<i64>,
}

pub fn euler_phi(mut n: u32) -> u32 {
    let mut result = n;
    let mut q = 2;
    while q * q <= n {
        if n % q == 0 {
            result -= result / q;
            while n % q == 0 {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn lcm(a: u32, b: u32) -> u32 {
    a / gcd(a, b) * b
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Cyc {
    pub fn zero(n: u32) -> Self {
        Cyc {
            n,
            coeffs: vec![0; euler_phi(n) as usize],
        }
    }

    pub fn from_int(v: i64) -> Self {
        Cyc { n: 1, coeffs: vec![v] }
    }

    /// `zeta_n^k`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        let kk = ((k % n as i64) + n as i64) % n as i64;
        let mut raw = vec![0i64; kk as usize + 1];
        raw[kk as usize] = 1;
        Cyc::reduce(n, raw)
    }

    fn reduce(n: u32, mut raw: Vec<i64>) -> Self {
        let phi = cyclotomic_poly(n);
        let deg = phi.len() - 1;
        let mut work: Vec<i128> = raw.drain(..).map(|c| c as i128).collect();
        if work.len() < deg {
            work.resize(deg, 0);
        }
        for k in (deg..work.len()).rev() {
            let c = work[k];
            if c != 0 {
                work[k] = 0;
                for (i, &pi) in phi.iter().enumerate().take(deg) {
                    work[k - deg + i] -= c * pi as i128;
                }
            }
        }
        work.truncate(deg);
        Cyc {
            n,
            coeffs: work
                .into_iter()
                .map(|c| i64::try_from(c).expect("cyclotomic coefficient overflow"))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Lift into `Z[zeta_m]` for `n | m` via `zeta_n -> zeta_m^{m/n}`.
    pub fn lift(&self, m: u32) -> Cyc {
        if m == self.n {
            return self.clone();
        }
        assert_eq!(m % self.n, 0, "conductor must divide target");
        let step = (m / self.n) as usize;
        let mut raw = vec![0i64; (self.coeffs.len() - 1) * step + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            raw[i * step] = c;
        }
        Cyc::reduce(m, raw)
    }

    fn binop(&self, other: &Cyc, f: impl Fn(i64, i64) -> i64) -> Cyc {
        let m = lcm(self.n, other.n);
        let a = self.lift(m);
        let b = other.lift(m);
        Cyc {
            n: m,
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| f(x, y))
                .collect(),
        }
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        self.binop(other, |x, y| x.checked_add(y).expect("overflow"))
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        self.binop(other, |x, y| x.checked_sub(y).expect("overflow"))
    }

    pub fn neg(&self) -> Cyc {
        Cyc {
            n: self.n,
            coeffs: self.coeffs.iter().map(|&c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Cyc) -> Cyc {
        let m = lcm(self.n, other.n);
        let a = self.lift(m);
        let b = other.lift(m);
        let mut raw = vec![0i128; a.coeffs.len() + b.coeffs.len()];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                raw[i + j] += (x as i128) * (y as i128);
            }
        }
        let raw64: Vec<i64> = raw
            .into_iter()
            .map(|c| i64::try_from(c).expect("overflow"))
            .collect();
        Cyc::reduce(m, raw64)
    }

    pub fn scale(&self, k: i64) -> Cyc {
        Cyc {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| c.checked_mul(k).expect("overflow"))
                .collect(),
        }
    }

    /// Galois action `zeta -> zeta^j` for `gcd(j, n) = 1`.
    pub fn galois(&self, j: i64) -> Cyc {
        let n = self.n;
        let jj = (((j % n as i64) + n as i64) % n as i64) as usize;
        assert_eq!(gcd(jj as u32, n), 1, "galois exponent must be coprime");
        let mut full = vec![0i64; n as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = (i * jj) % n as usize;
            full[k] = full[k].checked_add(c).expect("overflow");
        }
        Cyc::reduce(n, full)
    }

    /// Complex conjugation `zeta -> zeta^{-1}`.
    pub fn conj(&self) -> Cyc {
        if self.n <= 2 {
            return self.clone();
        }
        self.galois(self.n as i64 - 1)
    }

    /// Exact division by an integer; errors if any coordinate is not divisible.
    pub fn div_exact(&self, k: i64) -> Option<Cyc> {
        assert!(k != 0);
        let mut out = Vec::with_capacity(self.coeffs.len());
        for &c in &self.coeffs {
            if c % k != 0 {
                return None;
            }
            out.push(c / k);
        }
        Some(Cyc { n: self.n, coeffs: out })
    }

    pub fn eq(&self, other: &Cyc) -> bool {
        let m = lcm(self.n, other.n);
        self.lift(m).coeffs == other.lift(m).coeffs
    }

    /// Rational integer value, if the element lies in `Z`.
    pub fn as_int(&self) -> Option<i64> {
        if self.coeffs[1..].iter().all(|&c| c == 0) {
            Some(self.coeffs[0])
        } else {
            None
        }
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        Cyc::eq(self, other)
    }
}

impl Serialize for Cyc {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("Cyc", 2)?;
        s.serialize_field("conductor", &self.n)?;
        s.serialize_field("coeffs", &self.coeffs)?;
        s.end()
    }
}
