//! Exact arithmetic in `F_{q^n}[t]/(t^M)`.

use crate::error::{Error, Result};
use crate::field::Fq;
use serde::Serialize;

/// A polynomial series truncated at `t^M`, with coefficients in a fixed
/// tower level. `v(0)` is encoded as `M` (one past the last index); all
/// comparisons treat it as "at least".
#[derive(Clone)]
pub struct TruncatedSeries {
    /// Field of coefficients (registry reference).
    pub fq: &'static Fq,
    /// Coefficients `c[0] + c[1] t + ... + c[M-1] t^{M-1}`.
    pub coeffs: Vec<u16>,
}

impl PartialEq for TruncatedSeries {
    fn eq(&self, other: &Self) -> bool {
        self.fq.p == other.fq.p && self.fq.deg == other.fq.deg && self.coeffs == other.coeffs
    }
}

impl Eq for TruncatedSeries {}

impl std::hash::Hash for TruncatedSeries {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.fq.p, self.fq.deg).hash(state);
        self.coeffs.hash(state);
    }
}

impl std::fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "F_{{{}^{}}}{}", self.fq.p, self.fq.deg, self.encode())
    }
}

impl TruncatedSeries {
    pub fn zero(fq: &'static Fq, m: usize) -> Self {
        TruncatedSeries {
            fq,
            coeffs: vec![0; m],
        }
    }

    pub fn one(fq: &'static Fq, m: usize) -> Self {
        let mut s = Self::zero(fq, m);
        if m > 0 {
            s.coeffs[0] = 1;
        }
        s
    }

    pub fn from_coeffs(fq: &'static Fq, coeffs: Vec<u16>) -> Self {
        TruncatedSeries { fq, coeffs }
    }

    /// Monomial `c * t^k`.
    pub fn monomial(fq: &'static Fq, m: usize, k: usize, c: u16) -> Self {
        let mut s = Self::zero(fq, m);
        if k < m {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len()
    }

    /// Valuation; `M` stands in for infinity.
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(self.coeffs.len())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        let f = self.fq;
        TruncatedSeries {
            fq: f,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let f = self.fq;
        TruncatedSeries {
            fq: f,
            coeffs: self.coeffs.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        let f = self.fq;
        let m = self.coeffs.len();
        let mut out = vec![0u16; m];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if i + j >= m {
                    break;
                }
                if b != 0 {
                    out[i + j] = f.add(out[i + j], f.mul(a, b));
                }
            }
        }
        TruncatedSeries { fq: f, coeffs: out }
    }

    pub fn scale(&self, c: u16) -> Self {
        let f = self.fq;
        TruncatedSeries {
            fq: f,
            coeffs: self.coeffs.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }

    /// Multiplicative inverse; requires `v(f) = 0`.
    pub fn inv(&self) -> Result<Self> {
        let f = self.fq;
        let m = self.coeffs.len();
        if m == 0 || self.coeffs[0] == 0 {
            return Err(Error::Arithmetic("inverse of a non-unit series".into()));
        }
        let c0inv = f.inv(self.coeffs[0])?;
        let mut out = vec![0u16; m];
        out[0] = c0inv;
        for k in 1..m {
            // c0 * out[k] = -(sum_{i=1..k} a_i out[k-i])
            let mut acc = 0u16;
            for i in 1..=k {
                acc = f.add(acc, f.mul(self.coeffs[i], out[k - i]));
            }
            out[k] = f.mul(f.neg(acc), c0inv);
        }
        Ok(TruncatedSeries { fq: f, coeffs: out })
    }

    /// Coefficient-wise `x -> x^{q^power}` where `q = p^base_deg`; `t` is fixed.
    pub fn coeff_frobenius(&self, base_deg: u32, power: u32) -> Self {
        let f = self.fq;
        let k = (base_deg * power) % f.deg.max(1);
        TruncatedSeries {
            fq: f,
            coeffs: self.coeffs.iter().map(|&a| f.frobenius_p(a, k)).collect(),
        }
    }

    /// Re-truncate (or extend with zeros) to order `m`.
    pub fn with_order(&self, m: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m, 0);
        TruncatedSeries {
            fq: self.fq,
            coeffs,
        }
    }

    /// Map coefficients through an embedding table into a larger field.
    pub fn embed(&self, dst: &'static Fq, table: &[u16]) -> Self {
        TruncatedSeries {
            fq: dst,
            coeffs: self.coeffs.iter().map(|&a| table[a as usize]).collect(),
        }
    }

    /// Canonical textual encoding, e.g. `[1,0,2]`.
    pub fn encode(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("[{}]", parts.join(","))
    }
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.encode())
    }
}
