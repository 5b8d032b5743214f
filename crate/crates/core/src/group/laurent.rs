//! Small Laurent-series-with-precision helper used by determinant,
//! inversion and the symplectic form check. A value represents
//! `sum c[k] t^{lo+k}` known exactly for exponents `< prec`; operations
//! propagate precision the way p-adic arithmetic does, so no coefficient is
//! ever claimed beyond what the inputs determine.

use crate::error::{Error, Result};
use crate::field::Fq;

pub const EXACT: i64 = i64::MAX / 4;

#[derive(Clone, Debug)]
pub struct Laur {
    pub lo: i64,
    pub prec: i64,
    /// Coefficients of `t^lo .. t^{prec-1}` (length `prec - lo`, possibly 0).
    pub c: Vec<u16>,
}

impl Laur {
    pub fn zero(prec: i64) -> Laur {
        Laur {
            lo: prec,
            prec,
            c: Vec::new(),
        }
    }

    pub fn exact_const(v: u16) -> Laur {
        Laur {
            lo: 0,
            prec: EXACT,
            c: vec![v],
        }
    }

    pub fn from_coeffs(lo: i64, prec: i64, mut c: Vec<u16>) -> Laur {
        let len = (prec - lo).max(0) as usize;
        c.resize(len, 0);
        Laur { lo, prec, c }
    }

    /// Exactly-known finite Laurent polynomial, normalized so an exact zero
    /// has empty support (keeping products with it exactly zero).
    pub fn exact(mut lo: i64, mut c: Vec<u16>) -> Laur {
        while c.last() == Some(&0) {
            c.pop();
        }
        let lead = c.iter().position(|&v| v != 0).unwrap_or(c.len());
        c.drain(..lead);
        lo += lead as i64;
        if c.is_empty() {
            lo = EXACT;
        }
        Laur {
            lo,
            prec: EXACT,
            c,
        }
    }

    fn cap(prec: i64) -> i64 {
        prec.min(EXACT)
    }

    pub fn coeff(&self, e: i64) -> u16 {
        if e < self.lo || e >= self.prec {
            0
        } else {
            *self.c.get((e - self.lo) as usize).unwrap_or(&0)
        }
    }

    /// Valuation within the known window; `prec` if indistinguishable from 0.
    pub fn val(&self) -> i64 {
        for (k, &v) in self.c.iter().enumerate() {
            if v != 0 {
                return self.lo + k as i64;
            }
        }
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Laur, fq: &Fq) -> Laur {
        let prec = Self::cap(self.prec.min(other.prec));
        // coefficients beyond both supports are exactly zero
        let end = |l: &Laur| -> Option<i64> {
            if l.c.is_empty() {
                None
            } else {
                Some(l.lo + l.c.len() as i64)
            }
        };
        let support_end = match (end(self), end(other)) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => return Laur::zero(prec),
        }
        .min(prec);
        let lo = self.lo.min(other.lo).min(support_end);
        let len = (support_end - lo).max(0) as usize;
        let mut c = vec![0u16; len];
        for (k, slot) in c.iter_mut().enumerate() {
            let e = lo + k as i64;
            *slot = fq.add(self.coeff(e), other.coeff(e));
        }
        Laur { lo, prec, c }
    }

    pub fn neg(&self, fq: &Fq) -> Laur {
        Laur {
            lo: self.lo,
            prec: self.prec,
            c: self.c.iter().map(|&v| fq.neg(v)).collect(),
        }
    }

    pub fn mul(&self, other: &Laur, fq: &Fq) -> Laur {
        if self.c.is_empty() || other.c.is_empty() {
            let prec = Self::cap(
                (self.lo + other.prec)
                    .min(other.lo + self.prec)
                    .min(EXACT),
            );
            return Laur::zero(prec);
        }
        let lo = self.lo + other.lo;
        let prec = Self::cap((self.lo + other.prec).min(other.lo + self.prec));
        // the product support ends at the sum of the factor supports
        let len = ((prec - lo).max(0) as usize)
            .min(self.c.len() + other.c.len() - 1);
        let mut c = vec![0u16; len];
        for (k1, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (k2, &b) in other.c.iter().enumerate() {
                let k = k1 + k2;
                if (k as i64) < len as i64 && b != 0 {
                    c[k] = fq.add(c[k], fq.mul(a, b));
                }
            }
        }
        Laur { lo, prec, c }
    }

    /// Multiplicative inverse; the valuation must be visible and the leading
    /// coefficient a unit (valuation 0 overall is not required: `t^v u`
    /// inverts to `t^{-v} u^{-1}`). Inverses of exactly-known polynomials
    /// are genuine series; they are expanded to a fixed working length and
    /// carry that finite precision.
    pub fn inv(&self, fq: &Fq) -> Result<Laur> {
        const EXACT_INV_LEN: usize = 64;
        let v = self.val();
        if v >= self.prec {
            return Err(Error::Arithmetic("inverse of an indistinguishable-from-zero series".into()));
        }
        let shift = (v - self.lo) as usize;
        let unit: Vec<u16> = self.c[shift..].to_vec();
        let m = if self.prec >= EXACT {
            unit.len().max(EXACT_INV_LEN)
        } else {
            unit.len()
        };
        let coeff_in = |i: usize| -> u16 { unit.get(i).copied().unwrap_or(0) };
        let c0 = fq.inv(unit[0])?;
        let mut out = vec![0u16; m];
        out[0] = c0;
        for k in 1..m {
            let mut acc = 0u16;
            for i in 1..=k {
                acc = fq.add(acc, fq.mul(coeff_in(i), out[k - i]));
            }
            out[k] = fq.mul(fq.neg(acc), c0);
        }
        let prec = Self::cap((self.prec - 2 * v).min(-v + m as i64));
        Ok(Laur { lo: -v, prec, c: out })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::field;

    #[test]
    fn precision_tracking() {
        let f = field(3, 1);
        let a = Laur::from_coeffs(0, 2, vec![1, 1]); // 1 + t, known mod t^2
        let b = Laur::from_coeffs(1, 3, vec![1, 0]); // t, known mod t^3
        let p = a.mul(&b, f);
        assert_eq!(p.lo, 1);
        assert_eq!(p.prec, 3); // min(0+3, 1+2) = 3
        assert_eq!(p.coeff(1), 1);
        assert_eq!(p.coeff(2), 1);
    }

    #[test]
    fn laurent_inverse() {
        let f = field(3, 1);
        let a = Laur::from_coeffs(1, 4, vec![1, 1, 0]); // t(1 + t)
        let inv = a.inv(f).unwrap();
        assert_eq!(inv.lo, -1);
        let prod = a.mul(&inv, f);
        assert_eq!(prod.val(), 0);
        assert_eq!(prod.coeff(0), 1);
        for e in 1..prod.prec {
            assert_eq!(prod.coeff(e), 0);
        }
        assert!(Laur::zero(3).inv(f).is_err());
    }
}
