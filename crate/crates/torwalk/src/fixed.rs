//! Binary fixed-point fractions in `[0, 1)`.
//!
//! A [`Fixed`] holds `64 * limbs` bits after the binary point, most
//! significant limb first. All arithmetic is modulo 1, so addition and
//! integer multiples are exact.

use num_bigint::BigUint;
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fixed {
    limbs: Vec<u64>,
}

impl Fixed {
    pub fn zero(limbs: usize) -> Self {
        assert!(limbs >= 1);
        Fixed { limbs: vec![0; limbs] }
    }

    pub fn from_limbs(limbs: Vec<u64>) -> Self {
        assert!(!limbs.is_empty());
        Fixed { limbs }
    }

    /// `value / 2^bits` where `bits = 64 * limbs`; `value` is reduced mod `2^bits`.
    pub fn from_biguint(value: &BigUint, limbs: usize) -> Self {
        let digits = value.to_u64_digits();
        let mut out = vec![0u64; limbs];
        for (i, d) in digits.iter().take(limbs).enumerate() {
            out[limbs - 1 - i] = *d;
        }
        Fixed { limbs: out }
    }

    /// The integer numerator over `2^bits`.
    pub fn to_biguint(&self) -> BigUint {
        let mut le: Vec<u64> = self.limbs.clone();
        le.reverse();
        BigUint::from_slice(
            &le.iter()
                .flat_map(|d| [*d as u32, (*d >> 32) as u32])
                .collect::<Vec<u32>>(),
        )
    }

    /// Nearest `Fixed` to an `f64` in `[0, 1)`; only for tests and examples.
    pub fn from_f64(x: f64, limbs: usize) -> Self {
        let x = x - x.floor();
        let mut out = Fixed::zero(limbs);
        out.limbs[0] = (x * 2f64.powi(64)) as u64;
        out
    }

    pub fn limbs(&self) -> &[u64] {
        &self.limbs
    }

    pub fn bits(&self) -> u32 {
        64 * self.limbs.len() as u32
    }

    /// The leading 64 bits, i.e. `floor(x * 2^64)`.
    pub fn top64(&self) -> u64 {
        self.limbs[0]
    }

    pub fn to_f64(&self) -> f64 {
        let hi = self.limbs[0] as f64 * 2f64.powi(-64);
        let lo = self.limbs.get(1).copied().unwrap_or(0) as f64 * 2f64.powi(-128);
        hi + lo
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == 0)
    }

    /// `self += other (mod 1)`.
    #[inline]
    pub fn add_assign(&mut self, other: &Fixed) {
        debug_assert_eq!(self.limbs.len(), other.limbs.len());
        let mut carry = false;
        for (a, b) in self.limbs.iter_mut().zip(other.limbs.iter()).rev() {
            let (s1, c1) = a.overflowing_add(*b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 || c2;
        }
    }

    /// `-self (mod 1)`.
    pub fn neg(&self) -> Fixed {
        let mut out: Vec<u64> = self.limbs.iter().map(|l| !l).collect();
        for l in out.iter_mut().rev() {
            let (s, c) = l.overflowing_add(1);
            *l = s;
            if !c {
                break;
            }
        }
        Fixed { limbs: out }
    }

    /// `frac(m * self)` for a 64-bit multiplier.
    fn mul_u64(&self, m: u64) -> Fixed {
        let mut out = vec![0u64; self.limbs.len()];
        let mut carry: u128 = 0;
        for (o, l) in out.iter_mut().zip(self.limbs.iter()).rev() {
            let t = (*l as u128) * (m as u128) + carry;
            *o = t as u64;
            carry = t >> 64;
        }
        Fixed { limbs: out }
    }

    /// `frac(m * self)`, exact.
    pub fn mul_int(&self, m: i128) -> Fixed {
        let mag = m.unsigned_abs();
        let lo = mag as u64;
        let hi = (mag >> 64) as u64;
        let mut out = self.mul_u64(lo);
        if hi != 0 {
            // frac(hi * 2^64 * x): shift frac(hi * x) up by one limb.
            let h = self.mul_u64(hi);
            let mut shifted = vec![0u64; self.limbs.len()];
            shifted[..self.limbs.len() - 1].copy_from_slice(&h.limbs[1..]);
            out.add_assign(&Fixed { limbs: shifted });
        }
        if m < 0 {
            out.neg()
        } else {
            out
        }
    }

    /// Upper-case hex of all limbs, most significant first.
    pub fn hex(&self) -> String {
        self.limbs.iter().map(|l| format!("{l:016X}")).collect()
    }
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fixed(0x0.{})", self.hex())
    }
}
