//! Binary extension fields GF(2^d) for 1 <= d <= 32.
//!
//! Elements are the integers `0..2^d`, read as polynomials over GF(2) by
//! their bit pattern. Products are reduced modulo a fixed irreducible
//! polynomial per degree: the lowest-weight one (trinomial when one exists,
//! otherwise pentanomial) with the smallest middle exponents.

use crate::error::{Error, Result};

pub const MAX_DEGREE: u32 = 32;

/// Irreducible modulus for degree `d` at index `d - 1`, including the `x^d`
/// term.
pub const IRREDUCIBLE: [u64; MAX_DEGREE as usize] = [
    0x3,
    0x7,
    0xb,
    0x13,
    0x25,
    0x43,
    0x83,
    0x11b,
    0x203,
    0x409,
    0x805,
    0x1009,
    0x201b,
    0x4021,
    0x8003,
    0x1002b,
    0x20009,
    0x40009,
    0x80027,
    0x100009,
    0x200005,
    0x400003,
    0x800021,
    0x100001b,
    0x2000009,
    0x400001b,
    0x8000027,
    0x10000003,
    0x20000005,
    0x40000003,
    0x80000009,
    0x10000008d,
];

/// Degrees up to this use log/antilog tables for multiplication.
const TABLE_MAX_DEGREE: u32 = 16;

#[derive(Debug, Clone)]
pub struct Gf2Field {
    degree: u32,
    modulus: u64,
    tables: Option<LogTables>,
}

#[derive(Debug, Clone)]
struct LogTables {
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2 (2^d - 1)`, doubled so sums of logs need no
    /// reduction.
    exp: Vec<u32>,
}

/// Carry-less product of two field elements, reduced modulo `modulus`.
pub fn mul_reduce(a: u64, b: u64, degree: u32, modulus: u64) -> u64 {
    let mut prod: u64 = 0;
    let mut x = a;
    let mut y = b;
    while y != 0 {
        if y & 1 == 1 {
            prod ^= x;
        }
        y >>= 1;
        x <<= 1;
        if x >> degree & 1 == 1 {
            x ^= modulus;
        }
    }
    prod
}

impl Gf2Field {
    pub fn new(degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(Error::OutOfRange {
                name: "field degree",
                value: degree as f64,
                expected: "1 <= degree <= 32",
            });
        }
        let modulus = IRREDUCIBLE[degree as usize - 1];
        let mut field = Self {
            degree,
            modulus,
            tables: None,
        };
        if degree <= TABLE_MAX_DEGREE {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        1u64 << self.degree
    }

    fn slow_mul(&self, a: u64, b: u64) -> u64 {
        mul_reduce(a, b, self.degree, self.modulus)
    }

    /// Finds a generator of the multiplicative group and tabulates its powers.
    fn build_tables(&self) -> LogTables {
        let group = (self.order() - 1) as usize;
        let mut exp = vec![0u32; 2 * group.max(1)];
        let mut log = vec![0u32; self.order() as usize];
        for g in 1..self.order() {
            let mut x = 1u64;
            let mut ok = true;
            for i in 0..group {
                if i > 0 && x == 1 {
                    ok = false;
                    break;
                }
                exp[i] = x as u32;
                x = self.slow_mul(x, g);
            }
            if ok {
                break;
            }
        }
        for i in 0..group {
            exp[group + i] = exp[i];
            log[exp[i] as usize] = i as u32;
        }
        LogTables { log, exp }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match &self.tables {
            Some(t) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    t.exp[(t.log[a as usize] + t.log[b as usize]) as usize] as u64
                }
            }
            None => self.slow_mul(a, b),
        }
    }

    /// Horner evaluation of `sum coeffs[j] x^j`.
    #[inline]
    pub fn eval_poly(&self, coeffs: &[u64], x: u64) -> u64 {
        let mut acc = 0;
        for &c in coeffs.iter().rev() {
            acc = self.mul(acc, x) ^ c;
        }
        acc
    }
}
