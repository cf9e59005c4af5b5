//! Exact arithmetic in the binary extension fields GF(2^p) for p = 1..8.
//!
//! Elements are stored by their integer value in [0, q), interpreted as the
//! p-bit vector of polynomial coefficients (MSB first: bit j is the
//! coefficient of x^(p-1-j)). Addition is bitwise XOR; multiplication and
//! inversion go through precomputed log/antilog tables built from a fixed
//! primitive polynomial per extension degree, so constructions are
//! reproducible bit-for-bit.

use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_P: usize = 8;

/// Fixed primitive polynomials, indexed by extension degree p. The bitmask
/// includes the x^p term, e.g. `0b111` is x^2 + x + 1. These are the usual
/// minimal-weight choices.
const PRIMITIVE_POLYS: [u16; MAX_P + 1] = [
    0,           // unused
    0b11,        // x + 1
    0b111,       // x^2 + x + 1
    0b1011,      // x^3 + x + 1
    0b10011,     // x^4 + x + 1
    0b100101,    // x^5 + x^2 + 1
    0b1000011,   // x^6 + x + 1
    0b10001001,  // x^7 + x^3 + 1
    0b100011101, // x^8 + x^4 + x^3 + x^2 + 1
];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GfError {
    #[error("extension degree {0} outside supported range 1..={MAX_P}")]
    DegreeOutOfRange(usize),
    #[error("value {value} is not an element of GF({q})")]
    ValueOutOfRange { value: usize, q: usize },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("bit vector length {got} does not match extension degree {expected}")]
    BitLengthMismatch { expected: usize, got: usize },
}

/// An element of GF(2^p), stored by integer value. Valid values depend on
/// the field the element is used with; `Field` methods check in debug builds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Integer value in [0, q).
    #[inline]
    pub fn value(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic tables for GF(2^p). Immutable after construction and safe to
/// share across threads; all operations are pure lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: usize,
    q: usize,
    poly: u16,
    /// exp[i] = alpha^i for i in 0..q-1.
    exp: Vec<u8>,
    /// log[v] = i with alpha^i = v, for v in 1..q. log[0] is unused.
    log: Vec<u8>,
    /// Dense q*q multiplication table, row-major: mul[a*q + b] = a*b.
    mul: Vec<u8>,
    /// inv[v] for v in 1..q; inv[0] unused.
    inv: Vec<u8>,
}

impl Field {
    /// Build the tables for GF(2^p) from the fixed primitive polynomial.
    pub fn new(p: usize) -> Result<Field, GfError> {
        if p == 0 || p > MAX_P {
            return Err(GfError::DegreeOutOfRange(p));
        }
        let q = 1usize << p;
        let poly = PRIMITIVE_POLYS[p];

        let mut exp = vec![0u8; q - 1];
        let mut log = vec![0u8; q];
        let mut cur: u16 = 1;
        for i in 0..q - 1 {
            exp[i] = cur as u8;
            log[cur as usize] = i as u8;
            // multiply by x and reduce
            cur <<= 1;
            if cur & (1 << p) != 0 {
                cur ^= poly;
            }
        }
        debug_assert_eq!(cur, 1, "alpha must have order q-1");

        let mut mul = vec![0u8; q * q];
        for a in 1..q {
            let la = log[a] as usize;
            for b in 1..q {
                let lb = log[b] as usize;
                mul[a * q + b] = exp[(la + lb) % (q - 1)];
            }
        }
        let mut inv = vec![0u8; q];
        for a in 1..q {
            inv[a] = exp[(q - 1 - log[a] as usize) % (q - 1)];
        }

        Ok(Field { p, q, poly, exp, log, mul, inv })
    }

    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    /// Field order q = 2^p.
    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    /// Primitive polynomial as a bitmask including the x^p term.
    #[inline]
    pub fn primitive_poly(&self) -> u16 {
        self.poly
    }

    /// The primitive element alpha used to build the tables.
    pub fn alpha(&self) -> FieldElement {
        FieldElement(self.exp[if self.p == 1 { 0 } else { 1 }])
    }

    pub fn element(&self, value: usize) -> Result<FieldElement, GfError> {
        if value < self.q {
            Ok(FieldElement(value as u8))
        } else {
            Err(GfError::ValueOutOfRange { value, q: self.q })
        }
    }

    /// All q elements in integer-value order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(|v| FieldElement(v as u8))
    }

    /// alpha^i (exponent taken mod q-1).
    pub fn exp(&self, i: usize) -> FieldElement {
        FieldElement(self.exp[i % (self.q - 1)])
    }

    /// Discrete log base alpha of a nonzero element.
    pub fn log(&self, a: FieldElement) -> Result<usize, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(self.log[a.value()] as usize)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.value() < self.q && b.value() < self.q);
        FieldElement(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.value() < self.q && b.value() < self.q);
        FieldElement(self.mul[a.value() * self.q + b.value()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, GfError> {
        if a.is_zero() {
            return Err(GfError::ZeroInverse);
        }
        Ok(FieldElement(self.inv[a.value()]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplication on raw integer values; used in hot message-passing
    /// loops where elements are vector indices.
    #[inline]
    pub fn mul_raw(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.q && b < self.q);
        self.mul[a * self.q + b] as usize
    }

    /// Row of the multiplication table for a fixed factor h: the slice `r`
    /// with r[v] = h*v. A nonzero h makes this a permutation of [0, q).
    #[inline]
    pub fn mul_row(&self, h: usize) -> &[u8] {
        debug_assert!(h < self.q);
        &self.mul[h * self.q..(h + 1) * self.q]
    }

    /// MSB-first bit vector to element: bits[j] is the coefficient of
    /// x^(p-1-j). Bits must be 0 or 1.
    pub fn bits_to_element(&self, bits: &[u8]) -> Result<FieldElement, GfError> {
        if bits.len() != self.p {
            return Err(GfError::BitLengthMismatch { expected: self.p, got: bits.len() });
        }
        let mut v = 0usize;
        for &b in bits {
            debug_assert!(b <= 1);
            v = (v << 1) | (b as usize);
        }
        Ok(FieldElement(v as u8))
    }

    /// Inverse of [`Field::bits_to_element`]; returns p bits, MSB first.
    pub fn element_to_bits(&self, e: FieldElement) -> Vec<u8> {
        (0..self.p).map(|j| ((e.value() >> (self.p - 1 - j)) & 1) as u8).collect()
    }
}
