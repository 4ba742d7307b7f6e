//! Fixed-length bit strings over Z_2^n, used for measurement outcomes,
//! readout/reset flips, Fourier indices and weight patterns.

use std::fmt;
use std::str::FromStr;

use crate::error::CoreError;

/// A bit string of fixed length (at most 16 bits). Bit `i` corresponds to
/// qubit `i`; the leftmost character of the text form is bit 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    len: u8,
    val: u16,
}

impl Bits {
    pub const MAX_LEN: usize = 16;

    pub fn zero(len: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        Bits { len: len as u8, val: 0 }
    }

    pub fn new(len: usize, val: usize) -> Self {
        assert!(len <= Self::MAX_LEN);
        debug_assert!(len == Self::MAX_LEN || val < (1 << len));
        Bits {
            len: len as u8,
            val: (val & ((1usize << len) - 1).max(0)) as u16,
        }
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn value(&self) -> usize {
        self.val as usize
    }

    pub fn bit(&self, i: usize) -> bool {
        debug_assert!(i < self.len());
        (self.val >> i) & 1 == 1
    }

    pub fn with_bit(&self, i: usize, b: bool) -> Self {
        debug_assert!(i < self.len());
        let mut v = self.val;
        if b {
            v |= 1 << i;
        } else {
            v &= !(1 << i);
        }
        Bits { len: self.len, val: v }
    }

    pub fn is_zero(&self) -> bool {
        self.val == 0
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.len, other.len);
        ((self.val & other.val).count_ones() & 1) == 1
    }

    /// Bitwise XOR (addition over Z_2^n).
    pub fn xor(&self, other: &Bits) -> Self {
        debug_assert_eq!(self.len, other.len);
        Bits {
            len: self.len,
            val: self.val ^ other.val,
        }
    }

    pub fn count_ones(&self) -> usize {
        self.val.count_ones() as usize
    }

    /// All bit strings of the given length, in index order.
    pub fn all(len: usize) -> impl Iterator<Item = Bits> {
        assert!(len <= Self::MAX_LEN);
        (0..(1usize << len)).map(move |v| Bits::new(len, v))
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl serde::Serialize for Bits {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Bits {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

impl FromStr for Bits {
    type Err = CoreError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > Self::MAX_LEN {
            return Err(CoreError::Parse(format!("bit string too long: {s:?}")));
        }
        let mut val = 0u16;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => val |= 1 << i,
                _ => return Err(CoreError::Parse(format!("invalid bit {c:?} in {s:?}"))),
            }
        }
        Ok(Bits { len: s.len() as u8, val })
    }
}
