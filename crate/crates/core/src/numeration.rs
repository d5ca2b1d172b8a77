//! Tribonacci numbers and the Zeckendorf-Tribonacci numeration.
//!
//! Digits are stored least significant first: `digits[k]` is the coefficient
//! of `T_k`. Zero is the empty digit string.

use std::fmt;
use std::sync::{OnceLock, RwLock};

use crate::error::{Error, Result};

/// Growable cache of `T_0 = 1, T_1 = 2, T_2 = 4, T_k = T_{k-1} + T_{k-2} + T_{k-3}`.
#[derive(Debug, Clone)]
pub struct TriboSequence {
    values: Vec<u64>,
}

impl Default for TriboSequence {
    fn default() -> Self {
        TriboSequence {
            values: vec![1, 2, 4],
        }
    }
}

impl TriboSequence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, k: usize) -> Result<u64> {
        while self.values.len() <= k {
            let n = self.values.len();
            let next = self.values[n - 1]
                .checked_add(self.values[n - 2])
                .and_then(|s| s.checked_add(self.values[n - 3]))
                .ok_or_else(|| Error::Overflow(format!("T_{k}")))?;
            self.values.push(next);
        }
        Ok(self.values[k])
    }

    /// Values up to and including the largest `T_k <= bound`.
    pub fn up_to(&mut self, bound: u64) -> &[u64] {
        let mut k = 0;
        while let Ok(t) = self.get(k) {
            if t > bound {
                break;
            }
            k += 1;
        }
        &self.values[..k]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }
}

fn shared() -> &'static RwLock<TriboSequence> {
    static CACHE: OnceLock<RwLock<TriboSequence>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(TriboSequence::new()))
}

/// `T_k`, the length of `τ^k(0)`.
pub fn tribonacci_number(k: usize) -> Result<u64> {
    if let Some(&t) = shared()
        .read()
        .expect("cache lock poisoned")
        .values()
        .get(k)
    {
        return Ok(t);
    }
    shared().write().expect("cache lock poisoned").get(k)
}

/// Digits `p_0, p_1, ..`, least significant first, with `N = Σ p_k T_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ZeckendorfRep {
    digits: Vec<u8>,
}

impl ZeckendorfRep {
    /// Validates the digit constraint and strips trailing zeros.
    pub fn from_digits(mut digits: Vec<u8>) -> Result<Self> {
        if let Some(bad) = digits.iter().find(|&&d| d > 1) {
            return Err(Error::InvalidRepresentation(format!(
                "digit {bad} is not a bit"
            )));
        }
        if !is_valid_rep(&digits) {
            return Err(Error::InvalidRepresentation(format!(
                "three consecutive ones in {}",
                digits_to_string(&digits)
            )));
        }
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(ZeckendorfRep { digits })
    }

    /// Parses the 0/1 text form, least significant digit first.
    pub fn parse(text: &str) -> Result<Self> {
        let digits = text
            .bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::InvalidRepresentation(format!(
                    "unexpected character {:?}",
                    b as char
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::from_digits(digits)
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.is_empty()
    }
}

fn digits_to_string(digits: &[u8]) -> String {
    digits.iter().map(|&d| (b'0' + d) as char).collect()
}

impl fmt::Display for ZeckendorfRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&digits_to_string(&self.digits))
    }
}

/// True iff the bits never contain three consecutive ones.
pub fn is_valid_rep(digits: &[u8]) -> bool {
    digits
        .windows(3)
        .all(|w| !(w[0] == 1 && w[1] == 1 && w[2] == 1))
}

/// Greedy encoding: repeatedly take the largest `T_k` not exceeding what remains.
pub fn zeckendorf_encode(n: u64) -> ZeckendorfRep {
    if n == 0 {
        return ZeckendorfRep::default();
    }
    let mut seq = TriboSequence::new();
    let values = seq.up_to(n).to_vec();
    let mut digits = vec![0u8; values.len()];
    let mut remainder = n;
    for k in (0..values.len()).rev() {
        if values[k] <= remainder {
            digits[k] = 1;
            remainder -= values[k];
        }
    }
    debug_assert_eq!(remainder, 0);
    ZeckendorfRep { digits }
}

pub fn zeckendorf_decode(rep: &ZeckendorfRep) -> Result<u64> {
    decode_digits(rep.digits())
}

/// Weighted sum of raw digits, rejecting strings that break the constraint.
pub fn decode_digits(digits: &[u8]) -> Result<u64> {
    if digits.iter().any(|&d| d > 1) || !is_valid_rep(digits) {
        return Err(Error::InvalidRepresentation(digits_to_string(digits)));
    }
    let mut total: u64 = 0;
    for (k, &d) in digits.iter().enumerate() {
        if d == 1 {
            total = total
                .checked_add(tribonacci_number(k)?)
                .ok_or_else(|| Error::Overflow("representation value".into()))?;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{Morphism, Symbol};

    #[test]
    fn tribonacci_numbers() {
        let expected = [1, 2, 4, 7, 13, 24, 44, 81, 149, 274];
        for (k, &t) in expected.iter().enumerate() {
            assert_eq!(tribonacci_number(k).unwrap(), t);
        }
    }

    #[test]
    fn tribonacci_numbers_are_image_lengths() {
        let tau = Morphism::tribonacci();
        let zero = Symbol::new(0, 3).unwrap();
        let mut word = vec![0u8];
        for k in 0..=20 {
            assert_eq!(word.len() as u64, tribonacci_number(k).unwrap(), "k = {k}");
            word = tau.apply(&word).unwrap();
        }
        assert_eq!(tau.iterate(zero, 5).unwrap().len(), 24);
    }

    #[test]
    fn overflow_is_reported() {
        let mut seq = TriboSequence::new();
        assert!(seq.get(70).is_ok());
        assert!(matches!(seq.get(200), Err(Error::Overflow(_))));
        assert!(tribonacci_number(500).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(zeckendorf_encode(0).digits(), &[] as &[u8]);
        assert_eq!(zeckendorf_encode(1).digits(), &[1]);
        assert_eq!(zeckendorf_encode(6).digits(), &[0, 1, 1]);
        assert_eq!(zeckendorf_encode(7).digits(), &[0, 0, 0, 1]);
        assert_eq!(zeckendorf_encode(6).to_string(), "011");
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_digits(&[1]).unwrap(), 1);
        assert_eq!(decode_digits(&[0, 1, 1]).unwrap(), 6);
        assert_eq!(decode_digits(&[1, 1, 0, 1]).unwrap(), 10);
        assert!(matches!(
            decode_digits(&[1, 1, 1]),
            Err(Error::InvalidRepresentation(_))
        ));
        assert!(decode_digits(&[2]).is_err());
    }

    #[test]
    fn validity_examples() {
        assert!(!is_valid_rep(&[1, 1, 1]));
        assert!(is_valid_rep(&[]));
        assert!(is_valid_rep(&[1, 1, 0, 1, 1]));
    }

    #[test]
    fn text_form() {
        let rep = ZeckendorfRep::parse("0110").unwrap();
        assert_eq!(rep.digits(), &[0, 1, 1]);
        assert_eq!(zeckendorf_decode(&rep).unwrap(), 6);
        assert!(ZeckendorfRep::parse("111").is_err());
        assert!(ZeckendorfRep::parse("012").is_err());
    }
}
