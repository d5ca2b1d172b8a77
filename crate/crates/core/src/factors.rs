//! Exact distinct-factor enumeration over a [`WordBuffer`].
//!
//! Windows are keyed by a 128-bit fingerprint built from two polynomial hashes
//! modulo the Mersenne prime 2^61 - 1. A fingerprint hit is never trusted on its
//! own: it is confirmed by comparing symbols before a window is declared a
//! repeat. Consecutive windows are chained, so when window `p - 1` is known to
//! equal an earlier window `q`, window `p` equals window `q + 1` iff their last
//! symbols agree, and no lookup is needed at all.

use std::collections::hash_map::Entry;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::error::{Error, Result};
use crate::word::WordBuffer;

const MODULUS: u64 = (1 << 61) - 1;
const BASE_A: u64 = 0x1f3d_5b79_a4c2_e081 % MODULUS;
const BASE_B: u64 = 0x0bad_c0de_5eed_1234 % MODULUS;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let product = a as u128 * b as u128;
    let folded = (product & MODULUS as u128) as u64 + (product >> 61) as u64;
    if folded >= MODULUS {
        folded - MODULUS
    } else {
        folded
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

/// The fingerprints are already uniformly mixed; hashing them again is wasted work.
#[derive(Default)]
pub(crate) struct PassThroughHasher(u64);

impl Hasher for PassThroughHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = self.0.rotate_left(8) ^ b as u64;
        }
    }

    fn write_u128(&mut self, value: u128) {
        self.0 = (value as u64) ^ ((value >> 64) as u64).rotate_left(29);
    }
}

pub(crate) type FingerprintMap<V> = HashMap<u128, V, BuildHasherDefault<PassThroughHasher>>;

/// Prefix hashes over a buffer, giving O(1) fingerprints of any window.
#[derive(Debug, Clone, Default)]
pub struct Fingerprints {
    prefix_a: Vec<u64>,
    prefix_b: Vec<u64>,
    pow_a: Vec<u64>,
    pow_b: Vec<u64>,
}

impl Fingerprints {
    pub fn new(symbols: &[u8]) -> Self {
        let mut fp = Fingerprints {
            prefix_a: vec![0],
            prefix_b: vec![0],
            pow_a: vec![1],
            pow_b: vec![1],
        };
        fp.extend(symbols);
        fp
    }

    /// Brings the tables up to date with `symbols`, which must extend the
    /// sequence already indexed.
    pub fn extend(&mut self, symbols: &[u8]) {
        let from = self.prefix_a.len() - 1;
        for &s in &symbols[from..] {
            let digit = s as u64 + 1;
            let (ha, hb) = (
                *self.prefix_a.last().unwrap(),
                *self.prefix_b.last().unwrap(),
            );
            self.prefix_a.push((mul_mod(ha, BASE_A) + digit) % MODULUS);
            self.prefix_b.push((mul_mod(hb, BASE_B) + digit) % MODULUS);
            let (pa, pb) = (*self.pow_a.last().unwrap(), *self.pow_b.last().unwrap());
            self.pow_a.push(mul_mod(pa, BASE_A));
            self.pow_b.push(mul_mod(pb, BASE_B));
        }
    }

    pub fn len(&self) -> usize {
        self.prefix_a.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn window(&self, start: usize, len: usize) -> u128 {
        let end = start + len;
        let a = sub_mod(
            self.prefix_a[end],
            mul_mod(self.prefix_a[start], self.pow_a[len]),
        );
        let b = sub_mod(
            self.prefix_b[end],
            mul_mod(self.prefix_b[start], self.pow_b[len]),
        );
        ((a as u128) << 64) | b as u128
    }
}

/// When a scan may declare the factor set of length `n` complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SaturationRule {
    /// Complete once `(m - 1) n + 1` distinct factors are seen, the complexity
    /// of an Arnoux-Rauzy word on `m` letters.
    ArnouxRauzy,
    /// Complete once the given number of distinct factors is seen.
    Target(usize),
    /// Scan exactly this many windows; completeness is never certified.
    FixedScan(usize),
}

impl SaturationRule {
    pub fn target(self, n: usize, alphabet_size: usize) -> Option<usize> {
        match self {
            SaturationRule::ArnouxRauzy => Some((alphabet_size - 1) * n + 1),
            SaturationRule::Target(t) => Some(t),
            SaturationRule::FixedScan(_) => None,
        }
    }
}

/// Default number of window positions scanned before giving up on saturation.
pub fn default_scan_cap(n: usize) -> usize {
    64 * n + 4096
}

/// Scan limits shared by every per-length analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub rule: SaturationRule,
    /// Overrides [`default_scan_cap`] when set.
    pub cap: Option<usize>,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            rule: SaturationRule::ArnouxRauzy,
            cap: None,
        }
    }
}

impl ScanConfig {
    pub fn cap_for(&self, n: usize) -> usize {
        match self.rule {
            SaturationRule::FixedScan(windows) => windows,
            _ => self.cap.unwrap_or_else(|| default_scan_cap(n)),
        }
    }

    /// Buffer length needed to run every scan up to length `n_max` to its cap.
    pub fn required_len(&self, n_max: usize) -> usize {
        n_max + self.cap_for(n_max)
    }
}

/// The distinct factors of one length, each recorded at its first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorScan {
    pub n: usize,
    /// First-occurrence positions, in increasing order.
    pub first_positions: Vec<usize>,
    /// Number of window positions examined.
    pub windows_scanned: usize,
    pub target: Option<usize>,
    /// True iff the target was reached, so the factor set is certified complete.
    pub saturated: bool,
}

impl FactorScan {
    pub fn factor_count(&self) -> usize {
        self.first_positions.len()
    }
}

/// A buffer together with its fingerprint index. Growth takes `&mut self`;
/// every scan takes `&self`, so scans over a prepared index may run in parallel.
#[derive(Debug, Clone)]
pub struct FactorIndex {
    buffer: WordBuffer,
    fingerprints: Fingerprints,
}

impl FactorIndex {
    pub fn new(buffer: WordBuffer) -> Self {
        let fingerprints = Fingerprints::new(buffer.symbols());
        FactorIndex {
            buffer,
            fingerprints,
        }
    }

    pub fn buffer(&self) -> &WordBuffer {
        &self.buffer
    }

    pub fn into_buffer(self) -> WordBuffer {
        self.buffer
    }

    pub fn len(&self) -> usize {
        self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.buffer.is_empty()
    }

    pub fn grow_to(&mut self, min_len: usize) -> Result<()> {
        self.buffer.grow_to(min_len)?;
        self.fingerprints.extend(self.buffer.symbols());
        Ok(())
    }

    /// Grows as far as the scans up to `n_max` may need, clamped to the
    /// buffer's hard limit. Scans that then run out of buffer report a
    /// saturation failure instead of this call failing.
    pub fn prepare(&mut self, n_max: usize, config: &ScanConfig) -> Result<()> {
        let wanted = config.required_len(n_max).min(self.buffer.max_len());
        self.grow_to(wanted)
    }

    #[inline]
    pub fn fingerprint(&self, start: usize, len: usize) -> u128 {
        self.fingerprints.window(start, len)
    }

    /// Enumerates distinct factors of length `n` left to right.
    pub fn scan(&self, n: usize, config: &ScanConfig) -> FactorScan {
        let target = config.rule.target(n, self.buffer.alphabet_size());
        let cap = config.cap_for(n);
        let symbols = self.buffer.symbols();
        let available = (symbols.len() + 1).saturating_sub(n);
        let limit = cap.min(available);

        let mut first_positions = Vec::new();
        if n == 0 {
            let scanned = limit.min(1);
            if scanned == 1 {
                first_positions.push(0);
            }
            let saturated = target.is_some_and(|t| first_positions.len() >= t);
            return FactorScan {
                n,
                first_positions,
                windows_scanned: scanned,
                target,
                saturated,
            };
        }

        let mut seen: FingerprintMap<usize> = FingerprintMap::default();
        let mut collisions: Vec<(u128, usize)> = Vec::new();
        // Earlier window known to equal the previous window, if any.
        let mut prev_match: Option<usize> = None;
        let mut scanned = 0;
        let mut saturated = target == Some(0);

        for p in 0..limit {
            if saturated {
                break;
            }
            scanned = p + 1;
            let last = p + n - 1;

            if let Some(q) = prev_match {
                let candidate = q + 1;
                if candidate < p && symbols[candidate + n - 1] == symbols[last] {
                    prev_match = Some(candidate);
                    continue;
                }
            }

            let key = self.fingerprint(p, n);
            let window = &symbols[p..p + n];
            let mut found = None;
            if let Some(&q) = seen.get(&key) {
                if &symbols[q..q + n] == window {
                    found = Some(q);
                } else {
                    found = collisions
                        .iter()
                        .find(|&&(k, q)| k == key && &symbols[q..q + n] == window)
                        .map(|&(_, q)| q);
                }
            }

            match found {
                Some(q) => prev_match = Some(q),
                None => {
                    match seen.entry(key) {
                        Entry::Occupied(_) => collisions.push((key, p)),
                        Entry::Vacant(slot) => {
                            slot.insert(p);
                        }
                    }
                    first_positions.push(p);
                    prev_match = None;
                    if target.is_some_and(|t| first_positions.len() >= t) {
                        saturated = true;
                    }
                }
            }
        }

        FactorScan {
            n,
            first_positions,
            windows_scanned: scanned,
            target,
            saturated,
        }
    }

    /// Like [`FactorIndex::scan`] but fails when the factor set is not certified.
    pub fn saturated_scan(&self, n: usize, config: &ScanConfig) -> Result<FactorScan> {
        let scan = self.scan(n, config);
        if scan.saturated || matches!(config.rule, SaturationRule::FixedScan(_)) {
            Ok(scan)
        } else {
            Err(Error::Saturation {
                n,
                found: scan.factor_count(),
                target: scan.target.unwrap_or(0),
                scanned: scan.windows_scanned,
                partial: Box::new(crate::abelian::ParikhSet::from_scan(&self.buffer, &scan)),
            })
        }
    }
}
