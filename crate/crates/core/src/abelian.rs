//! Parikh vectors, Abelian complexity and balance of fixed-point words.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::factors::{FactorIndex, FactorScan, ScanConfig};
use crate::word::{Morphism, Symbol, WordBuffer};

/// Per-letter occurrence counts of a finite word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParikhVector(Vec<u32>);

impl ParikhVector {
    pub fn new(counts: Vec<u32>) -> Self {
        ParikhVector(counts)
    }

    pub fn zero(alphabet_size: usize) -> Self {
        ParikhVector(vec![0; alphabet_size])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, letter: usize) -> u32 {
        self.0[letter]
    }

    pub fn alphabet_size(&self) -> usize {
        self.0.len()
    }

    /// Length of the underlying word.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| c as u64).sum()
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub fn parikh(word: &[u8], alphabet_size: usize) -> Result<ParikhVector> {
    let mut counts = vec![0u32; alphabet_size];
    for &s in word {
        let slot = counts.get_mut(s as usize).ok_or_else(|| {
            Error::InvalidInput(format!(
                "symbol {s} outside alphabet of size {alphabet_size}"
            ))
        })?;
        *slot += 1;
    }
    Ok(ParikhVector(counts))
}

/// Parikh vector of a window, from prefix sums.
pub fn window_parikh(buffer: &WordBuffer, start: usize, len: usize) -> Result<ParikhVector> {
    buffer.check_window(start, len)?;
    Ok(window_parikh_unchecked(buffer, start, len))
}

fn window_parikh_unchecked(buffer: &WordBuffer, start: usize, len: usize) -> ParikhVector {
    ParikhVector(
        (0..buffer.alphabet_size())
            .map(|letter| buffer.window_count(letter, start, len))
            .collect(),
    )
}

/// The Parikh vectors of the factors of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParikhSet {
    pub n: usize,
    pub vectors: BTreeSet<ParikhVector>,
    /// Distinct factors of length `n` found by the scan.
    pub factor_count: usize,
    /// Whether the scan certified that every factor was seen.
    pub saturated: bool,
}

impl ParikhSet {
    pub fn from_scan(buffer: &WordBuffer, scan: &FactorScan) -> Self {
        // Few distinct vectors among many factors: allocate only for new ones.
        let mut distinct: HashSet<Vec<u32>> = HashSet::new();
        let mut counts = vec![0u32; buffer.alphabet_size()];
        for &p in &scan.first_positions {
            for (letter, slot) in counts.iter_mut().enumerate() {
                *slot = buffer.window_count(letter, p, scan.n);
            }
            if !distinct.contains(counts.as_slice()) {
                distinct.insert(counts.clone());
            }
        }
        let vectors = distinct.into_iter().map(ParikhVector).collect();
        ParikhSet {
            n: scan.n,
            vectors,
            factor_count: scan.factor_count(),
            saturated: scan.saturated,
        }
    }

    /// Abelian complexity at this length.
    pub fn rho(&self) -> usize {
        self.vectors.len()
    }

    pub fn contains(&self, v: &ParikhVector) -> bool {
        self.vectors.contains(v)
    }
}

pub fn parikh_set(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<ParikhSet> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "factor length must be at least 1".into(),
        ));
    }
    let scan = index.saturated_scan(n, config)?;
    Ok(ParikhSet::from_scan(index.buffer(), &scan))
}

pub fn abelian_complexity(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<usize> {
    parikh_set(index, n, config).map(|set| set.rho())
}

/// Everything the per-length analyses need from one saturated scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthProfile {
    pub set: ParikhSet,
    /// Minimum count of each letter over all factors of length `n`.
    pub min_counts: Vec<u32>,
    pub max_counts: Vec<u32>,
}

impl LengthProfile {
    pub fn from_set(set: ParikhSet, alphabet_size: usize) -> Self {
        let mut min_counts = vec![u32::MAX; alphabet_size];
        let mut max_counts = vec![0; alphabet_size];
        for v in &set.vectors {
            for (letter, &c) in v.counts().iter().enumerate() {
                min_counts[letter] = min_counts[letter].min(c);
                max_counts[letter] = max_counts[letter].max(c);
            }
        }
        LengthProfile {
            set,
            min_counts,
            max_counts,
        }
    }

    pub fn n(&self) -> usize {
        self.set.n
    }

    pub fn rho(&self) -> usize {
        self.set.rho()
    }

    /// Largest count difference of `letter` between two factors of length `n`.
    pub fn imbalance(&self, letter: usize) -> u32 {
        self.max_counts[letter] - self.min_counts[letter]
    }

    pub fn max_imbalance(&self) -> u32 {
        (0..self.min_counts.len())
            .map(|a| self.imbalance(a))
            .max()
            .unwrap_or(0)
    }
}

pub fn length_profile(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<LengthProfile> {
    let set = parikh_set(index, n, config)?;
    Ok(LengthProfile::from_set(set, index.buffer().alphabet_size()))
}

/// Profiles for every length in `lengths`, computed in parallel and returned in order.
pub fn length_profiles(
    index: &FactorIndex,
    lengths: std::ops::RangeInclusive<usize>,
    config: &ScanConfig,
) -> Result<Vec<LengthProfile>> {
    lengths
        .into_par_iter()
        .map(|n| length_profile(index, n, config))
        .collect()
}

/// One row of a balance table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceRow {
    pub n: usize,
    pub rho: usize,
    pub max_imbalance: Vec<u32>,
}

pub fn balance_profile(
    index: &FactorIndex,
    max_len: usize,
    config: &ScanConfig,
) -> Result<Vec<BalanceRow>> {
    let profiles = length_profiles(index, 1..=max_len, config)?;
    Ok(profiles
        .iter()
        .map(|p| BalanceRow {
            n: p.n(),
            rho: p.rho(),
            max_imbalance: (0..p.min_counts.len()).map(|a| p.imbalance(a)).collect(),
        })
        .collect())
}

/// Two equal-length windows and their counts of one letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BalanceWitness {
    pub letter: Symbol,
    pub length: usize,
    pub pos_u: usize,
    pub pos_v: usize,
    pub count_u: u32,
    pub count_v: u32,
    pub diff: u32,
}

pub fn verify_witness(
    buffer: &WordBuffer,
    letter: Symbol,
    pos_u: usize,
    pos_v: usize,
    len: usize,
) -> Result<BalanceWitness> {
    if letter.index() >= buffer.alphabet_size() {
        return Err(Error::InvalidInput(format!(
            "letter {letter} outside alphabet"
        )));
    }
    buffer.check_window(pos_u, len)?;
    buffer.check_window(pos_v, len)?;
    let count_u = buffer.window_count(letter.index(), pos_u, len);
    let count_v = buffer.window_count(letter.index(), pos_v, len);
    Ok(BalanceWitness {
        letter,
        length: len,
        pos_u,
        pos_v,
        count_u,
        count_v,
        diff: count_u.abs_diff(count_v),
    })
}

/// Smallest length `n <= max_len` at which two windows inside the first
/// `scan_len` symbols differ by at least `target_diff` occurrences of `letter`.
/// The witness lists the window with more occurrences first, each at its
/// earliest position.
pub fn imbalance_witness_search(
    buffer: &WordBuffer,
    letter: Symbol,
    target_diff: u32,
    max_len: usize,
    scan_len: usize,
) -> Result<Option<BalanceWitness>> {
    if letter.index() >= buffer.alphabet_size() {
        return Err(Error::InvalidInput(format!(
            "letter {letter} outside alphabet"
        )));
    }
    buffer.check_window(0, scan_len)?;
    let a = letter.index();
    for n in 1..=max_len.min(scan_len) {
        let (mut lo, mut lo_pos) = (u32::MAX, 0);
        let (mut hi, mut hi_pos) = (0u32, 0);
        for p in 0..=scan_len - n {
            let c = buffer.window_count(a, p, n);
            if c < lo {
                lo = c;
                lo_pos = p;
            }
            if c > hi {
                hi = c;
                hi_pos = p;
            }
        }
        if hi - lo >= target_diff {
            return Ok(Some(BalanceWitness {
                letter,
                length: n,
                pos_u: hi_pos,
                pos_v: lo_pos,
                count_u: hi,
                count_v: lo,
                diff: hi - lo,
            }));
        }
    }
    Ok(None)
}

/// True iff for every coordinate the values taken over the set form an
/// interval of consecutive integers.
pub fn coordinate_interval_check(set: &ParikhSet) -> bool {
    let Some(first) = set.vectors.iter().next() else {
        return true;
    };
    (0..first.alphabet_size()).all(|i| {
        let values: BTreeSet<u32> = set.vectors.iter().map(|v| v.get(i)).collect();
        let lo = *values.first().unwrap();
        let hi = *values.last().unwrap();
        (hi - lo) as usize + 1 == values.len()
    })
}

/// True iff every factor of length `n` is within one occurrence, letter by
/// letter, of the prefix of length `n`.
pub fn prefix_balance_check(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<bool> {
    let profile = length_profile(index, n, config)?;
    Ok(prefix_balanced(index.buffer(), &profile))
}

pub fn prefix_balanced(buffer: &WordBuffer, profile: &LengthProfile) -> bool {
    let n = profile.n();
    (0..buffer.alphabet_size()).all(|a| {
        let prefix = buffer.prefix_count(a, n);
        profile.max_counts[a].abs_diff(prefix) <= 1 && profile.min_counts[a].abs_diff(prefix) <= 1
    })
}

/// How a factor of the Tribonacci word sits around the image of its preimage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesubstitutionForm {
    /// `U = τ(u)`
    Plain,
    /// `U = 0⁻¹τ(u)`
    Drop0,
    /// `U = τ(u)0`
    Append0,
    /// `U = 0⁻¹τ(u)0`
    Drop0Append0,
}

impl DesubstitutionForm {
    fn from_flags(drop0: bool, append0: bool) -> Self {
        match (drop0, append0) {
            (false, false) => DesubstitutionForm::Plain,
            (true, false) => DesubstitutionForm::Drop0,
            (false, true) => DesubstitutionForm::Append0,
            (true, true) => DesubstitutionForm::Drop0Append0,
        }
    }

    pub fn drops_leading_zero(self) -> bool {
        matches!(
            self,
            DesubstitutionForm::Drop0 | DesubstitutionForm::Drop0Append0
        )
    }

    pub fn appends_zero(self) -> bool {
        matches!(
            self,
            DesubstitutionForm::Append0 | DesubstitutionForm::Drop0Append0
        )
    }

    /// Correction to the count of 0s relative to `τ(u)`.
    pub fn delta(self) -> i8 {
        self.appends_zero() as i8 - self.drops_leading_zero() as i8
    }
}

/// A factor `U` of the Tribonacci word written around `τ(u)`, with
/// `Ψ(U) = (|u| + delta, |u|_0, |u|_1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Desubstitution {
    pub u: Vec<u8>,
    pub form: DesubstitutionForm,
    pub delta: i8,
}

impl Desubstitution {
    /// Rebuilds the factor this desubstitution came from.
    pub fn reconstruct(&self) -> Vec<u8> {
        let image = Morphism::tribonacci()
            .apply(&self.u)
            .expect("preimage symbols are Tribonacci letters");
        let mut word = if self.form.drops_leading_zero() {
            image[1..].to_vec()
        } else {
            image
        };
        if self.form.appends_zero() {
            word.push(0);
        }
        word
    }

    /// `(|u| + delta, |u|_0, |u|_1)`.
    pub fn predicted_parikh(&self) -> ParikhVector {
        let count = |letter| self.u.iter().filter(|&&s| s == letter).count() as i64;
        let zeros = self.u.len() as i64 + self.delta as i64;
        ParikhVector(vec![zeros as u32, count(0) as u32, count(1) as u32])
    }
}

/// Cuts `word` into the blocks `01`, `02`, `0` without checking that the
/// preimage is itself a factor.
fn decode_blocks(word: &[u8]) -> Result<Desubstitution> {
    let not_factor = || Error::NotAFactor(crate::word::format_word(word).unwrap_or_default());
    if word.is_empty() {
        return Err(Error::InvalidInput(
            "cannot desubstitute the empty word".into(),
        ));
    }
    let drop0 = word[0] != 0;
    let mut extended = Vec::with_capacity(word.len() + 1);
    if drop0 {
        extended.push(0);
    }
    extended.extend_from_slice(word);

    let mut u = Vec::with_capacity(extended.len() / 2 + 1);
    let mut append0 = false;
    let mut i = 0;
    while i < extended.len() {
        if extended[i] != 0 {
            return Err(not_factor());
        }
        match extended.get(i + 1) {
            None => {
                append0 = true;
                i += 1;
            }
            Some(1) => {
                u.push(0);
                i += 2;
            }
            Some(2) => {
                u.push(1);
                i += 2;
            }
            Some(0) => {
                u.push(2);
                i += 1;
            }
            Some(_) => return Err(not_factor()),
        }
    }
    let form = DesubstitutionForm::from_flags(drop0, append0);
    Ok(Desubstitution {
        u,
        form,
        delta: form.delta(),
    })
}

const SHORT_FACTORS: [&[u8]; 9] = [
    &[],
    &[0],
    &[1],
    &[2],
    &[0, 0],
    &[0, 1],
    &[0, 2],
    &[1, 0],
    &[2, 0],
];

/// Exact membership test for the factor language of the Tribonacci word,
/// by repeated desubstitution down to length two.
pub fn is_tribonacci_factor(word: &[u8]) -> bool {
    let mut current = word.to_vec();
    loop {
        if current.len() <= 2 {
            return SHORT_FACTORS.contains(&current.as_slice());
        }
        match decode_blocks(&current) {
            Ok(d) if d.u.len() < current.len() => current = d.u,
            _ => return false,
        }
    }
}

/// Writes a non-empty factor `U` of the Tribonacci word as `τ(u)`,
/// `0⁻¹τ(u)`, `τ(u)0` or `0⁻¹τ(u)0`.
pub fn desubstitute(word: &[u8]) -> Result<Desubstitution> {
    let d = decode_blocks(word)?;
    let shrinks = word.len() < 3 || d.u.len() < word.len();
    if !shrinks || !is_tribonacci_factor(&d.u) {
        return Err(Error::NotAFactor(
            crate::word::format_word(word).unwrap_or_default(),
        ));
    }
    Ok(d)
}
