//! Morphisms over small alphabets and prefixes of their fixed points.
//!
//! Finite words are plain byte slices: each byte is one symbol, so an
//! alphabet holds at most 256 letters. The text form used on the command
//! line writes one ASCII digit per symbol (alphabets of at most ten letters).

use std::fmt;

use crate::error::{Error, Result};

/// Default upper bound on the length of a [`WordBuffer`], in symbols.
pub const DEFAULT_MAX_BUFFER: usize = 1 << 27;

/// Largest alphabet representable with one byte per symbol.
pub const MAX_ALPHABET: usize = 256;

/// A letter of an alphabet `{0, .., m-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u8);

impl Symbol {
    pub fn new(value: usize, alphabet_size: usize) -> Result<Self> {
        if value >= alphabet_size || value >= MAX_ALPHABET {
            return Err(Error::InvalidInput(format!(
                "symbol {value} outside alphabet of size {alphabet_size}"
            )));
        }
        Ok(Symbol(value as u8))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Parses the digit text form ("0102010") into a word.
pub fn parse_word(text: &str) -> Result<Vec<u8>> {
    text.bytes()
        .map(|b| match b {
            b'0'..=b'9' => Ok(b - b'0'),
            _ => Err(Error::InvalidInput(format!(
                "unexpected character {:?} in word",
                b as char
            ))),
        })
        .collect()
}

/// Formats a word in the digit text form. Symbols above 9 cannot be written.
pub fn format_word(word: &[u8]) -> Result<String> {
    word.iter()
        .map(|&s| {
            if s < 10 {
                Ok((b'0' + s) as char)
            } else {
                Err(Error::InvalidInput(format!(
                    "symbol {s} has no single-digit text form"
                )))
            }
        })
        .collect()
}

/// A substitution on the alphabet `{0, .., m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    alphabet_size: usize,
    images: Vec<Vec<u8>>,
}

impl Morphism {
    pub fn new(images: Vec<Vec<u8>>) -> Result<Self> {
        let m = images.len();
        if !(2..=MAX_ALPHABET).contains(&m) {
            return Err(Error::InvalidInput(format!(
                "alphabet size must be in 2..={MAX_ALPHABET}, got {m}"
            )));
        }
        for (letter, image) in images.iter().enumerate() {
            if let Some(&bad) = image.iter().find(|&&s| s as usize >= m) {
                return Err(Error::InvalidInput(format!(
                    "image of {letter} contains symbol {bad} outside alphabet of size {m}"
                )));
            }
        }
        Ok(Morphism {
            alphabet_size: m,
            images,
        })
    }

    /// The m-bonacci substitution: `i -> 0(i+1)` for `i < m-1` and `m-1 -> 0`.
    pub fn mbonacci(m: usize) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&m) {
            return Err(Error::InvalidInput(format!(
                "m-bonacci order must be in 2..={MAX_ALPHABET}, got {m}"
            )));
        }
        let images = (0..m)
            .map(|i| {
                if i + 1 < m {
                    vec![0, (i + 1) as u8]
                } else {
                    vec![0]
                }
            })
            .collect();
        Morphism::new(images)
    }

    /// `0 -> 01, 1 -> 02, 2 -> 0`.
    pub fn tribonacci() -> Self {
        Morphism::mbonacci(3).expect("order 3 is valid")
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn image(&self, letter: Symbol) -> &[u8] {
        &self.images[letter.index()]
    }

    pub fn images(&self) -> &[Vec<u8>] {
        &self.images
    }

    pub fn apply(&self, word: &[u8]) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(word.len() * 2);
        for &s in word {
            let image = self.images.get(s as usize).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "symbol {s} outside alphabet of size {}",
                    self.alphabet_size
                ))
            })?;
            out.extend_from_slice(image);
        }
        Ok(out)
    }

    /// `k`-fold application to a single letter.
    pub fn iterate(&self, seed: Symbol, k: usize) -> Result<Vec<u8>> {
        let mut word = vec![seed.value()];
        for _ in 0..k {
            word = self.apply(&word)?;
        }
        Ok(word)
    }

    pub fn is_prolongable(&self, seed: Symbol) -> bool {
        let image = self.image(seed);
        image.len() >= 2 && image[0] == seed.value()
    }

    pub fn incidence_matrix(&self) -> IncidenceMatrix {
        let m = self.alphabet_size;
        let mut entries = vec![0u64; m * m];
        for (j, image) in self.images.iter().enumerate() {
            for &i in image {
                entries[i as usize * m + j] += 1;
            }
        }
        IncidenceMatrix { size: m, entries }
    }
}

/// Entry `(i, j)` counts occurrences of letter `i` in the image of letter `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    size: usize,
    entries: Vec<u64>,
}

impl IncidenceMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.size + col]
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries
            .chunks(self.size)
            .map(<[u64]>::to_vec)
            .collect()
    }

    pub fn column_sum(&self, col: usize) -> u64 {
        (0..self.size).map(|row| self.get(row, col)).sum()
    }

    /// Matrix-vector product over letter counts.
    pub fn apply(&self, counts: &[u64]) -> Vec<u64> {
        assert_eq!(
            counts.len(),
            self.size,
            "vector length must match matrix size"
        );
        (0..self.size)
            .map(|row| {
                (0..self.size)
                    .map(|col| self.get(row, col) * counts[col])
                    .sum()
            })
            .collect()
    }
}

/// An append-only prefix of the fixed point of a prolongable morphism, with
/// per-letter prefix sums for constant-time window counts.
#[derive(Debug, Clone)]
pub struct WordBuffer {
    morphism: Morphism,
    seed: Symbol,
    symbols: Vec<u8>,
    // prefix_counts[i][p] = occurrences of letter i in symbols[..p]
    prefix_counts: Vec<Vec<u32>>,
    max_len: usize,
}

impl WordBuffer {
    /// Builds a buffer holding at least `min_len` symbols of the fixed point
    /// starting with `seed`.
    pub fn fixed_point_prefix(morphism: Morphism, seed: Symbol, min_len: usize) -> Result<Self> {
        Self::with_limit(morphism, seed, min_len, DEFAULT_MAX_BUFFER)
    }

    pub fn with_limit(
        morphism: Morphism,
        seed: Symbol,
        min_len: usize,
        max_len: usize,
    ) -> Result<Self> {
        if seed.index() >= morphism.alphabet_size() {
            return Err(Error::InvalidInput(format!(
                "seed {seed} outside alphabet of size {}",
                morphism.alphabet_size()
            )));
        }
        if !morphism.is_prolongable(seed) {
            return Err(Error::Configuration(format!(
                "morphism is not prolongable at {seed}: its image must start with {seed} and have length at least 2"
            )));
        }
        if min_len == 0 {
            return Err(Error::InvalidInput(
                "minimum length must be at least 1".into(),
            ));
        }
        if max_len > u32::MAX as usize {
            return Err(Error::Configuration(format!(
                "maximum buffer length {max_len} exceeds the prefix-count range"
            )));
        }
        let m = morphism.alphabet_size();
        let mut buffer = WordBuffer {
            morphism,
            seed,
            symbols: vec![seed.value()],
            prefix_counts: vec![vec![0]; m],
            max_len,
        };
        buffer.extend_counts(0);
        buffer.grow_to(min_len)?;
        Ok(buffer)
    }

    /// The Tribonacci word, seeded at 0.
    pub fn tribonacci(min_len: usize) -> Result<Self> {
        Self::fixed_point_prefix(Morphism::tribonacci(), Symbol(0), min_len)
    }

    /// The m-bonacci word, seeded at 0.
    pub fn mbonacci(m: usize, min_len: usize) -> Result<Self> {
        Self::fixed_point_prefix(Morphism::mbonacci(m)?, Symbol(0), min_len)
    }

    /// Grows the buffer to at least `min_len` symbols by substituting the whole
    /// current prefix, then truncating. Never shrinks.
    pub fn grow_to(&mut self, min_len: usize) -> Result<()> {
        if min_len <= self.symbols.len() {
            return Ok(());
        }
        if min_len > self.max_len {
            return Err(Error::BufferLimit {
                requested: min_len,
                limit: self.max_len,
            });
        }
        let old_len = self.symbols.len();
        let mut word = std::mem::take(&mut self.symbols);
        while word.len() < min_len {
            word = self.morphism.apply(&word)?;
        }
        word.truncate(min_len);
        self.symbols = word;
        self.extend_counts(old_len);
        Ok(())
    }

    fn extend_counts(&mut self, from: usize) {
        let len = self.symbols.len();
        for (letter, counts) in self.prefix_counts.iter_mut().enumerate() {
            counts.reserve(len + 1 - counts.len());
            let mut acc = counts[from];
            for &s in &self.symbols[from..] {
                acc += (s as usize == letter) as u32;
                counts.push(acc);
            }
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn alphabet_size(&self) -> usize {
        self.morphism.alphabet_size()
    }

    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    pub fn seed(&self) -> Symbol {
        self.seed
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn symbol(&self, pos: usize) -> u8 {
        self.symbols[pos]
    }

    pub fn check_window(&self, start: usize, len: usize) -> Result<()> {
        match start.checked_add(len) {
            Some(end) if end <= self.symbols.len() => Ok(()),
            _ => Err(Error::Range {
                start,
                len,
                buffer_len: self.symbols.len(),
            }),
        }
    }

    /// The factor of length `len` starting at `start`.
    pub fn slice(&self, start: usize, len: usize) -> Result<&[u8]> {
        self.check_window(start, len)?;
        Ok(&self.symbols[start..start + len])
    }

    /// Occurrences of `letter` among the first `len` symbols.
    pub fn prefix_count(&self, letter: usize, len: usize) -> u32 {
        self.prefix_counts[letter][len]
    }

    /// Occurrences of `letter` in the window `[start, start + len)`, unchecked.
    #[inline]
    pub fn window_count(&self, letter: usize, start: usize, len: usize) -> u32 {
        let counts = &self.prefix_counts[letter];
        counts[start + len] - counts[start]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str) -> Vec<u8> {
        parse_word(text).unwrap()
    }

    #[test]
    fn tribonacci_images() {
        let tau = Morphism::tribonacci();
        assert_eq!(tau.apply(&w("0")).unwrap(), w("01"));
        assert_eq!(tau.apply(&[]).unwrap(), Vec::<u8>::new());
        assert_eq!(tau.apply(&w("01")).unwrap(), w("0102"));
    }

    #[test]
    fn apply_rejects_foreign_symbols() {
        let tau = Morphism::tribonacci();
        assert!(matches!(tau.apply(&[0, 3]), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn mbonacci_images() {
        let images = |m| Morphism::mbonacci(m).unwrap().images().to_vec();
        assert_eq!(images(3), vec![w("01"), w("02"), w("0")]);
        assert_eq!(images(2), vec![w("01"), w("0")]);
        assert_eq!(images(4), vec![w("01"), w("02"), w("03"), w("0")]);
        assert_eq!(Morphism::mbonacci(3).unwrap(), Morphism::tribonacci());
        assert!(matches!(Morphism::mbonacci(1), Err(Error::InvalidInput(_))));
        assert!(Morphism::mbonacci(257).is_err());
    }

    #[test]
    fn incidence_matrices() {
        let m = Morphism::tribonacci().incidence_matrix();
        assert_eq!(m.rows(), vec![vec![1, 1, 1], vec![1, 0, 0], vec![0, 1, 0]]);

        let identity = Morphism::new(vec![w("0"), w("1"), w("2")]).unwrap();
        assert_eq!(
            identity.incidence_matrix().rows(),
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );

        let m4 = Morphism::mbonacci(4).unwrap().incidence_matrix();
        assert_eq!(
            m4.rows(),
            vec![
                vec![1, 1, 1, 1],
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 0, 1, 0]
            ]
        );
        for j in 0..4 {
            assert_eq!(
                m4.column_sum(j),
                Morphism::mbonacci(4).unwrap().images()[j].len() as u64
            );
        }
    }

    #[test]
    fn fixed_point_prefixes() {
        let buf = WordBuffer::tribonacci(14).unwrap();
        assert_eq!(
            format_word(buf.slice(0, 14).unwrap()).unwrap(),
            "01020100102010"
        );
        let one = WordBuffer::tribonacci(1).unwrap();
        assert_eq!(one.symbols(), &[0]);
        let seven = WordBuffer::tribonacci(7).unwrap();
        assert_eq!(
            seven.symbols(),
            Morphism::tribonacci().iterate(Symbol(0), 3).unwrap()
        );
    }

    #[test]
    fn non_prolongable_is_a_configuration_error() {
        let tau = Morphism::tribonacci();
        assert!(matches!(
            WordBuffer::fixed_point_prefix(tau.clone(), Symbol(1), 5),
            Err(Error::Configuration(_))
        ));
        let identity = Morphism::new(vec![w("0"), w("1")]).unwrap();
        assert!(matches!(
            WordBuffer::fixed_point_prefix(identity, Symbol(0), 5),
            Err(Error::Configuration(_))
        ));
    }

    #[test]
    fn buffer_limit_is_enforced() {
        let err = WordBuffer::with_limit(Morphism::tribonacci(), Symbol(0), 100, 50).unwrap_err();
        assert!(matches!(
            err,
            Error::BufferLimit {
                requested: 100,
                limit: 50
            }
        ));
    }

    #[test]
    fn slices() {
        let buf = WordBuffer::tribonacci(20).unwrap();
        assert_eq!(buf.slice(0, 7).unwrap(), w("0102010").as_slice());
        assert_eq!(buf.slice(0, 0).unwrap(), &[] as &[u8]);
        assert_eq!(buf.slice(3, 4).unwrap(), w("2010").as_slice());
        assert!(matches!(buf.slice(18, 3), Err(Error::Range { .. })));
        assert!(matches!(buf.slice(usize::MAX, 2), Err(Error::Range { .. })));
    }

    #[test]
    fn growth_keeps_prefix_and_counts() {
        let mut buf = WordBuffer::tribonacci(10).unwrap();
        let before = buf.symbols().to_vec();
        buf.grow_to(1000).unwrap();
        assert_eq!(buf.len(), 1000);
        assert_eq!(&buf.symbols()[..10], before.as_slice());
        for n in [0, 1, 17, 500, 1000] {
            let total: u32 = (0..3).map(|i| buf.prefix_count(i, n)).sum();
            assert_eq!(total as usize, n);
        }
    }

    #[test]
    fn text_form() {
        assert_eq!(parse_word("0102").unwrap(), vec![0, 1, 0, 2]);
        assert!(parse_word("01a").is_err());
        assert!(format_word(&[12]).is_err());
    }
}
