//! Right special and bispecial factors of the Tribonacci word, the Parikh
//! neighbourhoods they induce, and the characterisations of `ρ(n) = 3`.
//!
//! Special factors are read off a saturated factor set by counting extensions:
//! the factors of length `n` determine which factors of length `n - 1` extend
//! by which letters on either side.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::abelian::{LengthProfile, ParikhSet, ParikhVector};
use crate::error::{Error, Result};
use crate::factors::{FactorIndex, FingerprintMap, ScanConfig};
use crate::numeration::tribonacci_number;
use crate::word::Morphism;

/// A point of the Parikh lattice; coordinates may be negative.
pub type Lattice = [i64; 3];

fn lattice(v: &ParikhVector) -> Lattice {
    [v.get(0) as i64, v.get(1) as i64, v.get(2) as i64]
}

fn max_norm(a: &Lattice, b: &Lattice) -> i64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).max().unwrap()
}

/// The unique right special factor of one length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialFactorRecord {
    /// Length of `word`, one less than the factor length it governs.
    pub n_minus_1: usize,
    pub word: Vec<u8>,
    /// `(i, j, k)`.
    pub parikh: Lattice,
    pub right_extensions: u8,
    pub left_extensions: u8,
    pub is_bispecial: bool,
}

impl SpecialFactorRecord {
    /// `φ(n) = n + i + j + 1` for `n = |word| + 1`.
    pub fn phi(&self) -> usize {
        self.n_minus_1 + 1 + self.parikh[0] as usize + self.parikh[1] as usize + 1
    }

    /// `φ(n)` by its definition `|τ(word)0| + 1`.
    pub fn phi_by_definition(&self) -> usize {
        let image = Morphism::tribonacci()
            .apply(&self.word)
            .expect("special factors are Tribonacci words");
        image.len() + 1 + 1
    }

    pub fn central_set(&self) -> CentralSet {
        let [i, j, k] = self.parikh;
        CentralSet {
            n: self.n_minus_1 + 1,
            vectors: [[i + 1, j, k], [i, j + 1, k], [i, j, k + 1]],
        }
    }

    pub fn b_set(&self) -> BSet {
        let [i, j, k] = self.parikh;
        BSet {
            n: self.n_minus_1 + 1,
            vectors: [
                [i - 1, j + 1, k + 1],
                [i + 1, j - 1, k + 1],
                [i + 1, j + 1, k - 1],
            ],
        }
    }
}

/// The Parikh vectors of the right special factor extended by each letter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralSet {
    pub n: usize,
    pub vectors: [Lattice; 3],
}

/// The three vectors at distance two from exactly one central vector.
/// Vectors with negative coordinates are kept; they are never realised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BSet {
    pub n: usize,
    pub vectors: [Lattice; 3],
}

impl BSet {
    pub fn meets(&self, set: &ParikhSet) -> bool {
        set.vectors
            .iter()
            .any(|v| self.vectors.contains(&lattice(v)))
    }
}

/// Everything derived from one saturated scan at length `n`: the Parikh set
/// of length `n` and the right special factor of length `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthAnalysis {
    pub profile: LengthProfile,
    pub special: SpecialFactorRecord,
}

impl LengthAnalysis {
    pub fn n(&self) -> usize {
        self.profile.n()
    }

    pub fn rho(&self) -> usize {
        self.profile.rho()
    }

    pub fn set(&self) -> &ParikhSet {
        &self.profile.set
    }

    pub fn lattice_vectors(&self) -> Vec<Lattice> {
        self.set().vectors.iter().map(lattice).collect()
    }

    pub fn central_set(&self) -> Result<CentralSet> {
        let central = self.special.central_set();
        let realised: BTreeSet<Lattice> = self.lattice_vectors().into_iter().collect();
        if let Some(missing) = central.vectors.iter().find(|v| !realised.contains(*v)) {
            return Err(Error::InvariantViolation(format!(
                "central vector {missing:?} is not a Parikh vector of length {}",
                self.n()
            )));
        }
        Ok(central)
    }

    pub fn b_set(&self) -> BSet {
        self.special.b_set()
    }

    pub fn meets_b_set(&self) -> bool {
        self.b_set().meets(self.set())
    }
}

fn tribonacci_only(index: &FactorIndex) -> Result<()> {
    if index.buffer().morphism() != &Morphism::tribonacci() {
        return Err(Error::InvalidInput(
            "special-factor analysis is defined for the Tribonacci word only".into(),
        ));
    }
    Ok(())
}

/// Groups factors by a sub-window and returns, for each group, the letters
/// seen in the remaining position. Fingerprint matches are confirmed against
/// the group's first member.
fn extension_groups(
    index: &FactorIndex,
    positions: &[usize],
    key_offset: usize,
    ext_offset: usize,
    len: usize,
) -> Vec<(usize, u32)> {
    let symbols = index.buffer().symbols();
    let same = |a: usize, b: usize| symbols[a..a + len] == symbols[b..b + len];
    let mut groups: Vec<(usize, u32)> = Vec::with_capacity(positions.len());
    let mut lookup: FingerprintMap<usize> = FingerprintMap::default();
    for &p in positions {
        let start = p + key_offset;
        let letter_bit = 1u32 << symbols[p + ext_offset];
        let key = index.fingerprint(start, len);
        let hit = match lookup.get(&key) {
            Some(&g) if same(groups[g].0, start) => Some(g),
            // Fingerprint collision: fall back to comparing every group.
            Some(_) => groups.iter().position(|&(rep, _)| same(rep, start)),
            None => None,
        };
        match hit {
            Some(g) => groups[g].1 |= letter_bit,
            None => {
                lookup.entry(key).or_insert(groups.len());
                groups.push((start, letter_bit));
            }
        }
    }
    groups
}

/// Runs one saturated scan at length `n >= 1` and derives both the Parikh
/// set of length `n` and the right special factor of length `n - 1`.
pub fn analyze_length(
    index: &FactorIndex,
    n: usize,
    config: &ScanConfig,
) -> Result<LengthAnalysis> {
    tribonacci_only(index)?;
    if n == 0 {
        return Err(Error::InvalidInput(
            "factor length must be at least 1".into(),
        ));
    }
    let scan = index.saturated_scan(n, config)?;
    let buffer = index.buffer();
    let len = n - 1;
    let alphabet = buffer.alphabet_size() as u32;

    let right = extension_groups(index, &scan.first_positions, 0, len, len);
    let special: Vec<&(usize, u32)> = right.iter().filter(|g| g.1.count_ones() >= 2).collect();
    if special.len() != 1 || special[0].1.count_ones() != alphabet {
        return Err(Error::InvariantViolation(format!(
            "expected exactly one right special factor of length {len} with {alphabet} extensions, found {:?}",
            special
                .iter()
                .map(|g| g.1.count_ones())
                .collect::<Vec<_>>()
        )));
    }
    let start = special[0].0;
    let word = buffer.symbols()[start..start + len].to_vec();

    let left = extension_groups(index, &scan.first_positions, 1, 0, len);
    let left_extensions = left
        .iter()
        .find(|g| buffer.symbols()[g.0..g.0 + len] == word[..])
        .map_or(0, |g| g.1.count_ones() as u8);

    let counts = |letter: u8| word.iter().filter(|&&s| s == letter).count() as i64;
    let record = SpecialFactorRecord {
        n_minus_1: len,
        parikh: [counts(0), counts(1), counts(2)],
        right_extensions: special[0].1.count_ones() as u8,
        left_extensions,
        is_bispecial: left_extensions >= 2,
        word,
    };
    let set = ParikhSet::from_scan(buffer, &scan);
    Ok(LengthAnalysis {
        profile: LengthProfile::from_set(set, buffer.alphabet_size()),
        special: record,
    })
}

/// Analyses for every length in `lengths`, in order.
pub fn analyze_lengths(
    index: &FactorIndex,
    lengths: std::ops::RangeInclusive<usize>,
    config: &ScanConfig,
) -> Result<Vec<LengthAnalysis>> {
    lengths
        .into_par_iter()
        .map(|n| analyze_length(index, n, config))
        .collect()
}

/// The unique right special factor of length `len`.
pub fn right_special_factor(
    index: &FactorIndex,
    len: usize,
    config: &ScanConfig,
) -> Result<SpecialFactorRecord> {
    analyze_length(index, len + 1, config).map(|a| a.special)
}

/// Central(n), checked to be realised by factors of length `n`.
pub fn central_set(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<CentralSet> {
    analyze_length(index, n, config)?.central_set()
}

pub fn b_set(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<BSet> {
    Ok(analyze_length(index, n, config)?.b_set())
}

/// `φ(n) = |τ(t^<_{n-1}) 0| + 1`.
pub fn phi(index: &FactorIndex, n: usize, config: &ScanConfig) -> Result<usize> {
    Ok(right_special_factor(index, n.saturating_sub(1), config)?.phi_by_definition())
}

/// Lengths `(T_m + T_{m+2} - 3) / 2 <= max_len` of the non-empty bispecial factors.
pub fn bispecial_lengths(max_len: usize) -> Vec<usize> {
    let mut lengths = Vec::new();
    for m in 0.. {
        let (Ok(a), Ok(b)) = (tribonacci_number(m), tribonacci_number(m + 2)) else {
            break;
        };
        let len = ((a + b - 3) / 2) as usize;
        if len > max_len {
            break;
        }
        lengths.push(len);
    }
    lengths
}

/// `n = 1` or `n = (T_m + T_{m+2} - 1) / 2` for some `m >= 0`.
pub fn rho3_closed_form(n: usize) -> bool {
    n == 1 || bispecial_lengths(n).contains(&(n.wrapping_sub(1)))
}

/// Shape of a maximal subset of the twelve-vector neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CliqueShape {
    /// Seven points: a hexagon with its centre.
    Hexagon,
    /// Six points: corners and edge midpoints of a side-2 triangle pointing
    /// away from Central(n).
    Triangle,
    /// Six points: Central(n) together with B(n).
    CentralTriangle,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clique {
    pub shape: CliqueShape,
    pub vectors: Vec<Lattice>,
}

/// The neighbourhood of Central(n) and where Ψ_t(n) sits inside it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Geometry {
    pub n: usize,
    /// Vectors of coordinate sum `n` within max-distance 2 of every central vector.
    pub neighborhood: Vec<Lattice>,
    /// All maximal subsets with pairwise max-distance at most 2.
    pub cliques: Vec<Clique>,
    /// Indices into `cliques` of the subsets containing Ψ_t(n).
    pub containing: Vec<usize>,
}

impl Geometry {
    pub fn clique_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.cliques.iter().map(|c| c.vectors.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Whether Ψ_t(n) fills a whole seven-point hexagon.
    pub fn fills_hexagon(&self, rho: usize) -> bool {
        self.containing.iter().any(|&c| {
            self.cliques[c].shape == CliqueShape::Hexagon && self.cliques[c].vectors.len() == rho
        })
    }
}

fn bron_kerbosch(adjacent: &[u16], r: u16, mut p: u16, mut x: u16, out: &mut Vec<u16>) {
    if p == 0 && x == 0 {
        out.push(r);
        return;
    }
    while p != 0 {
        let v = p.trailing_zeros() as usize;
        let bit = 1u16 << v;
        bron_kerbosch(adjacent, r | bit, p & adjacent[v], x & adjacent[v], out);
        p &= !bit;
        x |= bit;
    }
}

/// Builds the twelve-vector neighbourhood of Central(n), finds its maximal
/// pairwise-close subsets by clique search, and locates Ψ_t(n) among them.
pub fn twelve_vector_geometry(analysis: &LengthAnalysis) -> Result<Geometry> {
    let central = analysis.central_set()?;
    let center = analysis.special.parikh;
    let mut neighborhood = Vec::with_capacity(12);
    for a in -1..=2i64 {
        for b in -1..=2i64 {
            let c = 1 - a - b;
            if (-1..=2).contains(&c) {
                neighborhood.push([center[0] + a, center[1] + b, center[2] + c]);
            }
        }
    }
    debug_assert!(neighborhood
        .iter()
        .all(|v| central.vectors.iter().all(|u| max_norm(u, v) <= 2)));

    let adjacent: Vec<u16> = neighborhood
        .iter()
        .enumerate()
        .map(|(i, u)| {
            neighborhood
                .iter()
                .enumerate()
                .filter(|&(j, v)| j != i && max_norm(u, v) <= 2)
                .fold(0u16, |mask, (j, _)| mask | (1 << j))
        })
        .collect();
    let mut masks = Vec::new();
    let all = (1u16 << neighborhood.len()) - 1;
    bron_kerbosch(&adjacent, 0, all, 0, &mut masks);

    let b_vectors = analysis.b_set().vectors;
    let mut cliques: Vec<Clique> = masks
        .iter()
        .map(|&mask| {
            let vectors: Vec<Lattice> = (0..neighborhood.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| neighborhood[i])
                .collect();
            let shape = if vectors.len() == 7 {
                CliqueShape::Hexagon
            } else if b_vectors.iter().all(|b| vectors.contains(b)) {
                CliqueShape::CentralTriangle
            } else {
                CliqueShape::Triangle
            };
            Clique { shape, vectors }
        })
        .collect();
    cliques.sort_by(|a, b| (a.shape, &a.vectors).cmp(&(b.shape, &b.vectors)));

    let shapes: Vec<(CliqueShape, usize)> =
        cliques.iter().map(|c| (c.shape, c.vectors.len())).collect();
    let expected = [
        (CliqueShape::Hexagon, 7),
        (CliqueShape::Hexagon, 7),
        (CliqueShape::Hexagon, 7),
        (CliqueShape::Triangle, 6),
        (CliqueShape::Triangle, 6),
        (CliqueShape::Triangle, 6),
        (CliqueShape::CentralTriangle, 6),
    ];
    if shapes != expected {
        return Err(Error::InvariantViolation(format!(
            "unexpected maximal subsets {shapes:?}"
        )));
    }

    let realised = analysis.lattice_vectors();
    if let Some(stray) = realised.iter().find(|v| !neighborhood.contains(v)) {
        return Err(Error::InvariantViolation(format!(
            "Parikh vector {stray:?} of length {} lies outside the twelve-vector neighbourhood",
            analysis.n()
        )));
    }
    let containing: Vec<usize> = cliques
        .iter()
        .enumerate()
        .filter(|(_, c)| realised.iter().all(|v| c.vectors.contains(v)))
        .map(|(i, _)| i)
        .collect();
    if containing.is_empty() {
        return Err(Error::InvariantViolation(format!(
            "Parikh vectors of length {} fit in no pairwise-close subset",
            analysis.n()
        )));
    }
    Ok(Geometry {
        n: analysis.n(),
        neighborhood,
        cliques,
        containing,
    })
}

/// The five conditions shown equivalent for `ρ(n) = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EquivalenceRow {
    pub n: usize,
    /// Every pair of factors of length `n` is 1-balanced.
    pub one_balanced: bool,
    pub rho_is_3: bool,
    /// Ψ_t(n) ∩ B(n) = ∅.
    pub avoids_b_set: bool,
    /// A bispecial factor of length `n - 1` exists.
    pub bispecial: bool,
    pub closed_form: bool,
}

impl EquivalenceRow {
    pub fn from_analysis(analysis: &LengthAnalysis) -> Self {
        EquivalenceRow {
            n: analysis.n(),
            one_balanced: analysis.profile.max_imbalance() <= 1,
            rho_is_3: analysis.rho() == 3,
            avoids_b_set: !analysis.meets_b_set(),
            bispecial: analysis.special.is_bispecial,
            closed_form: rho3_closed_form(analysis.n()),
        }
    }

    pub fn predicates(&self) -> [bool; 5] {
        [
            self.one_balanced,
            self.rho_is_3,
            self.avoids_b_set,
            self.bispecial,
            self.closed_form,
        ]
    }

    pub fn agree(&self) -> bool {
        let p = self.predicates();
        p.iter().all(|&x| x == p[0])
    }
}

/// Checks the five predicates at every `n` in `1..=n_max`.
pub fn verify_equivalences(
    index: &FactorIndex,
    n_max: usize,
    config: &ScanConfig,
) -> Result<Vec<EquivalenceRow>> {
    let rows: Vec<EquivalenceRow> = analyze_lengths(index, 1..=n_max, config)?
        .iter()
        .map(EquivalenceRow::from_analysis)
        .collect();
    if let Some(bad) = rows.iter().find(|r| !r.agree()) {
        return Err(Error::VerificationFailure(format!(
            "n={}: predicates (1-balanced, rho=3, avoids B, bispecial, closed form) = {:?}",
            bad.n,
            bad.predicates()
        )));
    }
    Ok(rows)
}

/// If some factor of length at most `n` has at least `i + 2` zeros or `j + 2`
/// ones, or some factor of length at least `n` has at most `i - 1` zeros or
/// `j - 1` ones, then `ρ(n) > 3`. Returns false if a premise holds but the
/// conclusion fails.
pub fn imbalance_lemma_holds(analysis: &LengthAnalysis) -> bool {
    let [i, j, _] = analysis.special.parikh;
    let profile = &analysis.profile;
    // Extremes over length-n factors bound those over shorter (resp. longer) ones.
    let premise = profile.max_counts[0] as i64 >= i + 2
        || profile.max_counts[1] as i64 >= j + 2
        || (profile.min_counts[0] as i64) < i
        || (profile.min_counts[1] as i64) < j;
    !premise || analysis.rho() > 3
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{format_word, WordBuffer};

    fn index(n_max: usize) -> (FactorIndex, ScanConfig) {
        let config = ScanConfig::default();
        let mut index = FactorIndex::new(WordBuffer::tribonacci(16).unwrap());
        index.prepare(n_max, &config).unwrap();
        (index, config)
    }

    #[test]
    fn small_right_special_factors() {
        let (index, config) = index(40);
        let empty = right_special_factor(&index, 0, &config).unwrap();
        assert_eq!(empty.word, Vec::<u8>::new());
        assert_eq!(empty.parikh, [0, 0, 0]);
        assert!(empty.is_bispecial);

        let one = right_special_factor(&index, 1, &config).unwrap();
        assert_eq!(format_word(&one.word).unwrap(), "0");
        assert!(one.is_bispecial);

        let three = right_special_factor(&index, 3, &config).unwrap();
        assert_eq!(format_word(&three.word).unwrap(), "010");
        assert!(three.is_bispecial);

        let two = right_special_factor(&index, 2, &config).unwrap();
        assert!(!two.is_bispecial);
    }

    #[test]
    fn bispecial_length_formula() {
        assert_eq!(bispecial_lengths(30), vec![1, 3, 7, 14, 27]);
        assert_eq!(bispecial_lengths(0), Vec::<usize>::new());
        let buf = WordBuffer::tribonacci(5000).unwrap();
        for len in bispecial_lengths(4000) {
            let prefix = buf.slice(0, len).unwrap();
            assert!(prefix.iter().eq(prefix.iter().rev()), "length {len}");
        }
    }

    #[test]
    fn bispecial_flags_match_formula() {
        let (index, config) = index(300);
        let lengths: BTreeSet<usize> = bispecial_lengths(299).into_iter().collect();
        for len in 1..300 {
            let rec = right_special_factor(&index, len, &config).unwrap();
            assert_eq!(rec.is_bispecial, lengths.contains(&len), "len {len}");
            assert_eq!(rec.right_extensions, 3);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert!(rho3_closed_form(1));
        assert!(rho3_closed_form(2));
        assert!(!rho3_closed_form(30));
        let hits: Vec<usize> = (1..=30).filter(|&n| rho3_closed_form(n)).collect();
        assert_eq!(hits, vec![1, 2, 4, 8, 15, 28]);
    }

    #[test]
    fn central_and_b_sets_at_one() {
        let (index, config) = index(10);
        let central = central_set(&index, 1, &config).unwrap();
        assert_eq!(central.vectors, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let b = b_set(&index, 1, &config).unwrap();
        assert_eq!(b.vectors, [[-1, 1, 1], [1, -1, 1], [1, 1, -1]]);
        let four = analyze_length(&index, 4, &config).unwrap();
        assert_eq!(four.rho(), 3);
        assert!(!four.meets_b_set());
    }

    #[test]
    fn phi_examples() {
        let (index, config) = index(20);
        assert_eq!(phi(&index, 1, &config).unwrap(), 2);
        assert_eq!(phi(&index, 2, &config).unwrap(), 4);
        for n in 1..=20 {
            let rec = right_special_factor(&index, n - 1, &config).unwrap();
            assert_eq!(rec.phi(), rec.phi_by_definition());
        }
    }

    #[test]
    fn equivalences_hold_for_small_n() {
        let (index, config) = index(60);
        let rows = verify_equivalences(&index, 60, &config).unwrap();
        let threes: Vec<usize> = rows.iter().filter(|r| r.rho_is_3).map(|r| r.n).collect();
        assert_eq!(threes, vec![1, 2, 4, 8, 15, 28, 52]);
    }

    #[test]
    fn geometry_has_twelve_vectors_and_seven_maximal_subsets() {
        let (index, config) = index(50);
        for n in 1..=50 {
            let analysis = analyze_length(&index, n, &config).unwrap();
            let geometry = twelve_vector_geometry(&analysis).unwrap();
            assert_eq!(geometry.neighborhood.len(), 12);
            assert_eq!(geometry.clique_sizes(), vec![7, 7, 7, 6, 6, 6, 6]);
            assert!(analysis.rho() <= 7);
        }
    }

    #[test]
    fn only_tribonacci_is_accepted() {
        let config = ScanConfig::default();
        let mut index = FactorIndex::new(WordBuffer::mbonacci(4, 16).unwrap());
        index.prepare(5, &config).unwrap();
        assert!(matches!(
            analyze_length(&index, 3, &config),
            Err(Error::InvalidInput(_))
        ));
    }
}
