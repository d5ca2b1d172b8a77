//! Eigendata of the Tribonacci incidence matrix and the discrepancy bounds
//! that follow from it.
//!
//! The count of letter `i` in a prefix of length `N` deviates from
//! `N · β^{-(i+1)}` by
//!
//! ```text
//! Σ_k 2 p_k Re(a_α (α^{-(i+1)} - β^{-(i+1)}) α^k)
//! ```
//!
//! where `p_k` are the Zeckendorf-Tribonacci digits of `N`. Splitting that sum
//! at a cutoff `K` into a head (digits chosen freely) and a geometric tail
//! gives an interval `(A, B)` for the deviation, and an interval of width
//! `B - A` bounds the imbalance of equal-length windows by the largest
//! integer strictly below `2 (B - A)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeration::zeckendorf_encode;
use crate::word::WordBuffer;

/// Newton residual tolerance used by [`SpectralData::standard`].
pub const NEWTON_TOLERANCE: f64 = 1e-14;
const NEWTON_MAX_ITERATIONS: usize = 100;

/// The real root `β` of `x³ - x² - x - 1`, one complex root `α`, the
/// eigenvectors normalised to coordinate sum one, and the coefficients of
/// `e_1` in that eigenbasis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralData {
    pub beta: f64,
    /// The root with positive imaginary part.
    pub alpha: Complex64,
    pub v_beta: [f64; 3],
    pub v_alpha: [Complex64; 3],
    pub a_beta: f64,
    pub a_alpha: Complex64,
}

fn cubic(x: f64) -> f64 {
    ((x - 1.0) * x - 1.0) * x - 1.0
}

fn det3(m: &[[Complex64; 3]; 3]) -> Complex64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Cramer's rule on a 3x3 complex system given by its columns.
fn solve3(columns: [[Complex64; 3]; 3], rhs: [Complex64; 3]) -> Result<[Complex64; 3]> {
    let rows = |cols: &[[Complex64; 3]; 3]| {
        let mut m = [[Complex64::new(0.0, 0.0); 3]; 3];
        for (c, col) in cols.iter().enumerate() {
            for (r, &value) in col.iter().enumerate() {
                m[r][c] = value;
            }
        }
        m
    };
    let det = det3(&rows(&columns));
    if det.norm() < 1e-300 {
        return Err(Error::Numeric("singular eigenbasis".into()));
    }
    let mut solution = [Complex64::new(0.0, 0.0); 3];
    for (k, slot) in solution.iter_mut().enumerate() {
        let mut replaced = columns;
        replaced[k] = rhs;
        *slot = det3(&rows(&replaced)) / det;
    }
    Ok(solution)
}

impl SpectralData {
    pub fn compute(tolerance: f64) -> Result<Self> {
        if !(tolerance > 0.0) {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive, got {tolerance}"
            )));
        }
        let mut beta = 2.0f64;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITERATIONS {
            let derivative = (3.0 * beta - 2.0) * beta - 1.0;
            beta -= cubic(beta) / derivative;
            if cubic(beta).abs() < tolerance {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Numeric(format!(
                "Newton iteration for β did not reach residual {tolerance} in {NEWTON_MAX_ITERATIONS} steps"
            )));
        }

        // x³ - x² - x - 1 = (x - β)(x² + (β - 1)x + (β² - β - 1))
        let b = beta - 1.0;
        let c = beta * beta - beta - 1.0;
        let discriminant = b * b - 4.0 * c;
        if discriminant >= 0.0 {
            return Err(Error::Numeric("deflated quadratic has real roots".into()));
        }
        let alpha = Complex64::new(-b / 2.0, (-discriminant).sqrt() / 2.0);

        let v_beta = [beta.powi(-1), beta.powi(-2), beta.powi(-3)];
        let v_alpha = [alpha.powi(-1), alpha.powi(-2), alpha.powi(-3)];
        let real = |x: f64| Complex64::new(x, 0.0);
        let columns = [v_beta.map(real), v_alpha, v_alpha.map(|z| z.conj())];
        let [a_beta, a_alpha, a_alpha_bar] = solve3(columns, [real(1.0), real(0.0), real(0.0)])?;
        let scale = a_alpha.norm().max(1.0);
        if a_beta.im.abs() > 1e-9 || (a_alpha_bar - a_alpha.conj()).norm() > 1e-9 * scale {
            return Err(Error::Numeric(
                "eigenbasis coefficients are not conjugate-symmetric".into(),
            ));
        }

        Ok(SpectralData {
            beta,
            alpha,
            v_beta,
            v_alpha,
            a_beta: a_beta.re,
            a_alpha,
        })
    }

    /// Eigendata at the default Newton tolerance.
    pub fn standard() -> Result<Self> {
        Self::compute(NEWTON_TOLERANCE)
    }

    pub fn abs_alpha(&self) -> f64 {
        self.alpha.norm()
    }

    pub fn abs_a_alpha(&self) -> f64 {
        self.a_alpha.norm()
    }

    /// `α^{-(i+1)} - β^{-(i+1)}`, the `i`-th coordinate of `v_α - v_β`.
    pub fn eigen_gap(&self, letter: usize) -> Complex64 {
        self.v_alpha[letter] - self.v_beta[letter]
    }

    /// `|α^{-(i+1)} - β^{-(i+1)}|`.
    pub fn gap_magnitude(&self, letter: usize) -> f64 {
        self.eigen_gap(letter).norm()
    }

    /// Term `k` of the discrepancy series for `letter`, without the digit.
    pub fn series_term(&self, letter: usize, k: usize) -> f64 {
        2.0 * (self.a_alpha * self.eigen_gap(letter) * self.alpha.powi(k as i32)).re
    }
}

fn check_letter(letter: usize) -> Result<()> {
    if letter < 3 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "letter {letter} is not a Tribonacci letter"
        )))
    }
}

pub fn compute_spectral_data(tolerance: f64) -> Result<SpectralData> {
    SpectralData::compute(tolerance)
}

/// Frequency of `letter` in the Tribonacci word, `β^{-(letter+1)}`.
pub fn letter_frequency(sd: &SpectralData, letter: usize) -> f64 {
    sd.v_beta[letter]
}

/// `|u_0 .. u_{N-1}|_i - N β^{-(i+1)}` counted on the buffer.
pub fn discrepancy_direct(
    buffer: &WordBuffer,
    n: usize,
    letter: usize,
    sd: &SpectralData,
) -> Result<f64> {
    check_letter(letter)?;
    buffer.check_window(0, n)?;
    Ok(buffer.prefix_count(letter, n) as f64 - n as f64 * letter_frequency(sd, letter))
}

/// The same deviation evaluated from the Zeckendorf digits of `N`.
pub fn discrepancy_spectral(n: u64, letter: usize, sd: &SpectralData) -> Result<f64> {
    check_letter(letter)?;
    let rep = zeckendorf_encode(n);
    let coefficient = sd.a_alpha * sd.eigen_gap(letter);
    let mut power = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for &digit in rep.digits() {
        if digit == 1 {
            sum += power;
        }
        power *= sd.alpha;
    }
    Ok(2.0 * (coefficient * sum).re)
}

/// Extremes of the head sum `Σ_{k<=K} 2 p_k Re(..)`. Unconstrained digits
/// take every positive (resp. negative) term; constrained digits range over
/// the valid Zeckendorf strings of length `K + 1`.
pub fn head_extremes(
    sd: &SpectralData,
    letter: usize,
    cutoff: usize,
    constrained: bool,
) -> (f64, f64) {
    let terms: Vec<f64> = (0..=cutoff).map(|k| sd.series_term(letter, k)).collect();
    if !constrained {
        let lo = terms.iter().filter(|&&t| t < 0.0).sum();
        let hi = terms.iter().filter(|&&t| t > 0.0).sum();
        return (lo, hi);
    }
    let mut extremes = (f64::INFINITY, f64::NEG_INFINITY);
    enumerate_valid(&terms, 0, 0, 0.0, &mut extremes);
    extremes
}

// Walks every valid digit string; `run` is the number of trailing ones.
fn enumerate_valid(terms: &[f64], k: usize, run: u8, sum: f64, extremes: &mut (f64, f64)) {
    if k == terms.len() {
        extremes.0 = extremes.0.min(sum);
        extremes.1 = extremes.1.max(sum);
        return;
    }
    enumerate_valid(terms, k + 1, 0, sum, extremes);
    if run < 2 {
        enumerate_valid(terms, k + 1, run + 1, sum + terms[k], extremes);
    }
}

/// Bound on the tail `Σ_{k>K}`: `2|a_α| |α^{-(i+1)} - β^{-(i+1)}| |α|^{K+1} / (1 - |α|)`.
pub fn tail_cap(sd: &SpectralData, letter: usize, cutoff: usize) -> f64 {
    let r = sd.abs_alpha();
    2.0 * sd.abs_a_alpha() * sd.gap_magnitude(letter) * r.powi(cutoff as i32 + 1) / (1.0 - r)
}

/// Largest integer strictly below `2 (B - A)`.
///
/// `2 (B - A)` values within `1e-9` of an integer are treated as that integer,
/// so decimal interval ends like `0.725` and `-0.775` are not misjudged by
/// binary rounding.
pub fn balance_bound_from_interval(lower: f64, upper: f64) -> Result<u32> {
    if !(lower < upper) {
        return Err(Error::InvalidInput(format!(
            "interval lower end {lower} must be below upper end {upper}"
        )));
    }
    let width = 2.0 * (upper - lower);
    let nearest = width.round();
    let bound = if (width - nearest).abs() < 1e-9 {
        nearest - 1.0
    } else {
        width.floor()
    };
    Ok(bound.max(0.0) as u32)
}

/// `A < deviation < B` for one letter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyInterval {
    pub letter: usize,
    pub lower: f64,
    pub upper: f64,
}

impl DiscrepancyInterval {
    pub fn contains_interval(&self, lower: f64, upper: f64) -> bool {
        self.lower < lower && upper < self.upper
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower < x && x < self.upper
    }
}

/// One letter's bound: head cutoff, claimed head and tail bounds, and the
/// interval the deviation is claimed to stay in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProofStep {
    pub letter: usize,
    pub cutoff: usize,
    pub head_lower: f64,
    pub head_upper: f64,
    pub tail_bound: f64,
    pub gap_magnitude: f64,
    pub interval: DiscrepancyInterval,
}

/// Cutoffs and target bounds of the three letter-by-letter estimates.
pub const PROOF_PLAN: [ProofStep; 3] = [
    ProofStep {
        letter: 0,
        cutoff: 7,
        head_lower: -0.42,
        head_upper: 0.73,
        tail_bound: 0.17,
        gap_magnitude: 1.72457,
        interval: DiscrepancyInterval {
            letter: 0,
            lower: -0.6,
            upper: 0.9,
        },
    },
    ProofStep {
        letter: 1,
        cutoff: 10,
        head_lower: -0.70,
        head_upper: 0.65,
        tail_bound: 0.075,
        gap_magnitude: 1.96298,
        interval: DiscrepancyInterval {
            letter: 1,
            lower: -0.775,
            upper: 0.725,
        },
    },
    ProofStep {
        letter: 2,
        cutoff: 13,
        head_lower: -0.8371,
        head_upper: 0.5764,
        tail_bound: 0.0354,
        gap_magnitude: 2.33887,
        interval: DiscrepancyInterval {
            letter: 2,
            lower: -0.88,
            upper: 0.62,
        },
    },
];

/// A recomputed letter bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundDerivation {
    pub letter: usize,
    pub cutoff: usize,
    pub head_unconstrained: (f64, f64),
    pub head_constrained: (f64, f64),
    pub tail_cap: f64,
    /// `[head_min - tail_cap, head_max + tail_cap]` from the unconstrained head.
    pub interval: DiscrepancyInterval,
    pub balance_bound: u32,
}

pub fn derive_bound(sd: &SpectralData, step: &ProofStep) -> Result<BoundDerivation> {
    let letter = step.letter;
    let head_unconstrained = head_extremes(sd, letter, step.cutoff, false);
    let head_constrained = head_extremes(sd, letter, step.cutoff, true);
    let cap = tail_cap(sd, letter, step.cutoff);
    let lower = head_unconstrained.0 - cap;
    let upper = head_unconstrained.1 + cap;
    if !step.interval.contains_interval(lower, upper) {
        return Err(Error::VerificationFailure(format!(
            "letter {letter}: derived interval [{lower:.6}, {upper:.6}] not inside ({}, {})",
            step.interval.lower, step.interval.upper
        )));
    }
    let balance_bound = balance_bound_from_interval(step.interval.lower, step.interval.upper)?;
    Ok(BoundDerivation {
        letter,
        cutoff: step.cutoff,
        head_unconstrained,
        head_constrained,
        tail_cap: cap,
        interval: DiscrepancyInterval {
            letter,
            lower,
            upper,
        },
        balance_bound,
    })
}

/// Re-derives the three letter bounds and their balance consequence.
pub fn derive_balance_proof(sd: &SpectralData) -> Result<Vec<BoundDerivation>> {
    PROOF_PLAN
        .iter()
        .map(|step| derive_bound(sd, step))
        .collect()
}

/// Checks a constant against a 5-decimal truncation: the value
/// must lie within `5e-6` of the middle of `[printed, printed + 1e-5)`.
pub fn matches_truncated(value: f64, printed: f64) -> bool {
    (value - (printed + 5e-6)).abs() <= 5e-6
}
