// SPDX-License-Identifier: Apache-2.0

//! Pauli strings in symplectic form and complex-weighted sums of them.
//!
//! A string stores one bit per qubit in an x-mask and a z-mask (bit `q` is
//! qubit `q`), with the letters `X = (1,0)`, `Z = (0,1)` and `Y = (1,1)`, plus
//! a global factor `i^phase`. The letter `Y` denotes the Pauli matrix itself,
//! so a string with phase 0 is exactly the tensor product of its letters.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;

use crate::dense::{check_cap, DenseOperator, DEFAULT_QUBIT_CAP};
use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    fn bits(self) -> (bool, bool) {
        match self {
            Letter::I => (false, false),
            Letter::X => (true, false),
            Letter::Y => (true, true),
            Letter::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (true, true) => Letter::Y,
            (false, true) => Letter::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    num_qubits: usize,
    x: u64,
    z: u64,
    phase: u8,
}

fn qubit_mask(num_qubits: usize) -> u64 {
    if num_qubits == 64 {
        u64::MAX
    } else {
        (1u64 << num_qubits) - 1
    }
}

impl PauliString {
    pub fn identity(num_qubits: usize) -> Self {
        assert!(num_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            num_qubits,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    /// Builds a string from raw masks. Bits above `num_qubits` must be clear.
    pub fn from_masks(num_qubits: usize, x: u64, z: u64, phase: u8) -> Self {
        assert!(num_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mask = qubit_mask(num_qubits);
        assert!(
            x & !mask == 0 && z & !mask == 0,
            "mask bits beyond qubit count"
        );
        Self {
            num_qubits,
            x,
            z,
            phase: phase % 4,
        }
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut s = Self::identity(letters.len());
        for (q, &l) in letters.iter().enumerate() {
            s.set_letter(q, l);
        }
        s
    }

    /// Single-qubit letter embedded at `qubit`.
    pub fn single(num_qubits: usize, qubit: usize, letter: Letter) -> Self {
        assert!(qubit < num_qubits);
        let mut s = Self::identity(num_qubits);
        s.set_letter(qubit, letter);
        s
    }

    /// Z on every listed qubit.
    pub fn z_on(num_qubits: usize, qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::identity(num_qubits);
        for q in qubits {
            assert!(q < num_qubits);
            s.z |= 1 << q;
        }
        s
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn phase_power(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> Complex64 {
        i_pow(self.phase)
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        Letter::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set_letter(&mut self, qubit: usize, letter: Letter) {
        assert!(qubit < self.num_qubits);
        let (x, z) = letter.bits();
        let bit = 1u64 << qubit;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
    }

    pub fn letters(&self) -> Vec<Letter> {
        (0..self.num_qubits).map(|q| self.letter(q)).collect()
    }

    pub fn weight(&self) -> usize {
        (self.x | self.z).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.num_qubits)
            .filter(|&q| (self.x | self.z) >> q & 1 == 1)
            .collect()
    }

    /// True when every letter is I or Z.
    pub fn is_diagonal(&self) -> bool {
        self.x == 0
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// The same letters with phase 0.
    pub fn without_phase(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self {
            phase: phase % 4,
            ..*self
        }
    }

    fn check_same_width(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(())
    }

    /// Exact product `self · other`, phase included.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let (px1, py1, pz1) = (x1 & !z1, x1 & z1, !x1 & z1);
        let (px2, py2, pz2) = (x2 & !z2, x2 & z2, !x2 & z2);
        // XY = iZ, YZ = iX, ZX = iY and the reversed orders give -i.
        let plus = (px1 & py2) | (py1 & pz2) | (pz1 & px2);
        let minus = (py1 & px2) | (pz1 & py2) | (px1 & pz2);
        let k = self.phase as i64 + other.phase as i64 + plus.count_ones() as i64
            - minus.count_ones() as i64;
        Ok(Self {
            num_qubits: self.num_qubits,
            x: x1 ^ x2,
            z: z1 ^ z2,
            phase: k.rem_euclid(4) as u8,
        })
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_width(other)?;
        let anti = (self.x & other.z) ^ (self.z & other.x);
        Ok(anti.count_ones().is_multiple_of(2))
    }

    /// Hermitian adjoint: letters are Hermitian, so only the phase conjugates.
    pub fn adjoint(&self) -> Self {
        Self {
            phase: (4 - self.phase) % 4,
            ..*self
        }
    }

    /// Letters only, qubit 0 leftmost.
    pub fn letter_string(&self) -> String {
        self.letters().iter().map(|l| l.as_char()).collect()
    }

    pub fn to_dense(&self) -> Result<DenseOperator> {
        self.to_dense_capped(DEFAULT_QUBIT_CAP)
    }

    pub fn to_dense_capped(&self, cap: usize) -> Result<DenseOperator> {
        let mut sum = PauliSum::new(self.num_qubits);
        sum.add_term(*self, Complex64::new(1.0, 0.0));
        sum.to_dense_capped(self.num_qubits, cap)
    }

    /// Column permutation and phase for basis index `col` (qubit 0 is the most
    /// significant bit): returns `(row, factor)` with `P|col> = factor |row>`.
    pub(crate) fn apply_to_basis(&self, col: usize) -> (usize, Complex64) {
        let m = self.num_qubits;
        let mut row = col;
        let mut k = self.phase as u32;
        for q in 0..m {
            let shift = m - 1 - q;
            let bit = (col >> shift) & 1;
            match self.letter(q) {
                Letter::I => {}
                Letter::X => row ^= 1 << shift,
                Letter::Z => k += 2 * bit as u32,
                Letter::Y => {
                    row ^= 1 << shift;
                    k += 1 + 2 * bit as u32;
                }
            }
        }
        (row, i_pow((k % 4) as u8))
    }
}

pub(crate) fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i^{} · {}", self.phase, self.letter_string())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Accepts bare letters (`"XZIY"`) or the rendered form (`"i^1 · XZIY"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (phase, body) = match s.strip_prefix("i^") {
            Some(rest) => {
                let (k, body) = rest
                    .split_once('·')
                    .ok_or_else(|| Error::InvalidGate(format!("malformed Pauli string {s:?}")))?;
                let k: u8 = k
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidGate(format!("malformed phase in {s:?}")))?;
                (k, body.trim())
            }
            None => (0, s),
        };
        let letters = body
            .chars()
            .map(|c| match c {
                'I' => Ok(Letter::I),
                'X' => Ok(Letter::X),
                'Y' => Ok(Letter::Y),
                'Z' => Ok(Letter::Z),
                _ => Err(Error::InvalidGate(format!("bad Pauli letter {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if letters.len() > MAX_QUBITS {
            return Err(Error::ResourceCap {
                what: "Pauli string",
                requested: letters.len(),
                cap: MAX_QUBITS,
            });
        }
        Ok(Self::from_letters(&letters).with_phase(phase))
    }
}

/// Sector-then-lexicographic order: diagonal strings first, then letters
/// compared as text with `I < X < Y < Z`.
pub fn display_order(a: &PauliString, b: &PauliString) -> std::cmp::Ordering {
    (!a.is_diagonal(), a.letter_string()).cmp(&(!b.is_diagonal(), b.letter_string()))
}

/// A finite complex combination of phase-free Pauli strings.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    num_qubits: usize,
    terms: BTreeMap<(u64, u64), Complex64>,
}

impl PauliSum {
    pub fn new(num_qubits: usize) -> Self {
        assert!(num_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            num_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(num_qubits: usize) -> Self {
        let mut s = Self::new(num_qubits);
        s.add_term(PauliString::identity(num_qubits), Complex64::new(1.0, 0.0));
        s
    }

    pub fn from_terms(
        num_qubits: usize,
        terms: impl IntoIterator<Item = (PauliString, Complex64)>,
    ) -> Result<Self> {
        let mut s = Self::new(num_qubits);
        for (p, c) in terms {
            if p.num_qubits() != num_qubits {
                return Err(Error::DimensionMismatch {
                    expected: num_qubits,
                    actual: p.num_qubits(),
                });
            }
            s.add_term(p, c);
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `coeff · string`, folding the string's phase into the coefficient.
    pub fn add_term(&mut self, string: PauliString, coeff: Complex64) {
        assert_eq!(string.num_qubits(), self.num_qubits, "qubit count mismatch");
        let c = coeff * string.phase_factor();
        *self
            .terms
            .entry((string.x, string.z))
            .or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms
            .get(&(string.x, string.z))
            .map(|c| c * string.phase_factor().conj())
            .unwrap_or_default()
    }

    pub fn contains(&self, string: &PauliString) -> bool {
        self.terms.contains_key(&(string.x, string.z))
    }

    fn string_of(&self, key: (u64, u64)) -> PauliString {
        PauliString {
            num_qubits: self.num_qubits,
            x: key.0,
            z: key.1,
            phase: 0,
        }
    }

    /// Terms in map order.
    pub fn iter(&self) -> impl Iterator<Item = (PauliString, Complex64)> + '_ {
        self.terms.iter().map(|(&k, &c)| (self.string_of(k), c))
    }

    /// Terms in display order (see [`display_order`]).
    pub fn sorted_terms(&self) -> Vec<(PauliString, Complex64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| display_order(&a.0, &b.0));
        v
    }

    /// Removes terms with magnitude at or below `tolerance`.
    pub fn prune(&mut self, tolerance: f64) {
        self.terms.retain(|_, c| c.norm() > tolerance);
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|(&k, &c)| (k, c * factor)).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            num_qubits: self.num_qubits,
            terms: self.terms.iter().map(|(&k, &c)| (k, c.conj())).collect(),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        let mut out = self.clone();
        for (&k, &c) in &other.terms {
            *out.terms.entry(k).or_default() += c;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        let mut out = Self::new(self.num_qubits);
        for (&ka, &ca) in &self.terms {
            let a = self.string_of(ka);
            for (&kb, &cb) in &other.terms {
                let p = a.multiply(&other.string_of(kb))?;
                out.add_term(p, ca * cb);
            }
        }
        Ok(out)
    }

    fn check_same_width(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                actual: other.num_qubits,
            });
        }
        Ok(())
    }

    /// Sum of coefficient magnitudes.
    pub fn one_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn to_dense(&self, num_qubits: usize) -> Result<DenseOperator> {
        self.to_dense_capped(num_qubits, DEFAULT_QUBIT_CAP)
    }

    pub fn to_dense_capped(&self, num_qubits: usize, cap: usize) -> Result<DenseOperator> {
        if num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: num_qubits,
                actual: self.num_qubits,
            });
        }
        check_cap("dense Pauli sum", num_qubits, cap)?;
        let mut op = DenseOperator::zeros(num_qubits);
        let dim = op.dim();
        let m = op.matrix_mut();
        for (p, c) in self.iter() {
            for col in 0..dim {
                let (row, f) = p.apply_to_basis(col);
                m[[row, col]] += c * f;
            }
        }
        Ok(op)
    }
}

impl Add for &PauliSum {
    type Output = PauliSum;

    fn add(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(rhs).expect("qubit count mismatch")
    }
}

impl Sub for &PauliSum {
    type Output = PauliSum;

    fn sub(self, rhs: &PauliSum) -> PauliSum {
        self.try_add(&-rhs).expect("qubit count mismatch")
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;

    fn neg(self) -> PauliSum {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &PauliSum {
    type Output = PauliSum;

    fn mul(self, rhs: &PauliSum) -> PauliSum {
        self.try_mul(rhs).expect("qubit count mismatch")
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        self.multiply(&rhs).expect("qubit count mismatch")
    }
}
