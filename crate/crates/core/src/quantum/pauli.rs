use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::matrix::ComplexMatrix;
use crate::{Error, Result};

/// Single-qubit Pauli letter. The discriminants give the coefficient order
/// `I, Z, X, Y` used by Pauli-basis vectors and transfer matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I = 0,
    Z = 1,
    X = 2,
    Y = 3,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::Z, Pauli::X, Pauli::Y];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Pauli {
        Self::ALL[i]
    }

    pub fn flips(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Contributes a `(-1)^bit` factor.
    pub fn signs(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn matrix(self) -> ComplexMatrix {
        let r = |x: f64| Complex64::new(x, 0.0);
        let i = |x: f64| Complex64::new(0.0, x);
        let data = match self {
            Pauli::I => vec![r(1.0), r(0.0), r(0.0), r(1.0)],
            Pauli::Z => vec![r(1.0), r(0.0), r(0.0), r(-1.0)],
            Pauli::X => vec![r(0.0), r(1.0), r(1.0), r(0.0)],
            Pauli::Y => vec![r(0.0), i(-1.0), i(1.0), r(0.0)],
        };
        ComplexMatrix::from_vec(2, 2, data).expect("2x2")
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::Z => 'Z',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
        }
    }
}

/// Tensor product of Pauli letters; letter `j` acts on wire `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

/// Action of a Pauli string on computational basis states:
/// `P|k⟩ = phase(k) |k ⊕ flip⟩`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PauliAction {
    pub flip: usize,
    pub sign: usize,
    pub y_phase: Complex64,
}

impl PauliAction {
    #[inline]
    pub fn phase(&self, k: usize) -> Complex64 {
        if (k & self.sign).count_ones() % 2 == 1 {
            -self.y_phase
        } else {
            self.y_phase
        }
    }
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    /// `letter` on `wire`, identity elsewhere.
    pub fn single(n: usize, wire: usize, letter: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[wire] = letter;
        Self::new(letters)
    }

    /// Decodes a base-4 index over `I, Z, X, Y` with wire 0 most significant.
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut letters = vec![Pauli::I; n];
        for j in (0..n).rev() {
            letters[j] = Pauli::from_index(index % 4);
            index /= 4;
        }
        Self::new(letters)
    }

    pub fn index(&self) -> usize {
        self.letters.iter().fold(0, |acc, p| acc * 4 + p.index())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub(crate) fn action(&self) -> PauliAction {
        let n = self.letters.len();
        let mut flip = 0;
        let mut sign = 0;
        let mut ys = 0;
        for (j, p) in self.letters.iter().enumerate() {
            let bit = 1 << (n - 1 - j);
            if p.flips() {
                flip |= bit;
            }
            if p.signs() {
                sign |= bit;
            }
            if *p == Pauli::Y {
                ys += 1;
            }
        }
        let y_phase = match ys % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        PauliAction { flip, sign, y_phase }
    }

    /// Dense `2^n × 2^n` matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let dim = 1 << self.letters.len();
        let act = self.action();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k ^ act.flip, k)] = act.phase(k);
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'Z' => Ok(Pauli::Z),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                other => Err(Error::InvalidParameter(format!("unknown Pauli letter {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(PauliString::new)
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
