//! Exact moments of bi-free families from the reduced free product of
//! pointed vector spaces.
//!
//! Pair `j` with atoms `(x_k, y_k)` of mass `p_k` is realised on `ℂ^{n_j}`
//! with distinguished vector `ξ = (1, …, 1)`, state `ψ(v) = Σ p_k v_k` and
//! `a_j`, `b_j` acting diagonally by `x` and `y`. The free product space is
//! spanned by the vacuum and alternating tensors `v₁ ⊗ … ⊗ v_r` with
//! `ψ(v_i) = 0`. Tensors are stored in ambient coordinates: a basis tensor is
//! a sequence of `(pair, coordinate)` letters with alternating pairs.
//!
//! `a_j` acts through the left representation on the first factor and `b_j`
//! through the right representation on the last one. The result of every
//! operator word applied to the vacuum is computed exactly, so with rational
//! scalars the returned moments are exact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measure::PlanarMeasure;
use crate::series::Scalar;

/// Default limit on the length of an operator word.
pub const DEFAULT_WORD_CAP: usize = 8;

/// Operator letters. Words are read like operator products: the rightmost
/// letter acts first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Letter {
    /// Left variable `a_j` of pair `j`.
    Left(usize),
    /// Right variable `b_j` of pair `j`.
    Right(usize),
    /// `Σ_j a_j`.
    LeftSum,
    /// `Σ_j b_j`.
    RightSum,
}

/// A two-faced pair given by the atoms `(x, y, mass)` of its distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePair<T: Scalar = f64> {
    atoms: Vec<(T, T, T)>,
}

impl<T: Scalar> OraclePair<T> {
    pub fn new(atoms: Vec<(T, T, T)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidArgument(
                "oracle pair needs at least one atom".into(),
            ));
        }
        Ok(Self { atoms })
    }

    pub fn atoms(&self) -> &[(T, T, T)] {
        &self.atoms
    }
}

impl TryFrom<&PlanarMeasure> for OraclePair<f64> {
    type Error = Error;

    fn try_from(eta: &PlanarMeasure) -> Result<Self> {
        if !eta.is_atomic() {
            return Err(Error::InvalidArgument(
                "the moment oracle needs purely atomic measures".into(),
            ));
        }
        Self::new(eta.atoms().iter().map(|a| (a.x, a.y, a.mass)).collect())
    }
}

type Word = Vec<(usize, usize)>;
type Vector<T> = BTreeMap<Word, T>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

struct Space<'a, T: Scalar> {
    pairs: &'a [OraclePair<T>],
}

impl<T: Scalar> Space<'_, T> {
    /// `T ⊗ 1` on the outermost factor at `side` for pair `j`, where `T` is
    /// the diagonal operator `diag(values(atom))`.
    fn apply(
        &self,
        v: &Vector<T>,
        j: usize,
        side: Side,
        values: impl Fn(&(T, T, T)) -> T,
    ) -> Vector<T> {
        let atoms = &self.pairs[j].atoms;
        // Raw image with the outer factor in ambient coordinates, keyed by
        // the remaining word and the coordinate.
        let mut raw: BTreeMap<Word, Vec<T>> = BTreeMap::new();
        for (word, c) in v {
            let outer = match side {
                Side::Left => word.first(),
                Side::Right => word.last(),
            };
            match outer {
                Some(&(p, k)) if p == j => {
                    let rest = match side {
                        Side::Left => word[1..].to_vec(),
                        Side::Right => word[..word.len() - 1].to_vec(),
                    };
                    let slot = raw
                        .entry(rest)
                        .or_insert_with(|| vec![T::zero(); atoms.len()]);
                    slot[k] = slot[k].clone() + c.clone() * values(&atoms[k]);
                }
                _ => {
                    // The outer factor is ξ_j, whose image is the vector of values.
                    let slot = raw
                        .entry(word.clone())
                        .or_insert_with(|| vec![T::zero(); atoms.len()]);
                    for (k, atom) in atoms.iter().enumerate() {
                        slot[k] = slot[k].clone() + c.clone() * values(atom);
                    }
                }
            }
        }
        // Split each outer factor into its ψ-part and its centred part.
        let mut out: Vector<T> = BTreeMap::new();
        for (rest, coords) in raw {
            let psi = coords
                .iter()
                .zip(atoms)
                .fold(T::zero(), |acc, (d, a)| acc + d.clone() * a.2.clone());
            for (k, d) in coords.into_iter().enumerate() {
                let coeff = d - psi.clone();
                if coeff.is_zero() {
                    continue;
                }
                let mut word = Vec::with_capacity(rest.len() + 1);
                match side {
                    Side::Left => {
                        word.push((j, k));
                        word.extend_from_slice(&rest);
                    }
                    Side::Right => {
                        word.extend_from_slice(&rest);
                        word.push((j, k));
                    }
                }
                add_to(&mut out, word, coeff);
            }
            if !psi.is_zero() {
                add_to(&mut out, rest, psi);
            }
        }
        out
    }

    fn apply_letter(&self, v: &Vector<T>, letter: Letter) -> Result<Vector<T>> {
        let check = |j: usize| {
            if j < self.pairs.len() {
                Ok(j)
            } else {
                Err(Error::InvalidArgument(format!("no pair with index {j}")))
            }
        };
        let left = |a: &(T, T, T)| a.0.clone();
        let right = |a: &(T, T, T)| a.1.clone();
        Ok(match letter {
            Letter::Left(j) => self.apply(v, check(j)?, Side::Left, left),
            Letter::Right(j) => self.apply(v, check(j)?, Side::Right, right),
            Letter::LeftSum => {
                self.sum((0..self.pairs.len()).map(|j| self.apply(v, j, Side::Left, left)))
            }
            Letter::RightSum => {
                self.sum((0..self.pairs.len()).map(|j| self.apply(v, j, Side::Right, right)))
            }
        })
    }

    fn sum(&self, parts: impl Iterator<Item = Vector<T>>) -> Vector<T> {
        let mut out = BTreeMap::new();
        for part in parts {
            for (word, c) in part {
                add_to(&mut out, word, c);
            }
        }
        out
    }
}

fn add_to<T: Scalar>(v: &mut Vector<T>, word: Word, c: T) {
    let entry = v.entry(word).or_insert_with(T::zero);
    *entry = entry.clone() + c;
}

fn vacuum<T: Scalar>() -> Vector<T> {
    BTreeMap::from([(Vec::new(), T::one())])
}

fn vacuum_coefficient<T: Scalar>(v: &Vector<T>) -> T {
    v.get(&Vec::new()).cloned().unwrap_or_else(T::zero)
}

/// Vacuum expectation `φ(word)` in the free product of `pairs`, with the
/// word length limited by `cap`.
pub fn universal_moment_oracle<T: Scalar>(
    pairs: &[OraclePair<T>],
    word: &[Letter],
    cap: usize,
) -> Result<T> {
    if word.len() > cap {
        return Err(Error::CapExceeded {
            length: word.len(),
            cap,
        });
    }
    let space = Space { pairs };
    let mut v = vacuum();
    for &letter in word.iter().rev() {
        v = space.apply_letter(&v, letter)?;
    }
    Ok(vacuum_coefficient(&v))
}

/// Band moments `φ((Σa_j)^i (Σb_j)^k)` for all `i + k ≤ max_degree`;
/// row `i` has `max_degree - i + 1` entries.
pub fn oracle_band_moments<T: Scalar>(
    pairs: &[OraclePair<T>],
    max_degree: usize,
    cap: usize,
) -> Result<Vec<Vec<T>>> {
    if max_degree > cap {
        return Err(Error::CapExceeded {
            length: max_degree,
            cap,
        });
    }
    let space = Space { pairs };
    let mut table: Vec<Vec<T>> = (0..=max_degree)
        .map(|i| vec![T::zero(); max_degree - i + 1])
        .collect();
    let mut right = vacuum();
    for k in 0..=max_degree {
        let mut v = right.clone();
        for (i, row) in table.iter_mut().enumerate().take(max_degree - k + 1) {
            if i > 0 {
                v = space.apply_letter(&v, Letter::LeftSum)?;
            }
            row[k] = vacuum_coefficient(&v);
        }
        if k < max_degree {
            right = space.apply_letter(&right, Letter::RightSum)?;
        }
    }
    Ok(table)
}
