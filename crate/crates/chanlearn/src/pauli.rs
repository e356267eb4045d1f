//! Pauli strings and the Bell basis.
//!
//! `P^{z,x} = i^{z·x} Z^z X^x` on n qubits, and `|Φ^{z,x}⟩ = (1 ⊗ P^{z,x})|Φ⟩`
//! with `|Φ⟩ = 2^{-n/2} Σ_j |j, j⟩`. Bell indices are ordered
//! lexicographically on the concatenated bit string `z_1..z_n x_1..x_n`.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, Cx, HermitianOperator};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Label `(z, x)` of an n-qubit Pauli string. Bit `n − k` of each mask is qubit `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PauliIndex {
    pub n: usize,
    pub z: u64,
    pub x: u64,
}

impl PauliIndex {
    pub fn new(n: usize, z: u64, x: u64) -> Result<Self> {
        if n == 0 || n > 31 {
            return Err(Error::Parameter(format!("register size {n} out of range")));
        }
        let mask = (1u64 << n) - 1;
        if z & !mask != 0 || x & !mask != 0 {
            return Err(Error::Parameter(format!("bit masks exceed {n} qubits")));
        }
        Ok(Self { n, z, x })
    }

    /// From explicit bit strings, qubit 1 first.
    pub fn from_bits(z: &[u8], x: &[u8]) -> Result<Self> {
        if z.len() != x.len() {
            return Err(Error::Dimension(format!("z has {} bits, x has {}", z.len(), x.len())));
        }
        let pack = |bits: &[u8]| -> Result<u64> {
            bits.iter().try_fold(0u64, |acc, &b| match b {
                0 | 1 => Ok((acc << 1) | b as u64),
                _ => Err(Error::Parameter(format!("bit value {b}"))),
            })
        };
        Self::new(z.len(), pack(z)?, pack(x)?)
    }

    pub fn identity(n: usize) -> Self {
        Self { n, z: 0, x: 0 }
    }

    /// Inverse of [`PauliIndex::linear`].
    pub fn from_linear(n: usize, k: usize) -> Self {
        let mask = (1u64 << n) - 1;
        Self { n, z: (k as u64 >> n) & mask, x: k as u64 & mask }
    }

    /// Position in the lexicographic Bell order.
    pub fn linear(&self) -> usize {
        ((self.z << self.n) | self.x) as usize
    }

    pub fn count(n: usize) -> usize {
        1usize << (2 * n)
    }

    pub fn all(n: usize) -> impl Iterator<Item = PauliIndex> {
        (0..Self::count(n)).map(move |k| Self::from_linear(n, k))
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    /// `P|j⟩ = i^{phase}|row⟩`.
    #[inline]
    pub fn column(&self, j: usize) -> (usize, u32) {
        let j = j as u64;
        let row = j ^ self.x;
        let phase = (self.z & self.x).count_ones() + 2 * (self.z & row).count_ones();
        (row as usize, phase % 4)
    }

    /// Whether the two strings commute.
    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.z & other.x).count_ones() + (self.x & other.z).count_ones()) % 2 == 0
    }
}

impl fmt::Display for PauliIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in (0..self.n).rev() {
            let c = match ((self.z >> k) & 1, (self.x >> k) & 1) {
                (0, 0) => 'I',
                (0, 1) => 'X',
                (1, 0) => 'Z',
                _ => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// `i^k`.
#[inline]
pub fn i_pow<T: Real>(k: u32) -> Cx<T> {
    let (o, z) = (T::one(), T::zero());
    match k % 4 {
        0 => Cx::new(o, z),
        1 => Cx::new(z, o),
        2 => Cx::new(-o, z),
        _ => Cx::new(z, -o),
    }
}

pub fn pauli_operator<T: Real>(idx: &PauliIndex) -> ComplexMatrix<T> {
    let d = idx.dim();
    let mut m = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        let (row, ph) = idx.column(j);
        m.set(row, j, i_pow(ph));
    }
    m
}

/// Coefficients of the unnormalized vector `|Γ^{z,x}⟩ = Σ_j |j⟩ ⊗ P|j⟩`:
/// entry `j` is `(j·d + row_j, phase_j)`.
pub fn gamma_support(idx: &PauliIndex) -> Vec<(usize, u32)> {
    let d = idx.dim();
    (0..d)
        .map(|j| {
            let (row, ph) = idx.column(j);
            (j * d + row, ph)
        })
        .collect()
}

/// Normalized Bell vector `|Φ^{z,x}⟩` on 2n qubits.
pub fn bell_state<T: Real>(idx: &PauliIndex) -> Vec<Cx<T>> {
    let d = idx.dim();
    let norm = T::one() / T::lit(d as f64).sqrt();
    let mut v = vec![Cx::new(T::zero(), T::zero()); d * d];
    for (pos, ph) in gamma_support(idx) {
        v[pos] = i_pow::<T>(ph) * norm;
    }
    v
}

/// `Φ^{z,x} = |Φ^{z,x}⟩⟨Φ^{z,x}|`.
pub fn bell_projector<T: Real>(idx: &PauliIndex) -> HermitianOperator<T> {
    HermitianOperator::projector(&bell_state::<T>(idx))
}

/// `Γ^{z,x} = d·Φ^{z,x}`, the Choi matrix of conjugation by `P^{z,x}`.
pub fn gamma<T: Real>(idx: &PauliIndex) -> HermitianOperator<T> {
    bell_projector::<T>(idx).scale(T::lit(idx.dim() as f64))
}

/// All coefficients `Tr[E (Γ^{w_1} ⊗ … ⊗ Γ^{w_r})]` for an operator on legs
/// `A_1 B_1 … A_r B_r` of n qubits each, in lexicographic order of
/// `(w_1, …, w_r)`.
///
/// Each `|Γ^w⟩` has only `d` nonzero entries, so every coefficient costs
/// `O(d^{2r})` instead of a dense trace.
pub fn bell_coefficients_multi<T: Real>(e: &ComplexMatrix<T>, n: usize, r: usize) -> Result<Vec<T>> {
    let d = 1usize << n;
    let block = d * d;
    let total = block.pow(r as u32);
    if !e.is_square() || e.rows() != total {
        return Err(Error::Dimension(format!(
            "operator of size {} does not act on {r} blocks of {n}+{n} qubits",
            e.rows()
        )));
    }
    let per = PauliIndex::count(n);
    let supports: Vec<Vec<(usize, Cx<T>)>> = PauliIndex::all(n)
        .map(|idx| gamma_support(&idx).into_iter().map(|(p, ph)| (p, i_pow::<T>(ph))).collect())
        .collect();
    let n_words = per.pow(r as u32);
    let mut out = Vec::with_capacity(n_words);
    let mut positions: Vec<(usize, Cx<T>)> = Vec::with_capacity(d.pow(r as u32));
    for word in 0..n_words {
        positions.clear();
        positions.push((0, Cx::new(T::one(), T::zero())));
        let mut rem = word;
        let mut digits = vec![0usize; r];
        for k in (0..r).rev() {
            digits[k] = rem % per;
            rem /= per;
        }
        for &w in &digits {
            let mut next = Vec::with_capacity(positions.len() * d);
            for &(p, c) in &positions {
                for &(q, cq) in &supports[w] {
                    next.push((p * block + q, c * cq));
                }
            }
            positions = next;
        }
        let mut acc = Cx::new(T::zero(), T::zero());
        for &(p, cp) in &positions {
            let mut row = Cx::new(T::zero(), T::zero());
            for &(q, cq) in &positions {
                row += e.get(p, q) * cq;
            }
            acc += cp.conj() * row;
        }
        out.push(acc.re);
    }
    Ok(out)
}

/// `e_{z,x} = Tr[E Γ^{z,x}]` for an operator on 2n qubits.
pub fn bell_coefficients<T: Real>(e: &ComplexMatrix<T>, n: usize) -> Result<Vec<T>> {
    bell_coefficients_multi(e, n, 1)
}

/// `Tr[M P ρ P†]` for every Pauli string, i.e. the Bell coefficients of the
/// product test `ρ^T ⊗ M`, in `O(d²)` per string.
pub fn product_bell_coefficients<T: Real>(rho: &ComplexMatrix<T>, m: &ComplexMatrix<T>, n: usize) -> Result<Vec<T>> {
    let d = 1usize << n;
    if rho.rows() != d || rho.cols() != d || m.rows() != d || m.cols() != d {
        return Err(Error::Dimension(format!("state and effect must be {d}x{d}")));
    }
    let mut out = Vec::with_capacity(PauliIndex::count(n));
    for idx in PauliIndex::all(n) {
        let cols: Vec<(usize, Cx<T>)> = (0..d).map(|j| {
            let (row, ph) = idx.column(j);
            (row, i_pow::<T>(ph))
        }).collect();
        let mut acc = Cx::new(T::zero(), T::zero());
        for (a, &(ra, pa)) in cols.iter().enumerate() {
            for (b, &(rb, pb)) in cols.iter().enumerate() {
                acc += m.get(rb, ra) * pa * rho.get(a, b) * pb.conj();
            }
        }
        out.push(acc.re);
    }
    Ok(out)
}
