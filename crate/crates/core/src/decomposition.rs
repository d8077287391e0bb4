//! Primary decomposition along the irreducible factors of the minimal
//! polynomial, and the invertible ⊕ nilpotent split derived from it.

use num_traits::Zero;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::poly::{factor_over_rationals, Poly};
use crate::{RationalMatrix, RationalPolynomial, RationalVector};

#[derive(Clone, Debug, PartialEq)]
pub struct PrimaryBlock {
    pub block: RationalMatrix,
    pub factor: RationalPolynomial,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimaryDecomposition {
    /// Columns are the concatenated bases of the primary components.
    pub similarity: RationalMatrix,
    pub blocks: Vec<PrimaryBlock>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvNilSplit {
    pub similarity: RationalMatrix,
    pub inv_block: RationalMatrix,
    pub nil_block: RationalMatrix,
    pub nil_index: usize,
}

impl InvNilSplit {
    /// Size of the invertible block.
    pub fn inv_size(&self) -> usize {
        self.inv_block.rows()
    }
}

/// Blocks follow factor order except that the factor `x` always comes last.
pub fn primary_decomposition(a: &RationalMatrix) -> Result<PrimaryDecomposition> {
    let n = a.rows();
    let mu = a.min_poly()?;
    let mut factors = factor_over_rationals(&mu)?.factors;
    factors.sort_by_key(|(p, _)| *p == Poly::x());
    let mut columns: Vec<RationalVector> = Vec::with_capacity(n);
    let mut sizes = Vec::new();
    for (p, r) in &factors {
        let kernel = a.eval_poly(&p.pow(*r))?.null_space_basis();
        sizes.push(kernel.len());
        columns.extend(kernel);
    }
    let s = Matrix::from_columns(&columns, n)?;
    let conj = s.inverse()?.mul(a)?.mul(&s)?;
    let mut blocks = Vec::new();
    let mut off = 0;
    for ((p, r), size) in factors.into_iter().zip(sizes) {
        blocks.push(PrimaryBlock {
            block: conj.submatrix(off, off + size, off, off + size),
            factor: p,
            multiplicity: r,
        });
        off += size;
    }
    Ok(PrimaryDecomposition { similarity: s, blocks })
}

pub fn inv_nil_split(a: &RationalMatrix) -> Result<InvNilSplit> {
    let n = a.rows();
    let pd = primary_decomposition(a)?;
    let (nil, inv): (Vec<_>, Vec<_>) = pd.blocks.iter().partition(|b| b.factor == Poly::x());
    let s: usize = inv.iter().map(|b| b.block.rows()).sum();
    let nil_index = nil.first().map_or(0, |b| b.multiplicity as usize);
    Ok(InvNilSplit {
        inv_block: pd.similarity.inverse()?.mul(a)?.mul(&pd.similarity)?.submatrix(0, s, 0, s),
        nil_block: match nil.first() {
            Some(b) => b.block.clone(),
            None => Matrix::zeros(0, 0),
        },
        similarity: pd.similarity,
        nil_index,
    })
    .inspect(|split| {
        debug_assert_eq!(split.inv_size() + split.nil_block.rows(), n);
    })
}

/// Invertible iff the minimal polynomial has a nonzero constant term.
pub fn is_invertible_by_minpoly(a: &RationalMatrix) -> Result<bool> {
    Ok(!a.min_poly()?.coeff(0).is_zero())
}

pub fn is_nilpotent(a: &RationalMatrix) -> Result<bool> {
    let mu = a.min_poly()?;
    Ok(mu.x_adic_order() == mu.degree().unwrap_or(0))
}
