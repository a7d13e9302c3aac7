//! The Heisenberg group `[x, y, z]` (upper unitriangular 3×3 matrices) and
//! fractional parts on `G/Γ`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// `[x, y, z] = [[1, x, z], [0, 1, y], [0, 0, 1]]`.
#[derive(Debug, Clone)]
pub struct HeisenbergElem {
    pub x: ExactReal,
    pub y: ExactReal,
    pub z: ExactReal,
}

pub type Matrix3 = [[ExactReal; 3]; 3];

impl HeisenbergElem {
    pub fn new(x: ExactReal, y: ExactReal, z: ExactReal) -> Self {
        HeisenbergElem { x, y, z }
    }

    pub fn identity() -> Self {
        HeisenbergElem::new(ExactReal::zero(), ExactReal::zero(), ExactReal::zero())
    }

    pub fn lattice(a: &BigInt, b: &BigInt, c: &BigInt) -> Self {
        HeisenbergElem::new(
            ExactReal::int(a.clone()),
            ExactReal::int(b.clone()),
            ExactReal::int(c.clone()),
        )
    }

    /// `[x₁, y₁, z₁][x₂, y₂, z₂] = [x₁ + x₂, y₁ + y₂, z₁ + z₂ + x₁y₂]`.
    pub fn mul(&self, o: &HeisenbergElem) -> HeisenbergElem {
        HeisenbergElem::new(
            self.x.add(&o.x),
            self.y.add(&o.y),
            self.z.add(&o.z).add(&self.x.mul(&o.y)),
        )
    }

    pub fn inverse(&self) -> HeisenbergElem {
        HeisenbergElem::new(self.x.neg(), self.y.neg(), self.x.mul(&self.y).sub(&self.z))
    }

    /// Square-and-multiply power.
    pub fn pow(&self, mut e: u64) -> HeisenbergElem {
        let mut acc = HeisenbergElem::identity();
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        acc
    }

    pub fn to_matrix(&self) -> Matrix3 {
        let (o, z) = (ExactReal::one(), ExactReal::zero());
        [
            [o.clone(), self.x.clone(), self.z.clone()],
            [z.clone(), o.clone(), self.y.clone()],
            [z.clone(), z, o],
        ]
    }

    /// Reads `[x, y, z]` off a matrix, checking the unitriangular shape.
    pub fn from_matrix(m: &Matrix3) -> Result<Self> {
        let is = |v: &ExactReal, k: i64| v.sub(&ExactReal::int(k)).is_exact_zero();
        let shape = is(&m[0][0], 1)
            && is(&m[1][1], 1)
            && is(&m[2][2], 1)
            && is(&m[1][0], 0)
            && is(&m[2][0], 0)
            && is(&m[2][1], 0);
        if !shape {
            return Err(Error::invalid("matrix is not upper unitriangular"));
        }
        Ok(HeisenbergElem::new(m[0][1].clone(), m[1][2].clone(), m[0][2].clone()))
    }

    /// `gγ` with `γ = [-⌊x⌋, -⌊y⌋, 0]` followed by `[0, 0, -⌊z'⌋]`; returns
    /// the representative in `[0, 1)³` and the total `γ ∈ Γ`.
    pub fn reduce(&self, policy: &PrecisionPolicy) -> Result<(HeisenbergElem, [BigInt; 3])> {
        let fx = self.x.floor(policy)?;
        let fy = self.y.floor(policy)?;
        let zero = BigInt::from(0);
        let h = self.mul(&HeisenbergElem::lattice(&-&fx, &-&fy, &zero));
        let fz = h.z.floor(policy)?;
        let h = h.mul(&HeisenbergElem::lattice(&zero, &zero, &-&fz));
        Ok((h, [-fx, -fy, -fz]))
    }

    pub fn coords(&self) -> [ExactReal; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }
}

pub fn matrix_mul(a: &Matrix3, b: &Matrix3) -> Matrix3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(ExactReal::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct HeisenbergFrac {
    pub n: u64,
    /// `({-nα}, {nβ}, {nα⌊nβ⌋})`.
    #[serde(skip)]
    pub closed: [ExactReal; 3],
    /// Lattice reduction of `g(n) = [-α, β, 0]^n [0, 0, αβ]^{C(n,2)}`.
    #[serde(skip)]
    pub reduced: [ExactReal; 3],
    pub gamma: [BigInt; 3],
    pub decimals: [String; 3],
    pub agree: bool,
}

fn same_value(a: &ExactReal, b: &ExactReal, policy: &PrecisionPolicy) -> Result<bool> {
    if a.sub(b).is_exact_zero() {
        return Ok(true);
    }
    let (ia, ib) = (a.enclosure(policy.start_bits)?, b.enclosure(policy.start_bits)?);
    Ok(ia.lo == ib.lo && ia.hi == ib.hi)
}

/// Fractional part of `g(n) = [-nα, nβ, 0]` computed by the closed form and
/// by lattice reduction of the group element.
pub fn heisenberg_fracpart(
    alpha: &ExactReal,
    beta: &ExactReal,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<HeisenbergFrac> {
    let nn = ExactReal::int(n);
    let na = nn.mul(alpha);
    let nb = nn.mul(beta);
    let closed = [
        na.neg().frac(policy)?,
        nb.frac(policy)?,
        na.mul(&ExactReal::int(nb.floor(policy)?)).frac(policy)?,
    ];
    let step = HeisenbergElem::new(alpha.neg(), beta.clone(), ExactReal::zero());
    let pairs = BigInt::from(n) * BigInt::from(n.saturating_sub(1)) / 2;
    let central = HeisenbergElem::new(
        ExactReal::zero(),
        ExactReal::zero(),
        alpha.mul(beta).mul(&ExactReal::int(pairs)),
    );
    let g = step.pow(n).mul(&central);
    let (h, gamma) = g.reduce(policy)?;
    let reduced = h.coords();
    let mut agree = true;
    for (a, b) in closed.iter().zip(&reduced) {
        agree &= same_value(a, b, policy)?;
    }
    let decimals = std::array::from_fn(|i| closed[i].to_decimal(20));
    Ok(HeisenbergFrac {
        n,
        closed,
        reduced,
        gamma,
        decimals,
        agree,
    })
}
