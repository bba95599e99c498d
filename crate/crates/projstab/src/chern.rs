//! Degree-two rational cohomology of a polarised surface and the Chern
//! character algebra of sheaves on it.
//!
//! A surface is described by its Néron–Severi rank, a symmetric intersection
//! matrix in a chosen basis, the anticanonical class `c1(B)` and the
//! integrated second Todd class (equal to `χ(O_B)`). A coherent sheaf is
//! carried as `(rank, c1, ch2)` with `ch2` already integrated, which is all
//! Riemann–Roch needs in dimension two.

use thiserror::Error;

use crate::faulhaber::{faulhaber, sum_over_i};
use crate::poly::{Poly, Var};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChernError {
    #[error("class has {got} coordinates but the geometry has Néron–Severi rank {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("intersection matrix entry ({i},{j}) differs from ({j},{i}); the pairing must be symmetric")]
    NonSymmetricMatrix { i: usize, j: usize },
    #[error("intersection matrix row {row} has {got} entries, expected {expected}")]
    BadMatrixShape { row: usize, expected: usize, got: usize },
    #[error("operation requires a rank-2 sheaf, got rank {rank}")]
    RankNotTwo { rank: u32 },
    #[error("sheaf rank must be positive")]
    ZeroRank,
}

/// A divisor class in the chosen Néron–Severi basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NsClass {
    coords: Vec<Rat>,
}

impl NsClass {
    pub fn new(coords: Vec<Rat>) -> Self {
        NsClass { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        NsClass {
            coords: coords.iter().map(|&c| Rat::from_int(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        NsClass {
            coords: vec![Rat::zero(); rank],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn coord(&self, idx: usize) -> &Rat {
        &self.coords[idx]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    pub fn add(&self, other: &NsClass) -> NsClass {
        assert_eq!(self.dim(), other.dim(), "class dimension mismatch");
        NsClass {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &NsClass) -> NsClass {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> NsClass {
        NsClass {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> NsClass {
        NsClass {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }
}

impl std::fmt::Display for NsClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for (n, c) in self.coords.iter().enumerate() {
            if n > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A polarised surface presented numerically: basis labels, intersection
/// pairing, anticanonical class and `todd2 = χ(O_B)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceGeometry {
    basis_labels: Vec<String>,
    intersection: Vec<Vec<Rat>>,
    c1b: NsClass,
    todd2: Rat,
}

impl SurfaceGeometry {
    pub fn new(
        basis_labels: Vec<String>,
        intersection: Vec<Vec<Rat>>,
        c1b: NsClass,
        todd2: Rat,
    ) -> Result<Self, ChernError> {
        let n = basis_labels.len();
        if intersection.len() != n {
            return Err(ChernError::BadMatrixShape {
                row: intersection.len(),
                expected: n,
                got: intersection.len(),
            });
        }
        for (i, row) in intersection.iter().enumerate() {
            if row.len() != n {
                return Err(ChernError::BadMatrixShape {
                    row: i,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if intersection[i][j] != intersection[j][i] {
                    return Err(ChernError::NonSymmetricMatrix { i, j });
                }
            }
        }
        if c1b.dim() != n {
            return Err(ChernError::DimensionMismatch {
                expected: n,
                got: c1b.dim(),
            });
        }
        Ok(SurfaceGeometry {
            basis_labels,
            intersection,
            c1b,
            todd2,
        })
    }

    /// The ruled surface `P(V) -> C` over a genus-`g` curve, with basis
    /// `{b, f}`: `b^2 = deg V`, `f^2 = 0`, `b.f = 1`, `-K_B = 2b + 2(1-g)f`
    /// and `χ(O_B) = 1 - g`.
    pub fn ruled(genus: i64, deg_v: i64) -> SurfaceGeometry {
        SurfaceGeometry::new(
            vec!["b".to_string(), "f".to_string()],
            vec![
                vec![Rat::from_int(deg_v), Rat::one()],
                vec![Rat::one(), Rat::zero()],
            ],
            NsClass::from_ints(&[2, 2 * (1 - genus)]),
            Rat::from_int(1 - genus),
        )
        .expect("ruled geometry data is well-formed")
    }

    pub fn ns_rank(&self) -> usize {
        self.basis_labels.len()
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn intersection_matrix(&self) -> &[Vec<Rat>] {
        &self.intersection
    }

    pub fn c1b(&self) -> &NsClass {
        &self.c1b
    }

    pub fn todd2(&self) -> &Rat {
        &self.todd2
    }

    fn check_dim(&self, a: &NsClass) -> Result<(), ChernError> {
        if a.dim() != self.ns_rank() {
            return Err(ChernError::DimensionMismatch {
                expected: self.ns_rank(),
                got: a.dim(),
            });
        }
        Ok(())
    }

    /// The intersection number `a . b` (i.e. `aᵀ M b`).
    pub fn intersect(&self, a: &NsClass, b: &NsClass) -> Result<Rat, ChernError> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        let mut acc = Rat::zero();
        for (i, ai) in a.coords().iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coords().iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                acc += &(ai * &self.intersection[i][j]) * bj;
            }
        }
        Ok(acc)
    }

    /// Self-intersection `a^2`.
    pub fn self_intersect(&self, a: &NsClass) -> Result<Rat, ChernError> {
        self.intersect(a, a)
    }

    /// The basis class with index `idx`.
    pub fn basis_class(&self, idx: usize) -> NsClass {
        let mut coords = vec![Rat::zero(); self.ns_rank()];
        coords[idx] = Rat::one();
        NsClass::new(coords)
    }
}

/// Numerical Chern data of a coherent sheaf: `(rank, c1, ∫ch2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafData {
    rank: u32,
    c1: NsClass,
    ch2: Rat,
}

impl SheafData {
    pub fn new(rank: u32, c1: NsClass, ch2: Rat) -> Result<Self, ChernError> {
        if rank == 0 {
            return Err(ChernError::ZeroRank);
        }
        Ok(SheafData { rank, c1, ch2 })
    }

    /// The line bundle `O(D)`, with `ch2 = D^2/2`.
    pub fn line_bundle(d: &NsClass, geom: &SurfaceGeometry) -> Result<Self, ChernError> {
        let ch2 = geom.self_intersect(d)? * Rat::new(1, 2);
        Ok(SheafData {
            rank: 1,
            c1: d.clone(),
            ch2,
        })
    }

    /// The structure sheaf `O_B`.
    pub fn structure_sheaf(geom: &SurfaceGeometry) -> Self {
        SheafData {
            rank: 1,
            c1: NsClass::zero(geom.ns_rank()),
            ch2: Rat::zero(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn c1(&self) -> &NsClass {
        &self.c1
    }

    pub fn ch2(&self) -> &Rat {
        &self.ch2
    }

    /// Derived second Chern class `c2 = c1^2/2 - ch2`.
    pub fn c2(&self, geom: &SurfaceGeometry) -> Result<Rat, ChernError> {
        Ok(geom.self_intersect(&self.c1)? * Rat::new(1, 2) - self.ch2.clone())
    }

    /// Tensor with the line bundle `O(D)`: rank fixed, `c1 += rank D`,
    /// `ch2 += c1.D + rank D^2/2`.
    pub fn tensor_line(&self, d: &NsClass, geom: &SurfaceGeometry) -> Result<SheafData, ChernError> {
        let rank_rat = Rat::from_int(i64::from(self.rank));
        let c1 = self.c1.add(&d.scale(&rank_rat));
        let ch2 = self.ch2.clone()
            + geom.intersect(&self.c1, d)?
            + rank_rat * geom.self_intersect(d)? * Rat::new(1, 2);
        Ok(SheafData {
            rank: self.rank,
            c1,
            ch2,
        })
    }

    /// Dual sheaf: `c1` flips sign, the even-degree `ch2` is unchanged.
    pub fn dual(&self) -> SheafData {
        SheafData {
            rank: self.rank,
            c1: self.c1.neg(),
            ch2: self.ch2.clone(),
        }
    }
}

/// Chern data of the middle term of a short exact sequence with outer terms
/// `f` and `g`: the Chern character is additive, so ranks, `c1` and `ch2` add.
pub fn extension_sum(f: &SheafData, g: &SheafData) -> SheafData {
    assert_eq!(f.c1.dim(), g.c1.dim(), "class dimension mismatch");
    SheafData {
        rank: f.rank + g.rank,
        c1: f.c1.add(&g.c1),
        ch2: &f.ch2 + &g.ch2,
    }
}

/// Chern data of `S^r E` for rank-2 `E`, as polynomials in `r`.
///
/// With Chern roots `a, b` of `E`, the roots of `S^r E` are `ia + (r-i)b` for
/// `i = 0..r`; everything reduces to the symmetric functions `ch2(E)` and
/// `c1(E)^2/2 - ch2(E) = c2(E)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPowerChern {
    /// `rank(S^r E) = r + 1`.
    pub rank_poly: Poly,
    /// `c1(S^r E) = c1_factor * c1(E)`, with `c1_factor = (r^2 + r)/2`.
    pub c1_factor: Poly,
    /// `∫ ch2(S^r E)` as a polynomial in `r`.
    pub ch2_poly: Poly,
}

/// Symmetric-power Chern data of a rank-2 sheaf via the splitting principle.
pub fn sym_power_rank2(e: &SheafData, geom: &SurfaceGeometry) -> Result<SymPowerChern, ChernError> {
    if e.rank() != 2 {
        return Err(ChernError::RankNotTwo { rank: e.rank() });
    }
    let c2 = e.c2(geom)?;

    // sum of i^2 and of i(r-i) over i = 0..r
    let s2 = faulhaber(2);
    let i = Poly::var(Var::I);
    let r = Poly::var(Var::R);
    let s11 = sum_over_i(&(&i * &(&r - &i)));

    // ch2(S^r E) = sum_i (i a + (r-i) b)^2 / 2 = S2 * ch2(E) + S11 * c2(E)
    let ch2_poly = &s2.scale(e.ch2()) + &s11.scale(&c2);

    let rank_poly = faulhaber(0);
    let c1_factor = faulhaber(1);
    debug_assert_eq!(
        ch2_poly.eval(&Rat::zero(), &Rat::one(), &Rat::zero()),
        e.ch2().clone()
    );
    Ok(SymPowerChern {
        rank_poly,
        c1_factor,
        ch2_poly,
    })
}

/// Exact Riemann–Roch on the surface: `χ(E ⊗ L^t)` for a polynomial twist
/// exponent `t` (typically `t = k` or `t = kr`) against the polarisation
/// `omega`:
///
/// `χ = rank (tω)^2/2 + (tω).(c1 + rank c1(B)/2) + ch2 + c1.c1(B)/2 + rank todd2`.
pub fn euler_char(
    e: &SheafData,
    geom: &SurfaceGeometry,
    omega: &NsClass,
    t: &Poly,
) -> Result<Poly, ChernError> {
    let rank = Rat::from_int(i64::from(e.rank()));
    let w2 = geom.self_intersect(omega)?;
    let w_c1 = geom.intersect(omega, e.c1())?;
    let w_b = geom.intersect(omega, geom.c1b())?;
    let c1_b = geom.intersect(e.c1(), geom.c1b())?;

    let quad = &rank * &w2 * Rat::new(1, 2);
    let lin = w_c1 + &rank * &w_b * Rat::new(1, 2);
    let cst = e.ch2().clone() + c1_b * Rat::new(1, 2) + &rank * geom.todd2();

    let t2 = t.pow(2);
    Ok(&(&t2.scale(&quad) + &t.scale(&lin)) + &Poly::constant(cst))
}

/// Euler characteristic of a line bundle `O(D)` in divisor form:
/// `χ(O(D)) = χ(O_B) + D.(D - K_B)/2` with `K_B = -c1(B)`.
///
/// Algebraically this is the same Riemann–Roch value as [`euler_char`], but it
/// is computed along a different route and serves as an independent check.
pub fn line_chi_divisor_form(d: &NsClass, geom: &SurfaceGeometry) -> Result<Rat, ChernError> {
    let d_minus_k = d.add(geom.c1b());
    Ok(geom.todd2().clone() + geom.intersect(d, &d_minus_k)? * Rat::new(1, 2))
}

/// Slope `μ(E) = (c1(E).ω) / rank(E)`.
pub fn slope(e: &SheafData, geom: &SurfaceGeometry, omega: &NsClass) -> Result<Rat, ChernError> {
    Ok(geom.intersect(e.c1(), omega)? / Rat::from_int(i64::from(e.rank())))
}
