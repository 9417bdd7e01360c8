//! Classification of local monodromy for well-behaved T^2- and
//! T^3-fibrations: edge classes, semistable fiber types (b1, b2), vertex
//! normal forms, and dual representations.

use crate::lattice::{
    is_unipotent, kernel_saturated, smith_normal_form, transpose_inverse, IntMatrix, LatticeError,
    LatticeVector,
};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum MonodromyError {
    #[error("matrix must have determinant 1, found {0}")]
    DeterminantNotOne(BigInt),
    #[error("semistable classification requires unipotent generators")]
    SemistableRequired,
    #[error("monodromy group is trivial")]
    TrivialGroup,
    #[error("ordered product of the tuple is not the identity")]
    RelationViolated,
    #[error("tuple length {n} does not match fiber type {kind:?}")]
    ValencyMismatch { n: usize, kind: FiberKind },
    #[error("tuple is not in any dissident normal-form family")]
    NotNormalizable,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// The fiber classes this crate distinguishes.
///
/// `T22`, `T21`, `T12`, `T11` are the semistable 3D types `(b1, b2)` in
/// {(2,2),(2,1),(1,2),(1,1)}; `I1TwoD` is the 2D `I_1` fiber; the two
/// sphere classes are the non-unipotent 2D conjugacy classes with trace 1
/// and 3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FiberKind {
    Nonsingular,
    T22,
    T21,
    T12,
    T11,
    I1TwoD,
    SphereTr1,
    SphereTr3,
    NotWellBehaved,
}

impl FiberKind {
    /// Dissident-point valency forced by the type (None when the kind is
    /// not a 3D dissident type).
    pub fn valency(self) -> Option<usize> {
        match self {
            FiberKind::T22 => Some(2),
            FiberKind::T12 | FiberKind::T21 => Some(3),
            FiberKind::T11 => Some(4),
            _ => None,
        }
    }
}

/// Fiber type together with the ranks (b1, b2) when they apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberType {
    pub kind: FiberKind,
    pub b1: Option<u8>,
    pub b2: Option<u8>,
}

impl FiberType {
    pub fn bare(kind: FiberKind) -> Self {
        FiberType {
            kind,
            b1: None,
            b2: None,
        }
    }

    fn semistable(kind: FiberKind, b1: u8, b2: u8) -> Self {
        FiberType {
            kind,
            b1: Some(b1),
            b2: Some(b2),
        }
    }
}

/// An ordered list of integer matrices generating a local monodromy group
/// in a declared basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonodromyRep {
    pub dimension: u8,
    pub generators: Vec<IntMatrix>,
    pub basis_label: String,
}

impl MonodromyRep {
    pub fn new(
        dimension: u8,
        generators: Vec<IntMatrix>,
        basis_label: impl Into<String>,
    ) -> Result<Self, MonodromyError> {
        for g in &generators {
            check_det_one(g)?;
        }
        Ok(MonodromyRep {
            dimension,
            generators,
            basis_label: basis_label.into(),
        })
    }
}

/// Classification of an ordered dissident-point tuple: fiber type, valency,
/// the basis change that conjugates the tuple into the normal form, and the
/// free integer parameter of the (1,1) family.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexProfile {
    pub fiber: FiberType,
    pub valency: usize,
    /// P with P^{-1} T_i P in normal form for every i (columns are the new
    /// basis written in the old one).
    pub basis_change: IntMatrix,
    /// The unconstrained parameter a of T3 in the (1,1) normal form; it is
    /// reported verbatim, never normalized away.
    pub param_a: Option<i64>,
    /// Cyclic rotation applied to the tuple before normalization. The
    /// dissident relation is preserved under cyclic rotation, and the
    /// (1,1) family may need one to reach the alternating pattern.
    pub rotation: usize,
}

fn check_det_one(t: &IntMatrix) -> Result<(), MonodromyError> {
    let d = t.det();
    if d != BigInt::one() {
        return Err(MonodromyError::DeterminantNotOne(d));
    }
    Ok(())
}

fn content_of_difference(t: &IntMatrix) -> BigInt {
    let n = t.rows();
    let m = t.sub(&IntMatrix::identity(n));
    let mut g = BigInt::zero();
    for r in 0..n {
        for c in 0..n {
            g = num_integer::Integer::gcd(&g, m.at(r, c));
        }
    }
    g
}

/// Classify the monodromy of a loop around a 2D discriminant point.
pub fn classify_edge_2d(t: &IntMatrix) -> Result<FiberType, MonodromyError> {
    assert_eq!((t.rows(), t.cols()), (2, 2), "classify_edge_2d needs 2x2");
    check_det_one(t)?;
    if t.is_identity() {
        return Ok(FiberType::bare(FiberKind::Nonsingular));
    }
    if is_unipotent(t) {
        // conjugate to [[1,a],[0,1]]; Z/n-simplicity forces a = +-1,
        // i.e. content of T - I equal to 1
        return Ok(if content_of_difference(t).is_one() {
            FiberType::bare(FiberKind::I1TwoD)
        } else {
            FiberType::bare(FiberKind::NotWellBehaved)
        });
    }
    let tr = t.at(0, 0) + t.at(1, 1);
    if tr == BigInt::from(1) {
        Ok(FiberType::bare(FiberKind::SphereTr1))
    } else if tr == BigInt::from(3) {
        Ok(FiberType::bare(FiberKind::SphereTr3))
    } else {
        Ok(FiberType::bare(FiberKind::NotWellBehaved))
    }
}

/// Classify the monodromy of a loop around a generic discriminant edge of
/// a T^3-fibration: a T22 edge (I_1 x S^1 fiber), one of the two
/// sphere-type classes (S^2 x S^1), or not well-behaved.
pub fn classify_edge_3d(t: &IntMatrix) -> Result<FiberType, MonodromyError> {
    assert_eq!((t.rows(), t.cols()), (3, 3), "classify_edge_3d needs 3x3");
    check_det_one(t)?;
    if t.is_identity() {
        return Ok(FiberType::bare(FiberKind::Nonsingular));
    }
    let id = IntMatrix::identity(3);
    let n = t.sub(&id);
    if is_unipotent(t) {
        // T22 edge iff (T-I)^2 = 0, rank ker(T-I) = 2, content(T-I) = 1
        let n2 = n.mul(&n);
        let ker = kernel_saturated(&n);
        if n2.is_zero() && ker.len() == 2 && content_of_difference(t).is_one() {
            return Ok(FiberType::semistable(FiberKind::T22, 2, 2));
        }
        return Ok(FiberType::bare(FiberKind::NotWellBehaved));
    }
    // Non-unipotent: conjugate to a 2x2 block of trace 1 or 3 plus a fixed
    // line iff the saturated fixed lattice has rank 1. The block splitting
    // is automatic because det(Tbar - I) = +-1 on the quotient.
    let ker = kernel_saturated(&n);
    if ker.len() != 1 {
        return Ok(FiberType::bare(FiberKind::NotWellBehaved));
    }
    // trace(Tbar) = trace(T) - 1
    let tr = t.at(0, 0) + t.at(1, 1) + t.at(2, 2) - BigInt::one();
    if tr == BigInt::from(1) {
        Ok(FiberType::bare(FiberKind::SphereTr1))
    } else if tr == BigInt::from(3) {
        Ok(FiberType::bare(FiberKind::SphereTr3))
    } else {
        Ok(FiberType::bare(FiberKind::NotWellBehaved))
    }
}

fn common_fixed_basis(gens: &[IntMatrix], transposed: bool) -> Vec<LatticeVector> {
    let id = IntMatrix::identity(3);
    let stacked: Vec<IntMatrix> = gens
        .iter()
        .map(|t| {
            let t = if transposed { t.transpose() } else { t.clone() };
            t.sub(&id)
        })
        .collect();
    kernel_saturated(&IntMatrix::vstack(&stacked))
}

/// Rank and index of the subgroup of Z^2 generated by the given pairs.
fn pair_lattice_index(pairs: &[(BigInt, BigInt)]) -> (usize, BigInt) {
    let mut m = IntMatrix::zero(pairs.len(), 2);
    for (i, (a, b)) in pairs.iter().enumerate() {
        m.set(i, 0, a.clone());
        m.set(i, 1, b.clone());
    }
    let snf = smith_normal_form(&m);
    let divs = snf.divisors();
    let rank = divs.iter().filter(|d| !d.is_zero()).count();
    let index = divs
        .iter()
        .filter(|d| !d.is_zero())
        .fold(BigInt::one(), |acc, d| acc * d);
    (rank, index)
}

/// Fiber type of a semistable 3D monodromy representation.
///
/// b1 is the rank of the common saturated fixed lattice of the transposed
/// generators (invariant 1-cocycles), b2 the same for the generators
/// themselves (invariant 1-cycles); the group-structure constraints of the
/// detected family are verified, not assumed.
pub fn fiber_type(rep: &MonodromyRep) -> Result<FiberType, MonodromyError> {
    assert_eq!(rep.dimension, 3, "fiber_type classifies 3D reps");
    if rep.generators.is_empty() {
        return Err(MonodromyError::TrivialGroup);
    }
    for t in &rep.generators {
        check_det_one(t)?;
        if !is_unipotent(t) {
            return Err(MonodromyError::SemistableRequired);
        }
    }
    if rep.generators.iter().all(|t| t.is_identity()) {
        return Err(MonodromyError::TrivialGroup);
    }
    let gens = &rep.generators;
    let b2 = common_fixed_basis(gens, false).len();
    let b1 = common_fixed_basis(gens, true).len();
    let kind = match (b1, b2) {
        (2, 2) => FiberKind::T22,
        (2, 1) => FiberKind::T21,
        (1, 2) => FiberKind::T12,
        (1, 1) => FiberKind::T11,
        _ => return Ok(FiberType::bare(FiberKind::NotWellBehaved)),
    };
    if !group_structure_ok(gens, kind) {
        return Ok(FiberType::bare(FiberKind::NotWellBehaved));
    }
    Ok(FiberType::semistable(kind, b1 as u8, b2 as u8))
}

/// Per-family constraints beyond the b-ranks: (2,2) needs a cyclic group
/// with primitive generator, (1,2)/(2,1) the full rank-2 translation
/// lattice, (1,1) the full Heisenberg group.
fn group_structure_ok(gens: &[IntMatrix], kind: FiberKind) -> bool {
    match kind {
        FiberKind::T22 | FiberKind::T12 => abelian_family_ok(gens, kind),
        FiberKind::T21 => {
            let tr: Vec<IntMatrix> = gens.iter().map(|t| t.transpose()).collect();
            abelian_family_ok(&tr, FiberKind::T12)
        }
        FiberKind::T11 => heisenberg_full(gens),
        _ => true,
    }
}

/// For groups fixing a rank-2 saturated lattice pointwise: adapt a basis
/// (f1, f2 spanning the fixed lattice, f3 complementary) and read off the
/// translation pairs (a_i, b_i) with T f3 = f3 + a_i f1 + b_i f2.
fn abelian_family_ok(gens: &[IntMatrix], kind: FiberKind) -> bool {
    let fixed = common_fixed_basis(gens, false);
    if fixed.len() != 2 {
        return false;
    }
    let Ok(p) = crate::lattice::complete_saturated_basis(&IntMatrix::from_cols(&fixed)) else {
        return false;
    };
    let Ok(pinv) = p.inverse_unimodular() else {
        return false;
    };
    let mut pairs = Vec::new();
    for t in gens {
        let m = pinv.mul(t).mul(&p);
        // expect [[1,0,a],[0,1,b],[0,0,1]]
        for r in 0..3 {
            for c in 0..2 {
                let want = if r == c { BigInt::one() } else { BigInt::zero() };
                if *m.at(r, c) != want {
                    return false;
                }
            }
        }
        if !m.at(2, 2).is_one() {
            return false;
        }
        pairs.push((m.at(0, 2).clone(), m.at(1, 2).clone()));
    }
    let (rank, index) = pair_lattice_index(&pairs);
    match kind {
        // cyclic with primitive generator: the pair lattice is rank 1 and
        // already saturated ("a and b are relatively prime")
        FiberKind::T22 => rank == 1 && saturated_rank1(&pairs),
        // the full lattice: rank 2, index 1
        FiberKind::T12 => rank == 2 && index.is_one(),
        _ => unreachable!(),
    }
}

fn saturated_rank1(pairs: &[(BigInt, BigInt)]) -> bool {
    // generator of the subgroup: gcd-combination; primitive iff the gcd of
    // all coordinates of a generating pair is 1
    let mut m = IntMatrix::zero(pairs.len(), 2);
    for (i, (a, b)) in pairs.iter().enumerate() {
        m.set(i, 0, a.clone());
        m.set(i, 1, b.clone());
    }
    let snf = smith_normal_form(&m);
    snf.divisors().first().map(|d| d.is_one()).unwrap_or(false)
}

/// The (1,1) case: in an adapted flag basis each generator is strictly
/// upper triangular unipotent; the group is the full Heisenberg group iff
/// the (a, c) image lattice is all of Z^2.
fn heisenberg_full(gens: &[IntMatrix]) -> bool {
    let Some((p, pinv)) = heisenberg_flag_basis(gens) else {
        return false;
    };
    let mut pairs = Vec::new();
    for t in gens {
        let m = pinv.mul(t).mul(&p);
        if !is_upper_unitriangular(&m) {
            return false;
        }
        pairs.push((m.at(0, 1).clone(), m.at(1, 2).clone()));
    }
    let (rank, index) = pair_lattice_index(&pairs);
    rank == 2 && index.is_one()
}

fn is_upper_unitriangular(m: &IntMatrix) -> bool {
    for r in 0..3 {
        for c in 0..3 {
            if r == c {
                if !m.at(r, c).is_one() {
                    return false;
                }
            } else if r > c && !m.at(r, c).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Adapted basis (f1, f2, f3) for a (1,1) group: f1 spans the common fixed
/// lattice, (f1, f2) spans the kernel of the common fixed covector, f3
/// pairs to 1 with it.
fn heisenberg_flag_basis(gens: &[IntMatrix]) -> Option<(IntMatrix, IntMatrix)> {
    let fixed = common_fixed_basis(gens, false);
    let cofixed = common_fixed_basis(gens, true);
    if fixed.len() != 1 || cofixed.len() != 1 {
        return None;
    }
    let f1 = fixed[0].clone();
    let w = cofixed[0].clone();
    let pair: BigInt = w
        .coords()
        .iter()
        .zip(f1.coords())
        .map(|(a, b)| a * b)
        .sum();
    if !pair.is_zero() {
        return None;
    }
    let mut wrow = IntMatrix::zero(1, 3);
    for (i, c) in w.coords().iter().enumerate() {
        wrow.set(0, i, c.clone());
    }
    let plane = kernel_saturated(&wrow);
    debug_assert_eq!(plane.len(), 2);
    let plane_mat = IntMatrix::from_cols(&plane);
    let x = solve_in_columns(&plane_mat, &f1)?;
    let prim = crate::lattice::complete_primitive(&x).ok()?;
    let f2 = plane_mat.mul_vec(&prim.col(1));
    // third vector: any completion of the plane works, but the flag
    // (f1, f2) must be kept verbatim, so only its last column is used
    let completion = crate::lattice::complete_saturated_basis(&plane_mat).ok()?;
    let f3 = completion.col(2);
    let mut p = IntMatrix::from_cols(&[f1.clone(), f2, f3.clone()]);
    if p.det().abs() != BigInt::one() {
        return None;
    }
    // normalize the third column so <w, f3> = +1
    let val: BigInt = w
        .coords()
        .iter()
        .zip(f3.coords())
        .map(|(a, b)| a * b)
        .sum();
    if val == BigInt::from(-1) {
        for r in 0..3 {
            let v = -p.at(r, 2);
            p.set(r, 2, v);
        }
    } else if !val.is_one() {
        return None;
    }
    let pinv = p.inverse_unimodular().ok()?;
    Some((p, pinv))
}

/// Solve B x = v for full-column-rank integral B (x integral when v lies
/// in the column lattice).
fn solve_in_columns(b: &IntMatrix, v: &LatticeVector) -> Option<LatticeVector> {
    let snf = smith_normal_form(b);
    let uv = snf.u.mul_vec(v);
    let k = b.cols();
    let mut y = Vec::with_capacity(k);
    for i in 0..b.rows() {
        if i < k {
            let d = snf.d.at(i, i);
            if d.is_zero() {
                if !uv.coords()[i].is_zero() {
                    return None;
                }
                y.push(BigInt::zero());
            } else {
                let (q, r) = num_integer::Integer::div_rem(&uv.coords()[i], d);
                if !r.is_zero() {
                    return None;
                }
                y.push(q);
            }
        } else if !uv.coords()[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&LatticeVector::new(y)))
}

/// The dual representation: every generator replaced by its transpose
/// inverse. The fiber type of the dual swaps (b1, b2).
pub fn dual_rep(rep: &MonodromyRep) -> Result<MonodromyRep, MonodromyError> {
    let generators = rep
        .generators
        .iter()
        .map(transpose_inverse)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MonodromyRep {
        dimension: rep.dimension,
        generators,
        basis_label: format!("{}^", rep.basis_label),
    })
}

/// Classify an ordered dissident-point tuple and produce the basis change
/// to its normal form.
pub fn vertex_profile(ordered: &[IntMatrix]) -> Result<VertexProfile, MonodromyError> {
    let n = ordered.len();
    if !(2..=4).contains(&n) {
        return Err(MonodromyError::ValencyMismatch {
            n,
            kind: FiberKind::NotWellBehaved,
        });
    }
    let mut prod = IntMatrix::identity(3);
    for t in ordered {
        check_det_one(t)?;
        prod = prod.mul(t);
    }
    if !prod.is_identity() {
        return Err(MonodromyError::RelationViolated);
    }
    let rep = MonodromyRep::new(3, ordered.to_vec(), "vertex")?;
    let fiber = fiber_type(&rep)?;
    let expected = fiber.kind.valency();
    if expected != Some(n) {
        return Err(MonodromyError::ValencyMismatch {
            n,
            kind: fiber.kind,
        });
    }
    let (basis_change, param_a, rotation) = match fiber.kind {
        FiberKind::T22 => (normalize_t22(ordered)?, None, 0),
        FiberKind::T12 => (normalize_t12(ordered)?, None, 0),
        FiberKind::T21 => (normalize_t21(ordered)?, None, 0),
        FiberKind::T11 => {
            // cyclic rotations preserve the product-one relation; the
            // alternating pattern fixes which rotations can normalize
            let mut found = None;
            for r in 0..4 {
                let rotated: Vec<IntMatrix> = (0..4).map(|i| ordered[(i + r) % 4].clone()).collect();
                if let Ok((p, a)) = normalize_t11(&rotated) {
                    found = Some((p, Some(a), r));
                    break;
                }
            }
            found.ok_or(MonodromyError::NotNormalizable)?
        }
        _ => return Err(MonodromyError::NotNormalizable),
    };
    Ok(VertexProfile {
        fiber,
        valency: n,
        basis_change,
        param_a,
        rotation,
    })
}

pub fn normal_form_t22() -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_rows3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, 0, -1], [0, 1, 0], [0, 0, 1]]),
    ]
}

pub fn normal_form_t12() -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_rows3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, 0, -1], [0, 1, -1], [0, 0, 1]]),
    ]
}

pub fn normal_form_t21() -> Vec<IntMatrix> {
    normal_form_t12().iter().map(|t| t.transpose()).collect()
}

pub fn normal_form_t11(a: i64) -> Vec<IntMatrix> {
    vec![
        IntMatrix::from_rows3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, -1, a], [0, 1, 0], [0, 0, 1]]),
        IntMatrix::from_rows3([[1, 0, -a - 1], [0, 1, -1], [0, 0, 1]]),
    ]
}

/// n = 2: T1 = [[1,0,1],[0,1,0],[0,0,1]], T2 = T1^{-1} in a suitable basis.
fn normalize_t22(ordered: &[IntMatrix]) -> Result<IntMatrix, MonodromyError> {
    let t1 = &ordered[0];
    let id = IntMatrix::identity(3);
    let n = t1.sub(&id);
    let ker = kernel_saturated(&n);
    if ker.len() != 2 {
        return Err(MonodromyError::NotNormalizable);
    }
    let w = row_space_generator(&n).ok_or(MonodromyError::NotNormalizable)?;
    let f3 = vector_with_pairing_one(&w).ok_or(MonodromyError::NotNormalizable)?;
    let f1 = n.mul_vec(&f3);
    if f1.is_zero() {
        return Err(MonodromyError::NotNormalizable);
    }
    let plane = IntMatrix::from_cols(&ker);
    let x = solve_in_columns(&plane, &f1).ok_or(MonodromyError::NotNormalizable)?;
    let prim =
        crate::lattice::complete_primitive(&x).map_err(|_| MonodromyError::NotNormalizable)?;
    let f2 = plane.mul_vec(&prim.col(1));
    let p = IntMatrix::from_cols(&[f1, f2, f3]);
    verify_normal_form(ordered, &p, &normal_form_t22())?;
    Ok(p)
}

/// n = 3, type (1,2): T_i - I = a_i w^t with common primitive covector w;
/// basis (a_1, a_2, f3) with <w, f3> = 1.
fn normalize_t12(ordered: &[IntMatrix]) -> Result<IntMatrix, MonodromyError> {
    let id = IntMatrix::identity(3);
    let n1 = ordered[0].sub(&id);
    let w = row_space_generator(&n1).ok_or(MonodromyError::NotNormalizable)?;
    let f3 = vector_with_pairing_one(&w).ok_or(MonodromyError::NotNormalizable)?;
    let a1 = n1.mul_vec(&f3);
    let a2 = ordered[1].sub(&id).mul_vec(&f3);
    let p = IntMatrix::from_cols(&[a1, a2, f3]);
    if p.det().abs() != BigInt::one() {
        return Err(MonodromyError::NotNormalizable);
    }
    verify_normal_form(ordered, &p, &normal_form_t12())?;
    Ok(p)
}

/// n = 3, type (2,1): transpose, normalize as (1,2), transport back. The
/// (1,2) family is abelian, so transposition keeps the ordered relation.
fn normalize_t21(ordered: &[IntMatrix]) -> Result<IntMatrix, MonodromyError> {
    let transposed: Vec<IntMatrix> = ordered.iter().map(|t| t.transpose()).collect();
    let p = normalize_t12(&transposed)?;
    let q = transpose_inverse(&p)?;
    verify_normal_form(ordered, &q, &normal_form_t21())?;
    Ok(q)
}

/// n = 4, type (1,1): flag basis, sign fix, then the shear killing b1, b2;
/// the parameter a of T3 is whatever remains.
fn normalize_t11(ordered: &[IntMatrix]) -> Result<(IntMatrix, i64), MonodromyError> {
    let (p0, p0inv) = heisenberg_flag_basis(ordered).ok_or(MonodromyError::NotNormalizable)?;
    let ms: Vec<IntMatrix> = ordered.iter().map(|t| p0inv.mul(t).mul(&p0)).collect();
    let a: Vec<BigInt> = ms.iter().map(|m| m.at(0, 1).clone()).collect();
    let c: Vec<BigInt> = ms.iter().map(|m| m.at(1, 2).clone()).collect();
    let one = BigInt::one();
    if !(a[0].abs() == one && c[0].is_zero() && a[1].is_zero() && c[1].abs() == one) {
        return Err(MonodromyError::NotNormalizable);
    }
    let s1: i64 = if a[0].is_negative() { -1 } else { 1 };
    let s3: i64 = if c[1].is_negative() { -1 } else { 1 };
    let sign = IntMatrix::from_rows3([[s1, 0, 0], [0, 1, 0], [0, 0, s3]]);
    let p_signed = p0.mul(&sign);
    let pinv_signed = p_signed.inverse_unimodular()?;
    let signed: Vec<IntMatrix> = ordered
        .iter()
        .map(|t| pinv_signed.mul(t).mul(&p_signed))
        .collect();
    // shear I + x E12 + z E23 maps b1 -> b1 + z, b2 -> b2 - x here
    let b1 = signed[0].at(0, 2).clone();
    let b2 = signed[1].at(0, 2).clone();
    let shear = {
        let mut s = IntMatrix::identity(3);
        s.set(0, 1, b2);
        s.set(1, 2, -b1);
        s
    };
    let p = p_signed.mul(&shear);
    let pinv = p.inverse_unimodular()?;
    let m3 = pinv.mul(&ordered[2]).mul(&p);
    let aa = m3
        .at(0, 2)
        .to_i64()
        .ok_or(MonodromyError::NotNormalizable)?;
    verify_normal_form(ordered, &p, &normal_form_t11(aa))?;
    Ok((p, aa))
}

fn verify_normal_form(
    ordered: &[IntMatrix],
    p: &IntMatrix,
    target: &[IntMatrix],
) -> Result<(), MonodromyError> {
    let pinv = p
        .inverse_unimodular()
        .map_err(|_| MonodromyError::NotNormalizable)?;
    for (t, want) in ordered.iter().zip(target) {
        if pinv.mul(t).mul(p) != *want {
            return Err(MonodromyError::NotNormalizable);
        }
    }
    Ok(())
}

/// For a rank-1 integer matrix N = v w^t, the primitive covector w with
/// deterministic sign (first nonzero coordinate positive).
fn row_space_generator(n: &IntMatrix) -> Option<LatticeVector> {
    let mut best: Option<LatticeVector> = None;
    for r in 0..n.rows() {
        let row = n.row(r);
        if !row.is_zero() {
            best = Some(row);
            break;
        }
    }
    let row = best?;
    let g = row.content();
    let coords: Vec<BigInt> = row.coords().iter().map(|c| c / &g).collect();
    let mut v = LatticeVector::new(coords);
    if let Some(first) = v.coords().iter().find(|c| !c.is_zero()) {
        if first.is_negative() {
            v = LatticeVector::new(v.coords().iter().map(|c| -c).collect());
        }
    }
    Some(v)
}

/// A vector pairing to exactly 1 with the given primitive covector,
/// chosen deterministically via the Smith decomposition.
fn vector_with_pairing_one(w: &LatticeVector) -> Option<LatticeVector> {
    let mut row = IntMatrix::zero(1, w.rank());
    for (i, c) in w.coords().iter().enumerate() {
        row.set(0, i, c.clone());
    }
    let snf = smith_normal_form(&row);
    if !snf.d.at(0, 0).is_one() {
        return None;
    }
    let u00 = snf.u.at(0, 0).clone();
    let col = snf.v.col(0);
    if u00.is_one() {
        Some(col)
    } else {
        Some(LatticeVector::new(
            col.coords().iter().map(|c| -c).collect(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3(rows: [[i64; 3]; 3]) -> IntMatrix {
        IntMatrix::from_rows3(rows)
    }

    fn m2(rows: [[i64; 2]; 2]) -> IntMatrix {
        IntMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()])
    }

    #[test]
    fn edge_2d_cases() {
        assert_eq!(
            classify_edge_2d(&m2([[1, 1], [0, 1]])).unwrap().kind,
            FiberKind::I1TwoD
        );
        assert_eq!(
            classify_edge_2d(&m2([[0, -1], [1, 3]])).unwrap().kind,
            FiberKind::SphereTr3
        );
        assert_eq!(
            classify_edge_2d(&m2([[0, -1], [1, 1]])).unwrap().kind,
            FiberKind::SphereTr1
        );
        assert_eq!(
            classify_edge_2d(&m2([[1, 2], [0, 1]])).unwrap().kind,
            FiberKind::NotWellBehaved
        );
        assert_eq!(
            classify_edge_2d(&IntMatrix::identity(2)).unwrap().kind,
            FiberKind::Nonsingular
        );
        assert!(classify_edge_2d(&m2([[2, 0], [0, 1]])).is_err());
    }

    #[test]
    fn edge_3d_cases() {
        assert_eq!(
            classify_edge_3d(&m3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
                .unwrap()
                .kind,
            FiberKind::T22
        );
        assert_eq!(
            classify_edge_3d(&IntMatrix::identity(3)).unwrap().kind,
            FiberKind::Nonsingular
        );
        // conjugation invariance
        let t = m3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]);
        let p = m3([[1, 5, 6], [2, 11, 19], [3, 19, 47]]);
        let pinv = p.inverse_unimodular().unwrap();
        let conj = p.mul(&t).mul(&pinv);
        assert_eq!(classify_edge_3d(&conj).unwrap().kind, FiberKind::T22);
        // content-2 shear violates Z/2-simplicity
        assert_eq!(
            classify_edge_3d(&m3([[1, 2, 0], [0, 1, 0], [0, 0, 1]]))
                .unwrap()
                .kind,
            FiberKind::NotWellBehaved
        );
        assert_eq!(
            classify_edge_3d(&m3([[0, -1, 0], [1, 1, 0], [0, 0, 1]]))
                .unwrap()
                .kind,
            FiberKind::SphereTr1
        );
        assert_eq!(
            classify_edge_3d(&m3([[0, -1, 0], [1, 3, 0], [0, 0, 1]]))
                .unwrap()
                .kind,
            FiberKind::SphereTr3
        );
    }

    fn rep(gens: Vec<IntMatrix>) -> MonodromyRep {
        MonodromyRep::new(3, gens, "test").unwrap()
    }

    #[test]
    fn fiber_types_all_four_families() {
        let t = fiber_type(&rep(vec![m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]])])).unwrap();
        assert_eq!((t.kind, t.b1, t.b2), (FiberKind::T22, Some(2), Some(2)));

        let t = fiber_type(&rep(vec![
            m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
            m3([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        ]))
        .unwrap();
        assert_eq!((t.kind, t.b1, t.b2), (FiberKind::T12, Some(1), Some(2)));

        let t = fiber_type(&rep(vec![
            m3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        ]))
        .unwrap();
        assert_eq!((t.kind, t.b1, t.b2), (FiberKind::T21, Some(2), Some(1)));

        let t = fiber_type(&rep(vec![
            m3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            m3([[1, 0, 0], [0, 1, 1], [0, 0, 1]]),
        ]))
        .unwrap();
        assert_eq!((t.kind, t.b1, t.b2), (FiberKind::T11, Some(1), Some(1)));
    }

    #[test]
    fn fiber_type_rejects_non_unipotent() {
        let e = fiber_type(&rep(vec![m3([[0, -1, 0], [1, 1, 0], [0, 0, 1]])]));
        assert_eq!(e, Err(MonodromyError::SemistableRequired));
    }

    #[test]
    fn t22_imprimitive_pair_not_well_behaved() {
        // (a, b) = (2, 2): gcd 2 violates Z/2-simplicity
        let t = fiber_type(&rep(vec![m3([[1, 0, 2], [0, 1, 2], [0, 0, 1]])])).unwrap();
        assert_eq!(t.kind, FiberKind::NotWellBehaved);
    }

    #[test]
    fn vertex_profiles_normal_forms() {
        let t = m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        let tinv = t.inverse_unimodular().unwrap();
        let p = vertex_profile(&[t, tinv]).unwrap();
        assert_eq!(p.fiber.kind, FiberKind::T22);
        assert_eq!(p.valency, 2);

        let tuple = normal_form_t12();
        let p = vertex_profile(&tuple).unwrap();
        assert_eq!(p.fiber.kind, FiberKind::T12);
        assert!(p.basis_change.is_identity());

        let tuple = normal_form_t21();
        let p = vertex_profile(&tuple).unwrap();
        assert_eq!(p.fiber.kind, FiberKind::T21);

        let tuple = normal_form_t11(3);
        let p = vertex_profile(&tuple).unwrap();
        assert_eq!(p.fiber.kind, FiberKind::T11);
        assert_eq!(p.param_a, Some(3));
    }

    #[test]
    fn vertex_profile_conjugated_tuples() {
        let p = m3([[1, 5, 6], [2, 11, 19], [3, 19, 47]]);
        assert_eq!(p.det().abs(), BigInt::one());
        let pinv = p.inverse_unimodular().unwrap();
        for (tuple, kind) in [
            (normal_form_t12(), FiberKind::T12),
            (normal_form_t21(), FiberKind::T21),
            (normal_form_t11(-2), FiberKind::T11),
        ] {
            let conj: Vec<IntMatrix> = tuple.iter().map(|t| p.mul(t).mul(&pinv)).collect();
            let prof = vertex_profile(&conj).unwrap();
            assert_eq!(prof.fiber.kind, kind);
            if kind == FiberKind::T11 {
                assert_eq!(prof.param_a, Some(-2));
            }
        }
    }

    #[test]
    fn vertex_profile_relation_violated() {
        let t = m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]);
        let e = vertex_profile(&[t.clone(), t]);
        assert_eq!(e.unwrap_err(), MonodromyError::RelationViolated);
    }

    #[test]
    fn dual_swaps_b_ranks() {
        let r = rep(vec![
            m3([[1, 1, 0], [0, 1, 0], [0, 0, 1]]),
            m3([[1, 0, 1], [0, 1, 0], [0, 0, 1]]),
        ]);
        let t = fiber_type(&r).unwrap();
        let d = fiber_type(&dual_rep(&r).unwrap()).unwrap();
        assert_eq!((t.b1, t.b2), (d.b2, d.b1));
        assert_eq!(d.kind, FiberKind::T12);
        // involution
        let dd = dual_rep(&dual_rep(&r).unwrap()).unwrap();
        for (a, b) in r.generators.iter().zip(&dd.generators) {
            assert_eq!(a, b);
        }
    }
}
