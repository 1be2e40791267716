//! Quaternionic coin operators: validation, the left/right move split,
//! classification, and the Fourier symbol `U(θ)`.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, RngExt};
use serde::{Deserialize, Serialize};

use crate::cmatrix::ComplexMatrix;
use crate::error::{QqwError, Result, UnitarityRelation};
use crate::quaternion::{QMat2, Quaternion};

/// Tolerance for the unitarity relations.
pub const UNITARITY_TOL: f64 = 1e-10;
/// A coin component is treated as zero below this modulus.
pub const ZERO_TOL: f64 = 1e-12;

#[derive(Deserialize)]
struct RawCoin {
    a: Quaternion,
    b: Quaternion,
    c: Quaternion,
    d: Quaternion,
}

/// A validated 2×2 quaternionic unitary `[[a, b], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCoin")]
pub struct Coin {
    a: Quaternion,
    b: Quaternion,
    c: Quaternion,
    d: Quaternion,
}

impl TryFrom<RawCoin> for Coin {
    type Error = QqwError;
    fn try_from(raw: RawCoin) -> Result<Coin> {
        validate_coin(raw.a, raw.b, raw.c, raw.d)
    }
}

/// Residuals of the five unitarity relations, in the order of
/// [`UnitarityRelation`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct UnitarityResiduals {
    pub row_norm: f64,
    pub row_orthogonality: f64,
    pub column_orthogonality: f64,
    pub diagonal_modulus: f64,
    pub off_diagonal_modulus: f64,
}

impl UnitarityResiduals {
    pub fn compute(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Self {
        let row1 = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
        let row2 = (c.norm_sqr() + d.norm_sqr() - 1.0).abs();
        UnitarityResiduals {
            row_norm: row1.max(row2),
            row_orthogonality: (a * c.conj() + b * d.conj()).norm(),
            column_orthogonality: (a.conj() * b + c.conj() * d).norm(),
            diagonal_modulus: (a.norm_sqr() - d.norm_sqr()).abs(),
            off_diagonal_modulus: (b.norm_sqr() - c.norm_sqr()).abs(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (UnitarityRelation, f64)> {
        [
            (UnitarityRelation::RowNorm, self.row_norm),
            (UnitarityRelation::RowOrthogonality, self.row_orthogonality),
            (
                UnitarityRelation::ColumnOrthogonality,
                self.column_orthogonality,
            ),
            (UnitarityRelation::DiagonalModulus, self.diagonal_modulus),
            (
                UnitarityRelation::OffDiagonalModulus,
                self.off_diagonal_modulus,
            ),
        ]
        .into_iter()
    }

    pub fn max(&self) -> f64 {
        self.iter().map(|(_, r)| r).fold(0.0, f64::max)
    }
}

/// Checks the unitarity relations and returns the coin, or the first relation
/// that fails.
pub fn validate_coin(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> Result<Coin> {
    validate_coin_with_tol(a, b, c, d, UNITARITY_TOL)
}

pub fn validate_coin_with_tol(
    a: Quaternion,
    b: Quaternion,
    c: Quaternion,
    d: Quaternion,
    tol: f64,
) -> Result<Coin> {
    let residuals = UnitarityResiduals::compute(a, b, c, d);
    for (relation, residual) in residuals.iter() {
        // NaN compares false, so test for acceptance rather than rejection.
        if residual.is_nan() || residual > tol {
            return Err(QqwError::NotUnitary { relation, residual });
        }
    }
    Ok(Coin { a, b, c, d })
}

impl Coin {
    pub fn a(&self) -> Quaternion {
        self.a
    }
    pub fn b(&self) -> Quaternion {
        self.b
    }
    pub fn c(&self) -> Quaternion {
        self.c
    }
    pub fn d(&self) -> Quaternion {
        self.d
    }

    pub fn entries(&self) -> [Quaternion; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn matrix(&self) -> QMat2 {
        QMat2::new(self.a, self.b, self.c, self.d)
    }

    pub fn residuals(&self) -> UnitarityResiduals {
        UnitarityResiduals::compute(self.a, self.b, self.c, self.d)
    }

    /// `abcd ≠ 0`, i.e. no entry is zero.
    pub fn all_nonzero(&self) -> bool {
        self.entries().iter().all(|q| q.norm() > ZERO_TOL)
    }

    /// Every entry has zero perplex part, so the coin lies in `U(2, ℂ)`.
    pub fn is_complex(&self) -> bool {
        self.entries()
            .iter()
            .all(|q| q.perplex().norm() <= ZERO_TOL)
    }

    /// `a` and `d` real.
    pub fn is_case3(&self) -> bool {
        self.a.im().norm() <= ZERO_TOL && self.d.im().norm() <= ZERO_TOL
    }

    /// `a`, `d` simplex only and `b`, `c` perplex only.
    pub fn is_case4(&self) -> bool {
        let simplex_only = |q: Quaternion| q.perplex().norm() <= ZERO_TOL;
        let perplex_only = |q: Quaternion| q.simplex().norm() <= ZERO_TOL;
        simplex_only(self.a) && simplex_only(self.d) && perplex_only(self.b) && perplex_only(self.c)
    }

    /// `a0 = d0 = 0`, the regime with the quaternionic limit density.
    pub fn is_case5(&self) -> bool {
        self.a.re().abs() <= ZERO_TOL && self.d.re().abs() <= ZERO_TOL
    }

    /// `Re(bc)`.
    pub fn re_bc(&self) -> f64 {
        (self.b * self.c).re()
    }

    pub fn class(&self) -> CoinClass {
        classify(self)
    }
}

impl fmt::Display for Coin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Left and right move operators `P = [[a, b], [0, 0]]`, `Q = [[0, 0], [c, d]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoveOperators {
    pub p: QMat2,
    pub q: QMat2,
}

pub fn split_pq(coin: &Coin) -> MoveOperators {
    let z = Quaternion::ZERO;
    MoveOperators {
        p: QMat2::new(coin.a, coin.b, z, z),
        q: QMat2::new(z, z, coin.c, coin.d),
    }
}

impl MoveOperators {
    /// Rebuilds the coin from `P + Q`.
    pub fn recombine(&self) -> Result<Coin> {
        let m = self.p + self.q;
        validate_coin(m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CoinClass {
    /// `b = c = 0`
    Case1,
    /// `a = d = 0`
    Case2,
    /// `a, d` real
    Case3,
    /// `a, d` simplex only and `b, c` perplex only
    Case4,
    /// `a0 = d0 = 0`
    Case5,
    General,
}

impl CoinClass {
    pub fn tag(self) -> &'static str {
        match self {
            CoinClass::Case1 => "Case1",
            CoinClass::Case2 => "Case2",
            CoinClass::Case3 => "Case3",
            CoinClass::Case4 => "Case4",
            CoinClass::Case5 => "Case5",
            CoinClass::General => "General",
        }
    }
}

impl fmt::Display for CoinClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Most specific class wins: Case1 > Case2 > Case4 > Case3 > Case5 > General.
pub fn classify(coin: &Coin) -> CoinClass {
    let zero = |q: Quaternion| q.norm() <= ZERO_TOL;
    let (a, b, c, d) = (coin.a, coin.b, coin.c, coin.d);

    if zero(b) && zero(c) {
        CoinClass::Case1
    } else if zero(a) && zero(d) {
        CoinClass::Case2
    } else if coin.is_case4() {
        CoinClass::Case4
    } else if coin.is_case3() {
        CoinClass::Case3
    } else if coin.is_case5() {
        CoinClass::Case5
    } else {
        CoinClass::General
    }
}

/// The Fourier symbol `U(θ) = diag(e^{iθ}, e^{iθ}, e^{−iθ}, e^{−iθ}) χ(U)`.
#[derive(Clone, Debug)]
pub struct ThetaCoin {
    pub theta: f64,
    pub matrix: ComplexMatrix,
}

pub fn u_theta(coin: &Coin, theta: f64) -> ThetaCoin {
    let mut m = coin.matrix().chi();
    let up = Complex64::from_polar(1.0, theta);
    let down = up.conj();
    for r in 0..4 {
        let f = if r < 2 { up } else { down };
        for c in 0..4 {
            m[(r, c)] *= f;
        }
    }
    ThetaCoin { theta, matrix: m }
}

/// Families for the random coin generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoinFamily {
    General,
    Complex,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

impl std::str::FromStr for CoinFamily {
    type Err = QqwError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "general" => CoinFamily::General,
            "complex" => CoinFamily::Complex,
            "case1" => CoinFamily::Case1,
            "case2" => CoinFamily::Case2,
            "case3" => CoinFamily::Case3,
            "case4" => CoinFamily::Case4,
            "case5" => CoinFamily::Case5,
            other => return Err(QqwError::Usage(format!("unknown coin family '{other}'"))),
        })
    }
}

/// Uniformly distributed unit quaternion restricted to the components selected
/// by `mask`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, mask: [bool; 4]) -> Quaternion {
    loop {
        let mut v = [0.0; 4];
        for (x, on) in v.iter_mut().zip(mask) {
            if on {
                *x = rng.random_range(-1.0..1.0);
            }
        }
        let q = Quaternion::from(v);
        let n = q.norm();
        if n > 1e-3 && n <= 1.0 {
            return q / n;
        }
    }
}

/// Draws a random valid coin from `family`.
///
/// `a` and `b` get moduli `cos φ` and `sin φ`; `d` is drawn with `|d| = |a|`
/// and `c = −d conj(b) a / |a|²` then enforces row orthogonality. Candidates
/// whose unitarity residual exceeds `1e−12` are rejected.
pub fn random_coin<R: Rng + ?Sized>(family: CoinFamily, rng: &mut R) -> Coin {
    const ALL: [bool; 4] = [true; 4];
    const SIMPLEX: [bool; 4] = [true, true, false, false];
    const PERPLEX: [bool; 4] = [false, false, true, true];
    const PURE: [bool; 4] = [false, true, true, true];
    loop {
        let phi: f64 = rng.random_range(0.15..1.42);
        let (s, co) = phi.sin_cos();
        let (a, b, c, d) = match family {
            CoinFamily::Case1 => {
                let a = random_unit(rng, ALL);
                let d = random_unit(rng, ALL);
                (a, Quaternion::ZERO, Quaternion::ZERO, d)
            }
            CoinFamily::Case2 => {
                let b = random_unit(rng, ALL);
                let c = random_unit(rng, ALL);
                (Quaternion::ZERO, b, c, Quaternion::ZERO)
            }
            CoinFamily::Case3 => {
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let a_sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                let a = Quaternion::real(a_sign * co);
                let b = random_unit(rng, ALL) * s;
                (a, b, -sign * b.conj(), sign * a)
            }
            _ => {
                let (ma, mb) = match family {
                    CoinFamily::General => (ALL, ALL),
                    CoinFamily::Complex => (SIMPLEX, SIMPLEX),
                    CoinFamily::Case4 => (SIMPLEX, PERPLEX),
                    CoinFamily::Case5 => (PURE, ALL),
                    _ => unreachable!(),
                };
                let a = random_unit(rng, ma) * co;
                let b = random_unit(rng, mb) * s;
                let d = random_unit(rng, ma) * co;
                let c = -(d * b.conj() * a) / a.norm_sqr();
                (a, b, c, d)
            }
        };
        if let Ok(coin) = validate_coin_with_tol(a, b, c, d, 1e-12) {
            return coin;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2 as S;
    use Quaternion as Q;

    fn hadamard() -> Coin {
        validate_coin(Q::real(S), Q::real(S), Q::real(S), Q::real(-S)).unwrap()
    }

    #[test]
    fn validation_examples() {
        hadamard();
        let c4 = validate_coin(Q::I * S, Q::J * S, Q::J * S, Q::I * S).unwrap();
        assert!(c4.residuals().max() < 1e-15);
        match validate_coin(Q::ONE, Q::ONE, Q::ZERO, Q::ZERO) {
            Err(QqwError::NotUnitary { relation, residual }) => {
                assert_eq!(relation, UnitarityRelation::RowNorm);
                assert!((residual - 1.0).abs() < 1e-15);
            }
            other => panic!("expected NotUnitary, got {other:?}"),
        }
    }

    #[test]
    fn orthogonality_failure_is_named() {
        // unit rows but parallel
        let err = validate_coin(Q::real(S), Q::real(S), Q::real(S), Q::real(S)).unwrap_err();
        match err {
            QqwError::NotUnitary { relation, .. } => {
                assert_eq!(relation, UnitarityRelation::RowOrthogonality)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_entries_are_rejected() {
        assert!(validate_coin(Q::real(f64::NAN), Q::ZERO, Q::ZERO, Q::ONE).is_err());
    }

    #[test]
    fn split_examples() {
        let case1 = validate_coin(Q::I, Q::ZERO, Q::ZERO, -Q::K).unwrap();
        let ops = split_pq(&case1);
        assert_eq!(ops.p * ops.q, QMat2::ZERO);
        assert_eq!(ops.q * ops.p, QMat2::ZERO);

        let case2 = validate_coin(Q::ZERO, Q::J, Q::K, Q::ZERO).unwrap();
        let ops = split_pq(&case2);
        assert_eq!(ops.p * ops.p, QMat2::ZERO);
        assert_eq!(ops.q * ops.q, QMat2::ZERO);

        let h = hadamard();
        let ops = split_pq(&h);
        assert_eq!(ops.p + ops.q, h.matrix());
        assert_eq!(ops.p.get(1, 0), Q::ZERO);
        assert_eq!(ops.q.get(0, 1), Q::ZERO);
    }

    #[test]
    fn classification_examples() {
        let case1 = validate_coin(Q::I, Q::ZERO, Q::ZERO, -Q::I).unwrap();
        assert_eq!(classify(&case1), CoinClass::Case1);

        // d = −a forces c = conj(b). With b in span{j, k} the coin also fits
        // the Case 4 pattern, which takes precedence.
        let b = (Q::J + Q::K) * 0.5;
        let both = validate_coin(Q::real(S), b, b.conj(), Q::real(-S)).unwrap();
        assert_eq!(classify(&both), CoinClass::Case4);
        let b = (Q::I + Q::J) * 0.5;
        let case3 = validate_coin(Q::real(S), b, b.conj(), Q::real(-S)).unwrap();
        assert_eq!(classify(&case3), CoinClass::Case3);

        let case4 = validate_coin(Q::I * S, Q::J * S, Q::J * S, Q::I * S).unwrap();
        assert!(case4.is_case5());
        assert_eq!(classify(&case4), CoinClass::Case4);

        let case5 = validate_coin(Q::J * S, Q::J * S, Q::K * S, Q::K * -S).unwrap();
        assert_eq!(classify(&case5), CoinClass::Case5);

        assert_eq!(classify(&hadamard()), CoinClass::Case3);
    }

    #[test]
    fn sign_mismatched_case3_is_not_unitary() {
        let b = (Q::J + Q::K) * 0.5;
        assert!(validate_coin(Q::real(S), b, -b.conj(), Q::real(-S)).is_err());
    }

    #[test]
    fn u_theta_examples() {
        let h = hadamard();
        let at0 = u_theta(&h, 0.0);
        assert!(at0.matrix.max_diff(&h.matrix().chi()) < 1e-15);

        let half = u_theta(&h, std::f64::consts::FRAC_PI_2).matrix;
        let chi = h.matrix().chi();
        let i = Complex64::i();
        for r in 0..4 {
            let f = if r < 2 { i } else { -i };
            for c in 0..4 {
                assert!((half[(r, c)] - f * chi[(r, c)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn determinant_of_symbol_is_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let coin = random_coin(CoinFamily::General, &mut rng);
        for _ in 0..100 {
            let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            let det = u_theta(&coin, theta).matrix.determinant();
            assert!((det.norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn generator_families_classify_as_expected() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..50 {
            assert_eq!(
                random_coin(CoinFamily::Case1, &mut rng).class(),
                CoinClass::Case1
            );
            assert_eq!(
                random_coin(CoinFamily::Case2, &mut rng).class(),
                CoinClass::Case2
            );
            assert_eq!(
                random_coin(CoinFamily::Case3, &mut rng).class(),
                CoinClass::Case3
            );
            assert_eq!(
                random_coin(CoinFamily::Case4, &mut rng).class(),
                CoinClass::Case4
            );
            assert_eq!(
                random_coin(CoinFamily::Case5, &mut rng).class(),
                CoinClass::Case5
            );
            assert_eq!(
                random_coin(CoinFamily::General, &mut rng).class(),
                CoinClass::General
            );
            assert!(random_coin(CoinFamily::Complex, &mut rng).is_complex());
        }
    }

    #[test]
    fn single_zero_entry_is_impossible() {
        // |a| = |d| and |b| = |c| pair the zeros, so abcd = 0 means Case 1 or 2.
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for family in [CoinFamily::Case1, CoinFamily::Case2, CoinFamily::General] {
            for _ in 0..50 {
                let coin = random_coin(family, &mut rng);
                let zeros = coin
                    .entries()
                    .iter()
                    .filter(|q| q.norm() <= ZERO_TOL)
                    .count();
                assert!(zeros == 0 || zeros == 2);
                if !coin.all_nonzero() {
                    assert!(matches!(coin.class(), CoinClass::Case1 | CoinClass::Case2));
                }
            }
        }
        let a = Q::real(S);
        assert!(validate_coin(a, Q::real(S), Q::real(1.0), Q::ZERO).is_err());
    }

    #[test]
    fn coin_json_roundtrip_validates() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let coin = random_coin(CoinFamily::General, &mut rng);
        let json = serde_json::to_string(&coin).unwrap();
        let back: Coin = serde_json::from_str(&json).unwrap();
        assert_eq!(back, coin);
        let bad = r#"{"a":[1,0,0,0],"b":[1,0,0,0],"c":[0,0,0,0],"d":[0,0,0,0]}"#;
        assert!(serde_json::from_str::<Coin>(bad).is_err());
    }
}
