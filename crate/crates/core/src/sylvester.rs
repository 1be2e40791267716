//! The quaternionic Sylvester equation `a x − x b = c`.
//!
//! The solution set splits into three regimes:
//!
//! 1. `a0 ≠ b0` or `|Im a| ≠ |Im b|`: the map `x ↦ a x − x b` is invertible and
//!    `x = (a² − 2 b0 a + |b|²)⁻¹ (a c − c conj(b))`.
//! 2. `a0 = b0`, `|Im a| = |Im b|` and `c = 0`: a two-dimensional real family
//!    `x = p − Im(a) p Im(b) / (|Im a| |Im b|)` indexed by a free `p`.
//! 3. Same similarity class but `c ≠ 0`: solvable only when `c` lies in the range
//!    of the map. A particular solution is `(c b − a c) / (4 |Im a|²)` and the
//!    free part is the regime-2 family.

use crate::quaternion::Quaternion;

/// Relative tolerance used to decide the exact-arithmetic dichotomies.
pub const BRANCH_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SylvesterBranch {
    /// Unique solution.
    Unique,
    /// Homogeneous equation with a kernel.
    Homogeneous,
    /// Inhomogeneous equation with a kernel.
    Singular,
}

/// True when `a` and `b` are similar (`a = q b q⁻¹` for some `q`), up to
/// [`BRANCH_TOL`].
pub fn similar(a: Quaternion, b: Quaternion) -> bool {
    let scale = 1.0f64.max(a.norm()).max(b.norm());
    let tol = BRANCH_TOL * scale;
    (a.re() - b.re()).abs() <= tol && (a.im().norm() - b.im().norm()).abs() <= tol
}

pub fn sylvester_branch(a: Quaternion, b: Quaternion, c: Quaternion) -> SylvesterBranch {
    if !similar(a, b) {
        SylvesterBranch::Unique
    } else if c.norm() <= BRANCH_TOL * 1.0f64.max(a.norm()).max(b.norm()) {
        SylvesterBranch::Homogeneous
    } else {
        SylvesterBranch::Singular
    }
}

/// Kernel element `p − Im(a) p Im(b) / (|Im a| |Im b|)` of `x ↦ a x − x b` for
/// similar `a`, `b`. Degenerates to `p` when both are real.
pub fn sylvester_kernel(a: Quaternion, b: Quaternion, p: Quaternion) -> Quaternion {
    let (ua, ub) = (a.im(), b.im());
    let denom = ua.norm() * ub.norm();
    if denom == 0.0 {
        return p;
    }
    p - ua * p * ub / denom
}

/// Solves `a x − x b = c`. The free parameter `p` is only used when the
/// solution is not unique.
///
/// In the singular regime a right-hand side outside the range of the map has
/// no solution; the returned value then fails [`sylvester_residual`].
pub fn solve_sylvester(a: Quaternion, b: Quaternion, c: Quaternion, p: Quaternion) -> Quaternion {
    match sylvester_branch(a, b, c) {
        SylvesterBranch::Unique => {
            let m = a * a - 2.0 * b.re() * a + Quaternion::real(b.norm_sqr());
            m.inv() * (a * c - c * b.conj())
        }
        SylvesterBranch::Homogeneous => sylvester_kernel(a, b, p),
        SylvesterBranch::Singular => {
            let ua = a.im().norm_sqr();
            if ua == 0.0 {
                // a = b real: the map is zero and c ≠ 0 has no preimage.
                return p;
            }
            (c * b - a * c) / (4.0 * ua) + sylvester_kernel(a, b, p)
        }
    }
}

/// `|a x − x b − c|`.
pub fn sylvester_residual(a: Quaternion, b: Quaternion, c: Quaternion, x: Quaternion) -> f64 {
    (a * x - x * b - c).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Quaternion as Q;

    #[test]
    fn homogeneous_example() {
        let p = Q::new(0.3, -0.7, 1.1, 0.2);
        let x = solve_sylvester(Q::I, Q::J, Q::ZERO, p);
        assert_eq!(
            sylvester_branch(Q::I, Q::J, Q::ZERO),
            SylvesterBranch::Homogeneous
        );
        let expect = p - Q::I * p * Q::J;
        assert!((x - expect).norm() < 1e-15);
        assert!(sylvester_residual(Q::I, Q::J, Q::ZERO, x) < 1e-15);
    }

    #[test]
    fn real_scalar_equation() {
        let x = solve_sylvester(Q::real(2.0), Q::real(1.0), Q::real(1.0), Q::ZERO);
        assert!((x - Q::ONE).norm() < 1e-15);
    }

    #[test]
    fn singular_branch_with_reachable_rhs() {
        // i x − x i = j has solutions −k/2 + span{1, i}.
        let x = solve_sylvester(Q::I, Q::I, Q::J, Q::ZERO);
        assert!((x - Q::K * -0.5).norm() < 1e-15);
        // a nonzero real part does not change the map.
        let a = Q::new(1.0, 1.0, 0.0, 0.0);
        let x = solve_sylvester(a, a, Q::J, Q::new(0.2, 0.1, -0.4, 0.3));
        assert!(sylvester_residual(a, a, Q::J, x) < 1e-15);
    }

    #[test]
    fn unreachable_rhs_is_flagged_by_residual() {
        // range of x ↦ i x − x i is span{j, k}; c = 1 is outside it.
        let x = solve_sylvester(Q::I, Q::I, Q::ONE, Q::ZERO);
        assert!(sylvester_residual(Q::I, Q::I, Q::ONE, x) > 0.5);
    }

    #[test]
    fn both_unique_formulas_agree() {
        let a = Q::new(0.4, 1.0, -0.3, 0.2);
        let b = Q::new(-0.1, 0.2, 0.9, -0.5);
        let c = Q::new(1.0, -2.0, 0.5, 0.25);
        let x = solve_sylvester(a, b, c, Q::ZERO);
        // right-sided form: (c b − conj(a) c) {2(a0 − b0) b + |b|² − |a|²}⁻¹
        let right = (c * b - a.conj() * c)
            * (2.0 * (a.re() - b.re()) * b + Q::real(b.norm_sqr() - a.norm_sqr())).inv();
        assert!((x - right).norm() < 1e-14);
        // b² − 2 a0 b + |a|² is the negative of that divisor
        let flipped =
            (c * b - a.conj() * c) * (b * b - 2.0 * a.re() * b + Q::real(a.norm_sqr())).inv();
        assert!((x + flipped).norm() < 1e-14);
        assert!(sylvester_residual(a, b, c, x) < 1e-14);
    }

    #[test]
    fn real_equal_coefficients() {
        let p = Q::new(1.0, 2.0, 3.0, 4.0);
        assert_eq!(solve_sylvester(Q::real(2.0), Q::real(2.0), Q::ZERO, p), p);
    }
}
