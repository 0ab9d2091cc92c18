//! Resistive force theory with pairwise interaction, and the assembly of
//! the 6x6 resistance matrix `R` and the 6x2 shape-coupling matrix `Phi`.
//!
//! Forces and torques on the pair satisfy
//!
//! ```text
//! -Lambda (F1, T1, F2, T2) = R (x1', y1', theta1', x2', y2', theta2') + Phi (sigma1', sigma2')
//! ```
//!
//! with the row/column ordering fixed as `(x1, y1, theta1, x2, y2, theta2)`
//! and the columns of `Phi` ordered `(sigma1', sigma2')`. The off-diagonal
//! torque rows carry the `d_i` blocks exactly as derived from the torque
//! density; `R` is not symmetric once `lambda > 0` and no symmetrization is
//! applied.

use nalgebra::{Matrix2, Matrix3, Matrix6, SMatrix, Vector2};

use crate::error::{ModelError, Result};
use crate::geometry::{perp, point_velocity, state_link_direction, Link, Scallop, ScallopPairParams, StateRates, SystemState};

pub type Matrix6x2 = SMatrix<f64, 6, 2>;

const UNIT_TOLERANCE: f64 = 1e-9;

/// Anisotropic drag operator `C_perp I + (C_par - C_perp) e e^T` of a link
/// with unit direction `e`.
pub fn rft_operator(e: &Vector2<f64>, c_par: f64, c_perp: f64) -> Result<Matrix2<f64>> {
    let norm = e.norm();
    if (norm - 1.0).abs() > UNIT_TOLERANCE {
        return Err(ModelError::NonUnitDirection(norm));
    }
    Ok(Matrix2::identity() * c_perp + (e * e.transpose()) * (c_par - c_perp))
}

fn drag(state: &SystemState, params: &ScallopPairParams, i: Scallop, j: Link) -> Matrix2<f64> {
    let e = state_link_direction(state, i, j);
    Matrix2::identity() * params.c_perp + (e * e.transpose()) * (params.c_par - params.c_perp)
}

/// Hydrodynamic force per unit length at arclength `s` on link `j` of
/// scallop `i`. Link `j` interacts only with link `j` of the other scallop.
pub fn force_density(
    state: &SystemState,
    rates: &StateRates,
    params: &ScallopPairParams,
    i: Scallop,
    j: Link,
    s: f64,
) -> Result<Vector2<f64>> {
    let other = i.other();
    let own_velocity = point_velocity(state, rates, i, j, s, params.length)?;
    let other_velocity = point_velocity(state, rates, other, j, s, params.length)?;
    let big_lambda = params.big_lambda();
    let own = drag(state, params, i, j) * own_velocity;
    let cross = drag(state, params, other, j) * other_velocity;
    Ok(own * (-1.0 / big_lambda) + cross * (params.lambda() / big_lambda))
}

/// Torque density about the hinge of scallop `i`, `(x - x_i) x f`.
pub fn torque_density(
    state: &SystemState,
    rates: &StateRates,
    params: &ScallopPairParams,
    i: Scallop,
    j: Link,
    s: f64,
) -> Result<f64> {
    let f = force_density(state, rates, params, i, j, s)?;
    let arm = state_link_direction(state, i, j) * s;
    Ok(perp(&arm).dot(&f))
}

/// Integrated force and torque coefficients of one scallop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBlocks {
    /// Force against own hinge translation.
    pub a: Matrix2<f64>,
    /// Force against own rotation, and torque against own translation.
    pub b: Vector2<f64>,
    /// Force against own opening rate.
    pub alpha: Vector2<f64>,
    /// Torque against the other scallop's translation.
    pub d: Vector2<f64>,
    /// `2 L^3 C_perp / 3`, torque against own rotation.
    pub omega_coef: f64,
    /// Torque against the other scallop's rotation.
    pub varpi: f64,
    /// Torque against the other scallop's opening rate.
    pub beta: f64,
}

/// Integrated coefficient blocks of scallop `i`.
pub fn link_blocks(state: &SystemState, params: &ScallopPairParams, i: Scallop) -> LinkBlocks {
    let l = params.length;
    let (c_par, c_perp) = (params.c_par, params.c_perp);
    let other = i.other();
    let e1 = state_link_direction(state, i, Link::One);
    let e2 = state_link_direction(state, i, Link::Two);
    let f1 = state_link_direction(state, other, Link::One);
    let f2 = state_link_direction(state, other, Link::Two);

    let projectors = e1 * e1.transpose() + e2 * e2.transpose();
    let a = (Matrix2::identity() * (2.0 * c_perp) + projectors * (c_par - c_perp)) * l;
    let b = perp(&(e1 + e2)) * (0.5 * l * l * c_perp);
    let alpha = perp(&e2) * (0.5 * l * l * c_perp);
    let d = (f1 * perp(&e1).dot(&f1) + f2 * perp(&e2).dot(&f2)) * (0.5 * l * l * (c_par - c_perp)) + b;
    let cube = l * l * l * c_perp / 3.0;

    LinkBlocks {
        a,
        b,
        alpha,
        d,
        omega_coef: 2.0 * cube,
        varpi: cube * (e1.dot(&f1) + e2.dot(&f2)),
        beta: cube * e2.dot(&f2),
    }
}

/// Resistance matrix, shape coupling and the determinant of `R`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResistanceAssembly {
    pub resistance: Matrix6<f64>,
    pub coupling: Matrix6x2,
    /// `det R` by LU with partial pivoting.
    pub det: f64,
    pub lambda: f64,
}

impl ResistanceAssembly {
    /// The 3x3 block coupling `row` forces/torque to `col` rates.
    pub fn block(&self, row: Scallop, col: Scallop) -> Matrix3<f64> {
        self.resistance.fixed_view::<3, 3>(row.offset(), col.offset()).into_owned()
    }

    /// Relative singularity floor: `1e-12 * scale^6` where `scale` is the
    /// geometric mean of `|R_kk|`. Independent of the unit system.
    pub fn singularity_floor(&self) -> f64 {
        let log_mean = self.resistance.diagonal().iter().map(|d| d.abs().ln()).sum::<f64>() / 6.0;
        1e-12 * (6.0 * log_mean).exp()
    }

    /// A NaN determinant counts as singular.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn is_singular(&self) -> bool {
        !(self.det.abs() >= self.singularity_floor())
    }
}

/// Permutation exchanging the `(x, y, theta)` blocks of the two scallops.
pub fn scallop_swap() -> Matrix6<f64> {
    let mut p = Matrix6::zeros();
    for k in 0..3 {
        p[(k, k + 3)] = 1.0;
        p[(k + 3, k)] = 1.0;
    }
    p
}

fn write_block(r: &mut Matrix6<f64>, row: usize, col: usize, a: &Matrix2<f64>, b: &Vector2<f64>, t: &Vector2<f64>, corner: f64) {
    r.fixed_view_mut::<2, 2>(row, col).copy_from(a);
    r.fixed_view_mut::<2, 1>(row, col + 2).copy_from(b);
    r.fixed_view_mut::<1, 2>(row + 2, col).copy_from(&t.transpose());
    r[(row + 2, col + 2)] = corner;
}

/// Assembles `R(t; lambda)` and `Phi(t; lambda)` for the given configuration.
pub fn assemble(state: &SystemState, params: &ScallopPairParams) -> Result<ResistanceAssembly> {
    let lambda = params.lambda();
    let s1 = link_blocks(state, params, Scallop::One);
    let s2 = link_blocks(state, params, Scallop::Two);
    let omega = s1.omega_coef;

    let mut r = Matrix6::zeros();
    write_block(&mut r, 0, 0, &s1.a, &s1.b, &s1.b, omega);
    write_block(&mut r, 0, 3, &(s2.a * -lambda), &(s2.b * -lambda), &(s1.d * -lambda), -lambda * s1.varpi);
    write_block(&mut r, 3, 0, &(s1.a * -lambda), &(s1.b * -lambda), &(s2.d * -lambda), -lambda * s2.varpi);
    write_block(&mut r, 3, 3, &s2.a, &s2.b, &s2.b, omega);

    let mut phi = Matrix6x2::zeros();
    let columns = [
        (s1.alpha, omega / 2.0, s1.alpha * -lambda, -lambda * s1.beta),
        (s2.alpha * -lambda, -lambda * s2.beta, s2.alpha, omega / 2.0),
    ];
    for (c, (f1, t1, f2, t2)) in columns.into_iter().enumerate() {
        phi[(0, c)] = f1.x;
        phi[(1, c)] = f1.y;
        phi[(2, c)] = t1;
        phi[(3, c)] = f2.x;
        phi[(4, c)] = f2.y;
        phi[(5, c)] = t2;
    }

    if r.iter().chain(phi.iter()).any(|v| !v.is_finite()) {
        return Err(ModelError::NonFinite("resistance assembly"));
    }
    let det = r.lu().determinant();
    Ok(ResistanceAssembly {
        resistance: r,
        coupling: phi,
        det,
        lambda,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_params(lambda: f64) -> ScallopPairParams {
        ScallopPairParams::with_lambda(1.0, 0.025, 1.0, 2.0, lambda).unwrap()
    }

    fn skewed_state() -> SystemState {
        SystemState {
            x1: 0.2,
            y1: -0.1,
            theta1: 0.3,
            x2: 0.1,
            y2: 0.15,
            theta2: 0.45,
            sigma1: PI + 0.2,
            sigma2: PI - 0.15,
        }
    }

    #[test]
    fn rft_operator_examples() {
        let j = rft_operator(&Vector2::new(1.0, 0.0), 1.0, 2.0).unwrap();
        assert_eq!(j, Matrix2::new(1.0, 0.0, 0.0, 2.0));
        let j = rft_operator(&Vector2::new(0.0, 1.0), 1.0, 2.0).unwrap();
        assert_eq!(j, Matrix2::new(2.0, 0.0, 0.0, 1.0));
        let e = Vector2::new(0.6, 0.8);
        assert_relative_eq!(rft_operator(&e, 3.0, 3.0).unwrap(), Matrix2::identity() * 3.0);
    }

    #[test]
    fn rft_operator_eigenpairs() {
        let e = Vector2::new(0.28, -0.96);
        let j = rft_operator(&e, 1.3, 2.7).unwrap();
        assert_relative_eq!(j, j.transpose());
        assert_relative_eq!(j * e, e * 1.3, epsilon = 1e-14);
        assert_relative_eq!(j * perp(&e), perp(&e) * 2.7, epsilon = 1e-14);
    }

    #[test]
    fn rft_operator_rejects_non_unit() {
        assert!(matches!(
            rft_operator(&Vector2::new(1.0, 1.0), 1.0, 2.0),
            Err(ModelError::NonUnitDirection(_))
        ));
    }

    #[test]
    fn force_density_at_rest_is_zero() {
        let p = unit_params(0.5);
        let f = force_density(&skewed_state(), &StateRates::default(), &p, Scallop::One, Link::Two, 0.4).unwrap();
        assert_eq!(f, Vector2::zeros());
    }

    #[test]
    fn force_density_decoupled_translation() {
        let p = unit_params(0.0);
        let s = SystemState::aligned(0.0, 0.1);
        let r = StateRates { xdot1: 1.0, ..Default::default() };
        let f = force_density(&s, &r, &p, Scallop::One, Link::One, 0.5).unwrap();
        assert_relative_eq!(f, Vector2::new(-1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn force_density_cross_coupling_sign() {
        // only scallop 2 moves: scallop 1 feels +lambda/Lambda J_2 v_2
        let p = unit_params(0.5);
        let s = SystemState::aligned(0.0, 0.1);
        let r = StateRates { ydot2: 1.0, ..Default::default() };
        let f = force_density(&s, &r, &p, Scallop::One, Link::One, 0.5).unwrap();
        // link one of scallop 2 points along x, so J_2 (0, 1) = (0, C_perp) = (0, 2);
        // lambda / Lambda = 0.5 / 0.75
        assert_relative_eq!(f, Vector2::new(0.0, 2.0 * 0.5 / 0.75), epsilon = 1e-15);
    }

    #[test]
    fn link_blocks_aligned_example() {
        let p = unit_params(0.3);
        let s = SystemState::aligned(0.0, 0.1);
        let blocks = link_blocks(&s, &p, Scallop::One);
        assert_relative_eq!(blocks.a, Matrix2::new(2.0, 0.0, 0.0, 4.0), epsilon = 1e-14);
        assert_relative_eq!(blocks.b, Vector2::zeros(), epsilon = 1e-15);
        assert_relative_eq!(blocks.alpha, Vector2::new(0.0, -1.0), epsilon = 1e-15);
        assert_relative_eq!(blocks.omega_coef, 4.0 / 3.0);
        assert_relative_eq!(blocks.varpi, blocks.omega_coef, epsilon = 1e-15);
        assert_relative_eq!(blocks.beta, 2.0 / 3.0, epsilon = 1e-15);
    }

    #[test]
    fn varpi_beta_symmetric_in_scallops() {
        let p = unit_params(0.4);
        let s = skewed_state();
        let b1 = link_blocks(&s, &p, Scallop::One);
        let b2 = link_blocks(&s, &p, Scallop::Two);
        assert_relative_eq!(b1.varpi, b2.varpi, epsilon = 1e-15);
        assert_relative_eq!(b1.beta, b2.beta, epsilon = 1e-15);
        assert_eq!(b1.omega_coef, b2.omega_coef);
    }

    #[test]
    fn decoupled_assembly() {
        let p = unit_params(0.0);
        let s = skewed_state();
        let asm = assemble(&s, &p).unwrap();
        assert_eq!(asm.block(Scallop::One, Scallop::Two), Matrix3::zeros());
        assert_eq!(asm.block(Scallop::Two, Scallop::One), Matrix3::zeros());
        let b1 = link_blocks(&s, &p, Scallop::One);
        let b2 = link_blocks(&s, &p, Scallop::Two);
        let expected = Matrix6x2::from_column_slice(&[
            b1.alpha.x, b1.alpha.y, b1.omega_coef / 2.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, b2.alpha.x, b2.alpha.y, b2.omega_coef / 2.0,
        ]);
        assert_eq!(asm.coupling, expected);
        assert!(!asm.is_singular());
    }

    #[test]
    fn identical_configurations_have_equal_blocks() {
        let p = unit_params(0.6);
        let mut s = SystemState::aligned(0.7, 0.1);
        s.sigma1 = PI + 0.1;
        s.sigma2 = PI + 0.1;
        let asm = assemble(&s, &p).unwrap();
        assert_relative_eq!(asm.block(Scallop::One, Scallop::One), asm.block(Scallop::Two, Scallop::Two));
        assert_relative_eq!(asm.block(Scallop::One, Scallop::Two), asm.block(Scallop::Two, Scallop::One));
    }

    #[test]
    fn aligned_determinant_closed_form() {
        // identical configurations: R = [[R11, -l R11], [-l R11, R11]], det = det(R11)^2 (1 - l^2)^3
        let p = unit_params(0.6);
        let s = SystemState::aligned(0.2, 0.1);
        let asm = assemble(&s, &p).unwrap();
        let d11 = asm.block(Scallop::One, Scallop::One).determinant();
        assert_relative_eq!(asm.det, d11 * d11 * (1.0f64 - 0.36).powi(3), max_relative = 1e-12);
    }

    #[test]
    fn swap_permutation_is_involution() {
        let p = scallop_swap();
        assert_eq!(p * p, Matrix6::identity());
    }
}
