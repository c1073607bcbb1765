//! Total angular-momentum generators on a product of spin-`s` constituents.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::spin::TwiceSpin;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Z,
    Raise,
    Lower,
}

/// `J_gen |psi>` with `J = sum_i J^(i)`, digit `d` meaning `m = s - d`.
pub fn apply_total(
    state: &DVector<Complex64>,
    count: u32,
    twice_s: TwiceSpin,
    generator: Generator,
) -> DVector<Complex64> {
    let local = twice_s.dim() as usize;
    let s = twice_s.as_f64();
    let mut out = DVector::zeros(state.len());
    for (idx, amp) in state.iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let mut stride = 1usize;
        for _ in 0..count {
            let d = (idx / stride) % local;
            let m = s - d as f64;
            match generator {
                Generator::Z => out[idx] += amp * m,
                // m -> m + 1 is digit d -> d - 1
                Generator::Raise if d > 0 => {
                    let c = (s * (s + 1.0) - m * (m + 1.0)).sqrt();
                    out[idx - stride] += amp * c;
                }
                Generator::Lower if d + 1 < local => {
                    let c = (s * (s + 1.0) - m * (m - 1.0)).sqrt();
                    out[idx + stride] += amp * c;
                }
                _ => {}
            }
            stride *= local;
        }
    }
    out
}

/// Largest residual norm of `J_z`, `J_+`, `J_-` on the state.
pub fn invariance_residual(state: &DVector<Complex64>, count: u32, twice_s: TwiceSpin) -> f64 {
    [Generator::Z, Generator::Raise, Generator::Lower]
        .into_iter()
        .map(|g| apply_total(state, count, twice_s, g).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn up_state_is_raised_to_zero() {
        let mut up = DVector::zeros(2);
        up[0] = Complex64::new(1.0, 0.0);
        assert_eq!(
            apply_total(&up, 1, TwiceSpin::HALF, Generator::Raise).norm(),
            0.0
        );
        let down = apply_total(&up, 1, TwiceSpin::HALF, Generator::Lower);
        assert!((down[1].re - 1.0).abs() < 1e-15);
        let z = apply_total(&up, 1, TwiceSpin::HALF, Generator::Z);
        assert!((z[0].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_qubit_singlet_is_invariant() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v = DVector::from_vec(
            vec![0.0, r, -r, 0.0]
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
        );
        assert!(invariance_residual(&v, 2, TwiceSpin::HALF) < 1e-15);
        let triplet = DVector::from_vec(
            vec![0.0, r, r, 0.0]
                .into_iter()
                .map(|x| Complex64::new(x, 0.0))
                .collect(),
        );
        assert!(invariance_residual(&triplet, 2, TwiceSpin::HALF) > 0.5);
    }
}
