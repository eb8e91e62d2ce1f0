use crate::error::Result;
use crate::scalar::Real;
use crate::state::{DensityMatrix3, QutritState};

use super::eigen::eigendecompose;

/// `⟨ψ|ρ|ψ⟩`, with round-off outside `[0, 1]` clamped.
pub fn fidelity<T: Real>(target: &QutritState<T>, rho: &DensityMatrix3<T>) -> T {
    rho.expectation(target).max(T::zero()).min(T::one())
}

/// `tr ρ²`.
pub fn purity<T: Real>(rho: &DensityMatrix3<T>) -> T {
    rho.matrix().norm_sqr()
}

/// Top eigenvector and its eigenvalue.
pub fn principal_component<T: Real>(rho: &DensityMatrix3<T>) -> Result<(QutritState<T>, T)> {
    let sys = eigendecompose(rho);
    Ok((sys.state(0), sys.values[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mub::StateLabel;

    #[test]
    fn pure_state_properties() {
        let psi = "gamma3".parse::<StateLabel>().unwrap().state::<f64>();
        let rho = psi.density();
        assert!((fidelity(&psi, &rho) - 1.0).abs() < 1e-14);
        assert!((purity(&rho) - 1.0).abs() < 1e-14);
        let (top, w) = principal_component(&rho).unwrap();
        assert!((w - 1.0).abs() < 1e-13);
        assert!((top.overlap(&psi) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn mixed_state_purity() {
        let rho = DensityMatrix3::<f64>::maximally_mixed();
        assert!((purity(&rho) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn cross_basis_fidelity_is_one_third() {
        let a = "alpha1".parse::<StateLabel>().unwrap().state::<f64>();
        let b = "beta2".parse::<StateLabel>().unwrap().state::<f64>();
        assert!((fidelity(&a, &b.density()) - 1.0 / 3.0).abs() < 1e-12);
    }
}
