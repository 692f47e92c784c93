use crate::qcore::{von_neumann_from_spectrum, DensityOperator};

/// `C(X:Y) = ½[S(X) + S(Y) − S(X,Y)]`, half the mutual information.
///
/// Not clamped: a negative value can only come from approximate entropies
/// and is left for callers to flag.
pub fn correlation(s_x: f64, s_y: f64, s_xy: f64) -> f64 {
    0.5 * (s_x + s_y - s_xy)
}

/// `log₂ dim − S(ρ)`: the deficit of the entropy from its maximum.
pub fn discernable_information(rho: &DensityOperator) -> f64 {
    (rho.dim() as f64).log2() - von_neumann_from_spectrum(&rho.eigenvalues())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::build_pure_model_state;
    use crate::qcore::{MultipartiteState, SubsystemLabel};

    #[test]
    fn bell_and_product_correlations() {
        assert_eq!(correlation(1.0, 1.0, 0.0), 1.0);
        assert_eq!(correlation(0.0, 0.0, 0.0), 0.0);
        assert_eq!(correlation(10.0, 100.0, 90.0), 10.0);
    }

    #[test]
    fn discernable_information_extremes() {
        let mixed =
            DensityOperator::maximally_mixed(vec![SubsystemLabel::new("a", 8).unwrap()]).unwrap();
        assert!(discernable_information(&mixed).abs() < 1e-12);
        let pure = MultipartiteState::basis(vec![SubsystemLabel::new("a", 8).unwrap()], 3).unwrap();
        assert!((discernable_information(&pure.to_density()) - 3.0).abs() < 1e-12);
        let half = build_pure_model_state(1, 2)
            .unwrap()
            .reduced(&["int"])
            .unwrap();
        assert!((discernable_information(&half) - 1.0).abs() < 1e-12);
    }
}
