use serde::Serialize;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Experiment {
    pub id: &'static str,
    /// Tunable headline parameters, for the listing.
    pub params: &'static str,
    pub description: &'static str,
    pub anchor: &'static str,
    /// Sanity experiments must decide every expected verdict; for the
    /// others an inconclusive verdict near a critical exponent is honest.
    pub sanity: bool,
}

const fn entry(id: &'static str, params: &'static str, description: &'static str, anchor: &'static str, sanity: bool) -> Experiment {
    Experiment { id, params, description, anchor, sanity }
}

/// Stable listing order.
pub const REGISTRY: &[Experiment] = &[
    entry(
        "identity-sanity",
        "",
        "phi(z) = z: Carleson exponent 1, non-compact, unit spectrum",
        "ρ_φ(h) = o(h)",
        true,
    ),
    entry(
        "rotation-sanity",
        "r",
        "phi(z) = r z: Hilbert-Schmidt integral against the spectral sum, exact histogram bookkeeping",
        "∫_{∂D} (1 − |φ*|)^{−1} < +∞",
        true,
    ),
    entry(
        "same-modulus",
        "beta",
        "Phi = exp(-F) against M Phi: equal boundary moduli, non-compact against Schatten",
        "C_{φ_1} is not compact on H², but C_{φ_2} is in the Schatten class S_p",
        false,
    ),
    entry(
        "shapiro-taylor",
        "theta, p_grid",
        "log-power symbol: Luecking series and singular-value tails across the cutoff p = 4/theta",
        "if and only if p > 4/θ",
        false,
    ),
    entry(
        "loglog-boundary",
        "theta, q",
        "log-power symbol with a loglog factor: membership at the critical exponent",
        "in the Schatten class S_{p_0}, but not in S_p, for p < p_0",
        false,
    ),
    entry(
        "no-schatten",
        "p_grid",
        "z log(-log z) symbol: compact, yet the necessary condition fails for every p",
        "in no Schatten class S_p with p < ∞",
        false,
    ),
    entry(
        "no-schatten-same-modulus",
        "p_grid, alpha_floor",
        "loglog symbol against its product with the inner factor: same modulus, psi in S_p for p > 2",
        "whereas C_ψ is in S_p for every p > 2",
        false,
    ),
    entry(
        "beta-one-remark",
        "k_max",
        "beta = 1: explicit cosine series, Hf of order t log(1/t), compactness",
        "2/π − 4/π Σ cos kt/(4k²−1)",
        false,
    ),
    entry(
        "poisson-moments",
        "beta, p_grid",
        "radial measure with density (1-r)^(beta-2): moment decay and Cauchy partial sums",
        "for any p > 2/(β − 1)",
        false,
    ),
    entry(
        "box-window-equivalence",
        "theta, p_grid",
        "Luecking box sums against dyadic window sums on one histogram",
        "following assertions are equivalent",
        false,
    ),
    entry(
        "fourier-coefficients",
        "beta_grid, k_max",
        "cosine coefficients of |sin(t/2)|^beta: sign and decay rate",
        "c_k < 0 for all",
        false,
    ),
    entry(
        "log-power-profile",
        "theta",
        "log-power symbol: normalized Carleson profile and compactness",
        "ρ_{φ_θ}(h) ≈ h/(log 1/h)^θ",
        false,
    ),
    entry(
        "preimage-vs-sampled",
        "beta, h_level",
        "window preimage intervals against the sampled Carleson profile",
        "h f⁻¹(h) ≲ ρ_φ(h) ≲ h f⁻¹(2h)",
        false,
    ),
];

pub fn find(id: &str) -> Option<&'static Experiment> {
    REGISTRY.iter().find(|e| e.id == id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_unique_and_defaulted() {
        assert!(REGISTRY.len() >= 10);
        for (i, e) in REGISTRY.iter().enumerate() {
            assert!(REGISTRY[i + 1..].iter().all(|o| o.id != e.id), "{}", e.id);
            assert!(crate::defaults::for_experiment(e.id).is_some(), "{}", e.id);
            assert!(!e.anchor.is_empty());
        }
    }
}
