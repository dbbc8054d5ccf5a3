//! Seeded families and batteries shared by the verification campaigns.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::domain::GroupDomain;
use crate::function::{random_mixture, FunctionRep};
use crate::psi::PsiSpec;

/// Shared campaign knobs. The campaign grid is wider than the default
/// domain: mixture components reach centers +-4 with sigma up to 4, and the
/// aliasing check wants all mass inside [-L/2, L/2].
#[derive(Debug, Clone)]
pub struct CampaignConfig {
    pub seed: u64,
    pub pairs: usize,
    pub domain: GroupDomain,
    pub tol: f64,
}

impl Default for CampaignConfig {
    fn default() -> Self {
        CampaignConfig {
            seed: 7,
            pairs: 10,
            domain: GroupDomain::RealLine {
                half_width: 64.0,
                n: 16384,
            },
            tol: 1e-6,
        }
    }
}

impl CampaignConfig {
    pub fn with_seed(seed: u64) -> Self {
        CampaignConfig {
            seed,
            ..CampaignConfig::default()
        }
    }
}

/// Deterministic list of mixture pairs: one master stream hands each pair
/// its sub-seeds, so pair k does not depend on how many pairs are requested
/// after it.
pub fn mixture_pairs(seed: u64, count: usize) -> Vec<(FunctionRep, FunctionRep)> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let sf = master.next_u64();
            let kf = 2 + (master.next_u64() % 3) as usize;
            let sg = master.next_u64();
            let kg = 2 + (master.next_u64() % 3) as usize;
            (random_mixture(sf, kf), random_mixture(sg, kg))
        })
        .collect()
}

/// The four normalized generating functions the Banach-algebra campaign
/// runs against (all have psi(1) = 1).
pub fn normalized_psi_battery() -> Vec<PsiSpec> {
    vec![
        PsiSpec::power_m(1.0).expect("valid"),
        PsiSpec::power_m(2.0).expect("valid"),
        PsiSpec::critical_beta(2.0, 0.5).expect("valid"),
        PsiSpec::gaussian_sigma(1.0).expect("valid"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::{degenerate_psi_check, PsiClass};

    #[test]
    fn pairs_are_deterministic_and_prefix_stable() {
        let a = mixture_pairs(7, 4);
        let b = mixture_pairs(7, 2);
        for i in 0..2 {
            assert_eq!(a[i].0.label(), b[i].0.label());
            assert_eq!(a[i].1.label(), b[i].1.label());
        }
    }

    #[test]
    fn battery_is_normalized() {
        for spec in normalized_psi_battery() {
            assert_eq!(degenerate_psi_check(&spec), PsiClass::Normalized, "{}", spec.label());
        }
    }
}
