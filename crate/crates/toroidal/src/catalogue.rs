//! Catalogue of irreducible quotients for the tensor modules.
//!
//! Classifies a module configuration into: irreducible as it stands,
//! degenerate with the image of the form differential as its unique
//! irreducible quotient, or (top wedge degree at an integral base point)
//! a trivial one-dimensional quotient. The published condition list is
//! disjunctive with overlapping branches; all branches are evaluated
//! verbatim and configurations where they disagree with the resolved
//! verdict are flagged for review instead of silently reconciled.

use serde::{Deserialize, Serialize};

use crate::reps::WeightLabel;
use crate::scalar::Scalar;

/// Inputs of the classification: lattice parameter n, the coefficient
/// weight, the gl weight with its identity scalar, and the base point.
#[derive(Clone, Debug)]
pub struct CatalogueInput {
    pub n: usize,
    /// Weight of the coefficient-algebra factor (empty when absent).
    pub lambda1: Vec<i64>,
    /// sl_{n+1} weight of the gl factor.
    pub lambda2: WeightLabel,
    /// Identity scalar of the gl factor.
    pub c: Scalar,
    pub alpha: Vec<Scalar>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum QuotientVerdict {
    /// Irreducible over the loop-plus-derivation algebra as given.
    Irreducible,
    /// Unique irreducible quotient is the image of the differential out
    /// of forms of this degree.
    FormImage { degree: usize },
    /// Unique irreducible quotient is the trivial one-dimensional module.
    Trivial,
}

/// Verbatim branch evaluations of the published disjunction plus the
/// resolved verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CatalogueEntry {
    pub verdict: QuotientVerdict,
    /// Branch: not (lambda2 = 0, c in {0, n+1}, alpha integral).
    pub branch_not_integral_extreme: bool,
    /// Branch: lambda1 != 0.
    pub branch_lambda1_nonzero: bool,
    /// Branch: (lambda2, c) is no fundamental pair (omega_k, k), 1 <= k <= n.
    pub branch_no_fundamental_pair: bool,
    /// True when the literal disjunction of the three branches disagrees
    /// with the resolved verdict; left for human review.
    pub needs_review: bool,
}

fn fundamental_degree(input: &CatalogueInput) -> Option<usize> {
    // which k in 0..=n+1 has (lambda2, c) = (omega_k, k); omega_0 and
    // omega_{n+1} both mean the zero weight
    for k in 0..=input.n + 1 {
        let weight_matches = if (1..=input.n).contains(&k) {
            input.lambda2.is_fundamental(k)
        } else {
            input.lambda2.is_zero_weight()
        };
        if weight_matches && input.c == Scalar::from_int(k as i64) {
            return Some(k);
        }
    }
    None
}

/// Resolves the unique-quotient classification of a full-flavor module.
pub fn irreducible_quotient_catalogue(input: &CatalogueInput) -> CatalogueEntry {
    let lambda1_zero = input.lambda1.iter().all(|&e| e == 0);
    let alpha_integral = input.alpha.iter().all(Scalar::is_integer);
    let lambda2_zero = input.lambda2.is_zero_weight();
    let c_extreme = input.c.is_zero() || input.c == Scalar::from_int((input.n + 1) as i64);

    let branch_not_integral_extreme = !(lambda2_zero && c_extreme && alpha_integral);
    let branch_lambda1_nonzero = !lambda1_zero;
    let branch_no_fundamental_pair = !(1..=input.n).any(|k| {
        input.lambda2.is_fundamental(k) && input.c == Scalar::from_int(k as i64)
    });

    let verdict = if !lambda1_zero {
        QuotientVerdict::Irreducible
    } else {
        match fundamental_degree(input) {
            Some(k) if k <= input.n => QuotientVerdict::FormImage { degree: k },
            Some(_top) if alpha_integral => QuotientVerdict::Trivial,
            _ => QuotientVerdict::Irreducible,
        }
    };

    let literal = branch_not_integral_extreme || branch_lambda1_nonzero || branch_no_fundamental_pair;
    let needs_review = literal != matches!(verdict, QuotientVerdict::Irreducible);

    CatalogueEntry {
        verdict,
        branch_not_integral_extreme,
        branch_lambda1_nonzero,
        branch_no_fundamental_pair,
        needs_review,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn label(entries: Vec<i64>) -> WeightLabel {
        WeightLabel::dominant(entries).unwrap()
    }

    fn base(n: usize) -> CatalogueInput {
        CatalogueInput {
            n,
            lambda1: vec![0],
            lambda2: label(vec![0; n]),
            c: Scalar::zero(),
            alpha: vec![Scalar::ratio(1, 2); n + 1],
        }
    }

    #[test]
    fn nonzero_coefficient_weight_is_irreducible() {
        let mut input = base(1);
        input.lambda1 = vec![2];
        input.lambda2 = label(vec![1]);
        input.c = Scalar::one();
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::Irreducible);
    }

    #[test]
    fn fundamental_pair_degenerates_to_form_image() {
        let mut input = base(2);
        input.lambda1 = vec![];
        input.lambda2 = label(vec![0, 1]);
        input.c = Scalar::from_int(2);
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::FormImage { degree: 2 });
        // the literal disjunction still fires on branch 1, so this overlap
        // is exactly the case to flag
        assert!(entry.needs_review);
    }

    #[test]
    fn top_wedge_integral_base_gives_trivial_quotient() {
        let mut input = base(1);
        input.lambda1 = vec![];
        input.lambda2 = label(vec![0]);
        input.c = Scalar::from_int(2);
        input.alpha = vec![Scalar::zero(), Scalar::from_int(3)];
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::Trivial);
    }

    #[test]
    fn top_wedge_fractional_base_is_irreducible() {
        let mut input = base(1);
        input.lambda2 = label(vec![0]);
        input.c = Scalar::from_int(2);
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::Irreducible);
        assert!(!entry.needs_review);
    }

    #[test]
    fn functions_degenerate_to_degree_zero_image() {
        let mut input = base(1);
        input.lambda2 = label(vec![0]);
        input.c = Scalar::zero();
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::FormImage { degree: 0 });
    }

    #[test]
    fn generic_scalar_is_irreducible() {
        let mut input = base(1);
        input.lambda2 = label(vec![1]);
        input.c = Scalar::ratio(7, 2);
        let entry = irreducible_quotient_catalogue(&input);
        assert_eq!(entry.verdict, QuotientVerdict::Irreducible);
        assert!(!entry.needs_review);
    }
}
