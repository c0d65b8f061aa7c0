//! Published (Σ, Σ′) pairs for L = 2 and L = 3, entered from their upper
//! triangles. The L = 3 pair 4 Σ as printed has one lower-triangle entry
//! inconsistent with antisymmetry; the upper triangle is authoritative.

use gausspf::signs::SignMatrix;

pub fn pair(n: usize, sigma_upper: &[i8], sigma_prime_upper: &[i8]) -> (SignMatrix, SignMatrix) {
    (
        SignMatrix::from_upper(n, sigma_upper),
        SignMatrix::from_upper(n, sigma_prime_upper),
    )
}

/// Four explicit pairs for L = 2; the other four are their negatives.
pub fn l2_pairs() -> Vec<(SignMatrix, SignMatrix)> {
    vec![
        pair(4, &[1, 1, -1, 1, -1, -1], &[1, 1, 1, -1, -1, 1]),
        pair(4, &[1, -1, 1, -1, 1, -1], &[1, -1, -1, 1, 1, 1]),
        pair(4, &[-1, 1, 1, -1, -1, 1], &[-1, 1, -1, 1, -1, -1]),
        pair(4, &[-1, -1, -1, 1, 1, 1], &[-1, -1, 1, -1, 1, -1]),
    ]
}

/// Four representative pairs for L = 3.
pub fn l3_pairs() -> Vec<(SignMatrix, SignMatrix)> {
    vec![
        pair(
            6,
            &[1, 1, 1, 1, -1, 1, 1, 1, -1, 1, 1, -1, 1, -1, -1],
            &[1, -1, 1, -1, -1, 1, -1, 1, 1, 1, -1, -1, -1, -1, 1],
        ),
        pair(
            6,
            &[1, 1, -1, -1, -1, 1, -1, -1, -1, -1, -1, -1, 1, 1, 1],
            &[1, -1, -1, 1, -1, 1, 1, -1, 1, -1, 1, -1, -1, 1, -1],
        ),
        pair(
            6,
            &[-1, 1, -1, 1, -1, -1, 1, -1, 1, -1, 1, -1, -1, 1, -1],
            &[-1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, -1, 1, 1, 1],
        ),
        pair(
            6,
            &[1, -1, -1, -1, 1, -1, -1, -1, 1, 1, 1, -1, 1, -1, -1],
            &[1, 1, -1, 1, 1, -1, 1, -1, -1, 1, -1, -1, -1, -1, 1],
        ),
    ]
}
