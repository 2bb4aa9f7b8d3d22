//! Symbolic counting for abelian p-groups.
//!
//! Everything here is a polynomial identity in the formal variable p:
//! Gaussian binomials, the per-type subgroup count of a p-group, totals and
//! order-restricted totals, cyclic counts, automorphism counts, and the
//! rank-4 sums with their order-restricted variant.

mod intpoly;
mod partition;

use std::collections::BTreeMap;

pub use intpoly::IntPoly;
pub use partition::Partition;

use crate::error::{Error, Result};

/// Gaussian binomial [r over k]_p, the number of k-dimensional subspaces of
/// an r-dimensional space over the field with p elements:
/// prod_{i=1..k} (p^{r-k+i} - 1)/(p^i - 1). Zero when k > r.
pub fn gauss_binom(r: u32, k: u32) -> IntPoly {
    if k > r {
        return IntPoly::zero();
    }
    let mut acc = IntPoly::one();
    for i in 1..=k {
        let num = &IntPoly::monomial(1, (r - k + i) as usize) - &IntPoly::one();
        let den = &IntPoly::monomial(1, i as usize) - &IntPoly::one();
        // Each partial product is itself a Gaussian binomial, so the
        // division stays exact at every step.
        acc = (&acc * &num).div_exact_or_panic(&den, "gauss_binom");
    }
    acc
}

/// Number of subgroups of type `mu` in a p-group of type `lambda`:
/// prod_j p^{mu'_{j+1} (lambda'_j - mu'_j)} [lambda'_j - mu'_{j+1} over
/// mu'_j - mu'_{j+1}]_p. Zero unless mu <= lambda component-wise.
pub fn subgroups_of_type(lambda: &Partition, mu: &Partition) -> IntPoly {
    if !lambda.contains(mu) {
        return IntPoly::zero();
    }
    let lc = lambda.conjugate();
    let mc = mu.conjugate();
    let mut acc = IntPoly::one();
    for j in 1..=lambda.part(1) as usize {
        let lj = lc.part(j);
        let mj = mc.part(j);
        let mj1 = mc.part(j + 1);
        let shift = (mj1 * (lj - mj)) as usize;
        let g = gauss_binom(lj - mj1, mj - mj1).shift_up(shift);
        acc = &acc * &g;
    }
    acc
}

/// Total number of subgroups of a p-group of type `lambda`, as the sum of
/// the per-type counts over all mu <= lambda.
pub fn total_subgroups_poly(lambda: &Partition) -> IntPoly {
    let mut acc = IntPoly::zero();
    for mu in lambda.subpartitions() {
        acc += &subgroups_of_type(lambda, &mu);
    }
    acc
}

/// Number of subgroups of order p^k of a p-group of type `lambda`; the sum
/// over subtypes of weight k. Zero for k > |lambda|.
pub fn subgroups_of_order_poly(lambda: &Partition, k: u32) -> IntPoly {
    let mut acc = IntPoly::zero();
    for mu in lambda.subpartitions() {
        if mu.weight() == k {
            acc += &subgroups_of_type(lambda, &mu);
        }
    }
    acc
}

/// Number of cyclic subgroups of order p^nu of a p-group of type `lambda`:
/// ((p^j - 1)/(p - 1)) p^{lambda_{j+1} + ... + lambda_r + (nu-1)(j-1)} with
/// j determined by lambda_j >= nu > lambda_{j+1}. Zero when nu exceeds
/// lambda_1.
pub fn cyclic_of_order_poly(lambda: &Partition, nu: u32) -> IntPoly {
    if nu == 0 || nu > lambda.part(1) {
        return IntPoly::zero();
    }
    let j = lambda.parts().iter().filter(|&&x| x >= nu).count();
    let tail: u32 = lambda.parts().iter().skip(j).sum();
    let shift = tail + (nu - 1) * (j as u32 - 1);
    IntPoly::geometric(j).shift_up(shift as usize)
}

/// Automorphism count of Z_{p^a} x Z_{p^b} as a polynomial in p:
/// phi(p^b) when a = 0; p^{3a+b}(1 - 1/p)^2 for 1 <= a < b;
/// p^{4a}(1 - 1/p)(1 - 1/p^2) for 1 <= a = b. Arguments may come in either
/// order.
pub fn aut_count_poly(a: u32, b: u32) -> IntPoly {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if b == 0 {
        return IntPoly::one();
    }
    if a == 0 {
        // phi(p^b) = p^b - p^{b-1}
        return &IntPoly::monomial(1, b as usize) - &IntPoly::monomial(1, b as usize - 1);
    }
    if a < b {
        // p^{3a+b-2} (p-1)^2
        let pm1 = &IntPoly::monomial(1, 1) - &IntPoly::one();
        (&pm1 * &pm1).shift_up((3 * a + b - 2) as usize)
    } else {
        // p^{4a-3} (p-1)(p^2-1)
        let pm1 = &IntPoly::monomial(1, 1) - &IntPoly::one();
        let p2m1 = &IntPoly::monomial(1, 2) - &IntPoly::one();
        (&pm1 * &p2m1).shift_up((4 * a - 3) as usize)
    }
}

/// Closed form for the total subgroup count of Z_{p^a} x Z_{p^b}, 1 <= a <= b:
/// ((b-a+1)p^{a+2} - (b-a-1)p^{a+1} - (a+b+3)p + (a+b+1)) / (p-1)^2.
pub fn s2_prime_power_poly(a: u32, b: u32) -> Result<IntPoly> {
    if a < 1 || a > b {
        return Err(Error::InvalidArgument(format!(
            "s2 closed form needs 1 <= a <= b, got ({a},{b})"
        )));
    }
    let (a, b) = (a as i64, b as i64);
    let num = sum_of_monomials(&[
        (b - a + 1, (a + 2) as usize),
        (-(b - a - 1), (a + 1) as usize),
        (-(a + b + 3), 1),
        (a + b + 1, 0),
    ]);
    let pm1 = &IntPoly::monomial(1, 1) - &IntPoly::one();
    let den = &pm1 * &pm1;
    Ok(num.div_exact_or_panic(&den, "s2_prime_power_poly"))
}

/// Closed form for the total subgroup count of
/// Z_{p^l1} x Z_{p^l2} x Z_{p^l3}, l1 >= l2 >= l3 >= 1:
/// F(p) / ((p^2-1)^2 (p-1)) with the ten-term numerator F.
pub fn s3_prime_power_poly(l1: u32, l2: u32, l3: u32) -> Result<IntPoly> {
    if l3 < 1 || l1 < l2 || l2 < l3 {
        return Err(Error::InvalidArgument(format!(
            "s3 closed form needs l1 >= l2 >= l3 >= 1, got ({l1},{l2},{l3})"
        )));
    }
    let (l1, l2, l3) = (l1 as i64, l2 as i64, l3 as i64);
    let e = |k: i64| k as usize;
    let num = sum_of_monomials(&[
        ((l3 + 1) * (l1 - l2 + 1), e(l2 + l3 + 5)),
        (2 * (l3 + 1), e(l2 + l3 + 4)),
        (-2 * (l3 + 1) * (l1 - l2), e(l2 + l3 + 3)),
        (-2 * (l3 + 1), e(l2 + l3 + 2)),
        ((l3 + 1) * (l1 - l2 - 1), e(l2 + l3 + 1)),
        (-(l1 + l2 - l3 + 3), e(2 * l3 + 4)),
        (-2, e(2 * l3 + 3)),
        (l1 + l2 - l3 - 1, e(2 * l3 + 2)),
        (l1 + l2 + l3 + 5, 2),
        (2, 1),
        (-(l1 + l2 + l3 + 1), 0),
    ]);
    let pm1 = &IntPoly::monomial(1, 1) - &IntPoly::one();
    let p2m1 = &IntPoly::monomial(1, 2) - &IntPoly::one();
    let den = &(&p2m1 * &p2m1) * &pm1;
    Ok(num.div_exact_or_panic(&den, "s3_prime_power_poly"))
}

fn sum_of_monomials(terms: &[(i64, usize)]) -> IntPoly {
    let mut acc = IntPoly::zero();
    for &(c, k) in terms {
        acc += &IntPoly::monomial(c, k);
    }
    acc
}

/// phi(p^e) as a polynomial; 1 for e = 0.
fn phi_poly(e: u32) -> IntPoly {
    if e == 0 {
        IntPoly::one()
    } else {
        &IntPoly::monomial(1, e as usize) - &IntPoly::monomial(1, e as usize - 1)
    }
}

/// Which exponent sum a rank-4 half contributes to the order constraint:
/// the (m,n) half enters through the projection order x1+x3+x4, the (r,s)
/// half through the kernel order t1+t3+t4 (the second-level tuple).
#[derive(Clone, Copy, PartialEq, Eq)]
enum OrderPart {
    Projection,
    Kernel,
}

/// One half of the rank-4 sum: all (x_1..x_5, y_1..y_5) exponent tuples for
/// the pair (a, b), grouped by the join key (u, v, order part), each key
/// accumulating phi(p^{x_3}) phi(p^{y_3}).
///
/// The tuples satisfy
///   x1+x2+x3 = a,  x3+x4+x5 = b,
///   y1+y2+y3 = min(x1,x4),  y3+y4+y5 = x3 + max(x1,x4),
/// and the key is u = min(y2,y5), v = y3 + max(y2,y5), with the order part
/// x1+x3+x4 or y1+y3+y4 as selected.
fn rank4_half(a: u32, b: u32, order: OrderPart) -> BTreeMap<(u32, u32, u32), IntPoly> {
    let mut map: BTreeMap<(u32, u32, u32), IntPoly> = BTreeMap::new();
    for x1 in 0..=a {
        for x2 in 0..=(a - x1) {
            let x3 = a - x1 - x2;
            if x3 > b {
                continue;
            }
            for x4 in 0..=(b - x3) {
                // x5 = b - x3 - x4 is determined and unused below.
                let ymax = x1.min(x4);
                let ytop = x3 + x1.max(x4);
                let weight_x = phi_poly(x3);
                for y1 in 0..=ymax {
                    for y2 in 0..=(ymax - y1) {
                        let y3 = ymax - y1 - y2;
                        for y4 in 0..=(ytop - y3) {
                            let y5 = ytop - y3 - y4;
                            let u = y2.min(y5);
                            let v = y3 + y2.max(y5);
                            let korder = match order {
                                OrderPart::Projection => x1 + x3 + x4,
                                OrderPart::Kernel => y1 + y3 + y4,
                            };
                            let w = &weight_x * &phi_poly(y3);
                            map.entry((u, v, korder))
                                .and_modify(|p| *p += &w)
                                .or_insert(w);
                        }
                    }
                }
            }
        }
    }
    map
}

/// Total subgroup count of Z_{p^a} x Z_{p^b} x Z_{p^c} x Z_{p^d} as a
/// polynomial in p, via the twenty-variable sum
/// sum phi(p^{x3}) phi(p^{y3}) phi(p^{z3}) phi(p^{t3}) F(p^u, p^v).
/// Zero exponents are legal and reduce to lower-rank groups.
pub fn n4_poly(a: u32, b: u32, c: u32, d: u32) -> IntPoly {
    let left = collapse_order(rank4_half(a, b, OrderPart::Projection));
    let right = collapse_order(rank4_half(c, d, OrderPart::Kernel));
    let mut acc = IntPoly::zero();
    for ((u, v), lp) in &left {
        if let Some(rp) = right.get(&(*u, *v)) {
            let f = aut_count_poly(*u, *v);
            acc += &(&(lp * rp) * &f);
        }
    }
    acc
}

fn collapse_order(
    half: BTreeMap<(u32, u32, u32), IntPoly>,
) -> BTreeMap<(u32, u32), IntPoly> {
    let mut out: BTreeMap<(u32, u32), IntPoly> = BTreeMap::new();
    for ((u, v, _), p) in half {
        out.entry((u, v)).and_modify(|q| *q += &p).or_insert(p);
    }
    out
}

/// Number of subgroups of order p^k of Z_{p^a} x Z_{p^b} x Z_{p^c} x Z_{p^d}:
/// the same sum restricted to x1+x3+x4+t1+t3+t4 = k. Zero when k exceeds
/// a+b+c+d.
pub fn n4_order_poly(a: u32, b: u32, c: u32, d: u32, k: u32) -> IntPoly {
    if k > a + b + c + d {
        return IntPoly::zero();
    }
    let left = rank4_half(a, b, OrderPart::Projection);
    let right = rank4_half(c, d, OrderPart::Kernel);
    let mut acc = IntPoly::zero();
    for ((u, v, kl), lp) in &left {
        if *kl > k {
            continue;
        }
        if let Some(rp) = right.get(&(*u, *v, k - kl)) {
            let f = aut_count_poly(*u, *v);
            acc += &(&(lp * rp) * &f);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn part(v: &[u32]) -> Partition {
        Partition::new(v.to_vec())
    }

    fn at(p: &IntPoly, x: i64) -> i64 {
        use num_traits::ToPrimitive;
        p.eval(&BigInt::from(x)).to_i64().unwrap()
    }

    #[test]
    fn gauss_binom_values() {
        assert_eq!(gauss_binom(2, 1).to_string(), "1 + p");
        assert_eq!(gauss_binom(3, 1).to_string(), "1 + p + p^2");
        assert_eq!(gauss_binom(4, 2).to_string(), "1 + p + 2*p^2 + p^3 + p^4");
        assert_eq!(at(&gauss_binom(4, 2), 2), 35);
        assert!(gauss_binom(2, 3).is_zero());
        assert_eq!(gauss_binom(5, 0), IntPoly::one());
        assert_eq!(gauss_binom(5, 5), IntPoly::one());
    }

    #[test]
    fn gauss_binom_symmetry() {
        for r in 0..=8u32 {
            for k in 0..=r {
                assert_eq!(gauss_binom(r, k), gauss_binom(r, r - k), "[{r} over {k}]");
            }
        }
    }

    #[test]
    fn type_counts() {
        assert_eq!(subgroups_of_type(&part(&[1, 1]), &part(&[1])).to_string(), "1 + p");
        assert_eq!(subgroups_of_type(&part(&[2, 1]), &part(&[1])).to_string(), "1 + p");
        assert_eq!(subgroups_of_type(&part(&[1]), &part(&[1])), IntPoly::one());
        // mu not dominated by lambda
        assert!(subgroups_of_type(&part(&[1, 1]), &part(&[2])).is_zero());
        // order-p^2 cyclic subgroups of Z_{p^2} x Z_p
        assert_eq!(subgroups_of_type(&part(&[2, 1]), &part(&[2])).to_string(), "p");
    }

    #[test]
    fn totals() {
        assert_eq!(total_subgroups_poly(&part(&[1, 1])).to_string(), "3 + p");
        assert_eq!(total_subgroups_poly(&part(&[1, 1, 1])).to_string(), "4 + 2*p + 2*p^2");
        assert_eq!(at(&total_subgroups_poly(&part(&[2, 1])), 2), 8);
        assert_eq!(total_subgroups_poly(&part(&[])), IntPoly::one());
    }

    #[test]
    fn order_restricted() {
        assert_eq!(subgroups_of_order_poly(&part(&[1, 1]), 1).to_string(), "1 + p");
        assert_eq!(subgroups_of_order_poly(&part(&[1, 1]), 0), IntPoly::one());
        assert_eq!(subgroups_of_order_poly(&part(&[2, 2]), 2).to_string(), "1 + p + p^2");
        assert_eq!(at(&subgroups_of_order_poly(&part(&[2, 2]), 2), 2), 7);
        assert!(subgroups_of_order_poly(&part(&[1, 1]), 3).is_zero());
        // the order-restricted counts partition the total
        for lambda in [part(&[2, 1]), part(&[2, 2]), part(&[3, 1, 1])] {
            let mut sum = IntPoly::zero();
            for k in 0..=lambda.weight() {
                sum += &subgroups_of_order_poly(&lambda, k);
            }
            assert_eq!(sum, total_subgroups_poly(&lambda), "partition at {lambda}");
        }
    }

    #[test]
    fn cyclic_counts() {
        assert_eq!(cyclic_of_order_poly(&part(&[2, 1]), 1).to_string(), "1 + p");
        assert_eq!(cyclic_of_order_poly(&part(&[2, 1]), 2).to_string(), "p");
        assert_eq!(cyclic_of_order_poly(&part(&[1]), 1), IntPoly::one());
        assert!(cyclic_of_order_poly(&part(&[2, 1]), 3).is_zero());
        assert!(cyclic_of_order_poly(&part(&[2, 1]), 0).is_zero());
    }

    #[test]
    fn aut_counts() {
        assert_eq!(at(&aut_count_poly(1, 1), 2), 6);
        assert_eq!(aut_count_poly(0, 1).to_string(), "-1 + p");
        assert_eq!(at(&aut_count_poly(1, 2), 2), 8);
        assert_eq!(aut_count_poly(0, 0), IntPoly::one());
        // symmetric in the exponents
        assert_eq!(aut_count_poly(2, 1), aut_count_poly(1, 2));
    }

    #[test]
    fn s2_closed_form() {
        assert_eq!(s2_prime_power_poly(1, 1).unwrap().to_string(), "3 + p");
        assert_eq!(at(&s2_prime_power_poly(1, 2).unwrap(), 2), 8);
        assert_eq!(at(&s2_prime_power_poly(2, 2).unwrap(), 2), 15);
        assert!(s2_prime_power_poly(2, 1).is_err());
        assert!(s2_prime_power_poly(0, 1).is_err());
        for a in 1..=4u32 {
            for b in a..=4 {
                assert_eq!(
                    s2_prime_power_poly(a, b).unwrap(),
                    total_subgroups_poly(&part(&[b, a])),
                    "s2 vs gaussian route at ({a},{b})"
                );
            }
        }
    }

    #[test]
    fn s3_closed_form() {
        assert_eq!(s3_prime_power_poly(1, 1, 1).unwrap().to_string(), "4 + 2*p + 2*p^2");
        assert_eq!(at(&s3_prime_power_poly(2, 1, 1).unwrap(), 2), 27);
        assert_eq!(at(&s3_prime_power_poly(1, 1, 1).unwrap(), 3), 28);
        assert!(s3_prime_power_poly(1, 2, 1).is_err());
        assert!(s3_prime_power_poly(1, 1, 0).is_err());
        for l1 in 1..=3u32 {
            for l2 in 1..=l1 {
                for l3 in 1..=l2 {
                    assert_eq!(
                        s3_prime_power_poly(l1, l2, l3).unwrap(),
                        total_subgroups_poly(&part(&[l1, l2, l3])),
                        "s3 vs gaussian route at ({l1},{l2},{l3})"
                    );
                }
            }
        }
    }

    #[test]
    fn n4_table_rows() {
        assert_eq!(n4_poly(1, 1, 1, 1).to_string(), "5 + 3*p + 4*p^2 + 3*p^3 + p^4");
        assert_eq!(
            n4_poly(2, 2, 2, 2).to_string(),
            "9 + 7*p + 12*p^2 + 15*p^3 + 14*p^4 + 11*p^5 + 9*p^6 + 3*p^7 + p^8"
        );
        assert_eq!(at(&n4_poly(1, 1, 1, 1), 2), 67);
        assert_eq!(at(&n4_poly(1, 1, 1, 1), 3), 212);
    }

    #[test]
    fn n4_order_table_rows() {
        assert_eq!(n4_order_poly(1, 1, 1, 1, 0), IntPoly::one());
        assert_eq!(n4_order_poly(1, 1, 1, 1, 1).to_string(), "1 + p + p^2 + p^3");
        assert_eq!(
            n4_order_poly(1, 1, 1, 1, 2).to_string(),
            "1 + p + 2*p^2 + p^3 + p^4"
        );
        assert_eq!(
            n4_order_poly(3, 3, 3, 3, 6).to_string(),
            "1 + p + 2*p^2 + 3*p^3 + 4*p^4 + 5*p^5 + 7*p^6 + 6*p^7 + 6*p^8 + 4*p^9 + 3*p^10 + p^11 + p^12"
        );
        assert!(n4_order_poly(1, 1, 1, 1, 5).is_zero());
    }

    #[test]
    fn n4_reduces_to_lower_rank() {
        // zero exponents drop factors: N(p^a, 1, 1, 1) counts subgroups of
        // the cyclic group, which is a + 1.
        for a in 0..=4u32 {
            assert_eq!(n4_poly(a, 0, 0, 0), IntPoly::constant(a as i64 + 1));
        }
        assert_eq!(n4_poly(1, 1, 0, 0), total_subgroups_poly(&part(&[1, 1])));
        assert_eq!(n4_poly(0, 2, 1, 0), total_subgroups_poly(&part(&[2, 1])));
    }

    #[test]
    fn n4_permutation_invariance() {
        let base = n4_poly(1, 2, 3, 2);
        for perm in [
            (1, 2, 2, 3),
            (2, 1, 3, 2),
            (3, 2, 2, 1),
            (2, 3, 1, 2),
            (2, 2, 3, 1),
        ] {
            assert_eq!(n4_poly(perm.0, perm.1, perm.2, perm.3), base, "{perm:?}");
        }
    }

    #[test]
    fn n4_order_sums_to_total() {
        for (a, b, c, d) in [(1, 1, 1, 1), (1, 2, 1, 2), (2, 2, 1, 3)] {
            let mut sum = IntPoly::zero();
            for k in 0..=(a + b + c + d) {
                sum += &n4_order_poly(a, b, c, d, k);
            }
            assert_eq!(sum, n4_poly(a, b, c, d), "({a},{b},{c},{d})");
        }
    }

    #[test]
    fn n4_matches_gaussian_route() {
        for (a, b, c, d) in [(1, 1, 1, 1), (1, 1, 2, 2), (2, 2, 2, 2), (1, 2, 3, 1)] {
            let lambda = part(&[a, b, c, d]);
            assert_eq!(n4_poly(a, b, c, d), total_subgroups_poly(&lambda), "({a},{b},{c},{d})");
        }
    }

    #[test]
    fn nonnegative_coefficients() {
        for lambda in [part(&[3, 2, 1]), part(&[2, 2, 2]), part(&[4, 1]), part(&[1, 1, 1, 1])] {
            assert!(total_subgroups_poly(&lambda).is_nonnegative());
            for mu in lambda.subpartitions() {
                assert!(subgroups_of_type(&lambda, &mu).is_nonnegative(), "{lambda} {mu}");
            }
        }
    }

    #[test]
    fn cyclic_sum_plus_trivial_is_total_cyclic() {
        // sum over nu of the cyclic counts, plus the trivial subgroup,
        // evaluated at p = 2 on Z_4 x Z_2: the cyclic subgroups are
        // {0}, three of order 2, two of order 4.
        let lambda = part(&[2, 1]);
        let total: i64 = (1..=2).map(|nu| at(&cyclic_of_order_poly(&lambda, nu), 2)).sum();
        assert_eq!(total + 1, 6);
    }
}
