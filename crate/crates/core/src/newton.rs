//! Newton bases on arbitrary node sequences: basis-change matrices to and
//! from the monomial basis, nested evaluation, and node-polynomial ratios.
//!
//! v_0 = 1 and v_k(t) = (t - x_0)...(t - x_{k-1}). The same construction
//! on the eigenvalue nodes h_k yields the w basis used by the inverse
//! coefficient formulas.

use crate::error::Result;
use crate::numerics::Scalar;
use crate::sequences::Sequence;
use crate::table::{TableShape, TriangularTable};

/// Node sequence backing a Newton basis.
pub type NodeSequence<S> = Sequence<S>;

/// Basis-change matrices for the Newton basis on `nodes`, to depth `n`.
///
/// Row m of `V` holds the monomial coefficients of v_m, built by the
/// append-a-node row recurrence. `Vinv` holds complete homogeneous sums
/// of the nodes, built by the Pascal-style recurrence
/// `Vinv[m][k] = Vinv[m-1][k-1] + x_k Vinv[m-1][k]`. Both are unit lower
/// triangular and exact inverses of one another.
pub fn basis_matrices<S: Scalar>(
    nodes: &NodeSequence<S>,
    n: usize,
) -> Result<(TriangularTable<S>, TriangularTable<S>)> {
    let x = nodes.values(0, n as i64)?;
    let mut v = TriangularTable::new(TableShape::LowerTriangular, true);
    let mut row = vec![S::one()];
    v.push_row(row.clone());
    for m in 0..n {
        let mut next = vec![S::zero(); m + 2];
        for (k, coeff) in row.iter().enumerate() {
            // multiply by (t - x_m)
            next[k + 1] = std::mem::replace(&mut next[k + 1], S::zero()) + coeff.clone();
            next[k] = std::mem::replace(&mut next[k], S::zero()) - coeff.clone() * &x[m];
        }
        v.push_row(next.clone());
        row = next;
    }

    let mut vinv = TriangularTable::new(TableShape::LowerTriangular, true);
    vinv.push_row(vec![S::one()]);
    for m in 1..=n {
        let mut next = vec![S::zero(); m + 1];
        for k in 0..=m {
            let up_left = if k >= 1 { vinv.get(m - 1, k - 1) } else { S::zero() };
            let up = if k <= m - 1 { vinv.get(m - 1, k) } else { S::zero() };
            next[k] = up_left + up * &x[k];
        }
        vinv.push_row(next);
    }
    Ok((v, vinv))
}

/// Evaluate a polynomial given in the Newton basis by nested
/// multiplication: (...(c_n (t - x_{n-1}) + c_{n-1})(t - x_{n-2})...).
pub fn eval_in_newton<S: Scalar>(
    coeffs: &[S],
    nodes: &NodeSequence<S>,
    t: &S,
) -> Result<S> {
    if coeffs.is_empty() {
        return Ok(S::zero());
    }
    let x = nodes.values(0, coeffs.len() as i64 - 1)?;
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for k in (0..coeffs.len() - 1).rev() {
        acc = acc * (t.clone() - &x[k]) + &coeffs[k];
    }
    Ok(acc)
}

/// The ratio w_n(t)/w_k(t) = prod_{j=k}^{n-1} (t - nodes_j). The empty
/// product (k = n) is 1.
pub fn w_ratio<S: Scalar>(nodes: &NodeSequence<S>, n: usize, k: usize, t: &S) -> Result<S> {
    assert!(k <= n, "w_ratio requires k <= n");
    if k == n {
        return Ok(S::one());
    }
    let x = nodes.values(k as i64, n as i64 - 1)?;
    Ok(x.iter()
        .fold(S::one(), |acc, xj| acc * (t.clone() - xj)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Scalar;
    use crate::poly;
    use crate::Exact;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Exact {
        BigRational::from_ratio(n, d)
    }

    fn ri(n: i64) -> Exact {
        BigRational::from_int(n)
    }

    fn ones() -> NodeSequence<Exact> {
        Sequence::Explicit(vec![ri(1); 16])
    }

    fn naturals() -> NodeSequence<Exact> {
        Sequence::Explicit((0..16).map(ri).collect())
    }

    #[test]
    fn v_rows_on_equal_nodes() {
        let (v, vinv) = basis_matrices(&ones(), 4).unwrap();
        // (t - 1)^2
        assert_eq!(v.row(2), &[ri(1), ri(-2), ri(1)]);
        // complete homogeneous over equal nodes counts monomials
        assert_eq!(vinv.get(3, 1), ri(3));
        assert_eq!(vinv.row(4), &[ri(1), ri(4), ri(6), ri(4), ri(1)]);
    }

    #[test]
    fn v_row_on_integer_nodes() {
        let (v, _) = basis_matrices(&naturals(), 4).unwrap();
        // t(t-1)(t-2)
        assert_eq!(v.row(3), &[ri(0), ri(2), ri(-3), ri(1)]);
    }

    #[test]
    fn newton_evaluation() {
        // Legendre u_2 in the v basis on nodes all 1, at t = 0
        let coeffs = [r(2, 3), ri(2), ri(1)];
        assert_eq!(eval_in_newton(&coeffs, &ones(), &ri(0)).unwrap(), r(-1, 3));
        assert_eq!(
            eval_in_newton(&[r(5, 9)], &ones(), &ri(77)).unwrap(),
            r(5, 9)
        );
        let shifted = Sequence::Explicit(vec![ri(5), ri(5)]);
        assert_eq!(
            eval_in_newton(&[ri(0), ri(1)], &shifted, &ri(7)).unwrap(),
            ri(2)
        );
    }

    #[test]
    fn w_ratio_products() {
        // nodes k(k+1): 0, 2, 6, 12, ...
        let h = Sequence::Explicit((0..12).map(|k| ri(k * (k + 1))).collect());
        assert_eq!(w_ratio(&h, 3, 1, &ri(0)).unwrap(), ri(12));
        assert_eq!(w_ratio(&h, 5, 5, &ri(9)).unwrap(), ri(1));
        assert_eq!(w_ratio(&naturals(), 2, 0, &ri(2)).unwrap(), ri(2));
    }

    fn arb_nodes() -> impl Strategy<Value = Vec<Exact>> {
        proptest::collection::vec((-5i64..6, 1i64..4).prop_map(|(n, d)| r(n, d)), 1..9)
    }

    proptest! {
        // V Vinv = Vinv V = I, exactly
        #[test]
        fn basis_matrices_are_inverse(nodes in arb_nodes()) {
            let n = nodes.len() - 1;
            let seq = Sequence::Explicit(nodes);
            let (v, vinv) = basis_matrices(&seq, n).unwrap();
            for a in 0..=n {
                for b in 0..=a {
                    let mut dot_vvi = ri(0);
                    let mut dot_viv = ri(0);
                    for j in b..=a {
                        dot_vvi = dot_vvi + v.get(a, j) * vinv.get(j, b);
                        dot_viv = dot_viv + vinv.get(a, j) * v.get(j, b);
                    }
                    let expect = if a == b { ri(1) } else { ri(0) };
                    prop_assert_eq!(&dot_vvi, &expect);
                    prop_assert_eq!(&dot_viv, &expect);
                }
            }
        }

        // Newton evaluation agrees with monomial evaluation through V
        #[test]
        fn newton_eval_matches_monomial(nodes in arb_nodes(), t in (-9i64..9, 1i64..4)) {
            let n = nodes.len() - 1;
            let t = r(t.0, t.1);
            let seq = Sequence::Explicit(nodes);
            let (v, _) = basis_matrices(&seq, n).unwrap();
            // coefficients 1, 1, ..., 1 in the Newton basis
            let coeffs = vec![ri(1); n + 1];
            let direct = eval_in_newton(&coeffs, &seq, &t).unwrap();
            let mut monomial = vec![ri(0); n + 1];
            for k in 0..=n {
                for j in 0..=k {
                    monomial[j] = monomial[j].clone() + v.get(k, j);
                }
            }
            prop_assert_eq!(direct, poly::evaluate(&monomial, &t));
        }

        // w_ratio(n,k) w_ratio(k,0) = w_ratio(n,0)
        #[test]
        fn w_ratio_composes(nodes in arb_nodes(), k in 0usize..8, t in -4i64..5) {
            let n = nodes.len() - 1;
            let k = k.min(n);
            let t = ri(t);
            let seq = Sequence::Explicit(nodes);
            let left = w_ratio(&seq, n, k, &t).unwrap() * w_ratio(&seq, k, 0, &t).unwrap();
            prop_assert_eq!(left, w_ratio(&seq, n, 0, &t).unwrap());
        }
    }
}
