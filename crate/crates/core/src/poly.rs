//! Dense polynomial arithmetic on monomial coefficient lists.
//!
//! A polynomial is a `&[S]` with `p[k]` the coefficient of `t^k`. The zero
//! polynomial may be represented by an empty slice or by explicit zeros.

use crate::numerics::Scalar;

/// Coefficient convolution of two polynomials.
pub fn multiply<S: Scalar>(p: &[S], q: &[S]) -> Vec<S> {
    if p.is_empty() || q.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        if a.is_zero_value() {
            continue;
        }
        for (j, b) in q.iter().enumerate() {
            out[i + j] = std::mem::replace(&mut out[i + j], S::zero()) + a.clone() * b;
        }
    }
    out
}

/// p - q, padded to the longer length.
pub fn sub<S: Scalar>(p: &[S], q: &[S]) -> Vec<S> {
    let len = p.len().max(q.len());
    (0..len)
        .map(|k| {
            let a = p.get(k).cloned().unwrap_or_else(S::zero);
            let b = q.get(k).cloned().unwrap_or_else(S::zero);
            a - b
        })
        .collect()
}

pub fn scale<S: Scalar>(p: &[S], c: &S) -> Vec<S> {
    p.iter().map(|a| a.clone() * c).collect()
}

/// Horner evaluation at `t`.
pub fn evaluate<S: Scalar>(p: &[S], t: &S) -> S {
    let mut acc = S::zero();
    for a in p.iter().rev() {
        acc = acc * t + a;
    }
    acc
}

/// Coefficients of dp/dt.
pub fn derivative<S: Scalar>(p: &[S]) -> Vec<S> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, a)| a.clone() * S::from_int(k as i64))
        .collect()
}

/// True when every coefficient is the exact field zero.
pub fn is_zero_poly<S: Scalar>(p: &[S]) -> bool {
    p.iter().all(|a| a.is_zero_value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> Exact {
        BigRational::from_ratio(n, d)
    }

    fn ri(n: i64) -> Exact {
        BigRational::from_int(n)
    }

    #[test]
    fn multiply_shift() {
        // (t^2 - 1/3) * t
        let p = [r(-1, 3), ri(0), ri(1)];
        let q = [ri(0), ri(1)];
        assert_eq!(multiply(&p, &q), vec![ri(0), r(-1, 3), ri(0), ri(1)]);
    }

    #[test]
    fn multiply_identity() {
        let p = [r(5, 7), ri(-2), ri(3)];
        assert_eq!(multiply(&[ri(1)], &p), p.to_vec());
    }

    #[test]
    fn multiply_difference_of_squares() {
        let p = [ri(1), ri(1)];
        let q = [ri(1), ri(-1)];
        assert_eq!(multiply(&p, &q), vec![ri(1), ri(0), ri(-1)]);
    }

    #[test]
    fn derivative_and_eval() {
        // d/dt (t^3 - 3t/5) = 3t^2 - 3/5
        let p = [ri(0), r(-3, 5), ri(0), ri(1)];
        assert_eq!(derivative(&p), vec![r(-3, 5), ri(0), ri(3)]);
        assert_eq!(evaluate(&p, &ri(2)), ri(8) - r(6, 5));
        assert_eq!(evaluate::<Exact>(&[], &ri(4)), ri(0));
    }
}
