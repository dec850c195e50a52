//! The recurrent sequences h, x and g behind every operator, their class
//! split (generic q, q = 1, q = -1), the auxiliary Chebyshev-like
//! sequences, and spectrum validation.
//!
//! h and x satisfy the order-3 recurrence
//! `s[k+3] = z (s[k+2] - s[k+1]) + s[k]`; g satisfies the related order-5
//! recurrence whose characteristic roots are 1, q, 1/q, q^2, 1/q^2.

use crate::error::{Error, Result};
use crate::numerics::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassTag {
    /// Three distinct characteristic roots 1, q, 1/q.
    Q,
    /// Root 1 with multiplicity three (z = 3).
    One,
    /// Double root -1 plus simple root 1 (z = -1).
    MinusOne,
}

impl ClassTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            ClassTag::Q => "q",
            ClassTag::One => "1",
            ClassTag::MinusOne => "-1",
        }
    }
}

/// Class tag plus the defining parameter. z is always derived: from q for
/// the generic class, 3 for q = 1, -1 for q = -1.
#[derive(Clone, Debug)]
pub struct ClassSpec<S> {
    tag: ClassTag,
    q: Option<S>,
    z: S,
}

impl<S: Scalar> ClassSpec<S> {
    /// Generic-q class. Requires q not in {0, 1, -1}.
    pub fn generic_q(q: S) -> Result<Self> {
        let minus_one = -S::one();
        if q.is_zero_value() || q == S::one() || q == minus_one {
            return Err(Error::InvalidQ);
        }
        let z = S::one() + &q + S::one().try_div(&q)?;
        Ok(Self {
            tag: ClassTag::Q,
            q: Some(q),
            z,
        })
    }

    pub fn one() -> Self {
        Self {
            tag: ClassTag::One,
            q: None,
            z: S::from_int(3),
        }
    }

    pub fn minus_one() -> Self {
        Self {
            tag: ClassTag::MinusOne,
            q: None,
            z: S::from_int(-1),
        }
    }

    pub fn tag(&self) -> ClassTag {
        self.tag
    }

    pub fn z(&self) -> &S {
        &self.z
    }

    /// The parameter q; only present for the generic class.
    pub fn q(&self) -> Option<&S> {
        self.q.as_ref()
    }

    fn q_unchecked(&self) -> &S {
        self.q.as_ref().expect("class Q carries q")
    }
}

/// Spectral (a), node (b) and step (d) parameters. d1 and d2 are free; d0,
/// d3 and d4 are derived per class so that g stays in the admissible family.
#[derive(Clone, Debug)]
pub struct SequenceParams<S> {
    pub a: [S; 3],
    pub b: [S; 3],
    pub d1: S,
    pub d2: S,
    d0: S,
    d3: S,
    d4: S,
}

impl<S: Scalar> SequenceParams<S> {
    pub fn new(class: &ClassSpec<S>, a: [S; 3], b: [S; 3], d1: S, d2: S) -> Self {
        let (d0, d3, d4) = match class.tag() {
            ClassTag::Q => {
                let q = class.q_unchecked();
                let d3 = a[1].clone() * &b[1] * &S::one().try_div(q).expect("q nonzero");
                let d4 = a[2].clone() * &b[2] * q;
                let d0 = -(d4.clone() + &d1 + &d2 + &d3);
                (d0, d3, d4)
            }
            ClassTag::One => {
                let d3 = a[1].clone() * &b[2]
                    + a[2].clone() * &b[1]
                    + S::from_int(2) * a[2].clone() * &b[2];
                let d4 = a[2].clone() * &b[2];
                (S::zero(), d3, d4)
            }
            ClassTag::MinusOne => {
                let d3 = -(a[1].clone() * &b[2]) - a[2].clone() * &b[1];
                let d4 = S::from_int(-2) * a[2].clone() * &b[2];
                let d0 = -d1.clone();
                (d0, d3, d4)
            }
        };
        Self {
            a,
            b,
            d1,
            d2,
            d0,
            d3,
            d4,
        }
    }

    pub fn d0(&self) -> &S {
        &self.d0
    }

    pub fn d3(&self) -> &S {
        &self.d3
    }

    pub fn d4(&self) -> &S {
        &self.d4
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqKind {
    H,
    X,
    G,
}

#[derive(Clone, Debug)]
enum SeqCoeffs<S> {
    /// c0, c1, c2 against the order-3 solution basis of the class.
    Order3([S; 3]),
    /// d0..d4 against the order-5 solution basis of the class.
    Order5([S; 5]),
}

/// Closed-form evaluator for one recurrent sequence. Evaluation accepts
/// any integer index; negative indices extend the sequence backwards.
#[derive(Clone, Debug)]
pub struct RecurrentSequence<S> {
    class: ClassSpec<S>,
    kind: SeqKind,
    coeffs: SeqCoeffs<S>,
}

impl<S: Scalar> RecurrentSequence<S> {
    pub fn kind(&self) -> SeqKind {
        self.kind
    }

    pub fn class(&self) -> &ClassSpec<S> {
        &self.class
    }

    pub fn eval(&self, k: i64) -> S {
        let ki = S::from_int(k);
        match (&self.coeffs, self.class.tag()) {
            (SeqCoeffs::Order3([c0, c1, c2]), ClassTag::Q) => {
                let q = self.class.q_unchecked();
                let qk = q.try_pow(k).expect("q nonzero");
                let qmk = q.try_pow(-k).expect("q nonzero");
                c0.clone() + c1.clone() * qk + c2.clone() * qmk
            }
            (SeqCoeffs::Order3([c0, c1, c2]), ClassTag::One) => {
                c0.clone() + c1.clone() * &ki + c2.clone() * &ki * (ki.clone() - S::one())
            }
            (SeqCoeffs::Order3([c0, c1, c2]), ClassTag::MinusOne) => {
                let sign = S::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 });
                c0.clone() + c1.clone() * &sign + S::from_int(2) * c2.clone() * &ki * &sign
            }
            (SeqCoeffs::Order5([d0, d1, d2, d3, d4]), ClassTag::Q) => {
                let q = self.class.q_unchecked();
                let qk = q.try_pow(k).expect("q nonzero");
                let qmk = q.try_pow(-k).expect("q nonzero");
                let q2k = q.try_pow(2 * k).expect("q nonzero");
                let qm2k = q.try_pow(-2 * k).expect("q nonzero");
                d0.clone() + d1.clone() * qk + d2.clone() * qmk + d3.clone() * q2k
                    + d4.clone() * qm2k
            }
            (SeqCoeffs::Order5([_, d1, d2, d3, d4]), ClassTag::One) => {
                let k1 = ki.clone() - S::one();
                let k2 = ki.clone() - S::from_int(2);
                let k3 = ki.clone() - S::from_int(3);
                d1.clone() * &ki
                    + d2.clone() * &ki * &k1
                    + d3.clone() * &ki * &k1 * &k2
                    + d4.clone() * &ki * &k1 * &k2 * &k3
            }
            (SeqCoeffs::Order5([d0, d1, d2, d3, d4]), ClassTag::MinusOne) => {
                let sign = S::from_int(if k.rem_euclid(2) == 0 { 1 } else { -1 });
                let two = S::from_int(2);
                d0.clone()
                    + d1.clone() * &sign
                    + two.clone() * d2.clone() * &ki * &sign
                    + two.clone() * d3.clone() * &ki
                    + two * d4.clone() * &ki * (ki.clone() - S::one())
            }
        }
    }
}

/// Order-3 sequence (kind H or X) with coefficients c0, c1, c2:
/// generic q gives `c0 + c1 q^k + c2 q^-k`, q = 1 gives
/// `c0 + c1 k + c2 k(k-1)`, q = -1 gives `c0 + c1 (-1)^k + 2 c2 k (-1)^k`.
pub fn h_x_sequence<S: Scalar>(
    class: &ClassSpec<S>,
    kind: SeqKind,
    coeffs: [S; 3],
) -> RecurrentSequence<S> {
    debug_assert!(kind != SeqKind::G, "g sequences carry five coefficients");
    RecurrentSequence {
        class: class.clone(),
        kind,
        coeffs: SeqCoeffs::Order3(coeffs),
    }
}

/// The step sequence g built from the class-derived d coefficients.
/// g(0) = 0 by construction. Zero steps at k >= 1 are allowed here; the
/// operations that divide by g reject them.
pub fn g_sequence<S: Scalar>(
    class: &ClassSpec<S>,
    params: &SequenceParams<S>,
) -> RecurrentSequence<S> {
    RecurrentSequence {
        class: class.clone(),
        kind: SeqKind::G,
        coeffs: SeqCoeffs::Order5([
            params.d0().clone(),
            params.d1.clone(),
            params.d2.clone(),
            params.d3().clone(),
            params.d4().clone(),
        ]),
    }
}

/// Recover the order-3 coefficients from initial values s0, s1, s2.
pub fn params_from_initials<S: Scalar>(
    class: &ClassSpec<S>,
    s0: &S,
    s1: &S,
    s2: &S,
) -> Result<[S; 3]> {
    match class.tag() {
        ClassTag::Q => {
            let q = class.q_unchecked().clone();
            let q2 = q.clone() * &q;
            let qm1 = q.clone() - S::one();
            let denom = qm1.clone() * &qm1;
            let denom_pm = (q.clone() + S::one()) * &denom;
            let c0 = ((q2.clone() + S::one()) * s1 - q.clone() * (s0.clone() + s2))
                .try_div(&denom)?;
            let c1 = (-(q.clone() * (s1.clone() - s2) + s1.clone() - s0)).try_div(&denom_pm)?;
            let c2 = (q2.clone() * (q.clone() * (s0.clone() - s1) + s2.clone() - s1))
                .try_div(&denom_pm)?;
            Ok([c0, c1, c2])
        }
        ClassTag::One => {
            let c0 = s0.clone();
            let c1 = s1.clone() - s0;
            let c2 = (s0.clone() - S::from_int(2) * s1.clone() + s2)
                .try_div(&S::from_int(2))?;
            Ok([c0, c1, c2])
        }
        ClassTag::MinusOne => {
            let four = S::from_int(4);
            let c2 = (s2.clone() - s0).try_div(&four)?;
            let c1 = (S::from_int(3) * s0.clone() - S::from_int(2) * s1.clone() - s2)
                .try_div(&four)?;
            let c0 = (s0.clone() + S::from_int(2) * s1.clone() + s2).try_div(&four)?;
            Ok([c0, c1, c2])
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuxKind {
    /// p: monic-Chebyshev-like, p0 = 1, p1 = z - 1.
    P,
    /// r: r0 = 1, r1 = z.
    R,
    /// y: first-kind-like, y0 = 2, y1 = z - 1.
    Y,
}

/// k-th term of the auxiliary sequence satisfying
/// `s[k+2] = (z - 1) s[k+1] - s[k]`.
pub fn aux_pry<S: Scalar>(z: &S, kind: AuxKind, k: usize) -> S {
    aux_pry_table(z, kind, k).pop().expect("table is nonempty")
}

/// Terms 0..=n of the auxiliary sequence.
pub fn aux_pry_table<S: Scalar>(z: &S, kind: AuxKind, n: usize) -> Vec<S> {
    let (s0, s1) = match kind {
        AuxKind::P => (S::one(), z.clone() - S::one()),
        AuxKind::R => (S::one(), z.clone()),
        AuxKind::Y => (S::from_int(2), z.clone() - S::one()),
    };
    let mut table = Vec::with_capacity(n + 1);
    table.push(s0);
    if n >= 1 {
        table.push(s1);
    }
    for k in 2..=n {
        let next = (z.clone() - S::one()) * &table[k - 1] - table[k - 2].clone();
        table.push(next);
    }
    table
}

/// One failed algebraic distinctness condition, as printed per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicFailure {
    /// q^order = 1 for some order in 1..=N.
    QRootOfUnity { order: usize },
    /// q^s a1 = a2 for some s in 1..=2N-1.
    QSpectralRatio { s: usize },
    /// a1 + s a2 = 0 for some s in 0..=2N-1 (q = 1 class).
    OneLinear { s: usize },
    /// a2 = 0 (q = -1 class).
    MinusOneA2Zero,
    /// a1 - n a2 = 0 for some n >= 1 (q = -1 class, printed form).
    MinusOneLinear { n: usize },
}

impl std::fmt::Display for AlgebraicFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraicFailure::QRootOfUnity { order } => {
                write!(f, "q^{order} = 1 (root of unity)")
            }
            AlgebraicFailure::QSpectralRatio { s } => write!(f, "q^{s} a1 = a2"),
            AlgebraicFailure::OneLinear { s } => write!(f, "a1 + {s} a2 = 0"),
            AlgebraicFailure::MinusOneA2Zero => write!(f, "a2 = 0"),
            AlgebraicFailure::MinusOneLinear { n } => write!(f, "a1 - {n} a2 = 0"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumStatus {
    Pass,
    Fail,
    /// The printed algebraic conditions and the brute-force pairwise check
    /// disagree. The brute-force result is authoritative.
    Disagreement,
}

/// Result of validating h distinctness up to a depth.
#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub status: SpectrumStatus,
    /// Pairs (j, k), j < k, with h_j = h_k found by brute force.
    pub collisions: Vec<(usize, usize)>,
    pub algebraic_failures: Vec<AlgebraicFailure>,
    pub depth: usize,
}

impl SpectrumReport {
    pub fn distinct(&self) -> bool {
        self.collisions.is_empty()
    }

    /// Largest depth with pairwise distinct eigenvalues, given the found
    /// collisions; equals `depth` when there are none.
    pub fn max_valid_depth(&self) -> usize {
        self.collisions
            .iter()
            .map(|&(_, k)| k.saturating_sub(1))
            .min()
            .unwrap_or(self.depth)
    }
}

/// Check h_j != h_k for 0 <= j < k <= n, both by the class-specific
/// printed conditions and by brute-force pairwise comparison. The two
/// verdicts are compared; a mismatch is reported as a distinct status
/// because the matrix-level facts are the ground truth here.
pub fn validate_spectrum<S: Scalar>(
    class: &ClassSpec<S>,
    params: &SequenceParams<S>,
    n: usize,
) -> SpectrumReport {
    let h = h_x_sequence(class, SeqKind::H, params.a.clone());
    let values: Vec<S> = (0..=n as i64).map(|k| h.eval(k)).collect();
    let mut collisions = Vec::new();
    for k in 1..=n {
        for j in 0..k {
            if values[j] == values[k] {
                collisions.push((j, k));
            }
        }
    }

    let mut algebraic = Vec::new();
    let a1 = &params.a[1];
    let a2 = &params.a[2];
    match class.tag() {
        ClassTag::Q => {
            let q = class.q_unchecked();
            let mut qpow = S::one();
            for m in 1..=2 * n.max(1) - 1 {
                qpow = qpow * q;
                if m <= n && qpow == S::one() {
                    algebraic.push(AlgebraicFailure::QRootOfUnity { order: m });
                }
                if qpow.clone() * a1 == *a2 {
                    algebraic.push(AlgebraicFailure::QSpectralRatio { s: m });
                }
            }
        }
        ClassTag::One => {
            for s in 0..=2 * n.saturating_sub(1) {
                if (a1.clone() + S::from_int(s as i64) * a2.clone()).is_zero_value() {
                    algebraic.push(AlgebraicFailure::OneLinear { s });
                }
            }
        }
        ClassTag::MinusOne => {
            if a2.is_zero_value() {
                algebraic.push(AlgebraicFailure::MinusOneA2Zero);
            }
            for m in 1..=2 * n.max(1) - 1 {
                if (a1.clone() - S::from_int(m as i64) * a2.clone()).is_zero_value() {
                    algebraic.push(AlgebraicFailure::MinusOneLinear { n: m });
                }
            }
        }
    }

    let status = match (collisions.is_empty(), algebraic.is_empty()) {
        (true, true) => SpectrumStatus::Pass,
        (false, false) => SpectrumStatus::Fail,
        _ => SpectrumStatus::Disagreement,
    };
    SpectrumReport {
        status,
        collisions,
        algebraic_failures: algebraic,
        depth: n,
    }
}

/// A number sequence consumed by table builders: a closed-form class
/// member, a stepped recurrence from initial values, or an explicit list.
#[derive(Clone, Debug)]
pub enum Sequence<S> {
    Closed(RecurrentSequence<S>),
    /// Order-3 recurrence stepped from s0, s1, s2. Index -1 is reached by
    /// one backward step.
    Iterated3 { z: S, init: [S; 3] },
    /// Order-5 recurrence stepped from s0..s4.
    Iterated5 { z: S, init: [S; 5] },
    Explicit(Vec<S>),
}

impl<S: Scalar> Sequence<S> {
    pub fn eval(&self, k: i64) -> S {
        match self {
            Sequence::Closed(seq) => seq.eval(k),
            Sequence::Iterated3 { z, init } => {
                if k == -1 {
                    // s2 = z (s1 - s0) + s[-1]
                    return init[2].clone() - z.clone() * (init[1].clone() - &init[0]);
                }
                assert!(k >= 0, "order-3 stepping supports indices >= -1");
                let k = k as usize;
                if k < 3 {
                    return init[k].clone();
                }
                let mut window = init.clone();
                for _ in 3..=k {
                    let next =
                        z.clone() * (window[2].clone() - &window[1]) + window[0].clone();
                    window = [window[1].clone(), window[2].clone(), next];
                }
                window[2].clone()
            }
            Sequence::Iterated5 { z, init } => {
                assert!(k >= 0, "order-5 stepping supports indices >= 0");
                let k = k as usize;
                if k < 5 {
                    return init[k].clone();
                }
                let a = z.clone() * z - z.clone() - S::one();
                let b = (z.clone() - S::one()) * &a;
                let mut window = init.clone();
                for _ in 5..=k {
                    let next = a.clone() * (window[4].clone() - &window[1])
                        - b.clone() * (window[3].clone() - &window[2])
                        + window[0].clone();
                    for i in 0..4 {
                        window[i] = window[i + 1].clone();
                    }
                    window[4] = next;
                }
                window[4].clone()
            }
            Sequence::Explicit(values) => {
                assert!(k >= 0, "explicit sequences have no negative indices");
                values[k as usize].clone()
            }
        }
    }

    /// Values for indices `lo..=hi`. Errors when an explicit list is too
    /// short instead of panicking.
    pub fn values(&self, lo: i64, hi: i64) -> Result<Vec<S>> {
        if let Sequence::Explicit(list) = self {
            if lo < 0 {
                return Err(Error::SequenceTooShort {
                    index: lo,
                    have: list.len(),
                });
            }
            if hi >= list.len() as i64 {
                return Err(Error::SequenceTooShort {
                    index: hi,
                    have: list.len(),
                });
            }
        }
        Ok((lo..=hi).map(|k| self.eval(k)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Exact {
        BigRational::from_ratio(n, d)
    }

    fn ri(n: i64) -> Exact {
        BigRational::from_int(n)
    }

    fn class_q(num: i64, den: i64) -> ClassSpec<Exact> {
        ClassSpec::generic_q(r(num, den)).unwrap()
    }

    #[test]
    fn class_q_rejects_degenerate_q() {
        assert_eq!(ClassSpec::generic_q(ri(0)).unwrap_err(), Error::InvalidQ);
        assert_eq!(ClassSpec::generic_q(ri(1)).unwrap_err(), Error::InvalidQ);
        assert_eq!(ClassSpec::generic_q(ri(-1)).unwrap_err(), Error::InvalidQ);
        assert_eq!(*class_q(2, 1).z(), r(7, 2));
    }

    #[test]
    fn h_sequence_values() {
        // q = 1 class, h_k = k(k+1)
        let one = ClassSpec::one();
        let h = h_x_sequence(&one, SeqKind::H, [ri(0), ri(2), ri(1)]);
        assert_eq!(h.eval(3), ri(12));
        assert_eq!(h.eval(-1), ri(0));

        let q2 = class_q(2, 1);
        let h = h_x_sequence(&q2, SeqKind::H, [ri(0), ri(0), ri(1)]);
        assert_eq!(h.eval(3), r(1, 8));

        let m = ClassSpec::minus_one();
        let h = h_x_sequence(&m, SeqKind::H, [ri(0), ri(0), ri(1)]);
        assert_eq!(h.eval(2), ri(4));
        assert_eq!(
            (0..4).map(|k| h.eval(k)).collect::<Vec<_>>(),
            vec![ri(0), ri(-2), ri(4), ri(-6)]
        );
    }

    #[test]
    fn g_sequence_values() {
        // q = 1 class: a=(0,2,1), b=(1,0,0), d=(2,2) gives g_k = 2k^2
        let one = ClassSpec::one();
        let params = SequenceParams::new(
            &one,
            [ri(0), ri(2), ri(1)],
            [ri(1), ri(0), ri(0)],
            ri(2),
            ri(2),
        );
        assert_eq!(*params.d3(), ri(0));
        assert_eq!(*params.d4(), ri(0));
        let g = g_sequence(&one, &params);
        assert_eq!(g.eval(3), ri(18));
        assert_eq!(g.eval(0), ri(0));

        // q = 2: a=(0,0,1), b=(0,0,0), d=(1,0) gives g_k = 2^k - 1
        let q2 = class_q(2, 1);
        let params = SequenceParams::new(
            &q2,
            [ri(0), ri(0), ri(1)],
            [ri(0), ri(0), ri(0)],
            ri(1),
            ri(0),
        );
        let g = g_sequence(&q2, &params);
        assert_eq!(g.eval(2), ri(3));
        assert_eq!(g.eval(0), ri(0));

        let m = ClassSpec::minus_one();
        let params = SequenceParams::new(
            &m,
            [ri(0), ri(0), ri(1)],
            [ri(0), ri(1), ri(0)],
            ri(1),
            ri(0),
        );
        let g = g_sequence(&m, &params);
        assert_eq!(g.eval(0), ri(0));
    }

    #[test]
    fn initials_roundtrip_examples() {
        let one = ClassSpec::one();
        assert_eq!(
            params_from_initials(&one, &ri(0), &ri(2), &ri(6)).unwrap(),
            [ri(0), ri(2), ri(1)]
        );
        let q2 = class_q(2, 1);
        assert_eq!(
            params_from_initials(&q2, &ri(1), &ri(1), &ri(1)).unwrap(),
            [ri(1), ri(0), ri(0)]
        );
        let m = ClassSpec::minus_one();
        assert_eq!(
            params_from_initials(&m, &ri(0), &ri(-2), &ri(4)).unwrap(),
            [ri(0), ri(0), ri(1)]
        );
    }

    #[test]
    fn aux_sequences() {
        // z = 3: p = 1, 2, 3, 4, ...
        assert_eq!(aux_pry(&ri(3), AuxKind::P, 1), ri(2));
        assert_eq!(aux_pry(&ri(3), AuxKind::P, 2), ri(3));
        assert_eq!(aux_pry(&ri(3), AuxKind::Y, 0), ri(2));
        let z = r(7, 2);
        assert_eq!(aux_pry(&z, AuxKind::P, 1), z.clone() - ri(1));
    }

    #[test]
    fn aux_identities() {
        // r[k+2] = z p[k+1] - p[k] and y[k+2] = (z-1) p[k+1] - 2 p[k]
        for z in [ri(3), ri(-1), r(7, 2), r(-5, 3)] {
            let n = 12;
            let p = aux_pry_table(&z, AuxKind::P, n + 2);
            let rseq = aux_pry_table(&z, AuxKind::R, n + 2);
            let y = aux_pry_table(&z, AuxKind::Y, n + 2);
            for k in 0..=n {
                assert_eq!(rseq[k + 2], z.clone() * &p[k + 1] - p[k].clone());
                assert_eq!(
                    y[k + 2],
                    (z.clone() - ri(1)) * &p[k + 1] - ri(2) * p[k].clone()
                );
            }
        }
    }

    #[test]
    fn spectrum_detects_q_collision() {
        // q = 2, a1 = 1, a2 = 4: h_0 = h_2
        let q2 = class_q(2, 1);
        let params = SequenceParams::new(
            &q2,
            [ri(0), ri(1), ri(4)],
            [ri(0), ri(0), ri(0)],
            ri(1),
            ri(0),
        );
        let report = validate_spectrum(&q2, &params, 4);
        assert_eq!(report.status, SpectrumStatus::Fail);
        assert!(report.collisions.contains(&(0, 2)));
        assert!(report
            .algebraic_failures
            .contains(&AlgebraicFailure::QSpectralRatio { s: 2 }));
        assert_eq!(report.max_valid_depth(), 1);
    }

    #[test]
    fn spectrum_detects_linear_collision() {
        // h_k = 3k - k(k-1): h_1 = h_3 = 3
        let one = ClassSpec::one();
        let params = SequenceParams::new(
            &one,
            [ri(0), ri(3), ri(-1)],
            [ri(0), ri(0), ri(0)],
            ri(1),
            ri(0),
        );
        let report = validate_spectrum(&one, &params, 5);
        assert_eq!(report.status, SpectrumStatus::Fail);
        assert!(report.collisions.contains(&(1, 3)));
        assert!(report
            .algebraic_failures
            .contains(&AlgebraicFailure::OneLinear { s: 3 }));
    }

    #[test]
    fn spectrum_passes_legendre() {
        let one = ClassSpec::one();
        let params = SequenceParams::new(
            &one,
            [ri(0), ri(2), ri(1)],
            [ri(1), ri(0), ri(0)],
            ri(2),
            ri(2),
        );
        let report = validate_spectrum(&one, &params, 50);
        assert_eq!(report.status, SpectrumStatus::Pass);
        assert_eq!(report.max_valid_depth(), 50);
    }

    #[test]
    fn spectrum_disagreement_is_flagged() {
        // q = -1 class with a1 = -3 a2: h_0 = h_3, but the printed
        // condition a1 - n a2 != 0 never fires.
        let m = ClassSpec::minus_one();
        let params = SequenceParams::new(
            &m,
            [ri(0), ri(-3), ri(1)],
            [ri(0), ri(0), ri(0)],
            ri(1),
            ri(0),
        );
        let report = validate_spectrum(&m, &params, 6);
        assert_eq!(report.status, SpectrumStatus::Disagreement);
        assert!(report.collisions.contains(&(0, 3)));
        assert!(report.algebraic_failures.is_empty());
    }

    #[test]
    fn iterated_sequences_match_closed_forms() {
        let one = ClassSpec::one();
        let h = h_x_sequence(&one, SeqKind::H, [ri(0), ri(2), ri(1)]);
        let stepped = Sequence::Iterated3 {
            z: ri(3),
            init: [h.eval(0), h.eval(1), h.eval(2)],
        };
        for k in -1..=12 {
            assert_eq!(stepped.eval(k), h.eval(k), "index {k}");
        }

        let params = SequenceParams::new(
            &one,
            [ri(0), ri(2), ri(1)],
            [ri(1), ri(0), ri(0)],
            ri(2),
            ri(2),
        );
        let g = g_sequence(&one, &params);
        let stepped = Sequence::Iterated5 {
            z: ri(3),
            init: [g.eval(0), g.eval(1), g.eval(2), g.eval(3), g.eval(4)],
        };
        for k in 0..=12 {
            assert_eq!(stepped.eval(k), g.eval(k), "index {k}");
        }
    }

    #[test]
    fn explicit_sequence_bounds() {
        let s = Sequence::Explicit(vec![ri(5), ri(6)]);
        assert_eq!(s.eval(1), ri(6));
        assert!(s.values(0, 2).is_err());
    }

    fn arb_class() -> impl Strategy<Value = ClassSpec<Exact>> {
        prop_oneof![
            Just(ClassSpec::one()),
            Just(ClassSpec::minus_one()),
            (2i64..6, 1i64..4)
                .prop_filter("q not in {0,1,-1}", |(n, d)| n != d)
                .prop_map(|(n, d)| ClassSpec::generic_q(r(n, d)).unwrap()),
        ]
    }

    fn arb_triple() -> impl Strategy<Value = [Exact; 3]> {
        [
            (-6i64..7, 1i64..4),
            (-6i64..7, 1i64..4),
            (-6i64..7, 1i64..4),
        ]
        .prop_map(|pairs| pairs.map(|(n, d)| r(n, d)))
    }

    proptest! {
        // generated order-3 sequences satisfy the defining recurrence
        #[test]
        fn order3_recurrence_residual_is_zero(class in arb_class(), c in arb_triple()) {
            let s = h_x_sequence(&class, SeqKind::H, c);
            let z = class.z().clone();
            for k in 0..=12i64 {
                let lhs = s.eval(k + 3);
                let rhs = z.clone() * (s.eval(k + 2) - s.eval(k + 1)) + s.eval(k);
                prop_assert_eq!(lhs, rhs);
            }
        }

        // generated g sequences satisfy the order-5 recurrence and g(0) = 0
        #[test]
        fn order5_recurrence_residual_is_zero(
            class in arb_class(),
            a in arb_triple(),
            b in arb_triple(),
            d in [(-6i64..7, 1i64..4), (-6i64..7, 1i64..4)],
        ) {
            let [d1, d2] = d.map(|(n, den)| r(n, den));
            let params = SequenceParams::new(&class, a, b, d1, d2);
            let g = g_sequence(&class, &params);
            prop_assert!(g.eval(0).is_zero_value());
            let z = class.z().clone();
            let aa = z.clone() * &z - z.clone() - ri(1);
            let bb = (z.clone() - ri(1)) * &aa;
            for k in 0..=10i64 {
                let lhs = g.eval(k + 5);
                let rhs = aa.clone() * (g.eval(k + 4) - g.eval(k + 1))
                    - bb.clone() * (g.eval(k + 3) - g.eval(k + 2))
                    + g.eval(k);
                prop_assert_eq!(lhs, rhs);
            }
        }

        // pointwise products of order-3 solutions satisfy the order-5 recurrence
        #[test]
        fn hadamard_product_closure(
            class in arb_class(),
            c1 in arb_triple(),
            c2 in arb_triple(),
        ) {
            let s = h_x_sequence(&class, SeqKind::H, c1);
            let t = h_x_sequence(&class, SeqKind::X, c2);
            let prod = |k: i64| s.eval(k) * t.eval(k);
            let z = class.z().clone();
            let aa = z.clone() * &z - z.clone() - ri(1);
            let bb = (z.clone() - ri(1)) * &aa;
            for k in 0..=10i64 {
                let lhs = prod(k + 5);
                let rhs = aa.clone() * (prod(k + 4) - prod(k + 1))
                    - bb.clone() * (prod(k + 3) - prod(k + 2))
                    + prod(k);
                prop_assert_eq!(lhs, rhs);
            }
        }

        // params_from_initials inverts evaluation at 0, 1, 2
        #[test]
        fn initials_roundtrip(class in arb_class(), c in arb_triple()) {
            let s = h_x_sequence(&class, SeqKind::H, c.clone());
            let got = params_from_initials(&class, &s.eval(0), &s.eval(1), &s.eval(2)).unwrap();
            prop_assert_eq!(got, c);
        }
    }
}
