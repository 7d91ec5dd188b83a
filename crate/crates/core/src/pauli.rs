//! Phaseless Pauli operators and strings.
//!
//! Every operator is stored as the bit pair `(b1, b2)` with
//! `I = (0,0)`, `X = (0,1)`, `Y = (1,0)`, `Z = (1,1)`. Under this layout the
//! phaseless product of two operators is the component-wise XOR of their bit
//! pairs, and two operators anticommute exactly when `a1·b2 ⊕ a2·b1 = 1`.
//!
//! Strings are indexed from qubit 1. The text form lists qubit `N` first, so
//! `"IX"` has `X` on qubit 1.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PauliOp {
    I,
    X,
    Y,
    Z,
}

impl PauliOp {
    pub const ALL: [PauliOp; 4] = [PauliOp::I, PauliOp::X, PauliOp::Y, PauliOp::Z];

    pub const fn from_bits(b1: bool, b2: bool) -> Self {
        match (b1, b2) {
            (false, false) => PauliOp::I,
            (false, true) => PauliOp::X,
            (true, false) => PauliOp::Y,
            (true, true) => PauliOp::Z,
        }
    }

    pub const fn bits(self) -> (bool, bool) {
        match self {
            PauliOp::I => (false, false),
            PauliOp::X => (false, true),
            PauliOp::Y => (true, false),
            PauliOp::Z => (true, true),
        }
    }

    pub const fn is_identity(self) -> bool {
        matches!(self, PauliOp::I)
    }

    /// True for `X` and `Y`, the operators that flip a computational basis state.
    pub const fn flips(self) -> bool {
        matches!(self, PauliOp::X | PauliOp::Y)
    }

    pub fn anticommutes(self, other: PauliOp) -> bool {
        let (a1, a2) = self.bits();
        let (b1, b2) = other.bits();
        (a1 & b2) ^ (a2 & b1)
    }

    pub fn as_char(self) -> char {
        match self {
            PauliOp::I => 'I',
            PauliOp::X => 'X',
            PauliOp::Y => 'Y',
            PauliOp::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(PauliOp::I),
            'X' => Some(PauliOp::X),
            'Y' => Some(PauliOp::Y),
            'Z' => Some(PauliOp::Z),
            _ => None,
        }
    }
}

/// Phase is discarded: `X * Y == Z`.
impl Mul for PauliOp {
    type Output = PauliOp;

    fn mul(self, rhs: PauliOp) -> PauliOp {
        let (a1, a2) = self.bits();
        let (b1, b2) = rhs.bits();
        PauliOp::from_bits(a1 ^ b1, a2 ^ b2)
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

const WORD: usize = 64;

fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A length-`N` Pauli string, packed as two bit planes.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    len: usize,
    b1: Vec<u64>,
    b2: Vec<u64>,
}

impl PauliString {
    pub fn identity(len: usize) -> Self {
        PauliString {
            len,
            b1: vec![0; words_for(len)],
            b2: vec![0; words_for(len)],
        }
    }

    /// Builds a string from operators listed qubit 1 first.
    pub fn from_ops<I: IntoIterator<Item = PauliOp>>(ops: I) -> Self {
        let ops: Vec<PauliOp> = ops.into_iter().collect();
        let mut s = PauliString::identity(ops.len());
        for (q, op) in ops.into_iter().enumerate() {
            s.set(q + 1, op);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Operator on `qubit` (1-based). Panics when out of range.
    pub fn get(&self, qubit: usize) -> PauliOp {
        assert!(
            qubit >= 1 && qubit <= self.len,
            "qubit {qubit} out of range"
        );
        let (w, b) = ((qubit - 1) / WORD, (qubit - 1) % WORD);
        PauliOp::from_bits((self.b1[w] >> b) & 1 == 1, (self.b2[w] >> b) & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, op: PauliOp) {
        assert!(
            qubit >= 1 && qubit <= self.len,
            "qubit {qubit} out of range"
        );
        let (w, b) = ((qubit - 1) / WORD, (qubit - 1) % WORD);
        let (x1, x2) = op.bits();
        self.b1[w] = (self.b1[w] & !(1 << b)) | ((x1 as u64) << b);
        self.b2[w] = (self.b2[w] & !(1 << b)) | ((x2 as u64) << b);
    }

    /// Operators from qubit 1 to qubit `N`.
    pub fn ops(&self) -> impl Iterator<Item = PauliOp> + '_ {
        (1..=self.len).map(move |q| self.get(q))
    }

    pub fn weight(&self) -> usize {
        self.b1
            .iter()
            .zip(&self.b2)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    pub fn is_identity(&self) -> bool {
        self.b1.iter().chain(&self.b2).all(|&w| w == 0)
    }

    fn check_len(&self, other: &PauliString) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    /// Phaseless product.
    pub fn try_mul(&self, other: &PauliString) -> Result<PauliString> {
        self.check_len(other)?;
        let mut out = self.clone();
        out.mul_assign_unchecked(other);
        Ok(out)
    }

    pub(crate) fn mul_assign_unchecked(&mut self, other: &PauliString) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.b1.iter_mut().zip(&other.b1) {
            *a ^= b;
        }
        for (a, b) in self.b2.iter_mut().zip(&other.b2) {
            *a ^= b;
        }
    }

    pub fn anticommutes(&self, other: &PauliString) -> Result<bool> {
        self.check_len(other)?;
        Ok(self.anticommutes_unchecked(other))
    }

    pub(crate) fn anticommutes_unchecked(&self, other: &PauliString) -> bool {
        let mut parity = 0u32;
        for w in 0..self.b1.len() {
            let x = (self.b1[w] & other.b2[w]) ^ (self.b2[w] & other.b1[w]);
            parity ^= x.count_ones() & 1;
        }
        parity == 1
    }

    /// Number of `Y` operators.
    pub fn y_count(&self) -> usize {
        self.b1
            .iter()
            .zip(&self.b2)
            .map(|(a, b)| (a & !b).count_ones() as usize)
            .sum()
    }

    /// Both bit planes as one GF(2) vector, `b1` words first.
    pub(crate) fn symplectic_words(&self) -> Vec<u64> {
        let mut out = Vec::with_capacity(2 * self.b1.len());
        out.extend_from_slice(&self.b1);
        out.extend_from_slice(&self.b2);
        out
    }

    pub fn to_bits(&self) -> BitSequence {
        let mut bits = Vec::with_capacity(2 * self.len);
        for op in self.ops() {
            let (b1, b2) = op.bits();
            bits.push(b1);
            bits.push(b2);
        }
        BitSequence(bits)
    }

    pub fn from_bits(bits: &BitSequence) -> Result<Self> {
        if bits.0.len() % 2 != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit sequence has odd length {}",
                bits.0.len()
            )));
        }
        Ok(PauliString::from_ops(
            bits.0.chunks(2).map(|p| PauliOp::from_bits(p[0], p[1])),
        ))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in (1..=self.len).rev() {
            write!(f, "{}", self.get(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::parse(0, "empty Pauli string"));
        }
        let mut ops = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            let op = PauliOp::from_char(c)
                .ok_or_else(|| Error::parse(0, format!("invalid Pauli character {c:?}")))?;
            ops.push(op);
        }
        Ok(PauliString::from_ops(ops))
    }
}

/// The `2N`-bit form of a string: position `2i-1` holds `b1` of qubit `i`,
/// position `2i` holds `b2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSequence(pub Vec<bool>);

impl BitSequence {
    /// Bit at 1-based `position`.
    pub fn get(&self, position: usize) -> bool {
        self.0[position - 1]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use PauliOp::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn operator_products_follow_the_phaseless_table() {
        assert_eq!(X * Y, Z);
        assert_eq!(I * X, X);
        assert_eq!(Z * Z, I);
        assert_eq!(Y * Z, X);
        assert_eq!(Z * X, Y);
    }

    #[test]
    fn operator_anticommutation_table() {
        assert!(X.anticommutes(Y));
        assert!(!I.anticommutes(Z));
        assert!(!Y.anticommutes(Y));
        for a in PauliOp::ALL {
            for b in PauliOp::ALL {
                let expected = a != b && !a.is_identity() && !b.is_identity();
                assert_eq!(a.anticommutes(b), expected, "{a}{b}");
            }
        }
    }

    #[test]
    fn string_products() {
        assert_eq!(ps("IX").try_mul(&ps("IY")).unwrap(), ps("IZ"));
        assert_eq!(ps("XZ").try_mul(&ps("YZ")).unwrap(), ps("ZI"));
        assert!(ps("IX").try_mul(&ps("X")).is_err());
    }

    #[test]
    fn string_anticommutation() {
        assert!(!ps("XX").anticommutes(&ps("YY")).unwrap());
        assert!(ps("XXX").anticommutes(&ps("YYY")).unwrap());
        assert!(ps("XX").anticommutes(&ps("Y")).is_err());
    }

    #[test]
    fn weights() {
        assert_eq!(ps("IIXX").weight(), 2);
        assert_eq!(ps("IIII").weight(), 0);
        assert_eq!(ps("XZYZ").weight(), 4);
    }

    #[test]
    fn text_order_is_highest_qubit_first() {
        let p = ps("XZYI");
        assert_eq!(p.get(1), I);
        assert_eq!(p.get(2), Y);
        assert_eq!(p.get(4), X);
        assert!(" ".parse::<PauliString>().is_err());
        assert!("XA".parse::<PauliString>().is_err());
    }

    #[test]
    fn bit_sequence_layout() {
        // qubit 1 = X = (0,1), qubit 2 = Y = (1,0)
        let bits = ps("YX").to_bits();
        assert_eq!(bits.0, vec![false, true, true, false]);
        assert!(!bits.get(1));
        assert!(bits.get(2));
    }

    #[test]
    fn wide_strings_span_words() {
        let mut p = PauliString::identity(130);
        p.set(1, X);
        p.set(65, Y);
        p.set(130, Z);
        assert_eq!(p.weight(), 3);
        let q: PauliString = p.to_string().parse().unwrap();
        assert_eq!(p, q);
        assert!(!p.anticommutes(&p).unwrap());
    }

    fn op() -> impl Strategy<Value = PauliOp> {
        prop::sample::select(PauliOp::ALL.to_vec())
    }

    fn string_pair() -> impl Strategy<Value = (PauliString, PauliString)> {
        (1usize..=16).prop_flat_map(|n| {
            (
                prop::collection::vec(op(), n).prop_map(PauliString::from_ops),
                prop::collection::vec(op(), n).prop_map(PauliString::from_ops),
            )
        })
    }

    proptest! {
        #[test]
        fn product_is_bitwise_xor(a in op(), b in op()) {
            let (a1, a2) = a.bits();
            let (b1, b2) = b.bits();
            prop_assert_eq!((a * b).bits(), (a1 ^ b1, a2 ^ b2));
        }

        #[test]
        fn string_algebra_laws((p, q) in string_pair()) {
            let pq = p.try_mul(&q).unwrap();
            prop_assert_eq!(&pq, &q.try_mul(&p).unwrap());
            prop_assert!(p.try_mul(&p).unwrap().is_identity());
            prop_assert_eq!(p.anticommutes(&q).unwrap(), q.anticommutes(&p).unwrap());
            prop_assert!(!p.anticommutes(&p).unwrap());
            prop_assert!(pq.weight() <= p.weight() + q.weight());
            let odd = p.ops().zip(q.ops()).filter(|(a, b)| a.anticommutes(*b)).count() % 2 == 1;
            prop_assert_eq!(p.anticommutes(&q).unwrap(), odd);
        }

        #[test]
        fn text_and_bits_round_trip((p, _q) in string_pair()) {
            prop_assert_eq!(p.to_string().parse::<PauliString>().unwrap(), p.clone());
            prop_assert_eq!(PauliString::from_bits(&p.to_bits()).unwrap(), p);
        }
    }
}
