//! Linear algebra over GF(2).
//!
//! Vectors are packed into `u64` words with coordinate `i` stored at bit
//! `i % 64` of word `i / 64`. Subspaces are kept in reduced row-echelon form,
//! so two subspaces are equal exactly when their bases are equal.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    /// Low `len` bits of `x`, coordinate `i` = bit `i`.
    pub fn from_u64(len: usize, x: u64) -> Self {
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len >= 64 { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = x & mask;
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// Lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.ones().next()
    }

    fn check_len(&self, other: &Self) {
        assert_eq!(self.len, other.len, "bit vector length mismatch");
    }

    pub fn xor_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut v = self.clone();
        v.xor_assign(other);
        v
    }

    pub fn or_assign(&mut self, other: &Self) {
        self.check_len(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and(&self, other: &Self) -> Self {
        self.check_len(other);
        BitVector {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.check_len(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_len(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        self.check_len(other);
        let ones: u32 = self.words.iter().zip(&other.words).map(|(a, b)| (a & b).count_ones()).sum();
        ones % 2 == 1
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = Self::zeros(self.len + other.len);
        for i in self.ones() {
            v.set(i, true);
        }
        for i in other.ones() {
            v.set(self.len + i, true);
        }
        v
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }
}

impl Ord for BitVector {
    /// Lexicographic in coordinate order, 0 < 1.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            if a != b {
                let t = (a ^ b).trailing_zeros();
                return if a >> t & 1 == 0 { Ordering::Less } else { Ordering::Greater };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        write!(f, ")")
    }
}

impl Serialize for BitVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_bits().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let bits = Vec::<u8>::deserialize(d)?;
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(serde::de::Error::custom(format!("bit value {b} is not 0 or 1")));
        }
        Ok(BitVector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
    }
}

fn common_len(vs: &[BitVector]) -> Result<Option<usize>> {
    let Some(first) = vs.first() else { return Ok(None) };
    for v in vs {
        if v.len != first.len {
            return Err(Error::MixedLengths(first.len, v.len));
        }
    }
    Ok(Some(first.len))
}

/// A subspace of GF(2)^len in reduced row-echelon form: rows sorted by
/// pivot (lowest set coordinate), each pivot column zero in the other rows.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Subspace {
    len: usize,
    rows: Vec<BitVector>,
}

impl Subspace {
    pub fn zero(len: usize) -> Self {
        Subspace { len, rows: Vec::new() }
    }

    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.first_one().unwrap()).collect()
    }

    /// Reduce `v` modulo the subspace; the result has zeros in every pivot column.
    pub fn reduce(&self, v: &BitVector) -> BitVector {
        let mut v = v.clone();
        for row in &self.rows {
            if v.get(row.first_one().unwrap()) {
                v.xor_assign(row);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        assert_eq!(v.len(), self.len, "bit vector length mismatch");
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns whether the dimension grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.first_one() else { return false };
        for row in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        let at = self.rows.partition_point(|r| r.first_one().unwrap() < p);
        self.rows.insert(at, v);
        true
    }

    /// All 2^dim elements, in the order of binary counting over the basis.
    pub fn elements(&self) -> Vec<BitVector> {
        let mut out = vec![BitVector::zeros(self.len)];
        for row in &self.rows {
            let more: Vec<_> = out.iter().map(|v| v.xor(row)).collect();
            out.extend(more);
        }
        out
    }
}

pub fn span(vs: &[BitVector]) -> Result<Subspace> {
    let len = common_len(vs)?.unwrap_or(0);
    let mut s = Subspace::zero(len);
    for v in vs {
        s.insert(v);
    }
    Ok(s)
}

/// Span inside an ambient space of known length (handles the empty list).
pub fn span_in(len: usize, vs: &[BitVector]) -> Result<Subspace> {
    if let Some(l) = common_len(vs)? {
        if l != len {
            return Err(Error::MixedLengths(len, l));
        }
    }
    let mut s = Subspace::zero(len);
    for v in vs {
        s.insert(v);
    }
    Ok(s)
}

pub fn rank(vs: &[BitVector]) -> Result<usize> {
    Ok(span(vs)?.dim())
}

/// The pivot-based projection GF(2)^r → GF(2)^(r − dim T) with kernel T:
/// reduce modulo T, then delete the pivot coordinates of T.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    kernel: Subspace,
    kept: Vec<usize>,
}

impl QuotientMap {
    pub fn source_len(&self) -> usize {
        self.kernel.len
    }

    pub fn target_len(&self) -> usize {
        self.kept.len()
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn apply(&self, v: &BitVector) -> BitVector {
        let red = self.kernel.reduce(v);
        BitVector::from_indices(
            self.kept.len(),
            self.kept.iter().enumerate().filter(|(_, &c)| red.get(c)).map(|(i, _)| i),
        )
    }
}

pub fn quotient_basis(r: usize, t: &Subspace) -> Result<QuotientMap> {
    if t.len != r {
        return Err(Error::MixedLengths(r, t.len));
    }
    let pivots = t.pivots();
    let kept = (0..r).filter(|c| !pivots.contains(c)).collect();
    Ok(QuotientMap { kernel: t.clone(), kept })
}

/// Rows of the r×m matrix whose columns are `columns`, as vectors of length m.
fn matrix_rows(columns: &[BitVector], r: usize) -> Vec<BitVector> {
    let m = columns.len();
    (0..r)
        .map(|j| BitVector::from_indices(m, (0..m).filter(|&i| columns[i].get(j))))
        .collect()
}

fn check_columns(columns: &[BitVector], r: usize) -> Result<()> {
    if let Some(l) = common_len(columns)? {
        if l != r {
            return Err(Error::MixedLengths(r, l));
        }
    }
    let rk = span_in(r, columns)?.dim();
    if rk != r {
        return Err(Error::NotFullRank { rank: rk, expected: r });
    }
    Ok(())
}

/// row Λ ⊆ GF(2)^m for the coloring with columns Λ_1..Λ_m in GF(2)^r.
pub fn row_space(columns: &[BitVector], r: usize) -> Result<Subspace> {
    check_columns(columns, r)?;
    span_in(columns.len(), &matrix_rows(columns, r))
}

/// The vectors (cΛ_1, …, cΛ_m) for every functional c, with c enumerated in
/// binary counting order (bit j of the counter is coordinate j of c).
pub fn row_space_elements(columns: &[BitVector], r: usize) -> Result<Vec<BitVector>> {
    check_columns(columns, r)?;
    let rows = matrix_rows(columns, r);
    let m = columns.len();
    let mut out = vec![BitVector::zeros(m)];
    for row in &rows {
        let more: Vec<_> = out.iter().map(|v| v.xor(row)).collect();
        out.extend(more);
    }
    Ok(out)
}

/// Ker Λ ⊆ GF(2)^m: all x with Σ x_i Λ_i = 0.
pub fn kernel_subgroup(columns: &[BitVector], r: usize) -> Result<Subspace> {
    check_columns(columns, r)?;
    let m = columns.len();
    let rref = span_in(m, &matrix_rows(columns, r))?;
    let pivots = rref.pivots();
    let mut k = Subspace::zero(m);
    for free in (0..m).filter(|c| !pivots.contains(c)) {
        let mut x = BitVector::unit(m, free);
        for (row, &p) in rref.rows.iter().zip(&pivots) {
            if row.get(free) {
                x.set(p, true);
            }
        }
        k.insert(&x);
    }
    Ok(k)
}

pub fn colorings_equivalent(a: &[BitVector], ra: usize, b: &[BitVector], rb: usize) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    Ok(row_space(a, ra)? == row_space(b, rb)?)
}

/// Some c with c·rows[i] = rhs[i] for all i, if one exists.
pub fn solve(rows: &[BitVector], rhs: &[bool], len: usize) -> Result<Option<BitVector>> {
    assert_eq!(rows.len(), rhs.len());
    let aug: Vec<BitVector> = rows
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            if row.len() != len {
                return Err(Error::MixedLengths(len, row.len()));
            }
            Ok(row.concat(&BitVector::from_bits(&[b])))
        })
        .collect::<Result<_>>()?;
    let s = span_in(len + 1, &aug)?;
    if s.rows.iter().any(|row| row.first_one() == Some(len)) {
        return Ok(None);
    }
    let mut c = BitVector::zeros(len);
    for row in &s.rows {
        if row.get(len) {
            c.set(row.first_one().unwrap(), true);
        }
    }
    Ok(Some(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(bits: &[u8]) -> BitVector {
        BitVector::from_bits(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>())
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&[]).unwrap(), 0);
        assert_eq!(rank(&[bv(&[1, 0]), bv(&[0, 1]), bv(&[1, 1])]).unwrap(), 2);
        let id: Vec<_> = (0..5).map(|i| BitVector::unit(5, i)).collect();
        assert_eq!(rank(&id).unwrap(), 5);
        assert!(matches!(rank(&[bv(&[1]), bv(&[1, 0])]), Err(Error::MixedLengths(..))));
    }

    #[test]
    fn long_vectors() {
        let a = BitVector::unit(130, 129);
        let b = BitVector::unit(130, 3);
        let s = span(&[a.clone(), b.clone(), a.xor(&b)]).unwrap();
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&a.xor(&b)));
        assert!(!s.contains(&BitVector::unit(130, 64)));
        assert_eq!(a.ones().collect::<Vec<_>>(), vec![129]);
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_basis(3, &Subspace::zero(3)).unwrap();
        for i in 0..3 {
            assert_eq!(q.apply(&BitVector::unit(3, i)), BitVector::unit(3, i));
        }
        let q = quotient_basis(3, &span(&[bv(&[1, 1, 0])]).unwrap()).unwrap();
        assert_eq!(q.apply(&bv(&[1, 0, 0])), q.apply(&bv(&[0, 1, 0])));
        let q = quotient_basis(4, &span(&[bv(&[1, 1, 1, 1])]).unwrap()).unwrap();
        let imgs: Vec<_> = (0..4).map(|i| q.apply(&BitVector::unit(4, i))).collect();
        assert_eq!(rank(&imgs).unwrap(), 3);
    }

    #[test]
    fn row_space_examples() {
        let id: Vec<_> = (0..3).map(|i| BitVector::unit(3, i)).collect();
        let mut els = row_space_elements(&id, 3).unwrap();
        els.sort();
        els.dedup();
        assert_eq!(els.len(), 8);

        let cols = vec![bv(&[1, 0]), bv(&[1, 0]), bv(&[0, 1]), bv(&[0, 1])];
        let mut els = row_space_elements(&cols, 2).unwrap();
        els.sort();
        let mut want = vec![bv(&[0, 0, 0, 0]), bv(&[1, 1, 0, 0]), bv(&[0, 0, 1, 1]), bv(&[1, 1, 1, 1])];
        want.sort();
        assert_eq!(els, want);

        assert_eq!(row_space_elements(&[bv(&[1])], 1).unwrap(), vec![bv(&[0]), bv(&[1])]);
        assert!(matches!(
            row_space_elements(&[bv(&[1, 0])], 2),
            Err(Error::NotFullRank { rank: 1, expected: 2 })
        ));
    }

    #[test]
    fn kernel_examples() {
        let id: Vec<_> = (0..4).map(|i| BitVector::unit(4, i)).collect();
        assert_eq!(kernel_subgroup(&id, 4).unwrap().dim(), 0);
        let cols = vec![bv(&[1, 0]), bv(&[1, 0]), bv(&[0, 1])];
        assert_eq!(kernel_subgroup(&cols, 2).unwrap(), span(&[bv(&[1, 1, 0])]).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let a = vec![bv(&[1, 0]), bv(&[1, 0]), bv(&[0, 1])];
        let b = vec![bv(&[1, 0]), bv(&[0, 1]), bv(&[0, 1])];
        assert!(!colorings_equivalent(&a, 2, &b, 2).unwrap());
        // change of basis e1 -> e1+e2
        let c = vec![bv(&[1, 1]), bv(&[1, 1]), bv(&[0, 1])];
        assert!(colorings_equivalent(&a, 2, &c, 2).unwrap());
    }

    #[test]
    fn solve_parity() {
        let rows = vec![bv(&[1, 0]), bv(&[0, 1]), bv(&[1, 1])];
        assert_eq!(solve(&rows, &[true, true, true], 2).unwrap(), None);
        let rows = vec![bv(&[1, 0]), bv(&[1, 0]), bv(&[0, 1])];
        assert_eq!(solve(&rows, &[true, true, true], 2).unwrap(), Some(bv(&[1, 1])));
    }

    #[test]
    fn ordering_is_coordinate_lexicographic() {
        assert!(bv(&[0, 1]) < bv(&[1, 0]));
        assert!(bv(&[1, 0, 0]) < bv(&[1, 0, 1]));
    }
}
