//! Dense GF(2) row vectors and Gaussian elimination.

use std::fmt;

/// A packed row of bits over GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Rank of a set of rows.
pub fn rank(rows: &[BitRow]) -> usize {
    Eliminator::new(rows).rank()
}

/// Incremental row-echelon basis that remembers which input rows were combined
/// to produce each pivot row.
#[derive(Clone, Debug)]
pub struct Eliminator {
    width: usize,
    /// (pivot column, reduced row, combination over input rows)
    basis: Vec<(usize, BitRow, BitRow)>,
    inputs: usize,
    /// Combinations of input rows that reduce to zero.
    dependencies: Vec<BitRow>,
}

impl Eliminator {
    pub fn new(rows: &[BitRow]) -> Self {
        let width = rows.first().map_or(0, BitRow::len);
        let mut elim = Self {
            width,
            basis: Vec::new(),
            inputs: rows.len(),
            dependencies: Vec::new(),
        };
        for (i, row) in rows.iter().enumerate() {
            let mut combo = BitRow::zeros(rows.len());
            combo.set(i, true);
            elim.insert(row.clone(), combo);
        }
        elim
    }

    fn insert(&mut self, mut row: BitRow, mut combo: BitRow) {
        for (pivot, brow, bcombo) in &self.basis {
            if row.get(*pivot) {
                row.xor_assign(brow);
                combo.xor_assign(bcombo);
            }
        }
        match row.first_one() {
            Some(pivot) => {
                // keep the basis fully reduced in the new pivot column
                for (_, brow, bcombo) in self.basis.iter_mut() {
                    if brow.get(pivot) {
                        brow.xor_assign(&row);
                        bcombo.xor_assign(&combo);
                    }
                }
                self.basis.push((pivot, row, combo));
            }
            None => self.dependencies.push(combo),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Null-space basis: each row selects input rows whose XOR vanishes.
    pub fn dependencies(&self) -> &[BitRow] {
        &self.dependencies
    }

    /// Express `target` as an XOR of input rows, if possible.
    pub fn solve(&self, target: &BitRow) -> Option<BitRow> {
        let mut row = target.clone();
        let mut combo = BitRow::zeros(self.inputs);
        for (pivot, brow, bcombo) in &self.basis {
            if row.get(*pivot) {
                row.xor_assign(brow);
                combo.xor_assign(bcombo);
            }
        }
        row.is_zero().then_some(combo)
    }
}

/// Basis of the solution space `{ v : rows · v = 0 }`.
pub fn kernel(rows: &[BitRow], width: usize) -> Vec<BitRow> {
    // reduced row echelon form over columns
    let mut reduced: Vec<BitRow> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (k, p) in pivots.iter().enumerate() {
            if r.get(*p) {
                r.xor_assign(&reduced[k]);
            }
        }
        if let Some(p) = r.first_one() {
            for existing in reduced.iter_mut() {
                if existing.get(p) {
                    existing.xor_assign(&r);
                }
            }
            reduced.push(r);
            pivots.push(p);
        }
    }
    let mut out = Vec::new();
    for free in 0..width {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = BitRow::zeros(width);
        v.set(free, true);
        for (k, p) in pivots.iter().enumerate() {
            if reduced[k].get(free) {
                v.set(*p, true);
            }
        }
        out.push(v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(s: &str) -> BitRow {
        BitRow::from_bools(&s.chars().map(|c| c == '1').collect::<Vec<_>>())
    }

    #[test]
    fn rank_and_dependencies() {
        let rows = [row("1100"), row("0110"), row("1010")];
        let e = Eliminator::new(&rows);
        assert_eq!(e.rank(), 2);
        assert_eq!(e.dependencies().len(), 1);
        let dep = &e.dependencies()[0];
        assert!(dep.get(0) && dep.get(1) && dep.get(2));
    }

    #[test]
    fn solve_finds_combination() {
        let rows = [row("1100"), row("0110")];
        let e = Eliminator::new(&rows);
        let combo = e.solve(&row("1010")).unwrap();
        assert!(combo.get(0) && combo.get(1));
        assert!(e.solve(&row("0001")).is_none());
    }

    #[test]
    fn kernel_vectors_are_orthogonal() {
        let rows = [row("1101"), row("0111")];
        let ker = kernel(&rows, 4);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for r in &rows {
                let mut dot = false;
                for i in 0..4 {
                    dot ^= r.get(i) & v.get(i);
                }
                assert!(!dot);
            }
        }
    }
}
