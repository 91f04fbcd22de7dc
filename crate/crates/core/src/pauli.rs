//! Pauli strings, stabilizer generating sets and the neighboring-blocks
//! classification.
//!
//! Positions reported through [`BlockExtent`] and the text formats are 1-based;
//! letter indices inside [`PauliString`] are 0-based.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gf2::{BitRow, Eliminator};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("invalid Pauli letter {0:?}")]
    BadLetter(char),
    #[error("empty Pauli string")]
    Empty,
    #[error("all-identity string has no block")]
    AllIdentity,
    #[error("nontrivial letters of {0} do not form one circular block")]
    NotOneBlock(String),
    #[error("code format: {0}")]
    Format(String),
    #[error("correctability check limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },
}

/// Single-qubit Pauli letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    pub const NONTRIVIAL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn x_bit(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn z_bit(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }

    pub fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Result<Self, PauliError> {
        match c {
            'I' | '_' => Ok(Pauli::I),
            'X' => Ok(Pauli::X),
            'Y' => Ok(Pauli::Y),
            'Z' => Ok(Pauli::Z),
            other => Err(PauliError::BadLetter(other)),
        }
    }

    /// `a · b = i^k · c`; returns `(c, k)`.
    pub fn product(a: Pauli, b: Pauli) -> (Pauli, u8) {
        use Pauli::*;
        match (a, b) {
            (I, p) | (p, I) => (p, 0),
            (X, X) | (Y, Y) | (Z, Z) => (I, 0),
            (X, Y) => (Z, 1),
            (Y, Z) => (X, 1),
            (Z, X) => (Y, 1),
            (Y, X) => (Z, 3),
            (Z, Y) => (X, 3),
            (X, Z) => (Y, 3),
        }
    }

    pub fn anticommutes(self, other: Pauli) -> bool {
        !self.is_identity() && !other.is_identity() && self != other
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// An element of the n-qubit Pauli group: `i^phase · P_1 ⊗ … ⊗ P_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
    /// exponent of i, always in 0..4
    phase: u8,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self { letters, phase: 0 }
    }

    pub fn with_phase(letters: Vec<Pauli>, phase: u8) -> Self {
        Self {
            letters,
            phase: phase % 4,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::new(vec![Pauli::I; n])
    }

    /// A weight-one string with `p` at 0-based position `q`.
    pub fn single(n: usize, q: usize, p: Pauli) -> Self {
        let mut letters = vec![Pauli::I; n];
        letters[q] = p;
        Self::new(letters)
    }

    pub fn from_bits(x: &BitRow, z: &BitRow) -> Self {
        let letters = (0..x.len())
            .map(|i| Pauli::from_bits(x.get(i), z.get(i)))
            .collect();
        Self::new(letters)
    }

    pub fn n(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn letter(&self, q: usize) -> Pauli {
        self.letters[q]
    }

    /// Phase as an exponent of i.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_str(&self) -> &'static str {
        ["+", "+i", "-", "-i"][self.phase as usize]
    }

    pub fn weight(&self) -> usize {
        self.letters.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&q| !self.letters[q].is_identity())
            .collect()
    }

    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|p| p.is_identity())
    }

    /// Same string with phase reset to +1.
    pub fn unsigned(&self) -> Self {
        Self::new(self.letters.clone())
    }

    pub fn negated(&self) -> Self {
        Self::with_phase(self.letters.clone(), self.phase + 2)
    }

    pub fn dagger(&self) -> Self {
        Self::with_phase(self.letters.clone(), (4 - self.phase) % 4)
    }

    pub fn multiply(&self, other: &PauliString) -> Result<PauliString, PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch(self.n(), other.n()));
        }
        let mut phase = self.phase + other.phase;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (c, k) = Pauli::product(a, b);
                phase += k;
                c
            })
            .collect();
        Ok(Self::with_phase(letters, phase))
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool, PauliError> {
        if self.n() != other.n() {
            return Err(PauliError::LengthMismatch(self.n(), other.n()));
        }
        let clashes = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| a.anticommutes(**b))
            .count();
        Ok(clashes % 2 == 0)
    }

    /// Binary symplectic form `(x | z)` of length 2n.
    pub fn symplectic(&self) -> BitRow {
        let n = self.n();
        let mut row = BitRow::zeros(2 * n);
        for (q, p) in self.letters.iter().enumerate() {
            row.set(q, p.x_bit());
            row.set(n + q, p.z_bit());
        }
        row
    }

    /// Letters permuted so that `out[perm[q]] = self[q]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut letters = vec![Pauli::I; self.n()];
        for (q, &p) in perm.iter().enumerate() {
            letters[p] = self.letters[q];
        }
        Self::with_phase(letters, self.phase)
    }

    pub fn letters_string(&self) -> String {
        self.letters.iter().map(|p| p.to_char()).collect()
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phase != 0 {
            f.write_str(["", "i", "-", "-i"][self.phase as usize])?;
        }
        f.write_str(&self.letters_string())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.phase_str(), self.letters_string())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    /// Accepts an optional sign prefix (`+`, `-`, `i`, `+i`, `-i`) then letters.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let (phase, body) = if let Some(rest) = s.strip_prefix("-i") {
            (3, rest)
        } else if let Some(rest) = s.strip_prefix("+i") {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('i') {
            (1, rest)
        } else if let Some(rest) = s.strip_prefix('-') {
            (2, rest)
        } else if let Some(rest) = s.strip_prefix('+') {
            (0, rest)
        } else {
            (0, s)
        };
        if body.is_empty() {
            return Err(PauliError::Empty);
        }
        let letters = body
            .chars()
            .map(Pauli::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::with_phase(letters, phase))
    }
}

/// Convenience parser for string literals known to be valid.
pub fn ps(s: &str) -> PauliString {
    s.parse().unwrap_or_else(|e| panic!("bad Pauli literal {s:?}: {e}"))
}

pub fn pauli_multiply(a: &PauliString, b: &PauliString) -> Result<PauliString, PauliError> {
    a.multiply(b)
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool, PauliError> {
    a.commutes(b)
}

/// An ordered generating set of a stabilizer group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerCode {
    name: String,
    n: usize,
    generators: Vec<PauliString>,
}

impl StabilizerCode {
    /// Checks shapes only; use [`validate_generating_set`] for the group properties.
    pub fn new(name: &str, generators: Vec<PauliString>) -> Result<Self, PauliError> {
        let n = generators.first().map(PauliString::n).ok_or(PauliError::Empty)?;
        for g in &generators {
            if g.n() != n {
                return Err(PauliError::LengthMismatch(n, g.n()));
            }
            if g.phase() != 0 {
                return Err(PauliError::Format(format!("generator {g} must carry phase +1")));
            }
        }
        if generators.len() > n {
            return Err(PauliError::Format(format!(
                "{} generators on {n} qubits",
                generators.len()
            )));
        }
        Ok(Self {
            name: name.to_string(),
            n,
            generators,
        })
    }

    pub fn from_strs(name: &str, gens: &[&str]) -> Result<Self, PauliError> {
        let generators = gens
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(name, generators)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &PauliString {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of encoded qubits.
    pub fn k(&self) -> usize {
        self.n - self.generators.len()
    }

    /// Same group, generators listed in `order`.
    pub fn reordered(&self, order: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            n: self.n,
            generators: order.iter().map(|&i| self.generators[i].clone()).collect(),
        }
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn rep3() -> Self {
        Self::from_strs("rep3", &["ZZI", "ZIZ"]).expect("static code")
    }

    pub fn rep5() -> Self {
        Self::from_strs("rep5", &["ZZIII", "IZZII", "IIZZI", "ZIIIZ"]).expect("static code")
    }

    pub fn laflamme5() -> Self {
        Self::from_strs("laflamme5", &["ZXXZI", "XXZIZ", "XZIZX", "ZIZXX"]).expect("static code")
    }

    pub fn shor9() -> Self {
        Self::from_strs(
            "shor9",
            &[
                "ZZIIIIIII",
                "IZZIIIIII",
                "IIIZZIIII",
                "IIIIZZIII",
                "IIIIIIZZI",
                "IIIIIIIZZ",
                "XXXXXXIII",
                "IIIXXXXXX",
            ],
        )
        .expect("static code")
    }

    /// `Z_i Z_{i+1}` for consecutive pairs along an open chain.
    pub fn repetition_chain(n: usize) -> Self {
        let gens = (0..n - 1)
            .map(|i| {
                let mut l = vec![Pauli::I; n];
                l[i] = Pauli::Z;
                l[i + 1] = Pauli::Z;
                PauliString::new(l)
            })
            .collect();
        Self::new(&format!("chain{n}"), gens).expect("chain code")
    }

    /// Text format: `n=<count> name=<label>` then one generator per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} name={}\n", self.n, self.name);
        for g in &self.generators {
            out.push_str(&g.letters_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self, PauliError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| PauliError::Format("missing header".into()))?;
        let mut n = None;
        let mut name = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = Some(
                    v.parse::<usize>()
                        .map_err(|_| PauliError::Format(format!("bad qubit count {v:?}")))?,
                );
            } else if let Some(v) = field.strip_prefix("name=") {
                name = Some(v.to_string());
            } else {
                return Err(PauliError::Format(format!("unknown header field {field:?}")));
            }
        }
        let n = n.ok_or_else(|| PauliError::Format("header lacks n=".into()))?;
        let name = name.ok_or_else(|| PauliError::Format("header lacks name=".into()))?;
        let mut generators = Vec::new();
        for line in lines {
            let g: PauliString = line.parse()?;
            if g.n() != n {
                return Err(PauliError::LengthMismatch(n, g.n()));
            }
            generators.push(g);
        }
        Self::new(&name, generators)
    }

    /// Look up one of the built-in codes by CLI name.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "rep3" => Some(Self::rep3()),
            "rep5" => Some(Self::rep5()),
            "laflamme5" | "5q" => Some(Self::laflamme5()),
            "shor9" | "9q" => Some(Self::shor9()),
            _ => None,
        }
    }
}

/// Result of [`validate_generating_set`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// Pairs of generator indices that anticommute.
    pub anticommuting: Vec<(usize, usize)>,
    /// Symplectic rank of the generator matrix.
    pub rank: usize,
    /// Subsets (generator indices) whose product is proportional to identity.
    pub dependent_subsets: Vec<Vec<usize>>,
    pub contains_minus_identity: bool,
}

impl ValidationReport {
    pub fn commuting(&self) -> bool {
        self.anticommuting.is_empty()
    }

    pub fn independent(&self) -> bool {
        self.dependent_subsets.is_empty()
    }

    pub fn is_valid(&self) -> bool {
        self.commuting() && self.independent() && !self.contains_minus_identity
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "commutation: {} {:?}",
            mark(self.commuting()),
            self.anticommuting
        )?;
        writeln!(
            f,
            "independence: {} (rank {})",
            mark(self.independent()),
            self.rank
        )?;
        write!(f, "-I excluded: {}", mark(!self.contains_minus_identity))
    }
}

fn product_of(gens: &[PauliString], subset: &[usize], n: usize) -> PauliString {
    subset.iter().fold(PauliString::identity(n), |acc, &i| {
        acc.multiply(&gens[i]).expect("equal lengths")
    })
}

pub fn validate_generating_set(code: &StabilizerCode) -> ValidationReport {
    let gens = code.generators();
    let n = code.n();
    let mut anticommuting = Vec::new();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !gens[i].commutes(&gens[j]).expect("equal lengths") {
                anticommuting.push((i, j));
            }
        }
    }
    let rows: Vec<BitRow> = gens.iter().map(PauliString::symplectic).collect();
    let elim = Eliminator::new(&rows);
    let dependent_subsets: Vec<Vec<usize>> = elim
        .dependencies()
        .iter()
        .map(|combo| (0..gens.len()).filter(|&i| combo.get(i)).collect())
        .collect();
    // In an abelian group the phase of identity-letter products is a
    // homomorphism on the dependency space, so checking a basis suffices.
    // A noncommuting set always contains -I via a group commutator.
    let via_dependency = dependent_subsets
        .iter()
        .any(|s| product_of(gens, s, n).phase() != 0);
    let via_square = gens.iter().any(|g| g.phase() % 2 == 1);
    ValidationReport {
        contains_minus_identity: !anticommuting.is_empty() || via_dependency || via_square,
        anticommuting,
        rank: elim.rank(),
        dependent_subsets,
    }
}

/// Is `p` (up to phase) an element of the group generated by `code`?
/// Returns the generator subset on success.
pub fn stabilizer_membership(code: &StabilizerCode, p: &PauliString) -> Option<Vec<usize>> {
    let rows: Vec<BitRow> = code.generators().iter().map(PauliString::symplectic).collect();
    let elim = Eliminator::new(&rows);
    elim.solve(&p.symplectic())
        .map(|combo| (0..code.len()).filter(|&i| combo.get(i)).collect())
}

/// Is `p` in the normalizer, i.e. does it commute with every generator?
pub fn in_normalizer(code: &StabilizerCode, p: &PauliString) -> bool {
    code.generators()
        .iter()
        .all(|g| g.commutes(p).expect("equal lengths"))
}

/// Circular block of nontrivial letters, 1-based, inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlockExtent {
    pub l: usize,
    pub r: usize,
    pub n: usize,
}

impl BlockExtent {
    pub fn len(&self) -> usize {
        (self.r + self.n - self.l) % self.n + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 0-based positions from L to R walking forward around the ring.
    pub fn positions(&self) -> Vec<usize> {
        (0..self.len()).map(|k| (self.l - 1 + k) % self.n).collect()
    }

    pub fn contains(&self, pos1: usize) -> bool {
        let offset = (pos1 + self.n - self.l) % self.n;
        offset < self.len()
    }
}

pub fn block_extent(g: &PauliString) -> Result<BlockExtent, PauliError> {
    let n = g.n();
    let nontrivial: Vec<bool> = g.letters().iter().map(|p| !p.is_identity()).collect();
    let count = nontrivial.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(PauliError::AllIdentity);
    }
    if count == n {
        return Ok(BlockExtent { l: 1, r: n, n });
    }
    // a block starts where a nontrivial letter follows an identity letter
    let starts: Vec<usize> = (0..n)
        .filter(|&i| nontrivial[i] && !nontrivial[(i + n - 1) % n])
        .collect();
    if starts.len() != 1 {
        return Err(PauliError::NotOneBlock(g.letters_string()));
    }
    let l0 = starts[0];
    let r0 = (l0 + count - 1) % n;
    Ok(BlockExtent {
        l: l0 + 1,
        r: r0 + 1,
        n,
    })
}

/// Relation between the end of one block and the start of the next.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Condition {
    /// `R_i = L_{i+1} - 1` circularly.
    Adjacent,
    /// `R_i = L_{i+1}`.
    Overlap1,
    /// `R_i = L_{i+1} + 1` circularly.
    Overlap2,
}

impl Condition {
    pub fn number(self) -> u8 {
        match self {
            Condition::Adjacent => 1,
            Condition::Overlap1 => 2,
            Condition::Overlap2 => 3,
        }
    }

    /// Extra CNOT gates this junction forces into the riffle chain.
    pub fn cnot_cost(self) -> usize {
        match self {
            Condition::Adjacent => 0,
            Condition::Overlap1 => 1,
            Condition::Overlap2 => 2,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            Condition::Adjacent => "Adjacent(1)",
            Condition::Overlap1 => "Overlap1(2)",
            Condition::Overlap2 => "Overlap2(3)",
        };
        f.write_str(label)
    }
}

pub fn pair_condition(a: &BlockExtent, b: &BlockExtent) -> Option<Condition> {
    let n = a.n;
    // work 0-based modulo n
    let r = a.r - 1;
    let l = b.l - 1;
    if r == (l + n - 1) % n {
        Some(Condition::Adjacent)
    } else if r == l {
        Some(Condition::Overlap1)
    } else if r == (l + 1) % n {
        Some(Condition::Overlap2)
    } else {
        None
    }
}

/// Outcome of [`classify_neighboring_blocks`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NeighborClassification {
    Accepted {
        /// Generator indices (into the code) in measurement order.
        order: Vec<usize>,
        /// Condition between `order[i]` and `order[i+1]`.
        conditions: Vec<Condition>,
        extents: Vec<BlockExtent>,
        /// Number of other valid orderings (exhaustive search only).
        alternatives: usize,
        exhaustive: bool,
    },
    Rejected {
        reason: String,
    },
}

impl NeighborClassification {
    pub fn is_accepted(&self) -> bool {
        matches!(self, NeighborClassification::Accepted { .. })
    }

    pub fn order(&self) -> Option<&[usize]> {
        match self {
            NeighborClassification::Accepted { order, .. } => Some(order),
            NeighborClassification::Rejected { .. } => None,
        }
    }

    pub fn conditions(&self) -> Option<&[Condition]> {
        match self {
            NeighborClassification::Accepted { conditions, .. } => Some(conditions),
            NeighborClassification::Rejected { .. } => None,
        }
    }

    pub fn cnot_cost(&self) -> Option<usize> {
        self.conditions()
            .map(|c| c.iter().map(|c| c.cnot_cost()).sum())
    }
}

impl fmt::Display for NeighborClassification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NeighborClassification::Accepted {
                order,
                conditions,
                extents,
                alternatives,
                ..
            } => {
                for (k, &g) in order.iter().enumerate() {
                    let e = extents[k];
                    write!(f, "g{} [L={}, R={}]", g + 1, e.l, e.r)?;
                    if let Some(c) = conditions.get(k) {
                        write!(f, " -{c}- ")?;
                    }
                }
                write!(f, " ({alternatives} alternative orderings)")
            }
            NeighborClassification::Rejected { reason } => write!(f, "rejected: {reason}"),
        }
    }
}

const EXHAUSTIVE_LIMIT: usize = 8;

/// Which ordering to report when several satisfy the block conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OrderPreference {
    /// First valid ordering in lexicographic search order.
    #[default]
    FirstFound,
    /// Fewest CNOT-forcing overlaps; ties go to the first found.
    FewestCnots,
}

/// Search for a generator ordering in which every consecutive pair satisfies
/// one of the three block conditions.  Exhaustive up to eight generators,
/// greedy chain extension beyond.
pub fn classify_neighboring_blocks(code: &StabilizerCode) -> NeighborClassification {
    classify_with(code, OrderPreference::FirstFound)
}

pub fn classify_with(code: &StabilizerCode, pref: OrderPreference) -> NeighborClassification {
    let mut extents = Vec::with_capacity(code.len());
    for (i, g) in code.generators().iter().enumerate() {
        match block_extent(g) {
            Ok(e) => extents.push(e),
            Err(e) => {
                return NeighborClassification::Rejected {
                    reason: format!("generator {} ({g}): {e}", i + 1),
                }
            }
        }
    }
    let m = extents.len();
    if m == 0 {
        return NeighborClassification::Rejected {
            reason: "no generators".into(),
        };
    }
    let cond = |a: usize, b: usize| pair_condition(&extents[a], &extents[b]);

    let found = if m <= EXHAUSTIVE_LIMIT {
        let mut search = Search {
            m,
            cond: &cond,
            first: None,
            cheapest: None,
            valid: 0,
        };
        let mut used = vec![false; m];
        let mut path = Vec::with_capacity(m);
        search.dfs(&mut used, &mut path, 0);
        let alternatives = search.valid.saturating_sub(1);
        let pick = match pref {
            OrderPreference::FirstFound => search.first,
            OrderPreference::FewestCnots => search.cheapest.map(|(_, o)| o),
        };
        pick.map(|order| (order, alternatives, true))
    } else {
        greedy_chain(m, &cond).map(|o| (o, 0, false))
    };

    match found {
        Some((order, alternatives, exhaustive)) => {
            let conditions = order
                .windows(2)
                .map(|w| cond(w[0], w[1]).expect("validated pair"))
                .collect();
            let extents = order.iter().map(|&i| extents[i]).collect();
            NeighborClassification::Accepted {
                order,
                conditions,
                extents,
                alternatives,
                exhaustive,
            }
        }
        None => NeighborClassification::Rejected {
            reason: "no ordering links every consecutive pair of blocks".into(),
        },
    }
}

struct Search<'a, F: Fn(usize, usize) -> Option<Condition>> {
    m: usize,
    cond: &'a F,
    first: Option<Vec<usize>>,
    cheapest: Option<(usize, Vec<usize>)>,
    valid: usize,
}

impl<F: Fn(usize, usize) -> Option<Condition>> Search<'_, F> {
    fn dfs(&mut self, used: &mut [bool], path: &mut Vec<usize>, cost: usize) {
        if path.len() == self.m {
            self.valid += 1;
            if self.first.is_none() {
                self.first = Some(path.clone());
            }
            if self.cheapest.as_ref().is_none_or(|(best, _)| cost < *best) {
                self.cheapest = Some((cost, path.clone()));
            }
            return;
        }
        for next in 0..self.m {
            if used[next] {
                continue;
            }
            let step = match path.last() {
                None => 0,
                Some(&prev) => match (self.cond)(prev, next) {
                    Some(c) => c.cnot_cost(),
                    None => continue,
                },
            };
            used[next] = true;
            path.push(next);
            self.dfs(used, path, cost + step);
            path.pop();
            used[next] = false;
        }
    }
}

fn greedy_chain<F: Fn(usize, usize) -> Option<Condition>>(m: usize, cond: &F) -> Option<Vec<usize>> {
    for start in 0..m {
        let mut used = vec![false; m];
        used[start] = true;
        let mut order = vec![start];
        while order.len() < m {
            let last = *order.last().expect("nonempty");
            let next = (0..m)
                .filter(|&j| !used[j])
                .filter_map(|j| cond(last, j).map(|c| (c.cnot_cost(), j)))
                .min();
            match next {
                Some((_, j)) => {
                    used[j] = true;
                    order.push(j);
                }
                None => break,
            }
        }
        if order.len() == m {
            return Some(order);
        }
    }
    None
}

/// Witness returned when a set of errors is not correctable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectabilityWitness {
    pub j: usize,
    pub k: usize,
    /// `E_j† E_k`, which commutes with the stabilizer but lies outside it.
    pub product: PauliString,
}

pub const CORRECTABLE_MAX_N: usize = 7;

/// Checks `E_j† E_k ∉ N(S) − S` for all pairs.  `Ok(None)` means correctable.
pub fn correctable_set_check(
    errors: &[PauliString],
    code: &StabilizerCode,
) -> Result<Option<CorrectabilityWitness>, PauliError> {
    let n = code.n();
    if n > CORRECTABLE_MAX_N {
        return Err(PauliError::TooLarge {
            n,
            max: CORRECTABLE_MAX_N,
        });
    }
    for e in errors {
        if e.n() != n {
            return Err(PauliError::LengthMismatch(n, e.n()));
        }
    }
    let rows: Vec<BitRow> = code.generators().iter().map(PauliString::symplectic).collect();
    let elim = Eliminator::new(&rows);
    for j in 0..errors.len() {
        for k in j..errors.len() {
            let product = errors[j].dagger().multiply(&errors[k])?;
            if in_normalizer(code, &product) && elim.solve(&product.symplectic()).is_none() {
                return Ok(Some(CorrectabilityWitness { j, k, product }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_qubit_relations() {
        let xz = ps("X").multiply(&ps("Z")).unwrap();
        assert_eq!(xz, ps("-iY"));
        assert_eq!(ps("III").multiply(&ps("XYZ")).unwrap(), ps("XYZ"));
        assert_eq!(ps("ZZI").multiply(&ps("ZIZ")).unwrap(), ps("IZZ"));
        assert!(ps("X").multiply(&ps("ZZ")).is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(ps("ZZI").commutes(&ps("ZIZ")).unwrap());
        assert!(!ps("X").commutes(&ps("Z")).unwrap());
        assert!(ps("ZXXZI").commutes(&ps("XXZIZ")).unwrap());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["XYZ", "-XX", "iZ", "-iY"] {
            assert_eq!(ps(s).to_string(), s);
        }
        assert_eq!(ps("+iZ"), ps("iZ"));
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("-".parse::<PauliString>().is_err());
    }

    #[test]
    fn builtin_codes_validate() {
        for code in [
            StabilizerCode::rep3(),
            StabilizerCode::rep5(),
            StabilizerCode::laflamme5(),
            StabilizerCode::shor9(),
        ] {
            let report = validate_generating_set(&code);
            assert!(report.is_valid(), "{}: {report}", code.name());
        }
    }

    #[test]
    fn invalid_sets_are_reported() {
        let anti = StabilizerCode::from_strs("bad", &["XI", "ZI"]).unwrap();
        let r = validate_generating_set(&anti);
        assert_eq!(r.anticommuting, vec![(0, 1)]);
        assert!(!r.is_valid());

        let dep = StabilizerCode::from_strs("dep", &["ZZI", "IZZ", "ZIZ"]).unwrap();
        let r = validate_generating_set(&dep);
        assert!(r.commuting());
        assert!(!r.independent());
        assert!(!r.contains_minus_identity);

        // XX, ZZ and YY multiply to -I
        let minus = StabilizerCode::from_strs("minus", &["XX", "ZZ"]).unwrap();
        assert!(validate_generating_set(&minus).is_valid());
        let mut gens = minus.generators().to_vec();
        gens.push(ps("YY"));
        let bad = StabilizerCode {
            name: "m".into(),
            n: 2,
            generators: gens,
        };
        let r = validate_generating_set(&bad);
        assert!(r.contains_minus_identity);
    }

    #[test]
    fn block_extent_examples() {
        let g = ps("IZXXZIIII");
        assert_eq!(block_extent(&g).unwrap(), BlockExtent { l: 2, r: 5, n: 9 });
        let g = ps("XZIIIIIZX");
        let e = block_extent(&g).unwrap();
        assert_eq!((e.l, e.r), (8, 2));
        let e = block_extent(&ps("XXZIZ")).unwrap();
        assert_eq!((e.l, e.r), (5, 3));
        assert_eq!(e.positions(), vec![4, 0, 1, 2]);
        assert_eq!(block_extent(&ps("XYZ")).unwrap(), BlockExtent { l: 1, r: 3, n: 3 });
        assert!(matches!(block_extent(&ps("ZIZI")), Err(PauliError::NotOneBlock(_))));
        assert!(matches!(block_extent(&ps("III")), Err(PauliError::AllIdentity)));
    }

    #[test]
    fn classify_examples() {
        let c = classify_neighboring_blocks(&StabilizerCode::laflamme5());
        assert_eq!(c.order().unwrap(), &[0, 1, 2, 3]);
        assert!(c.conditions().unwrap().iter().all(|&c| c == Condition::Adjacent));

        let one = StabilizerCode::from_strs("o1", &["ZZZZIII", "IIIZZZZ"]).unwrap();
        let c = classify_neighboring_blocks(&one);
        assert_eq!(c.conditions().unwrap(), &[Condition::Overlap1]);

        let two = StabilizerCode::from_strs("o2", &["ZZZZII", "IIZZZZ"]).unwrap();
        let c = classify_neighboring_blocks(&two);
        assert_eq!(c.conditions().unwrap(), &[Condition::Overlap2]);
    }

    #[test]
    fn classify_rep_codes_and_shor() {
        let c = classify_neighboring_blocks(&StabilizerCode::rep3());
        assert_eq!(c.conditions().unwrap(), &[Condition::Adjacent]);

        let c = classify_neighboring_blocks(&StabilizerCode::rep5());
        assert_eq!(c.order().unwrap(), &[0, 1, 2, 3]);
        assert_eq!(c.cnot_cost(), Some(2));
        let c = classify_with(&StabilizerCode::rep5(), OrderPreference::FewestCnots);
        assert_eq!(c.cnot_cost(), Some(0));
        assert_eq!(c.order().unwrap(), &[0, 2, 3, 1]);

        let c = classify_neighboring_blocks(&StabilizerCode::shor9());
        assert!(c.is_accepted(), "{c}");
    }

    #[test]
    fn non_block_generator_rejected() {
        let code = StabilizerCode::from_strs("split", &["ZIZI", "IZIZ"]).unwrap();
        assert!(!classify_neighboring_blocks(&code).is_accepted());
    }

    #[test]
    fn correctability_examples() {
        let rep3 = StabilizerCode::rep3();
        let errs: Vec<_> = ["III", "XII", "IXI", "IIX"].iter().map(|s| ps(s)).collect();
        assert_eq!(correctable_set_check(&errs, &rep3).unwrap(), None);

        let errs = vec![ps("III"), ps("ZII")];
        let w = correctable_set_check(&errs, &rep3).unwrap().unwrap();
        assert_eq!(w.product.unsigned(), ps("ZII"));

        assert_eq!(correctable_set_check(&[ps("III")], &rep3).unwrap(), None);

        let big = StabilizerCode::shor9();
        assert!(correctable_set_check(&[ps("IIIIIIIII")], &big).is_err());
    }

    #[test]
    fn laflamme_corrects_all_single_qubit_errors() {
        let code = StabilizerCode::laflamme5();
        let mut errs = vec![PauliString::identity(5)];
        for q in 0..5 {
            for p in Pauli::NONTRIVIAL {
                errs.push(PauliString::single(5, q, p));
            }
        }
        assert_eq!(correctable_set_check(&errs, &code).unwrap(), None);
    }

    #[test]
    fn code_text_round_trip() {
        let code = StabilizerCode::laflamme5();
        let text = code.to_text();
        assert!(text.starts_with("n=5 name=laflamme5\n"));
        assert_eq!(StabilizerCode::parse_text(&text).unwrap(), code);
        assert!(StabilizerCode::parse_text("n=3 name=x\nZZ\n").is_err());
        assert!(StabilizerCode::parse_text("n=2 name=x\nZQ\n").is_err());
    }
}
