//! Canonical generator sets for stabilizer groups.
//!
//! The canonical form is the fully reduced row-echelon form of the `[X | Z]`
//! generator matrix over GF(2), pivoting on the X block first and then the
//! Z block, columns in qubit order. The binary part of a reduced echelon form
//! is unique, and the sign of each row is then fixed by group membership, so
//! two generator sets describe the same group exactly when their canonical
//! forms are equal.

use std::fmt;

use super::pauli::PauliString;
use super::tableau::StabilizerTableau;
use super::StabError;

/// A stabilizer group held as its canonical generator list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StabilizerGroup {
    width: usize,
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    /// Canonicalize an arbitrary list of mutually commuting generators.
    /// Redundant generators are dropped; a list that implies `-I` is rejected.
    pub fn from_generators(width: usize, generators: &[PauliString]) -> Result<Self, StabError> {
        for g in generators {
            if g.len() != width {
                return Err(StabError::WidthMismatch {
                    left: width,
                    right: g.len(),
                });
            }
        }
        for (i, a) in generators.iter().enumerate() {
            for (j, b) in generators.iter().enumerate().skip(i + 1) {
                if !a.commutes_with(b) {
                    return Err(StabError::NonCommuting(i, j));
                }
            }
        }
        let generators = reduce(width, generators.to_vec())?;
        Ok(Self { width, generators })
    }

    /// Parse generators written as `+XZI`-style strings.
    pub fn parse(rows: &[impl AsRef<str>]) -> Result<Self, StabError> {
        let gens = rows
            .iter()
            .map(|r| r.as_ref().parse::<PauliString>())
            .collect::<Result<Vec<_>, _>>()?;
        let width = gens.first().map_or(0, PauliString::len);
        Self::from_generators(width, &gens)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// One `±PAULIS` string per canonical generator.
    pub fn to_strings(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }

    /// Membership test for a Pauli string, sign included.
    pub fn contains(&self, p: &PauliString) -> Result<bool, StabError> {
        if p.len() != self.width {
            return Err(StabError::WidthMismatch {
                left: self.width,
                right: p.len(),
            });
        }
        if !self.generators.iter().all(|g| g.commutes_with(p)) {
            return Ok(false);
        }
        // Reduce p against the echelon rows; it lies in the group iff it
        // reduces to +I.
        let mut rest = p.clone();
        for g in &self.generators {
            let pivot = leading_column(self.width, g).expect("canonical rows are non-identity");
            if column_bit(self.width, &rest, pivot) {
                rest.mul_assign_commuting(g);
            }
        }
        Ok(rest.is_identity() && !rest.is_negative())
    }
}

impl fmt::Display for StabilizerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows = self.to_strings();
        write!(f, "{{{}}}", rows.join(", "))
    }
}

/// Anything that can present a generator list for group comparison.
pub trait Generators {
    fn width(&self) -> usize;
    fn canonical(&self) -> Result<StabilizerGroup, StabError>;
}

impl Generators for StabilizerTableau {
    fn width(&self) -> usize {
        self.num_qubits()
    }

    fn canonical(&self) -> Result<StabilizerGroup, StabError> {
        Ok(self.canonical_form())
    }
}

impl Generators for StabilizerGroup {
    fn width(&self) -> usize {
        self.width
    }

    fn canonical(&self) -> Result<StabilizerGroup, StabError> {
        Ok(self.clone())
    }
}

impl Generators for [PauliString] {
    fn width(&self) -> usize {
        self.first().map_or(0, PauliString::len)
    }

    fn canonical(&self) -> Result<StabilizerGroup, StabError> {
        StabilizerGroup::from_generators(Generators::width(self), self)
    }
}

impl Generators for Vec<PauliString> {
    fn width(&self) -> usize {
        self.as_slice().width()
    }

    fn canonical(&self) -> Result<StabilizerGroup, StabError> {
        self.as_slice().canonical()
    }
}

/// True iff both generator sets span the same signed stabilizer group.
pub fn stabilizer_group_equals<A, B>(a: &A, b: &B) -> Result<bool, StabError>
where
    A: Generators + ?Sized,
    B: Generators + ?Sized,
{
    if a.width() != b.width() {
        return Err(StabError::WidthMismatch {
            left: a.width(),
            right: b.width(),
        });
    }
    Ok(a.canonical()? == b.canonical()?)
}

impl StabilizerTableau {
    pub fn canonical_form(&self) -> StabilizerGroup {
        let generators =
            reduce(self.num_qubits(), self.stabilizers().to_vec()).expect("tableau stabilizers form a valid group");
        debug_assert_eq!(generators.len(), self.num_qubits());
        StabilizerGroup {
            width: self.num_qubits(),
            generators,
        }
    }

    /// The stabilizer group of the subsystem `keep`, with qubit `i` of the
    /// result being `keep[i]`. Fails unless the subsystem is in a product
    /// state with the remaining qubits.
    pub fn restricted_group(&self, keep: &[usize]) -> Result<StabilizerGroup, StabError> {
        let n = self.num_qubits();
        let mut kept = vec![false; n];
        for &q in keep {
            if q >= n {
                return Err(StabError::QubitOutOfRange { qubit: q, n });
            }
            if kept[q] {
                return Err(StabError::SameQubit(q));
            }
            kept[q] = true;
        }
        let others: Vec<usize> = (0..n).filter(|&q| !kept[q]).collect();

        // Eliminate over the discarded columns; rows left without any support
        // there generate the kept subsystem's group.
        let mut rows = self.stabilizers().to_vec();
        let mut rank = 0;
        for &q in &others {
            for bit in [ColumnKind::X, ColumnKind::Z] {
                let has = |r: &PauliString| match bit {
                    ColumnKind::X => r.x_bit(q),
                    ColumnKind::Z => r.z_bit(q),
                };
                if let Some(p) = (rank..rows.len()).find(|&i| has(&rows[i])) {
                    rows.swap(rank, p);
                    let pivot = rows[rank].clone();
                    for (i, row) in rows.iter_mut().enumerate() {
                        if i != rank && has(row) {
                            row.mul_assign_commuting(&pivot);
                        }
                    }
                    rank += 1;
                }
            }
        }
        let local: Vec<PauliString> = rows[rank..].iter().map(|r| r.select(keep)).collect();
        if local.len() != keep.len() {
            return Err(StabError::Entangled {
                kept: keep.len(),
                independent: local.len(),
            });
        }
        let generators = reduce(keep.len(), local)?;
        if generators.len() != keep.len() {
            return Err(StabError::Entangled {
                kept: keep.len(),
                independent: generators.len(),
            });
        }
        Ok(StabilizerGroup {
            width: keep.len(),
            generators,
        })
    }
}

#[derive(Clone, Copy)]
enum ColumnKind {
    X,
    Z,
}

/// Column `c` of the `[X | Z]` matrix: `c < width` addresses the X block.
fn column_bit(width: usize, row: &PauliString, c: usize) -> bool {
    if c < width {
        row.x_bit(c)
    } else {
        row.z_bit(c - width)
    }
}

fn leading_column(width: usize, row: &PauliString) -> Option<usize> {
    (0..2 * width).find(|&c| column_bit(width, row, c))
}

fn reduce(width: usize, mut rows: Vec<PauliString>) -> Result<Vec<PauliString>, StabError> {
    let mut rank = 0;
    for c in 0..2 * width {
        let Some(p) = (rank..rows.len()).find(|&i| column_bit(width, &rows[i], c)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && column_bit(width, row, c) {
                row.mul_assign_commuting(&pivot);
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    if rows[rank..].iter().any(PauliString::is_negative) {
        return Err(StabError::MinusIdentity);
    }
    rows.truncate(rank);
    Ok(rows)
}

/// Rank over GF(2) of the `[X | Z]` matrix, signs ignored.
pub fn gf2_rank(rows: &[PauliString]) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.x_words().iter().chain(r.z_words()).copied().collect())
        .collect();
    let Some(cols) = m.first().map(|r| r.len() * 64) else {
        return 0;
    };
    let mut rank = 0;
    for c in 0..cols {
        let (w, b) = (c / 64, c % 64);
        let Some(p) = (rank..m.len()).find(|&i| (m[i][w] >> b) & 1 == 1) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && (row[w] >> b) & 1 == 1 {
                row.iter_mut().zip(&pivot).for_each(|(a, p)| *a ^= p);
            }
        }
        rank += 1;
    }
    rank
}
