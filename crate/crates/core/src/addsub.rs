//! Finite additive subgroups of GF(p^r), i.e. F_p-subspaces, kept in
//! reduced row echelon form against the power basis 1, x, ..., x^(r-1).
//!
//! Rows are coefficient vectors with the constant term first. The pivot of
//! a row is its lowest-degree nonzero coefficient, pivots are scaled to 1,
//! and rows are ordered by pivot position; this makes the basis unique per
//! subspace, so derived equality is subspace equality.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{divisors, multiplicative_order_mod, Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdditiveSubgroup {
    basis: Vec<FieldElement>,
}

/// F_{p^l}, the largest subfield with F_{p^l} * gamma inside gamma.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StabilizerField {
    pub degree: u32,
}

impl fmt::Display for AdditiveSubgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl AdditiveSubgroup {
    /// Reduced echelon basis, as integer encodings in row order.
    pub fn basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// p^rank.
    pub fn order(&self, field: &Field) -> u64 {
        (field.p() as u64).pow(self.rank() as u32)
    }

    /// All p^m elements in increasing encoding order.
    pub fn elements(&self, field: &Field) -> Vec<FieldElement> {
        let mut out = vec![FieldElement::ZERO];
        for &b in &self.basis {
            let mut next = Vec::with_capacity(out.len() * field.p() as usize);
            for &x in &out {
                let mut y = x;
                for _ in 0..field.p() {
                    next.push(y);
                    y = field.add(y, b);
                }
            }
            out = next;
        }
        out.sort_unstable();
        out
    }

    pub fn contains(&self, field: &Field, x: FieldElement) -> bool {
        let mut row = field.coeffs(x);
        reduce_against(field.p(), &self.rows(field), &mut row);
        row.iter().all(|&c| c == 0)
    }

    /// alpha * gamma.
    pub fn scale(&self, field: &Field, alpha: FieldElement) -> AdditiveSubgroup {
        let scaled: Vec<FieldElement> = self.basis.iter().map(|&b| field.mul(alpha, b)).collect();
        span(field, &scaled)
    }

    /// Parses the comma-separated encoding list used on the command line and
    /// returns its span.
    pub fn parse(field: &Field, text: &str) -> Result<AdditiveSubgroup> {
        let elems = text
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(|s| {
                let v: u64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element {s:?} in gamma list")))?;
                field.element(v)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(span(field, &elems))
    }

    fn rows(&self, field: &Field) -> Vec<Vec<u32>> {
        self.basis.iter().map(|&b| field.coeffs(b)).collect()
    }
}

/// Smallest F_p-subspace containing `elements`.
pub fn span(field: &Field, elements: &[FieldElement]) -> AdditiveSubgroup {
    let p = field.p();
    let rows: Vec<Vec<u32>> = elements.iter().map(|&x| field.coeffs(x)).collect();
    let rows = rref(p, rows);
    AdditiveSubgroup {
        basis: rows
            .iter()
            .map(|row| field.from_coeffs(row).expect("valid coefficients"))
            .collect(),
    }
}

/// The whole field F_q as an additive subgroup.
pub fn full_field(field: &Field) -> AdditiveSubgroup {
    let basis: Vec<FieldElement> = (0..field.r())
        .map(|i| FieldElement::from_encoding_unchecked(field.p().pow(i)))
        .collect();
    AdditiveSubgroup { basis }
}

pub fn stabilizer_field(field: &Field, gamma: &AdditiveSubgroup) -> Result<StabilizerField> {
    if gamma.is_zero() {
        return Err(Error::ZeroSubgroup("stabilizer field"));
    }
    let q = field.q() as u64;
    let p = field.p() as u64;
    let g = field.primitive_element();
    let rows = gamma.rows(field);
    let degree = divisors(field.r() as u64)
        .into_iter()
        .rev()
        .find(|&l| {
            // F_{p^l} = F_p[theta] for theta a generator of its unit group
            let theta = field.pow(g, (q - 1) / (p.pow(l as u32) - 1));
            gamma.basis.iter().all(|&b| {
                let mut row = field.coeffs(field.mul(theta, b));
                reduce_against(field.p(), &rows, &mut row);
                row.iter().all(|&c| c == 0)
            })
        })
        .expect("F_p always stabilizes an additive subgroup");
    Ok(StabilizerField {
        degree: degree as u32,
    })
}

fn require_nonzero(gamma: &AdditiveSubgroup, what: &'static str) -> Result<()> {
    if gamma.is_zero() {
        Err(Error::ZeroSubgroup(what))
    } else {
        Ok(())
    }
}

/// The distinct subgroups alpha * gamma, alpha in F_q^x, sorted.
pub fn homothety_orbit(field: &Field, gamma: &AdditiveSubgroup) -> Result<Vec<AdditiveSubgroup>> {
    require_nonzero(gamma, "homothety orbit")?;
    let orbit: BTreeSet<AdditiveSubgroup> = field
        .elements()
        .skip(1)
        .map(|a| gamma.scale(field, a))
        .collect();
    Ok(orbit.into_iter().collect())
}

/// Member of the homothety class with the lexicographically smallest basis.
pub fn homothety_canonical(field: &Field, gamma: &AdditiveSubgroup) -> Result<AdditiveSubgroup> {
    require_nonzero(gamma, "homothety class")?;
    Ok(field
        .elements()
        .skip(1)
        .map(|a| gamma.scale(field, a))
        .min()
        .expect("F_q^x is nonempty"))
}

/// All rank-`m` F_p-subspaces of F_q, generated pattern by pattern from the
/// reduced echelon shapes.
pub fn all_subspaces(field: &Field, m: usize) -> Vec<AdditiveSubgroup> {
    let r = field.r() as usize;
    let p = field.p();
    let mut out = Vec::new();
    if m > r {
        return out;
    }
    for pivots in combinations(r, m) {
        // free slots: (row, column) with column > pivot and not a pivot column
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &c)| {
                ((c + 1)..r)
                    .filter(|col| !pivots.contains(col))
                    .map(move |col| (i, col))
            })
            .collect();
        let total = (p as u64).pow(free.len() as u32);
        for t in 0..total {
            let mut rows = vec![vec![0u32; r]; m];
            for (i, &c) in pivots.iter().enumerate() {
                rows[i][c] = 1;
            }
            let mut x = t;
            for &(i, col) in &free {
                rows[i][col] = (x % p as u64) as u32;
                x /= p as u64;
            }
            out.push(AdditiveSubgroup {
                basis: rows
                    .iter()
                    .map(|row| field.from_coeffs(row).expect("valid"))
                    .collect(),
            });
        }
    }
    out.sort_unstable();
    out
}

/// Number of k-dimensional subspaces of F_p^n.
pub fn gaussian_binomial(p: u64, n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (p as u128).pow(n - i) - 1;
        den *= (p as u128).pow(i + 1) - 1;
    }
    (num / den) as u64
}

/// One representative per homothety class of rank-`m` subgroups that are
/// F_{p^e}-modules, where e is the order of p mod n. Each representative
/// contains F_{p^e} (equivalently, contains 1) and is the smallest such
/// member of its class; the list is sorted by canonical form.
pub fn semi_elementary_classes(field: &Field, m: usize, n: u64) -> Result<Vec<AdditiveSubgroup>> {
    let p = field.p() as u64;
    let r = field.r() as usize;
    let empty = |why: String| Err(Error::EmptyFamily(why));
    if n == 0 || n.is_multiple_of(p) {
        return empty(format!("n = {n} must be positive and prime to p = {p}"));
    }
    if m == 0 || m > r {
        return empty(format!("rank m = {m} must lie in 1..={r}"));
    }
    let e = multiplicative_order_mod(p, n).expect("p prime to n") as usize;
    if !m.is_multiple_of(e) || !r.is_multiple_of(e) {
        return empty(format!(
            "order e = {e} of p mod {n} must divide both m = {m} and r = {r}"
        ));
    }
    let mut classes: BTreeSet<AdditiveSubgroup> = BTreeSet::new();
    let mut reps = Vec::new();
    for gamma in all_subspaces(field, m) {
        if !(stabilizer_field(field, &gamma)?.degree as usize).is_multiple_of(e) {
            continue;
        }
        let canonical = homothety_canonical(field, &gamma)?;
        if classes.insert(canonical.clone()) {
            let rep = homothety_orbit(field, &canonical)?
                .into_iter()
                .find(|member| member.contains(field, FieldElement::ONE))
                .expect("scaling by the inverse of a nonzero member yields 1");
            reps.push((canonical, rep));
        }
    }
    reps.sort();
    Ok(reps.into_iter().map(|(_, rep)| rep).collect())
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// Reduced row echelon form, zero rows dropped.
fn rref(p: u32, mut rows: Vec<Vec<u32>>) -> Vec<Vec<u32>> {
    let width = rows.first().map_or(0, Vec::len);
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let s = inv_mod(rows[rank][col], p);
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * s as u64 % p64) as u32;
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == rank || row[col] == 0 {
                continue;
            }
            let c = row[col] as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + (p64 - c) * y as u64) % p64) as u32;
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Reduces `row` modulo the span of echelon `basis`.
fn reduce_against(p: u32, basis: &[Vec<u32>], row: &mut [u32]) {
    let p64 = p as u64;
    for b in basis {
        let pivot = b.iter().position(|&c| c != 0).expect("nonzero row");
        let c = row[pivot] as u64;
        if c == 0 {
            continue;
        }
        for (x, &y) in row.iter_mut().zip(b) {
            *x = ((*x as u64 + (p64 - c) * y as u64) % p64) as u32;
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
