//! Exact scalars over the rationals or a prime field, and dense exact matrices.
//!
//! Everything here is exact: rationals are arbitrary precision and always kept
//! in lowest terms, residues mod p are kept in `[0, p)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// The prime field of order `p`; `p` must be prime.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// 0 for the rationals, p for a prime field.
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => Scalar::Fp {
                v: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// Maps an exact rational into this field. Fails when the denominator
    /// vanishes mod p.
    pub fn from_rational(self, q: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Q(q.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u64().expect("residue fits in u64")
                };
                let num = Scalar::Fp { v: reduce(q.numer()), p };
                let den = Scalar::Fp { v: reduce(q.denom()), p };
                let inv = den
                    .inv()
                    .ok_or_else(|| Error::Parse(format!("denominator of {q} vanishes mod {p}")))?;
                Ok(&num * &inv)
            }
        }
    }

    /// Parses `"num/den"` or a bare integer into this field.
    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        self.from_rational(&BigRational::new(n, d))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        match s.trim() {
            "rational" => Ok(Field::Rational),
            other => match other.strip_prefix("fp:") {
                Some(p) => {
                    let p: u64 = p
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad prime in field {s:?}")))?;
                    Field::prime(p)
                }
                None => Err(Error::Parse(format!(
                    "unknown field {s:?} (expected rational or fp:<p>)"
                ))),
            },
        }
    }
}

/// Trial division; the primes used here are small.
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { v: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: pow_mod(*v, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Exact division; `None` when dividing by zero.
    pub fn checked_div(&self, other: &Scalar) -> Option<Scalar> {
        other.inv().map(|i| self * &i)
    }

    /// Canonical `"num/den"` text form. Residues are written as `"v/1"`.
    pub fn to_fraction_string(&self) -> String {
        match self {
            Scalar::Q(q) => format!("{}/{}", q.numer(), q.denom()),
            Scalar::Fp { v, .. } => format!("{v}/1"),
        }
    }

    /// The value as an integer when it is one (rationals with denominator 1,
    /// or any residue).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { v, .. } => i64::try_from(*v).ok(),
        }
    }

    fn check(&self, other: &Scalar) {
        assert_eq!(
            self.field(),
            other.field(),
            "arithmetic between scalars of different fields"
        );
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Scalar::Q(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let m = p as u128;
    let mut base = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * base % m;
        }
        base = base * base % m;
        e >>= 1;
    }
    b = r as u64;
    b
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 + *p as u128 - *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.check(o);
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { v: a, p }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { v, p } => Scalar::Fp {
                v: (p - v) % p,
                p: *p,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, o: Scalar) -> Scalar {
        &self + &o
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, o: Scalar) -> Scalar {
        &self - &o
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, o: Scalar) -> Scalar {
        &self * &o
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Scalar {
    /// Sign of a rational; residues are treated as nonnegative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Q(q) if q.is_negative())
    }
}

// Dense vector helpers. Vectors are plain slices of scalars over one field.

pub fn zero_vec(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit_vec(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zero_vec(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

/// `acc += c * v`
pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = &*a + &(c * x);
        }
    }
}

pub fn scale_vec(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
    v.iter().map(|x| c * x).collect()
}

pub fn sub_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A dense matrix of exact scalars, all over one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    /// Builds a matrix from row vectors. Every entry must belong to `field`
    /// and all rows must have `cols` entries.
    pub fn from_rows(field: Field, cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            for x in r {
                if x.field() != field {
                    return Err(Error::FieldMismatch {
                        expected: field,
                        found: x.field(),
                    });
                }
                data.push(x);
            }
        }
        Ok(ExactMatrix {
            rows: n,
            cols,
            field,
            data,
        })
    }

    /// Integer matrix, mostly for tests and built-in generators.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, rows).expect("rectangular integer matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert_eq!(x.field(), self.field, "entry from a different field");
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(self.field, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.data[a * cols.len() + b] = self.get(i, j).clone();
            }
        }
        m
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = add_vec(&self.data, &other.data);
        Ok(ExactMatrix { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} - {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = sub_vec(&self.data, &other.data);
        Ok(ExactMatrix { data, ..self.clone() })
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ExactMatrix {
            data: scale_vec(c, &self.data),
            ..self.clone()
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                axpy(acc, self.get(i, k), other.row(k));
            }
        }
        Ok(out)
    }

    /// `m · x` for a column vector `x`.
    pub fn mul_vec(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut s = self.field.zero();
                for (a, b) in self.row(i).iter().zip(x) {
                    if !a.is_zero() && !b.is_zero() {
                        s = &s + &(a * b);
                    }
                }
                s
            })
            .collect())
    }

    /// `x · m` for a row vector `x`.
    pub fn vec_mul(&self, x: &[Scalar]) -> Result<Vec<Scalar>> {
        if x.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} times {}x{}",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        let mut acc = zero_vec(self.field, self.cols);
        for (i, c) in x.iter().enumerate() {
            axpy(&mut acc, c, self.row(i));
        }
        Ok(acc)
    }

    /// Rank by Gaussian elimination with full pivoting: the pivot is the
    /// first nonzero entry of the remaining block in row-major order.
    pub fn rank(&self) -> usize {
        let (mut a, n, m) = (self.data.clone(), self.rows, self.cols);
        let mut rank = 0;
        // col_of[k] is the original column currently sitting at position k
        let mut col_of: Vec<usize> = (0..m).collect();
        while rank < n.min(m) {
            let mut pivot = None;
            'search: for i in rank..n {
                for j in rank..m {
                    if !a[i * m + col_of[j]].is_zero() {
                        pivot = Some((i, j));
                        break 'search;
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != rank {
                for j in 0..m {
                    a.swap(pi * m + j, rank * m + j);
                }
            }
            col_of.swap(pj, rank);
            let pc = col_of[rank];
            let inv = a[rank * m + pc].inv().expect("nonzero pivot");
            for i in rank + 1..n {
                let f = &a[i * m + pc] * &inv;
                if f.is_zero() {
                    continue;
                }
                for k in rank..m {
                    let c = col_of[k];
                    let t = &f * &a[rank * m + c];
                    a[i * m + c] = &a[i * m + c] - &t;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form and its pivot columns. The reduced form is
    /// unique, so the result does not depend on the elimination order.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut span = Span::new(self.field, self.cols);
        for i in 0..self.rows {
            span.insert(self.row(i).to_vec());
        }
        let pivots = span.pivots.clone();
        let mut rows = span.rows;
        rows.resize(self.rows, zero_vec(self.field, self.cols));
        let m = ExactMatrix::from_rows(self.field, self.cols, rows).expect("same shape");
        (m, pivots)
    }

    /// Basis of `{x : m·x = 0}`, one vector per free column, each with a 1 in
    /// its free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vec(self.field, self.cols);
            v[free] = self.field.one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(k, free);
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of `m·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} system with right-hand side of length {}",
                self.rows,
                self.cols,
                b.len()
            )));
        }
        if let Some(x) = b.iter().find(|x| x.field() != self.field) {
            return Err(Error::FieldMismatch {
                expected: self.field,
                found: x.field(),
            });
        }
        let aug_rows = (0..self.rows)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.push(b[i].clone());
                r
            })
            .collect();
        let aug = ExactMatrix::from_rows(self.field, self.cols + 1, aug_rows)?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vec(self.field, self.cols);
        for (k, &p) in pivots.iter().enumerate() {
            x[p] = r.get(k, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Option<ExactMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let rows = (0..n)
            .map(|i| {
                let mut r = self.row(i).to_vec();
                r.extend(unit_vec(self.field, n, i));
                r
            })
            .collect();
        let aug = ExactMatrix::from_rows(self.field, 2 * n, rows).ok()?;
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (0..n).collect();
        let cols: Vec<usize> = (n..2 * n).collect();
        Some(r.select(&idx, &cols))
    }

    pub fn trace(&self) -> Scalar {
        let mut t = self.field.zero();
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.get(i, i);
        }
        t
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// A subspace of `F^n` kept as a reduced row echelon basis, grown one vector
/// at a time.
#[derive(Clone, Debug)]
pub struct Span {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Span {
    pub fn new(field: Field, ambient: usize) -> Self {
        Span {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<Scalar>>>(
        field: Field,
        ambient: usize,
        vs: I,
    ) -> Self {
        let mut s = Span::new(field, ambient);
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn whole(field: Field, ambient: usize) -> Self {
        Span::from_vectors(field, ambient, (0..ambient).map(|i| unit_vec(field, ambient, i)))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// The reduced basis, sorted by pivot column.
    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection onto the span along the pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut w = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            if !w[p].is_zero() {
                let c = -&w[p];
                axpy(&mut w, &c, r);
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    pub fn contains_span(&self, other: &Span) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector of the wrong length");
        let mut w = self.reduce(&v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv().expect("nonzero");
        w = scale_vec(&inv, &w);
        for r in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let c = -&r[p];
                axpy(r, &c, &w);
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, w);
        true
    }

    pub fn sum(&self, other: &Span) -> Span {
        let mut s = self.clone();
        for r in &other.rows {
            s.insert(r.clone());
        }
        s
    }

    /// Intersection, by solving for common combinations.
    pub fn intersect(&self, other: &Span) -> Span {
        let (a, b) = (self.dim(), other.dim());
        let mut out = Span::new(self.field, self.ambient);
        if a == 0 || b == 0 {
            return out;
        }
        // columns: the a + b basis vectors; kernel of [A^T | -B^T]
        let mut rows = Vec::with_capacity(self.ambient);
        for k in 0..self.ambient {
            let mut r: Vec<Scalar> = self.rows.iter().map(|v| v[k].clone()).collect();
            r.extend(other.rows.iter().map(|v| -&v[k]));
            rows.push(r);
        }
        let m = ExactMatrix::from_rows(self.field, a + b, rows).expect("consistent shape");
        for k in m.nullspace() {
            let mut v = zero_vec(self.field, self.ambient);
            for (c, r) in k[..a].iter().zip(&self.rows) {
                axpy(&mut v, c, r);
            }
            out.insert(v);
        }
        out
    }
}

/// A fixed list of independent vectors with exact coordinate extraction.
#[derive(Clone, Debug)]
pub struct Basis {
    vectors: Vec<Vec<Scalar>>,
    span: Span,
    // transform[k] expresses reduced row k as a combination of `vectors`
    transform: Vec<Vec<Scalar>>,
}

impl Basis {
    /// Fails if the vectors are dependent.
    pub fn new(field: Field, ambient: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let k = vectors.len();
        let rows: Vec<Vec<Scalar>> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut r = v.clone();
                r.extend(unit_vec(field, k, i));
                r
            })
            .collect();
        let aug = ExactMatrix::from_rows(field, ambient + k, rows)?;
        let (r, pivots) = aug.rref();
        let independent = pivots.iter().take_while(|&&p| p < ambient).count();
        if independent != k {
            return Err(Error::Internal(format!(
                "{k} vectors span only a {independent}-dimensional space"
            )));
        }
        let mut span = Span::new(field, ambient);
        let mut transform = Vec::with_capacity(k);
        for i in 0..k {
            span.rows.push(r.row(i)[..ambient].to_vec());
            span.pivots.push(pivots[i]);
            transform.push(r.row(i)[ambient..].to_vec());
        }
        Ok(Basis {
            vectors,
            span,
            transform,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<Scalar>] {
        &self.vectors
    }

    pub fn span(&self) -> &Span {
        &self.span
    }

    /// Coordinates of `v` in this basis, or `None` if `v` is outside the span.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let field = self.span.field;
        let mut out = zero_vec(field, self.vectors.len());
        let mut rest = v.to_vec();
        for ((r, &p), t) in self.span.rows.iter().zip(&self.span.pivots).zip(&self.transform) {
            let c = rest[p].clone();
            if c.is_zero() {
                continue;
            }
            axpy(&mut out, &c, t);
            let neg = -&c;
            axpy(&mut rest, &neg, r);
        }
        is_zero_vec(&rest).then_some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(q(), 4).rank(), 4);
        assert_eq!(ExactMatrix::zeros(q(), 3, 5).rank(), 0);
        assert_eq!(ExactMatrix::from_i64(q(), &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn nullspace_examples() {
        assert!(ExactMatrix::identity(q(), 3).nullspace().is_empty());
        let z = ExactMatrix::zeros(q(), 2, 2).nullspace();
        assert_eq!(z.len(), 2);
        assert_eq!(Span::from_vectors(q(), 2, z).dim(), 2);
        let n = ExactMatrix::from_i64(q(), &[&[1, 1]]).nullspace();
        assert_eq!(n, vec![vec![q().from_i64(-1), q().from_i64(1)]]);
    }

    #[test]
    fn solve_examples() {
        let b: Vec<Scalar> = [3, -1, 7].iter().map(|&x| q().from_i64(x)).collect();
        assert_eq!(ExactMatrix::identity(q(), 3).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(ExactMatrix::zeros(q(), 3, 3).solve(&b).unwrap(), None);
        let half = q().parse_scalar("1/2").unwrap();
        let x = ExactMatrix::from_i64(q(), &[&[2]]).solve(&[q().one()]).unwrap();
        assert_eq!(x, Some(vec![half]));
    }

    #[test]
    fn solve_rejects_bad_lengths_and_fields() {
        let m = ExactMatrix::identity(q(), 2);
        assert!(matches!(m.solve(&[q().one()]), Err(Error::DimensionMismatch(_))));
        let f5 = Field::prime(5).unwrap();
        assert!(matches!(
            m.solve(&[f5.one(), f5.one()]),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn mixed_fields_rejected() {
        let f7 = Field::prime(7).unwrap();
        let rows = vec![vec![q().one(), f7.one()]];
        assert!(matches!(
            ExactMatrix::from_rows(q(), 2, rows),
            Err(Error::FieldMismatch { .. })
        ));
        let a = ExactMatrix::identity(q(), 2);
        let b = ExactMatrix::identity(f7, 2);
        assert!(matches!(a.mul(&b), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn scalars_are_canonical() {
        let x = q().parse_scalar("6/-4").unwrap();
        assert_eq!(x.to_fraction_string(), "-3/2");
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1), Scalar::Fp { v: 6, p: 7 });
        assert_eq!(f.parse_scalar("1/2").unwrap(), Scalar::Fp { v: 4, p: 7 });
        assert!(f.parse_scalar("1/7").is_err());
        assert!(Field::prime(9).is_err());
        assert_eq!("fp:23".parse::<Field>().unwrap(), Field::Prime(23));
        assert_eq!(Field::Prime(23).to_string(), "fp:23");
    }

    #[test]
    fn fp_arithmetic() {
        let f = Field::prime(23).unwrap();
        let a = f.from_i64(5);
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert_eq!(&f.from_i64(20) + &f.from_i64(5), f.from_i64(2));
        assert_eq!(-&f.from_i64(0), f.zero());
    }

    #[test]
    fn span_intersection_and_coords() {
        let f = q();
        let v = |xs: &[i64]| xs.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
        let a = Span::from_vectors(f, 3, [v(&[1, 0, 0]), v(&[0, 1, 0])]);
        let b = Span::from_vectors(f, 3, [v(&[0, 1, 1]), v(&[1, 1, 0])]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&[1, 1, 0])));
        let basis = Basis::new(f, 3, vec![v(&[1, 1, 0]), v(&[0, 1, 1])]).unwrap();
        assert_eq!(basis.coords(&v(&[2, 5, 3])), Some(v(&[2, 3])));
        assert_eq!(basis.coords(&v(&[1, 0, 0])), None);
        assert!(Basis::new(f, 3, vec![v(&[1, 1, 0]), v(&[2, 2, 0])]).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_i64(q(), &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(q(), 2));
        assert!(ExactMatrix::from_i64(q(), &[&[1, 2], &[2, 4]]).inverse().is_none());
    }
}
