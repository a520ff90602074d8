use std::fmt;
use std::sync::Arc;

use super::{check_ring, CoeffRing, RingElem};
use crate::error::{Error, Result};

/// Dense matrix over a coefficient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: Arc<CoeffRing>,
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl RingMatrix {
    pub fn zeros(ring: &Arc<CoeffRing>, rows: usize, cols: usize) -> RingMatrix {
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![RingElem::zero(ring); rows * cols],
        }
    }

    pub fn identity(ring: &Arc<CoeffRing>, n: usize) -> RingMatrix {
        RingMatrix::from_fn(ring, n, n, |i, j| RingElem::from_int(ring, (i == j) as i64))
    }

    pub fn from_fn(
        ring: &Arc<CoeffRing>,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElem,
    ) -> RingMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn ring(&self) -> &Arc<CoeffRing> {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: RingElem) {
        self.data[i * self.cols + j] = value;
    }

    pub fn transpose(&self) -> RingMatrix {
        RingMatrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        check_ring(&self.ring, &other.ring)?;
        if self.cols != other.rows {
            return Err(Error::InvalidConfig(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(RingMatrix::from_fn(&self.ring, self.rows, other.cols, |i, j| {
            let mut acc = RingElem::zero(&self.ring);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = other.get(k, j);
                if !a.is_zero() && !b.is_zero() {
                    acc = &acc + &(a * b);
                }
            }
            acc
        }))
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[RingElem]) -> Result<Vec<RingElem>> {
        if v.len() != self.cols {
            return Err(Error::IndexOutOfRange {
                index: v.len(),
                bound: self.cols,
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = RingElem::zero(&self.ring);
                for (j, x) in v.iter().enumerate() {
                    acc = &acc + &(self.get(i, j) * x);
                }
                acc
            })
            .collect())
    }

    /// Inverse by Gauss-Jordan elimination, pivoting only on units of the
    /// coefficient ring so that no division leaves the ring.
    pub fn inverse(&self) -> Result<RingMatrix> {
        if self.rows != self.cols {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RingMatrix::identity(&self.ring, n);
        for col in 0..n {
            let (pivot_row, pivot_inv) = (col..n)
                .find_map(|r| a.get(r, col).inverse().map(|u| (r, u)))
                .ok_or(Error::Singular)?;
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            a.scale_row(col, &pivot_inv);
            inv.scale_row(col, &pivot_inv);
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                a.sub_row_multiple(r, col, &factor);
                inv.sub_row_multiple(r, col, &factor);
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn scale_row(&mut self, i: usize, s: &RingElem) {
        for c in 0..self.cols {
            let v = self.get(i, c) * s;
            self.set(i, c, v);
        }
    }

    /// row[target] -= factor * row[source]
    fn sub_row_multiple(&mut self, target: usize, source: usize, factor: &RingElem) {
        for c in 0..self.cols {
            let s = self.get(source, c);
            if s.is_zero() {
                continue;
            }
            let v = self.get(target, c) - &(factor * s);
            self.set(target, c, v);
        }
    }
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingKind;

    #[test]
    fn anti_triangular_inverse() {
        let r = CoeffRing::new(RingKind::Multiplicative, 4).unwrap();
        let beta = RingElem::parse(&r, "beta").unwrap();
        let beta2 = RingElem::parse(&r, "beta^2").unwrap();
        let one = RingElem::one(&r);
        let zero = RingElem::zero(&r);
        let m = RingMatrix::from_fn(&r, 3, 3, |i, j| match i + j {
            0 => beta2.clone(),
            1 => beta.clone(),
            2 => one.clone(),
            _ => zero.clone(),
        });
        let c = m.inverse().unwrap();
        assert_eq!(c.mul(&m).unwrap(), RingMatrix::identity(&r, 3));
        assert_eq!(m.mul(&c).unwrap(), RingMatrix::identity(&r, 3));
        assert!(c.is_symmetric());
    }

    #[test]
    fn non_unit_pivots_are_singular() {
        let r = CoeffRing::new(RingKind::Additive, 4).unwrap();
        let m = RingMatrix::from_fn(&r, 1, 1, |_, _| RingElem::from_int(&r, 2));
        assert_eq!(m.inverse(), Err(Error::Singular));
    }
}
