//! Incremental sparse Gaussian elimination.
//!
//! Hom spaces between modules are null spaces of large, very sparse linear
//! systems (one unknown per matrix entry of every block). Rows are fed one at
//! a time and kept semi-reduced: a stored row contains no pivot column of an
//! earlier row. Reducing a new row therefore visits stored rows in creation
//! order, and a single backward pass yields the fully reduced form.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::field::Field;

pub type SparseVec<E> = Vec<(usize, E)>;

pub struct Eliminator<K: Field> {
    field: K,
    ncols: usize,
    rows: Vec<SparseVec<K::Elem>>,
    pivot_col: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
    scratch: Vec<K::Elem>,
    touched: Vec<bool>,
}

impl<K: Field> Eliminator<K> {
    pub fn new(field: &K, ncols: usize) -> Self {
        Eliminator {
            field: field.clone(),
            ncols,
            rows: Vec::new(),
            pivot_col: Vec::new(),
            row_of_col: vec![None; ncols],
            scratch: vec![field.zero(); ncols],
            touched: vec![false; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `row` against the stored rows and returns the remainder.
    pub fn reduce(&mut self, row: &[(usize, K::Elem)]) -> SparseVec<K::Elem> {
        let f = self.field.clone();
        let mut cols: Vec<usize> = Vec::with_capacity(row.len() * 2);
        let mut heap = BinaryHeap::new();
        for (c, v) in row {
            assert!(*c < self.ncols, "column out of range");
            if f.is_zero(v) {
                continue;
            }
            if !self.touched[*c] {
                self.touched[*c] = true;
                cols.push(*c);
            }
            self.scratch[*c] = f.add(&self.scratch[*c], v);
            if let Some(r) = self.row_of_col[*c] {
                heap.push(Reverse(r));
            }
        }
        let mut last = None;
        while let Some(Reverse(r)) = heap.pop() {
            if last == Some(r) {
                continue;
            }
            last = Some(r);
            let pc = self.pivot_col[r];
            let a = self.scratch[pc].clone();
            if f.is_zero(&a) {
                continue;
            }
            let a = f.neg(&a);
            for (c, v) in &self.rows[r] {
                if !self.touched[*c] {
                    self.touched[*c] = true;
                    cols.push(*c);
                }
                self.scratch[*c] = f.mul_add(&a, v, &self.scratch[*c]);
                if *c != pc {
                    if let Some(q) = self.row_of_col[*c] {
                        heap.push(Reverse(q));
                    }
                }
            }
        }
        cols.sort_unstable();
        let mut out = Vec::new();
        for c in cols {
            self.touched[c] = false;
            let v = std::mem::replace(&mut self.scratch[c], f.zero());
            if !f.is_zero(&v) {
                out.push((c, v));
            }
        }
        out
    }

    /// Adds a row; returns true when it was independent of the stored rows.
    pub fn add_row(&mut self, row: &[(usize, K::Elem)]) -> bool {
        let mut rem = self.reduce(row);
        if rem.is_empty() {
            return false;
        }
        let f = &self.field;
        let (pc, pv) = rem[0].clone();
        if !f.is_one(&pv) {
            let inv = f.inv(&pv);
            for (_, v) in rem.iter_mut() {
                *v = f.mul(&inv, v);
            }
        }
        self.row_of_col[pc] = Some(self.rows.len());
        self.pivot_col.push(pc);
        self.rows.push(rem);
        true
    }

    pub fn is_pivot(&self, c: usize) -> bool {
        self.row_of_col[c].is_some()
    }

    /// Brings all stored rows to fully reduced form.
    fn back_substitute(&mut self) {
        let f = self.field.clone();
        for p in (0..self.rows.len()).rev() {
            let pc = self.pivot_col[p];
            if !self.rows[p].iter().any(|(c, _)| *c != pc && self.row_of_col[*c].is_some()) {
                continue;
            }
            let row = std::mem::take(&mut self.rows[p]);
            let mut cols = Vec::new();
            for (c, v) in &row {
                self.touched[*c] = true;
                cols.push(*c);
                self.scratch[*c] = v.clone();
            }
            for (c, _) in &row {
                if *c == pc {
                    continue;
                }
                let Some(q) = self.row_of_col[*c] else { continue };
                let a = f.neg(&self.scratch[*c]);
                if f.is_zero(&a) {
                    continue;
                }
                for (cc, v) in &self.rows[q] {
                    if !self.touched[*cc] {
                        self.touched[*cc] = true;
                        cols.push(*cc);
                    }
                    self.scratch[*cc] = f.mul_add(&a, v, &self.scratch[*cc]);
                }
            }
            cols.sort_unstable();
            let mut out = Vec::new();
            for c in cols {
                self.touched[c] = false;
                let v = std::mem::replace(&mut self.scratch[c], f.zero());
                if !f.is_zero(&v) {
                    out.push((c, v));
                }
            }
            self.rows[p] = out;
        }
    }

    /// Basis of the solution space of the stored homogeneous equations, one
    /// sparse vector per free column in increasing column order.
    pub fn nullspace(mut self) -> Vec<SparseVec<K::Elem>> {
        self.back_substitute();
        let f = &self.field;
        let mut index = vec![usize::MAX; self.ncols];
        let mut basis: Vec<SparseVec<K::Elem>> = Vec::new();
        for c in 0..self.ncols {
            if self.row_of_col[c].is_none() {
                index[c] = basis.len();
                basis.push(vec![(c, f.one())]);
            }
        }
        for (p, row) in self.rows.iter().enumerate() {
            let pc = self.pivot_col[p];
            for (c, v) in row {
                if *c != pc {
                    basis[index[*c]].push((pc, f.neg(v)));
                }
            }
        }
        for v in basis.iter_mut() {
            v.sort_unstable_by_key(|(c, _)| *c);
        }
        basis
    }
}
