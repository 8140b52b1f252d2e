//! Basis bookkeeping for (C^N)^⊗n: colour tuples, sparse states and pairings.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A basis label e_{i_1…i_n}; position k is the quantum space V_k.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorTuple(Vec<u8>);

impl ColorTuple {
    pub fn new(rank: usize, colors: &[usize]) -> Result<Self> {
        if rank == 0 || rank > u8::MAX as usize {
            return Err(Error::Index(format!("rank {rank} unsupported")));
        }
        for &c in colors {
            if c == 0 || c > rank {
                return Err(Error::Index(format!("colour {c} outside 1..={rank}")));
            }
        }
        Ok(ColorTuple(colors.iter().map(|&c| c as u8).collect()))
    }

    /// The constant tuple c^n.
    pub fn constant(color: usize, len: usize) -> Self {
        ColorTuple(vec![color as u8; len])
    }

    pub(crate) fn from_raw(raw: Vec<u8>) -> Self {
        ColorTuple(raw)
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn color(&self, position: usize) -> usize {
        self.0[position] as usize
    }

    pub fn colors(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c as usize).collect()
    }

    /// Expands run notation such as "1^2,3^1" into (1,1,3).
    pub fn parse_runs(rank: usize, text: &str) -> Result<Self> {
        let mut colors = Vec::new();
        let text = text.trim();
        if !text.is_empty() {
            for part in text.split(',') {
                let bad = || Error::Config(format!("malformed colour run `{part}`"));
                let (c, k): (usize, usize) = match part.trim().split_once('^') {
                    Some((c, k)) => (c.trim().parse().map_err(|_| bad())?, k.trim().parse().map_err(|_| bad())?),
                    None => (part.trim().parse().map_err(|_| bad())?, 1usize),
                };
                colors.extend(std::iter::repeat_n(c, k));
            }
        }
        Self::new(rank, &colors)
    }

    /// Canonical text with runs collapsed, e.g. "1^2,3".
    pub fn to_runs(&self) -> String {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let c = self.0[i];
            let mut k = 1;
            while i + k < self.0.len() && self.0[i + k] == c {
                k += 1;
            }
            parts.push(if k == 1 { format!("{c}") } else { format!("{c}^{k}") });
            i += k;
        }
        parts.join(",")
    }

    pub fn profile(&self, rank: usize) -> ColoringProfile {
        let mut counts = vec![0; rank];
        for &c in &self.0 {
            counts[c as usize - 1] += 1;
        }
        ColoringProfile { counts }
    }
}

impl fmt::Debug for ColorTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e({})", self.0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
    }
}

/// Colour content: `counts[c-1]` is the number of positions coloured c.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColoringProfile {
    pub counts: Vec<usize>,
}

impl ColoringProfile {
    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// A finitely supported vector (or covector, when `dual`) in (C^N)^⊗n.
#[derive(Clone, PartialEq)]
pub struct SparseState<S> {
    rank: usize,
    len: usize,
    dual: bool,
    entries: BTreeMap<ColorTuple, S>,
}

impl<S: Scalar> SparseState<S> {
    pub fn zero(rank: usize, len: usize) -> Self {
        SparseState { rank, len, dual: false, entries: BTreeMap::new() }
    }

    pub fn basis(rank: usize, tuple: ColorTuple) -> Result<Self> {
        if tuple.0.iter().any(|&c| c == 0 || c as usize > rank) {
            return Err(Error::Index(format!("{tuple:?} has a colour outside 1..={rank}")));
        }
        let mut s = Self::zero(rank, tuple.len());
        s.entries.insert(tuple, S::one());
        Ok(s)
    }

    pub fn basis_colors(rank: usize, colors: &[usize]) -> Result<Self> {
        Self::basis(rank, ColorTuple::new(rank, colors)?)
    }

    pub fn dual_basis(rank: usize, tuple: ColorTuple) -> Result<Self> {
        Ok(Self::basis(rank, tuple)?.into_dual())
    }

    pub fn into_dual(mut self) -> Self {
        self.dual = true;
        self
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, tuple: &ColorTuple) -> S {
        self.entries.get(tuple).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ColorTuple, &S)> {
        self.entries.iter()
    }

    /// Adds `coef·e_tuple`, keeping the no-stored-zeros invariant.
    pub fn add_term(&mut self, tuple: ColorTuple, coef: S) {
        if coef.is_zero() {
            return;
        }
        match self.entries.entry(tuple) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + coef;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn check_shape(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.len != other.len {
            return Err(Error::Shape(format!(
                "(N={}, n={}) vs (N={}, n={})",
                self.rank, self.len, other.rank, other.len
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let mut out = self.clone();
        for (t, c) in &other.entries {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &S) -> Result<()> {
        self.check_shape(other)?;
        for (t, c) in &other.entries {
            self.add_term(t.clone(), c.clone() * factor.clone());
        }
        Ok(())
    }

    pub fn scale(&self, factor: &S) -> Self {
        let mut out = Self { entries: BTreeMap::new(), ..self.clone() };
        if factor.is_zero() {
            return out;
        }
        for (t, c) in &self.entries {
            out.add_term(t.clone(), c.clone() * factor.clone());
        }
        out
    }

    /// Entrywise image under a scalar map, dropping entries that become zero.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> Result<T>) -> Result<SparseState<T>> {
        let mut out = SparseState { rank: self.rank, len: self.len, dual: self.dual, entries: BTreeMap::new() };
        for (t, c) in &self.entries {
            out.add_term(t.clone(), f(c)?);
        }
        Ok(out)
    }

    /// If `self = c·other` for a scalar c, returns c (zero states give zero).
    pub fn ratio_to(&self, other: &Self) -> Result<Option<S>> {
        self.check_shape(other)?;
        let Some((t, c)) = other.entries.iter().next() else {
            return Ok(if self.is_zero() { Some(S::zero()) } else { None });
        };
        let ratio = self.get(t).div(c)?;
        Ok((other.scale(&ratio) == *self).then_some(ratio))
    }
}

impl<S: fmt::Debug> fmt::Debug for SparseState<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dual {
            write!(f, "dual ")?;
        }
        f.debug_map().entries(self.entries.iter()).finish()
    }
}

/// ⟨dual, state⟩ = Σ over shared keys of coefficient products.
pub fn pair<S: Scalar>(dual: &SparseState<S>, state: &SparseState<S>) -> Result<S> {
    dual.check_shape(state)?;
    let (small, large) = if dual.entries.len() <= state.entries.len() { (dual, state) } else { (state, dual) };
    let mut acc = S::zero();
    for (t, c) in &small.entries {
        if let Some(d) = large.entries.get(t) {
            acc = acc + c.clone() * d.clone();
        }
    }
    Ok(acc)
}

/// Positions (1-based) of `inner` within the ordered enumeration of `outer`.
pub fn relabel_subset(outer: &[usize], inner: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(inner.len());
    for x in inner {
        match outer.iter().position(|y| y == x) {
            Some(p) => out.push(p + 1),
            None => return Err(Error::Domain(format!("{x} is not among the outer positions"))),
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// All tuples of (C^N)^⊗n in lexicographic order.
pub fn all_tuples(rank: usize, len: usize) -> Vec<ColorTuple> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=rank as u8).map(move |c| {
                    let mut t = t.clone();
                    t.push(c);
                    t
                })
            })
            .collect();
    }
    out.into_iter().map(ColorTuple).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q_int, Q};

    #[test]
    fn basis_and_runs() {
        let s = SparseState::<Q>::basis_colors(2, &[1, 2]).unwrap();
        assert_eq!(s.get(&ColorTuple::new(2, &[1, 2]).unwrap()), q_int(1));
        assert_eq!(ColorTuple::parse_runs(3, "1^2,3^1").unwrap().colors(), vec![1, 1, 3]);
        assert_eq!(ColorTuple::new(3, &[1, 1, 3]).unwrap().to_runs(), "1^2,3");
        assert!(ColorTuple::new(2, &[3]).is_err());
        assert!(ColorTuple::parse_runs(3, "1^x").is_err());
    }

    #[test]
    fn pairing() {
        let t = ColorTuple::new(3, &[2, 1, 3]).unwrap();
        let e = SparseState::<Q>::basis(3, t.clone()).unwrap();
        assert_eq!(pair(&e.clone().into_dual(), &e).unwrap(), q_int(1));
        let d = SparseState::<Q>::dual_basis(2, ColorTuple::new(2, &[1, 2]).unwrap()).unwrap();
        let e21 = SparseState::<Q>::basis_colors(2, &[2, 1]).unwrap();
        assert_eq!(pair(&d, &e21).unwrap(), q_int(0));
        let mix = SparseState::<Q>::basis_colors(2, &[1, 2]).unwrap().scale(&q_int(3)).add(&e21.scale(&q_int(5))).unwrap();
        assert_eq!(pair(&d, &mix).unwrap(), q_int(3));
        assert!(pair(&d, &e).is_err());
    }

    #[test]
    fn relabelling() {
        assert_eq!(relabel_subset(&[2, 5, 7], &[5, 7]).unwrap(), vec![2, 3]);
        assert_eq!(relabel_subset(&[1, 4], &[1, 4]).unwrap(), vec![1, 2]);
        assert_eq!(relabel_subset(&[1, 2, 3, 4], &[2]).unwrap(), vec![2]);
        assert!(relabel_subset(&[1, 2], &[3]).is_err());
    }

    #[test]
    fn cancellation_drops_entries() {
        let e = SparseState::<Q>::basis_colors(2, &[1]).unwrap();
        let z = e.add(&e.scale(&q_int(-1))).unwrap();
        assert!(z.is_zero());
        assert_eq!(all_tuples(2, 3).len(), 8);
    }
}
