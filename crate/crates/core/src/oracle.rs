//! Brute-force reference implementation.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::Result;
use crate::graph::{Dist, Graph};
use crate::registry::Registry;
use crate::semigroup::{fold, Semigroup};
use crate::{select, FacilityId, Sole};

/// Keeps the live facilities in a list and scans all of them per query,
/// using cached single-source distances.
#[derive(Debug)]
pub struct NaiveSole<W> {
    g: Graph,
    rows: Vec<OnceLock<Vec<Dist>>>,
    live: BTreeMap<FacilityId, (usize, W, Dist)>,
    placed: Registry,
}

impl<W: Semigroup + Ord> NaiveSole<W> {
    pub fn new(g: Graph) -> Self {
        let n = g.n();
        NaiveSole {
            g,
            rows: (0..n).map(|_| OnceLock::new()).collect(),
            live: BTreeMap::new(),
            placed: Registry::new(n),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn dist(&self, u: usize, v: usize) -> Dist {
        self.rows[u].get_or_init(|| self.g.dijkstra(u))[v]
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    /// Live facilities as `(facility, vertex, weight, radius)`, by id.
    pub fn facilities(&self) -> impl Iterator<Item = (FacilityId, usize, &W, Dist)> {
        self.live.iter().map(|(&f, (u, w, d))| (f, *u, w, *d))
    }

    /// Facilities reaching the radius-`d` circle around `v`, by id.
    pub fn reaching(&self, v: usize, d: Dist) -> Result<Vec<FacilityId>> {
        self.placed.query(v, d)?;
        Ok(self
            .live
            .iter()
            .filter(|(_, (u, _, r))| self.dist(*u, v) <= d + r)
            .map(|(&f, _)| f)
            .collect())
    }
}

impl<W: Semigroup + Ord> Sole<W> for NaiveSole<W> {
    fn add(&mut self, v: usize, f: FacilityId, w: W, d: Dist) -> Result<()> {
        self.placed.check_add(v, f, d)?;
        self.placed.place(v, f);
        self.live.insert(f, (v, w, d));
        Ok(())
    }

    fn remove(&mut self, v: usize, f: FacilityId) -> Result<()> {
        self.placed.take(v, f)?;
        self.live.remove(&f);
        Ok(())
    }

    fn sum(&self, v: usize, d: Dist) -> Result<Option<W>> {
        let hits = self.reaching(v, d)?;
        Ok(fold(hits.iter().map(|f| &self.live[f].1)))
    }

    fn top(&self, v: usize, k: usize, d: Dist) -> Result<Vec<(FacilityId, W)>> {
        let hits = self.reaching(v, d)?;
        let c = hits.iter().map(|f| (*f, self.live[f].1.clone())).collect();
        Ok(select::top_k(c, k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::semigroup::{Add, Concat};

    fn path() -> NaiveSole<Add> {
        NaiveSole::new(Graph::parse("v a\nv b\nv c\ne a b 2\ne b c 3\n").unwrap())
    }

    #[test]
    fn boundary_is_inclusive() {
        let mut s = path();
        s.add(0, FacilityId(1), Add(10), 4).unwrap();
        assert_eq!(s.sum(1, 0).unwrap(), Some(Add(10)));
        assert_eq!(s.sum(2, 0).unwrap(), None);
        assert_eq!(s.sum(2, 1).unwrap(), Some(Add(10)));
        assert_eq!(s.top(1, 2, 0).unwrap(), vec![(FacilityId(1), Add(10))]);
    }

    #[test]
    fn errors() {
        let mut s = path();
        s.add(0, FacilityId(1), Add(1), 0).unwrap();
        assert_eq!(s.add(1, FacilityId(1), Add(1), 0), Err(Error::DuplicateFacility(FacilityId(1))));
        assert_eq!(s.add(9, FacilityId(2), Add(1), 0), Err(Error::UnknownVertex("9".into())));
        assert_eq!(s.add(0, FacilityId(2), Add(1), -1), Err(Error::NegativeRadius(-1)));
        assert_eq!(
            s.remove(2, FacilityId(1)),
            Err(Error::WrongHome { facility: FacilityId(1), given: 2, actual: 0 })
        );
        s.remove(0, FacilityId(1)).unwrap();
        assert_eq!(s.remove(0, FacilityId(1)), Err(Error::MissingFacility(FacilityId(1))));
        assert!(s.is_empty());
    }

    #[test]
    fn sums_fold_in_id_order() {
        let g = Graph::parse("v a\n").unwrap();
        let mut s = NaiveSole::new(g);
        s.add(0, FacilityId(2), Concat("b".into()), 0).unwrap();
        s.add(0, FacilityId(1), Concat("a".into()), 0).unwrap();
        assert_eq!(s.sum(0, 0).unwrap(), Some(Concat("ab".into())));
    }
}
