use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Dist;
use crate::FacilityId;

/// Where each live facility sits.
#[derive(Clone, Debug, Default)]
pub(crate) struct Registry {
    home: HashMap<FacilityId, usize>,
    n: usize,
}

impl Registry {
    pub fn new(n: usize) -> Self {
        Registry {
            home: HashMap::new(),
            n,
        }
    }

    pub fn vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn query(&self, v: usize, d: Dist) -> Result<()> {
        self.vertex(v)?;
        radius(d)
    }

    /// Checks an add without recording it.
    pub fn check_add(&self, v: usize, f: FacilityId, d: Dist) -> Result<()> {
        self.query(v, d)?;
        if self.home.contains_key(&f) {
            return Err(Error::DuplicateFacility(f));
        }
        Ok(())
    }

    pub fn place(&mut self, v: usize, f: FacilityId) {
        self.home.insert(f, v);
    }

    /// Checks that `f` sits on `v` and forgets it.
    pub fn take(&mut self, v: usize, f: FacilityId) -> Result<()> {
        self.vertex(v)?;
        match self.home.get(&f) {
            None => Err(Error::MissingFacility(f)),
            Some(&u) if u != v => Err(Error::WrongHome {
                facility: f,
                given: v,
                actual: u,
            }),
            Some(_) => {
                self.home.remove(&f);
                Ok(())
            }
        }
    }

    pub fn home(&self, f: FacilityId) -> Option<usize> {
        self.home.get(&f).copied()
    }

    pub fn len(&self) -> usize {
        self.home.len()
    }
}

pub(crate) fn radius(d: Dist) -> Result<()> {
    if d < 0 {
        Err(Error::NegativeRadius(d))
    } else {
        Ok(())
    }
}
