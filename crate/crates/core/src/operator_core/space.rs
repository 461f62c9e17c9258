use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sparse::CsrMatrix;
use crate::error::{Error, Result};

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// One tensor factor of a Hilbert space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SiteKind {
    /// Two-level atom.
    Spin,
    /// Two local fermi levels, basis ordered (∅, −, +, ±).
    FermionPair,
    /// Boson mode truncated at occupation `cutoff`.
    BosonMode { cutoff: usize },
}

impl SiteKind {
    pub fn dim(&self) -> usize {
        match self {
            SiteKind::Spin => 2,
            SiteKind::FermionPair => 4,
            SiteKind::BosonMode { cutoff } => cutoff + 1,
        }
    }
}

impl fmt::Display for SiteKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SiteKind::Spin => write!(f, "Spin"),
            SiteKind::FermionPair => write!(f, "FermionPair"),
            SiteKind::BosonMode { cutoff } => write!(f, "BosonMode(M={cutoff})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct HilbertSpec {
    pub sites: Vec<SiteKind>,
}

impl HilbertSpec {
    pub fn new(sites: Vec<SiteKind>) -> Self {
        Self { sites }
    }

    /// `2N+1` copies of `matter` followed by `n` boson modes of equal cutoff.
    pub fn laser(matter: SiteKind, half_chain: usize, modes: usize, cutoff: usize) -> Self {
        let mut sites = vec![matter; 2 * half_chain + 1];
        sites.extend(std::iter::repeat(SiteKind::BosonMode { cutoff }).take(modes));
        Self { sites }
    }

    pub fn dim(&self) -> usize {
        self.sites.iter().map(SiteKind::dim).product()
    }
}

impl fmt::Display for HilbertSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sites.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A validated tensor-product space with cached dimensions.
#[derive(Debug)]
pub struct Space {
    spec: HilbertSpec,
    dims: Vec<usize>,
    dim: usize,
    identity: CsrMatrix,
}

pub type SpaceHandle = Arc<Space>;

pub fn build_space(spec: HilbertSpec) -> Result<SpaceHandle> {
    build_space_with_cap(spec, DEFAULT_DIMENSION_CAP)
}

pub fn build_space_with_cap(spec: HilbertSpec, cap: usize) -> Result<SpaceHandle> {
    if spec.sites.is_empty() {
        return Err(Error::EmptySpace);
    }
    for (i, s) in spec.sites.iter().enumerate() {
        if let SiteKind::BosonMode { cutoff: 0 } = s {
            return Err(Error::SiteMismatch { site: i, reason: "boson cutoff must be at least 1".into() });
        }
    }
    // Saturating product: large specs must fail the cap check, not overflow.
    let dim = spec.sites.iter().fold(1usize, |acc, s| acc.saturating_mul(s.dim()));
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let dims = spec.sites.iter().map(SiteKind::dim).collect();
    Ok(Arc::new(Space { spec, dims, dim, identity: CsrMatrix::identity(dim) }))
}

impl Space {
    pub fn spec(&self) -> &HilbertSpec {
        &self.spec
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn site_dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    pub fn site_kind(&self, site: usize) -> Result<SiteKind> {
        self.spec
            .sites
            .get(site)
            .copied()
            .ok_or_else(|| Error::SiteMismatch { site, reason: format!("space has {} sites", self.dims.len()) })
    }

    /// Product of the dimensions of sites strictly before / after `site`.
    pub fn outer_inner(&self, site: usize) -> (usize, usize) {
        let left = self.dims[..site].iter().product();
        let right = self.dims[site + 1..].iter().product();
        (left, right)
    }

    pub fn identity(&self) -> &CsrMatrix {
        &self.identity
    }

    /// Indices of sites of the given kind family, in order.
    pub fn sites_where(&self, pred: impl Fn(&SiteKind) -> bool) -> Vec<usize> {
        self.spec.sites.iter().enumerate().filter(|(_, k)| pred(k)).map(|(i, _)| i).collect()
    }

    pub fn boson_sites(&self) -> Vec<usize> {
        self.sites_where(|k| matches!(k, SiteKind::BosonMode { .. }))
    }

    pub fn matter_sites(&self) -> Vec<usize> {
        self.sites_where(|k| matches!(k, SiteKind::Spin | SiteKind::FermionPair))
    }

    /// Local occupation index of `site` inside a global basis index.
    pub fn local_index(&self, global: usize, site: usize) -> usize {
        let (_, right) = self.outer_inner(site);
        (global / right) % self.dims[site]
    }

    pub fn same_as(&self, other: &Space) -> bool {
        std::ptr::eq(self, other) || self.spec == other.spec
    }
}

/// Maps an AS lattice coordinate `r ∈ {-N, …, N}` to a 0-based site index.
pub fn lattice_site(half_chain: usize, r: i64) -> usize {
    let idx = r + half_chain as i64;
    assert!(idx >= 0 && idx <= 2 * half_chain as i64, "lattice coordinate {r} outside I_N");
    idx as usize
}
