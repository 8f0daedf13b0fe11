//! Catalog-aligned embedding matrices and the interaction/query logs they
//! are evaluated against.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::math;
use crate::matrix::Matrix;

/// Row-norm tolerance for the `normalized` flag.
pub const NORM_TOL: f64 = 1e-6;

/// Identity of a catalog (or any byte stream), used to check that matrices
/// built against the same item universe are combined together.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fingerprint(pub [u8; 32]);

impl Fingerprint {
    pub fn to_hex(&self) -> String {
        let mut s = String::with_capacity(64);
        for b in self.0 {
            use core::fmt::Write;
            let _ = write!(s, "{b:02x}");
        }
        s
    }
}

/// Ordered item universe with train popularity counts.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    items: Vec<CatalogItem>,
    index: BTreeMap<String, u32>,
    fingerprint: Fingerprint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CatalogItem {
    pub id: String,
    pub train_popularity: u64,
}

impl Catalog {
    /// Builds a catalog from `(item_id, train_popularity)` pairs in dense
    /// index order. Item ids must be unique.
    pub fn new(entries: Vec<(String, u64)>) -> Result<Self> {
        let mut index = BTreeMap::new();
        let mut hasher = Sha256::new();
        let mut items = Vec::with_capacity(entries.len());
        for (pos, (id, pop)) in entries.into_iter().enumerate() {
            if index.insert(id.clone(), pos as u32).is_some() {
                return Err(Error::DuplicateItem(id));
            }
            hasher.update(id.as_bytes());
            hasher.update([0]);
            hasher.update(pop.to_le_bytes());
            items.push(CatalogItem {
                id,
                train_popularity: pop,
            });
        }
        Ok(Self {
            items,
            index,
            fingerprint: Fingerprint(hasher.finalize().into()),
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[CatalogItem] {
        &self.items
    }

    pub fn id(&self, dense: u32) -> &str {
        &self.items[dense as usize].id
    }

    pub fn dense_index(&self, id: &str) -> Option<u32> {
        self.index.get(id).copied()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        self.fingerprint
    }

    pub fn popularity(&self, dense: u32) -> u64 {
        self.items[dense as usize].train_popularity
    }

    /// Items ranked by descending train popularity, ties by dense index;
    /// `rank[i]` is the 0-based popularity rank of item `i`.
    pub fn popularity_ranks(&self) -> Vec<u32> {
        let mut order: Vec<u32> = (0..self.items.len() as u32).collect();
        order.sort_by_key(|&i| (core::cmp::Reverse(self.items[i as usize].train_popularity), i));
        let mut rank = alloc::vec![0u32; self.items.len()];
        for (r, &i) in order.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        rank
    }
}

/// Dense n-by-d matrix of item (or query/user) vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingMatrix {
    mat: Matrix,
    normalized: bool,
    aligned_to: Option<Fingerprint>,
}

impl EmbeddingMatrix {
    /// Wraps a matrix after checking all entries are finite. The
    /// `normalized` flag starts unset.
    pub fn new(mat: Matrix) -> Result<Self> {
        mat.validate_finite()?;
        Ok(Self {
            mat,
            normalized: false,
            aligned_to: None,
        })
    }

    /// `new` plus a row-count check against an expected catalog size.
    pub fn with_expected_rows(mat: Matrix, expected_rows: Option<usize>) -> Result<Self> {
        if let Some(expected) = expected_rows {
            if mat.rows() != expected {
                return Err(Error::ShapeMismatch {
                    expected,
                    got: mat.rows(),
                });
            }
        }
        Self::new(mat)
    }

    pub fn rows(&self) -> usize {
        self.mat.rows()
    }

    pub fn dim(&self) -> usize {
        self.mat.cols()
    }

    pub fn row(&self, i: usize) -> &[f32] {
        self.mat.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn aligned_to(&self) -> Option<Fingerprint> {
        self.aligned_to
    }

    pub fn set_aligned_to(&mut self, fp: Fingerprint) {
        self.aligned_to = Some(fp);
    }

    /// Divides every row by its Euclidean norm. Zero-norm rows are an error
    /// naming the offending row.
    pub fn l2_normalize(&self) -> Result<EmbeddingMatrix> {
        let mut out = self.mat.clone();
        for i in 0..out.rows() {
            let n = math::norm(out.row(i));
            if n == 0.0 {
                return Err(Error::ZeroNormRow { row: i });
            }
            for v in out.row_mut(i) {
                *v = (*v as f64 / n) as f32;
            }
        }
        Ok(EmbeddingMatrix {
            mat: out,
            normalized: true,
            aligned_to: self.aligned_to,
        })
    }

    /// Permutes rows from manifest order into catalog dense-index order.
    /// The manifest must list every catalog item exactly once.
    pub fn align(&self, catalog: &Catalog, manifest: &[String]) -> Result<EmbeddingMatrix> {
        if manifest.len() != catalog.len() {
            return Err(Error::ShapeMismatch {
                expected: catalog.len(),
                got: manifest.len(),
            });
        }
        if self.mat.rows() != manifest.len() {
            return Err(Error::ShapeMismatch {
                expected: manifest.len(),
                got: self.mat.rows(),
            });
        }
        // source row index for each dense index
        let mut src_of = alloc::vec![usize::MAX; catalog.len()];
        for (row, id) in manifest.iter().enumerate() {
            let dense = catalog
                .dense_index(id)
                .ok_or_else(|| Error::UnknownItem(id.clone()))? as usize;
            if src_of[dense] != usize::MAX {
                return Err(Error::DuplicateItem(id.clone()));
            }
            src_of[dense] = row;
        }
        if let Some(dense) = src_of.iter().position(|&s| s == usize::MAX) {
            return Err(Error::MissingItem(catalog.id(dense as u32).to_string()));
        }
        let mut out = Matrix::zeros(self.mat.rows(), self.mat.cols());
        for (dense, &src) in src_of.iter().enumerate() {
            out.row_mut(dense).copy_from_slice(self.mat.row(src));
        }
        Ok(EmbeddingMatrix {
            mat: out,
            normalized: self.normalized,
            aligned_to: Some(catalog.fingerprint()),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn parse(s: &str) -> Result<Split> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::Invalid(alloc::format!("unknown split {other:?}"))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "test",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interaction {
    pub user: u32,
    pub item: u32,
    pub timestamp: i64,
    pub split: Split,
}

/// User-item interactions resolved against a catalog, with per-user
/// train/test structure validated on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionLog {
    users: Vec<String>,
    user_index: BTreeMap<String, u32>,
    interactions: Vec<Interaction>,
    // per user: train item lists sorted by timestamp, and the held-out item
    train_items: Vec<Vec<u32>>,
    test_item: Vec<Option<u32>>,
}

impl InteractionLog {
    /// Resolves raw `(user_id, item_id, timestamp, split)` triples. Each
    /// user may have at most one test triple and it must be that user's
    /// chronologically last interaction.
    pub fn new(catalog: &Catalog, raw: Vec<(String, String, i64, Split)>) -> Result<Self> {
        let mut users: Vec<String> = Vec::new();
        let mut user_index: BTreeMap<String, u32> = BTreeMap::new();
        let mut interactions = Vec::with_capacity(raw.len());
        for (user_id, item_id, ts, split) in raw {
            let item = catalog
                .dense_index(&item_id)
                .ok_or(Error::UnknownItem(item_id))?;
            let user = *user_index.entry(user_id.clone()).or_insert_with(|| {
                users.push(user_id);
                (users.len() - 1) as u32
            });
            interactions.push(Interaction {
                user,
                item,
                timestamp: ts,
                split,
            });
        }
        let n_users = users.len();
        let mut per_user: Vec<Vec<(i64, u32, Split, usize)>> = alloc::vec![Vec::new(); n_users];
        for (pos, it) in interactions.iter().enumerate() {
            per_user[it.user as usize].push((it.timestamp, it.item, it.split, pos));
        }
        let mut train_items = alloc::vec![Vec::new(); n_users];
        let mut test_item = alloc::vec![None; n_users];
        for (u, entries) in per_user.iter_mut().enumerate() {
            // stable order: timestamp, then original position
            entries.sort_by_key(|&(ts, _, _, pos)| (ts, pos));
            let mut seen_test = false;
            for (idx, &(_, item, split, _)) in entries.iter().enumerate() {
                match split {
                    Split::Train => train_items[u].push(item),
                    Split::Test => {
                        if seen_test {
                            return Err(Error::MultipleTestInteractions(users[u].clone()));
                        }
                        if idx + 1 != entries.len() {
                            return Err(Error::TestNotLast(users[u].clone()));
                        }
                        seen_test = true;
                        test_item[u] = Some(item);
                    }
                }
            }
        }
        Ok(Self {
            users,
            user_index,
            interactions,
            train_items,
            test_item,
        })
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn user_id(&self, u: u32) -> &str {
        &self.users[u as usize]
    }

    pub fn user_index(&self, id: &str) -> Option<u32> {
        self.user_index.get(id).copied()
    }

    pub fn interactions(&self) -> &[Interaction] {
        &self.interactions
    }

    /// Train items of a user, in chronological order.
    pub fn train_items(&self, u: u32) -> &[u32] {
        &self.train_items[u as usize]
    }

    pub fn test_item(&self, u: u32) -> Option<u32> {
        self.test_item[u as usize]
    }

    pub fn n_train_interactions(&self) -> usize {
        self.train_items.iter().map(|v| v.len()).sum()
    }

    /// Train interaction count per catalog item.
    pub fn train_popularity(&self, n_items: usize) -> Vec<u64> {
        let mut pop = alloc::vec![0u64; n_items];
        for items in &self.train_items {
            for &i in items {
                pop[i as usize] += 1;
            }
        }
        pop
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    pub query_id: String,
    pub relevant_item: u32,
    pub split: Split,
}

/// Query relevance records plus their embeddings, row-aligned to record
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuerySet {
    records: Vec<QueryRecord>,
}

impl QuerySet {
    pub fn new(catalog: &Catalog, raw: Vec<(String, String, Split)>) -> Result<Self> {
        let mut records = Vec::with_capacity(raw.len());
        for (query_id, item_id, split) in raw {
            let relevant_item = catalog
                .dense_index(&item_id)
                .ok_or(Error::UnknownItem(item_id))?;
            records.push(QueryRecord {
                query_id,
                relevant_item,
                split,
            });
        }
        Ok(Self { records })
    }

    pub fn records(&self) -> &[QueryRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `(train, test)` query counts per item.
    pub fn counts_per_item(&self, n_items: usize) -> Vec<(u32, u32)> {
        let mut counts = alloc::vec![(0u32, 0u32); n_items];
        for r in &self.records {
            let c = &mut counts[r.relevant_item as usize];
            match r.split {
                Split::Train => c.0 += 1,
                Split::Test => c.1 += 1,
            }
        }
        counts
    }

    pub fn test_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.records
            .iter()
            .enumerate()
            .filter(|(_, r)| r.split == Split::Test)
            .map(|(i, _)| i)
    }
}
