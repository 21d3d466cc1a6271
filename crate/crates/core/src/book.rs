//! Proof trees for the in-`W` cases and their JSON form.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coord::Coord;

#[derive(Debug, Error)]
pub enum BookError {
    #[error("cannot read or write book: {0}")]
    Io(#[from] io::Error),
    #[error("malformed book: {0}")]
    Malformed(#[from] serde_json::Error),
}

/// One Black decision. A node either wins (`win_at` holds the number of the
/// winning Black stone) or forces White to block, in which case `replies`
/// maps each block to the continuation.
///
/// A win node is either an immediate completion (`black` completes a square,
/// `threats == [black]`) or a double threat (`threats.len() >= 2`, won two
/// stones later whatever White does).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofNode {
    pub black: Coord,
    pub threats: Vec<Coord>,
    pub win_at: Option<usize>,
    #[serde(default)]
    pub replies: BTreeMap<Coord, ProofNode>,
}

impl ProofNode {
    pub fn immediate(black: Coord, stone: usize) -> Self {
        ProofNode {
            black,
            threats: vec![black],
            win_at: Some(stone),
            replies: BTreeMap::new(),
        }
    }

    pub fn double_threat(black: Coord, threats: Vec<Coord>, win_at: usize) -> Self {
        ProofNode {
            black,
            threats,
            win_at: Some(win_at),
            replies: BTreeMap::new(),
        }
    }

    pub fn forced(black: Coord, block: Coord, child: ProofNode) -> Self {
        ProofNode {
            black,
            threats: vec![block],
            win_at: None,
            replies: BTreeMap::from([(block, child)]),
        }
    }

    /// Largest winning stone number anywhere below this node.
    pub fn max_win_stone(&self) -> usize {
        self.replies
            .values()
            .map(ProofNode::max_win_stone)
            .chain(self.win_at)
            .max()
            .unwrap_or(0)
    }

    pub fn node_count(&self) -> usize {
        1 + self.replies.values().map(ProofNode::node_count).sum::<usize>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DomainMode {
    /// Stone 2 in columns right of center, rows up to the center row.
    #[default]
    Paper,
    /// The canonical domain plus the center column below the center.
    Extended,
}

impl std::str::FromStr for DomainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(DomainMode::Paper),
            "extended" => Ok(DomainMode::Extended),
            other => Err(format!("unknown mode `{other}` (paper|extended)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookMeta {
    pub n: u8,
    pub mode: DomainMode,
    pub m: usize,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BookCase {
    pub stone2: Coord,
    pub stone4: Coord,
    pub root: ProofNode,
}

/// Proofs keyed by canonical `(stone2, stone4)`, sorted row-major.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyBook {
    pub meta: BookMeta,
    pub cases: Vec<BookCase>,
}

impl StrategyBook {
    pub fn new(meta: BookMeta) -> Self {
        StrategyBook {
            meta,
            cases: Vec::new(),
        }
    }

    pub fn insert(&mut self, stone2: Coord, stone4: Coord, root: ProofNode) {
        match self.position(stone2, stone4) {
            Ok(i) => self.cases[i].root = root,
            Err(i) => self.cases.insert(i, BookCase { stone2, stone4, root }),
        }
    }

    fn position(&self, stone2: Coord, stone4: Coord) -> Result<usize, usize> {
        self.cases
            .binary_search_by(|c| (c.stone2, c.stone4).cmp(&(stone2, stone4)))
    }

    pub fn get(&self, stone2: Coord, stone4: Coord) -> Option<&ProofNode> {
        self.position(stone2, stone4).ok().map(|i| &self.cases[i].root)
    }

    pub fn len(&self) -> usize {
        self.cases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cases.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("book serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, BookError> {
        let mut book: StrategyBook = serde_json::from_str(text)?;
        book.cases.sort_by_key(|c| (c.stone2, c.stone4));
        Ok(book)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BookError> {
        StrategyBook::from_json(&fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), BookError> {
        let path = path.as_ref();
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coord::c;

    fn meta() -> BookMeta {
        BookMeta {
            n: 19,
            mode: DomainMode::Paper,
            m: 31,
            version: "test".into(),
        }
    }

    #[test]
    fn json_shape() {
        let mut book = StrategyBook::new(meta());
        let leaf = ProofNode::double_threat(c("I9"), vec![c("H9"), c("J9")], 11);
        book.insert(c("M8"), c("J11"), ProofNode::forced(c("I11"), c("J12"), leaf));
        let v: serde_json::Value = serde_json::from_str(&book.to_json()).unwrap();
        assert_eq!(v["meta"]["mode"], "paper");
        assert_eq!(v["cases"][0]["stone2"], "M8");
        assert_eq!(v["cases"][0]["root"]["black"], "I11");
        assert_eq!(v["cases"][0]["root"]["win_at"], serde_json::Value::Null);
        assert_eq!(v["cases"][0]["root"]["replies"]["J12"]["win_at"], 11);
        assert_eq!(StrategyBook::from_json(&book.to_json()).unwrap(), book);
    }

    #[test]
    fn cases_stay_sorted() {
        let mut book = StrategyBook::new(meta());
        for (s2, s4) in [("M8", "J11"), ("K1", "J9"), ("M8", "I11"), ("K1", "H13")] {
            book.insert(c(s2), c(s4), ProofNode::immediate(c("A1"), 5));
        }
        let keys: Vec<_> = book.cases.iter().map(|k| (k.stone2, k.stone4)).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert!(book.get(c("K1"), c("H13")).is_some());
        assert!(book.get(c("K1"), c("J11")).is_none());
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(StrategyBook::from_json("{\"meta\":1}"), Err(BookError::Malformed(_))));
        assert!(StrategyBook::from_json(r#"{"meta":{"n":19,"mode":"paper","m":31,"version":"x"},"cases":[{"stone2":"Z99","stone4":"A1","root":{}}]}"#).is_err());
    }
}
