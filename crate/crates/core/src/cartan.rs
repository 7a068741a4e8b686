//! Simply-laced Dynkin data.
//!
//! Nodes are numbered from 1. The numbering is fixed so that serialized output
//! is stable:
//!
//! - `A_n`: the path `1 - 2 - ... - n`;
//! - `D_n`: the path `1 - ... - (n-2)` with `n-1` and `n` both attached to `n-2`;
//! - `E_n`: the path `1 - ... - (n-1)` with `n` attached to `3`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A node of the Dynkin diagram, numbered from 1.
pub type Node = u8;

/// Largest rank accepted for the infinite families.
pub const MAX_CLASSICAL_RANK: u8 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CartanType {
    A(u8),
    D(u8),
    E6,
    E7,
    E8,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) | CartanType::D(n) => n as usize,
            CartanType::E6 => 6,
            CartanType::E7 => 7,
            CartanType::E8 => 8,
        }
    }

    pub fn positive_root_count(self) -> usize {
        match self {
            CartanType::A(n) => {
                let n = n as usize;
                n * (n + 1) / 2
            }
            CartanType::D(n) => {
                let n = n as usize;
                n * (n - 1)
            }
            CartanType::E6 => 36,
            CartanType::E7 => 63,
            CartanType::E8 => 120,
        }
    }

    fn edges(self) -> Vec<(Node, Node)> {
        let rank = self.rank() as u8;
        match self {
            CartanType::A(_) => (1..rank).map(|i| (i, i + 1)).collect(),
            CartanType::D(_) => {
                let mut edges: Vec<_> = (1..rank - 2).map(|i| (i, i + 1)).collect();
                edges.push((rank - 2, rank - 1));
                edges.push((rank - 2, rank));
                edges
            }
            CartanType::E6 | CartanType::E7 | CartanType::E8 => {
                let mut edges: Vec<_> = (1..rank - 1).map(|i| (i, i + 1)).collect();
                edges.push((3, rank));
                edges
            }
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::D(n) => write!(f, "D{n}"),
            CartanType::E6 => f.write_str("E6"),
            CartanType::E7 => f.write_str("E7"),
            CartanType::E8 => f.write_str("E8"),
        }
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        let unknown = || Error::UnknownType(label.to_string());
        let mut chars = label.chars();
        let family = chars.next().ok_or_else(unknown)?;
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let out_of_range = || Error::RankOutOfRange(label.to_string());
        let n: u32 = digits.parse().map_err(|_| out_of_range())?;
        match family {
            'A' if (1..=MAX_CLASSICAL_RANK as u32).contains(&n) => Ok(CartanType::A(n as u8)),
            'D' if (4..=MAX_CLASSICAL_RANK as u32).contains(&n) => Ok(CartanType::D(n as u8)),
            'E' => match n {
                6 => Ok(CartanType::E6),
                7 => Ok(CartanType::E7),
                8 => Ok(CartanType::E8),
                _ => Err(out_of_range()),
            },
            'A' | 'D' => Err(out_of_range()),
            _ => Err(unknown()),
        }
    }
}

/// Cartan matrix and adjacency of a connected simply-laced diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    label: CartanType,
    cartan: Vec<i32>,
    adjacency: Vec<Vec<Node>>,
}

impl CartanDatum {
    pub fn new(label: CartanType) -> Self {
        let rank = label.rank();
        let mut cartan = vec![0; rank * rank];
        let mut adjacency = vec![Vec::new(); rank];
        for i in 0..rank {
            cartan[i * rank + i] = 2;
        }
        for (a, b) in label.edges() {
            let (i, j) = (a as usize - 1, b as usize - 1);
            cartan[i * rank + j] = -1;
            cartan[j * rank + i] = -1;
            adjacency[i].push(b);
            adjacency[j].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        CartanDatum {
            label,
            cartan,
            adjacency,
        }
    }

    /// Parses a label such as `"A2"`, `"D4"` or `"E6"`.
    pub fn parse(label: &str) -> Result<Self> {
        label.parse::<CartanType>().map(CartanDatum::new)
    }

    pub fn label(&self) -> CartanType {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.label.rank()
    }

    pub fn nodes(&self) -> impl Iterator<Item = Node> + Clone {
        1..=self.rank() as Node
    }

    /// Entry `C_{ij}` for 1-based nodes.
    pub fn entry(&self, i: Node, j: Node) -> i32 {
        let rank = self.rank();
        self.cartan[(i as usize - 1) * rank + (j as usize - 1)]
    }

    pub fn neighbors(&self, i: Node) -> &[Node] {
        &self.adjacency[i as usize - 1]
    }

    pub fn contains(&self, i: Node) -> bool {
        i >= 1 && (i as usize) <= self.rank()
    }

    pub fn check_node(&self, i: u32) -> Result<Node> {
        if i >= 1 && (i as usize) <= self.rank() {
            Ok(i as Node)
        } else {
            Err(Error::InvalidNode {
                node: i,
                rank: self.rank(),
            })
        }
    }

    pub fn positive_root_count(&self) -> usize {
        self.label.positive_root_count()
    }

    /// Rows of the Cartan matrix.
    pub fn matrix(&self) -> Vec<Vec<i32>> {
        self.cartan
            .chunks(self.rank())
            .map(|row| row.to_vec())
            .collect()
    }

    pub fn label_string(&self) -> String {
        format!("{}", self.label)
    }
}

impl FromStr for CartanDatum {
    type Err = Error;

    fn from_str(label: &str) -> Result<Self> {
        CartanDatum::parse(label)
    }
}
