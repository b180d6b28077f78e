use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Auxiliary coordinates of the cyclic quotient surface `XY = Z^n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycVar {
    X,
    Y,
    Z,
}

/// A variable of the global table.
///
/// Indices are 1-based. The total order is
/// `T < Lambda < X(1..) < Qc(1..) < Q(r,s) by (s-r, r) < Flag(i,j) by (j, i) < Cyc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarId {
    T,
    Lambda,
    /// Diagonal variable `x_s`.
    X(u8),
    /// Classical quantum parameter `q_s`, the image of `q_{s,s+1}` on the tridiagonal band.
    Qc(u8),
    /// Quantum parameter `q_{rs}` with `r < s`.
    Q(u8, u8),
    /// Chart coordinate `x_{ij}` with `j < i`.
    Flag(u8, u8),
    Cyc(CycVar),
}

impl VarId {
    pub fn x(s: usize) -> Self {
        VarId::X(s as u8)
    }

    pub fn q(r: usize, s: usize) -> Self {
        debug_assert!(r < s);
        VarId::Q(r as u8, s as u8)
    }

    /// `q_{rs}` with the diagonal convention `q_{ss} = x_s`.
    pub fn q_or_x(r: usize, s: usize) -> Self {
        if r == s {
            VarId::x(s)
        } else {
            VarId::q(r, s)
        }
    }

    pub fn flag(i: usize, j: usize) -> Self {
        debug_assert!(j < i);
        VarId::Flag(i as u8, j as u8)
    }

    fn key(&self) -> (u8, u8, u8) {
        match *self {
            VarId::T => (0, 0, 0),
            VarId::Lambda => (1, 0, 0),
            VarId::X(s) => (2, s, 0),
            VarId::Qc(s) => (3, s, 0),
            VarId::Q(r, s) => (4, s - r, r),
            VarId::Flag(i, j) => (5, j, i),
            VarId::Cyc(c) => (6, c as u8, 0),
        }
    }

    /// Graded degree; `None` for variables outside the grading.
    pub fn degree(&self) -> Option<u32> {
        match *self {
            VarId::T => Some(1),
            VarId::Lambda | VarId::Cyc(_) => None,
            VarId::X(_) => Some(2),
            VarId::Qc(_) => Some(4),
            VarId::Q(r, s) => Some(2 * (s as u32 - r as u32 + 1)),
            VarId::Flag(i, j) => Some(2 * (i as u32 - j as u32)),
        }
    }

    pub fn latex(&self) -> String {
        fn pair(a: u8, b: u8) -> String {
            if a >= 10 || b >= 10 {
                format!("{a},{b}")
            } else {
                format!("{a}{b}")
            }
        }
        match *self {
            VarId::T => "t".into(),
            VarId::Lambda => "\\lambda".into(),
            VarId::X(s) => format!("x_{{{s}}}"),
            VarId::Qc(s) => format!("q_{{{s}}}"),
            VarId::Q(r, s) => format!("q_{{{}}}", pair(r, s)),
            VarId::Flag(i, j) => format!("x_{{{}}}", pair(i, j)),
            VarId::Cyc(c) => format!("{c:?}"),
        }
    }
}

impl Ord for VarId {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for VarId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarId::T => write!(f, "t"),
            VarId::Lambda => write!(f, "lambda"),
            VarId::X(s) => write!(f, "x_{s}"),
            VarId::Qc(s) => write!(f, "qc_{s}"),
            VarId::Q(r, s) => write!(f, "q_{r}_{s}"),
            VarId::Flag(i, j) => write!(f, "x_{i}_{j}"),
            VarId::Cyc(c) => write!(f, "{c:?}"),
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(format!("unknown variable `{s}`"));
        match s {
            "t" => return Ok(VarId::T),
            "lambda" => return Ok(VarId::Lambda),
            "X" => return Ok(VarId::Cyc(CycVar::X)),
            "Y" => return Ok(VarId::Cyc(CycVar::Y)),
            "Z" => return Ok(VarId::Cyc(CycVar::Z)),
            _ => {}
        }
        let mut parts = s.split('_');
        let head = parts.next().ok_or_else(bad)?;
        let idx: Vec<u8> = parts
            .map(|p| p.parse::<u8>().map_err(|_| bad()))
            .collect::<Result<_, _>>()?;
        if idx.contains(&0) {
            return Err(bad());
        }
        match (head, idx.as_slice()) {
            ("x", [s]) => Ok(VarId::X(*s)),
            ("qc", [s]) => Ok(VarId::Qc(*s)),
            ("q", [r, s]) if r < s => Ok(VarId::Q(*r, *s)),
            ("x", [i, j]) if j < i => Ok(VarId::Flag(*i, *j)),
            _ => Err(bad()),
        }
    }
}
