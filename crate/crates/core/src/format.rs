//! Line-oriented triangulation text format.
//!
//! ```text
//! dim 3
//! group cyclic 5 1
//! vertex a
//! vertex b
//! simplex + a@0 a@1 b@0 b@1
//! lift a 0 1.2345678901234567e0 ...
//! length a@0 b@0 2.5e0
//! ```
//!
//! `name@copy` labels a lift; a bare name means copy 0. `length` lines override
//! the squared length of an edge read off the lifts.

use std::fmt::Write as _;

use nalgebra::DVector;

use crate::complex::{DeckGroup, Lift, SimplicialPreComplex, Top};
use crate::developing::{CoverPlacement, Representation};
use crate::error::{Error, Result};
use crate::metric::MetricData;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupSpec {
    Trivial,
    Cyclic { p: u32, k: u32 },
    ZLine { alpha: f64, a: f64 },
}

impl GroupSpec {
    pub fn deck(&self) -> DeckGroup {
        match self {
            GroupSpec::Trivial => DeckGroup::Trivial,
            GroupSpec::Cyclic { p, .. } if *p == 1 => DeckGroup::Trivial,
            GroupSpec::Cyclic { p, .. } => DeckGroup::Cyclic(*p),
            GroupSpec::ZLine { .. } => DeckGroup::Infinite,
        }
    }

    pub fn representation(&self, dim: usize) -> Representation {
        match self {
            GroupSpec::Trivial => Representation::Trivial { dim },
            GroupSpec::Cyclic { p, k } => Representation::SingleAxisCyclic {
                order: *p,
                index: *k,
            },
            GroupSpec::ZLine { alpha, a } => Representation::CyclicInfinite {
                alpha: *alpha,
                shift: *a,
            },
        }
    }

    pub fn from_representation(rep: &Representation) -> Result<GroupSpec> {
        match rep {
            Representation::Trivial { .. } => Ok(GroupSpec::Trivial),
            Representation::SingleAxisCyclic { order, index } => Ok(GroupSpec::Cyclic {
                p: *order,
                k: *index,
            }),
            Representation::CyclicInfinite { alpha, shift } => Ok(GroupSpec::ZLine {
                alpha: *alpha,
                a: *shift,
            }),
            Representation::MultiAxis { .. } => Err(Error::Unsupported(
                "multi-axis representations have no file form".into(),
            )),
        }
    }
}

/// Parsed contents of a triangulation file.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangulationFile {
    pub dim: usize,
    pub vertices: Vec<String>,
    pub simplices: Vec<(i8, Vec<Lift>)>,
    pub group: Option<GroupSpec>,
    pub lifts: Vec<(Lift, Vec<f64>)>,
    pub lengths: Vec<(Lift, Lift, f64)>,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T> {
    s.parse()
        .map_err(|_| perr(line, format!("bad number {s:?}")))
}

impl TriangulationFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut dim = None;
        let mut vertices: Vec<String> = Vec::new();
        let mut raw_simplices = Vec::new();
        let mut group = None;
        let mut raw_lifts = Vec::new();
        let mut raw_lengths = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let ln = i + 1;
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "dim" => {
                    if toks.len() != 2 {
                        return Err(perr(ln, "expected `dim <3|4>`"));
                    }
                    let d: usize = num(ln, toks[1])?;
                    if !(3..=4).contains(&d) {
                        return Err(perr(ln, format!("dimension {d} not in {{3, 4}}")));
                    }
                    dim = Some(d);
                }
                "vertex" => {
                    if toks.len() != 2 {
                        return Err(perr(ln, "expected `vertex <name>`"));
                    }
                    if vertices.iter().any(|v| v == toks[1]) {
                        return Err(perr(ln, format!("duplicate vertex {}", toks[1])));
                    }
                    if toks[1].contains('@') {
                        return Err(perr(ln, "vertex names may not contain '@'"));
                    }
                    vertices.push(toks[1].to_string());
                }
                "simplex" => {
                    let sign = match toks.get(1) {
                        Some(&"+") | Some(&"+1") => 1,
                        Some(&"-") | Some(&"-1") => -1,
                        _ => return Err(perr(ln, "expected orientation sign + or -")),
                    };
                    raw_simplices.push((
                        ln,
                        sign,
                        toks[2..].iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    ));
                }
                "group" => {
                    group = Some(match toks.get(1) {
                        Some(&"trivial") => GroupSpec::Trivial,
                        Some(&"cyclic") if toks.len() == 4 => GroupSpec::Cyclic {
                            p: num(ln, toks[2])?,
                            k: num(ln, toks[3])?,
                        },
                        Some(&"zline") if toks.len() == 4 => GroupSpec::ZLine {
                            alpha: num(ln, toks[2])?,
                            a: num(ln, toks[3])?,
                        },
                        _ => {
                            return Err(perr(
                                ln,
                                "expected `group trivial|cyclic p k|zline alpha a`",
                            ))
                        }
                    });
                }
                "lift" => {
                    if toks.len() < 4 {
                        return Err(perr(ln, "expected `lift <vertex> <copy> <coords...>`"));
                    }
                    let copy: i64 = num(ln, toks[2])?;
                    let coords = toks[3..]
                        .iter()
                        .map(|s| num(ln, s))
                        .collect::<Result<Vec<f64>>>()?;
                    raw_lifts.push((ln, toks[1].to_string(), copy, coords));
                }
                "length" => {
                    if toks.len() != 4 {
                        return Err(perr(
                            ln,
                            "expected `length <label> <label> <squared length>`",
                        ));
                    }
                    raw_lengths.push((
                        ln,
                        toks[1].to_string(),
                        toks[2].to_string(),
                        num::<f64>(ln, toks[3])?,
                    ));
                }
                other => return Err(perr(ln, format!("unknown record {other:?}"))),
            }
        }
        let dim = dim.ok_or_else(|| perr(0, "missing `dim` line"))?;
        let label = |ln: usize, s: &str| -> Result<Lift> {
            let (name, copy) = match s.split_once('@') {
                Some((n, c)) => (n, num::<i64>(ln, c)?),
                None => (s, 0),
            };
            let v = vertices
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| perr(ln, format!("unknown vertex {name:?}")))?;
            Ok(Lift::new(v, copy))
        };
        let mut simplices = Vec::new();
        for (ln, s, names) in raw_simplices {
            if names.len() != dim + 1 {
                return Err(perr(
                    ln,
                    format!("simplex needs {} vertices, found {}", dim + 1, names.len()),
                ));
            }
            simplices.push((
                s,
                names
                    .iter()
                    .map(|n| label(ln, n))
                    .collect::<Result<Vec<_>>>()?,
            ));
        }
        let mut lifts = Vec::new();
        for (ln, name, copy, coords) in raw_lifts {
            if coords.len() != dim {
                return Err(perr(
                    ln,
                    format!("lift needs {dim} coordinates, found {}", coords.len()),
                ));
            }
            let v = label(ln, &name)?.vertex;
            lifts.push((Lift::new(v, copy), coords));
        }
        let mut lengths = Vec::new();
        for (ln, a, b, l) in raw_lengths {
            lengths.push((label(ln, &a)?, label(ln, &b)?, l));
        }
        Ok(TriangulationFile {
            dim,
            vertices,
            simplices,
            group,
            lifts,
            lengths,
        })
    }

    pub fn complex(&self) -> Result<SimplicialPreComplex> {
        let group = self
            .group
            .as_ref()
            .map_or(DeckGroup::Trivial, GroupSpec::deck);
        let tops = self
            .simplices
            .iter()
            .map(|(s, l)| Top::new(l.clone(), *s))
            .collect();
        SimplicialPreComplex::build_with_group(self.dim, group, self.vertices.clone(), tops)
    }

    pub fn representation(&self) -> Representation {
        self.group
            .as_ref()
            .unwrap_or(&GroupSpec::Trivial)
            .representation(self.dim)
    }

    /// Placement from the `lift` records plus the equivariance residual of all
    /// records against the deck action. `None` if the file has no lifts.
    pub fn placement(&self) -> Result<Option<(CoverPlacement, f64)>> {
        if self.lifts.is_empty() {
            return Ok(None);
        }
        let rep = self.representation();
        if rep.dim() != self.dim {
            return Err(Error::BadParams(format!(
                "group acts on R^{} but dim is {}",
                rep.dim(),
                self.dim
            )));
        }
        let mut base = vec![None; self.vertices.len()];
        for (l, x) in &self.lifts {
            if l.copy == 0 {
                base[l.vertex] = Some(DVector::from_row_slice(x));
            }
        }
        let base = base
            .into_iter()
            .enumerate()
            .map(|(v, x)| {
                x.ok_or_else(|| {
                    Error::BadParams(format!("vertex {} has no copy-0 lift", self.vertices[v]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let placement = CoverPlacement::new(rep, base);
        let records: Vec<(Lift, DVector<f64>)> = self
            .lifts
            .iter()
            .map(|(l, x)| (*l, DVector::from_row_slice(x)))
            .collect();
        let residual = placement.equivariance_residual(&records);
        Ok(Some((placement, residual)))
    }

    /// Metric read off the placement, with `length` overrides applied.
    pub fn metric(&self, c: &SimplicialPreComplex, p: &CoverPlacement) -> Result<MetricData> {
        let mut m = p.metric(c)?;
        for (a, b, l) in &self.lengths {
            let e = c.find_cell(&[*a, *b]).ok_or_else(|| {
                Error::BadParams(format!("no edge {}", c.format_lifts(&[*a, *b])))
            })?;
            if e.dim != 1 {
                return Err(Error::BadParams(
                    "length override needs two distinct lifts".into(),
                ));
            }
            m.sq_lengths[e.index] = *l;
        }
        Ok(m)
    }

    /// File contents for a complex and (optionally) its placement.
    pub fn from_parts(c: &SimplicialPreComplex, p: Option<&CoverPlacement>) -> Result<Self> {
        let group = match p {
            Some(p) => Some(GroupSpec::from_representation(&p.rep)?),
            None => match c.group() {
                DeckGroup::Trivial => None,
                _ => {
                    return Err(Error::BadParams(
                        "a non-trivial group needs a placement".into(),
                    ))
                }
            },
        };
        let lifts = match p {
            Some(p) => p
                .lifts(c)
                .into_iter()
                .map(|(l, x)| (l, x.iter().copied().collect()))
                .collect(),
            None => Vec::new(),
        };
        Ok(TriangulationFile {
            dim: c.dim(),
            vertices: c.vertex_names().to_vec(),
            simplices: c
                .tops()
                .iter()
                .map(|t| (t.orientation, t.lifts.clone()))
                .collect(),
            group,
            lifts,
            lengths: Vec::new(),
        })
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        let cyclic = !matches!(self.group, None | Some(GroupSpec::Trivial));
        let label = |l: &Lift| {
            if cyclic {
                format!("{}@{}", self.vertices[l.vertex], l.copy)
            } else {
                self.vertices[l.vertex].clone()
            }
        };
        writeln!(s, "dim {}", self.dim).unwrap();
        match &self.group {
            None => {}
            Some(GroupSpec::Trivial) => writeln!(s, "group trivial").unwrap(),
            Some(GroupSpec::Cyclic { p, k }) => writeln!(s, "group cyclic {p} {k}").unwrap(),
            Some(GroupSpec::ZLine { alpha, a }) => {
                writeln!(s, "group zline {} {}", fmt17(*alpha), fmt17(*a)).unwrap()
            }
        }
        for v in &self.vertices {
            writeln!(s, "vertex {v}").unwrap();
        }
        for (sign, ls) in &self.simplices {
            let names: Vec<String> = ls.iter().map(label).collect();
            writeln!(
                s,
                "simplex {} {}",
                if *sign > 0 { "+" } else { "-" },
                names.join(" ")
            )
            .unwrap();
        }
        for (l, x) in &self.lifts {
            let xs: Vec<String> = x.iter().map(|v| fmt17(*v)).collect();
            writeln!(
                s,
                "lift {} {} {}",
                self.vertices[l.vertex],
                l.copy,
                xs.join(" ")
            )
            .unwrap();
        }
        for (a, b, l) in &self.lengths {
            writeln!(s, "length {} {} {}", label(a), label(b), fmt17(*l)).unwrap();
        }
        s
    }
}

/// Decimal with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}
