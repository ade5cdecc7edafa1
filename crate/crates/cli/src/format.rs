//! Line-oriented text formats.
//!
//! Every format is one directive per line, `#` starts a comment, and blank
//! lines are ignored. States of product alphabets are written `a.b`.
//!
//! Rule file:
//!
//! ```text
//! kind cca
//! alphabet 2x4
//! neigh (0) (1)
//! interaction
//! 0.0 0.0 -> 0.0 0.0
//! ...
//! update
//! 0.0 -> 0.0
//! ...
//! ```
//!
//! A traditional automaton uses `kind ca` and a `rule` section whose rows
//! have a single output state. Configuration files hold `dims e1 e2 ...`
//! and `cells s1 s2 ...` in row-major order.

use std::collections::BTreeMap;
use std::fmt;

use cca::automata::{ClosedCa, TraditionalCa};
use cca::compile::ColourSchedule;
use cca::lattice::{CellPoint, Configuration, Lattice, Neighbourhood};
use cca::rule::{Alphabet, RuleTable, State};
use cca::search::{ExplicitMap, SearchSpec, TargetMap, DEFAULT_CANDIDATE_CEILING, DEFAULT_CONFIGURATION_CEILING};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("table not total: {section} has no row for input {missing}")]
    NotTotal { section: String, missing: String },

    #[error("missing directive `{0}`")]
    Missing(&'static str),

    #[error(transparent)]
    Model(#[from] cca::Error),
}

impl FormatError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        FormatError::Syntax { line, message: message.into() }
    }
}

pub type Result<T, E = FormatError> = std::result::Result<T, E>;

/// A parsed rule file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Automaton {
    Ca(TraditionalCa),
    Cca(ClosedCa),
}

impl Automaton {
    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Automaton::Ca(a) => a.alphabet(),
            Automaton::Cca(a) => a.alphabet(),
        }
    }

    pub fn neighbourhood(&self) -> &Neighbourhood {
        match self {
            Automaton::Ca(a) => a.neighbourhood(),
            Automaton::Cca(a) => a.neighbourhood(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Automaton::Ca(_) => "ca",
            Automaton::Cca(_) => "cca",
        }
    }

    pub fn step(&self, c: &Configuration) -> cca::Result<Configuration> {
        match self {
            Automaton::Ca(a) => a.step(c),
            Automaton::Cca(a) => a.step(c),
        }
    }
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn split_directive(line: &str) -> (&str, &str) {
    match line.split_once(char::is_whitespace) {
        Some((head, rest)) => (head, rest.trim()),
        None => (line, ""),
    }
}

pub fn parse_alphabet(line: usize, text: &str) -> Result<Alphabet> {
    let factors = text
        .split('x')
        .map(|f| f.trim().parse::<usize>().map_err(|_| FormatError::at(line, format!("bad alphabet {text:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let alphabet = if factors.len() == 1 { Alphabet::new(factors[0]) } else { Alphabet::product(&factors) };
    alphabet.map_err(|e| FormatError::at(line, e.to_string()))
}

fn parse_point(line: usize, text: &str) -> Result<CellPoint> {
    let inner = text
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| FormatError::at(line, format!("expected an offset like (0,1), got {text:?}")))?;
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>().map_err(|_| FormatError::at(line, format!("bad coordinate in {text:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(CellPoint::new(coords))
}

pub fn parse_neighbourhood(line: usize, text: &str) -> Result<Neighbourhood> {
    let mut offsets = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let end = rest.find(')').ok_or_else(|| FormatError::at(line, "unclosed offset"))?;
        let compact: String = rest[..=end].chars().filter(|c| !c.is_whitespace()).collect();
        offsets.push(parse_point(line, &compact)?);
        rest = rest[end + 1..].trim_start();
    }
    Neighbourhood::new(offsets).map_err(|e| FormatError::at(line, e.to_string()))
}

fn parse_states(line: usize, alphabet: &Alphabet, text: &str) -> Result<Vec<State>> {
    text.split_whitespace().map(|s| alphabet.parse_state(s).map_err(|e| FormatError::at(line, e.to_string()))).collect()
}

fn parse_usizes(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| FormatError::at(line, format!("expected a number, got {s:?}"))))
        .collect()
}

/// Collects `in -> out` rows of one table section into a total table.
struct TableBuilder {
    name: String,
    arity_in: usize,
    arity_out: usize,
    rows: BTreeMap<Vec<State>, Vec<State>>,
}

impl TableBuilder {
    fn new(name: impl Into<String>, arity_in: usize, arity_out: usize) -> Self {
        TableBuilder { name: name.into(), arity_in, arity_out, rows: BTreeMap::new() }
    }

    fn row(&mut self, line: usize, alphabet: &Alphabet, text: &str) -> Result<()> {
        let (lhs, rhs) = text
            .split_once("->")
            .ok_or_else(|| FormatError::at(line, format!("expected a row `in -> out`, got {text:?}")))?;
        let input = parse_states(line, alphabet, lhs)?;
        let output = parse_states(line, alphabet, rhs)?;
        if input.len() != self.arity_in || output.len() != self.arity_out {
            return Err(FormatError::at(
                line,
                format!("{} rows are {} -> {} states", self.name, self.arity_in, self.arity_out),
            ));
        }
        if self.rows.insert(input, output).is_some() {
            return Err(FormatError::at(line, format!("duplicate row in {}", self.name)));
        }
        Ok(())
    }

    fn build(self, alphabet: &Alphabet) -> Result<RuleTable> {
        let mut missing = None;
        let table = RuleTable::try_from_fn(alphabet.clone(), self.arity_in, self.arity_out, |input| {
            match self.rows.get(input) {
                Some(out) => Ok(out.clone()),
                None => {
                    missing.get_or_insert_with(|| format_tuple(alphabet, input));
                    Ok(vec![0; self.arity_out])
                }
            }
        })?;
        match missing {
            Some(missing) => Err(FormatError::NotTotal { section: self.name, missing }),
            None => Ok(table),
        }
    }
}

fn format_tuple(alphabet: &Alphabet, t: &[State]) -> String {
    t.iter().map(|&s| alphabet.format_state(s)).collect::<Vec<_>>().join(" ")
}

/// Parses a rule file. For closed automata the interaction is checked for
/// translation commutativity unless `defer_validation` is set, in which
/// case the automaton is returned unvalidated.
pub fn parse_rule_file(text: &str, defer_validation: bool) -> Result<Automaton> {
    let mut kind: Option<String> = None;
    let mut alphabet: Option<Alphabet> = None;
    let mut neigh: Option<Neighbourhood> = None;
    let mut tables: Vec<(String, TableBuilder)> = Vec::new();

    for (line, text) in lines(text) {
        if text.contains("->") {
            let Some((_, builder)) = tables.last_mut() else {
                return Err(FormatError::at(line, "table row outside a table section"));
            };
            builder.row(line, alphabet.as_ref().expect("checked at section start"), text)?;
            continue;
        }
        let (head, rest) = split_directive(text);
        match head {
            "kind" => match rest {
                "ca" | "cca" => kind = Some(rest.to_string()),
                _ => return Err(FormatError::at(line, format!("unknown kind {rest:?}"))),
            },
            "alphabet" => alphabet = Some(parse_alphabet(line, rest)?),
            "neigh" => neigh = Some(parse_neighbourhood(line, rest)?),
            "rule" | "interaction" | "update" => {
                let (Some(_), Some(n)) = (&alphabet, &neigh) else {
                    return Err(FormatError::at(line, "alphabet and neigh must precede table sections"));
                };
                if !rest.is_empty() {
                    return Err(FormatError::at(line, format!("unexpected text after `{head}`")));
                }
                if tables.iter().any(|(name, _)| name == head) {
                    return Err(FormatError::at(line, format!("second `{head}` section")));
                }
                let (ain, aout) = match head {
                    "rule" => (n.len(), 1),
                    "interaction" => (n.len(), n.len()),
                    _ => (1, 1),
                };
                tables.push((head.to_string(), TableBuilder::new(head, ain, aout)));
            }
            _ => return Err(FormatError::at(line, format!("unknown directive {head:?}"))),
        }
    }

    let kind = kind.ok_or(FormatError::Missing("kind"))?;
    let alphabet = alphabet.ok_or(FormatError::Missing("alphabet"))?;
    let neigh = neigh.ok_or(FormatError::Missing("neigh"))?;
    let mut sections: BTreeMap<String, TableBuilder> = tables.into_iter().collect();
    let mut take = |name: &'static str| -> Result<RuleTable> {
        sections.remove(name).ok_or(FormatError::Missing(name))?.build(&alphabet)
    };
    let automaton = if kind == "ca" {
        let rule = take("rule")?;
        Automaton::Ca(TraditionalCa::new(alphabet, neigh, rule)?)
    } else {
        let interaction = take("interaction")?;
        let update = take("update")?;
        let raw = ClosedCa::unvalidated(alphabet, neigh, interaction, update)?;
        Automaton::Cca(if defer_validation { raw } else { raw.validate()? })
    };
    if let Some(extra) = sections.keys().next() {
        return Err(FormatError::Syntax {
            line: 0,
            message: format!("section `{extra}` does not belong to this kind"),
        });
    }
    Ok(automaton)
}

fn write_table(out: &mut String, name: &str, t: &RuleTable, alphabet: &Alphabet) {
    out.push_str(name);
    out.push('\n');
    for (input, output) in t.iter_rows() {
        out.push_str(&format_tuple(alphabet, &input));
        out.push_str(" -> ");
        out.push_str(&format_tuple(alphabet, output));
        out.push('\n');
    }
}

/// Canonical text: header directives, then table rows in sorted input
/// order, one per line.
pub fn serialize_rule_file(a: &Automaton) -> String {
    let mut out = format!("kind {}\nalphabet {}\nneigh {}\n", a.kind(), a.alphabet(), a.neighbourhood());
    match a {
        Automaton::Ca(ca) => write_table(&mut out, "rule", ca.rule(), ca.alphabet()),
        Automaton::Cca(cca) => {
            write_table(&mut out, "interaction", cca.interaction(), cca.alphabet());
            write_table(&mut out, "update", cca.update(), cca.alphabet());
        }
    }
    out
}

/// Parses `dims` and `cells` directives against the automaton's alphabet.
pub fn parse_config(text: &str, alphabet: &Alphabet) -> Result<Configuration> {
    let mut dims = None;
    let mut cells = None;
    for (line, text) in lines(text) {
        let (head, rest) = split_directive(text);
        match head {
            "dims" => dims = Some((line, parse_usizes(line, rest)?)),
            "cells" => cells = Some((line, parse_states(line, alphabet, rest)?)),
            _ => return Err(FormatError::at(line, format!("unknown directive {head:?}"))),
        }
    }
    let (dline, dims) = dims.ok_or(FormatError::Missing("dims"))?;
    let (cline, cells) = cells.ok_or(FormatError::Missing("cells"))?;
    let lattice = Lattice::new(dims).map_err(|e| FormatError::at(dline, e.to_string()))?;
    Configuration::new(lattice, alphabet.clone(), cells).map_err(|e| FormatError::at(cline, e.to_string()))
}

pub fn serialize_config(c: &Configuration) -> String {
    let dims: Vec<String> = c.lattice().dims().iter().map(|d| d.to_string()).collect();
    format!("dims {}\ncells {}\n", dims.join(" "), c)
}

/// A recorded evolution: a header, then one line per time step starting
/// with the initial configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrajectoryRecord {
    pub kind: String,
    pub dims: Vec<usize>,
    pub alphabet: Alphabet,
    pub configurations: Vec<Configuration>,
}

impl TrajectoryRecord {
    pub fn steps(&self) -> usize {
        self.configurations.len().saturating_sub(1)
    }

    /// Reads a trajectory back.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kind = None;
        let mut dims = None;
        let mut alphabet = None;
        let mut steps = None;
        let mut configurations = Vec::new();
        for (line, text) in lines(text) {
            let (head, rest) = split_directive(text);
            match head {
                "kind" => kind = Some(rest.to_string()),
                "dims" => dims = Some(parse_usizes(line, rest)?),
                "alphabet" => alphabet = Some(parse_alphabet(line, rest)?),
                "steps" => steps = Some(parse_usizes(line, rest)?.first().copied().unwrap_or(0)),
                _ => {
                    let alphabet = alphabet.as_ref().ok_or(FormatError::Missing("alphabet"))?;
                    let dims = dims.clone().ok_or(FormatError::Missing("dims"))?;
                    let lattice = Lattice::new(dims).map_err(|e| FormatError::at(line, e.to_string()))?;
                    let cells = parse_states(line, alphabet, text)?;
                    configurations.push(
                        Configuration::new(lattice, alphabet.clone(), cells)
                            .map_err(|e| FormatError::at(line, e.to_string()))?,
                    );
                }
            }
        }
        let record = TrajectoryRecord {
            kind: kind.ok_or(FormatError::Missing("kind"))?,
            dims: dims.ok_or(FormatError::Missing("dims"))?,
            alphabet: alphabet.ok_or(FormatError::Missing("alphabet"))?,
            configurations,
        };
        if steps != Some(record.steps()) || record.configurations.is_empty() {
            return Err(FormatError::Syntax {
                line: 0,
                message: format!("header says {steps:?} steps, found {} lines", record.configurations.len()),
            });
        }
        Ok(record)
    }
}

impl fmt::Display for TrajectoryRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        writeln!(f, "kind {}", self.kind)?;
        writeln!(f, "dims {}", dims.join(" "))?;
        writeln!(f, "alphabet {}", self.alphabet)?;
        writeln!(f, "steps {}", self.steps())?;
        for c in &self.configurations {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses a search spec:
///
/// ```text
/// alphabet 2
/// neigh (-1) (0) (1)
/// reversible true
/// target shift-right        # or identity, or explicit
/// rings 4 5 6               # or one `lattice e1 e2 ...` line per lattice
/// candidate-ceiling 1000000000
/// configuration-ceiling 10000000
/// map 3 : 0 4 1 5 2 6 3 7   # explicit targets: image ranks per lattice
/// ```
pub fn parse_search_spec(text: &str) -> Result<SearchSpec> {
    let mut alphabet = None;
    let mut neigh = None;
    let mut reversible = false;
    let mut target = None;
    let mut lattices = Vec::new();
    let mut maps = Vec::new();
    let mut candidate_ceiling = DEFAULT_CANDIDATE_CEILING;
    let mut configuration_ceiling = DEFAULT_CONFIGURATION_CEILING;
    let number = |line: usize, s: &str| -> Result<u128> {
        s.parse::<u128>().map_err(|_| FormatError::at(line, format!("expected a number, got {s:?}")))
    };

    for (line, text) in lines(text) {
        let (head, rest) = split_directive(text);
        match head {
            "alphabet" => alphabet = Some(parse_alphabet(line, rest)?),
            "neigh" => neigh = Some(parse_neighbourhood(line, rest)?),
            "reversible" => {
                reversible = match rest {
                    "true" | "yes" => true,
                    "false" | "no" => false,
                    _ => return Err(FormatError::at(line, format!("expected true or false, got {rest:?}"))),
                }
            }
            "target" => target = Some((line, rest.to_string())),
            "rings" => {
                for n in parse_usizes(line, rest)? {
                    lattices.push(Lattice::ring(n).map_err(|e| FormatError::at(line, e.to_string()))?);
                }
            }
            "lattice" => lattices
                .push(Lattice::new(parse_usizes(line, rest)?).map_err(|e| FormatError::at(line, e.to_string()))?),
            "candidate-ceiling" => candidate_ceiling = number(line, rest)?,
            "configuration-ceiling" => configuration_ceiling = number(line, rest)?,
            "map" => {
                let (dims, images) =
                    rest.split_once(':').ok_or_else(|| FormatError::at(line, "expected `map <dims> : <images>`"))?;
                let images = images.split_whitespace().map(|s| number(line, s)).collect::<Result<Vec<_>>>()?;
                maps.push(ExplicitMap { dims: parse_usizes(line, dims)?, images });
            }
            _ => return Err(FormatError::at(line, format!("unknown directive {head:?}"))),
        }
    }
    let target = match target {
        None => return Err(FormatError::Missing("target")),
        Some((_, t)) if t == "shift-right" => TargetMap::ShiftRight,
        Some((_, t)) if t == "identity" => TargetMap::Identity,
        Some((_, t)) if t == "explicit" => TargetMap::Explicit(maps),
        Some((line, t)) => return Err(FormatError::at(line, format!("unknown target {t:?}"))),
    };
    Ok(SearchSpec {
        alphabet: alphabet.ok_or(FormatError::Missing("alphabet"))?,
        neigh: neigh.ok_or(FormatError::Missing("neigh"))?,
        require_reversible: reversible,
        target,
        lattices,
        candidate_ceiling,
        configuration_ceiling,
    })
}

/// Parses a two-cell block rule file (`alphabet n`, then a `block` section
/// of `a b -> c d` rows).
pub fn parse_block_file(text: &str) -> Result<RuleTable> {
    let mut alphabet = None;
    let mut builder: Option<TableBuilder> = None;
    for (line, text) in lines(text) {
        if text.contains("->") {
            let b = builder.as_mut().ok_or_else(|| FormatError::at(line, "row outside the block section"))?;
            b.row(line, alphabet.as_ref().expect("checked"), text)?;
            continue;
        }
        match split_directive(text) {
            ("alphabet", rest) => alphabet = Some(parse_alphabet(line, rest)?),
            ("block", "") if alphabet.is_some() => builder = Some(TableBuilder::new("block", 2, 2)),
            (head, _) => return Err(FormatError::at(line, format!("unexpected directive {head:?}"))),
        }
    }
    let alphabet = alphabet.ok_or(FormatError::Missing("alphabet"))?;
    builder.ok_or(FormatError::Missing("block"))?.build(&alphabet)
}

/// Parses a colour schedule:
///
/// ```text
/// alphabet 2
/// neigh (-1) (0) (1)
/// colours 2
/// tile 2 : 0 1
/// rule 0          # clock 0 updates colour 0
/// 0 0 0 -> 0
/// ...
/// rule 1          # clock 1 updates colour 1
/// ...
/// ```
pub fn parse_schedule_file(text: &str) -> Result<ColourSchedule> {
    let mut alphabet = None;
    let mut neigh: Option<Neighbourhood> = None;
    let mut colours = None;
    let mut tile = None;
    let mut rules: Vec<(State, TableBuilder)> = Vec::new();
    for (line, text) in lines(text) {
        if text.contains("->") {
            let (_, b) = rules.last_mut().ok_or_else(|| FormatError::at(line, "row outside a rule section"))?;
            b.row(line, alphabet.as_ref().expect("checked"), text)?;
            continue;
        }
        let (head, rest) = split_directive(text);
        match head {
            "alphabet" => alphabet = Some(parse_alphabet(line, rest)?),
            "neigh" => neigh = Some(parse_neighbourhood(line, rest)?),
            "colours" => {
                let k = parse_usizes(line, rest)?;
                colours = Some(
                    Alphabet::new(k.first().copied().unwrap_or(0)).map_err(|e| FormatError::at(line, e.to_string()))?,
                );
            }
            "tile" => {
                let k = colours.clone().ok_or_else(|| FormatError::at(line, "`colours` must precede `tile`"))?;
                let (dims, cells) =
                    rest.split_once(':').ok_or_else(|| FormatError::at(line, "expected `tile <dims> : <colours>`"))?;
                let lattice =
                    Lattice::new(parse_usizes(line, dims)?).map_err(|e| FormatError::at(line, e.to_string()))?;
                let cells = parse_states(line, &k, cells)?;
                tile = Some(Configuration::new(lattice, k, cells).map_err(|e| FormatError::at(line, e.to_string()))?);
            }
            "rule" => {
                let n = neigh.as_ref().ok_or_else(|| FormatError::at(line, "`neigh` must precede rules"))?;
                if alphabet.is_none() {
                    return Err(FormatError::at(line, "`alphabet` must precede rules"));
                }
                let colour = parse_usizes(line, rest)?;
                let [colour] = colour[..] else {
                    return Err(FormatError::at(line, "expected `rule <colour>`"));
                };
                rules.push((colour as State, TableBuilder::new(format!("rule {colour}"), n.len(), 1)));
            }
            _ => return Err(FormatError::at(line, format!("unknown directive {head:?}"))),
        }
    }
    let alphabet = alphabet.ok_or(FormatError::Missing("alphabet"))?;
    let rules = rules.into_iter().map(|(c, b)| Ok((c, b.build(&alphabet)?))).collect::<Result<Vec<_>>>()?;
    Ok(ColourSchedule::new(
        tile.ok_or(FormatError::Missing("tile"))?,
        neigh.ok_or(FormatError::Missing("neigh"))?,
        rules,
    )?)
}
