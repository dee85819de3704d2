//! Dimension-2 boundary strata of the moduli space of 4-pointed genus-one
//! curves and the push-forward of the admissible-cover relation.
//!
//! All numbers come from `data/strata.txt`, compiled into the crate so the
//! tables can be audited without reading code. The chain checked here is
//!
//! 1. push the relation `sum r_i R_i = sum s_j S_j` forward through the
//!    tables; the image must be `-1` times the boundary relation `anss`;
//! 2. `anss - 2 ratt = 4 getzler`, coordinate by coordinate.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Sign relating the pushed-forward relation (left minus right side) to
/// `anss` as written: `image = ANSS_SIGN * anss`.
pub const ANSS_SIGN: i64 = -1;

pub const EMBEDDED_DATA: &str = include_str!("../data/strata.txt");

/// The nine invariant strata, in coordinate order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    D22,
    D23,
    D24,
    D34,
    D02,
    D03,
    D04,
    Da,
    Db,
}

impl Stratum {
    pub const ALL: [Stratum; 9] = [
        Stratum::D22,
        Stratum::D23,
        Stratum::D24,
        Stratum::D34,
        Stratum::D02,
        Stratum::D03,
        Stratum::D04,
        Stratum::Da,
        Stratum::Db,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::D22 => "D22",
            Stratum::D23 => "D23",
            Stratum::D24 => "D24",
            Stratum::D34 => "D34",
            Stratum::D02 => "D02",
            Stratum::D03 => "D03",
            Stratum::D04 => "D04",
            Stratum::Da => "Da",
            Stratum::Db => "Db",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Strata with a nonsingular elliptic component.
    pub fn has_elliptic_component(self) -> bool {
        self.index() < 4
    }
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataVector([Rational; 9]);

impl Default for StrataVector {
    fn default() -> Self {
        StrataVector(core::array::from_fn(|_| Rational::zero()))
    }
}

impl StrataVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (Stratum, Rational)>) -> Self {
        let mut v = Self::zero();
        for (s, c) in entries {
            v.0[s.index()] += c;
        }
        v
    }

    pub fn get(&self, s: Stratum) -> &Rational {
        &self.0[s.index()]
    }

    pub fn set(&mut self, s: Stratum, c: Rational) {
        self.0[s.index()] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        StrataVector(core::array::from_fn(|i| &self.0[i] * c))
    }

    /// Nonzero coordinates in basis order.
    pub fn support(&self) -> impl Iterator<Item = (Stratum, &Rational)> + '_ {
        Stratum::ALL
            .into_iter()
            .map(move |s| (s, self.get(s)))
            .filter(|(_, c)| !c.is_zero())
    }

    pub fn coordinates(&self) -> &[Rational; 9] {
        &self.0
    }
}

impl Add for &StrataVector {
    type Output = StrataVector;

    fn add(self, rhs: &StrataVector) -> StrataVector {
        StrataVector(core::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub for &StrataVector {
    type Output = StrataVector;

    fn sub(self, rhs: &StrataVector) -> StrataVector {
        StrataVector(core::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

/// `48*D22 - 16*D23 + ...`, or `0`.
impl fmt::Display for StrataVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (s, c) in self.support() {
            let sign = if c.is_negative() { "-" } else { "+" };
            match (any, sign) {
                (false, "-") => f.write_str("-")?,
                (false, _) => {}
                (true, _) => write!(f, " {sign} ")?,
            }
            write!(f, "{}*{s}", format_rational(&c.abs()))?;
            any = true;
        }
        if !any {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Strata over which the elliptic component survives.
    R,
    /// Strata mapping into the nodal rational divisor.
    S,
}

/// A dimension-2 stratum `R1..R7` or `S1..S9` of the admissible-cover space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Source {
    pub family: Family,
    pub index: u8,
}

impl Source {
    pub fn all() -> impl Iterator<Item = Source> {
        (1..=7)
            .map(|index| Source { family: Family::R, index })
            .chain((1..=9).map(|index| Source { family: Family::S, index }))
    }

    pub fn parse(s: &str) -> Option<Self> {
        let (family, rest) = match s.as_bytes().first()? {
            b'R' => (Family::R, &s[1..]),
            b'S' => (Family::S, &s[1..]),
            _ => return None,
        };
        let index: u8 = rest.parse().ok()?;
        let source = Source { family, index };
        Self::all().any(|x| x == source).then_some(source)
    }

    /// Strata whose push-forward vanishes.
    pub fn pushes_to_zero(self) -> bool {
        self.family == Family::S && matches!(self.index, 2 | 3 | 8 | 9)
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.family {
            Family::R => 'R',
            Family::S => 'S',
        };
        write!(f, "{c}{}", self.index)
    }
}

/// `lambda_* pi^*` on each source stratum, plus the generic stabilizer order
/// (informational; the images already include it).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PushforwardTable {
    images: BTreeMap<Source, StrataVector>,
    stabilizers: BTreeMap<Source, u32>,
}

impl PushforwardTable {
    pub fn image(&self, s: Source) -> &StrataVector {
        &self.images[&s]
    }

    /// Overwrites one image without validation (used for mutation tests).
    pub fn set_image(&mut self, s: Source, v: StrataVector) {
        self.images.insert(s, v);
    }

    pub fn stabilizer(&self, s: Source) -> u32 {
        self.stabilizers.get(&s).copied().unwrap_or(1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Source, &StrataVector)> + '_ {
        self.images.iter().map(|(&s, v)| (s, v))
    }

    /// Every source present; R-images in the elliptic block, S-images in the
    /// nodal block; the four vanishing S-images are zero.
    pub fn validate(&self) -> Result<()> {
        let bad = |message: String| Error::DataEntry { line: 0, message };
        for s in Source::all() {
            let v = self
                .images
                .get(&s)
                .ok_or_else(|| bad(format!("missing push-forward of {s}")))?;
            for (stratum, _) in v.support() {
                let in_block = match s.family {
                    Family::R => stratum.has_elliptic_component(),
                    Family::S => !stratum.has_elliptic_component(),
                };
                if !in_block {
                    return Err(bad(format!("{s} pushes forward onto {stratum}, outside its block")));
                }
            }
            if s.pushes_to_zero() && !v.is_zero() {
                return Err(bad(format!("push-forward of {s} must vanish")));
            }
        }
        Ok(())
    }
}

/// Everything in the data file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrataData {
    pub pushforward: PushforwardTable,
    pub relation_lhs: BTreeMap<Source, Rational>,
    pub relation_rhs: BTreeMap<Source, Rational>,
    pub anss: StrataVector,
    pub ratt: StrataVector,
    pub getzler: StrataVector,
}

impl StrataData {
    pub fn embedded() -> Result<Self> {
        Self::parse(EMBEDDED_DATA)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut section = "";
        let mut pushforward = PushforwardTable::default();
        let mut relation_lhs = BTreeMap::new();
        let mut relation_rhs = BTreeMap::new();
        let mut vectors: BTreeMap<&str, StrataVector> = BTreeMap::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::DataEntry { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name;
                continue;
            }
            let mut fields = line.split_whitespace();
            match section {
                "pushforward" => {
                    let source = parse_source(fields.next(), line_no)?;
                    let stab: u32 = fields
                        .next()
                        .and_then(|s| s.parse().ok())
                        .ok_or_else(|| err(format!("missing stabilizer order for {source}")))?;
                    let image = parse_entries(fields, line_no)?;
                    if pushforward.images.insert(source, image).is_some() {
                        return Err(err(format!("duplicate entry for {source}")));
                    }
                    pushforward.stabilizers.insert(source, stab);
                }
                "relation-lhs" | "relation-rhs" => {
                    let source = parse_source(fields.next(), line_no)?;
                    let value = fields
                        .next()
                        .ok_or_else(|| err(format!("missing coefficient for {source}")))?;
                    let value = parse_rational(value, line_no)?;
                    let map = if section == "relation-lhs" {
                        &mut relation_lhs
                    } else {
                        &mut relation_rhs
                    };
                    if map.insert(source, value).is_some() {
                        return Err(err(format!("duplicate coefficient for {source}")));
                    }
                }
                "anss" | "ratt" | "getzler" => {
                    let v = parse_entries(fields, line_no)?;
                    let slot = vectors.entry(section).or_default();
                    *slot = &*slot + &v;
                }
                other => return Err(err(format!("line outside a known section ({other:?})"))),
            }
        }

        pushforward.validate()?;
        let mut take = |name: &'static str| {
            vectors.remove(name).ok_or_else(|| Error::DataEntry {
                line: 0,
                message: format!("missing section [{name}]"),
            })
        };
        let data = StrataData {
            anss: take("anss")?,
            ratt: take("ratt")?,
            getzler: take("getzler")?,
            pushforward,
            relation_lhs,
            relation_rhs,
        };
        for (family, map) in [(Family::R, &data.relation_lhs), (Family::S, &data.relation_rhs)] {
            for s in Source::all().filter(|s| s.family == family) {
                if !map.contains_key(&s) {
                    return Err(Error::DataEntry {
                        line: 0,
                        message: format!("relation has no coefficient for {s}"),
                    });
                }
            }
            if let Some(s) = map.keys().find(|s| s.family != family) {
                return Err(Error::DataEntry {
                    line: 0,
                    message: format!("{s} on the wrong side of the relation"),
                });
            }
        }
        Ok(data)
    }
}

fn parse_source(field: Option<&str>, line: usize) -> Result<Source> {
    let field = field.unwrap_or("");
    Source::parse(field).ok_or_else(|| Error::DataEntry {
        line,
        message: format!("unknown source stratum {field:?}"),
    })
}

fn parse_entries<'a>(fields: impl Iterator<Item = &'a str>, line: usize) -> Result<StrataVector> {
    let mut entries = Vec::new();
    for f in fields {
        let (name, value) = f.split_once('=').ok_or_else(|| Error::DataEntry {
            line,
            message: format!("expected STRATUM=VALUE, got {f:?}"),
        })?;
        let stratum = Stratum::from_name(name).ok_or_else(|| Error::DataEntry {
            line,
            message: format!("unknown stratum {name:?}"),
        })?;
        entries.push((stratum, parse_rational(value, line)?));
    }
    Ok(StrataVector::from_entries(entries))
}

/// The push-forward tables shipped with the crate.
pub fn load_tables() -> Result<PushforwardTable> {
    StrataData::embedded().map(|d| d.pushforward)
}

/// `sum r_i lambda_* pi^*(R_i) - sum s_j lambda_* pi^*(S_j)`.
pub fn relation_image(data: &StrataData) -> StrataVector {
    let push = |coeffs: &BTreeMap<Source, Rational>| {
        coeffs.iter().fold(StrataVector::zero(), |acc, (&s, c)| {
            &acc + &data.pushforward.image(s).scale(c)
        })
    };
    &push(&data.relation_lhs) - &push(&data.relation_rhs)
}

/// Whether the pushed-forward relation equals `ANSS_SIGN * anss`.
pub fn check_anss(data: &StrataData) -> bool {
    relation_image(data) == data.anss.scale(&int(ANSS_SIGN))
}

/// Whether `anss - 2 ratt = 4 getzler`.
pub fn check_getzler(data: &StrataData) -> bool {
    &data.anss - &data.ratt.scale(&int(2)) == data.getzler.scale(&int(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn src(s: &str) -> Source {
        Source::parse(s).unwrap()
    }

    #[test]
    fn tables_load_verbatim() {
        let t = load_tables().unwrap();
        assert_eq!(t.image(src("R4")), &StrataVector::from_entries([(Stratum::D23, int(16))]));
        assert_eq!(t.image(src("S5")), &StrataVector::from_entries([(Stratum::D04, int(2))]));
        assert!(t.image(src("S2")).is_zero());
        assert_eq!(
            t.image(src("S1")),
            &StrataVector::from_entries([
                (Stratum::D02, ratio(2, 3)),
                (Stratum::Da, int(2)),
                (Stratum::Db, ratio(16, 3)),
            ])
        );
        assert_eq!(t.stabilizer(src("R7")), 4);
        assert_eq!(t.stabilizer(src("S9")), 2);
        assert_eq!(t.stabilizer(src("R1")), 1);
    }

    #[test]
    fn relation_image_coordinates() {
        let data = StrataData::embedded().unwrap();
        let img = relation_image(&data);
        assert_eq!(img.get(Stratum::D22), &int(-48));
        assert_eq!(img.get(Stratum::D24), &int(4));
        assert!((&img + &data.anss).is_zero());
        assert!(img.support().count() == 9);
    }

    #[test]
    fn relation_chain() {
        let data = StrataData::embedded().unwrap();
        assert!(check_anss(&data));
        assert!(check_getzler(&data));
        assert_ne!(relation_image(&data), data.anss);
        assert_eq!(&int(10) - &int(2 * 3), int(4) * data.getzler.get(Stratum::D03));
        assert_eq!(data.anss.get(Stratum::D22), &(int(4) * data.getzler.get(Stratum::D22)));
    }

    #[test]
    fn corrupted_r4_breaks_anss() {
        let mut data = StrataData::embedded().unwrap();
        data.pushforward
            .set_image(src("R4"), StrataVector::from_entries([(Stratum::D23, int(15))]));
        assert!(!check_anss(&data));
    }

    #[test]
    fn blocks_are_separate() {
        let data = StrataData::embedded().unwrap();
        let push = |family| {
            data.pushforward
                .entries()
                .filter(|(s, _)| s.family == family)
                .flat_map(|(_, v)| v.support().map(|(s, _)| s).collect::<Vec<_>>())
                .collect::<Vec<_>>()
        };
        assert!(push(Family::R).iter().all(|s| s.has_elliptic_component()));
        assert!(push(Family::S).iter().all(|s| !s.has_elliptic_component()));
    }

    #[test]
    fn data_entry_errors() {
        let bad = EMBEDDED_DATA.replace("S2  1\n", "S2  1  D02=1\n");
        assert!(matches!(StrataData::parse(&bad), Err(Error::DataEntry { .. })));
        let bad = EMBEDDED_DATA.replace("R3  1  D24=12", "R3  1  D02=12");
        assert!(matches!(StrataData::parse(&bad), Err(Error::DataEntry { .. })));
        let bad = EMBEDDED_DATA.replace("R5  2  D34=12\n", "");
        assert!(matches!(StrataData::parse(&bad), Err(Error::DataEntry { .. })));
        let bad = EMBEDDED_DATA.replace("R2  -1/2", "R2  -1/0");
        assert!(matches!(StrataData::parse(&bad), Err(Error::DataEntry { .. })));
        let bad = EMBEDDED_DATA.replace("D24=32", "D99=32");
        assert!(matches!(StrataData::parse(&bad), Err(Error::DataEntry { .. })));
    }

    #[test]
    fn display() {
        let data = StrataData::embedded().unwrap();
        assert_eq!(
            alloc::string::ToString::to_string(&data.getzler),
            "12*D22 - 4*D23 - 1*D24 + 3*D34 + 1*D03 + 1/2*D04 - 2*Db"
        );
        assert_eq!(alloc::string::ToString::to_string(&StrataVector::zero()), "0");
    }
}
