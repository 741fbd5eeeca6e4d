//! Ratio scales mapping match outcomes to pairwise comparison values.
//!
//! A scale assigns a positive rational r(g) to each game-point outcome g
//! on the half-integer grid 0..4. Valid scales are reciprocal-symmetric
//! around the drawn match, r(g) * r(4 - g) = 1 with r(2) = 1, and
//! strictly increasing in g. Ratios are exact rationals so symmetry
//! checks never hinge on float rounding.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use num_rational::Ratio as NumRatio;
use num_traits::One;

use crate::error::{Error, Result};
use crate::tournament::GamePoints;

pub type Ratio = NumRatio<i64>;

/// The four built-in scales.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BuiltinScale {
    A,
    B,
    C,
    D,
}

impl BuiltinScale {
    pub const ALL: [BuiltinScale; 4] = [
        BuiltinScale::A,
        BuiltinScale::B,
        BuiltinScale::C,
        BuiltinScale::D,
    ];

    pub fn letter(self) -> &'static str {
        match self {
            BuiltinScale::A => "A",
            BuiltinScale::B => "B",
            BuiltinScale::C => "C",
            BuiltinScale::D => "D",
        }
    }
}

impl fmt::Display for BuiltinScale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

impl FromStr for BuiltinScale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(BuiltinScale::A),
            "B" => Ok(BuiltinScale::B),
            "C" => Ok(BuiltinScale::C),
            "D" => Ok(BuiltinScale::D),
            other => Err(Error::Scale(format!("unknown built-in scale {other:?}"))),
        }
    }
}

/// Identifies a scale in outputs and labels: a built-in letter or the
/// name of a user-supplied scale.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScaleName {
    Builtin(BuiltinScale),
    Custom(String),
}

impl fmt::Display for ScaleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaleName::Builtin(b) => f.write_str(b.letter()),
            ScaleName::Custom(name) => f.write_str(name),
        }
    }
}

/// A validated ratio scale: nine exact ratios indexed by half-points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioScale {
    name: ScaleName,
    ratios: [Ratio; 9],
}

const fn r(num: i64, den: i64) -> Ratio {
    Ratio::new_raw(num, den)
}

// Ratios for half-point indices 0..=8, reciprocal-symmetric by column.
const SCALE_A: [Ratio; 9] = [
    r(1, 5),
    r(1, 4),
    r(1, 3),
    r(1, 2),
    r(1, 1),
    r(2, 1),
    r(3, 1),
    r(4, 1),
    r(5, 1),
];
const SCALE_B: [Ratio; 9] = [
    r(1, 8),
    r(1, 6),
    r(1, 4),
    r(1, 2),
    r(1, 1),
    r(2, 1),
    r(4, 1),
    r(6, 1),
    r(8, 1),
];
const SCALE_C: [Ratio; 9] = [
    r(1, 3),
    r(2, 5),
    r(1, 2),
    r(2, 3),
    r(1, 1),
    r(3, 2),
    r(2, 1),
    r(5, 2),
    r(3, 1),
];
const SCALE_D: [Ratio; 9] = [
    r(1, 5),
    r(1, 4),
    r(2, 7),
    r(1, 3),
    r(1, 1),
    r(3, 1),
    r(7, 2),
    r(4, 1),
    r(5, 1),
];

impl RatioScale {
    pub fn builtin(which: BuiltinScale) -> Self {
        let ratios = match which {
            BuiltinScale::A => SCALE_A,
            BuiltinScale::B => SCALE_B,
            BuiltinScale::C => SCALE_C,
            BuiltinScale::D => SCALE_D,
        };
        RatioScale {
            name: ScaleName::Builtin(which),
            ratios,
        }
    }

    /// Builds a custom scale, enforcing the same invariants the built-in
    /// tables satisfy.
    pub fn custom(name: impl Into<String>, ratios: [Ratio; 9]) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::Scale("custom scale needs a name".into()));
        }
        for (hp, ratio) in ratios.iter().enumerate() {
            if *ratio.numer() <= 0 || *ratio.denom() <= 0 {
                return Err(Error::Scale(format!(
                    "ratio at {} game points must be positive",
                    half_label(hp)
                )));
            }
        }
        if ratios[4] != Ratio::one() {
            return Err(Error::Scale("drawn match must map to ratio 1".into()));
        }
        for hp in 0..9 {
            if ratios[hp] * ratios[8 - hp] != Ratio::one() {
                return Err(Error::Scale(format!(
                    "ratios at {} and {} game points are not reciprocal",
                    half_label(hp),
                    half_label(8 - hp)
                )));
            }
        }
        for hp in 1..9 {
            if ratios[hp] <= ratios[hp - 1] {
                return Err(Error::Scale(format!(
                    "ratios must strictly increase; violated at {} game points",
                    half_label(hp)
                )));
            }
        }
        Ok(RatioScale {
            name: ScaleName::Custom(name),
            ratios,
        })
    }

    /// Parses a custom scale from a `game_points,ratio` CSV. Ratios may
    /// be written as fractions ("5/2"), integers, or decimals. All nine
    /// grid values must appear exactly once.
    pub fn from_csv(name: impl Into<String>, input: impl Read) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        {
            let headers = reader
                .headers()
                .map_err(|e| Error::Parse {
                    line: 1,
                    message: format!("unreadable scale header: {e}"),
                })?;
            let got: Vec<&str> = headers.iter().collect();
            if got != ["game_points", "ratio"] {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("expected header game_points,ratio, got {}", got.join(",")),
                });
            }
        }
        let mut ratios: [Option<Ratio>; 9] = [None; 9];
        for record in reader.records() {
            let record = record.map_err(|e| Error::Parse {
                line: e.position().map(|p| p.line()).unwrap_or(0),
                message: format!("malformed scale row: {e}"),
            })?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let gp = GamePoints::parse(&record[0]).ok_or_else(|| Error::Parse {
                line,
                message: format!("game points {:?} not on the half-integer grid", &record[0]),
            })?;
            let ratio = parse_ratio(&record[1]).ok_or_else(|| Error::Parse {
                line,
                message: format!("unparseable ratio {:?}", &record[1]),
            })?;
            let slot = &mut ratios[gp.half_points() as usize];
            if slot.is_some() {
                return Err(Error::Parse {
                    line,
                    message: format!("duplicate entry for {gp} game points"),
                });
            }
            *slot = Some(ratio);
        }
        let mut filled = [Ratio::one(); 9];
        for (hp, slot) in ratios.iter().enumerate() {
            filled[hp] = slot.ok_or_else(|| {
                Error::Scale(format!("missing entry for {} game points", half_label(hp)))
            })?;
        }
        RatioScale::custom(name, filled)
    }

    pub fn name(&self) -> &ScaleName {
        &self.name
    }

    pub fn ratio(&self, g: GamePoints) -> Ratio {
        self.ratios[g.half_points() as usize]
    }

    pub fn value(&self, g: GamePoints) -> f64 {
        let ratio = self.ratio(g);
        *ratio.numer() as f64 / *ratio.denom() as f64
    }

    pub fn ratios(&self) -> &[Ratio; 9] {
        &self.ratios
    }
}

fn half_label(hp: usize) -> String {
    GamePoints::from_half_points(hp as u8)
        .map(|g| g.to_string())
        .unwrap_or_else(|| hp.to_string())
}

/// Accepts "p/q", plain integers, and decimals with up to a few places.
fn parse_ratio(s: &str) -> Option<Ratio> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: i64 = num.trim().parse().ok()?;
        let den: i64 = den.trim().parse().ok()?;
        if den == 0 {
            return None;
        }
        return Some(Ratio::new(num, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.len() > 9 || frac.is_empty() {
            return None;
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" {
            0
        } else {
            whole.parse().ok()?
        };
        let frac_digits: i64 = frac.parse().ok()?;
        if frac_digits < 0 {
            return None;
        }
        let denom = 10i64.checked_pow(frac.len() as u32)?;
        let magnitude = whole.unsigned_abs() as i64 * denom + frac_digits;
        let signed = if negative { -magnitude } else { magnitude };
        return Some(Ratio::new(signed, denom));
    }
    let v: i64 = s.parse().ok()?;
    Some(Ratio::from_integer(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gp(s: &str) -> GamePoints {
        GamePoints::parse(s).unwrap()
    }

    #[test]
    fn builtin_values_match_tables() {
        let a = RatioScale::builtin(BuiltinScale::A);
        assert_eq!(a.ratio(gp("2.5")), Ratio::new(2, 1));
        assert_eq!(a.ratio(gp("1.5")), Ratio::new(1, 2));
        assert_eq!(a.ratio(gp("4")), Ratio::new(5, 1));
        let b = RatioScale::builtin(BuiltinScale::B);
        assert_eq!(b.ratio(gp("3")), Ratio::new(4, 1));
        assert_eq!(b.ratio(gp("0")), Ratio::new(1, 8));
        let c = RatioScale::builtin(BuiltinScale::C);
        assert_eq!(c.ratio(gp("2.5")), Ratio::new(3, 2));
        assert_eq!(c.ratio(gp("3.5")), Ratio::new(5, 2));
        let d = RatioScale::builtin(BuiltinScale::D);
        assert_eq!(d.ratio(gp("1")), Ratio::new(2, 7));
        assert_eq!(d.ratio(gp("3")), Ratio::new(7, 2));
        assert_eq!(d.ratio(gp("2.5")), Ratio::new(3, 1));
    }

    #[test]
    fn builtin_scales_are_valid_custom_scales() {
        for which in BuiltinScale::ALL {
            let built = RatioScale::builtin(which);
            let reconstructed = RatioScale::custom("copy", *built.ratios()).unwrap();
            assert_eq!(reconstructed.ratios(), built.ratios());
        }
    }

    #[test]
    fn reciprocal_symmetry_holds_exactly() {
        for which in BuiltinScale::ALL {
            let scale = RatioScale::builtin(which);
            for g in GamePoints::grid() {
                assert_eq!(
                    scale.ratio(g) * scale.ratio(g.opponent()),
                    Ratio::one(),
                    "scale {which} at {g}"
                );
            }
        }
    }

    #[test]
    fn custom_rejects_broken_symmetry() {
        let mut ratios = *RatioScale::builtin(BuiltinScale::A).ratios();
        ratios[8] = Ratio::new(6, 1);
        let err = RatioScale::custom("bad", ratios).unwrap_err();
        assert!(matches!(err, Error::Scale(_)), "{err}");
    }

    #[test]
    fn custom_rejects_non_monotone() {
        // Swapping two upper entries keeps each reciprocal pair intact
        // but breaks monotonicity.
        let mut ratios = *RatioScale::builtin(BuiltinScale::A).ratios();
        ratios.swap(5, 6);
        ratios.swap(2, 3);
        let err = RatioScale::custom("bad", ratios).unwrap_err();
        assert!(matches!(err, Error::Scale(_)));
    }

    #[test]
    fn custom_rejects_draw_not_one() {
        let mut ratios = *RatioScale::builtin(BuiltinScale::A).ratios();
        ratios[4] = Ratio::new(2, 1);
        assert!(RatioScale::custom("bad", ratios).is_err());
    }

    #[test]
    fn csv_scale_round_trip() {
        let csv = "game_points,ratio\n0,1/5\n0.5,1/4\n1,1/3\n1.5,0.5\n2,1\n2.5,2\n3,3\n3.5,4\n4,5\n";
        let scale = RatioScale::from_csv("mine", csv.as_bytes()).unwrap();
        assert_eq!(scale.ratios(), RatioScale::builtin(BuiltinScale::A).ratios());
        assert_eq!(scale.name().to_string(), "mine");
    }

    #[test]
    fn csv_scale_missing_row_rejected() {
        let csv = "game_points,ratio\n2,1\n";
        assert!(RatioScale::from_csv("m", csv.as_bytes()).is_err());
    }

    #[test]
    fn ratio_parser_accepts_fractions_and_decimals() {
        assert_eq!(parse_ratio("5/2"), Some(Ratio::new(5, 2)));
        assert_eq!(parse_ratio("0.25"), Some(Ratio::new(1, 4)));
        assert_eq!(parse_ratio("3"), Some(Ratio::from_integer(3)));
        assert_eq!(parse_ratio("1.5"), Some(Ratio::new(3, 2)));
        assert_eq!(parse_ratio("1/0"), None);
        assert_eq!(parse_ratio("abc"), None);
    }

    #[test]
    fn scale_names_display() {
        assert_eq!(ScaleName::Builtin(BuiltinScale::C).to_string(), "C");
        assert_eq!(ScaleName::Custom("mine".into()).to_string(), "mine");
        assert_eq!("b".parse::<BuiltinScale>().unwrap(), BuiltinScale::B);
        assert!("E".parse::<BuiltinScale>().is_err());
    }
}
