//! Quantity strings with explicit units ("7.5 mN", "25.4 um", "9.81 m/s^2")
//! converted to SI at the ingestion boundary.

use std::fmt;

/// Exponents over the base dimensions (m, kg, s, A, rad).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dimension([i8; 5]);

impl Dimension {
    pub const NONE: Dimension = Dimension([0, 0, 0, 0, 0]);
    pub const LENGTH: Dimension = Dimension([1, 0, 0, 0, 0]);
    pub const AREA: Dimension = Dimension([2, 0, 0, 0, 0]);
    pub const MASS: Dimension = Dimension([0, 1, 0, 0, 0]);
    pub const TIME: Dimension = Dimension([0, 0, 1, 0, 0]);
    pub const CURRENT: Dimension = Dimension([0, 0, 0, 1, 0]);
    pub const ANGLE: Dimension = Dimension([0, 0, 0, 0, 1]);
    pub const FREQUENCY: Dimension = Dimension([0, 0, -1, 0, 0]);
    pub const FORCE: Dimension = Dimension([1, 1, -2, 0, 0]);
    pub const STIFFNESS: Dimension = Dimension([0, 1, -2, 0, 0]);
    pub const PRESSURE: Dimension = Dimension([-1, 1, -2, 0, 0]);
    pub const ENERGY: Dimension = Dimension([2, 1, -2, 0, 0]);
    pub const POWER: Dimension = Dimension([2, 1, -3, 0, 0]);
    pub const VOLTAGE: Dimension = Dimension([2, 1, -3, -1, 0]);
    pub const RESISTANCE: Dimension = Dimension([2, 1, -3, -2, 0]);
    pub const FLUX_DENSITY: Dimension = Dimension([0, 1, -2, -1, 0]);
    pub const DENSITY: Dimension = Dimension([-3, 1, 0, 0, 0]);
    pub const ACCELERATION: Dimension = Dimension([1, 0, -2, 0, 0]);
    pub const LINEAR_DENSITY: Dimension = Dimension([-1, 1, 0, 0, 0]);

    fn mul(self, other: Dimension, power: i8) -> Dimension {
        let mut out = self.0;
        for (o, e) in out.iter_mut().zip(other.0) {
            *o += e * power;
        }
        Dimension(out)
    }

    /// Canonical SI unit written by the serializer; every one has factor 1.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::NONE => "",
            Dimension::LENGTH => "m",
            Dimension::AREA => "m^2",
            Dimension::MASS => "kg",
            Dimension::TIME => "s",
            Dimension::CURRENT => "A",
            Dimension::ANGLE => "rad",
            Dimension::FREQUENCY => "Hz",
            Dimension::FORCE => "N",
            Dimension::STIFFNESS => "N/m",
            Dimension::PRESSURE => "Pa",
            Dimension::ENERGY => "J",
            Dimension::POWER => "W",
            Dimension::VOLTAGE => "V",
            Dimension::RESISTANCE => "ohm",
            Dimension::FLUX_DENSITY => "T",
            Dimension::DENSITY => "kg/m^3",
            Dimension::ACCELERATION => "m/s^2",
            Dimension::LINEAR_DENSITY => "kg/m",
            _ => "?",
        }
    }

    pub fn describe(self) -> String {
        if self == Dimension::NONE {
            return "dimensionless".into();
        }
        let names = ["m", "kg", "s", "A", "rad"];
        let parts: Vec<String> = names
            .iter()
            .zip(self.0)
            .filter(|(_, e)| *e != 0)
            .map(|(n, e)| {
                if e == 1 {
                    n.to_string()
                } else {
                    format!("{n}^{e}")
                }
            })
            .collect();
        parts.join("·")
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.si_unit() {
            "?" => f.write_str(&self.describe()),
            "" => f.write_str("dimensionless"),
            u => f.write_str(u),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    /// Value in SI base units.
    pub value: f64,
    pub dimension: Dimension,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnitError {
    #[error("'{0}' does not start with a number")]
    NoNumber(String),
    #[error("unknown unit '{0}'")]
    UnknownUnit(String),
    #[error("'{0}': malformed unit expression")]
    Malformed(String),
    #[error("expected {expected}, got '{input}' ({found})")]
    WrongDimension {
        input: String,
        expected: String,
        found: String,
    },
    #[error("'{0}' is not finite")]
    NotFinite(String),
}

const PI: f64 = std::f64::consts::PI;

/// Symbol, decimal exponent, extra non-decimal factor, dimension.
/// Symbols are matched whole before any prefix is tried.
const SYMBOLS: &[(&str, i32, f64, Dimension)] = &[
    ("m", 0, 1.0, Dimension::LENGTH),
    ("kg", 0, 1.0, Dimension::MASS),
    ("g", -3, 1.0, Dimension::MASS),
    ("s", 0, 1.0, Dimension::TIME),
    ("min", 0, 60.0, Dimension::TIME),
    ("A", 0, 1.0, Dimension::CURRENT),
    ("N", 0, 1.0, Dimension::FORCE),
    ("Pa", 0, 1.0, Dimension::PRESSURE),
    ("J", 0, 1.0, Dimension::ENERGY),
    ("W", 0, 1.0, Dimension::POWER),
    ("V", 0, 1.0, Dimension::VOLTAGE),
    ("ohm", 0, 1.0, Dimension::RESISTANCE),
    ("Ohm", 0, 1.0, Dimension::RESISTANCE),
    ("Ω", 0, 1.0, Dimension::RESISTANCE),
    ("T", 0, 1.0, Dimension::FLUX_DENSITY),
    ("Hz", 0, 1.0, Dimension::FREQUENCY),
    ("rad", 0, 1.0, Dimension::ANGLE),
    ("deg", 0, PI / 180.0, Dimension::ANGLE),
    ("°", 0, PI / 180.0, Dimension::ANGLE),
];

const PREFIXES: &[(&str, i32)] = &[
    ("G", 9),
    ("M", 6),
    ("k", 3),
    ("c", -2),
    ("m", -3),
    ("u", -6),
    ("µ", -6),
    ("μ", -6),
    ("n", -9),
    ("p", -12),
];

/// A parsed unit expression: value_SI = number · 10^exponent · factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unit {
    pub exponent: i32,
    pub factor: f64,
    pub dimension: Dimension,
}

fn lookup(symbol: &str) -> Option<(i32, f64, Dimension)> {
    let find = |s: &str| {
        SYMBOLS
            .iter()
            .find(|(sym, ..)| *sym == s)
            .map(|&(_, e, f, d)| (e, f, d))
    };
    if let Some(hit) = find(symbol) {
        return Some(hit);
    }
    for (prefix, exp) in PREFIXES {
        if let Some(rest) = symbol.strip_prefix(prefix) {
            // no prefixes on non-metric or already-prefixed symbols
            if matches!(rest, "deg" | "°" | "min" | "kg" | "") {
                continue;
            }
            if let Some((e, f, d)) = find(rest) {
                return Some((e + exp, f, d));
            }
        }
    }
    None
}

/// Parses a unit expression such as `N/m`, `kg/m^3`, `uN*m`, `mm^2`.
/// Each `/` divides by the single factor that follows it.
pub fn parse_unit(expr: &str) -> Result<Unit, UnitError> {
    let expr = expr.trim();
    let mut unit = Unit {
        exponent: 0,
        factor: 1.0,
        dimension: Dimension::NONE,
    };
    if expr.is_empty() {
        return Ok(unit);
    }
    let mut sign = 1i8;
    let mut token = String::new();

    let mut flush = |token: &mut String, sign: i8| -> Result<(), UnitError> {
        if token.is_empty() {
            return Err(UnitError::Malformed(expr.to_string()));
        }
        let (symbol, power) = match token.split_once('^') {
            Some((s, p)) => {
                let p: i8 = p
                    .parse()
                    .map_err(|_| UnitError::Malformed(expr.to_string()))?;
                (s, p)
            }
            None => (token.as_str(), 1),
        };
        let (e, f, d) = lookup(symbol).ok_or_else(|| UnitError::UnknownUnit(symbol.to_string()))?;
        let p = power * sign;
        unit.exponent += e * i32::from(p);
        unit.factor *= f.powi(i32::from(p));
        unit.dimension = unit.dimension.mul(d, p);
        token.clear();
        Ok(())
    };

    for ch in expr.chars() {
        match ch {
            '*' | '·' | '/' => {
                flush(&mut token, sign)?;
                sign = if ch == '/' { -1 } else { 1 };
            }
            c if c.is_whitespace() => {}
            c => token.push(c),
        }
    }
    flush(&mut token, sign)?;
    Ok(unit)
}

/// Splits "7.5 mN" or "7.5mN" into its SI value and dimension. Decimal
/// prefixes are folded into the exponent before the number is parsed, so
/// "25.4 um" gives exactly the literal 25.4e-6.
pub fn parse_quantity(input: &str) -> Result<Quantity, UnitError> {
    let s = input.trim();
    let mut split = None;
    for (i, _) in s
        .char_indices()
        .skip(1)
        .chain(std::iter::once((s.len(), ' ')))
    {
        if s[..i].parse::<f64>().is_ok() {
            split = Some(i);
        }
    }
    let end = split.ok_or_else(|| UnitError::NoNumber(input.to_string()))?;
    let number = &s[..end];
    if !number.parse::<f64>().is_ok_and(f64::is_finite) {
        return Err(UnitError::NotFinite(input.to_string()));
    }
    let unit = parse_unit(&s[end..])?;
    let (mantissa, exp) = match number.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| UnitError::NoNumber(input.to_string()))?,
        ),
        None => (number, 0),
    };
    let scaled: f64 = format!("{mantissa}e{}", exp + unit.exponent)
        .parse()
        .map_err(|_| UnitError::NoNumber(input.to_string()))?;
    let value = if unit.factor == 1.0 {
        scaled
    } else {
        scaled * unit.factor
    };
    if !value.is_finite() {
        return Err(UnitError::NotFinite(input.to_string()));
    }
    Ok(Quantity {
        value,
        dimension: unit.dimension,
    })
}

/// Parses and checks the dimension in one go.
pub fn parse_as(input: &str, expected: Dimension) -> Result<f64, UnitError> {
    let q = parse_quantity(input)?;
    if q.dimension != expected {
        return Err(UnitError::WrongDimension {
            input: input.to_string(),
            expected: expected.to_string(),
            found: q.dimension.to_string(),
        });
    }
    Ok(q.value)
}

/// SI text form that parses back to exactly `value`.
pub fn format_si(value: f64, dimension: Dimension) -> String {
    match dimension.si_unit() {
        "" => format!("{value}"),
        unit => format!("{value} {unit}"),
    }
}
