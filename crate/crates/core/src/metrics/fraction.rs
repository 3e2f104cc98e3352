use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// An exact, unreduced ratio such as `757/821`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fraction {
    pub num: u64,
    pub den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Self {
        Fraction { num, den }
    }

    pub fn value(&self) -> f64 {
        if self.den == 0 {
            0.0
        } else {
            self.num as f64 / self.den as f64
        }
    }

    /// Percentage rounded to one decimal place, e.g. `"92.2%"`.
    pub fn percent(&self) -> String {
        format!("{:.1}%", self.value() * 100.0)
    }

    /// Exact comparison of `num/den` against `other` by cross multiplication.
    pub fn same_ratio(&self, other: &Fraction) -> bool {
        u128::from(self.num) * u128::from(other.den) == u128::from(other.num) * u128::from(self.den)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}/{})", self.percent(), self.num, self.den)
    }
}

impl Serialize for Fraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Fraction", 3)?;
        s.serialize_field("num", &self.num)?;
        s.serialize_field("den", &self.den)?;
        s.serialize_field("value", &self.value())?;
        s.end()
    }
}
