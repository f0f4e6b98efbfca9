//! Field selection. Every computation is generic over the coefficient field;
//! `with_field!` instantiates it for the chosen one.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Q,
    Fp(u64),
}

pub const PRIMES: [u64; 3] = [2147483647, 1073741789, 32003];

impl FieldMode {
    pub fn parse(s: &str, probabilistic: bool) -> Result<Self, String> {
        if s == "q" || s == "Q" {
            return Ok(FieldMode::Q);
        }
        let Some(p) = s.strip_prefix("fp:") else {
            return Err(format!("unknown field {s:?}; use q or fp:<p>"));
        };
        let p: u64 = p.parse().map_err(|_| format!("bad prime in {s:?}"))?;
        if !PRIMES.contains(&p) {
            return Err(format!("prime {p} is not supported; choose one of {PRIMES:?}"));
        }
        if !probabilistic {
            return Err("results over a prime field are probabilistic; pass --probabilistic to accept".into());
        }
        Ok(FieldMode::Fp(p))
    }

    pub fn name(&self) -> String {
        match self {
            FieldMode::Q => "q".into(),
            FieldMode::Fp(p) => format!("fp:{p}"),
        }
    }

    pub fn probabilistic(&self) -> bool {
        matches!(self, FieldMode::Fp(_))
    }
}

macro_rules! with_field {
    ($mode:expr, $F:ident => $body:expr) => {
        match $mode {
            $crate::field::FieldMode::Q => {
                type $F = weylres::Rational;
                $body
            }
            $crate::field::FieldMode::Fp(2147483647) => {
                type $F = weylres::Fp<2147483647>;
                $body
            }
            $crate::field::FieldMode::Fp(1073741789) => {
                type $F = weylres::Fp<1073741789>;
                $body
            }
            $crate::field::FieldMode::Fp(32003) => {
                type $F = weylres::Fp<32003>;
                $body
            }
            $crate::field::FieldMode::Fp(p) => unreachable!("prime {p} rejected at parse time"),
        }
    };
}
pub(crate) use with_field;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!(FieldMode::parse("q", false), Ok(FieldMode::Q));
        assert!(FieldMode::parse("fp:32003", false).is_err());
        assert_eq!(FieldMode::parse("fp:32003", true), Ok(FieldMode::Fp(32003)));
        assert!(FieldMode::parse("fp:7", true).is_err());
        assert!(FieldMode::parse("r", true).is_err());
    }
}
