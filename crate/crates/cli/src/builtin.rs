use jetcalc::{BuiltinSpec, Error, Field, Result};

/// `Q`, `Fp:7`.
pub fn parse_field(s: &str) -> Result<Field> {
    match s.trim() {
        "Q" | "q" => Ok(Field::Rationals),
        other => {
            let p = other
                .strip_prefix("Fp:")
                .or_else(|| other.strip_prefix("GF:"))
                .and_then(|p| p.parse::<u64>().ok())
                .ok_or_else(|| Error::Malformed(format!("unknown field {other:?}; use Q or Fp:<prime>")))?;
            Field::prime(p)
        }
    }
}

/// `field`, `dual`, `matrixN`, `truncN` (`K[x]/(x^N)`), `kxk`, and sums joined by `+`.
pub fn parse_builtin(name: &str) -> Result<BuiltinSpec> {
    let parts: Vec<&str> = name.split('+').map(str::trim).collect();
    let mut specs = parts.iter().map(|p| parse_atom(p)).collect::<Result<Vec<_>>>()?.into_iter();
    let first = specs.next().ok_or_else(|| Error::Malformed("empty algebra name".into()))?;
    Ok(specs.fold(first, |acc, s| BuiltinSpec::DirectSum(Box::new(acc), Box::new(s))))
}

fn parse_atom(s: &str) -> Result<BuiltinSpec> {
    let number = |prefix: &str| s.strip_prefix(prefix).and_then(|n| n.parse::<usize>().ok()).filter(|&n| n > 0);
    match s {
        "field" => Ok(BuiltinSpec::Field),
        "dual" => Ok(BuiltinSpec::DualNumbers),
        "kxk" => Ok(BuiltinSpec::DirectSum(Box::new(BuiltinSpec::Field), Box::new(BuiltinSpec::Field))),
        _ => {
            if let Some(n) = number("matrix") {
                Ok(BuiltinSpec::Matrix(n))
            } else if let Some(n) = number("trunc") {
                Ok(BuiltinSpec::Truncated(n))
            } else {
                Err(Error::Malformed(format!("unknown builtin algebra {s:?}")))
            }
        }
    }
}
