//! State specifications: `name:params` presets or a path to a JSON record.

use anyhow::{anyhow, bail, Context, Result};
use unentangled::states::{w_tilde, NoiseFamily};
use unentangled::tensor::exchange::MatrixRecord;
use unentangled::tensor::{DensityMatrix, SiteDims};

pub const GRAMMAR: &str = "\
State specs:
  ghz:N[:p=P]             p|GHZ_N><GHZ_N| + (1-p) I/2^N          (p defaults to 1)
  w:N:d[:p=P,q=Q]         p|W><W| + q|W~><W~| + (1-p-q) I/d^N   (p=1, q=0 by default)
  wtilde:N:d[:p=P]        p|W~><W~| + (1-p) I/d^N
  mixed:I/D               maximally mixed on log2(D) qubits
  mixed:I/d^N             maximally mixed on N sites of dimension d
  <path>                  JSON {dims, entries: [[re,im],...]}, either a D x D
                          density matrix or a length-D state vector";

fn int(field: &str, what: &str) -> Result<usize> {
    field.trim().parse().map_err(|_| anyhow!("{what} must be a positive integer, got {field:?}"))
}

fn weights(field: Option<&str>, allowed: &[&str]) -> Result<Vec<Option<f64>>> {
    let mut out = vec![None; allowed.len()];
    let Some(field) = field else { return Ok(out) };
    for kv in field.split(',').filter(|s| !s.is_empty()) {
        let (key, value) = kv.split_once('=').ok_or_else(|| anyhow!("expected key=value, got {kv:?}"))?;
        let slot = allowed.iter().position(|a| *a == key.trim()).ok_or_else(|| anyhow!("unknown parameter {key:?}"))?;
        let v: f64 = value.trim().parse().map_err(|_| anyhow!("{key} must be a number, got {value:?}"))?;
        out[slot] = Some(v);
    }
    Ok(out)
}

fn check_cap(dims: &[usize], cap: usize) -> Result<()> {
    SiteDims::with_cap(dims.to_vec(), cap)?;
    Ok(())
}

fn mixed(arg: &str, cap: usize) -> Result<DensityMatrix> {
    let body = arg.strip_prefix("I/").ok_or_else(|| anyhow!("mixed state spec must look like I/D or I/d^N"))?;
    let dims = match body.split_once('^') {
        Some((d, n)) => vec![int(d, "d")?; int(n, "N")?],
        None => {
            let total = int(body, "D")?;
            if !total.is_power_of_two() || total < 4 {
                bail!("I/{total} is ambiguous; write I/d^N");
            }
            vec![2; total.trailing_zeros() as usize]
        }
    };
    let dims = SiteDims::with_cap(dims, cap)?;
    Ok(DensityMatrix::maximally_mixed(&dims))
}

/// Resolves a state spec to a density matrix, honouring the dimension cap.
pub fn parse_state(spec: &str, cap: usize) -> Result<DensityMatrix> {
    let mut parts = spec.splitn(4, ':');
    let head = parts.next().unwrap_or_default();
    let rest: Vec<&str> = parts.collect();
    let rho = match head {
        "ghz" => {
            let n = int(rest.first().ok_or_else(|| anyhow!("ghz needs N"))?, "N")?;
            let [p] = weights(rest.get(1).copied(), &["p"])?[..] else { unreachable!() };
            check_cap(&vec![2; n], cap)?;
            NoiseFamily::ghz_white_noise(n)?.eval(&[p.unwrap_or(1.0)])?
        }
        "w" | "wtilde" => {
            let n = int(rest.first().ok_or_else(|| anyhow!("{head} needs N"))?, "N")?;
            let d = int(rest.get(1).ok_or_else(|| anyhow!("{head} needs d"))?, "d")?;
            check_cap(&vec![d; n], cap)?;
            if head == "w" {
                let w = weights(rest.get(2).copied(), &["p", "q"])?;
                NoiseFamily::w_pair(n, d)?.eval(&[w[0].unwrap_or(1.0), w[1].unwrap_or(0.0)])?
            } else {
                let [p] = weights(rest.get(2).copied(), &["p"])?[..] else { unreachable!() };
                let psi = w_tilde(n, d)?;
                NoiseFamily::new(psi.dims().clone(), vec![psi], "wtilde")?.eval(&[p.unwrap_or(1.0)])?
            }
        }
        "mixed" => mixed(rest.join(":").as_str(), cap)?,
        _ => return from_file(spec, cap),
    };
    if rest.len() > 3 {
        bail!("too many fields in {spec:?}");
    }
    Ok(rho)
}

fn from_file(path: &str, cap: usize) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("{path:?} is neither a preset nor a readable file"))?;
    let rec: MatrixRecord = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let total: usize = rec.dims.iter().product();
    if rec.entries.len() == total && total > 1 {
        Ok(rec.to_pure(cap)?.density())
    } else {
        Ok(rec.to_density(cap).with_context(|| format!("reading {path}"))?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        assert_eq!(parse_state("ghz:3:p=0.5", 4096).unwrap().dims().total(), 8);
        assert_eq!(parse_state("w:3:3:p=0.2,q=0.1", 4096).unwrap().dims().as_slice(), &[3, 3, 3]);
        assert_eq!(parse_state("mixed:I/256", 4096).unwrap().dims().n(), 8);
        assert_eq!(parse_state("mixed:I/4^5", 4096).unwrap().dims().total(), 1024);
        assert!(parse_state("ghz:8:p=1.5", 4096).is_err());
        assert!(parse_state("ghz:8:r=0.1", 4096).is_err());
        assert!(parse_state("mixed:I/12", 4096).is_err());
        assert!(parse_state("ghz:8", 128).is_err());
    }

    #[test]
    fn ghz_preset_matches_family() {
        let got = parse_state("ghz:2:p=0.3", 4096).unwrap();
        let want = NoiseFamily::ghz_white_noise(2).unwrap().eval(&[0.3]).unwrap();
        assert_eq!(got.matrix(), want.matrix());
    }
}
