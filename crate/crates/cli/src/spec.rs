//! Parsing of distribution specs written as `kind:params`.

use anyhow::{anyhow, bail, Context, Result};
use osinfo::{ContinuousDist, DiscreteDist, Parent};

pub const DIST_HELP: &str = "\
Distribution specs:
  bernoulli:p                  support {0,1}, P(1)=p
  salt-pepper:x,rho,rho1       0 w.p. rho*rho1, 255 w.p. rho*(1-rho1), x otherwise
  discrete:v=p,v=p,...         arbitrary finite law
  uniform:a,b                  continuous uniform on (a,b)
  normal:mean,var              Gaussian
  gmix:mean/var/w,...          Gaussian mixture
  cauchy:x0,gamma              Cauchy with location x0 and scale gamma";

fn numbers(args: &str, expected: usize, kind: &str) -> Result<Vec<f64>> {
    let vals = args
        .split(',')
        .map(|t| t.trim().parse::<f64>().with_context(|| format!("bad number '{t}' in {kind} spec")))
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != expected {
        bail!("{kind} takes {expected} parameter(s), got {}", vals.len());
    }
    Ok(vals)
}

/// Parses a parent distribution spec.
pub fn parse_parent(spec: &str) -> Result<Parent> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("distribution spec '{spec}' must look like kind:params"))?;
    let kind = kind.trim().to_ascii_lowercase();
    let parent: Parent = match kind.as_str() {
        "bernoulli" => DiscreteDist::bernoulli(numbers(args, 1, &kind)?[0])?.into(),
        "salt-pepper" | "saltpepper" | "sp" => {
            let v = numbers(args, 3, &kind)?;
            DiscreteDist::salt_pepper(v[0], v[1], v[2])?.into()
        }
        "discrete" => {
            let (mut support, mut probs) = (Vec::new(), Vec::new());
            for item in args.split(',') {
                let (v, p) = item
                    .split_once('=')
                    .ok_or_else(|| anyhow!("discrete entries must be value=prob, got '{item}'"))?;
                support.push(v.trim().parse::<f64>().with_context(|| format!("bad value '{v}'"))?);
                probs.push(p.trim().parse::<f64>().with_context(|| format!("bad probability '{p}'"))?);
            }
            DiscreteDist::new(support, probs)?.into()
        }
        _ => parse_continuous_kind(&kind, args)?.into(),
    };
    Ok(parent)
}

/// Parses a continuous distribution spec.
pub fn parse_continuous(spec: &str) -> Result<ContinuousDist> {
    let (kind, args) = spec
        .split_once(':')
        .ok_or_else(|| anyhow!("distribution spec '{spec}' must look like kind:params"))?;
    parse_continuous_kind(&kind.trim().to_ascii_lowercase(), args)
}

fn parse_continuous_kind(kind: &str, args: &str) -> Result<ContinuousDist> {
    Ok(match kind {
        "uniform" => {
            let v = numbers(args, 2, kind)?;
            ContinuousDist::uniform(v[0], v[1])?
        }
        "normal" | "gaussian" => {
            let v = numbers(args, 2, kind)?;
            ContinuousDist::normal(v[0], v[1])?
        }
        "cauchy" => {
            let v = numbers(args, 2, kind)?;
            ContinuousDist::cauchy(v[0], v[1])?
        }
        "gmix" => {
            let (mut means, mut vars, mut weights) = (Vec::new(), Vec::new(), Vec::new());
            for comp in args.split(',') {
                let parts: Vec<&str> = comp.split('/').collect();
                if parts.len() != 3 {
                    bail!("gmix components must be mean/var/weight, got '{comp}'");
                }
                let num = |t: &str| t.trim().parse::<f64>().with_context(|| format!("bad number '{t}' in gmix spec"));
                means.push(num(parts[0])?);
                vars.push(num(parts[1])?);
                weights.push(num(parts[2])?);
            }
            ContinuousDist::gaussian_mixture(&means, &vars, &weights)?
        }
        other => bail!("unknown distribution kind '{other}'"),
    })
}

/// Parses `a,b` into a pair of reals.
pub fn parse_pair(s: &str) -> Result<(f64, f64)> {
    let v = numbers(s, 2, "pair")?;
    Ok((v[0], v[1]))
}
