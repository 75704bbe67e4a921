//! Closed-form map of the `(1/p, Re α)` plane: where `𝔪^α` is known to be
//! bounded on `L^p(H^n)`, known to be unbounded, or undecided.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Dimension;

/// `p_n = 4` for `n = 2` and `2(n+1)/(n-1)` otherwise.
pub fn p_critical(dim: Dimension) -> f64 {
    let n = dim.n() as f64;
    if dim.n() == 2 {
        4.0
    } else {
        2.0 * (n + 1.0) / (n - 1.0)
    }
}

/// A boundary value and whether the bounding inequality is strict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Boundary {
    pub alpha: f64,
    /// For necessary bounds: `true` when boundedness needs `α > alpha`
    /// (so `α = alpha` is excluded), `false` when `α >= alpha` suffices to
    /// escape the counterexamples. Sufficient bounds are always strict.
    pub strict: bool,
    pub name: &'static str,
}

fn check_inv_p(inv_p: f64) -> Result<()> {
    if !(0.0..1.0).contains(&inv_p) {
        return Err(Error::Config(format!("1/p must lie in [0, 1), got {inv_p}")));
    }
    Ok(())
}

/// Orders below this curve give unbounded maximal functions.
pub fn necessary_boundary(inv_p: f64, dim: Dimension) -> Result<Boundary> {
    check_inv_p(inv_p)?;
    let n = dim.n() as f64;
    if inv_p >= 0.5 {
        return Ok(Boundary {
            alpha: 1.0 - n + n * inv_p,
            strict: true,
            name: "necessary: α > 1-n+n/p",
        });
    }
    let slab = inv_p - (n - 1.0) / 2.0;
    let shell = -(n - 1.0) * inv_p;
    Ok(if slab >= shell {
        Boundary {
            alpha: slab,
            strict: false,
            name: "necessary: α >= 1/p-(n-1)/2",
        }
    } else {
        Boundary {
            alpha: shell,
            strict: false,
            name: "necessary: α >= -(n-1)/p",
        }
    })
}

/// Kohen's sufficient curve: `1-n+n/p` for `p <= 2`, `(2-n)/p` for `p > 2`.
pub fn kohen_sufficient_boundary(inv_p: f64, dim: Dimension) -> Result<Boundary> {
    check_inv_p(inv_p)?;
    let n = dim.n() as f64;
    Ok(if inv_p >= 0.5 {
        Boundary {
            alpha: 1.0 - n + n * inv_p,
            strict: true,
            name: "sufficient: α > 1-n+n/p",
        }
    } else {
        Boundary {
            alpha: (2.0 - n) * inv_p,
            strict: true,
            name: "Kohen sufficient: α > (2-n)/p",
        }
    })
}

/// Improved sufficient curve for `p > 2`:
/// `max{(2-n)/p - 1/(p p_n), (2-n)/p - (p-2)/(p p_n (p_n-2))}`;
/// Kohen's curve for `p <= 2`.
pub fn new_sufficient_boundary(inv_p: f64, dim: Dimension) -> Result<Boundary> {
    check_inv_p(inv_p)?;
    if inv_p >= 0.5 {
        return kohen_sufficient_boundary(inv_p, dim);
    }
    let n = dim.n() as f64;
    let pn = p_critical(dim);
    let base = (2.0 - n) * inv_p;
    let large_p = base - inv_p / pn;
    // (p-2)/p = 1 - 2/p
    let small_p = base - (1.0 - 2.0 * inv_p) / (pn * (pn - 2.0));
    Ok(if large_p >= small_p {
        Boundary {
            alpha: large_p,
            strict: true,
            name: "improved sufficient: α > (2-n)/p - 1/(p p_n)",
        }
    } else {
        Boundary {
            alpha: small_p,
            strict: true,
            name: "improved sufficient: α > (2-n)/p - (p-2)/(p p_n (p_n-2))",
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionQuery {
    pub dim: Dimension,
    /// `f64::INFINITY` stands for `p = ∞`.
    pub p: f64,
    pub alpha_re: f64,
}

impl RegionQuery {
    pub fn new(dim: Dimension, p: f64, alpha_re: f64) -> Result<Self> {
        if !(p > 1.0) || !alpha_re.is_finite() {
            return Err(Error::Config(format!(
                "need p > 1 and finite Re α, got p = {p}, α = {alpha_re}"
            )));
        }
        Ok(Self { dim, p, alpha_re })
    }

    pub fn inv_p(&self) -> f64 {
        if self.p.is_infinite() {
            0.0
        } else {
            1.0 / self.p
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    ProvenBounded,
    ProvenUnbounded,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub binding_constraint: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Bounded strictly above the sufficient curve; unbounded below the
/// necessary curve (on it too when that bound is strict); undecided in
/// between, including on the sufficient curve itself.
pub fn classify(q: &RegionQuery) -> Result<Verdict> {
    let x = q.inv_p();
    let a = q.alpha_re;
    let nec = necessary_boundary(x, q.dim)?;
    let suf = new_sufficient_boundary(x, q.dim)?;
    let note = q.p.is_infinite().then(|| {
        "p = ∞ classified with the p > 2 necessary bound, whose statement covers p <= ∞ in one form only".to_string()
    });
    let (status, binding_constraint) = if a > suf.alpha {
        (Status::ProvenBounded, suf.name.to_string())
    } else if a < nec.alpha || (nec.strict && a == nec.alpha) {
        (Status::ProvenUnbounded, nec.name.to_string())
    } else {
        (
            Status::Unknown,
            format!(
                "between [{}] at {:.6} and [{}] at {:.6}",
                nec.name, nec.alpha, suf.name, suf.alpha
            ),
        )
    };
    Ok(Verdict {
        status,
        binding_constraint,
        note,
    })
}

/// Named corner points of the region map.
pub fn anchors(dim: Dimension) -> Vec<(&'static str, f64, f64)> {
    let n = dim.n() as f64;
    let pn = p_critical(dim);
    vec![
        ("O", 0.0, 0.0),
        ("C", 1.0 / pn, (2.0 - n) / pn - 1.0 / (pn * pn)),
        ("D", (n - 1.0) / (2.0 * n), -(n - 1.0).powi(2) / (2.0 * n)),
        ("B", 0.5, (2.0 - n) / 2.0),
        ("A", 1.0, 1.0),
    ]
}

/// One row of the emitted curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRow {
    pub inv_p: f64,
    pub necessary: f64,
    pub kohen: f64,
    pub new_sufficient: f64,
}

pub fn region_rows(dim: Dimension, inv_p: &[f64]) -> Result<Vec<RegionRow>> {
    inv_p
        .iter()
        .map(|&x| {
            // + 0.0 turns the -0.0 produced at 1/p = 0 into 0.0
            Ok(RegionRow {
                inv_p: x,
                necessary: necessary_boundary(x, dim)?.alpha + 0.0,
                kohen: kohen_sufficient_boundary(x, dim)?.alpha + 0.0,
                new_sufficient: new_sufficient_boundary(x, dim)?.alpha + 0.0,
            })
        })
        .collect()
}

/// `# anchor` comment lines followed by `inv_p,necessary,kohen,new_sufficient` rows.
pub fn emit_region_csv<W: Write>(mut out: W, dim: Dimension, inv_p: &[f64]) -> Result<()> {
    writeln!(out, "# n = {}, p_n = {}", dim.n(), p_critical(dim))?;
    for (name, x, a) in anchors(dim) {
        writeln!(out, "# anchor {name} inv_p={x} alpha={a}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for row in region_rows(dim, inv_p)? {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_region_csv<R: Read>(input: R) -> Result<Vec<RegionRow>> {
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(input);
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dim(n: usize) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn critical_exponents() {
        assert_eq!(p_critical(dim(2)), 4.0);
        assert_eq!(p_critical(dim(3)), 4.0);
        assert_eq!(p_critical(dim(5)), 3.0);
    }

    #[test]
    fn boundary_values() {
        assert_eq!(necessary_boundary(0.25, dim(3)).unwrap().alpha, -0.5);
        assert!((necessary_boundary(1.0 / 3.0, dim(3)).unwrap().alpha + 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(kohen_sufficient_boundary(0.25, dim(3)).unwrap().alpha, -0.25);
        assert_eq!(kohen_sufficient_boundary(0.0, dim(3)).unwrap().alpha, 0.0);
        assert_eq!(new_sufficient_boundary(0.25, dim(3)).unwrap().alpha, -5.0 / 16.0);
        assert_eq!(new_sufficient_boundary(0.25, dim(2)).unwrap().alpha, -1.0 / 16.0);
        for n in 2..7 {
            let d = dim(n);
            let b = (2.0 - n as f64) / 2.0;
            let below = 0.5 - 1e-12;
            for f in [necessary_boundary, kohen_sufficient_boundary, new_sufficient_boundary] {
                assert!((f(0.5, d).unwrap().alpha - b).abs() < 1e-12);
                assert!((f(below, d).unwrap().alpha - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn classification_examples() {
        let v = |a: f64| classify(&RegionQuery::new(dim(3), 4.0, a).unwrap()).unwrap().status;
        assert_eq!(v(-0.2), Status::ProvenBounded);
        assert_eq!(v(-0.6), Status::ProvenUnbounded);
        assert_eq!(v(-0.4), Status::Unknown);
        // the closed necessary bound and the open sufficient bound leave their edges undecided
        assert_eq!(v(-0.5), Status::Unknown);
        assert_eq!(v(-5.0 / 16.0), Status::Unknown);
        let at_b = classify(&RegionQuery::new(dim(3), 2.0, -0.5).unwrap()).unwrap();
        assert_eq!(at_b.status, Status::ProvenUnbounded);
        let inf = classify(&RegionQuery::new(dim(3), f64::INFINITY, 0.1).unwrap()).unwrap();
        assert_eq!(inf.status, Status::ProvenBounded);
        assert!(inf.note.is_some());
    }

    #[test]
    fn csv_round_trip() {
        let grid: Vec<f64> = (1..20).map(|i| i as f64 / 20.0).collect();
        let mut buf = Vec::new();
        emit_region_csv(&mut buf, dim(3), &grid).unwrap();
        let rows = read_region_csv(buf.as_slice()).unwrap();
        assert_eq!(rows, region_rows(dim(3), &grid).unwrap());
    }
}
