//! The discrete Heisenberg group generated by `a`, `b` with central commutator.
//!
//! Elements are kept in the integer normal form `(x, y, z)` of upper
//! triangular unipotent matrices, with product
//! `(x,y,z)(x',y',z') = (x+x', y+y', z+z'+x y')`. The generators are
//! `a = (1,0,0)` and `b = (0,1,0)`, so `c = [a,b] = aba⁻¹b⁻¹ = (0,0,1)`.

use std::collections::HashMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupPoint;

/// Default cap on the number of stored ball elements.
pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeElement {
    pub x: i64,
    pub y: i64,
    pub z: i64,
}

impl LatticeElement {
    pub const IDENTITY: LatticeElement = LatticeElement { x: 0, y: 0, z: 0 };
    pub const A: LatticeElement = LatticeElement { x: 1, y: 0, z: 0 };
    pub const B: LatticeElement = LatticeElement { x: 0, y: 1, z: 0 };
    pub const A_INV: LatticeElement = LatticeElement { x: -1, y: 0, z: 0 };
    pub const B_INV: LatticeElement = LatticeElement { x: 0, y: -1, z: 0 };
    /// The commutator `c = [a, b]`.
    pub const C: LatticeElement = LatticeElement { x: 0, y: 0, z: 1 };

    pub const GENERATORS: [LatticeElement; 4] = [Self::A, Self::B, Self::A_INV, Self::B_INV];

    pub fn new(x: i64, y: i64, z: i64) -> Self {
        LatticeElement { x, y, z }
    }

    pub fn multiply(&self, other: &LatticeElement) -> Result<LatticeElement> {
        let x = self.x.checked_add(other.x).ok_or(Error::Overflow)?;
        let y = self.y.checked_add(other.y).ok_or(Error::Overflow)?;
        let xy = self.x.checked_mul(other.y).ok_or(Error::Overflow)?;
        let z = self
            .z
            .checked_add(other.z)
            .and_then(|s| s.checked_add(xy))
            .ok_or(Error::Overflow)?;
        Ok(LatticeElement { x, y, z })
    }

    pub fn inverse(&self) -> Result<LatticeElement> {
        let xy = self.x.checked_mul(self.y).ok_or(Error::Overflow)?;
        Ok(LatticeElement {
            x: self.x.checked_neg().ok_or(Error::Overflow)?,
            y: self.y.checked_neg().ok_or(Error::Overflow)?,
            z: xy.checked_sub(self.z).ok_or(Error::Overflow)?,
        })
    }

    /// `c^k`.
    pub fn central(k: i64) -> Self {
        LatticeElement { x: 0, y: 0, z: k }
    }

    pub fn commutator(g: &LatticeElement, h: &LatticeElement) -> Result<LatticeElement> {
        g.multiply(h)?
            .multiply(&g.inverse()?)?
            .multiply(&h.inverse()?)
    }

    /// Image in `H_1` under the homomorphism with `a ↦ (1,0,0)`, `b ↦ (0,1,0)`.
    ///
    /// Writing `(x,y,z) = a^x b^y c^{z-xy}` gives `(x, y, 2xy - 4z)`; the central
    /// coordinate of the image lattice lies in `2xy + 4Z`.
    pub fn to_continuous(&self) -> GroupPoint {
        let (x, y, z) = (self.x as f64, self.y as f64, self.z as f64);
        GroupPoint::h1(x, y, 2.0 * x * y - 4.0 * z)
    }
}

/// A word-metric ball around the identity, in deterministic BFS order.
#[derive(Debug, Clone)]
pub struct WordBall {
    radius: u32,
    elements: Vec<LatticeElement>,
    layer_ends: Vec<usize>,
    dist: HashMap<LatticeElement, u32>,
}

impl WordBall {
    /// Exact ball `B(r)`, built layer by layer; layers are sorted by `(x, y, z)`.
    pub fn build(radius: u32, budget: usize) -> Result<WordBall> {
        let mut dist = HashMap::new();
        dist.insert(LatticeElement::IDENTITY, 0u32);
        let mut elements = vec![LatticeElement::IDENTITY];
        let mut layer_ends = vec![1usize];
        let mut start = 0usize;
        for d in 1..=radius {
            let end = elements.len();
            let mut next: Vec<LatticeElement> = Vec::new();
            for g in &elements[start..end] {
                for s in &LatticeElement::GENERATORS {
                    let h = g.multiply(s)?;
                    if !dist.contains_key(&h) {
                        next.push(h);
                    }
                }
            }
            next.sort_unstable();
            next.dedup();
            if elements.len() + next.len() > budget {
                return Err(Error::BudgetExceeded { budget });
            }
            for h in &next {
                dist.insert(*h, d);
            }
            elements.extend(next);
            layer_ends.push(elements.len());
            start = end;
        }
        Ok(WordBall {
            radius,
            elements,
            layer_ends,
            dist,
        })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Elements ordered by `(layer, x, y, z)`.
    pub fn elements(&self) -> &[LatticeElement] {
        &self.elements
    }

    /// `|B(r)|` for every `r <= radius`.
    pub fn sizes(&self) -> &[usize] {
        &self.layer_ends
    }

    pub fn size_at(&self, r: u32) -> Option<usize> {
        self.layer_ends.get(r as usize).copied()
    }

    /// Word length of `g`, or `None` if it exceeds the ball radius.
    pub fn distance_from_identity(&self, g: &LatticeElement) -> Option<u32> {
        self.dist.get(g).copied()
    }

    /// `d_W(g, h) = |g⁻¹h|` looked up in the ball.
    pub fn distance(&self, g: &LatticeElement, h: &LatticeElement) -> Result<WordDistance> {
        let t = g.inverse()?.multiply(h)?;
        Ok(match self.distance_from_identity(&t) {
            Some(d) => WordDistance::Exact(d),
            None => WordDistance::Unresolved {
                beyond: self.radius,
            },
        })
    }

    pub fn iter_with_distance(&self) -> impl Iterator<Item = (LatticeElement, u32)> + '_ {
        self.elements.iter().map(move |g| (*g, self.dist[g]))
    }

    /// JSON lines `{"x":..,"y":..,"z":..,"d":..}`, one element per line.
    pub fn write_jsonl<W: Write>(&self, out: &mut W) -> Result<()> {
        write_elements_jsonl(self.iter_with_distance(), out)
    }
}

pub fn write_elements_jsonl<W: Write>(
    items: impl Iterator<Item = (LatticeElement, u32)>,
    out: &mut W,
) -> Result<()> {
    for (g, d) in items {
        writeln!(
            out,
            "{{\"x\":{},\"y\":{},\"z\":{},\"d\":{}}}",
            g.x, g.y, g.z, d
        )?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum WordDistance {
    Exact(u32),
    /// The distance exceeds the explored radius.
    Unresolved {
        beyond: u32,
    },
}

impl WordDistance {
    pub fn exact(self) -> Option<u32> {
        match self {
            WordDistance::Exact(d) => Some(d),
            WordDistance::Unresolved { .. } => None,
        }
    }
}

/// `d_W(g, h)` by bidirectional BFS, exploring at most `max_radius` in total.
pub fn word_distance(
    g: &LatticeElement,
    h: &LatticeElement,
    max_radius: u32,
) -> Result<WordDistance> {
    let target = g.inverse()?.multiply(h)?;
    if target == LatticeElement::IDENTITY {
        return Ok(WordDistance::Exact(0));
    }
    let mut seen_a: HashMap<LatticeElement, u32> = HashMap::from([(LatticeElement::IDENTITY, 0)]);
    let mut seen_b: HashMap<LatticeElement, u32> = HashMap::from([(target, 0)]);
    let mut front_a = vec![LatticeElement::IDENTITY];
    let mut front_b = vec![target];
    let (mut ra, mut rb) = (0u32, 0u32);
    while ra + rb < max_radius {
        // expand the smaller frontier by one full level
        let expand_a = front_a.len() <= front_b.len();
        let (front, seen, other, level) = if expand_a {
            (&mut front_a, &mut seen_a, &seen_b, ra + 1)
        } else {
            (&mut front_b, &mut seen_b, &seen_a, rb + 1)
        };
        let mut best: Option<u32> = None;
        let mut next = Vec::new();
        for e in front.iter() {
            for s in &LatticeElement::GENERATORS {
                let f = e.multiply(s)?;
                if let Some(d_other) = other.get(&f) {
                    let total = level + d_other;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                if !seen.contains_key(&f) {
                    seen.insert(f, level);
                    next.push(f);
                }
            }
        }
        if let Some(d) = best {
            return Ok(if d <= max_radius {
                WordDistance::Exact(d)
            } else {
                WordDistance::Unresolved { beyond: max_radius }
            });
        }
        *front = next;
        if expand_a {
            ra += 1;
        } else {
            rb += 1;
        }
    }
    Ok(WordDistance::Unresolved { beyond: max_radius })
}

/// The `n`-point set sandwiched between two word balls.
#[derive(Debug, Clone, Serialize)]
pub struct PointSet {
    pub elements: Vec<LatticeElement>,
    /// Word lengths of `elements`.
    pub lengths: Vec<u32>,
    /// Largest `r` with `B(r) ⊂ X_n`.
    pub inner_radius: u32,
    /// Smallest `r` with `X_n ⊂ B(r)`.
    pub outer_radius: u32,
}

/// First `n` elements of the ball in BFS order.
pub fn build_xn(n: usize, budget: usize) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::InvalidParameter("X_n needs n >= 1".into()));
    }
    let mut r = 0u32;
    let ball = loop {
        let ball = WordBall::build(r, budget)?;
        if ball.len() >= n {
            break ball;
        }
        r += 1;
    };
    let elements = ball.elements()[..n].to_vec();
    let lengths: Vec<u32> = elements.iter().map(|g| ball.dist[g]).collect();
    let outer_radius = *lengths.last().expect("n >= 1");
    let inner_radius = ball
        .sizes()
        .iter()
        .rposition(|&s| s <= n)
        .map(|i| i as u32)
        .unwrap_or(0);
    Ok(PointSet {
        elements,
        lengths,
        inner_radius,
        outer_radius,
    })
}

/// All pairwise word distances of `points` (row-major upper triangle, `i < j`),
/// resolved in a ball of radius `twice the largest word length`.
pub fn pairwise_word_distances(
    points: &[LatticeElement],
    budget: usize,
) -> Result<Vec<(usize, usize, u32)>> {
    let mut max_len = 0u32;
    for g in points {
        let d = word_distance(&LatticeElement::IDENTITY, g, 200)?
            .exact()
            .ok_or(Error::BudgetExceeded { budget })?;
        max_len = max_len.max(d);
    }
    let ball = WordBall::build(2 * max_len, budget)?;
    let rows: Vec<Result<Vec<(usize, usize, u32)>>> = (0..points.len())
        .into_par_iter()
        .map(|i| {
            ((i + 1)..points.len())
                .map(|j| {
                    let d = ball.distance(&points[i], &points[j])?;
                    Ok((i, j, d.exact().expect("ball radius covers all pairs")))
                })
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for row in rows {
        out.extend(row?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    pub exponent: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub radii: Vec<u32>,
    pub sizes: Vec<usize>,
}

/// Least-squares slope of `log |B(r)|` against `log r` over `r ∈ [r_max/4, r_max]`.
pub fn growth_fit(r_max: u32, budget: usize) -> Result<GrowthFit> {
    if r_max < 8 {
        return Err(Error::InvalidParameter(format!(
            "growth fit needs r_max >= 8, got {r_max}"
        )));
    }
    let ball = WordBall::build(r_max, budget)?;
    let lo = r_max.div_ceil(4);
    let radii: Vec<u32> = (lo..=r_max).collect();
    let sizes: Vec<usize> = radii.iter().map(|&r| ball.sizes()[r as usize]).collect();
    let xs: Vec<f64> = radii.iter().map(|&r| (r as f64).ln()).collect();
    let ys: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let (slope, intercept) = least_squares(&xs, &ys);
    let rss: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let residual = (rss / xs.len() as f64).sqrt();
    Ok(GrowthFit {
        exponent: slope,
        residual,
        radii,
        sizes,
    })
}

pub(crate) fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
