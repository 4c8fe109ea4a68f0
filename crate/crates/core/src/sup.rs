//! Suprema of one-dimensional functions over exponent intervals: a fixed grid
//! followed by golden-section refinement around the best node.

/// Coordinate in which grids are laid out and refinement runs: `ln p` on
/// bounded intervals, `1/p` on unbounded ones (so `p = inf` sits at `t = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chart {
    Log,
    Reciprocal,
}

impl Chart {
    pub fn to_t(self, p: f64) -> f64 {
        match self {
            Chart::Log => p.ln(),
            Chart::Reciprocal => {
                if p.is_infinite() {
                    0.0
                } else {
                    1.0 / p
                }
            }
        }
    }

    pub fn to_p(self, t: f64) -> f64 {
        match self {
            Chart::Log => t.exp(),
            Chart::Reciprocal => {
                if t <= 0.0 {
                    f64::INFINITY
                } else {
                    1.0 / t
                }
            }
        }
    }

    /// `n` points from `lo` to `hi` (both included), ascending in `p`,
    /// evenly spaced in this chart.
    pub fn nodes(self, lo: f64, hi: f64, n: usize) -> Vec<f64> {
        if n <= 1 || lo == hi {
            return vec![lo];
        }
        let (ta, tb) = (self.to_t(lo), self.to_t(hi));
        let mut out: Vec<f64> = (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                self.to_p(ta + (tb - ta) * s)
            })
            .collect();
        out[0] = lo;
        out[n - 1] = hi;
        out
    }
}

pub const REFINE_ROUNDS: usize = 3;
const GOLDEN_STEPS: usize = 24;
const INV_PHI: f64 = 0.618_033_988_749_894_8;

fn key(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Golden-section search for a maximum of `g(t)` on `[a, b]`.
fn golden_max(g: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut gc = key(g(c));
    let mut gd = key(g(d));
    for _ in 0..GOLDEN_STEPS {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - INV_PHI * (b - a);
            gc = key(g(c));
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + INV_PHI * (b - a);
            gd = key(g(d));
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Result of a supremum search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sup {
    pub value: f64,
    pub arg: f64,
}

/// Supremum of `f` given its values at ascending `nodes`.
///
/// The best node is refined by [`REFINE_ROUNDS`] golden-section passes in the
/// chart coordinate, first between its grid neighbours and then in shrinking
/// brackets around the running best. NaN values are ignored. The result is
/// never below the best node value.
pub fn refine_max(chart: Chart, nodes: &[f64], values: &[f64], f: &dyn Fn(f64) -> f64) -> Sup {
    debug_assert_eq!(nodes.len(), values.len());
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if key(v) > key(values[best]) {
            best = i;
        }
    }
    let mut out = Sup {
        value: key(values[best]),
        arg: nodes[best],
    };
    if nodes.len() < 2 || out.value.is_infinite() {
        return out;
    }
    let t_of = |i: usize| chart.to_t(nodes[i]);
    let lo_i = best.saturating_sub(1);
    let hi_i = (best + 1).min(nodes.len() - 1);
    let (mut a, mut b) = {
        let (x, y) = (t_of(lo_i), t_of(hi_i));
        (x.min(y), x.max(y))
    };
    let (outer_a, outer_b) = (a, b);
    let g = |t: f64| f(chart.to_p(t));
    for _ in 0..REFINE_ROUNDS {
        if !(b > a) {
            break;
        }
        let (t, v) = golden_max(&g, a, b);
        if v > out.value {
            out = Sup {
                value: v,
                arg: chart.to_p(t),
            };
        }
        let centre = chart.to_t(out.arg);
        let half = (b - a) / 16.0;
        a = (centre - half).max(outer_a);
        b = (centre + half).min(outer_b);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_hit_endpoints() {
        let n = Chart::Log.nodes(1.0, 7.0, 9);
        assert_eq!((n[0], n[8]), (1.0, 7.0));
        assert!(n.windows(2).all(|w| w[0] < w[1]));
        let n = Chart::Reciprocal.nodes(2.0, f64::INFINITY, 5);
        assert_eq!(n, vec![2.0, 1.0 / 0.375, 4.0, 8.0, f64::INFINITY]);
        assert_eq!(Chart::Log.nodes(3.0, 3.0, 10), vec![3.0]);
    }

    #[test]
    fn refines_interior_maximum() {
        // exp(-2/p)/p peaks at p = 2 with value 1/(2e).
        let f = |p: f64| (-2.0 / p).exp() / p;
        let nodes = Chart::Reciprocal.nodes(1.0, f64::INFINITY, 17);
        let values: Vec<f64> = nodes
            .iter()
            .map(|&p| if p.is_infinite() { 0.0 } else { f(p) })
            .collect();
        let s = refine_max(Chart::Reciprocal, &nodes, &values, &|p| f(p));
        let exact = (-1.0f64).exp() / 2.0;
        assert!((s.value - exact).abs() <= 1e-12 * exact);
        assert!((s.arg - 2.0).abs() <= 1e-4);
        assert!(s.value <= exact * (1.0 + 1e-15));
    }

    #[test]
    fn boundary_maximum_is_kept() {
        let nodes = Chart::Log.nodes(2.0, 4.0, 5);
        let values: Vec<f64> = nodes.iter().map(|&p| 16f64.powf(1.0 / p)).collect();
        let s = refine_max(Chart::Log, &nodes, &values, &|p| 16f64.powf(1.0 / p));
        assert_eq!(s.value, 4.0);
        assert_eq!(s.arg, 2.0);
    }

    #[test]
    fn ignores_nan() {
        let nodes = [1.0, 2.0, 3.0];
        let s = refine_max(Chart::Log, &nodes, &[f64::NAN, 1.0, 0.5], &|_| f64::NAN);
        assert_eq!(s.value, 1.0);
    }
}
