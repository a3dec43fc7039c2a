//! Composite Gauss–Legendre rules on uniform panels.

use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

/// Nodes per panel used by all L2 computations.
pub const NODES_PER_PANEL: usize = 32;

fn rule32() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NODES_PER_PANEL).expect("degree >= 2"))
}

/// Integrates `f` over `[a, b]` split into `panels` equal panels, 32 nodes each.
pub fn composite<F>(a: f64, b: f64, panels: usize, mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let rule = rule32();
    let mut sum = KahanSum::default();
    for p in 0..panels {
        let lo = a + p as f64 * h;
        let hi = if p + 1 == panels { b } else { lo + h };
        sum.add(rule.integrate(lo, hi, &mut f));
    }
    sum.value()
}

/// Integrates over consecutive panels delimited by `breaks` (sorted).
pub fn over_breaks<F>(breaks: &[f64], mut f: F) -> f64
where
    F: FnMut(f64) -> f64,
{
    let rule = rule32();
    let mut sum = KahanSum::default();
    for w in breaks.windows(2) {
        sum.add(rule.integrate(w[0], w[1], &mut f));
    }
    sum.value()
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}
