//! Gauss–Legendre rules at arbitrary precision, cached per (points, bits).

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::Result;

use super::big::{log2_abs, Big, Prec};

/// Nodes on (−1, 1) and their weights.
#[derive(Debug)]
pub(crate) struct Rule {
    pub nodes: Vec<Big>,
    pub weights: Vec<Big>,
}

type Cache = Mutex<HashMap<(usize, usize), Arc<Rule>>>;

fn cache() -> &'static Cache {
    static C: OnceLock<Cache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

pub(crate) fn gauss_legendre(points: usize, prec: Prec) -> Arc<Rule> {
    let key = (points, prec.bits());
    if let Some(r) = cache().lock().expect("rule cache poisoned").get(&key) {
        return Arc::clone(r);
    }
    let rule = Arc::new(build(points, prec));
    cache()
        .lock()
        .expect("rule cache poisoned")
        .insert(key, Arc::clone(&rule));
    rule
}

/// (P_N(x), P_{N−1}(x)) by the three-term recurrence.
fn legendre_pair(n: usize, x: &Big, prec: Prec) -> (Big, Big) {
    let mut prev = prec.one();
    let mut cur = x.clone();
    for k in 1..n {
        let kb = prec.int(k as i64);
        let next = (prec.int(2 * k as i64 + 1) * x * &cur - &kb * &prev) / prec.int(k as i64 + 1);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

fn build(n: usize, prec: Prec) -> Rule {
    let one = prec.one();
    let nb = prec.int(n as i64);
    let mut nodes = vec![prec.zero(); n];
    let mut weights = vec![prec.zero(); n];
    for i in 0..n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = prec.f(guess);
        let mut dp = one.clone();
        for _ in 0..64 {
            let (pn, pm) = legendre_pair(n, &x, prec);
            dp = &nb * &(&x * &pn - &pm) / &(&x * &x - &one);
            let dx = &pn / &dp;
            x -= &dx;
            if log2_abs(&dx) < prec.log2_eps() + 4.0 {
                let (pn, pm) = legendre_pair(n, &x, prec);
                dp = &nb * &(&x * &pn - &pm) / &(&x * &x - &one);
                break;
            }
        }
        let w = prec.int(2) / &((&one - &(&x * &x)) * &dp * &dp);
        nodes[i] = x.clone();
        weights[i] = w.clone();
        nodes[n - 1 - i] = -x;
        weights[n - 1 - i] = w;
    }
    Rule { nodes, weights }
}

/// ∫_a^b f with one application of the rule.
pub(crate) fn panel<F>(rule: &Rule, a: &Big, b: &Big, prec: Prec, f: &mut F) -> Result<Big>
where
    F: FnMut(&Big) -> Result<Big>,
{
    let half = prec.f(0.5);
    let mid = (a + b) * &half;
    let rad = (b - a) * &half;
    let mut acc = prec.zero();
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        acc += w * &f(&(&mid + &(&rad * x)))?;
    }
    Ok(acc * rad)
}
