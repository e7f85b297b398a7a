use super::packing::Packing;
use crate::network::Params;

/// Automorphisms of the Hamming graph `H(n,q)`: a permutation of the
/// coordinates combined with a permutation of the alphabet at each
/// coordinate. Conjugating a network by one of them maps its sequential
/// (and asynchronous) closure onto the closure of the conjugate.
#[derive(Debug, Clone)]
pub struct HammingSymmetry {
    packing: Packing,
    /// `(sigma, sigma^-1)` as point tables; the identity comes first.
    elements: Vec<(Vec<u8>, Vec<u8>)>,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut cur, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_permute(k - 1, cur, out);
        let j = if k.is_multiple_of(2) { i } else { 0 };
        cur.swap(j, k - 1);
    }
}

impl HammingSymmetry {
    /// Refuses groups larger than `max_order`.
    pub fn new(params: Params, max_order: usize) -> Option<Self> {
        let (n, q) = (params.n(), params.q());
        let packing = Packing::for_params(params).ok()?;
        let fact = |k: usize| (1..=k).try_fold(1usize, |a, b| a.checked_mul(b));
        let order = fact(n)?.checked_mul(fact(q)?.checked_pow(n as u32)?)?;
        if order > max_order {
            return None;
        }
        let coord_perms = permutations(n);
        let value_perms = permutations(q);
        let mut elements = Vec::with_capacity(order);
        for cp in &coord_perms {
            // one value permutation per coordinate, odometer style
            let mut choice = vec![0usize; n];
            loop {
                let sigma: Vec<u8> = (0..params.size())
                    .map(|x| {
                        let mut y = 0;
                        for i in 0..n {
                            let d = value_perms[choice[i]][params.digit(x, i)];
                            y += d * params.stride(cp[i]);
                        }
                        y as u8
                    })
                    .collect();
                let mut inv = vec![0u8; sigma.len()];
                for (x, &y) in sigma.iter().enumerate() {
                    inv[y as usize] = x as u8;
                }
                elements.push((sigma, inv));
                let mut i = 0;
                while i < n {
                    choice[i] += 1;
                    if choice[i] < value_perms.len() {
                        break;
                    }
                    choice[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        Some(HammingSymmetry { packing, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `sigma ∘ f ∘ sigma^-1` for the `k`-th group element.
    #[inline]
    pub fn conjugate(&self, k: usize, code: u64) -> u64 {
        let (sigma, inv) = &self.elements[k];
        let pk = &self.packing;
        let b = pk.bits() as usize;
        let mut out = 0u64;
        for (x, &xi) in inv.iter().enumerate() {
            let y = sigma[pk.get(code, xi as usize)] as u64;
            out |= y << (b * x);
        }
        out
    }

    /// Iterator over the orbit (with repetitions).
    pub fn orbit(&self, code: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.order()).map(move |k| self.conjugate(k, code))
    }

    pub fn is_orbit_minimal(&self, code: u64) -> bool {
        (1..self.order()).all(|k| self.conjugate(k, code) >= code)
    }
}
