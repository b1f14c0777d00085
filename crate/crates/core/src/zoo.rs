//! Built-in generators: S³, the six-vertex S⁴, lens spaces and S¹×S².

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::complex::{orient_consistently, DeckGroup, Lift, SimplicialPreComplex, Top};
use crate::developing::{equivariant_placement, MetricTriangulation, Representation, MAX_RESAMPLE};
use crate::error::{Error, Result};
use crate::pachner::stellar_subdivision;

/// Parameters of a generator run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: String,
    pub p: u32,
    pub q: u32,
    pub k: u32,
    pub alpha: f64,
    pub a: f64,
    /// Stellar subdivisions for `sphere4_subdivided`.
    pub subdivisions: usize,
    pub seed: u64,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        GeneratorSpec {
            kind: "sphere3".into(),
            p: 5,
            q: 1,
            k: 1,
            alpha: 0.7,
            a: 1.3,
            subdivisions: 1,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub state: MetricTriangulation,
    pub rep: Representation,
    pub experimental: bool,
}

pub trait Generator: Send + Sync {
    fn name(&self) -> &str;
    fn generate(&self, spec: &GeneratorSpec) -> Result<Generated>;
}

fn boundary_tops(d: usize) -> Vec<Top> {
    (0..d + 2)
        .map(|i| {
            let s = if i % 2 == 0 { 1 } else { -1 };
            Top::new((0..d + 2).filter(|&v| v != i).map(Lift::base).collect(), s)
        })
        .collect()
}

fn place(
    complex: SimplicialPreComplex,
    rep: Representation,
    seed: u64,
    experimental: bool,
) -> Result<Generated> {
    let (placement, metric) = equivariant_placement(&complex, &rep, seed)?;
    Ok(Generated {
        state: MetricTriangulation {
            complex,
            placement,
            metric,
        },
        rep,
        experimental,
    })
}

/// Boundary of a 4-simplex in R³ with the trivial representation.
pub fn gen_sphere3(seed: u64) -> Result<Generated> {
    let names = (1..=5).map(|i| i.to_string()).collect();
    let c = SimplicialPreComplex::build_with_group(3, DeckGroup::Trivial, names, boundary_tops(3))?;
    place(c, Representation::Trivial { dim: 3 }, seed, true)
}

/// Boundary of a 5-simplex on `A..F` in R⁴.
pub fn gen_sphere4(seed: u64) -> Result<Generated> {
    let names = ["A", "B", "C", "D", "E", "F"].map(String::from).to_vec();
    let c = SimplicialPreComplex::build_with_group(4, DeckGroup::Trivial, names, boundary_tops(4))?;
    place(c, Representation::Trivial { dim: 4 }, seed, false)
}

/// Six-vertex S⁴ with `count` stellar subdivisions of randomly chosen top
/// simplices; unlike the six-vertex sphere it admits 2↔4 and 3→3 moves.
pub fn gen_sphere4_subdivided(seed: u64, count: usize) -> Result<Generated> {
    let g = gen_sphere4(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut state = g.state;
    for _ in 0..count {
        // a thin top may leave no room for a well-shaped cone point
        let mut tops: Vec<usize> = (0..state.complex.num_tops()).collect();
        let mut last = None;
        loop {
            if tops.is_empty() {
                return Err(last.unwrap_or(Error::ResampleExhausted(MAX_RESAMPLE)));
            }
            let top = tops.swap_remove(rng.random_range(0..tops.len()));
            match stellar_subdivision(&state, top, &mut rng) {
                Ok(o) => {
                    state = o.state;
                    break;
                }
                Err(e @ Error::ResampleExhausted(_)) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Generated {
        state,
        rep: g.rep,
        experimental: false,
    })
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn mod_inverse(q: u32, p: u32) -> u32 {
    (1..p)
        .find(|x| (q as u64 * *x as u64) % p as u64 == 1)
        .unwrap_or(1)
}

/// Quotient tops of the lens space `L(p, q)` as a ℤ_p quotient of S³.
///
/// S³ is triangulated as the join of two `N`-cycles `a_i`, `b_j`
/// (`N = p`, or `N = 4` for `p = 2` so the join stays simplicial); the
/// generator acts by `a_i -> a_{i+n}`, `b_j -> b_{j+nq}` with `n = N/p`.
pub fn lens_tops(p: u32, q: u32) -> Result<(Vec<String>, Vec<Vec<Lift>>)> {
    if p < 2 || q == 0 || q >= p || gcd(p, q) != 1 {
        return Err(Error::BadParams(format!(
            "lens space needs 0 < q < p, gcd(p, q) = 1; got p={p}, q={q}"
        )));
    }
    let n: i64 = if p == 2 { 2 } else { 1 };
    let big = n * p as i64;
    let qinv = mod_inverse(q, p) as i64;
    let a = |i: i64| {
        let i = i.rem_euclid(big);
        Lift::new((i % n) as usize, i / n)
    };
    let b = |j: i64| {
        let j = j.rem_euclid(big);
        let r = j % n;
        let c = ((j / n) * qinv).rem_euclid(p as i64);
        Lift::new((n + r) as usize, c)
    };
    let group = DeckGroup::Cyclic(p);
    let mut seen = BTreeMap::new();
    for i in 0..big {
        for j in 0..big {
            let t = vec![a(i), a(i + 1), b(j), b(j + 1)];
            let key = group.canonical(&t).key;
            seen.entry(key).or_insert(t);
        }
    }
    let names = if n == 1 {
        vec!["a".to_string(), "b".to_string()]
    } else {
        ["a0", "a1", "b0", "b1"].map(String::from).to_vec()
    };
    Ok((names, seen.into_values().collect()))
}

pub fn lens_complex(p: u32, q: u32) -> Result<SimplicialPreComplex> {
    let (names, tops) = lens_tops(p, q)?;
    let group = DeckGroup::Cyclic(p);
    let signs = orient_consistently(3, group, &tops)?;
    let tops = tops
        .into_iter()
        .zip(signs)
        .map(|(l, s)| Top::new(l, s))
        .collect();
    SimplicialPreComplex::build_with_group(3, group, names, tops)
}

/// Lens space `L(p, q)` with the generator acting as rotation by `2πk/p`.
pub fn gen_lens(p: u32, q: u32, k: u32, seed: u64) -> Result<Generated> {
    if k == 0 || k >= p {
        return Err(Error::BadParams(format!(
            "rotation index k={k} must satisfy 1 <= k < p"
        )));
    }
    let c = lens_complex(p, q)?;
    place(
        c,
        Representation::SingleAxisCyclic { order: p, index: k },
        seed,
        false,
    )
}

/// Quotient tops of S¹×S²: ∂Δ³ × ℤ layers, each prism split into three tetrahedra.
pub fn s1xs2_complex() -> Result<SimplicialPreComplex> {
    let tris = [[0usize, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
    let mut tops = Vec::new();
    for [x, y, z] in tris {
        let l = |v: usize, c: i64| Lift::new(v, c);
        tops.push(vec![l(x, 0), l(y, 0), l(z, 0), l(z, 1)]);
        tops.push(vec![l(x, 0), l(y, 0), l(y, 1), l(z, 1)]);
        tops.push(vec![l(x, 0), l(x, 1), l(y, 1), l(z, 1)]);
    }
    let group = DeckGroup::Infinite;
    let signs = orient_consistently(3, group, &tops)?;
    let tops = tops
        .into_iter()
        .zip(signs)
        .map(|(l, s)| Top::new(l, s))
        .collect();
    let names = ["x", "y", "z", "w"].map(String::from).to_vec();
    SimplicialPreComplex::build_with_group(3, group, names, tops)
}

/// Experimental S¹×S² with a screw-motion representation.
pub fn gen_s1xs2(alpha: f64, a: f64, seed: u64) -> Result<Generated> {
    if a == 0.0 {
        return Err(Error::BadParams("translation a must be nonzero".into()));
    }
    if alpha.abs() < 1e-6 {
        log::warn!("alpha = {alpha}: screw representation is close to a pure translation");
    }
    let c = s1xs2_complex()?;
    place(
        c,
        Representation::CyclicInfinite { alpha, shift: a },
        seed,
        true,
    )
}

struct Sphere3;
struct Sphere4;
struct Sphere4Subdivided;
struct Lens;
struct S1xS2;

impl Generator for Sphere3 {
    fn name(&self) -> &str {
        "sphere3"
    }
    fn generate(&self, s: &GeneratorSpec) -> Result<Generated> {
        gen_sphere3(s.seed)
    }
}

impl Generator for Sphere4 {
    fn name(&self) -> &str {
        "sphere4"
    }
    fn generate(&self, s: &GeneratorSpec) -> Result<Generated> {
        gen_sphere4(s.seed)
    }
}

impl Generator for Sphere4Subdivided {
    fn name(&self) -> &str {
        "sphere4_subdivided"
    }
    fn generate(&self, s: &GeneratorSpec) -> Result<Generated> {
        gen_sphere4_subdivided(s.seed, s.subdivisions)
    }
}

impl Generator for Lens {
    fn name(&self) -> &str {
        "lens"
    }
    fn generate(&self, s: &GeneratorSpec) -> Result<Generated> {
        gen_lens(s.p, s.q, s.k, s.seed)
    }
}

impl Generator for S1xS2 {
    fn name(&self) -> &str {
        "s1xs2_experimental"
    }
    fn generate(&self, s: &GeneratorSpec) -> Result<Generated> {
        gen_s1xs2(s.alpha, s.a, s.seed)
    }
}

/// Generators registered by name.
pub struct GeneratorRegistry {
    gens: BTreeMap<String, Box<dyn Generator>>,
}

impl GeneratorRegistry {
    pub fn standard() -> Self {
        let mut r = GeneratorRegistry {
            gens: BTreeMap::new(),
        };
        r.register(Box::new(Sphere3));
        r.register(Box::new(Sphere4));
        r.register(Box::new(Sphere4Subdivided));
        r.register(Box::new(Lens));
        r.register(Box::new(S1xS2));
        r
    }

    pub fn register(&mut self, g: Box<dyn Generator>) {
        self.gens.insert(g.name().to_string(), g);
    }

    pub fn get(&self, name: &str) -> Result<&dyn Generator> {
        self.gens
            .get(name)
            .map(|b| b.as_ref())
            .ok_or_else(|| Error::BadParams(format!("unknown generator {name:?}")))
    }

    pub fn names(&self) -> Vec<&str> {
        self.gens.keys().map(String::as_str).collect()
    }
}
