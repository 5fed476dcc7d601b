//! Benchmarks for the three kernel families: modular-data extraction,
//! commutant computation (structured vs dense), and the wedge-net checks.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nalgebra::Complex;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wedgenet::algebra::{bicommutant_membership, commutant_basis, CommutantOptions};
use wedgenet::counterexample::{TwistConfig, TwistedModel};
use wedgenet::geometry::Wedge;
use wedgenet::lattice::{GridConfig, LatticeRep};
use wedgenet::linalg::CMat;
use wedgenet::modularity::{decide_modularity, modularity_set, MultiRep, SectorSpec};
use wedgenet::net::WedgeNet;
use wedgenet::subspace::RealSubspace;
use wedgenet::tol;

type C64 = Complex<f64>;

fn random_subspace(seed: u64, n: usize) -> RealSubspace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cols = wedgenet::linalg::RMat::from_fn(2 * n, n, |_, _| rng.random::<f64>() * 2.0 - 1.0);
    RealSubspace::from_spanning(&cols).expect("random spanning set is full rank")
}

fn grid(l: usize, delta: f64, k: usize, q: f64) -> GridConfig {
    GridConfig {
        l,
        delta,
        k,
        q,
        mass: 1.0,
    }
}

fn multi(cfg: GridConfig) -> MultiRep {
    MultiRep::new(&[SectorSpec {
        grid: cfg,
        multiplicity: 1,
    }])
    .expect("valid grid")
}

fn bench_tomita(c: &mut Criterion) {
    let mut group = c.benchmark_group("tomita-data");
    for &n in &[8usize, 16, 32] {
        let h = random_subspace(11, n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| {
            b.iter(|| h.tomita_data().unwrap())
        });
    }
    group.finish();
}

fn bench_commutant(c: &mut Criterion) {
    let mut group = c.benchmark_group("commutant");
    group.sample_size(10);
    let configs = [grid(4, 0.6, 2, 0.7), grid(8, 0.5, 2, 0.5), grid(16, 0.25, 4, 0.7)];
    for cfg in configs {
        let m = multi(cfg);
        let n = m.total_dim();
        let (set, target, _) = modularity_set(&m, 7).unwrap();
        let x = m.dense_from_monomials(&target).unwrap();
        group.bench_with_input(BenchmarkId::new("structured", n), &(), |b, _| {
            b.iter(|| {
                let dim = set.commutant_dim();
                let membership = set.bicommutant_membership(&x, tol::SEPARATION_GAP).unwrap();
                (dim, membership.member)
            })
        });
        // The full dense Gram route scales as (N²)³; keep it to the sizes
        // the dispatcher would actually accept.
        if n <= 24 {
            let gens = set.dense_generators();
            let options = CommutantOptions {
                dense_cap: 24,
                profile_cap: 2048,
            };
            group.bench_with_input(BenchmarkId::new("dense-gram", n), &(), |b, _| {
                b.iter(|| commutant_basis(&gens, &options).unwrap().dim())
            });
        }
    }
    // Dense membership on a random adjoint-closed pair, word-span included.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let a = CMat::from_fn(6, 6, |_, _| {
        C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
    });
    let gens = vec![a.clone(), a.adjoint()];
    let probe = CMat::identity(6, 6);
    group.bench_function("dense-membership-6", |b| {
        b.iter(|| {
            bicommutant_membership(&probe, &gens, &CommutantOptions::default())
                .unwrap()
                .0
                .member
        })
    });
    group.finish();
}

fn bench_net(c: &mut Criterion) {
    let mut group = c.benchmark_group("wedge-net");
    group.sample_size(10);
    let cfg = grid(16, 0.25, 4, 0.7); // dimension 80
    let rep = LatticeRep::new(cfg).unwrap();
    group.bench_function("construct-80", |b| {
        b.iter(|| WedgeNet::new(rep.clone()).unwrap())
    });
    let net = WedgeNet::new(rep).unwrap();
    let w1 = Wedge::standard_right();
    let times = [0.3, 0.7, 1.1];
    group.bench_function("flow-geometry-80", |b| {
        b.iter(|| net.check_flow_geometry(&w1, &times).unwrap())
    });
    group.bench_function("duality-80", |b| {
        b.iter(|| net.check_duality(&w1).unwrap())
    });
    group.bench_function("modularity-decision-80", |b| {
        b.iter(|| {
            decide_modularity(&multi(cfg), 7, &CommutantOptions::default())
                .unwrap()
                .member
        })
    });
    group.finish();
}

fn bench_counterexample(c: &mut Criterion) {
    let mut group = c.benchmark_group("counterexample");
    group.sample_size(10);
    let cfg = TwistConfig::default();
    group.bench_function("twisted-report", |b| {
        b.iter(|| {
            let model = TwistedModel::from_config(&cfg).unwrap();
            model
                .report(&cfg, &CommutantOptions::default())
                .unwrap()
                .records
                .len()
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_tomita,
    bench_commutant,
    bench_net,
    bench_counterexample
);
criterion_main!(benches);
