mod common;

use common::*;
use numrad::range::numerical_radius;
use numrad::states::maximizing_states;
use numrad::triangle::{refined_bound, triangle_equality_three, triangle_equality_two};
use numrad::{Matrix, Settings};

fn s() -> Settings {
    Settings::DEFAULT
}

/// `b = μ a + ε Q p Q` with `Q` the projection away from a maximizing vector
/// `x` of `a`, so that `⟨b x, x⟩ = μ ⟨a x, x⟩`.
fn aligned(a: &Matrix, seed: u64, mu: f64, eps: f64) -> Matrix {
    let n = a.dim();
    let family = maximizing_states(a).unwrap();
    let x = family.records[0].witnesses[0].vector().unwrap().to_vec();
    let mut q = Matrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            q.set(i, j, q.get(i, j) - x[i] * x[j].conj());
        }
    }
    let p = &(&q * &general(n, seed)) * &q;
    a.scale_real(mu).add_scaled(numrad::C64::new(eps, 0.0), &p)
}

#[test]
fn refined_bound_sandwich() {
    for n in 2..=4 {
        for k in 0..100u64 {
            let a = general(n, 40_000 + 1000 * n as u64 + k);
            let b = general(n, 50_000 + 1000 * n as u64 + k);
            let r = refined_bound(&a, &b, &s());
            let sum = numerical_radius(&(&a + &b));
            assert!(sum <= r.bound + 1e-6, "n={n} k={k}: v(a+b)={sum} bound={}", r.bound);
            assert!(r.bound <= r.va + r.vb + 1e-6);
        }
    }
}

#[test]
fn constructed_witnesses_are_detected() {
    let mut constructed = 0;
    for seed in 0..60u64 {
        let n = 2 + (seed % 3) as usize;
        let a = general(n, 60_000 + seed);
        let mu = 0.5 + (seed % 5) as f64 * 0.4;
        let b = aligned(&a, 61_000 + seed, mu, 0.05);
        let x = maximizing_states(&a).unwrap().records[0].witnesses[0]
            .vector()
            .unwrap()
            .to_vec();
        let (fa, fb) = (a.quadratic_form(&x), b.quadratic_form(&x));
        let (va, vb) = (numerical_radius(&a), numerical_radius(&b));
        let witnessed = (fa.conj() * fb - numrad::C64::new(va * vb, 0.0)).norm() <= 1e-9 * (1.0 + va * vb);
        let report = triangle_equality_two(&a, &b, &s()).unwrap();
        if witnessed {
            constructed += 1;
            assert!(report.equal, "seed {seed}: lhs {} rhs {}", report.lhs, report.rhs);
        }
        if report.equal {
            assert!(report.verified, "seed {seed}: defect {:?}", report.witness_defect);
            let product = report.products.as_ref().unwrap()[0];
            assert!(
                (product.re - va * vb).abs() <= 1e-5 * (1.0 + va * vb) && product.im.abs() <= 1e-5 * (1.0 + va * vb)
            );
        }
    }
    assert!(constructed >= 20, "only {constructed} witnessed constructions");
}

#[test]
fn equality_survives_positive_scaling() {
    let mut equal = 0;
    for seed in 0..20u64 {
        let n = 2 + (seed % 2) as usize;
        let a = general(n, 70_000 + seed);
        let b = aligned(&a, 71_000 + seed, 1.3, 0.02);
        let c = aligned(&a, 72_000 + seed, 0.7, 0.02);
        let base = triangle_equality_three(&a, &b, &c, &s()).unwrap();
        if !base.equal {
            continue;
        }
        equal += 1;
        for (x, y, z) in [(2.0, 0.5, 1.0), (0.1, 3.0, 7.0), (1.0, 1.0, 0.01)] {
            let scaled = triangle_equality_three(&a.scale_real(x), &b.scale_real(y), &c.scale_real(z), &s()).unwrap();
            assert!(
                scaled.equal && scaled.verified,
                "seed {seed}: {} vs {}",
                scaled.lhs,
                scaled.rhs
            );
            let pair = triangle_equality_two(&a.scale_real(x), &b.scale_real(y), &s()).unwrap();
            assert!(pair.equal && pair.verified, "seed {seed}");
        }
    }
    assert!(equal >= 8, "only {equal} equal triples");
}
