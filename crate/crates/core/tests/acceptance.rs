//! Acceptance suite: twelve end-to-end checks, one PASS/FAIL line each.
//! Exits nonzero if any check fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use formalflows::blockmatrix::{antidiagonal, block_matrix, rho_product_formula, solve_against_br, template};
use formalflows::cadic::cadic_root;
use formalflows::fraciter::{factor_finite_linear_part, frac_iterate, group_law_check, CoeffPolyTable};
use formalflows::sumfn::{fit_charc, rho_eval, SumFunction};
use formalflows::{Elem, FormalMap, Monomial, Ring};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng as _;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fp(c: u64) -> Ring {
    Ring::prime_field(c).unwrap()
}

/// `C(n, k) mod c` for `n < size` by Pascal's rule.
fn pascal_mod(c: u64, size: usize) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(size);
    for n in 0..size {
        let row =
            (0..=n).map(|k| if k == 0 || k == n { 1 % c } else { (rows[n - 1][k - 1] + rows[n - 1][k]) % c }).collect();
        rows.push(row);
    }
    rows
}

fn template_fidelity() -> Check {
    let t3: [[u64; 3]; 3] = [[1, 1, 1], [1, 2, 0], [1, 0, 0]];
    let t5: [[u64; 5]; 5] = [[1, 1, 1, 1, 1], [1, 2, 3, 4, 0], [1, 3, 1, 0, 0], [1, 4, 0, 0, 0], [1, 0, 0, 0, 0]];
    let got3 = template(3).map_err(|e| e.to_string())?;
    let got5 = template(5).map_err(|e| e.to_string())?;
    ensure(got3.rows().iter().map(Vec::as_slice).eq(t3.iter().map(|r| &r[..])), || {
        format!("c=3 template:\n{}", got3.render_grid())
    })?;
    ensure(got5.rows().iter().map(Vec::as_slice).eq(t5.iter().map(|r| &r[..])), || {
        format!("c=5 template:\n{}", got5.render_grid())
    })?;
    let blocks3 = block_matrix(3, 2).and_then(|b| b.render_template_blocks()).map_err(|e| e.to_string())?;
    let blocks5 = block_matrix(5, 2).and_then(|b| b.render_template_blocks()).map_err(|e| e.to_string())?;
    ensure(blocks3 == "T T T\nT 2T 0\nT 0 0\n", || format!("c=3 block pattern:\n{blocks3}"))?;
    ensure(blocks5 == "T T T T T\nT 2T 3T 4T 0\nT 3T T 0 0\nT 4T 0 0 0\nT 0 0 0 0\n", || {
        format!("c=5 block pattern:\n{blocks5}")
    })?;
    Ok("templates for c=3,5 and their level-2 block patterns".into())
}

fn char_two_rows() -> Check {
    let rows: [[u64; 8]; 5] = [
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, 0, 1, 0, 1, 0, 1, 0],
        [1, 1, 0, 0, 1, 1, 0, 0],
        [1, 0, 0, 0, 1, 0, 0, 0],
        [1, 1, 1, 1, 0, 0, 0, 0],
    ];
    let periods = [1, 2, 4, 4, 8];
    let f2 = fp(2);
    for (m, row) in rows.iter().enumerate() {
        for (k, &v) in row.iter().enumerate() {
            let got = rho_eval(m as u64, k as u64, f2);
            ensure(got == f2.from_integer(v as i64), || format!("rho_{m}({k}) = {got}, expected {v}"))?;
        }
        let p = SumFunction::basis(f2, m).period().map_err(|e| e.to_string())?;
        ensure(p == periods[m], || format!("period of rho_{m} is {p}, expected {}", periods[m]))?;
    }
    Ok("rho_0..rho_4 over F_2 for k<8; periods 1,2,4,4,8".into())
}

fn product_formula() -> Check {
    let mut checks = 0;
    for c in [2u64, 3, 5] {
        let pascal = pascal_mod(c, 250);
        for m in 0..125u64 {
            for k in 0..125u64 {
                let got = rho_product_formula(m, k, c).map_err(|e| e.to_string())?;
                let want = pascal[(m + k) as usize][k as usize];
                ensure(got == want, || format!("c={c} m={m} k={k}: {got} vs C(m+k,k) mod c = {want}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} exhaustive checks for c in {{2,3,5}}, m,k < 125"))
}

fn moebius_suite() -> Check {
    for c in [2u64, 3, 5] {
        let ring = fp(c);
        let g = moebius(ring, 8, 1);
        for k in 0..=2 * c as i64 {
            let gk = g.iterate(k).map_err(|e| e.to_string())?;
            ensure(gk == moebius(ring, 8, k), || format!("c={c}: g^{k} = {gk}"))?;
        }
        ensure(g.iterate(c as i64).unwrap().is_identity(), || format!("c={c}: g^c is not the identity"))?;
        let order = g.order_upto(64);
        ensure(order == Some(c as u32), || format!("c={c}: order {order:?}"))?;
    }
    Ok("g^k = x/(1+kx) for k=0..2c, g^c = 1 and order c, for c in {2,3,5} at cap 8".into())
}

/// The random maps shared by criteria 5 to 7.
fn random_maps_over_q(count: usize, seed: u64, max_cap: u32) -> Vec<FormalMap> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let dim = r.gen_range(1..=2);
            let cap = r.gen_range(2..=max_cap);
            random_tangent(Ring::Q, dim, cap, &mut r)
        })
        .collect()
}

fn coefficient_polynomials() -> Check {
    let mut monomials = 0;
    for g in random_maps_over_q(20, 5, 6) {
        let table = CoeffPolyTable::new(&g).map_err(|e| e.to_string())?;
        let iterates: Vec<FormalMap> = (0..=g.cap() as i64 + 3).map(|k| g.iterate(k).unwrap()).collect();
        for p in table.iter() {
            let m = p.monomial();
            let s = m.degree() as usize;
            ensure(p.degree().is_none_or(|d| d < s), || format!("deg P_{m} = {:?} not below {s}", p.degree()))?;
            for (k, gk) in iterates.iter().enumerate().take(s + 4) {
                let want: Vec<BigRational> = gk.coeff(m).iter().map(|c| c.to_rational().unwrap()).collect();
                let got = p.eval(&BigRational::from_integer(BigInt::from(k)));
                ensure(got == want, || format!("P_{m}({k}) disagrees with g^{k} for g = {g}"))?;
            }
            monomials += 1;
        }
    }
    Ok(format!("20 maps, {monomials} monomials; fitted on k < deg m, exact on deg m..deg m+3"))
}

fn group_law() -> Check {
    let maps = random_maps_over_q(50, 6, 6);
    let mut r = rng(66);
    for g in &maps {
        let a = random_rational(5, &mut r);
        let b = random_rational(5, &mut r);
        let holds = group_law_check(g, &a, &b).map_err(|e| e.to_string())?;
        ensure(holds, || format!("g^{a} o g^{b} != g^({a}+{b}) for g = {g}"))?;
    }
    Ok("50 random (g, a, b), heights <= 5".into())
}

fn inverse_via_minus_one() -> Check {
    let minus_one = BigRational::from_integer(BigInt::from(-1));
    for g in random_maps_over_q(50, 6, 6) {
        let got = frac_iterate(&g, &minus_one).map_err(|e| e.to_string())?.map;
        let inv = g.invert().map_err(|e| e.to_string())?;
        ensure(got == inv, || format!("P_m(-1) differs from the inverse of {g}"))?;
    }
    Ok("frac_iterate(g, -1) = invert(g) on the 50 maps of criterion 6".into())
}

fn half_iterate_oracle() -> Check {
    let g = map1(Ring::Q, 8, &[(1, 1), (2, 1)]);
    let got = frac_iterate(&g, &q(1, 2)).map_err(|e| e.to_string())?.map;
    let oracle = dense::to_map(&dense::half_iterate(&dense::from_map(&g)));
    ensure(got == oracle, || format!("library {got}\noracle {oracle}"))?;
    ensure(got.compose(&got).unwrap() == g, || "h o h != g".into())?;
    Ok(format!("(x+x^2)^(1/2) = {}", got.component(0)))
}

/// Least `r` with `c^r >= d`.
fn log_ceil(c: u64, d: u32) -> u32 {
    let mut r = 0;
    while c.pow(r) < u64::from(d) {
        r += 1;
    }
    r
}

fn char_three_sum_functions() -> Check {
    let ring = fp(3);
    let cap = 8;
    let mut r = rng(9);
    let mut fits = 0;
    for _ in 0..10 {
        let dim = r.gen_range(1..=2);
        let g = random_tangent(ring, dim, cap, &mut r);
        let iterates: Vec<FormalMap> = (0..2 * 9).map(|k| g.iterate(k).unwrap()).collect();
        for m in Monomial::up_to_degree(dim, 1, cap) {
            let period = 3usize.pow(log_ceil(3, m.degree()));
            for i in 0..dim {
                let seq: Vec<Elem> = iterates.iter().map(|it| it.component(i).coeff(&m)).collect();
                let h = fit_charc(ring, &seq[..period]).map_err(|e| e.to_string())?;
                ensure(h.degree().is_none_or(|d| d < m.degree() as usize), || format!("m={m}: degree of {h}"))?;
                ensure(h.values(2 * period) == seq[..2 * period], || format!("m={m}: {h} fails on the next period"))?;
                fits += 1;
            }
        }
    }
    Ok(format!("10 maps over F_3 at cap 8, {fits} coefficient sequences"))
}

fn cadic_roots() -> Check {
    let mut r = rng(10);
    let mut count = 0;
    for c in [2u64, 3] {
        for n in (1..=5i64).filter(|n| n % c as i64 != 0) {
            for _ in 0..3 {
                let dim = r.gen_range(1..=2);
                let g = random_tangent(fp(c), dim, 7, &mut r);
                let h = cadic_root(&g, n).map_err(|e| e.to_string())?;
                ensure(h.iterate(n).unwrap() == g, || format!("c={c} n={n}: root does not compose back"))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} roots, c in {{2,3}}, n <= 5 prime to c, cap 7"))
}

fn block_solver() -> Check {
    let mut r = rng(11);
    for (c, lvl) in [(2u64, 3u32), (3, 2), (5, 1)] {
        let ring = fp(c);
        let n = c.pow(lvl) as usize;
        let pascal = pascal_mod(c, 2 * n);
        for _ in 0..20 {
            let values: Vec<Elem> = (0..n).map(|_| ring.from_integer(r.gen_range(0..c) as i64)).collect();
            let lambda = solve_against_br(&values, c, lvl).map_err(|e| e.to_string())?;
            for (k, v) in values.iter().enumerate() {
                let sum = (0..n)
                    .fold(ring.zero(), |acc, m| &acc + &(&lambda[m] * &ring.from_integer(pascal[m + k][k] as i64)));
                ensure(&sum == v, || format!("c={c} r={lvl}: value {k} not reproduced"))?;
            }
        }
        let anti = antidiagonal(c, lvl).map_err(|e| e.to_string())?;
        ensure(anti.iter().enumerate().all(|(m, &v)| v == if m % 2 == 0 { 1 } else { c - 1 }), || {
            format!("antidiagonal {anti:?}")
        })?;
        let b = block_matrix(c, lvl).map_err(|e| e.to_string())?;
        ensure(b.is_symmetric() && b.is_upper_left_triangular(), || {
            format!("B_{lvl} for c={c} lacks symmetry or triangularity")
        })?;
    }
    Ok("20 random round trips each for (c,r) in (2,3),(3,2),(5,1); antidiagonals +-1; symmetric, upper-left triangular"
        .into())
}

fn factorization() -> Check {
    let h = map1(Ring::Q, 8, &[(1, -1), (2, 1)]);
    let f = factor_finite_linear_part(&h, 16).map_err(|e| e.to_string())?;
    ensure(f.order == 2, || format!("s = {}", f.order))?;
    ensure(f.torsion.order_upto(16) == Some(2), || format!("torsion order {:?}", f.torsion.order_upto(16)))?;
    ensure(f.tangent.is_tangent_identity(), || "u is not tangent to the identity".into())?;
    ensure(f.tangent.compose(&f.torsion.invert().unwrap()).unwrap() == h, || "u o t^-1 != h".into())?;
    ensure(f.tangent.iterate(2).unwrap() == h.iterate(2).unwrap(), || "u^2 != h^2".into())?;
    ensure(f.tangent.commutes_with(&h).unwrap() && f.torsion.commutes_with(&h).unwrap(), || {
        "factors do not commute with h".into()
    })?;
    Ok(format!("s = 2, torsion {}", f.torsion.component(0)))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("template fidelity", template_fidelity),
        ("char-2 row table", char_two_rows),
        ("product formula", product_formula),
        ("x/(1+x) suite", moebius_suite),
        ("coefficient polynomials", coefficient_polynomials),
        ("group law", group_law),
        ("inverse via P_m(-1)", inverse_via_minus_one),
        ("half-iterate oracle", half_iterate_oracle),
        ("char-3 sum-functions", char_three_sum_functions),
        ("c-adic roots", cadic_roots),
        ("B_r solver", block_solver),
        ("factorization", factorization),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.2}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
