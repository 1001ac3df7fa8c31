// probe: rigorous monomial enclosures vs published table values
use abelint::cover::*;
use abelint::poly::*;
use abelint::quad::*;

fn main() {
    let ham = Hamiltonian::new(BivarPoly::parse("1/2*y^2 + 1/4*x^4 + 1/60*x^3 - 19/40*x^2").unwrap());
    let minsize: f64 = std::env::args().nth(1).map(|s| s.parse().unwrap()).unwrap_or(1.0 / 512.0);
    let idx = [MonoIndex::new(0,0), MonoIndex::new(1,0), MonoIndex::new(2,0), MonoIndex::new(0,2)];
    let t0 = std::time::Instant::now();
    for (name, seed, hs) in [
        ("left", Point2::new(-1.0, 0.0), vec![-0.0121, -0.0846, -0.1933]),
        ("right", Point2::new(0.95, 0.0), vec![-0.0105, -0.0738, -0.1686]),
        ("outer", Point2::new(0.0, 0.0), vec![0.09, 0.11]),
    ] {
        for h in hs {
            let domain = trapping_box(&ham, h, seed).unwrap();
            let cover = build_cover(&ham, h, &domain, minsize, seed);
            print!("{name} {h}: ");
            for m in idx {
                let r = monomial_abelian_integral(&cover, m);
                print!("[{:.6}, {:.6}] (w={:.1e})  ", r.value.lo(), r.value.hi(), r.value.width());
            }
            println!();
        }
    }
    println!("total {:?}", t0.elapsed());
}
