//! Sample the completed quadruple (A, B, C, D) of a controlled rotation and
//! mark the angles the weight subspaces actually see.
//!
//! ```text
//! cargo run --example series_dump -- 7 pi > series.tsv
//! ```

use std::f64::consts::PI;

use mscompile::angle::parse_angle;
use mscompile::crot_quadruple;
use mscompile::subspace::SubspaceModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().as_deref().unwrap_or("7").parse()?;
    let alpha = parse_angle(args.next().as_deref().unwrap_or("pi"))?;
    let quad = crot_quadruple(n, alpha)?;
    let model = SubspaceModel::with_defaults(n)?;

    println!("theta\tA\tB\tC\tD\tnorm");
    let points = 256;
    for i in 0..=points {
        let t = -PI + 2.0 * PI * i as f64 / points as f64;
        let v: Vec<f64> = quad.iter().map(|f| f.eval(t)).collect();
        let norm: f64 = v.iter().map(|x| x * x).sum();
        println!("{t:.6}\t{:.9}\t{:.9}\t{:.9}\t{:.9}\t{norm:.12}", v[0], v[1], v[2], v[3]);
    }
    for q in 0..n {
        let t = model.canonical_theta(q)?;
        eprintln!("weight {q}: theta = {t:+.6}, A = {:+.9}", quad[0].eval(t));
    }
    Ok(())
}
