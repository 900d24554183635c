//! Blasius similarity profile by shooting.

use fvflow::analytic::BlasiusProfile;

fn main() -> fvflow::Result<()> {
    let p = BlasiusProfile::standard()?;
    println!("f''(0) = {:.8}", p.fpp0);
    for eta in [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0] {
        let (f, fp, fpp) = p.sample(eta);
        println!("eta {eta:.1}: f {f:.6} f' {fp:.6} f'' {fpp:.6}");
    }
    Ok(())
}
