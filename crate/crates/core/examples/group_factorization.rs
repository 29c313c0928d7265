//! Random Laguerre transformations, their block form, and the factorization
//! into two isometries, a boost and a parallel flow.

use laguerre::group::{self, decompose, random_element, to_blocks, RandomElementOptions};
use laguerre::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 3;

    let t = random_element(&mut rng, n, RandomElementOptions::default());
    let blocks = to_blocks(&t);
    println!("w = {:.6}, |v| = {:.6}", blocks.w, blocks.v.iter().map(|x| x * x).sum::<f64>().sqrt());

    let f = decompose(t.matrix())?;
    println!("boost t = {:.6}, shift s = {:.6}, epsilon = {}", f.t, f.s, f.epsilon);
    println!("reconstruction error {:.2e}", f.reconstruction_error(t.matrix()));

    let worst = (0..1000)
        .map(|_| {
            let t = random_element(&mut rng, n, RandomElementOptions::default());
            decompose(t.matrix()).map(|f| f.reconstruction_error(t.matrix()))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("worst of 1000 factorizations: {worst:.2e}");

    let flow = group::parabolic(n, 0.7).then(&group::parabolic(n, 1.1))?;
    let direct = group::parabolic(n, 1.8);
    println!("φ_0.7 φ_1.1 − φ_1.8: {:.2e}", (flow.matrix() - direct.matrix()).amax());
    Ok(())
}
