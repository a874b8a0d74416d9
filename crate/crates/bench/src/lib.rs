//! Fixtures shared by the criterion benches.

use mixbiotic_core::rng::Stream;

/// A contact-list event file with `rows` rows over `vertices` labels and
/// roughly `rows / 5` distinct timestamps, in SocioPatterns `t i j` layout.
pub fn synthetic_events(rows: usize, vertices: u64, seed: u64) -> String {
    let mut rng = Stream::new(seed);
    let mut out = String::with_capacity(rows * 16);
    let mut t = 0u64;
    for _ in 0..rows {
        if rng.chance(0.2) {
            t += 20;
        }
        let a = rng.below(vertices);
        let b = (a + 1 + rng.below(vertices - 1)) % vertices;
        out.push_str(&format!("{t} {a} {b}\n"));
    }
    out
}
