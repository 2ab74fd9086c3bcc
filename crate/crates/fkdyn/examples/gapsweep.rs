use fkdyn::exact::*;
use fkdyn::lattice::MicroGraph;
fn main() {
    for p in [0.1, 0.2, 0.3, 0.4, 0.5] {
        let g = MicroGraph::grid(2, 2);
        print!("p={p}: ");
        for q in [1.0, 1.5, 2.0, 3.0, 5.0, 8.0] {
            let mu = exact_measure(&g, p, q).unwrap();
            let gen = generator(&g, p, q).unwrap();
            print!("q={q}:{:.6} ", spectral_gap(&gen, &mu).unwrap());
        }
        println!();
    }
}
