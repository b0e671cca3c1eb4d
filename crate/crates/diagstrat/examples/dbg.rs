// quick debug binary
use diagstrat::diagram::brauer::*;
use diagstrat::diagram::curve::*;
use diagstrat::params::{make_config, Flavor, RawConfig};

fn main() {
    let cfg = make_config(&RawConfig {
        flavor: Flavor::CyclotomicBrauer,
        m: 2,
        u: vec!["1/5".into(), "1/7".into()],
        char_p: 0,
        bubbles: vec!["3".into(), "5".into()],
        bubbles_cw: None,
        orbit_data: None,
        quantum_u: None,
        e: None,
        truncation_n: 6,
    })
    .unwrap();
    let eng = BrauerEngine::new(&cfg);
    let cup = BrauerDiagram::cup_gen(0, 0);
    let x1 = BrauerDiagram::x_gen(2, 0);
    let cap = BrauerDiagram::cap_gen(2, 0);
    let c1 = eng.curve_of(&cup);
    let c2 = eng.curve_of(&x1);
    let c3 = eng.curve_of(&cap);
    println!("cup curve: {:?}\n", c1);
    println!("x curve: {:?}\n", c2);
    println!("cap curve: {:?}\n", c3);
    let g1 = glue(&c1, &c2);
    println!("glue1: {:?}\n", g1);
    let g2 = glue(&g1, &c3);
    println!("glue2: {:?}\n", g2);
}
