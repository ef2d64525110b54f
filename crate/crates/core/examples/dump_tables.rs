//! Developer tool: print the computed E-O class tables for transcription
//! checks. Usage: cargo run --release -p eo-strata --example dump_tables -- <g>

use eo_strata::classes::StrataCtx;
use eo_strata::finals::{final_type_of, young_of_type};
use eo_strata::weyl::{enumerate, Filter};

fn main() {
    let g: usize = std::env::args().nth(1).unwrap_or("3".into()).parse().unwrap();
    let ctx = StrataCtx::new(g);
    let mut finals = enumerate(g, Filter::Final);
    finals.sort_by_key(|w| {
        let y = young_of_type(&final_type_of(w));
        (y.parts().len(), y.parts().iter().rev().map(|&p| p as usize).collect::<Vec<_>>())
    });
    for w in finals {
        let y = young_of_type(&final_type_of(&w));
        let v = ctx.class_v(&w);
        println!("{y}\t{}", v.to_text());
    }
}
