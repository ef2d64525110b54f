//! Developer tool: cross-check the g=4 E-O classes against the
//! independent Pfaffian routes.

use eo_strata::classes::{anumber_class, kt_class, KtConfig, StrataCtx};
use eo_strata::finals::{final_type_of, young_of_type};
use eo_strata::weyl::{enumerate, Filter};

fn main() {
    for g in 2..=4usize {
        let ctx = StrataCtx::new(g);
        // a-number classes against the E-O route
        for a in 1..=g {
            let y = eo_strata::finals::YoungDiagram::new(g, (1..=a as u8).rev().collect()).unwrap();
            let by_v = ctx.class_v_of_diagram(&y);
            let by_t = anumber_class(&ctx, a);
            println!(
                "g={g} T_{a}: match={} value={}",
                *by_v == by_t,
                by_t.to_text()
            );
        }
        // the interpolation formula against the E-O route, every final
        for w in enumerate(g, Filter::Final) {
            let y = young_of_type(&final_type_of(&w));
            let by_v = ctx.class_v(&w);
            let by_kt = kt_class(&ctx, &y, KtConfig::TruncatedHodge);
            println!("g={g} Y={y} kt_match={}", *by_v == by_kt);
            if *by_v != by_kt {
                println!("   class_v = {}", by_v.to_text());
                println!("   kt      = {}", by_kt.to_text());
            }
        }
    }
}
