use std::sync::Arc;
use std::time::Instant;

use extsplash_core::verify::{run_check, CheckId, RunOptions};
use extsplash_core::FieldTower;

#[test]
#[ignore]
fn smoke() {
    let ids: Vec<CheckId> = std::env::var("IDS").unwrap().split(',').map(|s| CheckId::parse(s).unwrap()).collect();
    let qs: Vec<u32> = std::env::var("QS").unwrap().split(',').map(|s| s.parse().unwrap()).collect();
    for q in qs {
        let t = Arc::new(FieldTower::for_q(q).unwrap());
        for &id in &ids {
            let st = Instant::now();
            let r = run_check(id, t.clone(), RunOptions::default());
            match r {
                Ok(r) => {
                    println!("{} q={} {} {:?} {:?}", id, q, r.verdict.as_str(), st.elapsed(), r.counts);
                    for w in &r.witnesses { println!("   {} {}", w.assertion, w.detail); }
                }
                Err(e) => println!("{} q={} error {}", id, q, e),
            }
        }
    }
}
