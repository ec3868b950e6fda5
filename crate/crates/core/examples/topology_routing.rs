//! Builds the built-in topologies and a file topology, then shows the minimum-hop
//! forwarding sets toward a few object sources.
//!
//! `cargo run --example topology_routing -- [topology]`

use vipcache::model::{assign_sources, build_routing, ObjectCatalog, TopologySpec};

fn main() -> vipcache::Result<()> {
    let file = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/ring6.toml");
    let mut specs = TopologySpec::builtins();
    specs.push(file.parse()?);
    if let Some(t) = std::env::args().nth(1) {
        specs = vec![t.parse()?];
    }

    for spec in specs {
        let net = spec.build(10.0)?;
        let degrees: Vec<usize> = (0..net.node_count()).map(|n| net.outgoing(n).len()).collect();
        println!(
            "{}: {} nodes, {} directed links, degree {}..{}",
            spec.label(),
            net.node_count(),
            net.links().len(),
            degrees.iter().min().unwrap(),
            degrees.iter().max().unwrap()
        );

        let catalog = ObjectCatalog::new(assign_sources(&net, 4, 7)?, 0.75, 10.0)?;
        let routing = build_routing(&net, &catalog)?;
        for k in 0..catalog.len() {
            let src = routing.source(k);
            println!("  object {k} at {}", net.name(src));
            for n in (0..net.node_count()).filter(|&n| n != src).take(4) {
                let hops: Vec<&str> = routing.next_hops(k, n).iter().map(|&b| net.name(b)).collect();
                println!("    {:>12} -> {:?} ({} hops)", net.name(n), hops, routing.hops(n, src));
            }
        }
    }
    Ok(())
}
