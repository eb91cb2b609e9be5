//! Regenerates the bundled mesh and descriptor files under meshes/.
//!
//! Usage: cargo run -p hodgenorm-core --bin emit-meshes -- [out_dir]

use hodgenorm_core::bounds::{CaseTag, ManifoldDescriptor};
use hodgenorm_core::builtin;
use hodgenorm_core::mesh::MeshFile;
use std::collections::BTreeMap;
use std::path::Path;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = Path::new(args.get(1).map_or("meshes", String::as_str));
    std::fs::create_dir_all(out).expect("creating the output directory");

    let meshes = [
        ("circle3.json", builtin::circle_metric(3, 1.0)),
        (
            "torus7.json",
            builtin::equilateral(builtin::torus7(), 1.0).unwrap(),
        ),
        (
            "sphere3.json",
            builtin::equilateral(builtin::sphere(3), 1.0).unwrap(),
        ),
        ("genus2_hyperbolic.json", builtin::genus2_hyperbolic_area()),
        (
            "random3.json",
            builtin::equilateral(builtin::random_three_complex_default(), 1.0).unwrap(),
        ),
        ("flat_torus4.json", builtin::flat_torus(4).0),
        ("dumbbell.json", builtin::dumbbell_surface()),
    ];
    for (name, metric) in meshes {
        let text = MeshFile::from_metric(&metric).to_json_canonical();
        std::fs::write(out.join(name), text + "\n").expect("writing mesh file");
    }

    // A genus-2 hyperbolic surface: area forced to 4 pi by Gauss-Bonnet,
    // injectivity radius and diameter of a surface with a moderately short
    // geodesic. Curvature is exactly -1, so a = b = 1 and the degree-1
    // Bochner term equals the Ricci bound -1.
    let descriptor = ManifoldDescriptor {
        n: 2,
        p: 1,
        vol: 4.0 * std::f64::consts::PI,
        inj: 0.3,
        diam: 3.0,
        a: 1.0,
        b: 1.0,
        k_p: -1.0,
        case_tag: CaseTag::NegativelyCurved,
        mu: 0.5,
        h: None,
        lambda1: None,
        c0: None,
        c1: None,
        cs: None,
        constants: BTreeMap::new(),
    };
    let text = serde_json::to_string_pretty(&descriptor).expect("descriptor serializes");
    std::fs::write(out.join("genus2_descriptor.json"), text + "\n").expect("writing descriptor");

    // Two right triangles tiling the unit square, as a minimal OFF sample.
    let off = "OFF\n4 2 5\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n3 0 1 2\n3 0 2 3\n";
    std::fs::write(out.join("square.off"), off).expect("writing OFF sample");

    println!("wrote bundled meshes to {}", out.display());
}
