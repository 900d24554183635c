//! Generate a jittered mesh, write it as Triangle files and VTK, read it back.

use fvflow::mesh::{gen_jittered_square, load_triangle_files, write_triangle_mesh, write_vtk, written_marker_map, VtkData};

fn main() -> fvflow::Result<()> {
    let mesh = gen_jittered_square(8, 0.25, 7)?;
    let dir = std::env::temp_dir().join("fvflow-mesh-roundtrip");
    std::fs::create_dir_all(&dir)?;
    let (node, ele) = (dir.join("jitter.node"), dir.join("jitter.ele"));
    write_triangle_mesh(&mesh, &node, &ele)?;
    let back = load_triangle_files(&node, &ele, &written_marker_map())?;
    let areas: Vec<f64> = back.geometries().iter().map(|g| g.area).collect();
    write_vtk(&back, &dir.join("jitter.vtk"), "jitter", &VtkData::default().cell_scalar("area", areas.clone()))?;
    println!(
        "{} nodes, {} triangles, total area {:.15}",
        back.num_nodes(),
        back.num_triangles(),
        areas.iter().sum::<f64>()
    );
    println!("files in {}", dir.display());
    Ok(())
}
