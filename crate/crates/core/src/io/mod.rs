//! File formats: signal arrays, cloud and diagram tables, SVG plots.

mod array;
mod svg;
mod tables;

pub use array::{
    ingest_array, read_binary_array, read_csv_array, sidecar_path, write_array, write_binary_array,
    write_csv_array, ArrayHeader, Dtype,
};
pub use svg::{diagram_svg, pca_svg};
pub use tables::{read_cloud_csv, read_diagram_csv, write_cloud_csv, write_diagram_csv};
