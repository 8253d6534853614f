use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("set by cargo");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("PTSCHEME_H".to_string()),
        cpp_compat: true,
        documentation: true,
        header: Some(
            "/* C interface to the truncated point scheme computations. */".to_string(),
        ),
        ..Default::default()
    };
    cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("generate the C header")
        .write_to_file(PathBuf::from(&crate_dir).join("include/ptscheme.h"));
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
