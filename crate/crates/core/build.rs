fn main() {
    // System LAPACK/BLAS (Debian alternatives point these at OpenBLAS).
    println!("cargo:rustc-link-lib=dylib=lapack");
    println!("cargo:rustc-link-lib=dylib=blas");
}
