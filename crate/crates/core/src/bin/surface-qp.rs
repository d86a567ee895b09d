fn main() {
    std::process::exit(surface_qp::cli::run(std::env::args_os()));
}
