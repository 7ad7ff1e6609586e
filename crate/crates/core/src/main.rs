fn main() {
    std::process::exit(torus_forms::cli::run(std::env::args_os()));
}
