fn main() {
    std::process::exit(poisson_koszul::cli::run(std::env::args_os()));
}
