fn main() {
    std::process::exit(purcell2d::cli::run(std::env::args_os()));
}
