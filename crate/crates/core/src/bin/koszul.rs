fn main() {
    std::process::exit(koszul::cli::run(std::env::args_os()));
}
