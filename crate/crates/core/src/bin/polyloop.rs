fn main() {
    std::process::exit(polyloop::cli::run(std::env::args_os()));
}
