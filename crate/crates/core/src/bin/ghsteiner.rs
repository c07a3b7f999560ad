fn main() {
    std::process::exit(ghsteiner::cli::run(std::env::args_os()));
}
