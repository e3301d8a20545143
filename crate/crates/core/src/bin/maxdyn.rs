fn main() {
    std::process::exit(maxdyn::cli::main_with(std::env::args_os()));
}
