fn main() {
    std::process::exit(gridviz::cli::run(std::env::args_os()));
}
