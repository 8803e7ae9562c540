fn main() {
    std::process::exit(cubesaw::cli::main_with_args(std::env::args_os()));
}
