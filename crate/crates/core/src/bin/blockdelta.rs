fn main() {
    std::process::exit(blockdelta::cli::main_with_args(std::env::args_os()));
}
