fn main() {
    std::process::exit(gmlab_cli::main_with_args(std::env::args_os()));
}
