fn main() {
    std::process::exit(fbps::cli::main_with_args(std::env::args_os()));
}
