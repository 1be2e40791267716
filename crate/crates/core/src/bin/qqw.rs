fn main() {
    std::process::exit(qqw::cli::main_with_args(std::env::args_os()));
}
