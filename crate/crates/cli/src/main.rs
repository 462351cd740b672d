fn main() {
    std::process::exit(lpsteiner_cli::main_with(std::env::args_os()));
}
