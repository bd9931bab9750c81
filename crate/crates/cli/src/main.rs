fn main() {
    std::process::exit(licorm_cli::main_with(std::env::args_os()));
}
