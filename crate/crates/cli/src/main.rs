fn main() {
    std::process::exit(sideband_cli::commands::main_with_args(std::env::args_os()));
}
