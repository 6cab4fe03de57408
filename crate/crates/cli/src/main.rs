fn main() {
    let code = tcres_cli::main_with(std::env::args_os(), std::env::var("TCRES_THREADS").ok());
    std::process::exit(code);
}
