fn main() {
    let code = cpa_gmac_cli::main_with_args(std::env::args().collect());
    std::process::exit(code);
}
