fn main() {
    std::process::exit(broadwell_cli::cli_main());
}
