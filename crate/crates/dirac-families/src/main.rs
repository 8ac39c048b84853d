fn main() {
    std::process::exit(dirac_families::cli::run());
}
