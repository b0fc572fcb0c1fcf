fn main() {
    std::process::exit(higgs_threeterm::cli::main_with_std());
}
