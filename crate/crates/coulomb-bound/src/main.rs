fn main() {
    std::process::exit(coulomb_bound::cli::main());
}
