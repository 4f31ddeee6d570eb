fn main() {
    std::process::exit(champ_ppc::cli::main());
}
