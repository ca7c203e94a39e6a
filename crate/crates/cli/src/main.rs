fn main() {
    std::process::exit(orefree_cli::run());
}
