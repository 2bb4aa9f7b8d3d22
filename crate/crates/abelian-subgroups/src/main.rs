fn main() {
    std::process::exit(abelian_subgroups::cli::run(std::env::args().skip(1).collect()));
}
