fn main() {
    std::process::exit(rootfun::cli::run());
}
