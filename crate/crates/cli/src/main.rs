fn main() {
    std::process::exit(betakit::run(std::env::args_os()));
}
