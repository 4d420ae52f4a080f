fn main() {
    std::process::exit(oplip::harness::run_cli(std::env::args()));
}
