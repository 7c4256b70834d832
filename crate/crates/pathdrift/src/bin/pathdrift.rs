fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(pathdrift::harness::run_cli(&argv));
}
