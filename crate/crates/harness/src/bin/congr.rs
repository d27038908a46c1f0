fn main() {
    std::process::exit(congr_harness::cli::main());
}
