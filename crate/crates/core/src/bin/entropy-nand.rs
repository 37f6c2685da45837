fn main() {
    let code = entropy_nand::cli::run(std::env::args_os());
    std::process::exit(code);
}
