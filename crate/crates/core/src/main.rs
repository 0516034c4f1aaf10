fn main() {
    let (code, out) = cspace::cli::run(std::env::args_os());
    println!("{out}");
    std::process::exit(code);
}
