fn main() {
    let code = qslice::cli::run_with(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
