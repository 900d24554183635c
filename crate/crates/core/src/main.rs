fn main() -> std::process::ExitCode {
    fvflow::cli::main()
}
