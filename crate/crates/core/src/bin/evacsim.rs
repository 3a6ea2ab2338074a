fn main() -> std::process::ExitCode {
    evacsim::cli::main()
}
