fn main() -> std::process::ExitCode {
    affine_pluecker::cli::main()
}
