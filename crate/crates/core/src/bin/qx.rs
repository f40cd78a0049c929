fn main() -> std::process::ExitCode {
    qx_core::cli::run(std::env::args_os())
}
