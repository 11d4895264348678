fn main() -> std::process::ExitCode {
    huopm::cli::run()
}
