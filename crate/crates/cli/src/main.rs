fn main() -> std::process::ExitCode {
    disguise_cli::main_entry()
}
