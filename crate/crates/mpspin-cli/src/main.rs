fn main() {
    // subcommands land here once the library surface is frozen
    eprintln!("not yet wired up");
    std::process::exit(2);
}
