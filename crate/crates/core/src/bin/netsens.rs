fn main() { std::process::exit(netsens::cli::main()) }
