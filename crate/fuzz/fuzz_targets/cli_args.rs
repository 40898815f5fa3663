#![no_main]

use kwsparse_cli::Cli;
use libfuzzer_sys::fuzz_target;

// Only argument parsing: running commands would touch the file system.
fuzz_target!(|data: &[u8]| {
    let text = String::from_utf8_lossy(data);
    let args = std::iter::once("kwsparse").chain(text.split('\0'));
    let _ = <Cli as clap::Parser>::try_parse_from(args);
});
