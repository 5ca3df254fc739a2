use std::fs;
use std::io;

fn count_lines(path: &str) -> io::Result<usize> {
    let contents = fs::read_to_string(path)?;
    Ok(contents.lines().count())
}
