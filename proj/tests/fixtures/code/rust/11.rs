fn main() {
    let raw = r#"a "quoted" path \n"#;
    let byte = b'x';
    let ch = '\'';
    println!("{} {} {}", raw, byte, ch);
}
