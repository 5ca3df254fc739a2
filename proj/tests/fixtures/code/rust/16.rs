fn parse_number(input: &str) -> Result<i64, String> {
    input
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad number {}: {}", input, e))
}
