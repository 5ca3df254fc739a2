const LIMIT: usize = 1_000;

fn squares() -> Vec<usize> {
    (1..=LIMIT).map(|n| n * n).filter(|n| n % 3 == 0).collect()
}
